import pytest
from hypothesis import given, settings, strategies as st

from dorext.catalog import algebra_h
from dorext.exactfield import QQ
from dorext.presring import make_ring, ring_basis
from dorext.ringmaps import (
    Composite,
    DeltaColumn,
    Endomorphism,
    SigmaMatrix,
    check_well_defined,
    inner_derivation,
    mat_mul,
    mat_vec,
)


def render(m):
    if isinstance(m[0], tuple):
        return [[e.render() for e in row] for row in m]
    return [e.render() for e in m]


@pytest.fixture(scope="module")
def h():
    return algebra_h()


def test_sigma_on_generator(h):
    x1 = h.ring.gen("x1")
    assert render(h.sigma(x1)) == [["0", "x1"], ["x1", "0"]]


def test_sigma_unital(h):
    assert render(h.sigma(h.ring.one)) == [["1", "0"], ["0", "1"]]


def test_sigma_on_square(h):
    x1 = h.ring.gen("x1")
    assert render(h.sigma(x1 * x1)) == [["x1^2", "0"], ["0", "x1^2"]]


def test_trimmed_delta_vanishes(h):
    for w in ring_basis(h.ring, 3):
        assert all(c.is_zero() for c in h.delta(h.ring.word(w)))
    assert all(c.is_zero() for c in h.delta(h.ring.one))


def test_delta_leibniz_by_hand():
    R = make_ring(QQ, ["x1", "x2"], {"x2*x1": "x1*x2"})
    s = SigmaMatrix.identity(R)
    d = DeltaColumn(R, s, {"x1": "1", "x2": "0"}, {"x1": "0", "x2": "0"})
    x1 = R.gen("x1")
    assert render(d(x1 * x1)) == ["2*x1", "0"]


def test_well_defined_examples(h):
    assert check_well_defined(h.sigma).passed
    assert check_well_defined(SigmaMatrix.identity(h.ring)).passed
    bad = SigmaMatrix(h.ring, {"x1": "x2", "x2": "x2"}, {"x1": "0", "x2": "0"}, {"x1": "0", "x2": "0"}, {"x1": "x1", "x2": "x2"})
    rep = check_well_defined(bad)
    assert not rep.passed and rep.failures


def test_inner_derivation_examples(h):
    R = h.ring
    zero = inner_derivation(R.zero)
    central = inner_derivation(R.scalar(3))
    for w in ring_basis(R, 3):
        assert zero.apply_word(w).is_zero()
        assert central.apply_word(w).is_zero()


def test_composite_applies_rightmost_first():
    R = make_ring(QQ, ["x1", "x2"], {"x2*x1": "x1*x2"})
    swap = Endomorphism(R, ["x2", "x1"])
    double = Endomorphism(R, ["2*x1", "x2"])
    x1 = R.gen("x1")
    assert Composite(swap, double)(x1).render() == "2*x2"
    assert Composite(double, swap)(x1).render() == "x2"


coeffs = st.lists(st.tuples(st.integers(-2, 2), st.lists(st.integers(0, 1), max_size=3)), max_size=3)


def _element(ring, terms):
    total = ring.zero
    for c, w in terms:
        total = total + ring.word(tuple(w)).scale(c)
    return total


@settings(max_examples=50, deadline=None)
@given(coeffs, coeffs)
def test_sigma_is_multiplicative(a, b):
    h = algebra_h(f=2)
    x, y = _element(h.ring, a), _element(h.ring, b)
    assert h.sigma(x * y) == mat_mul(h.sigma(x), h.sigma(y))


@settings(max_examples=50, deadline=None)
@given(coeffs, coeffs)
def test_delta_twisted_leibniz(a, b):
    R = make_ring(QQ, ["x1", "x2"], {"x2*x1": "-x1*x2"})
    s = SigmaMatrix(R, {"x1": "-x1", "x2": "x2"}, {"x1": "0", "x2": "0"}, {"x1": "0", "x2": "0"}, {"x1": "x1", "x2": "-x2"})
    d = DeltaColumn(R, s, {"x1": "0", "x2": "x1"}, {"x1": "0", "x2": "0"})
    assert check_well_defined(d).passed
    x, y = _element(R, a), _element(R, b)
    lhs = d(x * y)
    sx = mat_vec(s(x), d(y))
    dx = d(x)
    assert lhs == (sx[0] + dx[0] * y, sx[1] + dx[1] * y)
