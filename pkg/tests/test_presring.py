import pytest
from hypothesis import given, settings, strategies as st

from dorext.catalog import algebra_d, algebra_h
from dorext.errors import InvalidPresentation
from dorext.exactfield import QQ
from dorext.presring import check_local_confluence, free_ring, make_ring, ring_add, ring_basis, ring_mul


@pytest.fixture
def h_ring():
    return algebra_h().ring


@pytest.fixture
def d_ring():
    return algebra_d().ring


def test_single_rule_normal_form(h_ring):
    assert h_ring.element("x2*x1").render() == "x1*x2 + x1^2"


def test_empty_word_is_one(h_ring):
    assert h_ring.word(()).render() == "1"


def test_anticommuting_rule_applied_twice(d_ring):
    assert d_ring.element("x2*x2*x1").render() == "x1*x2^2"


def test_ring_mul_examples(h_ring, d_ring):
    x1 = h_ring.gen("x1")
    assert ring_mul(x1, x1).render() == "x1^2"
    assert ring_mul(d_ring.gen("x2"), d_ring.gen("x1")).render() == "-x1*x2"
    xy = h_ring.element("x1*x2")
    assert ring_add(xy, -xy).is_zero()


def test_confluence_examples(h_ring):
    assert check_local_confluence(h_ring, 3) == []
    comm = make_ring(QQ, ["x1", "x2"], {"x2*x1": "x1*x2"})
    assert check_local_confluence(comm, 3) == []


def test_duplicate_lhs_rejected():
    with pytest.raises(InvalidPresentation):
        make_ring(QQ, ["x1", "x2"], [("x2*x1", "x1*x2"), ("x2*x1", "0")])


def test_basis_words(h_ring):
    words = [h_ring.render_word(w) for w in ring_basis(h_ring, 2)]
    assert sorted(words) == sorted(["1", "x1", "x2", "x1^2", "x1*x2", "x2^2"])
    assert ring_basis(h_ring, 0) == [()]
    assert len(ring_basis(free_ring(), 2)) == 7


def test_unknown_generator_in_text(h_ring):
    with pytest.raises(Exception):
        h_ring.element("x3")


def _element(ring, draw_terms):
    total = ring.scalar(0)
    for coeff, word in draw_terms:
        total = total + ring.word(tuple(word)).scale(coeff)
    return total


terms = st.lists(
    st.tuples(st.integers(-3, 3), st.lists(st.integers(0, 1), max_size=3)), max_size=3
)


@settings(max_examples=60, deadline=None)
@given(terms, terms, terms)
def test_normal_form_product_associative(a, b, c):
    ring = algebra_h().ring
    x, y, z = (_element(ring, t) for t in (a, b, c))
    assert ring_mul(ring_mul(x, y), z) == ring_mul(x, ring_mul(y, z))
    assert ring_mul(x, ring_add(y, z)) == ring_add(ring_mul(x, y), ring_mul(x, z))
