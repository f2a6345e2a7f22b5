import pytest
from hypothesis import given, settings, strategies as st

from dorext.catalog import F5, algebra_h, get_fixture, target_t1
from dorext.dcv import (
    DcvMatrix,
    SearchOptions,
    SearchTemplate,
    SourceData,
    bounded_surjectivity,
    check_dcv,
    check_hom_multiplicative,
    check_semi_invariant,
    check_trimmed_dcv,
    decompose_semi_invariant,
    hom_to_iterated,
    induced_hom_apply,
    iso_degree_check,
    search_dcv,
)
from dorext.errors import PoolTooLarge


@pytest.fixture(scope="module")
def h():
    return algebra_h()


@pytest.fixture(scope="module")
def src(h):
    return SourceData.of(h)


def scaled(h, src, lam):
    return DcvMatrix(h.y1.scale(lam), h.y2.scale(lam), src)


def test_lambda_candidate_and_identity(h, src):
    assert check_dcv(scaled(h, src, 2)).passed
    assert check_dcv(DcvMatrix(h.y1, h.y2, src)).passed


def test_d_to_e_scope_switch():
    c = get_fixture("dcv-DtoE").candidate
    assert check_dcv(c, scope="scalars").passed
    assert not check_dcv(c, scope="basis").passed


def test_induced_hom_values(h, src):
    c = scaled(h, src, 2)
    assert induced_hom_apply(c, {(0, 0): 1}).render() == "1"
    assert induced_hom_apply(c, {(1, 1): 1}).render() == "4*y1*y2"
    e = get_fixture("dcv-DtoE").candidate
    q2q1 = induced_hom_apply(e, {(0, 1): 1}) * induced_hom_apply(e, {(1, 0): 1})
    assert q2q1 == e.algebra.element("x1*x2").scale(-1)


def test_multiplicativity(h, src):
    assert check_hom_multiplicative(DcvMatrix(h.y1, h.y2, src), sample_degree=3).passed
    assert check_hom_multiplicative(scaled(h, src, 2), sample_degree=2).passed
    bad = DcvMatrix(h.y1, h.y2, src.with_changes(tau1=1))
    rep = check_hom_multiplicative(bad, require_compatible=False)
    assert not rep.passed and rep.failures


def test_semi_invariants(h):
    assert check_semi_invariant(h, 1, 1).passed
    assert check_semi_invariant(h, 1, 2, 1).passed
    rep = check_semi_invariant(target_t1(), 1, 1)
    assert not rep.passed and "(0, 0)" in rep.failures[0]


def test_decomposition_agrees(h, src):
    assert decompose_semi_invariant(scaled(h, src, 2), h, 1, h.one.scale(2), h.zero, h.zero).details["q_commutes"]
    x1 = h.element("x1")
    rep = decompose_semi_invariant(DcvMatrix(h.y1 + x1, h.y2, src), h, 1, h.one, x1, h.zero)
    assert rep.details["sides_agree"]
    assert not rep.details["q_commutes"] and not rep.details["g_commutes"]


def test_iso_degree(h, src):
    assert iso_degree_check(scaled(h, src, 2)).passed
    q1 = h.monomial(2, 0).scale(3) + h.one
    assert not iso_degree_check(DcvMatrix(q1, h.one.scale(2), src)).passed
    assert not iso_degree_check(get_fixture("dcv-DtoE").candidate).passed


def test_bounded_surjectivity(h, src):
    rep = bounded_surjectivity(scaled(h, src, 2))
    assert rep.details == {"y1 reached at degree": 1, "y2 reached at degree": 1}
    sq = bounded_surjectivity(DcvMatrix(h.y1 * h.y1, h.y2 * h.y2, src))
    assert not sq.passed and sq.details["y1 reached at degree"] is None


def test_trimmed_biconditional(h, src):
    ok = check_trimmed_dcv(src, h, [2], [2])
    assert ok.details["left (dcv)"] and ok.details["right (conditions)"]
    mixed = check_trimmed_dcv(src, h, [2], [3])
    assert not mixed.details["left (dcv)"] and not mixed.details["right (conditions)"]
    assert mixed.details["sides_agree"]


def test_hom_to_iterated():
    c = get_fixture("dcv-DtoE").candidate
    rep = hom_to_iterated(c, scope="scalars")
    assert rep.passed and all(rep.details["conditions"].values())
    assert hom_to_iterated(get_fixture("table1-row-2").candidate).passed
    bad = DcvMatrix(c.q1, c.q2, c.source.with_changes(tau2=1))
    assert hom_to_iterated(bad, scope="scalars").failures == ["condition tau2' = 0 fails"]


def test_search_finds_scalar_multiples():
    h5 = algebra_h(field=F5)
    template = SearchTemplate(h5.sigma, h5.delta, h5.p12, h5.p11, h5.tau)
    opts = SearchOptions(q1_exponents=((1, 0),), q2_exponents=((0, 1),), word_degree=0)
    hits = search_dcv(template, h5, 1, list(F5.elements()), options=opts)
    assert [(c.q1.render(), c.q2.render()) for c in hits] == [(f"{k}*y1" if k > 1 else "y1", f"{k}*y2" if k > 1 else "y2") for k in range(1, 5)]
    for c in hits:
        lam = c.q1.coefficient(1, 0).constant()
        assert check_trimmed_dcv(SourceData.of(h5), h5, [lam], [lam]).details["right (conditions)"]
    assert search_dcv(template, h5, 1, [0]) == []


def test_search_threads_match_serial():
    h5 = algebra_h(field=F5)
    template = SearchTemplate(h5.sigma, h5.delta, h5.p12, h5.p11, h5.tau)
    serial = search_dcv(template, h5, 1, [0, 1, 4], options=SearchOptions(word_degree=0))
    threaded = search_dcv(template, h5, 1, [0, 1, 4], options=SearchOptions(word_degree=0, workers=3))
    assert [c.describe() for c in serial] == [c.describe() for c in threaded]


def test_search_cap():
    h5 = algebra_h(field=F5)
    template = SearchTemplate(h5.sigma, h5.delta, h5.p12, h5.p11, h5.tau)
    with pytest.raises(PoolTooLarge):
        search_dcv(template, h5, 2, list(F5.elements()), options=SearchOptions(cap=10))


@pytest.mark.parametrize("p,make,words", [(3, "t1", 2), (5, "t1", 2), (3, "identity", 3), (5, "identity", 3)])
def test_table1_shape_hit_counts(p, make, words):
    # closed form: (units * (1 + units * words) + units) * units
    from dorext.catalog import target_identity
    from dorext.exactfield import Field
    from dorext.ringmaps import SigmaMatrix

    target = (target_t1 if make == "t1" else target_identity)(Field.prime(p))
    R = target.ring
    z = [R.zero] * len(R.gens)
    s = SigmaMatrix(R, target.sigma.component_images(1, 1), z, z, target.sigma.component_images(2, 2))
    opts = SearchOptions(q1_exponents=((0, 0), (1, 0)), q2_exponents=((0, 0),), word_degree=1, unit_leading=True)
    hits = search_dcv(SearchTemplate(s), target, 1, list(target.field.elements()), 3, opts)
    u = p - 1
    assert len(hits) == (u * (1 + u * words) + u) * u


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6))
def test_scalar_multiples_are_dcv(lam):
    from dorext.exactfield import Field

    h7 = algebra_h(field=Field.prime(7))
    c = DcvMatrix(h7.y1.scale(lam), h7.y2.scale(lam), SourceData.of(h7))
    assert check_dcv(c, max_degree=2).passed
    assert check_trimmed_dcv(SourceData.of(h7), h7, [lam], [lam], 2).details["sides_agree"]
