"""Worked algebras and morphisms as executable fixtures, plus a replaying verifier."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable

from .dcv import (
    DcvMatrix,
    SourceData,
    check_dcv,
    check_trimmed_dcv,
    hom_to_iterated,
    iso_degree_check,
)
from .doubleore import (
    DEFAULT_DEGREE,
    DoubleOreAlgebra,
    build_extension,
    check_associativity,
    check_compatibility,
    to_iterated,
)
from .errors import PreconditionFailure, UnknownFixture, WellDefinednessFailure
from .exactfield import QQ, Field
from .presring import PresentedRing, RingElement, make_ring
from .report import Report
from .ringmaps import Composite, DeltaColumn, SigmaMatrix

F3 = Field.prime(3)
F5 = Field.prime(5)
F13 = Field.prime(13)

CHECK_ORDER = ("build", "compatibility", "associativity", "iterated", "dcv", "trimmed-dcv", "iso-degree", "hom-to-iterated")


@dataclass
class Fixture:
    name: str
    origin: str
    algebra: DoubleOreAlgebra | None
    expected: dict
    candidate: DcvMatrix | None = None
    scope: str = "basis"
    trimmed: tuple | None = None
    params: dict = field(default_factory=dict)
    notes: tuple = ()
    # expected failures are only reachable once the bound covers the witness word
    witness_degree: int = 0

    def describe(self) -> dict:
        out = {"name": self.name, "origin": self.origin, "params": dict(self.params)}
        out["algebra"] = self.algebra.describe() if self.algebra is not None else None
        if self.candidate is not None:
            out["candidate"] = self.candidate.describe()
            out["scope"] = self.scope
        out["expected"] = dict(self.expected)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


# -- map helpers ---------------------------------------------------------------


def _gens(ring: PresentedRing):
    return [ring.gen(i) for i in range(len(ring.gens))]


def images(ring: PresentedRing, fn: Callable) -> list:
    return [fn(g) for g in _gens(ring)]


def sigma_from(ring: PresentedRing, s11, s12, s21, s22) -> SigmaMatrix:
    """SigmaMatrix whose components agree with the callables on generators."""
    return SigmaMatrix(ring, *(images(ring, s) for s in (s11, s12, s21, s22)))


def zero_map(r):
    return r.ring.zero


def identity_map(r):
    return r


def power(comp, n: int):
    return Composite(*([comp] * n)) if n else identity_map


def inner_column(sigma: SigmaMatrix, q0, base=(zero_map, zero_map)) -> DeltaColumn:
    """``delta'_i(x) = base_i(x) + q0_i x - sum_j sigma'_ij(x) q0_j`` on generators."""
    ring = sigma.ring

    def comp(i):
        def fn(x):
            out = base[i](x) + q0[i] * x
            for j in range(2):
                out = out - sigma.component(i + 1, j + 1)(x) * q0[j]
            return out
        return fn

    return DeltaColumn(ring, sigma, images(ring, comp(0)), images(ring, comp(1)))


def _el(ring: PresentedRing, v) -> RingElement:
    if isinstance(v, RingElement):
        return v
    return ring.element(v) if isinstance(v, str) else ring.scalar(v)


# -- target algebras -------------------------------------------------------------

HEISENBERG_LIKE = {"x2*x1": "x1*x2 + x1^2"}
ANTI = {"x2*x1": "-x1*x2"}


def algebra_l(f=1, g=1, h=1, m=1, field: Field = QQ) -> DoubleOreAlgebra:
    if not field.coerce(f):
        raise PreconditionFailure("f must be nonzero")
    R = make_ring(field, ["x1", "x2"], HEISENBERG_LIKE)
    z = {"x1": "0", "x2": "0"}
    diag = {"x1": f"{f}*x1", "x2": f"{g}*x1 + {f}*x2"}
    low = {"x1": f"{h}*x1", "x2": f"{m}*x1 + {h}*x2"}
    return build_extension(R, SigmaMatrix(R, diag, z, low, diag), None, 1, 1)


def algebra_h(f=1, field: Field = QQ, tau0=0) -> DoubleOreAlgebra:
    if not field.coerce(f):
        raise PreconditionFailure("f must be nonzero")
    R = make_ring(field, ["x1", "x2"], HEISENBERG_LIKE)
    z = {"x1": "0", "x2": "0"}
    off = {"x1": "x1", "x2": f"{f}*x1 + x2"}
    return build_extension(R, SigmaMatrix(R, z, off, off, z), None, -1, 0, tau0)


def algebra_d(p=1, field: Field = QQ) -> DoubleOreAlgebra:
    R = make_ring(field, ["x1", "x2"], ANTI)
    x1, x2 = R.gen(0), R.gen(1)
    p = field.coerce(p)
    s = SigmaMatrix(
        R,
        [x1.scale(field.neg(p)), x2.scale(field.neg(field.mul(p, p)))],
        [R.zero, x1],
        [R.zero, x1],
        [x1.scale(p), x2],
    )
    return build_extension(R, s, None, p, 0)


def algebra_e(p=2, field: Field = F5) -> DoubleOreAlgebra:
    p = field.coerce(p)
    if field.mul(p, p) != field.coerce(-1):
        raise PreconditionFailure("p must satisfy p^2 = -1")
    R = make_ring(field, ["x1", "x2"], ANTI)
    z = {"x1": "0", "x2": "0"}
    s = SigmaMatrix(R, z, {"x1": "x1 + x2", "x2": "x1 - x2"}, {"x1": "x2 - x1", "x2": "x1 + x2"}, z)
    return build_extension(R, s, None, p, 0)


def n_matrix(f, g):
    return [[0, 0, -g, f], [0, 0, f, -g], [g, f, 0, 0], [f, g, 0, 0]]


ROLES = ("i", "j", "k", "l")
# Block row, block column, inner row, inner column; roles are the sigma
# indices i, j, the generator k and the coordinate l of sigma_ij(x_k).
N_READINGS = tuple("".join(p) for p in permutations(ROLES))
N_READING = "ijkl"
N_PASSING_READINGS = ("ijkl", "ijlk", "jikl", "jilk", "klij", "klji", "lkij", "lkji")


def n_sigma(ring: PresentedRing, f, g, reading: str = N_READING) -> SigmaMatrix:
    m = n_matrix(f, g)
    coef = {}
    for br in range(2):
        for bc in range(2):
            for ir in range(2):
                for ic in range(2):
                    pos = dict(zip(reading, (br, bc, ir, ic)))
                    coef[(pos["i"], pos["j"], pos["k"], pos["l"])] = m[2 * br + ir][2 * bc + ic]
    x = _gens(ring)
    comps = []
    for i in range(2):
        for j in range(2):
            comps.append([x[0].scale(coef[(i, j, k, 0)]) + x[1].scale(coef[(i, j, k, 1)]) for k in range(2)])
    return SigmaMatrix(ring, *comps)


def algebra_n(f=1, g=2, field: Field = QQ, reading: str = N_READING, literal: bool = False) -> DoubleOreAlgebra:
    fv, gv = field.coerce(f), field.coerce(g)
    if field.mul(fv, fv) == field.mul(gv, gv):
        raise PreconditionFailure("the N family needs f^2 != g^2")
    rel = {"x2*x2": "-x1*x2"} if literal else ANTI
    R = make_ring(field, ["x1", "x2"], rel)
    return build_extension(R, n_sigma(R, f, g, reading), None, -1, 0)


def target_t1(field: Field = F5) -> DoubleOreAlgebra:
    """``k[x1]`` with ``sigma = diag(x1 -> -x1, id)`` and ``delta1(x1) = 1``."""
    R = make_ring(field, ["x1"], {})
    s = SigmaMatrix(R, {"x1": "-x1"}, {"x1": "0"}, {"x1": "0"}, {"x1": "x1"})
    return build_extension(R, s, DeltaColumn(R, s, {"x1": "1"}, {"x1": "0"}), 1, 0)


def target_identity(field: Field = QQ) -> DoubleOreAlgebra:
    R = make_ring(field, ["x1", "x2"], {"x2*x1": "x1*x2"})
    return build_extension(R, None, None, 1, 0)


def target_row_equal(field: Field = QQ) -> DoubleOreAlgebra:
    """Generator-level ``sigma11 = sigma21``, ``sigma12 = sigma22``."""
    R = make_ring(field, ["x1"], {})
    s = SigmaMatrix(R, {"x1": "0"}, {"x1": "x1"}, {"x1": "0"}, {"x1": "x1"})
    return build_extension(R, s, None, 1, 0)


# -- prescribed source data for table rows ----------------------------------------


def table1_source(row: int, target: DoubleOreAlgebra, q1_coeffs: dict, c, sigma22=None) -> SourceData:
    """Source data the first table prescribes for ``q1 = sum a_k y1^k`` (``y1 y2`` for row 8), ``q2 = c``.

    ``q1_coeffs`` maps the exponent ``k`` (or ``"y1y2"``) to a ring element.
    Leading coefficients are scalars, so conjugation by them is trivial.
    """
    ring = target.ring
    S, D = target.sigma, target.delta
    c = _el(ring, c)
    a = {k: _el(ring, v) for k, v in q1_coeffs.items()}
    a0 = a.get(0, ring.zero)
    s22 = sigma22 if sigma22 is not None else S.component(2, 2)
    if row == 1:
        d = a0
        s11 = S.component(1, 1)
    elif row == 8:
        s11 = Composite(S.component(1, 1), S.component(2, 2))
    else:
        k = min(e for e, v in a.items() if e != 0 and v)
        s11 = power(S.component(1, 1), k)
    sigma = sigma_from(ring, s11, zero_map, zero_map, s22)

    if row == 8:
        base1 = zero_map
        base2 = Composite(D.component(1), D.component(2))
    else:
        terms = [(v, power(D.component(1), e)) for e, v in a.items() if e != 0 and v]

        def base1(x, terms=terms):
            out = x.ring.zero
            for coeff, m in terms:
                out = out + coeff * m(x)
            return out

        base2 = zero_map
    delta = inner_column(sigma, (a0, c), (base1, base2))
    if row == 1:
        f = ring.field
        p12 = f.div(f.mul(c.constant(), d.constant()), f.mul(d.constant(), c.constant()))
        return SourceData(sigma, delta, p12, 0, (0, 0, 0))
    return SourceData(sigma, delta, 0, 0, (0, c, 0))


def table2_source(row: int, target: DoubleOreAlgebra, a1, a0, b1, b0) -> SourceData:
    """Source data the second table prescribes for ``q2 = b1 y2 + b0``.

    Row 1 has ``q1 = a0``; rows 2 and 3 have ``q1 = a1 y1 + a0`` (row 2 with ``a0 = b0``).
    """
    ring = target.ring
    f = ring.field
    S, D = target.sigma, target.delta
    a0, b0 = _el(ring, a0), _el(ring, b0)
    a1, b1 = f.coerce(a1), f.coerce(b1)
    if row == 1:
        sigma = sigma_from(ring, S.component(1, 1), zero_map, zero_map, identity_map)
        d2 = D.component(2)
        delta = inner_column(sigma, (a0, b0), (zero_map, lambda x: d2(x).scale(b1)))
        return SourceData(sigma, delta, 1, 0, (d2(a0).scale(b1), 0, 0))
    sigma = sigma_from(ring, S.component(1, 1), S.component(1, 2), S.component(2, 1), S.component(2, 2))
    d1, d2 = D.component(1), D.component(2)
    delta = inner_column(sigma, (a0, b0), (lambda x: d1(x).scale(a1), lambda x: d2(x).scale(b1)))
    ratio = f.div(b1, a1)
    tau1 = b0 - a0.scale(ratio)
    tau0 = ring.zero if row == 2 else b0 * a0 - (a0 * a0).scale(ratio)
    return SourceData(sigma, delta, 0, ratio, (tau0, tau1, 0))


# -- fixture recipes ---------------------------------------------------------------

ALG_OK = {"build": True, "compatibility": True, "associativity": True}


def _alg_fixture(name, origin, alg, iterated, params, notes=()):
    exp = dict(ALG_OK)
    exp["iterated"] = iterated
    return Fixture(name, origin, alg, exp, params=params, notes=notes)


def _dcv_fixture(name, origin, target, q1, q2, source, expected, scope="basis", trimmed=None, params=None, notes=()):
    q1 = target.element(q1) if isinstance(q1, str) else q1
    q2 = target.element(q2) if isinstance(q2, str) else q2
    return Fixture(name, origin, target, expected, DcvMatrix(q1, q2, source), scope, trimmed, params or {}, tuple(notes))


def _h(f):
    return lambda: _alg_fixture("H" if f == 1 else f"H-f{f}", "trimmed family H with parameter f", algebra_h(f), False, {"f": f})


def _l_family(name, f, g, h, m):
    return lambda: _alg_fixture(name, "family with P = (1, 1) and lower-triangular sigma", algebra_l(f, g, h, m), True, {"f": f, "g": g, "h": h, "m": m})


def _n(name, f, g, literal=False):
    def make():
        notes = (f"sigma reading {N_READING}; readings passing the oracle: {', '.join(N_PASSING_READINGS)}",)
        params = {"f": f, "g": g, "literal": literal}
        origin = "trimmed family N with f^2 != g^2"
        if literal:
            notes += ("literal relation x2*x2 = -x1*x2; no reading of the matrix respects it",)
            try:
                alg = algebra_n(f, g, literal=True)
            except WellDefinednessFailure:
                return Fixture(name, origin, None, {"build": False}, params=params, notes=notes)
            return _alg_fixture(name, origin, alg, False, params, notes)
        return _alg_fixture(name, origin, algebra_n(f, g), False, params, notes)
    return make


def _d(name, p, field):
    return lambda: _alg_fixture(name, "algebra D with p in {-1, 1}", algebra_d(p, field), False, {"p": p, "field": field.name})


def _e(name, p, field):
    return lambda: _alg_fixture(name, "algebra E with p^2 = -1", algebra_e(p, field), False, {"p": p, "field": field.name})


def _h_lambda(lam, f=1):
    def make():
        alg = algebra_h(f)
        src = SourceData.of(alg)
        exp = {"dcv": True, "trimmed-dcv": True, "iso-degree": True, "hom-to-iterated": False}
        name = "dcv-HtoH-lambda" if lam == 2 else f"dcv-HtoH-lambda{lam}"
        return _dcv_fixture(
            name, "scalar Nakayama-type map on H", alg, alg.y1.scale(lam), alg.y2.scale(lam), src, exp,
            trimmed=([lam], [lam]), params={"lambda": lam, "f": f},
            notes=("the parameter h in the quoted lambda := -h^2 does not occur in H; lambda is left free",),
        )
    return make


def _nakayama_n(name, f, g):
    def make():
        alg = algebra_n(f, g)
        lam = g * g - f * f
        exp = {"dcv": True, "trimmed-dcv": True, "iso-degree": True, "hom-to-iterated": False}
        return _dcv_fixture(
            name, "Nakayama-type map on N", alg, alg.y1.scale(lam), alg.y2.scale(lam), SourceData.of(alg), exp,
            trimmed=([lam], [lam]), params={"f": f, "g": g, "coefficient": lam},
        )
    return make


def _d_to_e(name, p, field):
    def make():
        alg = algebra_e(p, field)
        R = alg.ring
        alpha = {"x1": "-x1", "x2": "x2"}
        z = {"x1": "0", "x2": "0"}
        sigma = SigmaMatrix(R, alpha, z, z, alpha)
        src = SourceData.make(R, sigma, None, -1, 0)
        exp = {"dcv": True, "iso-degree": False, "hom-to-iterated": True}
        return _dcv_fixture(
            name, "map D -> E with q = (x1, x2)", alg, "x1", "x2", src, exp, scope="scalars",
            params={"p": p, "field": field.name, "p12'": -1},
            notes=("certified for scalar r only; the commutation rule fails on r = x1",),
        )
    return make


def _table1(row, target_fn, q1_coeffs, c, field_note, shape_q1, holds=True):
    def make():
        alg = target_fn()
        src = table1_source(row, alg, q1_coeffs, c)
        R = alg.ring
        q1 = alg.zero
        for e, v in q1_coeffs.items():
            coeff = _el(R, v)
            q1 = q1 + (coeff * alg.monomial(1, 1) if e == "y1y2" else coeff * alg.monomial(e, 0))
        q2 = alg.lift(_el(R, c))
        exp = {"dcv": holds, "iso-degree": False, "hom-to-iterated": holds}
        notes = () if holds else (
            "sigma11*delta1 = -delta1*sigma11 holds on the target, yet y1^3*x1 = -x1*y1^3 + y1^2 "
            "leaves a y1^2 term outside the prescribed data",
        )
        fx = _dcv_fixture(
            f"table1-row-{row}" + ("" if holds else "-odd"), f"first table, q2 = c, {shape_q1}", alg, q1, q2, src, exp,
            params={"q1": q1.render(), "c": _el(R, c).render(), "target": field_note}, notes=notes,
        )
        fx.witness_degree = 0 if holds else 1
        return fx
    return make


def _table2(row, target_fn, a1, a0, b1, b0, expected_dcv, field_note, notes=()):
    def make():
        alg = target_fn()
        R = alg.ring
        src = table2_source(row, alg, a1, a0, b1, b0)
        q1 = alg.lift(_el(R, a0)) + (alg.y1.scale(a1) if row != 1 else alg.zero)
        q2 = alg.y2.scale(b1) + alg.lift(_el(R, b0))
        exp = {"dcv": expected_dcv, "iso-degree": row != 1}
        return _dcv_fixture(
            f"table2-row-{row}", "second table, q2 = b1*y2 + b0", alg, q1, q2, src, exp,
            params={"q1": q1.render(), "q2": q2.render(), "target": field_note}, notes=notes,
        )
    return make


def _degree2_const():
    def make():
        alg = target_t1(F3)
        src = table1_source(3, alg, {2: 2, 0: "x1"}, "x1")
        q1 = alg.monomial(2, 0).scale(2) + alg.lift(alg.ring.element("x1"))
        q2 = alg.lift(alg.ring.element("x1"))
        exp = {"dcv": True, "iso-degree": False, "hom-to-iterated": True}
        return _dcv_fixture(
            "example-degree2-const", "q1 = a2*y1^2 + a0, q2 = c", alg, q1, q2, src, exp,
            params={"a2": 2, "a0": "x1", "c": "x1", "target": "T1 over F3"},
        )
    return make


_ROW_EQUAL_NOTE = (
    "the listed conditions sigma11 = sigma21 and sigma12 = sigma22 contradict sigma(1) = identity; "
    "the target satisfies them on generators only and the prescribed data is not a certificate",
)

RECIPES: dict[str, Callable[[], Fixture]] = {
    "L": _l_family("L", 1, 1, 1, 1),
    "L-b": _l_family("L-b", 2, 0, 1, 3),
    "L-c": _l_family("L-c", 3, 2, 0, 0),
    "D": _d("D", 1, QQ),
    "D-minus": _d("D-minus", -1, QQ),
    "D-F5": _d("D-F5", -1, F5),
    "E": _e("E", 2, F5),
    "E-F13": _e("E-F13", 5, F13),
    "H": _h(1),
    "H-f2": _h(2),
    "H-f5": _h(5),
    "N": _n("N", 1, 2),
    "N-b": _n("N-b", 2, 1),
    "N-c": _n("N-c", 0, 3),
    "dcv-HtoH-lambda": _h_lambda(2),
    "dcv-HtoH-lambda-1": _h_lambda(-1),
    "dcv-HtoH-lambda7": _h_lambda(7),
    "nakayama-N": _nakayama_n("nakayama-N", 1, 2),
    "nakayama-N-b": _nakayama_n("nakayama-N-b", 2, 1),
    "nakayama-N-c": _nakayama_n("nakayama-N-c", 0, 3),
    "dcv-DtoE": _d_to_e("dcv-DtoE", 2, F5),
    "dcv-DtoE-F13": _d_to_e("dcv-DtoE-F13", 5, F13),
    "table1-row-1": _table1(1, lambda: target_t1(F5), {0: 3}, 2, "T1 over F5", "q1 = d"),
    "table1-row-2": _table1(2, lambda: target_t1(F5), {1: 3, 0: "x1"}, 2, "T1 over F5", "q1 = a1*y1 + a0"),
    "table1-row-3": _table1(3, lambda: target_t1(F5), {2: 4, 0: "x1"}, "x1", "T1 over F5", "q1 = a2*y1^2 + a0"),
    "table1-row-4": _table1(4, lambda: target_t1(F5), {4: 2, 0: "2*x1"}, 3, "T1 over F5", "q1 = an*y1^n + a0"),
    "table1-row-4-odd": _table1(4, lambda: target_t1(F5), {3: 2, 0: "2*x1"}, 3, "T1 over F5", "q1 = an*y1^n + a0, n odd", False),
    "table1-row-5": _table1(5, lambda: target_identity(QQ), {2: 2, 1: 3, 0: "x2"}, "x1", "identity target over Q", "q1 = f(y1)*y1 + a0"),
    "table1-row-6": _table1(6, lambda: target_identity(QQ), {3: 1, 2: -1, 1: 5, 0: "x1 + x2"}, 2, "identity target over Q", "q1 = f(y1)*y1 + b"),
    "table1-row-7": _table1(7, lambda: target_t1(F5), {4: 2, 2: 1, 0: "x1"}, 4, "T1 over F5", "q1 = sum a_i*y1^i"),
    "table1-row-8": _table1(8, lambda: algebra_l(2, 1, 0, 0), {"y1y2": 3, 0: "x2"}, "x1", "L with h = m = 0", "q1 = a1*y1*y2 + a0"),
    "table2-row-1": _table2(1, lambda: target_t1(F5), 0, "x1", 2, 3, True, "T1 over F5"),
    "table2-row-2": _table2(2, lambda: target_row_equal(QQ), 2, 3, 5, 3, False, "generator-level equal rows over Q", _ROW_EQUAL_NOTE),
    "table2-row-3": _table2(3, lambda: target_row_equal(QQ), 2, 1, 5, 3, False, "generator-level equal rows over Q", _ROW_EQUAL_NOTE),
    "example-degree2-const": _degree2_const(),
}

VARIANTS: dict[str, Callable[[], Fixture]] = {
    "N-literal": _n("N-literal", 1, 2, literal=True),
    "H-corrupted": lambda: Fixture(
        "H-corrupted", "H with tau0 = 1 under the expectations of H", algebra_h(1, tau0=1),
        dict(ALG_OK, iterated=False), params={"f": 1, "tau0": 1},
    ),
}


def fixture_names(include_variants: bool = False) -> list[str]:
    names = list(RECIPES)
    return names + list(VARIANTS) if include_variants else names


def get_fixture(name: str) -> Fixture:
    recipe = RECIPES.get(name) or VARIANTS.get(name)
    if recipe is None:
        raise UnknownFixture(f"unknown fixture {name!r}")
    return recipe()


# -- replay -------------------------------------------------------------------------


def run_fixture_checks(fx: Fixture, max_degree: int = DEFAULT_DEGREE) -> dict:
    """Observed verdict for each check the fixture states an expectation for."""
    observed = {}
    alg = fx.algebra
    c = fx.candidate
    for check in CHECK_ORDER:
        if check not in fx.expected:
            continue
        if check == "build":
            observed[check] = alg is not None
        elif check == "compatibility":
            observed[check] = check_compatibility(alg, max_degree).passed
        elif check == "associativity":
            observed[check] = check_associativity(alg, max_degree).passed
        elif check == "iterated":
            observed[check] = to_iterated(alg).found
        elif check == "dcv":
            observed[check] = check_dcv(c, alg, max_degree, fx.scope).passed
        elif check == "trimmed-dcv":
            a, b = fx.trimmed
            rep = check_trimmed_dcv(c.source, alg, a, b, max_degree)
            observed[check] = rep.passed and rep.details["left (dcv)"]
        elif check == "iso-degree":
            observed[check] = iso_degree_check(c).passed
        elif check == "hom-to-iterated":
            observed[check] = hom_to_iterated(c, alg, max_degree, fx.scope).passed
    return observed


def _verify_one(name_or_fixture, max_degree):
    try:
        fx = name_or_fixture if isinstance(name_or_fixture, Fixture) else get_fixture(name_or_fixture)
    except WellDefinednessFailure as exc:
        return str(name_or_fixture), {"build": False}, {"build": True}, [f"build failed: {exc}"]
    observed = run_fixture_checks(fx, max_degree)
    vacuous = max_degree < fx.witness_degree
    mismatches = [
        f"{k}: expected {'pass' if fx.expected[k] else 'fail'}, observed {'pass' if v else 'fail'}"
        for k, v in observed.items()
        if v != fx.expected[k] and not (vacuous and v)
    ]
    return fx.name, observed, fx.expected, mismatches


def verify_all(max_degree: int = DEFAULT_DEGREE, inject=(), workers: int = 1) -> Report:
    """Replay every fixture; the run passes when each observed verdict matches its expectation."""
    items = list(RECIPES) + list(inject)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda n: _verify_one(n, max_degree), items))
    else:
        results = [_verify_one(n, max_degree) for n in items]
    report = Report("catalog verify", True, max_degree)
    fixtures = {}
    mismatched = 0
    for name, observed, expected, mismatches in results:
        fixtures[name] = {
            "checks": {k: ("pass" if v else "fail") for k, v in observed.items()},
            "matches expectation": not mismatches,
        }
        if mismatches:
            mismatched += 1
            for m in mismatches:
                report.fail(f"{name}: {m}")
    report.details["fixtures checked"] = len(results)
    report.details["fixtures mismatched"] = mismatched
    report.details["fixtures"] = fixtures
    return report
