"""Change-of-variable matrices between double extensions of one ring.

A candidate ``(q1, q2)`` in a target algebra ``B`` together with source data
``(sigma', delta', P', tau')`` is certified when

* ``q2 q1 = p12' q1 q2 + p11' q1^2 + tau1' q1 + tau2' q2 + tau0'`` holds in ``B``;
* ``q_i r = sigma'_i1(r) q1 + sigma'_i2(r) q2 + delta'_i(r)`` holds for every
  ring element ``r`` in the chosen scope.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import product
from typing import Sequence

from .doubleore import (
    DEFAULT_DEGREE,
    DoubleOreAlgebra,
    ExtElement,
    build_extension,
    check_compatibility,
)
from .errors import (
    DecompositionMismatch,
    PoolTooLarge,
    PreconditionFailure,
    RingMismatch,
    SourceNotBuildable,
    WellDefinednessFailure,
)
from .exactfield import solve_raw
from .presring import RingElement, ring_basis
from .report import Report
from .ringmaps import DeltaColumn, SigmaMatrix, check_well_defined

SCOPES = ("scalars", "generators", "basis")
DEFAULT_CAP = 10**7


@dataclass
class SourceData:
    """Defining data of the source extension; nothing here is validated."""

    sigma: SigmaMatrix
    delta: DeltaColumn
    p12: object
    p11: object
    tau: tuple

    def __post_init__(self):
        ring = self.sigma.ring
        f = ring.field
        self.p12 = f.coerce(self.p12)
        self.p11 = f.coerce(self.p11)
        self.tau = tuple(
            t if isinstance(t, RingElement) else (ring.element(t) if isinstance(t, str) else ring.scalar(t))
            for t in self.tau
        )
        if self.delta.sigma is not self.sigma:
            self.delta = DeltaColumn(ring, self.sigma, self.delta.component_images(1), self.delta.component_images(2))

    @property
    def ring(self):
        return self.sigma.ring

    @classmethod
    def make(cls, ring, sigma=None, delta=None, p12=1, p11=0, tau0=0, tau1=0, tau2=0) -> "SourceData":
        sigma = sigma if sigma is not None else SigmaMatrix.identity(ring)
        delta = delta if delta is not None else DeltaColumn.zero(sigma)
        return cls(sigma, delta, p12, p11, (tau0, tau1, tau2))

    @classmethod
    def of(cls, alg: DoubleOreAlgebra) -> "SourceData":
        return cls(alg.sigma, alg.delta, alg.p12, alg.p11, alg.tau)

    def with_changes(self, **changes) -> "SourceData":
        tau = list(self.tau)
        for k in range(3):
            key = f"tau{k}"
            if key in changes:
                tau[k] = changes.pop(key)
        return replace(self, tau=tuple(tau), **changes)

    def build(self, names=("y1", "y2"), check_degree: int = DEFAULT_DEGREE) -> DoubleOreAlgebra:
        return build_extension(self.ring, self.sigma, self.delta, self.p12, self.p11, *self.tau, names=names, check_degree=check_degree)

    def describe(self) -> dict:
        ring = self.ring
        f = ring.field
        gens = ring.gens
        out = {}
        for i in (1, 2):
            for j in (1, 2):
                out[f"sigma{i}{j}"] = {g: v.render() for g, v in zip(gens, self.sigma.component_images(i, j))}
        for i in (1, 2):
            out[f"delta{i}"] = {g: v.render() for g, v in zip(gens, self.delta.component_images(i))}
        out["p12"] = f.render(self.p12)
        out["p11"] = f.render(self.p11)
        out["tau"] = [t.render() for t in self.tau]
        return out


@dataclass
class DcvMatrix:
    q1: ExtElement
    q2: ExtElement
    source: SourceData

    @property
    def algebra(self) -> DoubleOreAlgebra:
        return self.q1.algebra

    def describe(self) -> dict:
        return {"q1": self.q1.render(), "q2": self.q2.render(), "source": self.source.describe()}


def _scope_words(ring, scope: str, max_degree: int):
    if scope == "scalars":
        return [()]
    if scope == "generators":
        return [()] + [(i,) for i in range(len(ring.gens))]
    if scope == "basis":
        return ring_basis(ring, max_degree)
    raise ValueError(f"unknown scope {scope!r}; expected one of {', '.join(SCOPES)}")


def _check_shared_ring(c: DcvMatrix, target: DoubleOreAlgebra | None) -> DoubleOreAlgebra:
    alg = c.q1.algebra
    if c.q2.algebra is not alg or (target is not None and target is not alg):
        raise RingMismatch("q1 and q2 must live in the target algebra")
    if c.source.ring is not alg.ring:
        raise RingMismatch("source data and target algebra must share the coefficient ring")
    return alg


def relation_residual(q1: ExtElement, q2: ExtElement, src: SourceData) -> ExtElement:
    alg = q1.algebra
    t0, t1, t2 = src.tau
    rhs = (q1 * q2).scale(src.p12) + (q1 * q1).scale(src.p11) + t1 * q1 + t2 * q2 + alg.lift(t0)
    return q2 * q1 - rhs


def commutation_residuals(q1: ExtElement, q2: ExtElement, sigma: SigmaMatrix, delta: DeltaColumn, w) -> tuple:
    """``q_i r - sigma'_i1(r) q1 - sigma'_i2(r) q2 - delta'_i(r)`` for ``r`` the word ``w``."""
    alg = q1.algebra
    r = alg.lift(alg.ring.word(w))
    s = sigma.apply_word(w)
    d = delta.apply_word(w)
    out = []
    for i, q in enumerate((q1, q2)):
        out.append(q * r - s[i][0] * q1 - s[i][1] * q2 - alg.lift(d[i]))
    return tuple(out)


def check_dcv(c: DcvMatrix, target: DoubleOreAlgebra | None = None, max_degree: int = DEFAULT_DEGREE, scope: str = "basis") -> Report:
    """Certificate for the two defining conditions of a change-of-variable matrix."""
    alg = _check_shared_ring(c, target)
    words = _scope_words(alg.ring, scope, max_degree)
    report = Report("dcv", True, max_degree)
    report.details["scope"] = scope
    res = relation_residual(c.q1, c.q2, c.source)
    report.details["relation"] = "pass" if not res else "fail"
    if res:
        report.fail(f"q2*q1 relation leaves {res.render()}")
    per_word = {}
    for w in words:
        r1, r2 = commutation_residuals(c.q1, c.q2, c.source.sigma, c.source.delta, w)
        name = alg.ring.render_word(w)
        if r1 or r2:
            per_word[name] = "fail"
            bad = r1 if r1 else r2
            report.fail(f"commutation with r = {name} (row {1 if r1 else 2}) leaves {bad.render()}")
        else:
            per_word[name] = "pass"
    report.details["commutation"] = per_word
    return report


def induced_hom_apply(c: DcvMatrix, source_elt, target: DoubleOreAlgebra | None = None) -> ExtElement:
    """``sum a_nm y1'^n y2'^m -> sum a_nm q1^n q2^m``.

    ``source_elt`` is an element of a built source algebra or a mapping
    ``{(n, m): coefficient}``.
    """
    alg = _check_shared_ring(c, target)
    terms = source_elt.terms if isinstance(source_elt, ExtElement) else source_elt
    out = alg.zero
    for (n, m), a in terms.items():
        if isinstance(a, RingElement) and a.ring is not alg.ring:
            raise RingMismatch("coefficient belongs to a different ring")
        coeff = a if isinstance(a, RingElement) else alg.ring.scalar(a)
        out = out + coeff * (c.q1 ** n * c.q2 ** m)
    return out


def _monomials(alg: DoubleOreAlgebra, degree: int):
    ring = alg.ring
    out = []
    for w in ring_basis(ring, degree):
        for n in range(degree - len(w) + 1):
            for i in range(n, -1, -1):
                out.append(alg.monomial(i, n - i, ring.word(w)))
    return out


def check_hom_multiplicative(c: DcvMatrix, target=None, sample_degree: int = 2, require_compatible: bool = True) -> Report:
    """``phi(uv) = phi(u) phi(v)`` on source monomials of degree at most ``sample_degree``."""
    _check_shared_ring(c, target)
    try:
        src = c.source.build(names=("z1", "z2"))
    except WellDefinednessFailure as exc:
        raise SourceNotBuildable(f"source data is not well defined: {exc}", exc.report) from exc
    if require_compatible:
        comp = check_compatibility(src, max(sample_degree, 1))
        if not comp.passed:
            raise SourceNotBuildable("source data fails the compatibility relations", comp)
    report = Report("hom-multiplicative", True, sample_degree)
    monos = _monomials(src, sample_degree)
    pairs = 0
    for u in monos:
        pu = induced_hom_apply(c, u)
        for v in monos:
            pairs += 1
            left = induced_hom_apply(c, u * v)
            right = pu * induced_hom_apply(c, v)
            if left != right:
                report.fail(f"phi({u.render()} * {v.render()}): {left.render()} != {right.render()}")
                if len(report.failures) >= 3:
                    report.details["pairs_checked"] = pairs
                    return report
    report.details["pairs_checked"] = pairs
    return report


# -- semi-invariants -----------------------------------------------------------


def check_semi_invariant(alg: DoubleOreAlgebra, i: int, n: int, max_degree: int = DEFAULT_DEGREE) -> Report:
    """``y_i^n r`` only involves ``y1^n`` and ``y2^n`` for basis words ``r``."""
    if n < 1:
        raise PreconditionFailure("semi-invariance needs n >= 1")
    report = Report(f"semi-invariant y{i}^{n}", True, max_degree)
    mono = alg.monomial(n, 0) if i == 1 else alg.monomial(0, n)
    allowed = {(n, 0), (0, n)}
    ring = alg.ring
    words = ring_basis(ring, max_degree)
    for w in words:
        prod = mono * alg.lift(ring.word(w))
        extra = sorted(set(prod.terms) - allowed)
        if extra:
            report.fail(f"r = {ring.render_word(w)}: exponents {extra} appear in {prod.render()}")
    report.details["words_checked"] = len(words)
    return report


def semi_invariant_maps(alg: DoubleOreAlgebra, n: int, w) -> tuple:
    """``S^n(r)``: coefficients with ``y_i^n r = S_i1(r) y1^n + S_i2(r) y2^n``."""
    r = alg.lift(alg.ring.word(w))
    rows = []
    for mono in (alg.monomial(n, 0), alg.monomial(0, n)):
        p = mono * r
        rows.append((p.coefficient(n, 0), p.coefficient(0, n)))
    return tuple(rows)


def decompose_semi_invariant(
    c: DcvMatrix, target, n: int, f: ExtElement, g1: ExtElement, g2: ExtElement, max_degree: int = DEFAULT_DEGREE
) -> Report:
    """Evaluate both sides of the semi-invariant decomposition criterion.

    Left: ``(q1, q2)`` satisfies the commutation rule. Right: ``(g1, g2)`` does
    and ``f S_pl(r) = sigma'_pl(r) f`` for all ``p, l``.
    """
    alg = _check_shared_ring(c, target)
    if max(g1.degree(), g2.degree()) > n:
        raise DecompositionMismatch(f"g1, g2 must have degree at most {n}")
    if c.q1 != f * alg.monomial(n, 0) + g1 or c.q2 != f * alg.monomial(0, n) + g2:
        raise DecompositionMismatch("f*y_i^n + g_i does not reproduce q_i")
    for i in (1, 2):
        if not check_semi_invariant(alg, i, n, max_degree).passed:
            raise PreconditionFailure(f"y{i}^{n} is not right double semi-invariant up to degree {max_degree}")
    src = c.source
    words = ring_basis(alg.ring, max_degree)
    left = all(not r for w in words for r in commutation_residuals(c.q1, c.q2, src.sigma, src.delta, w))
    g_ok = all(not r for w in words for r in commutation_residuals(g1, g2, src.sigma, src.delta, w))
    f_ok = True
    for w in words:
        s_n = semi_invariant_maps(alg, n, w)
        s_p = src.sigma.apply_word(w)
        for p in range(2):
            for l in range(2):
                if f * alg.lift(s_n[p][l]) != alg.lift(s_p[p][l]) * f:
                    f_ok = False
    right = g_ok and f_ok
    report = Report("semi-invariant decomposition", left == right, max_degree)
    report.details["q_commutes"] = left
    report.details["g_commutes"] = g_ok
    report.details["f_intertwines"] = f_ok
    report.details["sides_agree"] = left == right
    if left != right:
        report.fail(f"left side {'passes' if left else 'fails'} but right side {'passes' if right else 'fails'}")
    return report


# -- degree conditions ------------------------------------------------------------


def iso_degree_check(c: DcvMatrix) -> Report:
    """Necessary degree condition for the induced map to be an isomorphism."""
    report = Report("iso-degree", True)
    items = {
        "deg q1 = 1": c.q1.degree() == 1,
        "deg q2 = 1": c.q2.degree() == 1,
        "deg_y1 q1 = 1": c.q1.degree_in(1) == 1,
        "deg_y2 q2 = 1": c.q2.degree_in(2) == 1,
    }
    report.details.update(items)
    for k, ok in items.items():
        if not ok:
            report.fail(f"{k} does not hold")
    return report


def bounded_surjectivity(c: DcvMatrix, target=None, max_degree: int = DEFAULT_DEGREE) -> Report:
    """Look for ``y1`` and ``y2`` in the span of ``w q1^n q2^m``."""
    alg = _check_shared_ring(c, target)
    ring = alg.ring
    field = alg.field
    words = ring_basis(ring, max_degree)
    report = Report("bounded-surjectivity", True, max_degree)
    found = {"y1": None, "y2": None}
    targets = {"y1": alg.y1, "y2": alg.y2}
    for d in range(1, max_degree + 1):
        gens = []
        for n in range(d + 1):
            for m in range(d + 1 - n):
                img = c.q1 ** n * c.q2 ** m
                for w in words:
                    gens.append(ring.word(w) * img)
        coords = {}
        for e in gens + list(targets.values()):
            for (i, j), r in e.terms.items():
                for w in r.terms:
                    coords.setdefault((i, j, w), len(coords))
        matrix = [[field.zero] * len(gens) for _ in coords]
        for k, e in enumerate(gens):
            for (i, j), r in e.terms.items():
                for w, v in r.terms.items():
                    matrix[coords[(i, j, w)]][k] = v
        for name, t in targets.items():
            if found[name] is not None:
                continue
            rhs = [field.zero] * len(coords)
            for (i, j), r in t.terms.items():
                for w, v in r.terms.items():
                    rhs[coords[(i, j, w)]] = v
            x, _ = solve_raw(field, matrix, rhs)
            if x is not None:
                found[name] = d
        if all(v is not None for v in found.values()):
            break
    for name, d in found.items():
        report.details[f"{name} reached at degree"] = d
        if d is None:
            report.fail(f"{name} is not in the span up to degree {max_degree}")
    return report


# -- trimmed characterization ---------------------------------------------------


def _power_map(comp, i: int, r: RingElement) -> RingElement:
    for _ in range(i):
        r = comp(r)
    return r


def check_trimmed_dcv(source: SourceData, target: DoubleOreAlgebra, a: Sequence, b: Sequence, max_degree: int = DEFAULT_DEGREE) -> Report:
    """Both sides of the trimmed criterion for ``q1 = sum a_i y1^i``, ``q2 = sum b_j y2^j``.

    ``a[0]`` is the coefficient of ``y1``. The report passes when the two sides
    agree; each side's verdict is listed in the details.
    """
    f = target.field
    a = [f.coerce(x) for x in a]
    b = [f.coerce(x) for x in b]
    q1 = sum((target.monomial(i + 1, 0).scale(x) for i, x in enumerate(a)), target.zero)
    q2 = sum((target.monomial(0, j + 1).scale(x) for j, x in enumerate(b)), target.zero)
    lhs = q2 * q1
    rhs = (q1 * q2).scale(source.p12) + (q1 * q1).scale(source.p11)
    if lhs != rhs:
        raise PreconditionFailure("q2*q1 = p12' q1*q2 + p11' q1^2 does not hold")
    cand = DcvMatrix(q1, q2, source)
    left = check_dcv(cand, target, max_degree).passed

    ring = target.ring
    words = ring_basis(ring, max_degree)
    S, S2 = target.sigma, source.sigma
    n = max((i + 1 for i, x in enumerate(a) if x), default=0)
    m = max((j + 1 for j, x in enumerate(b) if x), default=0)
    same_degree = n == m
    same_coeffs = a[:n] + [f.zero] * (max(n, m) - n) == b[:m] + [f.zero] * (max(n, m) - m)
    mixed_ok = True
    for (l, k) in ((1, 2), (2, 1)):
        for w in words:
            r = ring.word(w)
            if S.component(l, l)(S.component(l, k)(r)) or S.component(l, k)(S.component(l, l)(r)):
                mixed_ok = False
    intertwine_ok = True
    for idx, x in enumerate(a):
        if not x:
            continue
        i = idx + 1
        for p in (1, 2):
            for q in (1, 2):
                for w in words:
                    r = ring.word(w)
                    if _power_map(S.component(p, q), i, r).scale(x) != S2.component(p, q)(r).scale(x):
                        intertwine_ok = False
    right = same_degree and same_coeffs and mixed_ok and intertwine_ok
    report = Report("trimmed-dcv", left == right, max_degree)
    report.details["left (dcv)"] = left
    report.details["n = m"] = same_degree
    report.details["a_i = b_i"] = same_coeffs
    report.details["mixed compositions vanish"] = mixed_ok
    report.details["a_i sigma^i = sigma' a_i"] = intertwine_ok
    report.details["right (conditions)"] = right
    report.details["sides_agree"] = left == right
    if left != right:
        report.fail("the two sides of the trimmed criterion disagree")
    return report


# -- translation to iterated extensions ----------------------------------------


def hom_to_iterated(c: DcvMatrix, target=None, max_degree: int = DEFAULT_DEGREE, scope: str = "basis") -> Report:
    """Conditions under which the map is a homomorphism of iterated extensions.

    ``sigma'_2`` and ``delta'_2`` act on ``q1`` directly when ``q1`` lies in
    the ring; otherwise they act through ``sigma'_2(q1) = p12' q1 + tau2'`` and
    ``delta'_2(q1) = p11' q1^2 + tau1' q1 + tau0'``.
    """
    alg = _check_shared_ring(c, target)
    src = c.source
    ring = alg.ring
    q1, q2 = c.q1, c.q2
    s12 = any(src.sigma.component_images(1, 2))
    s21 = any(src.sigma.component_images(2, 1))
    t0, t1, t2 = src.tau
    if q1.is_ring_element():
        r1 = q1.coefficient(0, 0)
        s2q1 = alg.lift(src.sigma.component(2, 2)(r1))
        d2q1 = alg.lift(src.delta.component(2)(r1))
    else:
        s2q1 = q1.scale(src.p12) + alg.lift(t2)
        d2q1 = (q1 * q1).scale(src.p11) + t1 * q1 + alg.lift(t0)
    conds = {
        "p12' q1 = sigma2'(q1)": q1.scale(src.p12) == s2q1,
        "p11' = 0": not src.p11,
        "tau1' q1 = delta2'(q1)": t1 * q1 == d2q1,
        "tau2' = 0": not t2,
        "tau0' = 0": not t0,
        "sigma12' = 0": not s12,
        "sigma21' = 0": not s21,
    }
    report = Report("hom-to-iterated", True, max_degree)
    report.details["scope"] = scope
    report.details["conditions"] = conds
    for k, ok in conds.items():
        if not ok:
            report.fail(f"condition {k} fails")
    words = _scope_words(ring, scope, max_degree)

    def cv_ok(q, i, extra):
        for w in words:
            r = ring.word(w)
            want = src.sigma.component(i, i)(r) * q + alg.lift(src.delta.component(i)(r)) + extra(r)
            if q * alg.lift(r) != want:
                return False
        return True

    def no_extra(r):
        return alg.zero

    relation_ok = q2 * q1 == s2q1 * q2 + d2q1
    report.details["cv relation q2*q1 = sigma2'(q1) q2 + delta2'(q1)"] = relation_ok
    if report.passed:
        first = cv_ok(q1, 1, no_extra)
        second = cv_ok(q2, 2, no_extra)
        report.details["q1 cv-polynomial for (sigma1', delta1')"] = first
        report.details["q2 cv-polynomial for (sigma2', delta2')"] = second
        if not (first and second and relation_ok):
            report.fail("the emitted cv data does not re-verify")
        else:
            report.details["cv data"] = {
                "q1": q1.render(),
                "q2": q2.render(),
                "sigma2'(q1)": s2q1.render(),
                "delta2'(q1)": d2q1.render(),
            }
    relaxed_conds = {k: v for k, v in conds.items() if k != "sigma21' = 0"}
    relaxed = all(relaxed_conds.values()) and cv_ok(q1, 1, no_extra) and cv_ok(
        q2, 2, lambda r: src.sigma.component(2, 1)(r) * q1
    )
    report.details["lower-triangular variant"] = relaxed
    return report


# -- brute-force search ----------------------------------------------------------


@dataclass
class SearchTemplate:
    """Source data with unknowns.

    ``delta=None`` derives delta' on generators from each candidate. A ``None``
    parameter or tail entry is solved from the ``q2 q1`` relation, with tails
    taken in the span of ring words of degree at most ``tau_degree``.
    """

    sigma: SigmaMatrix
    delta: DeltaColumn | None = None
    p12: object = None
    p11: object = None
    tau: tuple = (None, None, None)
    tau_degree: int = 2


@dataclass
class SearchOptions:
    q1_exponents: tuple | None = None
    q2_exponents: tuple | None = None
    word_degree: int = 1
    nondegenerate: bool = True
    unit_leading: bool = False
    cap: int = DEFAULT_CAP
    workers: int = 1
    scope: str = "basis"


def _exponents(degree_bound: int, allowed):
    pairs = [(i, n - i) for n in range(degree_bound + 1) for i in range(n, -1, -1)]
    pairs.sort(key=lambda p: (p[0] + p[1], p[0], p[1]))
    if allowed is not None:
        allowed = {tuple(p) for p in allowed}
        pairs = [p for p in pairs if p in allowed]
    return pairs


def search_space(target: DoubleOreAlgebra, degree_bound: int, coeff_pool, options: SearchOptions):
    """Slots and per-slot choices in canonical order (0 first)."""
    if degree_bound > 2:
        raise ValueError("degree_bound must be at most 2")
    f = target.field
    ring = target.ring
    pool = []
    for s in coeff_pool:
        v = f.coerce(s)
        if v and v not in pool:
            pool.append(v)
    words = ring_basis(ring, options.word_degree)
    choices = [None] + [(s, w) for s in pool for w in words]
    slots = [("q1", p) for p in _exponents(degree_bound, options.q1_exponents)]
    slots += [("q2", p) for p in _exponents(degree_bound, options.q2_exponents)]
    return slots, choices


def _candidate(target, slots, combo):
    ring = target.ring
    terms = {"q1": {}, "q2": {}}
    for (which, pair), ch in zip(slots, combo):
        if ch is not None:
            s, w = ch
            terms[which][pair] = ring.word(w).scale(s)
    return target.make(terms["q1"]), target.make(terms["q2"])


def _leading_is_unit(q: ExtElement) -> bool:
    top = q.degree()
    lead = [r for (i, j), r in q.terms.items() if i + j == top]
    return len(lead) == 1 and lead[0].is_scalar()


def derive_delta(q1, q2, sigma: SigmaMatrix):
    """delta' on generators from the y-free remainder of the commutation rule, or None."""
    alg = q1.algebra
    ring = alg.ring
    imgs = ([], [])
    for g in range(len(ring.gens)):
        r = alg.lift(ring.gen(g))
        s = sigma.apply_word((g,))
        for i, q in enumerate((q1, q2)):
            rem = q * r - s[i][0] * q1 - s[i][1] * q2
            if not rem.is_ring_element():
                return None
            imgs[i].append(rem.coefficient(0, 0))
    return DeltaColumn(ring, sigma, imgs[0], imgs[1])


def solve_source_parameters(q1, q2, template: SearchTemplate):
    """Solve the ``q2 q1`` relation for the unknown parameters and tails."""
    alg = q1.algebra
    ring = alg.ring
    f = alg.field
    words = ring_basis(ring, template.tau_degree)
    columns = []  # (tag, ExtElement)
    rhs = q2 * q1
    known_tau = list(template.tau)
    for k, t in enumerate(known_tau):
        mult = {0: alg.one, 1: q1, 2: q2}[k]
        if t is None:
            for w in words:
                columns.append(((f"tau{k}", w), ring.word(w) * mult))
        else:
            rhs = rhs - t * mult
    for name, elt in (("p12", q1 * q2), ("p11", q1 * q1)):
        value = getattr(template, name)
        if value is None:
            columns.append(((name, None), elt))
        else:
            rhs = rhs - elt.scale(value)
    coords: dict = {}
    for _, e in columns + [(None, rhs)]:
        for (i, j), r in e.terms.items():
            for w in r.terms:
                coords.setdefault((i, j, w), len(coords))
    if not columns:
        return (template.p12, template.p11, tuple(known_tau)) if not rhs else None
    matrix = [[f.zero] * len(columns) for _ in coords]
    for k, (_, e) in enumerate(columns):
        for (i, j), r in e.terms.items():
            for w, v in r.terms.items():
                matrix[coords[(i, j, w)]][k] = v
    b = [f.zero] * len(coords)
    for (i, j), r in rhs.terms.items():
        for w, v in r.terms.items():
            b[coords[(i, j, w)]] = v
    if not coords:
        x = [f.zero] * len(columns)
    else:
        x, _ = solve_raw(f, matrix, b)
        if x is None:
            return None
    p12, p11 = template.p12, template.p11
    taus = [t if t is not None else ring.zero for t in known_tau]
    for ((tag, w), _), v in zip(columns, x):
        if tag == "p12":
            p12 = v
        elif tag == "p11":
            p11 = v
        elif v:
            k = int(tag[3])
            taus[k] = taus[k] + ring.word(w).scale(v)
    return p12, p11, tuple(taus)


def evaluate_candidate(target, q1, q2, template: SearchTemplate, max_degree: int, scope: str = "basis"):
    """Return the certified DcvMatrix for one candidate, or None."""
    sigma = template.sigma
    if template.delta is None:
        delta = derive_delta(q1, q2, sigma)
        if delta is None:
            return None
        if not check_well_defined(delta, max_degree).passed:
            return None
    else:
        delta = template.delta
    for w in _scope_words(target.ring, scope, max_degree):
        r1, r2 = commutation_residuals(q1, q2, sigma, delta, w)
        if r1 or r2:
            return None
    solved = solve_source_parameters(q1, q2, template)
    if solved is None:
        return None
    p12, p11, taus = solved
    c = DcvMatrix(q1, q2, SourceData(sigma, delta, p12, p11, taus))
    return c if check_dcv(c, target, max_degree, scope).passed else None


def search_dcv(
    template: SearchTemplate,
    target: DoubleOreAlgebra,
    degree_bound: int,
    coeff_pool,
    max_degree: int = DEFAULT_DEGREE,
    options: SearchOptions | None = None,
) -> list[DcvMatrix]:
    """Exhaustive search over candidates; hits are returned in enumeration order."""
    options = options or SearchOptions()
    if template.sigma.ring is not target.ring:
        raise RingMismatch("template and target must share the coefficient ring")
    slots, choices = search_space(target, degree_bound, coeff_pool, options)
    size = len(choices) ** len(slots)
    if size > options.cap:
        raise PoolTooLarge(f"{size} candidates exceed the cap of {options.cap}")
    if not slots:
        return []

    def run(first):
        hits = []
        for rest in product(choices, repeat=len(slots) - 1):
            combo = (first,) + rest
            q1, q2 = _candidate(target, slots, combo)
            if options.nondegenerate and (not q1 or not q2):
                continue
            if options.unit_leading and not (_leading_is_unit(q1) and _leading_is_unit(q2)):
                continue
            c = evaluate_candidate(target, q1, q2, template, max_degree, options.scope)
            if c is not None:
                hits.append(c)
        return hits

    if options.workers > 1:
        with ThreadPoolExecutor(max_workers=options.workers) as pool:
            parts = list(pool.map(run, choices))
    else:
        parts = [run(ch) for ch in choices]
    return [c for part in parts for c in part]
