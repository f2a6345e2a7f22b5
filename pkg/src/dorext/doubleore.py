"""Right double Ore extensions ``B = R_P[y1, y2; sigma, delta, tau]``.

Elements are kept in left-normal form ``sum r_ij y1^i y2^j``. Products are
computed by repeatedly left-multiplying normal forms by a single ``y_k``::

    y_k (w y1^a y2^b) = sigma_k1(w) y1^(a+1) y2^b
                      + sigma_k2(w) (y2 y1^a) y2^b + delta_k(w) y1^a y2^b

where ``y2 y1^a`` is expanded once per algebra from the defining relation
``y2 y1 = p12 y1 y2 + p11 y1^2 + tau1 y1 + tau2 y2 + tau0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import (
    FieldMismatch,
    InvalidPresentation,
    IterationCap,
    NotApplicable,
    RingMismatch,
    WellDefinednessFailure,
)
from .exactfield import QQ, Scalar, ScalarMatrix, rank_raw, solve_raw
from .expr import evaluate, parse_expression
from .errors import ResolutionError
from .presring import PresentedRing, RingElement, render_terms, ring_basis
from .report import Report
from .ringmaps import (
    DeltaColumn,
    Endomorphism,
    FunctionMap,
    LinearMap,
    SigmaMatrix,
    check_well_defined,
)

DEFAULT_DEGREE = 3

# Labels of the six compatibility relations, named by the monomial of
# (y2 y1) r = y2 (y1 r) whose coefficient each one compares.
RELATION_LABELS = ("y1^2", "y1*y2", "y2^2", "y1", "y2", "1")


def _add_into(out: dict, key, r: RingElement):
    if not r:
        return
    cur = out.get(key)
    s = r if cur is None else cur + r
    if s:
        out[key] = s
    else:
        out.pop(key, None)


def _as_ring_element(ring: PresentedRing, v) -> RingElement:
    if isinstance(v, RingElement):
        if v.ring is not ring:
            raise RingMismatch("tail element belongs to a different ring")
        return v
    if isinstance(v, str):
        return ring.element(v)
    return ring.scalar(v)


class DoubleOreAlgebra:
    """Validated defining data plus the memoized multiplication engine."""

    def __init__(self, ring, sigma, delta, p12, p11, tau0, tau1, tau2, names=("y1", "y2")):
        self.ring = ring
        self.field = ring.field
        self.sigma = sigma
        self.delta = delta
        self.p12 = self.field.coerce(p12)
        self.p11 = self.field.coerce(p11)
        self.tau = tuple(_as_ring_element(ring, t) for t in (tau0, tau1, tau2))
        self.names = tuple(names)
        clash = set(self.names) & set(ring.gens)
        if clash or len(set(self.names)) != 2:
            raise InvalidPresentation(f"extension variable names {self.names} clash with the ring")
        self._lmul_memo: dict = {}
        self._shift_memo: dict = {}
        self._shift_active: set = set()
        self._mono_memo: dict = {}

    # -- classification -----------------------------------------------------
    @property
    def tau0(self):
        return self.tau[0]

    @property
    def tau1(self):
        return self.tau[1]

    @property
    def tau2(self):
        return self.tau[2]

    @property
    def is_trimmed(self) -> bool:
        return self.delta.is_zero() and not any(self.tau)

    @property
    def is_double_candidate(self) -> bool:
        return bool(self.p12)

    def p(self, which: str) -> Scalar:
        return Scalar(self.field, self.p12 if which == "p12" else self.p11)

    # -- elements -------------------------------------------------------------
    def make(self, terms: dict) -> "ExtElement":
        return ExtElement(self, {k: v for k, v in terms.items() if v})

    @property
    def one(self):
        return self.make({(0, 0): self.ring.one})

    @property
    def zero(self):
        return self.make({})

    def lift(self, r) -> "ExtElement":
        return self.make({(0, 0): _as_ring_element(self.ring, r)})

    def monomial(self, i: int, j: int, coeff=None) -> "ExtElement":
        c = self.ring.one if coeff is None else _as_ring_element(self.ring, coeff)
        return self.make({(i, j): c})

    @property
    def y1(self):
        return self.monomial(1, 0)

    @property
    def y2(self):
        return self.monomial(0, 1)

    def element(self, text: str) -> "ExtElement":
        node = parse_expression(text)

        def name(n, line, col):
            if n == self.names[0]:
                return self.y1
            if n == self.names[1]:
                return self.y2
            if n in self.ring.gens:
                return self.lift(self.ring.gen(n))
            raise ResolutionError(f"unknown name {n!r}", line, col)

        return evaluate(node, lambda q: self.lift(self.ring.scalar(q)), name)

    # -- multiplication engine -----------------------------------------------
    def _lmul_word(self, k: int, w, i: int, j: int) -> dict:
        """``y_k * (w y1^i y2^j)`` in left-normal form."""
        key = (k, w, i, j)
        got = self._lmul_memo.get(key)
        if got is not None:
            return got
        s = self.sigma.apply_word(w)[k - 1]
        d = self.delta.apply_word(w)[k - 1]
        out: dict = {}
        _add_into(out, (i + 1, j), s[0])
        if s[1]:
            for (a, b), c in self._shift(i).items():
                _add_into(out, (a, b + j), s[1] * c)
        _add_into(out, (i, j), d)
        self._lmul_memo[key] = out
        return out

    def _lmul_y(self, k: int, terms: dict) -> dict:
        out: dict = {}
        for (i, j), r in terms.items():
            for w, c in r.terms.items():
                for key, v in self._lmul_word(k, w, i, j).items():
                    _add_into(out, key, v.scale(c))
        return out

    def _shift(self, a: int) -> dict:
        """Left-normal form of ``y2 y1^a``."""
        got = self._shift_memo.get(a)
        if got is not None:
            return got
        if a in self._shift_active:
            raise IterationCap(f"expansion of {self.names[1]}*{self.names[0]}^{a} depends on itself")
        self._shift_active.add(a)
        try:
            one = self.ring.one
            if a == 0:
                out = {(0, 1): one}
            else:
                prev = self._shift(a - 1)
                out = {}
                for key, v in self._lmul_y(1, prev).items():
                    _add_into(out, key, v.scale(self.p12))
                _add_into(out, (a + 1, 0), one.scale(self.p11))
                _add_into(out, (a, 0), self.tau[1])
                for key, v in prev.items():
                    _add_into(out, key, self.tau[2] * v)
                _add_into(out, (a - 1, 0), self.tau[0])
        finally:
            self._shift_active.discard(a)
        self._shift_memo[a] = out
        return out

    def _mono_times(self, a: int, b: int, w, c: int, d: int) -> dict:
        """``y1^a y2^b * (w y1^c y2^d)``."""
        key = (a, b, w, c, d)
        got = self._mono_memo.get(key)
        if got is not None:
            return got
        if a == 0 and b == 0:
            out = {(c, d): self.ring.word(w)}
        elif a > 0:
            out = self._lmul_y(1, self._mono_times(a - 1, b, w, c, d))
        else:
            out = self._lmul_y(2, self._mono_times(0, b - 1, w, c, d))
        self._mono_memo[key] = out
        return out

    def mul_terms(self, left: dict, right: dict) -> dict:
        out: dict = {}
        for (a, b), r in left.items():
            for (c, d), s in right.items():
                for w, coef in s.terms.items():
                    for key, v in self._mono_times(a, b, w, c, d).items():
                        _add_into(out, key, r * v.scale(coef))
        return out

    # -- description ------------------------------------------------------------
    def relation_text(self) -> str:
        y1, y2 = self.names
        rhs = self.make(
            {
                (1, 1): self.ring.scalar(self.p12),
                (2, 0): self.ring.scalar(self.p11),
                (1, 0): self.tau[1],
                (0, 1): self.tau[2],
                (0, 0): self.tau[0],
            }
        )
        return f"{y2}*{y1} = {rhs.render()}"

    def describe(self) -> dict:
        f = self.field
        gens = self.ring.gens
        sig = {}
        for i in (1, 2):
            for j in (1, 2):
                imgs = self.sigma.component_images(i, j)
                sig[f"sigma{i}{j}"] = {g: v.render() for g, v in zip(gens, imgs)}
        dl = {}
        for i in (1, 2):
            dl[f"delta{i}"] = {g: v.render() for g, v in zip(gens, self.delta.component_images(i))}
        return {
            "field": f.name(),
            "ring": {"gens": list(gens), "relations": [f"{self.ring.render_word(l)} = {self.ring.normalize(dict(r)).render()}" for l, r in self.ring.rules.items()]},
            "sigma": sig,
            "delta": dl,
            "p12": f.render(self.p12),
            "p11": f.render(self.p11),
            "tau": [t.render() for t in self.tau],
            "relation": self.relation_text(),
            "trimmed": self.is_trimmed,
        }

    def replace(self, **changes) -> "DoubleOreAlgebra":
        """A new algebra with some defining data swapped; validated like any other."""
        data = dict(
            ring=self.ring,
            sigma=self.sigma,
            delta=self.delta,
            p12=self.p12,
            p11=self.p11,
            tau0=self.tau[0],
            tau1=self.tau[1],
            tau2=self.tau[2],
        )
        data.update(changes)
        return build_extension(**data, names=self.names)


class ExtElement:
    """An element ``sum r_ij y1^i y2^j`` in left-normal form."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: DoubleOreAlgebra, terms: dict):
        self.algebra = algebra
        self.terms = terms

    def _coerce(self, other):
        if isinstance(other, ExtElement):
            if other.algebra is not self.algebra:
                raise RingMismatch("elements belong to different extensions")
            return other
        if isinstance(other, RingElement):
            return self.algebra.lift(other)
        if isinstance(other, (int, Fraction, Scalar)):
            return self.algebra.lift(self.algebra.ring.scalar(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.terms.items():
            _add_into(out, k, v)
        return ExtElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return ExtElement(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ext_mul(self, o)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        if isinstance(other, RingElement):
            if other.ring is not self.algebra.ring:
                raise RingMismatch("coefficient belongs to a different ring")
            out: dict = {}
            for k, v in self.terms.items():
                _add_into(out, k, other * v)
            return ExtElement(self.algebra, out)
        return NotImplemented

    def __pow__(self, n: int):
        out = self.algebra.one
        for _ in range(n):
            out = out * self
        return out

    def scale(self, s):
        c = self.algebra.field.coerce(s)
        if not c:
            return self.algebra.zero
        return ExtElement(self.algebra, {k: v.scale(c) for k, v in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, ExtElement):
            return self.algebra is other.algebra and self.terms == other.terms
        o = self._coerce(other)
        return NotImplemented if o is None else self == o

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, i: int, j: int) -> RingElement:
        return self.terms.get((i, j), self.algebra.ring.zero)

    def degree(self) -> int:
        """Total degree in ``(y1, y2)``; the zero element has degree -1."""
        return max((i + j for i, j in self.terms), default=-1)

    def degree_in(self, k: int) -> int:
        return max((key[k - 1] for key in self.terms), default=-1)

    def ring_degree(self) -> int:
        return max((r.degree() for r in self.terms.values()), default=-1)

    def is_ring_element(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (t[0][0] + t[0][1], t[0][0], t[0][1]), reverse=True)

    def render(self) -> str:
        y1, y2 = self.algebra.names
        field = self.algebra.field
        pairs = []
        for (i, j), r in self.sorted_terms():
            ypart = "*".join(
                p for p in (_power(y1, i), _power(y2, j)) if p
            )
            if len(r.terms) == 1:
                (w, c), = r.terms.items()
                mono = "*".join(p for p in (r.ring.render_word(w) if w else "", ypart) if p) or "1"
                pairs.append((mono, c))
            else:
                mono = f"({r.render()})" + (f"*{ypart}" if ypart else "")
                pairs.append((mono, field.one))
        return render_terms(pairs, field)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"ExtElement({self.render()!r})"


def _power(name: str, n: int) -> str:
    if n == 0:
        return ""
    return name if n == 1 else f"{name}^{n}"


def ext_mul(a: ExtElement, b: ExtElement) -> ExtElement:
    if a.algebra is not b.algebra:
        raise RingMismatch("elements belong to different extensions")
    return ExtElement(a.algebra, a.algebra.mul_terms(a.terms, b.terms))


def build_extension(
    ring: PresentedRing,
    sigma: SigmaMatrix | None = None,
    delta: DeltaColumn | None = None,
    p12=1,
    p11=0,
    tau0=0,
    tau1=0,
    tau2=0,
    names=("y1", "y2"),
    check_degree: int = DEFAULT_DEGREE,
) -> DoubleOreAlgebra:
    """Validate the defining data and return the algebra handle.

    ``sigma`` defaults to the identity matrix map and ``delta`` to zero. The
    data is checked against the ring relations up to ``check_degree``.
    """
    sigma = sigma if sigma is not None else SigmaMatrix.identity(ring)
    if sigma.ring is not ring:
        raise RingMismatch("sigma is defined over a different ring")
    if delta is None:
        delta = DeltaColumn.zero(sigma)
    elif delta.ring is not ring:
        raise RingMismatch("delta is defined over a different ring")
    elif delta.sigma is not sigma:
        delta = DeltaColumn(ring, sigma, delta.component_images(1), delta.component_images(2))
    for p in (p12, p11):
        if isinstance(p, Scalar) and p.field != ring.field:
            raise FieldMismatch(f"parameter over {p.field.name()} used with a ring over {ring.field.name()}")
    for bundle in (sigma, delta):
        rep = check_well_defined(bundle, check_degree)
        if not rep.passed:
            raise WellDefinednessFailure(
                f"{type(bundle).__name__} does not respect the ring relations: {rep.failures[0]}", rep
            )
    return DoubleOreAlgebra(ring, sigma, delta, p12, p11, tau0, tau1, tau2, names)


# -- compatibility -------------------------------------------------------------


def relation_sides(alg: DoubleOreAlgebra, r: RingElement) -> list[tuple[RingElement, RingElement]]:
    """Both sides of the six operator identities evaluated at ``r``.

    Composition is right to left, ``sigma_i0 = delta_i`` and ``rho_k`` is right
    multiplication by ``tau_k``.
    """
    S = alg.sigma
    D = alg.delta

    def s(i, j, x):
        return D.component(i)(x) if j == 0 else S.component(i, j)(x)

    p12, p11 = alg.p12, alg.p11
    t0, t1, t2 = alg.tau
    a = {(i, j): s(i, j, r) for i in (1, 2) for j in (0, 1, 2)}

    def ss(i, j, k, l):
        return s(i, j, a[(k, l)])

    out = []
    # y1^2
    lhs = ss(2, 1, 1, 1) + ss(2, 2, 1, 1).scale(p11)
    rhs = (
        ss(1, 1, 1, 1).scale(p11)
        + ss(1, 2, 1, 1).scale(p11 * p11)
        + ss(1, 1, 2, 1).scale(p12)
        + ss(1, 2, 2, 1).scale(p11 * p12)
    )
    out.append((lhs, rhs))
    # y1*y2
    lhs = ss(2, 1, 1, 2) + ss(2, 2, 1, 1).scale(p12)
    rhs = (
        ss(1, 1, 1, 2).scale(p11)
        + ss(1, 2, 1, 1).scale(p11 * p12)
        + ss(1, 1, 2, 2).scale(p12)
        + ss(1, 2, 2, 1).scale(p12 * p12)
    )
    out.append((lhs, rhs))
    # y2^2
    lhs = ss(2, 2, 1, 2)
    rhs = ss(1, 2, 1, 2).scale(p11) + ss(1, 2, 2, 2).scale(p12)
    out.append((lhs, rhs))
    # y1
    lhs = ss(2, 0, 1, 1) + ss(2, 1, 1, 0) + ss(2, 2, 1, 1) * t1
    rhs = (
        (ss(1, 0, 1, 1) + ss(1, 1, 1, 0) + ss(1, 2, 1, 1) * t1).scale(p11)
        + (ss(1, 0, 2, 1) + ss(1, 1, 2, 0) + ss(1, 2, 2, 1) * t1).scale(p12)
        + t1 * a[(1, 1)]
        + t2 * a[(2, 1)]
    )
    out.append((lhs, rhs))
    # y2
    lhs = ss(2, 0, 1, 2) + ss(2, 2, 1, 0) + ss(2, 2, 1, 1) * t2
    rhs = (
        (ss(1, 0, 1, 2) + ss(1, 2, 1, 0) + ss(1, 2, 1, 1) * t2).scale(p11)
        + (ss(1, 0, 2, 2) + ss(1, 2, 2, 0) + ss(1, 2, 2, 1) * t2).scale(p12)
        + t1 * a[(1, 2)]
        + t2 * a[(2, 2)]
    )
    out.append((lhs, rhs))
    # constant term
    lhs = ss(2, 0, 1, 0) + ss(2, 2, 1, 1) * t0
    rhs = (
        (ss(1, 0, 1, 0) + ss(1, 2, 1, 1) * t0).scale(p11)
        + (ss(1, 0, 2, 0) + ss(1, 2, 2, 1) * t0).scale(p12)
        + t1 * a[(1, 0)]
        + t2 * a[(2, 0)]
        + t0 * r
    )
    out.append((lhs, rhs))
    return out


def check_compatibility(alg: DoubleOreAlgebra, max_degree: int = DEFAULT_DEGREE) -> Report:
    """Evaluate the six operator identities on every basis word up to the bound."""
    report = Report("compatibility", True, max_degree)
    ring = alg.ring
    words = ring_basis(ring, max_degree)
    first: dict = {}
    for w in words:
        r = ring.word(w)
        for label, (lhs, rhs) in zip(RELATION_LABELS, relation_sides(alg, r)):
            if label not in first and lhs != rhs:
                first[label] = f"r = {r.render()}: {lhs.render()} != {rhs.render()}"
    report.details["words_checked"] = len(words)
    rels = {}
    for label in RELATION_LABELS:
        if label in first:
            rels[f"coefficient of {label}"] = "fail"
            report.fail(f"relation for coefficient of {label}, {first[label]}")
        else:
            rels[f"coefficient of {label}"] = "pass"
    report.details["relations"] = rels
    return report


# -- associativity -----------------------------------------------------------------


def _assoc_pool(alg: DoubleOreAlgebra, max_degree: int):
    ring = alg.ring
    pool = []
    for w in ring_basis(ring, max_degree):
        pool.append((alg.lift(ring.word(w)), 0, len(w), ring.render_word(w)))
    for n in range(1, max_degree + 1):
        for i in range(n, -1, -1):
            m = alg.monomial(i, n - i)
            pool.append((m, n, 0, m.render()))
    return pool


def check_associativity(alg: DoubleOreAlgebra, max_degree: int = DEFAULT_DEGREE) -> Report:
    """``(ab)c = a(bc)`` on triples from the ring basis and the y-monomials.

    A triple is used when its y-degrees sum to at most ``max_degree`` and so
    do its ring degrees.
    """
    report = Report("associativity", True, max_degree)
    pool = _assoc_pool(alg, max_degree)
    checked = 0
    failed = 0
    for (a, ya, ra, na), (b, yb, rb, nb) in product(pool, repeat=2):
        if ya + yb > max_degree or ra + rb > max_degree:
            continue
        ab = a * b
        for c, yc, rc, nc in pool:
            if ya + yb + yc > max_degree or ra + rb + rc > max_degree:
                continue
            checked += 1
            left = ab * c
            right = a * (b * c)
            if left != right:
                failed += 1
                if failed <= 3:
                    report.fail(f"({na})({nb})({nc}): {left.render()} != {right.render()}")
    report.details["triples_checked"] = checked
    report.details["failing_triples"] = failed
    return report


# -- right basis -----------------------------------------------------------------


def check_right_basis(alg: DoubleOreAlgebra, max_degree: int = DEFAULT_DEGREE) -> Report:
    """Bounded certificate that ``{y2^i y1^j}`` is a right basis.

    For each ``n <= max_degree`` the products ``y2^i y1^j w`` with ``i + j <= n``
    and ring basis words ``w`` of length ``<= max_degree`` must be linearly
    independent and must span every ``w y1^a y2^b`` with ``|w| + a + b <= n``.
    """
    report = Report("right-basis", True, max_degree)
    ring = alg.ring
    field = alg.field
    words = ring_basis(ring, max_degree)
    levels = []
    for n in range(max_degree + 1):
        gens = []
        for i in range(n + 1):
            for j in range(n + 1 - i):
                base = alg.monomial(0, i) * alg.monomial(j, 0)
                for w in words:
                    gens.append(((i, j, w), base * alg.lift(ring.word(w))))
        targets = [
            ((a, b, w), alg.monomial(a, b, ring.word(w)))
            for a in range(n + 1)
            for b in range(n + 1 - a)
            for w in words
            if len(w) + a + b <= n
        ]
        coords = {}
        for _, e in gens + targets:
            for (i, j), r in e.terms.items():
                for w in r.terms:
                    coords.setdefault((i, j, w), len(coords))

        def vec(e):
            v = [field.zero] * len(coords)
            for (i, j), r in e.terms.items():
                for w, c in r.terms.items():
                    v[coords[(i, j, w)]] = c
            return v

        cols = [vec(e) for _, e in gens]
        matrix = [[cols[k][row] for k in range(len(cols))] for row in range(len(coords))]
        rank = rank_raw(field, [list(c) for c in cols]) if cols else 0
        independent = rank == len(cols)
        missing = []
        for key, e in targets:
            x, _ = solve_raw(field, matrix, vec(e))
            if x is None:
                missing.append(alg.monomial(key[0], key[1], ring.word(key[2])).render())
        ok = independent and not missing
        levels.append({"degree": n, "independent": independent, "spans": not missing})
        if not independent:
            report.fail(f"degree {n}: the right monomials are linearly dependent")
        if missing:
            report.fail(f"degree {n}: {missing[0]} is not in the right span")
        if not ok:
            break
    report.details["levels"] = levels
    report.details["double_certified"] = report.passed and alg.is_double_candidate
    return report


# -- change of basis and associated graded ----------------------------------------


@dataclass
class BasisChange:
    algebra: DoubleOreAlgebra
    matrix: ScalarMatrix
    case: int
    substitution: tuple = field(default_factory=tuple)

    def describe(self) -> dict:
        return {
            "case": self.case,
            "substitution": list(self.substitution),
            "matrix": [[str(s) for s in row] for row in self.matrix.row_lists()],
            "algebra": self.algebra.describe(),
        }


def _conjugate(alg: DoubleOreAlgebra, t, tinv) -> SigmaMatrix:
    ring = alg.ring
    comps = {(i, j): [] for i in range(2) for j in range(2)}
    for m in alg.sigma.gen_matrices:
        # t * m * tinv with scalar t
        tm = [[m[0][0].scale(t[r][0]) + m[1][0].scale(t[r][1]), m[0][1].scale(t[r][0]) + m[1][1].scale(t[r][1])] for r in range(2)]
        out = [[tm[r][0].scale(tinv[0][c]) + tm[r][1].scale(tinv[1][c]) for c in range(2)] for r in range(2)]
        for i in range(2):
            for j in range(2):
                comps[(i, j)].append(out[i][j])
    return SigmaMatrix(ring, comps[(0, 0)], comps[(0, 1)], comps[(1, 0)], comps[(1, 1)])


def _transform_delta(alg, sigma, t) -> DeltaColumn:
    d1 = alg.delta.component_images(1)
    d2 = alg.delta.component_images(2)
    n1 = [a.scale(t[0][0]) + b.scale(t[0][1]) for a, b in zip(d1, d2)]
    n2 = [a.scale(t[1][0]) + b.scale(t[1][1]) for a, b in zip(d1, d2)]
    return DeltaColumn(alg.ring, sigma, n1, n2)


def change_basis(alg: DoubleOreAlgebra) -> BasisChange:
    """Normalize ``P`` by a linear substitution of the two variables.

    With ``p12 = 1, p11 != 0`` the substitution is ``y1 -> p11 y1`` and the new
    parameters are ``{1, 1}``. With ``p12 != 1`` it is ``y2 -> y2 + q y1`` for
    ``q = p11 / (p12 - 1)`` and the new ``p11`` vanishes.
    """
    f = alg.field
    p12, p11 = alg.p12, alg.p11
    one, zero = f.one, f.zero
    t0, t1, t2 = alg.tau
    y1, y2 = alg.names
    if p12 == one and p11:
        t = ((p11, zero), (zero, one))
        tinv = ((f.inv(p11), zero), (zero, one))
        taus = (t0.scale(p11), t1, t2.scale(p11))
        params = (one, one)
        case = 1
        subst = (f"{y1}' = {_coef_text(f, p11)}{y1}", f"{y2}' = {y2}")
    elif p12 != one:
        q = f.div(p11, f.sub(p12, one))
        t = ((one, zero), (q, one))
        tinv = ((one, zero), (f.neg(q), one))
        taus = (t0, t1 - t2.scale(q), t2)
        params = (p12, zero)
        case = 2
        subst = (f"{y1}' = {y1}", f"{y2}' = {y2} + {_coef_text(f, q)}{y1}" if q else f"{y2}' = {y2}")
    else:
        raise NotApplicable("p11 = 0 and p12 = 1: the parameters are already normalized")
    sigma = _conjugate(alg, t, tinv)
    delta = _transform_delta(alg, sigma, t)
    new = build_extension(alg.ring, sigma, delta, params[0], params[1], *taus, names=alg.names)
    matrix = ScalarMatrix.from_rows(f, [list(r) for r in t])
    return BasisChange(new, matrix, case, subst)


def _coef_text(f, c) -> str:
    return "" if c == f.one else f"{f.render(c)}*"


def verify_basis_change(old: DoubleOreAlgebra, change: BasisChange, max_degree: int = DEFAULT_DEGREE) -> Report:
    """Substitute the new variables into the new defining relations inside ``old``."""
    new = change.algebra
    m = change.matrix
    q = [old.y1.scale(m[i, 0].value) + old.y2.scale(m[i, 1].value) for i in range(2)]
    report = Report("basis-change round trip", True, max_degree)
    lhs = q[1] * q[0]
    rhs = (
        (q[0] * q[1]).scale(new.p12)
        + (q[0] * q[0]).scale(new.p11)
        + new.tau1 * q[0]
        + new.tau2 * q[1]
        + old.lift(new.tau0)
    )
    report.details["relation"] = lhs == rhs
    if lhs != rhs:
        report.fail(f"substituted relation: {lhs.render()} != {rhs.render()}")
    bad = 0
    ring = old.ring
    for w in ring_basis(ring, max_degree):
        r = ring.word(w)
        s = new.sigma.apply_word(w)
        d = new.delta.apply_word(w)
        for i in range(2):
            want = s[i][0] * q[0] + s[i][1] * q[1] + old.lift(d[i])
            if q[i] * old.lift(r) != want:
                bad += 1
                if bad == 1:
                    report.fail(f"commutation with {ring.render_word(w)} fails for variable {i + 1}")
    report.details["commutation"] = bad == 0
    return report


def associated_graded(alg: DoubleOreAlgebra) -> DoubleOreAlgebra:
    """The graded algebra: shift by ``q``, drop ``delta`` and ``tau``, set ``p11 = 0``."""
    f = alg.field
    if alg.p12 == f.one:
        raise NotApplicable("the associated graded algebra needs p12 != 1")
    q = f.div(alg.p11, f.sub(alg.p12, f.one))
    t = ((f.one, f.zero), (q, f.one))
    tinv = ((f.one, f.zero), (f.neg(q), f.one))
    sigma = _conjugate(alg, t, tinv)
    return build_extension(alg.ring, sigma, None, alg.p12, 0, 0, 0, 0, names=alg.names)


# -- iterated presentations ------------------------------------------------------


class IteratedPresentation:
    """``R[u; s1, d1][v; s2, d2]`` with its own arithmetic.

    ``d2`` on ``R`` is ``d2(r) = d2_const(r) + d2_lin(r) u``. On the first
    variable ``s2(u) = slope u + tail`` and ``d2(u) = c2 u^2 + c1 u + c0``.
    Elements are dicts ``{(i, j): r}`` for ``r u^i v^j``.
    """

    def __init__(self, ring, order, names, s1, d1, s2, d2_const, d2_lin, slope, tail, c2, c1, c0):
        self.ring = ring
        self.field = ring.field
        self.order = order
        self.names = tuple(names)
        self.s1, self.d1 = s1, d1
        self.s2, self.d2_const, self.d2_lin = s2, d2_const, d2_lin
        self.slope = self.field.coerce(slope)
        self.c2 = self.field.coerce(c2)
        self.tail = _as_ring_element(ring, tail)
        self.c1 = _as_ring_element(ring, c1)
        self.c0 = _as_ring_element(ring, c0)
        self._upow: dict = {}
        self._vmemo: dict = {}

    # first-step arithmetic on {i: r}
    def _u_times(self, a: dict) -> dict:
        out: dict = {}
        for i, r in a.items():
            _add_into(out, i + 1, self.s1(r))
            _add_into(out, i, self.d1(r))
        return out

    def _upow_times_ring(self, i: int, r: RingElement) -> dict:
        key = (i, r)
        got = self._upow.get(key)
        if got is None:
            got = {0: r} if i == 0 else self._u_times(self._upow_times_ring(i - 1, r))
            self._upow[key] = got
        return got

    def mul_first(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for i, r in a.items():
            for k, s in b.items():
                for m, c in self._upow_times_ring(i, s).items():
                    _add_into(out, m + k, r * c)
        return out

    def _s2_first(self, a: dict) -> dict:
        """``s2`` extended multiplicatively to ``R[u]``."""
        su = {1: self.ring.scalar(self.slope)}
        _add_into(su, 0, self.tail)
        out: dict = {}
        for i, r in a.items():
            term = {0: self.s2(r)}
            for _ in range(i):
                term = self.mul_first(term, su)
            for k, v in term.items():
                _add_into(out, k, v)
        return out

    def _d2_first(self, a: dict) -> dict:
        """``d2`` extended as an ``s2``-derivation to ``R[u]``."""
        su = {1: self.ring.scalar(self.slope)}
        _add_into(su, 0, self.tail)
        du = {}
        _add_into(du, 2, self.ring.scalar(self.c2))
        _add_into(du, 1, self.c1)
        _add_into(du, 0, self.c0)
        out: dict = {}
        for i, r in a.items():
            # d2(r u^i) = s2(r) d2(u^i) + d2(r) u^i
            d_r = {}
            _add_into(d_r, 0, self.d2_const(r))
            _add_into(d_r, 1, self.d2_lin(r))
            dpow: dict = {}
            spow = {0: self.ring.one}
            for _ in range(i):
                # d2(u^(k+1)) = s2(u^k) d2(u) + d2(u^k) u
                nd = self.mul_first(spow, du)
                for k, v in self.mul_first(dpow, {1: self.ring.one}).items():
                    _add_into(nd, k, v)
                dpow = nd
                spow = self.mul_first(spow, su)
            for k, v in self.mul_first({0: self.s2(r)}, dpow).items():
                _add_into(out, k, v)
            for k, v in self.mul_first(d_r, {i: self.ring.one}).items():
                _add_into(out, k, v)
        return out

    def _v_times(self, e: dict) -> dict:
        """``v * e`` for ``e = {(i, j): r}``."""
        out: dict = {}
        for (i, j), r in e.items():
            key = (i, r)
            got = self._vmemo.get(key)
            if got is None:
                a = {i: r}
                got = (self._s2_first(a), self._d2_first(a))
                self._vmemo[key] = got
            s, d = got
            for k, v in s.items():
                _add_into(out, (k, j + 1), v)
            for k, v in d.items():
                _add_into(out, (k, j), v)
        return out

    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for (i, j), r in a.items():
            # r u^i v^j b
            cur = dict(b)
            for _ in range(j):
                cur = self._v_times(cur)
            step: dict = {}
            for (k, l), s in cur.items():
                for m, c in self._upow_times_ring(i, s).items():
                    _add_into(step, (m + k, l), c)
            for key, v in step.items():
                _add_into(out, key, r * v)
        return out

    def monomial(self, i, j, coeff=None) -> dict:
        return {(i, j): self.ring.one if coeff is None else coeff}

    def render(self, e: dict) -> str:
        u, v = self.names
        pairs = []
        for (i, j), r in sorted(e.items(), key=lambda t: (t[0][0] + t[0][1], t[0]), reverse=True):
            ypart = "*".join(p for p in (_power(u, i), _power(v, j)) if p)
            mono = f"({r.render()})" + (f"*{ypart}" if ypart else "") if len(r.terms) > 1 else None
            if mono is None:
                (w, c), = r.terms.items()
                mono = "*".join(p for p in (self.ring.render_word(w) if w else "", ypart) if p) or "1"
                pairs.append((mono, c))
            else:
                pairs.append((mono, self.field.one))
        return render_terms(pairs, self.field)

    def describe(self) -> dict:
        gens = self.ring.gens
        u, v = self.names

        def imgs(m):
            return {g: m.apply_word((k,)).render() for k, g in enumerate(gens)}

        def lin(k):
            c, l = self.d2_const.apply_word((k,)), self.d2_lin.apply_word((k,))
            return self.render({key: val for key, val in (((0, 0), c), ((1, 0), l)) if val})

        su = self.render({key: val for key, val in (((1, 0), self.ring.scalar(self.slope)), ((0, 0), self.tail)) if val})
        du = self.render(
            {key: val for key, val in (((2, 0), self.ring.scalar(self.c2)), ((1, 0), self.c1), ((0, 0), self.c0)) if val}
        )
        return {
            "order": self.order,
            "first": {"variable": u, "sigma": imgs(self.s1), "delta": imgs(self.d1)},
            "second": {
                "variable": v,
                "sigma": {**imgs(self.s2), u: su},
                "delta": {**{g: lin(k) for k, g in enumerate(gens)}, u: du},
            },
            "relation": f"{v}*{u} = " + self.render(self._v_times({(1, 0): self.ring.one})),
        }

    def to_extension(self, alg: DoubleOreAlgebra, e: dict) -> ExtElement:
        """Read ``r u^i v^j`` as an element of the double extension."""
        out = alg.zero
        first, second = (1, 2) if self.order == "y1-then-y2" else (2, 1)
        for (i, j), r in e.items():
            m = alg.lift(r) * _ypow(alg, first, i) * _ypow(alg, second, j)
            out = out + m
        return out


def _ypow(alg, k, n):
    return alg.monomial(n, 0) if k == 1 else alg.monomial(0, n)


@dataclass
class IteratedResult:
    presentations: dict
    failures: dict

    @property
    def found(self) -> bool:
        return bool(self.presentations)

    def first(self) -> IteratedPresentation | None:
        return next(iter(self.presentations.values()), None)

    def describe(self) -> dict:
        return {
            "presentations": {k: p.describe() for k, p in self.presentations.items()},
            "failures": {k: list(v) for k, v in self.failures.items()},
        }


def _nonzero_gens(m: LinearMap) -> list[str]:
    return [g for g, v in zip(m.ring.gens, m.images()) if v]


def to_iterated(alg: DoubleOreAlgebra) -> IteratedResult:
    """Try both iterated Ore presentations and report why each order fails."""
    S, D = alg.sigma, alg.delta
    f = alg.field
    ring = alg.ring
    pres, fails = {}, {}
    s12 = _nonzero_gens(S.component(1, 2))
    if s12:
        fails["y1-then-y2"] = [f"sigma12 != 0 (on {', '.join(s12)})"]
    else:
        pres["y1-then-y2"] = IteratedPresentation(
            ring, "y1-then-y2", alg.names,
            S.component(1, 1), D.component(1),
            S.component(2, 2), D.component(2), S.component(2, 1),
            alg.p12, alg.tau2, alg.p11, alg.tau1, alg.tau0,
        )
    why = []
    s21 = _nonzero_gens(S.component(2, 1))
    if s21:
        why.append(f"sigma21 != 0 (on {', '.join(s21)})")
    if not alg.p12:
        why.append("p12 = 0")
    if alg.p11:
        why.append("p11 != 0")
    if why:
        fails["y2-then-y1"] = why
    else:
        inv = f.inv(alg.p12)
        pres["y2-then-y1"] = IteratedPresentation(
            ring, "y2-then-y1", (alg.names[1], alg.names[0]),
            S.component(2, 2), D.component(2),
            S.component(1, 1), D.component(1), S.component(1, 2),
            inv, -alg.tau1.scale(inv), 0, -alg.tau2.scale(inv), -alg.tau0.scale(inv),
        )
    return IteratedResult(pres, fails)


def check_iterated_agreement(alg: DoubleOreAlgebra, pres: IteratedPresentation, max_degree: int = DEFAULT_DEGREE) -> Report:
    """Products in the iterated presentation agree with ``ext_mul`` on monomial pairs."""
    report = Report(f"iterated agreement ({pres.order})", True, max_degree)
    ring = alg.ring
    monos = []
    for w in ring_basis(ring, max_degree):
        for i in range(max_degree - len(w) + 1):
            for j in range(max_degree - len(w) - i + 1):
                monos.append(pres.monomial(i, j, ring.word(w)))
    images = [pres.to_extension(alg, m) for m in monos]
    pairs = 0
    for a, ia in zip(monos, images):
        for b, ib in zip(monos, images):
            pairs += 1
            got = pres.to_extension(alg, pres.mul(a, b))
            want = ia * ib
            if got != want:
                report.fail(f"{pres.render(a)} * {pres.render(b)}: {got.render()} != {want.render()}")
                if len(report.failures) >= 3:
                    report.details["pairs_checked"] = pairs
                    return report
    report.details["pairs_checked"] = pairs
    return report


def scalar_tail_iterated(p12, p11, tau0, tau1, tau2, field=None, names=("x1", "x2")) -> IteratedPresentation:
    """``k[x1][x2; s2, d2]`` with ``s2(x1) = p12 x1 + tau2``, ``d2(x1) = p11 x1^2 + tau1 x1 + tau0``."""
    if field is None:
        field = next((v.field for v in (p12, p11, tau0, tau1, tau2) if isinstance(v, Scalar)), None)
    if field is None:
        field = QQ
    base = PresentedRing(field, ())
    ident = Endomorphism.identity(base)
    zero = FunctionMap(base, lambda r: base.zero)
    pres = IteratedPresentation(
        base, "scalar-tail", names, ident, zero, ident, zero, zero,
        field.coerce(p12), base.scalar(tau2), field.coerce(p11), base.scalar(tau1), base.scalar(tau0),
    )
    pres.is_double = bool(field.coerce(p12))
    return pres
