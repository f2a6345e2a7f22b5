"""Linear maps on a presented ring defined by their values on generators.

The 2x2 map ``sigma`` is only ever extended as a whole (matrix
multiplicativity); its entries are exposed as read-only component views.
The column ``delta`` follows ``delta(u v) = sigma(u) delta(v) + delta(u) v``.
Values on words are computed left to right and memoized per word.
"""

from __future__ import annotations

from typing import Callable, Mapping, Sequence

from .errors import RingMismatch
from .presring import PresentedRing, RingElement, ring_basis
from .report import Report


def _check_ring(ring: PresentedRing, r: RingElement):
    if r.ring is not ring:
        raise RingMismatch("element belongs to a different ring than the map")


def _images(ring: PresentedRing, values) -> tuple:
    """Accept a sequence or ``{generator name: element or text}`` mapping."""
    if isinstance(values, Mapping):
        out = []
        for g in ring.gens:
            v = values.get(g, 0)
            out.append(_as_element(ring, v))
        unknown = set(values) - set(ring.gens)
        if unknown:
            raise KeyError(f"unknown generators {sorted(unknown)}")
        return tuple(out)
    vals = tuple(_as_element(ring, v) for v in values)
    if len(vals) != len(ring.gens):
        raise ValueError("one image per generator is required")
    return vals


def _as_element(ring: PresentedRing, v) -> RingElement:
    if isinstance(v, RingElement):
        _check_ring(ring, v)
        return v
    if isinstance(v, str):
        return ring.element(v)
    return ring.scalar(v)


class LinearMap:
    """A k-linear map R -> R evaluated word by word."""

    kind = "linear"

    def __init__(self, ring: PresentedRing):
        self.ring = ring
        self._memo: dict = {}

    def apply_word(self, w) -> RingElement:
        got = self._memo.get(w)
        if got is None:
            got = self._eval_word(w)
            self._memo[w] = got
        return got

    def _eval_word(self, w) -> RingElement:
        raise NotImplementedError

    def __call__(self, r: RingElement) -> RingElement:
        _check_ring(self.ring, r)
        out = self.ring.zero
        for w, c in r.terms.items():
            v = self.apply_word(w)
            if v:
                out = out + v.scale(c)
        return out

    def images(self) -> tuple:
        return tuple(self.apply_word((i,)) for i in range(len(self.ring.gens)))

    def is_zero_on(self, words) -> bool:
        return all(not self.apply_word(w) for w in words)


class FunctionMap(LinearMap):
    kind = "function"

    def __init__(self, ring, fn: Callable[[RingElement], RingElement]):
        super().__init__(ring)
        self.fn = fn

    def _eval_word(self, w):
        return self.fn(self.ring.word(w))


class Endomorphism(LinearMap):
    """Multiplicative extension of generator images."""

    kind = "multiplicative"

    def __init__(self, ring: PresentedRing, images):
        super().__init__(ring)
        self.gen_images = _images(ring, images)

    @classmethod
    def identity(cls, ring):
        return cls(ring, [ring.gen(i) for i in range(len(ring.gens))])

    def _eval_word(self, w):
        if not w:
            return self.ring.one
        return self.apply_word(w[:-1]) * self.gen_images[w[-1]]


class TwistedDerivation(LinearMap):
    """``d(u v) = twist(u) d(v) + d(u) v`` from generator images."""

    kind = "sigma-derivation"

    def __init__(self, ring: PresentedRing, images, twist: LinearMap | None = None):
        super().__init__(ring)
        self.gen_images = _images(ring, images)
        self.twist = twist if twist is not None else Endomorphism.identity(ring)

    def _eval_word(self, w):
        if not w:
            return self.ring.zero
        u, x = w[:-1], w[-1]
        return self.twist.apply_word(u) * self.gen_images[x] + self.apply_word(u) * self.ring.gen(x)


class InnerDerivation(LinearMap):
    """``r -> a r - twist(r) a``."""

    kind = "inner"

    def __init__(self, a: RingElement, twist: LinearMap | None = None):
        super().__init__(a.ring)
        self.a = a
        self.twist = twist if twist is not None else Endomorphism.identity(a.ring)

    def _eval_word(self, w):
        r = self.ring.word(w)
        return self.a * r - self.twist.apply_word(w) * self.a


def inner_derivation(a: RingElement, twist: LinearMap | None = None) -> InnerDerivation:
    return InnerDerivation(a, twist)


class Composite(LinearMap):
    """``maps[0] o maps[1] o ...``: the rightmost map is applied first."""

    kind = "composite"

    def __init__(self, *maps: LinearMap):
        super().__init__(maps[0].ring)
        self.maps = maps

    def _eval_word(self, w):
        v = self.ring.word(w)
        for m in reversed(self.maps):
            v = m(v)
        return v


class Combination(LinearMap):
    """``sum c_k * m_k`` for raw scalar coefficients ``c_k``."""

    kind = "combination"

    def __init__(self, ring, pairs: Sequence[tuple[object, LinearMap]]):
        super().__init__(ring)
        self.pairs = tuple(pairs)

    def _eval_word(self, w):
        out = self.ring.zero
        for c, m in self.pairs:
            out = out + m.apply_word(w).scale(c)
        return out


class MatrixComponent(LinearMap):
    kind = "matrix-component"

    def __init__(self, sigma: "SigmaMatrix", i: int, j: int):
        super().__init__(sigma.ring)
        self.sigma, self.i, self.j = sigma, i, j

    def _eval_word(self, w):
        return self.sigma.apply_word(w)[self.i][self.j]


class DeltaComponent(LinearMap):
    kind = "matrix-component"

    def __init__(self, delta: "DeltaColumn", i: int):
        super().__init__(delta.ring)
        self.delta, self.i = delta, i

    def _eval_word(self, w):
        return self.delta.apply_word(w)[self.i]


def mat_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def mat_vec(a, v):
    return (a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1])


class SigmaMatrix:
    """The homomorphism R -> M2(R) given by the four component images per generator."""

    def __init__(self, ring: PresentedRing, s11, s12, s21, s22):
        self.ring = ring
        imgs = [_images(ring, s) for s in (s11, s12, s21, s22)]
        self.gen_matrices = tuple(
            ((imgs[0][g], imgs[1][g]), (imgs[2][g], imgs[3][g])) for g in range(len(ring.gens))
        )
        self._memo: dict = {}
        self._components = {
            (i, j): MatrixComponent(self, i - 1, j - 1) for i in (1, 2) for j in (1, 2)
        }

    @classmethod
    def identity(cls, ring):
        gens = [ring.gen(i) for i in range(len(ring.gens))]
        zeros = [ring.zero] * len(gens)
        return cls(ring, gens, zeros, zeros, gens)

    @classmethod
    def diagonal(cls, first: LinearMap, second: LinearMap):
        ring = first.ring
        zeros = [ring.zero] * len(ring.gens)
        return cls(ring, first.images(), zeros, zeros, second.images())

    @classmethod
    def from_maps(cls, ring, maps: Mapping[str, Mapping]):
        """``{"sigma11": {"x1": "0", ...}, ...}``; missing entries default to the identity matrix."""
        ident = cls.identity(ring)
        parts = []
        for i in (1, 2):
            for j in (1, 2):
                spec = maps.get(f"sigma{i}{j}")
                parts.append(ident.component(i, j).images() if spec is None else spec)
        return cls(ring, *parts)

    def component(self, i: int, j: int) -> MatrixComponent:
        """The (i, j) entry as a linear map, 1-based."""
        return self._components[(i, j)]

    def component_images(self, i: int, j: int) -> tuple:
        return tuple(m[i - 1][j - 1] for m in self.gen_matrices)

    def apply_word(self, w):
        got = self._memo.get(w)
        if got is None:
            if not w:
                one, zero = self.ring.one, self.ring.zero
                got = ((one, zero), (zero, one))
            else:
                got = mat_mul(self.apply_word(w[:-1]), self.gen_matrices[w[-1]])
            self._memo[w] = got
        return got

    def __call__(self, r: RingElement):
        _check_ring(self.ring, r)
        z = self.ring.zero
        acc = [[z, z], [z, z]]
        for w, c in r.terms.items():
            m = self.apply_word(w)
            for i in range(2):
                for j in range(2):
                    if m[i][j]:
                        acc[i][j] = acc[i][j] + m[i][j].scale(c)
        return (tuple(acc[0]), tuple(acc[1]))

    def is_diagonal_on(self, words) -> bool:
        return self.component(1, 2).is_zero_on(words) and self.component(2, 1).is_zero_on(words)


class DeltaColumn:
    """A sigma-derivation R -> M_{2x1}(R) from generator images."""

    def __init__(self, ring: PresentedRing, sigma: SigmaMatrix, d1, d2):
        if sigma.ring is not ring:
            raise RingMismatch("delta and sigma must share a ring")
        self.ring = ring
        self.sigma = sigma
        i1, i2 = _images(ring, d1), _images(ring, d2)
        self.gen_columns = tuple((i1[g], i2[g]) for g in range(len(ring.gens)))
        self._memo: dict = {}
        self._components = {1: DeltaComponent(self, 0), 2: DeltaComponent(self, 1)}

    @classmethod
    def zero(cls, sigma: SigmaMatrix):
        z = [sigma.ring.zero] * len(sigma.ring.gens)
        return cls(sigma.ring, sigma, z, z)

    @classmethod
    def from_maps(cls, sigma: SigmaMatrix, maps: Mapping[str, Mapping]):
        ring = sigma.ring
        z = [ring.zero] * len(ring.gens)
        return cls(ring, sigma, maps.get("delta1", z), maps.get("delta2", z))

    def component(self, i: int) -> DeltaComponent:
        return self._components[i]

    def component_images(self, i: int) -> tuple:
        return tuple(c[i - 1] for c in self.gen_columns)

    def is_zero(self) -> bool:
        return all(not a and not b for a, b in self.gen_columns)

    def apply_word(self, w):
        got = self._memo.get(w)
        if got is None:
            if not w:
                got = (self.ring.zero, self.ring.zero)
            else:
                u, x = w[:-1], w[-1]
                s = mat_vec(self.sigma.apply_word(u), self.gen_columns[x])
                d = self.apply_word(u)
                g = self.ring.gen(x)
                got = (s[0] + d[0] * g, s[1] + d[1] * g)
            self._memo[w] = got
        return got

    def __call__(self, r: RingElement):
        _check_ring(self.ring, r)
        a, b = self.ring.zero, self.ring.zero
        for w, c in r.terms.items():
            v = self.apply_word(w)
            a = a + v[0].scale(c)
            b = b + v[1].scale(c)
        return (a, b)


def apply_sigma(sigma: SigmaMatrix, r: RingElement):
    return sigma(r)


def apply_delta(delta: DeltaColumn, r: RingElement):
    return delta(r)


def _render_matrix(m) -> str:
    if len(m) == 2 and isinstance(m[0], tuple):
        return "[[" + "], [".join(", ".join(e.render() for e in row) for row in m) + "]]"
    return "[" + ", ".join(e.render() for e in m) + "]"


def check_well_defined(bundle, max_degree: int = 3) -> Report:
    """Confirm generator images respect every ring relation.

    Works for :class:`SigmaMatrix`, :class:`DeltaColumn` and single-map
    :class:`Endomorphism` / :class:`TwistedDerivation` objects. Besides the
    relations it re-derives each basis word's value from every two-piece
    split and compares with the direct evaluation.
    """
    ring = bundle.ring
    name = type(bundle).__name__
    report = Report(f"well-defined {name}", True, max_degree)
    checked = 0
    for lhs, rhs in ring.rules.items():
        left = bundle.apply_word(lhs)
        right = _eval_combo(bundle, rhs)
        checked += 1
        if left != right:
            report.fail(
                f"relation {ring.render_word(lhs)} = {ring.normalize(dict(rhs)).render()}: "
                f"{_render_matrix(_as_tuple(left))} != {_render_matrix(_as_tuple(right))}"
            )
    report.details["relations_checked"] = checked
    splits = 0
    for w in ring_basis(ring, max_degree):
        for k in range(1, len(w)):
            splits += 1
            if not _split_consistent(bundle, w[:k], w[k:]):
                report.fail(f"split {ring.render_word(w[:k])} | {ring.render_word(w[k:])} disagrees")
    report.details["splits_checked"] = splits
    return report


def _as_tuple(v):
    return v if isinstance(v, tuple) else (v,)


def _scale(v, c):
    if isinstance(v, tuple):
        return tuple(_scale(x, c) for x in v)
    return v.scale(c)


def _eval_combo(bundle, combo):
    out = _scale(bundle.apply_word(()), 0)
    for w, c in combo:
        out = _add(out, _scale(bundle.apply_word(w), c))
    return out


def _add(a, b):
    if isinstance(a, tuple):
        return tuple(_add(x, y) for x, y in zip(a, b))
    return a + b


def _split_consistent(bundle, u, v) -> bool:
    ring = bundle.ring
    whole = bundle.apply_word(u + v)
    if isinstance(bundle, SigmaMatrix):
        return mat_mul(bundle.apply_word(u), bundle.apply_word(v)) == whole
    if isinstance(bundle, DeltaColumn):
        s = mat_vec(bundle.sigma.apply_word(u), bundle.apply_word(v))
        d = bundle.apply_word(u)
        rv = ring.word(v)
        return (s[0] + d[0] * rv, s[1] + d[1] * rv) == whole
    if isinstance(bundle, Endomorphism):
        return bundle.apply_word(u) * bundle.apply_word(v) == whole
    if isinstance(bundle, TwistedDerivation):
        return bundle.twist.apply_word(u) * bundle.apply_word(v) + bundle.apply_word(u) * ring.word(v) == whole
    return True
