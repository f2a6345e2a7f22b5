"""Finitely presented algebras k<x1..xg>/(relations) via a terminating rewrite system.

Words are tuples of generator indices. The term order is degree-lexicographic
where letters compare by a declared precedence (default ``x1 < x2 < ...``).
Each rule rewrites a word of length >= 2 into a combination of strictly
smaller words, so reduction terminates; normal forms are memoized per ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import InvalidPresentation, NonTerminating, RingMismatch
from .exactfield import QQ, Field, Scalar
from .expr import evaluate, parse_expression
from .errors import ResolutionError

Word = tuple

DEFAULT_STEP_CAP = 10**6


def render_word(word: Word, names: Sequence[str]) -> str:
    """``(0, 0, 1)`` renders as ``x1^2*x2``; the empty word renders as ``1``."""
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        n = j - i
        parts.append(names[word[i]] if n == 1 else f"{names[word[i]]}^{n}")
        i = j
    return "*".join(parts)


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: tuple  # sorted ((word, raw coefficient), ...)

    @classmethod
    def make(cls, lhs: Sequence[int], rhs: Mapping[Word, object], field: Field) -> "RewriteRule":
        clean = {}
        for w, c in rhs.items():
            c = field.coerce(c)
            if c:
                clean[tuple(w)] = c
        return cls(tuple(lhs), tuple(sorted(clean.items())))


class PresentedRing:
    """An immutable presentation with a memoized normal-form oracle."""

    def __init__(
        self,
        field: Field,
        gens: Sequence[str],
        rules: Iterable[RewriteRule] = (),
        precedence: Sequence[int] | None = None,
        step_cap: int = DEFAULT_STEP_CAP,
    ):
        self.field = field
        self.gens = tuple(gens)
        if len(set(self.gens)) != len(self.gens):
            raise InvalidPresentation("generator names must be distinct")
        ng = len(self.gens)
        self.precedence = tuple(precedence) if precedence is not None else tuple(range(ng))
        if sorted(self.precedence) != list(range(ng)):
            raise InvalidPresentation("precedence must order every generator exactly once")
        self._rank = [0] * ng
        for r, g in enumerate(self.precedence):
            self._rank[g] = r
        self.step_cap = step_cap
        self.rules: dict[Word, tuple] = {}
        for rule in rules:
            self._add_rule(rule)
        self._lengths = sorted({len(l) for l in self.rules})
        self._nf: dict[Word, dict] = {}
        self._steps = 0
        self.one = RingElement(self, {(): field.one})
        self.zero = RingElement(self, {})

    def _add_rule(self, rule: RewriteRule):
        ng = len(self.gens)
        lhs = rule.lhs
        if len(lhs) < 2:
            raise InvalidPresentation("rule left-hand sides must have length at least 2")
        for w, _ in rule.rhs:
            if any(not 0 <= i < ng for i in w):
                raise InvalidPresentation("rule mentions an unknown generator")
        if any(not 0 <= i < ng for i in lhs):
            raise InvalidPresentation("rule mentions an unknown generator")
        if lhs in self.rules:
            raise InvalidPresentation(f"two rules share the left-hand side {self.render_word(lhs)}")
        for w, _ in rule.rhs:
            if not self.word_less(w, lhs):
                raise InvalidPresentation(
                    f"rule {self.render_word(lhs)} -> ... is not order-decreasing "
                    f"({self.render_word(w)} is not smaller)"
                )
        self.rules[lhs] = rule.rhs

    # -- order and words ---------------------------------------------------
    def word_key(self, w: Word):
        return (len(w), tuple(self._rank[i] for i in w))

    def word_less(self, a: Word, b: Word) -> bool:
        return self.word_key(a) < self.word_key(b)

    def render_word(self, w: Word) -> str:
        return render_word(w, self.gens)

    def gen_index(self, name: str) -> int:
        try:
            return self.gens.index(name)
        except ValueError:
            raise KeyError(name) from None

    def gen(self, name_or_index) -> "RingElement":
        i = name_or_index if isinstance(name_or_index, int) else self.gen_index(name_or_index)
        return RingElement(self, {(i,): self.field.one})

    def word(self, w: Word) -> "RingElement":
        return RingElement(self, self.nf_word(tuple(w)))

    def scalar(self, value) -> "RingElement":
        c = self.field.coerce(value)
        return RingElement(self, {(): c} if c else {})

    def is_reducible(self, w: Word) -> bool:
        return self._find_redex(w) is not None

    def _find_redex(self, w: Word):
        """Leftmost start position; at equal starts the shortest (innermost) lhs."""
        rules = self.rules
        for i in range(len(w)):
            for L in self._lengths:
                if i + L > len(w):
                    break
                sub = w[i : i + L]
                if sub in rules:
                    return i, sub
        return None

    # -- normal forms --------------------------------------------------------
    def nf_word(self, w: Word) -> dict:
        """Normal form of one word as ``{word: raw}`` (shared; do not mutate)."""
        cached = self._nf.get(w)
        if cached is not None:
            return cached
        self._steps = 0
        return self._nf_word(w)

    def _nf_word(self, w: Word) -> dict:
        cached = self._nf.get(w)
        if cached is not None:
            return cached
        hit = self._find_redex(w)
        if hit is None:
            out = {w: self.field.one}
        else:
            self._steps += 1
            if self._steps > self.step_cap:
                raise NonTerminating(f"normalization exceeded {self.step_cap} rewrite steps")
            i, lhs = hit
            pre, post = w[:i], w[i + len(lhs) :]
            f = self.field
            out: dict = {}
            for v, c in self.rules[lhs]:
                for u, d in self._nf_word(pre + v + post).items():
                    s = f.add(out.get(u, f.zero), f.mul(c, d))
                    if s:
                        out[u] = s
                    else:
                        out.pop(u, None)
        self._nf[w] = out
        return out

    def normalize(self, raw: Mapping[Word, object] | Iterable[tuple[Word, object]]) -> "RingElement":
        """Normal form of a formal combination of (possibly reducible) words."""
        items = raw.items() if isinstance(raw, Mapping) else raw
        f = self.field
        out: dict = {}
        self._steps = 0
        for w, c in items:
            c = f.coerce(c)
            if not c:
                continue
            for u, d in self._nf_word(tuple(w)).items():
                s = f.add(out.get(u, f.zero), f.mul(c, d))
                if s:
                    out[u] = s
                else:
                    out.pop(u, None)
        return RingElement(self, out)

    def element(self, text: str) -> "RingElement":
        """Parse ``"x1*x2 + 1/2*x1^2"`` into a normalized element."""
        node = parse_expression(text)

        def name(n, line, col):
            if n in self.gens:
                return self.gen(n)
            raise ResolutionError(f"unknown generator {n!r}", line, col)

        return evaluate(node, lambda q: self.scalar(q), name)

    def __repr__(self):
        rels = ", ".join(
            f"{self.render_word(l)} -> {RingElement(self, dict(r)).render()}" for l, r in self.rules.items()
        )
        return f"PresentedRing({self.field.name()}, {list(self.gens)}, [{rels}])"

    @property
    def is_commutative_presentation(self) -> bool:
        return len(self.gens) <= 1 and not self.rules


class RingElement:
    """Normal-form element: a map from irreducible words to nonzero raw scalars."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PresentedRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # construction helpers
    def _same(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                raise RingMismatch("elements belong to different rings")
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return self.ring.scalar(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        f = self.ring.field
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = f.add(out.get(w, f.zero), c)
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return RingElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return RingElement(self.ring, {w: f.neg(c) for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        other = self._same(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        f = ring.field
        out: dict = {}
        for u, c in self.terms.items():
            for v, d in other.terms.items():
                cd = f.mul(c, d)
                for w, e in ring.nf_word(u + v).items():
                    s = f.add(out.get(w, f.zero), f.mul(cd, e))
                    if s:
                        out[w] = s
                    else:
                        out.pop(w, None)
        return RingElement(ring, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def scale(self, s) -> "RingElement":
        f = self.ring.field
        c = f.coerce(s)
        if not c:
            return self.ring.zero
        return RingElement(self.ring, {w: f.mul(c, d) for w, d in self.terms.items()})

    def __pow__(self, n: int):
        out = self.ring.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring is other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, Scalar)):
            return self == self.ring.scalar(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # inspection
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def constant(self):
        return self.terms.get((), self.ring.field.zero)

    def is_scalar(self) -> bool:
        return all(not w for w in self.terms)

    def sorted_terms(self, descending: bool = True):
        key = self.ring.word_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=descending)

    def render(self) -> str:
        """Canonical text, largest term first: ``x1*x2 + x1^2``."""
        return render_terms(
            ((self.ring.render_word(w), c) for w, c in self.sorted_terms()), self.ring.field
        )

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"RingElement({self.render()!r})"


def render_terms(pairs, field: Field) -> str:
    """Join ``(monomial text, raw coefficient)`` pairs into a signed sum."""
    out = []
    for mono, c in pairs:
        neg = field.is_negative(c)
        mag = field.neg(c) if neg else c
        if mono == "1":
            body = field.render(mag)
        elif mag == field.one:
            body = mono
        else:
            body = f"{field.render(mag)}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) if out else "0"


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    if a.ring is not b.ring:
        raise RingMismatch("elements belong to different rings")
    return a + b


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    if a.ring is not b.ring:
        raise RingMismatch("elements belong to different rings")
    return a * b


def ring_scale(s, a: RingElement) -> RingElement:
    if isinstance(s, Scalar) and s.field != a.ring.field:
        from .errors import FieldMismatch

        raise FieldMismatch("scalar and element live over different fields")
    return a.scale(s)


def normalize(ring: PresentedRing, raw) -> RingElement:
    return ring.normalize(raw)


def ring_basis(ring: PresentedRing, max_degree: int) -> list[Word]:
    """Irreducible words of length <= max_degree in increasing term order."""
    level = [()]
    out = [()]
    ng = len(ring.gens)
    for _ in range(max_degree):
        nxt = []
        for w in level:
            for g in range(ng):
                cand = w + (g,)
                if not _suffix_reducible(ring, cand):
                    nxt.append(cand)
        nxt.sort(key=ring.word_key)
        out.extend(nxt)
        level = nxt
    return out


def _suffix_reducible(ring: PresentedRing, w: Word) -> bool:
    # ``w[:-1]`` is irreducible, so only subwords ending at the last letter matter
    for L in ring._lengths:
        if L <= len(w) and w[len(w) - L :] in ring.rules:
            return True
    return False


@dataclass(frozen=True)
class CriticalPair:
    word: Word
    left: RingElement
    right: RingElement

    def render(self) -> str:
        r = self.left.ring
        return f"{r.render_word(self.word)}: {self.left.render()} != {self.right.render()}"


def _rewrite_at(ring: PresentedRing, w: Word, pos: int, lhs: Word) -> RingElement:
    pre, post = w[:pos], w[pos + len(lhs) :]
    return ring.normalize([(pre + v + post, c) for v, c in ring.rules[lhs]])


def check_local_confluence(ring: PresentedRing, max_overlap_len: int) -> list[CriticalPair]:
    """Resolve every overlap and inclusion ambiguity up to the length bound."""
    bad = []
    seen = set()
    lhss = sorted(ring.rules, key=ring.word_key)
    for a, b in product(lhss, repeat=2):
        candidates = []
        # overlap: proper suffix of a equals proper prefix of b
        for k in range(1, min(len(a), len(b))):
            if a[len(a) - k :] == b[:k]:
                candidates.append((a + b[k:], 0, len(a) - k))
        # inclusion: b occurs strictly inside a
        if a != b:
            for i in range(len(a) - len(b) + 1):
                if a[i : i + len(b)] == b:
                    candidates.append((a, 0, i))
        for w, pa, pb in candidates:
            if len(w) > max_overlap_len or (w, a, b, pb) in seen:
                continue
            seen.add((w, a, b, pb))
            left = _rewrite_at(ring, w, pa, a)
            right = _rewrite_at(ring, w, pb, b)
            if left != right:
                bad.append(CriticalPair(w, left, right))
    return bad


def make_ring(
    field: Field,
    gens: Sequence[str],
    relations: Mapping[str, str] | Sequence[tuple[str, str]] = (),
    order: Sequence[str] | None = None,
) -> PresentedRing:
    """Build a ring from relations written as text, e.g. ``{"x2*x1": "x1*x2 + x1^2"}``.

    Each left side must be a single word; right sides are evaluated in the
    free algebra on the same generators.
    """
    free = PresentedRing(field, gens)
    items = relations.items() if isinstance(relations, Mapping) else relations
    rules = []
    for lhs_text, rhs_text in items:
        lhs = free.element(lhs_text)
        if len(lhs.terms) != 1 or next(iter(lhs.terms.values())) != field.one:
            raise InvalidPresentation(f"left side {lhs_text!r} must be a single monic word")
        (lw,) = lhs.terms
        rhs = free.element(rhs_text)
        rules.append(RewriteRule.make(lw, rhs.terms, field))
    precedence = [gens.index(g) for g in order] if order else None
    return PresentedRing(field, gens, rules, precedence)


def free_ring(field: Field = QQ, gens: Sequence[str] = ("x1", "x2")) -> PresentedRing:
    return PresentedRing(field, gens)
