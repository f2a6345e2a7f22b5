"""Exact scalars over the rationals or a prime field, plus dense linear solving.

Two representations coexist. :class:`Scalar` is the public, self-describing
value that refuses to mix fields. Inside the ring and extension engines the
same numbers travel as *raw* values (``Fraction`` for the rationals, ``int``
residues for F_p) and all arithmetic goes through the owning :class:`Field`,
which keeps the hot loops free of wrapper objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import DivisionByZero, FieldMismatch


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """The ground field: ``characteristic == 0`` means Q, otherwise F_p."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise ValueError(f"F_{self.characteristic}: modulus must be prime")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def zero(self):
        return Fraction(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.characteristic == 0 else 1

    def name(self) -> str:
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    # -- raw arithmetic -------------------------------------------------
    def coerce(self, value):
        """Turn ints, Fractions, strings or Scalars into a raw value of this field."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"{value.field.name()} value used in {self.name()}")
            return value.value
        if isinstance(value, str):
            return self.parse(value)
        p = self.characteristic
        if p == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise DivisionByZero(f"denominator {value.denominator} vanishes in F{p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        if isinstance(value, int):
            return value % p
        raise TypeError(f"cannot coerce {value!r} into {self.name()}")

    def add(self, a, b):
        p = self.characteristic
        return a + b if p == 0 else (a + b) % p

    def sub(self, a, b):
        p = self.characteristic
        return a - b if p == 0 else (a - b) % p

    def mul(self, a, b):
        p = self.characteristic
        return a * b if p == 0 else (a * b) % p

    def neg(self, a):
        p = self.characteristic
        return -a if p == 0 else (-a) % p

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        p = self.characteristic
        return 1 / Fraction(a) if p == 0 else pow(a, -1, p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self):
        """All elements of a prime field in residue order."""
        if self.characteristic == 0:
            raise ValueError("Q is infinite")
        return list(range(self.characteristic))

    # -- text -----------------------------------------------------------
    def parse(self, text: str):
        text = text.strip()
        if self.characteristic and text.endswith(f"mod {self.characteristic}"):
            text = text[: -len(f"mod {self.characteristic}")].strip()
        if "/" in text:
            num, den = text.split("/", 1)
            value = Fraction(int(num), int(den)) if int(den) else None
            if value is None:
                raise DivisionByZero(f"zero denominator in {text!r}")
            return self.coerce(value)
        return self.coerce(int(text))

    def serialize(self, a) -> str:
        """Report form: ``n/d`` over Q and ``r mod p`` over F_p."""
        if self.characteristic == 0:
            return f"{a.numerator}/{a.denominator}"
        return f"{a} mod {self.characteristic}"

    def render(self, a) -> str:
        """Compact human form: ``3``, ``-1/2``; residues print as integers."""
        if self.characteristic == 0:
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a)

    def is_negative(self, a) -> bool:
        return self.characteristic == 0 and a < 0

    def scalar(self, value) -> "Scalar":
        return Scalar(self, self.coerce(value))


QQ = Field(0)


@dataclass(frozen=True)
class Scalar:
    """An immutable field element in canonical form."""

    field: Field
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.coerce(self.value))

    def _other(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field.name()} vs {other.field.name()}")
            return other
        return Scalar(self.field, other)

    def __add__(self, other):
        o = self._other(other)
        return Scalar(self.field, self.field.add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return Scalar(self.field, self.field.sub(self.value, o.value))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        o = self._other(other)
        return Scalar(self.field, self.field.mul(self.value, o.value))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def inv(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        return self * self._other(other).inv()

    def __rtruediv__(self, other):
        return self._other(other) * self.inv()

    def __bool__(self):
        return bool(self.value)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.field.coerce(other)
            except DivisionByZero:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field.characteristic, self.value))

    def serialize(self) -> str:
        return self.field.serialize(self.value)

    def __str__(self):
        return self.field.render(self.value)

    def __repr__(self):
        return f"Scalar({self.serialize()!r})"


def scalar_arith(op: str, a: Scalar, b: Scalar | None = None) -> Scalar:
    """Dispatch ``add``, ``mul``, ``neg`` or ``inv`` on canonical scalars."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    raise ValueError(f"unknown scalar operation {op!r}")


@dataclass(frozen=True)
class ScalarMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries count must equal rows * cols")
        fields = {e.field for e in self.entries}
        if len(fields) > 1:
            raise FieldMismatch("matrix mixes fields")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence]) -> "ScalarMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        flat = tuple(field.scalar(x) for r in rows for x in r)
        return cls(len(rows), ncols, flat)

    @property
    def field(self) -> Field | None:
        return self.entries[0].field if self.entries else None

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r * self.cols + c]

    def row_lists(self):
        return [[self.entries[r * self.cols + c] for c in range(self.cols)] for r in range(self.rows)]


class LinearSolution(NamedTuple):
    solution: ScalarMatrix | None
    rank: int

    @property
    def consistent(self) -> bool:
        return self.solution is not None


def row_reduce(field: Field, rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of raw rows; pivots are chosen leftmost-first."""
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(x, inv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def solve_raw(field: Field, a: list[list], b: list) -> tuple[list | None, int]:
    """Solve ``a x = b`` over raw values; free variables are set to zero."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = row_reduce(field, aug)
    if n in pivots:
        return None, len(pivots) - 1
    x = [field.zero] * n
    for i, c in enumerate(pivots):
        x[c] = red[i][n]
    return x, len(pivots)


def rank_raw(field: Field, a: list[list]) -> int:
    if not a:
        return 0
    return len(row_reduce(field, a)[1])


def solve_linear(m: ScalarMatrix, rhs: ScalarMatrix) -> LinearSolution:
    """Exact Gaussian elimination for ``m x = rhs``.

    ``rhs`` may have several columns; the system is consistent only when every
    column is. The returned rank is that of ``m``.
    """
    if rhs.rows != m.rows:
        raise ValueError("rhs row count must equal matrix row count")
    if m.entries and rhs.entries and m.field != rhs.field:
        raise FieldMismatch("matrix and right-hand side live in different fields")
    field = m.field or rhs.field or QQ
    a = [[e.value for e in row] for row in m.row_lists()]
    rank = rank_raw(field, a) if m.cols else 0
    columns = []
    for k in range(rhs.cols):
        b = [rhs[i, k].value for i in range(rhs.rows)]
        x, _ = solve_raw(field, a, b) if m.cols else (None if any(b) else [], 0)
        if x is None:
            return LinearSolution(None, rank)
        columns.append(x)
    flat = tuple(Scalar(field, columns[k][i]) for i in range(m.cols) for k in range(rhs.cols))
    return LinearSolution(ScalarMatrix(m.cols, rhs.cols, flat), rank)
