"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`; no
floating point is involved. The integer hot loops (Bareiss determinants,
minors, Smith normal form) dispatch to :mod:`gelltool.kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

from gelltool import kernels
from gelltool.errors import DimensionError, SymmetryError


class Matrix:
    """Immutable dense matrix with exact entries (int, Fraction, or any ring element)."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(r) for r in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged matrix rows")
        self._data = rows
        self.rows = len(rows)
        self.cols = cols
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(((int(i == j) for j in range(n)) for i in range(n)), cols=n)

    @classmethod
    def diag(cls, *values) -> Matrix:
        n = len(values)
        return cls(((values[i] if i == j else 0 for j in range(n)) for i in range(n)), cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls(((0,) * cols for _ in range(rows)), cols=cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def __iter__(self):
        return iter(self._data)

    def tolist(self) -> list[list]:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def T(self) -> Matrix:
        return Matrix(zip(*self._data), cols=self.rows) if self.rows else Matrix((), cols=0)

    def is_integral(self) -> bool:
        return all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)
                   for r in self._data for x in r)

    def to_int(self) -> Matrix:
        if not self.is_integral():
            raise DimensionError("matrix has non-integer entries")
        return Matrix(((int(x) for x in r) for r in self._data), cols=self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix(((self._data[i][j] for j in cols) for i in rows), cols=len(cols))

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self.is_integral() and other.is_integral():
            return Matrix(kernels.matmul(self.to_int().tolist(), other.to_int().tolist()),
                          cols=other.cols)
        cols_b = list(zip(*other._data))
        return Matrix(((sum((x * y for x, y in zip(r, c)), 0) for c in cols_b)
                       for r in self._data), cols=other.cols)

    def __mul__(self, scalar) -> Matrix:
        return Matrix(((scalar * x for x in r) for r in self._data), cols=self.cols)

    __rmul__ = __mul__

    def __neg__(self) -> Matrix:
        return self * -1

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return Matrix(((x + y for x, y in zip(r, s)) for r, s in zip(self._data, other._data)),
                      cols=self.cols)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        return f"Matrix({[list(map(str, r)) for r in self._data]})"


def as_matrix(a) -> Matrix:
    return a if isinstance(a, Matrix) else Matrix(a)


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    out = [[0] * m for _ in range(n)]
    r = c = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r + i][c + j] = b[i, j]
        r += b.rows
        c += b.cols
    return Matrix(out, cols=m)


# ---------------------------------------------------------------- determinants

def _require_square(a: Matrix, what: str) -> None:
    if not a.is_square:
        raise DimensionError(f"{what} needs a square matrix, got {a.rows}x{a.cols}")


def determinant(a) -> int | Fraction:
    """Exact determinant. Integer input goes through Bareiss elimination;
    rational input is cleared of denominators row by row first."""
    a = as_matrix(a)
    _require_square(a, "determinant")
    if a.is_integral():
        return kernels.det_int(a.to_int().tolist())
    scale = Fraction(1)
    rows = []
    for r in a:
        den = lcm(*(Fraction(x).denominator for x in r)) if r else 1
        rows.append([int(Fraction(x) * den) for x in r])
        scale /= den
    value = kernels.det_int(rows) * scale
    return int(value) if value.denominator == 1 else value


def inverse(a) -> Matrix:
    """Exact inverse over Q by Gauss-Jordan elimination."""
    a = as_matrix(a)
    _require_square(a, "inverse")
    n = a.rows
    m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(a)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise DimensionError("matrix is singular")
        m[k], m[piv] = m[piv], m[k]
        p = m[k][k]
        m[k] = [x / p for x in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return Matrix((_normalize(x) for x in r[n:]) for r in m)


def _normalize(x: Fraction):
    return int(x) if x.denominator == 1 else x


def solve_integral(a, b) -> Matrix | None:
    """Return the integer X with a·X = b, or None when X is not integral."""
    x = inverse(a) @ as_matrix(b)
    return x.to_int() if x.is_integral() else None


# ---------------------------------------------------------------- Smith form

def smith_normal_form(a) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ a @ V == D`` and U, V unimodular.

    D is diagonal with nonnegative entries d1 | d2 | ... ; the pivot is the
    smallest nonzero absolute value in the active block, ties broken by the
    lowest (row, col).

    >>> _, d, _ = smith_normal_form(Matrix.diag(2, 3))
    >>> [d[i, i] for i in range(2)]
    [1, 6]
    """
    a = as_matrix(a).to_int()
    if a.rows == 0 or a.cols == 0:
        return Matrix.identity(a.rows), a, Matrix.identity(a.cols)
    u, d, v = kernels.snf(a.tolist())
    return Matrix(u), Matrix(d, cols=a.cols), Matrix(v)


def invariant_factors(a) -> list[int]:
    _, d, _ = smith_normal_form(a)
    return [d[i, i] for i in range(min(d.rows, d.cols))]


# ---------------------------------------------------------------- exterior algebra

def subsets(n: int, k: int) -> list[tuple[int, ...]]:
    """k-subsets of {1..n} in lexicographic order, 1-based."""
    return [tuple(i + 1 for i in c) for c in combinations(range(n), k)]


def exterior_power(a, k: int) -> Matrix:
    """Matrix of ``Λ^k a`` in the lex-ordered basis of k-subsets.

    Entry (S, T) is the minor ``det a[S, T]``.
    """
    a = as_matrix(a).to_int()
    _require_square(a, "exterior_power")
    n = a.rows
    if not 0 <= k <= n:
        raise DimensionError(f"degree {k} out of range for a {n}x{n} matrix")
    idx = list(combinations(range(n), k))
    return Matrix(kernels.minors(a.tolist(), idx, idx), cols=len(idx))


# ---------------------------------------------------------------- Pfaffians

def check_skew(s: Matrix) -> None:
    if not s.is_square:
        raise SymmetryError(f"skew matrix must be square, got {s.rows}x{s.cols}")
    for i in range(s.rows):
        if s[i, i] != 0:
            raise SymmetryError(f"nonzero diagonal entry at ({i}, {i})")
        for j in range(i + 1, s.rows):
            if s[i, j] != -s[j, i]:
                raise SymmetryError(f"entries ({i}, {j}) and ({j}, {i}) are not opposite")


def pfaffian(s):
    """Exact Pfaffian by first-row expansion, memoized on the remaining index set.

    Works over any commutative ring whose elements support ``+``, ``-`` and
    ``*`` (ints, Fractions, :class:`gelltool.twist.ThetaLinear`). The empty
    matrix has Pfaffian 1 and odd dimension gives 0.
    """
    s = as_matrix(s)
    check_skew(s)
    n = s.rows
    if n % 2:
        return 0
    memo: dict[tuple[int, ...], object] = {}

    def pf(idx: tuple[int, ...]):
        if not idx:
            return 1
        hit = memo.get(idx)
        if hit is not None:
            return hit
        i, rest = idx[0], idx[1:]
        total = 0
        for p, j in enumerate(rest):
            entry = s[i, j]
            if entry == 0:
                continue
            term = entry * pf(rest[:p] + rest[p + 1:])
            total = total + term if p % 2 == 0 else total - term
        memo[idx] = total
        return total

    value = pf(tuple(range(n)))
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def pfaffian_minor(s, index_set: Iterable[int]):
    """Pfaffian of the principal submatrix on ``index_set`` (1-based, any order)."""
    s = as_matrix(s)
    idx = sorted(set(index_set))
    if len(idx) % 2:
        raise DimensionError(f"index set {tuple(idx)} has odd cardinality")
    if idx and (idx[0] < 1 or idx[-1] > s.rows):
        raise DimensionError(f"index set {tuple(idx)} out of range 1..{s.rows}")
    check_skew(s)
    if not idx:
        return 1
    zero_based = [i - 1 for i in idx]
    return pfaffian(s.submatrix(zero_based, zero_based))


# ---------------------------------------------------------------- subgroups of Q

@dataclass(frozen=True, order=True)
class SubgroupOfQ:
    """A finitely generated (hence cyclic) subgroup ``generator·Z`` of Q."""

    generator: Fraction = Fraction(0)

    def __post_init__(self):
        g = abs(Fraction(self.generator))
        object.__setattr__(self, "generator", g)

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        if self.generator == 0:
            return x == 0
        return (x / self.generator).denominator == 1

    def join(self, other: SubgroupOfQ) -> SubgroupOfQ:
        return subgroup_generator([self.generator, other.generator])

    __add__ = join

    def issubgroup(self, other: SubgroupOfQ) -> bool:
        return self.generator in other

    def __str__(self) -> str:
        g = self.generator
        if g == 0:
            return "0"
        if g == 1:
            return "Z"
        return f"({g})Z"


def subgroup_generator(gens: Iterable) -> SubgroupOfQ:
    """Nonnegative generator of the subgroup of Q spanned by ``gens``."""
    fracs = [Fraction(g) for g in gens]
    fracs = [f for f in fracs if f != 0]
    if not fracs:
        return SubgroupOfQ(Fraction(0))
    den = lcm(*(f.denominator for f in fracs))
    num = reduce(gcd, (abs(f.numerator) * (den // f.denominator) for f in fracs))
    return SubgroupOfQ(Fraction(num, den))


# ---------------------------------------------------------------- Steinitz numbers

def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    from sympy import factorint

    return {int(p): int(e) for p, e in factorint(n).items()}


@dataclass(frozen=True)
class SupernaturalNumber:
    """Formal product of prime powers with exponents in N ∪ {∞}.

    ``finite`` holds (prime, exponent) pairs with 0 < exponent < ∞, sorted by
    prime; ``infinite`` the sorted primes of infinite exponent. The two never
    share a prime.
    """

    finite: tuple[tuple[int, int], ...] = ()
    infinite: tuple[int, ...] = ()

    @classmethod
    def from_parts(cls, finite: dict[int, int], infinite: Iterable[int] = ()) -> SupernaturalNumber:
        inf = tuple(sorted(set(infinite)))
        fin = tuple(sorted((p, e) for p, e in finite.items() if e and p not in inf))
        return cls(fin, inf)

    @classmethod
    def of(cls, n: int) -> SupernaturalNumber:
        return cls.from_parts(factorize(n))

    def exponent(self, p: int) -> int | float:
        if p in self.infinite:
            return float("inf")
        return dict(self.finite).get(p, 0)

    @property
    def is_finite(self) -> bool:
        return not self.infinite

    @property
    def finite_value(self) -> int:
        """Integer value of the finite part."""
        out = 1
        for p, e in self.finite:
            out *= p ** e
        return out

    def __mul__(self, other: SupernaturalNumber) -> SupernaturalNumber:
        fin = dict(self.finite)
        for p, e in other.finite:
            fin[p] = fin.get(p, 0) + e
        return SupernaturalNumber.from_parts(fin, self.infinite + other.infinite)

    def __str__(self) -> str:
        parts = [(p, f"{p}^∞") for p in self.infinite]
        parts += [(p, str(p) if e == 1 else f"{p}^{e}") for p, e in self.finite]
        if not parts:
            return "1"
        return "·".join(s for _, s in sorted(parts))


def steinitz(indices: Iterable[int], periodic_tail: Iterable[int] | None = None) -> SupernaturalNumber:
    """Steinitz number of the index sequence ``indices`` followed by ``periodic_tail`` repeated forever."""
    fin: dict[int, int] = {}
    for n in indices:
        if n < 1:
            raise ValueError(f"index {n} must be >= 1")
        for p, e in factorize(n).items():
            fin[p] = fin.get(p, 0) + e
    inf: set[int] = set()
    for n in periodic_tail or ():
        if n < 1:
            raise ValueError(f"index {n} must be >= 1")
        inf.update(factorize(n))
    return SupernaturalNumber.from_parts(fin, inf)
