"""Cocycle twists by a skew-symmetric form Θ.

The 2-cocycle is σ(m, n) = exp(-πi·mᵀΘn); phases are kept as exact
exponents mod 2 and never turned into complex numbers.

For d = 2 a symbolic mode represents Θ = θ·J with θ a formal parameter;
values are then :class:`ThetaLinear` numbers a + bθ.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Sequence

from gelltool.errors import DimensionError, SymmetryError
from gelltool.exact import Matrix, as_matrix, check_skew, determinant, pfaffian_minor

PROFILE_DIMENSION_BOUND = 8


@dataclass(frozen=True)
class ThetaLinear:
    """The number a + b·θ for a formal parameter θ (a, b rational).

    Closed under addition and rational scaling; a product of two terms that
    both involve θ is rejected, since θ² has no representation here.
    """

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def lift(cls, x) -> ThetaLinear:
        return x if isinstance(x, ThetaLinear) else cls(Fraction(x), Fraction(0))

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __add__(self, other):
        if not isinstance(other, (ThetaLinear, Rational)):
            return NotImplemented
        o = ThetaLinear.lift(other)
        return ThetaLinear(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return ThetaLinear(-self.a, -self.b)

    def __sub__(self, other):
        if not isinstance(other, (ThetaLinear, Rational)):
            return NotImplemented
        return self + (-ThetaLinear.lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return ThetaLinear(self.a * other, self.b * other)
        if isinstance(other, ThetaLinear):
            if self.b and other.b:
                raise ArithmeticError("θ² is not representable in the linear symbolic mode")
            return ThetaLinear(self.a * other.a, self.a * other.b + self.b * other.a)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return ThetaLinear(self.a / other, self.b / other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, ThetaLinear):
            return self.a == other.a and self.b == other.b
        if isinstance(other, Rational):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash((self.a, self.b))

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        theta = "θ" if self.b == 1 else f"-θ" if self.b == -1 else f"{self.b}θ"
        if self.a == 0:
            return theta
        return f"{self.a} + {theta}" if not theta.startswith("-") else f"{self.a} - {theta[1:]}"


THETA = ThetaLinear(0, 1)


@dataclass(frozen=True)
class SkewForm:
    d: int
    matrix: Matrix

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (self.d, self.d):
            raise DimensionError(f"form has shape {m.shape}, expected ({self.d}, {self.d})")
        check_skew(m)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def zero(cls, d: int) -> SkewForm:
        return cls(d, Matrix.zeros(d, d))

    @classmethod
    def from_upper(cls, d: int, entries: Sequence) -> SkewForm:
        """Build Θ from its strictly upper entries θ_12, θ_13, ..., θ_1d, θ_23, ... (row-major)."""
        pairs = list(combinations(range(d), 2))
        if len(entries) != len(pairs):
            raise DimensionError(f"rank {d} needs {len(pairs)} upper entries, got {len(entries)}")
        m = [[Fraction(0)] * d for _ in range(d)]
        for (i, j), x in zip(pairs, entries):
            x = x if isinstance(x, ThetaLinear) else Fraction(x)
            m[i][j] = x
            m[j][i] = -x
        return cls(d, Matrix(m))

    @classmethod
    def standard(cls, theta) -> SkewForm:
        """θ·J on Z^2."""
        return cls.from_upper(2, [theta])

    @classmethod
    def symbolic(cls) -> SkewForm:
        """θ·J on Z^2 with θ formal."""
        return cls.standard(THETA)

    @property
    def is_symbolic(self) -> bool:
        return any(isinstance(x, ThetaLinear) and not x.is_rational for r in self.matrix for x in r)

    def upper(self) -> list:
        return [self.matrix[i, j] for i, j in combinations(range(self.d), 2)]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.matrix for x in r)


@dataclass(frozen=True)
class PhaseExponent:
    """Exponent r of the phase exp(-πi·r), reduced into [0, 2)."""

    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r) % 2)

    def __add__(self, other: PhaseExponent) -> PhaseExponent:
        return PhaseExponent(self.r + other.r)


def _bilinear(theta: SkewForm, m: Sequence[int], n: Sequence[int]):
    if len(m) != theta.d or len(n) != theta.d:
        raise DimensionError(f"vectors of length {len(m)}, {len(n)} in rank {theta.d}")
    total = 0
    for i in range(theta.d):
        if m[i]:
            for j in range(theta.d):
                total = total + m[i] * theta.matrix[i, j] * n[j]
    return total


def cocycle(theta: SkewForm, m: Sequence[int], n: Sequence[int]) -> PhaseExponent:
    """σ(m, n) as the exponent mᵀΘn mod 2."""
    if theta.is_symbolic:
        raise TypeError("phase exponents need a rational form")
    return PhaseExponent(_bilinear(theta, m, n))


def cocycle_identity_check(theta: SkewForm, m, n, k) -> bool:
    """2-cocycle identity σ(m,n)σ(m+n,k) = σ(m,n+k)σ(n,k) plus normalisation, exactly."""
    mn = [x + y for x, y in zip(m, n)]
    nk = [x + y for x, y in zip(n, k)]
    zero = [0] * theta.d
    lhs = cocycle(theta, m, n) + cocycle(theta, mn, k)
    rhs = cocycle(theta, m, nk) + cocycle(theta, n, k)
    normalised = all(cocycle(theta, a, b).r == 0 for a, b in ((m, zero), (zero, n), (zero, k)))
    return lhs == rhs and normalised


def even_subsets(d: int) -> list[tuple[int, ...]]:
    """Even-cardinality subsets of {1..d}, by size then lexicographically; () first."""
    return [tuple(i + 1 for i in c) for k in range(0, d + 1, 2) for c in combinations(range(d), k)]


def pfaffian_profile(theta: SkewForm, bound: int = PROFILE_DIMENSION_BOUND) -> dict[tuple[int, ...], object]:
    if theta.d > bound:
        raise DimensionError(f"profile of a rank-{theta.d} form exceeds the bound {bound}")
    return {i: pfaffian_minor(theta.matrix, i) for i in even_subsets(theta.d)}


def restricted_form(theta: SkewForm, basis) -> SkewForm:
    """The form BᵀΘB carried by the sublattice with basis B."""
    b = as_matrix(basis)
    if b.shape != (theta.d, theta.d):
        raise DimensionError(f"basis has shape {b.shape}, expected ({theta.d}, {theta.d})")
    if determinant(b) == 0:
        raise DimensionError("basis is singular")
    try:
        return SkewForm(theta.d, b.T @ theta.matrix @ b)
    except SymmetryError as exc:  # impossible for exact arithmetic
        raise AssertionError("congruence lost skew-symmetry") from exc
