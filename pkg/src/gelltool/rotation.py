"""Finite clock/shift models of rational rotation algebras.

Used as a floating-point oracle: the Rieffel projection built from the
q×q clock and shift matrices must be a projection whose normalised trace
is exactly the rotation number p/q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from gelltool.errors import GellError

LINEAR_TOL = 1e-12
PROJECTION_TOL = 1e-9
SPECTRUM_TOL = 1e-6


class RotationError(GellError, ValueError):
    pass


@dataclass(frozen=True)
class ClockShiftPair:
    p: int
    q: int
    U: np.ndarray
    V: np.ndarray

    @property
    def omega(self) -> complex:
        return np.exp(2j * np.pi * self.p / self.q)

    def relation_residual(self) -> float:
        """‖VU - ω·UV‖ (Frobenius)."""
        return float(np.linalg.norm(self.V @ self.U - self.omega * self.U @ self.V))


def clock_shift(p: int, q: int) -> ClockShiftPair:
    if not (1 <= p < q) or gcd(p, q) != 1:
        raise RotationError(f"need 1 <= p < q with gcd(p, q) = 1, got p={p}, q={q}")
    k = np.arange(q)
    u = np.diag(np.exp(2j * np.pi * p * k / q))
    # backward shift V e_k = e_{k-1}, which gives VU = ω·UV
    v = np.roll(np.eye(q, dtype=complex), -1, axis=0)
    return ClockShiftPair(p, q, u, v)


def bump_profile(theta: Fraction, eps: Fraction, t: Fraction) -> tuple[Fraction, Fraction]:
    """(f(t), f(t) - f(t)²) for the piecewise-linear bump; t in [0, 1)."""
    if t < eps:
        f = t / eps
    elif t <= theta:
        f = Fraction(1)
    elif t <= theta + eps:
        f = 1 - (t - theta) / eps
    else:
        f = Fraction(0)
    g2 = f - f * f if theta <= t <= theta + eps else Fraction(0)
    return f, g2


@dataclass(frozen=True)
class RieffelResult:
    p: int
    q: int
    eps: Fraction
    P: np.ndarray
    convention: str
    trace: float
    projection_residual: float
    selfadjoint_residual: float
    spectrum_gap: float

    def record(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "eps": str(self.eps),
            "convention": self.convention,
            "trace": self.trace,
            "trace_exact": str(Fraction(self.p, self.q)),
            "projection_residual": self.projection_residual,
            "selfadjoint_residual": self.selfadjoint_residual,
            "spectrum_gap": self.spectrum_gap,
        }


def _assemble(fdiag: np.ndarray, gdiag: np.ndarray, v: np.ndarray) -> np.ndarray:
    g = np.diag(gdiag)
    return g @ v + np.diag(fdiag) + v.conj().T @ g


def rieffel_projection(p: int, q: int, eps) -> RieffelResult:
    """P = g(U)V + f(U) + V*g(U) on the q-point spectrum grid.

    The shift convention is self-checked: if P² ≠ P under V, the result
    built with V* in its place is used instead; both failing is an error.
    """
    eps = Fraction(eps)
    if q < 2 or not (1 <= p < q) or gcd(p, q) != 1:
        raise RotationError(f"θ = {p}/{q} must be a reduced fraction in (0, 1)")
    theta = Fraction(p, q)
    if not (0 < eps <= min(theta, 1 - theta)):
        raise RotationError(f"eps = {eps} must lie in (0, min(θ, 1-θ)]")
    if (eps * q).denominator != 1:
        raise RotationError(f"eps = {eps} is not a multiple of 1/{q}")
    pair = clock_shift(p, q)
    # eigenvalue k of U sits at angle pk/q mod 1, and V moves k by one, i.e. the angle by θ
    grid = [bump_profile(theta, eps, Fraction(p * k % q, q)) for k in range(q)]
    fdiag = np.array([float(f) for f, _ in grid])
    gdiag = np.sqrt(np.array([float(g2) for _, g2 in grid]))
    trace = float(Fraction(sum(f for f, _ in grid), q))
    candidates = []
    for name, v in (("V", pair.V), ("V*", pair.V.conj().T)):
        mat = _assemble(fdiag, gdiag, v)
        res = float(np.linalg.norm(mat @ mat - mat))
        candidates.append((name, mat, res))
        if res <= PROJECTION_TOL:
            break
    name, mat, res = min(candidates, key=lambda c: c[2])
    if res > PROJECTION_TOL:
        raise RotationError(f"neither shift convention yields a projection (best residual {res:.3e})")
    herm = float(np.linalg.norm(mat - mat.conj().T))
    spectrum = np.linalg.eigvalsh((mat + mat.conj().T) / 2)
    gap = float(np.max(np.minimum(np.abs(spectrum), np.abs(spectrum - 1))))
    numeric_trace = float(np.real(np.trace(mat))) / q
    if abs(numeric_trace - trace) > LINEAR_TOL:
        raise RotationError(f"numeric trace {numeric_trace} drifted from {trace}")
    return RieffelResult(p, q, eps, mat, name, numeric_trace, res, herm, gap)


def rotation_isomorphic(theta, zeta) -> bool:
    """A_θ ≅ A_ζ for θ, ζ in [0, 1]: exactly when θ = ζ or θ = 1 - ζ."""
    theta, zeta = Fraction(theta), Fraction(zeta)
    for x in (theta, zeta):
        if not 0 <= x <= 1:
            raise RotationError(f"rotation parameter {x} outside [0, 1]")
    return theta == zeta or theta == 1 - zeta
