"""Z^d-odometers as towers of nested finite-index sublattices.

Stage j of a tower is the sublattice Γ_j = B_j·Z^d with B_j = M_1·M_2···M_j
(B_0 = I). The odometer is the inverse limit of the finite groups
Z^d/Γ_j with coset translation; clopen cylinders are single cosets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from gelltool.errors import DimensionError, TowerError
from gelltool.exact import (
    Matrix,
    SubgroupOfQ,
    SupernaturalNumber,
    as_matrix,
    determinant,
    inverse,
    smith_normal_form,
    solve_integral,
    steinitz,
    subgroup_generator,
)


@dataclass(frozen=True)
class OdometerSpec:
    """Tower of step matrices, optionally followed by a periodic tail.

    With a tail the tower has unbounded depth; step ``len(steps) + i`` (i ≥ 1)
    is ``tail[(i - 1) % len(tail)]``.
    """

    d: int
    steps: tuple[Matrix, ...] = ()
    tail: tuple[Matrix, ...] = ()

    def __post_init__(self):
        if self.d < 1:
            raise DimensionError(f"rank must be >= 1, got {self.d}")
        steps = tuple(as_matrix(m).to_int() for m in self.steps)
        tail = tuple(as_matrix(m).to_int() for m in self.tail)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "tail", tail)
        for where, mats in (("steps", steps), ("tail", tail)):
            for i, m in enumerate(mats):
                if m.shape != (self.d, self.d):
                    raise DimensionError(f"{where}[{i}] has shape {m.shape}, expected ({self.d}, {self.d})")
                if determinant(m) == 0:
                    raise TowerError(f"{where}[{i}] is singular", stage=i + 1)

    @classmethod
    def trivial(cls, d: int) -> OdometerSpec:
        return cls(d)

    @classmethod
    def constant(cls, step, depth: int = 0, periodic: bool = True) -> OdometerSpec:
        """Tower with every step equal to ``step``: ``depth`` explicit steps plus an optional periodic tail."""
        m = as_matrix(step)
        return cls(m.rows, (m,) * depth, (m,) if periodic else ())

    @property
    def depth(self) -> int | None:
        """Number of stages beyond 0, or None when a periodic tail makes it unbounded."""
        return None if self.tail else len(self.steps)

    @property
    def degenerate(self) -> bool:
        """True when every step is unimodular: the action is then not free on a Cantor set."""
        return all(abs(determinant(m)) == 1 for m in self.steps + self.tail)

    def check_stage(self, j: int) -> None:
        if j < 0:
            raise TowerError(f"stage {j} is negative", stage=j)
        if self.depth is not None and j > self.depth:
            raise TowerError(f"stage {j} beyond tower depth {self.depth}", stage=j)

    def step(self, j: int) -> Matrix:
        """Step matrix M_j for j >= 1."""
        if j < 1:
            raise TowerError(f"step index {j} must be >= 1", stage=j)
        self.check_stage(j)
        if j <= len(self.steps):
            return self.steps[j - 1]
        return self.tail[(j - len(self.steps) - 1) % len(self.tail)]

    def basis(self, j: int) -> Matrix:
        """B_j = M_1···M_j, whose columns span Γ_j."""
        self.check_stage(j)
        return _basis(self, j)

    def between(self, j: int, k: int) -> Matrix:
        """M_{j+1}···M_k, so that B_k = B_j·between(j, k)."""
        if k < j:
            raise TowerError(f"stage {k} precedes stage {j}", stage=k)
        self.check_stage(k)
        out = Matrix.identity(self.d)
        for i in range(j + 1, k + 1):
            out = out @ self.step(i)
        return out

    def oriented_index(self, j: int) -> int:
        """det B_j; its absolute value is the index [Z^d : Γ_j]."""
        self.check_stage(j)
        return _oriented_index(self, j)


@lru_cache(maxsize=4096)
def _basis(spec: OdometerSpec, j: int) -> Matrix:
    if j == 0:
        return Matrix.identity(spec.d)
    return _basis(spec, j - 1) @ spec.step(j)


@lru_cache(maxsize=4096)
def _oriented_index(spec: OdometerSpec, j: int) -> int:
    if j == 0:
        return 1
    return _oriented_index(spec, j - 1) * determinant(spec.step(j))


def index_at(spec: OdometerSpec, j: int) -> int:
    """[Z^d : Γ_j], the product of |det M_i| over i <= j."""
    return abs(spec.oriented_index(j))


@lru_cache(maxsize=1024)
def _snf_of_basis(spec: OdometerSpec, j: int):
    u, dmat, _ = smith_normal_form(spec.basis(j))
    factors = tuple(dmat[i, i] for i in range(spec.d))
    return u, inverse(u).to_int(), factors


def quotient_structure(spec: OdometerSpec, j: int) -> list[int]:
    """Invariant factors of Z^d/Γ_j (ones included), read off the Smith form of B_j."""
    spec.check_stage(j)
    return list(_snf_of_basis(spec, j)[2])


def validate_tower(bases: Sequence) -> OdometerSpec:
    """Build a spec from explicit bases B_0, B_1, ... by solving B_j·X = B_{j+1} over Z.

    When the first basis is not the identity it is taken as the first step
    out of Γ_0 = Z^d. A failure reports the list index of the first basis
    whose lattice is not contained in its predecessor's.
    """
    mats = [as_matrix(b).to_int() for b in bases]
    if not mats:
        raise TowerError("empty tower")
    d = mats[0].rows
    for i, b in enumerate(mats):
        if b.shape != (d, d):
            raise DimensionError(f"basis {i} has shape {b.shape}, expected ({d}, {d})")
        if determinant(b) == 0:
            raise TowerError(f"basis {i} is singular", stage=i)
    steps = [] if mats[0] == Matrix.identity(d) else [mats[0]]
    for i in range(1, len(mats)):
        x = solve_integral(mats[i - 1], mats[i])
        if x is None:
            raise TowerError(f"stage {i}: lattice of basis {i} is not contained in that of basis {i - 1}",
                             stage=i)
        steps.append(x)
    return OdometerSpec(d, tuple(steps))


def bases_of(spec: OdometerSpec, depth: int) -> list[Matrix]:
    return [spec.basis(j) for j in range(depth + 1)]


@dataclass(frozen=True)
class CylinderSet:
    """A coset v + Γ_j in SNF coordinates: ``coords[i]`` is (U·v)_i mod d_i."""

    stage: int
    coords: tuple[int, ...]
    representative: tuple[int, ...] = field(compare=False)


def cylinder(spec: OdometerSpec, j: int, vector: Sequence[int]) -> CylinderSet:
    spec.check_stage(j)
    if len(vector) != spec.d:
        raise DimensionError(f"vector of length {len(vector)} in rank {spec.d}")
    u, u_inv, factors = _snf_of_basis(spec, j)
    w = [sum(u[i, k] * vector[k] for k in range(spec.d)) for i in range(spec.d)]
    coords = tuple(x % f for x, f in zip(w, factors))
    return CylinderSet(j, coords, _from_coords(u_inv, coords))


def _from_coords(u_inv: Matrix, coords: Sequence[int]) -> tuple[int, ...]:
    n = len(coords)
    return tuple(sum(u_inv[i, k] * coords[k] for k in range(n)) for i in range(n))


def cosets(spec: OdometerSpec, j: int) -> Iterator[CylinderSet]:
    """Every cylinder at stage j, once each."""
    spec.check_stage(j)
    _, u_inv, factors = _snf_of_basis(spec, j)
    for coords in product(*(range(f) for f in factors)):
        yield CylinderSet(j, coords, _from_coords(u_inv, coords))


def cylinder_measure(spec: OdometerSpec, c: CylinderSet) -> Fraction:
    """Haar measure of a cylinder: the uniform invariant measure on Z^d/Γ_j."""
    return Fraction(1, index_at(spec, c.stage))


def clopen_measure_group(spec: OdometerSpec, depth: int) -> SubgroupOfQ:
    """Subgroup of Q spanned by the measures of cylinders at stages 0..depth.

    Each stage contributes 1/|Z^d/Γ_j|, the group order taken from the
    invariant factors (not from a determinant), so this stays an
    independent route from the K-theoretic trace computation.
    """
    gens = []
    for j in range(depth + 1):
        order = 1
        for f in quotient_structure(spec, j):
            order *= f
        gens.append(Fraction(1, order))
    return subgroup_generator(gens)


def index_steinitz(spec: OdometerSpec, depth: int | None = None) -> SupernaturalNumber:
    """Steinitz number of the index tower, truncated at ``depth`` or completed through the tail."""
    if depth is not None:
        return steinitz([abs(determinant(spec.step(j))) for j in range(1, depth + 1)])
    return steinitz([abs(determinant(m)) for m in spec.steps],
                    [abs(determinant(m)) for m in spec.tail])
