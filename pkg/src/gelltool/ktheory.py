"""K-theory of solenoidal mapping tori as colimits of exterior algebras.

A class is stored through its Chern coordinates at some stage j: integer
coefficients on subsets S ⊆ {1..d} (the basis e_S of Λ*Z^d ≅ H*(T^d; Z)).
Passing from stage j to j+1 pulls back along the covering dual to
Γ_{j+1} ⊆ Γ_j, which acts on H^1 by M_{j+1}ᵀ and on degree k by its k-th
exterior power. Those maps are injective over Q, so two classes are equal
in the colimit iff they agree at any common stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from gelltool.errors import CertificateError, DimensionError, TowerError
from gelltool.exact import (
    Matrix,
    SupernaturalNumber,
    as_matrix,
    block_diag,
    determinant,
    exterior_power,
    inverse,
    steinitz,
    subsets,
)
from gelltool.lattice import CylinderSet, OdometerSpec, index_at

Subset = tuple[int, ...]


def parity_code(parity) -> int:
    if parity in (0, "even"):
        return 0
    if parity in (1, "odd"):
        return 1
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


def parity_degrees(d: int, parity) -> list[int]:
    p = parity_code(parity)
    return [k for k in range(d + 1) if k % 2 == p]


def parity_basis(d: int, parity) -> list[Subset]:
    """Basis subsets of the given parity: by degree, then lexicographic."""
    return [s for k in parity_degrees(d, parity) for s in subsets(d, k)]


def wedge_sign(left: Subset, right: Subset) -> int:
    """Sign of e_left ∧ e_right against e_{sorted union}; 0 when they overlap."""
    if set(left) & set(right):
        return 0
    inversions = sum(1 for a in left for b in right if a > b)
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class ExteriorClass:
    """A K-class of the mapping torus, given by Chern coordinates at one stage."""

    spec: OdometerSpec
    stage: int
    coeffs: tuple[tuple[Subset, int], ...] = ()

    def __post_init__(self):
        self.spec.check_stage(self.stage)
        clean: dict[Subset, int] = {}
        for s, c in self.coeffs:
            s = tuple(sorted(s))
            if len(set(s)) != len(s) or (s and (s[0] < 1 or s[-1] > self.spec.d)):
                raise DimensionError(f"subset {s} is not a subset of 1..{self.spec.d}")
            clean[s] = clean.get(s, 0) + int(c)
        items = tuple(sorted(((s, c) for s, c in clean.items() if c), key=lambda sc: (len(sc[0]), sc[0])))
        object.__setattr__(self, "coeffs", items)

    @classmethod
    def make(cls, spec: OdometerSpec, stage: int, coeffs: Mapping[Iterable[int], int]) -> ExteriorClass:
        return cls(spec, stage, tuple((tuple(s), c) for s, c in coeffs.items()))

    def coefficient(self, s: Iterable[int]) -> int:
        return dict(self.coeffs).get(tuple(sorted(s)), 0)

    @property
    def top(self) -> int:
        return self.coefficient(range(1, self.spec.d + 1))

    def degree_vector(self, k: int) -> list[int]:
        table = dict(self.coeffs)
        return [table.get(s, 0) for s in subsets(self.spec.d, k)]

    @property
    def parities(self) -> set[int]:
        return {len(s) % 2 for s, _ in self.coeffs}

    def scaled(self, n: int) -> ExteriorClass:
        return ExteriorClass(self.spec, self.stage, tuple((s, n * c) for s, c in self.coeffs))

    def __str__(self) -> str:
        if not self.coeffs:
            return f"0 @ stage {self.stage}"
        terms = " + ".join(f"{c}·e{{{','.join(map(str, s))}}}" for s, c in self.coeffs)
        return f"{terms} @ stage {self.stage}"


@lru_cache(maxsize=4096)
def _degree_block(spec: OdometerSpec, j: int, k: int, degree: int) -> Matrix:
    """Λ^degree of (M_{j+1}···M_k)ᵀ: the structure map from stage j to stage k."""
    return exterior_power(spec.between(j, k).T, degree)


def connecting_map(spec: OdometerSpec, j: int, parity) -> Matrix:
    """Structure map from stage j-1 to stage j on the given parity, block-diagonal by degree."""
    if j < 1:
        raise TowerError(f"connecting maps start at stage 1, got {j}", stage=j)
    spec.check_stage(j)
    return block_diag(*(_degree_block(spec, j - 1, j, k) for k in parity_degrees(spec.d, parity)))


def composite_map(spec: OdometerSpec, j: int, k: int, parity) -> Matrix:
    return block_diag(*(_degree_block(spec, j, k, deg) for deg in parity_degrees(spec.d, parity)))


def push_to_stage(x: ExteriorClass, stage: int) -> ExteriorClass:
    if stage < x.stage:
        raise TowerError(f"cannot push a stage-{x.stage} class back to stage {stage}", stage=stage)
    x.spec.check_stage(stage)
    if stage == x.stage:
        return x
    d = x.spec.d
    out: dict[Subset, int] = {}
    for k in sorted({len(s) for s, _ in x.coeffs}):
        block = _degree_block(x.spec, x.stage, stage, k)
        vec = x.degree_vector(k)
        basis = subsets(d, k)
        for r, s in enumerate(basis):
            val = sum(block[r, c] * vec[c] for c in range(len(basis)) if vec[c])
            if val:
                out[s] = val
    return ExteriorClass.make(x.spec, stage, out)


def classes_equal(x: ExteriorClass, y: ExteriorClass) -> bool:
    if x.spec != y.spec:
        raise ValueError("classes belong to different odometer specs")
    top = max(x.stage, y.stage)
    return push_to_stage(x, top).coeffs == push_to_stage(y, top).coeffs


def full_subset(d: int) -> Subset:
    return tuple(range(1, d + 1))


def order_unit(spec: OdometerSpec) -> ExteriorClass:
    """Class of the unit: the Bott class of the base torus, stage 0."""
    return ExteriorClass.make(spec, 0, {full_subset(spec.d): 1})


def transfer_class(spec: OdometerSpec, c: CylinderSet) -> ExteriorClass:
    """Image of a cylinder's indicator: the top class of the stage-j torus.

    Independent of the coset. The coefficient carries the orientation sign
    of B_j so that the class is positive in the colimit order.
    """
    spec.check_stage(c.stage)
    sign = 1 if spec.oriented_index(c.stage) > 0 else -1
    return ExteriorClass.make(spec, c.stage, {full_subset(spec.d): sign})


def apply_blocks(blocks: Sequence[Matrix], x: ExteriorClass, target: OdometerSpec, stage: int) -> ExteriorClass:
    """Apply a degree-wise linear map (one block per degree 0..d) to a class."""
    d = x.spec.d
    out: dict[Subset, int] = {}
    for k in range(d + 1):
        vec = x.degree_vector(k)
        if not any(vec):
            continue
        basis = subsets(d, k)
        b = blocks[k]
        for r, s in enumerate(basis):
            val = sum(b[r, c] * vec[c] for c in range(len(basis)) if vec[c])
            if val:
                out[s] = val
    return ExteriorClass.make(target, stage, out)


# ---------------------------------------------------------------- presentations

@dataclass(frozen=True)
class DegreeInvariant:
    degree: int
    rank: int
    determinants: tuple[int, ...]
    truncated: SupernaturalNumber
    completion: SupernaturalNumber


@dataclass(frozen=True)
class KGroupPresentation:
    parity: str
    d: int
    depth: int
    ranks: tuple[int, ...]
    connecting: tuple[Matrix, ...]
    degrees: tuple[DegreeInvariant, ...]
    embeddings: tuple[Matrix, ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.ranks[0]


def colimit_embedding(spec: OdometerSpec, j: int, parity) -> Matrix:
    """Rational matrix sending stage-j coordinates into the stage-0 copy of Q^r."""
    return inverse(composite_map(spec, 0, j, parity))


def kgroup_report(spec: OdometerSpec, parity, depth: int) -> KGroupPresentation:
    if depth < 0:
        raise TowerError("depth must be >= 0", stage=depth)
    spec.check_stage(depth)
    d = spec.d
    name = "even" if parity_code(parity) == 0 else "odd"
    basis = parity_basis(d, parity)
    connecting = tuple(connecting_map(spec, j, parity) for j in range(1, depth + 1))
    degrees = []
    for k in parity_degrees(d, parity):
        dets = tuple(abs(determinant(_degree_block(spec, j - 1, j, k))) for j in range(1, depth + 1))
        finite = [abs(determinant(exterior_power(m.T, k))) for m in spec.steps]
        tail = [abs(determinant(exterior_power(m.T, k))) for m in spec.tail]
        degrees.append(DegreeInvariant(k, comb(d, k), dets, steinitz(dets), steinitz(finite, tail)))
    embeddings = tuple(colimit_embedding(spec, j, parity) for j in range(depth + 1))
    return KGroupPresentation(name, d, depth, (len(basis),) * (depth + 1), connecting,
                              tuple(degrees), embeddings)


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class IntertwinerCertificate:
    """Maps φ_j from stage j of spec A to stage ``stage_map[j]`` of spec B.

    ``maps[j][k]`` is the degree-k block, a C(d,k)×C(d,k) integer matrix in
    the lexicographic subset basis.
    """

    stage_map: tuple[int, ...]
    maps: tuple[tuple[Matrix, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "stage_map", tuple(int(s) for s in self.stage_map))
        object.__setattr__(self, "maps", tuple(tuple(as_matrix(b).to_int() for b in m) for m in self.maps))
        if len(self.stage_map) != len(self.maps):
            raise CertificateError("stage_map and maps have different lengths")
        if not self.maps:
            raise CertificateError("empty certificate")


def identity_certificate(spec: OdometerSpec, depth: int) -> IntertwinerCertificate:
    d = spec.d
    blocks = tuple(Matrix.identity(comb(d, k)) for k in range(d + 1))
    return IntertwinerCertificate(tuple(range(depth + 1)), (blocks,) * (depth + 1))


def inclusion_certificate(spec_a: OdometerSpec, spec_b: OdometerSpec, stage_map: Sequence[int]) -> IntertwinerCertificate:
    """Certificate induced by lattice inclusions Γ^B_{s(j)} ⊆ Γ^A_j.

    φ_j is Λ(Xᵀ) with B^B_{s(j)} = B^A_j·X; raises when some X is not integral.
    """
    maps = []
    for j, s in enumerate(stage_map):
        x = inverse(spec_a.basis(j)) @ spec_b.basis(s)
        if not x.is_integral():
            raise CertificateError(f"stage {j}: lattice of B at stage {s} is not inside that of A")
        xt = x.to_int().T
        maps.append(tuple(exterior_power(xt, k) for k in range(spec_a.d + 1)))
    return IntertwinerCertificate(tuple(stage_map), tuple(maps))


@dataclass
class CertificateReport:
    ok: bool
    top_degree_commutes: bool
    order_unit_preserved: bool
    transfer_commutes: bool
    lower_degree_commutes: bool
    diagnostics: list[str]

    @property
    def first_failure(self) -> str | None:
        return self.diagnostics[0] if self.diagnostics else None


def _check_shapes(spec_a: OdometerSpec, spec_b: OdometerSpec, cert: IntertwinerCertificate) -> None:
    if spec_a.d != spec_b.d:
        raise CertificateError(f"ranks differ: {spec_a.d} vs {spec_b.d}")
    d = spec_a.d
    for j, (s, blocks) in enumerate(zip(cert.stage_map, cert.maps)):
        try:
            spec_a.check_stage(j)
            spec_b.check_stage(s)
        except TowerError as exc:
            raise CertificateError(f"stage {j} -> {s}: {exc}") from exc
        if j and s < cert.stage_map[j - 1]:
            raise CertificateError(f"stage map decreases at stage {j}")
        if len(blocks) != d + 1:
            raise CertificateError(f"stage {j}: expected {d + 1} degree blocks, got {len(blocks)}")
        for k, b in enumerate(blocks):
            n = comb(d, k)
            if b.shape != (n, n):
                raise CertificateError(f"stage {j}, degree {k}: block shape {b.shape}, expected ({n}, {n})")


def check_basic_certificate(spec_a: OdometerSpec, spec_b: OdometerSpec,
                            cert: IntertwinerCertificate) -> CertificateReport:
    """Verify that a certificate commutes with the towers, the order units and the transfers.

    The top-degree squares, the order unit and the transfer triangle decide
    ``ok``; lower-degree squares are reported in ``lower_degree_commutes``.
    Transfer classes do not depend on the coset, so one cylinder per stage
    covers every cylinder at that stage.
    """
    _check_shapes(spec_a, spec_b, cert)
    d = spec_a.d
    diagnostics: list[str] = []
    top_ok = lower_ok = True
    for j in range(len(cert.maps) - 1):
        s, t = cert.stage_map[j], cert.stage_map[j + 1]
        for k in range(d + 1):
            left = cert.maps[j + 1][k] @ _degree_block(spec_a, j, j + 1, k)
            right = _degree_block(spec_b, s, t, k) @ cert.maps[j][k]
            if left != right:
                msg = f"square at stage {j}->{j + 1} (B stages {s}->{t}) fails in degree {k}"
                if k == d:
                    top_ok = False
                    diagnostics.append(msg)
                else:
                    lower_ok = False
                    diagnostics.append(msg + " (lower degree, not decisive)")

    image = apply_blocks(cert.maps[0], order_unit(spec_a), spec_b, cert.stage_map[0])
    unit_ok = classes_equal(image, order_unit(spec_b))
    if not unit_ok:
        diagnostics.append(f"order unit goes to {image}, not to the order unit of B")

    transfer_ok = True
    b_last = cert.stage_map[-1]
    for j, s in enumerate(cert.stage_map):
        n_a = index_at(spec_a, j)
        probe = transfer_class(spec_a, CylinderSet(j, (0,) * d, (0,) * d))
        y = apply_blocks(cert.maps[j], probe, spec_b, s)
        target = next((t for t in range(s, b_last + 1) if index_at(spec_b, t) % n_a == 0), None)
        if target is None:
            transfer_ok = False
            diagnostics.append(f"stage {j}: cylinder measure 1/{n_a} is not a clopen measure of B up to stage {b_last}")
            continue
        multiple = index_at(spec_b, target) // n_a
        expected = transfer_class(spec_b, CylinderSet(target, (0,) * d, (0,) * d)).scaled(multiple)
        if not classes_equal(y, expected):
            transfer_ok = False
            diagnostics.append(f"transfer triangle fails at stage {j}: {y} != {multiple} cylinders of B at stage {target}")

    ok = top_ok and unit_ok and transfer_ok
    decisive = [m for m in diagnostics if not m.endswith("(lower degree, not decisive)")]
    rest = [m for m in diagnostics if m.endswith("(lower degree, not decisive)")]
    return CertificateReport(ok, top_ok, unit_ok, transfer_ok, lower_ok, decisive + rest)
