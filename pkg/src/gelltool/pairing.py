"""Trace pairings on K-classes and the gap-labelling check.

The canonical trace of a class is read from its Chern coordinates: the
top-degree coefficient at stage j divided by the (oriented) index of Γ_j.
With a twist Θ every even subset I adds Pf(Θ_I) times the top coefficient
of dx_I ∧ x, where dx_I lives on the base torus and is pulled back to
stage j first.

Two independent routes produce twisted label groups: the wedge sum above,
and the Pfaffian profile of the restricted form B_jᵀΘB_j scaled by
1/[Z^d:Γ_j]. They must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from gelltool.errors import DimensionError
from gelltool.exact import (
    Matrix,
    SubgroupOfQ,
    SupernaturalNumber,
    exterior_power,
    invariant_factors,
    subgroup_generator,
    subsets,
)
from gelltool.ktheory import (
    ExteriorClass,
    full_subset,
    parity_basis,
    wedge_sign,
)
from gelltool.lattice import OdometerSpec, clopen_measure_group, index_at, index_steinitz
from gelltool.twist import SkewForm, ThetaLinear, even_subsets, pfaffian_profile, restricted_form


@dataclass(frozen=True)
class GapLabelGroup:
    """Label group ``rational·Z`` (+ ``theta·Zθ`` in the symbolic d = 2 mode).

    ``completion`` is the Steinitz number of the index tower when the odometer
    has a periodic tail: the colimit group is then Z[1/completion].
    """

    rational: SubgroupOfQ
    theta: SubgroupOfQ | None = None
    completion: SupernaturalNumber | None = None

    @property
    def symbolic(self) -> bool:
        return self.theta is not None

    def contains(self, value) -> bool:
        if isinstance(value, ThetaLinear):
            if value.b and not self.symbolic:
                return False
            return value.a in self.rational and (value.b == 0 or value.b in self.theta)
        return Fraction(value) in self.rational

    def __str__(self) -> str:
        if not self.symbolic:
            return str(self.rational)
        th = self.theta.generator
        theta = "0" if th == 0 else "Zθ" if th == 1 else f"({th})Zθ"
        return f"{self.rational} + {theta}"


def _top_divisor(spec: OdometerSpec, stage: int) -> int:
    # oriented, so that pushing a class along an orientation-reversing step keeps its trace
    return spec.oriented_index(stage)


def trace_untwisted(spec: OdometerSpec, x: ExteriorClass) -> Fraction:
    if x.spec != spec:
        raise ValueError("class belongs to another spec")
    return Fraction(x.top, _top_divisor(spec, x.stage))


@lru_cache(maxsize=2048)
def _pullback_block(spec: OdometerSpec, stage: int, k: int) -> Matrix:
    """Λ^k(B_jᵀ): columns are the stage-j coordinates of the base forms dx_I, |I| = k."""
    return exterior_power(spec.basis(stage).T, k)


def trace_twisted(spec: OdometerSpec, theta: SkewForm, x: ExteriorClass):
    """Σ_I Pf(Θ_I)·⟨dx_I ∧ x⟩ over even I, normalised by the stage index."""
    if x.spec != spec:
        raise ValueError("class belongs to another spec")
    if theta.d != spec.d:
        raise DimensionError(f"form of rank {theta.d} on a rank-{spec.d} odometer")
    d = spec.d
    profile = pfaffian_profile(theta)
    full = set(full_subset(d))
    total = 0
    for s, coeff in x.coeffs:
        t = tuple(sorted(full - set(s)))
        k = len(t)
        if k % 2:
            continue
        sign = wedge_sign(t, s)
        block = _pullback_block(spec, x.stage, k)
        basis = subsets(d, k)
        row = basis.index(t)
        for col, i in enumerate(basis):
            pf = profile[i]
            minor = block[row, col]
            if pf != 0 and minor:
                total = total + pf * (sign * coeff * minor)
    divisor = _top_divisor(spec, x.stage)
    if isinstance(total, ThetaLinear):
        return _simplify(total / divisor)
    return Fraction(total) / divisor


def _simplify(value):
    if isinstance(value, ThetaLinear) and value.is_rational:
        return value.a
    if isinstance(value, int):
        return Fraction(value)
    return value


def _group_from_values(values: Iterable, symbolic: bool, completion) -> GapLabelGroup:
    rational, theta = [], []
    for v in values:
        if isinstance(v, ThetaLinear):
            if v.a and v.b:
                raise ArithmeticError(f"mixed label {v} does not split into coefficient groups")
            rational.append(v.a)
            theta.append(v.b)
        else:
            rational.append(Fraction(v))
    return GapLabelGroup(subgroup_generator(rational),
                         subgroup_generator(theta) if symbolic else None,
                         completion)


def _completion(spec: OdometerSpec) -> SupernaturalNumber | None:
    return index_steinitz(spec) if spec.tail else None


def label_generators(spec: OdometerSpec, theta: SkewForm | None, depth: int) -> list[tuple[int, tuple[int, ...], object]]:
    """Trace of every basis class e_S (|S| ≡ d mod 2) at stages 0..depth, as (stage, S, value)."""
    spec.check_stage(depth)
    out = []
    for j in range(depth + 1):
        for s in parity_basis(spec.d, spec.d % 2):
            x = ExteriorClass.make(spec, j, {s: 1})
            value = trace_twisted(spec, theta, x) if theta is not None else trace_untwisted(spec, x)
            out.append((j, s, value))
    return out


def gap_label_group(spec: OdometerSpec, theta: SkewForm | None = None, depth: int = 0) -> GapLabelGroup:
    """τ(K_0) through the K-theory route: traces of a generating set over stages 0..depth."""
    values = [v for _, _, v in label_generators(spec, theta, depth)]
    values.append(Fraction(1))  # the order unit
    symbolic = theta is not None and theta.is_symbolic
    return _group_from_values(values, symbolic, _completion(spec))


def twisted_label_group_via_restriction(spec: OdometerSpec, theta: SkewForm, depth: int) -> GapLabelGroup:
    """Label group from the noncommutative tori of the sublattices: (1/[Z^d:Γ_j])·⟨Pf((B_jᵀΘB_j)_I)⟩."""
    spec.check_stage(depth)
    values = []
    for j in range(depth + 1):
        n = index_at(spec, j)
        for pf in pfaffian_profile(restricted_form(theta, spec.basis(j))).values():
            values.append(_simplify(pf / n if isinstance(pf, ThetaLinear) else Fraction(pf, n)))
    return _group_from_values(values, theta.is_symbolic, _completion(spec))


@dataclass(frozen=True)
class GapReport:
    depth: int
    lhs: GapLabelGroup
    rhs: SubgroupOfQ
    equal: bool


def verify_gap_labelling(spec: OdometerSpec, depth: int) -> GapReport:
    """Compare τ(K_0) with the group of clopen measures, each by its own route."""
    lhs = gap_label_group(spec, None, depth)
    rhs = clopen_measure_group(spec, depth)
    return GapReport(depth, lhs, rhs, lhs.rational == rhs)


@dataclass(frozen=True)
class Coinvariants:
    factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for f in self.factors if f == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(f for f in self.factors if f > 1)

    def __str__(self) -> str:
        parts = ["Z"] * self.rank + [f"Z/{t}" for t in self.torsion]
        return " ⊕ ".join(parts) if parts else "0"


def shift_coinvariants(q: int) -> Coinvariants:
    """Cokernel of (id - shift) on Z^q, i.e. coinvariants of C(Z/q, Z) under translation."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    rows = [[(1 if i == j else 0) - (1 if i == (j + 1) % q else 0) for j in range(q)] for i in range(q)]
    return Coinvariants(tuple(invariant_factors(Matrix(rows))))


def coinvariants_rank_d1(spec: OdometerSpec, j: int) -> Coinvariants:
    if spec.d != 1:
        raise DimensionError(f"coinvariants are computed for d = 1, got d = {spec.d}")
    return shift_coinvariants(index_at(spec, j))


def trace_range_d2(theta) -> GapLabelGroup:
    """Z + θZ: symbolic θ gives the pair (Z, Z); rational θ collapses to one subgroup."""
    if isinstance(theta, ThetaLinear) and not theta.is_rational:
        if theta != ThetaLinear(0, 1):
            raise ValueError("symbolic mode supports θ itself only")
        return GapLabelGroup(SubgroupOfQ(Fraction(1)), SubgroupOfQ(Fraction(1)))
    t = theta.a if isinstance(theta, ThetaLinear) else Fraction(theta)
    return GapLabelGroup(subgroup_generator([1, t]))


# ---------------------------------------------------------------- assembled invariant

def _group_json(g: GapLabelGroup | SubgroupOfQ) -> dict:
    if isinstance(g, SubgroupOfQ):
        return {"generator": str(g.generator), "display": str(g)}
    out = {"generator": str(g.rational.generator)}
    if g.symbolic:
        out["theta_generator"] = str(g.theta.generator)
    out["display"] = str(g)
    return out


def _presentation_json(p) -> dict:
    from gelltool.report import matrix_strings

    return {
        "parity": p.parity,
        "ranks": list(p.ranks),
        "connecting": [matrix_strings(m) for m in p.connecting],
        "degrees": [
            {
                "degree": inv.degree,
                "rank": inv.rank,
                "determinants": [str(x) for x in inv.determinants],
                "steinitz_truncated": str(inv.truncated),
                "steinitz_completion": str(inv.completion),
            }
            for inv in p.degrees
        ],
        "embeddings": [matrix_strings(m) for m in p.embeddings],
    }


def _subset_name(s) -> str:
    return "e{" + ",".join(map(str, s)) + "}"


def _rotation_oracle(theta: SkewForm, labels: GapLabelGroup) -> tuple[dict, str] | None:
    from gelltool.rotation import RotationError, rieffel_projection

    if theta.d != 2:
        return None
    if theta.is_symbolic:
        rng = trace_range_d2(theta.matrix[0, 1])
        return {"theta": "symbolic", "trace_range": str(rng),
                "contained_in_labels": rng.rational.issubgroup(labels.rational)
                and rng.theta.issubgroup(labels.theta)}, "V"
    t = Fraction(theta.matrix[0, 1])
    rng = trace_range_d2(t)
    out = {"theta": str(t), "trace_range": str(rng),
           "contained_in_labels": rng.rational.issubgroup(labels.rational)}
    if not 0 < t < 1 or t.denominator > 512:
        return out, "V"
    try:
        res = rieffel_projection(t.numerator, t.denominator, Fraction(1, t.denominator))
    except RotationError as exc:
        out["numeric"] = f"failed: {exc}"
        return out, "V"
    out["numeric_trace_matches"] = abs(res.trace - float(t)) <= 1e-12
    return out, res.convention


def compute_gell(spec: OdometerSpec, theta: SkewForm | None = None, depth: int = 6,
                 echo: dict | None = None):
    """Assemble the invariant at truncation ``depth`` (clamped to a finite tower's depth)."""
    from gelltool.ktheory import kgroup_report, order_unit, transfer_class
    from gelltool.lattice import cosets, cylinder_measure, quotient_structure
    from gelltool.report import GEllReport

    notes = []
    if spec.depth is not None and depth > spec.depth:
        notes.append(f"depth {depth} clamped to the tower depth {spec.depth}")
        depth = spec.depth
    if theta is not None and theta.d != spec.d:
        raise DimensionError(f"form of rank {theta.d} on a rank-{spec.d} odometer")
    if spec.degenerate:
        notes.append("degenerate: every step is unimodular, the action is not free on a Cantor set")

    unit = order_unit(spec)
    unit_json = {"stage": 0, "class": str(unit), "trace": str(trace_untwisted(spec, unit))}
    if theta is not None:
        unit_json["twisted_trace"] = str(trace_twisted(spec, theta, unit))

    transfer = []
    transfer_ok = True
    for j in range(depth + 1):
        c = next(cosets(spec, j))
        tr = trace_untwisted(spec, transfer_class(spec, c))
        mu = cylinder_measure(spec, c)
        transfer_ok &= tr == mu
        transfer.append({"stage": j, "index": str(index_at(spec, j)),
                         "quotient": [str(f) for f in quotient_structure(spec, j)],
                         "cylinder_measure": str(mu), "trace": str(tr), "agrees": tr == mu})

    pairing = []
    for j, s, value in label_generators(spec, None, depth):
        row = {"stage": j, "generator": _subset_name(s), "untwisted": str(value)}
        pairing.append(row)
    if theta is not None:
        for row, (_, _, value) in zip(pairing, label_generators(spec, theta, depth)):
            row["twisted"] = str(value)

    gap = verify_gap_labelling(spec, depth)
    labels = {"untwisted": _group_json(gap.lhs), "clopen_measures": _group_json(gap.rhs),
              "gap_equality": gap.equal,
              "completion": str(gap.lhs.completion) if gap.lhs.completion else None}
    consistent = gap.equal and transfer_ok and unit_json["trace"] == "1"
    rotation = None
    shift = "V"
    if theta is not None:
        route_a = gap_label_group(spec, theta, depth)
        route_b = twisted_label_group_via_restriction(spec, theta, depth)
        labels["twisted_route_A"] = _group_json(route_a)
        labels["twisted_route_B"] = _group_json(route_b)
        labels["agree"] = route_a == route_b
        consistent = consistent and route_a == route_b and unit_json["twisted_trace"] == "1"
        oracle = _rotation_oracle(theta, route_a)
        if oracle is not None:
            rotation, shift = oracle

    return GEllReport(
        spec=echo if echo is not None else {"rank": spec.d},
        depth=depth,
        degenerate=spec.degenerate,
        k_even=_presentation_json(kgroup_report(spec, "even", depth)),
        k_odd=_presentation_json(kgroup_report(spec, "odd", depth)),
        order_unit=unit_json,
        transfer=transfer,
        pairing=pairing,
        gap_labels=labels,
        consistent=consistent,
        rotation_oracle=rotation,
        rieffel_shift=shift,
        notes=notes,
    )
