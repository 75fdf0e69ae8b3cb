"""Input documents and the assembled invariant report.

Numbers cross the JSON boundary as strings so that nothing is rounded:
integers as "-3", rationals as "1/5".
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from gelltool import __version__
from gelltool.errors import GellError, SpecError
from gelltool.exact import Matrix, determinant
from gelltool.lattice import OdometerSpec, validate_tower
from gelltool.twist import SkewForm

DEFAULT_DEPTH = 6
TRACE_SIMPLEX = "single point (uniquely ergodic)"


def load_schema(name: str) -> dict:
    return json.loads(resources.files("gelltool").joinpath("schemas", name).read_text(encoding="utf-8"))


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path)


@dataclass(frozen=True)
class SpecDocument:
    spec: OdometerSpec
    theta: SkewForm | None = None
    depth: int | None = None
    name: str = ""

    @property
    def twisted(self) -> bool:
        return self.theta is not None

    def echo(self) -> dict:
        out: dict[str, Any] = {}
        if self.name:
            out["name"] = self.name
        out["rank"] = self.spec.d
        out["steps"] = [matrix_strings(m) for m in self.spec.steps]
        if self.spec.tail:
            out["periodic_tail"] = [matrix_strings(m) for m in self.spec.tail]
        if self.theta is not None:
            out["theta"] = {"symbolic": True} if self.theta.is_symbolic else [str(x) for x in self.theta.upper()]
        if self.depth is not None:
            out["depth"] = self.depth
        return out


def matrix_strings(m: Matrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in m]


def parse_spec(doc: dict) -> SpecDocument:
    """Validate a decoded SpecDocument; errors carry a JSON pointer to the field."""
    try:
        jsonschema.validate(doc, load_schema("spec.schema.json"))
    except jsonschema.ValidationError as exc:
        raise SpecError(exc.message, _pointer(exc.absolute_path)) from None
    d = doc["rank"]

    def matrices(key):
        out = []
        for i, rows in enumerate(doc.get(key, [])):
            if len(rows) != d or any(len(r) != d for r in rows):
                raise SpecError(f"expected a {d}x{d} matrix", f"/{key}/{i}")
            m = Matrix([[int(x) for x in r] for r in rows])
            if determinant(m) == 0:
                raise SpecError("singular matrix", f"/{key}/{i}")
            out.append(m)
        return out

    try:
        if "bases" in doc:
            base = validate_tower(matrices("bases"))
            spec = OdometerSpec(d, base.steps, tuple(matrices("periodic_tail")))
        else:
            spec = OdometerSpec(d, tuple(matrices("steps")), tuple(matrices("periodic_tail")))
    except SpecError:
        raise
    except GellError as exc:
        key = "bases" if "bases" in doc else "steps"
        raise SpecError(str(exc), f"/{key}") from None

    theta = None
    raw = doc.get("theta")
    if isinstance(raw, dict):
        if d != 2:
            raise SpecError("the symbolic twist is only available for rank 2", "/theta")
        theta = SkewForm.symbolic()
    elif raw is not None:
        need = d * (d - 1) // 2
        if len(raw) != need:
            raise SpecError(f"rank {d} needs {need} upper-triangular entries, got {len(raw)}", "/theta")
        theta = SkewForm.from_upper(d, [Fraction(x) for x in raw])
    return SpecDocument(spec, theta, doc.get("depth"), doc.get("name", ""))


def load_spec(path) -> SpecDocument:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from None
    return parse_spec(doc)


@dataclass
class GEllReport:
    """The geometric Elliott invariant at a finite truncation, JSON-ready."""

    spec: dict
    depth: int
    degenerate: bool
    k_even: dict
    k_odd: dict
    order_unit: dict
    transfer: list
    pairing: list
    gap_labels: dict
    consistent: bool
    trace_simplex: str = TRACE_SIMPLEX
    rotation_oracle: dict | None = None
    rieffel_shift: str = "V"
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        body = asdict(self)
        out = {
            "tool": {"name": "gelltool", "version": __version__},
            "conventions": {
                "pullback": "M^T",
                "pfaffian_empty": "Pf(empty)=1",
                "rieffel_shift": body.pop("rieffel_shift"),
                "orientation": "trace(order_unit)=+1",
            },
        }
        order = ["spec", "depth", "degenerate", "k_even", "k_odd", "order_unit", "transfer",
                 "trace_simplex", "pairing", "gap_labels", "rotation_oracle", "notes", "consistent"]
        for key in order:
            if body[key] is not None:
                out[key] = body[key]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"
