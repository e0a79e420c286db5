"""Per-step records of greedy runs and their CSV/JSON serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .dictionaries import Dictionary
from .spaces import Element, SpaceSpec, lq_norm

TRACE_COLUMNS = ("m", "atom_index", "orientation", "y_or_c", "residual_norm", "B_m")


def fmt_float(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


@dataclass
class IterationRecord:
    """One greedy step.

    ``value`` is y_m = <f_{m-1}, phi_m> for the Hilbert engines and c_m for
    the dual greedy engines, which also record r_D(f_{m-1}) and the achieved
    F_{f_{m-1}}(phi_m) as ``r_d`` and ``dual_value``. ``coeff`` is what was
    actually subtracted along ``orientation * atoms[atom_index]``. Padding
    steps after the residual
    vanished (or after an orthogonal run degenerated) carry ``atom_index``
    -1 and zero values.
    """

    step: int
    atom_index: int
    orientation: int
    value: float
    sup_value: float
    coeff: float
    residual_norm: float
    envelope: Optional[float] = None
    r_d: Optional[float] = None
    degenerate: bool = False
    dual_value: Optional[float] = None

    @property
    def is_padding(self) -> bool:
        return self.atom_index < 0


@dataclass
class GreedyTrace:
    algorithm: str
    f: Element
    params: dict
    records: list = field(default_factory=list)
    residual: Optional[Element] = None
    a1: Optional[float] = None

    @property
    def residual_norms(self) -> np.ndarray:
        """||f_0||, ||f_1||, ..., ||f_m||."""
        f0 = lq_norm(self.f.coeffs, self.f.space.q)
        return np.array([f0] + [r.residual_norm for r in self.records])

    @property
    def envelopes(self) -> Optional[np.ndarray]:
        if self.a1 is None:
            return None
        return np.array([self.a1] + [r.envelope for r in self.records])

    @property
    def selections(self) -> list:
        return [(r.atom_index, r.orientation) for r in self.records]

    @property
    def degenerate(self) -> bool:
        return any(r.degenerate for r in self.records)

    def expansion_defect(self, D: Dictionary) -> float:
        """Relative size of f - residual - sum coeff_m * phi_m."""
        approx = np.zeros(self.f.dim)
        for r in self.records:
            if not r.is_padding:
                approx += r.coeff * r.orientation * D.atoms[r.atom_index]
        diff = self.f.coeffs - self.residual.coeffs - approx
        scale = max(lq_norm(self.f.coeffs, 2.0), 1e-300)
        return float(np.linalg.norm(diff) / scale)

    def to_csv(self) -> str:
        has_rd = any(r.r_d is not None for r in self.records)
        cols = TRACE_COLUMNS + (("r_D",) if has_rd else ())
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.records:
            row = [r.step, r.atom_index, r.orientation, fmt_float(r.value),
                   fmt_float(r.residual_norm), fmt_float(r.envelope)]
            if has_rd:
                row.append(fmt_float(r.r_d))
            w.writerow(row)
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "f": self.f.coeffs.tolist(),
            "space": self.f.space.to_dict(),
            "params": self.params,
            "a1": self.a1,
            "records": [asdict(r) for r in self.records],
            "residual": self.residual.coeffs.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "GreedyTrace":
        space = SpaceSpec.from_dict(d["space"])
        return cls(d["algorithm"], Element(d["f"], space), d["params"],
                   [IterationRecord(**r) for r in d["records"]],
                   Element(d["residual"], space), d["a1"])
