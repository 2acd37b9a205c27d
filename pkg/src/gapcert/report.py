"""Bound reports shared by the lower- and upper-bound pipelines."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["BoundReport"]


@dataclass
class BoundReport:
    value: float
    dual_value: float
    certified_bound: float | None
    rigor_margin: float | None
    primal_residual: float
    dual_residual: float
    gap: float
    level: int
    status: str
    wall_time: float
    method: str = "npa"
    iterations: int = 0
    stats: dict = field(default_factory=dict)
    certificate_status: str = "certified"
    witness: object = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "level": self.level,
            "value": self.value,
            "dual_value": self.dual_value,
            "certified_bound": self.certified_bound,
            "rigor_margin": self.rigor_margin,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "gap": self.gap,
            "status": self.status,
            "certificate_status": self.certificate_status,
            "iterations": self.iterations,
            "wall_time": self.wall_time,
            "stats": _jsonable(self.stats),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj
