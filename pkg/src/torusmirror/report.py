"""Verification reports and deterministic JSON output."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class CheckResult:
    id: str
    lhs: Any
    rhs: Any
    residual: float
    tolerance: float
    passed: bool | None = None

    def __post_init__(self):
        if self.passed is None:
            self.passed = bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def as_dict(self) -> dict:
        return {"id": self.id, "lhs": self.lhs, "rhs": self.rhs, "residual": self.residual,
                "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class Report:
    name: str
    inputs: dict
    checks: list[CheckResult] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, id: str, lhs, rhs, residual: float, tolerance: float,
            passed: bool | None = None) -> CheckResult:
        chk = CheckResult(id, lhs, rhs, float(residual), float(tolerance), passed)
        self.checks.append(chk)
        return chk

    def check(self, id: str) -> CheckResult:
        return next(c for c in self.checks if c.id == id)

    def as_dict(self) -> dict:
        out = {"name": self.name, "inputs": self.inputs,
               "checks": [c.as_dict() for c in self.checks], "pass": self.passed}
        if self.data:
            out["data"] = self.data
        return out


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return [_Float(obj.real), _Float(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _Float(obj)
    if hasattr(obj, "as_dict"):
        return _plain(obj.as_dict())
    return obj if obj is None or isinstance(obj, str) else str(obj)


class _Float(float):
    pass


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, _Float):
        if math.isnan(obj) or math.isinf(obj):
            return json.dumps(str(float(obj)))
        return format(float(obj), ".17g")
    return json.dumps(obj)


def dumps(obj, indent: int = 2) -> str:
    """JSON with fixed key order and every float printed to 17 significant digits."""
    return _encode(_plain(obj), indent, 0) + "\n"
