"""Itemized pass/fail reports shared by every validator."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .field import Fp


class CoisoError(ValueError):
    """Invalid input: a construction's precondition does not hold."""

    def __init__(self, message: str, report: Report | None = None):
        super().__init__(message)
        self.report = report


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None

    def to_json(self) -> dict:
        out = {"name": self.name, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        return out


@dataclass
class Report:
    title: str = ""
    checks: list[Check] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def check(self, name: str, passed: bool, witness: Any = None) -> bool:
        self.checks.append(Check(name, bool(passed), None if passed else witness))
        return bool(passed)

    def extend(self, other: Report, prefix: str = "") -> Report:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness))
        for k, v in other.info.items():
            self.info[prefix + k] = v
        return self

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def require(self) -> Report:
        """Raise CoisoError naming the first failure."""
        if not self.ok:
            f = self.failures[0]
            raise CoisoError(f"{self.title or 'check'} failed: {f.name}", self)
        return self

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
            "info": jsonable(self.info),
        }


def jsonable(x: Any) -> Any:
    """Scalars become exact strings; containers recurse."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Fp):
        return str(x.v)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "tolist"):
        return jsonable(x.tolist())
    return str(x)
