"""Verdict records shared by the inequality and no-signaling checkers."""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple

CSV_COLUMNS = ("inequality", "q", "N", "shape", "trial", "lhs", "rhs", "slack", "holds")


class InequalityId(str, Enum):
    SUB_TOMO = "sub-tomo"
    SUB_QUANTUM = "sub-quantum"
    SSA_TOMO = "ssa-tomo"
    MIXED = "mixed"
    SUMFORM_A1 = "sumform-a1"
    NOSIG = "nosig"

    @classmethod
    def parse(cls, text: str) -> "InequalityId":
        """Look up an id by its CLI spelling; underscores and case are ignored."""
        key = text.strip().lower().replace("_", "-")
        for member in cls:
            if member.value == key:
                return member
        choices = ", ".join(m.value for m in cls)
        raise ValueError(f"unknown inequality {text!r}; choose from {choices}")


@dataclass(frozen=True)
class InequalityReport:
    """
    One verdict: lhs <= rhs is checked with slack = rhs - lhs.

    ``holds`` is true exactly when slack >= -tolerance.
    """

    inequality: InequalityId
    q: float
    N: int
    shape: Tuple[int, ...]
    lhs: float
    rhs: float
    slack: float
    holds: bool
    tolerance: float
    seed: Optional[int] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        inequality: InequalityId,
        *,
        q: float,
        N: int,
        shape: Tuple[int, ...],
        lhs: float,
        rhs: float,
        tolerance: float,
        seed: Optional[int] = None,
        extra: Optional[Dict[str, Any]] = None,
    ) -> "InequalityReport":
        """Build a report with slack = rhs - lhs and holds = slack >= -tolerance."""
        lhs = float(lhs)
        rhs = float(rhs)
        slack = rhs - lhs
        return cls(
            inequality=inequality,
            q=float(q),
            N=int(N),
            shape=tuple(int(n) for n in shape),
            lhs=lhs,
            rhs=rhs,
            slack=slack,
            holds=bool(slack >= -tolerance),
            tolerance=float(tolerance),
            seed=seed,
            extra=dict(extra or {}),
        )

    def with_extra(self, **values: Any) -> "InequalityReport":
        merged = dict(self.extra)
        merged.update(values)
        return replace(self, extra=merged)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready mapping, one key per report field."""
        return {
            "inequality": self.inequality.value,
            "q": self.q,
            "N": self.N,
            "shape": list(self.shape),
            "lhs": _finite(self.lhs),
            "rhs": _finite(self.rhs),
            "slack": _finite(self.slack),
            "holds": self.holds,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "extra": self.extra,
        }

    def to_row(self) -> Dict[str, Any]:
        """Flat record with the fixed CSV columns."""
        return {
            "inequality": self.inequality.value,
            "q": self.q,
            "N": self.N,
            "shape": "x".join(str(n) for n in self.shape),
            "trial": self.extra.get("trial", ""),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
        }


def _finite(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None
