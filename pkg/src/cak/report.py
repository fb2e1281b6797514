"""Uniform verdict container returned by every check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a check.

    `witness` carries the artifact certifying a positive verdict (for
    example a compatible context map); `counterexample` carries the first
    refutation found. Both are deterministic for fixed inputs.
    """

    verdict: bool
    detail: str = ""
    witness: Any = None
    counterexample: Any = None

    def __post_init__(self):
        if self.verdict and self.counterexample is not None:
            raise ValueError("a passing report cannot carry a counterexample")
        if not self.verdict and self.witness is not None:
            raise ValueError("a failing report cannot carry a witness")
