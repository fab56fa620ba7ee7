# Copyright (c) 2025, Group Testing Methods contributors
# For license information, please see license.txt

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple
import numbers

import numpy as np

from gt_multinomial import settings
from gt_multinomial.utils import throw


def _parse_floats(text, expected, label):
    parts = [part.strip() for part in str(text).split(",") if part.strip()]
    if len(parts) != expected:
        throw(f"{label} needs {expected} comma-separated values, got {len(parts)}: {text!r}")
    try:
        return [float(part) for part in parts]
    except ValueError:
        throw(f"{label} must be numeric: {text!r}")


@dataclass(frozen=True)
class TraitPrevalence:
    """
    Joint prevalence p = (p10, p01, p11) of two traits in a single unit.

    p00 is derived. Instances are plain values: a TraitPrevalence may sit
    outside the parameter space (p_from_theta returns such points), and each
    operation validates what it needs.
    """

    p10: float
    p01: float
    p11: float

    @property
    def p00(self) -> float:
        return 1.0 - self.p10 - self.p01 - self.p11

    def cells(self) -> Tuple[float, float, float, float]:
        """(p00, p10, p01, p11)"""
        return (self.p00, self.p10, self.p01, self.p11)

    def as_array(self) -> np.ndarray:
        return np.array([self.p10, self.p01, self.p11], dtype=float)

    def marginals(self) -> Tuple[float, float]:
        """Marginal trait prevalences (p1, p2)"""
        return (self.p10 + self.p11, self.p01 + self.p11)

    def in_closure(self, tolerance: float = settings.probability_tolerance) -> bool:
        if not all(np.isfinite(self.cells())):
            return False
        return all(cell >= -tolerance for cell in self.cells()) and all(
            cell <= 1.0 + tolerance for cell in self.cells()
        )

    def is_interior(self) -> bool:
        return all(np.isfinite(self.cells())) and all(0.0 < cell < 1.0 for cell in self.cells())

    def validate(self, strict: bool = False) -> "TraitPrevalence":
        """
        Raise ValidationError unless p lies in the closure (or, with strict,
        the interior) of the parameter space
        """
        if strict:
            if not self.is_interior():
                throw(f"Prevalence {self.as_tuple()} must have all four cells strictly inside (0, 1)")
        elif not self.in_closure():
            throw(f"Prevalence {self.as_tuple()} has a negative cell or sums above 1 (p00 = {self.p00:.6g})")
        return self

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.p10, self.p01, self.p11)

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "TraitPrevalence":
        values = list(values)
        if len(values) != 3:
            throw(f"Prevalence needs three values (p10, p01, p11), got {len(values)}")
        return cls(float(values[0]), float(values[1]), float(values[2]))

    @classmethod
    def parse(cls, text: str) -> "TraitPrevalence":
        """Parse 'p10,p01,p11'"""
        return cls.from_sequence(_parse_floats(text, 3, "Prevalence"))


@dataclass(frozen=True)
class PoolDesign:
    """Group size k and number of pools n"""

    k: int
    n: int

    def __post_init__(self):
        for name in ("k", "n"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Integral):
                throw(f"Design {name} must be an integer, got {value!r}")
            if value < 1:
                throw(f"Design {name} must be at least 1, got {value}")

    @property
    def outcome_count(self) -> int:
        """C(n + 3, 3), the size of the pool-level sample space"""
        n = self.n
        return (n + 3) * (n + 2) * (n + 1) // 6


@dataclass(frozen=True)
class ThetaVector:
    """
    Pool-level multinomial parameter (theta10, theta01, theta11).

    theta00 is derived as 1 - sum. The forward map also records theta00 = p00^k
    directly, because for large k that cell is far below the rounding error of
    1 - sum and the inverse map needs it at full relative precision.
    """

    theta10: float
    theta01: float
    theta11: float
    exact_theta00: Optional[float] = None

    @property
    def theta00(self) -> float:
        if self.exact_theta00 is not None:
            return self.exact_theta00
        return 1.0 - self.theta10 - self.theta01 - self.theta11

    def cells(self) -> Tuple[float, float, float, float]:
        """(theta00, theta10, theta01, theta11)"""
        return (self.theta00, self.theta10, self.theta01, self.theta11)

    def as_array(self) -> np.ndarray:
        return np.array(self.cells(), dtype=float)

    def validate(self) -> "ThetaVector":
        tolerance = settings.probability_tolerance
        cells = self.cells()
        if not all(np.isfinite(cells)):
            throw(f"Theta {cells} has a non-finite cell")
        if any(cell < -tolerance for cell in cells):
            throw(f"Theta {cells} has a negative cell")
        if self.theta10 + self.theta01 + self.theta11 > 1.0 + tolerance:
            throw(f"Theta {cells} sums above 1")
        return self


@dataclass(frozen=True)
class PoolCounts:
    """Observed pool outcome counts (x00, x10, x01, x11)"""

    x00: int
    x10: int
    x01: int
    x11: int

    def __post_init__(self):
        for name in ("x00", "x10", "x01", "x11"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Integral):
                throw(f"Count {name} must be an integer, got {value!r}")
            if value < 0:
                throw(f"Count {name} must be non-negative, got {value}")

    @property
    def n(self) -> int:
        return self.x00 + self.x10 + self.x01 + self.x11

    def as_array(self) -> np.ndarray:
        return np.array([self.x00, self.x10, self.x01, self.x11], dtype=np.int64)

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.x00, self.x10, self.x01, self.x11)

    def is_interior(self) -> bool:
        """True when every cell is strictly positive"""
        return min(self.as_tuple()) > 0

    def validate_design(self, design: PoolDesign) -> "PoolCounts":
        if self.n != design.n:
            throw(
                f"Counts {self.as_tuple()} sum to {self.n} but the design has n = {design.n} "
                f"(discrepancy {self.n - design.n:+d})"
            )
        return self

    @classmethod
    def parse(cls, text: str) -> "PoolCounts":
        """Parse 'x00,x10,x01,x11'"""
        values = _parse_floats(text, 4, "Counts")
        if any(value != int(value) for value in values):
            throw(f"Counts must be whole numbers: {text!r}")
        return cls(*(int(value) for value in values))


@dataclass(frozen=True)
class ReducedPrevalence:
    """(p10, p01) on the face p11 = 0"""

    p10: float
    p01: float

    @property
    def p00(self) -> float:
        return 1.0 - self.p10 - self.p01

    def to_prevalence(self) -> TraitPrevalence:
        return TraitPrevalence(self.p10, self.p01, 0.0)

    def is_interior(self) -> bool:
        return self.p10 > 0.0 and self.p01 > 0.0 and self.p10 + self.p01 < 1.0

    def validate(self, strict: bool = True) -> "ReducedPrevalence":
        if strict:
            if not self.is_interior():
                throw(f"Reduced prevalence ({self.p10}, {self.p01}) must be strictly interior")
        elif min(self.p10, self.p01, self.p00) < -settings.probability_tolerance:
            throw(f"Reduced prevalence ({self.p10}, {self.p01}) lies outside the closed simplex")
        return self

    @classmethod
    def parse(cls, text: str) -> "ReducedPrevalence":
        """Parse 'p10,p01'"""
        return cls(*_parse_floats(text, 2, "Start"))
