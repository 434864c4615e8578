"""
Parameters of the k-block pipeline.
"""

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class MultiConfig:
    """
    k-block pipeline constants for a graph on n vertices.

    Build with from_rates; any derived value can be overridden by keyword.
    """

    a: float
    b: float
    k: int
    n: int
    d: float
    m: int
    set_size: int
    overlap_limit: int
    merge_threshold: float
    trim_factor: float = 20.0
    column_offset: float = 0.0
    tol: float = 1e-6
    reserve: bool = True

    def __post_init__(self):
        if not self.a > self.b > 0:
            raise ValueError(f"rates must satisfy a > b > 0, got a={self.a}, b={self.b}")
        if self.k < 2:
            raise ValueError(f"k must be at least 2, got {self.k}")
        if self.n < 2 * self.k:
            raise ValueError(f"n must be at least 2k, got n={self.n}, k={self.k}")
        for name in ('m', 'set_size', 'overlap_limit'):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.d <= 0 or self.trim_factor <= 0 or self.tol <= 0:
            raise ValueError("d, trim_factor and tol must be positive")

    @classmethod
    def from_rates(cls, a: float, b: float, k: int, n: int, **overrides) -> 'MultiConfig':
        """
        Defaults: d = a + (k-1)b, m = ceil(2 ln n), set_size = floor(n/2k),
        overlap_limit = ceil(0.2 n/2k), merge_threshold = (a+b)/8,
        column_offset = (a+b)/2n.

        reserve lets the selection continue past the upper Blue-count half
        into candidates at or above concentrated_floor; without it fewer
        than k compatible sets in the upper half raise SelectionError.
        """
        derived = dict(
            a=a,
            b=b,
            k=k,
            n=n,
            d=a + (k - 1) * b,
            m=math.ceil(2 * math.log(n)),
            set_size=n // (2 * k),
            overlap_limit=math.ceil(0.2 * n / (2 * k)),
            merge_threshold=(a + b) / 8,
            column_offset=(a + b) / (2 * n),
        )
        unknown = set(overrides) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ValueError(f"unknown MultiConfig fields: {', '.join(sorted(unknown))}")
        derived.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**derived)

    @property
    def trim_threshold(self) -> float:
        return self.trim_factor * self.d

    def with_overrides(self, **overrides) -> 'MultiConfig':
        return replace(self, **overrides)
