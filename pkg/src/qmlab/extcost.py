"""Extended-value costs: nonnegative reals plus an explicit infinity.

Infinity is its own variant, never the float ``inf``, so finite/infinite
branching stays exact (the one-way-reachability arguments depend on it).
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ExtendedCost:
    """Either ``Finite(v)`` with ``v >= 0``, or ``Infinite``.

    Construct through :meth:`finite` or use the module constant :data:`INF`;
    the raw constructor is not validated.
    """

    _value: float | None  # None encodes the infinite variant

    @staticmethod
    def finite(v: float) -> "ExtendedCost":
        v = float(v)
        if math.isnan(v):
            raise ValueError("finite cost must not be NaN")
        if math.isinf(v):
            raise ValueError("use INF for the infinite variant, not float inf")
        if v < 0.0:
            raise ValueError(f"finite cost must be >= 0, got {v}")
        return ExtendedCost(v)

    @property
    def is_infinite(self) -> bool:
        return self._value is None

    @property
    def is_finite(self) -> bool:
        return self._value is not None

    @property
    def value(self) -> float:
        if self._value is None:
            raise ValueError("infinite cost has no finite value")
        return self._value

    def value_or(self, cap: float) -> float:
        return cap if self._value is None else self._value

    def __add__(self, other: "ExtendedCost") -> "ExtendedCost":
        return ext_add(self, other)

    def __repr__(self) -> str:
        return "Infinite" if self._value is None else f"Finite({self._value!r})"


INF = ExtendedCost(None)
ZERO = ExtendedCost(0.0)


def ext_add(a: ExtendedCost, b: ExtendedCost) -> ExtendedCost:
    """Extended addition; Infinite absorbs."""
    if a.is_infinite or b.is_infinite:
        return INF
    return ExtendedCost(a.value + b.value)


def ext_min(a: ExtendedCost, b: ExtendedCost) -> ExtendedCost:
    """Extended minimum; Infinite is the top element."""
    if a.is_infinite:
        return b
    if b.is_infinite:
        return a
    return a if a.value <= b.value else b


def ext_le(a: ExtendedCost, b: ExtendedCost) -> bool:
    """a <= b in the extended order (Infinite is top)."""
    if b.is_infinite:
        return True
    if a.is_infinite:
        return False
    return a.value <= b.value
