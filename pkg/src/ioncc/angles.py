"""Rotation angles, stored as floats in units of pi.

Every angle that enters the IR goes through :func:`normalize`, which maps it
into ``[0, 2)``. Classification uses a fixed tolerance ``EPS`` (also in units
of pi) so that values produced by merging a handful of rotations still
classify as exact multiples of pi/2.
"""

from __future__ import annotations

import math

EPS = 1e-9

# Values closer than this to a multiple of 1/4 are snapped onto it. Far below
# EPS, so it only absorbs float round-off from additions.
_SNAP = 1e-12


def normalize(value: float, period: float = 2.0) -> float:
    v = math.fmod(float(value), period)
    if v < 0:
        v += period
    quarter = round(v * 4.0) / 4.0
    if abs(v - quarter) < _SNAP:
        v = quarter
    if v >= period:
        v -= period
    return v


def distance(a: float, b: float, period: float = 2.0) -> float:
    """Shortest distance between two angles on the circle of length ``period``."""
    d = math.fmod(abs(a - b), period)
    return min(d, period - d)


def close(a: float, b: float, period: float = 2.0, eps: float = EPS) -> bool:
    return distance(a, b, period) < eps


def is_zero(value: float, period: float = 2.0) -> bool:
    return distance(value, 0.0, period) < EPS


def is_multiple_of(value: float, step: float) -> bool:
    k = round(value / step)
    return abs(value - k * step) < EPS


def is_half_pi_multiple(value: float) -> bool:
    return is_multiple_of(value, 0.5)


def is_pi_multiple(value: float) -> bool:
    return is_multiple_of(value, 1.0)


def snap(value: float, step: float = 0.5) -> float:
    """Round ``value`` onto the ``step`` grid when it is within EPS of it."""
    k = round(value / step)
    if abs(value - k * step) < EPS:
        return normalize(k * step)
    return value


def in_set(value: float, allowed: tuple[float, ...]) -> bool:
    return any(close(value, a) for a in allowed)


def to_radians(value: float) -> float:
    return value * math.pi


def from_radians(value: float) -> float:
    return value / math.pi
