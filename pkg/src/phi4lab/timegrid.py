"""
Scale-time grid and quadrature for integrals over the flow parameter.

Knots are 0 = t_0 < t_1 < ... < t_M = T with geometric spacing from the
first positive knot; the marginal laws of the flow are exact at knots
regardless of spacing, so the grid resolution only affects time
quadratures.  Weights implement the trapezoid rule, and refining doubles
the knot count for Richardson-style error estimates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_KNOTS = 64
DEFAULT_T1 = 0.25


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing scale times with positive trapezoid weights."""

    knots: np.ndarray

    def __post_init__(self) -> None:
        k = np.asarray(self.knots, dtype=np.float64)
        if k.ndim != 1 or len(k) < 2:
            raise ValueError("need at least two knots")
        if k[0] != 0.0 or np.any(np.diff(k) <= 0.0):
            raise ValueError("knots must start at 0 and increase strictly")
        object.__setattr__(self, "knots", k)
        dk = np.diff(k)
        w = np.zeros_like(k)
        w[:-1] += 0.5 * dk
        w[1:] += 0.5 * dk
        object.__setattr__(self, "weights", w)

    @property
    def T(self) -> float:
        return float(self.knots[-1])

    @property
    def M(self) -> int:
        """Number of intervals."""
        return len(self.knots) - 1

    def integrate(self, values: np.ndarray) -> float:
        """Trapezoid integral over [0, T] of per-knot scalar values."""
        return float(np.dot(self.weights, values))

    def cumulative(self, values: np.ndarray) -> np.ndarray:
        """
        Running trapezoid integral, one entry per knot.

        ``values`` has the knot axis first; extra axes (field dimensions)
        ride along.  Entry k is the integral over [0, t_k].
        """
        v = np.asarray(values)
        dk = np.diff(self.knots).reshape((-1,) + (1,) * (v.ndim - 1))
        steps = 0.5 * dk * (v[:-1] + v[1:])
        out = np.zeros_like(v)
        np.cumsum(steps, axis=0, out=out[1:])
        return out

    def refined(self) -> "TimeGrid":
        """New grid with midpoints inserted (geometric midpoints for t > 0)."""
        k = self.knots
        mids = np.empty(len(k) - 1)
        mids[0] = 0.5 * (k[0] + k[1])
        mids[1:] = np.sqrt(k[1:-1] * k[2:])
        merged = np.sort(np.concatenate([k, mids]))
        return TimeGrid(merged)


def make_timegrid(T: float, M: int = DEFAULT_KNOTS, t1: float = DEFAULT_T1) -> TimeGrid:
    """Geometric knots from t1 to T plus the origin; M intervals total."""
    if T <= 0:
        raise ValueError(f"final scale T must be positive, got {T}")
    t1 = min(t1, T / 2.0)
    if M < 2:
        raise ValueError("need at least two intervals")
    interior = np.geomspace(t1, T, M)
    return TimeGrid(np.concatenate([[0.0], interior]))
