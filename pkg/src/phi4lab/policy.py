"""
Parametric drift policies: the computational surrogate for the
optimization over all adapted drifts.

Families:

    zero             u = 0
    wick3            u_t = -gain * lam * W^<3>_t  (the leading direction of
                     the optimal drift; gain = 1 is the first-order optimum)
    linear-feedback  wick3 gain plus per-(knot-bin, mode-shell) real gains
                     applied to the low-pass of the realized field W_t
    explicit-check   the d = 3 candidate drift solved from its integral
                     equation (no parameters)

Every family only reads the path up to the current knot, so the drifts are
adapted by construction, and every family contains u = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .drift import DriftPath, explicit_drift
from .stochvec import StochasticVector

FAMILIES = ("zero", "wick3", "linear-feedback", "explicit-check")


@dataclass(frozen=True)
class DriftPolicy:
    """Family tag plus flat parameter vector and structural hyperparameters."""

    family: str
    params: np.ndarray = field(default_factory=lambda: np.zeros(0))
    n_cut: float = 2.0     # linear-feedback: low-pass radius on |n|
    n_shells: int = 2      # linear-feedback: mode shells below n_cut
    n_tbins: int = 2       # linear-feedback: knot groups
    split_delta: float = 0.5  # explicit-check: frequency-split exponent

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown policy family {self.family!r}")
        object.__setattr__(self, "params", np.asarray(self.params, dtype=np.float64))
        expected = self.n_params
        if len(self.params) != expected:
            if len(self.params) == 0:
                object.__setattr__(self, "params", np.zeros(expected))
            else:
                raise ValueError(
                    f"{self.family} expects {expected} parameters, got {len(self.params)}"
                )

    @property
    def n_params(self) -> int:
        if self.family in ("zero", "explicit-check"):
            return 0
        if self.family == "wick3":
            return 1
        return 1 + self.n_shells * self.n_tbins

    def with_params(self, params: np.ndarray) -> "DriftPolicy":
        return DriftPolicy(family=self.family, params=np.asarray(params, dtype=float),
                           n_cut=self.n_cut, n_shells=self.n_shells,
                           n_tbins=self.n_tbins, split_delta=self.split_delta)


def make_drift(policy: DriftPolicy, sv: StochasticVector, lam: float) -> DriftPath:
    """Realize the policy on one sample as a per-knot spectral drift."""
    grid, tg = sv.grid, sv.timegrid
    nk = len(tg.knots)
    if policy.family == "zero" or (policy.family != "explicit-check" and lam == 0.0):
        return DriftPath(np.zeros((nk,) + grid.shape, dtype=np.complex128))
    if policy.family == "explicit-check":
        return explicit_drift(sv, lam, split_delta=policy.split_delta).drift
    gain = policy.params[0]
    u_hat = (-gain * lam) * sv.W3j_hat
    if policy.family == "linear-feedback" and np.any(policy.params[1:]):
        gains = policy.params[1:].reshape(policy.n_tbins, policy.n_shells)
        edges = np.linspace(0.0, policy.n_cut, policy.n_shells + 1)
        masks = [
            (grid.absn >= edges[s]) & (grid.absn < edges[s + 1])
            for s in range(policy.n_shells)
        ]
        tbin = np.minimum(
            (np.arange(nk) * policy.n_tbins) // max(nk - 1, 1), policy.n_tbins - 1
        )
        for k in range(1, nk):
            row = gains[tbin[k]]
            if not np.any(row):
                continue
            acc = np.zeros(grid.shape, dtype=np.complex128)
            for s, m in enumerate(masks):
                if row[s] != 0.0:
                    acc += row[s] * (sv.path.W_hat[k] * m)
            u_hat[k] = u_hat[k] + acc
    return DriftPath(u_hat=u_hat)
