"""
Sampling the scale-flow Gaussian field and its Wick powers.

A flow path carries the spectral field at every knot of a time grid.  Per
mode n, the increment over a knot interval is a centered complex Gaussian
with variance (rho_{t+}^2 - rho_t^2)/(<n>^2 |Lambda|), realized by scaling
the FFT of white real noise (which delivers the Hermitian pairing and the
real self-conjugate modes for free).  Marginal laws are therefore exact at
knots for any spacing.  The noise is counter-based: one Philox stream per
(seed, stream, knot), so paths are reproducible and independent of worker
scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import TorusGrid
from .kernels import ScaleKernels
from .timegrid import TimeGrid


def _spectral_white_noise(grid: TorusGrid, seed: int, stream: int, knot: int) -> np.ndarray:
    """Unit-variance Hermitian spectral noise keyed by (seed, stream, knot)."""
    key = np.array(
        [np.uint64(seed), (np.uint64(stream) << np.uint64(32)) ^ np.uint64(knot)],
        dtype=np.uint64,
    )
    rng = np.random.Generator(np.random.Philox(key=key))
    xi = rng.standard_normal(grid.shape)
    return np.fft.fftn(xi) / grid.N ** (grid.d / 2.0)


@dataclass(frozen=True)
class FlowPath:
    """One realization of the scale flow on a time grid (spectral storage)."""

    grid: TorusGrid
    kernels: ScaleKernels
    timegrid: TimeGrid
    seed: int
    stream: int
    W_hat: np.ndarray  # (M+1, N, ..., N) complex

    def W_hat_at(self, k: int) -> np.ndarray:
        return self.W_hat[k]

    def W_at(self, k: int) -> np.ndarray:
        """Real field at knot k."""
        return self.grid.inverse(self.W_hat[k])

    @property
    def nknots(self) -> int:
        return self.W_hat.shape[0]


def sample_flow(grid: TorusGrid, kernels: ScaleKernels, timegrid: TimeGrid,
                seed: int, stream: int = 0) -> FlowPath:
    """
    Draw one flow path with exact per-mode marginal variances.

    The zero mode is seeded over the first interval with its full
    free-field variance 1/|Lambda| (sigma never touches it afterwards),
    matching the mode-sum normalization constant c_t.
    """
    knots = timegrid.knots
    if timegrid.T > grid.nyquist * 2.0:
        raise ValueError(
            f"final scale T={timegrid.T} far exceeds the grid Nyquist {grid.nyquist}"
        )
    W = np.zeros((len(knots),) + grid.shape, dtype=np.complex128)
    var_prev = np.zeros(grid.shape)
    amp_scale = 1.0 / np.sqrt(grid.volume)
    for k in range(1, len(knots)):
        var_next = kernels.flow_variance(grid, knots[k])
        dvar = var_next - var_prev
        # monotone rho makes increments nonnegative; tolerate rounding only
        assert dvar.min() > -1e-15, "negative variance increment"
        np.clip(dvar, 0.0, None, out=dvar)
        xi = _spectral_white_noise(grid, seed, stream, k)
        W[k] = W[k - 1] + np.sqrt(dvar) * amp_scale * xi
        var_prev = var_next
    return FlowPath(grid=grid, kernels=kernels, timegrid=timegrid,
                    seed=seed, stream=stream, W_hat=W)


def sample_marginal(grid: TorusGrid, kernels: ScaleKernels, t: float,
                    seed: int, stream: int = 0) -> np.ndarray:
    """One draw of the flow field at scale t (real field), exact law."""
    if t <= 0:
        return grid.zeros()
    var = kernels.flow_variance(grid, t)
    xi = _spectral_white_noise(grid, seed, stream, 1)
    return grid.inverse(np.sqrt(var / grid.volume) * xi)


# -- Wick powers and the normal-ordering constant ---------------------------


def c_constant(grid: TorusGrid, kernels: ScaleKernels, t: float) -> float:
    """
    Normal-ordering constant c_t = E[W_t(x)^2] via the exact mode sum
    |Lambda|^-1 sum_n rho_t(|n|)^2 / <n>^2.
    """
    if t <= 0:
        return 0.0
    return float(np.sum(kernels.flow_variance(grid, t)) / grid.volume)


def wick_square(W: np.ndarray, c: float) -> np.ndarray:
    """[[W^2]] = W^2 - c."""
    return W * W - c


def wick_cube(W: np.ndarray, c: float) -> np.ndarray:
    """[[W^3]] = W^3 - 3 c W."""
    return W * (W * W - 3.0 * c)


def wick_quartic(W: np.ndarray, c: float) -> np.ndarray:
    """[[W^4]] = W^4 - 6 c W^2 + 3 c^2."""
    W2 = W * W
    return W2 * W2 - 6.0 * c * W2 + 3.0 * c * c
