"""
Renormalization constants: the normal-ordering table c_t, the quartic
counterterm pair (a_T, b_T), the resonant-product counterterm gamma_t with
its density, and the vacuum-energy constant delta_T.

gamma is fixed by the exact first Wiener chaos of the lattice resonant
product: gamma_T equals the coefficient beta_T(0) with which W_T appears
inside W^2_T o W^[3]_T, namely

    gamma_T = 288 |Lambda|^-2 sum_{q1,q2} int_0^T du
              rho_u(q1)^2 rho_u(q2)^2 sigma_u(q1+q2)^2
              / (<q1>^2 <q2>^2 <q1+q2>^2),

and its density gamma_dot_t equals E[(J_t W^2_t) o (J_t W^2_t)] exactly.
The double mode sum runs over the grid with wrap-around addition (FFT
circular convolution): that aliased sum is the exact lattice object the
counterterm must cancel, and it carries one factor |Lambda|^-1 per summed
momentum, which makes gamma stable across volumes.  delta_T collects the
exact expectations of the pathwise pure-noise terms dropped by the
renormalizing change of variables, so that the bare and renormalized
functionals agree in mean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flow import c_constant, sample_flow, wick_cube, wick_square
from .grid import TorusGrid
from .kernels import ScaleKernels
from .timegrid import TimeGrid


def _circ_conv_pow(arr: np.ndarray, power: int) -> np.ndarray:
    """Circular self-convolution of order `power` on the mode lattice."""
    return np.fft.ifftn(np.fft.fftn(arr) ** power).real


def gamma_dot(grid: TorusGrid, kernels: ScaleKernels, t: float) -> float:
    """Counterterm density: the exact mean of (J_t W^2_t) o (J_t W^2_t)."""
    if grid.d != 2 and grid.d != 3:
        raise ValueError("gamma is defined for d in {2, 3}")
    if t <= 0:
        return 0.0
    g = kernels.flow_variance(grid, t)
    h = kernels.sigma_sq_t(t, grid.absn) / grid.bracket**2
    conv2 = _circ_conv_pow(g, 2)
    return float(288.0 * np.sum(h * conv2) / grid.volume**2)


def gamma_value(grid: TorusGrid, kernels: ScaleKernels, t: float,
                rtol: float = 1e-4, min_nodes: int = 65) -> float:
    """gamma_t by refining quadrature of gamma_dot; raises if not converged."""
    if t <= 0:
        return 0.0
    # gamma_dot vanishes below the smallest resolvable pair scale
    lo = min(0.5 / grid.L, 0.5 * t)
    nodes = min_nodes
    prev = None
    for _ in range(6):
        ts = np.linspace(lo * 0.5, t, nodes)
        vals = np.array([gamma_dot(grid, kernels, s) for s in ts])
        est = float(np.trapezoid(vals, ts))
        if prev is not None and abs(est - prev) <= rtol * max(abs(est), 1e-12):
            return est
        prev = est
        nodes = 2 * nodes - 1
    raise RuntimeError(
        f"gamma quadrature did not reach rtol={rtol} at t={t}; last delta "
        f"{abs(est - prev):.3e}"
    )


def w3_spectral_variance(grid: TorusGrid, kernels: ScaleKernels, t: float) -> np.ndarray:
    """Exact per-mode variance E|FT(W^3_t)(m)|^2 = 96 |Lambda|^-3 (g*g*g)(m)."""
    g = kernels.flow_variance(grid, t)
    return 96.0 * _circ_conv_pow(g, 3) / grid.volume**3


def w3j_mean_square(grid: TorusGrid, kernels: ScaleKernels, t: float) -> float:
    """Exact E[mean((W^<3>_t)^2)] by mode sum."""
    if t <= 0:
        return 0.0
    jsq = kernels.sigma_sq_t(t, grid.absn) / grid.bracket**2
    return float(np.sum(jsq * w3_spectral_variance(grid, kernels, t)))


@dataclass(frozen=True)
class RenormConstants:
    """Tabulated renormalization data on a fixed grid and time grid."""

    grid: TorusGrid
    kernels: ScaleKernels
    timegrid: TimeGrid
    lam: float
    c: np.ndarray            # c_{t_k}, one entry per knot
    gamma: np.ndarray        # gamma_{t_k}; zeros when d == 2
    gamma_dot: np.ndarray    # density at knots; zeros when d == 2
    gamma_quad_error: float
    delta: float = 0.0
    delta_se: float = 0.0

    def __post_init__(self) -> None:
        if self.lam < 0:
            raise ValueError("coupling must be nonnegative")

    @property
    def c_T(self) -> float:
        return float(self.c[-1])

    @property
    def a_T(self) -> float:
        return 6.0 * self.c_T

    @property
    def b_T(self) -> float:
        return 3.0 * self.c_T**2

    @property
    def gamma_T(self) -> float:
        return float(self.gamma[-1])


def build_constants(grid: TorusGrid, kernels: ScaleKernels, timegrid: TimeGrid,
                    lam: float) -> RenormConstants:
    """
    Tabulate c_t (always) and gamma_t, gamma_dot_t (d = 3 only) on the knots.

    gamma is integrated on the refined knot set; the difference between the
    coarse and refined values is reported as the quadrature error estimate.
    delta_T is not filled here: it needs a Monte Carlo ensemble, see
    :func:`delta_constant`.
    """
    knots = timegrid.knots
    c = np.array([c_constant(grid, kernels, t) for t in knots])
    if grid.d == 3:
        gd = np.array([gamma_dot(grid, kernels, t) for t in knots])
        fine = timegrid.refined()
        gd_fine = np.array([gamma_dot(grid, kernels, t) for t in fine.knots])
        gam_fine = fine.cumulative(gd_fine)
        idx = np.searchsorted(fine.knots, knots)
        gam = gam_fine[idx]
        gam_coarse = timegrid.cumulative(gd)
        err = float(np.max(np.abs(gam - gam_coarse)))
    else:
        gd = np.zeros_like(c)
        gam = np.zeros_like(c)
        err = 0.0
    return RenormConstants(grid=grid, kernels=kernels, timegrid=timegrid, lam=lam,
                           c=c, gamma=gam, gamma_dot=gd, gamma_quad_error=err)


def with_delta(consts: RenormConstants, delta: float, delta_se: float) -> RenormConstants:
    return RenormConstants(grid=consts.grid, kernels=consts.kernels,
                           timegrid=consts.timegrid, lam=consts.lam, c=consts.c,
                           gamma=consts.gamma, gamma_dot=consts.gamma_dot,
                           gamma_quad_error=consts.gamma_quad_error,
                           delta=delta, delta_se=delta_se)


# -- delta ------------------------------------------------------------------


def _final_cubic_objects(path, c_table: np.ndarray):
    """W_T, W^2_T, W^[3]_T and the path's quadrature of mean((W^<3>)^2)."""
    grid, tg = path.grid, path.timegrid
    knots = tg.knots
    w3j_sq = np.zeros(len(knots))
    w3int_hat = grid.zeros(spectral=True)
    prev_integrand = grid.zeros(spectral=True)
    for k in range(1, len(knots)):
        jsym = kernels_jay(path.kernels, grid, knots[k])
        W = grid.inverse(path.W_hat[k])
        w3_hat = grid.forward(wick_cube(W, c_table[k])) * 4.0
        w3j_hat = w3_hat * jsym
        w3j_sq[k] = float(np.sum(np.abs(w3j_hat) ** 2))
        integrand = w3j_hat * jsym
        dt = knots[k] - knots[k - 1]
        w3int_hat += 0.5 * dt * (prev_integrand + integrand)
        prev_integrand = integrand
    W_T = grid.inverse(path.W_hat[-1])
    W2_T = 12.0 * wick_square(W_T, c_table[-1])
    W3int_T = grid.inverse(w3int_hat)
    return W_T, W2_T, W3int_T, float(tg.integrate(w3j_sq))


def kernels_jay(kernels: ScaleKernels, grid: TorusGrid, t: float) -> np.ndarray:
    if t <= 0:
        return np.zeros(grid.shape)
    return kernels.sigma_t(t, grid.absn) / grid.bracket


@dataclass(frozen=True)
class DeltaResult:
    value: float
    se: float
    term1_exact: float
    term1_mc: float
    term1_mc_se: float
    n_samples: int


def delta_constant(grid: TorusGrid, kernels: ScaleKernels, timegrid: TimeGrid,
                   lam: float, n_samples: int, seed: int,
                   gamma_T: float | None = None) -> DeltaResult:
    """
    The vacuum constant delta_T: exact expectations of the pure-noise terms
    dropped by the change of variables,

        delta_T = -(lam^2/2) E int mean((W^<3>_t)^2) dt
                  + (lam^3/2) E mean(W^2_T (W^[3]_T)^2)
                  - lam^3 gamma_T E mean(W_T W^[3]_T)
                  - 4 lam^4 E mean(W_T (W^[3]_T)^3).

    Term 1 is an exact mode sum (the Monte Carlo value is returned alongside
    as a cross-check); terms 2-4 are ensemble averages.
    """
    if grid.d != 3:
        raise ValueError("delta_T is a d = 3 constant")
    if lam == 0.0:
        return DeltaResult(0.0, 0.0, 0.0, 0.0, 0.0, 0)
    if n_samples < 8:
        raise ValueError("ensemble too small for a meaningful error bar")
    if gamma_T is None:
        gamma_T = gamma_value(grid, kernels, timegrid.T)
    knots = timegrid.knots
    c_table = np.array([c_constant(grid, kernels, t) for t in knots])
    term1_exact = -0.5 * lam**2 * timegrid.integrate(
        np.array([w3j_mean_square(grid, kernels, t) for t in knots])
    )
    m1 = np.empty(n_samples)
    m2 = np.empty(n_samples)
    m3 = np.empty(n_samples)
    m4 = np.empty(n_samples)
    for i in range(n_samples):
        path = sample_flow(grid, kernels, timegrid, seed, stream=i)
        W_T, W2_T, W3int_T, w3j_quad = _final_cubic_objects(path, c_table)
        m1[i] = w3j_quad
        m2[i] = np.mean(W2_T * W3int_T**2)
        m3[i] = np.mean(W_T * W3int_T)
        m4[i] = np.mean(W_T * W3int_T**3)

    def mean_se(x: np.ndarray) -> tuple[float, float]:
        return float(np.mean(x)), float(np.std(x, ddof=1) / np.sqrt(len(x)))

    m1m, m1s = mean_se(m1)
    m2m, m2s = mean_se(m2)
    m3m, m3s = mean_se(m3)
    m4m, m4s = mean_se(m4)
    value = term1_exact + 0.5 * lam**3 * m2m - lam**3 * gamma_T * m3m - 4.0 * lam**4 * m4m
    se = float(np.sqrt((0.5 * lam**3 * m2s) ** 2 + (lam**3 * gamma_T * m3s) ** 2
                       + (4.0 * lam**4 * m4s) ** 2))
    return DeltaResult(value=value, se=se, term1_exact=term1_exact,
                       term1_mc=-0.5 * lam**2 * m1m, term1_mc_se=0.5 * lam**2 * m1s,
                       n_samples=n_samples)
