"""
The renormalized stochastic vector built over one flow path.

Components, per scale knot t (spectral storage where it matters):

    W^1      = W
    W^2      = 12 [[W^2]]
    W^3      = 4  [[W^3]]
    W^<3>    = J_t W^3
    W^[3]    = int_0^t J_s W^<3>_s ds
    W^[3]o1  = W o W^[3]                      (final time)
    W^2<>[3] = W^2 o W^[3] - gamma_t W        (renormalized resonant)
    W^<2><>  = (J_t W^2) o (J_t W^2) - gamma_dot_t

The counterterm multiples are the exact first-chaos coefficients of the
lattice resonant products (gamma_t = beta_t(0), gamma_dot_t = E[JW^2 o
JW^2]); both subtractions leave objects bounded uniformly in the scale.
The vector never references the coupling constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .flow import FlowPath, wick_cube, wick_square
from .paracalc import DyadicPartition, lp_all, resonant
from .renorm import RenormConstants


@dataclass
class StochasticVector:
    """One sample of the stochastic objects feeding the variational terms."""

    path: FlowPath
    constants: RenormConstants
    part: DyadicPartition
    W3j_hat: np.ndarray    # (M+1, grid) spectral W^<3>
    W3int_hat: np.ndarray  # (M+1, grid) spectral W^[3]
    # final-time real fields
    W_T: np.ndarray = field(default=None)
    W2_T: np.ndarray = field(default=None)
    W3int_T: np.ndarray = field(default=None)
    res13_T: np.ndarray = field(default=None)      # W o W^[3]
    W2o3_T: np.ndarray = field(default=None)       # W^2 o W^[3] - gamma_T W
    W2_T_blocks: np.ndarray = field(default=None)

    @property
    def grid(self):
        return self.path.grid

    @property
    def timegrid(self):
        return self.path.timegrid

    @property
    def nknots(self) -> int:
        return self.path.nknots

    def W_at(self, k: int) -> np.ndarray:
        return self.grid.inverse(self.path.W_hat[k])

    def W2_at(self, k: int) -> np.ndarray:
        """12 [[W_{t_k}^2]]."""
        return 12.0 * wick_square(self.W_at(k), self.constants.c[k])

    def W3_at(self, k: int) -> np.ndarray:
        """4 [[W_{t_k}^3]]."""
        return 4.0 * wick_cube(self.W_at(k), self.constants.c[k])

    def w3j_at(self, k: int) -> np.ndarray:
        return self.grid.inverse(self.W3j_hat[k])

    def w3int_at(self, k: int) -> np.ndarray:
        return self.grid.inverse(self.W3int_hat[k])

    def w2o3_at(self, k: int) -> np.ndarray:
        """W^2 o W^[3] - gamma * W at knot k (resonant recomputed)."""
        r = resonant(self.part, self.W2_at(k), self.w3int_at(k))
        return r - self.constants.gamma[k] * self.W_at(k)

    def w22_diamond_at(self, k: int, jw2: np.ndarray | None = None) -> np.ndarray:
        """(J W^2) o (J W^2) - gamma_dot at knot k."""
        grid = self.grid
        if jw2 is None:
            t = self.timegrid.knots[k]
            if t <= 0:
                return grid.zeros()
            jsym = self.constants.kernels.jay(grid, t)
            jw2 = grid.inverse(grid.forward(self.W2_at(k)) * jsym)
        return resonant(self.part, jw2, jw2) - self.constants.gamma_dot[k]


def build_stochastic_vector(path: FlowPath, constants: RenormConstants,
                            part: DyadicPartition | None = None,
                            final_products: bool = True) -> StochasticVector:
    """
    Assemble the vector over one path.

    Always fills the per-knot W^<3> and W^[3] families (trapezoid in scale,
    so W^[3] at knot 0 is exactly zero); optionally the final-time resonant
    products with their counterterms.
    """
    grid, tg, kernels = path.grid, path.timegrid, constants.kernels
    if constants.timegrid is not tg and not np.array_equal(constants.timegrid.knots, tg.knots):
        raise ValueError("constants tabulated on a different time grid")
    if part is None:
        part = DyadicPartition(grid)
    knots = tg.knots
    nk = len(knots)
    W3j = np.zeros((nk,) + grid.shape, dtype=np.complex128)
    W3int = np.zeros((nk,) + grid.shape, dtype=np.complex128)
    prev = grid.zeros(spectral=True)
    for k in range(1, nk):
        jsym = kernels.jay(grid, knots[k])
        w3_hat = grid.forward(4.0 * wick_cube(grid.inverse(path.W_hat[k]), constants.c[k]))
        W3j[k] = w3_hat * jsym
        integrand = W3j[k] * jsym
        W3int[k] = W3int[k - 1] + 0.5 * (knots[k] - knots[k - 1]) * (prev + integrand)
        prev = integrand
    sv = StochasticVector(path=path, constants=constants, part=part,
                          W3j_hat=W3j, W3int_hat=W3int)
    if final_products:
        sv.W_T = grid.inverse(path.W_hat[-1])
        sv.W2_T = 12.0 * wick_square(sv.W_T, constants.c[-1])
        sv.W3int_T = grid.inverse(W3int[-1])
        sv.W2_T_blocks = lp_all(part, sv.W2_T)
        w3int_blocks = lp_all(part, sv.W3int_T)
        sv.res13_T = resonant(part, sv.W_T, sv.W3int_T, gb=w3int_blocks)
        raw = resonant(part, sv.W2_T, sv.W3int_T, fb=sv.W2_T_blocks, gb=w3int_blocks)
        sv.W2o3_T = raw - constants.gamma_T * sv.W_T
    return sv
