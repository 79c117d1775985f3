"""
phi4lab: a lattice-torus laboratory for the stochastic-control
construction of the phi^4 measure in two and three dimensions.

Scale-flow Gaussian fields, Wick and paracontrolled renormalization, the
renormalized variational functional with drift optimization, and
independent partition-function oracles for validating free-energy
estimates.
"""

from .grid import TorusGrid, make_grid, apply_multiplier, multiply_field, is_hermitian
from .kernels import ScaleKernels
from .timegrid import TimeGrid, make_timegrid
from .paracalc import (
    BesovIndex,
    DyadicPartition,
    besov_norm,
    k1,
    k2,
    k3,
    lp_all,
    lp_block,
    para_gt,
    para_lt,
    resonant,
)
from .flow import (
    FlowPath,
    c_constant,
    sample_flow,
    sample_marginal,
    wick_cube,
    wick_quartic,
    wick_square,
)
from .renorm import (
    RenormConstants,
    build_constants,
    delta_constant,
    gamma_dot,
    gamma_value,
    with_delta,
)

__all__ = [
    "TorusGrid", "make_grid", "apply_multiplier", "multiply_field", "is_hermitian",
    "ScaleKernels", "TimeGrid", "make_timegrid",
    "BesovIndex", "DyadicPartition", "besov_norm", "lp_block", "lp_all",
    "para_gt", "para_lt", "resonant", "k1", "k2", "k3",
    "FlowPath", "sample_flow", "sample_marginal", "c_constant",
    "wick_square", "wick_cube", "wick_quartic",
    "RenormConstants", "build_constants", "with_delta",
    "gamma_dot", "gamma_value", "delta_constant",
]

__version__ = "0.1.0"
