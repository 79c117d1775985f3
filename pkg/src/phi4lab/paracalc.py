"""
Littlewood-Paley analysis on the grid: dyadic blocks, Besov norms,
paraproducts, resonant products and the commutator forms K1, K2, K3.

The dyadic symbols are built by telescoping the smooth cutoff profile,
which makes the partition of unity exact on every grid mode (up to one
final per-mode renormalization against float rounding).  That exactness
is what turns the Bony decomposition f*g = f<g + f0g + f>g into a
machine-precision identity usable as a test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import TorusGrid
from .kernels import ScaleKernels, bump_rho


@dataclass(frozen=True)
class BesovIndex:
    """Regularity / integrability / summability triple (s, p, q)."""

    s: float
    p: float
    q: float

    def __post_init__(self) -> None:
        if self.p < 1 or self.q < 1:
            raise ValueError("integrability indices must be >= 1")


class DyadicPartition:
    """
    Dyadic block symbols phi_j, j = -1 .. j_max, on a fixed grid.

    phi_{-1} is supported in the unit ball, phi_j (j >= 0) in the annulus
    2^j * (1/2, 2); blocks with |i - j| > 1 have disjoint supports on the
    grid, and the symbols sum to 1 exactly on every mode.
    """

    def __init__(self, grid: TorusGrid):
        self.grid = grid
        absn = grid.absn
        nmax = float(np.max(absn))
        jmax = max(0, int(np.ceil(np.log2(max(nmax, 1.0)))))
        syms = [bump_rho(absn)]  # chi = phi_{-1}
        for j in range(jmax + 1):
            syms.append(bump_rho(absn / 2.0 ** (j + 1)) - bump_rho(absn / 2.0**j))
        stack = np.stack(syms, axis=0)
        total = stack.sum(axis=0)
        # telescoping gives total == 1 analytically; renormalize rounding away
        if np.min(total) <= 0.5:
            raise AssertionError("dyadic telescoping failed to cover the grid")
        stack /= total
        self.symbols = stack
        self.jmax = jmax

    @property
    def nblocks(self) -> int:
        return self.symbols.shape[0]

    @property
    def jrange(self) -> np.ndarray:
        return np.arange(-1, self.jmax + 1)

    def symbol(self, j: int) -> np.ndarray:
        if not -1 <= j <= self.jmax:
            raise ValueError(f"block index {j} out of range [-1, {self.jmax}]")
        return self.symbols[j + 1]


def lp_block(part: DyadicPartition, f: np.ndarray, j: int) -> np.ndarray:
    """The Littlewood-Paley block Delta_j f as a real field."""
    g = part.grid
    return g.inverse(g.forward(f) * part.symbol(j))


def lp_all(part: DyadicPartition, f: np.ndarray) -> np.ndarray:
    """All blocks of f, stacked on axis 0 (index j+1)."""
    g = part.grid
    F = g.forward(f)
    return np.stack([g.inverse(F * part.symbols[b]) for b in range(part.nblocks)])


def besov_norm(part: DyadicPartition, f: np.ndarray, idx: BesovIndex,
               blocks: np.ndarray | None = None) -> float:
    """B^s_{p,q} norm with normalized L^p and exact 2^{js} weights."""
    if blocks is None:
        blocks = lp_all(part, f)
    g = part.grid
    lp = np.array([g.lp_norm(b, idx.p) for b in blocks])
    weighted = 2.0 ** (part.jrange * idx.s) * lp
    if np.isinf(idx.q):
        return float(np.max(weighted))
    return float(np.sum(weighted**idx.q) ** (1.0 / idx.q))


def sobolev_norm(part: DyadicPartition, f: np.ndarray, s: float) -> float:
    """H^s = B^s_{2,2} through the block decomposition."""
    return besov_norm(part, f, BesovIndex(s, 2, 2))


# -- paraproducts ---------------------------------------------------------


def _blocks(part: DyadicPartition, f: np.ndarray, pre: np.ndarray | None) -> np.ndarray:
    return pre if pre is not None else lp_all(part, f)


def para_gt(part: DyadicPartition, f: np.ndarray, g: np.ndarray,
            fb: np.ndarray | None = None, gb: np.ndarray | None = None) -> np.ndarray:
    """f > g: the part of f*g where f carries the high frequencies."""
    fb = _blocks(part, f, fb)
    gb = _blocks(part, g, gb)
    low = np.cumsum(gb, axis=0)  # low[b] = S_{<= j} g at b = j+1
    out = np.zeros(part.grid.shape)
    for b in range(2, part.nblocks):  # i = b-1 >= 1 so that j <= i-2 exists
        out += fb[b] * low[b - 2]
    return out


def para_lt(part: DyadicPartition, f: np.ndarray, g: np.ndarray,
            fb: np.ndarray | None = None, gb: np.ndarray | None = None) -> np.ndarray:
    """f < g equals g > f."""
    return para_gt(part, g, f, fb=gb, gb=fb)


def resonant(part: DyadicPartition, f: np.ndarray, g: np.ndarray,
             fb: np.ndarray | None = None, gb: np.ndarray | None = None) -> np.ndarray:
    """f o g: the diagonal part sum_{|i-j|<=1} Delta_i f Delta_j g."""
    fb = _blocks(part, f, fb)
    gb = _blocks(part, g, gb)
    out = fb[0] * (gb[0] + gb[1])
    for b in range(1, part.nblocks):
        hi = min(b + 1, part.nblocks - 1)
        out += fb[b] * (gb[max(b - 1, 0): hi + 1]).sum(axis=0)
    return out


# -- commutator forms ------------------------------------------------------


def k1(part: DyadicPartition, f: np.ndarray, g: np.ndarray, h: np.ndarray,
       fb: np.ndarray | None = None, gb: np.ndarray | None = None,
       hb: np.ndarray | None = None) -> np.ndarray:
    """Trilinear commutator K1(f, g, h) = (f > g) o h - g * (f o h)."""
    fb = _blocks(part, f, fb)
    gb = _blocks(part, g, gb)
    hb = _blocks(part, h, hb)
    fg = para_gt(part, f, g, fb=fb, gb=gb)
    return resonant(part, fg, h, gb=hb) - g * resonant(part, f, h, fb=fb, gb=hb)


def k2(part: DyadicPartition, f: np.ndarray, g: np.ndarray, h: np.ndarray,
       fb: np.ndarray | None = None, gb: np.ndarray | None = None,
       hb: np.ndarray | None = None) -> float:
    """Trilinear form K2(f, g, h) = mean[(f > g) h - (f o h) g]."""
    fb = _blocks(part, f, fb)
    grid = part.grid
    fg = para_gt(part, f, g, fb=fb, gb=gb)
    fh = resonant(part, f, h, fb=fb, gb=hb)
    return grid.inner(fg, h) - grid.inner(fh, g)


def k3(part: DyadicPartition, kernels: ScaleKernels, t: float,
       phi: np.ndarray, psi: np.ndarray, g1: np.ndarray, g2: np.ndarray) -> float:
    """
    Scale-commutator K3_t = mean[J_t(phi > g1) J_t(psi > g2)
                               - (J_t phi o J_t psi) g1 g2].
    """
    if t <= 0:
        raise ValueError(f"k3 requires t > 0, got {t}")
    grid = part.grid
    jsym = kernels.jay(grid, t)
    a = grid.inverse(grid.forward(para_gt(part, phi, g1)) * jsym)
    b = grid.inverse(grid.forward(para_gt(part, psi, g2)) * jsym)
    jphi = grid.inverse(grid.forward(phi) * jsym)
    jpsi = grid.inverse(grid.forward(psi) * jsym)
    res = resonant(part, jphi, jpsi)
    return grid.inner(a, b) - grid.mean(res * g1 * g2)
