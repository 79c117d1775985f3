"""
Discretized torus, spectral transforms and Fourier multipliers.

The domain is the torus of half-period scale ``L``, i.e. side length
``2*pi*L``, sampled on ``N`` points per dimension.  Fourier modes live on
the lattice ``(1/L) * Z^d`` truncated at the Nyquist frequency ``N/(2L)``.
The Lebesgue measure is normalized to unit mass, so spatial means, L^p
norms and inner products all carry the weight ``1/N^d``; the transform
convention is chosen so that the zero coefficient of a field equals its
spatial mean and Parseval holds against the normalized measure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Fields larger than this are almost certainly a configuration mistake on a
# single workstation; reject them early instead of thrashing.
DEFAULT_MODE_CAP = 2**21


@dataclass(frozen=True)
class TorusGrid:
    """
    Pre-computed spectral quantities for the periodic torus.

    Parameters
    ----------
    d : int
        Dimension, 2 or 3.
    L : float
        Torus half-period scale; the side length is ``2*pi*L``.
    N : int
        Grid points per dimension, a power of two.

    Attributes
    ----------
    volume : float
        ``(2*pi*L)**d``.
    absn : ndarray
        ``|n|`` per mode, FFT layout, shape ``(N,)*d``.
    bracket : ndarray
        Japanese bracket ``(1+|n|^2)**0.5`` per mode.
    """

    d: int
    L: float
    N: int

    def __post_init__(self) -> None:
        if self.d not in (2, 3):
            raise ValueError(f"dimension must be 2 or 3, got {self.d}")
        if self.N < 2 or (self.N & (self.N - 1)) != 0:
            raise ValueError(f"N must be a power of two >= 2, got {self.N}")
        if self.L <= 0:
            raise ValueError(f"L must be positive, got {self.L}")
        if self.N**self.d > DEFAULT_MODE_CAP:
            raise ValueError(
                f"N^d = {self.N**self.d} exceeds the mode cap {DEFAULT_MODE_CAP}"
            )
        # integer mode index per axis, FFT layout: 0, 1, ..., N/2-1, -N/2, ..., -1
        m1 = np.fft.fftfreq(self.N, d=1.0 / self.N)
        axes = np.meshgrid(*([m1] * self.d), indexing="ij")
        mode_int = np.stack(axes, axis=-1).astype(np.int64)
        nsq = sum((a / self.L) ** 2 for a in axes)
        object.__setattr__(self, "mode_int", mode_int)
        object.__setattr__(self, "nsq", nsq)
        object.__setattr__(self, "absn", np.sqrt(nsq))
        object.__setattr__(self, "bracket", np.sqrt(1.0 + nsq))
        object.__setattr__(self, "volume", (2.0 * np.pi * self.L) ** self.d)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.d

    @property
    def npoints(self) -> int:
        return self.N**self.d

    @property
    def nyquist(self) -> float:
        """Axis Nyquist frequency ``N/(2L)``."""
        return self.N / (2.0 * self.L)

    def zeros(self, *, spectral: bool = False) -> np.ndarray:
        dtype = np.complex128 if spectral else np.float64
        return np.zeros(self.shape, dtype=dtype)

    def coordinates(self) -> tuple[np.ndarray, ...]:
        """Spatial coordinate arrays, each in ``[0, 2*pi*L)``."""
        x1 = 2.0 * np.pi * self.L * np.arange(self.N) / self.N
        return tuple(np.meshgrid(*([x1] * self.d), indexing="ij"))

    # -- transforms ------------------------------------------------------

    def forward(self, f: np.ndarray) -> np.ndarray:
        """Spectral coefficients of a real field; coefficient 0 is the mean."""
        if f.shape != self.shape:
            raise ValueError(f"field shape {f.shape} does not match grid {self.shape}")
        return np.fft.fftn(f) / self.npoints

    def inverse(self, F: np.ndarray) -> np.ndarray:
        """Real field from spectral coefficients (imaginary part discarded)."""
        if F.shape != self.shape:
            raise ValueError(f"coefficient shape {F.shape} does not match grid {self.shape}")
        return np.fft.ifftn(F * self.npoints).real

    def mean(self, f: np.ndarray) -> float:
        """Normalized integral of a field (mean over grid points)."""
        return float(np.mean(f))

    def inner(self, f: np.ndarray, g: np.ndarray) -> float:
        """Normalized L^2 inner product of two real fields."""
        return float(np.mean(f * g))

    def lp_norm(self, f: np.ndarray, p: float) -> float:
        """Normalized L^p norm; ``p=inf`` gives the grid maximum."""
        if np.isinf(p):
            return float(np.max(np.abs(f)))
        return float(np.mean(np.abs(f) ** p) ** (1.0 / p))

    def sobolev_norm(self, f: np.ndarray, s: float) -> float:
        """H^s norm via exact bracket weights on spectral coefficients."""
        F = self.forward(f)
        return float(np.sqrt(np.sum(self.bracket ** (2 * s) * np.abs(F) ** 2)))


def make_grid(d: int, L: float, N: int) -> TorusGrid:
    """Construct a validated torus grid."""
    return TorusGrid(d=d, L=L, N=N)


def apply_multiplier(grid: TorusGrid, F: np.ndarray, symbol: np.ndarray) -> np.ndarray:
    """
    Apply a Fourier multiplier to spectral coefficients.

    ``symbol`` must be real and even in the mode variable so that real
    fields stay real; symbols built from ``grid.absn``/``grid.bracket``
    satisfy this automatically.
    """
    if F.shape != grid.shape or symbol.shape != grid.shape:
        raise ValueError("shape mismatch between coefficients, symbol and grid")
    if np.iscomplexobj(symbol):
        raise ValueError("multiplier symbols must be real")
    return F * symbol


def multiply_field(grid: TorusGrid, f: np.ndarray, symbol: np.ndarray) -> np.ndarray:
    """Apply a Fourier multiplier to a real field, returning a real field."""
    return grid.inverse(apply_multiplier(grid, grid.forward(f), symbol))


def is_hermitian(grid: TorusGrid, F: np.ndarray, tol: float = 1e-10) -> bool:
    """Check conj(F(n)) == F(-n) on the mode lattice."""
    flipped = F
    for ax in range(grid.d):
        flipped = np.flip(np.roll(flipped, -1, axis=ax), axis=ax)
    scale = float(np.max(np.abs(F)))
    if scale == 0.0:
        return True
    return bool(np.max(np.abs(np.conj(flipped) - F)) <= tol * scale)


def hermitian_dofs(grid: TorusGrid, active: np.ndarray) -> list[tuple[tuple[int, ...], bool]]:
    """
    Enumerate Hermitian-reduced real degrees of freedom among active modes.

    Returns a list of ``(index, self_conjugate)`` pairs: one entry per
    conjugate pair of modes (keeping one representative) and one for every
    self-conjugate mode.  Used by the tiny-grid quadrature oracle, where a
    complex pair contributes two real dofs only through its representative's
    real and imaginary parts; here each pair is counted as one entry carrying
    two real dofs unless self-conjugate.
    """
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[tuple[int, ...], bool]] = []
    for idx in np.argwhere(active):
        tidx = tuple(int(i) for i in idx)
        if tidx in seen:
            continue
        neg = tuple((-i) % grid.N for i in tidx)
        seen.add(tidx)
        seen.add(neg)
        out.append((tidx, neg == tidx))
    return out
