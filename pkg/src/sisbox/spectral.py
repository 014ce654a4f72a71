"""Elementary spectral operations every other module consumes.

All operations discretize almost-everywhere statements to "at every grid
node": periodization is an exact finite sum over the 2K integer shifts
the grid holds, the time fiber of a sample sequence is an exact discrete
Fourier series, and set measure is the fraction of unit-grid nodes.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import BandwidthOverflowError, DegenerateSpaceError, NotAGrammianError
from .grid import FrequencyGrid, PeriodicSpectrum, SupportMask, TimeSamples
from .signals import ShiftCombination, Signal, TimeKernel

DEFAULT_EPS = 1e-9
DEFAULT_K_MAX = 512


def _check_bandwidth(f: Signal, grid: FrequencyGrid) -> None:
    need = f.required_half_bandwidth()
    if need is not None and need > grid.half_bandwidth:
        raise BandwidthOverflowError(need, grid.half_bandwidth)


def periodize(f: Signal, grid: FrequencyGrid) -> PeriodicSpectrum:
    """sum_m f_hat(omega + m) over all shifts the grid covers (exact)."""
    _check_bandwidth(f, grid)
    vals = grid.fold(f.grid_values(grid)).sum(axis=0)
    return PeriodicSpectrum(vals, grid)


def grammian(f: Signal, grid: FrequencyGrid) -> PeriodicSpectrum:
    """sum_m |f_hat(omega + m)|^2; real and nonnegative."""
    _check_bandwidth(f, grid)
    vals = (np.abs(grid.fold(f.grid_values(grid))) ** 2).sum(axis=0)
    return PeriodicSpectrum(vals, grid)


def abs_periodize(f: Signal, grid: FrequencyGrid) -> PeriodicSpectrum:
    """sum_m |f_hat(omega + m)|, the absolute-value periodization."""
    _check_bandwidth(f, grid)
    vals = np.abs(grid.fold(f.grid_values(grid))).sum(axis=0)
    return PeriodicSpectrum(vals, grid)


def bracket(f: Signal, g: Signal, grid: FrequencyGrid) -> PeriodicSpectrum:
    """Fiberwise inner product sum_m f_hat(omega+m) * conj(g_hat(omega+m))."""
    _check_bandwidth(f, grid)
    _check_bandwidth(g, grid)
    ff = grid.fold(f.grid_values(grid))
    gg = grid.fold(g.grid_values(grid))
    return PeriodicSpectrum((ff * np.conj(gg)).sum(axis=0), grid)


def zak_time_fiber(samples: TimeSamples, grid: FrequencyGrid) -> PeriodicSpectrum:
    """Discrete Fourier series sum_k f(k) exp(-2i*pi*k*omega) of the samples."""
    n = grid.resolution
    acc = np.zeros(n, dtype=complex)
    np.add.at(acc, samples.ks % n, samples.values)
    return PeriodicSpectrum(np.fft.fft(acc), grid)


def zak_dual_fiber(f: Signal, x: float, grid: FrequencyGrid) -> PeriodicSpectrum:
    """Phase-twisted periodization sum_m f_hat(omega+m) exp(2i*pi*m*x)."""
    _check_bandwidth(f, grid)
    folded = grid.fold(f.grid_values(grid))
    phases = np.exp(2j * np.pi * grid.shifts() * x)
    return PeriodicSpectrum((folded * phases[:, None]).sum(axis=0), grid)


def inverse_fourier_evaluate(f: Signal, x, grid: FrequencyGrid | None = None):
    """Time value(s) at x: analytic for interval spectra, cell-model
    quadrature for grid spectra, direct evaluation for time kernels."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = f.time_values(xs)
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return complex(out[0])
    return out


def support_mask(g: PeriodicSpectrum, eps: float = DEFAULT_EPS) -> SupportMask:
    """Nodes where g exceeds eps * max(g); g must be a (real, >= 0) Grammian."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not g.is_real(tol=1e-9):
        raise NotAGrammianError("Grammian has a non-negligible imaginary part")
    vals = g.real_values
    top = float(vals.max()) if vals.size else 0.0
    floor = max(top, 1e-300)
    if float(vals.min()) < -eps * floor:
        raise NotAGrammianError(f"Grammian has negative entries below -eps*max = {-eps * floor:.3g}")
    mask = vals > eps * top if top > 0 else np.zeros_like(vals, dtype=bool)
    return SupportMask(mask, g.grid, eps)


def essential_bounds(g: PeriodicSpectrum, mask: SupportMask) -> tuple[float, float]:
    """(min, max) of g over the masked nodes; the grid form of two-sided
    frame bounds for the translates of the generator."""
    g.grid.require_same(mask.grid)
    if mask.is_empty:
        raise DegenerateSpaceError("support mask is empty; no frame bounds exist")
    vals = g.real_values[mask.values]
    return float(vals.min()), float(vals.max())


class ShiftSquareSum(NamedTuple):
    bound: float
    tail_energy: float
    route: str


def shift_square_sum(f: Signal, x_grid, grid: FrequencyGrid,
                     k_max: int = DEFAULT_K_MAX) -> ShiftSquareSum:
    """max over x_grid of sum_k |f(x+k)|^2.

    Time kernels and their finite shift-combinations are summed directly
    (compact support makes the sum finite and exact).  Purely spectral
    representations use the Parseval identity
    sum_k |f(x+k)|^2 = integral over one period of |Z_f(x, .)|^2,
    evaluated at grid resolution; this sums all shifts of the
    grid-projected signal.
    """
    xs = np.atleast_1d(np.asarray(x_grid, dtype=float))
    direct = isinstance(f, TimeKernel) or (
        isinstance(f, ShiftCombination) and isinstance(f.base, TimeKernel)
    )
    if direct:
        best = 0.0
        ks = np.arange(-k_max, k_max + 1)
        for x in xs:
            vals = f.time_values(x + ks)
            best = max(best, float(np.sum(np.abs(vals) ** 2)))
        return ShiftSquareSum(best, 0.0, "direct")
    _check_bandwidth(f, grid)
    folded = grid.fold(f.grid_values(grid))
    om_rows = grid.omegas.reshape(2 * grid.half_bandwidth, grid.resolution)
    best = 0.0
    for x in xs:
        fiber = (folded * np.exp(2j * np.pi * om_rows * x)).sum(axis=0)
        best = max(best, float(np.mean(np.abs(fiber) ** 2)))
    tail = f.spectral_tail_energy(grid)
    return ShiftSquareSum(best, tail, "parseval")


def integer_samples(f: Signal, grid: FrequencyGrid, k_max: int = DEFAULT_K_MAX) -> TimeSamples:
    """Integer samples of f (route depends on the representation)."""
    return f.integer_samples(grid, k_max)


def spectral_norm(values: np.ndarray, grid: FrequencyGrid) -> float:
    """Grid L2 norm: sqrt of (1/N) * sum of squared moduli over all nodes."""
    return float(np.sqrt(np.sum(np.abs(values) ** 2) / grid.resolution))


def signal_norm(f: Signal, grid: FrequencyGrid) -> float:
    return spectral_norm(f.grid_values(grid), grid)
