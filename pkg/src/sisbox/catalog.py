"""Named signal catalog used by the CLI and the test fixtures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CatalogError
from .grid import FrequencyGrid
from .signals import GridSpectrum, PiecewiseConstantSpectrum, Signal, TimeKernel


def shannon_signal() -> PiecewiseConstantSpectrum:
    """Unit indicator spectrum on [-1/2, 1/2); the classical interpolating
    kernel sin(pi x)/(pi x)."""
    return PiecewiseConstantSpectrum([(-0.5, 0.5, 1.0)])


def blhat_signal(grid: FrequencyGrid) -> GridSpectrum:
    """Band-limited triangle spectrum (1 - 2|omega|) on [-1/2, 1/2),
    sampled on the grid; time function is half a squared sinc."""
    om = grid.omegas
    vals = np.where(np.abs(om) < 0.5, np.maximum(1.0 - 2.0 * np.abs(om), 0.0), 0.0)
    return GridSpectrum(vals.astype(complex), grid)


def ex2_signal(n_max: int = 60) -> PiecewiseConstantSpectrum:
    """Alternating dyadic-block spectrum: value (-1)^n/(n+1) on
    [n, n + 2^-n) for n = 0..n_max.

    The blocks get exponentially short while their alternating sums stay
    bounded away from zero, which separates the two-sided ratio bound
    (which holds) from the absolute-mass domination (which fails).  The
    dropped tail beyond n_max is recorded on the signal as
    ``series_tail``.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    pieces = [(n, 0.0, min(0.5 ** n, 1.0), (-1.0) ** n / (n + 1)) for n in range(n_max + 1)]
    sig = PiecewiseConstantSpectrum.from_local_pieces(pieces)
    ns = np.arange(n_max + 1, n_max + 200)
    sig.series_tail = float(np.sum(0.5 ** ns / (ns + 1)))
    return sig


def _ex3_evaluator(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    left = (x >= -1.0) & (x <= -0.5)
    mid = (x > -0.5) & (x < 0.5)
    right = (x >= 0.5) & (x <= 1.0)
    out[left] = -np.sin(np.pi * x[left])
    out[mid] = 1.0
    out[right] = np.sin(np.pi * x[right])
    return out


def ex3_signal(quadrature_order: int = 2048) -> TimeKernel:
    """Plateau kernel: sine ramps on [-1, -1/2] and [1/2, 1] around a unit
    plateau.  Interpolating (value 1 at 0, 0 at other integers) and
    compactly supported; flagged outside the integrable-spectrum class."""
    return TimeKernel((-1.0, 1.0), _ex3_evaluator, quadrature_order,
                      integrable_spectrum=False, name="ex3")


def hat_signal(quadrature_order: int = 2048) -> TimeKernel:
    """Triangle kernel 1 - |x| on [-1, 1]; spectrum is squared sinc."""
    return TimeKernel((-1.0, 1.0), lambda x: np.maximum(1.0 - np.abs(np.asarray(x, dtype=float)), 0.0),
                      quadrature_order, integrable_spectrum=True, name="hat")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    note: str
    needs_grid: bool
    factory: Callable


CATALOG: dict[str, CatalogEntry] = {
    "shannon": CatalogEntry("shannon", "indicator spectrum on [-1/2, 1/2); sinc kernel",
                            False, lambda **kw: shannon_signal()),
    "blhat": CatalogEntry("blhat", "triangle spectrum (1-2|w|) on [-1/2, 1/2)",
                          True, lambda grid, **kw: blhat_signal(grid)),
    "ex2": CatalogEntry("ex2", "alternating dyadic-block spectrum on [n, n+2^-n)",
                        False, lambda n_max=60, **kw: ex2_signal(n_max)),
    "ex3": CatalogEntry("ex3", "plateau kernel with sine ramps on [-1, 1]",
                        False, lambda quadrature_order=2048, **kw: ex3_signal(quadrature_order)),
    "hat": CatalogEntry("hat", "triangle kernel 1-|x| on [-1, 1]",
                        False, lambda quadrature_order=2048, **kw: hat_signal(quadrature_order)),
}


def catalog_names() -> list[str]:
    return sorted(CATALOG)


def build_signal(name: str, grid: FrequencyGrid, **params) -> Signal:
    entry = CATALOG.get(name)
    if entry is None:
        raise CatalogError(name, catalog_names())
    if entry.needs_grid:
        return entry.factory(grid=grid, **params)
    return entry.factory(**params)


def required_grid(name: str, default: FrequencyGrid, **params) -> FrequencyGrid:
    """Default grid, widened (power of two) when the signal needs more band."""
    entry = CATALOG.get(name)
    if entry is None:
        raise CatalogError(name, catalog_names())
    if entry.needs_grid:
        return default
    sig = entry.factory(**params)
    need = sig.required_half_bandwidth()
    if need is not None and need > default.half_bandwidth:
        return FrequencyGrid(need, default.resolution)
    return default
