"""Dense eigensolvers, level grouping and the reality scan of the non-hermitian chain."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from .errors import ConvergenceError, DimensionError
from .hamiltonian import assemble, magnon_number

MAX_DENSE_DIM = 2**12
REALITY_RTOL = 1e-8
LEVEL_RTOL = 1e-6


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    levels: list
    all_real: bool
    max_imag: float
    spectral_radius: float

    @property
    def n_levels(self) -> int:
        return len(self.levels)


@dataclass(frozen=True)
class RealityScanResult:
    eta: float
    n_sites: int
    a_grid: np.ndarray
    all_real_flags: np.ndarray
    max_imag: np.ndarray
    intervals: list = field(default_factory=list)


def sort_complex(values) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    return v[np.lexsort((v.imag, v.real))]


def group_levels(eigs: Sequence[complex], tol: float) -> list:
    """Single-linkage clusters of ``eigs`` with distance threshold ``tol``.

    Returns ``(mean value, multiplicity)`` pairs sorted by real then imaginary part.
    """
    v = np.asarray(eigs, dtype=complex)
    if v.size == 0:
        return []
    if tol <= 0 or v.size == 1:
        labels = np.arange(v.size)
    else:
        pts = np.column_stack([v.real, v.imag])
        labels = fcluster(linkage(pts, method="single"), t=tol, criterion="distance")
    levels = []
    for lab in np.unique(labels):
        members = v[labels == lab]
        levels.append((complex(members.mean()), int(members.size)))
    levels.sort(key=lambda lv: (lv[0].real, lv[0].imag))
    return levels


def _diagonalize(H: np.ndarray, hermitian: bool) -> np.ndarray:
    try:
        if hermitian:
            return np.linalg.eigvalsh(H).astype(complex)
        return np.linalg.eigvals(H)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration did not converge: {exc}") from exc


def eigs(H: np.ndarray, hermitian_hint: bool = False, sectors: np.ndarray | None = None,
         level_tol: float | None = None, reality_tol: float | None = None) -> SpectrumResult:
    """Full spectrum of a dense matrix.

    ``sectors`` is an optional integer label per basis state (e.g. the magnon
    number) of a conserved quantity; the matrix is then diagonalised block by
    block. Blocks must decouple to 1e-12 relative to the largest entry.
    Tolerances default to ``LEVEL_RTOL`` and ``REALITY_RTOL`` times the
    spectral radius.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    if H.shape[0] > MAX_DENSE_DIM:
        raise DimensionError(
            f"dimension {H.shape[0]} exceeds {MAX_DENSE_DIM}; use at most 12 sites"
        )
    if sectors is None:
        values = _diagonalize(H, hermitian_hint)
    else:
        sectors = np.asarray(sectors)
        leak = np.abs(H[sectors[:, None] != sectors[None, :]])
        scale = max(np.abs(H).max(), 1.0)
        if leak.size and leak.max() > 1e-12 * scale:
            raise ValueError(f"matrix couples sectors (max entry {leak.max():.2e})")
        parts = []
        for s in np.unique(sectors):
            idx = np.flatnonzero(sectors == s)
            parts.append(_diagonalize(H[np.ix_(idx, idx)], hermitian_hint))
        values = np.concatenate(parts)
    values = sort_complex(values)
    radius = float(np.abs(values).max()) if values.size else 0.0
    rtol = REALITY_RTOL if reality_tol is None else reality_tol
    ltol = LEVEL_RTOL if level_tol is None else level_tol
    max_imag = float(np.abs(values.imag).max()) if values.size else 0.0
    all_real = max_imag <= rtol * radius
    levels = group_levels(values, ltol * radius)
    return SpectrumResult(values, levels, bool(all_real), max_imag, radius)


def chain_spectrum(H: np.ndarray, hermitian_hint: bool, **kw) -> SpectrumResult:
    """Spectrum of a chain Hamiltonian using magnetisation sectors."""
    n_sites = int(np.log2(H.shape[0]))
    return eigs(H, hermitian_hint, sectors=magnon_number(n_sites), **kw)


def predicted_real_intervals(eta: float) -> list:
    """Union [0, eta/2] u [(pi-eta)/2, (pi+eta)/2] u [pi-eta/2, pi], merged."""
    raw = [(0.0, eta / 2), ((np.pi - eta) / 2, (np.pi + eta) / 2), (np.pi - eta / 2, np.pi)]
    return merge_intervals([(max(lo, 0.0), min(hi, np.pi)) for lo, hi in raw])


def merge_intervals(intervals) -> list:
    out = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def flags_to_intervals(grid: np.ndarray, flags: np.ndarray) -> list:
    """Maximal runs of True flags as (first grid point, last grid point)."""
    out = []
    start = None
    for i, f in enumerate(flags):
        if f and start is None:
            start = i
        if start is not None and (not f or i == len(flags) - 1):
            end = i if f else i - 1
            out.append((float(grid[start]), float(grid[end])))
            start = None
    return out


def a_grid(step: float) -> np.ndarray:
    n = int(round(np.pi / step))
    grid = np.arange(n + 1) * step
    if grid[-1] < np.pi - 1e-12:
        grid = np.append(grid, np.pi)
    return np.minimum(grid, np.pi)


def reality_flag(a: float, eta: float, n_sites: int, rtol: float = REALITY_RTOL):
    """(all eigenvalues real?, max |Im| / spectral radius) for H(a, eta)."""
    vals = eigs(assemble(n_sites, a, eta), sectors=magnon_number(n_sites), reality_tol=rtol)
    rel = vals.max_imag / vals.spectral_radius if vals.spectral_radius else 0.0
    return vals.all_real, rel


def reality_scan(eta: float, n_sites: int, a_step: float = 0.01,
                 rtol: float = REALITY_RTOL) -> RealityScanResult:
    """Flag, for each ``a`` in [0, pi], whether H(a, eta) has a purely real spectrum."""
    if not 0 < eta < np.pi:
        raise ValueError(f"eta must lie in (0, pi), got {eta}")
    grid = a_grid(a_step)
    flags = np.zeros(grid.size, dtype=bool)
    rel = np.zeros(grid.size)
    for i, a in enumerate(grid):
        flags[i], rel[i] = reality_flag(float(a), eta, n_sites, rtol)
    return RealityScanResult(eta, n_sites, grid, flags, rel, flags_to_intervals(grid, flags))


def intervals_match(detected: list, expected: list, tol: float) -> bool:
    """Same number of intervals with every endpoint within ``tol``."""
    if len(detected) != len(expected):
        return False
    return all(abs(d[0] - e[0]) <= tol and abs(d[1] - e[1]) <= tol
               for d, e in zip(detected, expected))
