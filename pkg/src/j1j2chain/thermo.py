"""Thermodynamic-limit observables: root densities, energy density, spinons and the gap.

Fourier conventions: f~(w) = int f(u) e^{i w u} du and
f(u) = (1/2 pi) int f~(w) e^{-i w u} dw on the line (real eta); on the
circle (imaginary eta) the inverse is a sum over integer w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate, optimize, signal

from .errors import ConvergenceError, PoleError
from .params import ModelParams, Regime

QUAD_RTOL = 1e-10
TAIL_EXPONENT = 28.0


def _regime(p: ModelParams) -> Regime:
    if p.regime is Regime.NONHERMITIAN:
        raise ValueError("thermodynamic observables are defined for the hermitian regimes")
    return p.regime


def series_cutoff(gamma: float, omega_max: Optional[int] = None) -> int:
    """Largest |w| kept in imaginary-eta Fourier sums; the tail is below e^-28."""
    if omega_max is not None:
        return int(omega_max)
    return int(math.ceil(TAIL_EXPONENT / gamma))


def _omegas(gamma: float, omega_max: Optional[int] = None) -> np.ndarray:
    W = series_cutoff(gamma, omega_max)
    return np.arange(-W, W + 1)


# ---------------------------------------------------------------------------
# kernels


def kernel_a(n: int, x, p: ModelParams):
    """a_n(x) for the regime of ``p``."""
    x = np.asarray(x, dtype=float)
    if _regime(p) is Regime.REAL_ETA:
        den = np.cosh(np.clip(x, -700, 700)) - np.cos(n * p.eta)
        if np.any(np.abs(den) < 1e-14):
            raise PoleError("cosh x = cos(n eta)")
        return np.sin(n * p.eta) / den / (2 * np.pi)
    g = p.gamma
    if math.cosh(n * g) <= 1:
        raise PoleError("cosh(n gamma) must exceed 1")
    return np.sinh(n * g) / (np.cosh(n * g) - np.cos(x)) / (2 * np.pi)


def kernel_a_transform(n: int, omega, p: ModelParams):
    """Fourier transform of a_n."""
    w = np.asarray(omega, dtype=float)
    if _regime(p) is Regime.IMAG_ETA:
        return np.exp(-n * p.gamma * np.abs(w))
    frac = n * p.eta / (2 * np.pi)
    delta = frac - math.floor(frac)
    return _sinh_ratio((1 - 2 * delta) * np.pi, np.pi, w)


def _sinh_ratio(alpha: float, beta: float, w):
    """sinh(alpha w) / sinh(beta w) for beta > 0, stable for large |w|; alpha/beta at w = 0."""
    w = np.abs(np.asarray(w, dtype=float))
    sign = np.sign(alpha) if alpha != 0 else 0.0
    al = abs(alpha)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        big = np.exp(-(beta - al) * w) * (-np.expm1(-2 * al * w)) / (-np.expm1(-2 * beta * w))
    out = np.where(w < 1e-8, al / beta, big)
    return sign * out


def _sech(x):
    x = np.abs(np.asarray(x, dtype=float))
    return 2 * np.exp(-x) / (1 + np.exp(-2 * x))


def rho_tilde_ground(omega, p: ModelParams):
    """cos(2 b w) / (2 cosh(eta w)), or the same with a, gamma in the gapped regime."""
    w = np.asarray(omega, dtype=float)
    if _regime(p) is Regime.REAL_ETA:
        return np.cos(2 * p.b * w) * _sech(p.eta * w) / 2
    return np.cos(2 * p.a * w) * _sech(p.gamma * w) / 2


# ---------------------------------------------------------------------------
# densities


def rho_ground(u, p: ModelParams, omega_max: Optional[int] = None):
    """Ground-state density of Bethe roots."""
    u = np.asarray(u, dtype=float)
    if _regime(p) is Regime.REAL_ETA:
        eta, b = p.eta, p.b
        if not 0 < eta < np.pi:
            raise ValueError("real eta must lie in (0, pi)")
        c = np.pi / (2 * eta)
        return (_sech(c * (u + 2 * b)) + _sech(c * (u - 2 * b))) / (8 * eta)
    w = np.arange(1, series_cutoff(p.gamma, omega_max) + 1)
    coeff = rho_tilde_ground(w, p)
    series = np.cos(np.multiply.outer(u, w)) @ coeff
    return (rho_tilde_ground(0.0, p) + 2 * series) / (2 * np.pi)


@dataclass(frozen=True)
class DensityProfile:
    grid: np.ndarray
    rho: np.ndarray
    rho_hole: np.ndarray
    regime: Regime
    delta_rho: Optional[np.ndarray] = None


def default_u_range(p: ModelParams) -> tuple:
    """Window holding the root density down to ~e^-28 (real eta) or one period."""
    if _regime(p) is Regime.REAL_ETA:
        half = 2 * abs(p.b) + 2 * p.eta * TAIL_EXPONENT / np.pi
        return (-half, half)
    return (-np.pi, np.pi)


def density_profile(p: ModelParams, n_points: int = 401, u_range=None) -> DensityProfile:
    lo, hi = u_range or default_u_range(p)
    grid = np.linspace(lo, hi, n_points)
    rho = rho_ground(grid, p)
    return DensityProfile(grid, rho, np.zeros_like(rho), p.regime)


def density_normalization(p: ModelParams) -> float:
    """Integral of the ground-state density over the real line or one period."""
    if _regime(p) is Regime.REAL_ETA:
        val, _ = _quad_line(lambda x: rho_ground(x, p), default_u_range(p),
                            centers=(-2 * p.b, 2 * p.b))
        return val
    val, _ = integrate.quad(lambda x: rho_ground(x, p), -np.pi, np.pi,
                            epsabs=1e-14, epsrel=QUAD_RTOL, limit=400)
    return val


def _quad_line(f, window, centers=()):
    """Integral of f over the real line, splitting at ``centers`` and adding the tails."""
    lo, hi = window
    cuts = sorted({lo, hi, *[c for c in centers if lo < c < hi]})
    total, err = 0.0, 0.0
    for x0, x1 in zip(cuts[:-1], cuts[1:]):
        v, e = integrate.quad(f, x0, x1, epsabs=1e-15, epsrel=QUAD_RTOL, limit=400)
        total += v
        err += e
    for x0, x1 in ((-np.inf, lo), (hi, np.inf)):
        v, e = integrate.quad(f, x0, x1, epsabs=1e-15, epsrel=QUAD_RTOL, limit=200)
        total += v
        err += e
    return total, err


def solve_density_equation(p: ModelParams, n_points: int = 801, half_width: Optional[float] = None):
    """Discretise the linear integral equation for the ground-state density and solve it.

    Real eta: trapezoid rule on [-L, L]; imaginary eta: the periodic
    trapezoid rule on (-pi, pi]. Returns ``(grid, rho)``.
    """
    drive, K, grid, weights = _density_system(p, n_points, half_width)
    A = np.eye(grid.size) + K * weights[None, :]
    return grid, np.linalg.solve(A, drive)


def _density_system(p: ModelParams, n_points: int, half_width: Optional[float]):
    if _regime(p) is Regime.REAL_ETA:
        L = half_width if half_width is not None else default_u_range(p)[1]
        grid = np.linspace(-L, L, n_points)
        h = grid[1] - grid[0]
        weights = np.full(n_points, h)
        weights[[0, -1]] = h / 2
        shift = 2 * p.b
    else:
        grid = -np.pi + 2 * np.pi * (np.arange(n_points) + 1) / n_points
        weights = np.full(n_points, 2 * np.pi / n_points)
        shift = 2 * p.a
    drive = 0.5 * (kernel_a(1, grid + shift, p) + kernel_a(1, grid - shift, p))
    K = kernel_a(2, grid[:, None] - grid[None, :], p)
    return drive, K, grid, weights


def density_equation_residual(p: ModelParams, n_points: int = 801,
                              half_width: Optional[float] = None) -> float:
    """Max defect of the closed-form density plugged into the discretised equation."""
    drive, K, grid, weights = _density_system(p, n_points, half_width)
    rho = rho_ground(grid, p)
    return float(np.abs(rho + (K * weights[None, :]) @ rho - drive).max())


# ---------------------------------------------------------------------------
# energy density


def _energy_constant_per_site(p: ModelParams) -> float:
    if _regime(p) is Regime.REAL_ETA:
        eta, b = p.eta, p.b
        return math.cos(eta) * (math.cosh(2 * b) ** 2 - math.cos(2 * eta)) / (2 * math.sin(eta) ** 2)
    g, a = p.gamma, p.a
    return math.cosh(g) * (math.cosh(2 * g) - math.cos(2 * a) ** 2) / (2 * math.sinh(g) ** 2)


def ground_energy_density(p: ModelParams, omega_max: Optional[int] = None) -> float:
    """Ground-state energy per site in the thermodynamic limit."""
    const = _energy_constant_per_site(p)
    if _regime(p) is Regime.REAL_ETA:
        eta, b = p.eta, p.b

        def integrand(w):
            return _sinh_ratio(np.pi - eta, np.pi, w) * np.cos(2 * b * w) ** 2 * _sech(eta * w)

        # integrand decays like e^{-2 eta w}
        cutoff = (TAIL_EXPONENT + 10) / eta
        val, err = integrate.quad(integrand, 0.0, cutoff, epsabs=1e-14, epsrel=QUAD_RTOL,
                                  limit=2000)
        if not np.isfinite(val) or err > 1e-8 * max(1.0, abs(val)):
            raise ConvergenceError(f"energy quadrature error estimate {err:.2e}")
        total = 2 * float(val)
        return const - (math.cosh(4 * p.b) - math.cos(2 * eta)) / math.sin(eta) * total
    g, a = p.gamma, p.a
    w = _omegas(g, omega_max)
    s = np.sum(np.cos(2 * a * w) ** 2 * np.exp(-g * np.abs(w)) * _sech(g * w))
    return const + (math.cos(4 * a) - math.cosh(2 * g)) / math.sinh(g) * float(s)


def ground_energy_density_direct(p: ModelParams) -> float:
    """Same quantity by integrating the bare energy kernel against the density in u-space."""
    const = _energy_constant_per_site(p)
    if _regime(p) is Regime.REAL_ETA:
        eta, b = p.eta, p.b
        f = lambda x: (kernel_a(1, x + 2 * b, p) + kernel_a(1, x - 2 * b, p)) * rho_ground(x, p)  # noqa: E731
        val, _ = _quad_line(f, default_u_range(p), centers=(-2 * b, 0.0, 2 * b))
        return const - (math.cosh(4 * b) - math.cos(2 * eta)) / math.sin(eta) * 2 * np.pi * val
    g, a = p.gamma, p.a
    f = lambda x: (kernel_a(1, x + 2 * a, p) + kernel_a(1, x - 2 * a, p)) * rho_ground(x, p)  # noqa: E731
    val, _ = integrate.quad(f, -np.pi, np.pi, epsabs=1e-14, epsrel=QUAD_RTOL, limit=400)
    return const + (math.cos(4 * a) - math.cosh(2 * g)) / math.sinh(g) * 2 * np.pi * val


# ---------------------------------------------------------------------------
# spinons


@dataclass(frozen=True)
class HoleExcitation:
    u_r: float
    u_s: float
    K: float
    delta_E: float
    eps_r: float
    eps_s: float


def reduce_momentum(K):
    """Map momenta to (-pi, pi]."""
    K = np.asarray(K, dtype=float)
    r = np.mod(K + np.pi, 2 * np.pi) - np.pi
    return np.where(r <= -np.pi + 1e-15, np.pi, r)


def one_hole_momentum(u, p: ModelParams, omega_max: Optional[int] = None):
    """2 pi times the density integrated from the hole to the upper edge."""
    u = np.asarray(u, dtype=float)
    if _regime(p) is Regime.REAL_ETA:
        c = np.pi / (2 * p.eta)
        return (np.arctan(np.exp(-np.clip(c * (u - 2 * p.b), -700, 700)))
                + np.arctan(np.exp(-np.clip(c * (u + 2 * p.b), -700, 700))))
    w = np.arange(1, series_cutoff(p.gamma, omega_max) + 1)
    coeff = rho_tilde_ground(w, p) / w
    # the (-1)^w parts cancel between +w and -w
    return (np.pi - u) / 2 - 2 * (np.sin(np.multiply.outer(u, w)) @ coeff)


def spinon_momentum(u_r: float, u_s: float, p: ModelParams, omega_max: Optional[int] = None) -> float:
    """Total momentum of a two-hole excitation.

    Real eta keeps the natural range (0, 2 pi); imaginary eta is reduced to (-pi, pi].
    """
    K = float(one_hole_momentum(u_r, p, omega_max) + one_hole_momentum(u_s, p, omega_max))
    if p.regime is Regime.IMAG_ETA:
        K = float(reduce_momentum(K))
    return K


def spinon_momentum_series(u_r: float, u_s: float, p: ModelParams,
                           omega_max: Optional[int] = None) -> float:
    """Imaginary-eta momentum evaluated term by term as a complex sum over w != 0."""
    if _regime(p) is not Regime.IMAG_ETA:
        raise ValueError("series form applies to imaginary eta")
    w = _omegas(p.gamma, omega_max)
    w = w[w != 0]
    terms = (np.cos(2 * p.a * w) / (2j * w * np.cosh(p.gamma * w))
             * (2 * (-1.0) ** w - np.exp(1j * w * u_r) - np.exp(1j * w * u_s)))
    return float(np.real(terms.sum()) + np.pi - (u_r + u_s) / 2)


def energy_scale(p: ModelParams) -> float:
    """Prefactor turning the ground-state density into the single-hole energy."""
    if _regime(p) is Regime.REAL_ETA:
        return 4 * np.pi * (math.cosh(4 * p.b) - math.cos(2 * p.eta)) / math.sin(p.eta)
    return 4 * np.pi * (math.cosh(2 * p.gamma) - math.cos(4 * p.a)) / math.sinh(p.gamma)


def single_hole_energy(u, p: ModelParams, omega_max: Optional[int] = None):
    return energy_scale(p) * rho_ground(u, p, omega_max)


def spinon_energy(u_r: float, u_s: float, p: ModelParams,
                  omega_max: Optional[int] = None) -> HoleExcitation:
    er = float(single_hole_energy(u_r, p, omega_max))
    es = float(single_hole_energy(u_s, p, omega_max))
    K = spinon_momentum(u_r, u_s, p, omega_max)
    return HoleExcitation(float(u_r), float(u_s), K, er + es, er, es)


def _hole_response_kernel(x, p: ModelParams):
    """Inverse transform of a2~ / (1 + a2~): the smooth part of the density shift per hole."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if _regime(p) is Regime.REAL_ETA:
        # smooth, exponentially decaying integrand: composite Gauss-Legendre
        cutoff = (TAIL_EXPONENT + 10) / (2 * min(p.eta, np.pi - p.eta))
        nodes, weights = np.polynomial.legendre.leggauss(20)
        edges = np.arange(0.0, cutoff + 0.25, 0.25)
        mid, half = (edges[1:] + edges[:-1]) / 2, (edges[1:] - edges[:-1]) / 2
        w = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        wt = (half[:, None] * weights[None, :]).ravel()
        a2 = kernel_a_transform(2, w, p)
        return np.cos(np.multiply.outer(x, w)) @ (wt * a2 / (1 + a2)) / np.pi
    w = _omegas(p.gamma)
    tr = np.exp(-2 * p.gamma * np.abs(w))
    tr = tr / (1 + tr)
    return (np.cos(np.multiply.outer(x, w)) @ tr) / (2 * np.pi)


def spinon_energy_from_backtransform(u_r: float, u_s: float, p: ModelParams,
                                     n_points: int = 2001) -> float:
    """Two-hole energy from the density shift rather than from the closed form.

    The shift is -(1/2N) sum_h [delta(u - u_h) - R(u - u_h)] with R the
    inverse transform of a2~/(1 + a2~); the energy functional is integrated
    on a grid.
    """
    if _regime(p) is Regime.REAL_ETA:
        shift = 2 * p.b
        lo, hi = default_u_range(p)
        lo, hi = min(lo, u_r, u_s) - 10, max(hi, u_r, u_s) + 10
        grid = np.linspace(lo, hi, n_points)
        wts = np.full(n_points, grid[1] - grid[0])
        wts[[0, -1]] /= 2
        pref = energy_scale(p) / 2  # 4 pi N [..] / sin(eta) times 1/(2N)
    else:
        shift = 2 * p.a
        grid = -np.pi + 2 * np.pi * (np.arange(n_points) + 1) / n_points
        wts = np.full(n_points, 2 * np.pi / n_points)
        pref = energy_scale(p) / 2
    g = lambda x: kernel_a(1, x + shift, p) + kernel_a(1, x - shift, p)  # noqa: E731
    gv = g(grid)
    total = 0.0
    for uh in (u_r, u_s):
        smooth = np.sum(wts * gv * _hole_response_kernel(grid - uh, p))
        # integral of g * delta_rho for this hole, times -2N
        total += float(g(np.array([uh]))[0]) - smooth
    return pref * total


# ---------------------------------------------------------------------------
# dispersion


@dataclass(frozen=True)
class DispersionCurve:
    u_r: np.ndarray
    u_s: np.ndarray
    K: np.ndarray
    delta_E: np.ndarray
    cut: str


def dispersion_curve(p: ModelParams, n_samples: int, cut: str = "diagonal",
                     u_range=None) -> DispersionCurve:
    """Two-hole excitations sampled over hole positions.

    ``cut="diagonal"`` places both holes at the same rapidity (n_samples
    points); ``cut="full"`` takes all pairs u_r <= u_s from an n_samples axis.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    lo, hi = u_range or default_u_range(p)
    if p.regime is Regime.IMAG_ETA and u_range is None:
        axis = -np.pi + 2 * np.pi * (np.arange(n_samples) + 1) / n_samples
    else:
        axis = np.linspace(lo, hi, n_samples)
    if cut == "diagonal":
        ur, us = axis, axis.copy()
    elif cut == "full":
        i, j = np.triu_indices(n_samples)
        ur, us = axis[i], axis[j]
    else:
        raise ValueError(f"unknown cut {cut!r}")
    k1 = one_hole_momentum(ur, p) + one_hole_momentum(us, p)
    K = reduce_momentum(k1) if p.regime is Regime.IMAG_ETA else k1
    dE = single_hole_energy(ur, p) + single_hole_energy(us, p)
    return DispersionCurve(ur, us, np.asarray(K), np.asarray(dE), cut)


def count_local_maxima(values, rel_tol: float = 1e-9) -> int:
    """Number of strict interior local maxima, treating flat plateaus as one point."""
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        return 0
    scale = max(np.abs(v).max(), 1e-300)
    keep = np.concatenate([[True], np.abs(np.diff(v)) > rel_tol * scale])
    v = v[keep]
    d = np.sign(np.diff(v))
    return int(np.sum((d[:-1] > 0) & (d[1:] < 0)))


def diagonal_arch_count(p: ModelParams, n_samples: int = 4001) -> int:
    """Local maxima of dE along the u_r = u_s cut, ordered by rapidity."""
    curve = dispersion_curve(p, n_samples, cut="diagonal")
    return count_local_maxima(curve.delta_E)


def _hole_rapidity(k: float, p: ModelParams) -> float:
    """Invert the one-hole momentum, which decreases strictly with the rapidity."""
    lo, hi = default_u_range(p)
    if p.regime is Regime.REAL_ETA:
        lo, hi = lo - 60 * p.eta, hi + 60 * p.eta
    f = lambda u: float(one_hole_momentum(u, p)) - k  # noqa: E731
    return optimize.brentq(f, lo, hi, xtol=1e-14, rtol=1e-14)


def upper_envelope(p: ModelParams, n_axis: int = 801):
    """Maximum dE at fixed total momentum over the whole two-hole continuum.

    Hole momenta are sampled uniformly on the open interval (0, pi), so pair
    momenta fall on a uniform grid in (0, 2 pi) without binning.
    Returns ``(K, envelope)``.
    """
    k = np.pi * (np.arange(n_axis) + 0.5) / n_axis
    u = np.array([_hole_rapidity(kk, p) for kk in k])
    e = single_hole_energy(u, p)
    E = np.add.outer(e, e)
    flipped = E[:, ::-1]
    env = np.array([np.diagonal(flipped, off).max() for off in range(n_axis - 1, -n_axis, -1)])
    K = 2 * k[0] + np.pi * np.arange(2 * n_axis - 1) / n_axis
    return K, env


def envelope_arch_count(p: ModelParams, n_axis: int = 801, rel_prominence: float = 1e-3) -> int:
    """Arches of the upper edge of the continuum, ignoring ripples below ``rel_prominence``."""
    env = upper_envelope(p, n_axis)[1]
    peaks, _ = signal.find_peaks(env, prominence=rel_prominence * np.ptp(env))
    return int(peaks.size)


# ---------------------------------------------------------------------------
# gap


@dataclass(frozen=True)
class GapResult:
    a: float
    gamma: float
    gap: float
    branch: str


def gap_branch(a: float) -> str:
    a = float(a)
    if np.pi / 4 < a < 3 * np.pi / 4:
        return "inner"
    return "outer"


def gap_series(a: float, gamma: float, branch: str, omega_max: Optional[int] = None) -> float:
    """Gap from the alternating (holes at pi) or plain (holes at 0) series."""
    w = _omegas(gamma, omega_max)
    sign = (-1.0) ** np.abs(w) if branch == "outer" else np.ones(w.size)
    s = np.sum(sign * np.cos(2 * a * w) * _sech(gamma * w) / 2)
    return float(4 * (math.cosh(2 * gamma) - math.cos(4 * a)) / math.sinh(gamma) * s)


def gap(a: float, gamma: float, omega_max: Optional[int] = None) -> GapResult:
    """Spinon gap for imaginary anisotropy i gamma and inhomogeneity a in [0, pi]."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if not 0 <= a <= np.pi:
        raise ValueError("a must lie in [0, pi]")
    branch = gap_branch(a)
    return GapResult(float(a), float(gamma), gap_series(a, gamma, branch, omega_max), branch)


def gap_by_minimisation(a: float, gamma: float, n_grid: int = 4001) -> float:
    """Twice the minimum single-hole energy over a dense rapidity grid."""
    p = ModelParams.imag_eta(4, gamma, a)
    u = np.linspace(-np.pi, np.pi, n_grid)
    return float(2 * single_hole_energy(u, p).min())
