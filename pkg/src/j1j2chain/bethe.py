"""Bethe ansatz equations: residuals, solvers, energies and completeness checks.

Roots are stored in one of four parametrizations:

``rational-lambda``  the trigonometric roots lambda_j of the algebraic Bethe ansatz;
``real-eta-u``       lambda = i u / 2 - eta / 2 with a = i b (real eta);
``imag-eta-u``       lambda = u / 2 - eta / 2 with eta = i gamma;
``nonhermitian-u``   lambda = i u / 2 - eta / 2 with real a and eta.

All solving happens in the rational form, which is valid for complex ``a``
and ``eta`` alike; results are converted back and re-checked in the
parametrization native to the regime.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConvergenceError, PoleError, RootCollisionError
from .params import ModelParams, Regime, check_sin_eta

log = logging.getLogger(__name__)

RATIONAL = "rational-lambda"
REAL_U = "real-eta-u"
IMAG_U = "imag-eta-u"
NONHERM_U = "nonhermitian-u"
PARAMETRIZATIONS = (RATIONAL, REAL_U, IMAG_U, NONHERM_U)

NATIVE = {Regime.REAL_ETA: REAL_U, Regime.IMAG_ETA: IMAG_U, Regime.NONHERMITIAN: NONHERM_U}

CONVERGENCE_TOL = 1e-12
ACCEPT_TOL = 1e-10
DEDUP_TOL = 1e-8
COLLISION_TOL = 1e-9


@dataclass(frozen=True)
class BetheRoots:
    roots: np.ndarray
    parametrization: str
    quantum_numbers: Optional[tuple] = None
    residual: float = float("nan")

    def __post_init__(self):
        if self.parametrization not in PARAMETRIZATIONS:
            raise ValueError(f"unknown parametrization {self.parametrization!r}")
        object.__setattr__(self, "roots", np.atleast_1d(np.asarray(self.roots, dtype=complex)))

    @property
    def M(self) -> int:
        return int(self.roots.size)

    def to_lambda(self, p: ModelParams) -> np.ndarray:
        return to_lambda(self.roots, self.parametrization, p)

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "parametrization": self.parametrization,
            "roots_re": self.roots.real.tolist(),
            "roots_im": self.roots.imag.tolist(),
            "quantum_numbers": None if self.quantum_numbers is None
            else [float(q) for q in self.quantum_numbers],
            "residual": self.residual,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BetheRoots":
        roots = np.asarray(d["roots_re"]) + 1j * np.asarray(d["roots_im"])
        qn = d.get("quantum_numbers")
        return cls(roots, d["parametrization"], None if qn is None else tuple(qn), d["residual"])


def to_lambda(u, parametrization: str, p: ModelParams) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    eta = p.eta_c
    if parametrization == RATIONAL:
        return u.copy()
    if parametrization in (REAL_U, NONHERM_U):
        return 0.5j * u - eta / 2
    if parametrization == IMAG_U:
        return u / 2 - eta / 2
    raise ValueError(f"unknown parametrization {parametrization!r}")


def from_lambda(lam, parametrization: str, p: ModelParams) -> np.ndarray:
    lam = np.asarray(lam, dtype=complex)
    eta = p.eta_c
    if parametrization == RATIONAL:
        return lam.copy()
    if parametrization in (REAL_U, NONHERM_U):
        return -2j * (lam + eta / 2)
    if parametrization == IMAG_U:
        return 2 * lam + eta
    raise ValueError(f"unknown parametrization {parametrization!r}")


def _check_parametrization(parametrization: str, p: ModelParams):
    if parametrization != RATIONAL and parametrization != NATIVE[p.regime]:
        raise ValueError(
            f"parametrization {parametrization} does not belong to regime {p.regime.value}"
        )


def _wrap(x: float, period: float) -> float:
    r = (x + period / 2) % period - period / 2
    # keep the boundary value on the lower edge of the strip [-P/2, P/2)
    if r > period / 2 - 1e-9:
        r -= period
    return r


def reduce_roots(u, parametrization: str) -> np.ndarray:
    """Map roots to the fundamental strip of their parametrization."""
    u = np.asarray(u, dtype=complex)
    out = u.copy()
    for k, z in enumerate(u):
        if parametrization in (REAL_U, NONHERM_U):
            out[k] = complex(z.real, _wrap(z.imag, 2 * np.pi))
        elif parametrization == IMAG_U:
            out[k] = complex(_wrap(z.real, 2 * np.pi), z.imag)
        else:
            out[k] = complex(_wrap(z.real, np.pi), z.imag)
    return out


def canonical(u, parametrization: str) -> np.ndarray:
    r = reduce_roots(u, parametrization)
    r = np.where(np.abs(r.real) < 1e-13, 1j * r.imag, r)
    r = np.where(np.abs(r.imag) < 1e-13, r.real + 0j, r)
    return r[np.lexsort((np.round(r.imag, 8), np.round(r.real, 8)))]


def root_set_distance(u1, u2, parametrization: str) -> float:
    """Max root distance between two root sets, modulo the period and permutations."""
    u1 = np.atleast_1d(np.asarray(u1, dtype=complex))
    u2 = np.atleast_1d(np.asarray(u2, dtype=complex))
    if u1.size != u2.size:
        return float("inf")
    if u1.size == 0:
        return 0.0

    def dist(z, w):
        d = complex(reduce_roots([z - w], parametrization)[0])
        return abs(d)

    return min(max(dist(z, w) for z, w in zip(u1, perm))
               for perm in itertools.permutations(u2))


# ---------------------------------------------------------------------------
# residuals


def _family_terms(u: np.ndarray, parametrization: str, p: ModelParams):
    """Per-root (LHS, RHS) of the Bethe equations in the requested form."""
    M = u.size
    N = p.N
    if parametrization == RATIONAL:
        a, eta = p.a_c, p.eta_c
        f = np.sin
        num = [a + eta, -a + eta]
        den = [a, -a]
        s_num, s_den = eta, -eta
    elif parametrization == REAL_U:
        b, eta = p.b, p.eta
        f = lambda x: np.sinh(x / 2)  # noqa: E731
        num = [-2 * b - 1j * eta, 2 * b - 1j * eta]
        den = [-2 * b + 1j * eta, 2 * b + 1j * eta]
        s_num, s_den = -2j * eta, 2j * eta
    elif parametrization == IMAG_U:
        a, g = p.a, p.gamma
        f = lambda x: np.sin(x / 2)  # noqa: E731
        num = [-2 * a - 1j * g, 2 * a - 1j * g]
        den = [-2 * a + 1j * g, 2 * a + 1j * g]
        s_num, s_den = -2j * g, 2j * g
    else:
        a, eta = p.a, p.eta
        f = lambda x: np.sinh(x / 2)  # noqa: E731
        num = [-1j * (2 * a + eta), 1j * (2 * a - eta)]
        den = [1j * (2 * a + eta), -1j * (2 * a - eta)]
        s_num, s_den = -2j * eta, 2j * eta
    lhs = np.ones(M, dtype=complex)
    rhs = np.ones(M, dtype=complex)
    for j in range(M):
        lhs[j] = (np.prod([f(u[j] + c) for c in num]) / np.prod([f(u[j] + c) for c in den])) ** N
        for l in range(M):
            if l == j:
                continue
            x = u[j] - u[l]
            d = f(x + s_den)
            if abs(d) < COLLISION_TOL:
                raise RootCollisionError(f"roots {j} and {l} make the scattering factor singular")
            rhs[j] *= f(x + s_num) / d
    return lhs, rhs


def _check_collisions(lam: np.ndarray):
    for j, l in itertools.combinations(range(lam.size), 2):
        if abs(np.sin(lam[j] - lam[l])) < COLLISION_TOL:
            raise RootCollisionError(f"roots {j} and {l} coincide modulo the period")


def bae_residual(roots: BetheRoots, p: ModelParams) -> np.ndarray:
    """LHS - RHS of each Bethe equation in the parametrization of ``roots``."""
    _check_parametrization(roots.parametrization, p)
    check_sin_eta(p.eta_c)
    _check_collisions(roots.to_lambda(p))
    lhs, rhs = _family_terms(roots.roots, roots.parametrization, p)
    return lhs - rhs


def max_residual(roots: BetheRoots, p: ModelParams) -> float:
    if roots.M == 0:
        return 0.0
    r = bae_residual(roots, p)
    return float(np.abs(r).max()) if np.all(np.isfinite(r)) else float("inf")


# ---------------------------------------------------------------------------
# logarithmic form, real eta


def theta(n: int, x, eta: float):
    """Phase function 2 arctan(tanh(x/2) / tan(n eta / 2))."""
    t = np.tan(n * eta / 2)
    if abs(t) < 1e-12:
        raise PoleError(f"tan({n} eta / 2) vanishes")
    return 2 * np.arctan(np.tanh(np.asarray(x) / 2) / t)


def theta_prime(n: int, x, eta: float):
    x = np.clip(np.asarray(x, dtype=float), -700, 700)
    return np.sin(n * eta) / (np.cosh(x) - np.cos(n * eta))


def _require_log_form(p: ModelParams):
    if p.regime is not Regime.REAL_ETA:
        raise ValueError("the logarithmic Bethe equations are defined for the real-eta regime")


def bae_log_residual(u: Sequence[float], I: Sequence[float], p: ModelParams) -> np.ndarray:
    """N[theta_1(u_j+2b) + theta_1(u_j-2b)] - 2 pi I_j - sum_k theta_2(u_j - u_k)."""
    _require_log_form(p)
    u = np.asarray(u, dtype=float)
    I = np.asarray(I, dtype=float)
    b, eta = p.b, p.eta
    D = u[:, None] - u[None, :]
    return (p.N * (theta(1, u + 2 * b, eta) + theta(1, u - 2 * b, eta))
            - 2 * np.pi * I - theta(2, D, eta).sum(axis=1))


def _log_jacobian(u: np.ndarray, p: ModelParams) -> np.ndarray:
    b, eta = p.b, p.eta
    K = theta_prime(2, u[:, None] - u[None, :], eta)
    np.fill_diagonal(K, 0.0)
    diag = p.N * (theta_prime(1, u + 2 * b, eta) + theta_prime(1, u - 2 * b, eta)) - K.sum(axis=1)
    return np.diag(diag) + K


def counting_function(x, u: Sequence[float], p: ModelParams):
    """Z(x); equals I_j / 2N at every root of the logarithmic equations."""
    _require_log_form(p)
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    b, eta = p.b, p.eta
    scatter = theta(2, x[..., None] - u, eta).sum(axis=-1)
    return (theta(1, x + 2 * b, eta) + theta(1, x - 2 * b, eta) - scatter / p.N) / (4 * np.pi)


def ground_state_quantum_numbers(N: int) -> tuple:
    """-(N-1)/2, ..., (N-1)/2."""
    return tuple(Fraction(2 * k - (N - 1), 2) for k in range(N))


def _initial_log_guess(I: np.ndarray, p: ModelParams) -> np.ndarray:
    from scipy.optimize import brentq

    b, eta = p.b, p.eta
    drive = lambda x, target: p.N * (theta(1, x + 2 * b, eta) + theta(1, x - 2 * b, eta)) - target  # noqa: E731
    out = np.zeros(I.size)
    for k, q in enumerate(I):
        target = 2 * np.pi * q
        lo, hi = -60.0, 60.0
        if drive(lo, target) < 0 < drive(hi, target):
            out[k] = brentq(drive, lo, hi, args=(target,), xtol=1e-12)
        else:
            out[k] = np.sign(q) * 10.0
    return out


def damped_newton(F, J, x0, tol: float = CONVERGENCE_TOL, max_iter: int = 200,
                  max_halvings: int = 30):
    """Newton iteration with backtracking on the residual 2-norm.

    ``F`` and ``J`` may be real or complex (holomorphic) maps. Returns the
    final point and residual max-norm; raises ``ConvergenceError`` when the
    iteration stalls or the Jacobian is singular.
    """
    x = np.array(x0)
    fx = F(x)
    for _ in range(max_iter):
        if not np.all(np.isfinite(fx)):
            raise ConvergenceError("residual is not finite")
        if np.abs(fx).max() < tol:
            return x, float(np.abs(fx).max())
        try:
            step = np.linalg.solve(J(x), -fx)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError("singular Jacobian") from exc
        norm = np.linalg.norm(fx)
        lam = 1.0
        for _ in range(max_halvings):
            trial = x + lam * step
            ft = F(trial)
            if np.all(np.isfinite(ft)) and np.linalg.norm(ft) < norm:
                break
            lam /= 2
        else:
            # no descent: accept only if already at round-off level
            if np.abs(fx).max() < 1e2 * tol:
                return x, float(np.abs(fx).max())
            raise ConvergenceError("line search failed")
        x, fx = trial, ft
    if np.abs(fx).max() < tol:
        return x, float(np.abs(fx).max())
    raise ConvergenceError(f"no convergence after {max_iter} iterations")


def solve_log_bae(p: ModelParams, I: Sequence[float], u0=None) -> BetheRoots:
    """Real roots of the logarithmic equations for quantum numbers ``I``."""
    _require_log_form(p)
    I = np.asarray([float(q) for q in I])
    x0 = _initial_log_guess(I, p) if u0 is None else np.asarray(u0, dtype=float)
    u, _ = damped_newton(lambda x: bae_log_residual(x, I, p), lambda x: _log_jacobian(x, p), x0)
    roots = BetheRoots(u.astype(complex), REAL_U, tuple(I))
    return replace(roots, residual=max_residual(roots, p))


def quantum_number_tuples(N: int, M: int) -> Iterable[tuple]:
    """Strictly increasing tuples with |I_j| <= N/2; integers for odd M, half-odd for even M."""
    if M == 0:
        yield ()
        return
    shift = Fraction(0) if M % 2 else Fraction(1, 2)
    values = [q for q in (Fraction(k) + shift for k in range(-N, N + 1)) if abs(q) <= Fraction(N, 2)]
    yield from itertools.combinations(values, M)


# ---------------------------------------------------------------------------
# rational-form Newton with continuation in the inhomogeneity


def _rational_G(lam: np.ndarray, a: complex, eta: complex, N: int) -> np.ndarray:
    M = lam.size
    g = N * (np.log(np.sin(lam + a + eta)) + np.log(np.sin(lam - a + eta))
             - np.log(np.sin(lam + a)) - np.log(np.sin(lam - a)))
    for j in range(M):
        for l in range(M):
            if l != j:
                x = lam[j] - lam[l]
                g[j] -= np.log(np.sin(x + eta)) - np.log(np.sin(x - eta))
    # equations hold modulo 2 pi i
    return g.real + 1j * ((g.imag + np.pi) % (2 * np.pi) - np.pi)


def _rational_J(lam: np.ndarray, a: complex, eta: complex, N: int) -> np.ndarray:
    cot = lambda z: np.cos(z) / np.sin(z)  # noqa: E731
    M = lam.size
    J = np.zeros((M, M), dtype=complex)
    drive = N * (cot(lam + a + eta) + cot(lam - a + eta) - cot(lam + a) - cot(lam - a))
    for j in range(M):
        J[j, j] = drive[j]
        for l in range(M):
            if l != j:
                x = lam[j] - lam[l]
                s = cot(x + eta) - cot(x - eta)
                J[j, j] -= s
                J[j, l] += s
    return J


def newton_rational(lam0, a: complex, eta: complex, N: int, tol: float = CONVERGENCE_TOL,
                    max_iter: int = 100) -> np.ndarray:
    lam, _ = damped_newton(lambda x: _rational_G(x, a, eta, N),
                           lambda x: _rational_J(x, a, eta, N),
                           np.asarray(lam0, dtype=complex), tol=tol, max_iter=max_iter)
    return lam


def continue_in_a(lam0, a_target: complex, eta: complex, N: int, min_step: float = 1e-3) -> np.ndarray:
    """Track a solution at a = 0 to a = a_target along a(s) = s a_target."""
    lam = newton_rational(lam0, 0.0, eta, N)
    s, ds = 0.0, 0.25
    while s < 1.0:
        step = min(ds, 1.0 - s)
        try:
            lam_new = newton_rational(lam, (s + step) * a_target, eta, N, max_iter=30)
        except ConvergenceError:
            ds = step / 2
            if ds < min_step:
                raise
            continue
        if np.abs(lam_new - lam).max() > 0.5:
            # jumped to another branch
            ds = step / 2
            if ds < min_step:
                raise ConvergenceError("continuation step underflow")
            continue
        lam, s = lam_new, s + step
        ds = min(2 * step, 0.25)
    return lam


def _is_admissible(lam: np.ndarray, p: ModelParams, im_bound: float = 25.0) -> bool:
    if not np.all(np.isfinite(lam)) or np.any(np.abs(lam.imag) > im_bound):
        return False
    a, eta = p.a_c, p.eta_c
    for z in (lam + a, lam - a, lam + a + eta, lam - a + eta):
        if np.any(np.abs(np.sin(z)) < 1e-8):
            return False
    for j, l in itertools.combinations(range(lam.size), 2):
        x = lam[j] - lam[l]
        if abs(np.sin(x)) < 1e-6 or abs(np.sin(x + eta)) < 1e-8 or abs(np.sin(x - eta)) < 1e-8:
            return False
    return True


def transfer_consistent(lam: np.ndarray, p: ModelParams, rng: np.random.Generator,
                        n_points: int = 3, tol: float = 1e-6) -> bool:
    """Does Lambda(u) lie in the spectrum of t(u) at random points?"""
    from .transfer import TransferFamily, transfer_eigenvalue

    fam = TransferFamily(p)
    for _ in range(n_points):
        u = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.3, 0.3))
        ev = np.linalg.eigvals(fam.t(u))
        L = transfer_eigenvalue(u, lam, p)
        scale = max(1.0, float(np.abs(ev).max()))
        if np.abs(ev - L).min() > tol * scale:
            return False
    return True


@dataclass
class SolveDiagnostics:
    seeds_tried: int = 0
    seeds_converged: int = 0
    seeds_rejected: int = 0
    messages: list = field(default_factory=list)


@dataclass(frozen=True)
class SolveStrategy:
    n_seeds: int = 200
    seed: int = 0
    use_log_form: bool = True
    use_continuation: bool = True
    use_direct: bool = True
    validate_transfer: Optional[bool] = None  # default: on for n_sites <= 8


def _seed_lambdas(rng: np.random.Generator, M: int, p: ModelParams) -> np.ndarray:
    native = NATIVE[p.regime]
    if native == IMAG_U:
        u = rng.uniform(-np.pi, np.pi, M) + 1j * rng.normal(0, 1.5, M)
    else:
        u = rng.normal(0, 3, M) + 1j * rng.uniform(-np.pi, np.pi, M)
    return to_lambda(u, native, p)


def _key(u: np.ndarray, parametrization: str) -> tuple:
    c = canonical(u, parametrization)
    return tuple(c)


def _same(u1: np.ndarray, u2: np.ndarray) -> bool:
    return u1.size == u2.size and np.abs(u1 - u2).max(initial=0.0) < DEDUP_TOL


def solve_bae(p: ModelParams, M: int, strategy: SolveStrategy | None = None,
              diagnostics: SolveDiagnostics | None = None) -> list:
    """Deduplicated Bethe solutions with M roots, in the native parametrization."""
    # random seeds routinely probe poles of the equations; those trials are
    # rejected by the filters, so the floating-point warnings carry no signal
    with np.errstate(all="ignore"):
        return _solve_bae(p, M, strategy, diagnostics)


def _solve_bae(p, M, strategy, diagnostics):
    strategy = strategy or SolveStrategy()
    diag = diagnostics if diagnostics is not None else SolveDiagnostics()
    if not 0 <= M <= p.N:
        raise ValueError(f"M must lie in 0..{p.N}, got {M}")
    native = NATIVE[p.regime]
    if M == 0:
        return [BetheRoots(np.zeros(0, dtype=complex), native, (), 0.0)]
    validate = strategy.validate_transfer
    if validate is None:
        validate = p.n_sites <= 8
    rng = np.random.default_rng([strategy.seed, M, p.n_sites])
    check_rng = np.random.default_rng([strategy.seed, 7919, M])
    found: list[BetheRoots] = []

    def accept(lam: np.ndarray, qn=None):
        diag.seeds_converged += 1
        if not _is_admissible(lam, p):
            diag.seeds_rejected += 1
            return
        u = canonical(from_lambda(lam, native, p), native)
        cand = BetheRoots(u, native, qn)
        try:
            res = max_residual(cand, p)
        except RootCollisionError:
            diag.seeds_rejected += 1
            return
        if not res < ACCEPT_TOL:
            diag.seeds_rejected += 1
            return
        if any(_same(u, f.roots) for f in found):
            return
        if validate and not transfer_consistent(cand.to_lambda(p), p, check_rng):
            diag.seeds_rejected += 1
            return
        found.append(replace(cand, residual=res))

    if strategy.use_log_form and p.regime is Regime.REAL_ETA:
        for I in quantum_number_tuples(p.N, M):
            diag.seeds_tried += 1
            try:
                sol = solve_log_bae(p, I)
            except ConvergenceError:
                continue
            accept(sol.to_lambda(p), tuple(I))

    for _ in range(strategy.n_seeds):
        lam0 = _seed_lambdas(rng, M, p)
        if strategy.use_direct:
            diag.seeds_tried += 1
            try:
                accept(newton_rational(lam0, p.a_c, p.eta_c, p.N))
            except (ConvergenceError, FloatingPointError):
                pass
        if strategy.use_continuation:
            diag.seeds_tried += 1
            try:
                accept(continue_in_a(lam0, p.a_c, p.eta_c, p.N))
            except (ConvergenceError, FloatingPointError):
                pass
    if not found:
        diag.messages.append(f"no solution found for M={M} after {diag.seeds_tried} attempts")
        log.warning(diag.messages[-1])
    found.sort(key=lambda r: tuple((z.real, z.imag) for z in r.roots))
    return found


# ---------------------------------------------------------------------------
# energies


def _energy_generic(u: np.ndarray, a: complex, eta: complex, N: int) -> complex:
    """Energy for roots lambda = i u/2 - eta/2 at arbitrary complex a and eta."""
    const = N * np.cos(eta) * (np.cos(2 * a) ** 2 - np.cos(2 * eta)) / np.sin(eta) ** 2
    k1 = np.cosh(u + 2j * a) - np.cos(eta)
    k2 = np.cosh(u - 2j * a) - np.cos(eta)
    if np.any(np.abs(k1) < 1e-14) or np.any(np.abs(k2) < 1e-14):
        raise PoleError("a root sits on a pole of the energy kernel")
    return complex(const - (np.cos(4 * a) - np.cos(2 * eta)) * np.sum(1 / k1 + 1 / k2))


def energy_from_roots(roots: BetheRoots, p: ModelParams) -> complex:
    """Eigenvalue of H on the Bethe state labelled by ``roots``."""
    _check_parametrization(roots.parametrization, p)
    u = roots.roots
    N = p.N
    if roots.parametrization == REAL_U:
        b, eta = p.b, p.eta
        const = N * np.cos(eta) * (np.cosh(2 * b) ** 2 - np.cos(2 * eta)) / np.sin(eta) ** 2
        k1 = np.cosh(u + 2 * b) - np.cos(eta)
        k2 = np.cosh(u - 2 * b) - np.cos(eta)
        pref = np.cosh(4 * b) - np.cos(2 * eta)
    elif roots.parametrization == IMAG_U:
        a, g = p.a, p.gamma
        const = N * np.cosh(g) * (np.cosh(2 * g) - np.cos(2 * a) ** 2) / np.sinh(g) ** 2
        k1 = np.cosh(g) - np.cos(u + 2 * a)
        k2 = np.cosh(g) - np.cos(u - 2 * a)
        pref = np.cosh(2 * g) - np.cos(4 * a)
    elif roots.parametrization == NONHERM_U:
        return _energy_generic(u, p.a, p.eta, N)
    else:
        lam = u
        return _energy_generic(-2j * (lam + p.eta_c / 2), p.a_c, p.eta_c, N)
    if np.any(np.abs(k1) < 1e-14) or np.any(np.abs(k2) < 1e-14):
        raise PoleError("a root sits on a pole of the energy kernel")
    return complex(const - pref * np.sum(1 / k1 + 1 / k2))


# ---------------------------------------------------------------------------
# completeness


@dataclass(frozen=True)
class CompletenessReport:
    matched_levels: list
    unmatched_ed_levels: list
    unmatched_bethe: list
    coverage_fraction: float


def match_spectrum(bethe_energies: Sequence[complex], ed, tol: float = 1e-6) -> CompletenessReport:
    """Greedy nearest matching of Bethe energies to the distinct ED levels.

    ``ed`` is a ``SpectrumResult`` or a plain sequence of level values.
    Each Bethe energy is paired with its closest level; a level counts as
    covered when at least one energy lands within ``tol`` of it.
    """
    levels = [lv[0] for lv in ed.levels] if hasattr(ed, "levels") else list(ed)
    levels = np.asarray(levels, dtype=complex)
    matched, stray = [], []
    covered = np.zeros(levels.size, dtype=bool)
    for e in sorted(bethe_energies, key=lambda z: (z.real, z.imag)):
        if levels.size == 0:
            stray.append(e)
            continue
        k = int(np.argmin(np.abs(levels - e)))
        d = float(abs(levels[k] - e))
        if d < tol:
            matched.append((complex(e), complex(levels[k]), d))
            covered[k] = True
        else:
            stray.append(complex(e))
    unmatched = [complex(v) for v, c in zip(levels, covered) if not c]
    coverage = float(covered.mean()) if levels.size else 0.0
    return CompletenessReport(matched, unmatched, stray, coverage)


def solve_all_sectors(p: ModelParams, strategy: SolveStrategy | None = None) -> dict:
    """Solutions for M = 0..N keyed by M."""
    return {M: solve_bae(p, M, strategy) for M in range(p.N + 1)}
