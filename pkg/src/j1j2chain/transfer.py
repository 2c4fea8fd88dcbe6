"""Inhomogeneous monodromy and transfer matrices.

The auxiliary space is the first (slowest) tensor factor, so the monodromy
on ``aux (x) quantum`` splits into quantum-space blocks as
``[[A, B], [C, D]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import PoleError, ResonantInhomogeneityError
from .params import ModelParams, check_sin_eta
from .spin_algebra import embed, phi, r_matrix, r_matrix_derivative

MAX_TRANSFER_SITES = 10


@dataclass(frozen=True)
class Monodromy:
    matrix: np.ndarray

    @property
    def _d(self) -> int:
        return self.matrix.shape[0] // 2

    @property
    def A(self) -> np.ndarray:
        return self.matrix[: self._d, : self._d]

    @property
    def B(self) -> np.ndarray:
        return self.matrix[: self._d, self._d :]

    @property
    def C(self) -> np.ndarray:
        return self.matrix[self._d :, : self._d]

    @property
    def D(self) -> np.ndarray:
        return self.matrix[self._d :, self._d :]

    def trace(self) -> np.ndarray:
        return self.A + self.D


@dataclass(frozen=True)
class TransferFamily:
    """The commuting family t(u), t_hat(u) for fixed model parameters."""

    params: ModelParams

    def __post_init__(self):
        check_sin_eta(self.params.eta_c)
        if self.params.n_sites > MAX_TRANSFER_SITES:
            raise ValueError(
                f"transfer matrices are dense on 2^(n+1) states; n_sites <= {MAX_TRANSFER_SITES}"
            )

    @property
    def n(self) -> int:
        return self.params.n_sites

    def _factors(self, hat: bool):
        """(quantum site 1-based, spectral shift) in product order."""
        a = self.params.a_c
        out = []
        for k in range(1, self.n + 1):
            site = self.n + 1 - k if hat else k
            out.append((site, a if k % 2 else -a))
        return out

    def _product(self, u: complex, hat: bool, derivative_at: int | None = None) -> np.ndarray:
        eta = self.params.eta_c
        dim = 2 ** (self.n + 1)
        T = np.eye(dim, dtype=complex)
        for pos, (site, shift) in enumerate(self._factors(hat)):
            f = r_matrix_derivative if pos == derivative_at else r_matrix
            T = T @ embed(f(u + shift, eta), [0, site], self.n + 1)
        return T

    def monodromy(self, u: complex) -> Monodromy:
        return Monodromy(self._product(u, hat=False))

    def monodromy_hat(self, u: complex) -> Monodromy:
        return Monodromy(self._product(u, hat=True))

    def t(self, u: complex) -> np.ndarray:
        return self.monodromy(u).trace()

    def t_hat(self, u: complex) -> np.ndarray:
        return self.monodromy_hat(u).trace()

    def t_derivative(self, u: complex) -> np.ndarray:
        """dt/du by the product rule with the analytic R-matrix derivative."""
        return sum(
            Monodromy(self._product(u, hat=False, derivative_at=k)).trace() for k in range(self.n)
        )

    def vacuum_a(self, u: complex) -> complex:
        return vacuum_a(u, self.params)

    def vacuum_d(self, u: complex) -> complex:
        return vacuum_d(u, self.params)

def vacuum_a(u: complex, p: ModelParams) -> complex:
    """Eigenvalue of A(u) on the all-up state."""
    s = np.sin(p.eta_c)
    return (np.sin(u + p.a_c + p.eta_c) * np.sin(u - p.a_c + p.eta_c)) ** p.N / s ** (2 * p.N)


def vacuum_d(u: complex, p: ModelParams) -> complex:
    """Eigenvalue of D(u) on the all-up state."""
    s = np.sin(p.eta_c)
    return (np.sin(u + p.a_c) * np.sin(u - p.a_c)) ** p.N / s ** (2 * p.N)


def monodromy(u: complex, p: ModelParams) -> Monodromy:
    return TransferFamily(p).monodromy(u)


def transfer(u: complex, p: ModelParams) -> np.ndarray:
    return TransferFamily(p).t(u)


def transfer_hat(u: complex, p: ModelParams) -> np.ndarray:
    return TransferFamily(p).t_hat(u)


def hamiltonian_constant(p: ModelParams) -> complex:
    eta, a = p.eta_c, p.a_c
    return -p.N * np.cos(eta) * (np.cos(2 * a) ** 2 - np.cos(2 * eta)) / np.sin(eta) ** 2


def hamiltonian_from_transfer(p: ModelParams, resonance_tol: float = 1e-12) -> np.ndarray:
    """Hamiltonian as the logarithmic derivative of the transfer matrices at u = +-a."""
    fam = TransferFamily(p)
    eta, a = p.eta_c, p.a_c
    ph = phi(2 * a, eta)
    if abs(ph) < resonance_tol:
        raise ResonantInhomogeneityError(f"phi(2a) = {ph:.3e} vanishes")
    body = fam.t_hat(-a) @ fam.t_derivative(a) + fam.t_hat(a) @ fam.t_derivative(-a)
    H = ph ** (1 - p.N) * np.sin(eta) * body
    H[np.diag_indices_from(H)] += hamiltonian_constant(p)
    return H


def transfer_eigenvalue(u: complex, lambdas: Sequence[complex], p: ModelParams,
                        pole_tol: float = 1e-12) -> complex:
    """Eigenvalue Lambda(u) of t(u) on the Bethe state with rational roots ``lambdas``.

    ``lambdas`` may also be a ``BetheRoots``; it is converted with ``to_lambda``.
    """
    if hasattr(lambdas, "to_lambda"):
        lambdas = lambdas.to_lambda(p)
    lam = np.asarray(lambdas, dtype=complex)
    eta = p.eta_c
    den = np.sin(u - lam)
    if np.any(np.abs(den) < pole_tol):
        raise PoleError(f"u = {u} coincides with a Bethe root")
    first = vacuum_a(u, p) * np.prod(np.sin(u - lam - eta) / den)
    second = vacuum_d(u, p) * np.prod(np.sin(u - lam + eta) / den)
    return complex(first + second)
