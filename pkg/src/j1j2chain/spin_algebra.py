"""Pauli embeddings, the six-vertex R-matrix and checks of its identities.

Basis convention, used everywhere in the package: a product state
``|s_1 s_2 ... s_n>`` with ``s_k = 0`` for spin up (sigma^z = +1) maps to
the integer whose most significant bit is ``s_1``. The first tensor factor
is therefore the slowest index, matching ``np.kron(A_1, A_2, ...)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .params import check_sin_eta

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": SX, "y": SY, "z": SZ}

# swap operator on C^2 (x) C^2
PERMUTATION = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def kron(*ops: np.ndarray) -> np.ndarray:
    return reduce(np.kron, ops)


def embed_indices(op: np.ndarray, sites: Sequence[int], n_sites: int):
    """COO triplets ``(rows, cols, vals)`` of ``op`` acting on ``sites``.

    ``sites`` are 0-based, distinct, and ordered like the tensor factors of
    ``op``. Entries with exact zeros in ``op`` are dropped.
    """
    k = len(sites)
    if len(set(sites)) != k:
        raise ValueError(f"sites must be distinct, got {sites}")
    if op.shape != (2**k, 2**k):
        raise ValueError(f"operator shape {op.shape} does not match {k} sites")
    for s in sites:
        if not 0 <= s < n_sites:
            raise ValueError(f"site {s} out of range for {n_sites} sites")
    dim = 2**n_sites
    states = np.arange(dim)
    shifts = [n_sites - 1 - s for s in sites]
    local_in = np.zeros(dim, dtype=np.int64)
    mask = 0
    for sh in shifts:
        local_in = (local_in << 1) | ((states >> sh) & 1)
        mask |= 1 << sh
    cleared = states & ~mask
    rows, cols, vals = [], [], []
    for lo in range(2**k):
        column = op[lo, local_in]
        keep = column != 0
        if not keep.any():
            continue
        new = cleared.copy()
        for pos, sh in enumerate(shifts):
            new |= ((lo >> (k - 1 - pos)) & 1) << sh
        rows.append(new[keep])
        cols.append(states[keep])
        vals.append(column[keep])
    if not rows:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros(0, dtype=complex)
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)


def embed(op: np.ndarray, sites: Sequence[int], n_sites: int) -> np.ndarray:
    """Dense matrix of ``op`` acting on 0-based ``sites`` of an ``n_sites`` chain."""
    rows, cols, vals = embed_indices(np.asarray(op, dtype=complex), sites, n_sites)
    out = np.zeros((2**n_sites, 2**n_sites), dtype=complex)
    out[rows, cols] = vals
    return out


def pauli_embed(axis: str, site: int, n_sites: int) -> np.ndarray:
    """sigma^axis on ``site`` (1-based) of an even-length chain."""
    if axis not in PAULI:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    if n_sites < 2 or n_sites % 2:
        raise ValueError(f"n_sites must be even and >= 2, got {n_sites}")
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} out of range 1..{n_sites}")
    return embed(PAULI[axis], [site - 1], n_sites)


def r_matrix(u: complex, eta: complex) -> np.ndarray:
    """The 4x4 trigonometric R-matrix R(u) with anisotropy ``eta``."""
    s = check_sin_eta(eta)
    R = np.zeros((4, 4), dtype=complex)
    R[0, 0] = R[3, 3] = np.sin(u + eta) / s
    R[1, 1] = R[2, 2] = np.sin(u) / s
    R[1, 2] = R[2, 1] = 1.0
    return R


def r_matrix_derivative(u: complex, eta: complex) -> np.ndarray:
    """dR/du; diagonal because the exchange block does not depend on u."""
    s = check_sin_eta(eta)
    c1 = np.cos(u + eta) / s
    c0 = np.cos(u) / s
    return np.diag([c1, c0, c0, c1]).astype(complex)


def phi(u: complex, eta: complex) -> complex:
    """Scalar of the unitarity relation R(u)R(-u) = phi(u) id."""
    s = check_sin_eta(eta)
    return -np.sin(u + eta) * np.sin(u - eta) / s**2


def partial_transpose(m: np.ndarray, space: int) -> np.ndarray:
    """Transpose a 4x4 two-site matrix in tensor factor ``space`` (0 or 1)."""
    t = m.reshape(2, 2, 2, 2)
    if space == 0:
        t = t.transpose(2, 1, 0, 3)
    elif space == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError("space must be 0 or 1")
    return t.reshape(4, 4)


def verify_ybe(u1: complex, u2: complex, u3: complex, eta: complex, r_func=r_matrix) -> float:
    """Max-norm residual of R12 R13 R23 = R23 R13 R12 on three sites.

    ``r_func`` lets tests substitute a deliberately broken R-matrix.
    """
    R12 = embed(r_func(u1 - u2, eta), [0, 1], 3)
    R13 = embed(r_func(u1 - u3, eta), [0, 2], 3)
    R23 = embed(r_func(u2 - u3, eta), [1, 2], 3)
    return float(np.abs(R12 @ R13 @ R23 - R23 @ R13 @ R12).max())


@dataclass(frozen=True)
class RPropertiesReport:
    initial_condition: float
    unitarity: float
    crossing: float
    pt_symmetry: float

    @property
    def max_residual(self) -> float:
        return max(self.initial_condition, self.unitarity, self.crossing, self.pt_symmetry)


def verify_r_properties(u: complex, eta: complex) -> RPropertiesReport:
    """Residuals of the initial condition, unitarity, crossing and PT symmetry."""
    R = r_matrix(u, eta)
    initial = np.abs(r_matrix(0.0, eta) - PERMUTATION).max()
    # R_{j0}(-u) = P R_{0j}(-u) P
    R_swapped = PERMUTATION @ r_matrix(-u, eta) @ PERMUTATION
    unitarity = np.abs(R @ R_swapped - phi(u, eta) * np.eye(4)).max()
    sy0 = np.kron(SY, I2)
    crossed = -sy0 @ partial_transpose(r_matrix(-u - eta, eta), 0) @ sy0
    crossing = np.abs(R - crossed).max()
    pt = max(
        np.abs(R - PERMUTATION @ R @ PERMUTATION).max(),
        np.abs(R - partial_transpose(partial_transpose(R, 0), 1)).max(),
    )
    return RPropertiesReport(float(initial), float(unitarity), float(crossing), float(pt))


def scalar_chirality(i: int, j: int, k: int, n_sites: int) -> np.ndarray:
    """sigma_i . (sigma_j x sigma_k) on 0-based sites."""
    out = np.zeros((2**n_sites,) * 2, dtype=complex)
    for p, q, r in (("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y")):
        out += embed(kron(PAULI[p], PAULI[q], PAULI[r]), [i, j, k], n_sites)
        out -= embed(kron(PAULI[p], PAULI[r], PAULI[q]), [i, j, k], n_sites)
    return out


def verify_permutation_commutator() -> float:
    """Residual of [P_{2,1}, P_{2,0}] = (i/2) sigma_2 . (sigma_1 x sigma_0).

    Sites are labelled 0, 1, 2 in tensor-factor order.
    """
    P21 = embed(PERMUTATION, [2, 1], 3)
    P20 = embed(PERMUTATION, [2, 0], 3)
    lhs = P21 @ P20 - P20 @ P21
    rhs = 0.5j * scalar_chirality(2, 1, 0, 3)
    return float(np.abs(lhs - rhs).max())
