"""Integrable spin-1/2 chain with alternating inhomogeneity: exact diagonalization,
transfer matrices, Bethe ansatz and thermodynamic-limit observables."""

from .params import ModelParams, Regime

__version__ = "0.1.0"

__all__ = ["ModelParams", "Regime", "__version__"]
