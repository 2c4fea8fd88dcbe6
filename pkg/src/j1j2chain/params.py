"""Model parameters for the anisotropic J1-J2 chain.

Three regimes are distinguished:

``real-eta-hermitian``
    real anisotropy ``eta`` and imaginary inhomogeneity ``a = i b`` (gapless).
``imag-eta-hermitian``
    imaginary anisotropy ``eta = i gamma`` and real ``a`` (gapped).
``nonhermitian``
    both ``eta`` and ``a`` real.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from .errors import SingularAnisotropyError

SIN_ETA_TOL = 1e-10


class Regime(str, enum.Enum):
    REAL_ETA = "real-eta-hermitian"
    IMAG_ETA = "imag-eta-hermitian"
    NONHERMITIAN = "nonhermitian"


@dataclass(frozen=True)
class ModelParams:
    """Chain size and couplings.

    Exactly one of ``eta``/``gamma`` and one of ``a``/``b`` is set,
    as dictated by ``regime``. Use the ``real_eta``, ``imag_eta`` and
    ``nonhermitian`` constructors rather than filling fields by hand.
    """

    n_sites: int
    regime: Regime
    eta: Optional[float] = None
    gamma: Optional[float] = None
    a: Optional[float] = None
    b: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        if self.n_sites < 2 or self.n_sites % 2:
            raise ValueError(f"n_sites must be even and >= 2, got {self.n_sites}")
        if self.regime is Regime.REAL_ETA:
            need, forbid = ("eta", "b"), ("gamma", "a")
        elif self.regime is Regime.IMAG_ETA:
            need, forbid = ("gamma", "a"), ("eta", "b")
        else:
            need, forbid = ("eta", "a"), ("gamma", "b")
        for name in need:
            if getattr(self, name) is None:
                raise ValueError(f"regime {self.regime.value} requires {name}")
        for name in forbid:
            if getattr(self, name) is not None:
                raise ValueError(f"{name} is not a parameter of regime {self.regime.value}")
        if self.regime is Regime.IMAG_ETA and self.gamma == 0:
            raise ValueError("gamma must be nonzero")

    @classmethod
    def real_eta(cls, n_sites: int, eta: float, b: float) -> "ModelParams":
        return cls(n_sites, Regime.REAL_ETA, eta=float(eta), b=float(b))

    @classmethod
    def imag_eta(cls, n_sites: int, gamma: float, a: float) -> "ModelParams":
        return cls(n_sites, Regime.IMAG_ETA, gamma=float(gamma), a=float(a))

    @classmethod
    def nonhermitian(cls, n_sites: int, eta: float, a: float) -> "ModelParams":
        return cls(n_sites, Regime.NONHERMITIAN, eta=float(eta), a=float(a))

    @property
    def N(self) -> int:
        """Half the number of sites."""
        return self.n_sites // 2

    @property
    def eta_c(self) -> complex:
        """Anisotropy as a complex number (``i gamma`` in the gapped regime)."""
        if self.regime is Regime.IMAG_ETA:
            return 1j * self.gamma
        return complex(self.eta)

    @property
    def a_c(self) -> complex:
        """Inhomogeneity as a complex number (``i b`` in the gapless regime)."""
        if self.regime is Regime.REAL_ETA:
            return 1j * self.b
        return complex(self.a)

    @property
    def is_hermitian_regime(self) -> bool:
        return self.regime is not Regime.NONHERMITIAN

    def with_sites(self, n_sites: int) -> "ModelParams":
        d = asdict(self)
        d["n_sites"] = n_sites
        return ModelParams(**d)

    def to_dict(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if v is not None}
        d["regime"] = self.regime.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        return cls(**d)


def check_sin_eta(eta: complex) -> complex:
    """Return sin(eta), raising if it is numerically zero."""
    s = np.sin(complex(eta))
    if abs(s) < SIN_ETA_TOL:
        raise SingularAnisotropyError(f"|sin(eta)| = {abs(s):.3e} is below {SIN_ETA_TOL}")
    return s
