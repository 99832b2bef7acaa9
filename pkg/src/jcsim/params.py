"""Model parameters for the coherently driven Jaynes-Cummings oscillator.

All rates are expressed in units of the cavity field decay rate kappa,
which is fixed to 1 internally. The reference frequency omega0 is a label
for axis annotation only and never enters any computation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the driven Jaynes-Cummings model.

    Parameters
    ----------
    g : float
        Atom-cavity coupling rate, in units of kappa.
    gamma : float
        Atomic decay rate to non-cavity modes, in units of kappa.
    drive : complex
        Coherent drive amplitude for the cavity mode, in units of kappa.
    n_max : int
        Fock-space truncation; the field spans |0>..|n_max>.
    kappa : float
        Cavity field decay rate. Kept as an explicit field but fixed to 1
        by convention; all outputs are reported in these units.
    omega0 : float
        Common atom/cavity/drive resonance frequency. Label only.
    """

    g: float
    gamma: float
    drive: complex
    n_max: int
    kappa: float = 1.0
    omega0: float = 0.0

    def __post_init__(self):
        for name in ("g", "gamma", "kappa", "omega0"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if not cmath.isfinite(complex(self.drive)):
            raise ValueError(f"drive must be finite, got {self.drive!r}")
        if self.g <= 0:
            raise ValueError(f"g must be positive, got {self.g}")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max}")

    @property
    def dim(self) -> int:
        """Dimension 2(N+1) of the truncated atom-field space."""
        return 2 * (self.n_max + 1)

    @property
    def drive_ratio(self) -> float:
        """|drive| / g, the weak-driving expansion parameter."""
        return abs(self.drive) / self.g

    @property
    def loss_ratio(self) -> float:
        """gamma / (2 kappa), the loss ratio used to label parameter sets."""
        return self.gamma / (2.0 * self.kappa)

    @property
    def n_sc(self) -> float:
        """System size parameter gamma^2 / (8 g^2)."""
        return self.gamma**2 / (8.0 * self.g**2)

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)


def from_ratios(
    g_over_kappa: float,
    gamma_over_2kappa: float,
    drive_over_g: float,
    drive_phase: float = math.pi / 2,
    n_max: int = 30,
    kappa: float = 1.0,
    omega0: float = 0.0,
) -> ModelParams:
    """Build ModelParams from the dimensionless ratios used throughout.

    The drive amplitude is drive_over_g * g_over_kappa * kappa at phase
    drive_phase, so e.g. drive_phase = pi/2 gives a purely imaginary drive.
    """
    g = g_over_kappa * kappa
    magnitude = drive_over_g * g
    drive = magnitude * cmath.exp(1j * drive_phase)
    return ModelParams(
        g=g,
        gamma=2.0 * kappa * gamma_over_2kappa,
        drive=drive,
        n_max=int(n_max),
        kappa=kappa,
        omega0=omega0,
    )
