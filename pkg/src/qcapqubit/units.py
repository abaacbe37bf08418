"""Physical constants and the dimensionless scaling used by the solvers.

All eigenvalue work is done in units where the linearized LC oscillator
has frequency 1 and eigenvalues ``n + 1/2``. Raw SI energies of a few
GHz photons sit near 1e-24 J, which is useless for conditioning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import ValidationError

if TYPE_CHECKING:
    from .design import CircuitSpec


@dataclass(frozen=True)
class PhysicalConstants:
    e: float
    hbar: float
    k_B: float

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar


# CODATA-2018 (exact in the 2019 SI for e and k_B; hbar derived from exact h).
CONSTANTS = PhysicalConstants(
    e=1.602176634e-19,
    hbar=1.054571817e-34,
    k_B=1.380649e-23,
)

E_CHARGE = CONSTANTS.e
HBAR = CONSTANTS.hbar
K_B = CONSTANTS.k_B
PLANCK = CONSTANTS.h


@dataclass(frozen=True)
class Scaling:
    """Reference scales for energy, charge and angular frequency.

    ``energy_ref`` is always ``hbar * omega_ref``. With ``charge_ref`` equal
    to the zero-point charge ``sqrt(hbar / 2Z)`` of the linearized circuit,
    the scaled Hamiltonian reads ``-d^2/dq^2 + u(q)`` with ``u = q^2/4`` in
    the harmonic limit.
    """

    omega_ref: float
    charge_ref: float
    energy_ref: float

    def __post_init__(self):
        for name in ("omega_ref", "charge_ref", "energy_ref"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be finite and > 0, got {value!r}")

    @classmethod
    def from_lc(cls, inductance: float, capacitance: float) -> "Scaling":
        if not (math.isfinite(inductance) and inductance > 0):
            raise ValidationError(f"inductance must be finite and > 0, got {inductance!r}")
        if not (math.isfinite(capacitance) and capacitance > 0):
            raise ValidationError(f"capacitance must be finite and > 0, got {capacitance!r}")
        omega = 1.0 / math.sqrt(inductance * capacitance)
        impedance = math.sqrt(inductance / capacitance)
        charge = math.sqrt(HBAR / (2.0 * impedance))
        return cls(omega_ref=omega, charge_ref=charge, energy_ref=HBAR * omega)

    def scale_energy(self, energy):
        return energy / self.energy_ref

    def unscale_energy(self, energy):
        return energy * self.energy_ref

    def scale_charge(self, charge):
        return charge / self.charge_ref

    def unscale_charge(self, charge):
        return charge * self.charge_ref

    def scale_frequency(self, omega):
        return omega / self.omega_ref

    def unscale_frequency(self, omega):
        return omega * self.omega_ref


def make_scaling(circuit: "CircuitSpec") -> Scaling:
    """Scaling anchored at the circuit's zero-bias linearized capacitance."""
    from .qcap import linearized_capacitance

    return Scaling.from_lc(circuit.inductance, linearized_capacitance(circuit.network))
