"""Qubit figures of merit for a quantum-capacitor LC circuit."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import NumericDomainError, ValidationError
from .qcap import CapacitorNetwork, LinearCapacitor, QCapModel
from .spectrum import GUARD_LEVELS, REFINE_TOL, GridSpec, Spectrum, auto_domain, solve_charge_basis
from .units import E_CHARGE, HBAR, K_B, PLANCK

# fabrication bounds below which the quantum capacitance survives
MAX_PUDDLE_DENSITY = 1e8  # cm^-2
MAX_PUDDLE_DEPTH = 10.0  # meV

ZERO_POINT_CONVENTIONS = {"half_quantum": 0.5, "quarter_quantum": 0.25}

# Rayleigh-Schrodinger coefficients of w01/w and w12/w for
# hbar w [(n + 1/2) - (x/4)(a^+ + a)^4], x = w tau, through third order
_W01 = (1.0, -3.0, -18.0, -223.875)
_W12 = (1.0, -6.0, -56.25, -1010.25)


def design_inductor(network: CapacitorNetwork, f_design: float) -> float:
    """Inductance that puts the zero-bias LC resonance at ``f_design`` [H]."""
    if not (math.isfinite(f_design) and f_design > 0):
        raise ValidationError(f"design frequency must be > 0, got {f_design!r}")
    c0 = network.linearized_capacitance()
    return 1.0 / ((2.0 * math.pi * f_design) ** 2 * c0)


@dataclass(frozen=True)
class CircuitSpec:
    """A capacitor network shunted by a linear inductor.

    Give exactly one of ``inductance`` or ``design_frequency``. In the
    latter case the inductance is chosen so the linearized circuit
    resonates at ``design_frequency``, and that choice is remembered so
    derived circuits (other temperature, other area) are re-designed the
    same way.
    """

    network: CapacitorNetwork
    inductance: Optional[float] = None
    design_frequency: Optional[float] = None

    def __post_init__(self):
        if (self.inductance is None) == (self.design_frequency is None):
            raise ValidationError("give exactly one of inductance or design_frequency")
        if self.design_frequency is not None:
            object.__setattr__(self, "inductance", design_inductor(self.network, self.design_frequency))
        if not (math.isfinite(self.inductance) and self.inductance > 0):
            raise ValidationError(f"inductance must be finite and > 0, got {self.inductance!r}")

    @property
    def linearized_capacitance(self) -> float:
        return self.network.linearized_capacitance()

    @property
    def linear_frequency(self) -> float:
        """Zero-bias LC resonance ``1/(2 pi sqrt(L C0))`` [Hz]."""
        return 1.0 / (2.0 * math.pi * math.sqrt(self.inductance * self.linearized_capacitance))

    @property
    def temperature(self) -> Optional[float]:
        return getattr(self.network.qcap, "temperature", None)

    def with_network(self, network: CapacitorNetwork) -> "CircuitSpec":
        if self.design_frequency is not None:
            return CircuitSpec(network, design_frequency=self.design_frequency)
        return CircuitSpec(network, inductance=self.inductance)

    def with_qcap(self, **changes) -> "CircuitSpec":
        """Copy with quantum-capacitor fields replaced (e.g. ``temperature=0.03``)."""
        from dataclasses import replace

        net = replace(self.network, qcap=replace(self.network.qcap, **changes))
        return self.with_network(net)

    def with_fixed_inductance(self) -> "CircuitSpec":
        return CircuitSpec(self.network, inductance=self.inductance)

    def linear_stub(self) -> "CircuitSpec":
        """Same circuit with the quantum capacitor frozen at its zero-bias value."""
        from dataclasses import replace

        stub = LinearCapacitor(float(self.network.qcap.capacitance(0.0)))
        return CircuitSpec(replace(self.network, qcap=stub), inductance=self.inductance)


@dataclass(frozen=True)
class FeasibilityReport:
    puddle_density_ok: bool
    puddle_depth_ok: bool
    temperature_ok: bool
    messages: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.puddle_density_ok and self.puddle_depth_ok and self.temperature_ok


@dataclass(frozen=True)
class QubitSolution:
    """Figures of merit of one circuit.

    ``anharmonicity`` is in percent; every other field is SI.
    """

    f_actual: float
    anharmonicity: float
    tau: float
    v_zp: float
    n_zp: float
    q_zp: float
    design_frequency: float
    spectrum: Spectrum = field(repr=False)
    feasible: FeasibilityReport = field(repr=False)

    def as_row(self) -> dict:
        return {
            "design_frequency": self.design_frequency,
            "f_actual": self.f_actual,
            "anharmonicity": self.anharmonicity,
            "tau": self.tau,
            "v_zp": self.v_zp,
            "n_zp": self.n_zp,
        }


def _series(coeffs, x):
    return sum(c * x**k for k, c in enumerate(coeffs))


def extract_tau(spectrum: Spectrum, omega_design: float, order: int = 3) -> float:
    """Nonlinear interaction time that reproduces the spectrum's anharmonicity.

    The spectrum is matched to the quartic oscillator with ``alpha = 0``,
    whose perturbative levels give ``A = 3 w tau`` at leading order.

    Parameters
    ----------
    spectrum : Spectrum
        At least three levels.
    omega_design : float
        Bare angular frequency ``w`` of the quartic model [rad/s]. Only
        used when ``order > 1``.
    order : int
        1 returns the leading-order estimate ``A / (3 w01)``. 2 or 3 invert
        the Rayleigh-Schrodinger series for ``A(w tau)`` through that order,
        then divide by ``omega_design``; a root outside the range where the
        series is monotone falls back to order 1.
    """
    A = spectrum.anharmonicity
    if A <= -1:
        raise NumericDomainError(f"anharmonicity {A:.3g} <= -1; spectrum is pathological")
    if order == 1:
        return A / (3.0 * spectrum.omega01)
    if order not in (2, 3):
        raise ValidationError("order must be 1, 2 or 3")
    if not (math.isfinite(omega_design) and omega_design > 0):
        raise ValidationError("omega_design must be > 0")
    if A == 0:
        return 0.0

    w01 = _W01[: order + 1]
    w12 = _W12[: order + 1]

    def model_a(x):
        a = _series(w01, x)
        return (a - _series(w12, x)) / a

    # walk away from x = 0 while A(x) keeps moving toward the target monotonically
    step = math.copysign(1e-4, A)
    x_end, a_prev = 0.0, 0.0
    for _ in range(1000):
        x_next = x_end + step
        a_next = model_a(x_next)
        if _series(w01, x_next) <= 0 or (a_next - a_prev) * step <= 0:
            return A / (3.0 * spectrum.omega01)
        x_end, a_prev = x_next, a_next
        if (a_next - A) * step >= 0:
            break
    else:
        return A / (3.0 * spectrum.omega01)
    x = brentq(lambda x: model_a(x) - A, 0.0, x_end, xtol=1e-16, rtol=1e-14)
    return x / omega_design


def zero_point(
    circuit: CircuitSpec, spectrum: Spectrum, convention: str = "half_quantum"
) -> Tuple[float, float, float]:
    """Zero-point amplitudes from the energy rule ``E(Q_zp) = k hbar w01``.

    ``k`` is 1/2 for the half-quantum convention, 1/4 for the alternative
    that assigns only the potential share of the ground-state energy.

    Returns
    -------
    (V_zp [V], n_zp, Q_zp [C])
    """
    try:
        fraction = ZERO_POINT_CONVENTIONS[convention]
    except KeyError:
        raise ValidationError(f"unknown zero-point convention {convention!r}") from None
    target = fraction * HBAR * spectrum.omega01
    net = circuit.network

    def excess(n):  # n in units of e, energy in units of target
        return float(net.energy_of_charge(n * E_CHARGE)) / target - 1.0

    hi = 1.0
    for _ in range(200):
        if excess(hi) > 0:
            break
        hi *= 2.0
    else:
        raise NumericDomainError("zero-point bracket not found")
    n_zp = brentq(excess, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    q_zp = n_zp * E_CHARGE
    v_zp = float(net.node_voltage(q_zp))
    return v_zp, n_zp, q_zp


def check_feasibility(
    circuit: CircuitSpec,
    puddle_density: float = 0.0,
    puddle_depth: float = 0.0,
    f_actual: Optional[float] = None,
) -> FeasibilityReport:
    """Advisory threshold checks.

    Parameters
    ----------
    puddle_density : float
        Charge-puddle surface density [cm^-2]; must stay below 1e8.
    puddle_depth : float
        Puddle potential depth [meV]; must stay below 10 meV.
    f_actual : float, optional
        Qubit frequency [Hz]; the linearized frequency is used when omitted.
        Thermal operation needs ``h f > 2 k_B T``.
    """
    for name, value in (("puddle_density", puddle_density), ("puddle_depth", puddle_depth)):
        if not (math.isfinite(value) and value >= 0):
            raise ValidationError(f"{name} must be >= 0, got {value!r}")
    if f_actual is None:
        f_actual = circuit.linear_frequency
    messages = []

    density_ok = puddle_density < MAX_PUDDLE_DENSITY
    messages.append(
        f"puddle density {puddle_density:.3g} cm^-2 "
        + ("below" if density_ok else "exceeds")
        + f" the {MAX_PUDDLE_DENSITY:.0e} cm^-2 bound"
    )
    depth_ok = puddle_depth < MAX_PUDDLE_DEPTH
    messages.append(
        f"puddle depth {puddle_depth:.3g} meV "
        + ("below" if depth_ok else "exceeds")
        + f" the {MAX_PUDDLE_DEPTH:g} meV bound"
    )
    T = circuit.temperature
    if T is None:
        temp_ok = True
        messages.append("linear capacitor: no temperature constraint")
    else:
        limit = 2.0 * K_B * T / PLANCK
        temp_ok = f_actual > limit
        messages.append(
            f"qubit frequency {f_actual / 1e9:.4g} GHz "
            + ("above" if temp_ok else "not above")
            + f" the thermal limit 2k_BT/h = {limit / 1e9:.4g} GHz"
        )
    return FeasibilityReport(density_ok, depth_ok, temp_ok, tuple(messages))


def solve_circuit(
    circuit: CircuitSpec,
    n_levels: int = 3,
    n_points: Optional[int] = None,
    tol: float = REFINE_TOL,
) -> Spectrum:
    """Charge-basis spectrum of the circuit's exact potential."""
    c0 = circuit.linearized_capacitance
    grid: Optional[GridSpec] = None
    if n_points is not None:
        grid = auto_domain(
            circuit.network.energy_of_charge, circuit.inductance, c0, n_levels + GUARD_LEVELS, n_points
        )
    return solve_charge_basis(
        circuit.network.energy_of_charge, circuit.inductance, c0, n_levels, grid=grid, tol=tol
    )


def analyze(
    circuit: CircuitSpec,
    n_levels: int = 3,
    *,
    n_points: Optional[int] = None,
    tol: float = REFINE_TOL,
    zero_point_convention: str = "half_quantum",
    puddle_density: float = 0.0,
    puddle_depth: float = 0.0,
) -> QubitSolution:
    """Solve the circuit and derive frequency, anharmonicity, tau and zero-point amplitudes."""
    if n_levels < 3:
        raise ValidationError("analyze needs n_levels >= 3")
    spectrum = solve_circuit(circuit, n_levels, n_points, tol)
    omega_design = 2.0 * math.pi * circuit.linear_frequency
    v_zp, n_zp, q_zp = zero_point(circuit, spectrum, zero_point_convention)
    f = spectrum.f01
    return QubitSolution(
        f_actual=f,
        anharmonicity=100.0 * spectrum.anharmonicity,
        tau=extract_tau(spectrum, omega_design),
        v_zp=v_zp,
        n_zp=n_zp,
        q_zp=q_zp,
        design_frequency=circuit.linear_frequency,
        spectrum=spectrum,
        feasible=check_feasibility(circuit, puddle_density, puddle_depth, f),
    )


def final_design(temperature: float = 0.025, **qcap_kwargs) -> CircuitSpec:
    """The 50 um x 1 mm capacitor with a 60 nH inductor."""
    return CircuitSpec(
        CapacitorNetwork(QCapModel(area=5e-8, temperature=temperature, **qcap_kwargs)),
        inductance=60e-9,
    )
