"""Graphene quantum capacitance and the capacitor-network potential.

The quantum capacitance of a graphene/BN/graphene stack of area ``S`` at
temperature ``T`` under bias ``V`` (Fermi level ``E_F = eV/2``) is

    C_Q(V) = 2 e^2 S k_B T / (pi (hbar v_F)^2) * ln[2 (1 + cosh(eV / 2k_BT))]

Charge and stored energy follow by integrating ``C_Q`` and ``V C_Q`` over
voltage. Both integrals are tabulated lazily with composite Simpson and
inverted with a shape-preserving cubic plus one Newton step.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, NamedTuple, Optional, Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import NumericDomainError, ValidationError
from .units import E_CHARGE, HBAR, K_B

DEFAULT_FERMI_VELOCITY = 1.0e6  # m/s
PANELS_PER_SEGMENT = 4096
MAX_EXTENSIONS = 200


def _check_finite(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} must be finite")
    return arr


def _positive(value, name: str) -> None:
    if value is None or not (math.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class QCapModel:
    """Quantum capacitance parameters of a graphene sandwich.

    Parameters
    ----------
    area : float
        Geometric capacitor area [m^2].
    temperature : float
        Absolute temperature [K].
    fermi_velocity : float
        Graphene Fermi velocity [m/s].
    vf_scale : float
        Multiplier on the Fermi velocity, in (0, 1]. About 1/7 models the
        reduced velocity of magic-angle twisted bilayer graphene.
    """

    area: float
    temperature: float
    fermi_velocity: float = DEFAULT_FERMI_VELOCITY
    vf_scale: float = 1.0

    def __post_init__(self):
        _positive(self.area, "area")
        _positive(self.temperature, "temperature")
        _positive(self.fermi_velocity, "fermi_velocity")
        _positive(self.vf_scale, "vf_scale")
        if self.vf_scale > 1:
            raise ValidationError(f"vf_scale must be <= 1, got {self.vf_scale!r}")

    @property
    def effective_velocity(self) -> float:
        return self.fermi_velocity * self.vf_scale

    @property
    def prefactor(self) -> float:
        """``2 e^2 S k_B T / (pi (hbar v)^2)`` in farads."""
        hv = HBAR * self.effective_velocity
        return 2.0 * E_CHARGE**2 * self.area * K_B * self.temperature / (math.pi * hv * hv)

    @property
    def thermal_voltage(self) -> float:
        """``2 k_B T / e``: the bias at which the log argument starts to grow."""
        return 2.0 * K_B * self.temperature / E_CHARGE

    @property
    def voltage_scale(self) -> float:
        return 20.0 * self.thermal_voltage

    def capacitance(self, V):
        V = _check_finite(V, "voltage")
        half = 0.5 * V / self.thermal_voltage
        # ln[2(1 + cosh x)] = 2 ln(2 cosh(x/2)); logaddexp never overflows
        return self.prefactor * 2.0 * np.logaddexp(half, -half)

    @cached_property
    def table(self) -> "ChargeVoltageTable":
        return ChargeVoltageTable(self.capacitance, self.voltage_scale)


@dataclass(frozen=True)
class LinearCapacitor:
    """Voltage-independent capacitor with the same interface as ``QCapModel``.

    Used as the harmonic-limit stand-in for the quantum capacitor.
    """

    value: float

    def __post_init__(self):
        _positive(self.value, "capacitance")

    @property
    def voltage_scale(self) -> float:
        return E_CHARGE / self.value

    def capacitance(self, V):
        V = _check_finite(V, "voltage")
        return np.full_like(V, self.value, dtype=float)

    @cached_property
    def table(self) -> "ChargeVoltageTable":
        return ChargeVoltageTable(self.capacitance, self.voltage_scale)


CapacitorModel = Union[QCapModel, LinearCapacitor]


class _Snapshot(NamedTuple):
    v: np.ndarray
    q: np.ndarray
    energy: np.ndarray
    inverse: PchipInterpolator


class ChargeVoltageTable:
    """Cumulative charge and energy of a capacitor versus voltage.

    Only ``V >= 0`` is stored; charge is odd and energy even in ``V``. The
    grid is a chain of segments ``[0, V0], [V0, 2V0], [2V0, 4V0], ...``,
    each split into ``PANELS_PER_SEGMENT`` Simpson intervals, grown on
    demand. Growth builds a new snapshot and swaps it in under a lock, so
    readers never observe a half-built table.
    """

    def __init__(self, capacitance: Callable, span: float, panels: int = PANELS_PER_SEGMENT):
        _positive(span, "span")
        self._capacitance = capacitance
        self._panels = int(panels)
        self._lock = threading.Lock()
        v = np.linspace(0.0, span, self._panels + 1)
        q, en = self._integrate(v, 0.0, 0.0)
        self._snap = self._make_snapshot(v, q, en)

    def _integrate(self, v, q0, e0):
        mid = 0.5 * (v[:-1] + v[1:])
        c = self._capacitance(v)
        cm = self._capacitance(mid)
        dv = np.diff(v) / 6.0
        dq = dv * (c[:-1] + 4.0 * cm + c[1:])
        de = dv * (v[:-1] * c[:-1] + 4.0 * mid * cm + v[1:] * c[1:])
        q = q0 + np.concatenate(([0.0], np.cumsum(dq)))
        en = e0 + np.concatenate(([0.0], np.cumsum(de)))
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(en))):
            raise NumericDomainError("charge/energy table growth produced non-finite values")
        return q, en

    @staticmethod
    def _make_snapshot(v, q, en) -> _Snapshot:
        if np.any(np.diff(q) <= 0):
            raise NumericDomainError("tabulated charge is not strictly increasing")
        return _Snapshot(v, q, en, PchipInterpolator(q, v, extrapolate=False))

    def _extend_until(self, reached: Callable[[_Snapshot], bool]) -> _Snapshot:
        snap = self._snap
        if reached(snap):
            return snap
        with self._lock:
            snap = self._snap
            v, q, en = snap.v, snap.q, snap.energy
            for _ in range(MAX_EXTENSIONS):
                if reached(snap):
                    break
                b = v[-1]
                seg = np.linspace(b, 2.0 * b, self._panels + 1)
                qs, es = self._integrate(seg, q[-1], en[-1])
                v = np.concatenate((v, seg[1:]))
                q = np.concatenate((q, qs[1:]))
                en = np.concatenate((en, es[1:]))
                snap = self._make_snapshot(v, q, en)
            else:
                raise NumericDomainError("table could not be extended to cover the request")
            self._snap = snap
        return snap

    def _cover_voltage(self, vmax: float) -> _Snapshot:
        return self._extend_until(lambda s: s.v[-1] >= vmax)

    def _cover_charge(self, qmax: float) -> _Snapshot:
        return self._extend_until(lambda s: s.q[-1] >= qmax)

    def _local(self, snap: _Snapshot, vabs: np.ndarray):
        """Charge and energy at ``vabs`` from the nearest node below plus one Simpson panel."""
        k = np.clip(np.searchsorted(snap.v, vabs, side="right") - 1, 0, len(snap.v) - 2)
        a = snap.v[k]
        mid = 0.5 * (a + vabs)
        ca = self._capacitance(a)
        cm = self._capacitance(mid)
        cx = self._capacitance(vabs)
        w = (vabs - a) / 6.0
        q = snap.q[k] + w * (ca + 4.0 * cm + cx)
        en = snap.energy[k] + w * (a * ca + 4.0 * mid * cm + vabs * cx)
        return q, en

    def charge(self, V):
        V = _check_finite(V, "voltage")
        vabs = np.abs(V)
        snap = self._cover_voltage(float(np.max(vabs, initial=0.0)))
        q, _ = self._local(snap, vabs)
        return np.sign(V) * q

    def energy(self, V):
        V = _check_finite(V, "voltage")
        vabs = np.abs(V)
        snap = self._cover_voltage(float(np.max(vabs, initial=0.0)))
        _, en = self._local(snap, vabs)
        return en

    def voltage(self, Q):
        Q = _check_finite(Q, "charge")
        qabs = np.abs(Q)
        snap = self._cover_charge(float(np.max(qabs, initial=0.0)))
        v = np.asarray(snap.inverse(qabs), dtype=float)
        q_at_v, _ = self._local(snap, v)
        v = v - (q_at_v - qabs) / self._capacitance(v)
        if not np.all(np.isfinite(v)):
            raise NumericDomainError("charge-to-voltage inversion failed")
        return np.sign(Q) * v

    @property
    def voltages(self) -> np.ndarray:
        v = self._snap.v
        return np.concatenate((-v[:0:-1], v))

    @property
    def charges(self) -> np.ndarray:
        q = self._snap.q
        return np.concatenate((-q[:0:-1], q))

    @property
    def energies(self) -> np.ndarray:
        en = self._snap.energy
        return np.concatenate((en[:0:-1], en))


class _ParallelCombination:
    """A capacitor model shunted by a linear ``C_P``; its node map is Q = Q_model(V) + C_P V."""

    def __init__(self, model: CapacitorModel, parallel: float):
        self.model = model
        self.parallel = parallel
        self.voltage_scale = model.voltage_scale
        self.table = ChargeVoltageTable(self.capacitance, self.voltage_scale)

    def capacitance(self, V):
        return self.model.capacitance(V) + self.parallel


@dataclass(frozen=True)
class CapacitorNetwork:
    """Quantum capacitor with an optional shunt ``C_P`` and series ``C_S``.

    Topology: ``C_P`` sits across the quantum capacitor, forming the node
    whose voltage drives ``C_Q``; ``C_S`` is in series with that node.
    """

    qcap: CapacitorModel
    series_cs: Optional[float] = None
    parallel_cp: Optional[float] = None

    def __post_init__(self):
        if self.series_cs is not None:
            _positive(self.series_cs, "series_cs")
        if self.parallel_cp is not None:
            _positive(self.parallel_cp, "parallel_cp")

    @cached_property
    def _node(self):
        if self.parallel_cp is None:
            return self.qcap
        return _ParallelCombination(self.qcap, self.parallel_cp)

    def node_voltage(self, Q):
        """Voltage across the quantum capacitor when charge ``Q`` flows through the network."""
        return self._node.table.voltage(Q)

    def energy_of_charge(self, Q):
        Q = _check_finite(Q, "charge")
        energy = self._node.table.energy(self._node.table.voltage(Q))
        if self.series_cs is not None:
            energy = energy + Q * Q / (2.0 * self.series_cs)
        return energy

    def linearized_capacitance(self) -> float:
        c0 = float(self.qcap.capacitance(0.0))
        if self.parallel_cp is not None:
            c0 += self.parallel_cp
        if self.series_cs is not None:
            c0 = 1.0 / (1.0 / c0 + 1.0 / self.series_cs)
        return c0


def cq_of_voltage(model: CapacitorModel, V):
    """Differential capacitance at bias ``V`` [F]."""
    return model.capacitance(V)


def charge_of_voltage(model: CapacitorModel, V):
    """``Q(V) = int_0^V C(v) dv`` [C]; odd and strictly increasing."""
    return model.table.charge(V)


def voltage_of_charge(model: CapacitorModel, Q):
    """Inverse of :func:`charge_of_voltage`."""
    return model.table.voltage(Q)


def energy_of_voltage(model: CapacitorModel, V):
    """``int_0^V v C(v) dv`` [J]: energy stored in the capacitor at bias ``V``."""
    return model.table.energy(V)


def energy_of_charge(network: CapacitorNetwork, Q):
    """Potential energy of the network holding charge ``Q`` [J]."""
    return network.energy_of_charge(Q)


def linearized_capacitance(network: CapacitorNetwork) -> float:
    """Zero-bias capacitance ``1 / E''(0)`` of the network [F]."""
    return network.linearized_capacitance()
