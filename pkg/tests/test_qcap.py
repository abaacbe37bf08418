import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcapqubit import (
    CapacitorNetwork,
    LinearCapacitor,
    QCapModel,
    charge_of_voltage,
    cq_of_voltage,
    energy_of_charge,
    linearized_capacitance,
    voltage_of_charge,
)
from qcapqubit.errors import ValidationError
from qcapqubit.qcap import ChargeVoltageTable
from qcapqubit.units import E_CHARGE, HBAR, K_B

# 50-digit mpmath evaluation of ln[2(1 + cosh(eV/2k_BT))] times the prefactor,
# S = 1 mm^2, T = 25 mK, v_F = 1e6 m/s
MPMATH_CQ = {
    0.0: 7.0311657651417912552e-13,
    5e-6: 8.6506859304317531307e-13,
    -2e-5: 2.3640167911203820023e-12,
    1e-3: 1.1771423562784592827e-10,
}


def test_zero_bias_value_is_ln4_times_prefactor(table1_model):
    pref = 2 * E_CHARGE**2 * 1e-6 * K_B * 0.025 / (math.pi * (HBAR * 1e6) ** 2)
    assert cq_of_voltage(table1_model, 0.0) == pytest.approx(pref * math.log(4), rel=1e-14)


@pytest.mark.parametrize("V, expected", sorted(MPMATH_CQ.items()))
def test_capacitance_matches_arbitrary_precision(table1_model, V, expected):
    assert cq_of_voltage(table1_model, V) == pytest.approx(expected, rel=1e-13)


def test_no_overflow_far_from_neutrality(table1_model):
    c = cq_of_voltage(table1_model, np.array([-10.0, 10.0]))
    assert np.all(np.isfinite(c))
    assert c[0] == c[1]


def test_nan_voltage_rejected(table1_model):
    with pytest.raises(ValidationError):
        cq_of_voltage(table1_model, float("nan"))
    with pytest.raises(ValidationError):
        charge_of_voltage(table1_model, float("inf"))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(area=0.0, temperature=0.025),
        dict(area=1e-6, temperature=-1.0),
        dict(area=1e-6, temperature=0.025, fermi_velocity=0.0),
        dict(area=1e-6, temperature=0.025, vf_scale=1.5),
        dict(area=1e-6, temperature=0.025, vf_scale=0.0),
    ],
)
def test_invalid_model(kwargs):
    with pytest.raises(ValidationError):
        QCapModel(**kwargs)


def test_invalid_network(table1_model):
    with pytest.raises(ValidationError):
        CapacitorNetwork(table1_model, series_cs=-1e-15)
    with pytest.raises(ValidationError):
        CapacitorNetwork(table1_model, parallel_cp=0.0)


@given(v=st.floats(-1e-3, 1e-3))
def test_capacitance_even_and_minimal_at_zero(v):
    m = QCapModel(area=1e-6, temperature=0.025)
    c0 = m.capacitance(0.0)
    assert m.capacitance(v) == m.capacitance(-v)
    assert m.capacitance(v) >= c0


def test_scaling_law_area_and_velocity():
    V = np.linspace(-1e-4, 1e-4, 11)
    base = QCapModel(area=1e-7, temperature=0.05)
    double_area = QCapModel(area=2e-7, temperature=0.05)
    slow = QCapModel(area=1e-7, temperature=0.05, vf_scale=0.5)
    np.testing.assert_allclose(double_area.capacitance(V), 2 * base.capacitance(V), rtol=1e-14)
    np.testing.assert_allclose(slow.capacitance(V), 4 * base.capacitance(V), rtol=1e-14)


def test_charge_is_zero_at_zero_and_odd(table1_model):
    assert charge_of_voltage(table1_model, 0.0) == 0.0
    V = np.linspace(1e-7, 5e-4, 37)
    np.testing.assert_array_equal(charge_of_voltage(table1_model, -V), -charge_of_voltage(table1_model, V))


def test_charge_strictly_increasing(table1_model):
    V = np.linspace(-5e-4, 5e-4, 2001)
    assert np.all(np.diff(charge_of_voltage(table1_model, V)) > 0)


def test_charge_derivative_matches_capacitance(table1_model):
    vt = table1_model.thermal_voltage
    V = np.linspace(-20 * vt, 20 * vt, 101)
    dv = 1e-4 * vt
    num = (charge_of_voltage(table1_model, V + dv) - charge_of_voltage(table1_model, V - dv)) / (2 * dv)
    np.testing.assert_allclose(num, cq_of_voltage(table1_model, V), rtol=1e-6)


def test_linear_stub_quadrature_is_exact():
    C = 123e-15
    stub = LinearCapacitor(C)
    V = np.linspace(-3e-3, 3e-3, 41)
    np.testing.assert_allclose(charge_of_voltage(stub, V), C * V, rtol=1e-10, atol=0)
    Q = np.linspace(-50, 50, 41) * E_CHARGE
    np.testing.assert_allclose(voltage_of_charge(stub, Q), Q / C, rtol=1e-9, atol=0)


def test_voltage_of_zero_charge(table1_model):
    assert voltage_of_charge(table1_model, 0.0) == 0.0


def test_inverse_round_trip_random(table1_model):
    rng = np.random.default_rng(7)
    V = rng.uniform(-40, 40, 100) * table1_model.thermal_voltage
    back = voltage_of_charge(table1_model, charge_of_voltage(table1_model, V))
    np.testing.assert_allclose(back, V, rtol=1e-9)


@settings(max_examples=50, deadline=None)
@given(v=st.floats(1e-9, 5e-2))
def test_inverse_round_trip_property(v):
    m = QCapModel(area=5e-8, temperature=0.025)
    assert voltage_of_charge(m, charge_of_voltage(m, v)) == pytest.approx(v, rel=1e-9)


def test_table_grows_on_demand():
    m = QCapModel(area=5e-8, temperature=0.025)
    table = m.table
    v_before = table.voltages[-1]
    far_q = float(charge_of_voltage(m, 50 * v_before))
    assert table.voltages[-1] >= 50 * v_before
    assert voltage_of_charge(m, far_q) == pytest.approx(50 * v_before, rel=1e-9)


def test_table_arrays_symmetric(table1_model):
    t = table1_model.table
    V, Q, E = t.voltages, t.charges, t.energies
    np.testing.assert_array_equal(V, -V[::-1])
    np.testing.assert_array_equal(Q, -Q[::-1])
    np.testing.assert_array_equal(E, E[::-1])
    assert np.all(np.diff(V) > 0) and np.all(np.diff(Q) > 0) and np.all(E >= 0)


def test_concurrent_readers_see_complete_tables():
    from concurrent.futures import ThreadPoolExecutor

    m = QCapModel(area=5e-8, temperature=0.025)
    targets = np.geomspace(1e-6, 1e-1, 64)
    with ThreadPoolExecutor(8) as pool:
        got = list(pool.map(lambda v: float(voltage_of_charge(m, charge_of_voltage(m, v))), targets))
    np.testing.assert_allclose(got, targets, rtol=1e-9)


def test_table_requires_positive_span():
    with pytest.raises(ValidationError):
        ChargeVoltageTable(lambda v: np.ones_like(v), 0.0)


# -- network energy --------------------------------------------------------


def test_energy_zero_at_zero(table1_model):
    for net in (
        CapacitorNetwork(table1_model),
        CapacitorNetwork(table1_model, series_cs=1e-13),
        CapacitorNetwork(table1_model, parallel_cp=1e-13),
        CapacitorNetwork(table1_model, 1e-13, 1e-13),
    ):
        assert energy_of_charge(net, 0.0) == 0.0


def test_series_stub_energy_closed_form():
    C, Cs = 35e-15, 100e-15
    net = CapacitorNetwork(LinearCapacitor(C), series_cs=Cs)
    Q = np.linspace(-20, 20, 33) * E_CHARGE
    np.testing.assert_allclose(energy_of_charge(net, Q), Q**2 / 2 * (1 / C + 1 / Cs), rtol=1e-9)


def test_parallel_stub_energy_closed_form():
    C, Cp = 35e-15, 10e-15
    net = CapacitorNetwork(LinearCapacitor(C), parallel_cp=Cp)
    Q = np.linspace(-20, 20, 33) * E_CHARGE
    np.testing.assert_allclose(energy_of_charge(net, Q), Q**2 / (2 * (C + Cp)), rtol=1e-9)
    np.testing.assert_allclose(net.node_voltage(Q), Q / (C + Cp), rtol=1e-9)


def test_parallel_node_voltage_solves_charge_balance(table1_model):
    Cp = 200e-15
    net = CapacitorNetwork(table1_model, parallel_cp=Cp)
    Q = np.linspace(-300, 300, 25) * E_CHARGE
    V = net.node_voltage(Q)
    np.testing.assert_allclose(charge_of_voltage(table1_model, V) + Cp * V, Q, rtol=1e-9, atol=1e-30)


@pytest.mark.parametrize("cs, cp", [(None, None), (1e-13, None), (None, 1e-13), (1e-12, 5e-14)])
def test_energy_even_and_convex(table1_model, cs, cp):
    net = CapacitorNetwork(table1_model, cs, cp)
    Q = np.linspace(-400, 400, 101) * E_CHARGE
    E = energy_of_charge(net, Q)
    np.testing.assert_array_equal(E, energy_of_charge(net, -Q))
    h = 0.5 * E_CHARGE
    second = (energy_of_charge(net, Q + h) - 2 * E + energy_of_charge(net, Q - h)) / h**2
    assert np.all(second > 0)


def test_linearized_capacitance_variants(table1_model):
    c_q = float(cq_of_voltage(table1_model, 0.0))
    assert linearized_capacitance(CapacitorNetwork(table1_model)) == c_q
    assert linearized_capacitance(CapacitorNetwork(table1_model, parallel_cp=1e-13)) == pytest.approx(c_q + 1e-13)
    series = linearized_capacitance(CapacitorNetwork(table1_model, series_cs=1e-13))
    assert series == pytest.approx(1 / (1 / c_q + 1 / 1e-13), rel=1e-14)


@pytest.mark.parametrize("cs, cp", [(None, None), (1e-13, None), (None, 2e-13), (1e-12, 5e-14)])
def test_linearized_capacitance_matches_curvature(table1_model, cs, cp):
    net = CapacitorNetwork(table1_model, cs, cp)
    h = 1e-3 * E_CHARGE
    # E(0) = 0 and E is even, so E'' (0) ~ 2 E(h) / h^2
    curvature = 2 * float(energy_of_charge(net, h)) / h**2
    assert 1 / curvature == pytest.approx(linearized_capacitance(net), rel=1e-6)
