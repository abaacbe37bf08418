import pytest

from qcapqubit import CapacitorNetwork, CircuitSpec, LinearCapacitor, QCapModel


@pytest.fixture
def table1_model():
    return QCapModel(area=1e-6, temperature=0.025)


@pytest.fixture
def final_circuit():
    return CircuitSpec(CapacitorNetwork(QCapModel(area=5e-8, temperature=0.025)), inductance=60e-9)


@pytest.fixture
def stub_network():
    return CapacitorNetwork(LinearCapacitor(35e-15))
