"""Design toolkit for LC qubits whose nonlinearity is graphene quantum capacitance."""

from .design import (
    CircuitSpec,
    FeasibilityReport,
    QubitSolution,
    analyze,
    check_feasibility,
    design_inductor,
    extract_tau,
    final_design,
    zero_point,
)
from .errors import NumericDomainError, QCapError, SolverError, SweepError, ValidationError
from .qcap import (
    CapacitorNetwork,
    ChargeVoltageTable,
    LinearCapacitor,
    QCapModel,
    charge_of_voltage,
    cq_of_voltage,
    energy_of_charge,
    energy_of_voltage,
    linearized_capacitance,
    voltage_of_charge,
)
from .spectrum import GridSpec, KerrParams, Spectrum, auto_domain, solve_charge_basis, solve_fock_kerr
from .sweep import SensitivityReport, SweepSpec, emit, reproduce_tables, sensitivities, sweep
from .units import CONSTANTS, PhysicalConstants, Scaling, make_scaling

__version__ = "0.1.0"
