"""
Quantum capacitance of a graphene plate
=======================================

The capacitance of a Dirac-cone sheet is not a constant: it is smallest at
the charge-neutral point and grows roughly linearly with bias once
``eV`` exceeds a few ``k_B T``. That curvature is what makes an LC circuit
built from it anharmonic.
"""

import numpy as np

from qcapqubit import QCapModel, charge_of_voltage, energy_of_voltage, voltage_of_charge

# a 1 mm^2 plate at 25 mK
qc = QCapModel(area=1e-6, temperature=0.025)
print(f"thermal voltage 2k_BT/e = {qc.thermal_voltage * 1e6:.3f} uV")
print(f"C_Q(0)                  = {qc.capacitance(0.0) * 1e15:.3f} fF")

# the curve, from the neutral point out to forty thermal voltages
V = np.linspace(0, 40 * qc.thermal_voltage, 9)
for v, c in zip(V, qc.capacitance(V)):
    print(f"  V = {v * 1e6:8.2f} uV   C_Q = {c * 1e15:9.3f} fF")

# charge and stored energy come from cumulative integrals of C_Q
Q = charge_of_voltage(qc, V)
E = energy_of_voltage(qc, V)
print("charge at the last bias   :", f"{Q[-1]:.4e} C")
print("energy at the last bias   :", f"{E[-1]:.4e} J")

# the inverse map recovers the bias from the charge
print("round trip |V(Q(V)) - V|  :", f"{np.max(np.abs(voltage_of_charge(qc, Q) - V)):.2e} V")

# away from neutrality C_Q is nearly proportional to |V|
big = np.array([1e-3, 2e-3])
print("C_Q(2 mV) / C_Q(1 mV)     :", f"{np.divide(*qc.capacitance(big)[::-1]):.4f}")
