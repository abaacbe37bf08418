"""
Temperature and area dependence
===============================

Sweep temperature and capacitor area at a fixed 60 nH inductor, print a
small anharmonicity grid, and finish with the temperature sensitivities
of the final design.
"""

import numpy as np

from qcapqubit import SweepSpec, final_design, sensitivities, sweep
from qcapqubit.sweep import temperature_exponent

circuit = final_design()

temps = [0.015, 0.025, 0.05, 0.075, 0.1]
areas = [1e-8, 2e-8, 5e-8, 1e-7, 2e-7]
rows = sweep(SweepSpec(circuit, temperatures=temps, areas=areas, quantities=("f_actual", "anharmonicity")), workers=4)

grid = np.array([r["anharmonicity"] for r in rows]).reshape(len(temps), len(areas))
print("anharmonicity [%] (rows: T, columns: S in um^2)")
print("        " + "".join(f"{a * 1e12:>10.0f}" for a in areas))
for T, line in zip(temps, grid):
    print(f"{T * 1e3:5.0f} mK" + "".join(f"{v:10.3f}" for v in line))

# warming smooths the Dirac point, so A drops steeply with T
print(f"\nlog A / log T slope at 60 nH: {temperature_exponent(circuit):.2f}")

rep = sensitivities(circuit)
print(f"df/dT  = {rep.df_dT / 1e9:.2f} MHz/mK   S_f^T = {rep.S_f_T:.2f} %")
print(f"dA/dT  = {rep.dA_dT / 1e3:.3f} %/mK    S_A^T = {rep.S_A_T:.2f} %")
print(f"step-halving disagreement {rep.richardson_error:.1e}")
