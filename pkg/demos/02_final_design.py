"""
The 5e4 um^2 / 60 nH design point
=================================

Analyze one circuit end to end: level structure, anharmonicity, the
nonlinear interaction time, the zero-point fluctuation scale and the
feasibility checks.
"""

from qcapqubit import analyze, final_design

circuit = final_design()
print(f"inductance             {circuit.inductance * 1e9:.1f} nH")
print(f"zero-bias capacitance  {circuit.linearized_capacitance * 1e15:.3f} fF")
print(f"linearized frequency   {circuit.linear_frequency / 1e9:.4f} GHz")

sol = analyze(circuit)
print(f"qubit frequency f01    {sol.f_actual / 1e9:.4f} GHz")
print(f"anharmonicity          {sol.anharmonicity:.3f} %")
print(f"interaction time tau   {sol.tau * 1e12:.3f} ps")
print(f"zero-point voltage     {sol.v_zp * 1e6:.3f} uV")
print(f"zero-point electrons   {sol.n_zp:.3f}")
print(f"solver converged       {sol.spectrum.converged}, refinement {sol.spectrum.refinement_error:.1e}")
for msg in sol.feasible.messages:
    print("check:", msg)

# freezing the capacitor at its zero-bias value removes all nonlinearity
stub = analyze(circuit.linear_stub())
print(f"linear stub: f01 = {stub.f_actual / 1e9:.4f} GHz, A = {stub.anharmonicity:.1e} %")

# a quarter-quantum convention gives a smaller zero-point scale
quarter = analyze(circuit, zero_point_convention="quarter_quantum")
print(f"quarter-quantum V_zp   {quarter.v_zp * 1e6:.3f} uV")
