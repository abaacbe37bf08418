"""
Kerr oscillator and the interaction time
========================================

The quartic oscillator ``hbar w (n + 1/2) + (hbar w / 4)(alpha - w tau) x^4``
softens when the capacitor term wins and hardens when a Josephson-like
term wins. When the two balance the ladder becomes exactly harmonic.
"""

import math

import numpy as np

from qcapqubit import KerrParams, analyze, extract_tau, final_design, solve_fock_kerr

omega = 2 * math.pi * 5e9
for tau in (0.0, 1e-13, 3e-13):
    spec = solve_fock_kerr(KerrParams(omega, tau=tau), 3)
    print(f"tau = {tau * 1e12:5.2f} ps  omega tau = {omega * tau:.2e}  A = {100 * spec.anharmonicity:6.3f} %")

# balancing alpha against omega tau cancels the nonlinearity
tau = 2e-13
balanced = solve_fock_kerr(KerrParams(omega, alpha=omega * tau, tau=tau), 4)
print("balanced spacings / hbar w:", np.round(np.diff(balanced.levels) / (balanced.levels[1] - balanced.levels[0]), 12))

# tau is read back from the anharmonicity; check it against a known value
spec = solve_fock_kerr(KerrParams(omega, tau=tau), 3)
print(f"recovered tau: {extract_tau(spec, omega) * 1e12:.5f} ps (true 0.2 ps)")

# and for the graphene circuit, solved on the charge grid
sol = analyze(final_design())
print(f"final design tau = {sol.tau * 1e12:.3f} ps")
