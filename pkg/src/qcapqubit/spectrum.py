"""Eigenvalue engines for the anharmonic oscillator.

Two independent routes:

* :func:`solve_charge_basis` discretizes ``H = Phi^2/2L + U(Q)`` on a
  uniform charge grid, with ``Phi = -i hbar d/dQ``, and takes the lowest
  eigenvalues of the resulting symmetric tridiagonal matrix. The grid is
  refined by halving the spacing until the levels settle.
* :func:`solve_fock_kerr` diagonalizes the quartic oscillator
  ``hbar w (a^+ a + 1/2) + (hbar w / 4)(alpha - w tau)(a^+ + a)^4`` in a
  truncated number basis, without any rotating-wave reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigvalsh_tridiagonal

from .errors import NumericDomainError, SolverError, ValidationError
from .units import HBAR, PLANCK, Scaling

DEFAULT_POINTS = 2001
DOMAIN_FACTOR = 1.5
REFINE_TOL = 1e-6
MAX_DOUBLINGS = 4
FOCK_TOL = 1e-8
GUARD_LEVELS = 2


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid in scaled charge ``q = Q / charge_ref``."""

    n_points: int = DEFAULT_POINTS
    q_min: float = -10.0
    q_max: float = 10.0
    auto: bool = False

    def __post_init__(self):
        if self.n_points < 201 or self.n_points % 2 == 0:
            raise ValidationError(f"n_points must be odd and >= 201, got {self.n_points}")
        if not (self.q_min < 0 < self.q_max):
            raise ValidationError("grid must satisfy q_min < 0 < q_max")
        if self.auto and self.q_min != -self.q_max:
            raise ValidationError("automatic grids are symmetric")

    def refined(self) -> "GridSpec":
        return GridSpec(2 * self.n_points - 1, self.q_min, self.q_max, self.auto)


@dataclass(frozen=True)
class Spectrum:
    """Lowest eigenvalues of an oscillator, in joules."""

    levels: np.ndarray
    n_levels: int
    converged: bool
    refinement_error: float
    history: Tuple[float, ...] = field(default=(), compare=False)
    grid: Optional[GridSpec] = field(default=None, compare=False)

    def __post_init__(self):
        if np.any(np.diff(self.levels) <= 0):
            raise SolverError("eigenvalues are not strictly increasing")

    @property
    def transition_energies(self) -> np.ndarray:
        return np.diff(self.levels)

    @property
    def f01(self) -> float:
        """Qubit transition frequency ``(E1 - E0)/h`` [Hz]."""
        return float(self.levels[1] - self.levels[0]) / PLANCK

    @property
    def omega01(self) -> float:
        return float(self.levels[1] - self.levels[0]) / HBAR

    @property
    def anharmonicity(self) -> float:
        """Fractional anharmonicity ``(w01 - w12) / w01`` (positive when levels soften)."""
        if len(self.levels) < 3:
            raise ValidationError("anharmonicity needs at least three levels")
        d01, d12 = self.transition_energies[:2]
        return float((d01 - d12) / d01)


@dataclass(frozen=True)
class KerrParams:
    """Parameters of the quartic (Kerr-type) oscillator.

    ``omega`` is the bare angular frequency, ``alpha`` the dimensionless
    Josephson contribution and ``tau`` the nonlinear interaction time of the
    quantum capacitor.
    """

    omega: float
    alpha: float = 0.0
    tau: float = 0.0
    n_trunc: int = 40

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValidationError(f"omega must be > 0, got {self.omega!r}")
        if not (math.isfinite(self.alpha) and math.isfinite(self.tau)) or self.tau < 0:
            raise ValidationError("alpha must be finite and tau finite and >= 0")
        if self.n_trunc < 20:
            raise ValidationError(f"n_trunc must be >= 20, got {self.n_trunc}")

    @property
    def quartic_coefficient(self) -> float:
        """Coefficient of ``(a^+ + a)^4`` in units of ``hbar omega``."""
        return 0.25 * (self.alpha - self.omega * self.tau)


# -- finite-difference engine ----------------------------------------------


def _grid_eigenvalues(u: Callable, grid: GridSpec, n_levels: int, mass: float) -> np.ndarray:
    q = np.linspace(grid.q_min, grid.q_max, grid.n_points)[1:-1]
    h = q[1] - q[0]
    t = 1.0 / (2.0 * mass * h * h)
    diag = 2.0 * t + np.asarray(u(q), dtype=float)
    off = np.full(len(q) - 1, -t)
    try:
        w = eigvalsh_tridiagonal(diag, off, select="i", select_range=(0, n_levels - 1))
    except (LinAlgError, ValueError) as exc:
        raise SolverError(f"tridiagonal eigensolver failed: {exc}") from exc
    if len(w) < n_levels or not np.all(np.isfinite(w)):
        raise SolverError("tridiagonal eigensolver returned too few levels")
    return w


def solve_1d(
    u: Callable,
    grid: GridSpec,
    n_levels: int,
    mass: float = 0.5,
    tol: float = REFINE_TOL,
    max_doublings: int = MAX_DOUBLINGS,
):
    """Lowest levels of ``-(1/2m) d^2/dq^2 + u(q)`` with ``hbar = 1``.

    The spacing is halved until the largest relative level change drops
    below ``tol``. Returned levels are Richardson-extrapolated from the
    last two grids (the 3-point stencil error is ``O(h^2)``).

    Returns
    -------
    levels, converged, refinement_error, history, final_grid
    """
    if n_levels < 1:
        raise ValidationError("n_levels must be >= 1")
    coarse = _grid_eigenvalues(u, grid, n_levels, mass)
    history = []
    converged = False
    levels = coarse
    for _ in range(max_doublings):
        grid = grid.refined()
        fine = _grid_eigenvalues(u, grid, n_levels, mass)
        scale = np.maximum(np.abs(fine), np.abs(fine[-1] - fine[0]) if n_levels > 1 else 1.0)
        change = float(np.max(np.abs(fine - coarse) / scale))
        history.append(change)
        levels = fine + (fine - coarse) / 3.0
        coarse = fine
        if change <= tol:
            converged = True
            break
    return levels, converged, history[-1], tuple(history), grid


def auto_domain(
    potential: Callable,
    inductance: float,
    capacitance: float,
    n_levels: int,
    n_points: int = DEFAULT_POINTS,
) -> GridSpec:
    """Symmetric scaled grid spanning 1.5x the turning point of level ``n_levels + 2``.

    ``capacitance`` is the zero-bias linear capacitance; it fixes the
    scaling and the harmonic estimate of the target energy.
    """
    sc = Scaling.from_lc(inductance, capacitance)
    target = n_levels + 2.5  # (n_levels + 2.5) hbar w0, in scaled units

    def excess(q):
        return float(sc.scale_energy(potential(sc.unscale_charge(q)))) - target

    lo, hi = 0.0, 1.0
    for _ in range(200):
        if excess(hi) >= 0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise NumericDomainError("potential never reaches the turning-point energy")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * hi:
            break
    q_t = 0.5 * (lo + hi)
    if not math.isfinite(q_t) or q_t <= 0:
        raise NumericDomainError("turning-point bisection failed")
    qmax = DOMAIN_FACTOR * q_t
    return GridSpec(n_points=n_points, q_min=-qmax, q_max=qmax, auto=True)


def solve_charge_basis(
    potential: Callable,
    inductance: float,
    capacitance: float,
    n_levels: int = 3,
    grid: Optional[GridSpec] = None,
    tol: float = REFINE_TOL,
) -> Spectrum:
    """Energy levels of ``Phi^2/2L + U(Q)`` in the charge representation.

    Parameters
    ----------
    potential : callable
        ``U(Q)`` in joules, vectorized over charge in coulombs. Must be even
        and convex with its minimum at zero.
    inductance : float
        Shunt inductance [H].
    capacitance : float
        Zero-bias capacitance ``1/U''(0)`` [F]; used for scaling only.
    n_levels : int
        Number of levels to return (at most 10).
    grid : GridSpec, optional
        Scaled grid; when omitted, :func:`auto_domain` sizes it for
        ``n_levels + 2`` levels.
    """
    if not 1 <= n_levels <= 10:
        raise ValidationError("n_levels must be between 1 and 10")
    sc = Scaling.from_lc(inductance, capacitance)
    if grid is None:
        # two guard levels keep the Dirichlet walls out of the requested states
        grid = auto_domain(potential, inductance, capacitance, n_levels + GUARD_LEVELS)

    def u(q):
        return sc.scale_energy(potential(sc.unscale_charge(q)))

    # scaled Hamiltonian is -d^2/dq^2 + u(q), i.e. mass 1/2 with hbar = 1
    levels, converged, err, history, final = solve_1d(u, grid, n_levels, mass=0.5, tol=tol)
    if levels[0] <= 0:
        raise SolverError("ground level below the potential minimum")
    return Spectrum(
        levels=sc.unscale_energy(levels),
        n_levels=n_levels,
        converged=converged,
        refinement_error=err,
        history=history,
        grid=final,
    )


# -- number-basis engine ---------------------------------------------------


def quadrature_fourth_power(n: int) -> np.ndarray:
    """Exact matrix of ``(a^+ + a)^4`` restricted to the lowest ``n`` Fock states."""
    m = n + 4
    a = np.diag(np.sqrt(np.arange(1.0, m)), 1)
    x = a + a.T
    x2 = x @ x
    return (x2 @ x2)[:n, :n]


def _fock_levels(g: float, n: int, n_levels: int) -> np.ndarray:
    H = np.diag(np.arange(n) + 0.5) + g * quadrature_fourth_power(n)
    w, v = np.linalg.eigh(H)
    # with g < 0 the quartic is unbounded below and the truncated basis grows
    # spurious states at its edge; keep only states living in the lower half
    lower = np.sum(v[: n // 2] ** 2, axis=0)
    w = w[lower > 1.0 - 1e-8]
    if len(w) < n_levels:
        raise SolverError(
            f"only {len(w)} bound levels found with n_trunc={n}; increase n_trunc or reduce |alpha - omega tau|"
        )
    return w[:n_levels]


def solve_fock_kerr(params: KerrParams, n_levels: int = 3) -> Spectrum:
    """Lowest levels of the full quartic oscillator in a truncated Fock basis.

    Convergence is checked by repeating the diagonalization at twice the
    truncation; requested levels must agree to ``1e-8`` relative.
    """
    if n_levels + 10 > params.n_trunc:
        raise ValidationError("n_trunc must be at least n_levels + 10")
    g = params.quartic_coefficient
    small = _fock_levels(g, params.n_trunc, n_levels)
    big = _fock_levels(g, 2 * params.n_trunc, n_levels)
    change = float(np.max(np.abs(big - small) / np.abs(big)))
    if change > FOCK_TOL:
        raise SolverError(
            f"Fock truncation not converged (relative change {change:.2e}); increase n_trunc"
        )
    return Spectrum(
        levels=HBAR * params.omega * big,
        n_levels=n_levels,
        converged=True,
        refinement_error=change,
        history=(change,),
    )
