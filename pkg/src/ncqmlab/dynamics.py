"""Classical dynamics: fixed-step RK4 integration of xi' = Omega(xi) grad H,
the deformed equation-of-motion residual, minimally coupled trajectories in
the two standard gauges, and sub-grid frequency extraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import least_squares

from .errors import ArityMismatch, InsufficientData, StepTooLarge
from .params import NCParams
from .polysymbol import PolySymbol, x1, x2
from .structures import PoissonStructure, StructureKind, symplectic_matrix


class Gauge(str, Enum):
    SYMMETRIC = "symmetric"
    LANDAU = "landau"


@dataclass(frozen=True)
class Trajectory:
    """A fixed-step phase-space trajectory xi(t) = (x1, x2, p1, p2).

    ``velocities`` are the exact flow velocities (the first two components
    of Omega grad H evaluated along the trajectory), not finite differences.
    """

    times: np.ndarray          # (n,)
    states: np.ndarray         # (n, 4)
    velocities: np.ndarray     # (n, 2)
    h: float
    energy: np.ndarray         # (n,) H along the trajectory
    F12: float | None = None   # effective field strength, when applicable
    omega: float | None = None  # |F12|/m, when applicable

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states must have equal length")
        if self.h <= 0:
            raise ValueError("step must be positive")
        for arr in (self.times, self.states, self.velocities, self.energy):
            arr.setflags(write=False)

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.energy - self.energy[0])))


def _gradient_fns(H: PolySymbol):
    if H.arity != 4:
        raise ArityMismatch("Hamiltonian must be an arity-4 symbol")
    grads = [H.diff(i) for i in range(4)]

    def grad(xi: np.ndarray) -> np.ndarray:
        return np.array([g.eval(xi).real for g in grads])

    return grad


def integrate(s: PoissonStructure, H: PolySymbol, xi0, T: float, h: float,
              max_energy_drift: float | None = 1e-6) -> Trajectory:
    """Explicit fixed-step RK4 on xi' = Omega(xi) grad H(xi).

    ``max_energy_drift`` guards the result: if |H(t) - H(0)| ever exceeds
    the bound (scaled by max(1, |H(0)|)), the step was too coarse for this
    problem and StepTooLarge is raised.  Pass None to disable.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    if T < h:
        raise ValueError("total time T must be at least one step")
    xi0 = np.asarray(xi0, dtype=float)
    if xi0.shape != (4,):
        raise ValueError("xi0 must have four components (x1, x2, p1, p2)")
    grad = _gradient_fns(H)

    if s.is_constant:
        omega_mat = s.constant_matrix()

        def field(xi: np.ndarray) -> np.ndarray:
            return omega_mat @ grad(xi)
    else:
        def field(xi: np.ndarray) -> np.ndarray:
            return s.matrix_at(xi) @ grad(xi)

    n_steps = int(round(T / h))
    states = np.empty((n_steps + 1, 4))
    states[0] = xi0
    xi = xi0
    for step in range(n_steps):
        k1 = field(xi)
        k2 = field(xi + 0.5 * h * k1)
        k3 = field(xi + 0.5 * h * k2)
        k4 = field(xi + h * k3)
        xi = xi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[step + 1] = xi

    times = h * np.arange(n_steps + 1)
    velocities = np.array([field(state)[:2] for state in states])
    energy = np.array([H.eval(state).real for state in states])
    if max_energy_drift is not None:
        drift = np.max(np.abs(energy - energy[0]))
        scale = max(1.0, abs(energy[0]))
        if drift > max_energy_drift * scale:
            raise StepTooLarge(
                f"energy drift {drift:.3e} exceeds bound "
                f"{max_energy_drift * scale:.3e}; reduce h"
            )
    return Trajectory(times, states, velocities, h, energy)


@dataclass(frozen=True)
class EOMResidual:
    """Deformed Newton-law residual series along a trajectory interior."""

    times: np.ndarray     # (n-2,)
    series: np.ndarray    # (n-2, 2)
    max_abs: float


def eom_residual(traj: Trajectory, params: NCParams,
                 V: PolySymbol) -> EOMResidual:
    """Finite-difference check of the deformed equation of motion

        m x''_i + kappa d_iV - B eps_ij x'_j - m theta eps_ij d/dt(d_jV) = 0

    with kappa = 1 - theta B, for trajectories of H = p^2/2m + V under the
    standard structure.  eps_12 = +1.
    """
    if V.arity == 2:
        V = V.embed(4, (0, 1))
    if V.arity != 4:
        raise ArityMismatch("potential must be arity 2 or 4")
    m, theta, B = params.m, params.theta, params.B
    kap = 1.0 - theta * B
    h = traj.h
    x = traj.states[:, :2]
    xdot = (x[2:] - x[:-2]) / (2.0 * h)
    xddot = (x[2:] - 2.0 * x[1:-1] + x[:-2]) / h**2

    gradV = np.array([
        [V.diff(i).eval(state).real for i in range(2)]
        for state in traj.states
    ])
    dt_gradV = (gradV[2:] - gradV[:-2]) / (2.0 * h)

    eps = np.array([[0.0, 1.0], [-1.0, 0.0]])
    series = (
        m * xddot
        + kap * gradV[1:-1]
        - B * xdot @ eps.T
        - m * theta * dt_gradV @ eps.T
    )
    return EOMResidual(traj.times[1:-1], series,
                       float(np.max(np.abs(series))))


def gauge_potential(gauge: Gauge, curlyB: float) -> tuple:
    """The two standard vector potentials with curl = curlyB."""
    if not isinstance(gauge, Gauge):
        gauge = Gauge(str(gauge).lower())
    if gauge is Gauge.SYMMETRIC:
        return (-0.5 * curlyB * x2(), 0.5 * curlyB * x1())
    return (PolySymbol.zero(2), curlyB * x1())


def effective_field_strength(gauge: Gauge, curlyB: float, theta: float,
                             coupling: float = 1.0) -> float:
    """The gauge-dependent classical field strength F12 of the deformed
    brackets: a(1 + theta a/4) in the symmetric gauge and a in the Landau
    gauge, with a = coupling * curlyB."""
    if not isinstance(gauge, Gauge):
        gauge = Gauge(str(gauge).lower())
    a = coupling * curlyB
    if gauge is Gauge.SYMMETRIC:
        return a * (1.0 + 0.25 * theta * a)
    return a


def minimal_coupling_trajectory(params: NCParams, gauge: Gauge,
                                curlyB: float, xi0, T: float,
                                h: float) -> Trajectory:
    """Integrate H = (p - (e/c) A(x))^2 / 2m under the standard structure
    with B = 0 and the given noncommutativity theta.

    The velocity components oscillate at omega = |F12|/m where F12 depends
    on the gauge choice; the trajectory record carries both.
    """
    if params.B != 0.0:
        raise ValueError(
            "minimal coupling uses the B = 0 structure; the field enters "
            "through the vector potential"
        )
    coupling = params.e / params.c
    A1, A2 = (a.embed(4, (0, 1)) for a in gauge_potential(gauge, curlyB))
    from .polysymbol import p1, p2
    pi1 = p1() - coupling * A1
    pi2 = p2() - coupling * A2
    H = (0.5 / params.m) * (pi1 * pi1 + pi2 * pi2)
    s = symplectic_matrix(params, StructureKind.STANDARD)
    traj = integrate(s, H, xi0, T, h)
    F12 = effective_field_strength(gauge, curlyB, params.theta, coupling)
    return Trajectory(traj.times, traj.states, traj.velocities, traj.h,
                      traj.energy, F12=F12, omega=abs(F12) / params.m)


@dataclass(frozen=True)
class FrequencyFit:
    """Least-squares sinusoid fit y ~ a cos(wt) + b sin(wt) + c."""

    omega: float
    amplitude: float
    offset: float
    residual_rms: float
    n_crossings: int


def fit_sinusoid(times: np.ndarray, values: np.ndarray) -> FrequencyFit:
    """Fit a single sinusoid, seeding the frequency from zero crossings of
    the centered signal (two crossings per period)."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    centered = values - np.mean(values)
    amp0 = float(np.max(np.abs(centered)))
    span = np.max(values) - np.min(values)
    if span <= 1e-12 * (1.0 + np.max(np.abs(values))):
        raise InsufficientData("signal is constant; no oscillation to fit")
    signs = np.sign(centered)
    signs[signs == 0] = 1.0
    crossing_idx = np.nonzero(np.diff(signs) != 0)[0]
    if len(crossing_idx) < 10:
        raise InsufficientData(
            f"only {len(crossing_idx) / 2:.1f} oscillation periods visible; "
            "at least 5 required"
        )
    t_first = times[crossing_idx[0]]
    t_last = times[crossing_idx[-1]]
    omega0 = np.pi * (len(crossing_idx) - 1) / (t_last - t_first)

    def model(q, t):
        a, b, c, w = q
        return a * np.cos(w * t) + b * np.sin(w * t) + c

    def resid(q):
        return model(q, times) - values

    q0 = np.array([centered[0], 0.0, np.mean(values), omega0])
    sol = least_squares(resid, q0, method="lm", xtol=1e-14, ftol=1e-14)
    a, b, c, w = sol.x
    rms = float(np.sqrt(np.mean(sol.fun ** 2)))
    if not np.isfinite(w) or abs(w) <= 0 or rms > 0.2 * max(amp0, 1e-12):
        raise InsufficientData("sinusoid fit failed to converge on the signal")
    return FrequencyFit(abs(float(w)), float(np.hypot(a, b)), float(c),
                        rms, len(crossing_idx))


def dominant_frequency(traj: Trajectory) -> float:
    """The dominant angular frequency of v1(t) by least-squares sinusoid fit."""
    return fit_sinusoid(traj.times, traj.velocities[:, 0]).omega
