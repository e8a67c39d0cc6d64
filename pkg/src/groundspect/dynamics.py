"""Closed-loop consensus simulation with constant leader inputs.

The state equation is xdot = -L11 x + f where L11 is the grounded Laplacian
and f injects each leader's constant input into its own row. The same matrix
acts on every spatial coordinate, so a d-dimensional run is d independent
scalar systems sharing one decomposition.

Velocities are always evaluated from the right-hand side, never finite
differenced. The exact integrator writes them in modal form
-sum_k lambda_k exp(-lambda_k t) q_k <q_k, x0 - x*>, which is the same
expression without the catastrophic cancellation that direct evaluation
suffers once the transient has decayed ~14 orders of magnitude.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.linalg

from .errors import (
    NonFiniteStateError,
    NonGenericInitialConditionWarning,
    SingularSystemError,
    TimeOutOfRangeError,
    UnstableStepError,
)
from .graphs import Graph, Partition, grounded_laplacian

# Classical RK4 stability limit on the real axis: dt * lambda < 2.785.
RK4_STABILITY = 2.785
# Fiedler-mode excitation below this relative size in every dimension makes
# tempo estimation ill-posed.
_EXCITATION_TOL = 1e-8

INTEGRATORS = ("rk4", "exact")


@dataclass(frozen=True)
class ExternalInput:
    """Constant d-dimensional input vector per leader, none for followers."""

    dimension: int
    values: Mapping[int, tuple[float, ...]]

    def as_matrix(self, p: Partition) -> np.ndarray:
        """Stack input vectors in sorted-leader order; validates coverage."""
        extra = set(self.values) - set(p.leaders)
        missing = set(p.leaders) - set(self.values)
        if extra or missing:
            raise ValueError(
                f"inputs must cover exactly the leaders; extra={sorted(extra)} "
                f"missing={sorted(missing)}"
            )
        out = np.zeros((len(p.leaders), self.dimension))
        for k, leader in enumerate(p.leaders):
            vec = np.asarray(self.values[leader], dtype=float)
            if vec.shape != (self.dimension,):
                raise ValueError(
                    f"input for leader {leader} has shape {vec.shape}, "
                    f"expected ({self.dimension},)"
                )
            out[k] = vec
        return out

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "u": {str(k + 1): list(v) for k, v in sorted(self.values.items())},
        }


@dataclass(frozen=True)
class SimConfig:
    dimension: int = 1
    dt: float = 0.01
    t_final: float = 10.0
    record_every: int = 1
    integrator: str = "exact"

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.t_final < self.dt:
            raise ValueError("t_final must be >= dt")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        if self.integrator not in INTEGRATORS:
            raise ValueError(f"integrator must be one of {INTEGRATORS}")

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "dt": self.dt,
            "t_final": self.t_final,
            "record_every": self.record_every,
            "integrator": self.integrator,
        }


@dataclass(frozen=True)
class Trajectory:
    """Recorded states and right-hand-side velocities, each (T, n, d).

    eigenvalues is filled by both integrators; modal_coefficients
    (<q_k, x0 - x*> per dimension) only by the exact one, and powers the
    dominance diagnostic.
    """

    times: np.ndarray
    states: np.ndarray
    velocities: np.ndarray
    steady: np.ndarray
    eigenvalues: np.ndarray | None = None
    modal_coefficients: np.ndarray | None = None

    def nearest_index(self, t: float) -> int:
        tol = 1e-9 * max(1.0, abs(t))
        if t < self.times[0] - tol or t > self.times[-1] + tol:
            raise TimeOutOfRangeError(
                f"t={t:.6g} outside recorded horizon "
                f"[{self.times[0]:.6g}, {self.times[-1]:.6g}]"
            )
        return int(np.abs(self.times - t).argmin())

    def dominance_ratio(self, t: float) -> float | None:
        """Largest non-slowest modal velocity amplitude over the slowest's.

        Only available from the exact integrator. Small is good: the tempo
        ratios then reflect the slowest mode alone.
        """
        if self.modal_coefficients is None or self.eigenvalues is None:
            return None
        w = self.eigenvalues
        amp = w * np.exp(-w * t) * np.linalg.norm(self.modal_coefficients, axis=1)
        if amp[0] == 0.0:
            return float("inf")
        return float(amp[1:].max() / amp[0])


def steady_state(g: Graph, p: Partition, u: ExternalInput) -> np.ndarray:
    """Equilibrium x* solving L11 x* = f via a positive-definite solve."""
    l11 = grounded_laplacian(g, p).matrix
    forcing = _forcing(g, p, u)
    try:
        factor = scipy.linalg.cho_factor(l11)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            "grounded Laplacian is not positive definite (disconnected graph?)"
        ) from exc
    return scipy.linalg.cho_solve(factor, forcing)


def simulate(
    g: Graph,
    p: Partition,
    u: ExternalInput,
    x0: np.ndarray,
    cfg: SimConfig,
) -> Trajectory:
    """Integrate the closed loop from x0 and record every record_every-th step.

    The final step is always recorded. Emits NonGenericInitialConditionWarning
    when x0 - x* has (numerically) no component along the slowest mode in any
    dimension.
    """
    if u.dimension != cfg.dimension:
        raise ValueError(f"input dimension {u.dimension} != config dimension {cfg.dimension}")
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (g.n, cfg.dimension):
        raise ValueError(f"x0 has shape {x0.shape}, expected {(g.n, cfg.dimension)}")

    l11 = grounded_laplacian(g, p).matrix
    forcing = _forcing(g, p, u)
    xstar = steady_state(g, p, u)
    w, q = np.linalg.eigh(l11)
    _warn_if_nongeneric(q[:, 0], x0 - xstar)

    n_steps = max(1, int(round(cfg.t_final / cfg.dt)))
    record = list(range(0, n_steps, cfg.record_every))
    if record[-1] != n_steps:
        record.append(n_steps)
    times = np.array([k * cfg.dt for k in record])

    if cfg.integrator == "exact":
        y0 = q.T @ (x0 - xstar)  # (n, d) modal coefficients
        decay = np.exp(-np.outer(times, w))  # (T, n)
        states = xstar + np.einsum("ik,tk,kd->tid", q, decay, y0)
        velocities = -np.einsum("ik,k,tk,kd->tid", q, w, decay, y0)
        traj = Trajectory(
            times=times,
            states=states,
            velocities=velocities,
            steady=xstar,
            eigenvalues=w,
            modal_coefficients=y0,
        )
    else:
        limit = RK4_STABILITY / w[-1]
        if cfg.dt >= limit:
            raise UnstableStepError(
                f"rk4 dt={cfg.dt:.6g} >= stability limit {limit:.6g} "
                f"(lambda_max={w[-1]:.6g})"
            )
        rhs = lambda x: forcing - l11 @ x
        states = np.empty((len(record), g.n, cfg.dimension))
        record_set = {k: idx for idx, k in enumerate(record)}
        x = x0.copy()
        if 0 in record_set:
            states[record_set[0]] = x
        for k in range(1, n_steps + 1):
            k1 = rhs(x)
            k2 = rhs(x + 0.5 * cfg.dt * k1)
            k3 = rhs(x + 0.5 * cfg.dt * k2)
            k4 = rhs(x + cfg.dt * k3)
            x = x + (cfg.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if k in record_set:
                if not np.isfinite(x).all():
                    raise NonFiniteStateError(f"non-finite state at step {k}")
                states[record_set[k]] = x
        velocities = forcing - np.einsum("ij,tjd->tid", l11, states)
        traj = Trajectory(
            times=times,
            states=states,
            velocities=velocities,
            steady=xstar,
            eigenvalues=w,
        )
    if not np.isfinite(traj.states).all():
        raise NonFiniteStateError("non-finite state in trajectory")
    return traj


def measure_velocities(traj: Trajectory, t: float) -> np.ndarray:
    """Velocities at the recorded time nearest to t."""
    return traj.velocities[traj.nearest_index(t)].copy()


def choose_measurement_time(
    spectrum: np.ndarray,
    target_dominance: float = 1e-6,
    max_decay: float = 30.0,
) -> tuple[float, float]:
    """Pick a measurement time for steady-state-regime velocities.

    Aims for exp(-(lambda_2 - lambda_F) t) <= target_dominance while keeping
    lambda_F * t <= max_decay so velocities do not underflow. When both
    cannot hold (tiny spectral gap) the underflow cap wins and the degraded
    predicted dominance is returned alongside the time.
    """
    w = np.asarray(spectrum, dtype=float)
    lam_f = w[0]
    gap = w[1] - w[0]
    t_cap = max_decay / lam_f
    if gap <= 0.0:
        return t_cap, 1.0
    # nudge past the target so rounding cannot leave the dominance an ulp high
    t_target = np.log(1.0 / target_dominance) / gap * (1.0 + 1e-9)
    t = min(t_target, t_cap)
    return float(t), float(np.exp(-gap * t))


def _forcing(g: Graph, p: Partition, u: ExternalInput) -> np.ndarray:
    """-L12 y as an (n, d) array: +u_k in the k-th leader's row."""
    umat = u.as_matrix(p)
    forcing = np.zeros((g.n, u.dimension))
    for k, leader in enumerate(p.leaders):
        forcing[leader] = umat[k]
    return forcing


def _warn_if_nongeneric(v_slow: np.ndarray, offset: np.ndarray) -> None:
    norms = np.linalg.norm(offset, axis=0)
    live = norms > 0.0
    if not live.any():
        return  # started at the equilibrium; nothing to warn about
    ratios = np.abs(v_slow @ offset[:, live]) / norms[live]
    if (ratios < _EXCITATION_TOL).all():
        warnings.warn(
            "initial condition has no slowest-mode component in any dimension",
            NonGenericInitialConditionWarning,
            stacklevel=3,
        )
