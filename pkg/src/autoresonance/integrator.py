"""Adaptive explicit integration of real and complex ODE systems.

A Dormand-Prince 5(4) embedded pair with a PI step controller drives every
integration in the package.  Complex systems are integrated as interleaved
real/imaginary components so one real-vector core serves all modules.
Requested output times are honored exactly by clipping steps onto them
(no interpolation error on the sample grid).

Long oscillatory runs (the capture experiments) go through a numba-compiled
implementation of the same scheme in :mod:`autoresonance.kernels`; this
module is the reference implementation and the public contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "IntegratorConfig",
    "StepStats",
    "Trajectory",
    "COMPLETED",
    "STEP_BUDGET_EXHAUSTED",
    "BLOW_UP_DETECTED",
    "BLOW_UP_LIMIT",
    "integrate",
    "integrate_complex",
]

# Trajectory status values
COMPLETED = "completed"
STEP_BUDGET_EXHAUSTED = "step-budget-exhausted"
BLOW_UP_DETECTED = "blow-up-detected"

#: any state component beyond this magnitude flags numerical divergence;
#: true solutions of the systems here grow at most linearly in t.
BLOW_UP_LIMIT = 1.0e12

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_BHAT = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b - bh for b, bh in zip(_B, _BHAT))

_A_NP = [np.asarray(row) for row in _A]
_B_NP = np.asarray(_B)
_E_NP = np.asarray(_E)

_ORDER = 5
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
# PI controller exponents (error^-kI * prev_error^kP)
_KI = 0.7 / _ORDER
_KP = 0.4 / _ORDER


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and budgets for one integration."""

    rtol: float = 1e-9
    atol: float = 1e-11
    max_step: float = math.inf
    initial_step: float | None = None
    max_steps: int = 20_000_000

    def __post_init__(self) -> None:
        if not 0.0 < self.rtol < 1.0:
            raise ValueError(f"rtol must lie in (0, 1), got {self.rtol}")
        if not self.atol > 0.0:
            raise ValueError(f"atol must be positive, got {self.atol}")
        if not self.max_steps > 0:
            raise ValueError(f"max_steps must be positive, got {self.max_steps}")


@dataclass(frozen=True)
class StepStats:
    accepted: int
    rejected: int


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered samples of an integration.

    ``states`` has one row per sample time.  For complex systems the rows are
    complex; for the real core they are float.  All states are finite except
    possibly the final row of a blow-up-flagged trajectory.
    """

    times: np.ndarray
    states: np.ndarray
    status: str
    stats: StepStats = field(default=StepStats(0, 0))

    @property
    def completed(self) -> bool:
        return self.status == COMPLETED

    def __len__(self) -> int:
        return len(self.times)


def _initial_step(rhs, t0, y0, f0, direction, rtol, atol, max_step):
    """Standard starting-step heuristic (Hairer, Norsett, Wanner I.4)."""
    scale = atol + rtol * np.abs(y0)
    d0 = float(np.sqrt(np.mean((y0 / scale) ** 2)))
    d1 = float(np.sqrt(np.mean((f0 / scale) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * direction * f0
    f1 = np.asarray(rhs(t0 + h0 * direction, y1), dtype=float)
    d2 = float(np.sqrt(np.mean(((f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / _ORDER)
    return min(100 * h0, h1, max_step)


def integrate(
    rhs: Callable[[float, np.ndarray], Sequence[float]],
    t0: float,
    state0: Sequence[float],
    t1: float,
    cfg: IntegratorConfig | None = None,
    sample_grid: Sequence[float] | None = None,
) -> Trajectory:
    """Integrate ``state' = rhs(t, state)`` from t0 to t1.

    Parameters
    ----------
    rhs : callable
        Vector field returning d(state)/dt as a sequence of floats.
    t0, t1 : float
        Integration span; t1 < t0 integrates backward.
    state0 : sequence of float
        Finite initial state.
    cfg : IntegratorConfig, optional
        Tolerances and budgets; defaults are rtol=1e-9, atol=1e-11.
    sample_grid : sequence of float, optional
        Output times (monotone from t0 toward t1).  When given, steps are
        clipped to land on each grid time exactly and only those samples are
        recorded; otherwise every accepted step is recorded.

    Returns
    -------
    Trajectory
        Samples plus a status: ``completed``, ``step-budget-exhausted`` or
        ``blow-up-detected`` (the last sample of a blow-up-flagged run is the
        offending state).
    """
    if cfg is None:
        cfg = IntegratorConfig()
    if t1 == t0:
        raise ValueError("t1 must differ from t0")
    y = np.asarray(state0, dtype=float).copy()
    if not np.all(np.isfinite(y)):
        raise ValueError("initial state contains non-finite components")

    direction = 1.0 if t1 > t0 else -1.0
    span = abs(t1 - t0)

    grid = None
    grid_idx = 0
    if sample_grid is not None:
        grid = np.asarray(sample_grid, dtype=float)
        if grid.size and (
            np.any(direction * np.diff(grid) <= 0)
            or direction * (grid[0] - t0) < 0
            or direction * (t1 - grid[-1]) < 0
        ):
            raise ValueError("sample_grid must be monotone within [t0, t1]")

    times = [t0]
    states = [y.copy()]
    if grid is not None:
        times, states = [], []
        while grid_idx < len(grid) and grid[grid_idx] == t0:
            times.append(t0)
            states.append(y.copy())
            grid_idx += 1

    t = t0
    f0 = np.asarray(rhs(t, y), dtype=float)
    h = (
        cfg.initial_step
        if cfg.initial_step is not None
        else _initial_step(rhs, t0, y, f0, direction, cfg.rtol, cfg.atol, min(cfg.max_step, span))
    )
    h = min(h, cfg.max_step, span)

    k = np.empty((7, y.size))
    k[0] = f0
    accepted = rejected = 0
    err_prev = 1.0
    status = COMPLETED

    while direction * (t1 - t) > 0:
        if accepted + rejected >= cfg.max_steps:
            status = STEP_BUDGET_EXHAUSTED
            break
        h = min(h, cfg.max_step)
        # clip onto the end point and the next requested sample time
        target = t1
        if grid is not None and grid_idx < len(grid):
            target = grid[grid_idx]
        if direction * (t + direction * h - target) > 0:
            h = abs(target - t)

        ts = t + direction * h
        hk = direction * h
        for i in range(1, 6):
            yi = y + hk * (_A_NP[i] @ k[:i])
            k[i] = rhs(t + _C[i] * hk, yi)
        # the 6th-stage state is the 5th-order solution (FSAL pair)
        y_new = y + hk * (_A_NP[6] @ k[:6])
        k[6] = rhs(ts, y_new)
        err_vec = hk * (_E_NP @ k)
        scale = cfg.atol + cfg.rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))

        if err <= 1.0 or h <= 1e-14 * max(abs(t), 1.0):
            t = ts
            y = y_new
            k[0] = k[6]
            accepted += 1
            if not np.all(np.abs(y) < BLOW_UP_LIMIT) or not np.all(np.isfinite(y)):
                times.append(t)
                states.append(y.copy())
                status = BLOW_UP_DETECTED
                break
            if grid is None:
                times.append(t)
                states.append(y.copy())
            else:
                while grid_idx < len(grid) and direction * (t - grid[grid_idx]) >= 0:
                    times.append(grid[grid_idx])
                    states.append(y.copy())
                    grid_idx += 1
            factor = _SAFETY * max(err, 1e-300) ** -_KI * err_prev**_KP
            err_prev = max(err, 1e-300)
        else:
            rejected += 1
            factor = min(1.0, _SAFETY * err**-_KI)
        h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))

    return Trajectory(
        times=np.asarray(times),
        states=np.asarray(states),
        status=status,
        stats=StepStats(accepted, rejected),
    )


def integrate_complex(
    rhs: Callable[[float, np.ndarray], Sequence[complex]],
    t0: float,
    state0: Sequence[complex],
    t1: float,
    cfg: IntegratorConfig | None = None,
    sample_grid: Sequence[float] | None = None,
) -> Trajectory:
    """Integrate a complex-valued system (interleaved real/imag components).

    ``rhs(t, z)`` receives and returns complex vectors; the returned
    Trajectory carries complex state rows.
    """
    z0 = np.asarray(state0, dtype=complex)

    def real_rhs(t: float, y: np.ndarray) -> np.ndarray:
        dz = np.asarray(rhs(t, y.view(complex)), dtype=complex)
        return dz.view(float)

    traj = integrate(real_rhs, t0, z0.view(float), t1, cfg, sample_grid)
    states = traj.states.view(complex) if traj.states.size else traj.states.astype(complex)
    return Trajectory(times=traj.times, states=states, status=traj.status, stats=traj.stats)
