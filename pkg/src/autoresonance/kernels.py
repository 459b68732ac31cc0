"""Compiled fast path for long oscillatory integrations.

Identical Dormand-Prince 5(4) scheme and PI controller as
:mod:`autoresonance.integrator`, specialized via numba for the handful of
right-hand sides that dominate runtime (capture runs resolve millions of
steps of the 4*sqrt(3)*t phase rotation).  The generic integrator remains the
reference; a test pins agreement between the two.

State layout is four reals per system: (Re u, Im u, Re v, Im v) for the
complex pairs, or (x, x', y, y') for the physical oscillators.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .integrator import (
    BLOW_UP_DETECTED,
    BLOW_UP_LIMIT,
    COMPLETED,
    STEP_BUDGET_EXHAUSTED,
    IntegratorConfig,
    StepStats,
    Trajectory,
)
from .model import PhysicalParams

__all__ = [
    "run_primary",
    "run_rotating",
    "run_physical",
    "run_envelope_leading",
    "run_bounded_perturbation",
]

RHS_PRIMARY = 0
RHS_ROTATING = 1
RHS_PHYSICAL = 2
RHS_ENVELOPE = 3
RHS_PERTURBATION = 4

_STATUS = {0: COMPLETED, 1: STEP_BUDGET_EXHAUSTED, 2: BLOW_UP_DETECTED}


@njit(cache=True, nogil=True)
def _series_eval(t, kmin, coef):
    """sum_k coef[k - kmin] * t**(-k) for k = kmin .. kmin+len-1."""
    x = 1.0 / t
    pw = t ** (-kmin)
    acc = 0.0 + 0.0j
    for j in range(coef.shape[0]):
        acc += coef[j] * pw
        pw *= x
    return acc


@njit(cache=True, nogil=True)
def _eval_rhs(code, t, y, pars, acoef, bcoef, out):
    if code == 0:  # primary: A' = -i(2tA + conj(A)B/2 + f), B' = -i(4tB + A^2/4)
        f = pars[0]
        Ar, Ai, Br, Bi = y[0], y[1], y[2], y[3]
        ur = 2.0 * t * Ar + 0.5 * (Ar * Br + Ai * Bi) + f
        ui = 2.0 * t * Ai + 0.5 * (Ar * Bi - Ai * Br)
        vr = 4.0 * t * Br + 0.25 * (Ar * Ar - Ai * Ai)
        vi = 4.0 * t * Bi + 0.5 * Ar * Ai
        out[0] = ui
        out[1] = -ur
        out[2] = vi
        out[3] = -vr
    elif code == 1:  # rotating: ia' = conj(a)b/2 + f e^{it^2}, ib' = a^2/4
        f = pars[0]
        ar, ai, br, bi = y[0], y[1], y[2], y[3]
        ph = t * t
        ur = 0.5 * (ar * br + ai * bi) + f * math.cos(ph)
        ui = 0.5 * (ar * bi - ai * br) + f * math.sin(ph)
        vr = 0.25 * (ar * ar - ai * ai)
        vi = 0.5 * ar * ai
        out[0] = ui
        out[1] = -ur
        out[2] = vi
        out[3] = -vr
    elif code == 2:  # physical oscillator pair
        omega, alpha1, alpha2, gamma, alpha, eps = (
            pars[0],
            pars[1],
            pars[2],
            pars[3],
            pars[4],
            pars[5],
        )
        x, xd, yv, yd = y[0], y[1], y[2], y[3]
        phi = (omega + eps * alpha * (eps * t)) * t
        w2 = omega * omega
        out[0] = xd
        out[1] = -w2 * x + eps * (alpha1 * x * yv + 2.0 * gamma * math.cos(phi))
        out[2] = yd
        out[3] = -4.0 * w2 * yv + eps * alpha2 * x * x
    elif code == 3:  # leading envelope: i a0' = conj(a0)b0/2, i b0' = a0^2/4
        ar, ai, br, bi = y[0], y[1], y[2], y[3]
        ur = 0.5 * (ar * br + ai * bi)
        ui = 0.5 * (ar * bi - ai * br)
        vr = 0.25 * (ar * ar - ai * ai)
        vi = 0.5 * ar * ai
        out[0] = ui
        out[1] = -ur
        out[2] = vi
        out[3] = -vr
    else:  # perturbation system around the bounded solution
        f = pars[0]
        kmin = int(pars[1])
        ar, ai, br, bi = y[0], y[1], y[2], y[3]
        a = complex(ar, ai)
        b = complex(br, bi)
        A2 = _series_eval(t, kmin, acoef)
        B2 = _series_eval(t, kmin, bcoef)
        ph = t * t
        em = complex(math.cos(ph), -math.sin(ph))  # e^{-it^2}
        ep = em.conjugate()
        da = -1j * (
            0.5 * a.conjugate() * b
            + 0.5 * (A2.conjugate() * b * em + a.conjugate() * B2 * ep * ep)
        )
        db = -1j * (0.25 * a * a + 0.5 * A2 * a * ep)
        out[0] = da.real
        out[1] = da.imag
        out[2] = db.real
        out[3] = db.imag


@njit(cache=True, nogil=True)
def _dp45(code, pars, acoef, bcoef, t0, y0, t1, rtol, atol, max_step, h0, max_steps, grid):
    n = y0.shape[0]
    ngrid = grid.shape[0]
    out = np.empty((ngrid, n))
    direction = 1.0 if t1 > t0 else -1.0

    y = y0.copy()
    t = t0
    gi = 0
    while gi < ngrid and grid[gi] == t0:
        for j in range(n):
            out[gi, j] = y[j]
        gi += 1

    k = np.empty((7, n))
    _eval_rhs(code, t, y, pars, acoef, bcoef, k[0])
    yi = np.empty(n)
    ynew = np.empty(n)

    h = h0
    if h > max_step:
        h = max_step
    accepted = 0
    rejected = 0
    err_prev = 1.0
    status = 0

    while direction * (t1 - t) > 0:
        if accepted + rejected >= max_steps:
            status = 1
            break
        if h > max_step:
            h = max_step
        target = t1
        if gi < ngrid:
            target = grid[gi]
        if direction * (t + direction * h - target) > 0:
            h = abs(target - t)
        hk = direction * h
        ts = t + hk

        for j in range(n):
            yi[j] = y[j] + hk * 0.2 * k[0, j]
        _eval_rhs(code, t + 0.2 * hk, yi, pars, acoef, bcoef, k[1])
        for j in range(n):
            yi[j] = y[j] + hk * (0.075 * k[0, j] + 0.225 * k[1, j])
        _eval_rhs(code, t + 0.3 * hk, yi, pars, acoef, bcoef, k[2])
        for j in range(n):
            yi[j] = y[j] + hk * (
                (44.0 / 45.0) * k[0, j] - (56.0 / 15.0) * k[1, j] + (32.0 / 9.0) * k[2, j]
            )
        _eval_rhs(code, t + 0.8 * hk, yi, pars, acoef, bcoef, k[3])
        for j in range(n):
            yi[j] = y[j] + hk * (
                (19372.0 / 6561.0) * k[0, j]
                - (25360.0 / 2187.0) * k[1, j]
                + (64448.0 / 6561.0) * k[2, j]
                - (212.0 / 729.0) * k[3, j]
            )
        _eval_rhs(code, t + (8.0 / 9.0) * hk, yi, pars, acoef, bcoef, k[4])
        for j in range(n):
            yi[j] = y[j] + hk * (
                (9017.0 / 3168.0) * k[0, j]
                - (355.0 / 33.0) * k[1, j]
                + (46732.0 / 5247.0) * k[2, j]
                + (49.0 / 176.0) * k[3, j]
                - (5103.0 / 18656.0) * k[4, j]
            )
        _eval_rhs(code, ts, yi, pars, acoef, bcoef, k[5])
        for j in range(n):
            ynew[j] = y[j] + hk * (
                (35.0 / 384.0) * k[0, j]
                + (500.0 / 1113.0) * k[2, j]
                + (125.0 / 192.0) * k[3, j]
                - (2187.0 / 6784.0) * k[4, j]
                + (11.0 / 84.0) * k[5, j]
            )
        _eval_rhs(code, ts, ynew, pars, acoef, bcoef, k[6])

        errsq = 0.0
        for j in range(n):
            e = hk * (
                (35.0 / 384.0 - 5179.0 / 57600.0) * k[0, j]
                + (500.0 / 1113.0 - 7571.0 / 16695.0) * k[2, j]
                + (125.0 / 192.0 - 393.0 / 640.0) * k[3, j]
                + (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k[4, j]
                + (11.0 / 84.0 - 187.0 / 2100.0) * k[5, j]
                - (1.0 / 40.0) * k[6, j]
            )
            ya = abs(y[j])
            yb = abs(ynew[j])
            sc = atol + rtol * (ya if ya > yb else yb)
            errsq += (e / sc) ** 2
        err = math.sqrt(errsq / n)

        if err <= 1.0 or h <= 1e-14 * max(abs(t), 1.0):
            t = ts
            for j in range(n):
                y[j] = ynew[j]
                k[0, j] = k[6, j]
            accepted += 1
            bad = False
            for j in range(n):
                if not (abs(y[j]) < BLOW_UP_LIMIT) or not math.isfinite(y[j]):
                    bad = True
            if bad:
                status = 2
                break
            while gi < ngrid and direction * (t - grid[gi]) >= 0:
                for j in range(n):
                    out[gi, j] = y[j]
                gi += 1
            fac = 0.9 * max(err, 1e-300) ** (-0.14) * err_prev**0.08
            err_prev = max(err, 1e-300)
        else:
            rejected += 1
            fac = 0.9 * err ** (-0.14)
            if fac > 1.0:
                fac = 1.0
        if fac > 5.0:
            fac = 5.0
        elif fac < 0.2:
            fac = 0.2
        h *= fac

    return out, gi, status, accepted, rejected, t, y


_EMPTY_C = np.empty(0, dtype=np.complex128)


def _run(code, pars, acoef, bcoef, t0, y0, t1, cfg, grid, complex_out=True):
    if cfg is None:
        cfg = IntegratorConfig()
    grid = np.asarray(grid, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    if not np.all(np.isfinite(y0)):
        raise ValueError("initial state contains non-finite components")
    h0 = cfg.initial_step if cfg.initial_step is not None else 1e-6
    out, filled, status, acc, rej, t_end, y_end = _dp45(
        code,
        np.asarray(pars, dtype=float),
        acoef,
        bcoef,
        float(t0),
        y0,
        float(t1),
        cfg.rtol,
        cfg.atol,
        cfg.max_step,
        float(h0),
        cfg.max_steps,
        grid,
    )
    times = grid[:filled]
    states = out[:filled]
    if status != 0:
        # append the point where integration stopped
        times = np.append(times, t_end)
        states = np.vstack([states, y_end])
    if complex_out:
        states = np.ascontiguousarray(states).view(complex)
    return Trajectory(
        times=times, states=states, status=_STATUS[status], stats=StepStats(acc, rej)
    )


def run_primary(f, t0, A0, B0, t1, cfg=None, sample_grid=None):
    """Fast integration of the primary resonance system; complex states (A, B)."""
    y0 = [A0.real, A0.imag, B0.real, B0.imag]
    return _run(RHS_PRIMARY, [f], _EMPTY_C, _EMPTY_C, t0, y0, t1, cfg, sample_grid)


def run_rotating(f, t0, a0, b0, t1, cfg=None, sample_grid=None):
    """Fast integration of the rotating-frame system; complex states (a, b)."""
    y0 = [a0.real, a0.imag, b0.real, b0.imag]
    return _run(RHS_ROTATING, [f], _EMPTY_C, _EMPTY_C, t0, y0, t1, cfg, sample_grid)


def run_physical(p: PhysicalParams, t0, state0, t1, cfg=None, sample_grid=None):
    """Fast integration of the physical pair; real states (x, x', y, y')."""
    pars = [p.omega, p.alpha1, p.alpha2, p.gamma, p.alpha, p.epsilon]
    return _run(
        RHS_PHYSICAL, pars, _EMPTY_C, _EMPTY_C, t0, state0, t1, cfg, sample_grid,
        complex_out=False,
    )


def run_envelope_leading(t0, alpha0, beta0, t1, cfg=None, sample_grid=None):
    """Fast integration of the leading envelope system; complex states."""
    y0 = [alpha0.real, alpha0.imag, beta0.real, beta0.imag]
    return _run(RHS_ENVELOPE, [], _EMPTY_C, _EMPTY_C, t0, y0, t1, cfg, sample_grid)


def run_bounded_perturbation(f, kmin, acoef, bcoef, t0, alpha0, beta0, t1, cfg=None,
                             sample_grid=None):
    """Fast integration of the perturbation system around the bounded solution.

    ``acoef``/``bcoef`` are the bounded-series coefficients for k = kmin..K;
    the reference (A2, B2) is evaluated from them at every stage.
    """
    y0 = [alpha0.real, alpha0.imag, beta0.real, beta0.imag]
    return _run(
        RHS_PERTURBATION,
        [f, float(kmin)],
        np.ascontiguousarray(acoef, dtype=complex),
        np.ascontiguousarray(bcoef, dtype=complex),
        t0,
        y0,
        t1,
        cfg,
        sample_grid,
    )
