"""Dynamics in the neighborhood of the bounded solution.

In the rotating frame, perturbations of the bounded solution satisfy, at
leading order, the autonomous envelope system

    i alpha0' = conj(alpha0) beta0 / 2,   i beta0' = alpha0^2 / 4

with two conserved quantities

    E^2 = |alpha0|^2 + 2 |beta0|^2
    H   = conj(alpha0)^2 beta0 + alpha0^2 conj(beta0)      (real)

(-iH/4 generates the flow).  Writing alpha0 = E e^{i phi} cos(Psi),
beta0 = (E/sqrt(2)) e^{i psi} sin(Psi) and Phi = 2 phi - psi, the amplitude
angle separates: u = cos(2 Psi) obeys

    int du / sqrt(G - u^3 - u^2 + u) = -E t / 2,
    G = 1 - 4 H^2 / E^6,

so u oscillates between two adjacent roots of the cubic and the phase phi
drifts linearly:

    phi' = -H / (2 E^2 (1 + u)).

H = 0 (G = 1) is the elementary branch: the cubic degenerates to
(1-u)(1+u)^2 and sin(Psi(t)) = tanh(artanh(sin Psi_0) + E t/(2 sqrt 2)).
Admissible orbits require G in [-5/27, 1]; at G = -5/27 the turning points
merge at the elliptic fixed point u = 1/3.

Near the coordinate poles (sin Psi = 0 or cos Psi = 0) all propagation is
done in Cartesian variables; angles are only extracted away from poles.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .asymptotics import bounded_series
from .integrator import IntegratorConfig, Trajectory

__all__ = [
    "NoRealOrbitError",
    "AngleSingularityError",
    "EnvelopeInvariants",
    "AngularState",
    "BoundednessReport",
    "invariants_of",
    "to_angles",
    "state_from_invariants",
    "rhs_angles",
    "cubic_turning_points",
    "orbit_period",
    "psi_quadrature",
    "phase_drift",
    "drift_rate",
    "integrate_envelope",
    "correction_boundedness_probe",
]

#: orbit interval collapses below this width: treat as the fixed point u = 1/3
_DEGENERATE_WIDTH = 1e-9

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(80)


class NoRealOrbitError(ValueError):
    """The requested (G, u0) does not bound a real oscillation."""


class AngleSingularityError(ValueError):
    """Angular coordinates are singular here (sin Psi = 0 or E = 0)."""


@dataclass(frozen=True)
class AngularState:
    """Angles of the envelope state: phases phi, psi and amplitude angle PsiE."""

    phi: float
    psi: float
    PsiE: float


@dataclass(frozen=True)
class EnvelopeInvariants:
    """Conserved quantities and initial data of one leading-envelope orbit.

    G is determined by (E^2, H); the independent parameters are
    (E^2, H, u0, phi0).
    """

    E2: float
    H: float
    u0: float
    phi0: float = 0.0

    def __post_init__(self) -> None:
        if not self.E2 > 0:
            raise ValueError(f"E2 must be positive, got {self.E2}")
        if abs(self.u0) > 1 + 1e-12:
            raise ValueError(f"u0 = cos(2 Psi) must lie in [-1, 1], got {self.u0}")

    @property
    def E(self) -> float:
        return math.sqrt(self.E2)

    @property
    def G(self) -> float:
        return 1.0 - 4.0 * self.H * self.H / self.E2**3

    def cubic(self, u):
        """G + u - u^2 - u^3 (the quadrature radicand, up to E^6/4)."""
        return self.G + u - u * u - u * u * u


def invariants_of(alpha0: complex, beta0: complex) -> tuple[float, float]:
    """(E^2, H) of an envelope state; both are exactly conserved by the flow."""
    E2 = abs(alpha0) ** 2 + 2.0 * abs(beta0) ** 2
    H = 2.0 * (alpha0.conjugate() ** 2 * beta0).real
    return E2, H


def to_angles(alpha0: complex, beta0: complex) -> tuple[AngularState, float, float]:
    """Angles (phi, psi, PsiE), total amplitude E, and Phi = 2 phi - psi.

    PsiE lies in [0, pi/2]; at the poles (alpha0 = 0 or beta0 = 0) the
    undefined phase is set to zero.  Raises AngleSingularityError at E = 0.
    """
    E2, _ = invariants_of(alpha0, beta0)
    if E2 == 0.0:
        raise AngleSingularityError("angles are undefined at the zero state")
    E = math.sqrt(E2)
    phi = cmath.phase(alpha0) if alpha0 != 0 else 0.0
    psi = cmath.phase(beta0) if beta0 != 0 else 0.0
    PsiE = math.atan2(math.sqrt(2.0) * abs(beta0), abs(alpha0))
    return AngularState(phi=phi, psi=psi, PsiE=PsiE), E, 2.0 * phi - psi


def state_from_invariants(inv: EnvelopeInvariants) -> tuple[complex, complex]:
    """Cartesian state realizing the invariants, on the u-decreasing branch.

    The sign of sin(Phi) is not fixed by (E^2, H, u0); the convention here
    (sin Phi >= 0, u initially decreasing) matches the quadrature's time
    direction.
    """
    E = inv.E
    psi_e = 0.5 * math.acos(max(-1.0, min(1.0, inv.u0)))
    cos_psi, sin_psi = math.cos(psi_e), math.sin(psi_e)
    denom = math.sqrt(2.0) * E**3 * cos_psi**2 * sin_psi
    if denom < 1e-300:
        if abs(inv.H) > 0:
            raise NoRealOrbitError(
                f"u0 = {inv.u0} sits at a coordinate pole but H = {inv.H} != 0"
            )
        big_phi = 0.5 * math.pi
    else:
        cos_phi = inv.H / denom
        if abs(cos_phi) > 1.0 + 1e-9:
            raise NoRealOrbitError(
                f"cubic is negative at u0 = {inv.u0}: no real orbit passes there"
            )
        cos_phi = max(-1.0, min(1.0, cos_phi))
        big_phi = math.acos(cos_phi)  # sin(Phi) >= 0 branch
    psi0 = 2.0 * inv.phi0 - big_phi
    alpha0 = E * cos_psi * cmath.exp(1j * inv.phi0)
    beta0 = (E / math.sqrt(2.0)) * sin_psi * cmath.exp(1j * psi0)
    return alpha0, beta0


def rhs_angles(angles: AngularState, E: float, Phi: float) -> tuple[float, float, float]:
    """Angular form of the envelope flow.

    phi'  = -(E / 2 sqrt 2) cos(Phi) sin(Psi)
    psi'  = -(E / 2 sqrt 2) cos(Phi) cos^2(Psi) / sin(Psi)
    Psi'  = +(E / 2 sqrt 2) sin(Phi) cos(Psi)

    Raises AngleSingularityError at sin(Psi) = 0, where psi' is singular;
    propagate in Cartesian variables near that pole.
    """
    sin_psi = math.sin(angles.PsiE)
    cos_psi = math.cos(angles.PsiE)
    if sin_psi == 0.0:
        raise AngleSingularityError("psi' is singular at sin(Psi) = 0")
    pref = E / (2.0 * math.sqrt(2.0))
    dphi = -pref * math.cos(Phi) * sin_psi
    dpsi = -pref * math.cos(Phi) * cos_psi * cos_psi / sin_psi
    dPsi = pref * math.sin(Phi) * cos_psi
    return dphi, dpsi, dPsi


def cubic_turning_points(inv: EnvelopeInvariants) -> tuple[float, float, float]:
    """Sorted real roots (r1 < r2 <= r3) of G + u - u^2 - u^3.

    The orbit oscillates on [r2, r3]; raises NoRealOrbitError when the
    turning interval does not exist or does not contain u0.
    """
    roots = np.roots([-1.0, -1.0, 1.0, inv.G])
    real = np.sort(roots[np.abs(roots.imag) < 1e-9].real)
    if real.size < 3:
        # complex pair: only possible past the degenerate orbit G < -5/27
        raise NoRealOrbitError(f"G = {inv.G:.6g} admits no real turning interval")
    r1, r2, r3 = float(real[0]), float(real[1]), float(real[2])
    if not (r2 - 1e-9 <= inv.u0 <= r3 + 1e-9):
        raise NoRealOrbitError(
            f"u0 = {inv.u0} outside the turning interval [{r2:.6g}, {r3:.6g}]"
        )
    return r1, r2, r3


def _time_integral(inv, r1, r2, r3, theta_a, theta_b, g=None):
    """(4/E) * int_{theta_a}^{theta_b} g(u(th)) / sqrt(u(th) - r1) dth.

    u(th) = r2 + (r3 - r2) sin^2(th) absorbs both square-root turning-point
    singularities, leaving an analytic integrand for Gauss-Legendre.
    """
    half = 0.5 * (theta_b - theta_a)
    mid = 0.5 * (theta_b + theta_a)
    th = mid + half * _GL_NODES
    u = r2 + (r3 - r2) * np.sin(th) ** 2
    w = 1.0 / np.sqrt(u - r1)
    if g is not None:
        w = w * g(u)
    return (4.0 / inv.E) * half * float(np.dot(_GL_WEIGHTS, w))


class _Orbit:
    """Folded time parametrization of one quadrature orbit."""

    def __init__(self, inv: EnvelopeInvariants):
        self.inv = inv
        r1, r2, r3 = cubic_turning_points(inv)
        self.r1, self.r2, self.r3 = r1, r2, r3
        self.degenerate = (r3 - r2) < _DEGENERATE_WIDTH
        if not self.degenerate:
            u0 = min(max(inv.u0, r2), r3)
            self.theta0 = math.asin(math.sqrt((u0 - r2) / (r3 - r2)))
            self.T_half = _time_integral(inv, r1, r2, r3, 0.0, 0.5 * math.pi)

    def _s_up(self, theta: float) -> float:
        """Time from the lower turning point up to u(theta)."""
        return _time_integral(self.inv, self.r1, self.r2, self.r3, 0.0, theta)

    def _theta_at(self, tau: float) -> float:
        """Invert s_up on one upward half-cycle (0 <= tau <= T_half)."""
        if tau <= 0.0:
            return 0.0
        if tau >= self.T_half:
            return 0.5 * math.pi
        return brentq(lambda th: self._s_up(th) - tau, 0.0, 0.5 * math.pi, xtol=1e-14)

    def _segments(self, t: float):
        """Split [0, t] into monotone pieces ((theta_a, theta_b), count)."""
        t0_pos = self._s_up(self.theta0)
        first = min(t, t0_pos)  # initial downward piece
        segs = [(self._theta_at(t0_pos - first), self.theta0, 1)]
        rest = t - first
        if rest > 0:
            n_half = int(rest // self.T_half)
            if n_half:
                segs.append((0.0, 0.5 * math.pi, n_half))
            tail = rest - n_half * self.T_half
            if tail > 0:
                going_up = n_half % 2 == 0
                if going_up:
                    segs.append((0.0, self._theta_at(tail), 1))
                else:
                    segs.append((self._theta_at(self.T_half - tail), 0.5 * math.pi, 1))
        return segs

    def u_at(self, t: float) -> float:
        if self.degenerate:
            return self.inv.u0
        t0_pos = self._s_up(self.theta0)
        cycle = 2.0 * self.T_half
        # position along the doubled cycle, entering on the downward branch
        c = (cycle - t0_pos + t) % cycle
        tau = cycle - c if c > self.T_half else c
        th = self._theta_at(tau)
        return self.r2 + (self.r3 - self.r2) * math.sin(th) ** 2

    def integral_of(self, g, t: float) -> float:
        """int_0^t g(u(s)) ds."""
        if self.degenerate:
            return g(np.asarray(self.inv.u0)) * t
        total = 0.0
        for theta_a, theta_b, count in self._segments(t):
            if theta_b > theta_a:
                total += count * _time_integral(
                    self.inv, self.r1, self.r2, self.r3, theta_a, theta_b, g
                )
        return total


def orbit_period(inv: EnvelopeInvariants) -> float:
    """Period of u(t); infinite on the H = 0 separatrix branch."""
    if inv.H == 0.0:
        return math.inf
    orbit = _Orbit(inv)
    if orbit.degenerate:
        return math.inf
    return 2.0 * orbit.T_half


def _h0_u(inv: EnvelopeInvariants, t):
    """Closed form of u(t) on the H = 0 branch (G = 1)."""
    sin0 = math.sqrt(max(0.0, 0.5 * (1.0 - inv.u0)))
    if sin0 >= 1.0:
        return np.full_like(np.asarray(t, dtype=float), -1.0)
    xi = math.atanh(sin0) + inv.E * np.asarray(t, dtype=float) / (2.0 * math.sqrt(2.0))
    return 1.0 - 2.0 * np.tanh(xi) ** 2


def psi_quadrature(inv: EnvelopeInvariants, t):
    """u(t) = cos(2 Psi(t)) by inversion of the separated quadrature.

    Starts at u0 on the u-decreasing branch (matching state_from_invariants).
    For H = 0 the elementary closed form is used; otherwise the complete and
    incomplete integrals are evaluated by Gauss-Legendre in a turning-point
    absorbing substitution and inverted per sample time.
    """
    scalar = np.isscalar(t)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if inv.H == 0.0:
        out = _h0_u(inv, ts)
        return float(out[0]) if scalar else out
    orbit = _Orbit(inv)
    out = np.array([orbit.u_at(float(tv)) for tv in ts])
    return float(out[0]) if scalar else out


def phase_drift(inv: EnvelopeInvariants, t):
    """Phase phi(t) of alpha0 along the orbit.

    phi(t) = phi0 - (H / 2 E^2) int_0^t ds / (1 + u(s)).

    (The integrand follows from phi' = -(E/2 sqrt 2) cos(Phi) sin(Psi) with
    cos(Phi) eliminated through the conservation law; the equivalent form
    published with the quadrature does not match that elimination and fails
    the Cartesian oracle, so the derived integrand is used.)  For H = 0 the
    phase is constant.  For H != 0 the integrand is periodic with a nonzero
    mean, so phi grows linearly at the rate given by drift_rate.
    """
    scalar = np.isscalar(t)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if inv.H == 0.0:
        out = np.full(ts.shape, inv.phi0)
        return float(out[0]) if scalar else out
    orbit = _Orbit(inv)
    pref = -inv.H / (2.0 * inv.E2)
    out = np.array(
        [inv.phi0 + pref * orbit.integral_of(lambda u: 1.0 / (1.0 + u), float(tv)) for tv in ts]
    )
    return float(out[0]) if scalar else out


def drift_rate(inv: EnvelopeInvariants) -> float:
    """Orbit-averaged d(phi)/dt: -(H / 2 E^2) <1/(1 + u)>."""
    if inv.H == 0.0:
        return 0.0
    orbit = _Orbit(inv)
    if orbit.degenerate:
        return -inv.H / (2.0 * inv.E2 * (1.0 + inv.u0))
    period = 2.0 * orbit.T_half
    avg = (
        2.0
        * _time_integral(
            inv, orbit.r1, orbit.r2, orbit.r3, 0.0, 0.5 * math.pi, lambda u: 1.0 / (1.0 + u)
        )
        / period
    )
    return -inv.H * avg / (2.0 * inv.E2)


def integrate_envelope(
    alpha0: complex,
    beta0: complex,
    t1: float,
    t0: float = 0.0,
    cfg: IntegratorConfig | None = None,
    sample_grid=None,
) -> Trajectory:
    """Cartesian integration of the leading envelope system (the ODE oracle)."""
    if sample_grid is None:
        sample_grid = np.linspace(t0, t1, 513)
    return kernels.run_envelope_leading(t0, alpha0, beta0, t1, cfg, sample_grid)


@dataclass(frozen=True)
class BoundednessReport:
    """Outcome of a perturbation run around the bounded solution."""

    passed: bool
    sup_ratio: float
    initial_norm: float
    escape_time: float | None
    trajectory: Trajectory


def correction_boundedness_probe(
    f: float,
    alpha0: complex,
    beta0: complex,
    t_span: tuple[float, float] = (100.0, 1000.0),
    series_order: int = 5,
    cfg: IntegratorConfig | None = None,
    ratio_limit: float = 10.0,
) -> BoundednessReport:
    """Integrate the perturbation system around the bounded solution.

    The rotating-frame perturbation (alpha, beta) of the bounded solution
    obeys

        i alpha' = conj(alpha) beta / 2
                   + (conj(A2) beta e^{-i t^2} + conj(alpha) B2 e^{2 i t^2}) / 2
        i beta'  = alpha^2 / 4 + A2 alpha e^{i t^2} / 2

    with (A2, B2) the order-``series_order`` bounded truncation.  PASS means
    the sup norm over the span stays below ``ratio_limit`` times the initial
    norm (the numerical stand-in for boundedness of the corrections).  At
    f = 0 the reference vanishes and the system reduces exactly to the
    leading envelope flow.
    """
    t0, t1 = t_span
    if cfg is None:
        cfg = IntegratorConfig(rtol=1e-7, atol=1e-12)
    series = bounded_series(f, series_order)
    grid = np.linspace(t0, t1, 2001)
    traj = kernels.run_bounded_perturbation(
        f, series.kmin, series.a, series.b, t0, alpha0, beta0, t1, cfg, grid
    )
    norms = np.hypot(np.abs(traj.states[:, 0]), np.abs(traj.states[:, 1]))
    n0 = math.hypot(abs(alpha0), abs(beta0))
    if n0 == 0.0:
        sup_ratio = float(np.max(norms)) if norms.size else 0.0
        passed = traj.completed and sup_ratio < 1e-12
        escape = None
    else:
        ratios = norms / n0
        sup_ratio = float(np.max(ratios)) if ratios.size else 0.0
        passed = traj.completed and sup_ratio <= ratio_limit
        escape = None
        if not passed:
            over = np.nonzero(ratios > ratio_limit)[0]
            escape = float(traj.times[over[0]]) if over.size else float(traj.times[-1])
    return BoundednessReport(
        passed=passed,
        sup_ratio=sup_ratio,
        initial_norm=n0,
        escape_time=escape,
        trajectory=traj,
    )
