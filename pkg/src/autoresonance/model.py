"""Vector fields for the coupled-oscillator capture problem.

Five levels of description of the same physics, from the full second-order
oscillator pair down to the leading envelope system:

* physical:  x'' + w^2 x = eps*(a1*x*y + 2*g*cos(phi)),
             y'' + (2w)^2 y = eps*a2*x^2,   phi = w*th + alpha*tau^2, tau = eps*th
* slow:      a' = -2i*alpha*tau*a - (i*a1/2w)*conj(a)*b - i*g/2w,
             b' = -4i*alpha*tau*b - (i*a2/4w)*a^2
* primary (normalized):
             A' = -i*(2tA + conj(A)B/2 + f),  B' = -i*(4tB + A^2/4)
* rotating frame (A = a*exp(-it^2), B = b*exp(-2it^2)):
             i a' = conj(a)b/2 + f*exp(it^2),  i b' = a^2/4
* leading envelope:
             i alpha0' = conj(alpha0)*beta0/2,  i beta0' = alpha0^2/4

All functions are pure and operate on plain Python complex scalars.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "PhysicalParams",
    "PhysicalState",
    "ResonanceState",
    "EnvelopeState",
    "rhs_primary",
    "rhs_slow",
    "rhs_rotating",
    "rhs_envelope_leading",
    "rhs_physical",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Constants of the physical two-oscillator system.

    omega:   frequency of the x oscillator (the y oscillator sits at 2*omega)
    alpha1:  coupling coefficient in the x equation
    alpha2:  coupling coefficient in the y equation
    gamma:   real forcing amplitude; the drive is 2*gamma*cos(phi)
    alpha:   chirp rate of the forcing detuning per slow-time^2
    epsilon: small parameter (>= 0)
    """

    omega: float
    alpha1: float
    alpha2: float
    gamma: float
    alpha: float
    epsilon: float = 0.0

    def __post_init__(self) -> None:
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.alpha1 * self.alpha2 > 0:
            raise ValueError(
                "alpha1*alpha2 must be positive (real amplitude scalings), "
                f"got {self.alpha1}*{self.alpha2}"
            )
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")

    def slow_time(self, theta: float) -> float:
        """tau = epsilon * theta."""
        return self.epsilon * theta

    def forcing_phase(self, theta: float) -> float:
        """phi = (omega + epsilon*alpha*tau)*theta = omega*theta + alpha*tau^2."""
        return (self.omega + self.epsilon * self.alpha * self.slow_time(theta)) * theta


@dataclass(frozen=True)
class PhysicalState:
    """State of the second-order pair in first-order form."""

    theta: float
    x: float
    xdot: float
    y: float
    ydot: float


@dataclass(frozen=True)
class ResonanceState:
    """State (t, A, B) of the normalized primary resonance system."""

    t: float
    A: complex
    B: complex


@dataclass(frozen=True)
class EnvelopeState:
    """State of the leading envelope system near the bounded solution."""

    alpha0: complex
    beta0: complex


def rhs_primary(t: float, A: complex, B: complex, f: float) -> tuple[complex, complex]:
    """Normalized primary resonance equations.

    A' = -i*(2*t*A + conj(A)*B/2 + f)
    B' = -i*(4*t*B + A*A/4)
    """
    dA = -1j * (2.0 * t * A + 0.5 * A.conjugate() * B + f)
    dB = -1j * (4.0 * t * B + 0.25 * A * A)
    return dA, dB


def rhs_slow(tau: float, a: complex, b: complex, p: PhysicalParams) -> tuple[complex, complex]:
    """Slow-flow equations for the complex mode amplitudes.

    a' = -2i*alpha*tau*a - (i*alpha1/(2*omega))*conj(a)*b - i*gamma/(2*omega)
    b' = -4i*alpha*tau*b - (i*alpha2/(4*omega))*a*a
    """
    da = (
        -2j * p.alpha * tau * a
        - (0.5j * p.alpha1 / p.omega) * a.conjugate() * b
        - 0.5j * p.gamma / p.omega
    )
    db = -4j * p.alpha * tau * b - (0.25j * p.alpha2 / p.omega) * a * a
    return da, db


def rhs_rotating(t: float, a: complex, b: complex, f: float) -> tuple[complex, complex]:
    """Primary system in the rotating frame A = a*exp(-i t^2), B = b*exp(-2i t^2).

    i a' = conj(a)*b/2 + f*exp(i t^2)
    i b' = a*a/4
    """
    drive = f * cmath.exp(1j * (t * t))
    da = -1j * (0.5 * a.conjugate() * b + drive)
    db = -0.25j * a * a
    return da, db


def rhs_envelope_leading(alpha0: complex, beta0: complex) -> tuple[complex, complex]:
    """Leading-order envelope system (autonomous).

    i alpha0' = conj(alpha0)*beta0/2,  i beta0' = alpha0^2/4
    """
    dalpha0 = -0.5j * alpha0.conjugate() * beta0
    dbeta0 = -0.25j * alpha0 * alpha0
    return dalpha0, dbeta0


def rhs_physical(
    theta: float, x: float, xdot: float, y: float, ydot: float, p: PhysicalParams
) -> tuple[float, float, float, float]:
    """Full second-order system in first-order form.

    x'' + omega^2 x = eps*alpha1*x*y + 2*eps*gamma*cos(phi)
    y'' + (2*omega)^2 y = eps*alpha2*x^2

    The y oscillator carries frequency 2*omega so the pair sits on the 1:2
    internal resonance; gamma is real, so the complex drive and its conjugate
    sum to 2*gamma*cos(phi).
    """
    w2 = p.omega * p.omega
    force = 2.0 * p.gamma * math.cos(p.forcing_phase(theta))
    dxdot = -w2 * x + p.epsilon * (p.alpha1 * x * y + force)
    dydot = -4.0 * w2 * y + p.epsilon * p.alpha2 * x * x
    return xdot, dxdot, ydot, dydot
