"""Linear stability of the algebraic asymptotic solutions.

Perturbing a reference solution (A(t), B(t)) of the primary resonance
system by (alpha, beta) gives the variational system

    alpha' = -i*(2t*alpha + conj(alpha)*B/2 + conj(A)*beta/2)
    beta'  = -i*(4t*beta + A*alpha/2)

which is R-linear but not C-linear (the conjugations), so it is analyzed as
a 4x4 real system on (Re alpha, Im alpha, Re beta, Im beta).  Along the
growing-minus solution the spectrum contains a real pair
+/- (f^2-144)^{1/4}/sqrt(6): that family is unstable.  Along the bounded and
growing-plus solutions the leading spectrum is purely imaginary and linear
theory alone is inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .asymptotics import (
    AsymptoticSeries,
    SeriesFamily,
    ThresholdError,
    growing_series,
    bounded_series,
    series_evaluator,
)

__all__ = [
    "UNSTABLE",
    "INDETERMINATE",
    "VariationalMatrix",
    "EigenReport",
    "variational_matrix",
    "linearize",
    "asymptotic_eigenvalues",
    "classify_stability",
    "eigen_report",
]

UNSTABLE = "unstable"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class VariationalMatrix:
    """Jacobian of the real form of the primary system at one point."""

    t: float
    M: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.M)


@dataclass(frozen=True)
class EigenReport:
    """Numeric spectrum next to the closed-form leading-order predictions."""

    family: SeriesFamily
    f: float
    t: float
    numeric: np.ndarray
    asymptotic: np.ndarray
    classification: str


def variational_matrix(t: float, A: complex, B: complex) -> np.ndarray:
    """4x4 real Jacobian of the primary system at reference point (A, B)."""
    a1, a2 = A.real, A.imag
    b1, b2 = B.real, B.imag
    return np.array(
        [
            [0.5 * b2, 2 * t - 0.5 * b1, -0.5 * a2, 0.5 * a1],
            [-2 * t - 0.5 * b1, -0.5 * b2, -0.5 * a1, -0.5 * a2],
            [0.5 * a2, 0.5 * a1, 0.0, 4 * t],
            [-0.5 * a1, 0.5 * a2, -4 * t, 0.0],
        ]
    )


def linearize(reference: Callable[[float], tuple[complex, complex]], t: float) -> VariationalMatrix:
    """Variational matrix along a reference evaluator t -> (A, B)."""
    A, B = reference(t)
    A, B = complex(A), complex(B)
    if not (math.isfinite(abs(A)) and math.isfinite(abs(B))):
        raise ValueError(f"reference is not finite at t={t}")
    return VariationalMatrix(t=t, M=variational_matrix(t, A, B))


def asymptotic_eigenvalues(f: float, family: SeriesFamily, t: float) -> np.ndarray:
    """Leading-order closed-form eigenvalues of the variational matrix.

    bounded:        -/+ 4it, -/+ 2it
    growing-minus:  -/+ 4i*sqrt(3)*t and the real pair -/+ (f^2-144)^{1/4}/sqrt(6)
    growing-plus:   -/+ 4it and -/+ i*(f^2-144)^{1/4}/sqrt(6)

    These are the tabulated forms.  (Numerically the large pair of the
    growing-plus family also sits at 4*sqrt(3)*t; only the growing-minus and
    bounded predictions are validated against the spectrum.)
    """
    if family is SeriesFamily.BOUNDED:
        return np.array([-4j * t, 4j * t, -2j * t, 2j * t])
    if abs(f) <= 12.0:
        raise ThresholdError(
            f"asymptotic eigenvalues require |f| > 12 for growing families, got f={f}"
        )
    c = (f * f - 144.0) ** 0.25 / math.sqrt(6.0)
    if family is SeriesFamily.GROWING_MINUS:
        rot = 4.0 * math.sqrt(3.0) * t
        return np.array([-1j * rot, 1j * rot, -c + 0j, c + 0j])
    return np.array([-4j * t, 4j * t, -1j * c, 1j * c])


def classify_stability(f: float, family: SeriesFamily) -> str:
    """unstable for the growing-minus family, indeterminate otherwise."""
    if family.grows and abs(f) <= 12.0:
        raise ThresholdError(f"no growing family at f={f}")
    if family is SeriesFamily.GROWING_MINUS:
        return UNSTABLE
    return INDETERMINATE


def _reference_series(f: float, family: SeriesFamily, K: int = 3) -> AsymptoticSeries:
    if family is SeriesFamily.BOUNDED:
        return bounded_series(f, K)
    return growing_series(f, family, K)


def eigen_report(f: float, family: SeriesFamily, t: float, K: int = 3) -> EigenReport:
    """Numeric spectrum along the order-K series next to the predictions.

    The reference truncation order K=3 suffices: the predictions themselves
    carry O(1/t) corrections.
    """
    series = _reference_series(f, family, K)
    vm = linearize(series_evaluator(series), t)
    numeric = np.sort_complex(vm.eigenvalues())
    asympt = np.sort_complex(asymptotic_eigenvalues(f, family, t))
    return EigenReport(
        family=family,
        f=f,
        t=t,
        numeric=numeric,
        asymptotic=asympt,
        classification=classify_stability(f, family),
    )
