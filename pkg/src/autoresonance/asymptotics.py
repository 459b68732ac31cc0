"""Algebraic asymptotic expansions of the primary resonance system.

Power-series solutions A(t) = sum a_k t^{-k}, B(t) = sum b_k t^{-k}
(k from -1) fall into three families fixed by the leading balance
2 a + conj(a) b / 2 = 0, 4 b + a^2 / 4 = 0:

* bounded:       a_{-1} = 0, coefficients follow a nondegenerate diagonal
                 recurrence seeded by the forcing (a_1 = -f/2, ...).
* growing-plus:  a_{-1} = +8 e^{i Psi}, with sin(Psi) = -12/f.
* growing-minus: a_{-1} = -8 e^{i Psi}, with sin(Psi) = +12/f.

Growing families only exist for |f| > 12: each order k solves a rank-3
linear stage M X_k = F_k whose right-hand side must be orthogonal to
the adjoint nullspace Z, and the order-1 solvability condition is exactly
sin = -/+ 12/f, the capture threshold.  The homogeneous multiple mu_k of
the nullspace vector Y0 left free at stage k is pinned by the solvability
condition two stages later.

Construction runs in extended precision (mpmath) so that substitution
residuals of high-order truncations remain measurable far below the double
rounding floor; exported coefficients are double precision for the dynamics
path.  Internally both growing families are built as a_{-1} = 8 e^{i theta}
with sin(theta) = -12/f (theta = Psi + pi for growing-minus), which is the
convention the printed stage matrix corresponds to.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

__all__ = [
    "SeriesFamily",
    "ThresholdError",
    "DegenerateThresholdError",
    "StageError",
    "AsymptoticSeries",
    "LinearStage",
    "turning_angle",
    "build_stage_matrix",
    "nullspace_vector",
    "adjoint_null",
    "odot",
    "bounded_series",
    "growing_series",
    "eval_series",
    "eval_series_derivative",
    "series_residual",
    "residual_slope",
    "series_evaluator",
]

_DPS = 60
_RANK_CUTOFF = 1e-10
_SOLVABILITY_TOL = 1e-8


class SeriesFamily(enum.Enum):
    BOUNDED = "bounded"
    GROWING_PLUS = "growing-plus"
    GROWING_MINUS = "growing-minus"

    @property
    def grows(self) -> bool:
        return self is not SeriesFamily.BOUNDED


class ThresholdError(ValueError):
    """|f| is below the capture threshold: no real turning angle exists."""


class DegenerateThresholdError(ThresholdError):
    """|f| equals the threshold exactly: cos(Psi) = 0 degenerates the stages."""


class StageError(RuntimeError):
    """A recurrence stage violated its solvability condition."""


@dataclass(frozen=True)
class LinearStage:
    """One order of the growing recurrence, kept for inspection."""

    k: int
    matrix: np.ndarray
    rhs: np.ndarray
    Y0: np.ndarray
    Z: np.ndarray
    particular: np.ndarray
    mu: float


@dataclass(frozen=True)
class AsymptoticSeries:
    """Truncated expansion A = sum a_k t^{-k}, B = sum b_k t^{-k}.

    ``a``/``b`` hold coefficients for k = kmin .. K (kmin = -1).  ``psi`` is
    the turning angle of the leading coefficient (None for the bounded
    family) and ``mus`` the nullspace multiples pinned at each growing stage.
    High-precision copies of the coefficients are retained for residual
    evaluation.
    """

    family: SeriesFamily
    f: float
    K: int
    kmin: int
    a: np.ndarray
    b: np.ndarray
    psi: float | None = None
    mus: np.ndarray | None = None
    stages: tuple[LinearStage, ...] | None = None
    _mp_a: tuple = field(default=(), repr=False, compare=False)
    _mp_b: tuple = field(default=(), repr=False, compare=False)

    def coeff(self, k: int) -> tuple[complex, complex]:
        """(a_k, b_k); zero outside the stored range."""
        if k < self.kmin or k > self.K:
            return 0.0 + 0.0j, 0.0 + 0.0j
        return complex(self.a[k - self.kmin]), complex(self.b[k - self.kmin])


def turning_angle(f: float, family: SeriesFamily, cos_branch: int = +1) -> float:
    """Turning angle Psi of the leading growing coefficient.

    sin(Psi) = +12/f for the growing-minus family (leading -8 e^{i Psi}) and
    sin(Psi) = -12/f for growing-plus (leading +8 e^{i Psi}).  The principal
    branch takes cos(Psi) > 0; ``cos_branch=-1`` selects the mirror branch
    (exposed, not validated against the stability results).

    Raises ThresholdError for |f| < 12 and DegenerateThresholdError at
    |f| = 12, where cos(Psi) = 0 breaks the particular-solution stages.
    """
    if family is SeriesFamily.BOUNDED:
        raise ValueError("the bounded family has no turning angle")
    if cos_branch not in (+1, -1):
        raise ValueError("cos_branch must be +1 or -1")
    if abs(f) < 12.0:
        raise ThresholdError(f"no growing family for |f| = {abs(f)} < 12")
    if abs(f) == 12.0:
        raise DegenerateThresholdError("|f| = 12 is degenerate: cos(Psi) = 0")
    sign = 1.0 if family is SeriesFamily.GROWING_MINUS else -1.0
    s = sign * 12.0 / f
    c = cos_branch * math.sqrt(1.0 - 144.0 / (f * f))
    return math.atan2(s, c)


def build_stage_matrix(psi: float) -> np.ndarray:
    """4x4 real matrix of one growing recurrence stage (rank 3).

    Acts on (Re a_k, Im a_k, Re b_k, Im b_k) for the construction with
    leading coefficient 8 e^{i psi}.
    """
    s, c = math.sin(psi), math.cos(psi)
    s2, c2 = math.sin(2 * psi), math.cos(2 * psi)
    return np.array(
        [
            [4 * c * s, -4 * c * c, 4 * s, -4 * c],
            [4 * s * s, -4 * c * s, 4 * c, 4 * s],
            [-4 * s, -4 * c, 0.0, -4.0],
            [4 * c, -4 * s, 4.0, 0.0],
        ]
    )


def nullspace_vector(psi: float) -> np.ndarray:
    """Right nullspace vector Y0 of the stage matrix."""
    return np.array(
        [math.sin(psi), -math.cos(psi), -math.sin(2 * psi), math.cos(2 * psi)]
    )


def adjoint_null(psi: float) -> np.ndarray:
    """Left (adjoint) nullspace vector Z, verified against the stage matrix."""
    z = np.array(
        [-math.cos(psi), -math.sin(psi), math.cos(2 * psi), math.sin(2 * psi)]
    )
    check = build_stage_matrix(psi).T @ z
    if not np.all(np.abs(check) < 1e-12):
        raise StageError(f"adjoint nullspace verification failed at psi={psi}")
    return z


def odot(y, x) -> np.ndarray:
    """Bilinear interaction of two correction 4-vectors.

    With ua = y1 + i y2, ub = y3 + i y4 (and likewise for x), the quadratic
    nonlinearities conj(a) b / 2 and a^2 / 4 polarize to

        rows 1-2:  conj(ua) xb + conj(xa) ub
        rows 3-4:  2 ua xa

    which reproduces the tabulated stage-interaction rows (the second row of
    the tabulated form carries a transcription slip; this bilinear form is
    the one consistent with the recurrence).
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    ya, yb = complex(y[0], y[1]), complex(y[2], y[3])
    xa, xb = complex(x[0], x[1]), complex(x[2], x[3])
    w_ab = ya.conjugate() * xb + xa.conjugate() * yb
    w_aa = 2.0 * ya * xa
    return np.array([w_ab.real, w_ab.imag, w_aa.real, w_aa.imag])


# --- extended-precision construction ---


def _stage_rhs_mp(k: int, a: dict, b: dict, f):
    """Complex right-hand side (RA, RB) of stage k.

    Collects every product conj(a_m) b_l and a_m a_l landing at the stage's
    power (m + l = k - 1) except the ones containing the stage unknowns
    (m = k or l = k), plus the linear carry (k-2)(a_{k-2}, b_{k-2}) and the
    forcing at k = 1.
    """
    s_ab = mp.mpc(0)
    s_aa = mp.mpc(0)
    for m, am in a.items():
        l = k - 1 - m
        if m == k or l == k:
            continue
        bl = b.get(l)
        if bl is None:
            continue
        s_ab += mp.conj(am) * bl
        s_aa += am * a[l]
    ra = (k - 2) * a.get(k - 2, mp.mpc(0)) - 0.5j * s_ab
    rb = (k - 2) * b.get(k - 2, mp.mpc(0)) - 0.25j * s_aa
    if k == 1:
        ra -= 1j * mp.mpf(f)
    return ra, rb


def _f4(ra, rb):
    return [ra.real, ra.imag, rb.real, rb.imag]


def _dot4(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]


def _norm4(v):
    return mp.sqrt(_dot4(v, v))


def _minnorm_solve_mp(M, y0, F):
    """Minimum-norm solution of the rank-3 system M X = F.

    Solves (M^T M + y0 y0^T) X = M^T F; because M^T F is orthogonal to the
    nullspace, the result carries no y0 component.
    """
    G = mp.matrix(4, 4)
    rhs = mp.matrix(4, 1)
    for i in range(4):
        for j in range(4):
            G[i, j] = sum(M[r][i] * M[r][j] for r in range(4)) + y0[i] * y0[j]
        rhs[i] = sum(M[r][i] * F[r] for r in range(4))
    x = mp.lu_solve(G, rhs)
    return [x[0], x[1], x[2], x[3]]


def _np_c(values) -> np.ndarray:
    return np.array([complex(v) for v in values], dtype=complex)


def bounded_series(f: float, K: int) -> AsymptoticSeries:
    """Bounded expansion (zero leading coefficient) through order K (odd).

    The stages are diagonal (2i a_k = RA, 4i b_k = RB), seeded by the forcing
    at k = 1: a_1 = -f/2, a_3 = i f/4, b_3 = -f^2/64, a_5 = 3f/8 - f^3/512,
    b_5 = 7 i f^2/256, and so on by the recurrence.
    """
    if K < 1 or K % 2 == 0:
        raise ValueError(f"K must be odd and >= 1, got {K}")
    with mp.workdps(_DPS):
        fm = mp.mpf(f)
        a = {-1: mp.mpc(0)}
        b = {-1: mp.mpc(0)}
        for k in range(0, K + 1):
            ra, rb = _stage_rhs_mp(k, a, b, fm)
            a[k] = ra / (2j)
            b[k] = rb / (4j)
        ks = list(range(-1, K + 1))
        return AsymptoticSeries(
            family=SeriesFamily.BOUNDED,
            f=float(f),
            K=K,
            kmin=-1,
            a=_np_c([a[k] for k in ks]),
            b=_np_c([b[k] for k in ks]),
            _mp_a=tuple(a[k] for k in ks),
            _mp_b=tuple(b[k] for k in ks),
        )


def growing_series(
    f: float,
    family: SeriesFamily,
    K: int,
    cos_branch: int = +1,
    collect_stages: bool = False,
) -> AsymptoticSeries:
    """Growing expansion through order K for |f| > 12.

    Each stage k solves the rank-3 system M X_k = F_k by a minimum-norm
    particular solution; the free nullspace multiple mu_k is pinned by the
    solvability condition Z . F_{k+2} = 0 of the stage two orders later
    (the construction looks ahead two orders so every reported coefficient
    is final).  Stage solvability is verified to ``1e-8 * ||F||`` and a
    violation raises StageError: it indicates an indexing inconsistency,
    not a numerical failure.

    Even-order coefficients come out exactly zero; reported first orders are
    a_{-1} = -/+ 8 e^{i Psi}, b_{-1} = -4 e^{2 i Psi}, a_1 = f/4 for both
    families, with the b_1 correction carrying the family's cos(Psi) factor.
    """
    if family is SeriesFamily.BOUNDED:
        raise ValueError("use bounded_series for the bounded family")
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    psi = turning_angle(f, family, cos_branch)  # validates |f| > 12

    with mp.workdps(_DPS):
        fm = mp.mpf(f)
        # internal construction angle theta: leading coefficient 8 e^{i theta},
        # sin(theta) = -12/f for both families (theta = Psi + pi flips only
        # the cosine for growing-minus).
        s_th = -12 / fm
        c_th = cos_branch * mp.sqrt(1 - 144 / fm**2)
        if family is SeriesFamily.GROWING_MINUS:
            c_th = -c_th
        e_th = mp.mpc(c_th, s_th)

        m_rows = [
            [4 * c_th * s_th, -4 * c_th * c_th, 4 * s_th, -4 * c_th],
            [4 * s_th * s_th, -4 * c_th * s_th, 4 * c_th, 4 * s_th],
            [-4 * s_th, -4 * c_th, mp.mpf(0), mp.mpf(-4)],
            [4 * c_th, -4 * s_th, mp.mpf(4), mp.mpf(0)],
        ]
        s2, c2 = 2 * s_th * c_th, c_th * c_th - s_th * s_th
        y0 = [s_th, -c_th, -s2, c2]
        z = [-c_th, -s_th, c2, s2]
        y0_a = mp.mpc(y0[0], y0[1])
        y0_b = mp.mpc(y0[2], y0[3])

        a = {-1: 8 * e_th}
        b = {-1: -4 * e_th * e_th}
        mus: dict[int, mp.mpf] = {}
        particulars: dict[int, list] = {}
        rhss: dict[int, list] = {}

        def stage_f(k):
            return _f4(*_stage_rhs_mp(k, a, b, fm))

        def pin_mu(k):
            """Fix mu_{k-2} so that stage k is solvable."""
            j = k - 2
            if j < 0:
                return
            F = stage_f(k)
            g0 = _dot4(z, F)
            a[j] += y0_a
            b[j] += y0_b
            g1 = _dot4(z, stage_f(k))
            a[j] -= y0_a
            b[j] -= y0_b
            slope = g1 - g0
            if abs(slope) > mp.mpf("1e-25") * max(1, _norm4(F)):
                delta = -g0 / slope
                a[j] += delta * y0_a
                b[j] += delta * y0_b
                mus[j] = mus.get(j, mp.mpf(0)) + delta

        for k in range(0, K + 3):
            pin_mu(k)
            F = stage_f(k)
            viol = abs(_dot4(z, F))
            if viol > _SOLVABILITY_TOL * max(1, _norm4(F)):
                raise StageError(
                    f"stage {k} solvability violated: |Z.F| = {float(viol):.3e}"
                )
            if k <= K:
                x = _minnorm_solve_mp(m_rows, y0, F)
                a[k] = mp.mpc(x[0], x[1])
                b[k] = mp.mpc(x[2], x[3])
                mus.setdefault(k, mp.mpf(0))
                particulars[k] = x
                rhss[k] = F

        ks = list(range(-1, K + 1))
        stages = None
        if collect_stages:
            m_np = np.array([[float(v) for v in row] for row in m_rows])
            y0_np = np.array([float(v) for v in y0])
            z_np = np.array([float(v) for v in z])
            stages = tuple(
                LinearStage(
                    k=k,
                    matrix=m_np,
                    rhs=np.array([float(v) for v in stage_f(k)]),
                    Y0=y0_np,
                    Z=z_np,
                    particular=np.array([float(v) for v in particulars[k]]),
                    mu=float(mus[k]),
                )
                for k in range(0, K + 1)
            )
        return AsymptoticSeries(
            family=family,
            f=float(f),
            K=K,
            kmin=-1,
            a=_np_c([a[k] for k in ks]),
            b=_np_c([b[k] for k in ks]),
            psi=psi,
            mus=np.array([float(mus[k]) for k in range(0, K + 1)]),
            stages=stages,
            _mp_a=tuple(a[k] for k in ks),
            _mp_b=tuple(b[k] for k in ks),
        )


# --- evaluation ---


def eval_series(series: AsymptoticSeries, t):
    """(A, B) of the truncated series at t (> 0, scalar or array).

    Horner evaluation in 1/t on the double-precision coefficients.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("series evaluation requires t > 0")
    x = 1.0 / t
    A = np.zeros(t.shape, dtype=complex)
    B = np.zeros(t.shape, dtype=complex)
    for ca, cb in zip(series.a[::-1], series.b[::-1]):
        A = A * x + ca
        B = B * x + cb
    # the loop ends at k = kmin = -1, i.e. the t^{+1} coefficient
    A *= t ** (-series.kmin)
    B *= t ** (-series.kmin)
    return (A[()] if A.ndim == 0 else A, B[()] if B.ndim == 0 else B)


def eval_series_derivative(series: AsymptoticSeries, t):
    """Exact term-by-term derivative (A', B') of the truncated series."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("series evaluation requires t > 0")
    dA = np.zeros(t.shape, dtype=complex)
    dB = np.zeros(t.shape, dtype=complex)
    for k in range(series.kmin, series.K + 1):
        ca, cb = series.coeff(k)
        if k != 0:
            dA = dA + (-k) * ca * t ** (-k - 1)
            dB = dB + (-k) * cb * t ** (-k - 1)
    return (dA[()] if dA.ndim == 0 else dA, dB[()] if dB.ndim == 0 else dB)


def series_evaluator(series: AsymptoticSeries):
    """Callable t -> (A, B) for use as a linearization reference."""

    def evaluate(t):
        return eval_series(series, t)

    return evaluate


def series_residual(series: AsymptoticSeries, t):
    """Norm of the defect left by the truncation in the resonance equations.

    Evaluates ||(A' + i(2tA + conj(A)B/2 + f), B' + i(4tB + A^2/4))|| with
    exact term-by-term derivatives.  Runs in extended precision on the
    retained high-precision coefficients: the satisfied orders cancel far
    below any truncation residual of interest, which double arithmetic
    cannot do (the cancelling terms grow like t^2 while the residual decays).
    Scalar t or array; returns float(s).
    """
    scalar = np.isscalar(t)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(ts <= 0):
        raise ValueError("series evaluation requires t > 0")
    out = np.empty(ts.shape, dtype=float)
    with mp.workdps(_DPS):
        fm = mp.mpf(series.f)
        for i, tv in enumerate(ts):
            tm = mp.mpf(float(tv))
            A = mp.mpc(0)
            B = mp.mpc(0)
            dA = mp.mpc(0)
            dB = mp.mpc(0)
            for k, (ca, cb) in enumerate(zip(series._mp_a, series._mp_b), start=series.kmin):
                pw = tm ** (-k)
                A += ca * pw
                B += cb * pw
                if k != 0:
                    dA += (-k) * ca * pw / tm
                    dB += (-k) * cb * pw / tm
            ra = dA + 1j * (2 * tm * A + mp.conj(A) * B / 2 + fm)
            rb = dB + 1j * (4 * tm * B + A * A / 4)
            out[i] = float(mp.sqrt(abs(ra) ** 2 + abs(rb) ** 2))
    return float(out[0]) if scalar else out


def residual_slope(
    series: AsymptoticSeries, t_lo: float = 1e2, t_hi: float = 1e4, n: int = 25
) -> float:
    """Log-log slope of the substitution residual over [t_lo, t_hi].

    A K-order truncation satisfies every stage through K, so the slope is
    -(K+1) up to the next nonzero order; this measurement is the arbiter for
    any recurrence-indexing ambiguity.
    """
    ts = np.geomspace(t_lo, t_hi, n)
    rs = series_residual(series, ts)
    return float(np.polyfit(np.log(ts), np.log(rs), 1)[0])
