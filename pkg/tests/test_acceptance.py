"""Acceptance suite: one criterion per test, one PASS/FAIL line each.

Criterion 1 is split: the literal inputs carry two defects that make the
stated verdicts dynamically unreachable (analyzed inline and in the project
notes), so tests 1a/1b assert them faithfully and fail honestly, while the
companion test demonstrates the threshold phenomenon itself with the
on-branch initial data and a window long enough for the frozen amplitude to
classify.  Every other criterion passes at its stated tolerance.
"""

import math

import numpy as np
import pytest

from autoresonance import (
    CAPTURED,
    NOT_CAPTURED,
    EnvelopeInvariants,
    IntegratorConfig,
    PhysicalParams,
    RunConfig,
    SeriesFamily,
    ThresholdError,
    bounded_series,
    eigen_report,
    growing_series,
    invariants_of,
    neighborhood_run,
    orbit_period,
    psi_quadrature,
    residual_slope,
    run_and_classify,
    scale_params,
    state_from_invariants,
    turning_angle,
)
from autoresonance import kernels
from autoresonance.envelope import integrate_envelope
from autoresonance.reduction import envelope_peaks

MINUS = SeriesFamily.GROWING_MINUS
PLUS = SeriesFamily.GROWING_PLUS

# the literal capture-experiment inputs of criterion 1
LITERAL_A0 = 102.669 - 793.88j
LITERAL_B0 = 386.825 + 101.831j


def _line(criterion: str, ok: bool, detail: str) -> None:
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


def test_criterion_1a_literal_noncapture_below_threshold():
    cfg = RunConfig(f=11.9, A0=LITERAL_A0, B0=LITERAL_B0, integrator=IntegratorConfig(rtol=1e-9))
    v = run_and_classify(cfg)
    ok = v.verdict == NOT_CAPTURED
    _line(
        "1a",
        ok,
        f"f=11.9 over [100,300]: verdict {v.verdict}, late |A|/t = {v.late_ratio:.3f} "
        "(|A|^2 + 2|B|^2 is conserved by the cubic coupling and the unlocked pump "
        "averages out, so |A| freezes near 864 and |A|/t cannot drop below 1 "
        "before t ~ 900; see the companion demonstration)",
    )
    assert ok, (
        "literal criterion: detached amplitude freezes instead of decaying; "
        f"late ratio {v.late_ratio:.3f} is not < 1 on [100,300]"
    )


def test_criterion_1b_literal_capture_above_threshold():
    cfg = RunConfig(f=12.1, A0=LITERAL_A0, B0=LITERAL_B0, integrator=IntegratorConfig(rtol=1e-9))
    v = run_and_classify(cfg)
    ok = v.verdict == CAPTURED
    _line(
        "1b",
        ok,
        f"f=12.1 over [100,300]: verdict {v.verdict}, late |A|/t = {v.late_ratio:.3f} "
        "(the quoted Im A(100) = -793.88 sits 0.49 off the growing branch, whose "
        "value is -793.3884...; every other quoted component matches the two-term "
        "truncation to print precision, and the offset detaches the run near t = 117)",
    )
    assert ok, (
        "literal criterion: the quoted initial datum is off the growing branch and "
        f"the run detaches; late ratio {v.late_ratio:.3f} is not in [6, 10]"
    )


def test_criterion_1_threshold_phenomenon_demonstrated():
    # on-branch initial data (two-term growing-plus truncation at t = 100)
    above = run_and_classify(RunConfig(f=12.1, integrator=IntegratorConfig(rtol=1e-9)))
    assert above.verdict == CAPTURED
    assert 6.0 <= above.late_ratio <= 10.0
    assert above.drift < 0.10
    # same data below threshold: the amplitude freezes; a longer window lets
    # the frozen ratio classify as not captured
    below = run_and_classify(
        RunConfig(f=11.9, t1=1200.0, integrator=IntegratorConfig(rtol=1e-5), sample_count=4001)
    )
    assert below.verdict == NOT_CAPTURED
    _line(
        "1 (demonstrated)",
        True,
        f"on-branch data: f=12.1 Captured with |A|/t = {above.late_ratio:.4f} in [6,10], "
        f"drift {above.drift:.2%}; f=11.9 NotCaptured on the widened window "
        f"[{below.window[0]:.0f},{below.window[1]:.0f}] with |A|/t = {below.late_ratio:.3f}",
    )


def test_criterion_2_series_coefficients():
    for f in (6.0, 12.0, 13.0, 24.0):
        s = bounded_series(f, 5)
        assert abs(s.coeff(1)[0] - (-f / 2)) < 1e-12
        assert abs(s.coeff(3)[0] - 1j * f / 4) < 1e-12
        assert abs(s.coeff(5)[0] - (3 * f / 8 - f**3 / 512)) < 1e-12
        assert abs(s.coeff(3)[1] - (-(f**2) / 64)) < 1e-12
        assert abs(s.coeff(5)[1] - 7j * f**2 / 256) < 1e-12
    for f in (13.0, 24.0):
        for fam, sign in ((MINUS, -1.0), (PLUS, 1.0)):
            s = growing_series(f, fam, 1)
            psi = turning_angle(f, fam)
            c, sn = math.cos(psi), math.sin(psi)
            assert abs(s.coeff(-1)[0] - sign * 8 * np.exp(1j * psi)) < 1e-10
            assert abs(s.coeff(-1)[1] - (-4) * np.exp(2j * psi)) < 1e-10
            assert abs(s.coeff(1)[0] - f / 4) < 1e-10
            # b_1 carries the family's cos(Psi) factor; the growing-minus form
            # quoted as -f/4 - 2i fails its own stage equations (see
            # test_asymptotics.test_published_minus_b1_fails_stage_equations)
            # and the residual arbiter of criterion 4 validates this one
            expect_b1 = -sign * c * (f / 4 + 24.0 / f) + 2j * (1 + sn * sn)
            assert abs(s.coeff(1)[1] - expect_b1) < 1e-10
    _line(
        "2",
        True,
        "bounded a1/a3/a5/b3/b5 exact to 1e-12 at f in {6,12,13,24}; growing "
        "a_-1 = -/+8e^{i psi}, b_-1 = -4e^{2i psi}, a1 = f/4 to 1e-10 at f in "
        "{13,24}; growing-minus b1 takes the recurrence-validated mirror form",
    )


def test_criterion_3_solvability_threshold():
    for f in (12.0001, 12.1, 13.0, 24.0, 100.0):
        for fa, sign in ((MINUS, 1.0), (PLUS, -1.0)):
            for sgn_f in (f, -f):
                psi = turning_angle(sgn_f, fa)
                assert abs(math.sin(psi) - sign * 12.0 / sgn_f) < 1e-14
    for f in (12.0, -12.0, 11.9999, 11.0, 6.0, 0.0, -3.0):
        with pytest.raises(ThresholdError):
            turning_angle(f, MINUS)
        with pytest.raises(ThresholdError):
            turning_angle(f, PLUS)
    _line("3", True, "sin(psi) = -/+12/f for |f| > 12; ThresholdError for |f| <= 12")


def test_criterion_4_residual_decay_suite():
    details = []
    for K in (1, 3, 5):
        slope = residual_slope(bounded_series(12.0, K))
        assert slope <= -(K + 1) + 0.3, (SeriesFamily.BOUNDED, K, slope)
        details.append(f"bounded K={K}: {slope:.2f}")
    # growing truncation levels 1, 2, 3 hold the orders t^-1, t^-3, t^-5
    # (even coefficients vanish identically)
    for fam in (MINUS, PLUS):
        for level, stage in ((1, 1), (2, 3), (3, 5)):
            slope = residual_slope(growing_series(13.0, fam, stage))
            assert slope <= -(level + 1) + 0.3, (fam, level, slope)
        details.append(f"{fam.value} levels 1-3 ok")
    _line("4", True, "; ".join(details))


def test_criterion_5_eigenvalue_asymptotics():
    f, t = 13.0, 100.0
    target = (f * f - 144.0) ** 0.25 / math.sqrt(6.0)
    assert abs(target - 0.912871) < 5e-7
    rep = eigen_report(f, MINUS, t)
    real_eig = rep.numeric[np.argmin(np.abs(rep.numeric - target))]
    assert abs(real_eig - target) <= 0.02 * target
    rot = 4.0 * math.sqrt(3.0) * t
    for sign in (1.0, -1.0):
        eig = rep.numeric[np.argmin(np.abs(rep.numeric - sign * 1j * rot))]
        assert abs(eig - sign * 1j * rot) <= 0.02 * rot
    rep2 = eigen_report(f, SeriesFamily.BOUNDED, t)
    for tgt in (4j * t, -4j * t, 2j * t, -2j * t):
        eig = rep2.numeric[np.argmin(np.abs(rep2.numeric - tgt))]
        assert abs(eig - tgt) <= 0.02 * abs(tgt)
    _line(
        "5",
        True,
        f"f=13, t=100: growing-minus spectrum holds {real_eig.real:.6f} vs "
        f"{target:.6f} (2% band) and -/+4i sqrt(3) t; bounded spectrum at -/+4it, -/+2it",
    )


def test_criterion_6_conservation_laws():
    rng = np.random.default_rng(2024)
    cfg = IntegratorConfig(rtol=1e-10, atol=1e-13)
    checked = 0
    worst = 0.0
    while checked < 10:
        a0 = complex(rng.normal(), rng.normal())
        b0 = complex(rng.normal(), rng.normal())
        E2, H = invariants_of(a0, b0)
        if abs(H) < 0.02 * E2**1.5:
            continue  # relative drift of H is ill-posed near H = 0
        traj = integrate_envelope(a0, b0, 100.0, cfg=cfg)
        E2s = np.abs(traj.states[:, 0]) ** 2 + 2 * np.abs(traj.states[:, 1]) ** 2
        Hs = 2 * (np.conj(traj.states[:, 0]) ** 2 * traj.states[:, 1]).real
        dE = float(np.max(np.abs(E2s - E2)) / E2)
        dH = float(np.max(np.abs(Hs - H)) / abs(H))
        worst = max(worst, dE, dH)
        assert dE < 1e-8 and dH < 1e-8, (checked, dE, dH)
        checked += 1
    _line("6", True, f"10 random states over [0,100] at rtol 1e-10: worst drift {worst:.2e}")


def _quadrature_vs_ode(inv: EnvelopeInvariants, t_end: float) -> float:
    ts = np.linspace(0.0, t_end, 181)
    u_quad = psi_quadrature(inv, ts)
    a0, b0 = state_from_invariants(inv)
    traj = integrate_envelope(
        a0, b0, float(ts[-1]), cfg=IntegratorConfig(rtol=1e-11, atol=1e-14), sample_grid=ts
    )
    u_ode = (np.abs(traj.states[:, 0]) ** 2 - 2 * np.abs(traj.states[:, 1]) ** 2) / inv.E2
    return float(np.max(np.abs(u_quad - u_ode)))


def test_criterion_7_quadrature_equivalence():
    rng = np.random.default_rng(77)
    worst = 0.0
    # four random admissible orbits plus the elementary H = 0 branch
    for _ in range(4):
        E2 = rng.uniform(1.5, 6.0)
        G = rng.uniform(0.2, 0.9)
        H = math.sqrt((1.0 - G) * E2**3 / 4.0) * rng.choice([-1.0, 1.0])
        roots = np.sort(np.roots([-1.0, -1.0, 1.0, G]).real)
        r2, r3 = roots[1], roots[2]
        u0 = rng.uniform(r2 + 0.1 * (r3 - r2), r3 - 0.1 * (r3 - r2))
        inv = EnvelopeInvariants(E2=E2, H=H, u0=u0, phi0=rng.uniform(-1, 1))
        err = _quadrature_vs_ode(inv, orbit_period(inv))
        worst = max(worst, err)
        assert err < 1e-6, (E2, H, u0, err)
    err0 = _quadrature_vs_ode(EnvelopeInvariants(E2=4.0, H=0.0, u0=1.0), 12.0)
    assert err0 < 1e-6
    worst = max(worst, err0)
    _line("7", True, f"5 orbits incl. H=0 branch: sup |u_quad - u_ode| = {worst:.2e} < 1e-6")


def test_criterion_8_neighborhood_experiment():
    rep = neighborhood_run(12.1, perturbation=0.1 + 0.0j, t0=100.0, t1=150.0)
    assert rep.trajectory.status == "completed"
    assert rep.max_comparative <= 0.1, rep.max_comparative
    _line(
        "8",
        True,
        f"f=12.1, +0.1 perturbation of the two-term truncation over [100,150]: "
        f"max |(A - A3)/A| = {rep.max_comparative:.3e} <= 0.1",
    )


def test_criterion_9_reduction_validation():
    p = PhysicalParams(omega=1.0, alpha1=1.0, alpha2=1.0, gamma=6.0, alpha=1.0, epsilon=1e-3)
    m = scale_params(p)
    assert m.f == 3.0
    A0, B0 = 1.0 + 0j, 0.5j
    x0, xd0 = 2 * A0.real, -2 * p.omega * A0.imag
    y0, yd0 = 2 * B0.real, -4 * p.omega * B0.imag
    theta1 = 1.0 / p.epsilon
    grid = np.linspace(0.0, theta1, 20001)
    full = kernels.run_physical(
        p, 0.0, [x0, xd0, y0, yd0], theta1, IntegratorConfig(rtol=1e-10, atol=1e-12), grid
    )
    assert full.status == "completed"
    norm = kernels.run_primary(
        m.f,
        1e-9,
        A0,
        B0,
        1.0,
        IntegratorConfig(rtol=1e-12, atol=1e-14),
        np.linspace(1e-9, 1.0, 2001),
    )
    tp, vp = envelope_peaks(full.times, full.states[:, 0].real)
    tau_p = p.epsilon * tp
    keep = (tau_p > 0.02) & (tau_p < 0.999)
    t_norm = tau_p[keep] / m.chi
    A_mag = np.interp(t_norm, norm.times, np.abs(norm.states[:, 0]))
    predicted = 2.0 * m.lambda_ * A_mag
    rel = np.abs(vp[keep] - predicted) / predicted
    assert rel.max() < 0.05, rel.max()
    _line(
        "9",
        True,
        f"eps=1e-3, f=3: |x| envelope tracks the reconstructed 2|a| over "
        f"tau in [0,1] with max relative error {rel.max():.2%} < 5%",
    )
