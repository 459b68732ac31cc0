"""Vector-field definitions: pinned values, conjugacies, conservation."""

import numpy as np
import pytest

from autoresonance import (
    IntegratorConfig,
    PhysicalParams,
    integrate_complex,
    rhs_envelope_leading,
    rhs_physical,
    rhs_primary,
    rhs_rotating,
    rhs_slow,
    scale_params,
)


def test_rhs_primary_zero_state():
    dA, dB = rhs_primary(0.0, 0j, 0j, 5.0)
    assert dA == -5j
    assert dB == 0


def test_rhs_primary_substitution():
    dA, dB = rhs_primary(1.0, 2 + 0j, 0j, 0.0)
    assert dA == -4j
    assert dB == -1j


def test_rhs_primary_hand_value():
    # hand substitution: t=2, A=1+i, B=i, f=12
    dA, dB = rhs_primary(2.0, 1 + 1j, 1j, 12.0)
    assert abs(dA - (4.5 - 16.5j)) < 1e-15
    assert abs(dB - 8.5) < 1e-15


def test_rhs_slow_forcing_only():
    p = PhysicalParams(omega=1.0, alpha1=1.0, alpha2=1.0, gamma=2.0, alpha=1.0)
    da, db = rhs_slow(0.0, 0j, 0j, p)
    assert da == -1j
    assert db == 0


def test_rhs_slow_substitution():
    p = PhysicalParams(omega=1.0, alpha1=1.0, alpha2=1.0, gamma=0.0, alpha=1.0)
    da, db = rhs_slow(1.0, 1 + 0j, 0j, p)
    assert da == -2j
    assert abs(db - (-0.25j)) < 1e-16


def test_rhs_rotating_forcing_only():
    da, db = rhs_rotating(0.0, 0j, 0j, 3.0)
    assert da == -3j
    assert db == 0


def test_rhs_rotating_quadratic_only():
    for t in (0.0, 1.7, 12.0):
        da, db = rhs_rotating(t, 2 + 0j, 0j, 0.0)
        assert da == 0
        assert db == -1j


def test_rhs_envelope_leading_values():
    assert rhs_envelope_leading(0j, 5 + 0j) == (0j, 0j)
    da, db = rhs_envelope_leading(2 + 0j, 0j)
    assert da == 0
    assert db == -1j
    da, db = rhs_envelope_leading(1 + 1j, 1 + 0j)
    assert abs(da - (-0.5 - 0.5j)) < 1e-16
    assert abs(db - 0.5) < 1e-16


def test_rhs_physical_decoupled_oscillators():
    p = PhysicalParams(omega=1.0, alpha1=1.0, alpha2=1.0, gamma=1.0, alpha=1.0, epsilon=0.0)
    assert rhs_physical(0.3, 1.0, 0.0, 0.0, 0.0, p) == (0.0, -1.0, 0.0, 0.0)
    # the second oscillator carries frequency 2*omega
    assert rhs_physical(0.0, 0.0, 0.0, 1.0, 0.0, p) == (0.0, 0.0, 0.0, -4.0)


def test_physical_params_validation():
    with pytest.raises(ValueError):
        PhysicalParams(omega=0.0, alpha1=1.0, alpha2=1.0, gamma=1.0, alpha=1.0)
    with pytest.raises(ValueError):
        PhysicalParams(omega=1.0, alpha1=1.0, alpha2=-1.0, gamma=1.0, alpha=1.0)
    with pytest.raises(ValueError):
        PhysicalParams(omega=1.0, alpha1=1.0, alpha2=1.0, gamma=1.0, alpha=-2.0)
    with pytest.raises(ValueError):
        PhysicalParams(omega=1.0, alpha1=1.0, alpha2=1.0, gamma=1.0, alpha=1.0, epsilon=-0.1)


def test_forcing_phase_is_carrier_plus_slow_chirp():
    # phi = (omega + eps*alpha*tau)*theta = omega*theta + alpha*tau^2
    p = PhysicalParams(omega=2.0, alpha1=1.0, alpha2=1.0, gamma=1.0, alpha=3.0, epsilon=1e-2)
    theta = 50.0
    tau = p.slow_time(theta)
    assert np.isclose(p.forcing_phase(theta), p.omega * theta + p.alpha * tau**2, rtol=1e-15)


def test_scaling_consistency_slow_vs_primary():
    # the rescaling (a, b, tau) = (lam*A, kap*B, chi*t) maps the slow vector
    # field exactly onto the primary one with the normalized forcing
    rng = np.random.default_rng(42)
    for _ in range(20):
        p = PhysicalParams(
            omega=rng.uniform(0.5, 3.0),
            alpha1=rng.uniform(0.2, 2.0),
            alpha2=rng.uniform(0.2, 2.0),
            gamma=rng.uniform(-5.0, 5.0),
            alpha=rng.uniform(0.2, 3.0),
        )
        m = scale_params(p)
        t = rng.uniform(0.1, 10.0)
        A = complex(rng.normal(), rng.normal())
        B = complex(rng.normal(), rng.normal())
        dA, dB = rhs_primary(t, A, B, m.f)
        da, db = rhs_slow(m.chi * t, m.lambda_ * A, m.kappa * B, p)
        scale = max(abs(da), abs(db), 1.0)
        assert abs(da - (m.lambda_ / m.chi) * dA) / scale < 1e-12
        assert abs(db - (m.kappa / m.chi) * dB) / scale < 1e-12


def test_envelope_conservation_identities():
    # d/dt (|a0|^2 + 2|b0|^2) and d/dt (conj(a0)^2 b0 + c.c.) vanish as
    # algebraic identities of the vector field
    rng = np.random.default_rng(7)
    for _ in range(30):
        a0 = complex(rng.normal(), rng.normal())
        b0 = complex(rng.normal(), rng.normal())
        da, db = rhs_envelope_leading(a0, b0)
        dE2 = 2 * (a0.conjugate() * da).real + 4 * (b0.conjugate() * db).real
        dH = 2 * (2 * a0.conjugate() * da.conjugate() * b0 + a0.conjugate() ** 2 * db).real
        scale = max(abs(a0), abs(b0), 1.0) ** 3
        assert abs(dE2) / scale < 1e-12
        assert abs(dH) / scale < 1e-12


def test_frame_equivalence_rotating_vs_primary():
    # integrating in the primary frame and mapping through A = a e^{-it^2}
    # agrees with integrating the rotating frame directly
    f = 2.5
    z0 = [0.3 - 0.2j, 0.1 + 0.4j]
    cfg = IntegratorConfig(rtol=1e-10, atol=1e-12)
    grid = np.linspace(1.0, 10.0, 19)

    def rhs_p(t, z):
        return rhs_primary(t, z[0], z[1], f)

    def rhs_r(t, z):
        return rhs_rotating(t, z[0], z[1], f)

    tp = integrate_complex(rhs_p, 1.0, z0, 10.0, cfg, grid)
    rot0 = np.exp(1j * 1.0)
    tr = integrate_complex(rhs_r, 1.0, [z0[0] * rot0, z0[1] * rot0**2], 10.0, cfg, grid)
    rot = np.exp(1j * tr.times**2)
    a_from_primary = tp.states[:, 0] * rot
    b_from_primary = tp.states[:, 1] * rot**2
    scale = np.abs(tr.states).max()
    tol = 10 * (cfg.atol + cfg.rtol * scale)
    assert np.max(np.abs(a_from_primary - tr.states[:, 0])) < tol
    assert np.max(np.abs(b_from_primary - tr.states[:, 1])) < tol


def test_rhs_purity_bit_identical():
    args = (1.234, 0.7 - 0.3j, -0.2 + 0.9j, 11.9)
    first = rhs_primary(*args)
    for _ in range(5):
        again = rhs_primary(*args)
        assert again == first
    p = PhysicalParams(omega=1.3, alpha1=0.7, alpha2=1.1, gamma=2.0, alpha=0.9, epsilon=1e-3)
    ph1 = rhs_physical(3.0, 0.1, 0.2, 0.3, 0.4, p)
    ph2 = rhs_physical(3.0, 0.1, 0.2, 0.3, 0.4, p)
    assert ph1 == ph2
