"""Command-line interface.

Subcommands mirror the package surface: simulate, threshold, series,
stability, envelope, reduce, neighborhood.  Outputs are comma-delimited
text with a header row; floats print with 17 significant digits so files
round-trip exactly.  Exit codes: 0 success, 1 domain error (for example a
forcing below the capture threshold), 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import envelope as env
from . import experiments as xp
from . import stability as stab
from .asymptotics import SeriesFamily, bounded_series, growing_series
from .integrator import IntegratorConfig
from .model import PhysicalParams
from .reduction import scale_params

_FAMILIES = {
    "bounded": SeriesFamily.BOUNDED,
    "growing-plus": SeriesFamily.GROWING_PLUS,
    "growing-minus": SeriesFamily.GROWING_MINUS,
}


def _g(x: float) -> str:
    return "%.17g" % x


def _emit(lines, out_path) -> None:
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _add_simulate(sub) -> None:
    p = sub.add_parser("simulate", help="integrate the primary resonance system")
    p.add_argument("--f", type=float, required=True)
    p.add_argument("--t0", type=float, default=xp.DEFAULT_T0)
    p.add_argument("--t1", type=float, default=xp.DEFAULT_T1)
    p.add_argument("--a0-re", type=float, default=xp.DEFAULT_A0.real)
    p.add_argument("--a0-im", type=float, default=xp.DEFAULT_A0.imag)
    p.add_argument("--b0-re", type=float, default=xp.DEFAULT_B0.real)
    p.add_argument("--b0-im", type=float, default=xp.DEFAULT_B0.imag)
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--atol", type=float, default=1e-11)
    p.add_argument("--samples", type=int, default=2001)
    p.add_argument("--frame", choices=("rotating", "primary"), default="rotating")
    p.add_argument("--out", default=None)


def _cmd_simulate(args) -> int:
    cfg = xp.RunConfig(
        f=args.f,
        t0=args.t0,
        t1=args.t1,
        A0=complex(args.a0_re, args.a0_im),
        B0=complex(args.b0_re, args.b0_im),
        integrator=IntegratorConfig(rtol=args.rtol, atol=args.atol),
        sample_count=args.samples,
    )
    traj = xp.simulate(cfg, frame=args.frame)
    if args.out is None:
        lines = ["t,re_A,im_A,re_B,im_B,abs_A,abs_B"]
        for i, t in enumerate(traj.times):
            A, B = traj.states[i, 0], traj.states[i, 1]
            lines.append(
                ",".join(_g(v) for v in (t, A.real, A.imag, B.real, B.imag, abs(A), abs(B)))
            )
        lines.append(f"# status = {traj.status}")
        _emit(lines, None)
    else:
        xp.emit_run(traj, args.out)
        print(f"wrote {len(traj)} samples to {args.out} (status: {traj.status})")
    return 0


def _add_threshold(sub) -> None:
    p = sub.add_parser("threshold", help="bisect the empirical capture boundary")
    p.add_argument("--f-lo", type=float, required=True)
    p.add_argument("--f-hi", type=float, required=True)
    p.add_argument("--width", type=float, default=0.05)
    p.add_argument("--t0", type=float, default=xp.DEFAULT_T0)
    p.add_argument("--t1", type=float, default=xp.DEFAULT_T1)
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--workers", type=int, default=1)


def _cmd_threshold(args) -> int:
    template = xp.RunConfig(
        f=args.f_lo,
        t0=args.t0,
        t1=args.t1,
        integrator=IntegratorConfig(rtol=args.rtol),
    )
    scan = xp.threshold_scan(
        args.f_lo, args.f_hi, template, width=args.width, max_workers=args.workers
    )
    lines = ["f,verdict,late_ratio,drift,window_lo,window_hi"]
    for v in scan.table:
        lines.append(
            f"{_g(v.f)},{v.verdict},{_g(v.late_ratio)},{_g(v.drift)},"
            f"{_g(v.window[0])},{_g(v.window[1])}"
        )
    lines.append(
        f"# empirical threshold = {_g(scan.threshold)} in bracket "
        f"[{_g(scan.bracket[0])}, {_g(scan.bracket[1])}] for the given initial data"
    )
    lines.append("# the growing families exist for |f| >= 12 regardless of initial data")
    _emit(lines, None)
    return 0


def _add_series(sub) -> None:
    p = sub.add_parser("series", help="asymptotic-series coefficient table")
    p.add_argument("--f", type=float, required=True)
    p.add_argument("--family", choices=sorted(_FAMILIES), required=True)
    p.add_argument("--order", type=int, default=5)


def _cmd_series(args) -> int:
    family = _FAMILIES[args.family]
    if family is SeriesFamily.BOUNDED:
        s = bounded_series(args.f, args.order)
    else:
        s = growing_series(args.f, family, args.order)
    lines = ["k,re_a,im_a,re_b,im_b"]
    for k in range(s.kmin, s.K + 1):
        a, b = s.coeff(k)
        lines.append(f"{k},{_g(a.real)},{_g(a.imag)},{_g(b.real)},{_g(b.imag)}")
    if s.psi is not None:
        lines.append(f"# psi = {_g(s.psi)}")
    _emit(lines, None)
    return 0


def _add_stability(sub) -> None:
    p = sub.add_parser("stability", help="variational eigenvalues along a family")
    p.add_argument("--f", type=float, required=True)
    p.add_argument("--family", choices=sorted(_FAMILIES), required=True)
    p.add_argument("--t", type=float, required=True)


def _cmd_stability(args) -> int:
    rep = stab.eigen_report(args.f, _FAMILIES[args.family], args.t)
    lines = ["index,numeric_re,numeric_im,asymptotic_re,asymptotic_im"]
    for i in range(4):
        lines.append(
            f"{i},{_g(rep.numeric[i].real)},{_g(rep.numeric[i].imag)},"
            f"{_g(rep.asymptotic[i].real)},{_g(rep.asymptotic[i].imag)}"
        )
    lines.append(f"# classification = {rep.classification}")
    _emit(lines, None)
    return 0


def _add_envelope(sub) -> None:
    p = sub.add_parser("envelope", help="leading-envelope orbit from its invariants")
    p.add_argument("--e2", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--u0", type=float, required=True)
    p.add_argument("--phi0", type=float, default=0.0)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--samples", type=int, default=501)
    p.add_argument("--out", default=None)


def _cmd_envelope(args) -> int:
    inv = env.EnvelopeInvariants(E2=args.e2, H=args.h, u0=args.u0, phi0=args.phi0)
    alpha0, beta0 = env.state_from_invariants(inv)
    grid = np.linspace(0.0, args.t1, args.samples)
    traj = env.integrate_envelope(alpha0, beta0, args.t1, sample_grid=grid)
    a = traj.states[:, 0]
    b = traj.states[:, 1]
    u = (np.abs(a) ** 2 - 2 * np.abs(b) ** 2) / inv.E2
    phi = np.unwrap(np.angle(a))
    psi = np.unwrap(np.angle(b))
    lines = ["t,u,phi,psi,re_alpha0,im_alpha0,re_beta0,im_beta0"]
    for i, t in enumerate(traj.times):
        lines.append(
            ",".join(
                _g(v)
                for v in (t, u[i], phi[i], psi[i], a[i].real, a[i].imag, b[i].real, b[i].imag)
            )
        )
    _emit(lines, args.out)
    return 0


def _add_reduce(sub) -> None:
    p = sub.add_parser("reduce", help="scaling map from physical parameters")
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--alpha1", type=float, required=True)
    p.add_argument("--alpha2", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=0.0)


def _cmd_reduce(args) -> int:
    p = PhysicalParams(
        omega=args.omega,
        alpha1=args.alpha1,
        alpha2=args.alpha2,
        gamma=args.gamma,
        alpha=args.alpha,
        epsilon=args.epsilon,
    )
    m = scale_params(p)
    for name, val in (("kappa", m.kappa), ("lambda", m.lambda_), ("chi", m.chi), ("f", m.f)):
        print(f"{name}={_g(val)}")
    print("kappa,lambda,chi,f")
    print(",".join(_g(v) for v in (m.kappa, m.lambda_, m.chi, m.f)))
    return 0


def _add_neighborhood(sub) -> None:
    p = sub.add_parser(
        "neighborhood", help="numeric run beside the growing-plus truncation"
    )
    p.add_argument("--f", type=float, required=True)
    p.add_argument("--eps-perturb", type=float, default=0.1)
    p.add_argument("--t0", type=float, default=100.0)
    p.add_argument("--t1", type=float, default=150.0)
    p.add_argument("--samples", type=int, default=1001)
    p.add_argument("--out", default=None)


def _cmd_neighborhood(args) -> int:
    rep = xp.neighborhood_run(
        args.f,
        perturbation=complex(args.eps_perturb, 0.0),
        t0=args.t0,
        t1=args.t1,
        sample_count=args.samples,
    )
    lines = ["t,comparative_difference,abs_A"]
    for i, t in enumerate(rep.trajectory.times):
        lines.append(
            f"{_g(t)},{_g(rep.comparative[i])},{_g(abs(rep.trajectory.states[i, 0]))}"
        )
    lines.append(f"# max comparative difference = {_g(rep.max_comparative)}")
    lines.append(f"# mean comparative difference = {_g(rep.mean_comparative)}")
    _emit(lines, args.out)
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "threshold": _cmd_threshold,
    "series": _cmd_series,
    "stability": _cmd_stability,
    "envelope": _cmd_envelope,
    "reduce": _cmd_reduce,
    "neighborhood": _cmd_neighborhood,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="autores",
        description="capture into autoresonance: simulation and asymptotics toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_simulate(sub)
    _add_threshold(sub)
    _add_series(sub)
    _add_stability(sub)
    _add_envelope(sub)
    _add_reduce(sub)
    _add_neighborhood(sub)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
