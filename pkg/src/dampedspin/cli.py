"""Command-line front end.

Exit codes: 0 success, 1 usage/parse error, 2 integrator instability,
3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from . import closedform, core, dynamics, experiments, specfun
from .core import DampedGyro
from .errors import SpinDynamicsError, StepTooLarge
from .pulses import ConstantZ, SechX, field_at, parse_pulse

EXIT_OK, EXIT_USAGE, EXIT_UNSTABLE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return v


def _positive(text: str) -> float:
    v = _finite(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _nonneg(text: str) -> float:
    v = _finite(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _pulse(text: str):
    try:
        return parse_pulse(text)
    except (ValueError, OSError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _scan(text: str) -> np.ndarray:
    try:
        start, stop, num = text.split(":")
        num = int(num)
        start, stop = _finite(start), _finite(stop)
    except (ValueError, argparse.ArgumentTypeError):
        raise argparse.ArgumentTypeError(f"scan must be START:STOP:NUM, got {text!r}") from None
    if num < 1:
        raise argparse.ArgumentTypeError("scan NUM must be >= 1")
    return np.linspace(start, stop, num)


def _add_state(p):
    p.add_argument("--gamma", type=_finite, default=1.0, help="gyromagnetic factor (default 1)")
    p.add_argument("--alpha", type=_nonneg, default=None, help="Gilbert damping (default 0)")
    p.add_argument("--theta0", type=_finite, default=0.0, help="initial polar angle [rad]")
    p.add_argument("--phi0", type=_finite, default=0.0, help="initial azimuth [rad]")
    p.add_argument("--M", type=_positive, default=1.0, help="moment length (spin models only)")


def _add_time(p):
    p.add_argument("--t0", type=_finite, default=0.0, help="start time (initial state holds here)")
    p.add_argument("--t1", type=_finite, required=True, help="end time")
    p.add_argument("--dt", type=_positive, default=1e-3, help="time step")
    p.add_argument("--record-every", type=int, default=1, help="record every N steps")
    p.add_argument("--out", required=True, help="output CSV path ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dampedspin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="integrate an equation of motion with RK4")
    p.add_argument("--model", required=True, choices=["bloch", "llg", "riccati", "density", "wavefunction"])
    p.add_argument("--pulse", type=_pulse, required=True,
                   help="constz:B0 | sech:a=,tau=,t0= | cos:a=,omega=,epsilon= | tab:file.csv")
    _add_state(p)
    _add_time(p)

    p = sub.add_parser("closedform", help="evaluate a closed-form solution (damped via continuation)")
    p.add_argument("--family", required=True, choices=list(closedform.FAMILIES))
    p.add_argument("--pulse", type=_pulse, required=True)
    p.add_argument("--xi", action="store_true", help="write the stereographic coordinate instead of M")
    _add_state(p)
    _add_time(p)

    p = sub.add_parser("verify", help="check an LLG trajectory CSV against the equation of motion")
    p.add_argument("--in", dest="path", required=True, help="trajectory CSV with t,Mx,My,Mz")
    p.add_argument("--pulse", type=_pulse, required=True)
    p.add_argument("--gamma", type=_finite, default=1.0)
    p.add_argument("--alpha", type=_nonneg, default=0.0)
    p.add_argument("--tol", type=_positive, default=1e-6)

    p = sub.add_parser("sit", help="self-induced transparency with a sech pulse")
    p.add_argument("--gamma", type=_finite, default=1.0)
    p.add_argument("--a", type=_finite, required=True, help="pulse amplitude")
    p.add_argument("--tau", type=_positive, default=1.0, help="pulse width")
    p.add_argument("--center", type=_finite, default=0.0, help="pulse centre time")
    p.add_argument("--alpha", type=_nonneg, default=0.0)
    p.add_argument("--theta0", type=_finite, default=0.0)
    p.add_argument("--phi0", type=_finite, default=0.0)
    p.add_argument("--dt", type=_positive, default=1e-3)
    p.add_argument("--start", type=_finite, default=None, help="start time (default: pulse centre)")
    p.add_argument("--end", type=_finite, default=None, help="end time (default: centre + 20 tau)")
    p.add_argument("--scan", type=_scan, default=None, metavar="START:STOP:NUM",
                   help="sweep the amplitude a; writes param,value_re,value_im with value = final xi")
    p.add_argument("--scan-out", default=None)

    p = sub.add_parser("dynloc", help="dynamical localization with damping")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--chi", type=_finite, help="chi = 2 a gamma / omega")
    g.add_argument("--chi-zero", type=int, help="use the k-th zero of J0 as chi")
    g.add_argument("--a", type=_finite, help="drive amplitude (needs --omega)")
    p.add_argument("--omega", type=_positive, default=None, help="drive frequency")
    p.add_argument("--alpha", type=_nonneg, default=0.0)
    p.add_argument("--epsilon", type=_finite, default=1.0)
    p.add_argument("--gamma", type=_finite, default=1.0)
    p.add_argument("--n-max", type=int, default=50, help="truncation of the T(chi) double sum")
    p.add_argument("--scan", type=_scan, default=None, metavar="START:STOP:NUM")
    p.add_argument("--scan-param", choices=["alpha", "chi"], default="alpha",
                   help="parameter swept by --scan; value is the secular frequency")
    p.add_argument("--scan-out", default=None)
    return parser


# -- helpers --------------------------------------------------------------------------

def _open_out(path):
    if path == "-":
        return sys.stdout
    return open(path, "w", newline="")


def _write_rows(path, header, rows):
    fh = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([f"{v:.12g}" for v in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def _initial_state(model: str, args):
    if model in ("bloch", "llg"):
        return core.spin_from_angles(args.theta0, args.phi0, args.M)
    if args.M != 1.0:
        raise UsageError(f"--M must be 1 for the {model} model (pure two-level state)")
    if model == "riccati":
        return core.xi_from_angles(args.theta0, args.phi0)
    if model == "density":
        return core.spin_to_density(core.spin_from_angles(args.theta0, args.phi0)).matrix()
    return core.wavefunction_from_angles(args.theta0, args.phi0)


RHS = {
    "bloch": dynamics.bloch_rhs,
    "llg": dynamics.llg_rhs,
    "riccati": dynamics.riccati_rhs,
    "density": dynamics.damped_density_rhs,
    "wavefunction": dynamics.damped_wavefunction_rhs,
}


# -- commands -------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    if args.model == "bloch" and args.alpha is not None:
        raise UsageError("--alpha is not allowed for the undamped bloch model")
    alpha = args.alpha or 0.0
    cfg = dynamics.EvolutionConfig(args.t0, args.t1, args.dt, DampedGyro(args.gamma, alpha),
                                   args.pulse, args.record_every)
    try:
        traj = dynamics.integrate(RHS[args.model], _initial_state(args.model, args), cfg)
        code = EXIT_OK
    except StepTooLarge as exc:
        traj, code = exc.trajectory, EXIT_UNSTABLE
        print(f"error: {exc}", file=sys.stderr)
    dynamics.write_trajectory_csv(sys.stdout if args.out == "-" else args.out, traj)
    print(f"norm_drift={traj.norm_drift:.3e}", file=sys.stderr if args.out == "-" else sys.stdout)
    return code


def cmd_closedform(args) -> int:
    alpha = args.alpha or 0.0
    cfg = dynamics.EvolutionConfig(args.t0, args.t1, args.dt, DampedGyro(args.gamma, alpha),
                                   args.pulse, args.record_every)
    if args.family == "precession":
        if not isinstance(args.pulse, ConstantZ):
            raise UsageError("the precession family needs a constz pulse")
        params = closedform.PrecessionSolution(args.theta0, args.phi0, args.gamma * args.pulse.B0, M=args.M)
        # the precession formulas take t = 0 as the reference time
        shift = args.t0
    else:
        params = closedform.LinearXSolution.from_angles(args.theta0, args.phi0, args.gamma, args.pulse,
                                                        M=args.M, t_ref=args.t0)
        shift = 0.0
    n = cfg.n_steps
    times = [args.t0 + i * (args.t1 - args.t0) / n for i in range(0, n + 1, args.record_every)]
    if times[-1] != args.t1 and n % args.record_every:
        times.append(args.t1)
    rows = []
    for t in times:
        if args.xi:
            xi = closedform.family_xi(args.family, params, alpha, t - shift)
            rows.append((t, xi.real, xi.imag))
        else:
            rows.append((t, *closedform.bloch_to_llg(args.family, params, alpha, t - shift)))
    header = ("t", "re_xi", "im_xi") if args.xi else ("t", "Mx", "My", "Mz")
    _write_rows(args.out, header, rows)
    return EXIT_OK


def read_spin_csv(path) -> tuple:
    """Read ``t,Mx,My,Mz``; raises UsageError naming the offending line."""
    times, states = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["t", "Mx", "My", "Mz"]:
            raise UsageError(f"{path}:1: expected header t,Mx,My,Mz")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise UsageError(f"{path}:{lineno}: expected 4 columns, got {len(row)}")
            try:
                vals = [float(v) for v in row]
            except ValueError:
                raise UsageError(f"{path}:{lineno}: non-numeric value") from None
            times.append(vals[0])
            states.append(vals[1:])
    if len(times) < 3:
        raise UsageError(f"{path}: need at least 3 rows to differentiate")
    t = np.array(times)
    if np.any(np.diff(t) <= 0):
        raise UsageError(f"{path}: times are not strictly increasing")
    return t, np.array(states)


def cmd_verify(args) -> int:
    t, M = read_spin_csv(args.path)
    gyro = DampedGyro(args.gamma, args.alpha)
    norms = np.linalg.norm(M, axis=1)
    mnorm = float(norms[0])
    drift = float(np.max(np.abs(norms - mnorm)))
    fd = (M[2:] - M[:-2]) / (t[2:] - t[:-2])[:, None]
    ll_res = gil_res = 0.0
    for i in range(1, len(t) - 1):
        B = field_at(args.pulse, t[i])
        d = fd[i - 1]
        ll_res = max(ll_res, float(np.linalg.norm(d - dynamics.llg_rhs(M[i], B, gyro, mnorm))))
        gil_res = max(gil_res, dynamics.gilbert_residual(M[i], d, B, gyro, mnorm))
    print(f"llg_residual={ll_res:.3e}")
    print(f"gilbert_residual={gil_res:.3e}")
    print(f"norm_drift={drift:.3e}")
    ok = ll_res <= args.tol and drift <= args.tol
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_sit(args) -> int:
    gyro = DampedGyro(args.gamma, args.alpha)
    initial = core.spin_from_angles(args.theta0, args.phi0)
    check = experiments.sit_resonance_check(args.gamma, args.a, args.tau, args.alpha)
    print("[resonance]")
    print(check.to_text(), end="")
    report = experiments.sit_run(SechX(args.a, args.tau, args.center), gyro, initial, args.dt,
                                 args.start, args.end)
    print("[run]")
    print(report.to_text(), end="")
    if args.alpha > 0 and report.resonance_n is not None and args.theta0 == 0:
        x_bar = report.x_infinity / (1 + args.alpha ** 2)
        print("[resonant final state]")
        print("expected=" + experiments._fmt_value(experiments.sit_final_state(args.alpha, x_bar)))
    if args.scan is not None:
        rows = []
        for a in args.scan:
            r = experiments.sit_run(SechX(float(a), args.tau, args.center), gyro, initial, args.dt,
                                    args.start, args.end)
            rows.append((float(a), core.stereographic(r.final_state, 1.0)))
        experiments.write_scan_csv(args.scan_out or "sit_scan.csv", rows)
    return EXIT_OK


def cmd_dynloc(args) -> int:
    if args.chi is not None:
        chi = args.chi
    elif args.chi_zero is not None:
        chi = specfun.j0_zero(args.chi_zero)
    else:
        if args.omega is None:
            raise UsageError("--a needs --omega")
        chi = 2 * args.a * args.gamma / args.omega
    if args.n_max < 1:
        raise UsageError("--n-max must be >= 1")
    report = experiments.dynloc_report(chi, args.alpha, args.epsilon, args.gamma, args.n_max)
    print(report.to_text(), end="")
    if args.omega is not None:
        omega_res = experiments.resonant_secular(chi, args.gamma, args.epsilon, args.omega, args.n_max)
        print(f"resonant_secular={omega_res:.12g}")
    if args.a is not None:
        q2n = experiments.dynloc_q2_numeric(args.a, args.gamma, args.omega, args.alpha)
        print(f"q2_numeric={experiments._fmt_value(q2n)}")
    if args.scan is not None:
        rows = []
        for v in args.scan:
            v = float(v)
            if args.scan_param == "alpha":
                rows.append((v, experiments.dynloc_secular(args.epsilon, args.gamma, chi, v)))
            else:
                rows.append((v, experiments.dynloc_secular(args.epsilon, args.gamma, v, args.alpha)))
        experiments.write_scan_csv(args.scan_out or "dynloc_scan.csv", rows)
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "closedform": cmd_closedform,
    "verify": cmd_verify,
    "sit": cmd_sit,
    "dynloc": cmd_dynloc,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpinDynamicsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
