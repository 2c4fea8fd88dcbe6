"""Command-line driver.

Regime is inferred from the flags: ``--eta/--b`` (real anisotropy, hermitian),
``--gamma/--a`` (imaginary anisotropy, hermitian) or ``--eta/--a`` (non-hermitian).
``--sites`` is the number of lattice sites 2N.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import sys
from typing import Optional, Sequence

import numpy as np

from . import bethe, spectrum, thermo
from .errors import ChainError
from .hamiltonian import build_direct
from .params import ModelParams, Regime
from .records import ResultRecord, RunConfig, resolve_output, sweep, write_text
from .spin_algebra import verify_ybe
from .transfer import hamiltonian_from_transfer, transfer, transfer_hat

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2
VERIFY_TOL = 1e-10

_REGIME_FLAG = {
    "real-eta": Regime.REAL_ETA,
    "imag-eta": Regime.IMAG_ETA,
    "nonhermitian": Regime.NONHERMITIAN,
}


class UsageError(Exception):
    pass


def params_from_args(args, n_sites: Optional[int] = None) -> ModelParams:
    """Build ModelParams from parsed flags, checking them against ``--regime`` if given."""
    n = n_sites if n_sites is not None else args.sites
    eta, gamma, a, b = args.eta, args.gamma, args.a, args.b
    if eta is not None and gamma is not None:
        raise UsageError("--eta and --gamma are mutually exclusive")
    if a is not None and b is not None:
        raise UsageError("--a and --b are mutually exclusive")
    if eta is not None and b is not None:
        inferred = Regime.REAL_ETA
    elif gamma is not None and a is not None:
        inferred = Regime.IMAG_ETA
    elif eta is not None and a is not None:
        inferred = Regime.NONHERMITIAN
    else:
        raise UsageError("give --eta with --b or --a, or --gamma with --a")
    if args.regime is not None and _REGIME_FLAG[args.regime] is not inferred:
        raise UsageError(f"flags describe regime {inferred.value}, not {args.regime}")
    try:
        return ModelParams(n, inferred, eta=eta, gamma=gamma, a=a, b=b)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _grid(start: float, stop: float, step: float) -> np.ndarray:
    if step <= 0 or stop < start:
        raise UsageError("grid needs step > 0 and stop >= start")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


# ---------------------------------------------------------------------------
# commands; each returns (kind, rows, failures, summary)


def cmd_ed(args):
    p = params_from_args(args)
    res = spectrum.chain_spectrum(build_direct(p).matrix, hermitian_hint=p.is_hermitian_regime,
                                  level_tol=args.level_tol)
    ev = res.eigenvalues
    mult = np.zeros(ev.size, dtype=int)
    for value, m in res.levels:
        mult[np.abs(ev - value) <= args.level_tol * max(1.0, abs(value))] = m
    rows = [(i, float(z.real), float(z.imag), int(m)) for i, (z, m) in enumerate(zip(ev, mult))]
    emin = float(ev.real.min())
    return "spectrum", rows, [], f"{ev.size} eigenvalues, {res.n_levels} levels, min {emin:.10g}"


def cmd_bae(args):
    p = params_from_args(args)
    strategy = bethe.SolveStrategy(n_seeds=args.n_seeds, seed=args.seed)
    sectors = range(p.N + 1) if args.magnons is None else [args.magnons]
    rows, failures, n_sol = [], [], 0
    with np.errstate(all="ignore"):
        for pt in sweep(list(sectors), lambda M: _bae_rows(p, M, strategy)):
            if pt.error:
                failures.append({"M": pt.point, "error": pt.error})
            rows.extend(r for r, _ in pt.rows)
            n_sol += sum(1 for _, first in pt.rows if first)
    return "bethe", rows, failures, f"{n_sol} solutions over M in {list(sectors)}"


def _bae_rows(p: ModelParams, M: int, strategy):
    out = []
    for sol in bethe.solve_bae(p, M, strategy):
        E = bethe.energy_from_roots(sol, p)
        res = float(sol.residual)
        if M == 0:
            out.append(((0, -1, float("nan"), float("nan"), res, E.real, E.imag), True))
        for j, z in enumerate(sol.roots):
            out.append(((M, j, float(z.real), float(z.imag), res, E.real, E.imag), j == 0))
    return out


def cmd_thermo_density(args):
    p = params_from_args(args)
    lo, hi = thermo.default_u_range(p)
    start = lo if args.u_start is None else args.u_start
    stop = hi if args.u_stop is None else args.u_stop
    u = np.linspace(start, stop, args.points)
    rho = thermo.rho_ground(u, p, args.omega_max)
    rows = [(float(x), float(r)) for x, r in zip(u, rho)]
    eg = thermo.ground_energy_density(p, args.omega_max)
    return "density", rows, [], f"{len(rows)} samples, e_g = {eg:.12g}"


def cmd_dispersion(args):
    p = params_from_args(args)
    curve = thermo.dispersion_curve(p, args.samples, cut=args.cut)
    rows = [(float(r), float(s), float(k), float(e))
            for r, s, k, e in zip(curve.u_r, curve.u_s, curve.K, curve.delta_E)]
    arches = thermo.count_local_maxima(curve.delta_E)
    return "dispersion", rows, [], f"{len(rows)} points, min dE {curve.delta_E.min():.4g}, {arches} maxima"


def cmd_gap(args):
    if args.gamma is None:
        raise UsageError("gap needs --gamma")
    grid = _grid(args.a_start, min(args.a_stop, np.pi), args.a_step)
    rows, failures = [], []
    for pt in sweep(list(grid), lambda a: [_gap_row(a, args.gamma, args.omega_max)]):
        if pt.error:
            failures.append({"a": float(pt.point), "error": pt.error})
        rows.extend(pt.rows)
    g = np.array([r[1] for r in rows])
    return "gap", rows, failures, f"{len(rows)} points, gap in [{g.min():.6g}, {g.max():.6g}]"


def _gap_row(a, gamma, omega_max):
    r = thermo.gap(float(a), gamma, omega_max)
    return (r.a, r.gap, r.branch)


def cmd_reality_scan(args):
    if args.eta is None:
        raise UsageError("reality-scan needs --eta")
    if not 0 < args.eta < np.pi:
        raise UsageError("--eta must lie in (0, pi)")
    grid = spectrum.a_grid(args.a_step)
    rows, failures = [], []
    for pt in sweep(list(grid), lambda a: [_reality_row(a, args.eta, args.sites, args.reality_tol)]):
        if pt.error:
            failures.append({"a": float(pt.point), "error": pt.error})
        rows.extend(pt.rows)
    flags = np.array([r[1] for r in rows], dtype=bool)
    ivs = spectrum.flags_to_intervals(np.array([r[0] for r in rows]), flags)
    text = ", ".join(f"[{lo:.4g}, {hi:.4g}]" for lo, hi in ivs)
    return "reality", rows, failures, f"real intervals: {text}"


def _reality_row(a, eta, n_sites, rtol):
    ok, rel = spectrum.reality_flag(float(a), eta, n_sites, rtol)
    return (float(a), bool(ok), float(rel))


def cmd_verify(args):
    p = params_from_args(args)
    rng = np.random.default_rng(args.seed)
    eta = p.eta_c
    u = rng.normal(size=5) + 1j * rng.normal(size=5)
    checks = []
    checks.append(("yang_baxter", verify_ybe(u[0], u[1], u[2], eta)))
    t1, t2 = transfer(u[3], p), transfer(u[4], p)
    checks.append(("transfer_commutator", float(np.abs(t1 @ t2 - t2 @ t1).max())))
    checks.append(("transfer_crossing", float(np.abs(t1 - transfer_hat(-u[3] - eta, p)).max())))
    H = build_direct(p).matrix
    checks.append(("hamiltonian_from_transfer", float(np.abs(H - hamiltonian_from_transfer(p)).max())))
    rows = [(name, float(r), bool(r < VERIFY_TOL)) for name, r in checks]
    worst = max(r for _, r in checks)
    failures = [{"check": n, "residual": r} for n, r, ok in rows if not ok]
    return "verify", rows, failures, f"max residual {worst:.3e}"


COMMANDS = {
    "verify": cmd_verify,
    "ed": cmd_ed,
    "bae": cmd_bae,
    "thermo-density": cmd_thermo_density,
    "dispersion": cmd_dispersion,
    "gap": cmd_gap,
    "reality-scan": cmd_reality_scan,
}


def _add_model_flags(sp, sites_default=4):
    sp.add_argument("--sites", type=int, default=sites_default, help="number of sites 2N")
    sp.add_argument("--eta", type=float)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--a", type=float)
    sp.add_argument("--b", type=float)
    sp.add_argument("--regime", choices=sorted(_REGIME_FLAG))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="j1j2chain", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--output", "-o", help="output file (default: $J1J2CHAIN_OUTPUT_DIR/<command>.<format>)")
        sp.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        sp.add_argument("--seed", type=int, default=0)
        return sp

    sp = add("verify", "check Yang-Baxter, commutation and Hamiltonian reconstruction")
    _add_model_flags(sp)
    sp = add("ed", "exact diagonalization spectrum")
    _add_model_flags(sp)
    sp.add_argument("--level-tol", type=float, default=spectrum.LEVEL_RTOL)
    sp = add("bae", "solve the Bethe equations in every magnon sector")
    _add_model_flags(sp)
    sp.add_argument("--magnons", type=int, help="only this number of flipped spins")
    sp.add_argument("--n-seeds", type=int, default=200)
    sp = add("thermo-density", "ground-state root density in the thermodynamic limit")
    _add_model_flags(sp)
    sp.add_argument("--u-start", type=float)
    sp.add_argument("--u-stop", type=float)
    sp.add_argument("--points", type=int, default=401)
    sp.add_argument("--omega-max", type=int)
    sp = add("dispersion", "two-spinon excitation energies and momenta")
    _add_model_flags(sp)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--cut", choices=("diagonal", "full"), default="diagonal")
    sp = add("gap", "spinon gap versus inhomogeneity for imaginary anisotropy")
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--a-start", type=float, default=0.0)
    sp.add_argument("--a-stop", type=float, default=np.pi)
    sp.add_argument("--a-step", type=float, default=0.01)
    sp.add_argument("--omega-max", type=int)
    sp = add("reality-scan", "intervals of a with purely real spectrum (real a and eta)")
    sp.add_argument("--eta", type=float)
    sp.add_argument("--sites", type=int, default=6)
    sp.add_argument("--a-step", type=float, default=0.01)
    sp.add_argument("--reality-tol", type=float, default=spectrum.REALITY_RTOL)
    return parser


def config_from_args(args) -> RunConfig:
    skip = {"command", "output", "fmt", "seed"}
    values = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    return RunConfig(args.command, values, output=args.output, fmt=args.fmt, seed=args.seed)


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    config = config_from_args(args)
    try:
        kind, rows, failures, summary = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ChainError, ArithmeticError, RuntimeError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    record = ResultRecord(args.command, config.params | {"seed": config.seed}, kind, rows,
                          created=_dt.datetime.now(_dt.timezone.utc).isoformat(), failures=failures)
    path = resolve_output(config.output, args.command, config.fmt)
    try:
        write_text(path, record.to_csv() if config.fmt == "csv" else record.to_json())
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    status = EXIT_NUMERICAL if failures else EXIT_OK
    print(f"{args.command}: {summary}; {len(rows)} rows -> {path}"
          + (f"; {len(failures)} failed points" if failures else ""), file=stdout)
    return status


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
