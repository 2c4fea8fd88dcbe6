"""Acceptance gate: ten criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import io
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import REFERENCE_IMAG, REFERENCE_REAL, reference_levels  # noqa: E402

from j1j2chain import thermo  # noqa: E402
from j1j2chain.bethe import (  # noqa: E402
    IMAG_U, REAL_U, SolveStrategy, energy_from_roots, ground_state_quantum_numbers,
    match_spectrum, root_set_distance, solve_all_sectors, solve_log_bae,
)
from j1j2chain.cli import run  # noqa: E402
from j1j2chain.hamiltonian import (  # noqa: E402
    assemble, build_direct, build_isotropic_limit, magnon_number, xxz_reference,
)
from j1j2chain.params import ModelParams  # noqa: E402
from j1j2chain.spectrum import (  # noqa: E402
    chain_spectrum, eigs, intervals_match, predicted_real_intervals, reality_scan,
)
from j1j2chain.spin_algebra import verify_ybe  # noqa: E402
from j1j2chain.transfer import TransferFamily, hamiltonian_from_transfer  # noqa: E402


def _reference_criterion(params, rows, native, check_roots):
    t0 = time.perf_counter()
    ed = chain_spectrum(build_direct(params).matrix, hermitian_hint=True)
    values = np.array([v.real for v, _ in ed.levels])
    expected = np.array(reference_levels(rows))
    n_ok = ed.n_levels == 8
    dev = float(np.abs(values - expected).max()) if n_ok else float("inf")
    sols = solve_all_sectors(params, SolveStrategy(seed=0))
    energies = [energy_from_roots(s, params) for M in sols for s in sols[M]]
    rep = match_spectrum(energies, ed, tol=1e-6)
    bae_ok = rep.coverage_fraction == 1.0 and not rep.unmatched_bethe
    roots_ok, worst_root = True, 0.0
    if check_roots:
        for roots, _, _ in rows:
            d = min((root_set_distance(s.roots, roots, native) for s in sols[len(roots)]),
                    default=float("inf"))
            worst_root = max(worst_root, d)
        roots_ok = worst_root < 1e-3
    elapsed = time.perf_counter() - t0
    ok = n_ok and dev < 5e-4 and bae_ok and roots_ok and elapsed < 10
    detail = (f"{ed.n_levels} levels, max |dE| {dev:.1e}, Bethe coverage {rep.coverage_fraction:.2f}"
              f" ({len(rep.unmatched_bethe)} stray)"
              + (f", worst root distance {worst_root:.1e}" if check_roots else "")
              + f", {elapsed:.1f} s")
    return ok, detail


def criterion_1():
    return _reference_criterion(ModelParams.real_eta(4, 1.0, 1.0), REFERENCE_REAL, REAL_U, False)


def criterion_2():
    return _reference_criterion(ModelParams.imag_eta(4, 1.0, 1.0), REFERENCE_IMAG, IMAG_U, True)


def _random_params(rng, regime, n_sites):
    while True:
        if regime == "real":
            p = ModelParams.real_eta(n_sites, rng.uniform(0.3, 2.8), rng.uniform(-1.2, 1.2))
        elif regime == "imag":
            p = ModelParams.imag_eta(n_sites, rng.uniform(0.3, 2.0), rng.uniform(0, np.pi))
        else:
            p = ModelParams.nonhermitian(n_sites, rng.uniform(0.3, 2.8), rng.uniform(0, np.pi))
        # stay away from the resonance phi(2a) = 0 and from sin(2a) = 0
        a, eta = p.a_c, p.eta_c
        if min(abs(np.sin(2 * a + eta)), abs(np.sin(2 * a - eta)), abs(np.sin(2 * a))) > 0.1:
            return p


def criterion_3():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = {"H": 0.0, "ybe": 0.0, "comm": 0.0, "cross": 0.0}
    draws = 0
    for regime in ("real", "imag", "nonhermitian"):
        for k in range(8):
            p = _random_params(rng, regime, 4 if k % 2 == 0 else 6)
            fam = TransferFamily(p)
            u = rng.uniform(-0.8, 0.8, 5) + 1j * rng.uniform(-0.4, 0.4, 5)
            worst["H"] = max(worst["H"], float(np.abs(build_direct(p).matrix
                                                       - hamiltonian_from_transfer(p)).max()))
            worst["ybe"] = max(worst["ybe"], verify_ybe(u[0], u[1], u[2], p.eta_c))
            t1, t2 = fam.t(u[3]), fam.t(u[4])
            worst["comm"] = max(worst["comm"], float(np.abs(t1 @ t2 - t2 @ t1).max()))
            th = fam.t_hat(-u[3] - p.eta_c)
            worst["cross"] = max(worst["cross"], float(np.abs(t1 - th).max()))
            draws += 1
    elapsed = time.perf_counter() - t0
    ok = (draws >= 20 and worst["H"] < 1e-10 and worst["ybe"] < 1e-12 and worst["comm"] < 1e-10
          and worst["cross"] < 1e-10 and elapsed < 120)
    detail = (f"{draws} draws, H {worst['H']:.1e}, YBE {worst['ybe']:.1e}, "
              f"[t,t] {worst['comm']:.1e}, crossing {worst['cross']:.1e}, {elapsed:.1f} s")
    return ok, detail


def criterion_4():
    worst = 0.0
    for a, eta in [(0.0, 0.7), (0.0, 2.3), (0.0, 1.1j), (0.0j, 0.4)]:
        worst = max(worst, float(np.abs(assemble(8, a, eta) - xxz_reference(8, eta)).max()))
    worst = max(worst, float(np.abs(build_direct(ModelParams.real_eta(8, 1.0, 0.0)).matrix
                                    - xxz_reference(8, 1.0)).max()))
    abar = 0.6
    target = build_isotropic_limit(abar, 6)
    eps = np.array([4e-2, 2e-2, 1e-2, 5e-3])
    err = np.array([np.abs(assemble(6, abar * e, e) - target).max() for e in eps])
    orders = np.log(err[:-1] / err[1:]) / np.log(eps[:-1] / eps[1:])
    ok = worst < 1e-14 and orders.min() >= 1
    return ok, f"XXZ max deviation {worst:.1e}, isotropic-limit orders {np.round(orders, 2).tolist()}"


def criterion_5():
    worst, details = 0.0, True
    for eta, b in [(1.0, 1.0), (0.7, 0.5), (2.0, 0.5)]:
        for n_sites in (8, 10, 12):
            p = ModelParams.real_eta(n_sites, eta, b)
            sol = solve_log_bae(p, ground_state_quantum_numbers(p.N))
            H = build_direct(p).matrix
            res = eigs(H, hermitian_hint=True, sectors=magnon_number(n_sites))
            e0 = float(res.eigenvalues.real.min())
            mag = magnon_number(n_sites)
            block = H[np.ix_(mag == p.N, mag == p.N)]
            e0_half = float(np.linalg.eigvalsh(block)[0])
            worst = max(worst, abs(energy_from_roots(sol, p).real - e0))
            # M = N magnons means zero magnetization; the ED ground state sits in that sector
            details &= sol.M == p.N and abs(e0_half - e0) < 1e-9
    ok = worst < 1e-8 and details
    return ok, f"max |E_Bethe - E_ED| {worst:.1e} over 2N in (8, 10, 12), M = N and S^z = 0: {details}"


def criterion_6():
    real = [ModelParams.real_eta(4, 1.0, 0.3), ModelParams.real_eta(4, 0.7, 0.5)]
    imag = [ModelParams.imag_eta(4, 1.0, 1.0), ModelParams.imag_eta(4, 0.5, 0.3)]
    resid = max(thermo.density_equation_residual(p) for p in real)
    norm = max(abs(thermo.density_normalization(p) - 0.5) for p in real + imag)
    trends, ok_trend = [], True
    for p in real + imag:
        eg = thermo.ground_energy_density(p)
        dev = []
        for n_sites in (8, 10, 12):
            q = p.with_sites(n_sites)
            e0 = eigs(build_direct(q).matrix, hermitian_hint=True,
                      sectors=magnon_number(n_sites)).eigenvalues.real.min()
            dev.append(abs(e0 / n_sites - eg))
        ok_trend &= dev[0] > dev[1] > dev[2]
        trends.append("/".join(f"{d:.3f}" for d in dev))
    ok = resid < 1e-6 and norm < 1e-8 and ok_trend
    return ok, (f"integral-equation residual {resid:.1e}, normalization {norm:.1e}, "
                f"|e_ED - e_g| at 2N=8/10/12: {'; '.join(trends)}")


def criterion_7():
    g = 1.0
    rng = np.random.default_rng(7)
    sym = 0.0
    for a in rng.uniform(0, np.pi / 2, 40):
        ref = thermo.gap(a, g).gap
        for b in (np.pi / 2 - a, np.pi / 2 + a, np.pi - a):
            sym = max(sym, abs(thermo.gap(b, g).gap - ref))
    grid = np.arange(0, np.pi + 1e-12, 0.005)
    vals = np.array([thermo.gap(a, g).gap for a in grid])
    inner = (vals[1:-1] > vals[:-2]) & (vals[1:-1] >= vals[2:])
    peaks = grid[1:-1][inner]
    peaks_ok = (peaks.size == 2 and abs(peaks[0] - np.pi / 4) <= 0.005
                and abs(peaks[1] - 3 * np.pi / 4) <= 0.005)
    positive = bool(np.all(vals > 0))
    cont = max(abs(thermo.gap_series(a, g, "outer") - thermo.gap_series(a, g, "inner"))
               for a in (np.pi / 4, 3 * np.pi / 4))
    ok = sym < 1e-10 and peaks_ok and positive and cont < 1e-10
    return ok, (f"symmetry {sym:.1e}, maxima at {np.round(peaks, 4).tolist()}, min gap "
                f"{vals.min():.4f}, branch mismatch {cont:.1e}")


def criterion_8():
    arches = {
        "gamma=1,a=1": thermo.diagonal_arch_count(ModelParams.imag_eta(4, 1.0, 1.0)),
        "eta=1,b=2": thermo.diagonal_arch_count(ModelParams.real_eta(4, 1.0, 2.0)),
    }
    small_b = thermo.diagonal_arch_count(ModelParams.real_eta(4, 1.0, 0.05))
    envelope = {
        "gamma=1,a=1": thermo.envelope_arch_count(ModelParams.imag_eta(4, 1.0, 1.0), 401),
        "eta=1,b=2": thermo.envelope_arch_count(ModelParams.real_eta(4, 1.0, 2.0), 401),
    }
    curve = thermo.dispersion_curve(ModelParams.real_eta(4, 1.0, 2.0), 401, cut="full")
    gapless = float(curve.delta_E.min())
    ok = all(c >= 3 for c in arches.values()) and small_b == 1 and gapless < 1e-3
    return ok, (f"maxima along u_r=u_s {arches} (need >= 3), b=0.05 -> {small_b}, "
                f"min dE {gapless:.1e}; continuum upper edge arches {envelope}")


def criterion_9():
    t0 = time.perf_counter()
    parts, ok = [], True
    for eta in (0.6, 0.8):
        scan = reality_scan(eta, 6, a_step=0.01)
        match = intervals_match(scan.intervals, predicted_real_intervals(eta), tol=0.01 + 1e-9)
        ok &= match
        parts.append(f"eta={eta}: {'match' if match else 'mismatch'}")
    scan = reality_scan(2.0, 6, a_step=0.01)
    all_real = bool(scan.all_real_flags.all())
    ok &= all_real
    ivs = ", ".join(f"[{lo:.2f}, {hi:.2f}]" for lo, hi in scan.intervals)
    parts.append(f"eta=2.0 real for all a: {all_real} (real on {ivs})")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    return ok, "; ".join(parts) + f"; {elapsed:.1f} s"


def criterion_10(tmp_dir=None):
    import tempfile

    commands = [
        ["bae", "--sites", "4", "--eta", "0.8", "--a", "0.3", "--n-seeds", "40", "--seed", "11"],
        ["bae", "--sites", "4", "--gamma", "1", "--a", "1", "--n-seeds", "40", "--seed", "11"],
        ["ed", "--sites", "6", "--eta", "0.8", "--a", "0.3"],
        ["dispersion", "--gamma", "1", "--a", "1", "--samples", "200", "--cut", "full"],
        ["gap", "--gamma", "1", "--a-step", "0.01"],
    ]
    same = 0
    with tempfile.TemporaryDirectory(dir=tmp_dir) as d:
        for k, cmd in enumerate(commands):
            blobs = []
            for rep in range(2):
                path = Path(d) / f"{k}_{rep}.csv"
                run(cmd + ["-o", str(path)], stdout=io.StringIO())
                blobs.append(path.read_bytes())
            same += blobs[0] == blobs[1] and len(blobs[0]) > 0
    return same == len(commands), f"{same}/{len(commands)} commands byte-identical across runs"


CRITERIA = [
    (1, "real-anisotropy reference spectrum", criterion_1),
    (2, "imaginary-anisotropy reference spectrum", criterion_2),
    (3, "constructive identities", criterion_3),
    (4, "XXZ and isotropic limits", criterion_4),
    (5, "log-form ground state", criterion_5),
    (6, "thermodynamic-limit consistency", criterion_6),
    (7, "gap properties", criterion_7),
    (8, "dispersion structure", criterion_8),
    (9, "reality intervals", criterion_9),
    (10, "determinism", criterion_10),
]


def _line(n, name, ok, detail):
    return f"{'PASS' if ok else 'FAIL'}  criterion {n:>2} ({name}): {detail}"


@pytest.mark.parametrize("n,name,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(n, name, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(n, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n, name, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(_line(n, name, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
