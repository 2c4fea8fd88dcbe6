import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from j1j2chain import thermo as T
from j1j2chain.params import ModelParams

REAL = [ModelParams.real_eta(4, 1.0, 1.0), ModelParams.real_eta(4, 0.7, 0.3),
        ModelParams.real_eta(4, 2.0, 0.0), ModelParams.real_eta(4, 1.0, 2.0)]
IMAG = [ModelParams.imag_eta(4, 1.0, 1.0), ModelParams.imag_eta(4, 0.5, 0.3),
        ModelParams.imag_eta(4, 2.0, 2.5)]
BOTH = REAL + IMAG


@settings(max_examples=25, deadline=None)
@given(st.floats(-20, 20))
def test_density_is_even(u):
    for p in BOTH:
        assert abs(T.rho_ground(u, p) - T.rho_ground(-u, p)) < 1e-14


@pytest.mark.parametrize("p", BOTH)
def test_density_normalised_to_half(p):
    assert abs(T.density_normalization(p) - 0.5) < 1e-8


@pytest.mark.parametrize("p", BOTH)
def test_closed_form_solves_integral_equation(p):
    assert T.density_equation_residual(p) < 1e-6
    grid, rho = T.solve_density_equation(p)
    assert np.abs(rho - T.rho_ground(grid, p)).max() < 1e-8


@pytest.mark.parametrize("p", [REAL[0], REAL[2], IMAG[0]])
@pytest.mark.parametrize("n", [1, 2])
def test_kernel_transform_matches_quadrature(p, n):
    for w in (0.0, 0.7, 2.0):
        if p.regime.value.startswith("imag"):
            w = round(w)
            f = lambda x: T.kernel_a(n, x, p) * math.cos(w * x)  # noqa: E731
            val = integrate.quad(f, -np.pi, np.pi, epsabs=1e-13)[0]
        else:
            f = lambda x: T.kernel_a(n, x, p) * math.cos(w * x)  # noqa: E731
            val = 2 * integrate.quad(f, 0, 80, limit=400, epsabs=1e-13)[0]
        assert abs(val - T.kernel_a_transform(n, w, p)) < 1e-9


@pytest.mark.parametrize("p", BOTH)
def test_energy_density_two_routes(p):
    assert abs(T.ground_energy_density(p) - T.ground_energy_density_direct(p)) < 1e-9


@pytest.mark.parametrize("eta", [0.5, 1.0, 2.0])
def test_gapless_xxz_limit(eta):
    # standard result for sum (xx + yy + cos(eta) zz) per bond
    f = lambda x: np.sinh((np.pi - eta) * x) / (np.sinh(np.pi * x) * np.cosh(eta * x))  # noqa: E731
    ref = np.cos(eta) - 4 * np.sin(eta) * integrate.quad(f, 0, 80, limit=400)[0]
    assert abs(T.ground_energy_density(ModelParams.real_eta(4, eta, 0.0)) - ref) < 1e-10


@pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
def test_gapped_xxz_limit(gamma):
    n = np.arange(1, 400)
    ref = np.cosh(gamma) - 4 * np.sinh(gamma) * (0.5 + 2 * np.sum(np.exp(-2 * gamma * n) / (1 + np.exp(-2 * gamma * n))))
    assert abs(T.ground_energy_density(ModelParams.imag_eta(4, gamma, 0.0)) - ref) < 1e-10
    m = np.arange(-200, 201)
    gap_ref = 4 * np.sinh(gamma) * np.sum((-1.0) ** np.abs(m) / np.cosh(gamma * m))
    assert abs(T.gap(0.0, gamma).gap - gap_ref) < 1e-10


def test_series_cutoff_tail_is_negligible():
    for g in (0.3, 1.0, 3.0):
        p = ModelParams.imag_eta(4, g, 0.7)
        assert T.series_cutoff(g) == math.ceil(28 / g)
        long = T.ground_energy_density(p, omega_max=int(200 / g))
        assert abs(T.ground_energy_density(p) - long) < 1e-10
        assert abs(T.gap(0.7, g).gap - T.gap(0.7, g, omega_max=int(200 / g)).gap) < 1e-10


@pytest.mark.parametrize("p", BOTH)
def test_momentum_derivative_is_density(p):
    u, h = np.linspace(-2.5, 2.5, 11), 1e-5
    fd = (T.one_hole_momentum(u + h, p) - T.one_hole_momentum(u - h, p)) / (2 * h)
    assert np.abs(fd + 2 * np.pi * T.rho_ground(u, p)).max() < 1e-8


@pytest.mark.parametrize("p", IMAG)
def test_momentum_series_agrees_modulo_two_pi(p):
    for ur, us in [(0.3, -0.5), (1.2, 2.0), (-3.0, 3.0)]:
        K = T.spinon_momentum(ur, us, p)
        assert -np.pi < K <= np.pi
        d = (K - T.spinon_momentum_series(ur, us, p)) / (2 * np.pi)
        assert abs(d - round(d)) < 1e-10


def test_real_momentum_range():
    p = REAL[0]
    K = [T.spinon_momentum(x, y, p) for x in (-30, 0, 30) for y in (-30, 0, 30)]
    assert min(K) >= 0 and max(K) <= 2 * np.pi
    assert 0 < T.spinon_momentum(-3.0, 5.0, p) < 2 * np.pi


@pytest.mark.parametrize("p", [REAL[1], IMAG[0]])
def test_excitation_energy_from_density_shift(p):
    for ur, us in [(0.3, -0.5), (1.2, 2.0)]:
        h = T.spinon_energy(ur, us, p)
        assert h.delta_E > 0 and abs(h.delta_E - h.eps_r - h.eps_s) < 1e-12
        assert abs(T.spinon_energy_from_backtransform(ur, us, p) - h.delta_E) < 1e-6 * h.delta_E


@pytest.mark.parametrize("p", BOTH)
def test_dispersion_nonnegative(p):
    for cut in ("diagonal", "full"):
        c = T.dispersion_curve(p, 60, cut=cut)
        assert np.all(c.delta_E >= 0)
    assert T.dispersion_curve(p, 200).delta_E.size == 200


def test_gapless_minimum_near_tails():
    c = T.dispersion_curve(ModelParams.real_eta(4, 1.0, 2.0), 401, cut="full")
    assert c.delta_E.min() < 1e-3


def test_count_local_maxima():
    assert T.count_local_maxima([0, 1, 0, 2, 2, 0, 3, 1]) == 3
    assert T.count_local_maxima([0, 1, 2]) == 0
    assert T.count_local_maxima(np.sin(np.linspace(0, 5 * np.pi, 1000))) == 3


def test_arch_counts():
    assert T.envelope_arch_count(ModelParams.imag_eta(4, 1.0, 1.0), 301) == 3
    assert T.envelope_arch_count(ModelParams.real_eta(4, 1.0, 2.0), 301) == 3
    assert T.envelope_arch_count(ModelParams.real_eta(4, 1.0, 0.05), 301) == 1
    # a single arch along the equal-rapidity cut when b is small
    assert T.diagonal_arch_count(ModelParams.real_eta(4, 1.0, 0.05)) == 1


@settings(max_examples=30, deadline=None)
@given(st.floats(0, np.pi / 2), st.floats(0.3, 3.0))
def test_gap_symmetries(a, g):
    ref = T.gap(a, g).gap
    for b in (np.pi / 2 - a, np.pi / 2 + a, np.pi - a):
        assert abs(T.gap(b, g).gap - ref) < 1e-10
    assert ref > 0


@pytest.mark.parametrize("g", [0.5, 1.0, 2.0])
def test_gap_branch_continuity_and_minimum(g):
    for a in (np.pi / 4, 3 * np.pi / 4):
        assert abs(T.gap_series(a, g, "outer") - T.gap_series(a, g, "inner")) < 1e-10
    for a in np.linspace(0, np.pi, 17):
        assert abs(T.gap(a, g).gap - T.gap_by_minimisation(a, g, 2001)) < 1e-9


def test_gap_branch_labels():
    assert T.gap(0.0, 1.0).branch == "outer" and T.gap(np.pi / 4, 1.0).branch == "outer"
    assert T.gap(1.0, 1.0).branch == "inner" and T.gap(np.pi, 1.0).branch == "outer"


@pytest.mark.parametrize("a,g", [(-0.1, 1.0), (4.0, 1.0), (1.0, 0.0)])
def test_gap_rejects_bad_input(a, g):
    with pytest.raises(ValueError):
        T.gap(a, g)


def test_nonhermitian_regime_rejected():
    with pytest.raises(ValueError):
        T.rho_ground(0.0, ModelParams.nonhermitian(4, 0.8, 0.3))


def _finite_size_deviation(p, sizes):
    from j1j2chain.hamiltonian import build_direct, magnon_number
    from j1j2chain.spectrum import eigs

    eg = T.ground_energy_density(p)
    out = []
    for n in sizes:
        q = p.with_sites(n)
        e0 = eigs(build_direct(q).matrix, hermitian_hint=True, sectors=magnon_number(n)).eigenvalues.real.min()
        out.append(abs(e0 / n - eg))
    return out


@pytest.mark.parametrize("p", [ModelParams.real_eta(4, 1.0, 1.0), ModelParams.real_eta(4, 0.7, 0.5)])
def test_finite_size_deviation_shrinks_at_fixed_parity(p):
    # at larger b/eta the odd-N size sits anomalously close; same-parity sizes still converge
    d8, d12 = _finite_size_deviation(p, (8, 12))
    assert d12 < d8


@pytest.mark.parametrize("p", [ModelParams.real_eta(4, 1.0, 0.3), ModelParams.imag_eta(4, 1.0, 1.0)])
def test_finite_size_deviation_monotone(p):
    d = _finite_size_deviation(p, (8, 10, 12))
    assert d[0] > d[1] > d[2]
