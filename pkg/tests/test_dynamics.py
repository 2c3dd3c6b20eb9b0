import numpy as np
import pytest

from dephasim import dynamics
from dephasim.drive import DriveProfile
from dephasim.dynamics import (ReducedParameters, abel_resummed_gamma_aux,
                               aux_spectral_weights, beta, composite_trajectory,
                               effective_rates, effective_rates_trajectory,
                               evolve_composite, gamma_aux_product,
                               integrate_reduced_me, is_product_or_uncoupled,
                               kraus_elements, reduced_qubit,
                               reduced_trajectory, spin_bath_temperature)
from dephasim.errors import KrausInvalidError, KrausUndefinedError
from dephasim.spectral import Ohmic, dephasing_exponent, exponent_trajectory
from dephasim.states import (bell_vector, density_from_vector, partial_trace_aux,
                             product_vector, random_density, random_pure)

PLUS_X = np.array([1.0, 1.0]) / np.sqrt(2.0)


def _product_density(q, aux):
    return density_from_vector(product_vector(q, aux))


def test_identity_at_time_zero(rng):
    rho0 = random_density(rng, 4)
    drive = DriveProfile.build(eps1=0.3, eps2=0.1, j=0.7)
    assert np.allclose(evolve_composite(rho0, drive, 0.0, 0.0), rho0, atol=1e-15)


def test_populations_constant(rng):
    rho0 = random_density(rng, 4)
    drive = DriveProfile.build(eps1=0.4, j=0.2)
    rho_t = evolve_composite(rho0, drive, lambda t: 0.3 * t, 5.0)
    assert np.allclose(np.diag(rho_t), np.diag(rho0), atol=1e-14)
    assert np.trace(rho_t).real == pytest.approx(1.0, abs=1e-12)


def test_single_flip_coherences_decay_identically(rng):
    # |++><+-| and |-+><--| carry the same weight difference
    rho0 = random_density(rng, 4)
    drive = DriveProfile.build()
    g = 0.8
    rho_t = evolve_composite(rho0, drive, g, 1.0)
    for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)]:
        assert abs(rho_t[i, j]) == pytest.approx(
            abs(rho0[i, j]) * np.exp(-g), rel=1e-12)
    # double flip decays four times as fast in the exponent
    assert abs(rho_t[0, 3]) == pytest.approx(abs(rho0[0, 3]) * np.exp(-4 * g),
                                             rel=1e-12)


def test_antidiagonal_coherence_never_decays(rng):
    rho0 = random_density(rng, 4)
    drive = DriveProfile.build(eps1=0.3, eps2=0.3, j=0.7)
    for t in (0.5, 2.0, 9.0):
        rho_t = evolve_composite(rho0, drive, lambda t_: 0.5 * t_, t)
        # equal splittings: the |+-><-+| element is exactly frozen
        assert rho_t[1, 2] == pytest.approx(rho0[1, 2], abs=1e-15)
    drive2 = DriveProfile.build(eps1=0.3, eps2=0.1, j=0.7)
    rho_t = evolve_composite(rho0, drive2, 1.3, 2.0)
    assert abs(rho_t[1, 2]) == pytest.approx(abs(rho0[1, 2]), rel=1e-12)
    assert np.angle(rho_t[1, 2] / rho0[1, 2]) == pytest.approx(-0.4, abs=1e-12)


def test_fully_decohered_cross_element():
    # plus-x (x) plus-x product state, exponent ln(2)/20 * 2 at the cross element
    rho0 = _product_density(PLUS_X, PLUS_X)
    g = dephasing_exponent(Ohmic(eta=0.1, omega_c=1.0), 0.0, 1.0)
    rho_t = evolve_composite(rho0, DriveProfile.build(), g, 1.0)
    assert abs(rho_t[0, 3]) == pytest.approx(0.25 * 2.0 ** -0.2, rel=1e-9)


def test_reduced_matches_partial_trace(rng):
    drive = DriveProfile.build(eps1=0.2, eps2=0.05, j=0.3)
    for _ in range(5):
        rho0 = random_density(rng, 4)
        for t in (0.0, 0.7, 3.1):
            g = 0.21 * t
            direct = partial_trace_aux(evolve_composite(rho0, drive, g, t))
            red = reduced_qubit(rho0, drive, g, t)
            assert np.allclose(direct, red, atol=1e-13)


def test_reduced_trajectory_matches_pointwise(rng):
    rho0 = random_density(rng, 4)
    drive = DriveProfile.build(eps1=0.2, j=0.3)
    times = np.linspace(0.0, 5.0, 11)
    gams = 0.1 * times
    alpha, coh = reduced_trajectory(rho0, drive, times, gams)
    assert alpha == pytest.approx(rho0[0, 0].real + rho0[1, 1].real, abs=1e-14)
    for k, t in enumerate(times):
        assert reduced_qubit(rho0, drive, gams[k], t)[0, 1] == pytest.approx(
            coh[k], abs=1e-14)


def test_beta_composition(rng):
    rho0 = random_density(rng, 4)
    drive = DriveProfile.build(j=0.4)
    p = ReducedParameters.from_composite(rho0)
    t = 2.5
    expected = (np.exp(1j * 0.4 * t) * rho0[1, 3] + np.exp(-1j * 0.4 * t) * rho0[0, 2])
    assert beta(rho0, drive, t) == pytest.approx(expected, abs=1e-14)
    assert p.beta0 == pytest.approx(rho0[1, 3] + rho0[0, 2], abs=1e-15)


def test_bell_states_have_singular_coherence_factor():
    drive = DriveProfile.build(j=0.3)
    for name in ("phi_plus", "phi_minus", "psi_plus", "psi_minus"):
        rho0 = density_from_vector(bell_vector(name))
        out = effective_rates(rho0, drive, 0.0, 1.0)
        assert out["finite"] is False
        assert np.isnan(out["gamma_tilde"])


def test_effective_rates_sigma_z_eigenstate_aux(rng):
    # aux in |+>: no feedback rate, level shift locks to the coupling
    q = random_pure(rng, 2)
    rho0 = _product_density(q, np.array([1.0, 0.0]))
    drive = DriveProfile.build(j=0.25)
    for t in (0.3, 1.7, 6.0):
        out = effective_rates(rho0, drive, 0.02, t)
        assert out["finite"]
        assert out["gamma_aux"] == pytest.approx(0.0, abs=1e-14)
        assert out["j_tilde"] == pytest.approx(0.25, abs=1e-13)
        assert out["gamma_tilde"] == pytest.approx(0.02, abs=1e-14)


def test_effective_rates_balanced_aux_closed_form():
    # aux on the equator: gamma_aux = J tan(J t)
    rho0 = _product_density(PLUS_X, PLUS_X)
    drive = DriveProfile.build(j=0.2)
    for t in (0.5, 2.0, 7.0):
        out = effective_rates(rho0, drive, 0.0, t)
        assert out["gamma_aux"] == pytest.approx(0.2 * np.tan(0.2 * t), rel=1e-12)
        assert out["j_tilde"] == pytest.approx(0.0, abs=1e-13)


def test_dual_route_feedback_rate_agreement(rng):
    drive = DriveProfile.build(j=0.13)
    times = np.linspace(0.0, 12.0, 97)
    for _ in range(20):
        q = random_pure(rng, 2)
        aux = random_pure(rng, 2)
        z = abs(aux[0]) ** 2 - abs(aux[1]) ** 2
        rho0 = _product_density(q, aux)
        eff = effective_rates_trajectory(rho0, drive, times, np.zeros_like(times))
        closed = gamma_aux_product(z, drive, times)
        ok = eff["finite"] & np.isfinite(closed)
        assert ok.sum() > 80
        assert np.max(np.abs(eff["gamma_aux"][ok] - closed[ok])) < 1e-10


def test_feedback_rate_series_resummation():
    drive_j = 0.11
    times = np.linspace(0.05, 9.0, 40)
    drive = DriveProfile.build(j=drive_j)
    for z in (0.06, 0.2, 0.5, 0.9):
        closed = gamma_aux_product(z, drive, times)
        series = abel_resummed_gamma_aux(z, drive_j, times)
        ok = np.isfinite(closed)
        assert np.max(np.abs(series[ok] - closed[ok])) < 1e-8


def test_aux_spectral_weights_and_temperature():
    assert aux_spectral_weights(1.0, 3) == [(2.0, 4.0), (4.0, -8.0), (6.0, 12.0)]
    assert spin_bath_temperature(0.01, 0.1, 0.005) == pytest.approx(1e-3)
    with pytest.raises(ValueError):
        aux_spectral_weights(-1.0, 3)
    with pytest.raises(ValueError):
        gamma_aux_product(1.5, DriveProfile.build(j=0.1), 1.0)


def test_kraus_elements_reproduce_reduced_map(rng):
    drive = DriveProfile.build(eps1=0.3, j=0.2)
    gexp = lambda t: 0.08 * t
    rho0 = _product_density(random_pure(rng, 2), np.array([0.8, 0.6]))
    for t in (0.0, 0.9, 4.2):
        pis = kraus_elements(rho0, drive, gexp(t), t)
        total = sum(p.conj().T @ p for p in pis)
        assert np.allclose(total, np.eye(2), atol=1e-12)
        red0 = reduced_qubit(rho0, drive, 0.0, 0.0)
        red_t = reduced_qubit(rho0, drive, gexp(t), t)
        mapped = sum(p @ red0 @ p.conj().T for p in pis)
        assert np.allclose(mapped, red_t, atol=1e-12)
    pis0 = kraus_elements(rho0, drive, 0.0, 0.0)
    assert np.allclose(pis0[0], np.eye(2), atol=1e-14)
    assert np.allclose(pis0[1], 0.0, atol=1e-14)


def test_kraus_error_conditions():
    drive = DriveProfile.build(j=1.0)
    bell = density_from_vector(bell_vector("phi_plus"))
    with pytest.raises(KrausUndefinedError):
        kraus_elements(bell, drive, 0.0, 1.0)
    # entangled state whose coherence factor grows without bath damping
    psi = np.array([0.5, 0.5, -0.5j, 0.5])
    rho0 = density_from_vector(psi)
    with pytest.raises(KrausInvalidError):
        kraus_elements(rho0, drive, 0.0, np.pi / 4.0)


def test_master_equation_route_matches_closed_form(rng):
    # sigma-z eigenstate aux: the time-local generator is exact and regular
    q = random_pure(rng, 2)
    rho0 = _product_density(q, np.array([0.0, 1.0]))
    drive = DriveProfile.build(eps1=0.15, j=0.3)
    sd = Ohmic(eta=0.1, omega_c=1.0)
    t_end = 4.0
    rho_end = integrate_reduced_me(
        reduced_qubit(rho0, drive, 0.0, 0.0), rho0, drive,
        lambda t: sd.eta * t / (1.0 + t * t), t_end, dt=2e-3)
    g_end = dephasing_exponent(sd, 0.0, t_end)
    ref = reduced_qubit(rho0, drive, g_end, t_end)
    assert np.max(np.abs(rho_end - ref)) < 1e-8


def test_product_or_uncoupled_detection(rng):
    drive_j = DriveProfile.build(j=0.2)
    drive_0 = DriveProfile.build(eps1=0.4)
    prod = _product_density(random_pure(rng, 2), random_pure(rng, 2))
    bell = density_from_vector(bell_vector("psi_plus"))
    assert is_product_or_uncoupled(prod, drive_j)
    assert is_product_or_uncoupled(bell, drive_0)
    assert not is_product_or_uncoupled(bell, drive_j)
    mixed_sep = 0.5 * (_product_density(PLUS_X, PLUS_X)
                       + _product_density(np.array([1.0, 0]), np.array([0, 1.0])))
    assert not is_product_or_uncoupled(mixed_sep, drive_j)  # conservative test


def test_composite_trajectory_matches_pointwise(rng):
    rho0 = random_density(rng, 4)
    drive = DriveProfile.build(eps1=0.2, eps2=0.4, j=0.1)
    times = np.linspace(0.0, 6.0, 7)
    sd = Ohmic(eta=0.2, omega_c=1.0)
    gams = exponent_trajectory(sd, 0.0, times)
    traj = composite_trajectory(rho0, drive, times, gams)
    for k, t in enumerate(times):
        assert np.allclose(traj[k], evolve_composite(rho0, drive, gams[k], t),
                           atol=1e-13)
