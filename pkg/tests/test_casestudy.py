import numpy as np
import pytest

from dephasim.casestudy import (CaseStudyParams, analytic_reduced,
                                build_generator, case_study_distance,
                                dark_state, default_step, integrate)
from dephasim.errors import ConfigError, UnsupportedRegimeError
from dephasim.spectral import Ohmic, evaluate
from dephasim.states import (density_from_vector, partial_trace_aux,
                             partial_trace_aux_traj, product_vector)

SD = Ohmic(eta=0.1, omega_c=1.0)
P = CaseStudyParams(eps=0.1, j=0.01, sd=SD)


def test_parameter_regime_validation():
    with pytest.raises(UnsupportedRegimeError):
        CaseStudyParams(eps=0.01, j=0.1, sd=SD)
    with pytest.raises(UnsupportedRegimeError):
        CaseStudyParams(eps=0.1, j=0.0, sd=SD)


def test_generator_structure():
    gen = build_generator(P)
    assert np.allclose(np.diag(gen.hamiltonian),
                       [0.105, -0.005, -0.005, -0.095])
    assert np.allclose(gen.hamiltonian, np.diag(np.diag(gen.hamiltonian)))
    (a1, g_up), (a2, g_dn) = gen.jumps
    # emission rates sampled at the two transition frequencies eps +- J
    assert g_up == pytest.approx(evaluate(SD, 0.11), rel=1e-14)
    assert g_dn == pytest.approx(evaluate(SD, 0.09), rel=1e-14)
    assert g_dn == pytest.approx(0.09 * 0.1 * np.exp(-0.09), rel=1e-12)
    ref1 = np.zeros((4, 4)) ; ref1[1, 0] = ref1[2, 0] = 1.0
    ref2 = np.zeros((4, 4)) ; ref2[3, 1] = ref2[3, 2] = 1.0
    assert np.allclose(a1, ref1)
    assert np.allclose(a2, ref2)


def test_dark_state_is_stationary():
    gen = build_generator(P)
    dark = density_from_vector(dark_state())
    _, states = integrate(gen, dark, 50.0)
    assert np.max(np.abs(states[-1] - dark)) < 1e-10
    ground = np.zeros((4, 4), dtype=complex)
    ground[3, 3] = 1.0
    _, states = integrate(gen, ground, 50.0)
    assert np.max(np.abs(states[-1] - ground)) < 1e-12


def test_single_excitation_trapping():
    # |+-> splits evenly between the dark state and the decaying channel
    rho0 = density_from_vector(np.array([0.0, 1.0, 0.0, 0.0], dtype=complex))
    g_dn = evaluate(SD, 0.09)
    times, states = integrate(gen=build_generator(P), rho0=rho0,
                              t_end=20.0 / g_dn, dt=0.05)
    red = partial_trace_aux(states[-1])
    assert red[0, 0].real == pytest.approx(0.25, abs=1e-6)
    assert red[1, 1].real == pytest.approx(0.75, abs=1e-6)


def test_closed_form_reduced_solution():
    rho1_0 = np.array([[0.7, 0.3 - 0.2j], [0.3 + 0.2j, 0.3]], dtype=complex)
    ground = np.diag([0.0, 1.0]).astype(complex)
    rho0 = np.kron(rho1_0, ground)
    gen = build_generator(P)
    grid = np.linspace(0.0, 200.0, 9)
    _, states = integrate(gen, rho0, grid[-1], dt=0.05, store_times=grid)
    red = partial_trace_aux_traj(states)
    for k, t in enumerate(grid):
        ref = analytic_reduced(rho1_0, P, t)
        assert np.max(np.abs(red[k] - ref)) < 1e-6


def test_closed_form_structure():
    rho1_0 = np.array([[0.9, 0.1j], [-0.1j, 0.1]], dtype=complex)
    t = 37.0
    g_dn = evaluate(SD, 0.09)
    relax = 0.5 * (1.0 + np.exp(-g_dn * t))
    ref = analytic_reduced(rho1_0, P, t)
    assert ref[0, 0] == pytest.approx(0.9 * relax**2, rel=1e-12)
    assert ref[0, 1] == pytest.approx(0.1j * np.exp(-1j * 0.09 * t) * relax,
                                      rel=1e-12)
    assert np.trace(ref).real == pytest.approx(1.0, abs=1e-12)


def test_distance_decays_monotonically_for_ground_aux():
    # aux in its ground state: no coherent revival channel for the pair
    times = np.linspace(0.0, 300.0, 61)
    r2 = 2.0 ** -0.5
    res = case_study_distance(np.array([r2, r2]), np.array([r2, -r2]),
                              np.array([0.0, 1.0]), P, times, dt=0.05)
    g_dn = evaluate(SD, 0.09)
    ref = 0.5 * (1.0 + np.exp(-g_dn * times))
    assert np.allclose(res.d_reduced, ref, atol=2e-6)
    assert np.all(np.diff(res.d_reduced) <= 1e-9)
    assert np.all(np.diff(res.d_composite) <= 1e-9)


def test_integrator_guards():
    gen = build_generator(P)
    rho0 = density_from_vector(product_vector([1.0, 0.0], [1.0, 0.0]))
    with pytest.raises(ConfigError):
        integrate(gen, rho0, 10.0, dt=5.0)       # step too large
    with pytest.raises(ConfigError):
        integrate(gen, rho0, 10.0, dt=-0.1)
    with pytest.raises(ConfigError):
        integrate(gen, np.eye(4, dtype=complex), 10.0)   # trace 4
    with pytest.raises(ConfigError):
        integrate(gen, rho0, 10.0, dt=0.05,
                  store_times=np.array([1.0, 2.0]))      # must start at 0
    assert default_step(gen) == pytest.approx(
        1e-2 / max(gen.hamiltonian_norm, gen.max_rate))


def test_trajectory_stays_physical():
    rho1_0 = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    rho0 = np.kron(rho1_0, rho1_0)
    _, states = integrate(build_generator(P), rho0, 400.0, dt=0.05)
    for k in (0, len(states) // 2, -1):
        s = states[k]
        assert abs(np.trace(s).real - 1.0) < 1e-10
        assert np.linalg.eigvalsh(s).min() > -1e-9
