import numpy as np
import pytest
import scipy.integrate

from dephasim import quadrature
from dephasim.errors import QuadratureError


def test_smooth_integrands_match_scipy():
    cases = [
        (lambda x: np.exp(-x * x), 0.0, 10.0),
        (lambda x: 1.0 / (1.0 + x * x), 0.0, 50.0),
        (lambda x: x * np.exp(-x), 0.0, 30.0),
    ]
    for f, a, b in cases:
        val, err = quadrature.integrate(f, a, b, rel_tol=1e-10)
        ref, _ = scipy.integrate.quad(f, a, b, limit=500)
        assert abs(val - ref) <= 1e-10 * abs(ref) + 1e-13
        assert err <= max(1e-12, 1e-10 * abs(val)) * 1.0001


def test_oscillatory_integrand_closed_form():
    # int_0^L exp(-a x) sin(b x) dx
    a_dec, b_osc, L = 0.2, 3.0, 50.0
    f = lambda x: np.exp(-a_dec * x) * np.sin(b_osc * x)
    val, _ = quadrature.integrate(
        f, 0.0, L, rel_tol=1e-10,
        breakpoints=quadrature.oscillation_breakpoints(b_osc, L))
    den = a_dec**2 + b_osc**2
    ref = b_osc / den - np.exp(-a_dec * L) * (
        a_dec * np.sin(b_osc * L) + b_osc * np.cos(b_osc * L)) / den
    assert abs(val - ref) <= 1e-10 * abs(ref) + 1e-13


def test_kinked_integrand_with_breakpoint():
    f = lambda x: np.abs(x - np.pi)
    val, _ = quadrature.integrate(f, 0.0, 6.0, breakpoints=[np.pi], rel_tol=1e-12)
    ref = np.pi**2 / 2.0 + (6.0 - np.pi) ** 2 / 2.0
    assert abs(val - ref) <= 1e-12 * ref


def test_empty_interval_is_zero():
    assert quadrature.integrate(lambda x: x, 1.0, 1.0) == (0.0, 0.0)
    assert quadrature.integrate(lambda x: x, 2.0, 1.0) == (0.0, 0.0)


def test_nonintegrable_raises_with_partial_result():
    with pytest.raises(QuadratureError) as exc:
        quadrature.integrate(lambda x: 1.0 / x, 0.0, 1.0, max_panels=256)
    assert exc.value.value is not None
    assert exc.value.error_estimate > 0


def test_oscillation_breakpoints():
    pts = quadrature.oscillation_breakpoints(2.0, 10.0)
    assert np.allclose(pts, np.arange(1, 7) * np.pi / 2.0)
    assert quadrature.oscillation_breakpoints(0.0, 10.0).size == 0


def test_mesh_reuse_matches_per_time_integration():
    env = lambda w: 0.3 * np.exp(-w / 2.0)
    times = np.array([0.3, 1.0, 2.7, 6.0, 10.0])
    for osc_name, osc_f in [("sin", np.sin),
                            ("one_minus_cos", lambda x: 1.0 - np.cos(x))]:
        mesh = quadrature.build_mesh(env, 0.0, 80.0, t_ref=times.max(),
                                     osc=osc_name, rel_tol=1e-9)
        batch = quadrature.apply_mesh(mesh, times, osc=osc_name)
        for t, got in zip(times, batch):
            ref, _ = quadrature.integrate(
                lambda w: env(w) * osc_f(w * t), 0.0, 80.0, rel_tol=1e-11,
                breakpoints=quadrature.oscillation_breakpoints(t, 80.0))
            assert abs(got - ref) <= 1e-7 * abs(ref) + 1e-11


def test_mesh_handles_envelope_divergent_at_origin():
    # 1/w envelope: integrable only against the oscillation factor
    env = lambda w: np.exp(-w) / w
    mesh = quadrature.build_mesh(env, 0.0, 40.0, t_ref=4.0, osc="one_minus_cos",
                                 rel_tol=1e-9)
    got = quadrature.apply_mesh(mesh, np.array([4.0]), osc="one_minus_cos")[0]
    # int_0^inf e^-w (1-cos wt)/w dw = ln sqrt(1+t^2)
    assert abs(got - 0.5 * np.log(17.0)) <= 1e-7
