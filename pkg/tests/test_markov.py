import numpy as np
import pytest

from dephasim.drive import DriveProfile
from dephasim.dynamics import ReducedParameters, composite_trajectory
from dephasim.errors import NumericalError
from dephasim.markov import (MarkovVerdict, antipodal_pair_family, blp_witness,
                             grid_pair_search, reduced_trace_distance,
                             rhp_witness, trace_distance)
from dephasim.states import (density_from_vector, product_vector,
                             random_density)


def _eig_distance(a, b):
    return 0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum()


def test_trace_distance_matches_eigenvalue_route(rng):
    for dim in (2, 4):
        for _ in range(25):
            a = random_density(rng, dim)
            b = random_density(rng, dim)
            assert trace_distance(a, b) == pytest.approx(
                _eig_distance(a, b), abs=1e-12)
    # orthogonal pure states sit at distance one
    up = np.diag([1.0, 0.0]).astype(complex)
    dn = np.diag([0.0, 1.0]).astype(complex)
    assert trace_distance(up, dn) == pytest.approx(1.0, abs=1e-14)


def test_trace_distance_batched(rng):
    a = np.stack([random_density(rng, 4) for _ in range(6)])
    b = np.stack([random_density(rng, 4) for _ in range(6)])
    d = trace_distance(a, b)
    assert d.shape == (6,)
    for k in range(6):
        assert d[k] == pytest.approx(_eig_distance(a[k], b[k]), abs=1e-12)


def test_reduced_distance_closed_form(rng):
    drive = DriveProfile.build(j=0.05)
    times = np.linspace(0.0, 100.0, 301)
    gams = 0.002 * times
    aux = np.array([np.sqrt(0.1), np.sqrt(0.9)])
    rho_a = density_from_vector(product_vector([2**-0.5, -(2**-0.5)], aux))
    rho_b = density_from_vector(product_vector([2**-0.5, 2**-0.5], aux))
    pa = ReducedParameters.from_composite(rho_a)
    pb = ReducedParameters.from_composite(rho_b)
    d = reduced_trace_distance(pa, pb, drive.phase_j(times), gams)
    ref = np.exp(-gams) * np.sqrt(0.82 + 0.18 * np.cos(2 * 0.05 * times))
    assert np.allclose(d, ref, atol=1e-12)
    # and it agrees with the generic 2x2 distance of the explicit states
    for k in (0, 57, 300):
        t = times[k]
        ra = _reduced_state(pa, drive, gams[k], t)
        rb = _reduced_state(pb, drive, gams[k], t)
        assert d[k] == pytest.approx(trace_distance(ra, rb), abs=1e-12)


def _reduced_state(p, drive, g, t):
    coh = np.exp(-1j * drive.eps1.integral(t)) * np.exp(-g) * p.beta_at_phase(
        drive.phase_j(t))
    return np.array([[p.alpha, coh], [np.conj(coh), 1 - p.alpha]])


def test_blp_witness_sums_positive_increments():
    times = np.arange(5.0)
    measure, flag = blp_witness(times, np.array([1.0, 0.6, 0.7, 0.4, 0.55]))
    assert measure == pytest.approx(0.25)
    assert flag
    measure, flag = blp_witness(times, np.array([1.0, 0.8, 0.6, 0.5, 0.45]))
    assert measure == 0.0
    assert not flag
    # sub-tolerance wiggle: measured but not flagged
    measure, flag = blp_witness(times, np.array([1.0, 0.5, 0.5 + 1e-12, 0.4, 0.4]))
    assert 0 < measure < 1e-9
    assert not flag


def test_blp_witness_input_validation():
    with pytest.raises(ValueError):
        blp_witness(np.array([0.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        blp_witness(np.arange(3.0), np.ones(4))


def test_rhp_witness_sign_flags():
    mn, flag = rhp_witness(np.array([0.2, 0.1, -3e-9]))
    assert mn == pytest.approx(-3e-9)
    assert flag
    mn, flag = rhp_witness(np.array([0.2, 0.1, -3e-10]))
    assert not flag
    mn, flag = rhp_witness(np.array([np.nan, 0.3, np.nan]))
    assert mn == pytest.approx(0.3)
    with pytest.raises(NumericalError):
        rhp_witness(np.array([np.nan, np.nan]))
    with pytest.raises(NumericalError):
        rhp_witness(np.array([0.1, 0.2]), finite=np.array([False, False]))


def test_antipodal_family_orthogonality():
    pairs = antipodal_pair_family(8)
    assert len(pairs) == (8 // 2 + 1) * 8
    for a, b in pairs:
        assert abs(np.vdot(a, a) - 1.0) < 1e-12
        assert abs(np.vdot(b, b) - 1.0) < 1e-12
        assert abs(np.vdot(a, b)) < 1e-12


def test_grid_pair_search_prefers_equator():
    # decaying coherence with revivals: only the coherence difference matters,
    # so equal-weight superpositions (equator pairs) maximize the back-flow
    times = np.linspace(0.0, 10.0, 401)
    env = np.exp(-0.3 * times) * np.abs(np.cos(0.8 * times))

    def evolve_pair(psi_a, psi_b):
        dz = abs(psi_a[0]) ** 2 - abs(psi_b[0]) ** 2
        dc = psi_a[0] * np.conj(psi_a[1]) - psi_b[0] * np.conj(psi_b[1])
        return times, np.sqrt(dz * dz + abs(dc) ** 2 * env**2)

    best, (pa, pb) = grid_pair_search(evolve_pair, antipodal_pair_family(6))
    assert abs(abs(pa[0]) ** 2 - 0.5) < 1e-12
    single = [(np.array([1.0, 0.0]), np.array([0.0, 1.0]))]
    m, pair = grid_pair_search(evolve_pair, single)
    assert pair[0] is single[0][0] and pair[1] is single[0][1]
    assert m == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        grid_pair_search(evolve_pair, [])


def test_metric_axioms_quick(rng):
    for _ in range(20):
        a, b, c = (random_density(rng, 4) for _ in range(3))
        dab = trace_distance(a, b)
        assert dab == pytest.approx(trace_distance(b, a), abs=1e-12)
        assert trace_distance(a, a) == pytest.approx(0.0, abs=1e-12)
        assert dab <= trace_distance(a, c) + trace_distance(c, b) + 1e-10
        assert -1e-12 <= dab <= 1.0 + 1e-12


def test_composite_contraction_under_pure_decay(rng):
    # monotone exponent, no coherent drive: distances can only shrink
    drive = DriveProfile.build()
    times = np.linspace(0.0, 8.0, 101)
    gams = 0.1 * times
    a = composite_trajectory(random_density(rng, 4), drive, times, gams)
    b = composite_trajectory(random_density(rng, 4), drive, times, gams)
    d = trace_distance(a, b)
    assert np.all(np.diff(d) <= 1e-10)


def test_verdict_is_frozen_and_optional():
    v = MarkovVerdict(blp_measure=0.1, blp_backflow=True)
    assert v.rhp_min_rate is None
    with pytest.raises(Exception):
        v.blp_measure = 0.2
