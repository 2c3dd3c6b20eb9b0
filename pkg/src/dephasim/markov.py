"""Markovianity witnesses: trace-distance back-flow and rate-sign tests.

Two standard witnesses over a common time grid:

* back-flow (distinguishability) witness: accumulate the positive increments
  of the trace distance between two evolutions; any accumulation above
  tolerance flags information back-flow (non-Markovian);
* rate-sign (divisibility) witness: a time-local dephasing generator is
  CP-divisible iff its rate stays non-negative; the witness reports the
  minimal rate and whether it dips below -tolerance.

Trace distances use the closed 2x2 form sqrt(dz^2 + |dc|^2) for qubits and a
Hermitian eigendecomposition for the 4x4 composite.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

WITNESS_TOL = 1e-9


@dataclass(frozen=True)
class MarkovVerdict:
    """Combined witness outcome for one evolution level (composite or reduced).

    Fields are None when the corresponding witness was not computable (no
    rate series, or no pair to take distances between).  annotation records
    whether the underlying reduced map was linear.
    """
    rhp_min_rate: float = None
    rhp_indivisible: bool = None
    blp_measure: float = None
    blp_backflow: bool = None
    annotation: str = ""


def trace_distance(rho_a, rho_b):
    """Trace distance (1/2)||rho_a - rho_b||_1 for density matrices."""
    rho_a = np.asarray(rho_a, dtype=complex)
    rho_b = np.asarray(rho_b, dtype=complex)
    if rho_a.shape != rho_b.shape or rho_a.shape[-1] != rho_a.shape[-2]:
        raise ValueError("states must be square matrices of equal shape")
    diff = rho_a - rho_b
    if rho_a.shape[-1] == 2:
        dz = 0.5 * (diff[..., 0, 0] - diff[..., 1, 1]).real
        half_tr = 0.5 * (diff[..., 0, 0] + diff[..., 1, 1]).real
        s = np.sqrt(dz * dz + np.abs(diff[..., 0, 1]) ** 2)
        # eigenvalues of the Hermitian difference are tr/2 +- s
        d = 0.5 * (np.abs(half_tr + s) + np.abs(half_tr - s))
        return float(d) if d.ndim == 0 else d
    ev = np.linalg.eigvalsh(diff)
    out = 0.5 * np.abs(ev).sum(axis=-1)
    return float(out) if out.ndim == 0 else out


def reduced_trace_distance(rp_a, rp_b, phi, gammas_exp):
    """Trace distance of two reduced evolutions, in closed form on a grid.

    D = sqrt((alpha_a - alpha_b)^2 + e^{-2 Gamma} |beta_a - beta_b|^2).

    rp_a/rp_b are ReducedParameters; phi is the accumulated coupling phase
    array and gammas_exp the Gamma values on the same grid.  The epsilon-drive
    phase cancels in the difference, so it never enters.
    """
    dz = rp_a.alpha - rp_b.alpha
    dbeta = rp_a.beta_at_phase(phi) - rp_b.beta_at_phase(phi)
    dcoh = np.exp(-np.asarray(gammas_exp, dtype=float)) * dbeta
    return np.sqrt(dz * dz + np.abs(dcoh) ** 2)


def blp_witness(times, distances, tol=WITNESS_TOL):
    """Back-flow measure over a grid: sum of positive distance increments.

    measure = sum_k max(0, D(t_{k+1}) - D(t_k)); the flag fires when the
    measure exceeds tol.  This discretizes the back-flow integral for the
    supplied pair only (no optimization over pairs).
    """
    times = np.asarray(times, dtype=float)
    distances = np.asarray(distances, dtype=float)
    if times.shape != distances.shape or times.ndim != 1:
        raise ValueError("times and distances must be 1-d arrays of equal length")
    if times.size < 2:
        raise ValueError("back-flow witness needs at least two samples")
    inc = np.diff(distances)
    measure = float(np.clip(inc, 0.0, None).sum())
    return measure, measure > tol


def rhp_witness(rates, tol=WITNESS_TOL, finite=None):
    """Rate-sign divisibility witness over a grid of rate samples.

    Non-finite samples (singular points of the effective rate) are excluded;
    if every sample is non-finite the witness is undefined and raises.
    Returns (min_rate, indivisible_flag).
    """
    rates = np.asarray(rates, dtype=float)
    mask = np.isfinite(rates)
    if finite is not None:
        mask &= np.asarray(finite, dtype=bool)
    if not mask.any():
        raise NumericalError("rate-sign witness undefined: no finite rate samples")
    min_rate = float(rates[mask].min())
    return min_rate, min_rate < -tol


def antipodal_pair_family(resolution):
    """Antipodal pure-state pairs on a (polar x azimuthal) Bloch grid.

    resolution counts azimuthal steps; polar angles take half as many plus
    the pole.  Each entry is (psi, psi_perp) with <psi|psi_perp> = 0.
    """
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    pairs = []
    thetas = np.linspace(0.0, np.pi / 2.0, resolution // 2 + 1)
    phis = np.linspace(0.0, np.pi, resolution, endpoint=False)
    for th in thetas:
        for ph in phis:
            a = np.array([np.cos(th / 2.0),
                          np.exp(1j * ph) * np.sin(th / 2.0)])
            b = np.array([-np.sin(th / 2.0),
                          np.exp(1j * ph) * np.cos(th / 2.0)])
            pairs.append((a, b))
    return pairs


def grid_pair_search(evolve_pair, pairs):
    """Exhaustive back-flow scan over a family of initial-state pairs.

    evolve_pair(psi_a, psi_b) -> (times, distances).  Returns
    (best_measure, best_pair); a lower bound to the variational back-flow
    measure, exact on the supplied family.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("pair family is empty")
    best_measure, best_pair = -1.0, None
    for a, b in pairs:
        times, dist = evolve_pair(a, b)
        measure, _ = blp_witness(times, dist)
        if measure > best_measure:
            best_measure, best_pair = measure, (a, b)
    return best_measure, best_pair
