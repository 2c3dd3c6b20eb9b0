"""State constructors, validation, and the partial trace.

Basis order is fixed everywhere as {|++>, |+->, |-+>, |-->}: index
2*i1 + i2 with i=0 for |+> and i=1 for |->.  The collective sigma-z
eigenvalues in this order are (2, 0, 0, -2).
"""

import warnings

import numpy as np

from .errors import ConfigError

BASIS_LABELS = ("++", "+-", "-+", "--")
SZ_TOTAL = np.array([2.0, 0.0, 0.0, -2.0])
SZ1 = np.array([1.0, 1.0, -1.0, -1.0])
SZ2 = np.array([1.0, -1.0, 1.0, -1.0])

# physicality tolerances for density matrices
HERM_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

# normalization bands for configured state vectors
NORM_ACCEPT = 1e-9
NORM_RENORM = 1e-6

BELL_STATES = {
    "phi_plus": np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0),
    "phi_minus": np.array([1.0, 0.0, 0.0, -1.0]) / np.sqrt(2.0),
    "psi_plus": np.array([0.0, 1.0, 1.0, 0.0]) / np.sqrt(2.0),
    "psi_minus": np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0),
}


def normalize_vector(amps, what="state"):
    """Apply the configured-amplitude normalization bands.

    Deviations of the norm from 1 below 1e-9 are accepted as-is, below 1e-6
    renormalized with a warning, anything larger is rejected.
    """
    v = np.asarray(amps, dtype=complex)
    dev = abs(v.conj() @ v - 1.0)
    if dev <= NORM_ACCEPT:
        return v
    if dev <= NORM_RENORM:
        warnings.warn(f"{what} amplitudes renormalized (norm deviation {dev:.2e})")
        return v / np.sqrt((v.conj() @ v).real)
    raise ConfigError(f"{what} amplitudes not normalized: |<v|v> - 1| = {dev:.2e}")


def qubit_vector(amps, what="qubit state"):
    v = np.asarray(amps, dtype=complex)
    if v.shape != (2,):
        raise ConfigError(f"{what} must have 2 amplitudes")
    return normalize_vector(v, what)


def product_vector(amps1, amps2):
    """Composite pure state |psi1> x |psi2> in the fixed basis order."""
    return np.kron(qubit_vector(amps1, "first-TSS state"),
                   qubit_vector(amps2, "auxiliary-TSS state"))


def bell_vector(name):
    try:
        return BELL_STATES[name].copy()
    except KeyError:
        raise ConfigError(f"unknown Bell state {name!r}; "
                          f"expected one of {sorted(BELL_STATES)}") from None


def density_from_vector(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def validate_density(rho, dim=None, name="state"):
    """Check Hermiticity, unit trace and positive semidefiniteness."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ConfigError(f"{name} must be a square matrix")
    if dim is not None and rho.shape[0] != dim:
        raise ConfigError(f"{name} must be {dim}x{dim}")
    if np.max(np.abs(rho - rho.conj().T)) > HERM_TOL:
        raise ConfigError(f"{name} is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > max(TRACE_TOL, 1e-9):
        raise ConfigError(f"{name} trace is {np.trace(rho).real!r}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
        raise ConfigError(f"{name} is not positive semidefinite")
    return rho


def partial_trace_aux(rho):
    """Trace out the auxiliary (second) TSS of a 4x4 composite state."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    return np.einsum("abcb->ac", r)


def partial_trace_aux_traj(rhos):
    """Partial trace over the aux TSS for a (n,4,4) trajectory."""
    r = np.asarray(rhos).reshape(-1, 2, 2, 2, 2)
    return np.einsum("nabcb->nac", r)


def random_density(rng, dim):
    """Ginibre-random full-rank density matrix (test helper)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
