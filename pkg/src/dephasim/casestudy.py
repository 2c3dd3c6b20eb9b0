"""Weak-coupling case study: transverse bath coupling, Markovian by construction.

Here the pair couples to the bath through S_x = sigma1_x + sigma2_x instead of
S_z, treated in the weak-coupling (Lindblad) limit at zero temperature.  The
pair Hamiltonian H = eps*(s1z+s2z)/2 + J*s1z*s2z/2 has eigenstates

    |++>,  |s> = (|+-> + |-+>)/sqrt(2),  |a> = (|+-> - |-+>)/sqrt(2),  |-->

with energies eps+J/2, -J/2, -J/2, -eps+J/2.  S_x connects them in a cascade
|++> -> |s> -> |--> at Bohr frequencies eps+J and eps-J; the antisymmetric
state |a> has vanishing S_x matrix elements and is exactly dark.  Rates are
fixed to the bare spectral density at the Bohr frequency, which makes the
reduced single-TSS dynamics for aux = |-> reproduce the closed form in
``analytic_reduced`` exactly.

The composite dynamics is CP-divisible (constant Lindblad generator with
non-negative rates), yet the reduced single-TSS dynamics can show trace-
distance revivals for suitable auxiliary states — the same Markovianity knob
as in the exact dephasing model, now with a non-commuting coupling.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericalError, PositivityError, UnsupportedRegimeError
from .markov import trace_distance
from .spectral import evaluate
from .states import density_from_vector, partial_trace_aux_traj, validate_density

TRACE_DRIFT_PER_STEP = 1e-12
POSITIVITY_ABORT = 1e-7


@dataclass(frozen=True)
class CaseStudyParams:
    """Constant-drive transverse-coupling parameters (eps1 = eps2 = eps > J > 0)."""
    eps: float
    j: float
    sd: object

    def __post_init__(self):
        if not self.eps > self.j > 0:
            raise UnsupportedRegimeError(
                f"transverse case study requires eps > J > 0, got eps={self.eps}, J={self.j}")


@dataclass(frozen=True)
class LindbladGenerator:
    hamiltonian: np.ndarray
    jumps: tuple = field(default=())  # ((operator, rate), ...)

    @property
    def max_rate(self):
        return max((r for _, r in self.jumps), default=0.0)

    @property
    def hamiltonian_norm(self):
        return float(np.linalg.norm(self.hamiltonian, 2))


def dark_state():
    """The antisymmetric eigenstate (0,1,-1,0)/sqrt(2): no S_x matrix elements."""
    return np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0)


def build_generator(p):
    """Cascade generator |++> -> |s> -> |--> with rates J(eps+J), J(eps-J).

    Jump operators are the lowering parts of S_x between eigenlevels,
    expressed in the z basis: sqrt(2)|s><++| and sqrt(2)|--><s|.
    """
    h = np.diag([p.eps + p.j / 2.0, -p.j / 2.0, -p.j / 2.0, -p.eps + p.j / 2.0]
                ).astype(complex)
    a1 = np.zeros((4, 4), dtype=complex)
    a1[1, 0] = a1[2, 0] = 1.0
    a2 = np.zeros((4, 4), dtype=complex)
    a2[3, 1] = a2[3, 2] = 1.0
    g_plus = evaluate(p.sd, p.eps + p.j)
    g_minus = evaluate(p.sd, p.eps - p.j)
    if g_plus < 0 or g_minus < 0:
        raise ConfigError("negative jump rate: spectral density invalid at a Bohr frequency")
    return LindbladGenerator(hamiltonian=h, jumps=((a1, g_plus), (a2, g_minus)))


def default_step(gen):
    return 1e-2 / max(gen.hamiltonian_norm, gen.max_rate)


def _derivative(gen, precomp):
    h = gen.hamiltonian

    def deriv(rho):
        out = -1j * (h @ rho - rho @ h)
        for op, rate, opdag_op in precomp:
            out += rate * (op @ rho @ op.conj().T
                           - 0.5 * (opdag_op @ rho + rho @ opdag_op))
        return out

    return deriv


def integrate(gen, rho0, t_end, dt=None, store_times=None):
    """Fixed-step 4th-order propagation of the constant Lindblad generator.

    Returns (times, states).  With store_times given, states are recorded on
    exactly that grid (substeps of size <= dt in between); otherwise every
    step is stored.  Trace and positivity are monitored along the way.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    validate_density(rho0)
    if dt is None:
        dt = default_step(gen)
    if dt <= 0:
        raise ConfigError("dt must be positive")
    if dt * (gen.max_rate + gen.hamiltonian_norm) >= 0.1:
        raise ConfigError(
            f"step too large: dt*(max rate + |H|) = "
            f"{dt * (gen.max_rate + gen.hamiltonian_norm):.3g} >= 0.1")
    if store_times is None:
        n = max(1, int(math.ceil(t_end / dt - 1e-12)))
        store_times = np.linspace(0.0, t_end, n + 1)
    else:
        store_times = np.asarray(store_times, dtype=float)
        if store_times[0] != 0.0 or np.any(np.diff(store_times) <= 0):
            raise ConfigError("store_times must start at 0 and increase strictly")

    precomp = tuple((op, rate, op.conj().T @ op) for op, rate in gen.jumps)
    deriv = _derivative(gen, precomp)

    states = np.empty((store_times.size, 4, 4), dtype=complex)
    states[0] = rho0
    rho = rho0.copy()
    steps_done = 0
    for k in range(1, store_times.size):
        span = store_times[k] - store_times[k - 1]
        n_sub = max(1, int(math.ceil(span / dt - 1e-12)))
        h = span / n_sub
        for sub in range(n_sub):
            k1 = deriv(rho)
            k2 = deriv(rho + 0.5 * h * k1)
            k3 = deriv(rho + 0.5 * h * k2)
            k4 = deriv(rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            rho = 0.5 * (rho + rho.conj().T)
            steps_done += 1
            drift = abs(np.trace(rho).real - 1.0)
            if drift > TRACE_DRIFT_PER_STEP * max(steps_done, 1):
                raise NumericalError(
                    f"trace drift {drift:.3e} after {steps_done} steps exceeds budget")
            min_ev = float(np.linalg.eigvalsh(rho)[0])
            if min_ev < -POSITIVITY_ABORT:
                raise PositivityError(
                    f"state positivity violated at t={store_times[k - 1] + h * (sub + 1):.6g}: "
                    f"min eigenvalue {min_ev:.3e}")
        states[k] = rho
    return store_times, states


def analytic_reduced(rho1_0, p, t):
    """Closed-form reduced state for initial aux = |-> at zero temperature.

    rho_++(t) = rho_++(0) * ((1+e^{-g t})/2)^2,
    rho_+-(t) = rho_+-(0) * e^{-i(eps-J)t} * (1+e^{-g t})/2,  g = J(eps-J).
    """
    rho1_0 = np.asarray(rho1_0, dtype=complex)
    g = evaluate(p.sd, p.eps - p.j)
    t = np.asarray(t, dtype=float)
    relax = 0.5 * (1.0 + np.exp(-g * t))
    pop = rho1_0[0, 0].real * relax ** 2
    coh = rho1_0[0, 1] * np.exp(-1j * (p.eps - p.j) * t) * relax
    out = np.empty(t.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = pop
    out[..., 0, 1] = coh
    out[..., 1, 0] = np.conj(coh)
    out[..., 1, 1] = 1.0 - pop
    return out


@dataclass(frozen=True)
class CaseStudyResult:
    times: np.ndarray
    d_reduced: np.ndarray
    d_composite: np.ndarray
    reduced_a: np.ndarray
    reduced_b: np.ndarray


def case_study_distance(rho1_a, rho1_b, aux, p, times, dt=None):
    """Trace-distance trajectories for a pair of initial single-TSS states.

    Both members share the auxiliary state; composite initial states are the
    products.  Returns reduced and composite distances on the grid.
    """
    aux = np.asarray(aux, dtype=complex)
    aux_rho = density_from_vector(aux) if aux.ndim == 1 else aux
    gen = build_generator(p)
    comps = []
    for rho1 in (rho1_a, rho1_b):
        rho1 = np.asarray(rho1, dtype=complex)
        rho1 = density_from_vector(rho1) if rho1.ndim == 1 else rho1
        rho0 = np.kron(rho1, aux_rho)
        _, states = integrate(gen, rho0, times[-1], dt=dt, store_times=times)
        comps.append(states)
    red_a = partial_trace_aux_traj(comps[0])
    red_b = partial_trace_aux_traj(comps[1])
    return CaseStudyResult(
        times=np.asarray(times, dtype=float),
        d_reduced=trace_distance(red_a, red_b),
        d_composite=trace_distance(comps[0], comps[1]),
        reduced_a=red_a,
        reduced_b=red_b,
    )
