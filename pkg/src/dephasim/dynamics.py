"""Exact dephasing dynamics of the coupled pair and its reduced single-TSS form.

Everything here is driven by three closed-form ingredients:

* the drive integrals (exact, piecewise-constant drives),
* the decoherence exponent Gamma(t) supplied by the caller,
* the initial composite state.

In the fixed basis {|++>, |+->, |-+>, |-->} with collective sigma-z values
s = (2, 0, 0, -2), the composite solution is

    rho_mn(t) = rho_mn(0) * exp(-i (E_m - E_n)) * exp(-(s_m - s_n)^2 Gamma(t) / 4)

with accumulated phases E_m(t) = s1*I_eps1/2 + s2*I_eps2/2 + s1*s2*I_j/2.
Populations are constants of motion; the |+-><-+| coherence never decays.

The reduced state is diag(alpha, 1-alpha) with off-diagonal
exp(-i I_eps1) exp(-Gamma) beta(t), where

    beta(t) = e^{i Phi} <+-|rho0|--> + e^{-i Phi} <++|rho0|-+>,  Phi = I_j(t).

Effective reduced rates are the log-derivative of that coherence:
j_eff = Im(beta * d(beta*)/dt) / |beta|^2 (frequency),
gamma_aux = -Re(...) (rate), gamma_eff = gamma + gamma_aux.  They are singular
where beta vanishes and are flagged, never clamped.
"""

from dataclasses import dataclass

import numpy as np

from .errors import KrausInvalidError, KrausUndefinedError
from .states import SZ1, SZ2, SZ_TOTAL, partial_trace_aux

BETA_SINGULAR_TOL = 1e-12


def _phase_exponents(drive, t):
    i1 = drive.eps1.integral(t)
    i2 = drive.eps2.integral(t)
    ij = drive.j.integral(t)
    # E_m as a length-4 vector (or (n,4) for vector t)
    return (np.multiply.outer(i1, SZ1 / 2.0)
            + np.multiply.outer(i2, SZ2 / 2.0)
            + np.multiply.outer(ij, SZ1 * SZ2 / 2.0))


_DECAY_POW = 0.25 * (SZ_TOTAL[:, None] - SZ_TOTAL[None, :]) ** 2


def evolve_composite(rho0, drive, gamma_exponent, t):
    """Exact composite state at time t; gamma_exponent is Gamma(t) (callable)."""
    g = gamma_exponent(t) if callable(gamma_exponent) else float(gamma_exponent)
    e = _phase_exponents(drive, t)
    phase = np.exp(-1j * (e[..., :, None] - e[..., None, :]))
    decay = np.exp(-_DECAY_POW * g)
    return np.asarray(rho0, dtype=complex) * phase * decay


def composite_trajectory(rho0, drive, times, gammas_exp):
    """Composite states on a grid; gammas_exp holds Gamma(t_k) values."""
    times = np.asarray(times, dtype=float)
    e = _phase_exponents(drive, times)                       # (n, 4)
    phase = np.exp(-1j * (e[:, :, None] - e[:, None, :]))    # (n, 4, 4)
    decay = np.exp(-_DECAY_POW[None, :, :]
                   * np.asarray(gammas_exp, dtype=float)[:, None, None])
    return np.asarray(rho0, dtype=complex)[None, :, :] * phase * decay


@dataclass(frozen=True)
class ReducedParameters:
    """Initial-state data entering the reduced solution.

    alpha: upper population (constant in time);
    b_minus / b_plus: the two beta components <+-|rho0|--> and <++|rho0|-+>.
    """
    alpha: float
    b_minus: complex
    b_plus: complex

    @classmethod
    def from_composite(cls, rho0):
        rho0 = np.asarray(rho0, dtype=complex)
        alpha = (rho0[0, 0] + rho0[1, 1]).real
        return cls(alpha=alpha, b_minus=complex(rho0[1, 3]), b_plus=complex(rho0[0, 2]))

    @property
    def beta0(self):
        return self.b_minus + self.b_plus

    def beta_at_phase(self, phi):
        """beta as a function of the accumulated coupling phase Phi."""
        phi = np.asarray(phi, dtype=float)
        return self.b_minus * np.exp(1j * phi) + self.b_plus * np.exp(-1j * phi)


def beta(rho0, drive, t):
    """The reduced coherence factor beta(t)."""
    return ReducedParameters.from_composite(rho0).beta_at_phase(drive.phase_j(t))


def reduced_qubit(rho0, drive, gamma_exponent, t):
    """Reduced single-TSS state at time t (2x2)."""
    g = gamma_exponent(t) if callable(gamma_exponent) else float(gamma_exponent)
    p = ReducedParameters.from_composite(rho0)
    coh = np.exp(-1j * drive.eps1.integral(t)) * np.exp(-g) * p.beta_at_phase(drive.phase_j(t))
    return np.array([[p.alpha, coh], [np.conj(coh), 1.0 - p.alpha]], dtype=complex)


def reduced_trajectory(rho0, drive, times, gammas_exp):
    """(alpha, coherence array) of the reduced state on a grid."""
    times = np.asarray(times, dtype=float)
    p = ReducedParameters.from_composite(rho0)
    coh = (np.exp(-1j * drive.eps1.integral(times))
           * np.exp(-np.asarray(gammas_exp, dtype=float))
           * p.beta_at_phase(drive.phase_j(times)))
    return p.alpha, coh


def effective_rates(rho0, drive, gamma_rate, t):
    """Effective reduced rates at time t.

    gamma_rate is gamma(t) (callable or value).  Returns a dict with
    gamma_tilde, j_tilde, gamma_aux, finite.  d(beta*)/dt is analytic:
    beta is a two-term trigonometric polynomial of the coupling phase.
    """
    g = gamma_rate(t) if callable(gamma_rate) else float(gamma_rate)
    p = ReducedParameters.from_composite(rho0)
    phi = drive.phase_j(t)
    jval = drive.j.value(t)
    b = p.beta_at_phase(phi)
    if abs(b) < BETA_SINGULAR_TOL:
        return {"gamma_tilde": np.nan, "j_tilde": np.nan,
                "gamma_aux": np.nan, "finite": False}
    dbdt = 1j * jval * (p.b_minus * np.exp(1j * phi) - p.b_plus * np.exp(-1j * phi))
    w = b * np.conj(dbdt) / (abs(b) ** 2)
    return {"gamma_tilde": g - w.real, "j_tilde": w.imag,
            "gamma_aux": -w.real, "finite": True}


def effective_rates_trajectory(rho0, drive, times, gamma_values):
    """Vectorized effective rates over a grid; singular samples become NaN."""
    times = np.asarray(times, dtype=float)
    p = ReducedParameters.from_composite(rho0)
    phi = drive.phase_j(times)
    jval = drive.j.value(times)
    b = p.beta_at_phase(phi)
    dbdt = 1j * jval * (p.b_minus * np.exp(1j * phi) - p.b_plus * np.exp(-1j * phi))
    finite = np.abs(b) >= BETA_SINGULAR_TOL
    w = np.full(times.shape, np.nan + 0j)
    np.divide(b * np.conj(dbdt), np.abs(b) ** 2, out=w, where=finite)
    gamma_aux = np.where(finite, -w.real, np.nan)
    return {
        "gamma_tilde": np.asarray(gamma_values, dtype=float) + gamma_aux,
        "j_tilde": np.where(finite, w.imag, np.nan),
        "gamma_aux": gamma_aux,
        "finite": finite,
    }


def gamma_aux_product(sigma2z_mean, drive, t):
    """Auxiliary-TSS rate term for product initial states (closed form).

    gamma_aux = (J/2)(1-z^2) sin(2 Phi) / (1 - (1-z^2) sin^2(Phi)), z = <sigma2_z>.
    Returns NaN where the denominator is singular (|den| < 1e-12).
    """
    z = float(sigma2z_mean)
    if not -1.0 <= z <= 1.0:
        raise ValueError("<sigma2_z> must lie in [-1, 1]")
    t = np.asarray(t, dtype=float)
    phi = drive.phase_j(t)
    jval = drive.j.value(t)
    one_m_z2 = 1.0 - z * z
    den = 1.0 - one_m_z2 * np.sin(phi) ** 2
    num = 0.5 * jval * one_m_z2 * np.sin(2.0 * phi)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(np.abs(den) < 1e-12, np.nan, num / den)
    return out if out.ndim else float(out)


def kraus_elements(rho0, drive, gamma_exponent, t):
    """Operation elements (Pi0, Pi+, Pi-) of the reduced map at time t.

    Pi0 carries sqrt(beta(t)/beta(0)) on |+><+| and the root of the conjugate
    ratio on |-><-| (so the pair reproduces the reduced solution for every
    phase of the ratio); Pi+- complete the map on the populations.
    """
    g = gamma_exponent(t) if callable(gamma_exponent) else float(gamma_exponent)
    p = ReducedParameters.from_composite(rho0)
    b0 = p.beta0
    if abs(b0) < BETA_SINGULAR_TOL:
        raise KrausUndefinedError(
            "operation elements undefined: beta(0) = 0 for this initial state")
    ratio = p.beta_at_phase(drive.phase_j(t)) / b0
    radicand = 1.0 - np.exp(-g) * abs(ratio)
    if radicand < -1e-12:
        raise KrausInvalidError(
            f"operation elements invalid: completion radicand {radicand:.3e} < 0 "
            f"(|beta(t)/beta(0)| exceeds e^Gamma)")
    half_phase = np.exp(-0.5j * drive.eps1.integral(t))
    damp = np.exp(-0.5 * g)
    pi0 = np.array([[half_phase * damp * np.sqrt(ratio), 0.0],
                    [0.0, np.conj(half_phase) * damp * np.sqrt(np.conj(ratio))]],
                   dtype=complex)
    root = np.sqrt(max(radicand, 0.0))
    pi_plus = np.array([[root, 0.0], [0.0, 0.0]], dtype=complex)
    pi_minus = np.array([[0.0, 0.0], [0.0, root]], dtype=complex)
    return pi0, pi_plus, pi_minus


def aux_spectral_weights(j_coupling, m_max):
    """Delta-comb weights of the auxiliary-TSS 'spin bath' picture.

    Returns [(2*J*m, (2J)^2 * (-1)^(m+1) * m) for m = 1..m_max].
    """
    if j_coupling <= 0:
        raise ValueError("coupling must be positive")
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    out = []
    for m in range(1, m_max + 1):
        out.append((2.0 * j_coupling * m,
                    (2.0 * j_coupling) ** 2 * (-1.0) ** (m + 1) * m))
    return out


def spin_bath_temperature(j_coupling, eps2, T):
    """Effective temperature of the auxiliary-spin comb: (2J/eps2) * T."""
    return (2.0 * j_coupling / eps2) * T


def abel_resummed_gamma_aux(sigma2z_mean, j_coupling, t, m_max=4000):
    """Abel-resummed comb series for gamma_aux (oracle for the closed form).

    sum_m 2J (-1)^(m+1) r^m sin(2 J m t), r = (1-|z|)/(1+|z|); converges to the
    product-state closed form for r < 1.
    """
    z = abs(float(sigma2z_mean))
    r = (1.0 - z) / (1.0 + z)
    t = np.asarray(t, dtype=float)
    m = np.arange(1, m_max + 1)
    signs = (-1.0) ** (m + 1) * r ** m
    return 2.0 * j_coupling * (signs[None, :]
                               * np.sin(2.0 * j_coupling * np.multiply.outer(t, m))).sum(axis=-1)


def integrate_reduced_me(rho1_0, rho0, drive, gamma_rate, t_end, dt):
    """RK4 integration of the reduced time-local master equation.

    d rho/dt = -i [ (eps1 + j_eff)/2 sigma_z, rho ]
               + gamma_eff/2 (sigma_z rho sigma_z - rho)

    with rates from the composite initial state rho0 (consistency oracle for
    the closed-form reduced solution; requires beta(t) != 0 along the path).
    """
    sz = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

    def deriv(time, rho):
        r = effective_rates(rho0, drive, gamma_rate, time)
        if not r["finite"]:
            raise ValueError(f"effective rates singular at t={time}")
        freq = drive.eps1.value(time) + r["j_tilde"]
        h = 0.5 * freq * sz
        return (-1j * (h @ rho - rho @ h)
                + 0.5 * r["gamma_tilde"] * (sz @ rho @ sz - rho))

    n = max(1, int(round(t_end / dt)))
    h = t_end / n
    rho = np.asarray(rho1_0, dtype=complex).copy()
    time = 0.0
    for _ in range(n):
        k1 = deriv(time, rho)
        k2 = deriv(time + 0.5 * h, rho + 0.5 * h * k1)
        k3 = deriv(time + 0.5 * h, rho + 0.5 * h * k2)
        k4 = deriv(time + h, rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        time += h
    return rho


def is_product_or_uncoupled(rho0, drive, tol=1e-10):
    """True when the reduced map is linear: product initial state or J == 0.

    Product check: rho0 equals the tensor product of its marginals.
    """
    jvals = np.asarray(drive.j.values)
    if np.all(np.abs(jvals) < tol):
        return True
    rho0 = np.asarray(rho0, dtype=complex)
    r1 = partial_trace_aux(rho0)
    r2 = np.einsum("abad->bd", rho0.reshape(2, 2, 2, 2))
    return bool(np.max(np.abs(rho0 - np.kron(r1, r2))) < tol)
