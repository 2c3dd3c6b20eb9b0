"""Adaptive Gauss-Kronrod quadrature for oscillatory bath integrals.

The integrals this package needs are of the form

    I(t) = integral_0^omega_max  env(omega) * osc(omega * t)  d omega

with a smooth (possibly sharply peaked) envelope and an oscillatory factor
(sin or 1-cos) whose period in omega shrinks like pi/t.  Two entry points are
provided:

* :func:`integrate` -- classic adaptive G7/K15 refinement for a single
  integrand, with caller-supplied panel breakpoints (typically the zeros of
  the oscillation plus envelope landmarks).
* :func:`build_mesh` / :func:`apply_mesh` -- refine a mesh once against the
  worst-case (largest) time, evaluate the envelope once on its nodes, then
  sweep the oscillatory factor over a whole time grid with dense matrix
  products.  At smaller t the integrand is smoother on every panel, so the
  panel-wise K15 rule only gains accuracy; a pointwise-agreement test guards
  this shortcut.

All functions are pure; nothing here keeps mutable state between calls.
"""

from dataclasses import dataclass

import numpy as np

from .errors import QuadratureError

# 15-point Kronrod nodes on [-1, 1] and weights; the 7 Gauss points are the
# odd-indexed nodes.  Standard tabulated values (QUADPACK dqk15).
_XK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_GIDX = np.arange(1, 15, 2)
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])

_EPS = np.finfo(float).eps


def _panel_nodes(lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return mid[:, None] + half[:, None] * _XK[None, :], half


def _panel_estimates(fvals, half):
    """K15 value and QUADPACK-style error estimate per panel."""
    resk = (fvals @ _WK) * half
    resg = (fvals[:, _GIDX] @ _WG) * half
    # resasc measures deviation of f from its panel mean; scaling the raw
    # |K15-G7| difference by it keeps the estimate meaningful for panels where
    # the integrand nearly cancels.
    fmean = resk / np.maximum(2.0 * half, _EPS)
    resasc = (np.abs(fvals - fmean[:, None]) @ _WK) * half
    raw = np.abs(resk - resg)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * raw / np.where(resasc > 0, resasc, 1.0)) ** 1.5)
    err = np.where(resasc > 0, scaled, raw)
    resabs = (np.abs(fvals) @ _WK) * half
    return resk, np.maximum(err, 50.0 * _EPS * resabs)


def _initial_panels(a, b, breakpoints):
    pts = [a, b]
    if breakpoints is not None:
        arr = np.asarray(breakpoints, dtype=float)
        pts.extend(arr[(arr > a) & (arr < b)].tolist())
    edges = np.unique(np.asarray(pts, dtype=float))
    return edges[:-1], edges[1:]


def integrate(f, a, b, *, rel_tol=1e-8, abs_tol=1e-12, breakpoints=None,
              max_panels=20000):
    """Integrate a vectorized scalar function f over [a, b].

    Returns (value, error_estimate).  Raises QuadratureError if the target
    max(abs_tol, rel_tol*|I|) cannot be met within the panel budget.
    """
    if b <= a:
        return 0.0, 0.0
    lo, hi = _initial_panels(a, b, breakpoints)
    pts, half = _panel_nodes(lo, hi)
    vals, errs = _panel_estimates(f(pts), half)

    for _ in range(100):
        total = vals.sum()
        tol = max(abs_tol, rel_tol * abs(total))
        toterr = errs.sum()
        if toterr <= tol:
            return total, toterr
        if len(lo) >= max_panels:
            raise QuadratureError(
                f"quadrature did not converge: error estimate {toterr:.3e} "
                f"exceeds tolerance {tol:.3e} at {len(lo)} panels",
                value=total, error_estimate=toterr)
        # split every panel holding more than its share of the budget
        split = errs > tol / (2.0 * len(lo))
        if not split.any():
            split = errs >= errs.max()
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[~split], lo[split], mid])
        new_hi = np.concatenate([hi[~split], mid, hi[split]])
        keep_vals, keep_errs = vals[~split], errs[~split]
        pts, half = _panel_nodes(np.concatenate([lo[split], mid]),
                                 np.concatenate([mid, hi[split]]))
        v2, e2 = _panel_estimates(f(pts), half)
        lo, hi = new_lo, new_hi
        vals = np.concatenate([keep_vals, v2])
        errs = np.concatenate([keep_errs, e2])

    raise QuadratureError(
        f"quadrature refinement stalled with error estimate {errs.sum():.3e}",
        value=vals.sum(), error_estimate=errs.sum())


def oscillation_breakpoints(t, omega_max):
    """Zeros of sin(omega*t) in (0, omega_max): k*pi/t.

    Only returned when the domain holds more than one oscillation
    (omega_max * t > 2*pi); coarser cases need no help.
    """
    if t <= 0.0 or omega_max * abs(t) <= 2.0 * np.pi:
        return np.empty(0)
    k = np.arange(1, int(omega_max * t / np.pi) + 1)
    return k * (np.pi / t)


@dataclass(frozen=True)
class Mesh:
    """A refined quadrature mesh with the envelope pre-evaluated on its nodes."""
    nodes: np.ndarray      # flattened K15 nodes, shape (n_panels*15,)
    weights: np.ndarray    # matching K15 weights (panel half-width folded in)
    env: np.ndarray        # envelope values at nodes


def build_mesh(env_f, a, b, *, t_ref, osc="sin", rel_tol=1e-8, abs_tol=1e-12,
               breakpoints=None, max_panels=60000):
    """Refine a panel mesh for env(w)*osc(w*t) at the worst-case time t_ref.

    The mesh is refined in two passes: first against the envelope alone (so
    sharp spectral features are resolved regardless of where the oscillation
    nodes fall), then against the full oscillatory integrand at t_ref.
    """
    if b <= a:
        raise ValueError("empty integration domain")
    osc_f = {"sin": np.sin, "one_minus_cos": lambda x: 2.0 * np.sin(0.5 * x) ** 2}[osc]
    # a positive, non-oscillatory majorant of |osc| for every t <= t_ref;
    # keeps the first pass integrable when the bare envelope diverges at w=0
    # (the oscillation factor supplies the small-w suppression there)
    cap_f = {"sin": lambda x: np.minimum(1.0, np.abs(x)),
             "one_minus_cos": lambda x: np.minimum(2.0, 0.5 * x * x)}[osc]

    lo, hi = _initial_panels(a, b, breakpoints)

    def refine(fun, lo, hi, tol_scale):
        pts, half = _panel_nodes(lo, hi)
        vals, errs = _panel_estimates(fun(pts), half)
        for _ in range(100):
            total = vals.sum()
            tol = max(abs_tol, rel_tol * abs(total)) * tol_scale
            if errs.sum() <= tol:
                return lo, hi
            if len(lo) >= max_panels:
                raise QuadratureError(
                    f"mesh refinement did not converge: error estimate "
                    f"{errs.sum():.3e} exceeds tolerance {tol:.3e} at {len(lo)} panels",
                    value=total, error_estimate=errs.sum())
            split = errs > tol / (2.0 * len(lo))
            if not split.any():
                split = errs >= errs.max()
            mid = 0.5 * (lo[split] + hi[split])
            new_lo = np.concatenate([lo[~split], lo[split], mid])
            new_hi = np.concatenate([hi[~split], mid, hi[split]])
            keep_vals, keep_errs = vals[~split], errs[~split]
            pts, half = _panel_nodes(np.concatenate([lo[split], mid]),
                                     np.concatenate([mid, hi[split]]))
            v2, e2 = _panel_estimates(fun(pts), half)
            lo, hi = new_lo, new_hi
            vals = np.concatenate([keep_vals, v2])
            errs = np.concatenate([keep_errs, e2])
        raise QuadratureError("mesh refinement stalled")

    if t_ref > 0.0:
        lo, hi = refine(lambda w: env_f(w) * cap_f(w * t_ref), lo, hi, tol_scale=1.0)
        lo, hi = refine(lambda w: env_f(w) * osc_f(w * t_ref), lo, hi, tol_scale=1.0)

    order = np.argsort(lo)
    lo, hi = lo[order], hi[order]
    pts, half = _panel_nodes(lo, hi)
    weights = (half[:, None] * _WK[None, :]).ravel()
    nodes = pts.ravel()
    return Mesh(nodes=nodes, weights=weights, env=env_f(nodes))


def apply_mesh(mesh, times, osc="sin", block=64):
    """Evaluate integral env(w)*osc(w*t) dw on a time grid using a built mesh."""
    osc_f = {"sin": np.sin, "one_minus_cos": lambda x: 2.0 * np.sin(0.5 * x) ** 2}[osc]
    times = np.asarray(times, dtype=float)
    wenv = mesh.weights * mesh.env
    out = np.empty(times.shape, dtype=float)
    flat = times.ravel()
    res = out.ravel()
    for i in range(0, flat.size, block):
        phase = mesh.nodes[:, None] * flat[None, i:i + block]
        res[i:i + block] = wenv @ osc_f(phase)
    return out
