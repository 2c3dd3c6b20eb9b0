"""Piecewise-constant drive profiles and their exact time integrals."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class PiecewiseConstant:
    """A piecewise-constant function of time with exact integrals.

    breakpoints must be strictly increasing and start at 0; values[i] applies
    on [breakpoints[i], breakpoints[i+1]).
    """
    breakpoints: tuple
    values: tuple
    _cum: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if bp.ndim != 1 or bp.size == 0 or bp[0] != 0.0:
            raise ConfigError("drive breakpoints must start at t=0")
        if bp.size != vals.size:
            raise ConfigError("drive breakpoints and values must have equal length")
        if bp.size > 1 and not np.all(np.diff(bp) > 0):
            raise ConfigError("drive breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", tuple(bp.tolist()))
        object.__setattr__(self, "values", tuple(vals.tolist()))
        # cumulative integral up to each breakpoint
        cum = np.concatenate([[0.0], np.cumsum(vals[:-1] * np.diff(bp))])
        object.__setattr__(self, "_cum", tuple(cum.tolist()))

    @classmethod
    def constant(cls, v):
        return cls((0.0,), (float(v),))

    @property
    def is_constant(self):
        return len(self.values) == 1 or len(set(self.values)) == 1

    def value(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1, 0, None)
        return np.asarray(self.values)[idx]

    def integral(self, t):
        """Exact integral from 0 to t (t >= 0); continuous and vectorized."""
        t = np.asarray(t, dtype=float)
        bp = np.asarray(self.breakpoints)
        idx = np.clip(np.searchsorted(bp, t, side="right") - 1, 0, None)
        base = np.asarray(self._cum)[idx]
        return base + np.asarray(self.values)[idx] * (t - bp[idx])


def _as_pc(x):
    if isinstance(x, PiecewiseConstant):
        return x
    return PiecewiseConstant.constant(x)


@dataclass(frozen=True)
class DriveProfile:
    """The three system drives: splittings eps1(t), eps2(t) and coupling j(t)."""
    eps1: PiecewiseConstant
    eps2: PiecewiseConstant
    j: PiecewiseConstant

    @classmethod
    def build(cls, eps1=0.0, eps2=0.0, j=0.0):
        return cls(_as_pc(eps1), _as_pc(eps2), _as_pc(j))

    def phase_j(self, t):
        """Phi(t) = integral of the coupling, the rotation angle of beta."""
        return self.j.integral(t)
