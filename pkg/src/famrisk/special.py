"""Beta-distribution numerical kernel: log-gamma, log-beta, density, CDF,
quantile, and seeded sampling.

Everything here is implemented from first principles (continued fraction for
the regularized incomplete beta, bracketed Newton for its inverse, paired
gamma draws for sampling) so that the same code runs under both kernel
backends. scipy appears only in the test suite, as an independent oracle.

Endpoint convention for the density: when the density is unbounded at an
endpoint (``alpha < 1`` at x=0, or ``beta < 1`` at x=1) `beta_pdf` returns
``math.inf`` as the distinguished "unbounded" signal; bounded endpoints
return their finite limit value.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import backend


@dataclass(frozen=True)
class BetaParams:
    """Shape parameters of a beta distribution; both must be positive."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))


def log_gamma(x):
    """Natural log of the gamma function for x > 0."""
    if not (isinstance(x, (int, float)) and math.isfinite(x)) or x <= 0:
        raise ValueError(f"log_gamma requires finite x > 0, got {x!r}")
    return math.lgamma(x)


def log_beta(params):
    """ln B(alpha, beta) = ln Gamma(alpha) + ln Gamma(beta) - ln Gamma(alpha+beta)."""
    return (math.lgamma(params.alpha) + math.lgamma(params.beta)
            - math.lgamma(params.alpha + params.beta))


def _check_unit_interval(x, what):
    x = float(x)
    if not math.isfinite(x) or not 0.0 <= x <= 1.0:
        raise ValueError(f"{what} must lie in [0, 1], got {x!r}")
    return x


def beta_pdf(x, params):
    """Density of Beta(alpha, beta) at x in [0, 1].

    See the module docstring for the endpoint convention.
    """
    x = _check_unit_interval(x, "x")
    a, b = params.alpha, params.beta
    if x == 0.0:
        if a < 1.0:
            return math.inf
        if a == 1.0:
            return b
        return 0.0
    if x == 1.0:
        if b < 1.0:
            return math.inf
        if b == 1.0:
            return a
        return 0.0
    return math.exp((a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x)
                    - log_beta(params))


def reg_inc_beta(x, params):
    """Regularized incomplete beta I_x(alpha, beta): the beta CDF at x.

    Accepts a scalar or an array; nondecreasing in x, 0 at x=0, 1 at x=1.
    """
    kern = backend.active()
    if np.ndim(x) == 0:
        return kern.betainc_scalar(params.alpha, params.beta,
                                   _check_unit_interval(x, "x"))
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)) or x.min() < 0.0 or x.max() > 1.0:
        raise ValueError("x values must lie in [0, 1]")
    return kern.betainc(params.alpha, params.beta, x)


def inv_reg_inc_beta(u, params):
    """Inverse of `reg_inc_beta` in its first argument: the beta quantile.

    Solves I_x(alpha, beta) = u to within 1e-12 on the CDF scale (bracketed
    Newton with bisection fallback). Accepts a scalar or an array.
    """
    kern = backend.active()
    if np.ndim(u) == 0:
        return kern.betaincinv_scalar(params.alpha, params.beta,
                                      _check_unit_interval(u, "u"))
    u = np.asarray(u, dtype=np.float64)
    if not np.all(np.isfinite(u)) or u.min() < 0.0 or u.max() > 1.0:
        raise ValueError("u values must lie in [0, 1]")
    return kern.betaincinv(params.alpha, params.beta, u)


def beta_sample(params, n, seed):
    """n draws from Beta(alpha, beta), deterministic per seed.

    Each draw consumes its own splitmix64 substream derived from
    ``(seed, draw index)``, so the stream is identical no matter how draws
    are batched. Draws are built from two gamma-shaped variates combined as
    g1/(g1+g2), which is valid for all shape values including alpha < 1.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return backend.active().sample_beta(params.alpha, params.beta,
                                        int(seed) & 0xFFFFFFFFFFFFFFFF, n)
