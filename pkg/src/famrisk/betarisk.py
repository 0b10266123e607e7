"""Continuous risk model: family-level risk follows a beta distribution.

Fitting uses the moment identities of the beta family. With mean risk
``mu = alpha/(alpha+beta)`` and squared coefficient of variation
``cv2 = beta/(alpha(alpha+beta+1))``, the familial relative risk is
``frr = 1 + cv2``, so a published (lifetime risk, FRR) pair pins the shape
parameters in closed form:

    alpha = (1 - mu)/(frr - 1) - mu,    beta = alpha (1 - mu)/mu.

The pair is feasible only while frr < 1/mu (a probability in [0, 1] has
E[P^2] <= E[P]). frr = 1 has zero variance and is represented by a flagged
point-mass model whose Lorenz curve is the diagonal.

The Lorenz curve L(u) is the share of total disease burden carried by the u
lowest-risk fraction of the population: L(u) = I_Q(u)(alpha+1, beta) with Q
the risk quantile. The Gini index is 1 - 2 * integral of L, computed by
fixed-order Gauss-Legendre panels refined geometrically toward both
endpoints (L is steepest near u = 1 when alpha < 1).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError
from .special import BetaParams, beta_sample, inv_reg_inc_beta, reg_inc_beta

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)


def _panel_edges():
    # [0, 2^-30, ..., 0.25, 0.5, 0.75, ..., 1 - 2^-30, 1]
    left = [0.5 ** k for k in range(30, 0, -1)]
    right = [1.0 - 0.5 ** k for k in range(2, 31)]
    return np.array([0.0] + left + right + [1.0])

_PANEL_EDGES = _panel_edges()


@dataclass(frozen=True)
class BetaRiskModel:
    """Beta-distributed family risk, or a flagged zero-variance point mass."""

    params: BetaParams | None
    point_mass: float | None = None

    def __post_init__(self):
        if (self.params is None) == (self.point_mass is None):
            raise ValueError("exactly one of params / point_mass must be given")
        if self.point_mass is not None and not 0.0 < self.point_mass < 1.0:
            raise ValueError(f"point_mass must lie in (0, 1), got {self.point_mass!r}")

    @staticmethod
    def from_params(alpha, beta):
        return BetaRiskModel(params=BetaParams(alpha, beta))

    @staticmethod
    def degenerate(mean):
        """Zero-variance model: every family carries risk ``mean``."""
        return BetaRiskModel(params=None, point_mass=mean)

    @property
    def is_point_mass(self):
        return self.point_mass is not None

    @property
    def alpha(self):
        return None if self.is_point_mass else self.params.alpha

    @property
    def beta(self):
        return None if self.is_point_mass else self.params.beta

    def mean_risk(self):
        if self.is_point_mass:
            return self.point_mass
        a, b = self.params.alpha, self.params.beta
        return a / (a + b)

    def cv_squared(self):
        if self.is_point_mass:
            return 0.0
        a, b = self.params.alpha, self.params.beta
        return b / (a * (a + b + 1.0))

    def frr(self):
        return 1.0 + self.cv_squared()

    def quantile(self, u):
        if self.is_point_mass:
            return np.full_like(np.asarray(u, dtype=np.float64), self.point_mass) \
                if np.ndim(u) else self.point_mass
        return inv_reg_inc_beta(u, self.params)

    def lorenz_at(self, u):
        """Burden share of the u lowest-risk population fraction (scalar or array)."""
        if self.is_point_mass:
            u = np.asarray(u, dtype=np.float64)
            if np.any(u < 0.0) or np.any(u > 1.0):
                raise ValueError("u must lie in [0, 1]")
            return u if u.ndim else float(u)
        burden = BetaParams(self.params.alpha + 1.0, self.params.beta)
        x = inv_reg_inc_beta(u, self.params)
        return reg_inc_beta(x, burden)

    def lorenz_curve(self, n_points=1001):
        u = np.linspace(0.0, 1.0, n_points)
        return LorenzCurve(population_fraction=u,
                           burden_fraction=np.asarray(self.lorenz_at(u)),
                           gini=self.gini())

    def gini(self):
        """Twice the area between the equality diagonal and the Lorenz curve."""
        if self.is_point_mass:
            return 0.0
        total = 0.0
        for lo, hi in zip(_PANEL_EDGES[:-1], _PANEL_EDGES[1:]):
            half = 0.5 * (hi - lo)
            u = lo + half * (_GL_NODES + 1.0)
            total += half * float(np.dot(_GL_WEIGHTS, self.lorenz_at(u)))
        return 1.0 - 2.0 * total

    def top_share(self, fraction):
        """Share of all disease occurring in the top-``fraction`` risk stratum."""
        _check_fraction(fraction)
        if self.is_point_mass:
            return fraction
        return 1.0 - float(self.lorenz_at(1.0 - fraction))

    def mean_risk_ratio(self, fraction):
        """Mean risk above the (1 - fraction) risk quantile over the mean below it."""
        _check_fraction(fraction)
        if self.is_point_mass:
            return 1.0
        share = self.top_share(fraction)
        return (share / fraction) / ((1.0 - share) / (1.0 - fraction))

    def median_risk_ratio(self, fraction):
        """Median risk of the top-``fraction`` stratum over the median of the rest."""
        _check_fraction(fraction)
        if self.is_point_mass:
            return 1.0
        upper = self.quantile(1.0 - fraction / 2.0)
        lower = self.quantile((1.0 - fraction) / 2.0)
        return upper / lower

    def sample_risks(self, n, seed):
        """n family-risk draws, deterministic per seed."""
        if self.is_point_mass:
            if not isinstance(n, int) or n < 1:
                raise ValueError(f"n must be a positive integer, got {n!r}")
            return np.full(n, self.point_mass)
        return beta_sample(self.params, n, seed)


@dataclass(frozen=True)
class LorenzCurve:
    """Sampled Lorenz curve: population fraction u against burden share L(u)."""

    population_fraction: np.ndarray
    burden_fraction: np.ndarray
    gini: float


def fit_from_risk_and_frr(mu, frr):
    """Beta risk model with mean risk ``mu`` and familial relative risk ``frr``."""
    if not (isinstance(mu, (int, float)) and math.isfinite(mu) and 0.0 < mu < 1.0):
        raise ValueError(f"lifetime risk mu must lie strictly inside (0, 1), got {mu!r}")
    if not (isinstance(frr, (int, float)) and math.isfinite(frr) and frr >= 1.0):
        raise ValueError(f"frr must be >= 1, got {frr!r}")
    if frr == 1.0:
        return BetaRiskModel.degenerate(float(mu))
    if frr >= 1.0 / mu:
        raise InfeasibleError(
            f"frr = {frr:g} with mean risk {mu:g} violates the feasibility "
            f"bound frr < 1/mu = {1.0 / mu:g} (a probability must satisfy "
            "E[P^2] <= E[P])", bound=1.0 / mu)
    alpha = (1.0 - mu) / (frr - 1.0) - mu
    beta = alpha * (1.0 - mu) / mu
    return BetaRiskModel.from_params(alpha, beta)


def _check_fraction(fraction):
    if not (isinstance(fraction, (int, float)) and 0.0 < fraction < 1.0):
        raise ValueError(f"fraction must lie strictly inside (0, 1), got {fraction!r}")
