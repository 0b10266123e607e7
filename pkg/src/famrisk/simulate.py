"""Monte Carlo family simulator.

Brute-force validation of the analytic FRR, Gini, and burden-share formulas:
each family draws one risk level (group membership in the two-group model, a
beta variate in the continuous model), then its members fall ill
independently at that risk. Empirical FRRs condition on one or two other
affected members, averaging over ordered (target, conditioner) pairs and
(target, conditioner-pair) triples within each family, which matches the
exchangeable-family reading of the analytic maps.

Randomness: family ``i`` consumes its own substream derived from
``(root_seed, i)``, so outcomes are deterministic per seed and independent of
batch layout. Batches exist to provide replicate-based standard errors
(seed-split batching rather than delta-method algebra on ratio estimators).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .betarisk import BetaRiskModel
from .dichotomous import DichotomousRiskModel

DEFAULT_POPULATION_RISK = 0.01
DEFAULT_BATCHES = 100


@dataclass(frozen=True)
class Estimate:
    """Point estimate with a replicate-based standard error."""

    value: float
    se: float


@dataclass(frozen=True)
class RatioEstimate:
    """FRR estimate; undefined (NaN, flagged by events == 0) when no
    conditioning event occurred."""

    value: float
    se: float
    events: int

    @property
    def defined(self):
        return self.events > 0


@dataclass(frozen=True)
class SimulationConfig:
    model: DichotomousRiskModel | BetaRiskModel
    n_families: int
    family_size: int = 3
    n_batches: int = DEFAULT_BATCHES
    root_seed: int = 0

    def __post_init__(self):
        if not isinstance(self.model, (DichotomousRiskModel, BetaRiskModel)):
            raise ValueError("model must be a DichotomousRiskModel or BetaRiskModel")
        if not isinstance(self.n_families, int) or self.n_families < 1:
            raise ValueError(f"n_families must be >= 1, got {self.n_families!r}")
        if not isinstance(self.family_size, int) or self.family_size < 2:
            raise ValueError(f"family_size must be >= 2, got {self.family_size!r}")
        if not isinstance(self.n_batches, int) or self.n_batches < 1:
            raise ValueError(f"n_batches must be >= 1, got {self.n_batches!r}")


@dataclass(frozen=True)
class SimulationOutcome:
    frr_one: RatioEstimate
    frr_two: RatioEstimate
    empirical_mean_risk: float
    empirical_gini: Estimate
    n_families: int
    family_size: int


def _batch_bounds(n, n_batches):
    n_batches = min(n_batches, n)
    sizes = np.full(n_batches, n // n_batches, dtype=np.int64)
    sizes[: n % n_batches] += 1
    return np.concatenate([[0], np.cumsum(sizes)])


def _sorted_gini(sorted_risks):
    # all-pairs mean absolute difference over 2 * mean, via the sorted form
    n = sorted_risks.size
    total = sorted_risks.sum()
    if total <= 0.0:
        return 0.0
    ranks = np.arange(1, n + 1, dtype=np.float64)
    return float(2.0 * np.dot(ranks, sorted_risks) / (n * total) - (n + 1.0) / n)


def _ratio_estimate(counts, members_per_batch, cond_col, succ_col):
    diseased = counts[:, 0]
    cond = counts[:, cond_col]
    succ = counts[:, succ_col]
    events = int(cond.sum())
    if events == 0 or diseased.sum() == 0:
        return RatioEstimate(value=math.nan, se=math.nan, events=events)
    p_hat = diseased.sum() / members_per_batch.sum()
    value = (succ.sum() / events) / p_hat
    ok = (cond > 0) & (diseased > 0)
    if ok.sum() >= 2:
        per_batch = (succ[ok] / cond[ok]) / (diseased[ok] / members_per_batch[ok])
        se = float(per_batch.std(ddof=1) / math.sqrt(ok.sum()))
    else:
        se = math.nan
    return RatioEstimate(value=float(value), se=se, events=events)


def simulate(config):
    """Run the family simulation and estimate FRR1, FRR2, mean risk, Gini.

    Zero conditioning events yield flagged-undefined estimates, never an
    exception.
    """
    n = config.n_families
    fam = config.family_size
    bounds = _batch_bounds(n, config.n_batches)
    n_batches = bounds.size - 1
    counts = np.zeros((n_batches, 5), dtype=np.int64)
    risks = np.empty(n, dtype=np.float64)
    kern = backend.active()
    seed = int(config.root_seed) & 0xFFFFFFFFFFFFFFFF

    model = config.model
    if isinstance(model, DichotomousRiskModel):
        p_low = model.low_risk
        if p_low is None:
            p_low = DichotomousRiskModel.from_population_risk(
                model.q, model.irr, DEFAULT_POPULATION_RISK).low_risk
        kern.simulate_dichotomous(model.q, model.irr, p_low, fam, bounds,
                                  seed, counts, risks)
    elif model.is_point_mass:
        # constant risk: the two-group kernel with irr = 1 degenerates to it
        kern.simulate_dichotomous(0.5, 1.0, model.point_mass, fam, bounds,
                                  seed, counts, risks)
    else:
        kern.simulate_beta(model.params.alpha, model.params.beta, fam, bounds,
                           seed, counts, risks)

    members = np.diff(bounds) * fam
    frr_one = _ratio_estimate(counts, members, 1, 2)
    frr_two = _ratio_estimate(counts, members, 3, 4)

    order = np.sort(risks)
    gini_value = _sorted_gini(order)
    batch_ginis = [
        _sorted_gini(np.sort(risks[bounds[b]:bounds[b + 1]]))
        for b in range(n_batches)
    ]
    gini_se = (float(np.std(batch_ginis, ddof=1) / math.sqrt(n_batches))
               if n_batches >= 2 else math.nan)

    return SimulationOutcome(
        frr_one=frr_one,
        frr_two=frr_two,
        empirical_mean_risk=float(risks.mean()),
        empirical_gini=Estimate(value=gini_value, se=gini_se),
        n_families=n,
        family_size=fam,
    )


def estimate_gini_by_sampling(model, n, seed, n_batches=DEFAULT_BATCHES):
    """Independent Gini oracle: mean |X - Y| / (2 mean risk) over n paired draws.

    Standard error from seed-split batching over the pairs.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    draws = model.sample_risks(2 * n, seed)
    x = draws[:n]
    y = draws[n:]
    mean = draws.mean()
    if mean <= 0.0:
        return Estimate(value=0.0, se=0.0)
    value = float(np.abs(x - y).mean() / (2.0 * mean))
    bounds = _batch_bounds(n, n_batches)
    per_batch = []
    for b in range(bounds.size - 1):
        xs = x[bounds[b]:bounds[b + 1]]
        ys = y[bounds[b]:bounds[b + 1]]
        m = 0.5 * (xs.mean() + ys.mean())
        if m > 0.0:
            per_batch.append(np.abs(xs - ys).mean() / (2.0 * m))
    if len(per_batch) >= 2:
        se = float(np.std(per_batch, ddof=1) / math.sqrt(len(per_batch)))
    else:
        se = math.nan
    return Estimate(value=value, se=se)
