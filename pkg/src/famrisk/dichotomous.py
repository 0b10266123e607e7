"""Two-group (high-risk / low-risk) population risk model.

A fraction ``q`` of families carries ``irr`` times the disease risk of the
rest. The familial relative risk given one affected member is

    FRR1 = (q irr^2 + 1 - q) / (q irr + 1 - q)^2

and given two affected members

    FRR2 = (q irr^3 + 1 - q) / ((q irr + 1 - q)(q irr^2 + 1 - q)).

Both depend only on (q, irr), never on the absolute group risks. At fixed q
the supremum of either map over irr is 1/q, which is why common diseases
(large q) can never show large familial relative risks.

`solve_risk_structure` inverts the pair of maps for (irr, q) given published
(FRR1, FRR2) estimates; the solve runs in transformed coordinates
(log(irr-1), logit(q)) with damped Newton from a coarse multi-start grid so
the open domain is enforced and the flat regions near q -> 0 or 1 are
survived.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import backend
from .errors import AmbiguousSolutionError, InfeasibleError, UnattainableError

SOLVER_TOL = 1e-9
SOLVER_MAX_ITER = 200
_GRID_SIDE = 50
_DISTINCT_REL = 1e-4


@dataclass(frozen=True)
class DichotomousRiskModel:
    """Two-group risk structure: high-risk fraction q, risk ratio irr,
    optional absolute low-group risk."""

    q: float
    irr: float
    low_risk: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.q) and 0.0 < self.q < 1.0):
            raise ValueError(f"q must lie strictly inside (0, 1), got {self.q!r}")
        if not (math.isfinite(self.irr) and self.irr >= 1.0):
            raise ValueError(f"irr must be >= 1, got {self.irr!r}")
        if self.low_risk is not None:
            if not (math.isfinite(self.low_risk) and 0.0 < self.low_risk < 1.0):
                raise ValueError(f"low_risk must lie in (0, 1), got {self.low_risk!r}")
            if self.irr * self.low_risk > 1.0:
                raise ValueError(
                    f"irr * low_risk = {self.irr * self.low_risk:g} exceeds 1; "
                    "the high-group risk would not be a probability")

    @property
    def high_risk(self):
        if self.low_risk is None:
            return None
        return self.irr * self.low_risk

    @property
    def population_risk(self):
        if self.low_risk is None:
            return None
        return self.low_risk * (self.q * self.irr + 1.0 - self.q)

    @staticmethod
    def from_population_risk(q, irr, population_risk):
        """Model whose overall mean risk equals ``population_risk``."""
        low = population_risk / (q * irr + 1.0 - q)
        return DichotomousRiskModel(q=q, irr=irr, low_risk=low)


@dataclass(frozen=True)
class RiskStructureSolution:
    """Result of inverting (FRR1, FRR2) for the risk structure.

    ``degenerate`` marks the frr1 = frr2 = 1 case, where irr is 1 and q is
    undefined (NaN): with no risk heterogeneity the group split is arbitrary.
    """

    irr: float
    q: float
    residual_norm: float
    iterations: int
    degenerate: bool = False


def frr_map(q, irr, affected=1):
    """Forward FRR map, vectorized over q and/or irr."""
    q = np.asarray(q, dtype=np.float64)
    irr = np.asarray(irr, dtype=np.float64)
    onemq = 1.0 - q
    base = q * irr + onemq
    second = q * irr * irr + onemq
    if affected == 1:
        out = second / (base * base)
    elif affected == 2:
        out = (q * irr ** 3 + onemq) / (base * second)
    else:
        raise ValueError(f"affected must be 1 or 2, got {affected!r}")
    return out if out.ndim else float(out)


def frr_one_affected(model):
    """FRR given one affected family member; independent of low_risk."""
    return frr_map(model.q, model.irr, affected=1)


def frr_two_affected(model):
    """FRR given two affected family members; independent of low_risk."""
    return frr_map(model.q, model.irr, affected=2)


def frr_supremum(q):
    """Least upper bound of both FRR maps over irr at fixed q (never attained)."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q!r}")
    return 1.0 / q


def solve_risk_structure(frr1, frr2, tol=SOLVER_TOL, max_iter=SOLVER_MAX_ITER):
    """Invert the two forward maps: find (irr, q) with FRR1 = frr1, FRR2 = frr2.

    Runs damped Newton from a coarse 50x50 multi-start grid in
    (log(irr-1), logit(q)). Raises `InfeasibleError` when no start reaches
    the residual tolerance (carrying the best residual found) and
    `AmbiguousSolutionError` if two distinct roots survive, rather than
    silently picking a branch.
    """
    for name, v in (("frr1", frr1), ("frr2", frr2)):
        if not (isinstance(v, (int, float)) and math.isfinite(v)):
            raise ValueError(f"{name} must be finite, got {v!r}")
    if frr1 == 1.0 and frr2 == 1.0:
        return RiskStructureSolution(irr=1.0, q=math.nan, residual_norm=0.0,
                                     iterations=0, degenerate=True)
    if frr1 <= 1.0:
        raise InfeasibleError(
            f"frr1 = {frr1:g} is not above 1; the two-group model cannot "
            "produce familial relative risks at or below 1")
    if frr2 <= frr1:
        raise InfeasibleError(
            f"frr2 = {frr2:g} does not exceed frr1 = {frr1:g}; conditioning "
            "on a second affected member can only increase the FRR")

    t0 = np.repeat(np.linspace(math.log(1e-3), math.log(1e6), _GRID_SIDE), _GRID_SIDE)
    s0 = np.tile(np.linspace(_logit(1e-7), _logit(0.999), _GRID_SIDE), _GRID_SIDE)
    kern = backend.active()
    t, s, res, iters = kern.solve_multistart(float(frr1), float(frr2),
                                             t0, s0, tol, max_iter)

    hit = np.nonzero(res <= tol)[0]
    if hit.size == 0:
        best = int(np.argmin(res))
        raise InfeasibleError(
            f"no (irr, q) reproduces (frr1, frr2) = ({frr1:g}, {frr2:g}); "
            f"best residual {res[best]:.3g} at irr = {1.0 + math.exp(t[best]):.6g}, "
            f"q = {_expit(s[best]):.6g}",
            best_residual=float(res[best]))

    order = hit[np.argsort(res[hit])]
    reps = []
    for k in order:
        irr_k = 1.0 + math.exp(t[k])
        q_k = _expit(s[k])
        for irr_r, q_r, _, _ in reps:
            if (abs(irr_k - irr_r) / irr_r <= _DISTINCT_REL
                    and abs(q_k - q_r) / q_r <= _DISTINCT_REL):
                break
        else:
            reps.append((irr_k, q_k, float(res[k]), int(iters[k])))
    if len(reps) > 1:
        raise AmbiguousSolutionError(
            f"{len(reps)} distinct (irr, q) roots reproduce "
            f"(frr1, frr2) = ({frr1:g}, {frr2:g}): "
            + ", ".join(f"(irr={r[0]:.6g}, q={r[1]:.6g})" for r in reps),
            solutions=[(r[0], r[1]) for r in reps])

    irr_b, q_b, res_b, it_b = reps[0]
    return RiskStructureSolution(irr=irr_b, q=q_b, residual_norm=res_b,
                                 iterations=it_b)


def irr_given_frr(q, frr, affected=1, tol=SOLVER_TOL):
    """The unique irr >= 1 whose forward map at this q equals frr.

    Raises `UnattainableError` (reporting the supremum 1/q) when frr lies at
    or above the ceiling reachable at this q.
    """
    if not (math.isfinite(q) and 0.0 < q < 1.0):
        raise ValueError(f"q must lie strictly inside (0, 1), got {q!r}")
    if not (math.isfinite(frr) and frr >= 1.0):
        raise ValueError(f"frr must be >= 1, got {frr!r}")
    if frr == 1.0:
        return 1.0
    sup = frr_supremum(q)
    if frr >= sup:
        raise UnattainableError(
            f"frr = {frr:g} is not attainable at q = {q:g}: the FRR stays "
            f"below 1/q = {sup:g} no matter how large the risk ratio is",
            bound=sup)

    hi = 2.0
    while frr_map(q, hi, affected) < frr:
        hi *= 4.0
        if hi > 1e15:
            raise UnattainableError(
                f"frr = {frr:g} at q = {q:g} requires irr beyond 1e15 "
                f"(supremum 1/q = {sup:g} is approached too slowly)",
                bound=sup)
    root = optimize.brentq(lambda i: frr_map(q, i, affected) - frr,
                           1.0, hi, xtol=1e-13, rtol=8.9e-16, maxiter=200)
    if abs(frr_map(q, root, affected) - frr) > tol:
        raise InfeasibleError(
            f"irr search did not reach the residual tolerance at q = {q:g}, "
            f"frr = {frr:g}", best_residual=abs(frr_map(q, root, affected) - frr))
    return float(root)


def frr_curve(sweep, values, q=None, irr=None, affected=1):
    """Forward-map series over a grid of irr (fixed q) or q (fixed irr).

    Returns ``(abscissa, frr)`` arrays in grid order.
    """
    values = np.asarray(values, dtype=np.float64)
    if sweep == "irr":
        if q is None:
            raise ValueError("sweep='irr' requires the fixed q")
        if not 0.0 < q < 1.0:
            raise ValueError(f"q must lie in (0, 1), got {q!r}")
        if values.size and (values.min() < 1.0 or not np.all(np.isfinite(values))):
            raise ValueError("irr grid values must be finite and >= 1")
        return values, frr_map(q, values, affected)
    if sweep == "q":
        if irr is None:
            raise ValueError("sweep='q' requires the fixed irr")
        if irr < 1.0:
            raise ValueError(f"irr must be >= 1, got {irr!r}")
        if values.size and (values.min() <= 0.0 or values.max() >= 1.0
                            or not np.all(np.isfinite(values))):
            raise ValueError("q grid values must lie strictly inside (0, 1)")
        return values, frr_map(values, irr, affected)
    raise ValueError(f"sweep must be 'irr' or 'q', got {sweep!r}")


def peak_q(irr, affected=1):
    """(q*, FRR_max): the high-risk fraction maximizing the FRR at fixed irr.

    Golden-section search on the unimodal curve, q* located within 1e-8.
    """
    if not (math.isfinite(irr) and irr > 1.0):
        raise ValueError(f"irr must be > 1, got {irr!r}")
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 1e-15, 1.0 - 1e-15
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc = frr_map(c, irr, affected)
    fd = frr_map(d, irr, affected)
    while hi - lo > 1e-10:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = frr_map(c, irr, affected)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = frr_map(d, irr, affected)
    q_star = 0.5 * (lo + hi)
    return q_star, frr_map(q_star, irr, affected)


def _logit(p):
    return math.log(p) - math.log1p(-p)


def _expit(x):
    return 1.0 / (1.0 + math.exp(-x))
