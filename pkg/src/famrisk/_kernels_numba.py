"""Jit-compiled numeric kernels.

Scalar algorithms compiled with numba; the array entry points loop over
elements. `_kernels_numpy` implements the same algorithms vectorized, and the
two backends must agree element-for-element up to libm rounding differences
(covered by the backend parity tests).
"""

import math

import numpy as np
from numba import njit

U64 = np.uint64

# splitmix64 increment and finalizer multipliers
_GOLDEN = U64(0x9E3779B97F4A7C15)
_MIX1 = U64(0xBF58476D1CE4E5B9)
_MIX2 = U64(0x94D049BB133111EB)

# (k + 1) * 2**-53 maps the top 53 bits of a u64 onto (0, 1]
_INV53 = 1.1102230246251565e-16

_CF_EPS = 2.220446049250313e-16
_CF_MAX_ITER = 500
_FPMIN = 1e-300
_TWO_PI = 6.283185307179586


# ---------------------------------------------------------------------------
# Seeded RNG: splitmix64 substreams
#
# Every independent random object (sample draw, simulated family) consumes
# from its own substream derived from (seed, index), so results are
# reproducible and independent of batching or vectorization order.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> U64(30))) * _MIX1
    z = (z ^ (z >> U64(27))) * _MIX2
    return z ^ (z >> U64(31))


@njit(cache=True)
def _stream_init(seed, index):
    return _mix64(U64(seed) + _GOLDEN * (U64(index) + U64(1)))


@njit(cache=True)
def _next_unit(state):
    # advances the substream; returns a double in (0, 1]
    state = state + _GOLDEN
    z = _mix64(state)
    return (float(z >> U64(11)) + 1.0) * _INV53, state


# ---------------------------------------------------------------------------
# Regularized incomplete beta function
# ---------------------------------------------------------------------------

@njit(cache=True)
def _betacf(a, b, x):
    # Lentz's continued fraction; caller guarantees x on the fast-converging
    # side of the symmetry switch point (a+1)/(a+b+2).
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= _CF_EPS:
            break
    return h


@njit(cache=True)
def betainc_scalar(a, b, x):
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_beta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
    front = math.exp(a * math.log(x) + b * math.log1p(-x) - ln_beta)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


@njit(cache=True)
def betainc(a, b, x):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = betainc_scalar(a, b, x[i])
    return out


# ---------------------------------------------------------------------------
# Quantile: bracketed Newton in logit space with bisection fallback
# ---------------------------------------------------------------------------

@njit(cache=True)
def betaincinv_scalar(a, b, u):
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    ln_beta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)

    # start from the best of: distribution mean, lower-tail asymptote
    # x ~ (u a B)^(1/a), upper-tail asymptote 1 - ((1-u) b B)^(1/b)
    x = a / (a + b)
    fbest = abs(betainc_scalar(a, b, x) - u)
    xs = math.exp((math.log(u) + math.log(a) + ln_beta) / a)
    if 0.0 < xs < 1.0:
        f = abs(betainc_scalar(a, b, xs) - u)
        if f < fbest:
            x = xs
            fbest = f
    xl = 1.0 - math.exp((math.log1p(-u) + math.log(b) + ln_beta) / b)
    if 0.0 < xl < 1.0:
        f = abs(betainc_scalar(a, b, xl) - u)
        if f < fbest:
            x = xl

    lo = 0.0
    hi = 1.0
    best_x = x
    best_err = 2.0
    # relative tolerance in the tails (the continued fraction is relatively
    # accurate there), absolute 1e-16 floor in the center
    tol = 1e-13 * max(min(u, 1.0 - u), 1e-3)
    for _ in range(300):
        fval = betainc_scalar(a, b, x) - u
        err = abs(fval)
        if err < best_err:
            best_err = err
            best_x = x
        if err <= tol:
            break
        if fval > 0.0:
            hi = x
        else:
            lo = x
        xn = -1.0
        dens = math.exp((a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x) - ln_beta)
        deriv = dens * x * (1.0 - x)  # dF/dt at t = logit(x)
        if deriv > 0.0 and math.isfinite(deriv):
            t = math.log(x) - math.log1p(-x)
            tn = t - fval / deriv
            if math.isfinite(tn):
                xn = 1.0 / (1.0 + math.exp(-tn))
        if not (lo < xn < hi):
            # bisect; geometric steps while a bracket end still sits on the
            # domain boundary, so roots many orders of magnitude from the
            # start are reached in O(100) steps
            if lo == 0.0:
                xn = hi * 1e-3
            elif hi == 1.0:
                xn = 1.0 - (1.0 - lo) * 1e-3
            else:
                xn = 0.5 * (lo + hi)
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if xn == x or not (lo < xn < hi):
            break  # bracket exhausted at adjacent floats
        x = xn
    # the root can fall in the representational gap next to an endpoint
    # (possible when min(a, b) is small); the endpoint itself may then be
    # the best float64 answer
    if u < best_err:
        best_x = 0.0
        best_err = u
    if 1.0 - u < best_err:
        best_x = 1.0
    return best_x


@njit(cache=True)
def betaincinv(a, b, u):
    out = np.empty(u.size)
    for i in range(u.size):
        out[i] = betaincinv_scalar(a, b, u[i])
    return out


# ---------------------------------------------------------------------------
# Beta variates via the two-gamma-draw construction, valid for all shapes
# ---------------------------------------------------------------------------

@njit(cache=True)
def _gamma_draw(state, shape):
    # Marsaglia-Tsang squeeze; for shape < 1 draw at shape+1 and scale by
    # u^(1/shape) (the boost uniform is consumed first).
    boost = 1.0
    sh = shape
    if sh < 1.0:
        u, state = _next_unit(state)
        boost = u ** (1.0 / sh)
        sh = sh + 1.0
    d = sh - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        u1, state = _next_unit(state)
        u2, state = _next_unit(state)
        z = math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2)
        v = 1.0 + c * z
        if v <= 0.0:
            continue
        v = v * v * v
        u, state = _next_unit(state)
        z2 = z * z
        if u < 1.0 - 0.0331 * z2 * z2:
            break
        if math.log(u) < 0.5 * z2 + d * (1.0 - v + math.log(v)):
            break
    return boost * d * v, state


@njit(cache=True)
def _beta_draw(state, a, b):
    g1, state = _gamma_draw(state, a)
    g2, state = _gamma_draw(state, b)
    tot = g1 + g2
    if tot <= 0.0:
        # both gammas underflowed (possible for tiny shapes); fall back to
        # the mean rather than emit NaN
        return a / (a + b), state
    return g1 / tot, state


@njit(cache=True)
def sample_beta(a, b, seed, n):
    out = np.empty(n)
    for i in range(n):
        state = _stream_init(U64(seed), U64(i))
        out[i], state = _beta_draw(state, a, b)
    return out


# ---------------------------------------------------------------------------
# Family simulation
#
# Family i draws its risk level p from its own substream, then family_size
# member indicators. Per-batch tallies (columns: diseased members, FRR1
# conditioning pairs, FRR1 successes, FRR2 conditioning triples, FRR2
# successes) merge by summation.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _tally(counts, row, d, fam_size):
    counts[row, 0] += d
    counts[row, 1] += d * (fam_size - 1)
    counts[row, 2] += d * (d - 1)
    pairs = d * (d - 1) // 2
    counts[row, 3] += pairs * (fam_size - 2)
    counts[row, 4] += pairs * (d - 2)


@njit(cache=True)
def simulate_dichotomous(q, irr, p_low, fam_size, bounds, seed, counts, risks):
    p_high = irr * p_low
    for batch in range(bounds.size - 1):
        for i in range(bounds[batch], bounds[batch + 1]):
            state = _stream_init(U64(seed), U64(i))
            u, state = _next_unit(state)
            p = p_high if u <= q else p_low
            risks[i] = p
            d = 0
            for _ in range(fam_size):
                u, state = _next_unit(state)
                if u <= p:
                    d += 1
            _tally(counts, batch, d, fam_size)


@njit(cache=True)
def simulate_beta(a, b, fam_size, bounds, seed, counts, risks):
    for batch in range(bounds.size - 1):
        for i in range(bounds[batch], bounds[batch + 1]):
            state = _stream_init(U64(seed), U64(i))
            p, state = _beta_draw(state, a, b)
            risks[i] = p
            d = 0
            for _ in range(fam_size):
                u, state = _next_unit(state)
                if u <= p:
                    d += 1
            _tally(counts, batch, d, fam_size)


# ---------------------------------------------------------------------------
# Two-group model: damped Newton on the transformed plane
# t = log(irr - 1), s = logit(q)
# ---------------------------------------------------------------------------

_T_MIN, _T_MAX = -690.0, 200.0
_S_MIN, _S_MAX = -690.0, 690.0


@njit(cache=True)
def _frr_pair(t, s):
    irr = 1.0 + math.exp(t)
    q = 1.0 / (1.0 + math.exp(-s))
    onemq = 1.0 / (1.0 + math.exp(s))
    d1 = q * irr + onemq
    f1 = (q * irr * irr + onemq) / (d1 * d1)
    f2 = (q * irr * irr * irr + onemq) / (d1 * (q * irr * irr + onemq))
    return f1, f2


@njit(cache=True)
def _residual(t, s, f1t, f2t):
    f1, f2 = _frr_pair(t, s)
    return max(abs(f1 - f1t), abs(f2 - f2t))


@njit(cache=True)
def solve_multistart(f1t, f2t, t0, s0, tol, max_iter):
    n = t0.size
    t_out = np.empty(n)
    s_out = np.empty(n)
    res_out = np.empty(n)
    it_out = np.zeros(n, dtype=np.int64)
    h = 1e-6
    for k in range(n):
        t = t0[k]
        s = s0[k]
        r = _residual(t, s, f1t, f2t)
        it = 0
        while r > tol and it < max_iter:
            f1, f2 = _frr_pair(t, s)
            e1 = f1 - f1t
            e2 = f2 - f2t
            a1, a2 = _frr_pair(t + h, s)
            b1, b2 = _frr_pair(t - h, s)
            c1, c2 = _frr_pair(t, s + h)
            d1, d2 = _frr_pair(t, s - h)
            j11 = (a1 - b1) / (2.0 * h)
            j21 = (a2 - b2) / (2.0 * h)
            j12 = (c1 - d1) / (2.0 * h)
            j22 = (c2 - d2) / (2.0 * h)
            det = j11 * j22 - j12 * j21
            if not math.isfinite(det) or abs(det) < 1e-300:
                break
            dt = -(j22 * e1 - j12 * e2) / det
            ds = -(j11 * e2 - j21 * e1) / det
            if not (math.isfinite(dt) and math.isfinite(ds)):
                break
            lam = 1.0
            accepted = False
            for _ in range(40):
                tn = min(max(t + lam * dt, _T_MIN), _T_MAX)
                sn = min(max(s + lam * ds, _S_MIN), _S_MAX)
                rn = _residual(tn, sn, f1t, f2t)
                if rn < r:
                    t = tn
                    s = sn
                    r = rn
                    accepted = True
                    break
                lam *= 0.5
            it += 1
            if not accepted:
                break
        t_out[k] = t
        s_out[k] = s
        res_out[k] = r
        it_out[k] = it
    return t_out, s_out, res_out, it_out
