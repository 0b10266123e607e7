"""Pure-numpy numeric kernels.

Vectorized mirror of `_kernels_numba`: identical algorithms, identical
substream consumption per element, so the two backends agree element-for-
element up to libm rounding differences. Rejection loops run lock-step over
the still-active elements; converged elements stop consuming randomness and
stop updating, exactly as the scalar code does.
"""

import math

import numpy as np

U64 = np.uint64

_GOLDEN = U64(0x9E3779B97F4A7C15)
_MIX1 = U64(0xBF58476D1CE4E5B9)
_MIX2 = U64(0x94D049BB133111EB)

_INV53 = 1.1102230246251565e-16

_CF_EPS = 2.220446049250313e-16
_CF_MAX_ITER = 500
_FPMIN = 1e-300
_TWO_PI = 6.283185307179586

_SH30 = U64(30)
_SH27 = U64(27)
_SH31 = U64(31)
_SH11 = U64(11)


# ---------------------------------------------------------------------------
# RNG
# ---------------------------------------------------------------------------

def _mix64(z):
    z = (z ^ (z >> _SH30)) * _MIX1
    z = (z ^ (z >> _SH27)) * _MIX2
    return z ^ (z >> _SH31)


def _stream_init(seed, index):
    # index: uint64 array; one substream per element
    return _mix64(U64(seed) + _GOLDEN * (index + U64(1)))


def _next_unit(states):
    states = states + _GOLDEN
    z = _mix64(states)
    return ((z >> _SH11).astype(np.float64) + 1.0) * _INV53, states


# ---------------------------------------------------------------------------
# Regularized incomplete beta
# ---------------------------------------------------------------------------

def _betacf(a, b, x):
    # Lentz continued fraction, lock-step with per-element freezing.
    # a, b, x are same-length arrays (params differ per element after the
    # symmetry swap).
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    np.copyto(d, _FPMIN, where=np.abs(d) < _FPMIN)
    d = 1.0 / d
    h = d.copy()
    frozen = np.zeros(x.shape, dtype=bool)
    with np.errstate(all="ignore"):
        for m in range(1, _CF_MAX_ITER + 1):
            m2 = 2 * m
            aa = m * (b - m) * x / ((qam + m2) * (a + m2))
            d = 1.0 + aa * d
            np.copyto(d, _FPMIN, where=np.abs(d) < _FPMIN)
            c = 1.0 + aa / c
            np.copyto(c, _FPMIN, where=np.abs(c) < _FPMIN)
            d = 1.0 / d
            h = np.where(frozen, h, h * d * c)
            aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
            d = 1.0 + aa * d
            np.copyto(d, _FPMIN, where=np.abs(d) < _FPMIN)
            c = 1.0 + aa / c
            np.copyto(c, _FPMIN, where=np.abs(c) < _FPMIN)
            d = 1.0 / d
            delta = d * c
            h = np.where(frozen, h, h * delta)
            frozen |= np.abs(delta - 1.0) <= _CF_EPS
            if frozen.all():
                break
    return h


def _betainc_core(a, b, x):
    # x strictly inside (0, 1)
    ln_beta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
    swap = x >= (a + 1.0) / (a + b + 2.0)
    xs = np.where(swap, 1.0 - x, x)
    aa = np.where(swap, b, a)
    bb = np.where(swap, a, b)
    with np.errstate(all="ignore"):
        front = np.exp(aa * np.log(xs) + bb * np.log1p(-xs) - ln_beta)
    val = front * _betacf(aa, bb, xs) / aa
    return np.where(swap, 1.0 - val, val)


def betainc(a, b, x):
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    low = x <= 0.0
    high = x >= 1.0
    core = ~(low | high)
    out[low] = 0.0
    out[high] = 1.0
    if core.any():
        out[core] = _betainc_core(a, b, x[core])
    return out[0] if scalar else out


def betainc_scalar(a, b, x):
    return float(betainc(a, b, np.float64(x)))


# ---------------------------------------------------------------------------
# Quantile
# ---------------------------------------------------------------------------

def betaincinv(a, b, u):
    u = np.asarray(u, dtype=np.float64)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    out = np.empty_like(u)
    low = u <= 0.0
    high = u >= 1.0
    out[low] = 0.0
    out[high] = 1.0
    core = np.nonzero(~(low | high))[0]
    if core.size:
        out[core] = _betaincinv_core(a, b, u[core])
    return out[0] if scalar else out


def betaincinv_scalar(a, b, u):
    return float(betaincinv(a, b, np.float64(u)))


def _betaincinv_core(a, b, u):
    n = u.size
    ln_beta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)

    x = np.full(n, a / (a + b))
    fbest = np.abs(_betainc_core(a, b, x) - u)
    with np.errstate(all="ignore"):
        xs = np.exp((np.log(u) + math.log(a) + ln_beta) / a)
    valid = (xs > 0.0) & (xs < 1.0)
    if valid.any():
        f = np.abs(_betainc_core(a, b, xs[valid]) - u[valid])
        take = f < fbest[valid]
        idx = np.nonzero(valid)[0][take]
        x[idx] = xs[idx]
        fbest[idx] = f[take]
    with np.errstate(all="ignore"):
        xl = 1.0 - np.exp((np.log1p(-u) + math.log(b) + ln_beta) / b)
    valid = (xl > 0.0) & (xl < 1.0)
    if valid.any():
        f = np.abs(_betainc_core(a, b, xl[valid]) - u[valid])
        take = f < fbest[valid]
        idx = np.nonzero(valid)[0][take]
        x[idx] = xl[idx]

    lo = np.zeros(n)
    hi = np.ones(n)
    best_x = x.copy()
    best_err = np.full(n, 2.0)
    act = np.arange(n)
    for _ in range(300):
        if act.size == 0:
            break
        xa = x[act]
        fval = _betainc_core(a, b, xa) - u[act]
        err = np.abs(fval)
        improved = err < best_err[act]
        best_err[act[improved]] = err[improved]
        best_x[act[improved]] = xa[improved]
        done = err <= 1e-13
        if done.any():
            act = act[~done]
            if act.size == 0:
                break
            xa = x[act]
            fval = fval[~done]
        up = fval > 0.0
        hi[act[up]] = xa[up]
        lo[act[~up]] = xa[~up]
        loa = lo[act]
        hia = hi[act]
        with np.errstate(all="ignore"):
            dens = np.exp((a - 1.0) * np.log(xa) + (b - 1.0) * np.log1p(-xa) - ln_beta)
            deriv = dens * xa * (1.0 - xa)
            t = np.log(xa) - np.log1p(-xa)
            tn = t - fval / deriv
            xn = 1.0 / (1.0 + np.exp(-tn))
        good = (deriv > 0.0) & np.isfinite(deriv) & np.isfinite(tn)
        xn = np.where(good, xn, -1.0)
        fallback = ~((loa < xn) & (xn < hia))
        if fallback.any():
            geo_lo = loa == 0.0
            geo_hi = hia == 1.0
            xfall = np.where(geo_lo, hia * 1e-3,
                             np.where(geo_hi, 1.0 - (1.0 - loa) * 1e-3,
                                      0.5 * (loa + hia)))
            xn = np.where(fallback, xfall, xn)
        mid_fallback = ~((loa < xn) & (xn < hia))
        xn = np.where(mid_fallback, 0.5 * (loa + hia), xn)
        # stalled elements hit adjacent floats: bracket exhausted
        move = (xn != xa) & (loa < xn) & (xn < hia)
        x[act[move]] = xn[move]
        act = act[move]
    # roots inside the representational gap next to an endpoint: the
    # endpoint itself may be the best float64 answer
    at_zero = u < best_err
    best_x[at_zero] = 0.0
    best_err[at_zero] = u[at_zero]
    best_x[1.0 - u < best_err] = 1.0
    return best_x


# ---------------------------------------------------------------------------
# Beta variates
# ---------------------------------------------------------------------------

def _gamma_draw(states, shape):
    # lock-step Marsaglia-Tsang; rejected elements keep drawing from their
    # own substreams, accepted elements stop
    n = states.size
    out = np.empty(n)
    boost = 1.0
    sh = shape
    if shape < 1.0:
        u, states = _next_unit(states)
        boost = u ** (1.0 / shape)
        sh = shape + 1.0
    d = sh - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    act = np.arange(n)
    while act.size:
        u1, st = _next_unit(states[act])
        u2, st = _next_unit(st)
        states[act] = st
        z = np.sqrt(-2.0 * np.log(u1)) * np.cos(_TWO_PI * u2)
        v = 1.0 + c * z
        pos = v > 0.0
        cand = act[pos]
        v3 = v[pos] ** 3
        u, st = _next_unit(states[cand])
        states[cand] = st
        z2 = z[pos] * z[pos]
        with np.errstate(all="ignore"):
            accept = u < 1.0 - 0.0331 * z2 * z2
            accept |= np.log(u) < 0.5 * z2 + d * (1.0 - v3 + np.log(v3))
        out[cand[accept]] = d * v3[accept]
        act = np.concatenate([act[~pos], cand[~accept]])
    return boost * out, states


def _beta_draw(states, a, b):
    g1, states = _gamma_draw(states, a)
    g2, states = _gamma_draw(states, b)
    tot = g1 + g2
    mean = a / (a + b)
    with np.errstate(all="ignore"):
        val = np.where(tot > 0.0, g1 / np.where(tot > 0.0, tot, 1.0), mean)
    return val, states


def sample_beta(a, b, seed, n):
    states = _stream_init(seed, np.arange(n, dtype=np.uint64))
    val, _ = _beta_draw(states, a, b)
    return val


# ---------------------------------------------------------------------------
# Family simulation
# ---------------------------------------------------------------------------

def _tally(counts, row, d, fam_size):
    d = d.astype(np.int64)
    counts[row, 0] = d.sum()
    counts[row, 1] = counts[row, 0] * (fam_size - 1)
    counts[row, 2] = (d * (d - 1)).sum()
    pairs = d * (d - 1) // 2
    counts[row, 3] = pairs.sum() * (fam_size - 2)
    counts[row, 4] = (pairs * (d - 2)).sum()


def _member_count(states, p, fam_size):
    d = np.zeros(p.size, dtype=np.int64)
    for _ in range(fam_size):
        u, states = _next_unit(states)
        d += u <= p
    return d


def simulate_dichotomous(q, irr, p_low, fam_size, bounds, seed, counts, risks):
    p_high = irr * p_low
    for batch in range(bounds.size - 1):
        idx = np.arange(bounds[batch], bounds[batch + 1], dtype=np.uint64)
        states = _stream_init(seed, idx)
        u, states = _next_unit(states)
        p = np.where(u <= q, p_high, p_low)
        risks[bounds[batch]:bounds[batch + 1]] = p
        d = _member_count(states, p, fam_size)
        _tally(counts, batch, d, fam_size)


def simulate_beta(a, b, fam_size, bounds, seed, counts, risks):
    for batch in range(bounds.size - 1):
        idx = np.arange(bounds[batch], bounds[batch + 1], dtype=np.uint64)
        states = _stream_init(seed, idx)
        p, states = _beta_draw(states, a, b)
        risks[bounds[batch]:bounds[batch + 1]] = p
        d = _member_count(states, p, fam_size)
        _tally(counts, batch, d, fam_size)


# ---------------------------------------------------------------------------
# Two-group model solver
# ---------------------------------------------------------------------------

_T_MIN, _T_MAX = -690.0, 200.0
_S_MIN, _S_MAX = -690.0, 690.0


def _frr_pair(t, s):
    with np.errstate(all="ignore"):
        irr = 1.0 + np.exp(t)
        q = 1.0 / (1.0 + np.exp(-s))
        onemq = 1.0 / (1.0 + np.exp(s))
        d1 = q * irr + onemq
        f1 = (q * irr * irr + onemq) / (d1 * d1)
        f2 = (q * irr * irr * irr + onemq) / (d1 * (q * irr * irr + onemq))
    return f1, f2


def _residual(t, s, f1t, f2t):
    f1, f2 = _frr_pair(t, s)
    return np.maximum(np.abs(f1 - f1t), np.abs(f2 - f2t))


def solve_multistart(f1t, f2t, t0, s0, tol, max_iter):
    n = t0.size
    t = t0.astype(np.float64).copy()
    s = s0.astype(np.float64).copy()
    r = _residual(t, s, f1t, f2t)
    iters = np.zeros(n, dtype=np.int64)
    h = 1e-6
    act = np.nonzero(r > tol)[0]
    for _ in range(max_iter):
        if act.size == 0:
            break
        ta = t[act]
        sa = s[act]
        f1, f2 = _frr_pair(ta, sa)
        e1 = f1 - f1t
        e2 = f2 - f2t
        a1, a2 = _frr_pair(ta + h, sa)
        b1, b2 = _frr_pair(ta - h, sa)
        c1, c2 = _frr_pair(ta, sa + h)
        d1, d2 = _frr_pair(ta, sa - h)
        j11 = (a1 - b1) / (2.0 * h)
        j21 = (a2 - b2) / (2.0 * h)
        j12 = (c1 - d1) / (2.0 * h)
        j22 = (c2 - d2) / (2.0 * h)
        det = j11 * j22 - j12 * j21
        ok = np.isfinite(det) & (np.abs(det) >= 1e-300)
        with np.errstate(all="ignore"):
            dt = -(j22 * e1 - j12 * e2) / np.where(ok, det, 1.0)
            ds = -(j11 * e2 - j21 * e1) / np.where(ok, det, 1.0)
        ok &= np.isfinite(dt) & np.isfinite(ds)

        accepted = np.zeros(act.size, dtype=bool)
        lam = 1.0
        pend = np.nonzero(ok)[0]
        for _bt in range(40):
            if pend.size == 0:
                break
            tn = np.clip(ta[pend] + lam * dt[pend], _T_MIN, _T_MAX)
            sn = np.clip(sa[pend] + lam * ds[pend], _S_MIN, _S_MAX)
            rn = _residual(tn, sn, f1t, f2t)
            took = rn < r[act[pend]]
            hit = pend[took]
            ta[hit] = tn[took]
            sa[hit] = sn[took]
            r[act[hit]] = rn[took]
            accepted[hit] = True
            pend = pend[~took]
            lam *= 0.5
        t[act] = ta
        s[act] = sa
        iters[act] += 1
        act = act[accepted & (r[act] > tol)]
    return t, s, r, iters
