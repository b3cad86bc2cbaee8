"""Riemann zeta by Euler-Maclaurin summation, Hardy's Z and critical-line zeros.

Evaluation is organised as a tensor: rows are ordinates t, columns are
abscissae sigma.  For a block of rows the partial sum
sum_{n<N} n^{-sigma} e^{-i t log n} is a matrix product between the phase
matrix (rows x n) and the weight matrix (n x columns), so many sigmas at a
shared t cost little more than one.
"""

import math
import threading

import numpy as np
from scipy.optimize import brentq
from scipy.special import bernoulli, loggamma

from .errors import DomainError, PoleAtOne

EM_CORRECTIONS = 24
_B = bernoulli(2 * EM_CORRECTIONS)
_EM_COEF = np.array([_B[2 * k] / math.factorial(2 * k) for k in range(1, EM_CORRECTIONS + 1)])

TWO_PI_LD = np.longdouble("6.283185307179586476925286766559005768")
_BLOCK_ELEMS = 1 << 21
# Above this size of t*log n the phase is formed in extended precision.
_LD_THRESHOLD = 2.0e3

_lock = threading.Lock()
_logs = {"n": 0, "f64": np.zeros(0), "ld": np.zeros(0, dtype=np.longdouble)}


def em_cutoff(t) -> int:
    """Number of directly summed terms used at ordinate t."""
    return max(50, int(math.ceil(abs(t) / 3.0)))


def _log_table(n):
    """log k for k = 1..n in double and extended precision (cached, grows)."""
    if _logs["n"] < n:
        with _lock:
            if _logs["n"] < n:
                size = max(n, 2 * _logs["n"])
                ld = np.log(np.arange(1, size + 1, dtype=np.longdouble))
                _logs["f64"] = ld.astype(float)
                _logs["ld"] = ld
                _logs["n"] = size
    return _logs["f64"][:n], _logs["ld"][:n]


def phase_angles(t, logn, logn_ld=None):
    """Angles t_r * log n_k, reduced mod 2 pi in extended precision when large."""
    t = np.asarray(t, dtype=float)
    if logn_ld is None or not len(logn) or np.max(np.abs(t), initial=0.0) * logn[-1] < _LD_THRESHOLD:
        return np.multiply.outer(t, logn)
    ang = np.multiply.outer(t.astype(np.longdouble), logn_ld)
    return np.fmod(ang, TWO_PI_LD).astype(float)


def exp_sum_tensor(t, logn, weights, logn_ld=None):
    """sum_k weights[k, c] * exp(-i t_r log n_k) as an (R, C) complex array."""
    t = np.asarray(t, dtype=float)
    R = len(t)
    out = np.empty((R, weights.shape[1]), dtype=complex)
    if weights.shape[0] == 0:
        out[:] = 0
        return out
    rows = max(1, _BLOCK_ELEMS // weights.shape[0])
    for a in range(0, R, rows):
        ang = phase_angles(t[a:a + rows], logn, logn_ld)
        out[a:a + rows].real = np.cos(ang) @ weights
        out[a:a + rows].imag = -(np.sin(ang) @ weights)
    return out


def _n_power(s, logN, logN_ld):
    """N^{-s} elementwise, with the phase reduced carefully."""
    t = np.asarray(s.imag)
    if np.max(np.abs(t), initial=0.0) * logN < _LD_THRESHOLD:
        ang = t * logN
    else:
        ang = np.fmod(t.astype(np.longdouble) * logN_ld, TWO_PI_LD).astype(float)
    return np.exp(-s.real * logN) * (np.cos(ang) - 1j * np.sin(ang))


def em_remainder(s, N):
    """Euler-Maclaurin tail: N^{1-s}/(s-1) + N^{-s}/2 + Bernoulli corrections."""
    s = np.asarray(s, dtype=complex)
    logN = math.log(N)
    logN_ld = np.log(np.longdouble(N))
    nms = _n_power(s, logN, logN_ld)
    with np.errstate(divide="ignore", invalid="ignore"):
        res = N * nms / (s - 1) + 0.5 * nms
    fac = s * nms / N
    inv_n2 = 1.0 / (N * N)
    for k in range(EM_CORRECTIONS):
        res = res + _EM_COEF[k] * fac
        fac = fac * (s + (2 * k + 1)) * (s + (2 * k + 2)) * inv_n2
    return res


def zeta_tensor(sigmas, ts):
    """zeta(sigma_c + i t_r) for every pair, as an array of shape (len(ts), len(sigmas))."""
    sig = np.atleast_1d(np.asarray(sigmas, dtype=float))
    t = np.atleast_1d(np.asarray(ts, dtype=float))
    out = np.empty((len(t), len(sig)), dtype=complex)
    if not len(t) or not len(sig):
        return out
    order = np.argsort(np.abs(t), kind="stable")
    a = 0
    while a < len(order):
        N = em_cutoff(t[order[a]])
        # Rows are sorted by |t|; grow the block while N stays within a factor 1.25.
        b = a + 1
        budget = max(1, _BLOCK_ELEMS // N)
        while b < len(order) and b - a < budget and em_cutoff(t[order[b]]) <= 1.25 * N:
            b += 1
        idx = order[a:b]
        N = em_cutoff(np.max(np.abs(t[idx])))
        logn, logn_ld = _log_table(N - 1)
        weights = np.exp(-np.multiply.outer(logn, sig))
        part = exp_sum_tensor(t[idx], logn, weights, logn_ld)
        s = sig[None, :] + 1j * t[idx][:, None]
        out[idx] = part + em_remainder(s, N)
        a = b
    return out


def zeta_row(sigmas, t):
    """zeta(sigma + i t) for an array of sigmas at one ordinate."""
    return zeta_tensor(sigmas, [t])[0]


def zeta(s):
    """Riemann zeta at a complex point (Euler-Maclaurin, |t| <= 1e6, sigma > -1)."""
    s = complex(s)
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError("non-finite argument")
    if abs(s - 1) < 1e-12:
        raise PoleAtOne("zeta has a pole at s = 1")
    if s.real <= -1:
        raise DomainError("zeta is only provided for sigma > -1")
    return complex(zeta_tensor([s.real], [s.imag])[0, 0])


def riemann_siegel_theta(t):
    t = np.asarray(t, dtype=float)
    return np.imag(loggamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi)


def hardy_z(t):
    """Hardy's Z(t) = exp(i theta(t)) zeta(1/2 + i t), real for real t."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    z = zeta_tensor([0.5], t)[:, 0]
    return np.real(np.exp(1j * riemann_siegel_theta(t)) * z)


def critical_zeros(t_max, t_min=0.0, step=0.05, xtol=1e-13):
    """Ordinates of zeros of zeta(1/2 + it) in (t_min, t_max] from sign changes of Z.

    Only simple, separated zeros are seen; close pairs inside one grid step are
    missed.  Intended for the low-lying fixture zeros, not for large tables.
    """
    grid = np.arange(max(t_min, 1.0), t_max + step, step)
    grid = grid[grid <= t_max]
    if len(grid) < 2:
        return np.zeros(0)
    zs = hardy_z(grid)
    idx = np.flatnonzero(np.sign(zs[:-1]) * np.sign(zs[1:]) < 0)
    f = lambda x: float(hardy_z([x])[0])
    return np.array([brentq(f, grid[i], grid[i + 1], xtol=xtol, rtol=1e-15) for i in idx])


def zero_count_estimate(T):
    """Smooth part theta(T)/pi + 1 of the zero-counting function N(T)."""
    return float(riemann_siegel_theta(T) / math.pi + 1.0)
