"""Polylogarithm Li_J(z) for integer J >= 1 and |z| < 1."""

import math

import numpy as np
from scipy.special import bernoulli, zeta as hurwitz_zeta

from .errors import DomainError

SERIES_RADIUS = 0.75
_LOG_TERMS = 90
_BERN = bernoulli(_LOG_TERMS + 40)


def _zeta_int(n):
    """zeta at an integer n != 1 (negative values through Bernoulli numbers)."""
    if n >= 2:
        return float(hurwitz_zeta(n))
    if n == 0:
        return -0.5
    k = -n
    return -float(_BERN[k + 1]) / (k + 1)


def _series(J, z):
    r = float(np.max(np.abs(z))) if z.size else 0.0
    if r == 0.0:
        return np.zeros_like(z)
    # Terms |z|^n / n^J fall below 1e-17 (1 - |z|) once n exceeds this.
    nmax = int(math.ceil(math.log(1e-17 * (1 - r)) / math.log(r))) + 1
    nmax = max(nmax, 1)
    out = np.zeros_like(z)
    zn = np.ones_like(z)
    for n in range(1, nmax + 1):
        zn = zn * z
        out += zn / float(n) ** J
    return out


def _log_expansion(J, z):
    mu = np.log(z)
    out = np.zeros_like(z)
    harmonic = math.fsum(1.0 / k for k in range(1, J))
    mu_k = np.ones_like(z)
    for k in range(_LOG_TERMS):
        if k == J - 1:
            out += mu_k / math.factorial(k) * (harmonic - np.log(-mu))
        else:
            out += _zeta_int(J - k) * mu_k / math.factorial(k)
        mu_k = mu_k * mu
    return out


def polylog(J, z):
    """Li_J(z) = sum_{n>=1} z**n / n**J for |z| <= 1 - 1e-9.

    The defining series is summed directly for |z| <= 0.75; closer to the unit
    circle the expansion in powers of log z is used.  Accepts scalars or
    arrays.
    """
    J = int(J)
    if J < 1:
        raise DomainError("polylog order must be >= 1")
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    zarr = np.atleast_1d(zarr)
    absz = np.abs(zarr)
    if np.any(absz > 1 - 1e-9) or not np.all(np.isfinite(absz)):
        raise DomainError("polylog series domain is |z| <= 1 - 1e-9")
    if J == 1:
        out = -np.log1p(-zarr)
    else:
        out = np.empty_like(zarr)
        near = absz > SERIES_RADIUS
        if np.any(~near):
            out[~near] = _series(J, zarr[~near])
        if np.any(near):
            out[near] = _log_expansion(J, zarr[near])
    return complex(out[0]) if scalar else out


def polylog_coefficient_table(J, w, tol=1e-17):
    """Rows a_k = w**k / k**J, k = 1..K, with |w|**K below tol.

    With these, Li_J(w e^{i theta}) = sum_k a_k e^{i k theta}, which makes
    repeated evaluation along a phase circle cheap.
    """
    w = np.asarray(w, dtype=complex)
    r = float(np.max(np.abs(w)))
    if r >= 1:
        raise DomainError("need |w| < 1")
    K = max(1, int(math.ceil(math.log(tol) / math.log(r))) if r > 0 else 1)
    k = np.arange(1, K + 1)
    return w[..., None] ** k / k.astype(float) ** J
