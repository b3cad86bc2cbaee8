"""log zeta with branch tracking and the iterated integrals eta_m.

eta_0 = log zeta and eta_m(sigma + it) = int_sigma^inf eta_{m-1}(alpha + it) d alpha,
on the plane slit along the leftward horizontal rays from the zeros and along
(-inf, 1].  Two independent routes are provided:

* ``series``: the Dirichlet series regrouped as an Euler product,
  sum_{p <= P} Li_{m+1}(p^-s) / (log p)^m, plus the contribution of primes above
  P, recovered from zeta itself (sigma > 1 only).
* ``continuation``: the series value at the anchor abscissa 3 plus an
  adaptive quadrature of log zeta, tracked continuously along the horizontal
  path from the anchor.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchJump, CutViolation, DomainError
from .polylog import polylog
from .quadrature import gauss_kronrod
from .sieve import primes_upto
from .zeta import zeta_row

SIGMA_ANCHOR = 3.0
SERIES_PRIMES = 10_000
TRACK_STEP = 0.05
TRACK_TOL = 0.5
QUAD_TOL = 1e-10

_PRIMES = primes_upto(SERIES_PRIMES)
_LOGP = np.log(_PRIMES.astype(float))


@dataclass(frozen=True)
class EvalPoint:
    sigma: float
    t: float
    m: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise DomainError("m must be non-negative")

    @property
    def s(self):
        return complex(self.sigma, self.t)


@dataclass(frozen=True)
class ContinuationPath:
    """Horizontal segment from sigma_start (the anchor) leftward to sigma_end at height t."""

    t: float
    sigma_end: float
    sigma_start: float = SIGMA_ANCHOR
    step_control: float = TRACK_TOL

    def __post_init__(self):
        if self.sigma_start < 3:
            raise DomainError("continuation anchor must satisfy sigma_start >= 3")
        if not self.sigma_start > self.sigma_end > 0.5:
            raise DomainError("need sigma_start > sigma_end > 1/2")


def check_ray(t, sigma, catalog=None):
    """Raise CutViolation if the ray [sigma, +inf) + it meets a cut of the slit plane."""
    if t == 0 and sigma <= 1:
        raise CutViolation(f"sigma={sigma} lies on the real cut (-inf, 1]")
    if catalog is not None:
        hit = catalog.cut_at(t, sigma)
        if hit is not None:
            raise CutViolation(f"ray at t={t} meets the cut from the zero {hit}")


def _check_sigma(sigma):
    if not sigma > 0.5:
        raise DomainError(f"sigma out of range: {sigma} (need sigma > 1/2)")


def _snap(approx, z):
    """Branch of log z whose imaginary part is nearest to approx.imag."""
    arg = np.angle(z)
    k = np.round((np.imag(approx) - arg) / (2 * math.pi))
    return np.log(np.abs(z)) + 1j * (arg + 2 * math.pi * k)


def log_zeta_tracked(path, catalog=None):
    """log zeta along a horizontal path, continuous in sigma.

    Starts at the principal value at ``sigma_start`` (which is the Dirichlet
    series value there) and walks left with step 0.05, halving any step over
    which log zeta moves by ``step_control`` or more.  Returns a list of
    ``(sigma, value)`` pairs from right to left.
    """
    t = float(path.t)
    check_ray(t, path.sigma_end, catalog)
    n = int(math.ceil((path.sigma_start - path.sigma_end) / TRACK_STEP - 1e-9))
    grid = np.linspace(path.sigma_start, path.sigma_end, n + 1)
    zs = zeta_row(grid, t)
    out = [(float(grid[0]), complex(np.log(zs[0])))]
    for k in range(1, len(grid)):
        _refine(t, grid[k - 1], zs[k - 1], grid[k], zs[k], out, path.step_control)
    return out


def _refine(t, sa, za, sb, zb, out, tol):
    stack = [(sb, zb)]
    while stack:
        sb, zb = stack[-1]
        va = out[-1][1]
        inc = np.log(zb / za)
        if abs(inc) < tol:
            out.append((float(sb), complex(_snap(va + inc, zb))))
            sa, za = stack.pop()
        elif sa - sb < 1e-9:
            if abs(inc.imag) > math.pi / 2:
                raise BranchJump(f"log zeta jumps by {inc:.3g} near {sb}+{t}i")
            out.append((float(sb), complex(_snap(va + inc, zb))))
            sa, za = stack.pop()
        else:
            mid = 0.5 * (sa + sb)
            stack.append((mid, zeta_row([mid], t)[0]))


class _TrackedLog:
    """log zeta(u + it) for arbitrary u in [sigma, 3], branch-fixed by tracked samples."""

    def __init__(self, t, sigma, catalog=None):
        self.t = t
        if sigma < SIGMA_ANCHOR:
            samples = log_zeta_tracked(ContinuationPath(t, sigma), catalog)
            self.s = np.array([p[0] for p in samples])[::-1]
            self.v = np.array([p[1] for p in samples])[::-1]
        else:
            self.s = None

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        z = zeta_row(u, self.t)
        if self.s is None:
            return np.log(z)
        ref = np.interp(u, self.s, self.v.imag)
        return _snap(1j * ref, z)


# ---------------------------------------------------------------------------
# series route


def _euler_part(m, s):
    """sum_{p <= P} Li_{m+1}(p^-s) / (log p)^m for an array of s."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    w = np.exp(-np.multiply.outer(s, _LOGP))
    if m == 0:
        return -np.log1p(-w).sum(axis=1)
    return (polylog(m + 1, w) / _LOGP**m).sum(axis=1)


def _rough_log(s_arr, t):
    """log of prod_{p > P} (1 - p^-s)^-1 = log(zeta(s) prod_{p <= P}(1 - p^-s)), same t."""
    s_arr = np.asarray(s_arr, dtype=complex)
    z = zeta_row(s_arr.real, t)
    local = np.log1p(-np.exp(-np.multiply.outer(s_arr, _LOGP))).sum(axis=1)
    return np.log(z * np.exp(local))


def rough_tail_size(sigma):
    """Real value of the rough tail at sigma; it dominates the tail anywhere on that line."""
    return float(_rough_log(np.array([sigma + 0j]), 0.0)[0].real)


def eta_series(m, s):
    """eta_m(s) for sigma > 1 by the Euler-product regrouping.

    Returns ``(value, error_estimate)``.  The primes above P enter through
    zeta(s) * prod_{p<=P}(1 - p^-s); for m >= 1 that piece is integrated m
    times along the horizontal ray.
    """
    s = complex(s)
    sigma, t = s.real, s.imag
    if m < 0:
        raise DomainError("m must be non-negative")
    if not sigma > 1:
        raise DomainError("series method needs sigma > 1")
    if rough_tail_size(sigma) > 2.0:
        raise DomainError("sigma too close to 1 for the series method")
    head = complex(_euler_part(m, [s])[0])
    if m == 0:
        tail = complex(_rough_log([s], t)[0])
        return head + tail, 1e-15 * max(1.0, abs(tail))
    # int_0^inf u^{m-1}/(m-1)! tail_0(s+u) du; tail_0 ~ P^{-u} so u <= 6 suffices.
    fact = math.factorial(m - 1)
    f = lambda u: u ** (m - 1) / fact * _rough_log(s + u, t)
    tail, err = gauss_kronrod(f, 0.0, 6.0, abstol=1e-14)
    return head + tail, err + 1e-15


# ---------------------------------------------------------------------------
# continuation route


def eta_continuation(m, s, catalog=None):
    """eta_m(s) for sigma > 1/2 by anchor-plus-quadrature along the horizontal ray.

    Uses the Cauchy formula for repeated integration,
    eta_m(sigma) = sum_{j<m} (3 - sigma)^j / j! * eta_{m-j}(3)
                   + int_sigma^3 (u - sigma)^{m-1} / (m-1)! * log zeta(u) du,
    which equals m nested integrations of log zeta from the anchor.
    Returns ``(value, error_estimate)``.
    """
    s = complex(s)
    sigma, t = s.real, s.imag
    _check_sigma(sigma)
    check_ray(t, sigma, catalog)
    logz = _TrackedLog(t, sigma, catalog)
    if m == 0:
        return complex(logz(np.array([sigma]))[0]), 1e-14
    a = SIGMA_ANCHOR
    value, err = 0j, 0.0
    for j in range(m):
        anchor, e = eta_series(m - j, complex(a, t))
        value += (a - sigma) ** j / math.factorial(j) * anchor
        err += e
    fact = math.factorial(m - 1)
    f = lambda u: (u - sigma) ** (m - 1) / fact * logz(u)
    integral, qerr = gauss_kronrod(f, sigma, a, abstol=QUAD_TOL)
    return value + integral, err + qerr


def eta_m(m, s, method="continuation", catalog=None):
    """eta_m at s by ``"series"`` (sigma > 1) or ``"continuation"`` (sigma > 1/2)."""
    if method == "series":
        return eta_series(m, s)[0]
    if method == "continuation":
        return eta_continuation(m, s, catalog)[0]
    raise ValueError(f"unknown method {method!r}")


def log_zeta(s, catalog=None):
    return eta_m(0, s, "continuation", catalog)


# ---------------------------------------------------------------------------
# derivatives


def disk_is_clear(s, r, catalog=None):
    """True if the closed disk |z - s| <= r avoids every cut (and sigma > 1/2)."""
    s = complex(s)
    if s.real - r <= 0.5:
        return False
    if abs(s.imag) <= r and s.real - math.sqrt(r * r - s.imag**2) <= 1:
        return False
    if catalog is not None:
        for beta, gamma in catalog.zeros_near(s.imag, r):
            dy = gamma - s.imag
            if s.real - math.sqrt(max(r * r - dy * dy, 0.0)) <= beta:
                return False
    return True


def eta_m_derivatives(m, s, order, radius=0.05, catalog=None, nodes=64):
    """[eta_m(s), eta_m'(s), ..., eta_m^(order-1)(s)] by the trapezoidal Cauchy integral.

    f^(j)(s) = j! / (M r^j) * sum_k f(s + r e^{i theta_k}) e^{-i j theta_k} with
    M equally spaced nodes, which converges geometrically for holomorphic f.
    """
    from .batch import eta_batch

    if order < 1:
        raise DomainError("order must be >= 1")
    if not 0 < radius <= 0.1:
        raise DomainError("radius must lie in (0, 0.1]")
    if not disk_is_clear(s, radius, catalog):
        raise CutViolation(f"disk of radius {radius} about {s} meets a cut")
    theta = 2 * math.pi * np.arange(nodes) / nodes
    ring = complex(s) + radius * np.exp(1j * theta)
    vals = eta_batch(m, ring, catalog=catalog)
    out = []
    for j in range(order):
        c = np.mean(vals * np.exp(-1j * j * theta))
        out.append(complex(math.factorial(j) * c / radius**j))
    return out
