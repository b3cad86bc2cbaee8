"""Truncated and smoothed prime sums, the smoothing bump and its Mellin transform,
and the batched tau-scan kernel."""

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .errors import DomainError, InvalidStep, NearPole
from .quadrature import gauss_kronrod
from .sieve import lambda_table
from .zeta import TWO_PI_LD, exp_sum_tensor

ANCHOR_PERIOD = 1024


# ---------------------------------------------------------------------------
# the bump


def phi(x):
    """Smooth cutoff: 1 on [0, 1], 0 on [2, inf), f(2-x)/(f(2-x)+f(x-1)) between."""
    x = np.asarray(x, dtype=float)
    out = np.where(x <= 1, 1.0, 0.0)
    mid = (x > 1) & (x < 2)
    if np.any(mid):
        xm = x[mid]
        # f(2-x)/(f(2-x)+f(x-1)) = 1/(1+exp(z)) with z = 1/(2-x) - 1/(x-1)
        z = 1.0 / (2.0 - xm) - 1.0 / (xm - 1.0)
        out[mid] = 0.5 * (1.0 - np.tanh(0.5 * z))
    return out if out.ndim else float(out)


def phi_prime(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    mid = (x > 1) & (x < 2)
    if np.any(mid):
        xm = x[mid]
        z = 1.0 / (2.0 - xm) - 1.0 / (xm - 1.0)
        dz = 1.0 / (2.0 - xm) ** 2 + 1.0 / (xm - 1.0) ** 2
        e = np.exp(-np.abs(z))
        # 1/(4 cosh^2(z/2)) written without overflow
        out[mid] = -dz * e / (1.0 + e) ** 2
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class SmoothingSpec:
    support: float = 2.0

    def __call__(self, x):
        return phi(x)


# ---------------------------------------------------------------------------
# prime sums


def _weights(m, sigmas, y, smoothed):
    """(table rows, weight matrix) for sum a_n n^-sigma with a_n = Lambda(n)/(log n)^{m+1} [* phi(n/X)]."""
    limit = 2 * y if smoothed else y
    tab = lambda_table(int(math.floor(limit)))
    a = tab.lam / tab.logn ** (m + 1)
    if smoothed:
        a = a * phi(tab.n / y)
    W = a[:, None] * np.exp(-np.multiply.outer(tab.logn, np.atleast_1d(sigmas)))
    return tab, W


def prime_sum_grid(m, sigmas, ts, y, smoothed=False):
    """sum_n a_n n^{-sigma_c - i t_r} as a (len(ts), len(sigmas)) array."""
    if smoothed and not y >= 1:
        return np.zeros((len(np.atleast_1d(ts)), len(np.atleast_1d(sigmas))), dtype=complex)
    if not smoothed and y < 2:
        return np.zeros((len(np.atleast_1d(ts)), len(np.atleast_1d(sigmas))), dtype=complex)
    tab, W = _weights(m, np.asarray(sigmas, dtype=float), y, smoothed)
    return exp_sum_tensor(np.atleast_1d(np.asarray(ts, dtype=float)), tab.logn, W, tab.logn.astype(np.longdouble))


def truncated_sum(m, s, y):
    """sum_{2 <= n <= y} Lambda(n) / (n^s (log n)^{m+1})."""
    s = complex(s)
    if y < 2:
        return 0j
    return complex(prime_sum_grid(m, [s.real], [s.imag], y)[0, 0])


def smoothed_sum(m, s, X):
    """sum_n Lambda(n) phi(n/X) / (n^s (log n)^{m+1}), a finite sum over n < 2X."""
    s = complex(s)
    if 2 * X <= 2:
        return 0j
    return complex(prime_sum_grid(m, [s.real], [s.imag], X, smoothed=True)[0, 0])


def truncation_tail_bound(sigma, y, m=0):
    """Upper bound for |sum_{n>y} Lambda(n) n^-sigma (log n)^{-m-1}| when sigma > 1.

    Each term is at most n^-sigma log n / (log 2)^{m+1}.  Since x^-sigma log x
    decreases for x >= 3, the terms with n > u = max(floor(y), 3) are bounded by
    the integral from u; the terms y < n <= u are added explicitly.
    """
    if not sigma > 1:
        return math.inf
    u = max(int(math.floor(y)), 3)
    a = sigma - 1
    total = u ** (-a) * (math.log(u) / a + 1 / a**2)
    total += sum(n ** -sigma * math.log(n) for n in range(max(int(math.floor(y)) + 1, 2), u + 1))
    return total / math.log(2) ** (m + 1)


# ---------------------------------------------------------------------------
# Mellin transform


def mellin_phi(s, tol=1e-12):
    """phi-hat(s) = -(1/s) int_1^2 phi'(x) x^s dx (equal to int_0^inf phi x^{s-1} dx for Re s > 0)."""
    s = complex(s)
    if abs(s) <= 1e-8:
        raise NearPole("phi-hat has a simple pole at s = 0")
    if not s.real > -1:
        raise DomainError("need Re(s) > -1")
    f = lambda x: phi_prime(x) * np.exp(s * np.log(x))
    val, _ = gauss_kronrod(f, 1.0, 2.0, abstol=tol)
    return -val / s


_GL_N = 400
_gx, _gw = roots_legendre(_GL_N)
_GX = 1.5 + 0.5 * _gx
_GW = 0.5 * _gw * phi_prime(_GX)
_GLOG = np.log(_GX)


def mellin_phi_vec(s):
    """mellin_phi at many points by a fixed 400-node Gauss-Legendre rule (|Im s| up to a few hundred)."""
    s = np.asarray(s, dtype=complex)
    vals = np.exp(np.multiply.outer(s, _GLOG)) @ _GW
    with np.errstate(divide="ignore", invalid="ignore"):
        return -vals / s


def mellin_inversion(x, c=2.0, cutoff=200.0, panel=0.5, nodes=16):
    """(1/2 pi i) int_{c - i cutoff}^{c + i cutoff} phi-hat(s) x^{-s} ds, using conjugate symmetry."""
    if not x > 0 or not c > 0:
        raise DomainError("need x > 0 and c > 0")
    gx, gw = roots_legendre(nodes)
    edges = np.arange(0.0, cutoff + panel / 2, panel)
    y = (0.5 * (edges[:-1] + edges[1:])[:, None] + 0.5 * panel * gx[None, :]).ravel()
    w = np.tile(0.5 * panel * gw, len(edges) - 1)
    s = c + 1j * y
    integrand = mellin_phi_vec(s) * np.exp(-s * math.log(x))
    return float(np.dot(w, integrand.real) / math.pi)


def mellin_inversion_check(x, c=2.0, cutoff=200.0):
    """|inverse Mellin transform at x - phi(x)|."""
    return abs(mellin_inversion(x, c, cutoff) - phi(x))


def residue_check(eps=1e-4):
    """eps * phi-hat(eps), which tends to phi(0) = 1."""
    return float((eps * mellin_phi(eps)).real)


def decay_fit(N=4, sigma=-0.5, t_range=(1.0, 200.0), samples=2000):
    """Fit C in |phi-hat(sigma + it)| <= C (1 + t)^-N over t in t_range.

    ``stable`` means the constant fitted on the lower half of the range already
    bounds the upper half, so extending the range does not move it.
    """
    t = np.linspace(t_range[0], t_range[1], samples)
    ratio = np.abs(mellin_phi_vec(sigma + 1j * t)) * (1 + t) ** N
    half = t <= 0.5 * (t_range[0] + t_range[1])
    C = float(ratio.max())
    C_lower = float(ratio[half].max())
    return {
        "N": N,
        "C": C,
        "C_lower_half": C_lower,
        "argmax_t": float(t[np.argmax(ratio)]),
        "upper_half_max": float(ratio[~half].max()),
        "stable": bool(C_lower >= C * (1 - 1e-12)),
    }


# ---------------------------------------------------------------------------
# scans


@dataclass(frozen=True)
class ScanRequest:
    m: int
    sigma: float
    tau0: float
    step: float
    count: int
    y: float
    smoothed: bool = False

    def __post_init__(self):
        if not self.step > 0:
            raise InvalidStep("step must be positive")
        if self.count < 1:
            raise DomainError("count must be >= 1")
        if self.y < 2:
            raise DomainError("need y >= 2")

    @property
    def taus(self):
        return self.tau0 + self.step * np.arange(self.count)


def batched_scan(req):
    """Prime sum at tau_k = tau0 + k step, k < count.

    Within each block of ANCHOR_PERIOD consecutive shifts, n^{-i tau} is advanced by
    repeated multiplication with n^{-i step}; each block starts from an exactly
    computed n^{-i tau}.  The per-step factors are the same for every block, so
    the whole scan is one matrix product.
    """
    tab, W = _weights(req.m, [req.sigma], req.y, req.smoothed)
    w = W[:, 0]
    logn_ld = tab.logn.astype(np.longdouble)
    L = min(ANCHOR_PERIOD, req.count)
    ang = (req.step * tab.logn) % (2 * math.pi)
    mult = np.cos(ang) - 1j * np.sin(ang)
    E = np.empty((L, len(w)), dtype=complex)
    E[0] = 1.0
    for j in range(1, L):
        E[j] = E[j - 1] * mult
    nblocks = -(-req.count // L)
    starts = np.longdouble(req.tau0) + np.longdouble(req.step) * L * np.arange(nblocks, dtype=np.longdouble)
    a_ang = np.fmod(np.multiply.outer(logn_ld, starts), TWO_PI_LD).astype(float)
    A = w[:, None] * (np.cos(a_ang) - 1j * np.sin(a_ang))
    V = E @ A  # (L, nblocks)
    return V.T.reshape(-1)[: req.count]


def write_scan_csv(fh, taus, values):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["tau", "re", "im"])
    for tau, v in zip(taus, values):
        w.writerow([f"{tau:.15g}", f"{v.real:.15g}", f"{v.imag:.15g}"])


# ---------------------------------------------------------------------------
# error-bound shapes


def gs_error_bound(m, sigma, sigma0, y, t):
    """log|t| / (sigma1 - sigma0)^2 * y^(sigma1 - sigma), sigma1 = min(sigma0 + 1/log y, (sigma + sigma0)/2).

    The implied constant is taken as 1: this is the shape of the bound, used to
    fit an empirical constant, not a certificate.
    """
    if m < 0:
        raise DomainError("m must be non-negative")
    if not 0.5 <= sigma0 < sigma <= 1:
        raise DomainError("need 1/2 <= sigma0 < sigma <= 1")
    if not y >= 2:
        raise DomainError("need y >= 2")
    if not abs(t) >= y + 3:
        raise DomainError("need |t| >= y + 3")
    s1 = min(sigma0 + 1 / math.log(y), 0.5 * (sigma + sigma0))
    return math.log(abs(t)) / (s1 - sigma0) ** 2 * y ** (s1 - sigma)


def gs_mean_shape(sigma0, y, T):
    """y^{(1/2 - sigma0)/2} (log T)^3, the averaged-error shape."""
    return y ** ((0.5 - sigma0) / 2) * math.log(T) ** 3
