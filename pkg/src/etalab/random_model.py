"""The random Euler product: phases on the primes, the random analogue of eta_m,
its moments, and a phase-fitting probe of its denseness."""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares
from scipy.special import expn

from .errors import DomainError
from .polylog import polylog
from .sieve import lambda_table, primes_upto
from .zeros import k_grid

TWO_PI = 2 * math.pi
# Prime ranges summed separately so the polylog series length follows |p^-s|.
_PRIME_BANDS = (0, 30, 1000, math.inf)


@dataclass(frozen=True, eq=False)
class OmegaSample:
    """A point of the product of circles, truncated to primes <= P, stored as angles."""

    P: int
    primes: np.ndarray
    theta: np.ndarray
    seed: int | None = None
    _index: dict = field(init=False, repr=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_index", {int(p): k for k, p in enumerate(self.primes)})

    def omega_p(self):
        return np.exp(1j * self.theta)

    def __call__(self, n):
        """omega(n) = prod omega(p)^r over the factorization of n (n must be P-smooth)."""
        n = int(n)
        if n < 1:
            raise DomainError("omega(n) needs n >= 1")
        # multiply unit numbers rather than add angles, so omega(p^k) == omega(p)**k exactly
        out = 1 + 0j
        for k, p in enumerate(self.primes.tolist()):
            if p * p > n:
                break
            while n % p == 0:
                out *= self._unit(k)
                n //= p
        if n > 1:
            if n not in self._index:
                raise DomainError(f"prime factor {n} exceeds the cutoff {self.P}")
            out *= self._unit(self._index[n])
        return out

    def _unit(self, k):
        th = float(self.theta[k])
        return complex(math.cos(th), math.sin(th))

    def truncate(self, P):
        keep = self.primes <= P
        return OmegaSample(int(P), self.primes[keep], self.theta[keep], self.seed)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "theta"])
        for p, th in zip(self.primes.tolist(), self.theta.tolist()):
            w.writerow([p, f"{th:.17g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text, P=None, seed=None):
        rows = [r for r in csv.reader(io.StringIO(text)) if r and r[0] != "p"]
        primes = np.array([int(r[0]) for r in rows], dtype=np.int64)
        theta = np.array([float(r[1]) for r in rows])
        return cls(int(P if P is not None else (primes[-1] if len(primes) else 1)), primes, theta, seed)


def sample_omega(seed, P):
    """Independent uniform phases for the primes <= P.

    The phases are drawn from one generator in increasing order of p, so the
    phase of a given prime does not depend on P: a sample for P' < P is a
    prefix of the sample for P.
    """
    if P < 2:
        raise DomainError("need P >= 2")
    primes = primes_upto(int(P))
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, TWO_PI, size=len(primes))
    return OmegaSample(int(P), primes, theta, seed)


def omega_constant(P, theta=0.0):
    """The deterministic point omega(p) = e^{i theta} for all p (theta = 0 recovers the Dirichlet series)."""
    primes = primes_upto(int(P))
    return OmegaSample(int(P), primes, np.full(len(primes), float(theta)))


def _sample_seed(master, index):
    return np.random.SeedSequence([int(master), int(index)])


def sample_omegas(seed, P, count):
    """Phase matrix (count, pi(P)); row i comes from the substream keyed by (seed, i)."""
    primes = primes_upto(int(P))
    out = np.empty((count, len(primes)))
    for i in range(count):
        out[i] = np.random.default_rng(_sample_seed(seed, i)).uniform(0.0, TWO_PI, size=len(primes))
    return primes, out


def _li_sum(m, s, logp, theta):
    """sum_p Li_{m+1}(p^-s e^{i theta_p}) / (log p)^m for points s (S,) and phases (.., np)."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    theta = np.asarray(theta, dtype=float)
    total = 0j
    p = np.exp(logp)
    for lo, hi in zip(_PRIME_BANDS[:-1], _PRIME_BANDS[1:]):
        sel = (p >= lo) & (p < hi)
        if not np.any(sel):
            continue
        w = np.exp(-np.multiply.outer(s, logp[sel]))  # (S, k)
        z = w * np.exp(1j * theta[..., None, sel])  # (.., S, k)
        if m == 0:
            vals = -np.log1p(-z)
        else:
            vals = polylog(m + 1, z) / logp[sel] ** m
        total = total + vals.sum(axis=-1)
    return total


def model_tail_bound(m, sigma, P):
    """Integral estimate of sum_{p > P} p^-sigma / ((1 - 2^-sigma) (log p)^m), inf for sigma <= 1.

    With prime density 1/log x this is (log P)^-m E_{m+1}((sigma - 1) log P) / (1 - 2^-sigma).
    """
    if not sigma > 1:
        return math.inf
    L = math.log(P)
    return L ** (-m) * float(expn(m + 1, (sigma - 1) * L)) / (1 - 2.0 ** (-sigma))


def eta_m_omega(m, s, omega):
    """(sum_{p <= P} Li_{m+1}(p^-s omega(p)) / (log p)^m, tail bound for p > P)."""
    s = complex(s)
    if m < 0:
        raise DomainError("m must be non-negative")
    if not s.real > 0.5:
        raise DomainError("need Re(s) > 1/2")
    if omega.P < 100:
        raise DomainError("need a prime cutoff P >= 100")
    logp = np.log(omega.primes.astype(float))
    value = complex(_li_sum(m, [s], logp, omega.theta)[0])
    return value, model_tail_bound(m, s.real, omega.P)


def eta_m_omega_many(m, s, P, theta):
    """Vectorized eta_m_omega over a phase matrix (count, pi(P)) at points s; shape (count, len(s))."""
    logp = np.log(primes_upto(int(P)).astype(float))
    return _li_sum(m, s, logp, theta)


# ---------------------------------------------------------------------------
# moments


@dataclass(frozen=True)
class MomentReport:
    mean: complex
    second_abs: float
    reference_second: float
    num_samples: int
    P: int
    mean_se: float
    second_se: float

    def to_json(self):
        return {
            "mean_re": self.mean.real,
            "mean_im": self.mean.imag,
            "second_abs": self.second_abs,
            "reference_second": self.reference_second,
            "num_samples": self.num_samples,
            "P": self.P,
            "mean_se": self.mean_se,
            "second_se": self.second_se,
        }


def prime_power_terms(m, sigma, P):
    """(prime index, exponent k, coefficient) for S = sum_{n<=P} Lambda(n) omega(n) / (n^sigma (log n)^{m+1})."""
    tab = lambda_table(int(P))
    primes = primes_upto(int(P))
    pidx = np.searchsorted(primes, tab.base)
    coef = tab.lam / (tab.n.astype(float) ** sigma * tab.logn ** (m + 1))
    return pidx, tab.power, coef


def orthogonality_second_moment(m, sigma, P):
    """sum_{2<=n<=P} Lambda(n)^2 / (n^{2 sigma} (log n)^{2m+2}), E|S|^2 by orthogonality of omega(n)."""
    tab = lambda_table(int(P))
    return math.fsum((tab.lam**2 / (tab.n.astype(float) ** (2 * sigma) * tab.logn ** (2 * m + 2))).tolist())


def truncated_model_sums(m, sigma, P, theta):
    """S(omega) for each row of a phase matrix (count, pi(P))."""
    pidx, k, coef = prime_power_terms(m, sigma, P)
    ang = theta[:, pidx] * k
    return (np.cos(ang) + 1j * np.sin(ang)) @ coef


def model_moments(m, sigma, P, num_samples, seed, chunk=1000):
    """Monte Carlo mean and E|S|^2 of the truncated random series against the orthogonality oracle."""
    if not sigma > 0.5:
        raise DomainError("need sigma > 1/2")
    if num_samples < 1:
        raise DomainError("need at least one sample")
    primes = primes_upto(int(P))
    vals = []
    for a in range(0, num_samples, chunk):
        count = min(chunk, num_samples - a)
        theta = np.empty((count, len(primes)))
        for i in range(count):
            theta[i] = np.random.default_rng(_sample_seed(seed, a + i)).uniform(0.0, TWO_PI, size=len(primes))
        vals.append(truncated_model_sums(m, sigma, P, theta))
    S = np.concatenate(vals)
    sq = np.abs(S) ** 2
    n = len(S)
    se = lambda x: float(np.std(x, ddof=1) / math.sqrt(n)) if n > 1 else math.nan
    return MomentReport(
        mean=complex(S.mean()),
        second_abs=float(sq.mean()),
        reference_second=orthogonality_second_moment(m, sigma, P),
        num_samples=n,
        P=int(P),
        mean_se=max(se(S.real), se(S.imag)) if n > 1 else math.nan,
        second_se=se(sq),
    )


def partial_sum_path(omega, sigma0, m=0):
    """A_xi = sum_{p <= xi} omega(p) p^-sigma0 (log p)^-m for every prime xi <= P."""
    p = omega.primes.astype(float)
    terms = np.exp(1j * omega.theta) * p ** (-sigma0) * np.log(p) ** (-m)
    return omega.primes, np.cumsum(terms)


# ---------------------------------------------------------------------------
# phase fitting


@dataclass
class FitResult:
    phases: OmegaSample
    achieved_sup: float
    history: list
    baseline_sup: float


def _target_values(target, points, center):
    if callable(target):
        return np.asarray(target(points), dtype=complex)
    coef = np.asarray(target, dtype=complex)
    if coef.ndim != 1 or len(coef) > 9:
        raise DomainError("target polynomial must have degree <= 8")
    return np.polynomial.polynomial.polyval(points - center, coef)


def target_polynomial_values(target, K, points):
    """Values of a target (coefficients in powers of s - centre(K), or a callable of s)."""
    center = complex(0.5 * (K.sigma_min + K.sigma_max), 0.5 * (K.t_min + K.t_max))
    return _target_values(target, points, center)


def _polish(theta, parts, current, sup, tgt, contrib, tables):
    """Joint Levenberg-Marquardt step on the grid residual; kept only if the sup drops."""
    n = len(theta)

    def resid(th):
        r = sum(contrib(j, th[j])[:, 0] for j in range(n)) - tgt
        return np.concatenate((r.real, r.imag))

    def jac(th):
        cols = []
        for j in range(n):
            a, k = tables[j]
            d = a @ (1j * k * np.exp(1j * k * th[j]))
            cols.append(np.concatenate((d.real, d.imag)))
        return np.stack(cols, axis=1)

    try:
        res = least_squares(resid, theta, jac=jac, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15,
                            max_nfev=200 * n)
    except (ValueError, np.linalg.LinAlgError):
        return theta, parts, current, sup
    th = res.x % TWO_PI
    new_parts = np.stack([contrib(j, th[j])[:, 0] for j in range(n)], axis=1)
    new_current = new_parts.sum(axis=1)
    new_sup = float(np.max(np.abs(new_current - tgt)))
    if new_sup < sup:
        return th, new_parts, new_current, new_sup
    return theta, parts, current, sup


def fit_phases(m, target, K, P, iterations, seed, init=None, scan=32, golden_steps=40, polish=True,
               restarts=1):
    """Cyclic coordinate descent on the phases to approximate a target on K.

    Minimizes sup over the K-grid of |sum_{p<=P} Li_{m+1}(p^-s e^{i theta_p})/(log p)^m - target(s)|.
    Each coordinate is scanned at ``scan`` angles and then refined by golden
    section; a move is kept only if it lowers the sup, so the recorded sup is
    non-increasing.  With ``polish`` each sweep ends with a joint
    Levenberg-Marquardt step on the grid residual, kept under the same rule.

    ``restarts`` independent descents start from phases drawn from substreams
    of ``seed`` (the first one from ``init`` when given).  ``history`` holds the
    best sup over the starts before the first sweep and after each sweep.
    """
    boundary, inner = k_grid(K)
    pts = np.concatenate((boundary, inner))
    tgt = target_polynomial_values(target, K, pts)
    primes = primes_upto(int(P))
    logp = np.log(primes.astype(float))

    # Li_{m+1}(w e^{i theta}) = sum_k a_k e^{ik theta}, a_k = w^k / k^{m+1}; scaled by (log p)^-m.
    tables = []
    for j in range(len(primes)):
        w = np.exp(-pts * logp[j])
        r = float(np.max(np.abs(w)))
        K_j = max(1, int(math.ceil(math.log(1e-17) / math.log(r))))
        k = np.arange(1, K_j + 1)
        tables.append((w[:, None] ** k / k.astype(float) ** (m + 1) / logp[j] ** m, k))

    def contrib(j, th):
        a, k = tables[j]
        return a @ np.exp(1j * np.multiply.outer(k, np.atleast_1d(th)))  # (G, len(th))

    baseline = float(np.max(np.abs(sum(contrib(j, 0.0)[:, 0] for j in range(len(primes))) - tgt)))
    best, history = None, None
    for r in range(max(1, int(restarts))):
        if r == 0 and init is not None:
            theta = np.array(init, dtype=float)
        else:
            # start 0 keeps the plain seed so that restarts=1 is the single-start descent
            rng = np.random.default_rng(seed if r == 0 else np.random.SeedSequence([int(seed), r]))
            theta = rng.uniform(0.0, TWO_PI, size=len(primes))
        theta, hist = _descend(theta, tgt, contrib, tables, iterations, scan, golden_steps, polish)
        history = hist if history is None else [min(a, b) for a, b in zip(history, hist)]
        if best is None or hist[-1] < best[1]:
            best = (theta, hist[-1])
    return FitResult(OmegaSample(int(P), primes, best[0], seed), best[1], history, baseline)


def _descend(theta, tgt, contrib, tables, iterations, scan, golden_steps, polish):
    n = len(theta)
    parts = np.stack([contrib(j, theta[j])[:, 0] for j in range(n)], axis=1)
    current = parts.sum(axis=1)
    sup = float(np.max(np.abs(current - tgt)))
    history = [sup]
    invphi = (math.sqrt(5) - 1) / 2
    grid = TWO_PI * np.arange(scan) / scan

    for _ in range(int(iterations)):
        for j in range(n):
            rest = current - parts[:, j] - tgt
            h = lambda th: np.max(np.abs(rest[:, None] + contrib(j, th)), axis=0)
            vals = h(grid)
            b = int(np.argmin(vals))
            lo, hi = grid[b] - TWO_PI / scan, grid[b] + TWO_PI / scan
            x1, x2 = hi - invphi * (hi - lo), lo + invphi * (hi - lo)
            f1, f2 = h(x1)[0], h(x2)[0]
            for _ in range(golden_steps):
                if f1 < f2:
                    hi, x2, f2 = x2, x1, f1
                    x1 = hi - invphi * (hi - lo)
                    f1 = h(x1)[0]
                else:
                    lo, x1, f1 = x1, x2, f2
                    x2 = lo + invphi * (hi - lo)
                    f2 = h(x2)[0]
            cand = [(vals[b], grid[b]), (f1, x1), (f2, x2)]
            best_val, best_th = min(cand, key=lambda c: c[0])
            if best_val < sup:
                new_part = contrib(j, best_th % TWO_PI)[:, 0]
                new_current = current - parts[:, j] + new_part
                new_sup = float(np.max(np.abs(new_current - tgt)))
                if new_sup < sup:
                    theta[j] = best_th % TWO_PI
                    parts[:, j] = new_part
                    current, sup = new_current, new_sup
        if polish and n:
            theta, parts, current, sup = _polish(theta, parts, current, sup, tgt, contrib, tables)
        history.append(sup)
    return theta, history
