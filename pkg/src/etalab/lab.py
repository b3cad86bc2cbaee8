"""Experiments: the exhaustion metric, shift searches, coverage of derivative
vectors, time-average versus random-model distributions, and the
equidistribution of prime phases."""

import math
from dataclasses import dataclass, field

import numpy as np

from .batch import eta_batch
from .errors import CutViolation, DomainError, EmptySample, GridMismatch, ZeroFrequency
from .intervals import ShiftIntervalSet
from .prime_sums import gs_mean_shape, prime_sum_grid
from .random_model import orthogonality_second_moment, sample_omegas, truncated_model_sums
from .sieve import lambda_table, primes_upto
from .zeros import CompactRectSpec, derive_constants, k_grid, valid_shifts

# ---------------------------------------------------------------------------
# metric


@dataclass(frozen=True)
class MetricSpec:
    """Nested rectangles K_1 within K_2 within ... within K_J filling the open rectangle R.

    K_j is R shrunk by (1/2)^j of its half-widths on every side, sampled on a
    ``resolution`` x ``resolution`` grid including its edges.
    """

    R: tuple
    J_max: int = 12
    resolution: int = 12

    def rect(self, j):
        sl, sr, tl, th = self.R
        hs, ht = 0.5 * (sr - sl), 0.5 * (th - tl)
        f = 0.5**j
        return (sl + f * hs, sr - f * hs, tl + f * ht, th - f * ht)

    def grid(self, j):
        a, b, c, d = self.rect(j)
        u = np.linspace(0.0, 1.0, self.resolution)
        return (a + (b - a) * u)[None, :] + 1j * (c + (d - c) * u)[:, None]

    def grids(self):
        return [self.grid(j) for j in range(1, self.J_max + 1)]

    def sample(self, f):
        """f evaluated on every grid (f maps a complex array to an array of the same shape)."""
        return [np.asarray(f(g)) for g in self.grids()]

    @classmethod
    def for_rect(cls, K, **kw):
        return cls(derive_constants(K).R, **kw)


def metric_d(f_samples, g_samples, spec):
    """sum_{j <= J} min(sup_{K_j grid} |f - g|, 1) / 2^j."""
    if len(f_samples) != spec.J_max or len(g_samples) != spec.J_max:
        raise GridMismatch("sample lists must have one grid per rectangle")
    shape = (spec.resolution, spec.resolution)
    total = 0.0
    for j, (f, g) in enumerate(zip(f_samples, g_samples), start=1):
        f, g = np.asarray(f), np.asarray(g)
        if f.shape != shape or g.shape != shape:
            raise GridMismatch(f"grid {j} has shape {f.shape} / {g.shape}, expected {shape}")
        total += min(float(np.max(np.abs(f - g))), 1.0) / 2.0**j
    return total


# ---------------------------------------------------------------------------
# shifts


def is_valid_shift(catalog, K, tau):
    """tau avoids every excluded window of radius |K| + 1 (so K + i tau sits in the cut plane)."""
    c = derive_constants(K)
    Delta = c.abs_K + 1
    if abs(tau + c.tau0) < Delta:
        return False
    if catalog is None:
        return True
    catalog.require_height(abs(tau + c.tau0) + Delta, c.sigma0)
    b, g = catalog._all()
    g = g[b > c.sigma0]
    return not np.any(np.abs(g - c.tau0 - tau) < Delta)


def _grid_points(K):
    boundary, inner = k_grid(K)
    return np.concatenate((boundary, inner))


def target_values(target, K, pts):
    """Evaluate a target at the K-grid points: a callable of s, polynomial
    coefficients in powers of s - centre(K) (degree <= 8), or precomputed values."""
    if callable(target):
        return np.asarray(target(pts), dtype=complex)
    arr = np.asarray(target, dtype=complex)
    if arr.shape == pts.shape and len(pts) > 9:
        return arr
    if arr.ndim != 1 or len(arr) > 9:
        raise DomainError("target polynomial must have degree <= 8")
    center = complex(0.5 * (K.sigma_min + K.sigma_max), 0.5 * (K.t_min + K.t_max))
    return np.polynomial.polynomial.polyval(pts - center, arr)


def shifted_values(m, taus, K, method="continuation", y=None, catalog=None, threads=None):
    """eta_m (or its truncated / smoothed sum with parameter y) on K + i tau; shape (len(taus), G)."""
    pts = _grid_points(K)
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    S = pts[None, :] + 1j * taus[:, None]
    if method == "continuation":
        return eta_batch(m, S, catalog=catalog, threads=threads)
    if method in ("truncated", "smoothed"):
        if y is None:
            raise DomainError("a truncation parameter y is required")
        return prime_sum_on_points(m, S, y, smoothed=(method == "smoothed"))
    raise DomainError(f"unknown method {method!r}")


def prime_sum_on_points(m, S, y, smoothed=False, row_chunk=4096):
    """Prime sums at arbitrary points, computed on the (distinct t) x (distinct sigma) tensor."""
    S = np.asarray(S, dtype=complex)
    flat = S.ravel()
    us, si = np.unique(flat.real, return_inverse=True)
    ut, ti = np.unique(flat.imag, return_inverse=True)
    out = np.empty(len(flat), dtype=complex)
    order = np.argsort(ti, kind="stable")
    bounds = np.searchsorted(ti[order], np.arange(0, len(ut) + row_chunk, row_chunk))
    for a in range(len(bounds) - 1):
        sel = order[bounds[a]:bounds[a + 1]]
        if not len(sel):
            continue
        r0 = a * row_chunk
        grid = prime_sum_grid(m, us, ut[r0:r0 + row_chunk], y, smoothed)
        out[sel] = grid[ti[sel] - r0, si[sel]]
    return out.reshape(S.shape)


def sup_on_K(m, tau, K, target, method="continuation", y=None, catalog=None):
    """max over the K-grid (boundary plus interior) of |eta_m(s + i tau) - target(s)|."""
    if not is_valid_shift(catalog, K, tau):
        raise CutViolation(f"tau = {tau} is not an admissible shift for this rectangle")
    pts = _grid_points(K)
    vals = shifted_values(m, [tau], K, method, y, catalog)[0]
    return float(np.max(np.abs(vals - target_values(target, K, pts))))


def stratified_shifts(valid, num, seed):
    """One uniform sample from each of num equal-measure strata of the set ``valid``."""
    if valid.is_empty():
        raise EmptySample("no admissible shifts")
    meas = float(valid.measure)
    rng = np.random.default_rng(seed)
    u = (np.arange(num) + rng.random(num)) * (meas / num)
    return valid.from_measure(u)


def stratum(valid, num, k):
    meas = float(valid.measure)
    return valid.measure_slice(k * meas / num, (k + 1) * meas / num)


@dataclass
class SearchResult:
    T: float
    epsilon: float
    density_estimate: float
    sup_errors: list
    good_shifts: ShiftIntervalSet
    num_strata: int
    valid_measure: float
    passing_strata: list = field(default_factory=list)

    def to_json(self):
        return {
            "T": self.T,
            "epsilon": self.epsilon,
            "density_estimate": self.density_estimate,
            "num_strata": self.num_strata,
            "valid_measure": self.valid_measure,
            "passing_strata": self.passing_strata,
            "good_shifts": self.good_shifts.to_list(),
            "sup_errors": [[tau, err] for tau, err in self.sup_errors],
        }


def shift_search(m, K, target, epsilon, T, num_tau, seed, catalog=None, method="continuation",
                 y=None, threads=None):
    """Sample admissible shifts in [T, 2T] (one per stratum) and record the sup error against target.

    density_estimate is the fraction of sampled shifts whose sup error is below epsilon.
    """
    valid = valid_shifts(catalog, K, T) if catalog is not None else _no_catalog_shifts(K, T)
    taus = stratified_shifts(valid, num_tau, seed)
    pts = _grid_points(K)
    tgt = target_values(target, K, pts)
    vals = shifted_values(m, taus, K, method, y, catalog, threads)
    errs = np.max(np.abs(vals - tgt[None, :]), axis=1)
    passing = np.flatnonzero(errs < epsilon)
    good = ShiftIntervalSet()
    for k in passing:
        good = good | stratum(valid, num_tau, int(k))
    return SearchResult(
        T=float(T), epsilon=float(epsilon), density_estimate=len(passing) / num_tau,
        sup_errors=[(float(a), float(b)) for a, b in zip(taus, errs)], good_shifts=good,
        num_strata=int(num_tau), valid_measure=float(valid.measure),
        passing_strata=[int(k) for k in passing])


def _no_catalog_shifts(K, T):
    c = derive_constants(K)
    Delta = c.abs_K + 1
    return ShiftIntervalSet.interval(T, 2 * T) - ShiftIntervalSet.interval(-c.tau0 - Delta, -c.tau0 + Delta)


def smoothed_sup_error(K, X, T, num_tau, seed, catalog=None, m=0, threads=None):
    """Average over sampled admissible shifts of sup_{K-grid} |eta_m - smoothed sum with parameter X|."""
    valid = valid_shifts(catalog, K, T) if catalog is not None else _no_catalog_shifts(K, T)
    taus = stratified_shifts(valid, num_tau, seed)
    exact = shifted_values(m, taus, K, "continuation", catalog=catalog, threads=threads)
    out = {}
    for x in np.atleast_1d(X):
        approx = shifted_values(m, taus, K, "smoothed", y=float(x))
        out[float(x)] = float(np.mean(np.max(np.abs(exact - approx), axis=1)))
    return out


def gs_empirical(sigma, sigma0, T, ys, num_tau, seed, catalog=None, m=0, threads=None):
    """Mean |eta_m(sigma + i tau) - truncated sum| over admissible shifts in [T, 2T], per y,
    with the constant fitted against y^{(1/2 - sigma0)/2} (log T)^3."""
    K = CompactRectSpec.point(complex(sigma, 0.0))
    valid = valid_shifts(catalog, K, T) if catalog is not None else _no_catalog_shifts(K, T)
    taus = stratified_shifts(valid, num_tau, seed)
    exact = eta_batch(m, sigma + 1j * taus, catalog=catalog, threads=threads)
    rows = []
    for y in ys:
        approx = prime_sum_grid(m, [sigma], taus, y)[:, 0]
        err = float(np.mean(np.abs(exact - approx)))
        rows.append({"y": float(y), "mean_error": err, "fitted_constant": err / gs_mean_shape(sigma0, y, T)})
    return rows


# ---------------------------------------------------------------------------
# denseness


@dataclass
class CoverageReport:
    box: list
    cells: int
    n: int
    hits: np.ndarray
    samples: int
    t_max: float

    @property
    def fraction_covered(self):
        return float(self.hits.mean())

    def to_json(self):
        return {
            "box": self.box,
            "cells": self.cells,
            "n": self.n,
            "samples": self.samples,
            "t_max": self.t_max,
            "fraction_covered": self.fraction_covered,
            "hit_cells": np.flatnonzero(self.hits.ravel()).tolist(),
            "hit_shape": list(self.hits.shape),
        }


def derivative_walk(m, n, sigma, t_max, step, catalog=None, threads=None, t_start=0.0):
    """(t, vectors) for t = t_start + k step <= t_max at admissible ordinates; vectors has shape (len(t), n)."""
    if not 0.5 < sigma < 1:
        raise DomainError("need 1/2 < sigma < 1")
    if not step > 0:
        raise DomainError("step must be positive")
    if n < 1:
        raise DomainError("n must be >= 1")
    k = np.arange(int(math.floor((t_max - t_start) / step + 1e-9)) + 1)
    t = t_start + k * step
    t = t[t <= t_max]
    ok = t != 0
    if catalog is not None:
        ok &= ~catalog.cut_mask(t, np.full(len(t), sigma))
    t = t[ok]
    vals = eta_batch(m, sigma + 1j * t, catalog=catalog, threads=threads, derivs=n)
    return t, vals.reshape(len(t), n)


def bin_vectors(vectors, box, cells):
    """Boolean hit array with 2n axes of length ``cells`` for vectors inside the box.

    box = (re_lo, re_hi, im_lo, im_hi) is used for every coordinate.
    """
    vectors = np.asarray(vectors, dtype=complex)
    n = vectors.shape[1]
    re_lo, re_hi, im_lo, im_hi = box
    coords = []
    inside = np.ones(len(vectors), dtype=bool)
    for j in range(n):
        for comp, lo, hi in ((vectors[:, j].real, re_lo, re_hi), (vectors[:, j].imag, im_lo, im_hi)):
            idx = np.floor((comp - lo) / (hi - lo) * cells).astype(np.int64)
            inside &= (comp >= lo) & (comp <= hi)
            coords.append(np.clip(idx, 0, cells - 1))
    hits = np.zeros((cells,) * (2 * n), dtype=bool)
    if np.any(inside):
        hits[tuple(c[inside] for c in coords)] = True
    return hits


def denseness_probe(m, n, sigma, t_max, step, box, cells, catalog=None, threads=None):
    """Coverage of the box in C^n by (eta_m, eta_m', ..., eta_m^(n-1)) along the line Re s = sigma."""
    if n > 3:
        raise DomainError("n <= 3")
    box = [float(b) for b in box]
    t, vecs = derivative_walk(m, n, sigma, t_max, step, catalog, threads)
    return CoverageReport(box, int(cells), int(n), bin_vectors(vecs, box, cells), len(t), float(t_max))


def coverage_curve(m, n, sigma, t_maxes, step, box, cells, catalog=None, threads=None):
    """Fraction covered at each of the increasing t_max values, from one walk."""
    t_maxes = sorted(t_maxes)
    t, vecs = derivative_walk(m, n, sigma, t_maxes[-1], step, catalog, threads)
    return [float(bin_vectors(vecs[t <= tm], box, cells).mean()) for tm in t_maxes]


# ---------------------------------------------------------------------------
# distributions


def _hist(values, c, bins):
    v = np.asarray(values)
    x = np.clip(v.real, -c, c)
    y = np.clip(v.imag, -c, c)
    h, _, _ = np.histogram2d(x, y, bins=bins, range=[[-c, c], [-c, c]])
    return h.ravel() / max(h.sum(), 1)


def js_divergence(p, q):
    """Jensen-Shannon divergence (natural log) between two probability vectors."""
    mix = 0.5 * (p + q)

    def kl(a, b):
        nz = a > 0
        return float(np.sum(a[nz] * np.log(a[nz] / b[nz])))

    return 0.5 * kl(p, mix) + 0.5 * kl(q, mix)


def exact_time_mean(m, sigma, y, valid):
    """(1/meas) int over the shift set of sum_{n<=y} Lambda(n) n^{-sigma - i tau} / (log n)^{m+1} d tau."""
    tab = lambda_table(int(y))
    a = tab.lam / (tab.n.astype(float) ** sigma * tab.logn ** (m + 1))
    total = np.zeros(len(a), dtype=complex)
    for lo, hi in valid:
        # int_lo^hi n^{-i tau} d tau, written to stay accurate for large tau
        w = tab.logn
        half = 0.5 * (hi - lo)
        total += 2 * np.sin(w * half) / w * np.exp(-1j * w * (0.5 * (lo + hi)))
    return complex(np.dot(a, total) / float(valid.measure))


def distribution_compare(m, sigma, T, num_tau, P, num_omega, seed, catalog=None, continuation=False,
                         bins=64, bootstrap=50, threads=None):
    """Compare the shift distribution of eta_m(sigma + i tau), tau admissible in [T, 2T],
    with the random-model distribution, both truncated at the same cutoff P.

    With continuation=True the time side uses eta_m itself instead of the truncated sum.
    """
    if num_tau <= 0 or num_omega <= 0:
        raise EmptySample("both sample counts must be positive")
    if not 0.5 < sigma < 1:
        raise DomainError("need 1/2 < sigma < 1")
    K = CompactRectSpec.point(complex(sigma, 0.0))
    valid = valid_shifts(catalog, K, T) if catalog is not None else _no_catalog_shifts(K, T)
    taus = stratified_shifts(valid, num_tau, seed)
    if continuation:
        time_vals = eta_batch(m, sigma + 1j * taus, catalog=catalog, threads=threads)
    else:
        time_vals = prime_sum_grid(m, [sigma], taus, P)[:, 0]
    _, theta = sample_omegas(seed, P, num_omega)
    model_vals = truncated_model_sums(m, sigma, P, theta)
    oracle = orthogonality_second_moment(m, sigma, P)

    def moments(v):
        sq = np.abs(v) ** 2
        k = len(v)
        se = (lambda x: float(np.std(x, ddof=1) / math.sqrt(k))) if k > 1 else (lambda x: math.nan)
        return complex(v.mean()), max(se(v.real), se(v.imag)), float(sq.mean()), se(sq)

    tm, tm_se, ts, ts_se = moments(time_vals)
    mm, mm_se, ms, ms_se = moments(model_vals)
    c = 4 * math.sqrt(oracle)
    js = js_divergence(_hist(time_vals, c, bins), _hist(model_vals, c, bins))
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 2**31 - 1]))
    boots = []
    for _ in range(bootstrap):
        a = time_vals[rng.integers(0, len(time_vals), len(time_vals))]
        b = model_vals[rng.integers(0, len(model_vals), len(model_vals))]
        boots.append(js_divergence(_hist(a, c, bins), _hist(b, c, bins)))
    combined = math.sqrt(ts_se**2 + ms_se**2)
    return {
        "m": m, "sigma": sigma, "T": T, "P": P, "num_tau": num_tau, "num_omega": num_omega,
        "time_mean_sampled": [tm.real, tm.imag], "time_mean_se": tm_se,
        "time_mean_exact": _pair(exact_time_mean(m, sigma, P, valid)) if not continuation else None,
        "time_second": ts, "time_second_se": ts_se,
        "model_mean": [mm.real, mm.imag], "model_mean_se": mm_se,
        "model_second": ms, "model_second_se": ms_se,
        "oracle_second": oracle,
        "second_z_combined": (ts - oracle) / combined if combined > 0 else math.nan,
        "histogram_half_width": c, "histogram_bins": bins,
        "js_divergence": js, "js_se": float(np.std(boots, ddof=1)) if bootstrap > 1 else math.nan,
    }


def _pair(z):
    return [z.real, z.imag]


# ---------------------------------------------------------------------------
# equidistribution


def equidistribution_check(primes, exponents, T, shifts=None):
    """Average of prod p^{i n_p tau} over a shift set (default [T, 2T]), in closed form.

    Returns (empirical, bound) where bound = 2 k / (|lambda| meas) for a set of k
    intervals and frequency lambda = sum n_p log p; on [T, 2T] that is
    2 / (T |lambda|).  For n = 0 the integrand is 1 and so is the average.
    """
    primes = [int(p) for p in primes]
    exponents = [int(n) for n in exponents]
    if not primes or len(primes) != len(exponents):
        raise DomainError("need a nonempty prime list with one exponent per prime")
    if not T > 0:
        raise DomainError("need T > 0")
    shifts = ShiftIntervalSet.interval(T, 2 * T) if shifts is None else shifts
    if shifts.is_empty():
        raise EmptySample("empty shift set")
    if all(n == 0 for n in exponents):
        return complex(1.0, 0.0), 1.0
    agg = {}
    for p, n in zip(primes, exponents):
        agg[p] = agg.get(p, 0) + n
    if all(n == 0 for n in agg.values()):
        raise ZeroFrequency("sum of n_p log p vanishes for a nonzero exponent vector")
    lam = math.fsum(n * math.log(p) for p, n in agg.items() if n)
    meas = float(shifts.measure)
    total = 0j
    for lo, hi in shifts:
        # int_lo^hi e^{i lam tau} d tau = 2 sin(lam (hi - lo)/2)/lam * e^{i lam (lo + hi)/2}
        total += 2 * math.sin(0.5 * lam * (hi - lo)) / lam * complex(
            math.cos(0.5 * lam * (lo + hi)), math.sin(0.5 * lam * (lo + hi)))
    return total / meas, 2 * len(shifts) / (abs(lam) * meas)


def random_prime_tuples(count, seed, max_prime=100, max_size=4, max_exp=5):
    """Random (primes, exponents) tuples with distinct primes and not all exponents zero."""
    rng = np.random.default_rng(seed)
    pool = primes_upto(max_prime)
    out = []
    while len(out) < count:
        k = int(rng.integers(1, max_size + 1))
        ps = sorted(rng.choice(pool, size=k, replace=False).tolist())
        ns = rng.integers(-max_exp, max_exp + 1, size=k).tolist()
        if any(ns):
            out.append((ps, ns))
    return out
