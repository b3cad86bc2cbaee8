"""Vectorized evaluation of eta_m at many points.

Points are grouped by ordinate.  For each ordinate, log zeta is sampled at
Chebyshev-Lobatto nodes on two panels, [sigma_lo, 3] and [3, 12], unwrapped
leftward from sigma = 12, and converted to Chebyshev coefficients.  The
iterated integrals are then exact operations on the coefficients, anchored at
sigma = 12 where the Dirichlet series over n <= 64 is accurate to ~1e-20.
The right-hand panel is reused for points with 3 <= sigma <= 12.

The node count on the left panel follows from the Bernstein ellipse that
avoids the nearest possible singularity of log zeta(. + it): a zero on the
critical line at height t (the worst case under RH), the pole at 1, and any
catalogued zero off the line.  Rows whose unwrapping or coefficient decay
looks wrong are handed to the scalar continuation, so the batch path never
silently returns a value on the wrong branch.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .analytic import _snap, eta_continuation, eta_m_derivatives
from .errors import CutViolation, DomainError
from .quadrature import (cheb_coefficients, cheb_derivative, cheb_integrate_from_right,
                         clenshaw_rows, lobatto_nodes)
from .sieve import lambda_table
from .zeta import zeta_tensor

SIGMA_MID = 3.0
SIGMA_FAR = 12.0
RIGHT_NODES = 40
MAX_NODES = 320
CHUNK_ROWS = 96
COEF_TOL = 1e-13
_DIRECT = lambda_table(64)


def default_threads():
    try:
        return max(1, int(os.environ.get("ETA_LAB_THREADS", "1")))
    except ValueError:
        return 1


def _rho(w, lo, hi):
    """Bernstein ellipse parameter of the point w relative to [lo, hi]."""
    z = (np.asarray(w, dtype=complex) - 0.5 * (lo + hi)) / (0.5 * (hi - lo))
    r = np.sqrt(z - 1) * np.sqrt(z + 1)
    return np.maximum(np.abs(z + r), np.abs(z - r))


def _row_rho(t, lo, off_line):
    rho = np.minimum(_rho(0.5 + 0j, lo, SIGMA_MID), _rho(1.0 - 1j * t, lo, SIGMA_MID))
    for beta, gamma in off_line:
        near = np.abs(t - gamma) < 5
        if np.any(near):
            w = beta + 1j * (gamma - t[near])
            rho[near] = np.minimum(rho[near], _rho(w, lo[near], SIGMA_MID))
    return rho


def _nodes_needed(rho):
    with np.errstate(divide="ignore"):
        n = np.ceil(35.0 / np.log(rho)) + 8
    return np.where(rho > 1.0, n, np.inf)


def direct_far(m, t):
    """eta_k(12 + it) for k = 0..m from the Dirichlet series over n <= 64; shape (R, m+1)."""
    s = SIGMA_FAR + 1j * np.asarray(t, dtype=float)[:, None]
    base = _DIRECT.lam / _DIRECT.logn * np.exp(-np.multiply.outer(s[:, 0], _DIRECT.logn))
    return np.stack([base @ _DIRECT.logn ** (-k) for k in range(m + 1)], axis=1)


def _unwrap(Z, start):
    """Continuous log of rows of Z (columns ordered leftward), with principal value at column 0
    shifted to match ``start``.  Returns (values, ok)."""
    inc = np.log(Z[:, 1:] / Z[:, :-1])
    ok = np.all(np.abs(inc) < 0.5, axis=1)
    L0 = np.log(Z[:, :1])
    L0 = _snap(start[:, None], Z[:, :1]) if start is not None else L0
    L = np.concatenate((L0, L0 + np.cumsum(inc, axis=1)), axis=1)
    return _snap(L, Z), ok


def _decayed(c):
    scale = np.maximum(1.0, np.max(np.abs(c), axis=1))
    return np.max(np.abs(c[:, -3:]), axis=1) < COEF_TOL * scale


def _integrate(c, m, anchors, half):
    """Coefficient arrays of eta_0 .. eta_m on a panel whose right end carries anchors[:, k]."""
    out = [c]
    for k in range(1, m + 1):
        c = cheb_integrate_from_right(c, half)
        c[:, 0] += anchors[:, k]
        out.append(c)
    return out


def _chunk(m, t, q_row, q_sig, sig_lo, n_left, derivs=1):
    """Evaluate one group of rows.  Returns (values at queries, row ok flags);
    with derivs > 1 the values have a trailing axis of sigma-derivatives."""
    lo, hi = sig_lo, SIGMA_MID
    mid_l, half_l = 0.5 * (lo + hi), 0.5 * (hi - lo)
    mid_r, half_r = 0.5 * (SIGMA_MID + SIGMA_FAR), 0.5 * (SIGMA_FAR - SIGMA_MID)
    xl = lobatto_nodes(n_left)
    xr = lobatto_nodes(RIGHT_NODES)
    cols = [mid_r + half_r * xr, mid_l + half_l * xl]
    uq = np.unique(q_sig) if m == 0 else np.zeros(0)
    Z = zeta_tensor(np.concatenate(cols + [uq]), t)
    Zr, Zl, Zq = Z[:, :RIGHT_NODES], Z[:, RIGHT_NODES:RIGHT_NODES + n_left], Z[:, RIGHT_NODES + n_left:]

    far = direct_far(m, t)
    Lr, ok_r = _unwrap(Zr, far[:, 0])
    Ll, ok_l = _unwrap(Zl, Lr[:, -1])
    cr = cheb_coefficients(Lr, axis=1)
    cl = cheb_coefficients(Ll, axis=1)
    ok = ok_r & ok_l & _decayed(cr) & _decayed(cl)

    right = _integrate(cr, m, far, half_r)
    # eta_k at sigma = 3 is the left end (x = -1) of the right panel.
    at_mid = np.stack([_eval_at(C, -1.0) for C in right], axis=1)
    left = _integrate(cl, m, at_mid, half_l)

    vals = np.empty((len(q_row), derivs), dtype=complex)
    use_left = q_sig < SIGMA_MID
    for mask, coefs, mid, half in ((use_left, left[m], mid_l, half_l), (~use_left, right[m], mid_r, half_r)):
        if not np.any(mask):
            continue
        rows = q_row[mask]
        x = ((q_sig[mask] - mid) / half)[:, None]
        c = coefs[rows]
        for j in range(derivs):
            vals[mask, j] = clenshaw_rows(c, x)[:, 0]
            if j + 1 < derivs:
                c = cheb_derivative(c, half)
    if m == 0 and len(q_row):
        zq = Zq[q_row, np.searchsorted(uq, q_sig)]
        vals[:, 0] = _snap(vals[:, 0], zq)
    return (vals[:, 0] if derivs == 1 else vals), ok


def _eval_at(c, x):
    """Chebyshev series rows of c at a single scalar x in {-1, 1}."""
    k = np.arange(c.shape[1])
    return c @ (float(x) ** k)


def eta_batch(m, s, catalog=None, threads=None, chunk_rows=CHUNK_ROWS, derivs=1):
    """eta_m at every point of the array s (sigma > 1/2), same shape as s.

    With derivs = n > 1 the result gains a trailing axis holding the
    derivatives of orders 0..n-1 (taken in sigma, which for a holomorphic
    function is the complex derivative).

    Raises CutViolation if any horizontal ray from a point to the right meets a
    cut.  Deterministic: the grouping into chunks depends only on the points,
    never on the number of threads.
    """
    m = int(m)
    if m < 0:
        raise DomainError("m must be non-negative")
    s = np.asarray(s, dtype=complex)
    shape = s.shape
    flat = s.ravel()
    sig, t = flat.real.copy(), flat.imag.copy()
    derivs = int(derivs)
    if derivs < 1:
        raise DomainError("derivs must be >= 1")
    out_shape = shape if derivs == 1 else shape + (derivs,)
    out = np.empty((len(flat), derivs), dtype=complex)
    if not len(flat):
        return out.reshape(out_shape)
    if not np.all(np.isfinite(flat)):
        raise DomainError("non-finite argument")
    if np.any(sig <= 0.5):
        raise DomainError(f"sigma out of range: {sig.min()} (need sigma > 1/2)")
    bad = (t == 0) & (sig <= 1)
    if catalog is not None:
        bad |= catalog.cut_mask(t, sig)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise CutViolation(f"ray from {flat[k]} meets a cut")

    far = sig > SIGMA_FAR
    if np.any(far):
        s_far = flat[far]
        base = _DIRECT.lam / _DIRECT.logn ** (m + 1) * np.exp(-np.multiply.outer(s_far, _DIRECT.logn))
        for j in range(derivs):
            out[far, j] = (base * (-_DIRECT.logn) ** j).sum(axis=1)
    idx = np.flatnonzero(~far)
    if not len(idx):
        return out.reshape(out_shape)

    ut, inv = np.unique(t[idx], return_inverse=True)
    row_lo = np.full(len(ut), SIGMA_MID - 0.5)
    np.minimum.at(row_lo, inv, sig[idx])
    # Worst-case singularities: a critical-line zero at this height, the pole,
    # and any catalogued zero off the line nearby.
    off_line = list(catalog.off_line()) if catalog is not None else []
    rho = _row_rho(ut, row_lo, off_line)
    scalar_rows = _nodes_needed(rho) > MAX_NODES

    order = np.argsort(np.abs(ut), kind="stable")
    order = order[~scalar_rows[order]]
    by_row = np.argsort(inv, kind="stable")
    starts = np.searchsorted(inv[by_row], np.arange(len(ut) + 1))

    tasks = []
    for a in range(0, len(order), chunk_rows):
        rows = order[a:a + chunk_rows]
        pts = np.concatenate([by_row[starts[r]:starts[r + 1]] for r in rows])
        local = np.empty(len(ut), dtype=int)
        local[rows] = np.arange(len(rows))
        q_row = local[inv[pts]]
        lo = float(row_lo[rows].min())
        need = _nodes_needed(_row_rho(ut[rows], np.full(len(rows), lo), off_line))
        n_left = int(min(MAX_NODES, max(16, np.max(need))))
        tasks.append((rows, idx[pts], q_row, lo, n_left))

    def run(task):
        rows, pts, q_row, lo, n_left = task
        return _chunk(m, ut[rows], q_row, sig[pts], lo, n_left, derivs)

    nthreads = default_threads() if threads is None else max(1, int(threads))
    if nthreads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(nthreads) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(task) for task in tasks]

    fallback = list(idx[np.isin(inv, np.flatnonzero(scalar_rows))])
    for (rows, pts, q_row, _, _), (vals, ok) in zip(tasks, results):
        good = ok[q_row]
        out[pts[good]] = vals[good].reshape(-1, derivs)
        fallback.extend(pts[~good])
    for k in sorted(fallback):
        if derivs == 1:
            out[k, 0] = eta_continuation(m, flat[k], catalog)[0]
        else:
            out[k] = eta_m_derivatives(m, flat[k], derivs, catalog=catalog)
    return out.reshape(out_shape)
