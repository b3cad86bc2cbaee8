"""Finite unions of real intervals with exact measure.

Endpoints are kept as given (floats, ints or Fractions), so the set algebra
is exact whenever the inputs are exact.  Removed intervals are treated as
open and what remains as closed; measure does not see the difference.
"""

import csv
import io
import math
from bisect import bisect_right

import numpy as np


def _normalize(pairs):
    out = []
    for lo, hi in sorted((lo, hi) for lo, hi in pairs if lo < hi):
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


class ShiftIntervalSet:
    """Sorted, pairwise disjoint list of (lo, hi) with lo < hi."""

    __slots__ = ("_iv",)

    def __init__(self, intervals=()):
        self._iv = tuple(_normalize(intervals))

    @classmethod
    def interval(cls, lo, hi):
        return cls([(lo, hi)])

    @property
    def intervals(self):
        return list(self._iv)

    def __iter__(self):
        return iter(self._iv)

    def __len__(self):
        return len(self._iv)

    def __eq__(self, other):
        return isinstance(other, ShiftIntervalSet) and self._iv == other._iv

    def __hash__(self):
        return hash(self._iv)

    def __repr__(self):
        return f"ShiftIntervalSet({list(self._iv)!r})"

    def is_empty(self):
        return not self._iv

    @property
    def measure(self):
        lens = [hi - lo for lo, hi in self._iv]
        if all(isinstance(x, float) for x in lens):
            return math.fsum(lens)
        return sum(lens, 0)

    @property
    def lo(self):
        return self._iv[0][0] if self._iv else None

    @property
    def hi(self):
        return self._iv[-1][1] if self._iv else None

    # -- algebra -----------------------------------------------------------
    def union(self, other):
        return ShiftIntervalSet(self._iv + tuple(other))

    def intersection(self, other):
        a, b = self._iv, tuple(other)
        i = j = 0
        out = []
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo < hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return ShiftIntervalSet(out)

    def difference(self, other):
        out = []
        cuts = tuple(other)
        j = 0
        for lo, hi in self._iv:
            cur = lo
            while j < len(cuts) and cuts[j][1] <= cur:
                j += 1
            k = j
            while k < len(cuts) and cuts[k][0] < hi:
                clo, chi = cuts[k]
                if clo > cur:
                    out.append((cur, clo))
                cur = max(cur, chi)
                if cur >= hi:
                    break
                k += 1
            if cur < hi:
                out.append((cur, hi))
        return ShiftIntervalSet(out)

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def clip(self, lo, hi):
        return self.intersection(ShiftIntervalSet.interval(lo, hi))

    def issubset(self, other, tol=0.0):
        return self.difference(other).measure <= tol

    # -- points --------------------------------------------------------------
    def contains(self, x):
        """Membership of x (scalar or array) in the closed intervals."""
        los = np.array([float(lo) for lo, _ in self._iv])
        his = np.array([float(hi) for _, hi in self._iv])
        x = np.asarray(x, dtype=float)
        if not len(los):
            return np.zeros(x.shape, dtype=bool) if x.ndim else False
        k = np.searchsorted(los, x, side="right") - 1
        ok = (k >= 0) & (x <= his[np.clip(k, 0, None)])
        return ok if x.ndim else bool(ok)

    def __contains__(self, x):
        return self.contains(x)

    def from_measure(self, u):
        """Inverse of the cumulative-measure map: point at measure offset u."""
        if not self._iv:
            raise ValueError("empty interval set")
        lens = np.array([float(hi - lo) for lo, hi in self._iv])
        cum = np.concatenate(([0.0], np.cumsum(lens)))
        u = np.asarray(u, dtype=float)
        k = np.clip(np.searchsorted(cum, u, side="right") - 1, 0, len(lens) - 1)
        los = np.array([float(lo) for lo, _ in self._iv])
        his = np.array([float(hi) for _, hi in self._iv])
        return np.minimum(los[k] + (u - cum[k]), his[k])

    def measure_slice(self, a, b):
        """The part of the set whose cumulative-measure coordinate lies in [a, b]."""
        out, cum = [], 0.0
        for lo, hi in self._iv:
            length = float(hi - lo)
            x0 = max(a, cum)
            x1 = min(b, cum + length)
            if x0 < x1:
                out.append((float(lo) + (x0 - cum), float(lo) + (x1 - cum)))
            cum += length
        return ShiftIntervalSet(out)

    def index_of(self, x):
        """Index of the interval containing x, or None."""
        k = bisect_right([lo for lo, _ in self._iv], x) - 1
        if k >= 0 and x <= self._iv[k][1]:
            return k
        return None

    # -- serialization ---------------------------------------------------------
    def to_csv(self, fh=None):
        buf = fh if fh is not None else io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lo", "hi"])
        for lo, hi in self._iv:
            w.writerow([f"{float(lo):.15g}", f"{float(hi):.15g}"])
        if fh is None:
            return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
        if rows and rows[0][0] == "lo":
            rows = rows[1:]
        return cls((float(lo), float(hi)) for lo, hi in rows)

    def to_list(self):
        return [[float(lo), float(hi)] for lo, hi in self._iv]
