"""Zero catalogs, compact rectangles and the admissible-shift sets built from them."""

import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import CatalogTooShort, DomainError, MonotonicityError, ParseError
from .intervals import ShiftIntervalSet

FIXTURE = "zeros_1000.txt"


@dataclass(frozen=True, eq=False)
class ZeroCatalog:
    """Nontrivial zeros beta + i gamma with gamma > 0, sorted by gamma.

    The conjugate zeros beta - i gamma are implied.  ``height_bound`` is the
    height up to which the caller asserts the list is complete.
    """

    betas: np.ndarray
    gammas: np.ndarray
    source: str = "synthetic"
    height_bound: float = math.inf
    assume_rh: bool = False
    _off: tuple = field(init=False, repr=False, default=())

    def __post_init__(self):
        b = np.asarray(self.betas, dtype=float).copy()
        g = np.asarray(self.gammas, dtype=float).copy()
        if b.shape != g.shape or b.ndim != 1:
            raise ValueError("betas and gammas must be 1-D arrays of equal length")
        if np.any(np.diff(g) <= 0):
            raise MonotonicityError("ordinates must be strictly increasing")
        if np.any((b <= 0) | (b >= 1)):
            raise ValueError("need 0 < beta < 1")
        b.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "betas", b)
        object.__setattr__(self, "gammas", g)
        off = tuple((float(x), float(y)) for x, y in zip(b, g) if x != 0.5)
        off += tuple((x, -y) for x, y in off)
        object.__setattr__(self, "_off", off)

    @classmethod
    def synthetic(cls, records, height_bound=math.inf):
        """Catalog from explicit (beta, gamma) records, e.g. to exercise exclusion logic."""
        records = sorted(records, key=lambda r: r[1])
        b = [r[0] for r in records]
        g = [r[1] for r in records]
        return cls(np.array(b, dtype=float), np.array(g, dtype=float), "synthetic", height_bound)

    @classmethod
    def empty(cls):
        return cls(np.zeros(0), np.zeros(0), "empty", math.inf)

    def __len__(self):
        return len(self.gammas)

    @property
    def records(self):
        return list(zip(self.betas.tolist(), self.gammas.tolist()))

    def _all(self):
        """Zeros together with their conjugates."""
        return np.concatenate((self.betas, self.betas)), np.concatenate((self.gammas, -self.gammas))

    def off_line(self):
        """Zeros (with conjugates) whose real part is not 1/2."""
        return self._off

    def zeros_near(self, t, r):
        b, g = self._all()
        sel = np.abs(g - t) <= r
        return list(zip(b[sel].tolist(), g[sel].tolist()))

    def cut_at(self, t, sigma):
        """The zero whose leftward cut contains sigma + it, or None."""
        for beta, gamma in self.zeros_near(t, 1e-12):
            if sigma <= beta:
                return (beta, gamma)
        return None

    def cut_mask(self, t, sigma):
        """Vectorized cut_at: True where sigma + it lies on a zero's cut."""
        t = np.asarray(t, dtype=float)
        sigma = np.asarray(sigma, dtype=float)
        out = np.zeros(np.broadcast(t, sigma).shape, dtype=bool)
        if not len(self):
            return out
        b, g = self._all()
        order = np.argsort(g)
        b, g = b[order], g[order]
        k = np.clip(np.searchsorted(g, t), 1, len(g) - 1) if len(g) > 1 else np.zeros_like(t, dtype=int)
        for j in (k - 1, k):
            j = np.clip(j, 0, len(g) - 1)
            out |= (np.abs(g[j] - t) < 1e-12) & (sigma <= b[j])
        return out

    def require_height(self, height, sigma0):
        """Raise CatalogTooShort if zeros above sigma0 might exist beyond the listed height."""
        if self.assume_rh and sigma0 >= 0.5:
            return
        if height > self.height_bound:
            raise CatalogTooShort(
                f"catalog ({self.source}) is complete only to {self.height_bound}, need {height}")


def load_fixture():
    """The bundled table of all zeros with 0 < gamma <= 1000 (649 zeros), under RH."""
    text = resources.files("etalab.data").joinpath(FIXTURE).read_text()
    cat = parse_zeros(text, assume_rh=True, source=f"fixture:{FIXTURE}")
    # The table was produced by a complete sign-change scan up to 1000.
    return ZeroCatalog(cat.betas, cat.gammas, cat.source, 1000.0, True)


def parse_zeros(text, assume_rh=True, source="text"):
    """Parse a zero table.

    One record per line: either an ordinate ``gamma`` or a pair ``beta gamma``
    (comma or whitespace separated).  Lines starting with '#' and blank lines
    are skipped.  With assume_rh every beta is set to 1/2; otherwise every line
    must carry its beta.
    """
    betas, gammas = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace(",", " ").split()
        try:
            nums = [float(p) for p in parts]
        except ValueError:
            raise ParseError(lineno, f"not a number: {line!r}") from None
        if len(nums) == 1 and assume_rh:
            beta, gamma = 0.5, nums[0]
        elif len(nums) == 2:
            beta, gamma = (0.5 if assume_rh else nums[0]), nums[1]
        elif len(nums) == 1:
            raise ParseError(lineno, "a real part is required when RH is not assumed")
        else:
            raise ParseError(lineno, f"expected 1 or 2 fields, got {len(nums)}")
        if not (math.isfinite(gamma) and 0 < beta < 1 and gamma > 0):
            raise ParseError(lineno, f"invalid zero {beta} + {gamma}i")
        if gammas and gamma <= gammas[-1]:
            raise MonotonicityError(f"line {lineno}: ordinate {gamma} does not exceed {gammas[-1]}")
        betas.append(beta)
        gammas.append(gamma)
    height = gammas[-1] if gammas else 0.0
    return ZeroCatalog(np.array(betas), np.array(gammas), source, height, assume_rh)


def ingest_zeros(path, assume_rh=True):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_zeros(text, assume_rh=assume_rh, source=str(path))


# ---------------------------------------------------------------------------
# rectangles


@dataclass(frozen=True)
class CompactRectSpec:
    """Closed rectangle [sigma_min, sigma_max] x i[t_min, t_max] inside the right half of the strip."""

    sigma_min: float
    sigma_max: float
    t_min: float
    t_max: float
    M: int = 256

    def __post_init__(self):
        if not 0.5 < self.sigma_min <= self.sigma_max < 1:
            raise DomainError("need 1/2 < sigma_min <= sigma_max < 1")
        if not self.t_min <= self.t_max:
            raise DomainError("need t_min <= t_max")
        if self.M < 64:
            raise DomainError("need at least 64 boundary samples")

    @classmethod
    def point(cls, s, M=64):
        s = complex(s)
        return cls(s.real, s.real, s.imag, s.imag, M)

    @property
    def is_point(self):
        return self.sigma_min == self.sigma_max and self.t_min == self.t_max


def k_grid(K, interior=16):
    """(boundary, interior) sample points of K as complex arrays.

    The boundary carries K.M points, M/4 per side, walked counter-clockwise
    from the lower-left corner; the interior grid is interior x interior cell
    centres.  A degenerate rectangle (a point) gives one point and no interior.
    """
    if K.is_point:
        return np.array([complex(K.sigma_min, K.t_min)]), np.zeros(0, dtype=complex)
    q = K.M // 4
    a, b, c, d = K.sigma_min, K.sigma_max, K.t_min, K.t_max
    u = np.arange(q) / q
    sides = [
        (a + (b - a) * u) + 1j * c,
        b + 1j * (c + (d - c) * u),
        (b - (b - a) * u) + 1j * d,
        a + 1j * (d - (d - c) * u),
    ]
    boundary = np.concatenate(sides)
    if interior <= 0 or a == b or c == d:
        return boundary, np.zeros(0, dtype=complex)
    f = (np.arange(interior) + 0.5) / interior
    inner = (a + (b - a) * f)[None, :] + 1j * (c + (d - c) * f)[:, None]
    return boundary, inner.ravel()


@dataclass(frozen=True)
class RectConstants:
    abs_K: float
    tau0: float
    sigma0: float
    R: tuple  # (sigma_L, sigma_R, t_lo, t_hi), an open rectangle


def derive_constants(K):
    abs_K = K.t_max - K.t_min
    tau0 = 0.5 * (K.t_max + K.t_min)
    sigma0 = 0.5 * (0.5 + K.sigma_min)
    R = (0.5 * (sigma0 + K.sigma_min), 0.5 * (K.sigma_max + 1), K.t_min - 0.5, K.t_max + 0.5)
    return RectConstants(abs_K, tau0, sigma0, R)


# ---------------------------------------------------------------------------
# shift sets


def exclusion_set(catalog, sigma0, tau0, Delta, window):
    """Shifts tau in the window for which no zero with beta > sigma0 has |gamma - tau0 - tau| < Delta,
    and |tau + tau0| >= Delta (the real-axis cut)."""
    if not Delta > 0:
        raise DomainError("Delta must be positive")
    lo, hi = window
    if not lo <= hi:
        raise DomainError("window must satisfy lo <= hi")
    catalog.require_height(max(abs(lo + tau0), abs(hi + tau0)) + Delta, sigma0)
    b, g = catalog._all()
    g = g[b > sigma0]
    near = g[(g - tau0 + Delta > lo) & (g - tau0 - Delta < hi)]
    cuts = [(x - tau0 - Delta, x - tau0 + Delta) for x in near.tolist()]
    cuts.append((-tau0 - Delta, -tau0 + Delta))
    return ShiftIntervalSet.interval(lo, hi) - ShiftIntervalSet(cuts)


def valid_shifts(catalog, K, T):
    """The admissible shifts in [T, 2T]: exclusion radius |K| + 1 at level sigma0(K)."""
    c = derive_constants(K)
    return exclusion_set(catalog, c.sigma0, c.tau0, c.abs_K + 1, (T, 2 * T))


def script_X_set(catalog, K, T, Y):
    """Shifts in [T, 2T] with the wider exclusion radius |K| + Y + 4."""
    c = derive_constants(K)
    Delta = c.abs_K + Y + 4
    return exclusion_set(catalog, c.sigma0, c.tau0, Delta, (T, 2 * T))


def ell_set(catalog, sigma0, y, T):
    """Union of (gamma - (y+3), gamma + (y+3)) over zeros with beta > (1/2 + sigma0)/2 and
    gamma in [T/2, 5T/2], plus the two edge strips of width y+3, inside [T/2, 5T/2]."""
    w = y + 3
    if not T >= 2 * w:
        raise DomainError("need T >= 2(y+3)")
    lo, hi = 0.5 * T, 2.5 * T
    thr = 0.5 * (0.5 + sigma0)
    catalog.require_height(hi, thr)
    b, g = catalog._all()
    g = g[(b > thr) & (g >= lo) & (g <= hi)]
    parts = [(x - w, x + w) for x in g.tolist()] + [(lo, lo + w), (hi - w, hi)]
    return ShiftIntervalSet(parts).clip(lo, hi)


def Y_schedule(T, sigma0):
    """(log T)^{8/(sigma0 - 1/2)}: astronomically large at desk heights; a calculator only."""
    if not sigma0 > 0.5 or not T > 1:
        raise DomainError("need sigma0 > 1/2 and T > 1")
    try:
        return math.log(T) ** (8.0 / (sigma0 - 0.5))
    except OverflowError:
        return math.inf
