"""Solution counting for x1^2 + a2 x2^2 + a3 x3^2 = 0 (mod q) in boxes.

The object of study is the number of integer triples with |x_i| <= N
(the x3 variable restricted to gcd(x3, q) = 1) solving the congruence,
optionally with the x3 direction weighted by a smooth window.  Two
independent routes are provided: a literal triple loop, and a lattice
count driven by the square-root table (for each residue class t, the
number of x1 in [-N, N] with x1^2 = t (mod q) is a sum of arithmetic
progression counts over the roots of t).  The fast route is exact, not
approximate; agreement of the two is the basic correctness gate.

The expected size of the count is carried by the local density

    C_q = prod_{p | q} (1 - 1/p) (1 - legendre(-a2, p)/p),

an exact rational, through main term C_q (2N)^2 / q * int Phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import FactoredModulus, SqrtTable, build_sqrt_table, jacobi
from .errors import DomainError, ScaleCapError
from .smoothing import SmoothWeight, weight_integral, weight_values

_BRUTE_ITER_CAP = 10**10


@dataclass(frozen=True)
class CongruenceInstance:
    """One congruence x1^2 + alpha2 x2^2 + alpha3 x3^2 = 0 (mod m.q).

    Requires odd q, gcd(alpha2, q) = 1 and alpha3 a reduced residue in
    [1, q]; together these give gcd(2 alpha2 alpha3, q) = 1.
    """

    m: FactoredModulus
    alpha2: int
    alpha3: int

    def __post_init__(self):
        q = self.m.q
        if not self.m.is_odd:
            raise DomainError(f"modulus must be odd, got {q}")
        if self.alpha2 < 1 or math.gcd(self.alpha2, q) != 1:
            raise DomainError(f"alpha2 must be positive and coprime to q, got {self.alpha2}")
        if not (1 <= self.alpha3 <= q) or math.gcd(self.alpha3, q) != 1:
            raise DomainError(
                f"alpha3 must be a reduced residue in [1, q], got {self.alpha3}"
            )

    @property
    def q(self) -> int:
        return self.m.q


def local_density(m: FactoredModulus, alpha2: int) -> Fraction:
    """The density constant C_q as an exact rational.

    >>> from .arith import factorize
    >>> local_density(factorize(15), 1)
    Fraction(128, 225)
    """
    if not m.is_odd:
        raise DomainError(f"local density needs odd q, got {m.q}")
    if math.gcd(alpha2, m.q) != 1:
        raise DomainError("local density needs gcd(alpha2, q) = 1")
    c = Fraction(1)
    for p in m.primes:
        c *= Fraction(p - 1, p) * Fraction(p - jacobi(-alpha2 % p, p), p)
    return c


def count_box_bruteforce(inst: CongruenceInstance, n: int) -> int:
    """Triple-loop count over the box [-n, n]^3; the reference oracle.

    Kept deliberately literal.  Refuses boxes beyond 10^10 iterations.
    """
    if n < 0:
        raise DomainError("box radius must be >= 0")
    if (2 * n + 1) ** 3 > _BRUTE_ITER_CAP:
        raise ScaleCapError(f"brute force caps at {_BRUTE_ITER_CAP} iterations")
    q = inst.q
    sq1 = [(x * x) % q for x in range(-n, n + 1)]
    sq2 = [(inst.alpha2 * x * x) % q for x in range(-n, n + 1)]
    sq3 = [(inst.alpha3 * x * x) % q for x in range(-n, n + 1)]
    ok3 = [math.gcd(x, q) == 1 for x in range(-n, n + 1)]
    count = 0
    idx = range(2 * n + 1)
    for i3 in idx:
        if not ok3[i3]:
            continue
        t3 = sq3[i3]
        for i2 in idx:
            t23 = (sq2[i2] + t3) % q
            for v in sq1:
                if (v + t23) % q == 0:
                    count += 1
    return count


# ---------------------------------------------------------------------------
# Lattice-count route: per-class x1 counts folded against x2, x3 classes.
# ---------------------------------------------------------------------------


def _lattice_counts(q: int, n: int) -> np.ndarray:
    """count[r] = #{x in [-n, n] : x = r (mod q)} for r in [0, q)."""
    r = np.arange(q, dtype=np.int64)
    return (n - r) // q + (n + r) // q + 1


def root_weighted_counts(tbl: SqrtTable, n: int) -> np.ndarray:
    """rootsum[t] = #{x1 in [-n, n] : x1^2 = t (mod q)}, for every class t."""
    q = tbl.q
    lat = _lattice_counts(q, n)
    cls = np.repeat(np.arange(q, dtype=np.int64), np.diff(tbl.indptr))
    rootsum = np.zeros(q, dtype=np.int64)
    np.add.at(rootsum, cls, lat[tbl.data])
    return rootsum


def box_profile(m: FactoredModulus, alpha2: int, n: int, tbl: SqrtTable) -> np.ndarray:
    """g[c] = #{(x1, x2) in [-n, n]^2 : x1^2 + alpha2 x2^2 = -c (mod q)}.

    With this in hand, a congruence count is a sum of g over the residue
    classes alpha3 x3^2 of the admitted x3.  Cost is O(q * d) where d is
    the number of distinct classes alpha2 x2^2 hits.
    """
    q = m.q
    rootsum = root_weighted_counts(tbl, n)
    x2 = np.arange(-n, n + 1, dtype=np.int64)
    c2 = np.bincount((alpha2 * x2 * x2) % q, minlength=q)
    # rtil[c] = rootsum[(-c) mod q]; rolling by -u then gives rootsum[(-c-u) mod q]
    rtil = rootsum[(-np.arange(q)) % q]
    g = np.zeros(q, dtype=np.int64)
    for u in np.nonzero(c2)[0]:
        g += c2[u] * np.roll(rtil, -int(u))
    return g


def _coprime_x3(q: int, r: int) -> np.ndarray:
    """x3 values in [-r, r] with gcd(x3, q) = 1."""
    x3 = np.arange(-r, r + 1, dtype=np.int64)
    return x3[np.gcd(np.abs(x3), q) == 1]


def count_box_fast(inst: CongruenceInstance, n: int, tbl: SqrtTable | None = None) -> int:
    """Exact box count via the square-root table; equals the brute force."""
    if n < 0:
        raise DomainError("box radius must be >= 0")
    if tbl is None:
        tbl = build_sqrt_table(inst.m)
    g = box_profile(inst.m, inst.alpha2, n, tbl)
    x3 = _coprime_x3(inst.q, n)
    return int(np.sum(g[(inst.alpha3 * x3 * x3) % inst.q]))


def count_box_smoothed(inst: CongruenceInstance, w: SmoothWeight, tbl: SqrtTable | None = None) -> float:
    """Smoothed count: x1, x2 sharp in [-floor(w.n), floor(w.n)], x3 weighted.

    The x3 sum runs over the full window support |x3| <= floor(n + delta)
    with weight Phi(x3), still restricted to gcd(x3, q) = 1.
    """
    if tbl is None:
        tbl = build_sqrt_table(inst.m)
    n = int(math.floor(w.n + 1e-12))
    g = box_profile(inst.m, inst.alpha2, n, tbl)
    x3 = _coprime_x3(inst.q, w.lattice_support)
    vals = g[(inst.alpha3 * x3 * x3) % inst.q].astype(np.float64)
    return float(vals @ weight_values(w, x3))


def main_term(inst: CongruenceInstance, w: SmoothWeight) -> float:
    """Predicted smoothed count C_q (2N)^2 int Phi / q with N = w.n."""
    c = local_density(inst.m, inst.alpha2)
    return float(c) * (2.0 * w.n) ** 2 * weight_integral(w) / inst.q


def pair_residue_counts(m: FactoredModulus, alpha2: int, n: int) -> np.ndarray:
    """c12[t] = #{(x1, x2) in [-n, n]^2 : x1^2 + alpha2 x2^2 = t (mod q)}.

    This is the weight vector behind every character sum A_chi: summing
    c12[t] chi(t) over t gives sum chi(x1^2 + alpha2 x2^2) over the box.
    """
    q = m.q
    x = np.arange(-n, n + 1, dtype=np.int64)
    c1 = np.bincount((x * x) % q, minlength=q)
    c2 = np.bincount((alpha2 * x * x) % q, minlength=q)
    out = np.zeros(q, dtype=np.int64)
    for u in np.nonzero(c2)[0]:
        out += c2[u] * np.roll(c1, int(u))
    return out


def m_of_q(m: FactoredModulus, alpha2: int, w: SmoothWeight) -> float:
    """Average of the smoothed count over alpha3 in A(q).

    Equals (1/phi(q)) * A0 * B0 where A0 counts box pairs with
    gcd(x1^2 + alpha2 x2^2, q) = 1 and B0 is the weighted count of
    admissible x3.
    """
    q = m.q
    n = int(math.floor(w.n + 1e-12))
    c12 = pair_residue_counts(m, alpha2, n)
    coprime = np.gcd(np.arange(q), q) == 1
    a0 = int(np.sum(c12[coprime]))
    x3 = _coprime_x3(q, w.lattice_support)
    b0 = float(np.sum(weight_values(w, x3)))
    return a0 * b0 / m.totient


@dataclass(frozen=True)
class BoxCountReport:
    """Sharp and smoothed counts for one instance, with the prediction."""

    q: int
    alpha2: int
    alpha3: int
    n: int
    sharp_count: int
    smoothed_count: float
    main_term_value: float

    @property
    def relative_error(self) -> float:
        return (self.smoothed_count - self.main_term_value) / self.main_term_value


def box_count_report(inst: CongruenceInstance, w: SmoothWeight, tbl: SqrtTable | None = None) -> BoxCountReport:
    if tbl is None:
        tbl = build_sqrt_table(inst.m)
    n = int(math.floor(w.n + 1e-12))
    return BoxCountReport(
        q=inst.q,
        alpha2=inst.alpha2,
        alpha3=inst.alpha3,
        n=n,
        sharp_count=count_box_fast(inst, n, tbl),
        smoothed_count=count_box_smoothed(inst, w, tbl),
        main_term_value=main_term(inst, w),
    )


# ---------------------------------------------------------------------------
# Minimal solution height.
# ---------------------------------------------------------------------------

_NO_ROOT = 1 << 62


def min_root_array(tbl: SqrtTable) -> np.ndarray:
    """minroot[t] = smallest |x| with x^2 = t (mod q), or a huge sentinel."""
    q = tbl.q
    mag = np.minimum(tbl.data.astype(np.int64), q - tbl.data.astype(np.int64))
    out = np.full(q, _NO_ROOT, dtype=np.int64)
    np.minimum.at(out, np.repeat(np.arange(q, dtype=np.int64), np.diff(tbl.indptr)), mag)
    return out


def minimal_height(inst: CongruenceInstance, h_max: int, tbl: SqrtTable | None = None) -> int | None:
    """Smallest max(|x1|, |x2|, |x3|) over solutions, or None above h_max.

    Walks shells S = max(|x2|, |x3|) outward; for each pair the cheapest
    x1 comes from the minimal root of the forced residue class.  Stops as
    soon as no later shell can beat the best height found.

    >>> from .arith import factorize
    >>> minimal_height(CongruenceInstance(factorize(5), 1, 1), 10)
    2
    """
    if h_max < 0:
        raise DomainError("h_max must be >= 0")
    if tbl is None:
        tbl = build_sqrt_table(inst.m)
    q = inst.q
    minroot = min_root_array(tbl)
    best: int | None = None
    for s in range(0, h_max + 1):
        if best is not None and best <= s:
            break
        pairs = [(a, s) for a in range(s + 1)] + [(s, b) for b in range(s)]
        for a2v, a3v in pairs:
            if math.gcd(a3v, q) != 1:
                continue
            t = (-inst.alpha2 * a2v * a2v - inst.alpha3 * a3v * a3v) % q
            r = int(minroot[t])
            if r == _NO_ROOT:
                continue
            h = max(s, r)
            if h <= h_max and (best is None or h < best):
                best = h
    return best


# ---------------------------------------------------------------------------
# Representations n = x^2 + alpha y^2.
# ---------------------------------------------------------------------------


def representation_count(n: int, alpha: int) -> int:
    """r(n, alpha) = #{(x, y) in Z^2 : x^2 + alpha y^2 = n}.

    >>> representation_count(5, 1)
    8
    """
    if n < 0:
        raise DomainError("representation_count needs n >= 0")
    if alpha < 1:
        raise DomainError("representation_count needs alpha >= 1")
    if n == 0:
        return 1
    count = 0
    y_max = math.isqrt(n // alpha)
    for y in range(y_max + 1):
        rem = n - alpha * y * y
        if rem < 0:
            continue
        s = math.isqrt(rem)
        if s * s == rem:
            count += (2 if s > 0 else 1) * (2 if y > 0 else 1)
    return count


def representation_counts_upto(n_max: int, alpha: int) -> np.ndarray:
    """Vector of r(n, alpha) for n = 0..n_max, by one sweep over (x, y)."""
    if n_max < 0:
        raise DomainError("representation_counts_upto needs n_max >= 0")
    if alpha < 1:
        raise DomainError("representation_counts_upto needs alpha >= 1")
    counts = np.zeros(n_max + 1, dtype=np.int64)
    y = 0
    while alpha * y * y <= n_max:
        base = alpha * y * y
        xs = np.arange(math.isqrt(n_max - base) + 1, dtype=np.int64)
        mult = np.where(xs > 0, 2, 1) * (2 if y > 0 else 1)
        np.add.at(counts, base + xs * xs, mult)
        y += 1
    return counts
