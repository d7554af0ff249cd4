"""Variance of smoothed counts over alpha3, and character-sum moments.

Writing S(q, alpha3) for the smoothed solution count and M(q) for its
average over the reduced residues alpha3, the centered second moment
splits exactly into a real-character piece and a complex-character
piece:

    sum_{alpha3} |S - M|^2  =  V1 + V2,

    V1 = (1/phi(q)) sum_{q1 | rad q, q1 > 1} ( sum_{pairs, gcd(v, q2) = 1}
         jacobi(v, q1) )^2 * B0^2,            q2 = rad(q) / q1,
    V2 = (1/phi(q)) sum_{chi^2 != chi0} |A_chi|^2 |B_chi|^2,

where v = x1^2 + alpha2 x2^2 runs over box pairs, A_chi weights those
values by chi, B0 and B_chi are the weighted x3 sums (against 1 and the
conjugate of chi^2).  The identity is orthogonality of characters in the
alpha3 variable and holds to rounding error; it is this module's main
correctness gate, exercised directly in the tests.

The dyadic moments E_k = sum_q (1/phi) sum_chi |A_chi|^(2k) and the
weighted eighth moment F = sum_q (1/phi) sum_{chi^2 != chi0} |B_chi|^8
feed the Holder chain V2 <= E1^(1/2) E2^(1/4) F^(1/4).  A separate
integer decomposition bounds E2 by products over equal pair-values plus
a divisor-count term over unequal ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .arith import FactoredModulus, admissible_moduli, build_sqrt_table, factorize, jacobi, tau_sieve
from .characters import CharacterGroup
from .counting import box_profile, m_of_q, pair_residue_counts
from .errors import DomainError, ScaleCapError
from .smoothing import SmoothWeight, support_points, weight_values

_VARIANCE_Q_CAP = 500
_MOMENT_Q_CAP = 200
_G_N_CAP = 8
_G_Q_CAP = 50


def _x3_residue_weights(m: FactoredModulus, w: SmoothWeight) -> np.ndarray:
    """w3[t] = sum of Phi(x3) over admissible x3 in class t mod q."""
    q = m.q
    x3 = support_points(w)
    x3 = x3[np.gcd(np.abs(x3), q) == 1]
    w3 = np.zeros(q, dtype=np.float64)
    np.add.at(w3, x3 % q, weight_values(w, x3))
    return w3


def _x3_square_weights(m: FactoredModulus, w: SmoothWeight) -> tuple[np.ndarray, np.ndarray]:
    """Distinct classes t = x3^2 mod q with their total weights."""
    q = m.q
    x3 = support_points(w)
    x3 = x3[np.gcd(np.abs(x3), q) == 1]
    agg = np.zeros(q, dtype=np.float64)
    np.add.at(agg, (x3 * x3) % q, weight_values(w, x3))
    ts = np.nonzero(agg)[0]
    return ts, agg[ts]


def smoothed_counts_all_alpha3(
    m: FactoredModulus, alpha2: int, w: SmoothWeight
) -> tuple[np.ndarray, np.ndarray]:
    """(alpha3 values of A(q), their smoothed counts), in one batch."""
    q = m.q
    n = int(math.floor(w.n + 1e-12))
    tbl = build_sqrt_table(m)
    g = box_profile(m, alpha2, n, tbl).astype(np.float64)
    ts, ws = _x3_square_weights(m, w)
    alpha3s = np.arange(1, q + 1, dtype=np.int64)
    alpha3s = alpha3s[np.gcd(alpha3s, q) == 1]
    counts = np.empty(len(alpha3s), dtype=np.float64)
    chunk = max(1, 10**6 // max(1, len(ts)))
    for lo in range(0, len(alpha3s), chunk):
        part = alpha3s[lo : lo + chunk]
        idx = (part[:, None] * ts[None, :]) % q
        counts[lo : lo + chunk] = g[idx] @ ws
    return alpha3s, counts


def variance_direct(m: FactoredModulus, alpha2: int, w: SmoothWeight) -> float:
    """sum over alpha3 of |S(q, alpha3) - M(q)|^2, computed head on."""
    _check_variance_scale(m, alpha2)
    _, counts = smoothed_counts_all_alpha3(m, alpha2, w)
    center = m_of_q(m, alpha2, w)
    return math.fsum((c - center) ** 2 for c in counts)


def _check_variance_scale(m: FactoredModulus, alpha2: int) -> None:
    if m.q > _VARIANCE_Q_CAP:
        raise ScaleCapError(f"variance routines cap at q = {_VARIANCE_Q_CAP}, got {m.q}")
    if not m.is_odd or math.gcd(2 * alpha2, m.q) != 1:
        raise DomainError("variance needs odd q with gcd(2 alpha2, q) = 1")


def _b0(m: FactoredModulus, w: SmoothWeight) -> float:
    q = m.q
    x3 = support_points(w)
    x3 = x3[np.gcd(np.abs(x3), q) == 1]
    return float(np.sum(weight_values(w, x3)))


def v1_of_q(m: FactoredModulus, alpha2: int, w: SmoothWeight) -> float:
    """Real-character part of the variance, via Jacobi symbols directly."""
    _check_variance_scale(m, alpha2)
    q = m.q
    n = int(math.floor(w.n + 1e-12))
    c12 = pair_residue_counts(m, alpha2, n)
    b0 = _b0(m, w)
    rad = m.radical
    total = 0.0
    for q1 in range(2, rad + 1):
        if rad % q1:
            continue
        q2 = rad // q1
        inner = 0
        for t in np.nonzero(c12)[0]:
            t = int(t)
            if math.gcd(t, q2) != 1:
                continue
            inner += int(c12[t]) * jacobi(t, q1)
        total += float(inner) ** 2 * b0 * b0
    return total / m.totient


def v2_of_q(m: FactoredModulus, alpha2: int, w: SmoothWeight) -> float:
    """Complex-character part of the variance, via the full character group."""
    _check_variance_scale(m, alpha2)
    n = int(math.floor(w.n + 1e-12))
    group = CharacterGroup(m)
    a = group.weighted_sums(pair_residue_counts(m, alpha2, n).astype(np.float64))
    b_all = group.weighted_sums(_x3_residue_weights(m, w))
    sq = group.power_index_map(2)
    mask = sq != group.principal_index()
    a2 = a.real**2 + a.imag**2
    b_sq = b_all[sq]
    b2 = b_sq.real**2 + b_sq.imag**2
    return float(np.sum(a2[mask] * b2[mask])) / m.totient


@dataclass(frozen=True)
class VarianceReport:
    q: int
    alpha2: int
    n: int
    delta: float
    v_direct: float
    v1: float
    v2: float

    @property
    def residual(self) -> float:
        return self.v_direct - self.v1 - self.v2

    @property
    def relative_residual(self) -> float:
        return abs(self.residual) / max(1.0, self.v_direct)


def variance_report(m: FactoredModulus, alpha2: int, w: SmoothWeight) -> VarianceReport:
    return VarianceReport(
        q=m.q,
        alpha2=alpha2,
        n=int(math.floor(w.n + 1e-12)),
        delta=w.delta,
        v_direct=variance_direct(m, alpha2, w),
        v1=v1_of_q(m, alpha2, w),
        v2=v2_of_q(m, alpha2, w),
    )


# ---------------------------------------------------------------------------
# Dyadic character moments.
# ---------------------------------------------------------------------------


def char_moment_q(m: FactoredModulus, alpha2: int, n: int, k: int) -> float:
    """(1/phi(q)) sum over all chi of |A_chi|^(2k).

    By orthogonality this is an exact integer (it counts 2k-tuples of box
    pairs with matching value products), so the result is snapped to the
    nearest integer whenever roundoff leaves it unambiguous.
    """
    if k < 1:
        raise DomainError("char_moment_q needs k >= 1")
    group = CharacterGroup(m)
    a = group.weighted_sums(pair_residue_counts(m, alpha2, n).astype(np.float64))
    a2 = a.real**2 + a.imag**2
    total = float(np.sum(a2**k)) / m.totient
    nearest = round(total)
    if abs(nearest) < 2**52 and abs(total - nearest) <= 1e-9 * max(1.0, abs(total)):
        return float(nearest)
    return total


def f_moment_q(m: FactoredModulus, w: SmoothWeight) -> float:
    """(1/phi(q)) sum over chi with chi^2 != chi0 of |B_chi|^8."""
    group = CharacterGroup(m)
    b_all = group.weighted_sums(_x3_residue_weights(m, w))
    sq = group.power_index_map(2)
    mask = sq != group.principal_index()
    b_sq = b_all[sq[mask]]
    b2 = b_sq.real**2 + b_sq.imag**2
    return float(np.sum(b2**4)) / m.totient


def _dyadic_factored(big_q: int, alpha2: int) -> list[FactoredModulus]:
    if big_q > _MOMENT_Q_CAP:
        raise ScaleCapError(f"dyadic moments cap at Q = {_MOMENT_Q_CAP}, got {big_q}")
    if big_q < 1 or alpha2 < 1:
        raise DomainError("dyadic moments need Q >= 1 and alpha2 >= 1")
    return [factorize(q) for q in admissible_moduli(big_q, alpha2)]


def e_moment(big_q: int, alpha2: int, n: int, k: int) -> float:
    """E_k = sum over q in (Q, 2Q] with gcd(2 alpha2, q) = 1 of char_moment_q."""
    return math.fsum(char_moment_q(m, alpha2, n, k) for m in _dyadic_factored(big_q, alpha2))


def f_moment(big_q: int, alpha2: int, w: SmoothWeight) -> float:
    """F = sum over the same dyadic moduli of f_moment_q."""
    return math.fsum(f_moment_q(m, w) for m in _dyadic_factored(big_q, alpha2))


def v2_dyadic_sum(big_q: int, alpha2: int, w: SmoothWeight) -> float:
    """sum over the dyadic moduli of v2_of_q, the left side of the Holder chain."""
    return math.fsum(v2_of_q(m, alpha2, w) for m in _dyadic_factored(big_q, alpha2))


def holder_bound(e1: float, e2: float, f_value: float) -> float:
    """E1^(1/2) E2^(1/4) F^(1/4)."""
    return e1**0.5 * e2**0.25 * f_value**0.25


# ---------------------------------------------------------------------------
# Integer decomposition bounding E2 through pair-value products.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GDecomposition:
    """Diagonal and off-diagonal pieces of the product-congruence count.

    g0 counts quadruples of box pairs whose value products agree exactly,
    times the number of admissible moduli; g1 bounds the rest through
    tau(|difference|), since a modulus in (Q, 2Q] dividing a nonzero
    difference is in particular one of its divisors.  E2 <= g0 + g1.
    """

    big_q: int
    alpha2: int
    n: int
    g0: int
    g1: int

    @property
    def total(self) -> int:
        return self.g0 + self.g1


def g_decomposition(big_q: int, alpha2: int, n: int) -> GDecomposition:
    """Split the 8-tuple product-equality count into g0 + g1.

    Works with value multiplicities, never enumerating tuples: m[v] counts
    box pairs with x^2 + alpha2 y^2 = v, the product histogram comes from
    one outer product, and the tau-weighted off-diagonal sum contracts an
    autocorrelation (FFT, rounded back to the exact integer; all entries
    stay far below 2^53) against a divisor-count sieve.
    """
    if n > _G_N_CAP or big_q > _G_Q_CAP:
        raise ScaleCapError(
            f"g_decomposition caps at n = {_G_N_CAP}, Q = {_G_Q_CAP}, got n={n}, Q={big_q}"
        )
    if n < 1 or big_q < 1 or alpha2 < 1:
        raise DomainError("g_decomposition needs n, Q, alpha2 >= 1")
    x = np.arange(-n, n + 1, dtype=np.int64)
    vals = (x[:, None] ** 2 + alpha2 * x[None, :] ** 2).ravel()
    pair_counts = np.bincount(vals)
    vv = np.nonzero(pair_counts)[0]
    cc = pair_counts[vv]
    prod_hist = np.zeros(int(vv[-1]) ** 2 + 1, dtype=np.int64)
    np.add.at(prod_hist, np.outer(vv, vv).ravel(), np.outer(cc, cc).ravel())
    n_moduli = len(admissible_moduli(big_q, alpha2))
    g0 = n_moduli * int(np.sum(prod_hist * prod_hist))
    # corr[d] = sum_p prod_hist[p] prod_hist[p + d]
    full = fftconvolve(prod_hist.astype(np.float64), prod_hist[::-1].astype(np.float64))
    corr = np.rint(full[len(prod_hist) :]).astype(np.int64)
    d_max = len(corr)
    taus = tau_sieve(d_max) if d_max >= 1 else np.zeros(1, dtype=np.int64)
    g1 = 2 * int(np.dot(corr, taus[1 : d_max + 1]))
    return GDecomposition(big_q=big_q, alpha2=alpha2, n=n, g0=g0, g1=g1)


@dataclass(frozen=True)
class MomentReport:
    """Dyadic moment values and the Holder comparison at one (Q, alpha2)."""

    big_q: int
    alpha2: int
    n: int
    delta: float
    e1: float
    e2: float
    f_value: float
    v2_sum: float
    g0: int | None = None
    g1: int | None = None

    @property
    def holder_rhs(self) -> float:
        return holder_bound(self.e1, self.e2, self.f_value)

    @property
    def holder_ok(self) -> bool:
        return self.v2_sum <= self.holder_rhs * (1.0 + 1e-9)


def moment_report(
    big_q: int, alpha2: int, n: int, delta: float, with_g: bool = False
) -> MomentReport:
    w = SmoothWeight(n=float(n), delta=delta)
    g0 = g1 = None
    if with_g:
        dec = g_decomposition(big_q, alpha2, n)
        g0, g1 = dec.g0, dec.g1
    return MomentReport(
        big_q=big_q,
        alpha2=alpha2,
        n=n,
        delta=delta,
        e1=e_moment(big_q, alpha2, n, 1),
        e2=e_moment(big_q, alpha2, n, 2),
        f_value=f_moment(big_q, alpha2, w),
        v2_sum=v2_dyadic_sum(big_q, alpha2, w),
        g0=g0,
        g1=g1,
    )
