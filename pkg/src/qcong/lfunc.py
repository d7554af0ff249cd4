"""Dirichlet L-functions on vertical lines, and the smoothed contour identity.

L(s, chi) is evaluated through Hurwitz zeta values,

    L(s, chi) = q^(-s) sum_{a=1}^{q} chi(a) zeta(s, a/q),

with zeta(s, x) computed by Euler-Maclaurin: the series is summed
directly for the first M = ceil(10 + 2 |Im s|) terms and the rest is the
standard tail with eight Bernoulli corrections.  A remainder bound in
the classical (s)_{2R+1} B_{2R+2} form accompanies every evaluation and
the target absolute accuracy is 1e-8.

The contour identity connects a smoothed character sum to a vertical
line integral of the Mellin transform times L:

    sum_{n > 0} Phi(n) chi(n)
        = (1/2 pi) int_{-T}^{T} Mellin(c + i t) L(c + i t, chi) dt + tail,

with c = 1 + 1/log(2N).  The truncation tail is controlled by |L| <=
zeta(c) on the line and the window's Mellin decay bounds; the check
recomputes both sides and requires the observed residual to sit below
that bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import zeta as riemann_zeta

from .arith import factorize
from .characters import DirichletCharacter, enumerate_characters
from .errors import DomainError, ScaleCapError, ToleranceError
from .smoothing import SmoothWeight, eval_weight, mellin_grid, mellin_tail_integral

_L_Q_CAP = 500
_L_IM_CAP = 100.0
_CONTOUR_Q_CAP = 100
_CONTOUR_T_CAP = 200.0
_EIGHTH_Q_CAP = 16
_EIGHTH_T_CAP = 10.0
_L_TARGET = 1e-8
_CONTOUR_STEP = 0.02
_EIGHTH_STEP = 0.05

_EM_ORDER = 8
# B_2, B_4, ..., B_18; the last drives the remainder bound only.
_BERNOULLI = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
]
_EM_COEFF = [float(b) / math.factorial(2 * (r + 1)) for r, b in enumerate(_BERNOULLI)]


def _em_shift(t_abs: float) -> int:
    return int(math.ceil(10.0 + 2.0 * t_abs))


def hurwitz_zeta(s: complex, x: float) -> complex:
    """zeta(s, x) = sum_{k >= 0} (x + k)^(-s) by Euler-Maclaurin, s != 1."""
    s = complex(s)
    if x <= 0.0:
        raise DomainError("hurwitz_zeta needs x > 0")
    if s == 1.0:
        raise DomainError("hurwitz_zeta has a pole at s = 1")
    m = _em_shift(abs(s.imag))
    acc = sum((x + k) ** (-s) for k in range(m))
    xm = x + m
    acc += xm ** (1.0 - s) / (s - 1.0) + 0.5 * xm ** (-s)
    poch = s
    for r in range(1, _EM_ORDER + 1):
        acc += _EM_COEFF[r - 1] * poch * xm ** (-s - 2 * r + 1)
        poch = poch * (s + 2 * r - 1) * (s + 2 * r)
    return acc


def hurwitz_remainder_bound(s: complex, x: float) -> float:
    """Classical bound for the Euler-Maclaurin remainder after _EM_ORDER terms."""
    s = complex(s)
    m = _em_shift(abs(s.imag))
    xm = x + m
    k = 2 * _EM_ORDER + 1
    poch = 1.0
    for i in range(k):
        poch *= abs(s + i)
    sigma = s.real
    scale = (sigma + k + abs(s)) / (sigma + k)
    return abs(_EM_COEFF[_EM_ORDER]) * poch * xm ** (-sigma - k) * scale


@dataclass(frozen=True)
class LEvaluation:
    s: complex
    chi: DirichletCharacter
    value: complex
    abs_error_bound: float


def _check_l_domain(chi: DirichletCharacter, s: complex) -> None:
    if chi.is_principal:
        raise DomainError("l_eval needs a nonprincipal character")
    if s.real < 0.5:
        raise DomainError(f"l_eval needs Re s >= 1/2, got {s}")
    if chi.q > _L_Q_CAP:
        raise ScaleCapError(f"l_eval caps at q = {_L_Q_CAP}, got {chi.q}")
    if abs(s.imag) > _L_IM_CAP:
        raise ScaleCapError(f"l_eval caps at |Im s| = {_L_IM_CAP}, got {s.imag}")


def l_eval(chi: DirichletCharacter, s: complex) -> LEvaluation:
    """L(s, chi) through Hurwitz zeta, with an absolute error bound.

    The bound aggregates the per-term Euler-Maclaurin remainders scaled
    by q^(-sigma); exceeding the 1e-8 target raises ToleranceError.
    """
    s = complex(s)
    _check_l_domain(chi, s)
    q = chi.q
    total = 0j
    err = 0.0
    for a in range(1, q + 1):
        v = chi.eval(a)
        if v == 0j:
            continue
        total += v * hurwitz_zeta(s, a / q)
        err += hurwitz_remainder_bound(s, a / q)
    scale = q ** (-s)
    err *= abs(scale)
    if err > _L_TARGET:
        raise ToleranceError(f"l_eval error bound {err:.3e} exceeds {_L_TARGET}")
    return LEvaluation(s=s, chi=chi, value=scale * total, abs_error_bound=err)


# ---------------------------------------------------------------------------
# Vectorized line evaluation: zeta(sigma + i t, x) over grids of t and x.
# ---------------------------------------------------------------------------


def _hurwitz_line(sigma: float, ts: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Array zeta(sigma + i ts[i], xs[j]), Euler-Maclaurin shared across the grid."""
    ts = np.asarray(ts, dtype=np.float64)
    xs = np.asarray(xs, dtype=np.float64)
    m = _em_shift(float(np.max(np.abs(ts))) if ts.size else 0.0)
    s = sigma + 1j * ts
    out = np.empty((len(ts), len(xs)), dtype=np.complex128)
    logs_direct = np.log(xs[None, :] + np.arange(m)[:, None])  # (m, nx)
    lxm = np.log(xs + m)
    xm = xs + m
    chunk = max(1, 4_000_000 // max(1, m * len(xs)))
    for lo in range(0, len(ts), chunk):
        sc = s[lo : lo + chunk][:, None]
        direct = np.exp(-sc[:, :, None] * logs_direct.T[None, :, :]).sum(axis=2)
        e = np.exp(-sc * lxm[None, :])  # xm^(-s)
        tail = e * xm[None, :] / (sc - 1.0) + 0.5 * e
        poch = sc.copy()
        shift = np.ones_like(xm)
        for r in range(1, _EM_ORDER + 1):
            shift = shift * xm ** (-2.0 if r > 1 else -1.0)
            tail = tail + _EM_COEFF[r - 1] * poch * e * shift[None, :]
            poch = poch * (sc + 2 * r - 1) * (sc + 2 * r)
        out[lo : lo + chunk] = direct + tail
    return out


def l_values_on_line(chi: DirichletCharacter, sigma: float, ts: np.ndarray) -> np.ndarray:
    """L(sigma + i t, chi) over a t grid, one Hurwitz pass per modulus."""
    if chi.is_principal:
        raise DomainError("l_values_on_line needs a nonprincipal character")
    q = chi.q
    group = chi.group
    coprime = group._coprime
    z = _hurwitz_line(sigma, ts, coprime / q)
    chivals = chi.value_row()[coprime]
    s = sigma + 1j * np.asarray(ts, dtype=np.float64)
    return np.exp(-s * math.log(q)) * (z @ chivals)


def _simpson_weights(n_points: int) -> np.ndarray:
    w = np.ones(n_points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w


def _simpson_grid(t_max: float, step: float) -> tuple[np.ndarray, np.ndarray]:
    n = int(math.ceil(2.0 * t_max / step))
    if n % 2:
        n += 1
    ts = np.linspace(-t_max, t_max, n + 1)
    h = 2.0 * t_max / n
    return ts, _simpson_weights(n + 1) * (h / 3.0)


def contour_tail_bound(w: SmoothWeight, t_line: float) -> float:
    """zeta(c)/(2 pi) times the integrated Mellin decay beyond |t| = T."""
    c = 1.0 + 1.0 / math.log(2.0 * w.n)
    return float(riemann_zeta(c)) / (2.0 * math.pi) * mellin_tail_integral(w, c, t_line)


def contour_identity_check(chi: DirichletCharacter, w: SmoothWeight, t_line: float) -> float:
    """Residual of the truncated contour identity; must sit below the tail bound.

    Returns |sum_n Phi(n) chi(n) - (1/2 pi) int_{-T}^{T} Mellin * L|.
    Raises ToleranceError if the residual exceeds the tail bound.  A
    window supported entirely below 1 short-circuits to zero: the sum is
    empty and the identity holds with nothing to integrate.
    """
    if chi.is_principal:
        raise DomainError("contour_identity_check needs a nonprincipal character")
    if chi.q > _CONTOUR_Q_CAP:
        raise ScaleCapError(f"contour check caps at q = {_CONTOUR_Q_CAP}, got {chi.q}")
    if t_line <= 0.0:
        raise DomainError("t_line must be positive")
    if t_line > _CONTOUR_T_CAP:
        raise ScaleCapError(f"contour check caps at T = {_CONTOUR_T_CAP}, got {t_line}")
    if w.support <= 1.0:
        return 0.0
    c = 1.0 + 1.0 / math.log(2.0 * w.n)
    series = sum(
        eval_weight(w, n) * chi.eval(n) for n in range(1, w.lattice_support + 1)
    )
    ts, wts = _simpson_grid(t_line, _CONTOUR_STEP)
    vals = mellin_grid(w, c, ts) * l_values_on_line(chi, c, ts)
    integral = complex(np.dot(wts, vals)) / (2.0 * math.pi)
    residual = abs(series - integral)
    bound = contour_tail_bound(w, t_line)
    if residual > bound:
        raise ToleranceError(
            f"contour residual {residual:.3e} exceeds tail bound {bound:.3e} "
            f"(q={chi.q}, n={w.n}, delta={w.delta}, T={t_line})"
        )
    return residual


def eighth_moment(big_q: int, t_max: float) -> float:
    """sum_{q <= Q} sum_{chi != chi0} int_{-T}^{T} |L(1/2 + i t, chi)|^8 dt.

    Composite Simpson with step 0.05.  Principal characters are excluded:
    their L on the half line inherits the zeta pole structure and the
    downstream use only ever needs chi^2 != chi0.
    """
    if big_q > _EIGHTH_Q_CAP:
        raise ScaleCapError(f"eighth moment caps at Q = {_EIGHTH_Q_CAP}, got {big_q}")
    if t_max > _EIGHTH_T_CAP:
        raise ScaleCapError(f"eighth moment caps at T = {_EIGHTH_T_CAP}, got {t_max}")
    if big_q < 1 or t_max <= 0.0:
        raise DomainError("eighth_moment needs Q >= 1 and T > 0")
    ts, wts = _simpson_grid(t_max, _EIGHTH_STEP)
    total = 0.0
    for q in range(3, big_q + 1):
        m = factorize(q)
        chars = enumerate_characters(m)
        group = chars[0].group
        coprime = group._coprime
        z = _hurwitz_line(0.5, ts, coprime / q)
        scale = np.exp(-(0.5 + 1j * ts) * math.log(q))
        for chi in chars:
            if chi.is_principal:
                continue
            lv = scale * (z @ chi.value_row()[coprime])
            p2 = lv.real**2 + lv.imag**2
            total += float(np.dot(wts, p2**4))
    return total
