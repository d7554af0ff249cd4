"""Smooth cutoff window and its Mellin transform.

The window Phi is 1 on [-(N - Delta), N - Delta], 0 outside
(-(N + Delta), N + Delta), and crosses the band through the fixed
transition profile

    psi(u) = 1 / (1 + exp(1/u - 1/(1 - u))),  0 < u < 1,

evaluated at u = (N + Delta - |x|) / (2 Delta).  The profile is smooth,
increasing, and satisfies psi(u) + psi(1 - u) = 1, which makes the
integral of Phi exactly 2N and pins Phi(N) = 1/2.  All derivatives
vanish at both band edges, so the Mellin transform of Phi decays faster
than any fixed power along vertical lines; the constants recorded below
turn that into explicit bounds.

The derivative constants are frozen numbers for this one profile,
measured once on a fine grid and rounded upward a little so they remain
valid upper bounds:

    sup |psi'|  = 2.0        (exact: attained at u = 1/2)
    sup |psi''| <= 9.85
    int |psi'|   = 1.0       (psi is monotone from 0 to 1)
    int |psi''|  = 4.0       (psi' rises to 2 and falls back)
    int |psi'''| <= 39.37

Scaling to the band of half-width 2 Delta gives
int |Phi^(j)| <= I_j = (2 Delta)^(1-j) * L1_j over each transition, and
the j-fold partial integration bound

    |Phi^(s)| <= (N + Delta)^(sigma + j - 1) * I_j / |t|^j,  s = sigma + i t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, ToleranceError

PROFILE_DERIV_SUP = {1: 2.0, 2: 9.85}
PROFILE_DERIV_L1 = {1: 1.0, 2: 4.0, 3: 39.37}

# exp argument beyond which the profile saturates in double precision
_EXP_CLAMP = 700.0


def transition_profile(u: float) -> float:
    """The fixed sigmoid psi on [0, 1], extended constantly outside."""
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    g = 1.0 / u - 1.0 / (1.0 - u)
    if g > _EXP_CLAMP:
        return 0.0
    if g < -_EXP_CLAMP:
        return 1.0
    return 1.0 / (1.0 + math.exp(g))


def transition_profile_d1(u: float) -> float:
    """First derivative of the profile; zero outside (0, 1)."""
    if u <= 0.0 or u >= 1.0:
        return 0.0
    g = 1.0 / u - 1.0 / (1.0 - u)
    if abs(g) > _EXP_CLAMP:
        return 0.0
    s = 1.0 / (1.0 + math.exp(g))
    h = 1.0 / u**2 + 1.0 / (1.0 - u) ** 2
    return s * (1.0 - s) * h


def transition_profile_d2(u: float) -> float:
    """Second derivative of the profile; zero outside (0, 1)."""
    if u <= 0.0 or u >= 1.0:
        return 0.0
    g = 1.0 / u - 1.0 / (1.0 - u)
    if abs(g) > _EXP_CLAMP:
        return 0.0
    s = 1.0 / (1.0 + math.exp(g))
    h = 1.0 / u**2 + 1.0 / (1.0 - u) ** 2
    hp = -2.0 / u**3 + 2.0 / (1.0 - u) ** 3
    return s * (1.0 - s) * ((1.0 - 2.0 * s) * h * h + hp)


def _profile_array(u: np.ndarray) -> np.ndarray:
    out = np.where(u >= 1.0, 1.0, 0.0)
    mid = (u > 0.0) & (u < 1.0)
    um = u[mid]
    g = np.clip(1.0 / um - 1.0 / (1.0 - um), -_EXP_CLAMP, _EXP_CLAMP)
    out[mid] = 1.0 / (1.0 + np.exp(g))
    return out


@dataclass(frozen=True)
class SmoothWeight:
    """Window parameters: center radius n and transition half-width delta."""

    n: float
    delta: float

    def __post_init__(self):
        if not (0.0 < self.delta <= self.n):
            raise DomainError(
                f"weight needs 0 < delta <= n, got n={self.n}, delta={self.delta}"
            )

    @property
    def plateau(self) -> float:
        return self.n - self.delta

    @property
    def support(self) -> float:
        return self.n + self.delta

    @property
    def lattice_support(self) -> int:
        """Largest integer x with Phi(x) possibly nonzero."""
        return int(math.floor(self.support))


def eval_weight(w: SmoothWeight, x: float) -> float:
    """Phi(x) for a single point."""
    a = abs(x)
    if a <= w.plateau:
        return 1.0
    if a >= w.support:
        return 0.0
    return transition_profile((w.support - a) / (2.0 * w.delta))


def weight_values(w: SmoothWeight, xs: np.ndarray) -> np.ndarray:
    """Phi over an array of points."""
    a = np.abs(np.asarray(xs, dtype=np.float64))
    u = (w.support - a) / (2.0 * w.delta)
    out = _profile_array(u)
    out[a <= w.plateau] = 1.0
    return out


def support_points(w: SmoothWeight) -> np.ndarray:
    """All integers x with |x| <= floor(n + delta), ascending."""
    r = w.lattice_support
    return np.arange(-r, r + 1, dtype=np.int64)


def weight_integral(w: SmoothWeight) -> float:
    """int Phi dx = 2n exactly, by the symmetry psi(u) + psi(1-u) = 1."""
    return 2.0 * w.n


def deriv_l1_bound(w: SmoothWeight, j: int) -> float:
    """I_j: bound for the total variation of Phi^(j-1) over one transition."""
    if j not in PROFILE_DERIV_L1:
        raise DomainError(f"derivative order must be in {sorted(PROFILE_DERIV_L1)}")
    return (2.0 * w.delta) ** (1 - j) * PROFILE_DERIV_L1[j]


# ---------------------------------------------------------------------------
# Mellin transform: plateau in closed form, transition band by quadrature.
# ---------------------------------------------------------------------------


def mellin_transform(w: SmoothWeight, s: complex) -> complex:
    """Mellin transform int_0^inf Phi(x) x^(s-1) dx, for Re s > 0.

    The plateau contributes (n - delta)^s / s exactly; the band is
    integrated adaptively.  When the plateau is empty the substitution
    x = y^2 removes the x^(s-1) endpoint singularity first.
    """
    s = complex(s)
    if s.real <= 0.0:
        raise DomainError(f"mellin_transform needs Re s > 0, got {s}")
    lo, hi = w.plateau, w.support
    acc = lo**s / s if lo > 0.0 else 0.0j
    if lo > 0.0:
        def f(x: float) -> complex:
            return eval_weight(w, x) * x ** (s - 1.0)
        a, b = lo, hi
    else:
        def f(y: float) -> complex:
            return 2.0 * eval_weight(w, y * y) * y ** (2.0 * s - 1.0)
        a, b = 0.0, math.sqrt(hi)
    re, re_err = quad(lambda x: f(x).real, a, b, limit=400, epsabs=1e-13, epsrel=1e-12)
    im, im_err = quad(lambda x: f(x).imag, a, b, limit=400, epsabs=1e-13, epsrel=1e-12)
    if max(re_err, im_err) > 1e-6 * max(1.0, abs(complex(re, im))):
        raise ToleranceError(f"mellin band quadrature failed at s = {s}")
    return acc + complex(re, im)


def mellin_grid(w: SmoothWeight, sigma: float, ts: np.ndarray) -> np.ndarray:
    """Mellin transform at sigma + i t for a whole grid of t, vectorized.

    Shares one Gauss-Legendre discretization of the band across the grid;
    panel count scales with the largest phase swing t * log(hi/lo) so the
    oscillation is always resolved.
    """
    if sigma <= 0.0:
        raise DomainError(f"mellin_grid needs sigma > 0, got {sigma}")
    ts = np.asarray(ts, dtype=np.float64)
    lo, hi = w.plateau, w.support
    tmax = float(np.max(np.abs(ts))) if ts.size else 0.0
    if lo > 0.0:
        swing = tmax * math.log(hi / lo)
        panels = max(12, int(math.ceil(swing / 3.0)) + 4)
        nodes, wts = np.polynomial.legendre.leggauss(10)
        edges = np.linspace(lo, hi, panels + 1)
        mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
        half = 0.5 * np.diff(edges)[:, None]
        xs = (mid + half * nodes[None, :]).ravel()
        ws = (half * wts[None, :]).ravel()
        base = weight_values(w, xs) * ws * xs ** (sigma - 1.0)
        phases = np.exp(1j * np.outer(ts, np.log(xs)))
        band = phases @ base
        return lo ** (sigma + 1j * ts) / (sigma + 1j * ts) + band
    # empty plateau: integrate in y with x = y^2, which flattens the
    # x^(sigma - 1) corner for every sigma >= 1/2.  The phase
    # exp(2 i t log y) has constant swing per geometric panel, so the
    # low region is geometric; the ramp near b needs linear refinement.
    b = math.sqrt(hi)
    ratio = math.exp(min(0.5, 1.5 / max(tmax, 1.0)))
    low = [0.5 * b]
    while low[-1] > 1e-10 * b:
        low.append(low[-1] / ratio)
    n_hi = max(32, int(math.ceil(2.0 * tmax * math.log(2.0) / 3.0)) + 4)
    edges = np.concatenate(
        ([0.0], low[::-1], np.linspace(0.5 * b, b, n_hi + 1)[1:])
    )
    nodes, wts = np.polynomial.legendre.leggauss(10)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * np.diff(edges)[:, None]
    ys = (mid + half * nodes[None, :]).ravel()
    ws = (half * wts[None, :]).ravel()
    good = ys > 0.0
    ys, ws = ys[good], ws[good]
    base = 2.0 * weight_values(w, ys * ys) * ws * ys ** (2.0 * sigma - 1.0)
    phases = np.exp(2j * np.outer(ts, np.log(ys)))
    return phases @ base


@dataclass(frozen=True)
class MellinDecayReport:
    """Observed transform size against the partial-integration bound."""

    s: complex
    modulus: float
    bound: float
    order: int

    @property
    def ratio(self) -> float:
        return self.modulus / self.bound

    @property
    def ok(self) -> bool:
        return self.modulus <= self.bound


def mellin_decay_check(w: SmoothWeight, sigma: float, t: float, j: int) -> MellinDecayReport:
    """Compare |Mellin(sigma + i t)| to (n + delta)^(sigma + j - 1) I_j / |t|^j."""
    if t == 0.0:
        raise DomainError("decay check needs t != 0")
    value = mellin_transform(w, complex(sigma, t))
    bound = w.support ** (sigma + j - 1) * deriv_l1_bound(w, j) / abs(t) ** j
    return MellinDecayReport(s=complex(sigma, t), modulus=abs(value), bound=bound, order=j)


def mellin_tail_integral(w: SmoothWeight, sigma: float, big_t: float) -> float:
    """Bound for int_{|t| > T} |Mellin(sigma + i t)| dt.

    Integrates the order-j decay bound and takes the better of j = 2, 3.
    """
    if big_t <= 0.0:
        raise DomainError("tail integral needs T > 0")
    best = math.inf
    for j in (2, 3):
        piece = (
            2.0
            * w.support ** (sigma + j - 1)
            * deriv_l1_bound(w, j)
            * big_t ** (1 - j)
            / (j - 1)
        )
        best = min(best, piece)
    return best
