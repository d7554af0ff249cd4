import math

import numpy as np
import pytest

from qcong.arith import factorize
from qcong.characters import enumerate_characters, jacobi_modulus, quadratic_characters
from qcong.errors import DomainError, ScaleCapError
from qcong.lfunc import (
    contour_identity_check,
    contour_tail_bound,
    eighth_moment,
    hurwitz_remainder_bound,
    hurwitz_zeta,
    l_eval,
    l_values_on_line,
)
from qcong.smoothing import SmoothWeight

ZETA2 = math.pi**2 / 6.0
ZETA3 = 1.2020569031595942854
ZETA4 = math.pi**4 / 90.0


def test_hurwitz_at_one_is_zeta():
    assert abs(hurwitz_zeta(2.0 + 0j, 1.0) - ZETA2) < 1e-12
    assert abs(hurwitz_zeta(3.0 + 0j, 1.0) - ZETA3) < 1e-12
    assert abs(hurwitz_zeta(4.0 + 0j, 1.0) - ZETA4) < 1e-12


def test_hurwitz_half_shift_identity():
    # zeta(s, 1/2) = (2^s - 1) zeta(s)
    for s in (2.0 + 0j, 3.5 + 0j, 2.0 + 5.0j, 0.8 + 2.0j):
        lhs = hurwitz_zeta(s, 0.5)
        rhs = (2.0**s - 1.0) * hurwitz_zeta(s, 1.0)
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))


def test_hurwitz_recurrence():
    # zeta(s, a) = a^(-s) + zeta(s, a + 1)
    for s in (1.5 + 0j, 2.0 + 10.0j, 0.5 + 3.0j):
        for a in (0.25, 0.5, 1.0, 2.75):
            lhs = hurwitz_zeta(s, a)
            rhs = a ** (-s) + hurwitz_zeta(s, a + 1.0)
            assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))


def test_hurwitz_against_direct_sum():
    s = 2.5 + 3.0j
    for a in (0.3, 0.7, 1.0):
        direct = sum((n + a) ** (-s) for n in range(200000))
        # tail of the direct sum, first-order Euler-Maclaurin
        x = 200000 + a
        direct += x ** (1 - s) / (s - 1) - 0.5 * x ** (-s)
        assert abs(hurwitz_zeta(s, a) - direct) < 1e-9


def test_hurwitz_first_zeta_zero():
    z = hurwitz_zeta(complex(0.5, 14.134725141734693), 1.0)
    assert abs(z) < 1e-10


def test_hurwitz_remainder_bound_decays():
    b1 = hurwitz_remainder_bound(2.0 + 0j, 10.0)
    b2 = hurwitz_remainder_bound(2.0 + 0j, 20.0)
    assert 0 < b2 < b1


def test_l_eval_against_direct_series():
    for q in (5, 7, 12, 29, 50):
        for chi in enumerate_characters(factorize(q)):
            if chi.is_principal:
                continue
            direct = sum(chi.eval(n) / n**2 for n in range(1, 100000))
            got = l_eval(chi, 2.0 + 0j)
            assert abs(got.value - direct) < 1e-8
            assert got.abs_error_bound < 1e-8


def test_l_eval_known_value():
    # L(2, chi_-4) is Catalan's constant
    catalan = 0.9159655941772190151
    chi = next(c for c in enumerate_characters(factorize(4)) if not c.is_principal)
    assert abs(l_eval(chi, 2.0 + 0j).value - catalan) < 1e-12
    # L(1/2) values for the quadratic characters mod 3 and 4
    chi3 = quadratic_characters(factorize(3))[1]
    assert abs(l_eval(chi3, 0.5 + 0j).value - 0.48086755769682862) < 1e-10


def test_l_eval_induced_euler_factor():
    # the mod 15 character induced by jacobi(., 3) differs from the
    # primitive one by the Euler factor at 5
    chi3 = quadratic_characters(factorize(3))[1]
    chi15 = next(c for c in quadratic_characters(factorize(15)) if jacobi_modulus(c) == 3)
    for s in (2.0 + 0j, 1.5 + 4.0j, 0.75 + 1.0j):
        lhs = l_eval(chi15, s).value
        rhs = l_eval(chi3, s).value * (1.0 - complex(chi3.eval(5)) * 5.0 ** (-s))
        assert abs(lhs - rhs) < 1e-8


def test_l_values_on_line_match_scalar():
    chi = next(c for c in enumerate_characters(factorize(11)) if not c.is_principal)
    ts = np.array([-8.0, -1.0, 0.0, 3.5, 17.0])
    vals = l_values_on_line(chi, 0.5, ts)
    for t, v in zip(ts, vals):
        assert abs(v - l_eval(chi, complex(0.5, t)).value) < 1e-9


def test_l_eval_domain_checks():
    chi = next(c for c in enumerate_characters(factorize(7)) if not c.is_principal)
    principal = next(c for c in enumerate_characters(factorize(7)) if c.is_principal)
    with pytest.raises(DomainError):
        l_eval(principal, 2.0 + 0j)
    with pytest.raises(DomainError):
        l_eval(chi, 0.25 + 0j)
    with pytest.raises(ScaleCapError):
        l_eval(chi, complex(2.0, 200.0))
    big = next(c for c in enumerate_characters(factorize(503)) if not c.is_principal)
    with pytest.raises(ScaleCapError):
        l_eval(big, 2.0 + 0j)


def test_contour_identity_small():
    w = SmoothWeight(n=8.0, delta=4.0)
    for chi in enumerate_characters(factorize(5)):
        if chi.is_principal:
            continue
        resid = contour_identity_check(chi, w, 60.0)
        assert resid <= contour_tail_bound(w, 60.0)


def test_contour_residual_shrinks_with_t():
    chi = next(c for c in enumerate_characters(factorize(9)) if not c.is_principal)
    w = SmoothWeight(n=6.0, delta=3.0)
    r1 = contour_identity_check(chi, w, 50.0)
    r2 = contour_identity_check(chi, w, 100.0)
    assert r2 < r1


def test_contour_tiny_support_short_circuit():
    chi = next(c for c in enumerate_characters(factorize(7)) if not c.is_principal)
    w = SmoothWeight(n=0.5, delta=0.4)
    assert contour_identity_check(chi, w, 40.0) == 0.0


def test_contour_caps():
    chi = next(c for c in enumerate_characters(factorize(101)) if not c.is_principal)
    w = SmoothWeight(n=8.0, delta=4.0)
    with pytest.raises(ScaleCapError):
        contour_identity_check(chi, w, 50.0)
    chi = next(c for c in enumerate_characters(factorize(7)) if not c.is_principal)
    with pytest.raises(ScaleCapError):
        contour_identity_check(chi, w, 500.0)


def test_eighth_moment_assembly():
    # reassemble the symmetric line integral with an independent Simpson rule
    big_q, t_max = 5, 2.0
    step = 0.05
    n_pts = 2 * int(round(t_max / step))
    if n_pts % 2:
        n_pts += 1
    ts = np.linspace(-t_max, t_max, n_pts + 1)
    wts = np.ones(n_pts + 1)
    wts[1:-1:2] = 4.0
    wts[2:-1:2] = 2.0
    wts *= (ts[1] - ts[0]) / 3.0
    expect = 0.0
    for q in range(3, big_q + 1):
        for chi in enumerate_characters(factorize(q)):
            if chi.is_principal:
                continue
            vals = np.abs(l_values_on_line(chi, 0.5, ts)) ** 8
            expect += float(np.dot(wts, vals))
    assert eighth_moment(big_q, t_max) == pytest.approx(expect, rel=1e-9)


def test_eighth_moment_caps():
    with pytest.raises(ScaleCapError):
        eighth_moment(20, 2.0)
    with pytest.raises(ScaleCapError):
        eighth_moment(5, 30.0)


def test_eighth_moment_monotone_in_range():
    a = eighth_moment(4, 1.0)
    b = eighth_moment(4, 2.0)
    c = eighth_moment(6, 2.0)
    assert 0.0 < a < b < c
