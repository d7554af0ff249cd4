import math
import random
from fractions import Fraction

import numpy as np
import pytest

from qcong.arith import build_sqrt_table, factorize
from qcong.counting import (
    BoxCountReport,
    CongruenceInstance,
    box_count_report,
    box_profile,
    count_box_bruteforce,
    count_box_fast,
    count_box_smoothed,
    local_density,
    main_term,
    min_root_array,
    minimal_height,
    pair_residue_counts,
    representation_count,
    representation_counts_upto,
    root_weighted_counts,
)
from qcong.errors import DomainError, ScaleCapError
from qcong.smoothing import SmoothWeight, eval_weight


def _instances(rng, how_many, q_hi=120):
    out = []
    while len(out) < how_many:
        q = rng.randrange(3, q_hi, 2)
        a2 = rng.randrange(1, 8)
        if math.gcd(a2, q) != 1:
            continue
        a3 = rng.randrange(1, q + 1)
        if math.gcd(a3, q) != 1:
            continue
        out.append(CongruenceInstance(factorize(q), a2, a3))
    return out


def test_instance_validation():
    with pytest.raises(DomainError):
        CongruenceInstance(factorize(10), 1, 1)  # even modulus
    with pytest.raises(DomainError):
        CongruenceInstance(factorize(9), 3, 1)  # alpha2 shares a factor
    with pytest.raises(DomainError):
        CongruenceInstance(factorize(9), 1, 3)  # alpha3 shares a factor
    with pytest.raises(DomainError):
        CongruenceInstance(factorize(9), 1, 10)  # alpha3 off range


def test_local_density_value():
    assert local_density(factorize(15), 1) == Fraction(128, 225)
    assert local_density(factorize(1), 1) == 1
    assert local_density(factorize(3), 1) == Fraction(8, 9)
    assert local_density(factorize(3), 2) == Fraction(4, 9)


def test_local_density_counts_solutions():
    # q^2 C_q equals the number of solutions mod q with unit x3,
    # independent of the (coprime) choice of alpha3
    rng = random.Random(909)
    for inst in _instances(rng, 12, q_hi=60):
        q = inst.m.q
        cnt = 0
        for x1 in range(q):
            for x2 in range(q):
                v = (x1 * x1 + inst.alpha2 * x2 * x2) % q
                for x3 in range(q):
                    if math.gcd(x3, q) == 1 and (v + inst.alpha3 * x3 * x3) % q == 0:
                        cnt += 1
        assert Fraction(cnt, q * q) == local_density(inst.m, inst.alpha2)


def test_fast_equals_bruteforce():
    rng = random.Random(424242)
    for inst in _instances(rng, 25):
        for n in (0, 1, 2, rng.randrange(3, 30)):
            assert count_box_fast(inst, n) == count_box_bruteforce(inst, n)


def test_fast_large_boxes():
    # n at, just under, and past the modulus exercises the lattice wraparound
    inst = CongruenceInstance(factorize(105), 2, 11)
    for n in (104, 105, 106, 160):
        assert count_box_fast(inst, n) == count_box_bruteforce(inst, n)


def test_bruteforce_cap():
    inst = CongruenceInstance(factorize(3), 1, 1)
    with pytest.raises(ScaleCapError):
        count_box_bruteforce(inst, 10**4)


def test_box_profile_direct():
    rng = random.Random(7)
    for inst in _instances(rng, 8, q_hi=80):
        q = inst.m.q
        n = rng.randrange(1, 40)
        tbl = build_sqrt_table(inst.m)
        g = box_profile(inst.m, inst.alpha2, n, tbl)
        direct = np.zeros(q, dtype=np.int64)
        for x1 in range(-n, n + 1):
            for x2 in range(-n, n + 1):
                direct[(-(x1 * x1 + inst.alpha2 * x2 * x2)) % q] += 1
        assert np.array_equal(g, direct)
        assert int(g.sum()) == (2 * n + 1) ** 2


def test_pair_residue_counts_direct():
    rng = random.Random(8)
    for q, a2, n in ((9, 1, 4), (15, 2, 7), (49, 3, 10)):
        c = pair_residue_counts(factorize(q), a2, n)
        direct = np.zeros(q, dtype=np.int64)
        for x1 in range(-n, n + 1):
            for x2 in range(-n, n + 1):
                direct[(x1 * x1 + a2 * x2 * x2) % q] += 1
        assert np.array_equal(c, direct)


def test_root_weighted_counts_direct():
    for q in (9, 15, 45):
        m = factorize(q)
        tbl = build_sqrt_table(m)
        n = 2 * q + 3
        got = root_weighted_counts(tbl, n)
        direct = np.zeros(q, dtype=np.int64)
        for t in range(q):
            for x in range(-n, n + 1):
                if (x * x - t) % q == 0:
                    direct[t] += 1
        assert np.array_equal(got, direct)


def test_smoothed_count_direct():
    rng = random.Random(99)
    for inst in _instances(rng, 6, q_hi=50):
        n = rng.randrange(4, 16)
        delta = rng.uniform(0.5, n / 2)
        w = SmoothWeight(n=float(n), delta=delta)
        got = count_box_smoothed(inst, w)
        q = inst.m.q
        direct = 0.0
        lim = w.lattice_support
        for x3 in range(-lim, lim + 1):
            if math.gcd(x3, q) != 1:
                continue
            phi = eval_weight(w, float(x3))
            if phi == 0.0:
                continue
            want = (-inst.alpha3 * x3 * x3) % q
            inner = 0
            for x1 in range(-n, n + 1):
                for x2 in range(-n, n + 1):
                    if (x1 * x1 + inst.alpha2 * x2 * x2) % q == want:
                        inner += 1
            direct += phi * inner
        assert abs(got - direct) < 1e-9 * max(1.0, abs(direct))


def test_main_term_tracks_counts():
    # at N well past q the sharp count concentrates near the main term
    inst = CongruenceInstance(factorize(15), 1, 2)
    n = 1500
    sharp = count_box_fast(inst, n)
    mt = main_term(inst, SmoothWeight(n=float(n), delta=1.0))
    assert abs(sharp - mt) / mt < 5e-3


def test_box_count_report():
    inst = CongruenceInstance(factorize(21), 1, 2)
    w = SmoothWeight(n=10.0, delta=5.0)
    rep = box_count_report(inst, w)
    assert isinstance(rep, BoxCountReport)
    assert rep.sharp_count == count_box_fast(inst, 10)
    assert rep.smoothed_count == pytest.approx(count_box_smoothed(inst, w))
    assert rep.main_term_value == pytest.approx(main_term(inst, w))
    expected = (rep.smoothed_count - rep.main_term_value) / rep.main_term_value
    assert rep.relative_error == pytest.approx(expected)


def _min_height_brute(inst, h_max):
    q = inst.m.q
    best = None
    for x1 in range(-h_max, h_max + 1):
        for x2 in range(-h_max, h_max + 1):
            for x3 in range(-h_max, h_max + 1):
                if math.gcd(x3, q) != 1:
                    continue
                if (x1 * x1 + inst.alpha2 * x2 * x2 + inst.alpha3 * x3 * x3) % q:
                    continue
                h = max(abs(x1), abs(x2), abs(x3))
                if best is None or h < best:
                    best = h
    return best


def test_minimal_height_brute():
    rng = random.Random(31337)
    for inst in _instances(rng, 20, q_hi=90):
        h_cap = rng.randrange(1, 12)
        assert minimal_height(inst, h_cap) == _min_height_brute(inst, h_cap)


def test_minimal_height_examples():
    assert minimal_height(CongruenceInstance(factorize(5), 1, 1), 4) == 2
    # no admissible solution of height <= 1 for q = 5, alpha = (1, 1)
    assert minimal_height(CongruenceInstance(factorize(5), 1, 1), 1) is None
    assert minimal_height(CongruenceInstance(factorize(5), 1, 4), 4) == 1


def test_min_root_array():
    for q in (9, 15, 49):
        m = factorize(q)
        tbl = build_sqrt_table(m)
        arr = min_root_array(tbl)
        for t in range(q):
            roots = [x for x in range(q) if (x * x - t) % q == 0]
            if roots:
                assert arr[t] == min(min(r, q - r) for r in roots)
            else:
                assert arr[t] >= q  # sentinel for no root


def test_representation_count_classical():
    # sum of two squares: r(n) = 4 (d_1(n) - d_3(n))
    table = [1, 4, 4, 0, 4, 8, 0, 0, 4, 4, 8]
    for n, want in enumerate(table):
        assert representation_count(n, 1) == want
    assert representation_count(25, 1) == 12
    assert representation_count(325, 1) == 24


def test_representation_counts_batch():
    for alpha in (1, 2, 3, 5, 8):
        upto = 400
        batch = representation_counts_upto(upto, alpha)
        for n in range(0, upto + 1, 17):
            assert batch[n] == representation_count(n, alpha)


def test_representation_count_brute():
    rng = random.Random(55)
    for _ in range(40):
        alpha = rng.randrange(1, 9)
        n = rng.randrange(0, 500)
        lim = math.isqrt(n) + 1
        direct = sum(
            1
            for x in range(-lim, lim + 1)
            for y in range(-lim, lim + 1)
            if x * x + alpha * y * y == n
        )
        assert representation_count(n, alpha) == direct
