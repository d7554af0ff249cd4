import json
import math
import os

import pytest

from qcong.arith import factorize
from qcong.counting import CongruenceInstance, count_box_fast, main_term, minimal_height
from qcong.errors import DomainError, ScaleCapError
from qcong.experiments import (
    CSV_HEADER,
    SCHEMA,
    ScanConfig,
    ScanReport,
    asymptotic_scan,
    derived_delta,
    derived_n,
    enumerate_B,
    exception_scan,
    height_cap,
    read_json,
    run_ladder,
    sharp_cutoff_scan,
    wilson_interval,
    window_constraint_ok,
    write_csv,
    write_json,
)
from qcong.smoothing import SmoothWeight


def test_enumerate_B():
    got = enumerate_B(10, 1)
    want = [
        (q, t)
        for q in range(11, 21)
        if math.gcd(2, q) == 1
        for t in range(1, q + 1)
        if math.gcd(t, q) == 1
    ]
    assert got == want
    # size is the totient sum over the admitted moduli
    assert len(enumerate_B(30, 1)) == sum(
        factorize(q).totient for q in range(31, 61) if q % 2
    )
    for q, t in enumerate_B(12, 3):
        assert math.gcd(6, q) == 1 and math.gcd(t, q) == 1


def test_wilson_interval():
    lo, hi = wilson_interval(13, 100)
    assert lo == pytest.approx(0.07757167427240512)
    assert hi == pytest.approx(0.20980351440076428)
    lo, hi = wilson_interval(0, 50)
    assert lo == pytest.approx(0.0, abs=1e-12) and 0.0 < hi < 0.1
    lo, hi = wilson_interval(50, 50)
    assert hi == pytest.approx(1.0, abs=1e-12) and 0.9 < lo < 1.0
    mid_lo, mid_hi = wilson_interval(25, 50)
    assert mid_lo < 0.5 < mid_hi


def test_derived_parameters():
    cfg = ScanConfig(big_q=256, alpha2=3, eps_exp=0.05)
    assert height_cap(cfg) == math.ceil(256**0.375 * (3 * 256) ** 0.05)
    assert derived_n(cfg, "exceptions") == math.ceil(256**0.375 * (3 * 256) ** 0.05)
    assert derived_n(cfg, "sharp") == math.ceil(256 ** (45 / 104) * (3 * 256) ** 0.15)
    n = derived_n(cfg, "asymptotic")
    assert derived_delta(cfg, n) == n / 2.0
    cfg_min = ScanConfig(big_q=256, delta_rule="min")
    d = derived_delta(cfg_min, n)
    assert d == min(256 ** (-11 / 12 - 0.2) * n**3, 256 ** (-0.1) * n)
    cfg_exp = ScanConfig(big_q=256, n_rule="explicit", n_explicit=40, delta_rule="explicit", delta_explicit=7.5)
    assert derived_n(cfg_exp, "asymptotic") == 40
    assert derived_delta(cfg_exp, 40) == 7.5


def test_window_constraint():
    cfg = ScanConfig(big_q=256)
    # tiny n fails the lower window bound, n > sqrt(Q) fails the upper
    assert not window_constraint_ok(cfg, 6, 3.0)
    assert not window_constraint_ok(cfg, 20, 18.0)
    # generous delta with n right at sqrt(Q) can satisfy both at eps -> 0
    tight = ScanConfig(big_q=10**6)
    n = 1000
    lower = (10**6) ** (1 / 3) * n ** (1 / 9) * (10**6) ** (4 * 0.05)
    assert window_constraint_ok(tight, n, 999.0) == (lower <= 999.0 <= n <= 1000.0)


def test_config_validation():
    with pytest.raises(DomainError):
        ScanConfig(big_q=0)
    with pytest.raises(DomainError):
        ScanConfig(big_q=8, eps_exp=0.5)
    with pytest.raises(DomainError):
        ScanConfig(big_q=8, n_rule="nope")
    with pytest.raises(DomainError):
        ScanConfig(big_q=8, n_rule="explicit")
    with pytest.raises(DomainError):
        ScanConfig(big_q=8, delta_rule="explicit")
    with pytest.raises(DomainError):
        ScanConfig(big_q=8, burgess_r=5)


def test_exception_scan_small():
    rep = exception_scan(ScanConfig(big_q=32))
    s = rep.summaries[0]
    assert rep.kind == "exceptions"
    assert s.examined == len(enumerate_B(32, 1)) == len(rep.rows)
    assert s.h_max == height_cap(rep.config)
    # frozen counts; the scan is deterministic
    assert s.examined == 612
    assert s.exception_count == 58
    assert s.ci_low < s.exception_fraction < s.ci_high
    assert s.exception_fraction == pytest.approx(58 / 612)
    assert s.insoluble_count == 0


def test_exception_rows_match_minimal_height():
    rep = exception_scan(ScanConfig(big_q=16))
    h_max = height_cap(rep.config)
    for row in rep.rows:
        inst = CongruenceInstance(factorize(row.q), 1, row.alpha3)
        h = minimal_height(inst, h_max)
        if row.exception:
            assert h is None
            assert row.min_height is None
            # exceptions get the deep solubility check resolved
            assert row.insoluble in (True, False)
        else:
            assert row.min_height == h
            # a found height proves solubility; the field stays unset
            assert row.insoluble is None


def test_exception_scan_threads_match():
    a = exception_scan(ScanConfig(big_q=48, threads=1))
    b = exception_scan(ScanConfig(big_q=48, threads=4))
    assert a.rows == b.rows
    assert a.summaries == b.summaries


def test_scan_cap_and_subsample():
    with pytest.raises(ScaleCapError):
        exception_scan(ScanConfig(big_q=4096))
    rep = exception_scan(ScanConfig(big_q=4096, subsample=True, seed=3))
    s = rep.summaries[0]
    assert s.sampled
    assert s.examined == math.ceil(4096**1.2)
    # same seed, same draw
    rep2 = exception_scan(ScanConfig(big_q=4096, subsample=True, seed=3))
    assert rep.rows == rep2.rows
    rep3 = exception_scan(ScanConfig(big_q=4096, subsample=True, seed=4))
    assert rep.rows != rep3.rows
    with pytest.raises(ScaleCapError):
        exception_scan(ScanConfig(big_q=20000, subsample=True))


def test_asymptotic_scan_rows():
    cfg = ScanConfig(big_q=24, n_rule="explicit", n_explicit=9, delta_rule="half")
    rep = asymptotic_scan(cfg)
    s = rep.summaries[0]
    assert s.n == 9 and s.delta == 4.5
    w = SmoothWeight(n=9.0, delta=4.5)
    for row in rep.rows[:12]:
        inst = CongruenceInstance(factorize(row.q), 1, row.alpha3)
        assert row.sharp == count_box_fast(inst, 9)
        assert row.main_term == pytest.approx(main_term(inst, w), rel=1e-12)
        assert row.rel_err == pytest.approx(
            (row.smoothed - row.main_term) / row.main_term, rel=1e-9
        )
        assert row.exception == (abs(row.rel_err) > s.error_threshold)
    assert s.error_threshold == pytest.approx(24 ** (-cfg.eps_exp))
    qs = sorted({row.rel_err for row in rep.rows})
    assert s.rel_err_max == pytest.approx(max(abs(v) for v in qs))


def test_sharp_scan_band_counts():
    cfg = ScanConfig(big_q=14, n_rule="explicit", n_explicit=3, delta_rule="explicit", delta_explicit=1.0)
    rep = sharp_cutoff_scan(cfg)
    # band: positive x3 in (n - delta, n + delta], congruence met, unit x3
    for row in rep.rows:
        q = row.q
        band = 0
        for x3 in range(1, 3 + 1 + 1):
            if not (3 - 1.0 < x3 <= 3 + 1.0) or math.gcd(x3, q) != 1:
                continue
            for x1 in range(-3, 4):
                for x2 in range(-3, 4):
                    if (x1 * x1 + x2 * x2 + row.alpha3 * x3 * x3) % q == 0:
                        band += 1
        assert row.band == band
    s = rep.summaries[0]
    assert s.band_ratio_max is not None and s.burgess_ratio_max is not None
    assert s.band_ratio_max >= s.band_ratio_mean >= 0.0


def test_sharp_scan_known_band_value():
    # q = 15, alpha3 = 2, n = 3, delta = 1: counted by hand
    cfg = ScanConfig(big_q=14, n_rule="explicit", n_explicit=3, delta_rule="explicit", delta_explicit=1.0)
    rep = sharp_cutoff_scan(cfg)
    row = next(r for r in rep.rows if r.q == 15 and r.alpha3 == 2)
    assert row.band == 8


def test_zero_width_band_is_empty():
    cfg = ScanConfig(
        big_q=8, n_rule="explicit", n_explicit=4, delta_rule="explicit", delta_explicit=0.0
    )
    with pytest.raises(DomainError):
        sharp_cutoff_scan(cfg)


def test_sharp_scan_q_cap():
    with pytest.raises(ScaleCapError):
        sharp_cutoff_scan(ScanConfig(big_q=1024))


def test_run_ladder_merges():
    base = ScanConfig(big_q=16)
    rep = run_ladder("exceptions", base, [16, 32])
    assert [s.big_q for s in rep.summaries] == [16, 32]
    assert rep.config.big_q == 16
    solo = exception_scan(ScanConfig(big_q=32))
    tail = [r for r in rep.rows if r.q > 32]
    assert tuple(tail) == solo.rows
    with pytest.raises(DomainError):
        run_ladder("bogus", base, [16])


def test_csv_round_shape(tmp_path):
    rep = exception_scan(ScanConfig(big_q=16))
    path = os.path.join(tmp_path, "scan.csv")
    write_csv(rep, path)
    with open(path) as fh:
        lines = fh.read().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + len(rep.rows)
    # empty cells for fields the scan does not fill
    first = lines[1].split(",")
    assert first[3] == "" and first[4] == ""
    assert first[7] in ("0", "1")


def test_json_round_trip(tmp_path):
    rep = asymptotic_scan(ScanConfig(big_q=12))
    path = os.path.join(tmp_path, "scan.json")
    write_json(rep, path)
    with open(path) as fh:
        payload = json.load(fh)
    assert payload["schema"] == SCHEMA
    back = read_json(path)
    assert back == rep
    # byte determinism of the serialization
    path2 = os.path.join(tmp_path, "again.json")
    write_json(back, path2)
    with open(path) as fh1, open(path2) as fh2:
        assert fh1.read() == fh2.read()


def test_report_json_dict_round_trip():
    rep = sharp_cutoff_scan(ScanConfig(big_q=10))
    d = rep.to_json_dict()
    assert ScanReport.from_json_dict(d) == rep
