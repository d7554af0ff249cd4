"""Desk-scale measurement campaigns over the pair family B(Q, alpha2).

B(Q, alpha2) collects the pairs (q, alpha3) with Q < q <= 2Q,
gcd(2 alpha2, q) = 1 and alpha3 a reduced residue mod q.  Three scans
walk this family:

  * exception scan: for each pair, the minimal solution height is
    searched up to H_max = ceil(Q^height_exponent * (alpha2 Q)^eps);
    pairs with no solution that low are exceptions.  The exception
    fraction with a Wilson interval is the deliverable, compared across
    a ladder of Q values.
  * asymptotic scan: the smoothed count is compared to the local-density
    main term; the summary reports error quantiles and the fraction of
    pairs with |relative error| above Q^(-eps).
  * sharp-cutoff scan: the sharp count, the transition-band count over
    n - delta < x3 <= n + delta, and the band character sums (the V2'
    quantity) against the target n^3 / phi(q) * Q^(-2 eps), with Burgess
    ratios for the band intervals.

Window sizes follow the configured rules: n = Q^(3/8) (alpha2 Q)^eps
("height", the scale of the height bound) or Q^(45/104) (alpha2 Q)^(3 eps)
("sharp", the scale of the sharp-cutoff analysis), or explicit; delta is
min{Q^(-11/12 - 4 eps) n^3, Q^(-2 eps) n} ("min"), n/2 ("half"), or
explicit.  The smoothing window constraint
Q^(1/3) n^(1/9) (alpha2 Q)^(4 eps) <= delta <= n <= Q^(1/2) is checked
and reported per row, never silently clamped.

Above Q = 2048 full enumeration is refused unless subsampling is
enabled, in which case ceil(Q^1.2) pairs are drawn with a seeded
generator.  All scans are deterministic given (config, seed); worker
parallelism merges per-modulus results in a fixed order.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from multiprocessing import Pool

import numpy as np

from .arith import admissible_moduli, build_sqrt_table, factorize
from .characters import CharacterGroup, DirichletCharacter, burgess_ratio
from .counting import (
    CongruenceInstance,
    box_profile,
    local_density,
    min_root_array,
    minimal_height,
)
from .errors import DomainError, ScaleCapError
from .smoothing import SmoothWeight, weight_values

SCHEMA = "qcong.scan/1"

_FULL_ENUM_CAP = 2048
_SCAN_Q_CAP = 16384
_SHARP_Q_CAP = 512
_NO_SOLUTION = 1 << 62

_N_RULES = ("height", "sharp", "explicit")
_DELTA_RULES = ("min", "half", "explicit")
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class ScanConfig:
    """Parameters of one scan at one Q; see the module docstring."""

    big_q: int
    alpha2: int = 1
    eps_exp: float = 0.05
    height_exponent: float = 0.375
    n_rule: str | None = None
    n_explicit: int | None = None
    delta_rule: str = "half"
    delta_explicit: float | None = None
    burgess_r: int = 3
    cubefree_only: bool = False
    subsample: bool = False
    seed: int = 1
    threads: int = 1

    def __post_init__(self):
        if self.big_q < 1:
            raise DomainError("Q must be >= 1")
        if self.alpha2 < 1:
            raise DomainError("alpha2 must be >= 1")
        if not (0.0 < self.eps_exp <= 0.2):
            raise DomainError("eps_exp must lie in (0, 0.2]")
        if self.n_rule is not None and self.n_rule not in _N_RULES:
            raise DomainError(f"n_rule must be one of {_N_RULES}")
        if self.n_rule == "explicit" and self.n_explicit is None:
            raise DomainError("explicit n_rule needs n_explicit")
        if self.delta_rule not in _DELTA_RULES:
            raise DomainError(f"delta_rule must be one of {_DELTA_RULES}")
        if self.delta_rule == "explicit" and self.delta_explicit is None:
            raise DomainError("explicit delta_rule needs delta_explicit")
        if self.burgess_r not in (2, 3, 4):
            raise DomainError("burgess_r must be 2, 3 or 4")
        if self.threads < 1:
            raise DomainError("threads must be >= 1")


@dataclass(frozen=True)
class ScanRow:
    """One (q, alpha3) record; unused fields stay None for a given scan."""

    q: int
    alpha3: int
    min_height: int | None = None
    sharp: int | None = None
    smoothed: float | None = None
    main_term: float | None = None
    rel_err: float | None = None
    exception: bool | None = None
    insoluble: bool | None = None
    band: int | None = None
    window_ok: bool | None = None


@dataclass(frozen=True)
class ScanSummary:
    """Aggregates for one Q rung of a scan ladder."""

    kind: str
    big_q: int
    alpha2: int
    examined: int
    sampled: bool
    n: int | None = None
    delta: float | None = None
    h_max: int | None = None
    exception_count: int | None = None
    exception_fraction: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    insoluble_count: int | None = None
    rel_err_q50: float | None = None
    rel_err_q90: float | None = None
    rel_err_max: float | None = None
    error_threshold: float | None = None
    frac_large_error: float | None = None
    window_ok: bool | None = None
    band_ratio_max: float | None = None
    band_ratio_mean: float | None = None
    burgess_ratio_max: float | None = None


@dataclass(frozen=True)
class ScanReport:
    kind: str
    config: ScanConfig
    summaries: tuple[ScanSummary, ...]
    rows: tuple[ScanRow, ...]
    schema: str = SCHEMA

    def to_json_dict(self) -> dict:
        return {
            "schema": self.schema,
            "kind": self.kind,
            "config": asdict(self.config),
            "summaries": [asdict(s) for s in self.summaries],
            "rows": [asdict(r) for r in self.rows],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ScanReport":
        return cls(
            kind=d["kind"],
            config=ScanConfig(**d["config"]),
            summaries=tuple(ScanSummary(**s) for s in d["summaries"]),
            rows=tuple(ScanRow(**r) for r in d["rows"]),
            schema=d["schema"],
        )


CSV_HEADER = ["q", "alpha3", "min_height", "sharp", "smoothed", "main_term", "rel_err", "exception"]


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return "%.12g" % v
    return str(v)


def write_csv(report: ScanReport, path: str) -> None:
    """Fixed-schema CSV, one row per pair; byte-deterministic."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(CSV_HEADER)
        for r in report.rows:
            out.writerow(
                [
                    _fmt_cell(v)
                    for v in (
                        r.q,
                        r.alpha3,
                        r.min_height,
                        r.sharp,
                        r.smoothed,
                        r.main_term,
                        r.rel_err,
                        r.exception,
                    )
                ]
            )


def write_json(report: ScanReport, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path: str) -> ScanReport:
    with open(path) as fh:
        return ScanReport.from_json_dict(json.load(fh))


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial fraction; (0, 1) when empty."""
    if trials == 0:
        return (0.0, 1.0)
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


# ---------------------------------------------------------------------------
# Pair enumeration and sampling.
# ---------------------------------------------------------------------------


def enumerate_B(big_q: int, alpha2: int) -> list[tuple[int, int]]:
    """All pairs (q, alpha3) of the family, q ascending then alpha3 ascending."""
    if big_q < 1:
        raise DomainError("enumerate_B needs Q >= 1")
    pairs = []
    for q in _scan_moduli(big_q, alpha2, cubefree_only=False):
        for t in range(1, q + 1):
            if math.gcd(t, q) == 1:
                pairs.append((q, t))
    return pairs


def _scan_moduli(big_q: int, alpha2: int, cubefree_only: bool) -> list[int]:
    qs = admissible_moduli(big_q, alpha2)
    if cubefree_only:
        qs = [q for q in qs if factorize(q).is_cubefree]
    return qs


def _coprime_residues(q: int) -> np.ndarray:
    a = np.arange(1, q + 1, dtype=np.int64)
    return a[np.gcd(a, q) == 1]


def _resolve_pairs(cfg: ScanConfig) -> tuple[list[tuple[int, np.ndarray]], bool]:
    """Per-modulus alpha3 arrays, full or seeded-subsampled; plus sampled flag."""
    if cfg.big_q > _SCAN_Q_CAP:
        raise ScaleCapError(f"scans cap at Q = {_SCAN_Q_CAP}, got {cfg.big_q}")
    qs = _scan_moduli(cfg.big_q, cfg.alpha2, cfg.cubefree_only)
    if cfg.big_q <= _FULL_ENUM_CAP and not cfg.subsample:
        return [(q, _coprime_residues(q)) for q in qs], False
    if cfg.big_q > _FULL_ENUM_CAP and not cfg.subsample:
        raise ScaleCapError(
            f"Q = {cfg.big_q} exceeds the full-enumeration cap {_FULL_ENUM_CAP}; "
            "enable subsampling"
        )
    phis = np.array([factorize(q).totient for q in qs], dtype=np.int64)
    total = int(phis.sum())
    want = min(total, int(math.ceil(cfg.big_q**1.2)))
    rng = np.random.default_rng(cfg.seed)
    picked = np.sort(rng.choice(total, size=want, replace=False))
    bounds = np.concatenate([[0], np.cumsum(phis)])
    out = []
    for i, q in enumerate(qs):
        local = picked[(picked >= bounds[i]) & (picked < bounds[i + 1])] - bounds[i]
        if local.size:
            out.append((q, _coprime_residues(q)[local]))
    return out, True


# ---------------------------------------------------------------------------
# Derived window parameters.
# ---------------------------------------------------------------------------


def resolved_n_rule(cfg: ScanConfig, kind: str) -> str:
    if cfg.n_rule is not None:
        return cfg.n_rule
    return "sharp" if kind == "sharp" else "height"


def derived_n(cfg: ScanConfig, kind: str) -> int:
    rule = resolved_n_rule(cfg, kind)
    if rule == "explicit":
        return int(cfg.n_explicit)
    base = cfg.alpha2 * cfg.big_q
    if rule == "height":
        return int(math.ceil(cfg.big_q**0.375 * base**cfg.eps_exp))
    return int(math.ceil(cfg.big_q ** (45.0 / 104.0) * base ** (3.0 * cfg.eps_exp)))


def derived_delta(cfg: ScanConfig, n: int) -> float:
    if cfg.delta_rule == "explicit":
        return float(cfg.delta_explicit)
    if cfg.delta_rule == "half":
        return n / 2.0
    q = cfg.big_q
    return min(q ** (-11.0 / 12.0 - 4.0 * cfg.eps_exp) * n**3, q ** (-2.0 * cfg.eps_exp) * n)


def window_constraint_ok(cfg: ScanConfig, n: int, delta: float) -> bool:
    """Q^(1/3) n^(1/9) (alpha2 Q)^(4 eps) <= delta <= n <= Q^(1/2)."""
    lower = cfg.big_q ** (1.0 / 3.0) * n ** (1.0 / 9.0) * (cfg.alpha2 * cfg.big_q) ** (
        4.0 * cfg.eps_exp
    )
    return lower <= delta <= n <= cfg.big_q**0.5


def height_cap(cfg: ScanConfig) -> int:
    return int(math.ceil(cfg.big_q**cfg.height_exponent * (cfg.alpha2 * cfg.big_q) ** cfg.eps_exp))


# ---------------------------------------------------------------------------
# Per-modulus workers.  Each returns plain tuples for cheap pickling; the
# parent assembles rows in enumeration order, so parallel runs reproduce
# the serial output byte for byte.
# ---------------------------------------------------------------------------


def _shell_pairs(s: int) -> tuple[np.ndarray, np.ndarray]:
    """(|x2|, |x3|) pairs with max = s, each unordered pair once."""
    pa = np.concatenate([np.arange(s + 1, dtype=np.int64), np.full(s, s, dtype=np.int64)])
    pb = np.concatenate([np.full(s + 1, s, dtype=np.int64), np.arange(s, dtype=np.int64)])
    return pa, pb


def _min_heights_batch(q: int, alpha2: int, alpha3s: np.ndarray, h_max: int) -> np.ndarray:
    """Minimal heights up to h_max for many alpha3 at once; -1 where none."""
    m = factorize(q)
    tbl = build_sqrt_table(m)
    minroot = min_root_array(tbl)
    best = np.full(len(alpha3s), _NO_SOLUTION, dtype=np.int64)
    alive = np.arange(len(alpha3s))
    for s in range(h_max + 1):
        alive = alive[best[alive] > s]
        if not alive.size:
            break
        pa, pb = _shell_pairs(s)
        ok = np.gcd(pb, q) == 1
        pa, pb = pa[ok], pb[ok]
        if not pa.size:
            continue
        t = (-(alpha2 * pa * pa))[:, None] - (pb * pb)[:, None] * alpha3s[alive][None, :]
        h = np.maximum(s, minroot[t % q])
        best[alive] = np.minimum(best[alive], h.min(axis=0))
    return np.where(best <= h_max, best, -1)


def _exception_worker(args) -> tuple:
    q, alpha2, alpha3s, h_max = args
    heights = _min_heights_batch(q, alpha2, alpha3s, h_max)
    insoluble = []
    if np.any(heights < 0):
        m = factorize(q)
        tbl = build_sqrt_table(m)
        reach = max(1, (q - 1) // 2)
        for a3 in alpha3s[heights < 0]:
            inst = CongruenceInstance(m, alpha2, int(a3))
            insoluble.append(minimal_height(inst, reach, tbl) is None)
    return q, alpha3s, heights, insoluble


def _aggregate_by_square(q: int, x3: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    agg = np.zeros(q, dtype=np.float64)
    np.add.at(agg, (x3 * x3) % q, weights)
    ts = np.nonzero(agg)[0]
    return ts, agg[ts]


def _indexed_sums(g: np.ndarray, q: int, alpha3s: np.ndarray, ts: np.ndarray, ws: np.ndarray) -> np.ndarray:
    out = np.empty(len(alpha3s), dtype=np.float64)
    chunk = max(1, 2_000_000 // max(1, len(ts)))
    for lo in range(0, len(alpha3s), chunk):
        part = alpha3s[lo : lo + chunk]
        idx = (part[:, None] * ts[None, :]) % q
        out[lo : lo + chunk] = g[idx] @ ws
    return out


def _count_worker(args) -> tuple:
    """Sharp, smoothed and (optionally) band counts for one modulus."""
    q, alpha2, alpha3s, n, delta, want_band, big_q, eps_exp, burgess_r = args
    m = factorize(q)
    tbl = build_sqrt_table(m)
    g = box_profile(m, alpha2, n, tbl).astype(np.float64)
    w = SmoothWeight(n=float(n), delta=delta)

    x3 = np.arange(-n, n + 1, dtype=np.int64)
    x3 = x3[np.gcd(np.abs(x3), q) == 1]
    ts_s, ws_s = _aggregate_by_square(q, x3, np.ones(len(x3)))
    sharp = _indexed_sums(g, q, alpha3s, ts_s, ws_s)

    r = w.lattice_support
    x3w = np.arange(-r, r + 1, dtype=np.int64)
    x3w = x3w[np.gcd(np.abs(x3w), q) == 1]
    ts_w, ws_w = _aggregate_by_square(q, x3w, weight_values(w, x3w))
    smoothed = _indexed_sums(g, q, alpha3s, ts_w, ws_w)

    main = float(local_density(m, alpha2)) * (2.0 * n) ** 2 * (2.0 * n) / q

    band = None
    band_stats = None
    if want_band:
        lo = int(math.floor(n - delta)) + 1
        hi = int(math.floor(n + delta))
        xb = np.arange(lo, hi + 1, dtype=np.int64)
        xb = xb[np.gcd(np.abs(xb), q) == 1]
        if xb.size:
            ts_b, ws_b = _aggregate_by_square(q, xb, np.ones(len(xb)))
            band = _indexed_sums(g, q, alpha3s, ts_b, ws_b)
        else:
            band = np.zeros(len(alpha3s))
        band_stats = _band_character_stats(m, alpha2, n, lo, hi, big_q, eps_exp, burgess_r)
    return q, sharp, smoothed, main, band, band_stats


def _band_character_stats(m, alpha2, n, lo, hi, big_q, eps_exp, burgess_r):
    """(V2' ratio against the band target, worst Burgess ratio) for one q."""
    from .counting import pair_residue_counts

    q = m.q
    group = CharacterGroup(m)
    a = group.weighted_sums(pair_residue_counts(m, alpha2, n).astype(np.float64))
    bw = np.zeros(q, dtype=np.float64)
    xb = np.arange(lo, hi + 1, dtype=np.int64)
    xb = xb[np.gcd(np.abs(xb), q) == 1]
    np.add.at(bw, xb % q, 1.0)
    b_all = group.weighted_sums(bw)
    sq = group.power_index_map(2)
    mask = sq != group.principal_index()
    a2 = a.real**2 + a.imag**2
    b_sq = b_all[sq]
    b2 = b_sq.real**2 + b_sq.imag**2
    v2p = float(np.sum(a2[mask] * b2[mask])) / m.totient
    target = n**3 / m.totient * big_q ** (-2.0 * eps_exp)
    ratio = v2p / target
    worst_burgess = None
    length = hi - lo + 1
    if length >= 1 and (burgess_r != 4 or m.is_cubefree):
        worst = 0.0
        for idx in sorted(set(int(i) for i in sq[mask])):
            exps = tuple(int(v) for v in group._exponent_matrix[idx])
            chi = DirichletCharacter(group=group, exponents=exps)
            worst = max(worst, burgess_ratio(chi, length, burgess_r))
        worst_burgess = worst
    return ratio, worst_burgess


def _run_jobs(jobs: list, worker, threads: int) -> list:
    if threads > 1 and len(jobs) > 1:
        with Pool(processes=threads) as pool:
            return pool.map(worker, jobs)
    return [worker(j) for j in jobs]


# ---------------------------------------------------------------------------
# Scan drivers.
# ---------------------------------------------------------------------------


def exception_scan(cfg: ScanConfig) -> ScanReport:
    """Minimal-height scan of B(Q, alpha2); see the module docstring."""
    groups, sampled = _resolve_pairs(cfg)
    h_max = height_cap(cfg)
    jobs = [(q, cfg.alpha2, a3, h_max) for q, a3 in groups]
    rows: list[ScanRow] = []
    n_exc = n_insol = 0
    for q, a3s, heights, insoluble in _run_jobs(jobs, _exception_worker, cfg.threads):
        it = iter(insoluble)
        for a3, h in zip(a3s, heights):
            exc = bool(h < 0)
            ins = bool(next(it)) if exc else False
            n_exc += exc
            n_insol += ins
            rows.append(
                ScanRow(
                    q=int(q),
                    alpha3=int(a3),
                    min_height=None if exc else int(h),
                    exception=exc,
                    insoluble=ins if exc else None,
                )
            )
    examined = len(rows)
    ci_low, ci_high = wilson_interval(n_exc, examined)
    summary = ScanSummary(
        kind="exceptions",
        big_q=cfg.big_q,
        alpha2=cfg.alpha2,
        examined=examined,
        sampled=sampled,
        h_max=h_max,
        exception_count=n_exc,
        exception_fraction=n_exc / examined if examined else 0.0,
        ci_low=ci_low,
        ci_high=ci_high,
        insoluble_count=n_insol,
    )
    return ScanReport(kind="exceptions", config=cfg, summaries=(summary,), rows=tuple(rows))


def _error_summary(kind, cfg, rows, n, delta, window_ok, sampled, extra=None) -> ScanSummary:
    errs = np.array([abs(r.rel_err) for r in rows])
    thr = cfg.big_q ** (-cfg.eps_exp)
    extra = extra or {}
    return ScanSummary(
        kind=kind,
        big_q=cfg.big_q,
        alpha2=cfg.alpha2,
        examined=len(rows),
        sampled=sampled,
        n=n,
        delta=delta,
        rel_err_q50=float(np.quantile(errs, 0.5)) if len(rows) else None,
        rel_err_q90=float(np.quantile(errs, 0.9)) if len(rows) else None,
        rel_err_max=float(errs.max()) if len(rows) else None,
        error_threshold=thr,
        frac_large_error=float(np.mean(errs > thr)) if len(rows) else None,
        exception_count=int(np.sum(errs > thr)) if len(rows) else None,
        window_ok=window_ok,
        **extra,
    )


def asymptotic_scan(cfg: ScanConfig) -> ScanReport:
    """Smoothed count versus main term across B(Q, alpha2)."""
    kind = "asymptotic"
    groups, sampled = _resolve_pairs(cfg)
    n = derived_n(cfg, kind)
    delta = derived_delta(cfg, n)
    ok = window_constraint_ok(cfg, n, delta)
    thr = cfg.big_q ** (-cfg.eps_exp)
    jobs = [
        (q, cfg.alpha2, a3, n, delta, False, cfg.big_q, cfg.eps_exp, cfg.burgess_r)
        for q, a3 in groups
    ]
    rows: list[ScanRow] = []
    for (q, a3s), (_, sharp, smoothed, main, _, _) in zip(
        groups, _run_jobs(jobs, _count_worker, cfg.threads)
    ):
        for a3, sh, sm in zip(a3s, sharp, smoothed):
            rel = (sm - main) / main
            rows.append(
                ScanRow(
                    q=int(q),
                    alpha3=int(a3),
                    sharp=int(round(sh)),
                    smoothed=float(sm),
                    main_term=main,
                    rel_err=float(rel),
                    exception=bool(abs(rel) > thr),
                    window_ok=ok,
                )
            )
    summary = _error_summary(kind, cfg, rows, n, delta, ok, sampled)
    return ScanReport(kind=kind, config=cfg, summaries=(summary,), rows=tuple(rows))


def sharp_cutoff_scan(cfg: ScanConfig) -> ScanReport:
    """Sharp count, band count, and band character sums across the family."""
    kind = "sharp"
    if cfg.big_q > _SHARP_Q_CAP:
        raise ScaleCapError(f"sharp scan caps at Q = {_SHARP_Q_CAP}, got {cfg.big_q}")
    groups, sampled = _resolve_pairs(cfg)
    n = derived_n(cfg, kind)
    delta = derived_delta(cfg, n)
    ok = window_constraint_ok(cfg, n, delta)
    thr = cfg.big_q ** (-cfg.eps_exp)
    jobs = [
        (q, cfg.alpha2, a3, n, delta, True, cfg.big_q, cfg.eps_exp, cfg.burgess_r)
        for q, a3 in groups
    ]
    rows: list[ScanRow] = []
    ratios, burgess = [], []
    for (q, a3s), (_, sharp, smoothed, main, band, stats) in zip(
        groups, _run_jobs(jobs, _count_worker, cfg.threads)
    ):
        ratio, worst = stats
        ratios.append(ratio)
        if worst is not None:
            burgess.append(worst)
        for a3, sh, sm, bd in zip(a3s, sharp, smoothed, band):
            rel = (sh - main) / main
            rows.append(
                ScanRow(
                    q=int(q),
                    alpha3=int(a3),
                    sharp=int(round(sh)),
                    smoothed=float(sm),
                    main_term=main,
                    rel_err=float(rel),
                    exception=bool(abs(rel) > thr),
                    band=int(round(bd)),
                    window_ok=ok,
                )
            )
    extra = {
        "band_ratio_max": max(ratios) if ratios else None,
        "band_ratio_mean": float(np.mean(ratios)) if ratios else None,
        "burgess_ratio_max": max(burgess) if burgess else None,
    }
    summary = _error_summary(kind, cfg, rows, n, delta, ok, sampled, extra)
    return ScanReport(kind=kind, config=cfg, summaries=(summary,), rows=tuple(rows))


_SCANS = {
    "exceptions": exception_scan,
    "asymptotic": asymptotic_scan,
    "sharp": sharp_cutoff_scan,
}


def run_ladder(kind: str, base: ScanConfig, q_values: list[int]) -> ScanReport:
    """Run one scan kind over several Q rungs and merge the reports."""
    if kind not in _SCANS:
        raise DomainError(f"unknown scan kind {kind}")
    if not q_values:
        raise DomainError("ladder needs at least one Q")
    summaries: list[ScanSummary] = []
    rows: list[ScanRow] = []
    cfg0 = None
    for big_q in q_values:
        cfg = ScanConfig(**{**asdict(base), "big_q": big_q})
        cfg0 = cfg0 or cfg
        rep = _SCANS[kind](cfg)
        summaries.extend(rep.summaries)
        rows.extend(rep.rows)
    return ScanReport(kind=kind, config=cfg0, summaries=tuple(summaries), rows=tuple(rows))
