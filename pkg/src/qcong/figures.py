"""Optional figure rendering for scan reports.

The CSV/JSON files are the contract; these plots are a convenience layer
for eyeballing trends and are written next to them when the CLI is given
a figures directory.  Everything renders through the Agg backend so the
CLI stays headless.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .experiments import ScanReport


def _save(fig, outdir: str, name: str, written: list[str]) -> None:
    path = os.path.join(outdir, name)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)


def _exception_figures(report: ScanReport, outdir: str, written: list[str]) -> None:
    qs = [s.big_q for s in report.summaries]
    fracs = [s.exception_fraction for s in report.summaries]
    lo = [s.exception_fraction - s.ci_low for s in report.summaries]
    hi = [s.ci_high - s.exception_fraction for s in report.summaries]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.errorbar(qs, fracs, yerr=[lo, hi], fmt="o-", capsize=3)
    ax.set_xscale("log", base=2)
    ax.set_xlabel("Q")
    ax.set_ylabel("exception fraction")
    ax.set_title("exceptions vs Q (95% Wilson)")
    _save(fig, outdir, "exception_fraction.png", written)

    heights = [r.min_height for r in report.rows if r.min_height is not None]
    if heights:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.hist(heights, bins=range(0, max(heights) + 2))
        ax.set_xlabel("minimal height")
        ax.set_ylabel("pairs")
        ax.set_title("minimal solution heights")
        _save(fig, outdir, "min_height_hist.png", written)


def _error_figures(report: ScanReport, outdir: str, written: list[str]) -> None:
    errs = [abs(r.rel_err) for r in report.rows if r.rel_err is not None]
    if errs:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.hist(errs, bins=40)
        ax.set_yscale("log")
        ax.set_xlabel("|relative error|")
        ax.set_ylabel("pairs")
        ax.set_title(f"{report.kind} scan error distribution")
        _save(fig, outdir, "rel_err_hist.png", written)
    if len(report.summaries) > 1:
        qs = [s.big_q for s in report.summaries]
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for key, label in (("rel_err_q50", "median"), ("rel_err_q90", "90%"), ("rel_err_max", "max")):
            ax.plot(qs, [getattr(s, key) for s in report.summaries], "o-", label=label)
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")
        ax.set_xlabel("Q")
        ax.set_ylabel("|relative error|")
        ax.legend()
        ax.set_title(f"{report.kind} scan error trend")
        _save(fig, outdir, "rel_err_trend.png", written)


def _band_figures(report: ScanReport, outdir: str, written: list[str]) -> None:
    rows = [r for r in report.rows if r.band is not None]
    if rows:
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.scatter([r.q for r in rows], [r.band for r in rows], s=4, alpha=0.4)
        ax.set_xlabel("q")
        ax.set_ylabel("band count")
        ax.set_title("transition-band solution counts")
        _save(fig, outdir, "band_counts.png", written)


def render_figures(report: ScanReport, outdir: str) -> list[str]:
    """Write the figures for one report; returns the paths written."""
    os.makedirs(outdir, exist_ok=True)
    written: list[str] = []
    if report.kind == "exceptions":
        _exception_figures(report, outdir, written)
    else:
        _error_figures(report, outdir, written)
    if report.kind == "sharp":
        _band_figures(report, outdir, written)
    return written
