"""Report rendering: trace/verdict CSVs and matplotlib figures saved as SVG.

The three ``reproduce`` presets re-run the benchmark classifications end to
end and drop their evidence (delimited tables plus figures) into an output
directory.  Everything is deterministic; files are written atomically.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from . import gallery
from .analysis import (
    GridSpec,
    RadiusSchedule,
    RatioTrace,
    TranslationSet,
    Verdict,
    check_E_strong_mode,
    check_strong_mode,
    check_uniformity,
    check_weak_mode,
)
from .measure import Ball, Measure, PNorm, ball_mass, write_text_atomic

REPORT_IDS = ("example-4.2", "example-5.2", "example-5.3")


def _fmt(x: float) -> str:
    return format(float(x), ".15g")


def write_trace_csv(trace: RatioTrace, path: str) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["r", "f_num", "f_den", "ratio"])
    for row in trace.rows:
        writer.writerow([_fmt(row.r), _fmt(row.f_num), _fmt(row.f_den), _fmt(row.ratio)])
    write_text_atomic(path, buf.getvalue())


def write_verdict_json(verdict: Verdict, path: str, trace_file: str | None = None) -> None:
    write_text_atomic(path, json.dumps(verdict.to_json_dict(trace_file), indent=2) + "\n")


def write_rows_csv(path: str, header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    write_text_atomic(path, buf.getvalue())


def save_figure(fig, path: str) -> None:
    fig.savefig(path, format=os.path.splitext(path)[1].lstrip(".") or "svg")
    plt.close(fig)


def support_figure(measure: Measure, title: str = ""):
    fig, ax = plt.subplots(figsize=(7, 4))
    if measure.dim == 2:
        for comp in measure.components:
            ax.plot([comp.a[0], comp.b[0]], [comp.a[1], comp.b[1]],
                    color="black", lw=1.0 + comp.density)
        ax.set_aspect("equal")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
    else:
        for comp in measure.components:
            ax.plot([comp.lo, comp.lo, comp.hi, comp.hi],
                    [0.0, comp.height, comp.height, 0.0], color="black", lw=1.0)
        ax.set_xlabel("x")
        ax.set_ylabel("density")
    ax.set_title(title or measure.label)
    fig.tight_layout()
    return fig


def ratio_figure(traces: dict[str, RatioTrace], title: str, threshold: float = 1.0):
    fig, ax = plt.subplots(figsize=(7, 4))
    for name, trace in traces.items():
        radii = [row.r for row in trace.rows]
        ax.plot(radii, trace.ratios(), marker="o", ms=3, label=name)
    ax.axhline(threshold, color="gray", ls="--", lw=1.0)
    ax.set_xscale("log")
    ax.set_xlabel("radius r")
    ax.set_ylabel("mass ratio")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def _emit(outdir: str, name: str, obj, csv_on: bool, svg_on: bool, written: list[str]) -> None:
    path = os.path.join(outdir, name)
    if name.endswith(".csv") and csv_on:
        header, rows = obj
        write_rows_csv(path, header, rows)
        written.append(path)
    elif name.endswith(".svg") and svg_on:
        save_figure(obj, path)
        written.append(path)


def reproduce_crossed_squares(outdir: str, csv_on: bool = True, svg_on: bool = True) -> list[str]:
    """Band ratios plus weak/E-strong/uniformity verdicts for the first six centres."""
    os.makedirs(outdir, exist_ok=True)
    written: list[str] = []
    params = gallery.CrossedSquaresParams()
    m = gallery.build_crossed_squares(params)
    lo_bound = 1.25
    hi_bound = 1.0 + params.alpha

    band_rows = []
    for n in range(1, 7):
        r = gallery.band_radius(n)
        num = ball_mass(m, Ball(gallery.cross_center(n), r, PNorm.INF))
        den = ball_mass(m, Ball(gallery.cross_center(0), r, PNorm.INF))
        ratio = num / den
        band_rows.append([n, r, ratio, lo_bound, hi_bound,
                          "yes" if lo_bound < ratio < hi_bound else "no"])
    _emit(outdir, "band_ratios.csv",
          (["n", "r", "ratio", "lower_bound", "upper_bound", "inside_band"], band_rows),
          csv_on, svg_on, written)

    verdict_rows = []
    sup_traces: dict[str, RatioTrace] = {}
    for idx in range(6):
        u = gallery.cross_center(idx)
        targets = [gallery.cross_center(idx + k) for k in range(1, 7)]
        targets += list(gallery.cross_probe_points(idx).values())
        sample = TranslationSet(
            explicit=tuple(tuple(ui - ti for ui, ti in zip(u, t)) for t in targets)
        )
        weak = check_weak_mode(m, u, sample, RadiusSchedule.dyadic())
        band = RadiusSchedule.band(first=idx + 1, last=idx + 6)
        estrong = check_E_strong_mode(m, u, sample, band)
        uni = check_uniformity(m, u, sample.explicit[0], sample, r_star=0.5, schedule=band)
        verdict_rows.append([f"center-{idx}", weak.status.value, weak.limsup_est,
                             estrong.status.value, estrong.limsup_est, uni.status.value])
        sup_traces[f"center-{idx}"] = estrong.evidence[0]
    _emit(outdir, "verdicts.csv",
          (["candidate", "weak_status", "weak_limsup", "estrong_status",
            "estrong_limsup", "uniformity_status"], verdict_rows),
          csv_on, svg_on, written)

    _emit(outdir, "support.svg", support_figure(m), csv_on, svg_on, written)
    _emit(outdir, "ratios.svg",
          ratio_figure(sup_traces, "sup-over-translates ratios on band radii"),
          csv_on, svg_on, written)
    return written


def reproduce_no_mode(outdir: str, csv_on: bool = True, svg_on: bool = True) -> list[str]:
    """Domination witness for every integer candidate of the step density."""
    os.makedirs(outdir, exist_ok=True)
    written: list[str] = []
    params = gallery.NoModeParams()
    m = gallery.build_no_mode_density(params)
    bound = params.b / params.a

    grid = TranslationSet(explicit=tuple((float(k),) for k in range(1, params.n_pieces + 1)))
    sched = RadiusSchedule.dyadic()
    rows = []
    sup_traces: dict[str, RatioTrace] = {}
    for u in range(1, 9):
        witness = u + 1
        r = params.b ** -witness
        num = ball_mass(m, Ball((float(witness),), r))
        den = ball_mass(m, Ball((float(u),), r))
        verdict = check_strong_mode(m, (float(u),), grid, sched)
        rows.append([u, witness, r, num / den, bound,
                     "yes" if num / den >= bound - 1e-9 else "no", verdict.status.value])
        sup_traces[f"u={u}"] = verdict.evidence[0]
    _emit(outdir, "candidates.csv",
          (["candidate", "witness_center", "witness_radius", "witness_ratio",
            "growth_bound", "dominated", "strong_status"], rows),
          csv_on, svg_on, written)
    _emit(outdir, "support.svg", support_figure(m), csv_on, svg_on, written)
    _emit(outdir, "ratios.svg",
          ratio_figure(sup_traces, "sup-over-centers ratios"), csv_on, svg_on, written)
    return written


def reproduce_k_dependence(outdir: str, csv_on: bool = True, svg_on: bool = True) -> list[str]:
    """Closed-form masses and the 2x2 (center x norm) strong-mode matrix."""
    os.makedirs(outdir, exist_ok=True)
    written: list[str] = []
    m = gallery.build_k_dependence()

    closed_rows = []
    for r in (0.1, 0.25, 0.4):
        for center, norm in [((-1.0, 0.0), PNorm.ONE), ((-1.0, 0.0), PNorm.INF),
                             ((1.0, 0.0), PNorm.ONE), ((1.0, 0.0), PNorm.INF)]:
            got = ball_mass(m, Ball(center, r, norm))
            want = gallery.expected_mass("k-dependence", center, r, norm)
            closed_rows.append([f"({center[0]:g},{center[1]:g})", norm.value, r, got, want,
                                abs(got - want) / want])
    _emit(outdir, "closed_forms.csv",
          (["center", "norm", "r", "ball_mass", "closed_form", "rel_err"], closed_rows),
          csv_on, svg_on, written)

    grid = TranslationSet(grid=GridSpec(box=((-2.5, 2.5), (-2.5, 2.5)), spacing=1.0 / 64))
    sched = RadiusSchedule.dyadic(r0=0.5, levels=18, tail_window=6)
    matrix_rows = []
    sup_traces: dict[str, RatioTrace] = {}
    for center in ((1.0, 0.0), (-1.0, 0.0)):
        for norm in (PNorm.ONE, PNorm.INF):
            verdict = check_strong_mode(m, center, grid, sched, norm=norm)
            name = f"({center[0]:g},{center[1]:g}) {norm.value}"
            matrix_rows.append([f"({center[0]:g},{center[1]:g})", norm.value,
                                verdict.status.value, verdict.limsup_est, verdict.liminf_est])
            sup_traces[name] = verdict.evidence[0]
    _emit(outdir, "verdict_matrix.csv",
          (["center", "norm", "status", "limsup_est", "liminf_est"], matrix_rows),
          csv_on, svg_on, written)
    _emit(outdir, "support.svg", support_figure(m), csv_on, svg_on, written)
    _emit(outdir, "ratios.svg",
          ratio_figure(sup_traces, "sup-over-grid ratios by center and ball shape"),
          csv_on, svg_on, written)
    return written


_REPRODUCERS = {
    "example-4.2": reproduce_crossed_squares,
    "crossed-squares": reproduce_crossed_squares,
    "example-5.2": reproduce_no_mode,
    "no-mode": reproduce_no_mode,
    "example-5.3": reproduce_k_dependence,
    "k-dependence": reproduce_k_dependence,
}


def reproduce(report_id: str, outdir: str, csv_on: bool = True, svg_on: bool = True) -> list[str]:
    if report_id not in _REPRODUCERS:
        raise KeyError(
            f"unknown report id {report_id!r}; known: {', '.join(REPORT_IDS)}"
        )
    return _REPRODUCERS[report_id](outdir, csv_on, svg_on)
