"""Command-line front end.

Subcommands:

* ``gallery list`` / ``gallery build <id> --out measure.json``
* ``mass --gallery k-dependence --center -1,0 --r 0.25 --norm linf``
* ``classify {weak,strong,estrong,local} ...`` writes a verdict JSON and a
  trace CSV (and optionally SVG figures); any verdict exits 0, operational
  errors exit 1.
* ``reproduce {example-4.2,example-5.2,example-5.3}`` writes the benchmark
  report files for the named scenario.
* ``oracle compare`` cross-validates the exact kernel against the
  Monte-Carlo and quadrature estimators on randomised cases.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import gallery, reports
from .analysis import (
    DEFAULT_TOL,
    EmptySampleError,
    GridSpec,
    LocalWindow,
    NotInSupportError,
    RadiusSchedule,
    TranslationSet,
    check_E_strong_mode,
    check_local_mode,
    check_strong_mode,
    check_weak_mode,
)
from .measure import Ball, Measure, PNorm, ball_mass, load_measure, save_measure
from .oracle import McConfig, mc_ball_mass, quadrature_ball_mass


def _parse_point(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(","))


def _parse_points(text: str) -> tuple[tuple[float, ...], ...]:
    return tuple(_parse_point(chunk) for chunk in text.split(";") if chunk.strip())


def _parse_box(text: str) -> tuple[tuple[float, float], ...]:
    vals = [float(v) for v in text.split(",")]
    if len(vals) == 2:
        return ((vals[0], vals[1]),)
    if len(vals) == 4:
        return ((vals[0], vals[1]), (vals[2], vals[3]))
    raise ValueError("grid box needs 2 (1-D) or 4 (2-D) comma-separated numbers")


def _load_run_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as handle:
        return json.load(handle)


def _resolve_measure(args, config: dict) -> Measure:
    gallery_id = args.gallery or config.get("gallery")
    measure_path = args.measure or config.get("measure")
    if (gallery_id is None) == (measure_path is None):
        raise ValueError("pass exactly one of --gallery or --measure")
    if gallery_id is not None:
        return gallery.build(gallery_id)
    return load_measure(measure_path)


def _resolve_schedule(args, config: dict) -> RadiusSchedule:
    spec = config.get("schedule", {})
    kind = args.schedule or spec.get("kind", "dyadic")
    tail = args.tail if args.tail is not None else spec.get("tail_window", 6)
    if kind == "dyadic":
        r0 = args.r0 if args.r0 is not None else spec.get("r0", 0.5)
        levels = args.levels if args.levels is not None else spec.get("levels", 24)
        return RadiusSchedule.dyadic(r0=r0, levels=levels, tail_window=tail)
    if kind == "band":
        first = args.band_first if args.band_first is not None else spec.get("first", 1)
        last = args.band_last if args.band_last is not None else spec.get("last", 6)
        return RadiusSchedule.band(first=first, last=last, tail_window=min(tail, last - first + 1))
    raise ValueError(f"unknown schedule kind {kind!r}")


def _resolve_translations(args, config: dict) -> TranslationSet:
    pts = ()
    if args.e_points:
        pts = _parse_points(args.e_points)
    elif "e_points" in config:
        pts = tuple(tuple(p) for p in config["e_points"])
    grid = None
    box_text = args.e_grid_box or config.get("e_grid_box")
    if box_text:
        spacing = args.e_grid_spacing or config.get("e_grid_spacing")
        if spacing is None:
            raise ValueError("an E grid needs --e-grid-spacing")
        box = _parse_box(box_text) if isinstance(box_text, str) else tuple(tuple(b) for b in box_text)
        grid = GridSpec(box=box, spacing=float(spacing))
    dense = bool(args.e_dense or config.get("e_dense", False))
    return TranslationSet(explicit=pts, grid=grid, dense_intent=dense)


def _resolve_grid(args, config: dict) -> TranslationSet:
    box_text = args.grid_box or config.get("grid_box")
    spacing = args.grid_spacing or config.get("grid_spacing")
    if box_text is None or spacing is None:
        raise ValueError("strong/local classification needs --grid-box and --grid-spacing")
    box = _parse_box(box_text) if isinstance(box_text, str) else tuple(tuple(b) for b in box_text)
    return TranslationSet(grid=GridSpec(box=box, spacing=float(spacing)))


def cmd_gallery(args) -> int:
    if args.gallery_cmd == "list":
        for gid in gallery.GALLERY_IDS:
            print(gid)
        return 0
    kwargs = {}
    if args.alpha is not None:
        kwargs["alpha"] = args.alpha
    if args.n is not None:
        key = {"crossed-squares": "n_crosses", "no-mode": "n_pieces",
               "two-line-gaussian": "m_segments"}.get(args.id)
        if key is None:
            raise ValueError(f"--n does not apply to {args.id}")
        kwargs[key] = args.n
    if args.a is not None:
        kwargs["a"] = args.a
    if args.b is not None:
        kwargs["b"] = args.b
    try:
        measure = gallery.build(args.id, **kwargs)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    save_measure(measure, args.out)
    print(f"wrote {args.out} ({len(measure.components)} components)")
    return 0


def cmd_mass(args) -> int:
    config = _load_run_config(args.config)
    measure = _resolve_measure(args, config)
    center = _parse_point(args.center)
    norm = PNorm.parse(args.norm)
    print(format(ball_mass(measure, Ball(center, args.r, norm)), ".17g"))
    return 0


def cmd_classify(args) -> int:
    config = _load_run_config(args.config)
    measure = _resolve_measure(args, config)
    schedule = _resolve_schedule(args, config)
    norm = PNorm.parse(args.norm if args.norm else config.get("norm", "linf"))
    tol = args.tol if args.tol is not None else config.get("tol", DEFAULT_TOL)
    u = _parse_point(args.u) if args.u else tuple(config["u"])

    if args.mode == "weak":
        verdict = check_weak_mode(measure, u, _resolve_translations(args, config),
                                  schedule, tol=tol, norm=norm)
    elif args.mode == "estrong":
        verdict = check_E_strong_mode(measure, u, _resolve_translations(args, config),
                                      schedule, tol=tol, norm=norm)
    elif args.mode == "strong":
        verdict = check_strong_mode(measure, u, _resolve_grid(args, config),
                                    schedule, tol=tol, norm=norm)
    else:
        if args.window_radius is None:
            raise ValueError("local classification needs --window-radius")
        window = LocalWindow(PNorm.parse(args.window_norm), args.window_radius)
        verdict = check_local_mode(measure, u, window, schedule, tol=tol,
                                   search_grid=_resolve_grid(args, config), norm=norm)

    prefix = args.out_prefix or config.get("out_prefix") or f"classify-{args.mode}"
    trace_path = prefix + "-trace.csv"
    reports.write_trace_csv(verdict.evidence[0], trace_path)
    reports.write_verdict_json(verdict, prefix + "-verdict.json", trace_file=trace_path)
    if args.svg:
        fig = reports.ratio_figure({args.mode: verdict.evidence[0]},
                                   f"{args.mode} ratios at u={args.u}")
        reports.save_figure(fig, prefix + "-ratios.svg")
    print(f"{verdict.status.value} limsup_est={verdict.limsup_est:.12g} "
          f"liminf_est={verdict.liminf_est:.12g}")
    return 0


def cmd_reproduce(args) -> int:
    written = reports.reproduce(args.id, args.outdir, csv_on=args.csv, svg_on=args.svg)
    for path in written:
        print(path)
    return 0


def cmd_oracle(args) -> int:
    rng = np.random.Generator(np.random.Philox(key=args.seed))
    rows = []
    all_ok = True
    for case in range(args.cases):
        measure, ball = _random_case(rng, case)
        exact = ball_mass(measure, ball)
        estimate, se = mc_ball_mass(measure, ball, McConfig(args.samples, args.seed + case + 1))
        quad = quadrature_ball_mass(measure, ball, args.subdivisions)
        mc_ok = abs(estimate - exact) <= 5.0 * se
        quad_ok = abs(quad - exact) <= 4.0 * sum(c.mass for c in measure.components) / args.subdivisions
        ok = mc_ok and quad_ok
        all_ok = all_ok and ok
        rows.append([f"case-{case}", exact, estimate, se, quad, "pass" if ok else "fail"])
    reports.write_rows_csv(args.out, ["case_id", "exact", "mc_estimate", "std_error",
                                      "quadrature", "status"], rows)
    print(f"wrote {args.out} ({sum(1 for r in rows if r[-1] == 'pass')}/{len(rows)} pass)")
    return 0


def _random_case(rng: np.random.Generator, case: int):
    """Randomised (measure, ball) pair: segment mixtures and step densities."""
    from .measure import IntervalComponent, SegmentComponent, interval_measure, segment_measure

    if case % 3 == 2:
        comps = []
        cursor = float(rng.uniform(-2.0, -1.0))
        for _ in range(int(rng.integers(2, 6))):
            width = float(rng.uniform(0.2, 0.8))
            comps.append(IntervalComponent(cursor, cursor + width, float(rng.uniform(0.1, 3.0))))
            cursor += width + float(rng.uniform(0.05, 0.5))
        measure = interval_measure(comps, label=f"random-steps-{case}")
        center = (float(rng.uniform(-2.0, cursor)),)
        return measure, Ball(center, float(rng.uniform(0.05, 1.0)))
    comps = []
    for _ in range(int(rng.integers(2, 7))):
        a = rng.uniform(-2.0, 2.0, size=2)
        b = a + rng.uniform(-1.5, 1.5, size=2)
        while np.allclose(a, b):
            b = a + rng.uniform(-1.5, 1.5, size=2)
        comps.append(SegmentComponent(tuple(a), tuple(b), float(rng.uniform(0.1, 2.0))))
    measure = segment_measure(comps, label=f"random-segments-{case}")
    norm = [PNorm.ONE, PNorm.TWO, PNorm.INF][case % 3]
    center = tuple(rng.uniform(-2.0, 2.0, size=2))
    return measure, Ball(center, float(rng.uniform(0.1, 1.5)), norm)


def _add_measure_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gallery", help="gallery measure id")
    parser.add_argument("--measure", help="path to a measure JSON file")
    parser.add_argument("--config", help="JSON run-config supplying defaults")


def _add_schedule_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--schedule", choices=["dyadic", "band"])
    parser.add_argument("--r0", type=float, help="largest dyadic radius")
    parser.add_argument("--levels", type=int, help="number of dyadic halvings")
    parser.add_argument("--band-first", type=int, help="first band index")
    parser.add_argument("--band-last", type=int, help="last band index")
    parser.add_argument("--tail", type=int, help="tail window length")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ballmodes", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gallery = sub.add_parser("gallery", help="list or build the benchmark measures")
    gallery_sub = p_gallery.add_subparsers(dest="gallery_cmd", required=True)
    gallery_sub.add_parser("list", help="print known gallery ids")
    p_build = gallery_sub.add_parser("build", help="write a gallery measure as JSON")
    p_build.add_argument("id")
    p_build.add_argument("--out", required=True)
    p_build.add_argument("--alpha", type=float)
    p_build.add_argument("--n", type=int, help="component count parameter")
    p_build.add_argument("--a", type=float)
    p_build.add_argument("--b", type=float)
    p_gallery.set_defaults(func=cmd_gallery)

    p_mass = sub.add_parser("mass", help="print the mass of one open ball")
    _add_measure_args(p_mass)
    p_mass.add_argument("--center", required=True)
    p_mass.add_argument("--r", type=float, required=True)
    p_mass.add_argument("--norm", default="linf")
    p_mass.set_defaults(func=cmd_mass)

    p_classify = sub.add_parser("classify", help="classify a candidate point")
    p_classify.add_argument("mode", choices=["weak", "strong", "estrong", "local"])
    _add_measure_args(p_classify)
    _add_schedule_args(p_classify)
    p_classify.add_argument("--u", help="candidate point, comma separated")
    p_classify.add_argument("--norm")
    p_classify.add_argument("--tol", type=float)
    p_classify.add_argument("--e-points", help="translations: x,y;x,y;...")
    p_classify.add_argument("--e-grid-box", help="translation lattice box: xlo,xhi[,ylo,yhi]")
    p_classify.add_argument("--e-grid-spacing", type=float)
    p_classify.add_argument("--e-dense", action="store_true",
                            help="record that the sample stands for a dense set")
    p_classify.add_argument("--grid-box", help="search lattice box: xlo,xhi[,ylo,yhi]")
    p_classify.add_argument("--grid-spacing", type=float)
    p_classify.add_argument("--window-norm", default="l2")
    p_classify.add_argument("--window-radius", type=float)
    p_classify.add_argument("--out-prefix")
    p_classify.add_argument("--svg", action="store_true", help="also render a ratio figure")
    p_classify.set_defaults(func=cmd_classify)

    p_reproduce = sub.add_parser("reproduce", help="write a benchmark report")
    p_reproduce.add_argument("id", choices=sorted(reports.REPORT_IDS))
    p_reproduce.add_argument("--outdir", default="reports")
    p_reproduce.add_argument("--csv", action=argparse.BooleanOptionalAction, default=True)
    p_reproduce.add_argument("--svg", action=argparse.BooleanOptionalAction, default=True)
    p_reproduce.set_defaults(func=cmd_reproduce)

    p_oracle = sub.add_parser("oracle", help="cross-validate the exact kernel")
    oracle_sub = p_oracle.add_subparsers(dest="oracle_cmd", required=True)
    p_compare = oracle_sub.add_parser("compare")
    p_compare.add_argument("--cases", type=int, default=20)
    p_compare.add_argument("--samples", type=int, default=100_000)
    p_compare.add_argument("--subdivisions", type=int, default=100_000)
    p_compare.add_argument("--seed", type=int, default=20260809)
    p_compare.add_argument("--out", default="oracle_compare.csv")
    p_oracle.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NotInSupportError, EmptySampleError, OSError, ValueError, KeyError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
