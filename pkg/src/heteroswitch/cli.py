"""Command-line interface: analyze / paths / cusps / simulate / verify.

Exit codes: 0 success, 1 internal error, 2 usage error. Reports render as
text or JSON; the report paths additionally write matplotlib figures next to
their delimited output unless --no-figures is given.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .acceptance import CRITERIA, run_acceptance
from .fields import FIELD_NAMES, build_field
from .fixtures import available_fixtures, resolve_network
from .maps import compose_path, followable
from .network import NetworkFormatError
from .regions import (
    PowerRegion,
    intersects_near_origin,
    sample_oracle,
    to_log_system,
)
from .report import analyze_network, render_figures, render_json, render_text
from .simulate import SimConfig, empirical_switching_test
from .switching import enumerate_followable


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heteroswitch",
        description="Decide which finite paths near a quasi-simple heteroclinic "
                    "network are followable, and verify against simulation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="switching report for a network")
    p.add_argument("network", help=f"fixture name or JSON path "
                                   f"(fixtures: {', '.join(available_fixtures())})")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--depth", type=int, default=None,
                   help="path enumeration depth (default: max depth bound + 2)")
    p.add_argument("--figures", default=None, metavar="DIR",
                   help="directory for figures (default: alongside output)")
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("paths", help="enumerate followable paths from a node")
    p.add_argument("network")
    p.add_argument("--start", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--exact", action="store_true",
                   help="only paths with exactly --depth connections")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--debug", action="store_true",
                   help="dump transfer matrices and pulled-back systems")

    p = sub.add_parser("cusps", help="near-origin intersection of power regions")
    p.add_argument("file", help="JSON list of {i, j, a, alpha, orientation}")
    p.add_argument("--delta", type=float, default=1e-2)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--figures", default=None, metavar="DIR")
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("simulate", help="integrate an ensemble and record itineraries")
    p.add_argument("field", choices=FIELD_NAMES)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", default=None, help="JSON file of SimConfig overrides")
    p.add_argument("--out", default=None, metavar="CSV",
                   help="itinerary events as CSV")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--figures", default=None, metavar="DIR")
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("verify", help="run the acceptance battery")
    p.add_argument("--criteria", default=None,
                   help="comma-separated criterion numbers (default: all)")
    return parser


def _cmd_analyze(args) -> int:
    net = resolve_network(args.network)
    report = analyze_network(net, depth=args.depth)
    out = render_json(report) if args.format == "json" else render_text(report)
    sys.stdout.write(out)
    if not args.no_figures:
        outdir = Path(args.figures) if args.figures else Path.cwd()
        for path in render_figures(report, net, outdir):
            print(f"figure: {path}")
    return 0


def _cmd_paths(args) -> int:
    net = resolve_network(args.network)
    enum = enumerate_followable(net, args.start, args.depth)
    results = enum.of_length(args.depth) if args.exact else enum.results
    if args.format == "json":
        payload = {
            "start": args.start,
            "depth": args.depth,
            "paths": [
                {"path": list(p), "followable": bool(v)} for p, v in results
            ],
            "feasible": sum(bool(v) for _, v in results),
        }
        print(json.dumps(payload, indent=2))
    else:
        for p, v in results:
            print(f"{'FOLLOWABLE  ' if v else 'infeasible  '}{' -> '.join(p)}")
        print(f"{sum(bool(v) for _, v in results)} followable of {len(results)} paths")
    if args.debug:
        for p, v in results:
            if len(p) < 3:
                continue
            transfer = compose_path(net, p)
            print(f"\n# {' -> '.join(p)}")
            print(f"  sections: {transfer.map.domain} -> {transfer.map.codomain}")
            for row, axis in zip(transfer.map.matrix, transfer.map.codomain.axes):
                print(f"  eta'[{axis}] = "
                      + " + ".join(f"({c})*eta[{a}]"
                                   for c, a in zip(row, transfer.map.domain.axes)
                                   if c != 0))
            for row in transfer.pulled_back.rows:
                terms = " + ".join(
                    f"({c})*eta[{a}]"
                    for c, a in zip(row.coeffs, transfer.pulled_back.section.axes)
                    if c != 0)
                print(f"  constraint: {terms} > {row.rhs}  [{row.label}]")
    return 0


def _load_regions(path: str) -> list:
    doc = json.loads(Path(path).read_text())
    return [
        PowerRegion(int(r["i"]), int(r["j"]), float(r["a"]), float(r["alpha"]),
                    str(r.get("orientation", "thin")))
        for r in doc
    ]


def _cmd_cusps(args) -> int:
    regions = _load_regions(args.file)
    verdict = intersects_near_origin(regions)
    dim = verdict.system.dimension
    oracle = sample_oracle(regions, args.delta, args.samples, args.seed, dim)
    payload = {
        "regions": [str(r) for r in regions],
        "dimension": dim,
        "intersects_near_origin": verdict.intersects_near_origin,
        "witness_ray": verdict.witness_ray,
        "witness_base": verdict.witness_base,
        "certificate": None,
        "oracle": {"delta": args.delta, "samples": args.samples,
                   "hits": oracle.hits, "hit_fraction": oracle.hit_fraction,
                   "kind": oracle.kind},
        "agreement": (oracle.hits > 0) == verdict.intersects_near_origin,
    }
    if verdict.certificate is not None:
        payload["certificate"] = {
            "kind": verdict.certificate.kind,
            "multipliers": {
                str(regions[i]): str(q)
                for i, q in sorted(verdict.certificate.multipliers.items())
            },
        }
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(f"{len(regions)} regions in dimension {dim}:")
        for r in regions:
            print(f"  {r}")
        if verdict.intersects_near_origin:
            print("verdict: intersects every ball around the origin")
            print(f"  witness ray (in -log coordinates): {verdict.witness_ray}")
        else:
            print("verdict: empty near the origin")
            cert = payload["certificate"]
            print(f"  certificate ({cert['kind']}): nonnegative multipliers "
                  "combine the inequalities into a contradiction "
                  "(exact values in --format json):")
            for src, q in cert["multipliers"].items():
                print(f"    {float(Fraction(q)):.6g} * [{src}]")
        print(f"oracle cross-check: {oracle.hits}/{args.samples} hits at "
              f"delta={args.delta:g} ({oracle.kind}) -> "
              f"{'agrees' if payload['agreement'] else 'DISAGREES'}")
    if not args.no_figures:
        outdir = Path(args.figures) if args.figures else Path.cwd()
        fig_path = _render_cusp_figure(regions, verdict, outdir, Path(args.file).stem)
        if fig_path:
            print(f"figure: {fig_path}")
    return 0


def _render_cusp_figure(regions, verdict, outdir, stem) -> object:
    """2D slice sketch of the regions in the plane of the first region."""
    import numpy as np
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    i, j = regions[0].i, regions[0].j
    planar = [r for r in regions if {r.i, r.j} == {i, j}]
    if not planar:
        return None
    fig, ax = plt.subplots(figsize=(5, 5))
    t = np.linspace(1e-4, 0.2, 400)
    for r in planar:
        if (r.i, r.j) == (i, j):
            ax.plot(t ** r.alpha / r.a, t,
                    label=f"boundary of {r}")
        else:
            ax.plot(t, t ** r.alpha / r.a, label=f"boundary of {r}")
    ax.set_xlabel(f"x{i}")
    ax.set_ylabel(f"x{j}")
    ax.set_xlim(0, 0.2)
    ax.set_ylim(0, 0.2)
    verdict_txt = "intersects near 0" if verdict.intersects_near_origin else "empty near 0"
    ax.set_title(f"{stem}: {verdict_txt}")
    ax.legend(fontsize=7)
    path = outdir / f"{stem}_cusps.png"
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def _cmd_simulate(args) -> int:
    fieldobj = build_field(args.field)
    overrides = {}
    if args.config:
        overrides = json.loads(Path(args.config).read_text())
    cfg = SimConfig.for_field(fieldobj, ensemble=args.samples, seed=args.seed,
                              **overrides)
    result = empirical_switching_test(fieldobj, cfg)

    if args.out:
        out = Path(args.out)
        with out.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["member", "event_index", "event_type",
                             "node_or_edge", "time"])
            for itin in result.itineraries:
                for k, ev in enumerate(itin.events):
                    subject = ev.subject[0] if len(ev.subject) == 1 \
                        else "->".join(ev.subject)
                    writer.writerow([itin.member, k, ev.kind, subject,
                                     f"{ev.time:.9g}"])
                writer.writerow([itin.member, len(itin.events), "terminal",
                                 itin.terminal, ""])
        print(f"itineraries: {out}")

    summary = {
        "field": args.field,
        "ensemble": cfg.ensemble,
        "seed": cfg.seed,
        "violations": len(result.violations),
        "prefixes_checked": result.checked_prefixes,
        "terminals": {},
        "top_paths": [
            {"path": list(p), "count": c}
            for p, c in result.path_counts.most_common(10)
        ],
    }
    for itin in result.itineraries:
        summary["terminals"][itin.terminal] = summary["terminals"].get(itin.terminal, 0) + 1
    if args.format == "json":
        print(json.dumps(summary, indent=2))
    else:
        print(f"{args.field}: {cfg.ensemble} members, seed {cfg.seed}")
        print(f"  violations of cone verdicts: {summary['violations']}")
        print(f"  prefixes checked: {summary['prefixes_checked']}")
        print(f"  terminals: {summary['terminals']}")
        for entry in summary["top_paths"][:6]:
            print(f"  {entry['count']:4d} x {' -> '.join(entry['path'])}")

    if args.out:
        for path in _write_plot_data(fieldobj, cfg, result,
                                     Path(args.out).parent, args.field):
            print(f"plot data: {path}")
    if not args.no_figures and (args.out or args.figures):
        outdir = Path(args.figures) if args.figures else Path(args.out).parent
        for path in _render_sim_figures(fieldobj, cfg, result, outdir, args.field):
            print(f"figure: {path}")
    return 0


def _write_plot_data(fieldobj, cfg, result, outdir, stem) -> list:
    """Time series of one member and entry-time scatter data as CSV."""
    import numpy as np
    from .simulate import integrate, _seed_ensemble

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(cfg.seed)
    x0 = _seed_ensemble(fieldobj, cfg, rng)[0]
    traj = integrate(fieldobj, x0, cfg)
    ts_path = outdir / f"{stem}_timeseries.csv"
    with ts_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"x{k + 1}" for k in range(fieldobj.ambient_dimension)])
        for t in np.linspace(0.0, traj.ts[-1], 2000):
            writer.writerow([f"{t:.9g}"] + [f"{v:.9g}" for v in traj.eval(t)])
    sc_path = outdir / f"{stem}_sections.csv"
    with sc_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["member", "node", "entry_time"])
        for itin in result.itineraries:
            for ev in itin.events:
                if ev.kind == "entered_node":
                    writer.writerow([itin.member, ev.subject[0], f"{ev.time:.9g}"])
    return [ts_path, sc_path]


def _render_sim_figures(fieldobj, cfg, result, outdir, stem) -> list:
    import numpy as np
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from .simulate import integrate, _seed_ensemble

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []

    rng = np.random.default_rng(cfg.seed)
    x0 = _seed_ensemble(fieldobj, cfg, rng)[0]
    traj = integrate(fieldobj, x0, cfg)
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ts = np.linspace(0, traj.ts[-1], 2000)
    ys = np.array([traj.eval(t) for t in ts])
    for k in range(ys.shape[1]):
        ax.plot(ts, ys[:, k], lw=0.9, label=f"x{k + 1}")
    ax.set_xlabel("t")
    ax.set_ylabel("coordinates")
    ax.set_title(f"{stem}: member 0 time series")
    ax.legend(fontsize=7, ncol=min(6, ys.shape[1]))
    p = outdir / f"{stem}_timeseries.png"
    fig.savefig(p, dpi=150, bbox_inches="tight")
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    events = [
        (ev.subject[0], ev.time, itin.member)
        for itin in result.itineraries[:200]
        for ev in itin.events if ev.kind == "entered_node"
    ]
    nodes = sorted({e[0] for e in events})
    index = {v: k for k, v in enumerate(nodes)}
    if events:
        ax.scatter([e[1] for e in events], [index[e[0]] for e in events],
                   s=6, c=[e[2] for e in events], cmap="viridis", alpha=0.6)
    ax.set_yticks(range(len(nodes)), nodes)
    ax.set_xlabel("entry time")
    ax.set_title(f"{stem}: node entries across the ensemble")
    p = outdir / f"{stem}_sections.png"
    fig.savefig(p, dpi=150, bbox_inches="tight")
    plt.close(fig)
    paths.append(p)
    return paths


def _cmd_verify(args) -> int:
    numbers = None
    if args.criteria:
        try:
            numbers = sorted(int(tok) for tok in args.criteria.split(","))
        except ValueError:
            print(f"error: malformed --criteria {args.criteria!r}", file=sys.stderr)
            raise SystemExit(2)
        unknown = [n for n in numbers if n not in CRITERIA]
        if unknown:
            print(f"error: unknown criteria {unknown}", file=sys.stderr)
            raise SystemExit(2)
    results = run_acceptance(numbers, progress=lambda s: print(s, flush=True))
    print()
    failed = [r for r in results if not r.passed]
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.number:2d}. {r.name} "
              f"({r.elapsed:.1f}s)")
    print(f"\n{len(results) - len(failed)}/{len(results)} criteria passed")
    return 0 if not failed else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "analyze": _cmd_analyze,
        "paths": _cmd_paths,
        "cusps": _cmd_cusps,
        "simulate": _cmd_simulate,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (NetworkFormatError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
