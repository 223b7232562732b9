"""Command-line entry point: ``citepath <stage> ...``.

Exit codes: 0 success, 1 input error, 2 analysis error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from citepath import graphio, indicators
from citepath.concepts import ConceptError, affiliations_from_records, concept_path
from citepath.network import NetworkError, build_network, validate_acyclic
from citepath.pipeline import (
    SCHEME_CHOICES,
    WEIGHT_CHOICES,
    PipelineError,
    RunConfig,
    _SCHEME_TAGS,
    indicator_reports,
    Bundle,
    load_config_file,
    load_records,
    path_from_pajek,
    path_to_pajek,
    selection_label,
    run_pipeline,
    weighted_from_pajek,
    weighted_to_pajek,
)
from citepath.records import RecordError, dump_records
from citepath.search import run_scheme
from citepath.selection import select_paths, u_matrix
from citepath.weighting import ConvergenceError, fv_weights, measures_csv, spc_weights

EXIT_OK, EXIT_INPUT, EXIT_ANALYSIS = 0, 1, 2

INPUT_ERRORS = (RecordError, graphio.PajekFormatError, OSError, json.JSONDecodeError)
ANALYSIS_ERRORS = (NetworkError, ConvergenceError, ConceptError)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_ingest(args) -> int:
    records, report = load_records(args.records)
    if args.strict and report["issues"]:
        first = report["issues"][0]
        raise RecordError(f"line {first['line']}: {first['reason']}")
    _emit(dump_records(records), args.output)
    print(json.dumps(report, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_build(args) -> int:
    records, _ = load_records(args.records)
    net, report = build_network(records)
    net, cycles = validate_acyclic(net, "break_cycles" if args.cycles == "break" else "fail")
    _emit(graphio.write_pajek_net(net), args.output)
    if args.edges:
        _emit(graphio.write_edge_list(net), args.edges)
    summary = {**report.as_dict(), "nodes": len(net), "arcs": len(net.arcs), "cycles": cycles.as_dict()}
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_weight(args) -> int:
    net = graphio.read_pajek_net(Path(args.network).read_text(encoding="utf-8"))
    if args.weights == "spc":
        wnet = spc_weights(net)
    else:
        fv = fv_weights(net, teleport=args.teleport)
        wnet = fv.weighted
        if args.measures:
            _emit(measures_csv(fv.measures), args.measures)
    _emit(weighted_to_pajek(wnet), args.output)
    return EXIT_OK


def cmd_search(args) -> int:
    wnet = weighted_from_pajek(Path(args.network).read_text(encoding="utf-8"))
    path = run_scheme(wnet, _SCHEME_TAGS[args.scheme], args.tolerance, args.key_routes)
    _emit(path_to_pajek(path, wnet), args.output)
    if args.dot:
        _emit(graphio.network_to_dot(path.as_network(wnet), path.label.replace(" ", "_")), args.dot)
    return EXIT_OK


def _labelled_paths(specs: list[str]):
    paths = {}
    for spec in specs:
        text = Path(spec.partition("=")[2] or spec).read_text(encoding="utf-8")
        path = path_from_pajek(text)
        label = spec.partition("=")[0] if "=" in spec else selection_label(path)
        paths[label] = path
    return paths


def cmd_select(args) -> int:
    paths = _labelled_paths(args.paths)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    (out / "u_matrix.csv").write_text(u_matrix(paths).to_csv(), encoding="utf-8")
    sel = select_paths(paths, args.delta)
    (out / "selection.json").write_text(indicators.to_json(sel.as_dict()), encoding="utf-8")
    for e in sel.log:
        print(e.describe(), file=sys.stderr)
    print("\n".join(sel.selected))
    return EXIT_OK


def cmd_concepts(args) -> int:
    records, _ = load_records(args.records)
    path = path_from_pajek(Path(args.path).read_text(encoding="utf-8"))
    cp = concept_path(path, affiliations_from_records(records))
    _emit(cp.to_pajek() if args.format == "net" else cp.to_dot(), args.output)
    if args.labels:
        _emit(cp.labels_csv(), args.labels)
    return EXIT_OK


def cmd_indicators(args) -> int:
    records, _ = load_records(args.records)
    if args.group_by == "year":
        table = indicators.annual_table(records)
        text = table.to_csv() if args.format == "csv" else indicators.to_json(table.to_json())
    else:
        rows = indicators.entity_table(records, args.group_by)
        if args.format == "csv":
            text = indicators.entity_csv(rows, args.group_by)
        else:
            text = indicators.to_json(
                [{"entity": r.entity, "tp": r.tp, "tc": r.tc, "cpp": r.cpp, "cited_pct": r.cited_pct} for r in rows]
            )
    _emit(text, args.output)
    return EXIT_OK


def cmd_report(args) -> int:
    records, _ = load_records(args.records)
    config = RunConfig(
        records=args.records,
        gender_map=args.gender_map,
        mentions=args.mentions,
        min_accuracy=args.min_accuracy,
    )
    indicator_reports(Bundle(Path(args.output)), records, config, prefix="")
    return EXIT_OK


def cmd_run(args) -> int:
    file_values = load_config_file(args.config) if args.config else {}
    flags = {
        "records": args.records,
        "gender_map": args.gender_map,
        "mentions": args.mentions,
        "weights": args.weights,
        "schemes": args.scheme,
        "tolerance": args.tolerance,
        "key_routes": args.key_routes,
        "delta": args.delta,
        "cycles": {"break": "break_cycles", "fail": "fail"}.get(args.cycles),
        "output": args.output,
    }
    config = RunConfig.from_sources(file_values, flags)
    try:
        config.validate()
    except ValueError as exc:
        raise RecordError(str(exc)) from exc
    manifest = run_pipeline(config)
    print(f"{len(manifest['artifacts'])} artifacts written to {config.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="citepath", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="validate a JSON-lines records file")
    s.add_argument("records")
    s.add_argument("-o", "--output")
    s.add_argument("--strict", action="store_true", help="fail on the first malformed line")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("build", help="build the knowledge-flow citation network")
    s.add_argument("records")
    s.add_argument("-o", "--output", help="Pajek .net output")
    s.add_argument("--edges", help="also write a citing,cited CSV edge list")
    s.add_argument("--cycles", choices=("fail", "break"), default="fail")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("weight", help="weight arcs by SPC or FV gradient")
    s.add_argument("network")
    s.add_argument("--weights", choices=WEIGHT_CHOICES, default="spc")
    s.add_argument("--teleport", type=float, default=1e-6)
    s.add_argument("--measures", help="CSV of per-node FV measures")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_weight)

    s = sub.add_parser("search", help="extract a main path from a weighted network")
    s.add_argument("network")
    s.add_argument("--scheme", choices=SCHEME_CHOICES, default="fw")
    s.add_argument("--tolerance", type=float, default=0.1)
    s.add_argument("--key-routes", type=int, default=10)
    s.add_argument("--dot")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("select", help="U-matrix and uniqueness-based path selection")
    s.add_argument("paths", nargs="+", help="path files, optionally LABEL=FILE")
    s.add_argument("--delta", type=float, default=0.65)
    s.add_argument("-o", "--output", required=True, help="output directory")
    s.set_defaults(func=cmd_select)

    s = sub.add_parser("concepts", help="relabel a path by top concepts")
    s.add_argument("path")
    s.add_argument("--records", required=True)
    s.add_argument("--format", choices=("dot", "net"), default="dot")
    s.add_argument("--labels", help="CSV of chosen work labels")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_concepts)

    s = sub.add_parser("indicators", help="publication/citation indicator tables")
    s.add_argument("records")
    s.add_argument("--group-by", choices=("year",) + indicators.ENTITY_KEYS, default="year")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_indicators)

    s = sub.add_parser("report", help="write every indicator report to a directory")
    s.add_argument("records")
    s.add_argument("--gender-map")
    s.add_argument("--mentions")
    s.add_argument("--min-accuracy", type=float, default=70.0)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("run", help="run the whole pipeline")
    s.add_argument("records", nargs="?")
    s.add_argument("--config", help="JSON config file (flags override it)")
    s.add_argument("--gender-map")
    s.add_argument("--mentions")
    s.add_argument("--weights", choices=WEIGHT_CHOICES, action="append")
    s.add_argument("--scheme", choices=SCHEME_CHOICES, action="append")
    s.add_argument("--tolerance", type=float)
    s.add_argument("--key-routes", type=int)
    s.add_argument("--delta", type=float)
    s.add_argument("--cycles", choices=("fail", "break"))
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_run)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if not args.verbose:
        warnings.simplefilter("ignore", RuntimeWarning)
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"error in stage {exc.stage}: {exc.cause}", file=sys.stderr)
        return EXIT_INPUT if exc.stage == "ingest" or isinstance(exc.cause, INPUT_ERRORS) else EXIT_ANALYSIS
    except INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (*ANALYSIS_ERRORS, ValueError) as exc:
        print(f"analysis error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS


if __name__ == "__main__":
    sys.exit(main())
