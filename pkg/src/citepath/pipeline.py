"""End-to-end pipeline: ingest, build, weight, search, select, relabel, report.

Each stage writes plain files (JSON lines, Pajek, CSV, DOT, JSON) that the
matching CLI subcommand can reload, so a run can be resumed at any stage
boundary. ``manifest.json`` lists every artifact with its SHA-256 digest.
"""

from __future__ import annotations

import hashlib
import json
import logging
import warnings
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Mapping

from citepath import graphio, indicators
from citepath.concepts import affiliations_from_records, concept_path
from citepath.network import CitationNetwork, build_network, validate_acyclic
from citepath.records import (
    PublicationRecord,
    RecordError,
    dump_records,
    parse_gender_map,
    parse_mentions,
    read_records,
)
from citepath.search import DEFAULT_KEY_ROUTES, DEFAULT_TOLERANCE, TrajectoryPath, run_scheme
from citepath.selection import DEFAULT_DELTA, select_paths, u_matrix
from citepath.weighting import (
    DEFAULT_MAX_ITERS,
    DEFAULT_TELEPORT,
    DEFAULT_TOL,
    WeightedNetwork,
    fv_weights,
    measures_csv,
    spc_weights,
)

log = logging.getLogger(__name__)

WEIGHT_CHOICES = ("spc", "fv")
SCHEME_CHOICES = ("fw", "bw", "kr", "cpm", "kr-local", "kr-global")
_SCHEME_TAGS = {
    "fw": "FW",
    "bw": "BW",
    "cpm": "CPM",
    "kr": "KR-local",
    "kr-local": "KR-local",
    "kr-global": "KR-global",
}
_PATH_HEADER = "% citepath path"
_WEIGHTS_HEADER = "% citepath weights"


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {cause}")


@dataclass
class RunConfig:
    records: str = ""
    gender_map: str | None = None
    mentions: str | None = None
    weights: tuple[str, ...] = WEIGHT_CHOICES
    schemes: tuple[str, ...] = ("fw", "bw", "kr", "cpm")
    tolerance: float = DEFAULT_TOLERANCE
    key_routes: int = DEFAULT_KEY_ROUTES
    delta: float = DEFAULT_DELTA
    cycles: str = "fail"
    output: str = "citepath-out"
    teleport: float = DEFAULT_TELEPORT
    eig_tol: float = DEFAULT_TOL
    eig_max_iters: int = DEFAULT_MAX_ITERS
    min_accuracy: float = indicators.DEFAULT_MIN_ACCURACY
    altmetric_window: tuple[int, int] = indicators.DEFAULT_ALTMETRIC_WINDOW
    formats: tuple[str, ...] = ("net", "dot")

    def validate(self) -> None:
        if not self.records:
            raise ValueError("no records file given")
        if not 0.0 <= self.tolerance < 1.0:
            raise ValueError("tolerance must lie in [0, 1)")
        if not 0.5 < self.delta <= 1.0:
            raise ValueError("delta must lie in (0.5, 1]")
        if self.key_routes < 1:
            raise ValueError("key-route count must be at least 1")
        if self.cycles not in ("fail", "break_cycles"):
            raise ValueError("cycles must be 'fail' or 'break_cycles'")
        bad = [w for w in self.weights if w not in WEIGHT_CHOICES]
        bad += [s for s in self.schemes if s not in SCHEME_CHOICES]
        if bad:
            raise ValueError(f"unknown weight/search choice {bad[0]!r}")

    @classmethod
    def from_sources(cls, file_values: Mapping[str, Any], flag_values: Mapping[str, Any]) -> RunConfig:
        """Merge defaults < config file < command-line flags (None = unset)."""
        known = {f.name for f in fields(cls)}
        merged: dict[str, Any] = {}
        for source in (file_values, flag_values):
            for k, v in source.items():
                k = k.replace("-", "_")
                if k not in known:
                    raise ValueError(f"unknown config key {k!r}")
                if v is not None:
                    merged[k] = tuple(v) if isinstance(v, list) else v
        return cls(**merged)


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class Bundle:
    """Output directory plus the running list of written artifacts."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.artifacts: list[str] = []

    def write(self, rel: str, text: str) -> Path:
        path = self.root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        self.artifacts.append(rel)
        return path

    def manifest(self, extra: Mapping[str, Any]) -> dict:
        digests = {rel: sha256_file(self.root / rel) for rel in sorted(self.artifacts)}
        return {**extra, "artifacts": digests}


# -- stage helpers shared with the CLI ---------------------------------------


def weighted_to_pajek(wnet: WeightedNetwork) -> str:
    return f"{_WEIGHTS_HEADER} {wnet.scheme}\n" + graphio.write_pajek_net(wnet.as_network())


def weighted_from_pajek(text: str, scheme: str | None = None) -> WeightedNetwork:
    first = text.splitlines()[0] if text else ""
    if scheme is None:
        scheme = first[len(_WEIGHTS_HEADER):].strip() if first.startswith(_WEIGHTS_HEADER) else "SPC"
    return WeightedNetwork.from_network(graphio.read_pajek_net(text), scheme)


def path_to_pajek(path: TrajectoryPath, wnet: WeightedNetwork) -> str:
    header = f"{_PATH_HEADER} scheme={path.scheme} weights={path.weight_scheme}\n"
    return header + graphio.write_pajek_net(path.as_network(wnet))


def path_from_pajek(text: str) -> TrajectoryPath:
    first = text.splitlines()[0] if text else ""
    meta = {}
    if first.startswith(_PATH_HEADER):
        for tok in first[len(_PATH_HEADER):].split():
            k, _, v = tok.partition("=")
            meta[k] = v
    net = graphio.read_pajek_net(text)
    w = net.weights or {}
    total = sum(w[a] for a in net.arcs if a in w)
    return TrajectoryPath(
        meta.get("scheme", "FW"),
        meta.get("weights", "SPC"),
        frozenset(net.nodes),
        frozenset(net.arcs),
        total,
    )


def slug(label: str) -> str:
    return label.lower().replace(" ", "_")


def candidate_label(weight: str, scheme: str) -> str:
    """Scheme label as used for path selection (key-route local reported as KR)."""
    tag = {"KR-local": "KR"}.get(_SCHEME_TAGS[scheme], _SCHEME_TAGS[scheme])
    return f"{'SPC' if weight == 'spc' else 'FV'} {tag}"


def selection_label(path: TrajectoryPath) -> str:
    """Label of a loaded path, matching the names a full run gives candidates."""
    return path.label.replace(" KR-local", " KR")


def load_records(path: str) -> tuple[list[PublicationRecord], dict]:
    result = read_records(path)
    report = {
        "lines": result.lines_read,
        "accepted": len(result.records),
        "issues": [{"line": i.line, "reason": i.reason} for i in result.issues],
    }
    return result.records, report


def indicator_reports(
    bundle: Bundle,
    records: list[PublicationRecord],
    config: RunConfig,
    prefix: str = "indicators/",
) -> None:
    table = indicators.annual_table(records)
    bundle.write(prefix + "annual.csv", table.to_csv())
    bundle.write(prefix + "annual.json", indicators.to_json(table.to_json()))
    for key in indicators.ENTITY_KEYS:
        rows = indicators.entity_table(records, key)
        bundle.write(prefix + f"{key}.csv", indicators.entity_csv(rows, key))
    bundle.write(prefix + "authorship.csv", indicators.authorship_buckets(records).to_csv())
    bundle.write(prefix + "collaboration.csv", indicators.collaboration_shares(records).to_csv())
    oa = indicators.oa_breakdown(records)
    bundle.write(prefix + "oa_status.csv", oa.to_csv())
    bundle.write(prefix + "oa_types.csv", oa.types_csv())
    if config.gender_map:
        gmap = parse_gender_map(Path(config.gender_map).read_text(encoding="utf-8"))
        dist = indicators.gender_distribution(records, gmap, config.min_accuracy)
        bundle.write(prefix + "gender.csv", dist.to_csv())
    if config.mentions:
        mentions = parse_mentions(Path(config.mentions).read_text(encoding="utf-8"))
        cov = indicators.altmetric_coverage(records, mentions, tuple(config.altmetric_window))
        bundle.write(prefix + "altmetric.csv", cov.to_csv())


def _stage(name: str):
    def wrap(fn):
        def run(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except PipelineError:
                raise
            except (RecordError, ValueError, KeyError, RuntimeError, OSError) as exc:
                raise PipelineError(name, exc) from exc

        return run

    return wrap


def run_pipeline(config: RunConfig) -> dict:
    """Run every stage and return the manifest (also written to manifest.json)."""
    config.validate()
    bundle = Bundle(Path(config.output))

    @_stage("ingest")
    def ingest():
        records, report = load_records(config.records)
        bundle.write("ingest/records.jsonl", dump_records(records))
        bundle.write("ingest/report.json", indicators.to_json(report))
        return records

    @_stage("build")
    def build(records):
        net, report = build_network(records)
        net, cycles = validate_acyclic(net, "fail" if config.cycles == "fail" else "break_cycles")
        bundle.write("network/network.net", graphio.write_pajek_net(net))
        bundle.write("network/edges.csv", graphio.write_edge_list(net))
        summary = {**report.as_dict(), "nodes": len(net), "arcs": len(net.arcs), "cycles": cycles.as_dict()}
        bundle.write("network/report.json", indicators.to_json(summary))
        return net

    @_stage("weight")
    def weight(net: CitationNetwork):
        out = {}
        for w in config.weights:
            if w == "spc":
                wnet = spc_weights(net)
            else:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", RuntimeWarning)
                    fv = fv_weights(net, config.eig_max_iters, config.eig_tol, config.teleport)
                wnet = fv.weighted
                bundle.write("weights/fv_measures.csv", measures_csv(fv.measures))
                bundle.write(
                    "weights/fv_gradients.csv",
                    "tail,head,gradient,fv_effect\n"
                    + "".join(f"{t},{h},{g!r},{int(g < 0)}\n" for (t, h), g in fv.gradients.items()),
                )
            bundle.write(f"weights/{w}.net", weighted_to_pajek(wnet))
            out[w] = wnet
        return out

    @_stage("search")
    def search(wnets):
        paths: dict[str, TrajectoryPath] = {}
        for w, wnet in wnets.items():
            for s in config.schemes:
                path = run_scheme(wnet, _SCHEME_TAGS[s], config.tolerance, config.key_routes)
                label = candidate_label(w, s) if s != "kr-global" else f"{'SPC' if w == 'spc' else 'FV'} KR-global"
                paths[label] = path
                if "net" in config.formats:
                    bundle.write(f"paths/{slug(label)}.net", path_to_pajek(path, wnet))
                if "dot" in config.formats:
                    bundle.write(
                        f"paths/{slug(label)}.dot",
                        graphio.network_to_dot(path.as_network(wnet), slug(label)),
                    )
        return paths

    @_stage("select")
    def select(paths):
        if len(paths) < 2:
            return list(paths)
        bundle.write("selection/u_matrix.csv", u_matrix(paths).to_csv())
        sel = select_paths(paths, config.delta)
        bundle.write("selection/selection.json", indicators.to_json(sel.as_dict()))
        return sel.selected

    @_stage("concepts")
    def concepts(records, paths, selected):
        aff = affiliations_from_records(records)
        for label in selected:
            cp = concept_path(paths[label], aff)
            bundle.write(f"concepts/{slug(label)}.dot", cp.to_dot(label))
            bundle.write(f"concepts/{slug(label)}.net", cp.to_pajek())
            bundle.write(f"concepts/{slug(label)}_labels.csv", cp.labels_csv())

    @_stage("indicators")
    def report(records):
        indicator_reports(bundle, records, config)

    records = ingest()
    net = build(records)
    wnets = weight(net)
    paths = search(wnets)
    selected = select(paths)
    concepts(records, paths, selected)
    report(records)

    inputs = {"records": sha256_file(Path(config.records))}
    for key in ("gender_map", "mentions"):
        if getattr(config, key):
            inputs[key] = sha256_file(Path(getattr(config, key)))
    settings = {k: v for k, v in asdict(config).items() if k not in ("records", "gender_map", "mentions", "output")}
    manifest = bundle.manifest({"inputs": inputs, "config": settings})
    (bundle.root / "manifest.json").write_text(indicators.to_json(manifest), encoding="utf-8")
    log.info("wrote %d artifacts to %s", len(bundle.artifacts), bundle.root)
    return manifest


def load_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data
