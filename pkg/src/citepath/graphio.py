"""Graph file formats: Pajek .net, CSV edge lists and Graphviz DOT."""

from __future__ import annotations

import csv
import io
import math
import re
import shlex
from typing import Iterable, Sequence

from citepath.network import Arc, CitationNetwork


class PajekFormatError(ValueError):
    pass


def _fmt_weight(w: float) -> str:
    if isinstance(w, int):
        return str(w)
    if float(w).is_integer() and abs(w) < 2**53:
        return str(int(w))
    return repr(float(w))


def _parse_weight(token: str, lineno: int) -> float:
    try:
        value = int(token)
    except ValueError:
        try:
            value = float(token)
        except ValueError:
            raise PajekFormatError(f"line {lineno}: non-numeric weight {token!r}") from None
        if not math.isfinite(value):
            raise PajekFormatError(f"line {lineno}: non-finite weight {token!r}")
    return value


def read_pajek_net(text: str) -> CitationNetwork:
    """Parse ``*Vertices``/``*Arcs`` sections; labels become node ids.

    Unlabelled vertices are named by their 1-based index. Weights are kept
    when present on an arc line.
    """
    labels: list[str] = []
    n_vertices: int | None = None
    arcs: list[Arc] = []
    weights: dict[Arc, float] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("*"):
            head = line.split()
            key = head[0].lower()
            if key == "*vertices":
                if len(head) < 2 or not head[1].isdigit():
                    raise PajekFormatError(f"line {lineno}: *Vertices needs a count")
                n_vertices = int(head[1])
                labels = [str(i) for i in range(1, n_vertices + 1)]
                section = "vertices"
            elif key == "*arcs":
                section = "arcs"
            elif key in ("*edges", "*arcslist", "*edgeslist", "*matrix"):
                raise PajekFormatError(f"line {lineno}: unsupported section {head[0]}")
            else:
                section = None
            continue
        if section == "vertices":
            try:
                parts = shlex.split(line, posix=True)
            except ValueError as exc:
                raise PajekFormatError(f"line {lineno}: {exc}") from None
            idx = int(parts[0]) if parts[0].isdigit() else -1
            if not 1 <= idx <= len(labels):
                raise PajekFormatError(f"line {lineno}: vertex index {parts[0]} out of range")
            if len(parts) > 1:
                labels[idx - 1] = parts[1]
        elif section == "arcs":
            if n_vertices is None:
                raise PajekFormatError(f"line {lineno}: *Arcs before *Vertices")
            parts = line.split()
            if len(parts) < 2:
                raise PajekFormatError(f"line {lineno}: arc needs two endpoints")
            ends = []
            for tok in parts[:2]:
                if not tok.isdigit() or not 1 <= int(tok) <= n_vertices:
                    raise PajekFormatError(f"line {lineno}: vertex index {tok} out of range")
                ends.append(labels[int(tok) - 1])
            arc = (ends[0], ends[1])
            arcs.append(arc)
            if len(parts) > 2:
                weights[arc] = _parse_weight(parts[2], lineno)
    if n_vertices is None:
        raise PajekFormatError("no *Vertices section")
    if len(set(labels)) != len(labels):
        raise PajekFormatError("vertex labels are not unique")
    return CitationNetwork(labels, arcs, weights or None)


def _quote(label: str) -> str:
    return '"' + label.replace('"', "'") + '"'


def write_pajek_net(net: CitationNetwork) -> str:
    nodes = net.nodes
    idx = {n: i for i, n in enumerate(nodes, start=1)}
    lines = [f"*Vertices {len(nodes)}"]
    lines += [f"{i} {_quote(n)}" for n, i in idx.items()]
    lines.append("*Arcs")
    for a in net.arcs:
        line = f"{idx[a[0]]} {idx[a[1]]}"
        if net.weights is not None and a in net.weights:
            line += " " + _fmt_weight(net.weights[a])
        lines.append(line)
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> CitationNetwork:
    """CSV with header ``citing,cited``; arcs are reversed to cited -> citing."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or not {"citing", "cited"} <= set(reader.fieldnames):
        raise ValueError("edge list header must be 'citing,cited'")
    nodes: dict[str, None] = {}
    arcs = []
    for row in reader:
        citing, cited = row["citing"].strip(), row["cited"].strip()
        nodes.setdefault(cited, None)
        nodes.setdefault(citing, None)
        arcs.append((cited, citing))
    return CitationNetwork(nodes, arcs)


def write_edge_list(net: CitationNetwork) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["citing", "cited"])
    for tail, head in net.arcs:
        w.writerow([head, tail])
    return buf.getvalue()


_DOT_ID = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _dot_id(s: str) -> str:
    if _DOT_ID.match(s):
        return s
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dot_graph(
    name: str,
    nodes: Sequence[str],
    arcs: Iterable[tuple[str, str, str | None]],
) -> str:
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=LR;"]
    lines += [f"  {_dot_id(n)};" for n in nodes]
    for a, b, label in arcs:
        attr = f" [label={_dot_id(label)}]" if label is not None else ""
        lines.append(f"  {_dot_id(a)} -> {_dot_id(b)}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def network_to_dot(net: CitationNetwork, name: str = "citations") -> str:
    arcs = [
        (t, h, _fmt_weight(net.weights[(t, h)]) if net.weights and (t, h) in net.weights else None)
        for t, h in net.arcs
    ]
    return dot_graph(name, net.nodes, arcs)
