"""Citation networks in knowledge-flow orientation.

Arcs run from the cited work (tail) to the citing work (head), the direction in
which knowledge travels. Input references are citing -> cited and are reversed
when the network is built.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from citepath.records import PublicationRecord

Arc = tuple[str, str]


class NetworkError(ValueError):
    pass


class CycleError(NetworkError):
    def __init__(self, cycle: Sequence[str]):
        self.cycle = list(cycle)
        super().__init__("citation cycle: " + " -> ".join(self.cycle + self.cycle[:1]))


class CitationNetwork:
    """Directed citation graph over work ids.

    ``nodes`` keeps insertion order and maps each id to its publication year
    (or ``None``). Arcs are stored sorted; parallel arcs are not representable.
    Instances are treated as immutable once built.
    """

    def __init__(
        self,
        nodes: Mapping[str, int | None] | Iterable[str],
        arcs: Iterable[Arc],
        weights: Mapping[Arc, float] | None = None,
    ):
        if isinstance(nodes, Mapping):
            self.years: dict[str, int | None] = dict(nodes)
        else:
            self.years = {n: None for n in nodes}
        arc_set = set()
        for tail, head in arcs:
            if tail == head:
                raise NetworkError(f"self-arc on {tail!r}")
            for end in (tail, head):
                if end not in self.years:
                    raise NetworkError(f"arc endpoint {end!r} is not a node")
            arc_set.add((tail, head))
        self.arcs: tuple[Arc, ...] = tuple(sorted(arc_set))
        self.weights: dict[Arc, float] | None = None
        if weights is not None:
            extra = set(weights) - arc_set
            if extra:
                raise NetworkError(f"weight given for missing arc {sorted(extra)[0]}")
            self.weights = {a: weights[a] for a in self.arcs if a in weights}

    @property
    def nodes(self) -> list[str]:
        return list(self.years)

    def __len__(self) -> int:
        return len(self.years)

    def __contains__(self, node: str) -> bool:
        return node in self.years

    def __repr__(self) -> str:
        return f"CitationNetwork({len(self.years)} nodes, {len(self.arcs)} arcs)"

    @cached_property
    def succ(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {n: [] for n in self.years}
        for t, h in self.arcs:
            out[t].append(h)
        return out

    @cached_property
    def pred(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {n: [] for n in self.years}
        for t, h in self.arcs:
            out[h].append(t)
        return out

    def citations_received(self, node: str) -> int:
        return len(self.succ[node])

    def citations_made(self, node: str) -> int:
        return len(self.pred[node])

    def with_weights(self, weights: Mapping[Arc, float]) -> CitationNetwork:
        return CitationNetwork(self.years, self.arcs, weights)

    def without_arcs(self, removed: Iterable[Arc]) -> CitationNetwork:
        drop = set(removed)
        keep = [a for a in self.arcs if a not in drop]
        w = None if self.weights is None else {a: self.weights[a] for a in keep if a in self.weights}
        return CitationNetwork(self.years, keep, w)

    def transpose(self) -> CitationNetwork:
        w = None if self.weights is None else {(h, t): x for (t, h), x in self.weights.items()}
        return CitationNetwork(self.years, [(h, t) for t, h in self.arcs], w)

    def subnetwork(self, arcs: Iterable[Arc]) -> CitationNetwork:
        """Network induced by ``arcs`` (nodes are the arc endpoints)."""
        arcs = sorted(set(arcs))
        used = {n for a in arcs for n in a}
        years = {n: y for n, y in self.years.items() if n in used}
        w = None if self.weights is None else {a: self.weights[a] for a in arcs if a in self.weights}
        return CitationNetwork(years, arcs, w)

    def same_structure(self, other: CitationNetwork) -> bool:
        return set(self.years) == set(other.years) and self.arcs == other.arcs


@dataclass
class BuildReport:
    records: int = 0
    unresolved_refs: int = 0
    self_citations: int = 0
    duplicate_refs: int = 0
    isolated: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "records": self.records,
            "unresolved_refs": self.unresolved_refs,
            "self_citations": self.self_citations,
            "duplicate_refs": self.duplicate_refs,
            "isolated": len(self.isolated),
        }


def build_network(records: Sequence[PublicationRecord]) -> tuple[CitationNetwork, BuildReport]:
    """Citation network with an arc cited -> citing per in-dataset reference.

    Works with no in-dataset arcs are left out of the network and listed in the
    report; they still count for bibliometrics.
    """
    report = BuildReport(records=len(records))
    known = {r.id: r.year for r in records}
    arcs: set[Arc] = set()
    for r in records:
        for ref in r.referenced_pubs:
            if ref == r.id:
                report.self_citations += 1
            elif ref not in known:
                report.unresolved_refs += 1
            elif (ref, r.id) in arcs:
                report.duplicate_refs += 1
            else:
                arcs.add((ref, r.id))
    linked = {n for a in arcs for n in a}
    nodes = {}
    for r in records:
        if r.id in linked:
            nodes[r.id] = r.year
        else:
            report.isolated.append(r.id)
    return CitationNetwork(nodes, arcs), report


def strongly_connected_components(net: CitationNetwork) -> list[list[str]]:
    """Tarjan's algorithm, iterative. Components come out in reverse topological order."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[list[str]] = []
    counter = 0
    succ = net.succ
    for root in net.years:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            recurse = False
            children = succ[v]
            while i < len(children):
                w = children[i]
                i += 1
                if w not in index:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def topological_order(net: CitationNetwork) -> list[str]:
    """Kahn's algorithm with lexicographic tie-breaking; raises CycleError."""
    indeg = {n: len(p) for n, p in net.pred.items()}
    ready = [n for n, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        n = heapq.heappop(ready)
        order.append(n)
        for m in net.succ[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                heapq.heappush(ready, m)
    if len(order) != len(net.years):
        raise CycleError(find_cycle(net))
    return order


def find_cycle(net: CitationNetwork) -> list[str]:
    """One directed cycle (node list), or [] when the network is acyclic."""
    for comp in strongly_connected_components(net):
        if len(comp) < 2:
            continue
        members = set(comp)
        start = comp[0]
        path, pos = [start], {start: 0}
        node = start
        while True:
            node = next(m for m in net.succ[node] if m in members)
            if node in pos:
                return path[pos[node]:]
            pos[node] = len(path)
            path.append(node)
    return []


def _reachable(succ: Mapping[str, Iterable[str]], start: str, target: str) -> bool:
    seen = {start}
    todo = [start]
    while todo:
        n = todo.pop()
        if n == target:
            return True
        for m in succ[n]:
            if m not in seen:
                seen.add(m)
                todo.append(m)
    return False


@dataclass
class CycleReport:
    arcs_in: int
    arcs_out: int
    removed: list[Arc] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "arcs_in": self.arcs_in,
            "arcs_out": self.arcs_out,
            "removed": [list(a) for a in self.removed],
        }


def _time_anomalous(net: CitationNetwork, arc: Arc) -> bool:
    ty, hy = net.years.get(arc[0]), net.years.get(arc[1])
    return ty is not None and hy is not None and hy <= ty


def validate_acyclic(net: CitationNetwork, mode: str = "fail") -> tuple[CitationNetwork, CycleReport]:
    """Check that ``net`` is a DAG, optionally breaking cycles.

    ``mode="fail"`` raises :class:`CycleError` naming one cycle. With
    ``mode="break_cycles"`` arcs inside each non-trivial strongly connected
    component are removed, time-anomalous ones (citing year <= cited year)
    first and the rest in lexicographic order, skipping any arc no longer on a
    cycle. A final pass restores removed arcs that turn out to be unnecessary.
    """
    if mode not in ("fail", "break_cycles"):
        raise ValueError(f"unknown cycle mode {mode!r}")
    comps = [c for c in strongly_connected_components(net) if len(c) > 1]
    if not comps:
        return net, CycleReport(len(net.arcs), len(net.arcs))
    if mode == "fail":
        raise CycleError(find_cycle(net))

    removed: list[Arc] = []
    for comp in sorted(comps):
        members = set(comp)
        inner = [a for a in net.arcs if a[0] in members and a[1] in members]
        candidates = sorted(inner, key=lambda a: (not _time_anomalous(net, a), a))
        succ = {n: set() for n in comp}
        for t, h in inner:
            succ[t].add(h)
        dropped = []
        for t, h in candidates:
            # arc lies on a cycle iff its tail is reachable back from its head
            if _reachable(succ, h, t):
                succ[t].discard(h)
                dropped.append((t, h))
        for t, h in reversed(dropped):
            if _reachable(succ, h, t):
                removed.append((t, h))
            else:
                succ[t].add(h)
    removed.sort()
    out = net.without_arcs(removed)
    return out, CycleReport(len(net.arcs), len(out.arcs), removed)


def sources(net: CitationNetwork) -> set[str]:
    """Works that cite nothing in the network (no incoming knowledge-flow arc)."""
    return {n for n, p in net.pred.items() if not p}


def sinks(net: CitationNetwork) -> set[str]:
    """Works nobody in the network cites (no outgoing knowledge-flow arc)."""
    return {n for n, s in net.succ.items() if not s}
