"""Main-path search schemes over a weighted citation DAG.

All searches return a :class:`TrajectoryPath`: an arc set rather than a single
node sequence, since ties (and the tolerance rule) make results branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from citepath.network import Arc, CitationNetwork, NetworkError, sinks, sources, topological_order
from citepath.weighting import WeightedNetwork

SEARCH_SCHEMES = ("FW", "BW", "KR-local", "KR-global", "CPM")
DEFAULT_TOLERANCE = 0.1
DEFAULT_KEY_ROUTES = 10


@dataclass(frozen=True)
class TrajectoryPath:
    scheme: str
    weight_scheme: str
    nodes: frozenset[str]
    arcs: frozenset[Arc]
    total_weight: float

    @property
    def label(self) -> str:
        prefix = "SPC" if self.weight_scheme == "SPC" else "FV"
        return f"{prefix} {self.scheme}"

    def __len__(self) -> int:
        return len(self.nodes)

    def sorted_arcs(self) -> list[Arc]:
        return sorted(self.arcs)

    def as_network(self, wnet: WeightedNetwork) -> CitationNetwork:
        return wnet.as_network().subnetwork(self.arcs)


def _make_path(wnet: WeightedNetwork, scheme: str, arcs: Iterable[Arc]) -> TrajectoryPath:
    arcs = frozenset(arcs)
    nodes = frozenset(n for a in arcs for n in a)
    total = sum(wnet.weights[a] for a in sorted(arcs))
    return TrajectoryPath(scheme, wnet.scheme, nodes, arcs, total)


def _check_tolerance(tolerance: float) -> None:
    if not 0.0 <= tolerance < 1.0:
        raise ValueError(f"tolerance must lie in [0, 1), got {tolerance}")


def _keep(cands: list[tuple[float, Arc]], tolerance: float) -> list[Arc]:
    if not cands:
        return []
    top = max(w for w, _ in cands)
    floor = (1.0 - tolerance) * top
    return [a for w, a in cands if w >= floor]


def _greedy(
    wnet: WeightedNetwork,
    start: Iterable[str],
    forward: bool,
    tolerance: float,
    pool_first_step: bool,
) -> set[Arc]:
    """Expand greedily from ``start`` until terminals are reached.

    Forward expansion follows out-arcs (stopping at sinks), backward expansion
    follows in-arcs (stopping at sources). With ``pool_first_step`` the
    tolerance threshold of the first step is taken over the candidate arcs of
    all start nodes together; every later step applies it per node.
    """
    net = wnet.network
    w = wnet.weights
    nbrs = net.succ if forward else net.pred

    def cands(n: str) -> list[tuple[float, Arc]]:
        return [(w[(n, m)] if forward else w[(m, n)], (n, m) if forward else (m, n)) for m in nbrs[n]]

    chosen: set[Arc] = set()
    start = sorted(set(start))
    if pool_first_step:
        first = _keep([c for n in start for c in cands(n)], tolerance)
    else:
        first = [a for n in start for a in _keep(cands(n), tolerance)]
    chosen.update(first)
    expanded = set(start)
    frontier = sorted({a[1] if forward else a[0] for a in first})
    while frontier:
        nxt = set()
        for n in frontier:
            if n in expanded:
                continue
            expanded.add(n)
            for a in _keep(cands(n), tolerance):
                chosen.add(a)
                nxt.add(a[1] if forward else a[0])
        frontier = sorted(nxt - expanded)
    return chosen


def forward_search(wnet: WeightedNetwork, tolerance: float = DEFAULT_TOLERANCE) -> TrajectoryPath:
    _check_tolerance(tolerance)
    starts = [s for s in sources(wnet.network) if wnet.network.succ[s]]
    if not starts:
        raise NetworkError("network has no arcs")
    return _make_path(wnet, "FW", _greedy(wnet, starts, True, tolerance, True))


def backward_search(wnet: WeightedNetwork, tolerance: float = DEFAULT_TOLERANCE) -> TrajectoryPath:
    _check_tolerance(tolerance)
    starts = [t for t in sinks(wnet.network) if wnet.network.pred[t]]
    if not starts:
        raise NetworkError("network has no arcs")
    return _make_path(wnet, "BW", _greedy(wnet, starts, False, tolerance, True))


# -- global (longest path) searches -----------------------------------------


def _best_to(wnet: WeightedNetwork, order: list[str]) -> dict[str, float]:
    """Heaviest total weight of any source -> node path."""
    best: dict[str, float] = {}
    for v in order:
        preds = wnet.network.pred[v]
        best[v] = max(best[u] + wnet.weights[(u, v)] for u in preds) if preds else 0
    return best


def _best_from(wnet: WeightedNetwork, order: list[str]) -> dict[str, float]:
    """Heaviest total weight of any node -> sink path."""
    best: dict[str, float] = {}
    for v in reversed(order):
        succs = wnet.network.succ[v]
        best[v] = max(wnet.weights[(v, m)] + best[m] for m in succs) if succs else 0
    return best


def _trace_back(wnet: WeightedNetwork, best_to: dict[str, float], ends: Iterable[str]) -> set[Arc]:
    arcs: set[Arc] = set()
    todo = list(ends)
    seen = set(todo)
    while todo:
        v = todo.pop()
        for u in wnet.network.pred[v]:
            if best_to[u] + wnet.weights[(u, v)] == best_to[v]:
                arcs.add((u, v))
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
    return arcs


def _trace_forward(wnet: WeightedNetwork, best_from: dict[str, float], starts: Iterable[str]) -> set[Arc]:
    arcs: set[Arc] = set()
    todo = list(starts)
    seen = set(todo)
    while todo:
        v = todo.pop()
        for m in wnet.network.succ[v]:
            if wnet.weights[(v, m)] + best_from[m] == best_from[v]:
                arcs.add((v, m))
                if m not in seen:
                    seen.add(m)
                    todo.append(m)
    return arcs


def critical_path(wnet: WeightedNetwork) -> TrajectoryPath:
    """Source-sink path(s) of maximal total weight; equal-total paths all kept."""
    if not wnet.network.arcs:
        raise NetworkError("network has no arcs")
    order = topological_order(wnet.network)
    best = _best_to(wnet, order)
    ends = [t for t in sinks(wnet.network) if wnet.network.pred[t]]
    top = max(best[t] for t in ends)
    arcs = _trace_back(wnet, best, [t for t in ends if best[t] == top])
    return _make_path(wnet, "CPM", arcs)


# -- key-route searches ------------------------------------------------------


def key_routes(wnet: WeightedNetwork, k: int) -> list[Arc]:
    """The k heaviest arcs, ties broken by (tail, head)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    ranked = sorted(wnet.network.arcs, key=lambda a: (-wnet.weights[a], a))
    return ranked[:k]


def key_route_search_local(
    wnet: WeightedNetwork, k: int = DEFAULT_KEY_ROUTES, tolerance: float = DEFAULT_TOLERANCE
) -> TrajectoryPath:
    """Greedy backward search from each key route's tail, forward from its head."""
    _check_tolerance(tolerance)
    arcs: set[Arc] = set()
    for tail, head in key_routes(wnet, k):
        arcs.add((tail, head))
        arcs |= _greedy(wnet, [tail], False, tolerance, False)
        arcs |= _greedy(wnet, [head], True, tolerance, False)
    return _make_path(wnet, "KR-local", arcs)


def key_route_search_global(wnet: WeightedNetwork, k: int = DEFAULT_KEY_ROUTES) -> TrajectoryPath:
    """Heaviest source->tail path + key route + heaviest head->sink path, per route."""
    order = topological_order(wnet.network)
    best_to = _best_to(wnet, order)
    best_from = _best_from(wnet, order)
    arcs: set[Arc] = set()
    for tail, head in key_routes(wnet, k):
        arcs.add((tail, head))
        arcs |= _trace_back(wnet, best_to, [tail])
        arcs |= _trace_forward(wnet, best_from, [head])
    return _make_path(wnet, "KR-global", arcs)


def run_scheme(
    wnet: WeightedNetwork,
    scheme: str,
    tolerance: float = DEFAULT_TOLERANCE,
    k: int = DEFAULT_KEY_ROUTES,
) -> TrajectoryPath:
    if scheme == "FW":
        return forward_search(wnet, tolerance)
    if scheme == "BW":
        return backward_search(wnet, tolerance)
    if scheme == "CPM":
        return critical_path(wnet)
    if scheme == "KR-local":
        return key_route_search_local(wnet, k, tolerance)
    if scheme == "KR-global":
        return key_route_search_global(wnet, k)
    raise ValueError(f"unknown search scheme {scheme!r}")
