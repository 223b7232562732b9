"""Brute-force references, deliberately independent of the library code paths."""

from __future__ import annotations

import random

from citepath.network import CitationNetwork


def random_dag(rng: random.Random, max_nodes: int = 12, p: float = 0.3) -> CitationNetwork:
    n = rng.randint(2, max_nodes)
    names = [f"v{i:02d}" for i in range(n)]
    rng.shuffle(names)  # topological order differs from lexicographic order
    arcs = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    used = sorted({x for a in arcs for x in a})
    return CitationNetwork(used, arcs)


def all_source_sink_paths(net: CitationNetwork) -> list[list[str]]:
    """Every maximal path from an in-degree-0 node to an out-degree-0 node, by DFS."""
    out_nbrs: dict[str, list[str]] = {n: [] for n in net.nodes}
    indeg = {n: 0 for n in net.nodes}
    for t, h in net.arcs:
        out_nbrs[t].append(h)
        indeg[h] += 1
    paths = []

    def walk(path):
        nxt = out_nbrs[path[-1]]
        if not nxt:
            paths.append(list(path))
            return
        for m in nxt:
            path.append(m)
            walk(path)
            path.pop()

    for n in net.nodes:
        if indeg[n] == 0 and out_nbrs[n]:
            walk([n])
    return paths


def arc_path_counts(net: CitationNetwork) -> dict[tuple[str, str], int]:
    counts = {a: 0 for a in net.arcs}
    for p in all_source_sink_paths(net):
        for a in zip(p, p[1:]):
            counts[a] += 1
    return counts


def path_total(path: list[str], weights) -> float:
    return sum(weights[a] for a in zip(path, path[1:]))


def walks_within(arcs) -> list[list[str]]:
    """All maximal walks inside an arc set."""
    succ: dict[str, list[str]] = {}
    heads = set()
    for t, h in arcs:
        succ.setdefault(t, []).append(h)
        heads.add(h)
    roots = sorted({t for t, _ in arcs} - heads)
    out = []

    def walk(path):
        nxt = succ.get(path[-1], [])
        if not nxt:
            out.append(list(path))
            return
        for m in nxt:
            path.append(m)
            walk(path)
            path.pop()

    for r in roots:
        walk([r])
    return out
