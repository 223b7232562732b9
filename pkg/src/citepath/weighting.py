"""Arc weighting: search path count (SPC) and flow-vergence (FV) gradient.

SPC weights count source-to-sink paths through an arc. The FV route computes a
per-work FV index from citation balance plus eigenvector centrality, takes the
index difference across every arc and rescales the differences into [1, 2] so
that arcs with a negative gradient (the "FV effect") receive the largest
weights.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy import sparse

from citepath.network import Arc, CitationNetwork, NetworkError, sources, topological_order

DEFAULT_TELEPORT = 1e-6
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITERS = 100_000

SCHEMES = ("SPC", "FV", "FV-normalized")


class ConvergenceError(RuntimeError):
    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"power iteration did not converge in {iterations} iterations "
            f"(residual {residual:.3e})"
        )


@dataclass
class WeightedNetwork:
    network: CitationNetwork
    weights: dict[Arc, float]
    scheme: str

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown weight scheme {self.scheme!r}")
        missing = [a for a in self.network.arcs if a not in self.weights]
        if missing:
            raise NetworkError(f"arc {missing[0]} has no weight")

    @property
    def arcs(self) -> tuple[Arc, ...]:
        return self.network.arcs

    def as_network(self) -> CitationNetwork:
        return self.network.with_weights(self.weights)

    @classmethod
    def from_network(cls, net: CitationNetwork, scheme: str) -> WeightedNetwork:
        if net.weights is None:
            raise NetworkError("network carries no arc weights")
        return cls(CitationNetwork(net.years, net.arcs), dict(net.weights), scheme)


# -- SPC ---------------------------------------------------------------------


def path_counts(net: CitationNetwork) -> tuple[dict[str, int], dict[str, int]]:
    """Source-to-node and node-to-sink path counts (exact integers).

    The first map is 1 on sources, the second is 1 on sinks.
    """
    order = topological_order(net)
    from_sources: dict[str, int] = {}
    for v in order:
        preds = net.pred[v]
        from_sources[v] = sum(from_sources[u] for u in preds) if preds else 1
    to_sinks: dict[str, int] = {}
    for v in reversed(order):
        succs = net.succ[v]
        to_sinks[v] = sum(to_sinks[w] for w in succs) if succs else 1
    return from_sources, to_sinks


def total_paths(net: CitationNetwork) -> int:
    from_sources, to_sinks = path_counts(net)
    return sum(to_sinks[s] for s in sources(net) if net.succ[s])


def spc_weights(net: CitationNetwork) -> WeightedNetwork:
    """Weight every arc u->v by N-(u) * N+(v)."""
    if not net.arcs:
        raise NetworkError("network has no source-sink path")
    from_sources, to_sinks = path_counts(net)
    weights = {(u, v): from_sources[u] * to_sinks[v] for u, v in net.arcs}
    return WeightedNetwork(CitationNetwork(net.years, net.arcs), weights, "SPC")


# -- eigenvector centrality --------------------------------------------------


def _citation_operator(net: CitationNetwork) -> tuple[list[str], sparse.csr_matrix]:
    nodes = net.nodes
    idx = {n: i for i, n in enumerate(nodes)}
    # row = cited work, column = citing work: a work accumulates from its citers
    rows = [idx[t] for t, _ in net.arcs]
    cols = [idx[h] for _, h in net.arcs]
    data = np.ones(len(rows))
    mat = sparse.csr_matrix((data, (rows, cols)), shape=(len(nodes), len(nodes)))
    return nodes, mat


def _apply(mat: sparse.csr_matrix, x: np.ndarray, teleport: float) -> np.ndarray:
    return mat @ x + teleport * x.sum()


def eigenvector_centrality(
    net: CitationNetwork,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
    teleport: float = DEFAULT_TELEPORT,
) -> dict[str, float]:
    """Prestige eigenvector centrality, scaled so the top score is 1.

    A work's score is proportional to the summed scores of the works citing
    it. The citation operator of a DAG is nilpotent, so a uniform teleport term
    ``teleport * sum(x)`` is added to every entry to make the principal vector
    unique and positive. Iterates until the max-norm change drops below
    ``tol``.
    """
    if not len(net):
        raise NetworkError("empty network")
    if teleport < 0:
        raise ValueError("teleport must be non-negative")
    nodes, mat = _citation_operator(net)
    x = np.ones(len(nodes))
    residual = float("inf")
    for _ in range(max_iters):
        y = _apply(mat, x, teleport)
        top = y.max()
        if top <= 0:
            raise ConvergenceError(0, residual)
        y /= top
        residual = float(np.abs(y - x).max())
        x = y
        if residual < tol:
            return {n: float(v) for n, v in zip(nodes, x)}
    raise ConvergenceError(max_iters, residual)


def eigen_residual(net: CitationNetwork, eig: Mapping[str, float], teleport: float = DEFAULT_TELEPORT) -> float:
    """Max-norm of M x - lambda x with lambda the Rayleigh quotient."""
    nodes, mat = _citation_operator(net)
    x = np.array([eig[n] for n in nodes])
    mx = _apply(mat, x, teleport)
    lam = float(x @ mx) / float(x @ x)
    return float(np.abs(mx - lam * x).max())


# -- FV index and gradient ---------------------------------------------------


def fv_value(indeg: int, outdeg: int, eig: float) -> float:
    """FV index from citations received, citations made and eigenvector centrality."""
    total = indeg + outdeg
    if total <= 0:
        raise NetworkError("FV index undefined for an isolated work")
    return (indeg - outdeg) / total + eig


@dataclass(frozen=True)
class NodeMeasure:
    indeg: int
    outdeg: int
    eig: float
    w_fv: float


def fv_index(net: CitationNetwork, eig: Mapping[str, float]) -> dict[str, NodeMeasure]:
    """Per-work FV index with in-dataset citation counts.

    ``indeg`` is citations received and ``outdeg`` citations made, i.e. the
    raw citation sense rather than knowledge-flow degrees.
    """
    out = {}
    for n in net.nodes:
        received = net.citations_received(n)
        made = net.citations_made(n)
        if received + made == 0:
            raise NetworkError(f"isolated work {n!r} has no FV index")
        out[n] = NodeMeasure(received, made, eig[n], fv_value(received, made, eig[n]))
    return out


def fv_gradient(net: CitationNetwork, w_fv: Mapping[str, float | NodeMeasure]) -> dict[Arc, float]:
    """FV(cited) - FV(citing) for every knowledge-flow arc."""
    def pot(n):
        v = w_fv[n]
        return v.w_fv if isinstance(v, NodeMeasure) else v

    return {(t, h): pot(t) - pot(h) for t, h in net.arcs}


def fv_effect_arcs(gradients: Mapping[Arc, float]) -> list[Arc]:
    """Arcs along which knowledge flows uphill (negative gradient)."""
    return sorted(a for a, g in gradients.items() if g < 0)


def fv_normalize(gradients: Mapping[Arc, float]) -> dict[Arc, float]:
    """Map gradients affinely onto [1, 2]; the smallest gradient gets 2."""
    if not gradients:
        raise NetworkError("no arcs to normalize")
    hi = max(gradients.values())
    lo = min(gradients.values())
    if hi == lo:
        warnings.warn("all FV gradients are equal; using constant weight 1", RuntimeWarning, stacklevel=2)
        return {a: 1.0 for a in gradients}
    span = hi - lo
    return {a: 1.0 + (hi - g) / span for a, g in gradients.items()}


@dataclass
class FVResult:
    weighted: WeightedNetwork
    measures: dict[str, NodeMeasure]
    gradients: dict[Arc, float]

    @property
    def fv_effect(self) -> list[Arc]:
        return fv_effect_arcs(self.gradients)


def fv_weights(
    net: CitationNetwork,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
    teleport: float = DEFAULT_TELEPORT,
) -> FVResult:
    eig = eigenvector_centrality(net, max_iters=max_iters, tol=tol, teleport=teleport)
    measures = fv_index(net, eig)
    grads = fv_gradient(net, measures)
    norm = fv_normalize(grads)
    wnet = WeightedNetwork(CitationNetwork(net.years, net.arcs), norm, "FV-normalized")
    return FVResult(wnet, measures, grads)


def measures_csv(measures: Mapping[str, NodeMeasure]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "indeg", "outdeg", "eig", "w_fv"])
    for n, m in measures.items():
        w.writerow([n, m.indeg, m.outdeg, repr(m.eig), repr(m.w_fv)])
    return buf.getvalue()
