"""Concept evolution paths: trajectory paths relabelled by each work's top concept."""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from citepath.graphio import dot_graph
from citepath.records import PublicationRecord, normalize_concept
from citepath.search import TrajectoryPath

Affiliations = Mapping[str, Sequence[tuple[str, float]]]


class ConceptError(KeyError):
    def __str__(self) -> str:
        return str(self.args[0])


def affiliations_from_records(records: Iterable[PublicationRecord]) -> dict[str, list[tuple[str, float]]]:
    return {r.id: list(r.concepts_scores) for r in records if r.concepts_scores}


def top_concept(work: str, affiliations: Affiliations) -> tuple[str, float]:
    """Highest-relevance concept of ``work``; ties go to the smallest string."""
    scored = affiliations.get(work)
    if not scored:
        raise ConceptError(f"no concepts recorded for work {work!r}")
    best = min(((normalize_concept(c), s) for c, s in scored), key=lambda cs: (-cs[1], cs[0]))
    return best


@dataclass
class ConceptPath:
    """Directed multigraph over concept strings.

    ``arcs`` counts how many trajectory arcs map onto each concept pair;
    self-loops appear when both ends of a citation share a top concept.
    """

    source_label: str
    labels: dict[str, tuple[str, float]]
    arcs: Counter

    @property
    def concepts(self) -> list[str]:
        return sorted({c for c, _ in self.labels.values()})

    @property
    def n_arcs(self) -> int:
        return sum(self.arcs.values())

    def self_loops(self) -> list[str]:
        return sorted(a for a, b in self.arcs if a == b)

    def count_matrix(self, concepts: Sequence[str] | None = None) -> np.ndarray:
        concepts = list(concepts) if concepts is not None else self.concepts
        idx = {c: i for i, c in enumerate(concepts)}
        mat = np.zeros((len(concepts), len(concepts)), dtype=np.int64)
        for (a, b), m in self.arcs.items():
            mat[idx[a], idx[b]] += m
        return mat

    def to_dot(self, name: str | None = None) -> str:
        arcs = sorted(self.arcs.items())
        return dot_graph(
            name or self.source_label,
            self.concepts,
            [(a, b, str(m) if m > 1 else None) for (a, b), m in arcs],
        )

    def to_pajek(self) -> str:
        """Pajek network with arc multiplicity as the weight (self-loops kept)."""
        concepts = self.concepts
        idx = {c: i for i, c in enumerate(concepts, start=1)}
        lines = [f"*Vertices {len(concepts)}"]
        lines += [f'{i} "{c.replace(chr(34), chr(39))}"' for c, i in idx.items()]
        lines.append("*Arcs")
        lines += [f"{idx[a]} {idx[b]} {m}" for (a, b), m in sorted(self.arcs.items())]
        return "\n".join(lines) + "\n"

    def labels_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["work_id", "concept", "relevance"])
        for work in sorted(self.labels):
            concept, score = self.labels[work]
            w.writerow([work, concept, repr(score)])
        return buf.getvalue()


def concept_path(path: TrajectoryPath, affiliations: Affiliations) -> ConceptPath:
    labels = {w: top_concept(w, affiliations) for w in sorted(path.nodes)}
    arcs = Counter((labels[t][0], labels[h][0]) for t, h in path.arcs)
    return ConceptPath(path.label, labels, arcs)


def concept_product(
    path: TrajectoryPath, labels: Mapping[str, str], concepts: Sequence[str]
) -> np.ndarray:
    """Concept-to-concept arc counts as incidence^T @ adjacency @ incidence.

    ``incidence`` is the 0/1 work-by-concept matrix of the chosen labels and
    ``adjacency`` the path's work-level adjacency matrix.
    """
    works = sorted(path.nodes)
    widx = {w: i for i, w in enumerate(works)}
    cidx = {c: i for i, c in enumerate(concepts)}
    incidence = np.zeros((len(works), len(concepts)), dtype=np.int64)
    for w in works:
        incidence[widx[w], cidx[labels[w]]] = 1
    adjacency = np.zeros((len(works), len(works)), dtype=np.int64)
    for t, h in path.arcs:
        adjacency[widx[t], widx[h]] = 1
    return incidence.T @ adjacency @ incidence
