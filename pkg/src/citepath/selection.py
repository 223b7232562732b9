"""Deduplication of candidate main paths via the uniqueness index."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from itertools import combinations
from typing import AbstractSet, Mapping, Union

from citepath.search import TrajectoryPath

DEFAULT_DELTA = 0.65

CANONICAL_ORDER = (
    "SPC FW",
    "SPC BW",
    "SPC KR",
    "SPC CPM",
    "FV FW",
    "FV BW",
    "FV KR",
    "FV CPM",
)

PathLike = Union[TrajectoryPath, AbstractSet[str]]


def _works(p: PathLike) -> AbstractSet[str]:
    return p.nodes if isinstance(p, TrajectoryPath) else p


def uniqueness_index(pi: PathLike, pj: PathLike) -> float:
    """(|Pi| + |Pj| - |Pi & Pj|) / (|Pi| + |Pj|) over the works of each path.

    0.5 for identical paths, 1.0 for disjoint ones.
    """
    a, b = _works(pi), _works(pj)
    if not a or not b:
        raise ValueError("uniqueness index needs two non-empty paths")
    size = len(a) + len(b)
    return (size - len(a & b)) / size


def canonical_labels(labels) -> list[str]:
    """Known scheme labels first in canonical order, anything else sorted after."""
    known = [l for l in CANONICAL_ORDER if l in labels]
    return known + sorted(l for l in labels if l not in CANONICAL_ORDER)


@dataclass
class UMatrix:
    labels: list[str]
    values: dict[tuple[str, str], float]

    def __getitem__(self, pair: tuple[str, str]) -> float | None:
        i, j = pair
        if i == j:
            return None
        return self.values[(i, j)]

    def to_csv(self, upper_only: bool = True, digits: int = 3) -> str:
        """Table layout with '*' on the diagonal (and below it when ``upper_only``)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["", *self.labels])
        for r, li in enumerate(self.labels):
            row = [li]
            for c, lj in enumerate(self.labels):
                if r == c or (upper_only and c < r):
                    row.append("*")
                else:
                    row.append(f"{self.values[(li, lj)]:.{digits}f}")
            w.writerow(row)
        return buf.getvalue()


def u_matrix(paths: Mapping[str, PathLike]) -> UMatrix:
    if len(paths) < 2:
        raise ValueError("need at least two paths")
    labels = canonical_labels(list(paths))
    values = {}
    for li, lj in combinations(labels, 2):
        u = uniqueness_index(paths[li], paths[lj])
        values[(li, lj)] = values[(lj, li)] = u
    return UMatrix(labels, values)


@dataclass(frozen=True)
class Elimination:
    dropped: str
    kept: str
    u: float
    dropped_size: int
    kept_size: int

    def describe(self) -> str:
        return (
            f"dropped {self.dropped} ({self.dropped_size} works) in favour of "
            f"{self.kept} ({self.kept_size} works): U = {self.u:.3f}"
        )


@dataclass
class Selection:
    selected: list[str]
    order: list[str]
    delta: float
    log: list[Elimination] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "delta": self.delta,
            "pair_order": self.order,
            "selected": self.selected,
            "eliminations": [
                {
                    "dropped": e.dropped,
                    "kept": e.kept,
                    "u": e.u,
                    "dropped_size": e.dropped_size,
                    "kept_size": e.kept_size,
                }
                for e in self.log
            ],
        }


def select_paths(paths: Mapping[str, PathLike], delta: float = DEFAULT_DELTA) -> Selection:
    """Drop the smaller path of every pair with U < delta.

    Pairs are visited in canonical label order and a dropped path takes no
    part in later comparisons. Equal-sized pairs are both kept.
    """
    order = canonical_labels(list(paths))
    active = set(order)
    log = []
    for li, lj in combinations(order, 2):
        if li not in active or lj not in active:
            continue
        u = uniqueness_index(paths[li], paths[lj])
        if u >= delta:
            continue
        si, sj = len(_works(paths[li])), len(_works(paths[lj]))
        if si == sj:
            continue
        drop, keep = (lj, li) if si > sj else (li, lj)
        active.discard(drop)
        log.append(Elimination(drop, keep, u, min(si, sj), max(si, sj)))
    return Selection([l for l in order if l in active], order, delta, log)
