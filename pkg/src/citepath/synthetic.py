"""Deterministic synthetic corpus used for demos and end-to-end tests.

``python -m citepath.synthetic DIR`` regenerates the bundled sample files.
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

from citepath.records import (
    PLATFORMS,
    AltmetricMentionRecord,
    Author,
    GenderMap,
    GenderMapEntry,
    PublicationRecord,
    dump_gender_map,
    dump_mentions,
    dump_records,
)

CONCEPTS = (
    "cloud computing",
    "grid computing",
    "Internet of Things",
    "edge computing",
    "scheduling",
    "resource allocation",
    "virtual machines",
    "big data",
    "blockchain",
    "data mining",
    "network security",
    "service function chains",
)
COUNTRIES = ("China", "United States", "Australia", "Italy", "India", "Spain")
ORGS = {
    "China": ("grid.33199.31", "grid.440736.2"),
    "United States": ("grid.116068.8", "grid.168010.e"),
    "Australia": ("grid.1008.9", "grid.1021.2"),
    "Italy": ("grid.4691.a", "grid.7778.f"),
    "India": ("grid.411507.6",),
    "Spain": ("grid.5841.8",),
}
FIRST = ("Wei", "Anna", "Rahul", "Maria", "John", "Li", "Sofia", "Ahmed", "Chen", "Laura")
LAST = ("Zhang", "Rossi", "Singh", "Garcia", "Smith", "Wang", "Brown", "Kumar")
FUNDERS = ("National Natural Science Foundation of China", "European Commission", "NSF")
SDGS = ("7 Affordable and Clean Energy", "11 Sustainable Cities and Communities", "3 Good Health and Well Being")
OA = ("closed", "closed", "closed", "green", "green", "bronze", "hybrid", "gold")
GENDER_OF = {"Wei": "male", "Anna": "female", "Rahul": "male", "Maria": "female", "John": "male",
             "Li": "unknown", "Sofia": "female", "Ahmed": "male", "Chen": "male", "Laura": "female"}


def generate(n: int = 60, seed: int = 7, first_year: int = 2005, last_year: int = 2014):
    """Records, a gender map and altmetric mentions, fully determined by ``seed``."""
    rng = random.Random(seed)
    years = sorted(rng.randint(first_year, last_year) for _ in range(n))
    ids = [f"pub.{i:04d}" for i in range(n)]
    refs: dict[str, list[str]] = {}
    cited_by: dict[str, int] = {i: 0 for i in ids}
    for k, pid in enumerate(ids):
        older = [ids[j] for j in range(k) if years[j] < years[k]]
        if not older or k % 13 == 5:
            refs[pid] = []
            continue
        m = min(len(older), rng.randint(1, 4))
        chosen = sorted(rng.sample(older[-12:], min(m, len(older[-12:]))))
        if k % 17 == 3:
            chosen.append(f"pub.ext{k:03d}")  # reference outside the dataset
        refs[pid] = chosen
        for c in chosen:
            if c in cited_by:
                cited_by[c] += 1

    records = []
    gender_entries = {}
    mentions = []
    for k, pid in enumerate(ids):
        n_auth = rng.choice((1, 1, 2, 3, 4, 5, 6, 8, 12))
        authors = tuple(
            Author(f"{rng.choice(FIRST)} {rng.choice(LAST)}", p) for p in range(1, n_auth + 1)
        )
        n_c = rng.choice((1, 1, 2))
        countries = tuple(sorted(set(rng.sample(COUNTRIES, n_c))))
        orgs = tuple(sorted({rng.choice(ORGS[c]) for c in countries for _ in range(rng.randint(1, 2))}))
        concepts = []
        for c in rng.sample(CONCEPTS, rng.randint(1, 3)):
            concepts.append((c, round(rng.uniform(0.3, 1.0), 2)))
        if k % 11 == 0 and len(concepts) >= 2:
            concepts[1] = (concepts[1][0], concepts[0][1])  # tied top relevance
        doi = f"10.5555/synthetic.{k:04d}"
        rec = PublicationRecord(
            id=pid,
            doi=doi,
            year=years[k],
            authors=authors,
            authors_count=n_auth,
            research_orgs=orgs,
            research_org_countries=countries,
            referenced_pubs=tuple(refs[pid]),
            open_access=rng.choice(OA),
            category_sdg=tuple(s for s in SDGS if rng.random() < 0.15),
            concepts_scores=tuple(concepts),
            times_cited=cited_by[pid] + rng.choice((0, 0, 1, 3, 10)),
            funders=tuple(f for f in FUNDERS if rng.random() < 0.25),
        )
        records.append(rec)
        first = authors[0].name
        given = first.split()[0]
        gender_entries[(first, countries[0])] = GenderMapEntry(
            first, countries[0], GENDER_OF[given], float(rng.choice((55, 72, 88, 95, 99)))
        )
        if years[k] >= 2011 and rng.random() < 0.6:
            counts = {p: (rng.choice((0, 0, 1, 2, 5)) if p != "mendeley" else rng.randint(0, 60)) for p in PLATFORMS}
            mentions.append(AltmetricMentionRecord(doi=doi, **counts))
    return records, GenderMap(gender_entries.values()), mentions


def write_sample(directory: Path, **kwargs) -> dict[str, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    records, gmap, mentions = generate(**kwargs)
    paths = {
        "records": directory / "records.jsonl",
        "gender_map": directory / "gender_map.csv",
        "mentions": directory / "mentions.csv",
    }
    paths["records"].write_text(dump_records(records), encoding="utf-8")
    paths["gender_map"].write_text(dump_gender_map(gmap), encoding="utf-8")
    paths["mentions"].write_text(dump_mentions(mentions), encoding="utf-8")
    return paths


def sample_dir() -> Path:
    return Path(__file__).parent / "data"


if __name__ == "__main__":
    write_sample(Path(sys.argv[1]) if len(sys.argv) > 1 else sample_dir())
