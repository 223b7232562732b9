"""Publication metadata records and their sidecar files.

Records travel as JSON lines, one object per line, with the field names used by
the Dimensions export (``id``, ``year``, ``authors``, ``research_orgs``,
``concepts_scores`` ...). Gender resolutions and altmetric mention counts come
from separate CSV files so that no live service is needed.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import unicodedata
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

OA_TAGS = ("closed", "green", "bronze", "hybrid", "gold")
GENDERS = ("female", "male", "unknown")
PLATFORMS = ("twitter", "facebook", "news", "blog", "wikipedia", "mendeley")

MIN_YEAR = 1900

KNOWN_FIELDS = (
    "id",
    "doi",
    "year",
    "authors",
    "authors_count",
    "research_orgs",
    "research_org_countries",
    "referenced_pubs",
    "open_access",
    "category_sdg",
    "concepts_scores",
    "times_cited",
    "funders",
)


class RecordError(ValueError):
    """A record or sidecar row violates the input schema."""


class DuplicateRecordError(RecordError):
    def __init__(self, record_id: str, first_line: int, line: int):
        self.record_id = record_id
        self.first_line = first_line
        self.line = line
        super().__init__(
            f"duplicate record id {record_id!r} on line {line} "
            f"(first seen on line {first_line})"
        )


def normalize_concept(text: str) -> str:
    """NFC-normalize and trim a concept string, preserving case."""
    return unicodedata.normalize("NFC", text).strip()


@dataclass(frozen=True)
class Author:
    name: str
    position: int


@dataclass(frozen=True)
class PublicationRecord:
    id: str
    year: int | None = None
    doi: str | None = None
    authors: tuple[Author, ...] = ()
    authors_count: int | None = None
    research_orgs: tuple[str, ...] = ()
    research_org_countries: tuple[str, ...] = ()
    referenced_pubs: tuple[str, ...] = ()
    open_access: str | None = None
    category_sdg: tuple[str, ...] = ()
    concepts_scores: tuple[tuple[str, float], ...] = ()
    times_cited: int = 0
    funders: tuple[str, ...] = ()
    extra: Mapping[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise RecordError("id must be a non-empty string")
        if self.year is not None:
            current = _dt.date.today().year
            if not MIN_YEAR <= self.year <= current:
                raise RecordError(f"year {self.year} outside [{MIN_YEAR}, {current}]")
        if self.authors_count is not None:
            if self.authors_count < 0:
                raise RecordError("authors_count must be non-negative")
            if self.authors and self.authors_count != len(self.authors):
                raise RecordError(
                    f"authors_count {self.authors_count} != {len(self.authors)} listed authors"
                )
        if self.times_cited < 0:
            raise RecordError("times_cited must be non-negative")
        if self.open_access is not None and self.open_access not in OA_TAGS:
            raise RecordError(f"unknown open_access tag {self.open_access!r}")
        for concept, score in self.concepts_scores:
            if not 0.0 <= score <= 1.0:
                raise RecordError(f"relevance {score} of {concept!r} outside [0, 1]")

    @property
    def first_author(self) -> Author | None:
        if not self.authors:
            return None
        return min(self.authors, key=lambda a: a.position)

    @property
    def n_authors(self) -> int | None:
        if self.authors_count is not None:
            return self.authors_count
        return len(self.authors) if self.authors else None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = dict(self.extra)
        out.update(
            id=self.id,
            doi=self.doi,
            year=self.year,
            authors=[{"full_name": a.name, "position": a.position} for a in self.authors],
            authors_count=self.authors_count,
            research_orgs=list(self.research_orgs),
            research_org_countries=list(self.research_org_countries),
            referenced_pubs=list(self.referenced_pubs),
            open_access=self.open_access,
            category_sdg=list(self.category_sdg),
            concepts_scores=[
                {"concept": c, "relevance": s} for c, s in self.concepts_scores
            ],
            times_cited=self.times_cited,
            funders=list(self.funders),
        )
        return out


def _str_list(value: Any, name: str) -> tuple[str, ...]:
    if value is None:
        return ()
    if isinstance(value, str) or not isinstance(value, list):
        raise RecordError(f"{name} must be a list")
    out = []
    for item in value:
        if not isinstance(item, (str, int)) or isinstance(item, bool):
            raise RecordError(f"{name} entries must be strings")
        out.append(str(item))
    return tuple(out)


def _opt_int(value: Any, name: str) -> int | None:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise RecordError(f"{name} must be an integer")
    return value


def _authors(value: Any) -> tuple[Author, ...]:
    if value is None:
        return ()
    if not isinstance(value, list):
        raise RecordError("authors must be a list")
    out = []
    for i, item in enumerate(value, start=1):
        if isinstance(item, str):
            out.append(Author(item, i))
        elif isinstance(item, dict):
            name = item.get("full_name") or item.get("name")
            if not isinstance(name, str):
                raise RecordError("author entry without full_name")
            pos = item.get("position", i)
            if not isinstance(pos, int):
                raise RecordError("author position must be an integer")
            out.append(Author(name, pos))
        elif isinstance(item, list) and len(item) == 2:
            out.append(Author(str(item[0]), int(item[1])))
        else:
            raise RecordError(f"cannot read author entry {item!r}")
    return tuple(out)


def _concepts(value: Any) -> tuple[tuple[str, float], ...]:
    if value is None:
        return ()
    if not isinstance(value, list):
        raise RecordError("concepts_scores must be a list")
    out = []
    for item in value:
        if isinstance(item, dict):
            concept, score = item.get("concept"), item.get("relevance")
        elif isinstance(item, list) and len(item) == 2:
            concept, score = item
        else:
            raise RecordError(f"cannot read concept entry {item!r}")
        if not isinstance(concept, str) or isinstance(score, bool) or not isinstance(
            score, (int, float)
        ):
            raise RecordError(f"cannot read concept entry {item!r}")
        out.append((normalize_concept(concept), float(score)))
    return tuple(out)


def record_from_json(obj: Mapping[str, Any]) -> PublicationRecord:
    """Build a record from a decoded JSON object; unknown keys go to ``extra``."""
    if not isinstance(obj, Mapping):
        raise RecordError("record must be a JSON object")
    rid = obj.get("id")
    if isinstance(rid, int) and not isinstance(rid, bool):
        rid = str(rid)
    if not isinstance(rid, str) or not rid:
        raise RecordError("missing id")
    doi = obj.get("doi")
    if doi is not None and not isinstance(doi, str):
        raise RecordError("doi must be a string")
    oa = obj.get("open_access")
    if oa is not None and not isinstance(oa, str):
        raise RecordError("open_access must be a string tag")
    times_cited = _opt_int(obj.get("times_cited"), "times_cited")
    extra = {k: v for k, v in obj.items() if k not in KNOWN_FIELDS}
    return PublicationRecord(
        id=rid,
        doi=doi,
        year=_opt_int(obj.get("year"), "year"),
        authors=_authors(obj.get("authors")),
        authors_count=_opt_int(obj.get("authors_count"), "authors_count"),
        research_orgs=_str_list(obj.get("research_orgs"), "research_orgs"),
        research_org_countries=_str_list(
            obj.get("research_org_countries"), "research_org_countries"
        ),
        referenced_pubs=_str_list(obj.get("referenced_pubs"), "referenced_pubs"),
        open_access=oa,
        category_sdg=_str_list(obj.get("category_sdg"), "category_sdg"),
        concepts_scores=_concepts(obj.get("concepts_scores")),
        times_cited=times_cited or 0,
        funders=_str_list(obj.get("funders"), "funders"),
        extra=extra,
    )


@dataclass(frozen=True)
class ParseIssue:
    line: int
    reason: str


@dataclass
class ParseResult:
    records: list[PublicationRecord]
    issues: list[ParseIssue]

    @property
    def lines_read(self) -> int:
        return len(self.records) + len(self.issues)


def parse_records(lines: Iterable[str], strict: bool = False) -> ParseResult:
    """Parse JSON-lines publication records.

    Malformed lines are collected as :class:`ParseIssue` entries (or raised when
    ``strict``). Duplicate ids always raise :class:`DuplicateRecordError`.
    Records come back in input order.
    """
    records: list[PublicationRecord] = []
    issues: list[ParseIssue] = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(lines, start=1):
        try:
            if not line.strip():
                raise RecordError("blank line")
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RecordError(f"invalid JSON: {exc.msg}") from None
            rec = record_from_json(obj)
        except RecordError as exc:
            if strict:
                raise RecordError(f"line {lineno}: {exc}") from exc
            issues.append(ParseIssue(lineno, str(exc)))
            continue
        if rec.id in seen:
            raise DuplicateRecordError(rec.id, seen[rec.id], lineno)
        seen[rec.id] = lineno
        records.append(rec)
    return ParseResult(records, issues)


def dump_records(records: Iterable[PublicationRecord]) -> str:
    return "".join(
        json.dumps(r.to_json(), ensure_ascii=False, sort_keys=True) + "\n" for r in records
    )


def read_records(path) -> ParseResult:
    with open(path, encoding="utf-8") as fh:
        return parse_records(fh.read().splitlines())


# -- sidecar files -----------------------------------------------------------


@dataclass(frozen=True)
class GenderMapEntry:
    name: str
    country: str
    gender: str
    accuracy: float

    def __post_init__(self) -> None:
        if self.gender not in GENDERS:
            raise RecordError(f"unknown gender {self.gender!r}")
        if not 0.0 <= self.accuracy <= 100.0:
            raise RecordError(f"accuracy {self.accuracy} outside [0, 100]")


class GenderMap:
    """Lookup of pre-resolved first-author genders keyed by (name, country)."""

    def __init__(self, entries: Iterable[GenderMapEntry] = ()):
        self._by_key: dict[tuple[str, str], GenderMapEntry] = {}
        for e in entries:
            self._by_key[(e.name.strip().casefold(), e.country.strip().casefold())] = e

    def __len__(self) -> int:
        return len(self._by_key)

    def entries(self) -> list[GenderMapEntry]:
        return list(self._by_key.values())

    def lookup(self, name: str, countries: Iterable[str] = ()) -> GenderMapEntry | None:
        """Match on each candidate country in order, then on a country-less entry."""
        key = name.strip().casefold()
        for country in countries:
            hit = self._by_key.get((key, country.strip().casefold()))
            if hit is not None:
                return hit
        return self._by_key.get((key, ""))


@dataclass(frozen=True)
class AltmetricMentionRecord:
    doi: str
    twitter: int = 0
    facebook: int = 0
    news: int = 0
    blog: int = 0
    wikipedia: int = 0
    mendeley: int = 0

    def __post_init__(self) -> None:
        for platform in PLATFORMS:
            if getattr(self, platform) < 0:
                raise RecordError(f"negative {platform} count for {self.doi}")

    def count(self, platform: str) -> int:
        return getattr(self, platform)


def normalize_doi(doi: str) -> str:
    return doi.strip().lower()


def _csv_rows(text: str, header: tuple[str, ...]) -> list[dict[str, str]]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        return []
    missing = [h for h in header if h not in reader.fieldnames]
    if missing:
        raise RecordError(f"CSV header lacks {', '.join(missing)}")
    return list(reader)


def parse_gender_map(text: str) -> GenderMap:
    entries = []
    for i, row in enumerate(_csv_rows(text, ("name", "country", "gender", "accuracy")), 2):
        try:
            entries.append(
                GenderMapEntry(
                    name=row["name"],
                    country=row["country"] or "",
                    gender=row["gender"].strip().lower(),
                    accuracy=float(row["accuracy"]),
                )
            )
        except (TypeError, ValueError) as exc:
            raise RecordError(f"gender map row {i}: {exc}") from exc
    return GenderMap(entries)


def parse_mentions(text: str) -> dict[str, AltmetricMentionRecord]:
    out: dict[str, AltmetricMentionRecord] = {}
    for i, row in enumerate(_csv_rows(text, ("doi",) + PLATFORMS), 2):
        try:
            counts = {p: int(row[p] or 0) for p in PLATFORMS}
            rec = AltmetricMentionRecord(doi=row["doi"].strip(), **counts)
        except (TypeError, ValueError) as exc:
            raise RecordError(f"mentions row {i}: {exc}") from exc
        out[normalize_doi(rec.doi)] = rec
    return out


def dump_gender_map(gmap: GenderMap) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "country", "gender", "accuracy"])
    for e in gmap.entries():
        w.writerow([e.name, e.country, e.gender, f"{e.accuracy:g}"])
    return buf.getvalue()


def dump_mentions(mentions: Iterable[AltmetricMentionRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["doi", *PLATFORMS])
    for m in mentions:
        w.writerow([m.doi, *(m.count(p) for p in PLATFORMS)])
    return buf.getvalue()
