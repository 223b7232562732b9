"""Publication, citation and categorical indicators computed from records.

Values are kept at full precision; :func:`display` applies the two-decimal
half-up rounding used in the emitted reports.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Iterable, Mapping, Sequence

from citepath.records import (
    OA_TAGS,
    PLATFORMS,
    AltmetricMentionRecord,
    GenderMap,
    PublicationRecord,
    normalize_doi,
)

AUTHORSHIP_BUCKETS = ("1", "2-5", "6-10", ">10")
COLLAB_CLASSES = ("domestic-single", "domestic-multi", "international")
ENTITY_KEYS = ("country", "institution", "funder", "sdg")
OPEN_TAGS = tuple(t for t in OA_TAGS if t != "closed")
DEFAULT_MIN_ACCURACY = 70.0
DEFAULT_ALTMETRIC_WINDOW = (2011, 2020)


def display(value: float | None, digits: int = 2) -> str:
    """Half-up rounding to ``digits`` decimals; ``None`` renders empty."""
    if value is None:
        return ""
    q = Decimal(1).scaleb(-digits)
    return str(Decimal(repr(float(value))).quantize(q, rounding=ROUND_HALF_UP))


def _pct(part: int, whole: int) -> float | None:
    return 100.0 * part / whole if whole else None


def _csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([display(v) if isinstance(v, float) else ("" if v is None else v) for v in row])
    return buf.getvalue()


# -- growth and impact -------------------------------------------------------


def cagr(v_begin: float, v_final: float, t_years: float) -> float:
    """Compounded annual growth rate in percent."""
    if v_begin <= 0:
        raise ValueError("v_begin must be positive")
    if t_years <= 0:
        raise ValueError("t_years must be positive")
    return ((v_final / v_begin) ** (1.0 / t_years) - 1.0) * 100.0


def annual_growth_rates(tp_by_year: Mapping[int, int]) -> dict[int, float | None]:
    """AGR(y) = 100 * (TP(y) - TP(y-1)) / TP(y-1) over a contiguous year span.

    The first year, and any year following a zero-publication year, gets None.
    """
    if not tp_by_year:
        return {}
    lo, hi = min(tp_by_year), max(tp_by_year)
    out: dict[int, float | None] = {lo: None}
    for y in range(lo + 1, hi + 1):
        prev = tp_by_year.get(y - 1, 0)
        cur = tp_by_year.get(y, 0)
        out[y] = 100.0 * (cur - prev) / prev if prev else None
    return out


def h_index(citation_counts: Iterable[int]) -> int:
    ranked = sorted(citation_counts, reverse=True)
    h = 0
    for i, c in enumerate(ranked, start=1):
        if c < i:
            break
        h = i
    return h


@dataclass(frozen=True)
class YearRow:
    year: int
    tp: int
    tc: int
    cited: int
    agr: float | None
    cpp: float | None
    cited_pct: float | None


@dataclass
class IndicatorTable:
    rows: list[YearRow]
    cagr: float | None
    h_index: int
    total_tp: int
    total_tc: int
    excluded_no_year: int = 0

    def row(self, year: int) -> YearRow:
        for r in self.rows:
            if r.year == year:
                return r
        raise KeyError(year)

    def to_csv(self) -> str:
        return _csv(
            ["year", "TP", "AGR", "TC", "CPP", "Cited%"],
            [(r.year, r.tp, r.agr, r.tc, r.cpp, r.cited_pct) for r in self.rows],
        )

    def to_json(self) -> dict:
        return {
            "rows": [asdict(r) for r in self.rows],
            "cagr": self.cagr,
            "h_index": self.h_index,
            "total_tp": self.total_tp,
            "total_tc": self.total_tc,
            "excluded_no_year": self.excluded_no_year,
        }


def annual_table(records: Sequence[PublicationRecord]) -> IndicatorTable:
    """Per-year TP, TC, AGR, CPP and Cited%, plus dataset CAGR and h-index.

    CAGR uses the inclusive count of years in the span as its exponent
    denominator. Records without a year are excluded and counted.
    """
    dated = [r for r in records if r.year is not None]
    by_year: dict[int, list[PublicationRecord]] = defaultdict(list)
    for r in dated:
        by_year[r.year].append(r)
    tp = {y: len(v) for y, v in by_year.items()}
    agr = annual_growth_rates(tp)
    rows = []
    for y in sorted(agr):
        recs = by_year.get(y, [])
        n = len(recs)
        tc = sum(r.times_cited for r in recs)
        cited = sum(1 for r in recs if r.times_cited > 0)
        rows.append(YearRow(y, n, tc, cited, agr[y], tc / n if n else None, _pct(cited, n)))
    growth = None
    if rows and rows[0].tp > 0:
        growth = cagr(rows[0].tp, rows[-1].tp, len(rows))
    return IndicatorTable(
        rows=rows,
        cagr=growth,
        h_index=h_index(r.times_cited for r in records),
        total_tp=len(records),
        total_tc=sum(r.times_cited for r in records),
        excluded_no_year=len(records) - len(dated),
    )


# -- entity tallies ----------------------------------------------------------


def _entities(record: PublicationRecord, key: str) -> set[str]:
    if key == "country":
        return set(record.research_org_countries)
    if key == "institution":
        return set(record.research_orgs)
    if key == "funder":
        return set(record.funders)
    if key == "sdg":
        return set(record.category_sdg)
    raise ValueError(f"unknown entity key {key!r}; expected one of {ENTITY_KEYS}")


@dataclass(frozen=True)
class EntityRow:
    entity: str
    tp: int
    tc: int
    cited: int

    @property
    def cpp(self) -> float:
        return self.tc / self.tp

    @property
    def cited_pct(self) -> float:
        return 100.0 * self.cited / self.tp


def entity_table(records: Iterable[PublicationRecord], key: str) -> list[EntityRow]:
    """Whole-counted TP/TC per country, institution, funder or SDG label."""
    tp: Counter = Counter()
    tc: Counter = Counter()
    cited: Counter = Counter()
    for r in records:
        for e in _entities(r, key):
            tp[e] += 1
            tc[e] += r.times_cited
            cited[e] += r.times_cited > 0
    rows = [EntityRow(e, tp[e], tc[e], cited[e]) for e in tp]
    rows.sort(key=lambda row: (-row.tp, row.entity))
    return rows


def entity_csv(rows: Iterable[EntityRow], key: str) -> str:
    return _csv(
        [key, "TP", "TC", "CPP", "Cited%"],
        [(r.entity, r.tp, r.tc, r.cpp, r.cited_pct) for r in rows],
    )


# -- categorical breakdowns --------------------------------------------------


@dataclass
class Breakdown:
    """Per-year counts over fixed categories, with shares in percent."""

    categories: tuple[str, ...]
    counts: dict[int, Counter]
    excluded: int = 0

    def shares(self, year: int, exclude: tuple[str, ...] = ()) -> dict[str, float]:
        """Percent per category; ``exclude`` drops categories from the denominator too."""
        c = self.counts[year]
        keep = [k for k in self.categories if k not in exclude]
        total = sum(c[k] for k in keep)
        return {k: (100.0 * c[k] / total if total else 0.0) for k in keep}

    def years(self) -> list[int]:
        return sorted(self.counts)

    def to_csv(self) -> str:
        rows = []
        for y in self.years():
            s = self.shares(y)
            rows.append([y, sum(self.counts[y].values()), *(s[k] for k in self.categories)])
        return _csv(["year", "papers", *self.categories], rows)


def _breakdown(
    records: Iterable[PublicationRecord], categories: tuple[str, ...], classify
) -> Breakdown:
    counts: dict[int, Counter] = defaultdict(Counter)
    excluded = 0
    for r in records:
        label = classify(r) if r.year is not None else None
        if label is None:
            excluded += 1
            continue
        counts[r.year][label] += 1
    return Breakdown(categories, dict(counts), excluded)


def authorship_bucket(n_authors: int) -> str:
    if n_authors < 1:
        raise ValueError("a paper has at least one author")
    if n_authors == 1:
        return "1"
    if n_authors <= 5:
        return "2-5"
    if n_authors <= 10:
        return "6-10"
    return ">10"


def authorship_buckets(records: Iterable[PublicationRecord]) -> Breakdown:
    """Yearly shares of papers with 1, 2-5, 6-10 and more than 10 authors."""

    def classify(r: PublicationRecord) -> str | None:
        n = r.n_authors
        return authorship_bucket(n) if n else None

    return _breakdown(records, AUTHORSHIP_BUCKETS, classify)


def collaboration_class(record: PublicationRecord) -> str | None:
    """Domestic single-institution, domestic multi-institution or international.

    Returns None when the record lists neither organisations nor countries.
    """
    countries = set(record.research_org_countries)
    orgs = set(record.research_orgs)
    if not countries and not orgs:
        return None
    if len(countries) >= 2:
        return "international"
    if len(orgs) >= 2:
        return "domestic-multi"
    return "domestic-single"


def collaboration_shares(records: Iterable[PublicationRecord]) -> Breakdown:
    return _breakdown(records, COLLAB_CLASSES, collaboration_class)


@dataclass
class OABreakdown:
    status: Breakdown
    types: Counter
    types_by_year: dict[int, Counter] = field(default_factory=dict)

    def type_shares(self) -> dict[str, float]:
        total = sum(self.types.values())
        return {t: (100.0 * self.types[t] / total if total else 0.0) for t in OPEN_TAGS}

    def to_csv(self) -> str:
        return self.status.to_csv()

    def types_csv(self) -> str:
        shares = self.type_shares()
        return _csv(["type", "papers", "share"], [(t, self.types[t], shares[t]) for t in OPEN_TAGS])


def oa_breakdown(records: Sequence[PublicationRecord]) -> OABreakdown:
    """Yearly open/closed shares plus the distribution of open-access types.

    Records without an open_access tag are excluded and counted.
    """

    def classify(r: PublicationRecord) -> str | None:
        if r.open_access is None:
            return None
        return "closed" if r.open_access == "closed" else "open"

    status = _breakdown(records, ("open", "closed"), classify)
    types: Counter = Counter()
    by_year: dict[int, Counter] = defaultdict(Counter)
    for r in records:
        if r.open_access in OPEN_TAGS and r.year is not None:
            types[r.open_access] += 1
            by_year[r.year][r.open_access] += 1
    return OABreakdown(status, types, dict(by_year))


def gender_distribution(
    records: Iterable[PublicationRecord],
    gender_map: GenderMap,
    min_accuracy: float = DEFAULT_MIN_ACCURACY,
) -> Breakdown:
    """Yearly shares of female, male and unknown first authors.

    A map entry counts only when its accuracy reaches ``min_accuracy``; missing
    or low-confidence resolutions fall into "unknown".
    """

    def classify(r: PublicationRecord) -> str:
        first = r.first_author
        if first is None:
            return "unknown"
        entry = gender_map.lookup(first.name, r.research_org_countries)
        if entry is None or entry.accuracy < min_accuracy:
            return "unknown"
        return entry.gender

    return _breakdown(records, ("female", "male", "unknown"), classify)


@dataclass(frozen=True)
class PlatformRow:
    platform: str
    covered: int
    mentions: int
    coverage_pct: float | None

    @property
    def avg_mentions(self) -> float | None:
        return self.mentions / self.covered if self.covered else None


@dataclass
class AltmetricTable:
    window: tuple[int, int]
    total: int
    covered_any: int
    rows: list[PlatformRow]

    @property
    def coverage_any_pct(self) -> float | None:
        return _pct(self.covered_any, self.total)

    def platform(self, name: str) -> PlatformRow:
        return next(r for r in self.rows if r.platform == name)

    def to_csv(self) -> str:
        rows = [(r.platform, r.covered, r.coverage_pct, r.avg_mentions) for r in self.rows]
        rows.append(("any", self.covered_any, self.coverage_any_pct, None))
        return _csv(["platform", "covered", "coverage%", "avg_mentions"], rows)


def altmetric_coverage(
    records: Iterable[PublicationRecord],
    mentions: Mapping[str, AltmetricMentionRecord],
    window: tuple[int, int] = DEFAULT_ALTMETRIC_WINDOW,
) -> AltmetricTable:
    """Per-platform coverage and mean mentions per covered paper in a year window.

    ``mentions`` is keyed by normalized DOI (see :func:`normalize_doi`).
    """
    lo, hi = window
    in_window = [r for r in records if r.year is not None and lo <= r.year <= hi]
    hits = []
    for r in in_window:
        m = mentions.get(normalize_doi(r.doi)) if r.doi else None
        if m is not None:
            hits.append(m)
    rows = []
    for p in PLATFORMS:
        counts = [m.count(p) for m in hits if m.count(p) > 0]
        rows.append(PlatformRow(p, len(counts), sum(counts), _pct(len(counts), len(in_window))))
    covered_any = sum(1 for m in hits if any(m.count(p) > 0 for p in PLATFORMS))
    return AltmetricTable((lo, hi), len(in_window), covered_any, rows)


def to_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
