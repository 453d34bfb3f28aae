"""Synthetic corpora with known ground truth, and brute-force oracles.

The generator writes a corpus file, a matching registry, a taxonomy copy,
and a ledger of exact per-(publisher, scope) counts recorded while the
records were being produced. Everything is driven by one seeded RNG in a
fixed call order, so the same parameters give byte-identical files.

The oracle computes all six indicators by the most naive enumeration
possible (quadratic cell scans, one pass per question) and shares no
aggregation code with the indicators module; agreement between the two is
therefore meaningful evidence.
"""

from __future__ import annotations

import csv
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .corpus import ResolvedCorpus
from .errors import ConfigError
from .indicators import SCOPE_DISCIPLINE, SCOPE_FIELD, Scope
from .taxonomy import TaxonomyMap

EXCLUDED_NAME = "Annual Reviews"

_NAME_STEMS = (
    "Meridian", "Harbor", "Summit", "Juniper", "Beacon", "Cobalt", "Granite",
    "Lyceum", "Arcadia", "Foxglove", "Helix", "Quarto", "Sable", "Vesper",
    "Willow", "Zephyr", "Atlas", "Borealis", "Cadence", "Northgate",
)
_NAME_SUFFIXES = ("Press", "Publishing", "Books", "Academic Publishers", "House")
_CITIES = ("Amsterdam", "Oxford", "Boston", "Heidelberg", "Singapore", "Lyon", "Uppsala")
_OTHER_DOC_TYPES = ("journal article", "proceedings paper", "reference work")


@dataclass(frozen=True)
class SynthParams:
    seed: int = 1
    publisher_count: int = 10
    items_per_publisher: tuple[int, int] = (30, 70)
    chapter_fraction: float = 0.5
    edited_fraction: float = 0.5
    category_count_weights: tuple[float, ...] = (0.8, 0.15, 0.05)
    book_citation_mean: float = 4.0
    chapter_citation_mean: float = 0.2
    book_zero_fraction: float = 0.25
    chapter_zero_fraction: float = 0.75
    year_range: tuple[int, int] = (2009, 2013)
    serial_fraction: float = 0.02
    other_doctype_fraction: float = 0.02
    out_of_window_fraction: float = 0.02
    acquisition_fraction: float = 0.15
    orphan_chapter_fraction: float = 0.02
    mangle_fraction: float = 0.4
    include_excluded_publisher: bool = True

    def __post_init__(self):
        fractions = {
            "chapter_fraction": self.chapter_fraction,
            "edited_fraction": self.edited_fraction,
            "book_zero_fraction": self.book_zero_fraction,
            "chapter_zero_fraction": self.chapter_zero_fraction,
            "serial_fraction": self.serial_fraction,
            "other_doctype_fraction": self.other_doctype_fraction,
            "out_of_window_fraction": self.out_of_window_fraction,
            "acquisition_fraction": self.acquisition_fraction,
            "orphan_chapter_fraction": self.orphan_chapter_fraction,
            "mangle_fraction": self.mangle_fraction,
        }
        for name, value in fractions.items():
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.publisher_count < 1:
            raise ConfigError("publisher_count must be positive")
        lo, hi = self.items_per_publisher
        if lo < 1 or hi < lo:
            raise ConfigError(f"items_per_publisher must be a 1 <= lo <= hi range, got {lo}:{hi}")
        if self.year_range[0] > self.year_range[1]:
            raise ConfigError("year_range start after end")
        if not self.category_count_weights or any(w < 0 for w in self.category_count_weights):
            raise ConfigError("category_count_weights must be non-negative and non-empty")
        if sum(self.category_count_weights) <= 0:
            raise ConfigError("category_count_weights must have positive mass")
        if self.book_citation_mean < 0 or self.chapter_citation_mean < 0:
            raise ConfigError("citation means must be non-negative")


@dataclass
class ScopeTruth:
    pbk: int = 0
    pch: int = 0
    cit: int = 0


@dataclass
class CellTruth:
    items: int = 0
    citations: int = 0


@dataclass
class FieldTruth:
    publishers: set[str] = field(default_factory=set)
    books: int = 0
    chapters: int = 0
    book_citations: int = 0
    chapter_citations: int = 0


@dataclass
class GroundTruthLedger:
    """Exact counts recorded while generating, for records that survive
    the standard filter, attributed to terminal owners."""

    seed: int
    scopes: dict[tuple[str, str, str], ScopeTruth] = field(default_factory=dict)
    # (discipline, doc_type, year) -> whole-counted items and citations
    cells: dict[tuple[str, str, int], CellTruth] = field(default_factory=dict)
    field_stats: dict[str, FieldTruth] = field(default_factory=dict)
    total_items: int = 0
    total_books: int = 0
    total_chapters: int = 0
    total_citations: int = 0
    total_book_citations: int = 0
    total_chapter_citations: int = 0
    all_publishers: set[str] = field(default_factory=set)

    def scope_truth(self, publisher_id: str, scope: Scope) -> ScopeTruth:
        return self.scopes.get((publisher_id, scope.kind, scope.name), ScopeTruth())

    def publisher_ids(self) -> list[str]:
        return sorted({pid for pid, _, _ in self.scopes})


@dataclass(frozen=True)
class GenerationResult:
    corpus_path: Path
    registry_dir: Path
    taxonomy_path: Path
    ledger_path: Path
    ledger: GroundTruthLedger
    item_count: int


def _publisher_name(index: int) -> str:
    stem = _NAME_STEMS[index % len(_NAME_STEMS)]
    suffix = _NAME_SUFFIXES[(index // len(_NAME_STEMS)) % len(_NAME_SUFFIXES)]
    name = f"{stem} {suffix}"
    if index >= len(_NAME_STEMS) * len(_NAME_SUFFIXES):
        name = f"{name} {index}"
    return name


def _slug(name: str) -> str:
    import re

    return re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")


def _draw_citations(rng: random.Random, mean: float, zero_fraction: float) -> int:
    """Zero-inflated geometric draw whose overall mean is `mean`."""
    if rng.random() < zero_fraction:
        return 0
    if mean <= 0 or zero_fraction >= 1.0:
        return 0
    conditional_mean = mean / (1.0 - zero_fraction)
    p = 1.0 / (1.0 + conditional_mean)
    u = rng.random()
    return int(math.floor(math.log(1.0 - u) / math.log(1.0 - p)))


def _mangle(rng: random.Random, raw: str) -> str:
    op = rng.randrange(4)
    if op == 0:
        return raw.upper()
    if op == 1:
        return raw.lower()
    if op == 2:
        return raw.replace(" ", "  ", 1)
    return f"  {raw} "


def generate_corpus(
    params: SynthParams, taxonomy: TaxonomyMap, out_dir: str | Path
) -> GenerationResult:
    """Write corpus.jsonl, registry/, taxonomy.csv, and ledger.json.

    Raw publisher strings mix canonical names, registered variants, and
    case/whitespace manglings of both; the registry resolves all of them.
    A slice of records is deliberately out of scope (serials, foreign doc
    types, out-of-window years, an excluded serial publisher) and never
    enters the ledger.
    """
    rng = random.Random(params.seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    categories = sorted(taxonomy.discipline_of)
    cat_weights = list(params.category_count_weights)
    year_lo, year_hi = params.year_range

    names = [_publisher_name(i) for i in range(params.publisher_count)]
    pids = [_slug(n) for n in names]
    types = ["university_press" if i % 4 == 3 else "commercial" for i in range(len(names))]

    # variants: zero to two registered alternate forms per publisher
    variant_rows: list[tuple[str, str, str, str]] = []
    forms: dict[str, list[str]] = {}
    for name, pid in zip(names, pids):
        own = [name]
        if rng.random() < 0.7:
            raw = f"{name} Ltd"
            city = rng.choice(_CITIES)
            variant_rows.append((raw, pid, city, ""))
            own.append(raw)
        if rng.random() < 0.35:
            raw = f"{name} Inc"
            variant_rows.append((raw, pid, "", ""))
            own.append(raw)
        forms[pid] = own

    # acquisitions: acquired publishers keep emitting records under their
    # own names; the ledger attributes those records to the terminal owner
    acquirer_of: dict[str, str] = {}
    acquisition_rows: list[tuple[str, str, str]] = []
    n_acq = min(round(params.publisher_count * params.acquisition_fraction),
                params.publisher_count - 1)
    if n_acq > 0:
        for idx in sorted(rng.sample(range(params.publisher_count - 1), n_acq)):
            acquirer_idx = rng.randrange(idx + 1, params.publisher_count)
            year = "" if rng.random() < 0.3 else str(rng.randint(year_lo, year_hi))
            acquirer_of[pids[idx]] = pids[acquirer_idx]
            acquisition_rows.append((pids[idx], pids[acquirer_idx], year))

    def terminal(pid: str) -> str:
        while pid in acquirer_of:
            pid = acquirer_of[pid]
        return pid

    ledger = GroundTruthLedger(seed=params.seed)
    lines: list[str] = []
    seq = 0

    def record_truth(pid: str, doc_type: str, year: int, cats: list[str], citations: int):
        tpid = terminal(pid)
        discs = sorted({taxonomy.discipline_of[c] for c in cats})
        fields_ = sorted({taxonomy.field_of[d] for d in discs})
        for kind, name_list in ((SCOPE_DISCIPLINE, discs), (SCOPE_FIELD, fields_)):
            for scope_name in name_list:
                truth = ledger.scopes.setdefault((tpid, kind, scope_name), ScopeTruth())
                if doc_type == "book":
                    truth.pbk += 1
                else:
                    truth.pch += 1
                truth.cit += citations
        for d in discs:
            cell = ledger.cells.setdefault((d, doc_type, year), CellTruth())
            cell.items += 1
            cell.citations += citations
        for f in fields_:
            ft = ledger.field_stats.setdefault(f, FieldTruth())
            ft.publishers.add(tpid)
            if doc_type == "book":
                ft.books += 1
                ft.book_citations += citations
            else:
                ft.chapters += 1
                ft.chapter_citations += citations
        ledger.total_items += 1
        if doc_type == "book":
            ledger.total_books += 1
            ledger.total_book_citations += citations
        else:
            ledger.total_chapters += 1
            ledger.total_chapter_citations += citations
        ledger.total_citations += citations
        ledger.all_publishers.add(tpid)

    def raw_for(pid: str, canonical_name: str) -> str:
        raw = rng.choice(forms.get(pid, [canonical_name]))
        if rng.random() < params.mangle_fraction:
            raw = _mangle(rng, raw)
        return raw

    def emit(record: dict) -> None:
        lines.append(json.dumps(record, ensure_ascii=False))

    for name, pid in zip(names, pids):
        count = rng.randint(*params.items_per_publisher)
        kinds = []
        for _ in range(count):
            if rng.random() < params.other_doctype_fraction:
                kinds.append("other")
            elif rng.random() < params.chapter_fraction:
                kinds.append("chapter")
            else:
                kinds.append("book")

        book_ids: list[str] = []
        edited_of: dict[str, bool] = {}
        # books first so chapters can reference real parents
        for kind in ("book", "other", "chapter"):
            for _ in range(kinds.count(kind)):
                seq += 1
                item_id = f"itm-{seq:06d}"
                if rng.random() < params.out_of_window_fraction:
                    year = year_lo - rng.randint(1, 3) if rng.random() < 0.5 else year_hi + rng.randint(1, 3)
                else:
                    year = rng.randint(year_lo, year_hi)
                serial = rng.random() < params.serial_fraction
                k = rng.choices(range(1, len(cat_weights) + 1), weights=cat_weights)[0]
                cats = sorted(rng.sample(categories, min(k, len(categories))))
                if kind == "chapter":
                    citations = _draw_citations(
                        rng, params.chapter_citation_mean, params.chapter_zero_fraction
                    )
                else:
                    citations = _draw_citations(
                        rng, params.book_citation_mean, params.book_zero_fraction
                    )
                record = {
                    "id": item_id,
                    "doc_type": kind if kind != "other" else rng.choice(_OTHER_DOC_TYPES),
                    "publisher": raw_for(pid, name),
                    "year": year,
                    "categories": cats,
                    "citations": citations,
                }
                if serial:
                    record["serial"] = True
                in_window = year_lo <= year <= year_hi
                if kind == "book":
                    edited = rng.random() < params.edited_fraction
                    record["edited"] = edited
                    book_ids.append(item_id)
                    edited_of[item_id] = edited
                elif kind == "chapter":
                    if book_ids and rng.random() >= params.orphan_chapter_fraction:
                        record["parent_book_id"] = rng.choice(book_ids)
                    else:
                        record["parent_book_id"] = f"{pid}-missing-{seq:06d}"
                emit(record)
                if kind in ("book", "chapter") and not serial and in_window:
                    record_truth(pid, kind, year, cats, citations)

    if params.include_excluded_publisher:
        for _ in range(rng.randint(3, 8)):
            seq += 1
            raw = EXCLUDED_NAME if rng.random() >= params.mangle_fraction else _mangle(rng, EXCLUDED_NAME)
            emit({
                "id": f"itm-{seq:06d}",
                "doc_type": "book",
                "publisher": raw,
                "year": rng.randint(year_lo, year_hi),
                "categories": [rng.choice(categories)],
                "citations": _draw_citations(rng, params.book_citation_mean, params.book_zero_fraction),
                "edited": False,
            })

    corpus_path = out / "corpus.jsonl"
    corpus_path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")

    registry_dir = out / "registry"
    registry_dir.mkdir(exist_ok=True)
    with (registry_dir / "publishers.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "name", "type", "website"])
        for name, pid, ptype in zip(names, pids, types):
            writer.writerow([pid, name, ptype, f"https://example.org/{pid}"])
        if params.include_excluded_publisher:
            writer.writerow(["annual-reviews", EXCLUDED_NAME, "commercial", ""])
    with (registry_dir / "variants.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["raw", "canonical_id", "city", "address"])
        writer.writerows(variant_rows)
    with (registry_dir / "acquisitions.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["acquired_id", "acquirer_id", "year"])
        writer.writerows(acquisition_rows)

    taxonomy_path = out / "taxonomy.csv"
    with taxonomy_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["category", "discipline", "field"])
        for category in categories:
            discipline = taxonomy.discipline_of[category]
            writer.writerow([category, discipline, taxonomy.field_of[discipline]])

    ledger_path = out / "ledger.json"
    ledger_path.write_text(_ledger_to_json(ledger), encoding="utf-8")

    return GenerationResult(
        corpus_path=corpus_path,
        registry_dir=registry_dir,
        taxonomy_path=taxonomy_path,
        ledger_path=ledger_path,
        ledger=ledger,
        item_count=len(lines),
    )


def _ledger_to_json(ledger: GroundTruthLedger) -> str:
    payload = {
        "seed": ledger.seed,
        "totals": {
            "items": ledger.total_items,
            "books": ledger.total_books,
            "chapters": ledger.total_chapters,
            "citations": ledger.total_citations,
            "book_citations": ledger.total_book_citations,
            "chapter_citations": ledger.total_chapter_citations,
            "publishers": sorted(ledger.all_publishers),
        },
        "scopes": {
            f"{pid}|{kind}|{name}": {"pbk": t.pbk, "pch": t.pch, "cit": t.cit}
            for (pid, kind, name), t in ledger.scopes.items()
        },
        "cells": {
            f"{d}|{dt}|{year}": {"items": c.items, "citations": c.citations}
            for (d, dt, year), c in ledger.cells.items()
        },
        "fields": {
            name: {
                "publishers": sorted(ft.publishers),
                "books": ft.books,
                "chapters": ft.chapters,
                "book_citations": ft.book_citations,
                "chapter_citations": ft.chapter_citations,
            }
            for name, ft in ledger.field_stats.items()
        },
    }
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def load_ledger(path: str | Path) -> GroundTruthLedger:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    ledger = GroundTruthLedger(seed=data["seed"])
    ledger.total_items = data["totals"]["items"]
    ledger.total_books = data["totals"]["books"]
    ledger.total_chapters = data["totals"]["chapters"]
    ledger.total_citations = data["totals"]["citations"]
    ledger.total_book_citations = data["totals"]["book_citations"]
    ledger.total_chapter_citations = data["totals"]["chapter_citations"]
    ledger.all_publishers = set(data["totals"]["publishers"])
    for key, entry in data["scopes"].items():
        pid, kind, name = key.split("|", 2)
        ledger.scopes[(pid, kind, name)] = ScopeTruth(entry["pbk"], entry["pch"], entry["cit"])
    for key, entry in data["cells"].items():
        d, dt, year = key.rsplit("|", 2)[0], key.rsplit("|", 2)[1], int(key.rsplit("|", 2)[2])
        ledger.cells[(d, dt, year)] = CellTruth(entry["items"], entry["citations"])
    for name, entry in data["fields"].items():
        ledger.field_stats[name] = FieldTruth(
            publishers=set(entry["publishers"]),
            books=entry["books"],
            chapters=entry["chapters"],
            book_citations=entry["book_citations"],
            chapter_citations=entry["chapter_citations"],
        )
    return ledger


# --- brute-force oracle -----------------------------------------------------


def _oracle_disciplines(item, taxonomy: TaxonomyMap) -> list[str]:
    seen = []
    for category in item.categories:
        d = taxonomy.discipline_of.get(category)
        if d is not None and d not in seen:
            seen.append(d)
    return seen


def _oracle_in_scope(discs: list[str], scope: Scope, taxonomy: TaxonomyMap) -> bool:
    if scope.kind == SCOPE_DISCIPLINE:
        return scope.name in discs
    for d in discs:
        if taxonomy.field_of[d] == scope.name:
            return True
    return False


def oracle_indicators(
    publisher_id: str,
    scope: Scope,
    corpus: ResolvedCorpus,
    taxonomy: TaxonomyMap,
) -> tuple[int, int, int, float, float, float]:
    """(pbk, pch, cit, fncs, ai, ed) by exhaustive enumeration.

    Every cell mean is recomputed from scratch with a full corpus scan per
    contributing item, so this is quadratic and only fit for small test
    corpora.
    """
    pairs = list(corpus.pairs())

    pbk = pch = cit = 0
    for item, pid in pairs:
        if pid != publisher_id:
            continue
        discs = _oracle_disciplines(item, taxonomy)
        if not _oracle_in_scope(discs, scope, taxonomy):
            continue
        if item.doc_type == "book":
            pbk += 1
        else:
            pch += 1
        cit += item.citations

    # FNCS: actual citations over summed expected citations
    actual = 0
    expected = Fraction(0)
    for item, pid in pairs:
        if pid != publisher_id:
            continue
        discs = _oracle_disciplines(item, taxonomy)
        if not _oracle_in_scope(discs, scope, taxonomy):
            continue
        actual += item.citations
        if scope.kind == SCOPE_DISCIPLINE:
            members = [scope.name]
        else:
            members = [d for d in discs if taxonomy.field_of[d] == scope.name]
        means = []
        for d in members:
            n = 0
            s = 0
            for other, _opid in pairs:
                other_discs = _oracle_disciplines(other, taxonomy)
                if (
                    d in other_discs
                    and other.doc_type == item.doc_type
                    and other.pub_year == item.pub_year
                ):
                    n += 1
                    s += other.citations
            means.append(Fraction(s, n))
        expected += sum(means, Fraction(0)) / len(means)
    fncs = float(Fraction(actual) / expected) if expected else 0.0

    # AI: own in-scope share of books over corpus in-scope share of books
    own_scope = own_total = all_scope = all_total = 0
    for item, pid in pairs:
        if item.doc_type != "book":
            continue
        discs = _oracle_disciplines(item, taxonomy)
        if not discs:
            continue
        in_scope = _oracle_in_scope(discs, scope, taxonomy)
        all_total += 1
        if in_scope:
            all_scope += 1
        if pid == publisher_id:
            own_total += 1
            if in_scope:
                own_scope += 1
    if own_total and all_scope:
        ai = float(Fraction(own_scope * all_total, own_total * all_scope))
    else:
        ai = 0.0

    # ED: share of chapters whose parent book is flagged edited
    edited_books = {}
    for item, _pid in pairs:
        if item.doc_type == "book":
            edited_books[item.item_id] = bool(item.book_is_edited)
    chapters = from_edited = 0
    for item, pid in pairs:
        if pid != publisher_id or item.doc_type != "chapter":
            continue
        discs = _oracle_disciplines(item, taxonomy)
        if not _oracle_in_scope(discs, scope, taxonomy):
            continue
        chapters += 1
        if edited_books.get(item.parent_book_id, False):
            from_edited += 1
    ed = 100 * from_edited / chapters if chapters else 0.0

    return pbk, pch, cit, fncs, ai, ed
