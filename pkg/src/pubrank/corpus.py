"""Corpus ingestion, filtering, resolution, and summary statistics.

The input format is UTF-8 line-delimited JSON, one item per line. Ingest
is tolerant: a malformed line becomes a diagnostic and the run continues;
only unreadable sources and duplicate item ids are fatal. Filtering and
stats are pure functions over the ingested records.
"""

from __future__ import annotations

import hashlib
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import CorpusError, DuplicateItemError, UnresolvedPublisherError
from .registry import PublisherRegistry, fold_name
from .taxonomy import TaxonomyMap, scopes_of_item

DOC_BOOK = "book"
DOC_CHAPTER = "chapter"

DEFAULT_WINDOW = (2009, 2013)
DEFAULT_EXCLUDED_PUBLISHERS = ("Annual Reviews",)

_KNOWN_KEYS = {
    "id",
    "doc_type",
    "publisher",
    "year",
    "categories",
    "citations",
    "serial",
    "parent_book_id",
    "edited",
}


@dataclass(frozen=True, slots=True)
class ItemRecord:
    """One bibliographic item. doc_type keeps the source label verbatim;
    only the exact labels "book" and "chapter" take part in the analysis."""

    item_id: str
    doc_type: str
    raw_publisher: str
    pub_year: int
    categories: tuple[str, ...]  # deduplicated, sorted
    citations: int
    is_serial: bool = False
    parent_book_id: str | None = None
    book_is_edited: bool | None = None

    @property
    def is_book(self) -> bool:
        return self.doc_type == DOC_BOOK

    @property
    def is_chapter(self) -> bool:
        return self.doc_type == DOC_CHAPTER


@dataclass(frozen=True)
class Diagnostic:
    line: int
    reason: str
    severity: str = "error"  # "error" rejects the line, "warning" keeps it

    def __str__(self) -> str:
        return f"line {self.line}: {self.severity}: {self.reason}"


def _check_window(window: tuple[int, int]) -> tuple[int, int]:
    start, end = window
    if start > end:
        raise CorpusError(f"empty study window {start}:{end}")
    return (start, end)


def _is_int(value) -> bool:
    # bool is an int subclass; reject it explicitly
    return type(value) is int


def _parse_line(obj: dict) -> tuple[ItemRecord, list[str]]:
    """Build an ItemRecord from one parsed JSON object.

    Returns the record plus any non-fatal warnings. Raises ValueError with
    the rejection reason for malformed objects.
    """
    warnings = []
    unknown = sorted(set(obj) - _KNOWN_KEYS)
    if unknown:
        warnings.append("unknown keys ignored: " + ", ".join(unknown))

    if "doc_type" not in obj:
        raise ValueError("missing doc_type")
    doc_type = obj["doc_type"]
    if not isinstance(doc_type, str) or not doc_type:
        raise ValueError("doc_type must be a non-empty string")

    item_id = obj.get("id")
    if not isinstance(item_id, str) or not item_id:
        raise ValueError("missing or empty id")
    raw_publisher = obj.get("publisher")
    if not isinstance(raw_publisher, str) or not raw_publisher.strip():
        raise ValueError("missing or empty publisher")
    year = obj.get("year")
    if not _is_int(year):
        raise ValueError("year must be an integer")
    citations = obj.get("citations")
    if not _is_int(citations):
        raise ValueError("citations must be an integer")
    if citations < 0:
        raise ValueError("citations must be >= 0")
    categories = obj.get("categories")
    if (
        not isinstance(categories, list)
        or not categories
        or not all(isinstance(c, str) and c.strip() for c in categories)
    ):
        raise ValueError("categories must be a non-empty array of strings")
    serial = obj.get("serial", False)
    if not isinstance(serial, bool):
        raise ValueError("serial must be a boolean")

    parent_book_id = obj.get("parent_book_id")
    if parent_book_id is not None and (not isinstance(parent_book_id, str) or not parent_book_id):
        raise ValueError("parent_book_id must be a non-empty string")
    edited = obj.get("edited")
    if edited is not None and not isinstance(edited, bool):
        raise ValueError("edited must be a boolean")

    if doc_type == DOC_CHAPTER and parent_book_id is None:
        raise ValueError("chapter without parent_book_id")
    if doc_type == DOC_BOOK and parent_book_id is not None:
        raise ValueError("book must not carry parent_book_id")
    if doc_type != DOC_BOOK and edited is not None:
        warnings.append("edited flag ignored on non-book record")
        edited = None

    record = ItemRecord(
        item_id=item_id,
        doc_type=sys.intern(doc_type),
        raw_publisher=raw_publisher,
        pub_year=year,
        categories=tuple(sorted({sys.intern(c.strip()) for c in categories})),
        citations=citations,
        is_serial=serial,
        parent_book_id=parent_book_id,
        book_is_edited=edited,
    )
    return record, warnings


def _open_lines(source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            fh: IO[str] = path.open(encoding="utf-8")
        except OSError as exc:
            raise CorpusError(f"cannot read corpus {path}: {exc}") from exc
        with fh:
            yield from fh
    elif isinstance(source, io.TextIOBase) or hasattr(source, "read"):
        yield from source
    else:
        yield from source


def ingest_corpus(
    source, window: tuple[int, int] = DEFAULT_WINDOW
) -> tuple[list[ItemRecord], list[Diagnostic]]:
    """Parse a line-delimited corpus into item records plus diagnostics.

    Every well-formed line yields exactly one record, in input order.
    Malformed lines become error diagnostics; blank lines are skipped.
    Duplicate item ids are fatal and report both line numbers.
    """
    _check_window(window)
    records: list[ItemRecord] = []
    diagnostics: list[Diagnostic] = []
    seen: dict[str, int] = {}
    for line_no, line in enumerate(_open_lines(source), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            diagnostics.append(Diagnostic(line_no, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(obj, dict):
            diagnostics.append(Diagnostic(line_no, "record is not a JSON object"))
            continue
        try:
            record, warnings = _parse_line(obj)
        except ValueError as exc:
            diagnostics.append(Diagnostic(line_no, str(exc)))
            continue
        if record.item_id in seen:
            raise DuplicateItemError(record.item_id, seen[record.item_id], line_no)
        seen[record.item_id] = line_no
        records.append(record)
        for message in warnings:
            diagnostics.append(Diagnostic(line_no, message, severity="warning"))
    return records, diagnostics


def filter_corpus(
    items: list[ItemRecord],
    registry: PublisherRegistry,
    window: tuple[int, int] = DEFAULT_WINDOW,
    excluded_publishers: Iterable[str] = DEFAULT_EXCLUDED_PUBLISHERS,
) -> list[ItemRecord]:
    """Keep books and chapters inside the window, dropping serials.

    Serial exclusion is both flag-based (is_serial) and publisher-based:
    items whose publisher resolves into the exclusion list are removed.
    Raw strings that do not resolve are kept here; the resolution step
    decides their fate. Pure, order-preserving, idempotent.
    """
    start, end = _check_window(window)
    excluded_ids = set()
    for entry in excluded_publishers:
        if entry in registry.publishers:
            excluded_ids.add(registry.terminal[entry])
            continue
        pid = registry.variants.get(fold_name(entry))
        if pid is not None:
            excluded_ids.add(registry.terminal[pid])

    kept = []
    for item in items:
        if not (item.is_book or item.is_chapter):
            continue
        if item.is_serial:
            continue
        if not (start <= item.pub_year <= end):
            continue
        if excluded_ids:
            pid = registry.variants.get(fold_name(item.raw_publisher))
            if pid is not None and registry.terminal[pid] in excluded_ids:
                continue
        kept.append(item)
    return kept


@dataclass(frozen=True)
class ResolvedCorpus:
    """Filtered items with their terminal publisher ids and a content
    fingerprint. The fingerprint is order-insensitive so record order
    never leaks into downstream artifacts."""

    items: tuple[ItemRecord, ...]
    publisher_ids: tuple[str, ...]
    fingerprint: str

    def __len__(self) -> int:
        return len(self.items)

    def pairs(self) -> Iterator[tuple[ItemRecord, str]]:
        return zip(self.items, self.publisher_ids)


def _record_key(item: ItemRecord, publisher_id: str) -> str:
    return "\x1f".join(
        (
            item.item_id,
            item.doc_type,
            publisher_id,
            str(item.pub_year),
            ",".join(item.categories),
            str(item.citations),
            item.parent_book_id or "",
            "" if item.book_is_edited is None else str(item.book_is_edited),
        )
    )


def corpus_fingerprint(items: Iterable[ItemRecord], publisher_ids: Iterable[str]) -> str:
    digest = hashlib.sha256()
    for key in sorted(_record_key(i, p) for i, p in zip(items, publisher_ids)):
        digest.update(key.encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()


def resolve_corpus(
    items: list[ItemRecord], registry: PublisherRegistry, strict: bool = True
) -> tuple[ResolvedCorpus, set[str]]:
    """Attach terminal publisher ids to every item.

    In strict mode an unresolved raw string is fatal. In lenient mode the
    offending items are dropped and the exact set of unresolved folded
    strings is returned alongside the corpus.
    """
    kept_items: list[ItemRecord] = []
    publisher_ids: list[str] = []
    unresolved: set[str] = set()
    cache: dict[str, str | None] = {}
    for item in items:
        folded = fold_name(item.raw_publisher)
        pid = cache.get(folded, "")
        if pid == "":
            base = registry.variants.get(folded)
            pid = registry.terminal[base] if base is not None else None
            cache[folded] = pid
        if pid is None:
            if strict:
                raise UnresolvedPublisherError(folded)
            unresolved.add(folded)
            continue
        kept_items.append(item)
        publisher_ids.append(pid)
    corpus = ResolvedCorpus(
        items=tuple(kept_items),
        publisher_ids=tuple(publisher_ids),
        fingerprint=corpus_fingerprint(kept_items, publisher_ids),
    )
    return corpus, unresolved


def edited_book_map(items: Iterable[ItemRecord]) -> dict[str, bool]:
    """item_id -> edited flag for every book in the corpus (False when the
    flag is absent)."""
    return {i.item_id: bool(i.book_is_edited) for i in items if i.is_book}


def unknown_parent_chapters(items: Iterable[ItemRecord]) -> list[str]:
    """Chapters whose parent book is not in the corpus. They stay in the
    analysis but count as not-edited."""
    books = {i.item_id for i in items if i.is_book}
    return [i.item_id for i in items if i.is_chapter and i.parent_book_id not in books]


@dataclass
class FieldStats:
    disciplines: int = 0
    commercial_publishers: int = 0
    university_publishers: int = 0
    books: int = 0
    chapters: int = 0
    book_citations: int = 0
    chapter_citations: int = 0

    @property
    def publishers(self) -> int:
        return self.commercial_publishers + self.university_publishers

    @property
    def items(self) -> int:
        return self.books + self.chapters

    @property
    def citations(self) -> int:
        return self.book_citations + self.chapter_citations

    @property
    def book_citation_avg(self) -> float | None:
        return self.book_citations / self.books if self.books else None

    @property
    def chapter_citation_avg(self) -> float | None:
        return self.chapter_citations / self.chapters if self.chapters else None


@dataclass(frozen=True)
class CorpusStats:
    per_field: dict[str, FieldStats]
    total: FieldStats
    unknown_categories: tuple[str, ...]


def corpus_stats(
    items: list[ItemRecord], registry: PublisherRegistry, taxonomy: TaxonomyMap
) -> CorpusStats:
    """Per-field and global aggregates over a filtered corpus.

    Items are whole-counted: one item in n fields contributes fully to all
    n of them, so per-field numbers only sum to the totals on corpora
    where every item has a single field. Unresolved publishers are fatal
    here; resolution must precede stats.
    """
    per_field = {f: FieldStats(disciplines=len(taxonomy.disciplines_by_field[f])) for f in taxonomy.fields}
    total = FieldStats(disciplines=taxonomy.discipline_count)
    pubs_by_field: dict[str, set[str]] = {f: set() for f in taxonomy.fields}
    pubs_total: set[str] = set()
    unknown: set[str] = set()

    for item in items:
        pid = resolve_strict(item, registry)
        scopes = scopes_of_item(item, taxonomy)
        unknown.update(scopes.unknown_categories)
        for fieldname in scopes.fields:
            pubs_by_field[fieldname].add(pid)
            _tally(per_field[fieldname], item)
        pubs_total.add(pid)
        _tally(total, item)

    for fieldname, bucket in pubs_by_field.items():
        stats = per_field[fieldname]
        for pid in bucket:
            _count_publisher(stats, registry, pid)
    for pid in pubs_total:
        _count_publisher(total, registry, pid)
    return CorpusStats(per_field=per_field, total=total, unknown_categories=tuple(sorted(unknown)))


def resolve_strict(item: ItemRecord, registry: PublisherRegistry) -> str:
    folded = fold_name(item.raw_publisher)
    pid = registry.variants.get(folded)
    if pid is None:
        raise UnresolvedPublisherError(folded)
    return registry.terminal[pid]


def _tally(stats: FieldStats, item: ItemRecord) -> None:
    if item.is_book:
        stats.books += 1
        stats.book_citations += item.citations
    else:
        stats.chapters += 1
        stats.chapter_citations += item.citations


def _count_publisher(stats: FieldStats, registry: PublisherRegistry, pid: str) -> None:
    if registry.publishers[pid].publisher_type == "university_press":
        stats.university_publishers += 1
    else:
        stats.commercial_publishers += 1
