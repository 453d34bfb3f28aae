"""The six per-publisher indicators and the citation baselines behind FNCS.

Output: PBK (books), PCH (chapters). Impact: CIT (citations), FNCS
(citations over expected citations, where the expectation comes from
baseline cells keyed by discipline, document type, and year). Profile:
AI (share of own output in a scope relative to the whole corpus share)
and ED (percentage of chapters from edited books).

All ratio arithmetic is exact (integers and Fractions) until the final
conversion to float, so results are independent of accumulation order
and invariant under uniform citation scaling.

Scoped computations run over the items that map to at least one known
discipline; items whose categories are all unknown are excluded from
baselines, counts, and the AI denominators alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .corpus import ItemRecord, ResolvedCorpus, edited_book_map
from .errors import FingerprintMismatchError
from .taxonomy import TaxonomyMap

SCOPE_FIELD = "field"
SCOPE_DISCIPLINE = "discipline"


@dataclass(frozen=True)
class Scope:
    kind: str  # "field" | "discipline"
    name: str

    def __str__(self) -> str:
        return f"{self.kind}:{self.name}"


@dataclass(frozen=True)
class BaselineCell:
    discipline: str
    doc_type: str
    year: int
    item_count: int
    citation_sum: int

    @property
    def mean(self) -> Fraction:
        return Fraction(self.citation_sum, self.item_count)


@dataclass(frozen=True)
class BaselineTable:
    cells: dict[tuple[str, str, int], BaselineCell]
    fingerprint: str

    def mean_of(self, discipline: str, doc_type: str, year: int) -> Fraction:
        return self.cells[(discipline, doc_type, year)].mean


@dataclass(frozen=True)
class IndicatorRow:
    publisher_id: str
    scope: Scope
    pbk: int
    pch: int
    cit: int
    fncs: float
    ai: float
    ed: float


def _known_disciplines(item: ItemRecord, discipline_of: dict[str, str]) -> set[str]:
    discs = set()
    for category in item.categories:
        d = discipline_of.get(category)
        if d is not None:
            discs.add(d)
    return discs


def _check_fingerprint(corpus: ResolvedCorpus, baselines: BaselineTable) -> None:
    if corpus.fingerprint != baselines.fingerprint:
        raise FingerprintMismatchError(corpus.fingerprint, baselines.fingerprint)


def compute_baselines(corpus: ResolvedCorpus, taxonomy: TaxonomyMap) -> BaselineTable:
    """One cell per occupied (discipline, doc_type, year) triple, built
    from every item of every publisher; eligibility never trims baselines.
    An item in k disciplines contributes whole to all k cells."""
    counts: dict[tuple[str, str, int], list[int]] = {}
    discipline_of = taxonomy.discipline_of
    for item in corpus.items:
        for d in _known_disciplines(item, discipline_of):
            key = (d, item.doc_type, item.pub_year)
            acc = counts.get(key)
            if acc is None:
                counts[key] = [1, item.citations]
            else:
                acc[0] += 1
                acc[1] += item.citations
    cells = {
        key: BaselineCell(key[0], key[1], key[2], n, s) for key, (n, s) in counts.items()
    }
    return BaselineTable(cells=cells, fingerprint=corpus.fingerprint)


def _in_scope(scope: Scope, discs: set[str], taxonomy: TaxonomyMap) -> bool:
    if scope.kind == SCOPE_DISCIPLINE:
        return scope.name in discs
    return any(taxonomy.field_of[d] == scope.name for d in discs)


def compute_counts(
    publisher_id: str, scope: Scope, corpus: ResolvedCorpus, taxonomy: TaxonomyMap
) -> tuple[int, int, int]:
    """(pbk, pch, cit) for one publisher in one scope. Book and chapter
    citations are counted independently; nothing rolls up."""
    pbk = pch = cit = 0
    for item, pid in corpus.pairs():
        if pid != publisher_id:
            continue
        if not _in_scope(scope, _known_disciplines(item, taxonomy.discipline_of), taxonomy):
            continue
        if item.is_book:
            pbk += 1
        else:
            pch += 1
        cit += item.citations
    return pbk, pch, cit


def _expected_of(
    item: ItemRecord, scope: Scope, discs: set[str], baselines: BaselineTable, taxonomy: TaxonomyMap
) -> Fraction:
    """Expected citations for one item in one scope: its cell mean for a
    discipline scope, the average of its cell means across the field's
    disciplines for a field scope."""
    if scope.kind == SCOPE_DISCIPLINE:
        return baselines.mean_of(scope.name, item.doc_type, item.pub_year)
    members = [d for d in discs if taxonomy.field_of[d] == scope.name]
    total = sum(
        (baselines.mean_of(d, item.doc_type, item.pub_year) for d in members), Fraction(0)
    )
    return total / len(members)


def compute_fncs(
    publisher_id: str,
    scope: Scope,
    corpus: ResolvedCorpus,
    baselines: BaselineTable,
    taxonomy: TaxonomyMap,
) -> float:
    """Ratio of sums: total citations of the publisher's items in scope
    over total expected citations. Zero expected means every contributing
    item is uncited, so the score is 0 by convention; no items, same."""
    _check_fingerprint(corpus, baselines)
    citations = 0
    expected = Fraction(0)
    for item, pid in corpus.pairs():
        if pid != publisher_id:
            continue
        discs = _known_disciplines(item, taxonomy.discipline_of)
        if not _in_scope(scope, discs, taxonomy):
            continue
        citations += item.citations
        expected += _expected_of(item, scope, discs, baselines, taxonomy)
    if expected == 0:
        return 0.0
    return float(Fraction(citations) / expected)


def compute_ai(
    publisher_id: str, scope: Scope, corpus: ResolvedCorpus, taxonomy: TaxonomyMap
) -> float:
    """Books only: the publisher's share of its own output in the scope
    divided by the corpus share in the scope. 1.0 means proportional
    activity. Empty denominators yield 0."""
    own_scope = own_total = all_scope = all_total = 0
    for item, pid in corpus.pairs():
        if not item.is_book:
            continue
        discs = _known_disciplines(item, taxonomy.discipline_of)
        if not discs:
            continue
        in_scope = _in_scope(scope, discs, taxonomy)
        all_total += 1
        if in_scope:
            all_scope += 1
        if pid == publisher_id:
            own_total += 1
            if in_scope:
                own_scope += 1
    if own_total == 0 or all_scope == 0:
        return 0.0
    return float(Fraction(own_scope * all_total, own_total * all_scope))


def compute_ed(
    publisher_id: str, scope: Scope, corpus: ResolvedCorpus, taxonomy: TaxonomyMap
) -> float:
    """Percentage of the publisher's chapters in scope that belong to
    edited books. Chapters whose parent is unknown or unflagged count in
    the denominator only."""
    edited = edited_book_map(corpus.items)
    chapters = from_edited = 0
    for item, pid in corpus.pairs():
        if pid != publisher_id or not item.is_chapter:
            continue
        if not _in_scope(scope, _known_disciplines(item, taxonomy.discipline_of), taxonomy):
            continue
        chapters += 1
        if edited.get(item.parent_book_id, False):
            from_edited += 1
    if chapters == 0:
        return 0.0
    return 100 * from_edited / chapters


class _Acc:
    __slots__ = ("pbk", "pch", "cit", "edited_chapters", "cells")

    def __init__(self):
        self.pbk = 0
        self.pch = 0
        self.cit = 0
        self.edited_chapters = 0
        # (discipline, doc_type, year, k) -> item count; k is the number of
        # the item's disciplines inside the scope (1 for discipline scopes)
        self.cells: dict[tuple[str, str, int, int], int] = {}

    def add(self, item: ItemRecord, from_edited: bool, cell_keys: list[tuple[str, str, int, int]]):
        if item.is_book:
            self.pbk += 1
        else:
            self.pch += 1
            if from_edited:
                self.edited_chapters += 1
        self.cit += item.citations
        for key in cell_keys:
            self.cells[key] = self.cells.get(key, 0) + 1


def compute_all_rows(
    corpus: ResolvedCorpus, taxonomy: TaxonomyMap, baselines: BaselineTable
) -> dict[tuple[str, Scope], IndicatorRow]:
    """All indicator rows in one pass over the corpus.

    Produces one row per occupied (publisher, scope) pair; pairs with no
    items have all-zero indicators and no row. Matches the per-pair
    operations exactly, it only amortizes the corpus scans.
    """
    _check_fingerprint(corpus, baselines)
    discipline_of = taxonomy.discipline_of
    field_of = taxonomy.field_of
    edited = edited_book_map(corpus.items)

    accs: dict[tuple[str, str, str], _Acc] = {}
    books_by_publisher: dict[str, int] = {}
    books_by_scope: dict[tuple[str, str], int] = {}
    total_books = 0

    for item, pid in corpus.pairs():
        discs = _known_disciplines(item, discipline_of)
        if not discs:
            continue
        from_edited = item.is_chapter and edited.get(item.parent_book_id, False)
        by_field: dict[str, list[str]] = {}
        for d in discs:
            by_field.setdefault(field_of[d], []).append(d)

        if item.is_book:
            total_books += 1
            books_by_publisher[pid] = books_by_publisher.get(pid, 0) + 1

        dt = item.doc_type
        year = item.pub_year
        for d in discs:
            acc = accs.get((pid, SCOPE_DISCIPLINE, d))
            if acc is None:
                acc = accs[(pid, SCOPE_DISCIPLINE, d)] = _Acc()
            acc.add(item, from_edited, [(d, dt, year, 1)])
            if item.is_book:
                key = (SCOPE_DISCIPLINE, d)
                books_by_scope[key] = books_by_scope.get(key, 0) + 1
        for f, members in by_field.items():
            acc = accs.get((pid, SCOPE_FIELD, f))
            if acc is None:
                acc = accs[(pid, SCOPE_FIELD, f)] = _Acc()
            k = len(members)
            acc.add(item, from_edited, [(d, dt, year, k) for d in members])
            if item.is_book:
                key = (SCOPE_FIELD, f)
                books_by_scope[key] = books_by_scope.get(key, 0) + 1

    rows: dict[tuple[str, Scope], IndicatorRow] = {}
    cells = baselines.cells
    for (pid, kind, name), acc in accs.items():
        expected = Fraction(0)
        for (d, dt, year, k), n in acc.cells.items():
            cell = cells[(d, dt, year)]
            if cell.citation_sum:
                expected += Fraction(n * cell.citation_sum, k * cell.item_count)
        fncs = float(Fraction(acc.cit) / expected) if expected else 0.0

        own_total = books_by_publisher.get(pid, 0)
        all_scope = books_by_scope.get((kind, name), 0)
        if acc.pbk and own_total and all_scope:
            ai = float(Fraction(acc.pbk * total_books, own_total * all_scope))
        else:
            ai = 0.0

        ed = 100 * acc.edited_chapters / acc.pch if acc.pch else 0.0
        scope = Scope(kind, name)
        rows[(pid, scope)] = IndicatorRow(
            publisher_id=pid,
            scope=scope,
            pbk=acc.pbk,
            pch=acc.pch,
            cit=acc.cit,
            fncs=fncs,
            ai=ai,
            ed=ed,
        )
    return rows


def global_counts(corpus: ResolvedCorpus, taxonomy: TaxonomyMap) -> dict[str, tuple[int, int]]:
    """Corpus-wide (pbk, pch) per publisher, over scoped items; feeds the
    global threshold basis."""
    counts: dict[str, list[int]] = {}
    discipline_of = taxonomy.discipline_of
    for item, pid in corpus.pairs():
        if not _known_disciplines(item, discipline_of):
            continue
        acc = counts.setdefault(pid, [0, 0])
        if item.is_book:
            acc[0] += 1
        else:
            acc[1] += 1
    return {pid: (b, c) for pid, (b, c) in counts.items()}
