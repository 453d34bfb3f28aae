"""Eligibility thresholds, ordered ranking tables, and publisher profiles.

A publisher enters a ranking by meeting at least one of two thresholds
(books or chapters), evaluated either inside the ranking's own scope or
corpus-wide. Tables are ordered by PBK descending with a deterministic
alphabetical tie-break, so every table is a total order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import ResolvedCorpus
from .errors import ConfigError, FingerprintMismatchError
from .indicators import (
    SCOPE_DISCIPLINE,
    SCOPE_FIELD,
    BaselineTable,
    IndicatorRow,
    Scope,
    compute_all_rows,
    global_counts,
)
from .registry import CanonicalPublisher, NameVariant, PublisherRegistry
from .taxonomy import TaxonomyMap

BASIS_SCOPE = "scope"
BASIS_GLOBAL = "global"


@dataclass(frozen=True)
class ThresholdPolicy:
    min_books: int = 5
    min_chapters: int = 50
    basis: str = BASIS_SCOPE

    def __post_init__(self):
        if self.min_books < 0 or self.min_chapters < 0:
            raise ConfigError("thresholds must be >= 0")
        if self.basis not in (BASIS_SCOPE, BASIS_GLOBAL):
            raise ConfigError(f"unknown threshold basis {self.basis!r}")


def check_eligibility(pbk: int, pch: int, policy: ThresholdPolicy) -> bool:
    """True iff either threshold is met. The caller supplies counts on the
    policy's basis: per-scope counts or corpus-wide ones."""
    return pbk >= policy.min_books or pch >= policy.min_chapters


@dataclass(frozen=True)
class RunMeta:
    corpus_fingerprint: str
    window: tuple[int, int]
    policy: ThresholdPolicy
    sort_key: str = "pbk"
    type_filter: str | None = None


@dataclass(frozen=True)
class RankingEntry:
    publisher: CanonicalPublisher
    row: IndicatorRow


@dataclass(frozen=True)
class RankingTable:
    scope: Scope
    entries: tuple[RankingEntry, ...]
    meta: RunMeta

    def publisher_ids(self) -> tuple[str, ...]:
        return tuple(e.publisher.publisher_id for e in self.entries)


def _order_entries(entries: list[RankingEntry]) -> tuple[RankingEntry, ...]:
    # PBK descending, canonical name ascending (case-insensitive); names
    # are fold-unique across the registry, so this is a total order.
    return tuple(
        sorted(entries, key=lambda e: (-e.row.pbk, e.publisher.name.casefold(), e.publisher.name))
    )


def _table_for_scope(
    scope: Scope,
    rows: dict[tuple[str, Scope], IndicatorRow],
    registry: PublisherRegistry,
    policy: ThresholdPolicy,
    globals_: dict[str, tuple[int, int]],
    meta: RunMeta,
) -> RankingTable:
    entries = []
    for (pid, row_scope), row in rows.items():
        if row_scope != scope:
            continue
        if policy.basis == BASIS_GLOBAL:
            pbk, pch = globals_.get(pid, (0, 0))
        else:
            pbk, pch = row.pbk, row.pch
        if not check_eligibility(pbk, pch, policy):
            continue
        publisher = registry.publisher(pid)
        if meta.type_filter is not None and publisher.publisher_type != meta.type_filter:
            continue
        entries.append(RankingEntry(publisher, row))
    return RankingTable(scope=scope, entries=_order_entries(entries), meta=meta)


def build_ranking(
    scope: Scope,
    corpus: ResolvedCorpus,
    registry: PublisherRegistry,
    taxonomy: TaxonomyMap,
    baselines: BaselineTable,
    policy: ThresholdPolicy,
    window: tuple[int, int] = (0, 0),
    type_filter: str | None = None,
) -> RankingTable:
    """One ordered table of eligible publishers for one scope."""
    if corpus.fingerprint != baselines.fingerprint:
        raise FingerprintMismatchError(corpus.fingerprint, baselines.fingerprint)
    rows = compute_all_rows(corpus, taxonomy, baselines)
    globals_ = global_counts(corpus, taxonomy) if policy.basis == BASIS_GLOBAL else {}
    meta = RunMeta(corpus.fingerprint, window, policy, type_filter=type_filter)
    return _table_for_scope(scope, rows, registry, policy, globals_, meta)


def build_all_rankings(
    corpus: ResolvedCorpus,
    registry: PublisherRegistry,
    taxonomy: TaxonomyMap,
    baselines: BaselineTable,
    policy: ThresholdPolicy,
    window: tuple[int, int] = (0, 0),
    type_filter: str | None = None,
) -> list[RankingTable]:
    """One table per field then one per discipline, in taxonomy order.

    The corpus is scanned once; the 4-field/38-discipline sample taxonomy
    therefore yields its 42 tables from a single aggregation pass.
    """
    if corpus.fingerprint != baselines.fingerprint:
        raise FingerprintMismatchError(corpus.fingerprint, baselines.fingerprint)
    rows = compute_all_rows(corpus, taxonomy, baselines)
    globals_ = global_counts(corpus, taxonomy) if policy.basis == BASIS_GLOBAL else {}
    meta = RunMeta(corpus.fingerprint, window, policy, type_filter=type_filter)

    scopes = [Scope(SCOPE_FIELD, f) for f in taxonomy.fields] + [
        Scope(SCOPE_DISCIPLINE, d) for d in taxonomy.disciplines
    ]
    return [
        _table_for_scope(scope, rows, registry, policy, globals_, meta) for scope in scopes
    ]


@dataclass(frozen=True)
class PublisherProfile:
    publisher: CanonicalPublisher
    variants: tuple[NameVariant, ...]
    rows: tuple[IndicatorRow, ...]  # one per scope where the publisher ranks
    meta: RunMeta | None = field(default=None)


def build_profile(
    publisher_id: str, rankings: list[RankingTable], registry: PublisherRegistry
) -> PublisherProfile:
    """Registry data, name variants, and the publisher's row from every
    table it appears in, sorted by PBK descending."""
    publisher = registry.publisher(publisher_id)  # raises UnknownPublisherError
    rows = []
    meta = None
    for table in rankings:
        meta = table.meta
        for entry in table.entries:
            if entry.publisher.publisher_id == publisher_id:
                rows.append(entry.row)
    rows.sort(key=lambda r: (-r.pbk, r.scope.kind, r.scope.name))
    return PublisherProfile(
        publisher=publisher,
        variants=registry.variants_of(publisher_id),
        rows=tuple(rows),
        meta=meta,
    )
