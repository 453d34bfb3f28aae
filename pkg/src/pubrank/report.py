"""Serialization of rankings and profiles, plus the end-to-end pipeline.

CSV and HTML round fncs/ai to two decimals and print ED as an integer
percentage; JSON keeps full precision so a parse-back reproduces the
in-memory rows bit for bit. Files are written atomically (temp + rename)
and contain nothing run-dependent, so identical inputs and configuration
give byte-identical output trees.
"""

from __future__ import annotations

import html
import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import (
    DEFAULT_EXCLUDED_PUBLISHERS,
    DEFAULT_WINDOW,
    CorpusStats,
    ResolvedCorpus,
    corpus_stats,
    filter_corpus,
    ingest_corpus,
    resolve_corpus,
    unknown_parent_chapters,
)
from .errors import ConfigError, ExportError, PubrankError
from .indicators import BaselineTable, IndicatorRow, compute_baselines
from .ranking import PublisherProfile, RankingTable, ThresholdPolicy, build_all_rankings, build_profile
from .registry import PublisherRegistry, load_registry_dir
from .taxonomy import TaxonomyMap, load_taxonomy, scopes_of_item

FORMATS = ("csv", "json", "html")

CSV_HEADER = "rank,publisher,type,pbk,pch,cit,fncs,ai,ed"


@dataclass(frozen=True)
class RunConfig:
    corpus: Path
    registry_dir: Path
    taxonomy: Path
    out: Path | None = None
    window: tuple[int, int] = DEFAULT_WINDOW
    min_books: int = 5
    min_chapters: int = 50
    basis: str = "scope"
    formats: tuple[str, ...] = ("csv",)
    strict: bool = False
    type_filter: str | None = None
    excluded_publishers: tuple[str, ...] = DEFAULT_EXCLUDED_PUBLISHERS

    def __post_init__(self):
        if self.window[0] > self.window[1]:
            raise ConfigError(f"window start {self.window[0]} after end {self.window[1]}")
        if not self.formats:
            raise ConfigError("at least one output format required")
        for fmt in self.formats:
            if fmt not in FORMATS:
                raise ConfigError(f"unknown format {fmt!r}, expected one of {FORMATS}")
        for name in ("corpus", "registry_dir", "taxonomy"):
            if not str(getattr(self, name)):
                raise ConfigError(f"{name} path must be non-empty")

    def policy(self) -> ThresholdPolicy:
        return ThresholdPolicy(self.min_books, self.min_chapters, self.basis)


def scope_slug(name: str) -> str:
    """Lowercase, every non-alphanumeric character becomes '-'."""
    return re.sub(r"[^a-z0-9]", "-", name.lower())


def table_filename(table: RankingTable, fmt: str) -> str:
    return f"{table.scope.kind}_{scope_slug(table.scope.name)}.{fmt}"


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}") from exc


def _csv_rows(table: RankingTable) -> list[str]:
    lines = [CSV_HEADER]
    for rank, entry in enumerate(table.entries, start=1):
        r = entry.row
        name = entry.publisher.name
        if "," in name or '"' in name:
            name = '"' + name.replace('"', '""') + '"'
        lines.append(
            f"{rank},{name},{entry.publisher.publisher_type},"
            f"{r.pbk},{r.pch},{r.cit},{r.fncs:.2f},{r.ai:.2f},{r.ed:.0f}"
        )
    return lines


def _json_payload(table: RankingTable) -> dict:
    meta = table.meta
    return {
        "scope": {"kind": table.scope.kind, "name": table.scope.name},
        "corpus_fingerprint": meta.corpus_fingerprint,
        "window": list(meta.window),
        "policy": {
            "min_books": meta.policy.min_books,
            "min_chapters": meta.policy.min_chapters,
            "basis": meta.policy.basis,
        },
        "sort_key": meta.sort_key,
        "type_filter": meta.type_filter,
        "rows": [
            {
                "rank": rank,
                "publisher_id": e.publisher.publisher_id,
                "publisher": e.publisher.name,
                "type": e.publisher.publisher_type,
                "pbk": e.row.pbk,
                "pch": e.row.pch,
                "cit": e.row.cit,
                "fncs": e.row.fncs,
                "ai": e.row.ai,
                "ed": e.row.ed,
            }
            for rank, e in enumerate(table.entries, start=1)
        ],
    }


_HTML_PAGE = """<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>{title}</title></head>
<body>
<h1>{title}</h1>
<table border="1">
<tr><th>rank</th><th>publisher</th><th>type</th><th>pbk</th><th>pch</th><th>cit</th><th>fncs</th><th>ai</th><th>ed</th></tr>
{rows}
</table>
</body>
</html>
"""


def _html_rows(table: RankingTable) -> str:
    out = []
    for rank, entry in enumerate(table.entries, start=1):
        r = entry.row
        cells = (
            str(rank),
            html.escape(entry.publisher.name),
            entry.publisher.publisher_type,
            str(r.pbk),
            str(r.pch),
            str(r.cit),
            f"{r.fncs:.2f}",
            f"{r.ai:.2f}",
            f"{r.ed:.0f}%",
        )
        out.append("<tr>" + "".join(f"<td>{c}</td>" for c in cells) + "</tr>")
    return "\n".join(out)


def export_ranking(table: RankingTable, fmt: str, destination: str | Path) -> Path:
    """Write one ranking table in one format into the destination
    directory; the file name is derived from the scope."""
    if fmt not in FORMATS:
        raise ExportError(f"unknown format {fmt!r}")
    path = Path(destination) / table_filename(table, fmt)
    if fmt == "csv":
        text = "\n".join(_csv_rows(table)) + "\n"
    elif fmt == "json":
        text = json.dumps(_json_payload(table), indent=2) + "\n"
    else:
        title = f"{table.scope.kind.capitalize()}: {table.scope.name}"
        text = _HTML_PAGE.format(title=html.escape(title), rows=_html_rows(table))
    _atomic_write(path, text)
    return path


def export_all_rankings(
    tables: list[RankingTable], formats: tuple[str, ...], destination: str | Path
) -> list[Path]:
    slugs: dict[str, RankingTable] = {}
    for table in tables:
        key = f"{table.scope.kind}_{scope_slug(table.scope.name)}"
        if key in slugs:
            raise ExportError(
                f"scopes {slugs[key].scope.name!r} and {table.scope.name!r} collide on slug {key!r}"
            )
        slugs[key] = table
    written = []
    for table in tables:
        for fmt in formats:
            written.append(export_ranking(table, fmt, destination))
    return written


def _profile_json(profile: PublisherProfile) -> dict:
    pub = profile.publisher
    return {
        "publisher_id": pub.publisher_id,
        "name": pub.name,
        "type": pub.publisher_type,
        "website": pub.website,
        "variants": [
            {"raw": v.raw, "city": v.city, "address": v.address} for v in profile.variants
        ],
        "rows": [
            {
                "scope_kind": r.scope.kind,
                "scope": r.scope.name,
                "pbk": r.pbk,
                "pch": r.pch,
                "cit": r.cit,
                "fncs": r.fncs,
                "ai": r.ai,
                "ed": r.ed,
            }
            for r in profile.rows
        ],
    }


def export_profile(profile: PublisherProfile, fmt: str, destination: str | Path) -> Path:
    """Write a publisher profile; file name publisher_<slug>.<fmt>."""
    if fmt not in FORMATS:
        raise ExportError(f"unknown format {fmt!r}")
    path = Path(destination) / f"publisher_{scope_slug(profile.publisher.name)}.{fmt}"
    if fmt == "json":
        text = json.dumps(_profile_json(profile), indent=2) + "\n"
    elif fmt == "csv":
        lines = ["scope_kind,scope,pbk,pch,cit,fncs,ai,ed"]
        for r in profile.rows:
            scope_name = r.scope.name
            if "," in scope_name or '"' in scope_name:
                scope_name = '"' + scope_name.replace('"', '""') + '"'
            lines.append(
                f"{r.scope.kind},{scope_name},{r.pbk},{r.pch},{r.cit},"
                f"{r.fncs:.2f},{r.ai:.2f},{r.ed:.0f}"
            )
        text = "\n".join(lines) + "\n"
    else:
        pub = profile.publisher
        variant_rows = "\n".join(
            "<tr>" + "".join(f"<td>{html.escape(c or '')}</td>" for c in (v.raw, v.city, v.address)) + "</tr>"
            for v in profile.variants
        )
        indicator_rows = "\n".join(
            "<tr>"
            + "".join(
                f"<td>{c}</td>"
                for c in (
                    r.scope.kind,
                    html.escape(r.scope.name),
                    str(r.pbk),
                    str(r.pch),
                    str(r.cit),
                    f"{r.fncs:.2f}",
                    f"{r.ai:.2f}",
                    f"{r.ed:.0f}%",
                )
            )
            + "</tr>"
            for r in profile.rows
        )
        text = (
            "<!DOCTYPE html>\n<html lang=\"en\">\n<head><meta charset=\"utf-8\">"
            f"<title>{html.escape(pub.name)}</title></head>\n<body>\n"
            f"<h1>{html.escape(pub.name)}</h1>\n"
            f"<p>type: {pub.publisher_type}"
            + (f" | website: {html.escape(pub.website)}" if pub.website else "")
            + "</p>\n<h2>Name variants</h2>\n<table border=\"1\">\n"
            "<tr><th>raw</th><th>city</th><th>address</th></tr>\n"
            f"{variant_rows}\n</table>\n<h2>Indicators by scope</h2>\n<table border=\"1\">\n"
            "<tr><th>kind</th><th>scope</th><th>pbk</th><th>pch</th><th>cit</th>"
            "<th>fncs</th><th>ai</th><th>ed</th></tr>\n"
            f"{indicator_rows}\n</table>\n</body>\n</html>\n"
        )
    _atomic_write(path, text)
    return path


@dataclass
class PipelineResult:
    """Everything the pipeline produced, for callers that keep going."""

    registry: PublisherRegistry
    taxonomy: TaxonomyMap
    corpus: ResolvedCorpus
    baselines: BaselineTable
    tables: list[RankingTable]
    diagnostics: list = field(default_factory=list)
    unresolved: set[str] = field(default_factory=set)
    ingested: int = 0
    filtered: int = 0


def run_pipeline(config: RunConfig) -> PipelineResult:
    """Load everything, filter, resolve, compute baselines, and build all
    ranking tables. Raises PubrankError subclasses on fatal problems."""
    registry = load_registry_dir(config.registry_dir)
    taxonomy = load_taxonomy(config.taxonomy)
    records, diagnostics = ingest_corpus(config.corpus, config.window)
    filtered = filter_corpus(records, registry, config.window, config.excluded_publishers)
    corpus, unresolved = resolve_corpus(filtered, registry, strict=config.strict)
    baselines = compute_baselines(corpus, taxonomy)
    tables = build_all_rankings(
        corpus,
        registry,
        taxonomy,
        baselines,
        config.policy(),
        window=config.window,
        type_filter=config.type_filter,
    )
    return PipelineResult(
        registry=registry,
        taxonomy=taxonomy,
        corpus=corpus,
        baselines=baselines,
        tables=tables,
        diagnostics=diagnostics,
        unresolved=unresolved,
        ingested=len(records),
        filtered=len(filtered),
    )


def run_rank(config: RunConfig) -> tuple[PipelineResult, list[Path]]:
    if config.out is None:
        raise ConfigError("rank requires an output directory")
    result = run_pipeline(config)
    written = export_all_rankings(result.tables, config.formats, config.out)
    return result, written


def run_profile(config: RunConfig, publisher: str) -> tuple[PublisherProfile, list[Path]]:
    """Build and export the profile for one publisher, given by id or by
    any resolvable name form."""
    if config.out is None:
        raise ConfigError("profile requires an output directory")
    result = run_pipeline(config)
    if publisher in result.registry.publishers:
        pid = publisher
    else:
        pid = result.registry.resolve(publisher)
    profile = build_profile(pid, result.tables, result.registry)
    written = [export_profile(profile, fmt, config.out) for fmt in config.formats]
    return profile, written


def run_stats(config: RunConfig) -> CorpusStats:
    registry = load_registry_dir(config.registry_dir)
    taxonomy = load_taxonomy(config.taxonomy)
    records, _ = ingest_corpus(config.corpus, config.window)
    filtered = filter_corpus(records, registry, config.window, config.excluded_publishers)
    corpus, _ = resolve_corpus(filtered, registry, strict=config.strict)
    return corpus_stats(list(corpus.items), registry, taxonomy)


@dataclass
class ValidationReport:
    publishers: int
    variants: int
    acquisitions: int
    fields: int
    disciplines: int
    ingested: int
    diagnostics: list
    filtered: int
    resolved: int
    unresolved: set[str]
    unknown_categories: tuple[str, ...]
    orphan_chapters: int


def run_validate(config: RunConfig) -> ValidationReport:
    """Load and cross-check every input, collecting per-line diagnostics
    and resolution gaps instead of failing on them (load errors and, in
    strict mode, unresolved publishers stay fatal)."""
    registry = load_registry_dir(config.registry_dir)
    taxonomy = load_taxonomy(config.taxonomy)
    records, diagnostics = ingest_corpus(config.corpus, config.window)
    filtered = filter_corpus(records, registry, config.window, config.excluded_publishers)
    corpus, unresolved = resolve_corpus(filtered, registry, strict=config.strict)
    unknown: set[str] = set()
    for item in corpus.items:
        unknown.update(scopes_of_item(item, taxonomy).unknown_categories)
    return ValidationReport(
        publishers=len(registry.publishers),
        variants=len(registry.variant_rows),
        acquisitions=len(registry.acquisitions),
        fields=taxonomy.field_count,
        disciplines=taxonomy.discipline_count,
        ingested=len(records),
        diagnostics=diagnostics,
        filtered=len(filtered),
        resolved=len(corpus),
        unresolved=unresolved,
        unknown_categories=tuple(sorted(unknown)),
        orphan_chapters=len(unknown_parent_chapters(corpus.items)),
    )
