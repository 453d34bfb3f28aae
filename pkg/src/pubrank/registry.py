"""Publisher identity resolution: name variants, types, and acquisitions.

The registry is plain data loaded from three CSV files. Matching is exact
after folding (trim, collapse whitespace, casefold); there is deliberately
no fuzzy matching, so every raw form seen in a corpus must be registered
either as a variant or as a canonical name.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import (
    AcquisitionCycleError,
    RegistryError,
    UnknownPublisherError,
    UnresolvedPublisherError,
)

PUBLISHER_TYPES = ("commercial", "university_press")

PUBLISHERS_FILE = "publishers.csv"
VARIANTS_FILE = "variants.csv"
ACQUISITIONS_FILE = "acquisitions.csv"


def fold_name(raw: str) -> str:
    """Normalize a raw publisher string for matching: trim, collapse runs
    of whitespace, casefold."""
    return " ".join(raw.split()).casefold()


@dataclass(frozen=True)
class CanonicalPublisher:
    publisher_id: str
    name: str
    publisher_type: str
    website: str | None = None


@dataclass(frozen=True)
class NameVariant:
    raw: str
    canonical: str
    city: str | None = None
    address: str | None = None


@dataclass(frozen=True)
class AcquisitionEvent:
    acquired: str
    acquirer: str
    year: int | None = None


@dataclass(frozen=True)
class PublisherRegistry:
    publishers: dict[str, CanonicalPublisher]
    variants: dict[str, str]  # folded raw -> publisher_id
    variant_rows: tuple[NameVariant, ...]
    acquisitions: tuple[AcquisitionEvent, ...]
    terminal: dict[str, str] = field(default_factory=dict)  # publisher_id -> terminal owner

    def resolve(self, raw: str) -> str:
        return resolve_publisher(raw, self)

    def terminal_of(self, publisher_id: str) -> str:
        return apply_acquisitions(publisher_id, self)

    def publisher(self, publisher_id: str) -> CanonicalPublisher:
        try:
            return self.publishers[publisher_id]
        except KeyError:
            raise UnknownPublisherError(publisher_id) from None

    def variants_of(self, publisher_id: str) -> tuple[NameVariant, ...]:
        """Registered variant rows pointing at a publisher, sorted by raw form."""
        if publisher_id not in self.publishers:
            raise UnknownPublisherError(publisher_id)
        rows = [v for v in self.variant_rows if v.canonical == publisher_id]
        return tuple(sorted(rows, key=lambda v: fold_name(v.raw)))


def resolve_publisher(raw: str, registry: PublisherRegistry) -> str:
    """Fold a raw publisher string, match it against the variant map, and
    follow acquisitions to the terminal owner.

    Raises UnresolvedPublisherError when no variant matches; the caller
    decides whether that is fatal (strict mode) or an exclusion (lenient).
    """
    folded = fold_name(raw)
    publisher_id = registry.variants.get(folded)
    if publisher_id is None:
        raise UnresolvedPublisherError(folded)
    return registry.terminal[publisher_id]


def apply_acquisitions(publisher_id: str, registry: PublisherRegistry) -> str:
    """Follow acquired -> acquirer edges to the publisher with no acquirer.

    Attribution ignores publication dates: all output of an acquired
    publisher belongs to the terminal owner, whatever the years involved.
    """
    try:
        return registry.terminal[publisher_id]
    except KeyError:
        raise UnknownPublisherError(publisher_id) from None


def _read_csv(source: str | Path, expected_header: list[str]) -> list[dict[str, str]]:
    path = Path(source)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise RegistryError(f"{path}: empty file, expected header {expected_header}")
            if [h.strip() for h in reader.fieldnames] != expected_header:
                raise RegistryError(
                    f"{path}: bad header {reader.fieldnames}, expected {expected_header}"
                )
            return [row for row in reader]
    except OSError as exc:
        raise RegistryError(f"cannot read {path}: {exc}") from exc


def load_registry(
    publishers_source: str | Path,
    variants_source: str | Path,
    acquisitions_source: str | Path,
) -> PublisherRegistry:
    """Load and validate the three registry files.

    Validation: unique publisher ids, non-empty names, known types,
    fold-unique variants, referential integrity, and an acyclic
    acquisition graph. Any violation is fatal.
    """
    publishers: dict[str, CanonicalPublisher] = {}
    for row in _read_csv(publishers_source, ["id", "name", "type", "website"]):
        pid = row["id"].strip()
        name = row["name"].strip()
        ptype = row["type"].strip()
        if not pid:
            raise RegistryError("publisher row with empty id")
        if pid in publishers:
            raise RegistryError(f"duplicate publisher id {pid!r}")
        if not name:
            raise RegistryError(f"publisher {pid!r} has empty name")
        if ptype not in PUBLISHER_TYPES:
            raise RegistryError(
                f"publisher {pid!r} has unknown type {ptype!r}, expected one of {PUBLISHER_TYPES}"
            )
        website = row["website"].strip() or None
        publishers[pid] = CanonicalPublisher(pid, name, ptype, website)
    if not publishers:
        raise RegistryError("registry has no publishers")

    # Canonical names resolve implicitly; explicit rows may not contradict them.
    variants: dict[str, str] = {}
    for pub in publishers.values():
        folded = fold_name(pub.name)
        if folded in variants:
            raise RegistryError(
                f"publishers {variants[folded]!r} and {pub.publisher_id!r} share the folded name {folded!r}"
            )
        variants[folded] = pub.publisher_id

    variant_rows: list[NameVariant] = []
    for row in _read_csv(variants_source, ["raw", "canonical_id", "city", "address"]):
        raw = row["raw"].strip()
        canonical = row["canonical_id"].strip()
        if not raw:
            raise RegistryError("variant row with empty raw string")
        if canonical not in publishers:
            raise RegistryError(f"variant {raw!r} points at unknown publisher {canonical!r}")
        folded = fold_name(raw)
        existing = variants.get(folded)
        if existing is not None and existing != canonical:
            raise RegistryError(
                f"variant {raw!r} folds to {folded!r} which already maps to {existing!r}"
            )
        variants[folded] = canonical
        variant_rows.append(
            NameVariant(raw, canonical, row["city"].strip() or None, row["address"].strip() or None)
        )
    folded_rows = [fold_name(v.raw) for v in variant_rows]
    if len(set(folded_rows)) != len(folded_rows):
        dupes = sorted({f for f in folded_rows if folded_rows.count(f) > 1})
        raise RegistryError(f"duplicate folded variants: {dupes}")

    acquisitions: list[AcquisitionEvent] = []
    acquirer_of: dict[str, str] = {}
    for row in _read_csv(acquisitions_source, ["acquired_id", "acquirer_id", "year"]):
        acquired = row["acquired_id"].strip()
        acquirer = row["acquirer_id"].strip()
        for pid in (acquired, acquirer):
            if pid not in publishers:
                raise RegistryError(f"acquisition references unknown publisher {pid!r}")
        if acquired == acquirer:
            raise RegistryError(f"publisher {acquired!r} cannot acquire itself")
        if acquired in acquirer_of:
            raise RegistryError(f"publisher {acquired!r} has two acquirers")
        year_text = row["year"].strip()
        year = int(year_text) if year_text else None
        acquirer_of[acquired] = acquirer
        acquisitions.append(AcquisitionEvent(acquired, acquirer, year))

    terminal = _terminal_map(publishers.keys(), acquirer_of)

    return PublisherRegistry(
        publishers=publishers,
        variants=variants,
        variant_rows=tuple(variant_rows),
        acquisitions=tuple(acquisitions),
        terminal=terminal,
    )


def load_registry_dir(directory: str | Path) -> PublisherRegistry:
    """Load a registry from a directory holding the three standard files."""
    d = Path(directory)
    return load_registry(d / PUBLISHERS_FILE, d / VARIANTS_FILE, d / ACQUISITIONS_FILE)


def _terminal_map(publisher_ids: Iterable[str], acquirer_of: dict[str, str]) -> dict[str, str]:
    """Resolve every publisher to its terminal owner, rejecting cycles."""
    terminal: dict[str, str] = {}
    for start in publisher_ids:
        if start in terminal:
            continue
        chain = [start]
        seen = {start}
        current = start
        while current in acquirer_of:
            current = acquirer_of[current]
            if current in terminal:
                current = terminal[current]
                break
            if current in seen:
                cycle_start = chain.index(current)
                raise AcquisitionCycleError(chain[cycle_start:] + [current])
            chain.append(current)
            seen.add(current)
        for pid in chain:
            terminal[pid] = current
    return terminal
