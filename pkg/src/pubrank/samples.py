"""Paths to the bundled sample registry and taxonomy.

The sample registry covers the publishers that recur throughout the test
fixtures (including the well-documented Elsevier variant cloud and the
AK Peters and Willan acquisitions); the sample taxonomy maps roughly
sixty subject categories into 38 disciplines under 4 fields.
"""

from __future__ import annotations

from pathlib import Path

_DATA = Path(__file__).resolve().parent / "data"


def sample_taxonomy_path() -> Path:
    return _DATA / "taxonomy.csv"


def sample_registry_dir() -> Path:
    return _DATA / "registry"
