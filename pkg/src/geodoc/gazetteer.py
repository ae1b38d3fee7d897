"""Offline gazetteer snapshot: TSV load, folded name lookup, class filter."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class FeatureClass(str, Enum):
    COUNTRY = "Country"
    ADMIN = "Admin"
    CITY = "City"
    STREAM = "Stream"
    LAKE = "Lake"
    GULF = "Gulf"
    OCEAN = "Ocean"
    ISLAND = "Island"
    REGION = "Region"
    OTHER = "Other"


class GazetteerError(Exception):
    pass


class MalformedRow(GazetteerError):
    def __init__(self, row_no: int, reason: str):
        super().__init__(f"row {row_no}: {reason}")
        self.row_no = row_no


class DuplicateId(GazetteerError):
    pass


@dataclass(frozen=True)
class GazetteerEntry:
    id: int
    name: str
    alt_names: tuple[str, ...]
    feature_class: FeatureClass
    lat: float
    lon: float
    country: str
    importance: int


def fold(s: str) -> str:
    """Case- and diacritic-insensitive key: NFD, strip combining marks, lower."""
    decomposed = unicodedata.normalize("NFD", s)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    return stripped.lower().replace("’", "'")


@dataclass
class Gazetteer:
    entries: dict[int, GazetteerEntry] = field(default_factory=dict)
    _by_name: dict[str, list[int]] = field(default_factory=dict)

    def _add(self, entry: GazetteerEntry) -> None:
        if entry.id in self.entries:
            raise DuplicateId(str(entry.id))
        self.entries[entry.id] = entry
        for name in (entry.name, *entry.alt_names):
            self._by_name.setdefault(fold(name), []).append(entry.id)

    def lookup(
        self, name: str, class_filter: set[FeatureClass] | None = None
    ) -> list[GazetteerEntry]:
        """All entries whose folded name or alt name equals the folded query,
        optionally restricted by feature class, importance-descending."""
        hits = [self.entries[i] for i in self._by_name.get(fold(name), [])]
        if class_filter is not None:
            hits = [e for e in hits if e.feature_class in class_filter]
        return sorted(hits, key=lambda e: (-e.importance, e.id))


def load_gazetteer(path: str | Path) -> Gazetteer:
    """Load the TSV snapshot.

    Columns: id, name, altNames (comma-joined), featureClass, lat, lon,
    country, importance. Blank lines and '#' comments are skipped.
    """
    gaz = Gazetteer()
    with open(path, encoding="utf-8") as fh:
        for row_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 8:
                raise MalformedRow(row_no, f"expected 8 columns, got {len(cols)}")
            try:
                eid = int(cols[0])
                lat = float(cols[4])
                lon = float(cols[5])
                importance = int(cols[7])
            except ValueError as exc:
                raise MalformedRow(row_no, str(exc)) from exc
            if not -90.0 <= lat <= 90.0:
                raise MalformedRow(row_no, f"latitude {lat} out of range")
            if not -180.0 <= lon <= 180.0:
                raise MalformedRow(row_no, f"longitude {lon} out of range")
            if importance < 0:
                raise MalformedRow(row_no, "negative importance")
            try:
                fclass = FeatureClass(cols[3])
            except ValueError as exc:
                raise MalformedRow(row_no, f"unknown feature class {cols[3]!r}") from exc
            alt = tuple(a.strip() for a in cols[2].split(",") if a.strip())
            gaz._add(
                GazetteerEntry(
                    id=eid,
                    name=cols[1],
                    alt_names=alt,
                    feature_class=fclass,
                    lat=lat,
                    lon=lon,
                    country=cols[6],
                    importance=importance,
                )
            )
    return gaz


# Feature-type indicator word -> gazetteer class, both languages.
DEFAULT_FEATURE_CLASS_MAP: dict[str, FeatureClass] = {
    "river": FeatureClass.STREAM,
    "fleuve": FeatureClass.STREAM,
    "riviere": FeatureClass.STREAM,
    "stream": FeatureClass.STREAM,
    "lake": FeatureClass.LAKE,
    "lac": FeatureClass.LAKE,
    "gulf": FeatureClass.GULF,
    "golfe": FeatureClass.GULF,
    "ocean": FeatureClass.OCEAN,
    "mer": FeatureClass.OTHER,
    "sea": FeatureClass.OTHER,
    "island": FeatureClass.ISLAND,
    "ile": FeatureClass.ISLAND,
    "basin": FeatureClass.REGION,
    "bassin": FeatureClass.REGION,
    "region": FeatureClass.REGION,
    "delta": FeatureClass.REGION,
    "plateau": FeatureClass.REGION,
    "valley": FeatureClass.REGION,
    "vallee": FeatureClass.REGION,
}


def feature_class_for(indicator_surface: str) -> FeatureClass | None:
    return DEFAULT_FEATURE_CLASS_MAP.get(fold(indicator_surface))
