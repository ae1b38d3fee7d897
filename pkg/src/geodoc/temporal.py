"""Calendar-valued temporal expression tagging for French and English.

Only expressions resolvable to an absolute date or interval are marked:
years, month-year, full dates, decades, and explicit ranges. Times of day,
bare durations ("three weeks") and frequencies ("monthly") are ignored.
Relative expressions ("last year") resolve against the document creation
date when given and are dropped otherwise.
"""

from __future__ import annotations

import calendar
import re
from dataclasses import dataclass
from enum import Enum


class Granularity(str, Enum):
    DAY = "day"
    MONTH = "month"
    YEAR = "year"


class TemporalCategory(str, Enum):
    DATE = "Date"
    PERIOD = "Period"


# year plausibility window; keeps page numbers and counts unmarked
YEAR_MIN, YEAR_MAX = 1000, 2100


@dataclass(frozen=True, order=True)
class CalendarDate:
    year: int
    month: int = 0  # 0 = unspecified at this granularity
    day: int = 0

    @property
    def granularity(self) -> Granularity:
        if self.day:
            return Granularity.DAY
        if self.month:
            return Granularity.MONTH
        return Granularity.YEAR

    def iso(self) -> str:
        if self.day:
            return f"{self.year:04d}-{self.month:02d}-{self.day:02d}"
        if self.month:
            return f"{self.year:04d}-{self.month:02d}"
        return f"{self.year:04d}"

    @classmethod
    def from_iso(cls, s: str) -> "CalendarDate":
        parts = s.split("-")
        return cls(int(parts[0]), int(parts[1]) if len(parts) > 1 else 0,
                   int(parts[2]) if len(parts) > 2 else 0)


@dataclass(frozen=True)
class TemporalEntity:
    surface: str
    start: int
    end: int
    category: TemporalCategory
    value_start: CalendarDate
    value_end: CalendarDate | None = None  # set iff category == Period

    def value_iso(self) -> str:
        if self.category == TemporalCategory.PERIOD:
            assert self.value_end is not None
            return f"{self.value_start.iso()}/{self.value_end.iso()}"
        return self.value_start.iso()


MONTHS = {
    "en": {
        "january": 1, "february": 2, "march": 3, "april": 4, "may": 5,
        "june": 6, "july": 7, "august": 8, "september": 9, "october": 10,
        "november": 11, "december": 12,
    },
    "fr": {
        "janvier": 1, "fevrier": 2, "février": 2, "mars": 3, "avril": 4,
        "mai": 5, "juin": 6, "juillet": 7, "aout": 8, "août": 8,
        "septembre": 9, "octobre": 10, "novembre": 11, "decembre": 12,
        "décembre": 12,
    },
}

_YEAR = r"(1[0-9]{3}|20[0-9]{2}|2100)"


def _month_alt(lang: str) -> str:
    return "|".join(sorted(MONTHS[lang], key=len, reverse=True))


def _patterns(lang: str) -> list[tuple[str, re.Pattern]]:
    m = _month_alt(lang)
    if lang == "fr":
        pats = [
            ("range_full", rf"(?:de|entre)\s+{_YEAR}\s+(?:à|a|et)\s+{_YEAR}"),
            ("decade", rf"les\s+ann[ée]es\s+{_YEAR}"),
            ("dmy", rf"([0-3]?\d)(?:er)?\s+({m})\s+{_YEAR}"),
            ("my", rf"({m})\s+{_YEAR}"),
            ("relative_year", r"l['’]ann[ée]e\s+derni[èe]re"),
            ("year", rf"{_YEAR}"),
        ]
    else:
        pats = [
            ("range_full", rf"(?:from|between)\s+{_YEAR}\s+(?:to|and)\s+{_YEAR}"),
            ("decade", rf"the\s+{_YEAR}s"),
            ("mdy", rf"({m})\s+([0-3]?\d),?\s+{_YEAR}"),
            ("dmy", rf"([0-3]?\d)\s+({m})\s+{_YEAR}"),
            ("my", rf"({m})\s+{_YEAR}"),
            ("relative_year", r"last\s+year"),
            ("year", rf"{_YEAR}s?"),
        ]
    return [(name, re.compile(p, re.IGNORECASE)) for name, p in pats]


_PATTERN_CACHE: dict[str, list[tuple[str, re.Pattern]]] = {}


def _month_num(lang: str, name: str) -> int:
    return MONTHS[lang][name.lower()]


def _in_window(y: int) -> bool:
    return YEAR_MIN <= y <= YEAR_MAX


def annotate_temporal(
    text: str, lang: str, dct: CalendarDate | None = None
) -> list[TemporalEntity]:
    """Return non-overlapping, position-sorted temporal entities."""
    if lang not in MONTHS:
        raise ValueError(f"unsupported language {lang!r}")
    if lang not in _PATTERN_CACHE:
        _PATTERN_CACHE[lang] = _patterns(lang)
    raw: list[TemporalEntity] = []
    for name, pat in _PATTERN_CACHE[lang]:
        for m in pat.finditer(text):
            ent = _build(name, m, lang, dct, text)
            if ent is not None:
                raw.append(ent)
    # longest span wins on overlap; earlier pattern order breaks ties
    raw.sort(key=lambda e: (-(e.end - e.start), e.start))
    chosen: list[TemporalEntity] = []
    for ent in raw:
        if any(ent.start < c.end and c.start < ent.end for c in chosen):
            continue
        chosen.append(ent)
    return sorted(chosen, key=lambda e: e.start)


def _build(
    name: str, m: re.Match, lang: str, dct: CalendarDate | None, text: str
) -> TemporalEntity | None:
    s, e = m.start(), m.end()
    surface = m.group(0)
    if name == "range_full":
        y1, y2 = int(m.group(1)), int(m.group(2))
        if not (_in_window(y1) and _in_window(y2)) or y1 > y2:
            return None
        return TemporalEntity(surface, s, e, TemporalCategory.PERIOD,
                              CalendarDate(y1), CalendarDate(y2))
    if name == "decade":
        y = int(m.group(1))
        if not _in_window(y) or y % 10:
            return None
        return TemporalEntity(surface, s, e, TemporalCategory.PERIOD,
                              CalendarDate(y), CalendarDate(y + 9))
    if name == "dmy":
        day, month, year = int(m.group(1)), _month_num(lang, m.group(2)), int(m.group(3))
        if not _in_window(year) or not 1 <= day <= 31:
            return None
        return TemporalEntity(surface, s, e, TemporalCategory.DATE,
                              CalendarDate(year, month, day))
    if name == "mdy":
        month, day, year = _month_num(lang, m.group(1)), int(m.group(2)), int(m.group(3))
        if not _in_window(year) or not 1 <= day <= 31:
            return None
        return TemporalEntity(surface, s, e, TemporalCategory.DATE,
                              CalendarDate(year, month, day))
    if name == "my":
        month, year = _month_num(lang, m.group(1)), int(m.group(2))
        if not _in_window(year):
            return None
        return TemporalEntity(surface, s, e, TemporalCategory.DATE,
                              CalendarDate(year, month))
    if name == "relative_year":
        if dct is None:
            return None
        return TemporalEntity(surface, s, e, TemporalCategory.DATE,
                              CalendarDate(dct.year - 1))
    if name == "year":
        raw_year = m.group(1)
        full = m.group(0)
        if full.endswith("s") and lang == "en":
            # bare decade without article ("1990s")
            y = int(raw_year)
            if not _in_window(y) or y % 10:
                return None
            return TemporalEntity(full, s, e, TemporalCategory.PERIOD,
                                  CalendarDate(y), CalendarDate(y + 9))
        y = int(raw_year)
        if not _in_window(y):
            return None
        # reject years glued to digits or hyphens (e.g. "1990-2000" handled by range)
        if s > 0 and (text[s - 1].isdigit() or text[s - 1] == "-"):
            return None
        if e < len(text) and (text[e].isdigit() or text[e] == "-"):
            return None
        return TemporalEntity(full, s, e, TemporalCategory.DATE, CalendarDate(y))
    return None


def render_value(ent: TemporalEntity) -> str:
    return ent.value_iso()


def parse_value(category: TemporalCategory, s: str) -> tuple[CalendarDate, CalendarDate | None]:
    """Inverse of value_iso(); used by the index and the XML parser."""
    if category == TemporalCategory.PERIOD:
        a, b = s.split("/")
        return CalendarDate.from_iso(a), CalendarDate.from_iso(b)
    return CalendarDate.from_iso(s), None


def date_bounds(d: CalendarDate) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    """Earliest and latest (y, m, d) triple a value can denote at its granularity."""
    if d.day:
        return (d.year, d.month, d.day), (d.year, d.month, d.day)
    if d.month:
        last = calendar.monthrange(d.year, d.month)[1]
        return (d.year, d.month, 1), (d.year, d.month, last)
    return (d.year, 1, 1), (d.year, 12, 31)
