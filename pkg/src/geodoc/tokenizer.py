"""Offset-preserving tokenizer and sentence splitter.

Offsets are Unicode code point indices into the original string, so
``text[tok.start:tok.end] == tok.text`` always holds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class TokenKind(str, Enum):
    WORD = "Word"
    NUMBER = "Number"
    PUNCT = "Punct"
    HYPHENATED = "Hyphenated"


class TokenShape(str, Enum):
    LOWER = "Lower"
    CAPITALIZED = "Capitalized"
    ALLCAPS = "AllCaps"
    MIXED = "Mixed"


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int
    kind: TokenKind
    shape: TokenShape


# Order matters: hyphenated compounds and elisions must win over bare words.
_TOKEN_RE = re.compile(
    r"""
    (?P<hyph>[^\W\d_]+(?:-[^\W\d_]+)+)      # sud-ouest, Saint-Louis
  | (?P<elision>[^\W\d_]{1,2}['’])     # l', d', qu' is handled as 2 chars max
  | (?P<word>[^\W\d_]+)
  | (?P<num>\d+(?:[.,]\d+)*)
  | (?P<punct>[^\w\s])
    """,
    re.VERBOSE | re.UNICODE,
)

_ABBREVIATIONS = {
    "fr": {"cf", "ex", "etc", "fig", "m", "mme", "dr", "p"},
    "en": {"cf", "e.g", "i.e", "etc", "fig", "dr", "mr", "mrs", "vs", "p"},
}


def _classify_shape(text: str) -> TokenShape:
    letters = [c for c in text if c.isalpha()]
    if not letters:
        return TokenShape.LOWER
    if all(c.islower() for c in letters):
        return TokenShape.LOWER
    if all(c.isupper() for c in letters):
        return TokenShape.ALLCAPS
    if letters[0].isupper() and all(c.islower() for c in letters[1:]):
        return TokenShape.CAPITALIZED
    return TokenShape.MIXED


def tokenize(text: str, lang: str = "en") -> list[Token]:
    """Segment text into ordered, non-overlapping tokens.

    Hyphenated compounds stay single tokens; French elisions ("l'", "d'")
    split after the apostrophe so the following toponym keeps its own token.
    """
    tokens: list[Token] = []
    for m in _TOKEN_RE.finditer(text):
        surface = m.group(0)
        if m.lastgroup == "hyph":
            kind = TokenKind.HYPHENATED
        elif m.lastgroup in ("word", "elision"):
            kind = TokenKind.WORD
        elif m.lastgroup == "num":
            kind = TokenKind.NUMBER
        else:
            kind = TokenKind.PUNCT
        tokens.append(
            Token(
                text=surface,
                start=m.start(),
                end=m.end(),
                kind=kind,
                shape=_classify_shape(surface),
            )
        )
    return tokens


def sentence_spans(text: str, lang: str = "en") -> list[tuple[int, int]]:
    """Sentence boundaries: terminal punctuation + whitespace + capital.

    A short per-language abbreviation list suppresses false splits.
    """
    abbrevs = _ABBREVIATIONS.get(lang, set())
    spans: list[tuple[int, int]] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c in ".?!":
            # look back for an abbreviation before a period
            if c == ".":
                j = i - 1
                while j >= 0 and (text[j].isalnum() or text[j] == "."):
                    j -= 1
                word = text[j + 1 : i].lower().rstrip(".")
                if word in abbrevs or (len(word) == 1 and word.isalpha()):
                    i += 1
                    continue
            k = i + 1
            while k < n and text[k].isspace():
                k += 1
            if k < n and (text[k].isupper() or text[k].isdigit()) and k > i + 1:
                spans.append((start, i + 1))
                start = k
                i = k
                continue
        i += 1
    if start < n:
        spans.append((start, n))
    return spans


def sentence_index(tokens: list[Token], text: str, lang: str = "en") -> list[int]:
    """Map each token to the index of the sentence containing it."""
    spans = sentence_spans(text, lang)
    out = []
    si = 0
    for tok in tokens:
        while si < len(spans) - 1 and tok.start >= spans[si][1]:
            si += 1
        out.append(si)
    return out
