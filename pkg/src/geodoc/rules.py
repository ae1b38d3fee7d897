"""Plain-text rule files compiled into token-sequence patterns.

Rule file format, one rule per line:

    <rule-id>  <atom> <atom> ...  ->  <label>

Atoms (alternatives joined with '/', optional trailing '?' or '+'):

    cap         capitalized or all-caps word (not a capitalized function word)
    word        any word token
    num         number token
    lex:NAME    token folded text belongs to lexicon NAME
    lit:TEXT    token folded text equals TEXT
    esa         a previously matched absolute spatial entity (ESR rules only)

Labels: ESA, ORG, or ESR:<Orientation|Distance|Adjacency|Inclusion|GeometricFigure>.
Lexicon files live next to the rule file, one term per line, named <NAME>.txt.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .gazetteer import fold
from .tokenizer import Token, TokenKind, TokenShape


class RuleFileError(Exception):
    pass


@dataclass(frozen=True)
class Atom:
    alternatives: tuple[tuple[str, str], ...]  # (op, arg) pairs
    optional: bool = False
    repeated: bool = False


@dataclass(frozen=True)
class Rule:
    rule_id: str
    atoms: tuple[Atom, ...]
    label: str  # ESA | ORG | ESR:<relation>
    order: int


@dataclass
class RuleSet:
    lang: str
    rules: list[Rule] = field(default_factory=list)
    lexicons: dict[str, frozenset[str]] = field(default_factory=dict)

    def rules_for(self, label_prefix: str) -> list[Rule]:
        return [r for r in self.rules if r.label.startswith(label_prefix)]


_RELATIONS = {"Orientation", "Distance", "Adjacency", "Inclusion", "GeometricFigure"}


def _parse_atom(spec: str) -> Atom:
    optional = repeated = False
    if spec.endswith("?"):
        optional = True
        spec = spec[:-1]
    elif spec.endswith("+"):
        repeated = True
        spec = spec[:-1]
    alts = []
    for part in spec.split("/"):
        if ":" in part:
            op, arg = part.split(":", 1)
        else:
            op, arg = part, ""
        if op not in ("cap", "word", "num", "lex", "lit", "esa"):
            raise RuleFileError(f"unknown atom {part!r}")
        alts.append((op, fold(arg) if op in ("lit",) else arg))
    return Atom(tuple(alts), optional=optional, repeated=repeated)


def parse_rule_line(line: str, order: int) -> Rule | None:
    line = line.strip()
    if not line or line.startswith("#"):
        return None
    if "->" not in line:
        raise RuleFileError(f"missing '->' in rule line: {line!r}")
    lhs, label = line.rsplit("->", 1)
    label = label.strip()
    parts = lhs.split()
    if len(parts) < 2:
        raise RuleFileError(f"rule needs an id and at least one atom: {line!r}")
    rule_id, atom_specs = parts[0], parts[1:]
    if label.startswith("ESR:"):
        rel = label.split(":", 1)[1]
        if rel not in _RELATIONS:
            raise RuleFileError(f"unknown relation {rel!r} in {line!r}")
    elif label not in ("ESA", "ORG"):
        raise RuleFileError(f"unknown label {label!r} in {line!r}")
    return Rule(rule_id, tuple(_parse_atom(a) for a in atom_specs), label, order)


def load_ruleset(rules_path: str | Path, lang: str) -> RuleSet:
    """Load <lang>.rules plus every lexicon it references."""
    rules_path = Path(rules_path)
    rule_file = rules_path / f"{lang}.rules"
    rs = RuleSet(lang=lang)
    seen_ids: set[str] = set()
    with open(rule_file, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            rule = parse_rule_line(line, order=i)
            if rule is None:
                continue
            if rule.rule_id in seen_ids:
                raise RuleFileError(f"duplicate rule id {rule.rule_id!r}")
            seen_ids.add(rule.rule_id)
            rs.rules.append(rule)
    needed = {
        arg
        for rule in rs.rules
        for atom in rule.atoms
        for op, arg in atom.alternatives
        if op == "lex"
    }
    # cap_exclude_<lang> is consulted implicitly by the `cap` atom
    needed.add(f"cap_exclude_{lang}")
    for name in sorted(needed):
        lex_file = rules_path / "lexicons" / f"{name}.txt"
        if not lex_file.exists():
            if name.startswith("cap_exclude_"):
                continue
            raise RuleFileError(f"rule references missing lexicon {name!r}")
        terms = frozenset(
            fold(t.strip())
            for t in lex_file.read_text(encoding="utf-8").splitlines()
            if t.strip() and not t.startswith("#")
        )
        rs.lexicons[name] = terms
    return rs


# Function words that stay out of bare capitalized-run entities even when
# sentence-initial capitalization promotes them.
CAP_SKIP = {
    "fr": frozenset(
        fold(w)
        for w in (
            "le la les l' un une des de du au aux et ou dans sur pour par ce cette "
            "ces il elle ils elles nous vous on en y ne pas plus tres sont est "
            "cependant ainsi comme entre vers chez apres avant depuis notre leurs"
        ).split()
    ),
    "en": frozenset(
        fold(w)
        for w in (
            "the a an and or in on at of for to from with by this these those it "
            "they we is are was were however thus such between near during our their "
            "no not but as its"
        ).split()
    ),
}


def _token_matches(tok: Token, op: str, arg: str, rs: RuleSet, lang: str) -> bool:
    if op == "cap":
        if tok.kind not in (TokenKind.WORD, TokenKind.HYPHENATED):
            return False
        if tok.shape not in (TokenShape.CAPITALIZED, TokenShape.ALLCAPS, TokenShape.MIXED):
            return False
        folded = fold(tok.text)
        if folded in CAP_SKIP.get(lang, frozenset()):
            return False
        return folded not in rs.lexicons.get(f"cap_exclude_{lang}", frozenset())
    if op == "word":
        return tok.kind in (TokenKind.WORD, TokenKind.HYPHENATED)
    if op == "num":
        return tok.kind == TokenKind.NUMBER
    if op == "lit":
        return fold(tok.text) == arg
    if op == "lex":
        lexicon = rs.lexicons.get(arg)
        return lexicon is not None and fold(tok.text) in lexicon
    raise RuleFileError(f"unexpected atom op {op!r}")


@dataclass(frozen=True)
class MatchPiece:
    """One consumed unit: either a token index or an ESA entity index."""
    atom_index: int
    token_index: int | None = None
    esa_index: int | None = None


def match_rule_at(
    rule: Rule,
    tokens: list[Token],
    start: int,
    rs: RuleSet,
    esa_spans: list[tuple[int, int]] | None = None,
) -> list[MatchPiece] | None:
    """Backtracking match of a rule's atom sequence starting at token index.

    `esa_spans` gives (first_token, last_token_exclusive) ranges of already
    matched absolute entities for the `esa` atom. Returns the consumed pieces
    of the longest match, or None.
    """
    esa_spans = esa_spans or []
    n = len(tokens)
    best: list[MatchPiece] | None = None

    def step(ai: int, ti: int, acc: list[MatchPiece]) -> None:
        nonlocal best
        if ai == len(rule.atoms):
            if acc and (best is None or _end_of(acc, esa_spans) > _end_of(best, esa_spans)):
                best = list(acc)
            return
        atom = rule.atoms[ai]
        candidates: list[tuple[int, MatchPiece]] = []
        for op, arg in atom.alternatives:
            if op == "esa":
                for idx, (s, e) in enumerate(esa_spans):
                    if s == ti:
                        candidates.append((e, MatchPiece(ai, esa_index=idx)))
            elif ti < n and _token_matches(tokens[ti], op, arg, rs, rs.lang):
                candidates.append((ti + 1, MatchPiece(ai, token_index=ti)))
        if atom.repeated:
            # one-or-more: consume maximal run first, backtrack downward
            runs: list[list[MatchPiece]] = []
            def extend(pos: int, run: list[MatchPiece]) -> None:
                if run:
                    runs.append((pos, list(run)))
                for op, arg in atom.alternatives:
                    if op == "esa":
                        for idx, (s, e) in enumerate(esa_spans):
                            if s == pos:
                                run.append(MatchPiece(ai, esa_index=idx))
                                extend(e, run)
                                run.pop()
                    elif pos < n and _token_matches(tokens[pos], op, arg, rs, rs.lang):
                        run.append(MatchPiece(ai, token_index=pos))
                        extend(pos + 1, run)
                        run.pop()
            extend(ti, [])
            for pos, run in sorted(runs, key=lambda r: -len(r[1])):
                step(ai + 1, pos, acc + run)
            return
        for next_ti, piece in candidates:
            step(ai + 1, next_ti, acc + [piece])
        if atom.optional:
            step(ai + 1, ti, acc)

    step(0, start, [])
    return best


def _end_of(pieces: list[MatchPiece], esa_spans: list[tuple[int, int]]) -> int:
    last = pieces[-1]
    if last.esa_index is not None:
        return esa_spans[last.esa_index][1]
    return (last.token_index or 0) + 1
