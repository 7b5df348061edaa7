"""Context-free grammars: loading, validation, nullability, bounded enumeration.

Grammar files are token-oriented UTF-8 text:

    start E
    E ::= C F ;
    F ::= OR C F | ;      # '|' separates alternatives, an empty one means epsilon
    V ::= 1 | a | "b" ;   # terminals may be quoted, quotes are stripped

The ``start`` directive must be the first non-comment line and appear exactly
once.  Symbols are whitespace-delimited tokens; a token is a nonterminal iff
it occurs on some left-hand side, every other token is a terminal.  ``#``
starts a comment that runs to the end of the line.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator


class GrammarError(ValueError):
    """Malformed grammar text or a fatal validation problem."""


class SymbolKind(enum.Enum):
    TERMINAL = "terminal"
    NONTERMINAL = "nonterminal"


@dataclass(frozen=True)
class Symbol:
    kind: SymbolKind
    name: str

    def __post_init__(self) -> None:
        # symbols end up hashed millions of times during proof search
        object.__setattr__(self, "_h", hash((self.kind.value, self.name)))

    def __hash__(self) -> int:
        return self._h

    @property
    def is_terminal(self) -> bool:
        return self.kind is SymbolKind.TERMINAL

    def __repr__(self) -> str:
        tag = "t" if self.is_terminal else "n"
        return f"{tag}:{self.name}"


def terminal(name: str) -> Symbol:
    return Symbol(SymbolKind.TERMINAL, name)


def nonterminal(name: str) -> Symbol:
    return Symbol(SymbolKind.NONTERMINAL, name)


# A word is a sequence of terminal symbols; () is the empty word.
Word = tuple[Symbol, ...]
EMPTY_WORD: Word = ()


@dataclass(frozen=True)
class Production:
    lhs: Symbol
    rhs: tuple[Symbol, ...]

    def __post_init__(self) -> None:
        if self.lhs.is_terminal:
            raise GrammarError(f"production left-hand side {self.lhs.name!r} must be a nonterminal")


@dataclass(frozen=True)
class Grammar:
    terminals: frozenset[Symbol]
    nonterminals: frozenset[Symbol]
    productions: tuple[Production, ...]
    start: Symbol

    def __post_init__(self) -> None:
        t_names = {s.name for s in self.terminals}
        n_names = {s.name for s in self.nonterminals}
        clash = t_names & n_names
        if clash:
            raise GrammarError(f"terminal and nonterminal name spaces overlap: {sorted(clash)}")
        if self.start not in self.nonterminals:
            raise GrammarError(f"start symbol {self.start.name!r} is not a declared nonterminal")
        declared = self.terminals | self.nonterminals
        for p in self.productions:
            for s in (p.lhs, *p.rhs):
                if s not in declared:
                    raise GrammarError(f"undeclared symbol {s.name!r} in production")
        seen = set()
        for p in self.productions:
            if p in seen:
                raise GrammarError(
                    f"duplicate production {p.lhs.name} ::= {' '.join(s.name for s in p.rhs)}"
                )
            seen.add(p)

    def symbol(self, name: str) -> Symbol:
        """Look up a declared symbol by name."""
        for pool in (self.nonterminals, self.terminals):
            for s in pool:
                if s.name == name:
                    return s
        raise GrammarError(f"unknown symbol {name!r}")

    def declares(self, name: str) -> bool:
        return any(s.name == name for s in self.terminals | self.nonterminals)

    def productions_for(self, nt: Symbol) -> tuple[Production, ...]:
        return tuple(p for p in self.productions if p.lhs == nt)

    def with_terminals(self, extra: Iterable[Symbol]) -> "Grammar":
        """A copy of this grammar with additional declared terminals."""
        return Grammar(self.terminals | frozenset(extra), self.nonterminals, self.productions, self.start)


def render_word(w: Word) -> str:
    return " ".join(s.name for s in w) if w else "ε"


def word_from_text(g: Grammar, text: str) -> Word:
    """Whitespace-tokenize ``text`` into a word over g's terminals."""
    out = []
    for tok in text.split():
        sym = g.symbol(tok)
        if not sym.is_terminal:
            raise GrammarError(f"token {tok!r} is a nonterminal, not a word token")
        out.append(sym)
    return tuple(out)


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _unquote(token: str, lineno: int) -> tuple[str, bool]:
    """Return (name, was_quoted).  Quoting forces terminal classification."""
    if token.startswith('"') or token.endswith('"'):
        if len(token) < 3 or not (token.startswith('"') and token.endswith('"')):
            raise GrammarError(f"line {lineno}: malformed quoted token {token!r}")
        return token[1:-1], True
    return token, False


def parse_grammar_file(text: str) -> Grammar:
    """Parse grammar text into an (unvalidated) Grammar."""
    start_name: str | None = None
    # raw rules: (lineno, lhs_name, [alternative token lists], quoted name set)
    rules: list[tuple[int, str, list[list[str]]]] = []
    quoted_names: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if start_name is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "start":
                raise GrammarError(f"line {lineno}: expected 'start <Name>' as the first directive")
            start_name = parts[1]
            continue
        if line.split()[0] == "start":
            raise GrammarError(f"line {lineno}: duplicate start directive")
        if "::=" not in line:
            raise GrammarError(f"line {lineno}: expected a rule of the form '<Name> ::= ... ;'")
        lhs_part, rhs_part = line.split("::=", 1)
        if "::=" in rhs_part:
            raise GrammarError(f"line {lineno}: more than one '::=' in rule")
        lhs_tokens = lhs_part.split()
        if len(lhs_tokens) != 1:
            raise GrammarError(f"line {lineno}: rule left-hand side must be a single token")
        lhs_name, lhs_quoted = _unquote(lhs_tokens[0], lineno)
        if lhs_quoted:
            raise GrammarError(f"line {lineno}: left-hand side {lhs_name!r} cannot be quoted")
        rhs_part = rhs_part.strip()
        if not rhs_part.endswith(";"):
            raise GrammarError(f"line {lineno}: rule must end with ';'")
        body = rhs_part[:-1]
        alts: list[list[str]] = []
        for alt in body.split("|"):
            names = []
            for tok in alt.split():
                name, was_quoted = _unquote(tok, lineno)
                if was_quoted:
                    quoted_names.add(name)
                names.append(name)
            alts.append(names)
        rules.append((lineno, lhs_name, alts))

    if start_name is None:
        raise GrammarError("empty grammar: missing start directive")

    lhs_names = {name for _, name, _ in rules}
    conflict = quoted_names & lhs_names
    if conflict:
        raise GrammarError(f"quoted terminal also used as a nonterminal: {sorted(conflict)}")

    all_names: set[str] = set(lhs_names)
    for _, _, alts in rules:
        for alt in alts:
            all_names.update(alt)

    def classify(name: str) -> Symbol:
        return nonterminal(name) if name in lhs_names else terminal(name)

    if start_name not in lhs_names:
        raise GrammarError(f"start symbol {start_name!r} has no productions")

    productions: list[Production] = []
    seen: set[Production] = set()
    for lineno, lhs_name, alts in rules:
        lhs = nonterminal(lhs_name)
        for alt in alts:
            p = Production(lhs, tuple(classify(n) for n in alt))
            if p in seen:
                raise GrammarError(
                    f"line {lineno}: duplicate production {lhs_name} ::= {' '.join(alt) or 'ε'}"
                )
            seen.add(p)
            productions.append(p)

    return Grammar(
        terminals=frozenset(classify(n) for n in all_names if n not in lhs_names),
        nonterminals=frozenset(nonterminal(n) for n in lhs_names),
        productions=tuple(productions),
        start=nonterminal(start_name),
    )


def load_grammar(path: str) -> Grammar:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar_file(fh.read())


def _productive_set(g: Grammar) -> frozenset[Symbol]:
    productive: set[Symbol] = set(g.terminals)
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.lhs not in productive and all(s in productive for s in p.rhs):
                productive.add(p.lhs)
                changed = True
    return frozenset(productive)


def validate(g: Grammar) -> tuple[Grammar, list[str]]:
    """Drop useless nonterminals and their productions.

    A nonterminal is useless when it derives no terminal word or is not
    reachable from the start symbol through productive context.  The language
    of the start symbol is unchanged; declared terminals are kept even when
    they no longer occur, so tokens introduced only to be typed by extra
    axioms stay available.  Raises GrammarError when the start symbol itself
    is useless.
    """
    diagnostics: list[str] = []
    productive = _productive_set(g)
    if g.start not in productive:
        raise GrammarError(f"start symbol {g.start.name!r} derives no terminal word")

    kept = [p for p in g.productions if all(s in productive for s in p.rhs)]
    reachable: set[Symbol] = {g.start}
    changed = True
    while changed:
        changed = False
        for p in kept:
            if p.lhs in reachable:
                for s in p.rhs:
                    if not s.is_terminal and s not in reachable:
                        reachable.add(s)
                        changed = True

    useful = {n for n in g.nonterminals if n in productive and n in reachable}
    for n in sorted(g.nonterminals - useful, key=lambda s: s.name):
        why = "unproductive" if n not in productive else "unreachable"
        diagnostics.append(f"removed useless nonterminal {n.name} ({why})")
    final = []
    for p in g.productions:
        if p.lhs in useful and all(s.is_terminal or s in useful for s in p.rhs):
            final.append(p)
        else:
            rhs = " ".join(s.name for s in p.rhs) or "ε"
            diagnostics.append(f"removed production {p.lhs.name} ::= {rhs}")

    if not diagnostics:
        return g, []
    return (
        Grammar(g.terminals, frozenset(useful), tuple(final), g.start),
        diagnostics,
    )


def nullable_set(g: Grammar) -> frozenset[Symbol]:
    """Nonterminals that derive the empty word."""
    return frozenset(nullable_witnesses(g))


def nullable_witnesses(g: Grammar) -> dict[Symbol, Production]:
    """For each nullable nonterminal, a production witnessing an ε-derivation.

    The witness's right-hand side consists of symbols that became nullable
    strictly earlier in the fixpoint, so recursing through witnesses is
    well-founded.
    """
    witness: dict[Symbol, Production] = {}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.lhs not in witness and all(s in witness for s in p.rhs):
                witness[p.lhs] = p
                changed = True
    return witness


@lru_cache(maxsize=None)
def _words_by_symbol(g: Grammar, max_len: int) -> dict[Symbol, frozenset[Word]]:
    """Bounded-exact word sets for every symbol of g, by monotone fixpoint."""
    words: dict[Symbol, set[Word]] = {t: ({(t,)} if max_len >= 1 else set()) for t in g.terminals}
    for n in g.nonterminals:
        words[n] = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            partials: set[Word] = {EMPTY_WORD}
            for s in p.rhs:
                nxt = set()
                for pre in partials:
                    room = max_len - len(pre)
                    for w in words[s]:
                        if len(w) <= room:
                            nxt.add(pre + w)
                partials = nxt
                if not partials:
                    break
            before = len(words[p.lhs])
            words[p.lhs] |= partials
            if len(words[p.lhs]) != before:
                changed = True
    return {s: frozenset(ws) for s, ws in words.items()}


def enumerate_words(g: Grammar, x: Symbol, max_len: int) -> frozenset[Word]:
    """All terminal words of length <= max_len derivable from symbol x."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    if x.is_terminal:
        return frozenset({(x,)}) if max_len >= 1 else frozenset()
    if x not in g.nonterminals:
        raise GrammarError(f"symbol {x.name!r} is not declared in the grammar")
    return _words_by_symbol(g, max_len)[x]


def length_lex_key(w: Word) -> tuple[int, tuple[str, ...]]:
    return (len(w), tuple(s.name for s in w))


def iter_words_sorted(ws: Iterable[Word]) -> Iterator[Word]:
    return iter(sorted(ws, key=length_lex_key))
