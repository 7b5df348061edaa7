"""Language-valued semantics for types, bounded so it stays decidable.

A type denotes a set of words over the grammar's terminals:

    ⟦A⟧    = the words the symbol A derives
    ⟦1⟧    = {ε}
    ⟦φ*ψ⟧  = {uv : u ∈ ⟦φ⟧, v ∈ ⟦ψ⟧}
    ⟦φ\\ψ⟧  = {w : vw ∈ ⟦ψ⟧ for every v ∈ ⟦φ⟧}
    ⟦ψ/φ⟧  = {w : wv ∈ ⟦ψ⟧ for every v ∈ ⟦φ⟧}

and a context denotes the concatenation of its members' sets (the empty
context denotes {ε}).  The implication cases quantify over infinitely many
words, so the oracle truncates every universal quantifier and every
enumerated denotation at max_len tokens.  Membership of a concrete word in
an atom is always decided exactly, whatever its length.

The truncation makes membership of an implication an over-approximation: an
accepted word has only survived the tests up to the bound.  A rejection is
exact as long as the failing test word is itself a true member of the
argument type, which the truncation guarantees only on part of the type
language.  soundness_check therefore certifies a sequent before reporting a
counterexample, so its refutations are always real; everything it cannot
certify passes vacuously.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence

from .earley import recognize
from .grammar import Grammar, Symbol, Word, enumerate_words, iter_words_sorted
from .prover import Prover, SearchConfig, SearchResult, SearchStatus, TypingAxiom
from .types import Atom, LambekType, Over, Prod, Sequent, Under, UnitType


@dataclass(frozen=True)
class SemBound:
    """Cap on the test words fed to the universal quantifiers.

    alphabet, when given, restricts enumerated words to those terminals;
    None means the whole terminal alphabet of the grammar at hand.
    """

    max_len: int = 5
    alphabet: frozenset[Symbol] | None = None

    def __post_init__(self) -> None:
        if self.max_len < 0:
            raise ValueError("max_len must be nonnegative")
        if self.alphabet is not None:
            object.__setattr__(self, "alphabet", frozenset(self.alphabet))

    def _alpha(self, g: Grammar) -> frozenset[Symbol] | None:
        # normalized so the full alphabet hits the same caches as None
        if self.alphabet is None or self.alphabet >= g.terminals:
            return None
        return self.alphabet


@dataclass(frozen=True)
class OraclePass:
    checked: int


@dataclass(frozen=True)
class Counterexample:
    word: Word


OracleVerdict = OraclePass | Counterexample


def member_bounded(g: Grammar, w: Word, t: LambekType, b: SemBound) -> bool:
    """Is w in ⟦t⟧, quantifiers truncated per the bound?"""
    return _member(g, w, t, b.max_len, b._alpha(g))


@lru_cache(maxsize=None)
def _member(
    g: Grammar, w: Word, t: LambekType, max_len: int, alpha: frozenset[Symbol] | None
) -> bool:
    if isinstance(t, Atom):
        if t.symbol.is_terminal:
            return w == (t.symbol,)
        return recognize(g, t.symbol, w)
    if isinstance(t, UnitType):
        return w == ()
    if isinstance(t, Prod):
        return any(
            _member(g, w[:k], t.left, max_len, alpha)
            and _member(g, w[k:], t.right, max_len, alpha)
            for k in range(len(w) + 1)
        )
    if isinstance(t, Under):
        return all(
            _member(g, v + w, t.result, max_len, alpha)
            for v in _denotation(g, t.arg, max_len, max_len, alpha)
        )
    if isinstance(t, Over):
        return all(
            _member(g, w + v, t.result, max_len, alpha)
            for v in _denotation(g, t.arg, max_len, max_len, alpha)
        )
    raise TypeError(f"unknown type {t!r}")


def denotation_bounded(
    g: Grammar, t: LambekType, b: SemBound, out_len: int
) -> frozenset[Word]:
    """All words of length at most out_len in ⟦t⟧ under the bound."""
    return _denotation(g, t, out_len, b.max_len, b._alpha(g))


def _restrict(words: frozenset[Word], alpha: frozenset[Symbol] | None) -> frozenset[Word]:
    if alpha is None:
        return words
    return frozenset(w for w in words if all(s in alpha for s in w))


@lru_cache(maxsize=None)
def _denotation(
    g: Grammar, t: LambekType, out_len: int, max_len: int, alpha: frozenset[Symbol] | None
) -> frozenset[Word]:
    if isinstance(t, Atom):
        return _restrict(frozenset(enumerate_words(g, t.symbol, out_len)), alpha)
    if isinstance(t, UnitType):
        return frozenset({()})
    if isinstance(t, Prod):
        left = _denotation(g, t.left, out_len, max_len, alpha)
        right = _denotation(g, t.right, out_len, max_len, alpha)
        return frozenset(
            u + v for u in left for v in right if len(u) + len(v) <= out_len
        )
    candidates = _implication_candidates(g, t, out_len, max_len, alpha)
    return frozenset(w for w in candidates if _member(g, w, t, max_len, alpha))


def _implication_candidates(
    g: Grammar,
    t: Under | Over,
    out_len: int,
    max_len: int,
    alpha: frozenset[Symbol] | None,
):
    """A superset of the implication's bounded denotation, kept small.

    With a nonempty quantifier domain, any member w extends by some test
    word v to a word of the result type, so when the result is an atom it
    suffices to try prefixes (Over) or suffixes (Under) of the result's
    words; otherwise fall back to every word over the alphabet.
    """
    dom = _denotation(g, t.arg, max_len, max_len, alpha)
    result = t.result
    if dom and isinstance(result, (Atom, UnitType)):
        if isinstance(result, UnitType):
            words: frozenset[Word] = frozenset({()})
        else:
            ext = max(len(v) for v in dom)
            words = frozenset(enumerate_words(g, result.symbol, out_len + ext))
        out: set[Word] = set()
        for w in words:
            stop = min(len(w), out_len)
            if isinstance(t, Over):
                out.update(w[:k] for k in range(stop + 1))
            else:
                out.update(w[len(w) - k :] for k in range(stop + 1))
        return _restrict(frozenset(out), alpha)
    return _all_words(g, out_len, alpha)


@lru_cache(maxsize=None)
def _all_words(
    g: Grammar, out_len: int, alpha: frozenset[Symbol] | None
) -> tuple[Word, ...]:
    sigma = sorted(alpha if alpha is not None else g.terminals, key=lambda s: s.name)
    out: list[Word] = []
    for n in range(out_len + 1):
        out.extend(product(sigma, repeat=n))
    return tuple(out)


@lru_cache(maxsize=None)
def _length_sup(g: Grammar, cap: int) -> dict[Symbol, int]:
    """Longest word each nonterminal derives, saturated at cap + 1."""
    big = cap + 1
    sup = {x: 0 for x in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            n = 0
            for s in p.rhs:
                n += 1 if s.is_terminal else sup[s]
                if n >= big:
                    n = big
                    break
            if n > sup[p.lhs]:
                sup[p.lhs] = n
                changed = True
    return sup


def _sup(g: Grammar, t: LambekType, cap: int) -> int:
    if isinstance(t, Atom):
        return 1 if t.symbol.is_terminal else _length_sup(g, cap)[t.symbol]
    if isinstance(t, UnitType):
        return 0
    if isinstance(t, Prod):
        return min(_sup(g, t.left, cap) + _sup(g, t.right, cap), cap + 1)
    return cap + 1  # implications may hold words of any length


def _members_real(g: Grammar, t: LambekType, max_len: int) -> bool:
    """Does bounded acceptance imply true membership for t?

    Holds when every universal quantifier inside t ranges over a type whose
    language is exhausted at the bound, so surviving the truncated tests is
    surviving them all.
    """
    if isinstance(t, (Atom, UnitType)):
        return True
    if isinstance(t, Prod):
        return _members_real(g, t.left, max_len) and _members_real(g, t.right, max_len)
    return _sup(g, t.arg, max_len) <= max_len and _members_real(g, t.result, max_len)


def _refutes_real(g: Grammar, t: LambekType, max_len: int) -> bool:
    """Does bounded rejection imply true non-membership for t?

    The failing test word must really inhabit the argument type, but the
    argument's language need not be exhausted: one true witness is enough.
    """
    if isinstance(t, (Atom, UnitType)):
        return True
    if isinstance(t, Prod):
        return _refutes_real(g, t.left, max_len) and _refutes_real(g, t.right, max_len)
    return _members_real(g, t.arg, max_len) and _refutes_real(g, t.result, max_len)


def context_denotation_bounded(
    g: Grammar, ctx: Sequence[LambekType], b: SemBound, out_len: int
) -> frozenset[Word]:
    """Concatenations of member words, total length capped at out_len."""
    alpha = b._alpha(g)
    acc: set[Word] = {()}
    for t in ctx:
        d = _denotation(g, t, out_len, b.max_len, alpha)
        acc = {u + v for u in acc for v in d if len(u) + len(v) <= out_len}
    return frozenset(acc)


def soundness_check(
    g: Grammar, s: Sequent, b: SemBound = SemBound(), out_len: int | None = None
) -> OracleVerdict:
    """Test antecedent words against the succedent; first failure wins.

    out_len caps the length of the antecedent words tried (defaults to the
    quantifier bound).  Words are visited shortest first, ties broken
    lexicographically, so the reported counterexample is deterministic.

    A counterexample is reported only when it is certain: the antecedent
    words must be true members of their types and the succedent's rejection
    must be exact.  A derivable sequent is sound for the full semantics, so
    without that certification an apparent failure may just be truncation
    noise.  Sequents outside the certifiable fragment pass vacuously with
    checked = 0.
    """
    if out_len is None:
        out_len = b.max_len
    if not (
        all(_members_real(g, t, b.max_len) for t in s.antecedent)
        and _refutes_real(g, s.succedent, b.max_len)
    ):
        return OraclePass(0)
    dom = context_denotation_bounded(g, s.antecedent, b, out_len)
    alpha = b._alpha(g)
    for w in iter_words_sorted(dom):
        if not _member(g, w, s.succedent, b.max_len, alpha):
            return Counterexample(w)
    return OraclePass(len(dom))


def prove_with_prescreen(
    g: Grammar,
    s: Sequent,
    cfg: SearchConfig = SearchConfig(),
    b: SemBound = SemBound(),
    axioms: Sequence[TypingAxiom] = (),
) -> SearchResult:
    """Run the oracle before searching; a counterexample skips the search.

    Typing axioms are not reflected in the language semantics, so the
    prescreen is skipped whenever axioms are supplied.
    """
    if not axioms:
        verdict = soundness_check(g, s, b)
        if isinstance(verdict, Counterexample):
            return SearchResult(
                SearchStatus.REFUTED_BY_ORACLE, counterexample=verdict.word
            )
    return Prover(g, cfg, axioms).prove(s)
