"""Classify untrusted string fragments spliced into a fixed template.

A template is a prefix and a suffix around a single hole, together with the
symbol the whole string should parse as (goal) and the symbol the hole is
meant to supply (expected).  Given a concrete input for the hole we ask, in
order:

  Benign     the input itself proves  input ⊢ expected
  Capturing  the input instead types as a function over its surroundings,
             i.e. some (ψ/expected)\\π  (grabbing material on its left) or
             π/(expected\\ψ)  (grabbing material on its right) is provable.
             These are the doubly-negated shapes: the input pretends to be
             an expected-value only long enough to swallow an adjacent
             producer or consumer, then yields something bigger.
  IllFormed  the spliced string does not even parse as the goal
  Unknown    the spliced string parses, but no typing was found in bounds

Capturing is the syntactic fingerprint of an injection: "b OR 1 = 1" in the
hole of "a = _" does not carry the expected value type, yet composes with
the prefix to a full expression.

The reshaping check is the parse-tree view of the same phenomenon: splice
the input, parse, and see whether the result still contains the template's
tree with the hole filled (a conservative extension) or the input stole
parts of the template into its own subtree (reshaped).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .earley import (
    Ambiguous,
    HoleMark,
    ParseTree,
    Reject,
    extend_with_hole,
    internal_node,
    parse_tree,
    recognize,
    shape_equal,
    token_leaf,
    tree_to_json,
)
from .grammar import Grammar, Production, Symbol, Word, render_word
from .prover import (
    ProofTree,
    Prover,
    SearchConfig,
    Side,
    proof_to_json,
)
from .semantics import SemBound
from .types import Atom, LambekType, Over, Sequent, Under, render_type, type_universe


class AmbiguityError(ValueError):
    """The grammar produced two parse trees where one was required."""


@dataclass(frozen=True)
class InjectionContext:
    prefix: Word
    suffix: Word
    goal: Symbol
    expected: Symbol


class Classification(enum.Enum):
    BENIGN = "Benign"
    CAPTURING = "Capturing"
    ILL_FORMED = "IllFormed"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class CaptureTyping:
    direction: Side
    type: LambekType
    proof: ProofTree


@dataclass(frozen=True)
class ConservativeExtension:
    tree: ParseTree


@dataclass(frozen=True)
class Reshaped:
    context_tree: ParseTree
    combined_tree: ParseTree


@dataclass(frozen=True)
class Unparseable:
    pass


ReshapingResult = ConservativeExtension | Reshaped | Unparseable


def _hole_parse(g: Grammar, ctx: InjectionContext) -> tuple[ParseTree, Production, HoleMark]:
    g2, mark = extend_with_hole(g, ctx.expected)
    out = parse_tree(g2, ctx.goal, ctx.prefix + (mark.token,) + ctx.suffix)
    if isinstance(out, Reject):
        raise ValueError(
            f"template {render_word(ctx.prefix)!r} _ {render_word(ctx.suffix)!r} does not "
            f"parse as {ctx.goal.name} with a {ctx.expected.name} hole"
        )
    if isinstance(out, Ambiguous):
        raise AmbiguityError("the template parses ambiguously around its hole")
    return out.tree, g2.productions[-1], mark


def context_tree(g: Grammar, ctx: InjectionContext) -> ParseTree:
    """The template's unique parse, hole rendered as a fresh leaf."""
    tree, _, _ = _hole_parse(g, ctx)
    return tree


def reshaping_check(g: Grammar, ctx: InjectionContext, w: Word) -> ReshapingResult:
    ctx_tree, hole_prod, mark = _hole_parse(g, ctx)
    full = ctx.prefix + w + ctx.suffix
    out = parse_tree(g, ctx.goal, full)
    if isinstance(out, Reject):
        return Unparseable()
    if isinstance(out, Ambiguous):
        raise AmbiguityError(f"{render_word(full)!r} parses ambiguously")
    tree = out.tree
    lo, hi = len(ctx.prefix), len(ctx.prefix) + len(w)
    hole_node = internal_node(hole_prod, (token_leaf(mark.token),))

    def variants(node: ParseTree, offset: int):
        # every way of replacing one expected-labeled node over exactly the
        # input's span by the hole leaf
        if (
            node.production is not None
            and node.root == ctx.expected
            and offset == lo
            and offset + len(node.word) == hi
        ):
            yield hole_node
        if node.production is None:
            return
        o = offset
        for i, child in enumerate(node.children):
            for v in variants(child, o):
                yield internal_node(
                    node.production, node.children[:i] + (v,) + node.children[i + 1 :]
                )
            o += len(child.word)

    for candidate in variants(tree, 0):
        if shape_equal(candidate, ctx_tree):
            return ConservativeExtension(tree)
    return Reshaped(ctx_tree, tree)


def hole_language(g: Grammar, ctx: InjectionContext, out_len: int) -> frozenset[Word]:
    """Every word of length at most out_len the hole accepts syntactically."""
    sigma = sorted(g.terminals, key=lambda s: s.name)
    found: set[Word] = set()
    for n in range(out_len + 1):
        for w in product(sigma, repeat=n):
            if _recognize_full(g, ctx, w):
                found.add(w)
    return frozenset(found)


def _recognize_full(g: Grammar, ctx: InjectionContext, w: Word) -> bool:
    return recognize(g, ctx.goal, ctx.prefix + w + ctx.suffix)


def infer_typings(
    g: Grammar,
    w: Word,
    atoms: Sequence[Symbol],
    depth: int,
    cfg: SearchConfig = SearchConfig(),
    prover: Prover | None = None,
) -> list[tuple[LambekType, ProofTree]]:
    """All types in the universe over atoms at the given depth that w proves."""
    pr = prover if prover is not None else Prover(g, cfg)
    ante = tuple(Atom(s) for s in w)
    out: list[tuple[LambekType, ProofTree]] = []
    for tau in type_universe(g, atoms, depth):
        r = pr.prove(Sequent(ante, tau))
        if r.proved:
            out.append((tau, r.proof))
    return out


@dataclass(frozen=True)
class InjectionReport:
    classification: Classification
    context: InjectionContext
    input: Word
    benign_proof: ProofTree | None
    captures: tuple[CaptureTyping, ...]
    combined_parses: bool
    reshaping: ReshapingResult
    config: SearchConfig
    bound: SemBound

    def to_json(self, g: Grammar) -> dict:
        if isinstance(self.reshaping, ConservativeExtension):
            reshaping = {
                "verdict": "ConservativeExtension",
                "combined_tree": tree_to_json(self.reshaping.tree, g),
            }
        elif isinstance(self.reshaping, Reshaped):
            reshaping = {
                "verdict": "Reshaped",
                "context_tree": tree_to_json(self.reshaping.context_tree, g),
                "combined_tree": tree_to_json(self.reshaping.combined_tree, g),
            }
        else:
            reshaping = {"verdict": "Unparseable"}
        out = {
            "classification": self.classification.value,
            "input": [s.name for s in self.input],
            "context": {
                "prefix": render_word(self.context.prefix),
                "suffix": render_word(self.context.suffix),
                "goal": self.context.goal.name,
                "expected": self.context.expected.name,
            },
            "captures": [
                {
                    "direction": c.direction.value,
                    "type": render_type(c.type),
                    "proof": proof_to_json(c.proof),
                }
                for c in self.captures
            ],
            "combined_parses": self.combined_parses,
            "reshaping": reshaping,
            "bounds": {
                "max_depth": self.config.max_depth,
                "insert_budget": self.config.insert_budget,
                "max_len": self.bound.max_len,
            },
        }
        if self.benign_proof is not None:
            out["benign_proof"] = proof_to_json(self.benign_proof)
        return out


def capture_typings(
    g: Grammar,
    ctx: InjectionContext,
    w: Word,
    cfg: SearchConfig = SearchConfig(),
    prover: Prover | None = None,
    capture_depth: int = 0,
) -> tuple[CaptureTyping, ...]:
    """Doubly-negated typings of w that swallow template material.

    Left captures need material on the left, so they are only searched when
    the prefix is nonempty; right captures likewise require a suffix.  ψ and
    π range over the grammar's nonterminals; capture_depth > 0 widens them
    to the full type universe at that depth.
    """
    pr = prover if prover is not None else Prover(g, cfg)
    ante = tuple(Atom(s) for s in w)
    hole = Atom(ctx.expected)
    nts = sorted(g.nonterminals, key=lambda s: s.name)
    if capture_depth == 0:
        candidates: list[LambekType] = [Atom(s) for s in nts]
    else:
        candidates = type_universe(g, nts, capture_depth)
    found: list[CaptureTyping] = []
    for psi in candidates:
        for pi in candidates:
            if ctx.prefix:
                t = Under(Over(psi, hole), pi)
                r = pr.prove(Sequent(ante, t))
                if r.proved:
                    found.append(CaptureTyping(Side.LEFT, t, r.proof))
            if ctx.suffix:
                t = Over(pi, Under(hole, psi))
                r = pr.prove(Sequent(ante, t))
                if r.proved:
                    found.append(CaptureTyping(Side.RIGHT, t, r.proof))
    return tuple(found)


def classify_input(
    g: Grammar,
    ctx: InjectionContext,
    w: Word,
    cfg: SearchConfig = SearchConfig(),
    bound: SemBound = SemBound(),
    capture_depth: int = 0,
) -> InjectionReport:
    if ctx.goal not in g.nonterminals:
        raise ValueError(f"goal {ctx.goal.name!r} is not a nonterminal")
    _hole_parse(g, ctx)  # reject templates with no well-formed hole
    for sym in ctx.prefix + w + ctx.suffix:
        if sym not in g.terminals:
            raise ValueError(f"{sym.name!r} is not a terminal of the grammar")

    prover = Prover(g, cfg)
    benign = prover.prove(Sequent(tuple(Atom(s) for s in w), Atom(ctx.expected)))
    captures: tuple[CaptureTyping, ...] = ()
    if not benign.proved:
        captures = capture_typings(g, ctx, w, cfg, prover, capture_depth)
    reshaping = reshaping_check(g, ctx, w)
    combined_parses = not isinstance(reshaping, Unparseable)

    if benign.proved:
        cls = Classification.BENIGN
    elif captures:
        cls = Classification.CAPTURING
    elif not combined_parses:
        cls = Classification.ILL_FORMED
    else:
        cls = Classification.UNKNOWN

    return InjectionReport(
        classification=cls,
        context=ctx,
        input=w,
        benign_proof=benign.proof,
        captures=captures,
        combined_parses=combined_parses,
        reshaping=reshaping,
        config=cfg,
        bound=bound,
    )
