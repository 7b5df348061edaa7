from itertools import product

import pytest

from lambek.earley import (
    Ambiguous,
    Pass,
    Reject,
    Unique,
    Witness,
    check_unambiguous,
    extend_with_hole,
    internal_node,
    parse_tree,
    recognize,
    render_tree_text,
    shape_equal,
    token_leaf,
    tree_to_json,
)
from lambek.grammar import enumerate_words, parse_grammar_file, word_from_text


def w(g, text):
    return word_from_text(g, text)


def test_recognize_bool(bool_g):
    E, T, F = bool_g.symbol("E"), bool_g.symbol("T"), bool_g.symbol("F")
    assert recognize(bool_g, T, w(bool_g, "a = b"))
    assert recognize(bool_g, E, w(bool_g, "a = b"))
    assert recognize(bool_g, E, w(bool_g, "a = b OR 1 = 1"))
    assert not recognize(bool_g, T, w(bool_g, "a = b OR 1 = 1"))
    assert not recognize(bool_g, E, ())
    assert recognize(bool_g, F, ())
    assert recognize(bool_g, F, w(bool_g, "OR a = b"))
    assert not recognize(bool_g, E, w(bool_g, "a ="))


def test_recognize_eng(eng_g):
    Sent = eng_g.symbol("Sent")
    assert recognize(eng_g, Sent, w(eng_g, "Alice knows Bob"))
    assert not recognize(eng_g, Sent, w(eng_g, "him knows Alice"))


def test_recognize_agrees_with_enumeration(bool_g):
    """Exact cross-check on every string of up to three tokens."""
    E = bool_g.symbol("E")
    language = enumerate_words(bool_g, E, 3)
    sigma = sorted(bool_g.terminals, key=lambda s: s.name)
    for n in range(4):
        for cand in product(sigma, repeat=n):
            assert recognize(bool_g, E, cand) == (cand in language)


def test_parse_tree_unique(bool_g):
    out = parse_tree(bool_g, bool_g.symbol("E"), w(bool_g, "a = b"))
    assert isinstance(out, Unique)
    t = out.tree
    assert t.root == bool_g.symbol("E")
    assert t.production == bool_g.productions[0]
    assert t.word == w(bool_g, "a = b")
    assert [c.label() for c in t.children] == ["C", "F"]


def test_parse_tree_reject(bool_g):
    assert isinstance(parse_tree(bool_g, bool_g.symbol("E"), w(bool_g, "a =")), Reject)


def test_parse_tree_ambiguous(ambiguous_g):
    S = ambiguous_g.symbol("S")
    assert isinstance(parse_tree(ambiguous_g, S, w(ambiguous_g, "x x")), Unique)
    out = parse_tree(ambiguous_g, S, w(ambiguous_g, "x x x"))
    assert isinstance(out, Ambiguous)
    assert not shape_equal(out.first, out.second)
    assert out.first.word == out.second.word == w(ambiguous_g, "x x x")


def test_check_unambiguous_pass(bool_g, eng_g):
    assert check_unambiguous(bool_g, bool_g.symbol("E"), 6) == Pass(6)
    assert check_unambiguous(eng_g, eng_g.symbol("Sent"), 4) == Pass(4)


def test_check_unambiguous_witness(ambiguous_g):
    out = check_unambiguous(ambiguous_g, ambiguous_g.symbol("S"), 5)
    assert isinstance(out, Witness)
    assert len(out.word) == 3
    assert not shape_equal(out.first, out.second)


def test_extend_with_hole(bool_g):
    g2, mark = extend_with_hole(bool_g, bool_g.symbol("V"))
    assert mark.hole_type == bool_g.symbol("V")
    assert mark.token in g2.terminals
    # base production table is a stable prefix
    assert g2.productions[: len(bool_g.productions)] == bool_g.productions
    assert g2.productions[-1].lhs == bool_g.symbol("V")
    assert g2.productions[-1].rhs == (mark.token,)
    assert recognize(g2, bool_g.symbol("E"), w(bool_g, "a =") + (mark.token,))


def test_extend_with_hole_avoids_name_clash():
    g = parse_grammar_file("start S\nS ::= __HOLE ;\n")
    g2, mark = extend_with_hole(g, g.symbol("S"))
    assert mark.token.name != "__HOLE"
    assert mark.token in g2.terminals


def test_render_tree_text(bool_g):
    out = parse_tree(bool_g, bool_g.symbol("T"), w(bool_g, "a = b"))
    lines = render_tree_text(out.tree).splitlines()
    assert lines[0] == "T"
    assert lines[1:] == ["  V", "    a", "  =", "  V", "    b"]


def test_tree_to_json(bool_g):
    out = parse_tree(bool_g, bool_g.symbol("T"), w(bool_g, "a = b"))
    obj = tree_to_json(out.tree, bool_g)
    assert obj["sym"] == "T"
    assert bool_g.productions[obj["prod_index"]].lhs.name == "T"
    leaf = obj["children"][1]
    assert leaf == {"sym": "=", "prod_index": None, "children": []}


def test_tree_to_json_foreign_production(bool_g):
    g2, mark = extend_with_hole(bool_g, bool_g.symbol("V"))
    out = parse_tree(g2, bool_g.symbol("E"), w(bool_g, "a =") + (mark.token,))
    obj = tree_to_json(out.tree, bool_g)

    def holes(node):
        if node["sym"] == mark.token.name:
            yield node
        for c in node["children"]:
            yield from holes(c)

    assert list(holes(obj))  # present, serialized with prod_index None above it


def test_shape_equal_ignores_spans(bool_g):
    first = parse_tree(bool_g, bool_g.symbol("V"), w(bool_g, "a")).tree
    second = parse_tree(bool_g, bool_g.symbol("V"), w(bool_g, "a")).tree
    third = parse_tree(bool_g, bool_g.symbol("V"), w(bool_g, "b")).tree
    assert shape_equal(first, second)
    assert not shape_equal(first, third)


def test_internal_node_concatenates_yields(bool_g):
    p = bool_g.productions_for(bool_g.symbol("V"))[1]
    node = internal_node(p, (token_leaf(p.rhs[0]),))
    assert node.word == (p.rhs[0],)
    assert node.label() == "V"
