from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES, GOLDEN
from gen import ALGEBRA, fs_strategy, random_amrs
from tfsparse.errors import CycleInOrder, GrammarSyntaxError, NotBoundedComplete, UnknownType
from tfsparse.fmt import parse_amrs, parse_fs, parse_grammar, render, render_rule, tokenize

MINI = """
%types a sub bot . b sub bot .
%approp a F:bot G:bot .
%start [a] .
%rules r: [a F:#1=[b]], [a G:#1] => [a F:#1] .
%lexicon x: [a] .
"""


def test_tokens_carry_positions():
    toks = tokenize("%types\n  a sub bot . %% note\n#3=[")
    assert [(t.kind, t.text, t.line, t.col) for t in toks[:3]] == [
        ("section", "%types", 1, 1),
        ("ident", "a", 2, 3),
        ("ident", "sub", 2, 5),
    ]
    assert [t.kind for t in toks[-4:]] == ["tag", "punct", "punct", "eof"]


def test_mini_grammar():
    g = parse_grammar(MINI)
    assert [r.name for r in g.rules] == ["r"]
    r = g.rules[0]
    assert len(r) == 3
    # one node shared by both body elements and the head
    assert render(r.amrs) == "[a F:#1=[b]], [a G:#1], [a F:#1]"
    assert render_rule(r) == "[a F:#1=[b]], [a G:#1] => [a F:#1]"


def test_english_grammar(english):
    assert len(english.rules) == 3
    assert sorted(english.lexicon) == ["John", "fish", "loves"]
    assert render(english.start) == "[phrase SYN:[s]]"
    assert english.sig.features == ("SYN", "HEAD", "CASE", "SBCT", "SUBJ", "AGR", "PERS", "NUM", "1ST", "RST")


def test_rule_tag_shared_across_three_elements(english):
    assert render(english.rule("r1").amrs) == (
        "[phrase SYN:[n] HEAD:#1=[head AGR:#2=[agr]] CASE:[nom]], "
        "[phrase SYN:[v] HEAD:#3=[head AGR:#2] SBCT:[elist]], "
        "[phrase SYN:[s] HEAD:#3 SUBJ:#1]"
    )


def test_undeclared_type_in_rule():
    with pytest.raises(UnknownType):
        parse_grammar("%types\n%start [bot].\n%rules r: [a] => [b].\n%lexicon\n")


@pytest.mark.parametrize(
    "text, fragment, line",
    [
        ("%types a sub bot .\n%start [a].\n%rules\n%lexicon x: [a F:[a]].", "unknown feature", 4),
        ("%types a sub bot .\n%approp a F:bot.\n%start [a].\n%rules\n%lexicon x: [a F:[a] F:[a]].", "repeated", 5),
        ("%types a sub bot .\n%start [a].\n%rules\n%lexicon x: #1.", "never bound", 4),
        ("%types a sub bot .\n%start [a].\n%rules\n%lexicon x: [a] [a].", "expected '.'", 4),
        ("%types a sub bot .\n%start [a].\n%rules\n", "missing section %lexicon", 4),
        ("%types a sub bot .\n%types\n", "appears twice", 2),
        ("%types a sub bot .\n%start [a] .\n%rules\n%lexicon\n%bogus", "unknown section", 5),
        ("a sub bot .", "before the first section", 1),
        ("%types a sub bot .\n%start [a] .\n%rules\n%lexicon x: [a] ! .", "unexpected character", 4),
        ("%types a sub bot .\n%approp a F:bot .\n%start [a] .\n%rules\n%lexicon x: [a F:#1=[a] F:#1=[a]] .", "repeated", 5),
    ],
)
def test_syntax_errors_have_positions(text, fragment, line):
    with pytest.raises(GrammarSyntaxError) as e:
        parse_grammar(text)
    assert fragment in str(e.value)
    assert e.value.line == line


def test_tag_bound_twice():
    text = "%types a sub bot .\n%approp a F:bot G:bot .\n%start [a] .\n%rules\n%lexicon x: [a F:#1=[a] G:#1=[a]] ."
    with pytest.raises(GrammarSyntaxError, match="bound twice"):
        parse_grammar(text)


def test_forward_tag_reference():
    g = parse_grammar("%types a sub bot .\n%approp a F:bot G:bot .\n%start [a] .\n%rules\n%lexicon x: [a F:#1 G:#1=[a]] .")
    assert render(g.lexicon["x"][0]) == "[a F:#1=[a] G:#1]"


def test_tags_do_not_cross_entries():
    g = parse_grammar(
        "%types a sub bot .\n%approp a F:bot .\n%start [a] .\n%rules\n"
        "%lexicon x: [a F:#1=[a]] . y: [a F:#1=[bot]] ."
    )
    assert render(g.lexicon["y"][0]) == "[a F:[bot]]"


def test_quoted_words_and_ambiguity():
    g = parse_grammar('%types a sub bot .\n%start [a] .\n%rules\n%lexicon "New York": [a] . x: [a] . x: [bot] .')
    assert "New York" in g.lexicon
    assert len(g.lexicon["x"]) == 2


def test_rule_without_body_parses():
    g = parse_grammar("%types a sub bot .\n%start [a] .\n%rules r: => [a] .\n%lexicon")
    assert len(g.rules[0]) == 1 and not g.rules[0].phrasal


def test_hierarchy_errors_surface():
    with pytest.raises(NotBoundedComplete):
        parse_grammar((FIXTURES / "unbounded.tfs").read_text())
    with pytest.raises(CycleInOrder):
        parse_grammar("%types a sub b . b sub a .\n%start [bot] .\n%rules\n%lexicon")
    with pytest.raises(GrammarSyntaxError, match="implicit"):
        parse_grammar("%types bot sub a .\n%start [bot] .\n%rules\n%lexicon")


def test_render_bottom():
    assert render(parse_fs("[bot]", ALGEBRA)) == "[bot]"


def test_render_cycle():
    a = parse_fs("#7=[a F:[b G:#7]]", ALGEBRA)
    assert render(a) == "#1=[a F:[b G:#1]]"


def test_edge_render_marks_each_shared_node_once(english):
    a = parse_amrs((GOLDEN / "edge_np_from_john.avm").read_text(), english.sig)
    text = render(a)
    assert text == (
        "[word SYN:[pn] HEAD:#1=[head AGR:[agr PERS:[3rd] NUM:[sg]]] CASE:#2=[case]], "
        "[phrase SYN:[n] HEAD:#1 CASE:#2]"
    )
    assert text.count("#1=") == 1 and text.count("#2=") == 1


@pytest.mark.parametrize("name", sorted(p.name for p in GOLDEN.glob("*.avm")))
def test_golden_avms_normalize_in_one_pass(english, name):
    a = parse_amrs((GOLDEN / name).read_text(), english.sig)
    once = render(a)
    assert render(parse_amrs(once, english.sig)) == once


def test_grammar_avms_round_trip(english):
    for r in english.rules:
        assert parse_amrs(render(r.amrs), english.sig) == r.amrs
    for cats in english.lexicon.values():
        for c in cats:
            assert parse_fs(render(c), english.sig) == c


@given(fs_strategy(cyclic=True))
def test_round_trip_random_fs(a):
    assert parse_fs(render(a), ALGEBRA) == a


@given(st.integers(1, 3), st.data())
def test_round_trip_random_amrs(n, data):
    a = random_amrs(lambda lo, hi: data.draw(st.integers(lo, hi)), n)
    assert parse_amrs(render(a), ALGEBRA) == a
