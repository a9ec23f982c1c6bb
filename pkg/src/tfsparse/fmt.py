"""Grammar file format and canonical rendering.

A grammar file is a sequence of sections, each opened by ``%name``::

    %types    child sub parent1 parent2 .      (bot is implicit)
    %approp   type FEAT:value FEAT:value .     (feature order = first mention)
    %start    AVM .
    %rules    name: AVM, AVM => AVM .
    %lexicon  word: AVM .

AVMs follow ``AVM := TAG | TAG '=' BODY | BODY`` and
``BODY := '[' TYPE (FEAT ':' AVM)* ']'`` with tags written ``#n``.  Tags are
scoped to one statement.  ``%%`` starts a comment running to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .afs import Fs, Graph, _canonical
from .amrs import Amrs
from .errors import GrammarSyntaxError, TfsError, UnknownType
from .grammar import Grammar, Rule
from .hierarchy import BOT, TypeHierarchy, validate

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%%[^\n]*)
  | (?P<section>%[A-Za-z_]+)
  | (?P<arrow>=>)
  | (?P<tag>\#[0-9]+)
  | (?P<punct>[\[\]:,.=])
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<ident>[A-Za-z0-9_][A-Za-z0-9_'\-]*)
    """,
    re.VERBOSE,
)

SECTIONS = ("types", "approp", "start", "rules", "lexicon")
REQUIRED = ("types", "start", "rules", "lexicon")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise GrammarSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            value = m.group()
            if kind == "string":
                value = bytes(value[1:-1], "utf-8").decode("unicode_escape")
                kind = "ident"
            out.append(Token(kind, value, line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Tag:
    __slots__ = ("n", "tok")

    def __init__(self, n: int, tok: Token):
        self.n, self.tok = n, tok


class _Reader:
    def __init__(self, tokens: list[Token], sig: TypeHierarchy | None = None):
        self.toks = tokens
        self.i = 0
        self.sig = sig

    @property
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek
        return t.text == text and t.kind in ("punct", "arrow")

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text or t.kind not in ("punct", "arrow"):
            raise GrammarSyntaxError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def ident(self, what: str) -> Token:
        t = self.next()
        if t.kind != "ident":
            raise GrammarSyntaxError(f"expected {what}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def fail(self, msg: str, t: Token | None = None):
        t = t or self.peek
        raise GrammarSyntaxError(msg, t.line, t.col)

    def check_type(self, tok: Token) -> str:
        if tok.text not in self.sig.types:
            raise UnknownType(tok.text, f"line {tok.line}:{tok.col}")
        return tok.text

    def check_feature(self, tok: Token) -> str:
        if tok.text not in self.sig.feature_rank:
            raise GrammarSyntaxError(f"unknown feature {tok.text!r}", tok.line, tok.col)
        return tok.text


class _Scope:
    """Node table and tag bindings for one statement."""

    def __init__(self, reader: _Reader):
        self.r = reader
        self.types: dict[int, str] = {}
        self.arcs: dict[int, dict] = {}
        self.bound: dict[int, int] = {}
        self.uses: list[_Tag] = []

    def avm(self):
        r = self.r
        t = r.peek
        if t.kind == "tag":
            r.next()
            n = int(t.text[1:])
            if r.at("="):
                r.next()
                if n in self.bound:
                    r.fail(f"tag #{n} bound twice", t)
                node = self.body()
                self.bound[n] = node
                return node
            tag = _Tag(n, t)
            self.uses.append(tag)
            return tag
        if r.at("["):
            return self.body()
        r.fail(f"expected an AVM, found {t.text or 'end of input'!r}")

    def body(self) -> int:
        r = self.r
        r.expect("[")
        node = len(self.types)
        self.types[node] = r.check_type(r.ident("a type"))
        out: dict = {}
        self.arcs[node] = out
        while not r.at("]"):
            ft = r.ident("a feature or ']'")
            f = r.check_feature(ft)
            if f in out:
                r.fail(f"feature {f} repeated", ft)
            r.expect(":")
            out[f] = self.avm()
        r.expect("]")
        return node

    def resolve(self, x) -> int:
        if isinstance(x, _Tag):
            if x.n not in self.bound:
                self.r.fail(f"tag #{x.n} is never bound", x.tok)
            return self.bound[x.n]
        return x

    def finish(self, cls, roots):
        roots = [self.resolve(x) for x in roots]
        for tag in self.uses:
            self.resolve(tag)
        arcs = {n: {f: self.resolve(v) for f, v in out.items()} for n, out in self.arcs.items()}
        return _canonical(cls, roots, self.types, arcs, self.r.sig)


# -- grammar files -------------------------------------------------------------


def _split_sections(tokens: list[Token]) -> dict[str, list[Token]]:
    sections: dict[str, list[Token]] = {}
    current = None
    for t in tokens:
        if t.kind == "section":
            name = t.text[1:]
            if name not in SECTIONS:
                raise GrammarSyntaxError(f"unknown section %{name}", t.line, t.col)
            if name in sections:
                raise GrammarSyntaxError(f"section %{name} appears twice", t.line, t.col)
            current = sections[name] = []
        elif t.kind == "eof":
            break
        elif current is None:
            raise GrammarSyntaxError("text before the first section", t.line, t.col)
        else:
            current.append(t)
    eof = tokens[-1]
    for name in REQUIRED:
        if name not in sections:
            raise GrammarSyntaxError(f"missing section %{name}", eof.line, eof.col)
    for name, toks in sections.items():
        toks.append(Token("eof", "", eof.line, eof.col))
    return sections


def _hierarchy(sections: dict[str, list[Token]]) -> TypeHierarchy:
    r = _Reader(sections["types"])
    parents: dict[str, list[str]] = {}
    while r.peek.kind != "eof":
        child = r.ident("a type name")
        if child.text == BOT:
            r.fail("bot is implicit and cannot be declared", child)
        if child.text in parents:
            r.fail(f"type {child.text} declared twice", child)
        kw = r.ident("'sub'")
        if kw.text != "sub":
            r.fail("expected 'sub'", kw)
        ps = []
        while not r.at("."):
            ps.append(r.ident("a supertype").text)
        if not ps:
            r.fail(f"type {child.text} needs at least one supertype")
        r.expect(".")
        parents[child.text] = ps

    approp = []
    r = _Reader(sections.get("approp", [Token("eof", "", 0, 0)]))
    while r.peek.kind != "eof":
        t = r.ident("a type name").text
        while not r.at("."):
            f = r.ident("a feature").text
            r.expect(":")
            v = r.ident("a value type").text
            approp.append((t, f, v))
        r.expect(".")
    return validate(parents, approp)


def parse_grammar(text: str) -> Grammar:
    """Parse a grammar file, validating its signature on the way."""
    sections = _split_sections(tokenize(text))
    sig = _hierarchy(sections)

    r = _Reader(sections["start"], sig)
    scope = _Scope(r)
    root = scope.avm()
    r.expect(".")
    if r.peek.kind != "eof":
        r.fail("%start holds exactly one AVM")
    start = scope.finish(Fs, [root])

    rules = []
    r = _Reader(sections["rules"], sig)
    names = set()
    while r.peek.kind != "eof":
        name = r.ident("a rule name")
        if name.text in names:
            r.fail(f"rule {name.text} defined twice", name)
        names.add(name.text)
        r.expect(":")
        scope = _Scope(r)
        elems = []
        if not r.at("=>"):
            elems.append(scope.avm())
            while r.at(","):
                r.next()
                elems.append(scope.avm())
        r.expect("=>")
        elems.append(scope.avm())
        r.expect(".")
        rules.append(Rule(name.text, scope.finish(Amrs, elems), name.line))

    lexicon: dict[str, list[Fs]] = {}
    r = _Reader(sections["lexicon"], sig)
    while r.peek.kind != "eof":
        word = r.ident("a word").text
        r.expect(":")
        scope = _Scope(r)
        root = scope.avm()
        r.expect(".")
        lexicon.setdefault(word, []).append(scope.finish(Fs, [root]))

    return Grammar(sig, tuple(rules), {w: tuple(c) for w, c in lexicon.items()}, start)


def load_grammar(path) -> Grammar:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar(fh.read())


def _parse_sequence(text: str, sig: TypeHierarchy):
    r = _Reader(tokenize(text), sig)
    scope = _Scope(r)
    elems = [scope.avm()]
    while r.at(","):
        r.next()
        elems.append(scope.avm())
    if r.at("."):
        r.next()
    if r.peek.kind != "eof":
        r.fail(f"unexpected {r.peek.text!r}")
    return scope, elems


def parse_amrs(text: str, sig: TypeHierarchy) -> Amrs:
    """Parse comma-separated AVMs sharing one tag scope."""
    scope, elems = _parse_sequence(text, sig)
    return scope.finish(Amrs, elems)


def parse_fs(text: str, sig: TypeHierarchy) -> Fs:
    scope, elems = _parse_sequence(text, sig)
    if len(elems) != 1:
        raise TfsError("expected a single AVM")
    return scope.finish(Fs, elems)


# -- rendering -------------------------------------------------------------------


def render(g: Graph) -> str:
    """Deterministic one-line text; tags appear only on nodes reached more than once."""
    indegree = [0] * len(g.types)
    for r in g.roots:
        indegree[r] += 1
    for arcs in g.arcs:
        for _, t in arcs:
            indegree[t] += 1
    tags: dict[int, int] = {}
    counter = iter(range(1, len(g.types) + 1))

    def emit(n: int) -> Iterator[str]:
        if n in tags:
            yield f"#{tags[n]}"
            return
        if indegree[n] > 1:
            tags[n] = next(counter)
            yield f"#{tags[n]}="
        else:
            tags[n] = 0
        yield "[" + g.types[n]
        for f, t in g.arcs[n]:
            yield f" {f}:"
            yield from emit(t)
        yield "]"

    return ", ".join("".join(emit(r)) for r in g.roots)


def render_rule(rule: Rule) -> str:
    text = render(rule.amrs)
    parts = _split_top(text)
    return ", ".join(parts[:-1]) + " => " + parts[-1]


def _split_top(text: str) -> list[str]:
    parts, depth, last = [], 0, 0
    for k, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[last:k].strip())
            last = k + 1
    parts.append(text[last:].strip())
    return parts
