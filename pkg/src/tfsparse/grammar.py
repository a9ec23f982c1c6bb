"""Rules, lexicon, derivation, and a bounded brute-force language oracle."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .afs import Closure, Fs, type_errors, unifiable
from .amrs import Amrs, concat_all, project, sub_structure
from .errors import BudgetExceeded, IndexOutOfRange, UnknownWord
from .hierarchy import TypeHierarchy


@dataclass(frozen=True)
class Rule:
    """An AMRS whose last element is the head and whose other elements form the body."""

    name: str
    amrs: Amrs
    line: int = field(default=0, compare=False)

    def __len__(self) -> int:
        return len(self.amrs)

    @property
    def phrasal(self) -> bool:
        return len(self.amrs) >= 2

    @property
    def head(self) -> Fs:
        return project(self.amrs, len(self.amrs))

    @property
    def body(self) -> Amrs:
        return sub_structure(self.amrs, 1, len(self.amrs) - 1)


@dataclass(frozen=True)
class Grammar:
    sig: TypeHierarchy
    rules: tuple[Rule, ...]
    lexicon: Mapping[str, tuple[Fs, ...]]
    start: Fs

    def rule(self, name: str) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def phrasal_rules(self) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.phrasal)

    def categories(self, word: str) -> tuple[Fs, ...]:
        try:
            return self.lexicon[word]
        except KeyError:
            raise UnknownWord(word) from None


@dataclass(frozen=True)
class DerivationStep:
    source: Amrs
    target: Amrs
    rule: str
    position: int


def pre_terminals(
    g: Grammar, words: Sequence[str], j: int, k: int, choice: Sequence[int] | None = None
) -> Amrs:
    """Categories of ``words[j..k]`` (1-based, inclusive) as a disjoint AMRS.

    ``choice`` picks one category per word of the whole sentence for
    ambiguous words; the first category is used by default.
    """
    if not 1 <= j <= k <= len(words):
        raise IndexOutOfRange(f"window {j}..{k} outside 1..{len(words)}")
    cats = []
    for pos in range(j, k + 1):
        options = g.categories(words[pos - 1])
        cats.append(options[choice[pos - 1] if choice else 0])
    return Amrs.of(*cats)


def _apply(c: Closure, roots: list[int], j: int, rule: Rule) -> list[int] | None:
    """Splice ``rule`` into scratch ``c`` at 1-based slot ``j`` of ``roots``."""
    off = c.add(rule.amrs)
    rr = [off + r for r in rule.amrs.roots]
    c.merge(roots[j - 1], rr[-1])
    if c.failed:
        return None
    return roots[: j - 1] + rr[:-1] + roots[j:]


def derive_step(g: Grammar, a: Amrs, j: int, rule: Rule) -> Amrs | None:
    """Rewrite element ``j`` of ``a`` with ``rule``, or ``None`` if the head does not unify.

    Element ``j`` and the rule head are merged in one shared graph, so the
    specialised ``a`` and the specialised rule come out of the same closure;
    the rule body then takes the place of element ``j``.
    """
    if not 1 <= j <= len(a):
        raise IndexOutOfRange(f"index {j} outside 1..{len(a)}")
    if not rule.phrasal:
        return None
    c = Closure(a.sig)
    off = c.add(a)
    roots = _apply(c, [off + r for r in a.roots], j, rule)
    if roots is None:
        return None
    return c.build(Amrs, roots)


def replay(g: Grammar, seed: Amrs, moves: Sequence[tuple[str, int]]) -> list[DerivationStep]:
    steps = []
    cur = seed
    for name, pos in moves:
        nxt = derive_step(g, cur, pos, g.rule(name))
        if nxt is None:
            raise ValueError(f"rule {name} does not apply at {pos}")
        steps.append(DerivationStep(cur, nxt, name, pos))
        cur = nxt
    return steps


def oracle_derives(
    g: Grammar,
    a: Amrs,
    target: Amrs,
    max_steps: int,
    max_states: int = 200_000,
) -> list[DerivationStep] | None:
    """Search for a derivation from ``a`` whose final AMRS is compatible with ``target``.

    Compatible means the two unify element by element in one shared graph.
    The search enumerates leftmost derivations breadth-first by number of
    rule applications (elements left to right, rules in declaration order).
    Returns the shortest witness, ``None`` when the search space was
    exhausted, and raises :class:`BudgetExceeded` when some branch was cut
    by ``max_steps`` or ``max_states`` before a witness turned up.
    """
    n = len(target)
    sig = a.sig
    rules = g.phrasal_rules

    c = Closure(sig)
    ot = c.add(target)
    oa = c.add(a)
    start = c.build(Amrs, [ot + r for r in target.roots] + [oa + r for r in a.roots])

    # state: (graph, frozen prefix length); graph roots = target ++ frontier
    parents: dict[tuple[Amrs, int], tuple] = {(start, 0): (None, None, 0)}
    queue = deque([(start, 0, 0)])
    cut = False
    while queue:
        graph, p, steps = queue.popleft()
        if parents[graph, p][2] < steps:
            continue
        width = len(graph) - n
        if p == width:
            if p == n:
                return replay(g, a, _moves(parents, (graph, p)))
            continue
        succ = []
        if p < n:
            c = Closure(sig)
            off = c.add(graph)
            c.merge(off + graph.roots[p], off + graph.roots[n + p])
            if not c.failed:
                succ.append((c.build(Amrs, [off + r for r in graph.roots]), p + 1, steps, None))
        for rule in rules:
            if width + len(rule) - 2 > n:
                continue
            c = Closure(sig)
            off = c.add(graph)
            roots = [off + r for r in graph.roots]
            spliced = _apply(c, roots[n:], p + 1, rule)
            if spliced is None:
                continue
            if steps >= max_steps:
                cut = True
                continue
            succ.append((c.build(Amrs, roots[:n] + spliced), p, steps + 1, (rule.name, p + 1)))
        for nxt, q, s, move in succ:
            key = (nxt, q)
            known = parents.get(key)
            if known is not None and known[2] <= s:
                continue
            if len(parents) >= max_states:
                raise BudgetExceeded(f"more than {max_states} oracle states")
            parents[key] = ((graph, p), move, s)
            if move is None:
                queue.appendleft((nxt, q, s))
            else:
                queue.append((nxt, q, s))
    if cut:
        raise BudgetExceeded(f"derivations longer than {max_steps} steps not explored")
    return None


def _moves(parents, key) -> list[tuple[str, int]]:
    moves = []
    while key is not None:
        prev, move, _ = parents[key]
        if move is not None:
            moves.append(move)
        key = prev
    moves.reverse()
    return moves


@dataclass(frozen=True)
class Verdict:
    status: str  # "yes" | "no" | "budget"
    witness: list[DerivationStep] | None = None
    choice: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.status == "yes"


def in_language(g: Grammar, words: Sequence[str], max_steps: int) -> Verdict:
    """Bounded membership test seeded with the start symbol.

    Every combination of lexical categories is tried.  ``budget`` means no
    witness was found but some branch was cut off.
    """
    if not words:
        raise ValueError("empty input")
    options = [g.categories(w) for w in words]
    seed = Amrs.of(g.start)
    exhausted = True
    for choice in itertools.product(*(range(len(o)) for o in options)):
        target = concat_all(Amrs.of(o[k]) for o, k in zip(options, choice))
        try:
            witness = oracle_derives(g, seed, target, max_steps)
        except BudgetExceeded:
            exhausted = False
            continue
        if witness is not None:
            return Verdict("yes", witness, choice)
    return Verdict("no" if exhausted else "budget")


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    locus: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.locus}: {self.message}"


def validate_grammar(g: Grammar) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    for r in g.rules:
        if not r.phrasal:
            out.append(Diagnostic("error", f"rule {r.name}", "a rule needs a body and a head"))
        for msg in type_errors(r.amrs):
            out.append(Diagnostic("error", f"rule {r.name}", msg))
    for word, cats in g.lexicon.items():
        for k, cat in enumerate(cats, 1):
            locus = f"word {word}" + (f" (category {k})" if len(cats) > 1 else "")
            for msg in type_errors(cat):
                out.append(Diagnostic("error", locus, msg))
            for r in g.phrasal_rules:
                if unifiable(cat, r.head):
                    out.append(
                        Diagnostic("warning", locus, f"category unifies with the head of rule {r.name}")
                    )
    for msg in type_errors(g.start):
        out.append(Diagnostic("error", "start", msg))
    return out
