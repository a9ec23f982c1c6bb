"""Bottom-up chart parsing over multi-rooted rules.

An item ``[i, <A, k>, j]`` says that the first ``k`` body elements of the
(specialised) rule ``A`` cover words ``i+1..j``.  Parsing starts from the
lexical and predicted items and repeatedly applies dot movement to every
adjacent active/complete pair, keeping only results that no existing item
with the same span and dot already subsumes.  It stops at a fix-point or
when a guard trips.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .afs import Closure, graph_subsumes, path_set, subsumes, unifiable
from .amrs import Amrs, project
from .errors import CorruptProvenance, GuardTripped, InvariantViolation
from .grammar import DerivationStep, Grammar, derive_step

SUCCESS_MODES = ("unify", "subsume")


@dataclass(frozen=True)
class Guards:
    max_transitions: int = 64
    max_items: int = 100_000
    quotient_depth: int = 3

    def __post_init__(self):
        for name in ("max_transitions", "max_items"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.quotient_depth < 0:
            raise ValueError("quotient_depth must be non-negative")


# -- provenance ----------------------------------------------------------------


@dataclass(frozen=True)
class Lex:
    position: int  # 1-based word position
    word: str


@dataclass(frozen=True)
class Predict:
    rule: str


@dataclass(frozen=True, eq=False)
class Dm:
    left: "Item"
    right: "Item"


Provenance = Union[Lex, Predict, Dm]


@dataclass(frozen=True, eq=False)
class Item:
    """A spanned dotted rule.  Identity is ``(i, j, dot, amrs)``; ``rule`` and ``origin`` are bookkeeping."""

    i: int
    j: int
    amrs: Amrs
    dot: int
    rule: str | None  # None for lexical items
    origin: Provenance = field(repr=False)

    def __eq__(self, other):
        if not isinstance(other, Item):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def key(self) -> tuple:
        return (self.i, self.j, self.dot, self.amrs)

    @property
    def lexical(self) -> bool:
        return self.rule is None

    @property
    def complete(self) -> bool:
        return self.dot == len(self.amrs) - 1

    @property
    def rule_id(self) -> str:
        if self.rule is None:
            return f"lex:{self.origin.word}"
        return self.rule

    @property
    def head(self):
        return project(self.amrs, len(self.amrs))


@dataclass(frozen=True)
class Undefined:
    """Why dot movement did not apply; always falsy."""

    reason: str  # SpanMismatch | LeftComplete | RightActive | UnifyFailure

    def __bool__(self) -> bool:
        return False


def dot_move(x: Item, y: Item) -> Item | Undefined:
    """Unify the element after ``x``'s dot with the head of ``y`` and advance the dot."""
    if x.j != y.i:
        return Undefined("SpanMismatch")
    if x.complete:
        return Undefined("LeftComplete")
    if not y.complete:
        return Undefined("RightActive")
    a, b = x.amrs, y.amrs
    c = Closure(a.sig)
    oa = c.add(a)
    ob = c.add(b)
    c.merge(oa + a.roots[x.dot], ob + b.roots[-1])
    if c.failed:
        return Undefined("UnifyFailure")
    merged = c.build(Amrs, [oa + r for r in a.roots])
    return Item(x.i, y.j, merged, x.dot + 1, x.rule, Dm(x, y))


def item_subsumes(x: Item, y: Item) -> bool:
    return x.i == y.i and x.j == y.j and x.dot == y.dot and graph_subsumes(x.amrs, y.amrs)


# -- chart -----------------------------------------------------------------------


class Chart:
    """Single-owner mutable state of one parse."""

    def __init__(
        self,
        g: Grammar,
        words: Sequence[str],
        guards: Guards = Guards(),
        check_invariants: bool = False,
    ):
        if not words:
            raise ValueError("empty input")
        self.grammar = g
        self.words = tuple(words)
        self.guards = guards
        self.check_invariants = check_invariants
        self.items: list[Item] = []
        self.transitions = 0
        self._buckets: dict[tuple[int, int, int], list[Item]] = defaultdict(list)
        self._active_by_end: dict[int, list[Item]] = defaultdict(list)
        self._complete_by_start: dict[int, list[Item]] = defaultdict(list)

        initial = []
        for pos, word in enumerate(self.words, 1):
            for cat in g.categories(word):
                initial.append(Item(pos - 1, pos, Amrs.of(cat), 0, None, Lex(pos, word)))
        for i in range(len(self.words) + 1):
            for r in g.phrasal_rules:
                initial.append(Item(i, i, r.amrs, 0, r.name, Predict(r.name)))
        fresh = []
        for z in initial:
            if z not in self._buckets[z.i, z.j, z.dot]:
                fresh.append(z)
                self._insert(z)
        self.agenda: list[Item] = fresh
        self._check_size()

    @property
    def n(self) -> int:
        return len(self.words)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __contains__(self, z: Item) -> bool:
        return z in self._buckets.get((z.i, z.j, z.dot), ())

    def _insert(self, z: Item) -> None:
        if self.check_invariants:
            self._verify(z)
        self.items.append(z)
        self._buckets[z.i, z.j, z.dot].append(z)
        if z.complete:
            self._complete_by_start[z.i].append(z)
        else:
            self._active_by_end[z.j].append(z)

    def _check_size(self) -> None:
        if len(self.items) > self.guards.max_items:
            raise GuardTripped("max_items", self.guards.max_items)

    def _verify(self, z: Item) -> None:
        if z.i == z.j and (z.complete or z.dot != 0):
            raise InvariantViolation(f"empty span item must be active with dot 0: {z}")
        if not 0 <= z.i <= z.j <= self.n:
            raise InvariantViolation(f"span out of range: {z}")
        if z.rule is not None:
            rule = self.grammar.rule(z.rule)
            if not graph_subsumes(rule.amrs, z.amrs):
                raise InvariantViolation(f"item not an instance of rule {z.rule}")
        if isinstance(z.origin, Dm):
            x = z.origin.left
            if z.i != x.i or z.dot != x.dot + 1 or not graph_subsumes(x.amrs, z.amrs):
                raise InvariantViolation(f"dot move did not extend its left parent: {z}")

    def subsumed(self, z: Item) -> bool:
        """True if an item already in the chart subsumes ``z``."""
        return any(graph_subsumes(y.amrs, z.amrs) for y in self._buckets.get((z.i, z.j, z.dot), ()))

    def step(self) -> bool:
        """One transition: add every dot-move result not subsumed by the current state.

        Only pairs involving an item added by the previous transition are
        tried; older pairs were already combined and their results are in
        the state or subsumed by it.  Returns whether anything was added.
        """
        agenda = self.agenda
        new = set(map(id, agenda))
        limit = self.guards.max_items - len(self.items)
        delta: list[Item] = []
        seen: set[Item] = set()

        def offer(z):
            if not z or z in seen or self.subsumed(z):
                return
            seen.add(z)
            delta.append(z)
            if len(delta) > limit:
                raise GuardTripped("max_items", self.guards.max_items)

        for x in agenda:
            if x.complete:
                for y in self._active_by_end.get(x.i, ()):
                    if id(y) not in new:
                        offer(dot_move(y, x))
            else:
                for y in self._complete_by_start.get(x.j, ()):
                    offer(dot_move(x, y))

        self.transitions += 1
        for z in delta:
            self._insert(z)
        self.agenda = delta
        return bool(delta)

    def dump_lines(self) -> list[str]:
        rows = []
        for z in self.items:
            text = z.amrs.__str__()
            rows.append(((z.i, z.j, z.rule_id, z.dot, text), z, text))
        rows.sort(key=lambda r: r[0])
        return [
            f"ITEM i={z.i} j={z.j} rule={z.rule_id} dot={z.dot} complete={int(z.complete)} :: {text}"
            for _, z, text in rows
        ]


# -- running -------------------------------------------------------------------------


@dataclass
class ParseResult:
    status: str  # accept | reject | guard
    guard: str | None
    chart: Chart
    transitions: int
    accepting: tuple[Item, ...]

    @property
    def accepted(self) -> bool:
        return self.status == "accept"

    def result_line(self) -> str:
        if self.status == "guard":
            return f"RESULT guard={self.guard}"
        return f"RESULT {self.status}"

    def dump(self) -> str:
        lines = self.chart.dump_lines()
        lines.append(self.result_line())
        lines.append(f"TRANSITIONS {self.transitions}")
        return "\n".join(lines) + "\n"


def accepts(g: Grammar, z: Item, n: int, success: str = "unify") -> bool:
    """Whether ``z`` is a complete item spanning the input whose head fits the start symbol.

    ``unify`` asks for the head to be compatible with the start symbol;
    ``subsume`` asks for the start symbol to subsume it.
    """
    if z.i != 0 or z.j != n or not z.complete:
        return False
    if success == "subsume":
        return subsumes(g.start, z.head)
    return unifiable(g.start, z.head)


def accepting_items(chart: Chart, success: str = "unify") -> tuple[Item, ...]:
    found = [z for z in chart.items if accepts(chart.grammar, z, chart.n, success)]
    found.sort(key=lambda z: (str(z.amrs), z.rule_id))
    return tuple(found)


def run(
    g: Grammar,
    words: Sequence[str],
    guards: Guards = Guards(),
    success: str = "unify",
    check_invariants: bool = False,
) -> ParseResult:
    """Iterate transitions to a fix-point or until a guard trips.

    The transition count includes the final application that adds nothing.
    Accepting items found before a guard tripped still make the verdict
    ``accept``, since every accepting item is sound regardless of what the
    unfinished part of the chart might hold.
    """
    if success not in SUCCESS_MODES:
        raise ValueError(f"success mode must be one of {SUCCESS_MODES}")
    guard = None
    chart = Chart(g, words, guards, check_invariants)
    while True:
        try:
            changed = chart.step()
        except GuardTripped as e:
            guard = e.guard
            break
        if not changed:
            break
        if chart.transitions >= guards.max_transitions:
            guard = "max_transitions"
            break
    found = accepting_items(chart, success)
    if found:
        status = "accept"
    elif guard:
        status = "guard"
    else:
        status = "reject"
    return ParseResult(status, guard, chart, chart.transitions, found)


# -- derivations ---------------------------------------------------------------------


@dataclass
class Tree:
    item: Item
    children: list["Tree"]

    @property
    def lexical(self) -> bool:
        return self.item.lexical


def derivation_tree(z: Item) -> Tree:
    """Rebuild the rule/lexeme tree of an item from its dot-move provenance."""
    origin = z.origin
    if isinstance(origin, (Lex, Predict)):
        if isinstance(origin, Predict) and z.dot != 0:
            raise CorruptProvenance(f"predicted item with dot {z.dot}")
        return Tree(z, [])
    if not isinstance(origin, Dm):
        raise CorruptProvenance(f"unknown provenance {origin!r}")
    left = derivation_tree(origin.left)
    right = derivation_tree(origin.right)
    if left.item.rule != z.rule or left.item.dot + 1 != z.dot or not origin.right.complete:
        raise CorruptProvenance(f"dot move provenance does not fit item at ({z.i},{z.j})")
    return Tree(z, left.children + [right])


def extract_derivation(chart: Chart, z: Item) -> list[DerivationStep]:
    """Leftmost derivation from the start symbol down to the item's lexical leaves."""
    if not z.complete or z.i != 0 or z.j != chart.n:
        raise CorruptProvenance("only complete items spanning the input have derivations")
    g = chart.grammar
    tree = derivation_tree(z)
    cur = Amrs.of(g.start)
    frontier = [tree]
    steps: list[DerivationStep] = []
    while True:
        pos = next((k for k, t in enumerate(frontier) if not t.lexical), None)
        if pos is None:
            return steps
        node = frontier[pos]
        rule = g.rule(node.item.rule)
        if len(node.children) != len(rule) - 1:
            raise CorruptProvenance(f"rule {rule.name} node has {len(node.children)} children")
        nxt = derive_step(g, cur, pos + 1, rule)
        if nxt is None:
            raise CorruptProvenance(f"rule {rule.name} does not apply at {pos + 1}")
        steps.append(DerivationStep(cur, nxt, rule.name, pos + 1))
        cur = nxt
        frontier[pos:pos + 1] = node.children


def derivation_lines(steps: Iterable[DerivationStep]) -> list[str]:
    return [f"STEP {n} rule={s.rule} at={s.position} :: {s.target}" for n, s in enumerate(steps, 1)]


# -- off-line parsability diagnostic ------------------------------------------------


def path_quotient(a: Amrs, d: int) -> tuple:
    """Depth-``d`` truncation: typed indexed paths up to length ``d`` plus their reentrancies.

    The result carries no more information than ``a`` and, for a fixed
    signature and ``d``, ranges over a finite set.
    """
    if d < 0:
        raise ValueError("depth must be non-negative")
    ps = path_set(a, d)
    return (len(a), tuple(sorted(ps.types.items())), tuple(sorted(ps.reentrant)))


@dataclass(frozen=True)
class Collision:
    i: int
    j: int
    dot: int
    rule: str
    count: int  # incomparable item pairs sharing a signature


def quotient_collisions(chart: Chart, d: int) -> list[Collision]:
    """Buckets holding mutually incomparable items that the depth-``d`` quotient cannot tell apart."""
    buckets: dict[tuple, dict[tuple, list[Item]]] = defaultdict(lambda: defaultdict(list))
    for z in chart.items:
        buckets[z.i, z.j, z.dot, z.rule_id][path_quotient(z.amrs, d)].append(z)
    out = []
    for key in sorted(buckets):
        count = 0
        for group in buckets[key].values():
            for a in range(len(group)):
                for b in range(a + 1, len(group)):
                    x, y = group[a].amrs, group[b].amrs
                    if not graph_subsumes(x, y) and not graph_subsumes(y, x):
                        count += 1
        if count:
            out.append(Collision(*key, count))
    return out
