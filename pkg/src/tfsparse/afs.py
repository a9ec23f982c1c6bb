"""Feature structures in canonical form.

A structure is stored as a graph whose nodes are numbered by a breadth-first
walk from the root(s), visiting features in the signature's feature order.
Two alphabetic variants therefore produce identical tuples, so value
equality on :class:`Fs` is equality of abstract feature structures.

Unification copies both operands into a scratch union-find, merges the roots
and propagates merges along shared features until nothing changes.  That
single pass closes the path set under fusion and the reentrancy relation
under equivalence at once; the classwise type join runs alongside it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping

from .errors import Disconnected, UnificationFailure
from .hierarchy import BOT, TypeHierarchy

Path = tuple[str, ...]
Arcs = tuple[tuple[str, int], ...]


@dataclass(frozen=True, eq=False)
class Graph:
    """Shared representation of single- and multi-rooted structures."""

    roots: tuple[int, ...]
    types: tuple[str, ...]
    arcs: tuple[Arcs, ...]
    sig: TypeHierarchy = field(repr=False)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (
            self.roots == other.roots
            and self.types == other.types
            and self.arcs == other.arcs
        )

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((type(self).__name__, self.roots, self.types, self.arcs))

    @cached_property
    def out(self) -> tuple[dict[str, int], ...]:
        return tuple(dict(a) for a in self.arcs)

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def size(self) -> int:
        return len(self.types)

    def sort_key(self) -> tuple:
        return (self.roots, self.types, self.arcs)

    def __str__(self) -> str:
        from .fmt import render

        return render(self)


@dataclass(frozen=True, eq=False)
class Fs(Graph):
    """A typed feature structure; ``roots`` always has length one."""

    @property
    def root(self) -> int:
        return self.roots[0]

    @classmethod
    def atom(cls, sig: TypeHierarchy, t: str = BOT) -> "Fs":
        return cls((0,), (sig.check_type(t),), ((),), sig)


# -- canonical numbering -----------------------------------------------------


def canon_tuples(
    roots: Iterable[Hashable],
    type_of: Callable[[Hashable], str],
    arcs_of: Callable[[Hashable], Mapping[str, Hashable]],
    rank: Mapping[str, int],
) -> tuple[tuple[int, ...], tuple[str, ...], tuple[Arcs, ...], dict]:
    roots = list(roots)
    ids: dict = {}
    order: list = []
    for r in roots:
        if r not in ids:
            ids[r] = len(order)
            order.append(r)
    k = 0
    while k < len(order):
        node = order[k]
        k += 1
        out = arcs_of(node)
        for f in sorted(out, key=rank.__getitem__):
            t = out[f]
            if t not in ids:
                ids[t] = len(order)
                order.append(t)
    types = tuple(type_of(n) for n in order)
    arcs = tuple(
        tuple((f, ids[out[f]]) for f in sorted(out, key=rank.__getitem__))
        for out in (arcs_of(n) for n in order)
    )
    return tuple(ids[r] for r in roots), types, arcs, ids


def canonicalize(
    root: Hashable,
    node_type: Mapping[Hashable, str],
    arcs: Mapping[Hashable, Mapping[str, Hashable]],
    sig: TypeHierarchy,
) -> Fs:
    """Canonical :class:`Fs` for a raw graph given by node/arc dictionaries.

    Every node in ``node_type`` must be reachable from ``root``.
    """
    return _canonical(Fs, [root], node_type, arcs, sig)


def _canonical(cls, roots, node_type, arcs, sig):
    for n in node_type:
        sig.check_type(node_type[n])
    for n, out in arcs.items():
        if n not in node_type:
            raise Disconnected(n)
        for f, t in out.items():
            sig.check_feature(f)
            if t not in node_type:
                raise Disconnected(t)
    empty: dict = {}
    r, ty, ar, ids = canon_tuples(
        roots, node_type.__getitem__, lambda n: arcs.get(n, empty), sig.feature_rank
    )
    for n in node_type:
        if n not in ids:
            raise Disconnected(n)
    return cls(r, ty, ar, sig)


def raw(g: Graph) -> tuple[list[int], dict[int, str], dict[int, dict[str, int]]]:
    """Plain-dictionary view of a graph, the inverse of :func:`canonicalize`."""
    return (
        list(g.roots),
        dict(enumerate(g.types)),
        {n: dict(a) for n, a in enumerate(g.arcs)},
    )


def reroot(cls, g: Graph, roots: Iterable[int]):
    """Canonical structure of the part of ``g`` reachable from ``roots``."""
    out = g.out
    r, ty, ar, _ = canon_tuples(roots, g.types.__getitem__, out.__getitem__, g.sig.feature_rank)
    return cls(r, ty, ar, g.sig)


# -- closure -----------------------------------------------------------------


class Closure:
    """Scratch union-find over copies of one or more graphs.

    ``merge`` identifies two nodes and, transitively, every pair of nodes
    reached from them by the same feature.  Each class carries the join of
    its members' types; ``None`` marks a failed join.
    """

    def __init__(self, sig: TypeHierarchy):
        self.sig = sig
        self.parent: list[int] = []
        self.type: list[str | None] = []
        self.out: list[dict[str, int] | None] = []
        self.failed = False

    def add(self, g: Graph) -> int:
        off = len(self.parent)
        self.parent.extend(range(off, off + g.size))
        self.type.extend(g.types)
        self.out.extend({f: t + off for f, t in a} for a in g.arcs)
        return off

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def merge(self, a: int, b: int) -> None:
        join = self.sig.join
        pending = [(a, b)]
        while pending:
            x, y = pending.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            ox, oy = self.out[x], self.out[y]
            if len(ox) < len(oy):
                x, y, ox, oy = y, x, oy, ox
            self.parent[y] = x
            tx, ty = self.type[x], self.type[y]
            if tx is None or ty is None:
                self.type[x] = None
            else:
                t = join(tx, ty)
                self.type[x] = t
                if t is None:
                    self.failed = True
            for f, t in oy.items():
                if f in ox:
                    pending.append((ox[f], t))
                else:
                    ox[f] = t
            self.out[y] = None

    def witness(self, roots: list[int]) -> UnificationFailure:
        """Shortest failing path, ties broken by element then feature order."""
        rank = self.sig.feature_rank
        seen = set()
        queue = deque()
        for i, r in enumerate(roots, 1):
            queue.append((self.find(r), i, ()))
        while queue:
            node, i, path = queue.popleft()
            if node in seen:
                continue
            seen.add(node)
            if self.type[node] is None:
                return UnificationFailure(path, i)
            out = self.out[node]
            for f in sorted(out, key=rank.__getitem__):
                queue.append((self.find(out[f]), i, path + (f,)))
        raise AssertionError("failed class unreachable from the given roots")

    def build(self, cls, roots: list[int], context: list[int] | None = None):
        """Canonical result over ``roots``; raise on any failed class.

        ``context`` lists roots that cover every node in the scratch space and
        is only used to locate a failure witness.
        """
        if self.failed:
            raise self.witness(context if context is not None else roots)
        find = self.find
        r, ty, ar, _ = canon_tuples(
            (find(x) for x in roots),
            self.type.__getitem__,
            lambda n: {f: find(t) for f, t in self.out[n].items()},
            self.sig.feature_rank,
        )
        return cls(r, ty, ar, self.sig)


# -- operations ----------------------------------------------------------------


def unify(a: Fs, b: Fs) -> Fs:
    """Most general structure subsumed by both ``a`` and ``b``.

    Raises :class:`UnificationFailure` when some class of merged paths has no
    common upper type.
    """
    c = Closure(a.sig)
    oa = c.add(a)
    ob = c.add(b)
    c.merge(oa + a.root, ob + b.root)
    return c.build(Fs, [oa + a.root])


def unifiable(a: Fs, b: Fs) -> bool:
    try:
        unify(a, b)
    except UnificationFailure:
        return False
    return True


def graph_subsumes(a: Graph, b: Graph) -> bool:
    """Morphism check from ``a`` to ``b`` fixing roots pairwise.

    Graphs are deterministic, so the morphism is forced by the roots and a
    single parallel walk decides existence.
    """
    if len(a.roots) != len(b.roots):
        return False
    subtype = a.sig.subtype
    h: dict[int, int] = {}
    stack = list(zip(a.roots, b.roots))
    a_arcs, a_types, b_types = a.arcs, a.types, b.types
    b_out = b.out
    while stack:
        q, p = stack.pop()
        seen = h.get(q)
        if seen is not None:
            if seen != p:
                return False
            continue
        h[q] = p
        if not subtype(a_types[q], b_types[p]):
            return False
        arcs = a_arcs[q]
        if arcs:
            bo = b_out[p]
            for f, t in arcs:
                u = bo.get(f)
                if u is None:
                    return False
                stack.append((t, u))
    return True


def subsumes(a: Fs, b: Fs) -> bool:
    """True iff ``a`` is at least as general as ``b``."""
    return graph_subsumes(a, b)


def type_errors(g: Graph, total: bool = False) -> list[str]:
    """Appropriateness violations, each described by a path to the offending node."""
    sig = g.sig
    paths = _first_paths(g)
    problems = []
    for q, arcs in enumerate(g.arcs):
        tq = g.types[q]
        where = _show_path(paths[q])
        for f, t in arcs:
            want = sig.approp(f, tq)
            if want is None:
                problems.append(f"{where}: feature {f} not appropriate for {tq}")
            elif not sig.subtype(want, g.types[t]):
                problems.append(
                    f"{where}: value of {f} is {g.types[t]}, needs at least {want}"
                )
        if total:
            have = {f for f, _ in arcs}
            for f in sig.appropriate_features(tq):
                if f not in have:
                    problems.append(f"{where}: appropriate feature {f} missing")
    return problems


def well_typed(a: Graph) -> bool:
    return not type_errors(a)


def totally_well_typed(a: Graph) -> bool:
    return not type_errors(a, total=True)


def _first_paths(g: Graph) -> dict[int, tuple[int, Path]]:
    paths: dict[int, tuple[int, Path]] = {}
    queue = deque((r, (i, ())) for i, r in enumerate(g.roots, 1))
    while queue:
        n, p = queue.popleft()
        if n in paths:
            continue
        paths[n] = p
        for f, t in g.arcs[n]:
            queue.append((t, (p[0], p[1] + (f,))))
    return paths


def _show_path(p: tuple[int, Path]) -> str:
    i, path = p
    return f"{i}:" + (".".join(path) or "<root>")


@dataclass(frozen=True)
class PathSet:
    """Finite window onto the abstract view: typed paths plus reentrancies.

    Keys are paths for single-rooted structures and ``(index, path)`` pairs
    for multi-rooted ones.
    """

    types: dict
    reentrant: frozenset

    def contained_in(self, other: "PathSet", sig: TypeHierarchy) -> bool:
        for p, t in self.types.items():
            u = other.types.get(p)
            if u is None or not sig.subtype(t, u):
                return False
        return self.reentrant <= other.reentrant


def walk_paths(g: Graph, depth: int) -> dict[tuple[int, Path], int]:
    """Every indexed path of length at most ``depth`` and the node it reaches."""
    found: dict[tuple[int, Path], int] = {}
    frontier = [((i, ()), r) for i, r in enumerate(g.roots, 1)]
    for level in range(depth + 1):
        nxt = []
        for key, n in frontier:
            found[key] = n
            if level < depth:
                for f, t in g.arcs[n]:
                    nxt.append(((key[0], key[1] + (f,)), t))
        frontier = nxt
    return found


def path_set(g: Graph, depth: int, key=lambda k: k) -> PathSet:
    nodes = walk_paths(g, depth)
    types = {key(k): g.types[n] for k, n in nodes.items()}
    classes: dict[int, list] = {}
    for k, n in nodes.items():
        classes.setdefault(n, []).append(key(k))
    pairs = set()
    for members in classes.values():
        members.sort()
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                pairs.add((members[x], members[y]))
    return PathSet(types, frozenset(pairs))


def enumerate_paths(a: Fs, depth: int) -> PathSet:
    """All ``(path, type)`` pairs with ``len(path) <= depth`` and the reentrant pairs among them."""
    return path_set(a, depth, key=lambda k: k[1])
