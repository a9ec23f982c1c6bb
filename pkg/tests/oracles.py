"""Slow reference implementations that share no traversal code with the library."""

from __future__ import annotations

from tfsparse.amrs import amrs_subsumes, project, unify_in_context
from tfsparse.chart import Item, Lex, Predict
from tfsparse.errors import UnificationFailure
from tfsparse.grammar import Grammar
from tfsparse.amrs import Amrs


# -- abstract view -----------------------------------------------------------------


def paths(g, depth: int) -> dict[tuple, int]:
    """Map every indexed path up to ``depth`` to its node, by plain recursion."""
    out: dict[tuple, int] = {}

    def walk(i, node, path):
        out[(i, path)] = node
        if len(path) < depth:
            for f, t in g.arcs[node]:
                walk(i, t, path + (f,))

    for i, r in enumerate(g.roots, 1):
        walk(i, r, ())
    return out


def window_subsumes(a, b, depth: int) -> bool:
    """Path-window check: every path of ``a`` is in ``b`` with a more specific
    type, and every reentrancy of ``a`` is one of ``b``."""
    if len(a.roots) != len(b.roots):
        return False
    pa, pb = paths(a, depth), paths(b, depth)
    for p, n in pa.items():
        if p not in pb or not a.sig.subtype(a.types[n], b.types[pb[p]]):
            return False
    for p, n in pa.items():
        for q, m in pa.items():
            if n == m and pb[p] != pb[q]:
                return False
    return True


def abstract_unify(a, b, depth: int):
    """Unify through path sets: fusion-close, equivalence-close, join classwise.

    Returns ``(types by path, path classes)`` or ``None`` on failure.  Only
    exact for acyclic operands whose result has no path longer than ``depth``.
    """
    sig = a.sig
    pa, pb = paths(a, depth), paths(b, depth)
    ps = {p for (_, p) in pa} | {p for (_, p) in pb}
    parent = {p: p for p in ps}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    def union(p, q):
        parent[find(p)] = find(q)

    for pm in (pa, pb):
        by_node: dict[int, tuple] = {}
        for (_, p), n in pm.items():
            if n in by_node:
                union(p, by_node[n])
            else:
                by_node[n] = p
    changed = True
    while changed:
        changed = False
        classes: dict[tuple, list[tuple]] = {}
        for p in list(ps):
            classes.setdefault(find(p), []).append(p)
        for members in classes.values():
            exts = {}
            for p in members:
                for q in list(ps):
                    if len(q) == len(p) + 1 and q[: len(p)] == p:
                        exts.setdefault(q[-1], []).append(q)
            for f, qs in exts.items():
                for p in members:
                    q = p + (f,)
                    if q not in ps:
                        if len(q) > depth:
                            raise ValueError("result deeper than the window")
                        ps.add(q)
                        parent[q] = q
                        changed = True
                    for other in qs:
                        if find(q) != find(other):
                            union(q, other)
                            changed = True
    types: dict[tuple, str] = {}
    for p in ps:
        t = "bot"
        for pm, g in ((pa, a), (pb, b)):
            if (1, p) in pm:
                t = sig.join(t, g.types[pm[1, p]])
                if t is None:
                    return None
        types[p] = t
    classes = {}
    for p in ps:
        classes.setdefault(find(p), []).append(p)
    joined = {}
    for root, members in classes.items():
        t = "bot"
        for p in members:
            t = sig.join(t, types[p])
            if t is None:
                return None
        for p in members:
            joined[p] = t
    partition = frozenset(frozenset(m) for m in classes.values())
    return joined, partition


def abstract_view(g, depth: int):
    pm = paths(g, depth)
    types = {p: g.types[n] for (_, p), n in pm.items()}
    classes: dict[int, set] = {}
    for (_, p), n in pm.items():
        classes.setdefault(n, set()).add(p)
    return types, frozenset(frozenset(m) for m in classes.values())


# -- naive chart ---------------------------------------------------------------------


def literal_dot_move(x: Item, y: Item) -> Item | None:
    if x.j != y.i or x.complete or not y.complete:
        return None
    try:
        c = unify_in_context(x.amrs, x.dot + 1, project(y.amrs, len(y.amrs)))
    except UnificationFailure:
        return None
    return Item(x.i, y.j, c, x.dot + 1, x.rule, None)


def naive_fixpoint(g: Grammar, words, max_rounds: int = 64):
    """All-pairs transitions until nothing changes; returns (items, rounds)."""
    state: list[Item] = []
    for pos, w in enumerate(words, 1):
        for cat in g.categories(w):
            state.append(Item(pos - 1, pos, Amrs.of(cat), 0, None, Lex(pos, w)))
    for i in range(len(words) + 1):
        for r in g.rules:
            if len(r.amrs) >= 2:
                state.append(Item(i, i, r.amrs, 0, r.name, Predict(r.name)))
    dedup = []
    for z in state:
        if z not in dedup:
            dedup.append(z)
    state = dedup
    for rounds in range(1, max_rounds + 1):
        delta = []
        for x in state:
            for y in state:
                z = literal_dot_move(x, y)
                if z is None or z in delta:
                    continue
                if any(w.i == z.i and w.j == z.j and w.dot == z.dot and amrs_subsumes(w.amrs, z.amrs) for w in state):
                    continue
                delta.append(z)
        if not delta:
            return state, rounds
        state = state + delta
    raise RuntimeError("naive fix-point did not converge")
