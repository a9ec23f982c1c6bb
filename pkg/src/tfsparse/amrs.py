"""Multi-rooted structures: ordered root sequences over one shared graph.

Element indices are 1-based throughout, matching how grammar authors count
rule elements.  Distinct root slots may end up denoting the same node after
unification; they stay distinct slots so that lengths are preserved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .afs import Closure, Fs, Graph, PathSet, _canonical, graph_subsumes, path_set, reroot
from .errors import IndexOutOfRange
from .hierarchy import TypeHierarchy


@dataclass(frozen=True, eq=False)
class Amrs(Graph):
    @classmethod
    def of(cls, *elements: Fs) -> "Amrs":
        """Disjoint sequence of single structures (no sharing between them)."""
        if not elements:
            raise ValueError("an AMRS needs at least one element")
        c = Closure(elements[0].sig)
        roots = [c.add(e) + e.root for e in elements]
        return c.build(cls, roots)


def from_raw(
    roots: Sequence[Hashable],
    node_type: Mapping[Hashable, str],
    arcs: Mapping[Hashable, Mapping[str, Hashable]],
    sig: TypeHierarchy,
) -> Amrs:
    if not roots:
        raise ValueError("an AMRS needs at least one root")
    return _canonical(Amrs, list(roots), node_type, arcs, sig)


def _check(a: Graph, i: int) -> None:
    if not 1 <= i <= len(a.roots):
        raise IndexOutOfRange(f"index {i} outside 1..{len(a.roots)}")


def project(a: Amrs, i: int) -> Fs:
    """Element ``i`` as a standalone structure (everything reachable from its root)."""
    _check(a, i)
    return reroot(Fs, a, [a.roots[i - 1]])


def sub_structure(a: Amrs, j: int, k: int) -> Amrs:
    """Contiguous window ``j..k``, re-indexed from 1.

    Nodes shared with dropped elements survive when a kept root reaches them.
    """
    _check(a, j)
    _check(a, k)
    if j > k:
        raise IndexOutOfRange(f"empty window {j}..{k}")
    return reroot(Amrs, a, a.roots[j - 1:k])


def concatenate(a: Amrs, b: Amrs) -> Amrs:
    c = Closure(a.sig)
    oa = c.add(a)
    ob = c.add(b)
    return c.build(Amrs, [oa + r for r in a.roots] + [ob + r for r in b.roots])


def concat_all(parts: Iterable[Amrs]) -> Amrs:
    parts = list(parts)
    c = Closure(parts[0].sig)
    roots = []
    for p in parts:
        off = c.add(p)
        roots.extend(off + r for r in p.roots)
    return c.build(Amrs, roots)


def unify_in_context(a: Amrs, j: int, b: Fs) -> Amrs:
    """Unify element ``j`` of ``a`` with ``b``; sharing carries the effect to other elements.

    Raises :class:`~tfsparse.errors.UnificationFailure` whose ``index`` names
    the element the witness path starts from.
    """
    _check(a, j)
    c = Closure(a.sig)
    oa = c.add(a)
    ob = c.add(b)
    c.merge(oa + a.roots[j - 1], ob + b.roots[0])
    return c.build(Amrs, [oa + r for r in a.roots])


def amrs_subsumes(a: Amrs, b: Amrs) -> bool:
    """True iff lengths agree and a root-preserving morphism maps ``a`` into ``b``."""
    return graph_subsumes(a, b)


def indexed_paths(a: Amrs, depth: int) -> PathSet:
    return path_set(a, depth)


def elements(a: Amrs) -> list[Fs]:
    return [project(a, i) for i in range(1, len(a) + 1)]
