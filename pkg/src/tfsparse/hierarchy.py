"""Type signatures: a bounded-complete subtype order, appropriateness, feature order.

A :class:`TypeHierarchy` is built once from raw declarations by :func:`validate`
and never changes afterwards.  Joins are precomputed into a table.  A failed
join (two types without a common upper bound) is reported as ``None``; the
failure marker is never a member of ``types``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    ApproprietyNotMonotone,
    CycleInOrder,
    HierarchyError,
    NotBoundedComplete,
    UnknownType,
)

BOT = "bot"


@dataclass(frozen=True)
class TypeHierarchy:
    types: frozenset[str]
    # upper[t] = every s with t ⊑ s (reflexive)
    upper: Mapping[str, frozenset[str]] = field(repr=False)
    approp_table: Mapping[tuple[str, str], str] = field(repr=False)
    features: tuple[str, ...]
    join_table: Mapping[tuple[str, str], str | None] = field(repr=False, compare=False)
    feature_rank: Mapping[str, int] = field(repr=False, compare=False)

    def subtype(self, t1: str, t2: str) -> bool:
        """True iff ``t1 ⊑ t2`` (``t2`` is at least as specific)."""
        return t2 in self.upper[t1]

    def join(self, t1: str, t2: str) -> str | None:
        if t1 == t2:
            return t1
        return self.join_table[t1, t2]

    def approp(self, feature: str, t: str) -> str | None:
        return self.approp_table.get((feature, t))

    def appropriate_features(self, t: str) -> list[str]:
        return [f for f in self.features if (f, t) in self.approp_table]

    def check_type(self, t: str) -> str:
        if t not in self.types:
            raise UnknownType(t)
        return t

    def check_feature(self, f: str) -> str:
        if f not in self.feature_rank:
            raise HierarchyError(f"unknown feature {f!r}")
        return f


def validate(
    parents: Mapping[str, Sequence[str]],
    approp: Iterable[tuple[str, str, str]] = (),
    features: Sequence[str] | None = None,
) -> TypeHierarchy:
    """Build a hierarchy from covering declarations.

    ``parents`` maps each declared type to its immediate supertypes (more
    general types); ``bot`` is implicit and must not be redeclared.
    ``approp`` holds ``(type, feature, value_type)`` triples in declaration
    order; a declaration is inherited by every subtype.  ``features`` fixes
    the total feature order and defaults to first appearance in ``approp``.
    """
    approp = list(approp)
    if BOT in parents and list(parents[BOT]):
        raise CycleInOrder([BOT])
    types = {BOT, *parents}
    for t, ps in parents.items():
        for p in ps:
            if p not in types:
                raise UnknownType(p, f"supertype of {t!r}")

    # reflexive-transitive closure, downward: lower[t] = {s | s ⊑ t}
    lower: dict[str, set[str]] = {}
    state: dict[str, int] = {}

    def visit(t: str, trail: list[str]) -> set[str]:
        if state.get(t) == 2:
            return lower[t]
        if state.get(t) == 1:
            raise CycleInOrder(trail[trail.index(t):] + [t])
        state[t] = 1
        acc = {t, BOT}
        for p in parents.get(t, ()):
            acc |= visit(p, trail + [t])
        state[t] = 2
        lower[t] = acc
        return acc

    for t in sorted(types):
        visit(t, [])

    upper: dict[str, set[str]] = {t: set() for t in types}
    for t, below in lower.items():
        for s in below:
            upper[s].add(t)
    frozen_upper = {t: frozenset(u) for t, u in upper.items()}

    ordered = sorted(types)
    join_table: dict[tuple[str, str], str | None] = {}
    for i, a in enumerate(ordered):
        for b in ordered[i:]:
            common = frozen_upper[a] & frozen_upper[b]
            lub = None
            if common:
                least = [u for u in common if common <= frozen_upper[u]]
                if not least:
                    minimal = sorted(
                        u for u in common
                        if not any(v != u and u in frozen_upper[v] for v in common)
                    )
                    raise NotBoundedComplete(a, b, minimal)
                lub = least[0]
            join_table[a, b] = join_table[b, a] = lub

    if features is None:
        features = []
        for _, f, _ in approp:
            if f not in features:
                features.append(f)
    features = tuple(features)
    rank = {f: i for i, f in enumerate(features)}

    declared: dict[tuple[str, str], str] = {}
    for t, f, v in approp:
        if t not in types:
            raise UnknownType(t, f"in appropriateness for {f}")
        if v not in types:
            raise UnknownType(v, f"as value of {f} on {t}")
        if f not in rank:
            raise HierarchyError(f"feature {f!r} missing from the feature order")
        if (f, t) in declared:
            raise HierarchyError(f"appropriateness of {f} on {t} declared twice")
        declared[f, t] = v

    # a redeclaration on a subtype may only narrow the value
    for (f, s), w in sorted(declared.items()):
        for t in sorted(lower[s] - {s}):
            v = declared.get((f, t))
            if v is not None and w not in frozen_upper[v]:
                raise ApproprietyNotMonotone(f, t, s)

    # inheritance: approp(f, s) = join of every declaration on some t ⊑ s
    table: dict[tuple[str, str], str] = {}
    for (f, t), v in sorted(declared.items()):
        for s in sorted(frozen_upper[t]):
            prev = table.get((f, s))
            if prev is None:
                table[f, s] = v
            else:
                j = join_table[prev, v] if prev != v else v
                if j is None:
                    raise ApproprietyNotMonotone(f, t, s)
                table[f, s] = j

    hierarchy = TypeHierarchy(
        types=frozenset(types),
        upper=frozen_upper,
        approp_table=table,
        features=features,
        join_table=join_table,
        feature_rank=rank,
    )
    _check_monotone(hierarchy)
    return hierarchy


def _check_monotone(h: TypeHierarchy) -> None:
    for (f, t), v in h.approp_table.items():
        for s in h.upper[t]:
            w = h.approp_table.get((f, s))
            if w is None or not h.subtype(v, w):
                raise ApproprietyNotMonotone(f, t, s)
