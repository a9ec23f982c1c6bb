from __future__ import annotations


class TfsError(Exception):
    """Base class for every error raised by this package."""


class HierarchyError(TfsError):
    pass


class UnknownType(HierarchyError):
    def __init__(self, name: str, where: str = ""):
        self.name = name
        msg = f"unknown type {name!r}"
        super().__init__(f"{msg} ({where})" if where else msg)


class CycleInOrder(HierarchyError):
    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__("cycle in subtype order: " + " < ".join(cycle))


class NotBoundedComplete(HierarchyError):
    def __init__(self, t1: str, t2: str, witnesses: list[str]):
        self.pair = (t1, t2)
        self.witnesses = witnesses
        super().__init__(
            f"types {t1} and {t2} have upper bounds {', '.join(witnesses)} "
            "but no least upper bound"
        )


class ApproprietyNotMonotone(HierarchyError):
    def __init__(self, feature: str, t: str, s: str):
        self.feature, self.t, self.s = feature, t, s
        super().__init__(
            f"appropriateness of {feature} is not monotone from {t} to its subtype {s}"
        )


class Disconnected(TfsError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"node {node!r} is not reachable from any root")


class UnificationFailure(TfsError):
    """Raised when a classwise type join fails.

    ``path`` is a witness path (shortest, then least in feature order) to a
    node whose type join failed; ``index`` is the 1-based element it starts
    from when the operand is multi-rooted.
    """

    def __init__(self, path: tuple[str, ...], index: int = 1):
        self.path = path
        self.index = index
        where = ".".join(path) or "<root>"
        super().__init__(f"unification fails at element {index}, path {where}")


class IndexOutOfRange(TfsError, IndexError):
    pass


class UnknownWord(TfsError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"unknown word {word!r}")


class GrammarSyntaxError(TfsError):
    def __init__(self, message: str, line: int, col: int):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {message}")


class GuardTripped(TfsError):
    def __init__(self, guard: str, limit: int):
        self.guard, self.limit = guard, limit
        super().__init__(f"guard {guard} tripped at {limit}")


class BudgetExceeded(TfsError):
    pass


class CorruptProvenance(TfsError):
    pass


class InvariantViolation(TfsError, AssertionError):
    pass
