"""Implications between attribute sets and forward-chaining closure."""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import FormatError
from .sets import AttributeSet, Universe, common_universe


class Implication:
    """An implication premise -> conclusion over one universe."""

    __slots__ = ("premise", "conclusion")

    def __init__(self, premise: AttributeSet, conclusion: AttributeSet):
        common_universe(premise, conclusion)
        object.__setattr__(self, "premise", premise)
        object.__setattr__(self, "conclusion", conclusion)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Implication is immutable")

    @property
    def universe(self) -> Universe:
        return self.premise.universe

    def is_trivial(self) -> bool:
        return self.conclusion <= self.premise

    def normalized(self) -> "Implication":
        """Same implication with the premise stripped from the conclusion."""
        return Implication(self.premise, self.conclusion - self.premise)

    def saturated(self) -> "Implication":
        """Same implication with the premise folded into the conclusion."""
        return Implication(self.premise, self.conclusion | self.premise)

    def attributes(self) -> AttributeSet:
        return self.premise | self.conclusion

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Implication)
            and self.premise == other.premise
            and self.conclusion == other.conclusion
        )

    def __hash__(self) -> int:
        return hash((self.premise, self.conclusion))

    def __repr__(self) -> str:
        return f"{self.premise!r} -> {self.conclusion!r}"


class ImplicationTheory:
    """An ordered, duplicate-free collection of implications."""

    __slots__ = ("universe", "implications")

    def __init__(self, universe: Universe, implications: Iterable[Implication] = ()):
        items: list[Implication] = []
        seen: set[tuple[int, int]] = set()
        for imp in implications:
            common_universe(universe.empty(), imp.premise)
            key = (imp.premise.mask, imp.conclusion.mask)
            if key in seen:
                continue
            seen.add(key)
            items.append(imp)
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "implications", tuple(items))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("ImplicationTheory is immutable")

    def __iter__(self) -> Iterator[Implication]:
        return iter(self.implications)

    def __len__(self) -> int:
        return len(self.implications)

    def as_set(self) -> frozenset[tuple[int, int]]:
        return frozenset((i.premise.mask, i.conclusion.mask) for i in self.implications)

    def normalized(self) -> "ImplicationTheory":
        return ImplicationTheory(
            self.universe,
            (i.normalized() for i in self.implications if not i.is_trivial()),
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ImplicationTheory)
            and self.universe == other.universe
            and self.implications == other.implications
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.implications))

    def __repr__(self) -> str:
        return f"ImplicationTheory({list(self.implications)!r})"


def close_mask_under(pairs: Iterable[tuple[int, int]], mask: int) -> int:
    """Forward-chain implication mask pairs over `mask` to a fixpoint."""
    pending = list(pairs)
    changed = True
    while changed:
        changed = False
        remaining = []
        for p, c in pending:
            if p & ~mask == 0:
                if c & ~mask:
                    mask |= c
                    changed = True
            else:
                remaining.append((p, c))
        pending = remaining
    return mask


def close_under_theory(theory: ImplicationTheory, attrs: AttributeSet) -> AttributeSet:
    """Smallest superset of `attrs` respecting every implication."""
    common_universe(theory.universe.empty(), attrs)
    pairs = [(i.premise.mask, i.conclusion.mask) for i in theory.implications]
    return AttributeSet(attrs.universe, close_mask_under(pairs, attrs.mask))


def parse_implication(text: str, universe: Universe, line: int | None = None) -> Implication:
    if text.count("->") != 1:
        raise FormatError(f"expected exactly one '->' in {text!r}", line)
    left, right = text.split("->")
    try:
        premise = universe.subset(left.split())
        conclusion = universe.subset(right.split())
    except Exception as exc:
        raise FormatError(str(exc), line) from None
    return Implication(premise, conclusion)


def format_implication(imp: Implication) -> str:
    left = " ".join(imp.premise.names)
    right = " ".join(imp.normalized().conclusion.names)
    return f"{left} -> {right}".strip()


def parse_implication_lines(text: str, universe: Universe) -> ImplicationTheory:
    """Parse one implication per line; '#' starts a comment."""
    implications = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        implications.append(parse_implication(stripped, universe, lineno))
    return ImplicationTheory(universe, implications)


def format_implication_lines(theory: ImplicationTheory) -> str:
    return "".join(format_implication(i) + "\n" for i in theory.implications)
