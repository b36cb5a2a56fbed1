"""Closure systems, model enumeration, and the canonical implication base."""

from __future__ import annotations

from typing import Callable, Iterable, Iterator

from .errors import CapacityError, UniverseMismatchError
from .implications import Implication, ImplicationTheory, close_mask_under
from .sets import AttributeSet, Universe

# Exhaustive subset scans (models_of, closure-system sampling) refuse larger
# universes instead of silently taking hours.
ENUMERATION_CAP = 24

# Brute-force enumeration of every closure system is only feasible this far.
SYSTEM_ENUMERATION_CAP = 4


class ClosureSystem:
    """A family of attribute sets containing M and closed under intersection."""

    __slots__ = ("universe", "masks")

    def __init__(self, universe: Universe, sets: Iterable[AttributeSet]):
        masks = set()
        for s in sets:
            if s.universe != universe:
                raise UniverseMismatchError(
                    f"set {s!r} lives over {s.universe!r}, not {universe!r}"
                )
            masks.add(s.mask)
        full = universe.full_mask
        if full not in masks:
            raise ValueError("a closure system must contain the full attribute set")
        ordered = sorted(masks)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1 :]:
                if a & b not in masks:
                    raise ValueError(
                        f"not intersection-closed: "
                        f"{universe.mask_names(a)} ∩ {universe.mask_names(b)} missing"
                    )
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "masks", frozenset(masks))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("ClosureSystem is immutable")

    @classmethod
    def _trusted(cls, universe: Universe, masks: frozenset[int]) -> "ClosureSystem":
        """Internal constructor for families already known to be closed."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "universe", universe)
        object.__setattr__(obj, "masks", frozenset(masks))
        return obj

    @property
    def sets(self) -> tuple[AttributeSet, ...]:
        """Members in lectic order."""
        u = self.universe
        return tuple(
            AttributeSet(u, m) for m in sorted(self.masks, key=u.lectic_key)
        )

    def __contains__(self, item: AttributeSet) -> bool:
        return item.universe == self.universe and item.mask in self.masks

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[AttributeSet]:
        return iter(self.sets)

    def closure_of(self, attrs: AttributeSet) -> AttributeSet:
        """Smallest member containing `attrs` (the induced closure operator)."""
        if attrs.universe != self.universe:
            raise UniverseMismatchError("closure_of across universes")
        return AttributeSet(self.universe, self._close_mask(attrs.mask))

    def _close_mask(self, mask: int) -> int:
        out = self.universe.full_mask
        for m in self.masks:
            if mask & ~m == 0:
                out &= m
        return out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ClosureSystem)
            and self.universe == other.universe
            and self.masks == other.masks
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.masks))

    def __repr__(self) -> str:
        return f"ClosureSystem({[s.names for s in self.sets]!r})"


def intersection_closure(universe: Universe, masks: Iterable[int]) -> ClosureSystem:
    """Close an arbitrary family under intersection and add M."""
    family = {universe.full_mask}
    frontier = list(masks)
    for m in frontier:
        if m in family:
            continue
        new = {m} | {m & other for other in family}
        family |= new
    # one more sweep guarantees pairwise closure of everything added
    done = False
    while not done:
        done = True
        snapshot = sorted(family)
        for i, a in enumerate(snapshot):
            for b in snapshot[i + 1 :]:
                if a & b not in family:
                    family.add(a & b)
                    done = False
    return ClosureSystem._trusted(universe, frozenset(family))


def holds_in(imp: Implication, system: ClosureSystem) -> bool:
    """True when no member contains the premise without the conclusion."""
    if imp.universe != system.universe:
        raise UniverseMismatchError("holds_in across universes")
    p, c = imp.premise.mask, imp.conclusion.mask
    for m in system.masks:
        if p & ~m == 0 and c & ~m:
            return False
    return True


def theory_holds_in(theory: ImplicationTheory, system: ClosureSystem) -> bool:
    return all(holds_in(i, system) for i in theory)


def models_of(theory: ImplicationTheory, universe: Universe) -> ClosureSystem:
    """All subsets of the universe respecting every implication.

    Scans the full powerset, so the universe size is capped.
    """
    n = universe.size
    if n > ENUMERATION_CAP:
        raise CapacityError(
            f"models_of scans 2^|M| subsets; |M| = {n} exceeds cap {ENUMERATION_CAP}"
        )
    pairs = [(i.premise.mask, i.conclusion.mask) for i in theory.implications]
    masks = []
    for mask in range(1 << n):
        if all(p & ~mask or not (c & ~mask) for p, c in pairs):
            masks.append(mask)
    return ClosureSystem._trusted(universe, frozenset(masks))


def next_closed_mask(mask: int, n: int, close: Callable[[int], int]) -> int | None:
    """Lectically next closed set after `mask`, or None when exhausted.

    `close` must be a closure operator on masks over n attributes.
    """
    for i in range(n - 1, -1, -1):
        bit = 1 << i
        if mask & bit:
            mask &= ~bit
        else:
            candidate = close(mask | bit)
            if not (candidate & ~mask) & (bit - 1):
                return candidate
    return None


def closed_masks_in_lectic_order(n: int, close: Callable[[int], int]) -> Iterator[int]:
    mask = close(0)
    while mask is not None:
        yield mask
        mask = next_closed_mask(mask, n, close)


def all_closed_sets(system: ClosureSystem) -> list[AttributeSet]:
    """Members of the system enumerated through its closure operator."""
    u = system.universe
    return [
        AttributeSet(u, m)
        for m in closed_masks_in_lectic_order(u.size, system._close_mask)
    ]


def canonical_base_from_operator(
    universe: Universe, close: Callable[[int], int]
) -> ImplicationTheory:
    """Canonical (minimum) implication base of a closure operator.

    Enumerates, in lectic order, the sets closed under the growing list of
    accepted implications applied with properly-contained premises; each such
    set that is not closed contributes one implication premise -> closure.
    Conclusions come out as full closures.
    """
    n = universe.size
    base: list[tuple[int, int]] = []

    def preclose(mask: int) -> int:
        changed = True
        while changed:
            changed = False
            for p, c in base:
                if p & ~mask == 0 and p != mask and c & ~mask:
                    mask |= c
                    changed = True
        return mask

    out: list[Implication] = []
    mask = preclose(0)
    while mask is not None:
        closed = close(mask)
        if closed != mask:
            base.append((mask, closed))
            out.append(
                Implication(
                    AttributeSet(universe, mask), AttributeSet(universe, closed)
                )
            )
        mask = next_closed_mask(mask, n, preclose)
    return ImplicationTheory(universe, out)


def canonical_base(system: ClosureSystem) -> ImplicationTheory:
    """Canonical base of a closure system; models_of(result) reproduces it."""
    return canonical_base_from_operator(system.universe, system._close_mask)


def reduce_theory(theory: ImplicationTheory) -> ImplicationTheory:
    """Canonical base of the theory's own model system.

    Works directly over the forward-chaining closure, so no powerset scan
    is involved and there is no universe cap.
    """
    pairs = [(i.premise.mask, i.conclusion.mask) for i in theory.implications]
    return canonical_base_from_operator(
        theory.universe, lambda mask: close_mask_under(pairs, mask)
    )


def drop_redundant(theory: ImplicationTheory) -> ImplicationTheory:
    """Equivalent subset of the theory with entailed members removed.

    Unlike reduce_theory this never rewrites surviving implications, only
    deletes ones that follow from the rest.
    """
    kept = [(i.premise.mask, i.conclusion.mask) for i in theory.implications]
    survivors = []
    for imp in theory.implications:
        key = (imp.premise.mask, imp.conclusion.mask)
        rest = [p for p in kept if p != key]
        if imp.conclusion.mask & ~close_mask_under(rest, imp.premise.mask):
            survivors.append(imp)
        else:
            kept = rest
    return ImplicationTheory(theory.universe, survivors)


def enumerate_closure_systems(
    universe: Universe, require_empty: bool = False
) -> Iterator[ClosureSystem]:
    """Every closure system over the universe, by brute force.

    With require_empty=True only families containing the empty set are
    produced (2271 of them for |M| = 4). Capped at |M| <= 4.
    """
    n = universe.size
    if n > SYSTEM_ENUMERATION_CAP:
        raise CapacityError(
            f"closure-system enumeration caps at |M| = {SYSTEM_ENUMERATION_CAP}"
        )
    full = universe.full_mask
    proper = [m for m in range(full)]  # every subset except M itself
    if require_empty:
        proper = [m for m in proper if m != 0]
    k = len(proper)
    for choice in range(1 << k):
        masks = {full}
        if require_empty:
            masks.add(0)
        for i in range(k):
            if choice >> i & 1:
                masks.add(proper[i])
        ok = True
        ordered = sorted(masks)
        for i, a in enumerate(ordered):
            if not ok:
                break
            for b in ordered[i + 1 :]:
                if a & b not in masks:
                    ok = False
                    break
        if ok:
            yield ClosureSystem._trusted(universe, frozenset(masks))
