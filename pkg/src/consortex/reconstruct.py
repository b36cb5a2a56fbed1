"""Reconstructing a closure system from its block-local valid implications.

Given a domain of blocks and a hidden target system, the well-formed valid
implications are everything a consortium could ever confirm. Their model set
is the best possible reconstruction; these helpers compute it, measure when
it is exact, and decide the combinatorial cover conditions behind that.
"""

from __future__ import annotations

from itertools import combinations

from .closure import (
    ENUMERATION_CAP,
    ClosureSystem,
    closed_masks_in_lectic_order,
)
from .consortium import ConsortialDomain
from .errors import CapacityError, UniverseMismatchError
from .implications import Implication, ImplicationTheory, close_mask_under
from .sets import AttributeSet, Universe

# Enumerating well-formed premises walks every subset of every block.
BLOCK_ENUMERATION_CAP = 16


def premise_complexity(theory: ImplicationTheory) -> int:
    """Largest premise size in the theory; -1 for the empty theory."""
    return max((len(i.premise) for i in theory), default=-1)


def system_premise_complexity(system: ClosureSystem) -> int:
    """Smallest k such that some theory with premises of size <= k has
    exactly this system as its models.

    Taking every implication A -> closure(A) with |A| <= k is optimal among
    such theories, so the value is the smallest k where that theory's closed
    sets already coincide with the system.
    """
    u = system.universe
    n = u.size
    if n > BLOCK_ENUMERATION_CAP:
        raise CapacityError(f"|M| = {n} exceeds cap {BLOCK_ENUMERATION_CAP}")
    target = system.masks
    for k in range(-1, n + 1):
        pairs = []
        for size in range(0, k + 1):
            for combo in combinations(range(n), size):
                mask = 0
                for i in combo:
                    mask |= 1 << i
                closed = system._close_mask(mask)
                if closed != mask:
                    pairs.append((mask, closed))
        closed_masks = frozenset(
            closed_masks_in_lectic_order(n, lambda m: close_mask_under(pairs, m))
        )
        if closed_masks == target:
            return k
    raise AssertionError("k = |M| always reconstructs the system")


def _block_premises(domain: ConsortialDomain) -> list[int]:
    """Masks of all subsets of some block, in lectic order, each once."""
    u = domain.universe
    seen: set[int] = set()
    for b in domain.blocks:
        bits = [i for i in range(u.size) if b.mask >> i & 1]
        if len(bits) > BLOCK_ENUMERATION_CAP:
            raise CapacityError(
                f"block of size {len(bits)} exceeds cap {BLOCK_ENUMERATION_CAP}"
            )
        for choice in range(1 << len(bits)):
            mask = 0
            for j, i in enumerate(bits):
                if choice >> j & 1:
                    mask |= 1 << i
            seen.add(mask)
    return sorted(seen, key=u.lectic_key)


def well_formed_valid(
    domain: ConsortialDomain, target: ClosureSystem
) -> ImplicationTheory:
    """All single-conclusion well-formed implications valid in the target.

    A nontrivial well-formed implication decomposes into parts (A, {b}) with
    A ∪ {b} inside some block, so the single-conclusion form carries the same
    models as the full family while staying enumerable.
    """
    if domain.universe != target.universe:
        raise UniverseMismatchError("well_formed_valid across universes")
    u = domain.universe
    block_masks = [b.mask for b in domain.blocks]
    out = []
    for premise in _block_premises(domain):
        valid = target._close_mask(premise) & ~premise
        for i in range(u.size):
            bit = 1 << i
            if not valid & bit:
                continue
            need = premise | bit
            if any(need & ~bm == 0 for bm in block_masks):
                out.append(
                    Implication(AttributeSet(u, premise), AttributeSet(u, bit))
                )
    return ImplicationTheory(u, out)


def reconstructed_system(
    domain: ConsortialDomain, target: ClosureSystem
) -> ClosureSystem:
    """Models of the well-formed valid implications.

    Always a closure system containing the target; equality is what
    reconstructability means.
    """
    u = domain.universe
    if u.size > ENUMERATION_CAP:
        raise CapacityError(f"|M| = {u.size} exceeds cap {ENUMERATION_CAP}")
    theory = well_formed_valid(domain, target)
    pairs = [(i.premise.mask, i.conclusion.mask) for i in theory]
    masks = frozenset(
        closed_masks_in_lectic_order(u.size, lambda m: close_mask_under(pairs, m))
    )
    return ClosureSystem._trusted(u, masks)


def verify_reconstruction(domain: ConsortialDomain, target: ClosureSystem) -> bool:
    """True when the well-formed valid implications pin down the target exactly."""
    return reconstructed_system(domain, target) == target


def cover_witness(domain: ConsortialDomain, size: int) -> AttributeSet | None:
    """Lectically smallest subset of the given size inside no block, if any."""
    u = domain.universe
    block_masks = [b.mask for b in domain.blocks]
    best = None
    for combo in combinations(range(u.size), size):
        mask = 0
        for i in combo:
            mask |= 1 << i
        if any(mask & ~bm == 0 for bm in block_masks):
            continue
        if best is None or u.lectic_key(mask) < u.lectic_key(best):
            best = mask
    return None if best is None else AttributeSet(u, best)


def covers_all(domain: ConsortialDomain, size: int) -> bool:
    """Every subset of the given size fits inside some block."""
    return cover_witness(domain, size) is None


def can_reconstruct_class(
    domain: ConsortialDomain, k: int
) -> tuple[bool, AttributeSet | None]:
    """Whether every target of premise complexity <= k is reconstructable.

    Equivalent to all (k+1)-subsets fitting in blocks; the witness is the
    lectically smallest uncovered (k+1)-set when the answer is no.
    """
    witness = cover_witness(domain, k + 1)
    return witness is None, witness


def confounder_pair(
    domain: ConsortialDomain, k: int
) -> tuple[ClosureSystem, ClosureSystem]:
    """Two distinct systems of premise complexity <= k with identical
    reconstructions, built from an uncovered (k+1)-set.

    With S the witness, b its lectically last element and A = S without b,
    no well-formed implication can express A -> b, so the models of that one
    implication collapse to the powerset exactly as the powerset itself does.
    """
    ok, witness = can_reconstruct_class(domain, k)
    if ok:
        raise ValueError(f"domain reconstructs every target of complexity <= {k}")
    u = domain.universe
    bit = 1 << max(i for i in range(u.size) if witness.mask >> i & 1)
    premise = AttributeSet(u, witness.mask & ~bit)
    powerset = ClosureSystem._trusted(u, frozenset(range(1 << u.size)))
    pairs = [(premise.mask, premise.mask | bit)]
    masks = frozenset(
        closed_masks_in_lectic_order(u.size, lambda m: close_mask_under(pairs, m))
    )
    return powerset, ClosureSystem._trusted(u, masks)


def is_steiner_system(domain: ConsortialDomain, t: int) -> bool:
    """Uniform block size and every t-subset in exactly one block."""
    u = domain.universe
    block_masks = [b.mask for b in domain.blocks]
    if not block_masks:
        return False
    sizes = {bm.bit_count() for bm in block_masks}
    if len(sizes) != 1 or min(sizes) < t:
        return False
    for combo in combinations(range(u.size), t):
        mask = 0
        for i in combo:
            mask |= 1 << i
        hits = sum(1 for bm in block_masks if mask & ~bm == 0)
        if hits != 1:
            return False
    return True
