"""Consortia of local experts over blocks of an attribute universe.

A consortial domain is a family of blocks covering the universe. Each block
carries one answering party: a genuine local expert, whose knowledge is the
whole restricted target system, or a pre-expert aware of only part of it.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .closure import ClosureSystem
from .context import FormalContext
from .errors import (
    CapacityError,
    FormatError,
    InvalidDomainError,
    ProtocolError,
    QualificationError,
    UniverseMismatchError,
)
from .implications import Implication
from .sets import AttributeSet, Universe

# Pairwise consistency checks range over Imp(N_i ∩ N_j); refuse intersections
# whose powerset would make that scan unreasonable.
CONSISTENCY_CAP = 12


class ConsortialDomain:
    """An indexed family of attribute blocks whose union is the universe."""

    __slots__ = ("universe", "blocks")

    def __init__(self, universe: Universe, blocks: Iterable[AttributeSet]):
        blocks = tuple(blocks)
        union = 0
        for b in blocks:
            if b.universe != universe:
                raise UniverseMismatchError("block over a different universe")
            union |= b.mask
        if union != universe.full_mask:
            missing = universe.mask_names(universe.full_mask & ~union)
            raise InvalidDomainError(f"blocks do not cover the universe: {missing} uncovered")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "blocks", blocks)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("ConsortialDomain is immutable")

    @property
    def is_proper(self) -> bool:
        """True when no single block is the whole universe."""
        return all(b.mask != self.universe.full_mask for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ConsortialDomain)
            and self.universe == other.universe
            and self.blocks == other.blocks
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.blocks))

    def __repr__(self) -> str:
        return f"ConsortialDomain({[b.names for b in self.blocks]!r})"


class ExpertKind(enum.Enum):
    EXPERT = "expert"
    PRE_EXPERT = "pre"


@dataclass(frozen=True)
class LocalExpertSpec:
    """One answering party on a block.

    For PRE_EXPERT, `knowledge` lists the restricted sets the party is aware
    of; it must be a subfamily of the restricted target system. For EXPERT it
    is ignored (the party knows the whole restriction).
    """

    block: AttributeSet
    kind: ExpertKind = ExpertKind.EXPERT
    knowledge: tuple[AttributeSet, ...] = ()

    def __post_init__(self) -> None:
        for k in self.knowledge:
            if k.universe != self.block.universe:
                raise UniverseMismatchError("knowledge set over a different universe")
            if not k <= self.block:
                raise ProtocolError(f"knowledge set {k!r} reaches outside block {self.block!r}")


class Verdict(enum.Enum):
    ACCEPT = "accept"
    REFUTE = "refute"
    NULL = "null"


@dataclass(frozen=True)
class ExpertAnswer:
    """Outcome of posing one query to one answering party."""

    verdict: Verdict
    counterexample: AttributeSet | None = None
    block: AttributeSet | None = None
    name: str | None = None
    expert: int | None = None

    @classmethod
    def accept(cls) -> "ExpertAnswer":
        return cls(Verdict.ACCEPT)

    @classmethod
    def null(cls) -> "ExpertAnswer":
        return cls(Verdict.NULL)

    @classmethod
    def refute(
        cls,
        counterexample: AttributeSet,
        block: AttributeSet,
        name: str | None = None,
        expert: int | None = None,
    ) -> "ExpertAnswer":
        if not counterexample <= block:
            raise ProtocolError("counterexample reaches outside the answering block")
        return cls(Verdict.REFUTE, counterexample, block, name, expert)

    def validate_for(self, query: Implication) -> None:
        """Check the structural answer contract against the posed query."""
        if self.verdict is not Verdict.REFUTE:
            return
        if self.counterexample is None or self.block is None:
            raise ProtocolError("refute answers must carry a counterexample and block")
        if not query.premise <= self.counterexample:
            raise ProtocolError("counterexample does not contain the premise")
        if (query.conclusion - query.premise) <= self.counterexample:
            raise ProtocolError("counterexample satisfies the conclusion")


def restrict(system: ClosureSystem, block: AttributeSet) -> ClosureSystem:
    """The restricted closure system {X ∩ N | X ∈ system} over universe N."""
    if block.universe != system.universe:
        raise UniverseMismatchError("restrict across universes")
    sub = Universe(block.names)
    bits = [i for i in range(system.universe.size) if block.mask >> i & 1]
    masks = set()
    for m in system.masks:
        masks.add(_compress(m, bits))
    return ClosureSystem._trusted(sub, frozenset(masks))


def _compress(mask: int, bits: Sequence[int]) -> int:
    out = 0
    for j, i in enumerate(bits):
        if mask >> i & 1:
            out |= 1 << j
    return out


def restricted_views(system: ClosureSystem, block_mask: int) -> list[int]:
    """Restriction of the system to a block, kept as masks over the
    original universe, in lectic order."""
    key = system.universe.lectic_key
    return sorted({m & block_mask for m in system.masks}, key=key)


def mstar_closure(domain: ConsortialDomain, attrs: AttributeSet) -> AttributeSet:
    """Closure in the downset of the blocks plus M.

    Any set inside some block is itself a member of the downset, so the value
    is `attrs` when a block contains it and M otherwise.
    """
    if attrs.universe != domain.universe:
        raise UniverseMismatchError("mstar_closure across universes")
    for b in domain.blocks:
        if attrs <= b:
            return attrs
    return domain.universe.full()


def is_well_formed(domain: ConsortialDomain, imp: Implication) -> bool:
    """True when every single-conclusion part fits inside some block."""
    if imp.universe != domain.universe:
        raise UniverseMismatchError("is_well_formed across universes")
    p = imp.premise.mask
    rest = imp.conclusion.mask & ~p
    for i in range(domain.universe.size):
        bit = 1 << i
        if rest & bit and not any(
            (p | bit) & ~b.mask == 0 for b in domain.blocks
        ):
            return False
    return True


def local_answer(
    spec: LocalExpertSpec, target: ClosureSystem, query: Implication
) -> ExpertAnswer:
    """Answer of one local party, realized against the target system.

    A genuine expert knows every restricted view; a pre-expert only its
    `knowledge` subfamily. The answer refutes with the lectically smallest
    violating view, and accepts when no known view violates the query.
    """
    if query.universe != target.universe or spec.block.universe != target.universe:
        raise UniverseMismatchError("local_answer across universes")
    if not query.attributes() <= spec.block:
        raise QualificationError(
            f"query {query!r} is not within block {spec.block!r}"
        )
    block_mask = spec.block.mask
    views = restricted_views(target, block_mask)
    if spec.kind is ExpertKind.PRE_EXPERT:
        view_set = set(views)
        known = []
        for k in spec.knowledge:
            if k.mask not in view_set:
                raise ProtocolError(
                    f"pre-expert knowledge {k!r} is not a restricted view of the target"
                )
            known.append(k.mask)
        views = sorted(set(known), key=target.universe.lectic_key)
    p = query.premise.mask
    c = query.conclusion.mask & ~p
    for v in views:  # lectic order makes the first hit the smallest
        if p & ~v == 0 and c & ~v:
            return ExpertAnswer.refute(
                AttributeSet(target.universe, v), spec.block
            )
    return ExpertAnswer.accept()


@dataclass(frozen=True)
class SelectionStrategy:
    """How a sampled consortium picks answering experts for a query part.

    policy: one of 'all', 'first', 'max-block', 'cost', 'sample'.
    """

    policy: str = "all"
    costs: tuple[float, ...] | None = None
    sample_size: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.policy not in ("all", "first", "max-block", "cost", "sample"):
            raise ValueError(f"unknown selection policy {self.policy!r}")
        if self.policy == "cost" and self.costs is None:
            raise ValueError("cost policy requires costs")
        if self.sample_size < 1:
            raise ValueError("sample_size must be at least 1")

    def pick(
        self,
        qualified: Sequence[int],
        blocks: Sequence[AttributeSet],
        part: Implication,
    ) -> list[int]:
        if not qualified:
            return []
        if self.policy == "all":
            return list(qualified)
        if self.policy == "first":
            return [qualified[0]]
        if self.policy == "max-block":
            return [max(qualified, key=lambda i: (len(blocks[i]), -i))]
        if self.policy == "cost":
            return [min(qualified, key=lambda i: (self.costs[i], i))]
        if self.policy == "sample":
            token = f"{self.seed}:{part.premise.mask}:{part.conclusion.mask}"
            rng = random.Random(token)
            k = min(self.sample_size, len(qualified))
            return sorted(rng.sample(list(qualified), k))
        raise ValueError(f"unknown selection policy {self.policy!r}")


class Mode(enum.Enum):
    STRONG = "strong"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class Consortium:
    """A consortial domain with one answering party per block."""

    domain: ConsortialDomain
    experts: tuple[LocalExpertSpec, ...]
    mode: Mode = Mode.STRONG
    strategy: SelectionStrategy = field(default_factory=SelectionStrategy)

    def __post_init__(self) -> None:
        if len(self.experts) != len(self.domain.blocks):
            raise ValueError("one expert spec per block is required")
        for spec, block in zip(self.experts, self.domain.blocks):
            if spec.block != block:
                raise ValueError(f"expert block {spec.block!r} misaligned with domain block {block!r}")

    @property
    def universe(self) -> Universe:
        return self.domain.universe


def select_experts(consortium: Consortium, query: Implication) -> list[int]:
    """Indices of the experts a whole query would be put to.

    Strong mode selects every qualified expert; sampled mode applies the
    strategy to the qualified ones.
    """
    attrs = query.attributes()
    qualified = [
        i for i, spec in enumerate(consortium.experts) if attrs <= spec.block
    ]
    if not qualified:
        raise QualificationError(f"no block contains {attrs!r}")
    if consortium.mode is Mode.STRONG:
        return qualified
    return consortium.strategy.pick(
        qualified, [s.block for s in consortium.experts], query
    )


def plan_consultation(
    consortium: Consortium, query: Implication
) -> tuple[dict[int, int], bool]:
    """Assign conclusion parts to experts.

    Returns (expert index -> conclusion mask bundle, any part unanswerable).
    Parts are single conclusion attributes outside the premise; each part is
    assigned per the consortium mode, and an expert's bundle is the union of
    its parts.
    """
    u = consortium.universe
    p = query.premise.mask
    rest = query.conclusion.mask & ~p
    bundles: dict[int, int] = {}
    unanswerable = False
    blocks = [s.block for s in consortium.experts]
    for i in range(u.size):
        bit = 1 << i
        if not rest & bit:
            continue
        need = p | bit
        qualified = [
            j for j, spec in enumerate(consortium.experts) if need & ~spec.block.mask == 0
        ]
        if not qualified:
            unanswerable = True
            continue
        if consortium.mode is Mode.STRONG:
            chosen = qualified
        else:
            part = Implication(query.premise, AttributeSet(u, bit))
            chosen = consortium.strategy.pick(qualified, blocks, part)
        for j in chosen:
            bundles[j] = bundles.get(j, 0) | bit
    return bundles, unanswerable


def consortial_answer(
    consortium: Consortium,
    target: ClosureSystem,
    query: Implication,
    namer: "ExampleNamer | None" = None,
) -> ExpertAnswer:
    """Pose a query to the consortium, realized against the target system.

    The query decomposes into single-conclusion parts; parts are answered by
    the selected experts (consulted in index order, stopping at the first
    refutation), parts fitting no block stay unanswered. Any refutation wins;
    otherwise an unanswered part makes the verdict Null, else Accept.
    """
    if query.universe != consortium.universe:
        raise UniverseMismatchError("consortial_answer across universes")
    u = consortium.universe
    bundles, unanswerable = plan_consultation(consortium, query)
    for j in sorted(bundles):
        spec = consortium.experts[j]
        view = Implication(query.premise, AttributeSet(u, bundles[j]))
        answer = local_answer(spec, target, view)
        if answer.verdict is Verdict.REFUTE:
            name = None
            if namer is not None:
                name = namer.name_for(answer.counterexample.mask, spec.block.mask)
            return ExpertAnswer.refute(
                answer.counterexample, spec.block, name, expert=j
            )
    if unanswerable:
        return ExpertAnswer.null()
    return ExpertAnswer.accept()


def _party_closure(
    spec: LocalExpertSpec, target: ClosureSystem, mask: int
) -> int:
    """Meet of the views the party is aware of that contain `mask`."""
    if spec.kind is ExpertKind.EXPERT:
        views = restricted_views(target, spec.block.mask)
    else:
        views = [k.mask for k in spec.knowledge]
    out = spec.block.mask
    for v in views:
        if mask & ~v == 0:
            out &= v
    return out


def _pair_consistent(
    a: LocalExpertSpec, b: LocalExpertSpec, target: ClosureSystem
) -> bool:
    """Agreement of two parties on every implication over their overlap.

    A party accepts (A, B) exactly when B lies inside the meet of its known
    views containing A, so agreement on all of Imp(N_a ∩ N_b) is equivalent
    to both meets cutting the overlap identically for every premise A.
    """
    overlap = a.block.mask & b.block.mask
    bits = [i for i in range(a.block.universe.size) if overlap >> i & 1]
    if len(bits) > CONSISTENCY_CAP:
        raise CapacityError(
            f"|N_i ∩ N_j| = {len(bits)} exceeds consistency cap {CONSISTENCY_CAP}"
        )
    for choice in range(1 << len(bits)):
        premise = 0
        for j, i in enumerate(bits):
            if choice >> j & 1:
                premise |= 1 << i
        if _party_closure(a, target, premise) & overlap != _party_closure(
            b, target, premise
        ) & overlap:
            return False
    return True


def check_consistent_experts(consortium: Consortium, target: ClosureSystem) -> bool:
    """Pairwise agreement of the genuine experts on their overlaps."""
    experts = [s for s in consortium.experts if s.kind is ExpertKind.EXPERT]
    return _all_pairs_consistent(experts, target)


def check_consistent_consortium(consortium: Consortium, target: ClosureSystem) -> bool:
    """Pairwise agreement of every answering party on their overlaps."""
    return _all_pairs_consistent(list(consortium.experts), target)


def _all_pairs_consistent(
    specs: list[LocalExpertSpec], target: ClosureSystem
) -> bool:
    for i, a in enumerate(specs):
        for b in specs[i + 1 :]:
            if not _pair_consistent(a, b, target):
                return False
    return True


class ExampleNamer:
    """Stable naming of counterexamples, preferring context object names.

    A refuting view V on block N is attributed to the first context object
    whose row restricted to N equals V; failing that, to the lectically
    smallest target member restricting to V, under a synthetic name derived
    from that member. Issued names can be resolved back to their full member
    set for cross-expert view gathering.
    """

    def __init__(self, target: ClosureSystem, ctx: FormalContext | None = None):
        self.target = target
        self.universe = target.universe
        self._by_name: dict[str, int] = {}
        self._objects: list[tuple[str, int]] = []
        if ctx is not None:
            if ctx.universe != target.universe:
                raise UniverseMismatchError("naming context over a different universe")
            for name, row in zip(ctx.objects, ctx.rows):
                self._objects.append((name, row))
                self._by_name[name] = row

    def name_for(self, view_mask: int, block_mask: int) -> str:
        for name, row in self._objects:
            if row & block_mask == view_mask:
                return name
        member = self.member_for(view_mask, block_mask)
        name = "x[" + ",".join(self.universe.mask_names(member)) + "]"
        self._by_name.setdefault(name, member)
        return name

    def member_for(self, view_mask: int, block_mask: int) -> int:
        key = self.universe.lectic_key
        candidates = [
            m for m in self.target.masks if m & block_mask == view_mask
        ]
        if not candidates:
            raise ProtocolError("view is not a restriction of any target member")
        return min(candidates, key=key)

    def resolve(self, name: str) -> int | None:
        """Full member mask previously issued or known under `name`."""
        return self._by_name.get(name)


def parse_domain(
    text: str, universe: Universe
) -> tuple[ConsortialDomain, dict[int, tuple[str, ...]]]:
    """Read a block-per-line domain file.

    Plain lines list the attribute names of one block. Lines of the form
    `expert <index> pre <object names...>` downgrade the block's party to a
    pre-expert aware only of the named context rows. '#' starts a comment.
    """
    blocks: list[AttributeSet] = []
    pre: dict[int, tuple[str, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        tokens = stripped.split()
        if tokens[0] == "expert":
            if len(tokens) < 3 or tokens[2] != "pre":
                raise FormatError(
                    "expected 'expert <index> pre <object names...>'", lineno
                )
            try:
                idx = int(tokens[1])
            except ValueError:
                raise FormatError(f"bad expert index {tokens[1]!r}", lineno) from None
            if idx < 0 or idx >= len(blocks):
                raise FormatError(f"expert index {idx} has no preceding block", lineno)
            pre[idx] = tuple(tokens[3:])
            continue
        try:
            blocks.append(universe.subset(tokens))
        except UniverseMismatchError as exc:
            raise FormatError(str(exc), lineno) from None
    try:
        domain = ConsortialDomain(universe, blocks)
    except InvalidDomainError as exc:
        raise FormatError(str(exc)) from None
    return domain, pre


def format_domain(
    domain: ConsortialDomain, pre: dict[int, tuple[str, ...]] | None = None
) -> str:
    lines = [" ".join(b.names) for b in domain.blocks]
    for idx in sorted(pre or {}):
        lines.append(f"expert {idx} pre " + " ".join(pre[idx]))
    return "\n".join(lines) + "\n"


def consortium_from_domain(
    domain: ConsortialDomain,
    pre: dict[int, tuple[str, ...]] | None = None,
    ctx: FormalContext | None = None,
    mode: Mode = Mode.STRONG,
    strategy: SelectionStrategy | None = None,
) -> Consortium:
    """Build a consortium, resolving pre-expert declarations against context rows."""
    specs = []
    for i, block in enumerate(domain.blocks):
        names = (pre or {}).get(i)
        if names is None:
            specs.append(LocalExpertSpec(block))
            continue
        if ctx is None:
            raise ValueError("pre-expert declarations need a context to resolve rows")
        knowledge = tuple(ctx.row(n) & block for n in names)
        specs.append(LocalExpertSpec(block, ExpertKind.PRE_EXPERT, knowledge))
    return Consortium(
        domain, tuple(specs), mode, strategy or SelectionStrategy()
    )
