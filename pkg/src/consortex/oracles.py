"""Simulated answering parties backed by a known target closure system.

These close the loop for testing and batch runs: the exploration engine asks,
an oracle realizes the answer a (consortium of) domain expert(s) would give.
"""

from __future__ import annotations

from .closure import ClosureSystem
from .consortium import (
    Consortium,
    ExampleNamer,
    ExpertAnswer,
    ExpertKind,
    LocalExpertSpec,
    Verdict,
    consortial_answer,
    local_answer,
)
from .context import FormalContext
from .exploration import PartialExample
from .implications import Implication
from .sets import AttributeSet


class FullDomainOracle:
    """A single expert whose block is the whole universe."""

    def __init__(self, target: ClosureSystem, ctx: FormalContext | None = None):
        self.target = target
        self.universe = target.universe
        self.namer = ExampleNamer(target, ctx)
        self._spec = LocalExpertSpec(target.universe.full())

    def answer(self, query: Implication) -> ExpertAnswer:
        answer = local_answer(self._spec, self.target, query)
        if answer.verdict is not Verdict.REFUTE:
            return answer
        name = self.namer.name_for(
            answer.counterexample.mask, self._spec.block.mask
        )
        return ExpertAnswer.refute(
            answer.counterexample, self._spec.block, name, expert=0
        )


class ConsortiumOracle:
    """A consortium of local parties realized against one target system.

    Besides answering queries it can gather the views other parties hold of a
    named counterexample, which is what example combining merges.
    """

    def __init__(
        self,
        consortium: Consortium,
        target: ClosureSystem,
        ctx: FormalContext | None = None,
    ):
        if consortium.universe != target.universe:
            raise ValueError("consortium and target over different universes")
        self.consortium = consortium
        self.target = target
        self.universe = target.universe
        self.namer = ExampleNamer(target, ctx)
        self._view_cache: dict[tuple[str, int], PartialExample | None] = {}

    def answer(self, query: Implication) -> ExpertAnswer:
        return consortial_answer(self.consortium, self.target, query, self.namer)

    def gather_views(
        self, name: str, exclude: int | None = None
    ) -> list[PartialExample]:
        """Views of the named object held by every party except `exclude`.

        A genuine expert always recognizes the object's restriction to its
        block; a pre-expert contributes only when that restriction is among
        the sets it is aware of.
        """
        member = self.namer.resolve(name)
        if member is None:
            return []
        out = []
        for j, spec in enumerate(self.consortium.experts):
            if j == exclude:
                continue
            contribution = self._view_of(name, j, member, spec)
            if contribution is not None:
                out.append(contribution)
        return out

    def _view_of(
        self, name: str, j: int, member: int, spec: LocalExpertSpec
    ) -> PartialExample | None:
        key = (name, j)
        if key not in self._view_cache:
            self._view_cache[key] = party_view(name, member, spec)
        return self._view_cache[key]


def party_view(
    name: str, member: int, spec: LocalExpertSpec
) -> PartialExample | None:
    """One party's view of a full member set, or None when unaware of it.

    A genuine expert always recognizes the restriction of a target member to
    its block; a pre-expert only when that restriction is among the sets it
    is aware of.
    """
    view_mask = member & spec.block.mask
    aware = spec.kind is ExpertKind.EXPERT or any(
        k.mask == view_mask for k in spec.knowledge
    )
    if not aware:
        return None
    u = spec.block.universe
    view = AttributeSet(u, view_mask)
    return PartialExample(name, view, spec.block - view)
