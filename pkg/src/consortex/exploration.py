"""Attribute exploration against partial examples, with repair.

The exploration loop maintains accepted implications, partial counterexamples
(present / absent / unknown per attribute), and deferred queries. Each query
is the lectically smallest set closed under the accepted implications whose
undisputed closure candidate is still larger than the set itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Protocol, runtime_checkable

from .closure import (
    closed_masks_in_lectic_order,
    drop_redundant,
    reduce_theory,
)
from .errors import ConflictingEvidenceError, ProtocolError
from .consortium import ExpertAnswer, Verdict
from .implications import (
    Implication,
    ImplicationTheory,
    close_mask_under,
    format_implication,
)
from .sets import AttributeSet, Universe

# A reduction to canonical form can reintroduce an implication refuted by a
# stored example; re-sweeping converges quickly in practice, and past this
# bound we keep the clean theory and only drop entailed members.
_REDUCE_ROUNDS = 8


@dataclass(frozen=True)
class PartialExample:
    """A named object with certainly-present and certainly-absent attributes."""

    name: str
    present: AttributeSet
    absent: AttributeSet

    def __post_init__(self) -> None:
        if self.present.universe != self.absent.universe:
            raise ConflictingEvidenceError("present and absent over different universes")
        if self.present.mask & self.absent.mask:
            both = self.present & self.absent
            raise ConflictingEvidenceError(
                f"{self.name!r} marks {both!r} both present and absent"
            )

    @property
    def universe(self) -> Universe:
        return self.present.universe

    def merge(self, other: "PartialExample") -> "PartialExample":
        """Union of two views of the same object; clashes are loud errors."""
        if other.name != self.name:
            raise ConflictingEvidenceError(
                f"cannot merge {self.name!r} with {other.name!r}"
            )
        return PartialExample(
            self.name, self.present | other.present, self.absent | other.absent
        )

    def serialize(self) -> str:
        parts = [self.name, ":"]
        for i, attr in enumerate(self.universe.names):
            if self.present.mask >> i & 1:
                parts.append("+" + attr)
            elif self.absent.mask >> i & 1:
                parts.append("-" + attr)
        return " ".join(parts)


def refutes(example: PartialExample, imp: Implication) -> bool:
    """Certain refutation: premise surely present, some conclusion surely absent."""
    return (
        imp.premise <= example.present
        and bool(imp.conclusion.mask & example.absent.mask)
    )


class ExampleRegistry:
    """Merged partial examples keyed by object name."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[PartialExample] = ()):
        merged: dict[str, PartialExample] = {}
        for e in entries:
            merged[e.name] = merged[e.name].merge(e) if e.name in merged else e
        self._entries = merged

    def get(self, name: str) -> PartialExample | None:
        return self._entries.get(name)

    def names(self) -> tuple[str, ...]:
        return tuple(self._entries)

    def entries(self) -> tuple[PartialExample, ...]:
        return tuple(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExampleRegistry) and self._entries == other._entries


def combine_example(
    registry: ExampleRegistry, contribution: PartialExample
) -> ExampleRegistry:
    """Registry with the contribution merged in under its name."""
    existing = registry.get(contribution.name)
    merged = existing.merge(contribution) if existing else contribution
    out = ExampleRegistry()
    out._entries = dict(registry._entries)
    out._entries[contribution.name] = merged
    return out


class ExplorationState:
    """Mutable state of one exploration run."""

    def __init__(self, universe: Universe, merge_names: bool = True):
        self.universe = universe
        self.accepted: list[Implication] = []
        self.examples: list[PartialExample] = []
        self.deferred: list[Implication] = []
        self.merge_names = merge_names
        self._by_name: dict[str, int] = {}
        self.queries = 0
        self.accepts = 0
        self.refutes = 0
        self.nulls = 0
        self.repairs = 0

    def theory(self) -> ImplicationTheory:
        return ImplicationTheory(self.universe, self.accepted)

    def add_example(self, example: PartialExample) -> PartialExample:
        if self.merge_names and example.name in self._by_name:
            i = self._by_name[example.name]
            self.examples[i] = self.examples[i].merge(example)
            return self.examples[i]
        self._by_name.setdefault(example.name, len(self.examples))
        self.examples.append(example)
        return example

    def undisputed_closure(self, premise_mask: int) -> int:
        """Largest conclusion not certainly refuted for this premise."""
        out = self.universe.full_mask
        for e in self.examples:
            if premise_mask & ~e.present.mask == 0:
                out &= ~e.absent.mask
        return out

    def validate(self) -> None:
        """Assert that no accepted implication is refuted by a stored example."""
        for f in self.accepted:
            for e in self.examples:
                if refutes(e, f):
                    raise AssertionError(f"{f!r} is refuted by stored example {e.name!r}")


def next_query(state: ExplorationState) -> Implication | None:
    """Next open question, or None when the exploration is finished.

    Scans the sets closed under the accepted implications in lectic order and
    returns the first whose undisputed closure candidate exceeds it, skipping
    queries already deferred.
    """
    pairs = [(i.premise.mask, i.conclusion.mask) for i in state.accepted]
    skip = {(i.premise.mask, i.conclusion.mask) for i in state.deferred}
    u = state.universe
    for mask in closed_masks_in_lectic_order(
        u.size, lambda m: close_mask_under(pairs, m)
    ):
        candidate = state.undisputed_closure(mask)
        if candidate == mask or (mask, candidate) in skip:
            continue
        return Implication(AttributeSet(u, mask), AttributeSet(u, candidate))
    return None


def submit_answer(
    state: ExplorationState,
    query: Implication,
    answer: ExpertAnswer,
    views: Iterable[PartialExample] = (),
) -> ExplorationState:
    """Fold one answer into the state.

    Accept stores the implication; Null defers the query; Refute turns the
    counterexample into a partial example (absent within the answering block),
    merges any gathered views of the same object, and runs repair.
    """
    answer.validate_for(query)
    if answer.verdict is Verdict.ACCEPT:
        state.accepts += 1
        key = (query.premise.mask, query.conclusion.mask)
        if key not in {(i.premise.mask, i.conclusion.mask) for i in state.accepted}:
            state.accepted.append(query)
        return state
    if answer.verdict is Verdict.NULL:
        state.nulls += 1
        if query not in state.deferred:
            state.deferred.append(query)
        return state
    state.refutes += 1
    name = answer.name or (
        "x[" + ",".join(answer.counterexample.names) + "]"
    )
    example = PartialExample(
        name, answer.counterexample, answer.block - answer.counterexample
    )
    merged = state.add_example(example)
    for view in views:
        if view.name != name:
            raise ProtocolError("gathered view for a different object name")
        merged = state.add_example(view)
    if not refutes(merged, query):
        raise ProtocolError("counterexample does not refute the query")
    repair(state, merged)
    return state


def _first_violation(
    implications: Iterable[Implication], examples: Iterable[PartialExample]
) -> tuple[int, Implication, PartialExample] | None:
    for i, f in enumerate(implications):
        for e in examples:
            if refutes(e, f):
                return i, f, e
    return None


def _sweep(state: ExplorationState) -> int:
    """Replace refuted accepted implications until none is refuted.

    Replacing (A, B) refuted by example e with present set C yields
    A -> B ∩ C plus A ∪ {m} -> B for every m outside A ∪ C; each replacement
    is strictly weaker, so the rewriting terminates.
    """
    events = 0
    u = state.universe
    while True:
        hit = _first_violation(state.accepted, state.examples)
        if hit is None:
            return events
        idx, f, e = hit
        state.accepted.pop(idx)
        existing = {(i.premise.mask, i.conclusion.mask) for i in state.accepted}
        c_mask = e.present.mask
        replacements = [
            Implication(f.premise, f.conclusion & e.present)
        ]
        outside = u.full_mask & ~(f.premise.mask | c_mask)
        for i in range(u.size):
            if outside >> i & 1:
                replacements.append(
                    Implication(
                        AttributeSet(u, f.premise.mask | 1 << i), f.conclusion
                    )
                )
        for g in replacements:
            key = (g.premise.mask, g.conclusion.mask)
            if g.is_trivial() or key in existing:
                continue
            existing.add(key)
            state.accepted.insert(idx, g)
            idx += 1
        events += 1
        state.repairs += 1


def repair(state: ExplorationState, example: PartialExample | None = None) -> ExplorationState:
    """Restore the no-refuted-accepted invariant, then reduce the base.

    The sweep covers every stored example, not only the newly merged one,
    because replacement implications must themselves survive all evidence.
    A repair event that changed anything reopens previously deferred queries.
    """
    events = _sweep(state)
    for _ in range(_REDUCE_ROUNDS):
        reduced = list(reduce_theory(state.theory()))
        state.accepted = reduced
        if _first_violation(reduced, state.examples) is None:
            break
        events += _sweep(state)
    else:
        state.accepted = list(drop_redundant(state.theory()))
    if events:
        state.deferred.clear()
    return state


@dataclass(frozen=True)
class ExploreOptions:
    combining: bool = True
    accept_on_null: bool = False
    max_queries: int | None = None


@dataclass(frozen=True)
class ExplorationReport:
    """Outcome of a finished exploration run."""

    universe: Universe
    base: ImplicationTheory
    examples: tuple[PartialExample, ...]
    deferred: tuple[Implication, ...]
    queries: int
    accepts: int
    refutes: int
    nulls: int
    repairs: int

    @property
    def interval_note(self) -> bool:
        """Deferred queries leave an interval of closure systems undecided."""
        return bool(self.deferred)

    def serialize(self) -> str:
        lines = ["[base]"]
        lines.extend(format_implication(i) for i in self.base)
        lines.append("[examples]")
        lines.extend(e.serialize() for e in self.examples)
        lines.append("[deferred]")
        lines.extend(format_implication(i) for i in self.deferred)
        lines.append("[meta]")
        lines.append(f"queries = {self.queries}")
        lines.append(f"accepts = {self.accepts}")
        lines.append(f"refutes = {self.refutes}")
        lines.append(f"nulls = {self.nulls}")
        lines.append(f"repairs = {self.repairs}")
        lines.append(f"deferred = {len(self.deferred)}")
        lines.append(f"interval = {'yes' if self.deferred else 'no'}")
        return "\n".join(lines) + "\n"


def build_report(state: ExplorationState) -> ExplorationReport:
    repair_events = state.repairs
    reduced = list(reduce_theory(state.theory()))
    if _first_violation(reduced, state.examples) is None:
        base = ImplicationTheory(state.universe, reduced)
    else:
        base = drop_redundant(state.theory())
    return ExplorationReport(
        universe=state.universe,
        base=base,
        examples=tuple(state.examples),
        deferred=tuple(state.deferred),
        queries=state.queries,
        accepts=state.accepts,
        refutes=state.refutes,
        nulls=state.nulls,
        repairs=repair_events,
    )


@runtime_checkable
class Answerer(Protocol):
    def answer(self, query: Implication) -> ExpertAnswer: ...


def explore(
    answerer: Answerer,
    universe: Universe,
    options: ExploreOptions = ExploreOptions(),
) -> ExplorationReport:
    """Run a full exploration against an answering party.

    When combining is on and the answerer can gather views of a named
    counterexample from its other parties, each refutation merges all views
    before repair; with combining off every contribution stands alone.
    """
    state = ExplorationState(universe, merge_names=options.combining)
    gather = getattr(answerer, "gather_views", None)
    while True:
        if options.max_queries is not None and state.queries >= options.max_queries:
            break
        query = next_query(state)
        if query is None:
            break
        answer = answerer.answer(query)
        state.queries += 1
        if answer.verdict is Verdict.NULL and options.accept_on_null:
            answer = ExpertAnswer.accept()
        views: tuple[PartialExample, ...] = ()
        if (
            answer.verdict is Verdict.REFUTE
            and options.combining
            and gather is not None
            and answer.name is not None
        ):
            views = tuple(gather(answer.name, exclude=answer.expert))
        submit_answer(state, query, answer, views)
    return build_report(state)
