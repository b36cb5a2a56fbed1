"""Formal contexts: derivation operators, intents, Burmeister text format."""

from __future__ import annotations

from typing import Iterable

from .closure import ClosureSystem, closed_masks_in_lectic_order
from .errors import FormatError, UniverseMismatchError
from .sets import AttributeSet, Universe


class FormalContext:
    """Objects, attributes, and an incidence relation between them."""

    __slots__ = ("objects", "universe", "rows")

    def __init__(
        self,
        objects: Iterable[str],
        universe: Universe,
        rows: Iterable[AttributeSet],
    ):
        objects = tuple(objects)
        if len(set(objects)) != len(objects):
            raise ValueError(f"duplicate object names: {objects!r}")
        row_masks = []
        for row in rows:
            if row.universe != universe:
                raise UniverseMismatchError("context row over a different universe")
            row_masks.append(row.mask)
        if len(row_masks) != len(objects):
            raise ValueError(
                f"{len(objects)} objects but {len(row_masks)} incidence rows"
            )
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "rows", tuple(row_masks))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("FormalContext is immutable")

    def row(self, obj: str) -> AttributeSet:
        """The attribute set of one object."""
        try:
            i = self.objects.index(obj)
        except ValueError:
            raise KeyError(f"unknown object {obj!r}") from None
        return AttributeSet(self.universe, self.rows[i])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FormalContext)
            and self.objects == other.objects
            and self.universe == other.universe
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.objects, self.universe, self.rows))

    def __repr__(self) -> str:
        return f"FormalContext({len(self.objects)} objects, {self.universe!r})"


def derive_attributes(ctx: FormalContext, objs: Iterable[str]) -> AttributeSet:
    """Attributes shared by every listed object (A')."""
    mask = ctx.universe.full_mask
    for name in objs:
        mask &= ctx.rows[_object_index(ctx, name)]
    return AttributeSet(ctx.universe, mask)


def derive_objects(ctx: FormalContext, attrs: AttributeSet) -> frozenset[str]:
    """Objects incident to every member of `attrs` (B')."""
    if attrs.universe != ctx.universe:
        raise UniverseMismatchError("derive_objects across universes")
    b = attrs.mask
    return frozenset(
        name for name, row in zip(ctx.objects, ctx.rows) if b & ~row == 0
    )


def _object_index(ctx: FormalContext, name: str) -> int:
    try:
        return ctx.objects.index(name)
    except ValueError:
        raise KeyError(f"unknown object {name!r}") from None


def intent_closure(ctx: FormalContext, attrs: AttributeSet) -> AttributeSet:
    """B'' for an attribute set B."""
    if attrs.universe != ctx.universe:
        raise UniverseMismatchError("intent_closure across universes")
    return AttributeSet(ctx.universe, _intent_close_mask(ctx, attrs.mask))


def _intent_close_mask(ctx: FormalContext, mask: int) -> int:
    out = ctx.universe.full_mask
    for row in ctx.rows:
        if mask & ~row == 0:
            out &= row
    return out


def all_intents(ctx: FormalContext) -> ClosureSystem:
    """Every intent of the context, via lectic-order next-closure."""
    masks = closed_masks_in_lectic_order(
        ctx.universe.size, lambda m: _intent_close_mask(ctx, m)
    )
    return ClosureSystem._trusted(ctx.universe, frozenset(masks))


def context_from_closure_system(system: ClosureSystem) -> FormalContext:
    """A context whose intents are exactly the given closure system.

    Uses one object per intersection-irreducible member as a minimal witness;
    a system consisting only of M gets a single fully-incident object.
    """
    u = system.universe
    irreducible = []
    for m in system.masks:
        meet = u.full_mask
        for other in system.masks:
            if other != m and m & ~other == 0:
                meet &= other
        if meet != m:
            irreducible.append(m)
    if not irreducible:
        irreducible = [u.full_mask]
    irreducible.sort(key=u.lectic_key)
    objects = [f"o{i}" for i in range(len(irreducible))]
    rows = [AttributeSet(u, m) for m in irreducible]
    return FormalContext(objects, u, rows)


def parse_burmeister(text: str) -> FormalContext:
    """Read a context in Burmeister .cxt form.

    Header letter B, the object and attribute counts, one name per line for
    objects then attributes, then one X/. incidence row per object. A classic
    context-name line directly after the B is tolerated.
    """
    lines = text.splitlines()
    pos = 0

    def next_line(expect: str) -> tuple[str, int]:
        nonlocal pos
        while pos < len(lines) and not lines[pos].strip():
            pos += 1
        if pos >= len(lines):
            raise FormatError(f"unexpected end of file, expected {expect}", len(lines))
        pos += 1
        return lines[pos - 1], pos

    header, lineno = next_line("header 'B'")
    if header.strip() != "B":
        raise FormatError(f"expected header 'B', found {header!r}", lineno)

    counts: list[int] = []
    name_line_allowed = True
    while len(counts) < 2:
        raw, lineno = next_line("a count")
        token = raw.strip()
        try:
            value = int(token)
        except ValueError:
            if name_line_allowed:
                name_line_allowed = False  # optional context-name line
                continue
            raise FormatError(f"expected a count, found {token!r}", lineno) from None
        name_line_allowed = False
        if value < 0:
            raise FormatError(f"counts must be non-negative, found {value}", lineno)
        counts.append(value)
    n_objects, n_attributes = counts

    def read_names(count: int, what: str) -> list[str]:
        names = []
        for _ in range(count):
            raw, lineno = next_line(f"a {what} name")
            name = raw.strip()
            if not name:
                raise FormatError(f"empty {what} name", lineno)
            names.append(name)
        return names

    objects = read_names(n_objects, "object")
    attributes = read_names(n_attributes, "attribute")
    try:
        universe = Universe(attributes)
    except ValueError as exc:
        raise FormatError(str(exc)) from None

    rows = []
    for _ in range(n_objects):
        raw, lineno = next_line("an incidence row")
        row = raw.strip()
        if len(row) != n_attributes:
            raise FormatError(
                f"row has {len(row)} cells, expected {n_attributes}", lineno
            )
        mask = 0
        for i, ch in enumerate(row):
            if ch == "X":
                mask |= 1 << i
            elif ch != ".":
                raise FormatError(f"incidence cells must be 'X' or '.', found {ch!r}", lineno)
        rows.append(AttributeSet(universe, mask))
    try:
        return FormalContext(objects, universe, rows)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_burmeister(ctx: FormalContext) -> str:
    out = ["B", "", str(len(ctx.objects)), str(ctx.universe.size)]
    out.extend(ctx.objects)
    out.extend(ctx.universe.names)
    for row in ctx.rows:
        out.append(
            "".join("X" if row >> i & 1 else "." for i in range(ctx.universe.size))
        )
    return "\n".join(out) + "\n"
