"""Attribute universes and bitset-backed attribute sets.

Every value in this package lives over a fixed, ordered attribute universe.
Sets of attributes are stored as integer bitmasks against that order, so the
usual set operations cost O(|M|/w) machine words.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import UniverseMismatchError


class Universe:
    """A fixed, ordered tuple of distinct attribute names.

    Universes compare and hash by their name tuple, so two independently
    parsed files over the same attributes produce interchangeable values.
    """

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate attribute names: {self.names!r}")
        for name in self.names:
            # names travel through whitespace-separated text formats
            if not name or name.split() != [name]:
                raise ValueError(f"attribute name {name!r} is blank or has whitespace")
        self._index = {name: i for i, name in enumerate(self.names)}

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.names)) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UniverseMismatchError(
                f"attribute {name!r} is not in universe {self.names!r}"
            ) from None

    def empty(self) -> "AttributeSet":
        return AttributeSet(self, 0)

    def full(self) -> "AttributeSet":
        return AttributeSet(self, self.full_mask)

    def subset(self, names: Iterable[str]) -> "AttributeSet":
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return AttributeSet(self, mask)

    def from_mask(self, mask: int) -> "AttributeSet":
        if mask & ~self.full_mask:
            raise ValueError(f"mask {mask:#x} has bits outside the universe")
        return AttributeSet(self, mask)

    def mask_names(self, mask: int) -> tuple[str, ...]:
        return tuple(n for i, n in enumerate(self.names) if mask >> i & 1)

    def lectic_key(self, mask: int) -> int:
        """Numeric key whose natural order is the lectic order on subsets.

        Earlier attributes weigh more, so sets differing first at attribute i
        compare by whether i is present.
        """
        n = len(self.names)
        key = 0
        for i in range(n):
            if mask >> i & 1:
                key |= 1 << (n - 1 - i)
        return key

    def all_masks(self) -> Iterator[int]:
        """All subset masks in lectic order."""
        n = len(self.names)
        for key in range(1 << n):
            yield self._key_to_mask(key, n)

    def _key_to_mask(self, key: int, n: int) -> int:
        mask = 0
        for i in range(n):
            if key >> (n - 1 - i) & 1:
                mask |= 1 << i
        return mask

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Universe) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Universe({list(self.names)!r})"


def common_universe(*values: "AttributeSet") -> Universe:
    if not values:
        raise ValueError("common_universe needs at least one set")
    universe = values[0].universe
    for v in values[1:]:
        if v.universe != universe:
            raise UniverseMismatchError(
                f"mixed universes: {universe!r} vs {v.universe!r}"
            )
    return universe


class AttributeSet:
    """An immutable attribute set over a :class:`Universe`.

    Compares by universe names plus membership, independent of identity.
    """

    __slots__ = ("universe", "mask")

    def __init__(self, universe: Universe, mask: int):
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("AttributeSet is immutable")

    @property
    def names(self) -> tuple[str, ...]:
        return self.universe.mask_names(self.mask)

    @property
    def lectic_key(self) -> int:
        return self.universe.lectic_key(self.mask)

    def __contains__(self, name: str) -> bool:
        return bool(self.mask >> self.universe.index(name) & 1)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def _coerce(self, other: "AttributeSet") -> int:
        if not isinstance(other, AttributeSet):
            raise TypeError(f"expected AttributeSet, got {type(other).__name__}")
        common_universe(self, other)
        return other.mask

    def __or__(self, other: "AttributeSet") -> "AttributeSet":
        return AttributeSet(self.universe, self.mask | self._coerce(other))

    def __and__(self, other: "AttributeSet") -> "AttributeSet":
        return AttributeSet(self.universe, self.mask & self._coerce(other))

    def __sub__(self, other: "AttributeSet") -> "AttributeSet":
        return AttributeSet(self.universe, self.mask & ~self._coerce(other))

    def __le__(self, other: "AttributeSet") -> bool:
        return not (self.mask & ~self._coerce(other))

    def __lt__(self, other: "AttributeSet") -> bool:
        m = self._coerce(other)
        return self.mask != m and not (self.mask & ~m)

    def __ge__(self, other: "AttributeSet") -> bool:
        m = self._coerce(other)
        return not (m & ~self.mask)

    def issubset(self, other: "AttributeSet") -> bool:
        return self <= other

    def complement(self) -> "AttributeSet":
        return AttributeSet(self.universe, self.universe.full_mask & ~self.mask)

    def add(self, name: str) -> "AttributeSet":
        return AttributeSet(self.universe, self.mask | 1 << self.universe.index(name))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AttributeSet)
            and self.universe.names == other.universe.names
            and self.mask == other.mask
        )

    def __hash__(self) -> int:
        return hash((self.universe.names, self.mask))

    def __repr__(self) -> str:
        return "{" + ", ".join(self.names) + "}"
