import pytest
from hypothesis import given, settings, strategies as st

from consortex.closure import (
    ClosureSystem,
    all_closed_sets,
    canonical_base,
    canonical_base_from_operator,
    closed_masks_in_lectic_order,
    drop_redundant,
    enumerate_closure_systems,
    holds_in,
    intersection_closure,
    models_of,
    next_closed_mask,
    reduce_theory,
    theory_holds_in,
)
from consortex.errors import CapacityError
from consortex.implications import (
    Implication,
    ImplicationTheory,
    close_mask_under,
    format_implication,
)
from consortex.sets import AttributeSet, Universe


def sys_from_masks(u, masks):
    return ClosureSystem(u, [AttributeSet(u, m) for m in masks])


def test_closure_system_requires_full_set():
    u = Universe(("a", "b"))
    with pytest.raises(ValueError):
        ClosureSystem(u, [u.subset(["a"])])


def test_closure_system_requires_intersection_closed():
    u = Universe(("a", "b", "c"))
    with pytest.raises(ValueError):
        ClosureSystem(u, [u.subset(["a", "b"]), u.subset(["b", "c"]), u.full()])


def test_closure_of_smallest_member():
    u = Universe(("a", "b", "c"))
    xs = sys_from_masks(u, {0, 0b011, 0b111})
    assert xs.closure_of(u.subset(["a"])) == u.subset(["a", "b"])
    assert xs.closure_of(u.empty()) == u.empty()
    assert xs.closure_of(u.subset(["c"])) == u.full()


def test_sets_listed_in_lectic_order():
    u = Universe(("a", "b"))
    xs = sys_from_masks(u, {0, 0b01, 0b11})
    assert [s.names for s in xs.sets] == [(), ("a",), ("a", "b")]


def test_intersection_closure_adds_missing_meets():
    u = Universe(("a", "b", "c"))
    xs = intersection_closure(u, [0b011, 0b110])
    assert xs.masks == frozenset({0b010, 0b011, 0b110, 0b111})


def test_holds_in():
    u = Universe(("ro", "fl", "ed"))
    xs = intersection_closure(u, [u.subset(["ro", "fl"]).mask, u.subset(["ro"]).mask,
                                  u.subset(["fl", "ed"]).mask])
    assert holds_in(Implication(u.subset(["ed"]), u.subset(["fl"])), xs)
    assert not holds_in(Implication(u.subset(["ro"]), u.subset(["fl"])), xs)


def test_models_of_round_trip():
    u = Universe(("a", "b", "c"))
    t = ImplicationTheory(u, (Implication(u.subset(["a"]), u.subset(["b"])),))
    xs = models_of(t, u)
    assert u.subset(["a"]).mask not in xs.masks
    assert u.subset(["a", "b"]).mask in xs.masks
    assert theory_holds_in(t, xs)
    # the valid implications of the models pin the same system
    assert models_of(canonical_base(xs), u) == xs


def test_next_closed_mask_walks_lectic_chain():
    u = Universe(("a", "b", "c"))
    xs = sys_from_masks(u, {0, 0b001, 0b010, 0b011, 0b111})
    close = xs._close_mask
    chain = [0]
    while True:
        nxt = next_closed_mask(chain[-1], u.size, close)
        if nxt is None:
            break
        chain.append(nxt)
    assert chain == sorted(xs.masks, key=u.lectic_key)
    assert chain == list(closed_masks_in_lectic_order(u.size, close))


def test_all_closed_sets_matches_masks():
    u = Universe(("a", "b"))
    xs = sys_from_masks(u, {0, 0b11})
    assert [s.mask for s in all_closed_sets(xs)] == [0, 0b11]


def test_canonical_base_toy(toy_system):
    base = canonical_base(toy_system)
    assert [format_implication(i) for i in base] == ["ed -> fl"]


def test_canonical_base_of_powerset_is_empty():
    u = Universe(("a", "b", "c"))
    pm = sys_from_masks(u, set(u.all_masks()))
    assert len(canonical_base(pm)) == 0


def test_canonical_base_of_single_member_system():
    u = Universe(("a", "b", "c"))
    xs = sys_from_masks(u, {u.full_mask})
    base = canonical_base(xs)
    assert [format_implication(i) for i in base] == ["-> a b c"]


def test_canonical_base_from_operator_agrees():
    u = Universe(("a", "b", "c", "d"))
    xs = intersection_closure(u, [0b0011, 0b0110, 0b1000])
    via_system = canonical_base(xs)
    via_operator = canonical_base_from_operator(u, xs._close_mask)
    assert via_system == via_operator


def test_reduce_theory_canonicalizes():
    u = Universe(("a", "b", "c"))
    noisy = ImplicationTheory(
        u,
        (
            Implication(u.subset(["a"]), u.subset(["b"])),
            Implication(u.subset(["a", "b"]), u.subset(["c"])),
            Implication(u.subset(["a"]), u.subset(["c"])),
        )
    )
    reduced = reduce_theory(noisy)
    assert models_of(reduced, u) == models_of(noisy, u)
    assert reduced == canonical_base(models_of(noisy, u))


def test_drop_redundant_keeps_semantics():
    u = Universe(("a", "b", "c"))
    noisy = ImplicationTheory(
        u,
        (
            Implication(u.subset(["a"]), u.subset(["b"])),
            Implication(u.subset(["b"]), u.subset(["c"])),
            Implication(u.subset(["a"]), u.subset(["c"])),
        )
    )
    slim = drop_redundant(noisy)
    assert models_of(slim, u) == models_of(noisy, u)
    assert len(slim) == 2


def test_enumeration_counts_pinned():
    # all intersection-closed families containing M, then those with the
    # empty set as a member; both match the published integer sequences
    expected_all = {1: 2, 2: 7, 3: 61}
    expected_empty = {1: 1, 2: 4, 3: 45}
    for n in (1, 2, 3):
        u = Universe(tuple("abcdef"[:n]))
        assert sum(1 for _ in enumerate_closure_systems(u)) == expected_all[n]
        assert (
            sum(1 for _ in enumerate_closure_systems(u, require_empty=True))
            == expected_empty[n]
        )


def test_enumeration_caps():
    u = Universe(tuple(f"m{i}" for i in range(5)))
    with pytest.raises(CapacityError):
        next(enumerate_closure_systems(u))


small_universe = st.sampled_from([2, 3, 4])


@settings(max_examples=40, deadline=None)
@given(small_universe, st.data())
def test_canonical_base_is_sound_and_complete(n, data):
    u = Universe(tuple(f"m{i}" for i in range(n)))
    seeds = data.draw(
        st.lists(st.integers(min_value=0, max_value=(1 << n) - 1), max_size=5)
    )
    xs = intersection_closure(u, seeds)
    base = canonical_base(xs)
    assert theory_holds_in(base, xs)
    assert models_of(base, u) == xs


@settings(max_examples=40, deadline=None)
@given(small_universe, st.data())
def test_canonical_base_is_irredundant(n, data):
    u = Universe(tuple(f"m{i}" for i in range(n)))
    seeds = data.draw(
        st.lists(st.integers(min_value=0, max_value=(1 << n) - 1), max_size=5)
    )
    xs = intersection_closure(u, seeds)
    base = list(canonical_base(xs))
    pairs = [(i.premise.mask, i.conclusion.mask) for i in base]
    for j, (a, b) in enumerate(pairs):
        rest = pairs[:j] + pairs[j + 1 :]
        assert close_mask_under(rest, a) & b != b
