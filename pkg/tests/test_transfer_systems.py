"""Tests for transfer systems: validation, closure, enumeration, pairing.

The enumeration backtracker is cross-checked against the one oracle that
cannot be wrong: filter every subset of the proper inclusion pairs
through the validator.  That only scales to a handful of groups, which is
exactly why the backtracker exists.
"""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transferkit import DomainError, ResourceError, SpecError, builtin_lattice
from transferkit.gsets import GMap, GSet
from transferkit.transfer_systems import (
    TransferSystem,
    admissible,
    compatible,
    compatible_pairs,
    enumerate_transfer_systems,
    forced_additive_floor,
    load_ts_text,
    map_in_indexing,
    parse_ts_text,
)


def naive_systems(lat):
    """Every valid relation, by brute force over subsets of proper pairs."""
    proper = [
        (k, h)
        for h in range(lat.size)
        for k in range(lat.size)
        if k != h and lat.leq(k, h)
    ]
    rows_list = []
    for chosen in range(1 << len(proper)):
        pairs = [p for i, p in enumerate(proper) if chosen >> i & 1]
        ts = TransferSystem.from_pairs_raw(lat, pairs)
        if ts.is_valid():
            rows_list.append(ts.rows)
    return sorted(rows_list)


# -- constructors and queries -----------------------------------------------


def test_trivial_and_complete_validate():
    lat = builtin_lattice("D4")
    assert TransferSystem.trivial(lat).is_valid()
    assert TransferSystem.complete(lat).is_valid()
    assert TransferSystem.trivial(lat).refines(TransferSystem.complete(lat))


def test_generate_rejects_non_nested():
    lat = builtin_lattice("C2xC2")
    with pytest.raises(DomainError):
        TransferSystem.generate(lat, [(1, 2)])


def test_admissible_requires_nesting():
    lat = builtin_lattice("C2xC2")
    ts = TransferSystem.complete(lat)
    assert admissible(ts, 0, 4)
    with pytest.raises(DomainError):
        admissible(ts, 1, 2)


def test_pairs_and_class_arrows_on_s3():
    lat = builtin_lattice("S3")
    full = lat.size - 1
    ts = TransferSystem.complete(lat)
    assert all(lat.leq(k, h) for k, h in ts.pairs())
    # e -> C2, e -> C3, e -> G, C2 -> G, C3 -> G at class level
    assert len(ts.class_arrows()) == 5


def test_refines_needs_common_lattice():
    a = TransferSystem.trivial(builtin_lattice("C4"))
    b = TransferSystem.trivial(builtin_lattice("C6"))
    with pytest.raises(DomainError):
        a.refines(b)


# -- validation -------------------------------------------------------------


def test_skip_level_fails_with_one_intersection_violation(data_text):
    _, ts = load_ts_text(data_text("c4_skip.ts"), generated=False)
    violations = ts.validate()
    assert len(violations) == 1
    v = violations[0]
    assert v.kind == "intersection"
    assert "C2" in v.text


def test_two_step_file_is_already_closed(data_text):
    lat, ts = load_ts_text(data_text("c4_two_step.ts"))
    raw = TransferSystem.from_pairs_raw(lat, ts.pairs())
    assert raw.rows == ts.rows
    assert ts.is_valid()


def test_validator_reports_every_axiom_kind():
    lat = builtin_lattice("S3")
    # one non-normal C2 related to G, nothing else: conjugation,
    # transitivity, and intersection closure all fail somewhere
    c2 = next(
        i for i in range(lat.size)
        if lat.subgroup(i).order == 2 and lat.core(i) == 0
    )
    ts = TransferSystem.from_pairs_raw(lat, [(c2, lat.size - 1)])
    kinds = {v.kind for v in ts.validate()}
    assert "conjugation" in kinds
    assert "intersection" in kinds


def test_validator_flags_non_nested_rows():
    lat = builtin_lattice("C2xC2")
    ts = TransferSystem(lat, [1, 2 | 4, 0, 8, 31])
    kinds = {v.kind for v in ts.validate()}
    assert "reflexivity" in kinds
    assert "containment" in kinds


# -- closure ----------------------------------------------------------------


def test_generate_closes_the_skip_arrow():
    lat = builtin_lattice("C4")
    ts = TransferSystem.generate(lat, [(0, 2)])
    assert ts.admits(0, 1)
    assert ts.is_valid()


def test_closure_forces_trivial_transfer_on_d4():
    lat = builtin_lattice("D4")
    full = lat.size - 1
    reflection = next(
        i for i in range(lat.size)
        if lat.subgroup(i).order == 2 and lat.core(i) == 0
    )
    ts = TransferSystem.generate(lat, [(reflection, full)])
    assert ts.admits(0, full)
    assert ts.is_valid()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_generate_idempotent_and_monotone(data):
    lat = builtin_lattice("S3")
    proper = [
        (k, h)
        for h in range(lat.size)
        for k in range(lat.size)
        if k != h and lat.leq(k, h)
    ]
    small = data.draw(st.sets(st.sampled_from(proper), max_size=4))
    extra = data.draw(st.sets(st.sampled_from(proper), max_size=4))
    ts = TransferSystem.generate(lat, small)
    again = TransferSystem.generate(lat, ts.pairs())
    assert again.rows == ts.rows
    bigger = TransferSystem.generate(lat, small | extra)
    assert ts.refines(bigger)


# -- enumeration ------------------------------------------------------------


@pytest.mark.parametrize("spec", ["C2", "C4", "C6", "C2xC2", "S3"])
def test_enumeration_matches_naive_filter(spec, enumerated):
    lat = builtin_lattice(spec)
    expected = naive_systems(lat)
    got = [ts.rows for ts in enumerated(spec)]
    assert got == expected


@pytest.mark.parametrize("spec", ["S3", "D4", "Q8", "A4"])
def test_enumerated_systems_all_validate(spec, enumerated):
    systems = enumerated(spec)
    assert len({ts.rows for ts in systems}) == len(systems)
    for ts in systems:
        assert ts.is_valid()


def test_enumeration_is_deterministic():
    lat = builtin_lattice("C2xC2")
    first = [ts.rows for ts in enumerate_transfer_systems(lat)]
    second = [ts.rows for ts in enumerate_transfer_systems(lat)]
    assert first == second


def test_enumeration_gate():
    with pytest.raises(ResourceError):
        enumerate_transfer_systems(builtin_lattice("S4"))


@pytest.mark.parametrize(
    "spec",
    ["C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12",
     "C2xC2", "C2xC4", "C3xC3", "S3", "D4", "D5", "Q8", "A4"],
)
def test_counts_against_snapshot(spec, enumerated, snapshot):
    stored = snapshot("enumeration_counts.json")
    assert len(enumerated(spec)) == stored["transfer_systems"][spec]


# -- compatibility ----------------------------------------------------------


def test_v4_pair_is_incompatible_with_named_witness(data_text):
    lat, tm = load_ts_text(data_text("v4_incompatible_tm.ts"))
    _, ta = load_ts_text(data_text("v4_incompatible_ta.ts"))
    report = compatible(tm, ta)
    assert not report.ok
    assert report.refines_ok
    assert report.witness == (4, 1, 2)
    text = report.describe(lat)
    assert "A=C2xC2" in text and "B=C2#1" in text and "C=C2#2" in text


def test_compatible_requires_refinement():
    lat = builtin_lattice("C4")
    report = compatible(TransferSystem.complete(lat), TransferSystem.trivial(lat))
    assert not report.ok
    assert not report.refines_ok
    assert report.witness is None


def test_diagonal_is_compatible_over_anything(enumerated):
    lat = builtin_lattice("S3")
    diag = TransferSystem.trivial(lat)
    for ts in enumerated("S3"):
        assert compatible(diag, ts).ok


def test_anything_is_compatible_under_complete(enumerated):
    lat = builtin_lattice("S3")
    comp = TransferSystem.complete(lat)
    for ts in enumerated("S3"):
        assert compatible(ts, comp).ok


def test_compatible_implies_refines(enumerated):
    systems = enumerated("C2xC2")
    for i, j in compatible_pairs(systems):
        assert systems[i].refines(systems[j])


def test_fast_witness_agrees_with_naive_scan(enumerated):
    lat = builtin_lattice("C2xC2")
    systems = enumerated("C2xC2")

    def naive(mult, add):
        if not mult.refines(add):
            return (False, None)
        for a in range(lat.size):
            for b in range(lat.size):
                if not mult.admits(b, a):
                    continue
                for c in range(lat.size):
                    if not lat.leq(c, a):
                        continue
                    if add.admits(lat.intersect(b, c), b) and not add.admits(c, a):
                        return (False, (a, b, c))
        return (True, None)

    for mult in systems:
        for add in systems:
            report = compatible(mult, add)
            assert (report.ok, report.witness) == naive(mult, add)


@pytest.mark.parametrize("spec", ["C4", "S3"])
def test_forced_floor_is_least_compatible(spec, enumerated):
    systems = enumerated(spec)
    by_rows = {ts.rows for ts in systems}
    for mult in systems:
        floor = forced_additive_floor(mult)
        assert floor.rows in by_rows
        assert compatible(mult, floor).ok
        for add in systems:
            if compatible(mult, add).ok:
                assert floor.refines(add)


# -- map admissibility ------------------------------------------------------


def test_identity_and_fold_maps_always_indexed(enumerated):
    lat = builtin_lattice("C4")
    grp = lat.group
    from transferkit import Subgroup

    x = GSet.coset_space(Subgroup.full(grp), lat.subgroup(1))
    double = x.disjoint_union(x)
    fold = GMap(double, x, list(range(x.size)) * 2)
    ident = GMap(x, x, range(x.size))
    for ts in enumerated("C4"):
        assert map_in_indexing(ts, ident)
        assert map_in_indexing(ts, fold)


def test_quotient_map_indexed_only_with_the_arrow(data_text):
    lat, two_step = load_ts_text(data_text("c4_two_step.ts"))
    grp = lat.group
    from transferkit import Subgroup

    full = Subgroup.full(grp)
    free = GSet.coset_space(full, Subgroup.trivial(grp))
    point = GSet.trivial_set(full, 1)
    quotient = GMap.constant(free, point, 0)
    assert map_in_indexing(two_step, quotient)
    assert not map_in_indexing(TransferSystem.trivial(lat), quotient)


# -- text format ------------------------------------------------------------


def test_parse_round_trip(data_text):
    lat, tm = load_ts_text(data_text("v4_incompatible_tm.ts"))
    text = tm.to_arrows_text("C2xC2")
    lat2, back = load_ts_text(text)
    assert back.rows == tm.rows


def test_parse_header_and_comments():
    spec, arrows = parse_ts_text(
        "# leading comment\ngroup: S3\n\ne -> C3\nC3 -> S3\n"
    )
    assert spec == "S3"
    assert arrows == [("e", "C3"), ("C3", "S3")]


@pytest.mark.parametrize(
    "text",
    [
        "e -> C4\n",                      # missing header
        "group:\n",                       # empty group
        "group: C4\nnonsense line\n",     # not an arrow
        "group: C4\ne -> \n",             # incomplete arrow
    ],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(SpecError):
        parse_ts_text(text)


def test_load_rejects_unknown_label():
    with pytest.raises(SpecError):
        load_ts_text("group: C4\ne -> C8\n")


def test_load_rejects_non_nested_generated():
    with pytest.raises(DomainError):
        load_ts_text("group: C2xC2\nC2#1 -> C2#2\n")


def test_json_dict_shape(data_text):
    _, tm = load_ts_text(data_text("v4_incompatible_tm.ts"))
    doc = tm.to_json_dict()
    assert doc["group"] == "C2xC2"
    assert ["C2#1", "C2xC2"] in doc["arrows"]
