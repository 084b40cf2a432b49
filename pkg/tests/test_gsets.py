"""Tests for finite actions and the class-profile calculus.

The guiding invariant: every counting-based operation must agree with the
same operation done on materialized points.  The random sweeps below pin
their seeds so failures reproduce.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from transferkit import DomainError, ResourceError, Subgroup, builtin_lattice
from transferkit.gsets import (
    GMap,
    GSet,
    coinduce,
    coinduce_classes,
    conjugate_classes,
    dependent_product,
    exponential_diagram,
    induce,
    induce_classes,
    isomorphic,
    materialize_profile,
    product_classes,
    profile_of_gset,
    profile_to_text,
    pullback,
    restrict_classes,
    slice_profile,
)


def lat_of(spec):
    return builtin_lattice(spec)


# -- basic actions ----------------------------------------------------


def test_coset_space_is_transitive_with_conjugate_stabilizers():
    lat = lat_of("S3")
    full = Subgroup.full(lat.group)
    x = GSet.coset_space(full, lat.subgroup(1))
    x.check()
    assert x.size == 3
    assert len(x.orbits()) == 1
    stabs = {x.stabilizer_mask(i) for i in range(3)}
    assert stabs == {lat.subgroup(i).mask for i in (1, 2, 3)}


def test_free_orbit_is_regular():
    lat = lat_of("D4")
    x = GSet.free_orbit(Subgroup.full(lat.group))
    x.check()
    assert x.size == 8
    assert all(x.stabilizer_mask(i) == 1 for i in range(8))


def test_trivial_set_profile():
    lat = lat_of("C4")
    full = Subgroup.full(lat.group)
    x = GSet.trivial_set(full, 3)
    assert len(x.orbits()) == 3
    assert profile_of_gset(lat, lat.full_index, x) == {lat.full_index: 3}


def test_coset_space_requires_containment():
    lat = lat_of("S3")
    c2 = lat.subgroup(1)
    c3 = lat.subgroup(4)
    with pytest.raises(DomainError):
        GSet.coset_space(c2, c3)


def test_conjugate_coset_spaces_are_isomorphic():
    lat = lat_of("S3")
    full = Subgroup.full(lat.group)
    a = GSet.coset_space(full, lat.subgroup(1))
    b = GSet.coset_space(full, lat.subgroup(2))
    c = GSet.coset_space(full, lat.subgroup(4))
    assert isomorphic(a, b)
    assert not isomorphic(a, c)


def test_disjoint_union_and_product_profiles():
    lat = lat_of("C4")
    full = Subgroup.full(lat.group)
    free = GSet.free_orbit(full)
    pt = GSet.trivial_set(full, 1)
    both = free.disjoint_union(pt)
    assert both.size == 5
    assert profile_of_gset(lat, 2, both) == {0: 1, 2: 1}
    # multiplying by a free orbit frees everything
    assert profile_of_gset(lat, 2, both.product(free)) == {0: 5}
    # the one-point set is the unit
    assert isomorphic(both.product(pt), both)


def test_restriction_mackey_example():
    lat = lat_of("S3")
    full = Subgroup.full(lat.group)
    c3 = lat.subgroup(4)
    x = GSet.coset_space(full, lat.subgroup(1))
    down = x.restrict(c3)
    # three cosets of C2 form one free C3-orbit
    assert len(down.orbits()) == 1
    assert down.stabilizer_mask(0) == 1


def test_equivariance_is_validated():
    lat = lat_of("C4")
    full = Subgroup.full(lat.group)
    free = GSet.free_orbit(full)
    with pytest.raises(DomainError):
        GMap(free, free, [0, 1, 3, 2])
    GMap(free, free, [2, 3, 0, 1])  # right translation commutes


def test_action_leaving_point_set_is_rejected():
    lat = lat_of("C2")
    full = Subgroup.full(lat.group)
    with pytest.raises(DomainError):
        GSet.from_action(full, [0, 1], lambda g, p: p + g)


# -- induction and coinduction ----------------------------------------


def test_induce_coset_space():
    lat = lat_of("D4")
    c2 = lat.subgroup(2)     # the center
    c4 = lat.subgroup(6)
    x = GSet.coset_space(c4, c2)
    up = induce(x, Subgroup.full(lat.group))
    up.check()
    assert up.size == 4
    assert profile_of_gset(lat, lat.full_index, up) == \
        induce_classes(lat, 6, lat.full_index, profile_of_gset(lat, 6, x))


def test_induce_size_multiplies_by_index():
    lat = lat_of("S3")
    c3 = lat.subgroup(4)
    x = GSet.trivial_set(c3, 2)
    up = induce(x, Subgroup.full(lat.group))
    assert up.size == 4
    assert len(up.orbits()) == 2


def test_coinduce_of_trivial_points():
    """map_e(C2, n points) has n fixed points and n(n-1)/2 free orbits."""
    lat = lat_of("C2")
    for n in range(5):
        prof = coinduce_classes(lat, 0, 1, {0: n})
        expect = {}
        if n:
            expect[1] = n
        if n >= 2:
            expect[0] = n * (n - 1) // 2
        assert prof == expect


def test_coinduce_materialized_matches_counting():
    lat = lat_of("D4")
    center = lat.subgroup(2)
    x = GSet.coset_space(center, Subgroup.trivial(lat.group))
    x = x.disjoint_union(GSet.trivial_set(center, 1))
    co = coinduce(x, Subgroup.full(lat.group))
    co.check()
    assert co.size == 3 ** 4
    assert profile_of_gset(lat, lat.full_index, co) == coinduce_classes(
        lat, 2, lat.full_index, profile_of_gset(lat, 2, x)
    )


def test_coinduce_along_identity_is_identity():
    lat = lat_of("S3")
    k_lat = lat.restrict(4)
    prof = {0: 2, 1: 1}
    assert coinduce_classes(lat, 4, 4, prof) == prof


def test_coinduce_empty_set():
    lat = lat_of("C4")
    assert coinduce_classes(lat, 1, 2, {}) == {}


def test_coinduce_point_cap():
    lat = lat_of("D4")
    x = GSet.trivial_set(Subgroup.trivial(lat.group), 5)
    with pytest.raises(ResourceError):
        coinduce(x, Subgroup.full(lat.group), point_cap=1000)


def test_virtual_profiles_cannot_be_coinduced():
    lat = lat_of("C4")
    with pytest.raises(DomainError):
        coinduce_classes(lat, 0, 2, {0: -1})


# -- pullbacks, dependent products, the distributivity diagram --------


def s3_transfer_setup():
    lat = lat_of("S3")
    g = lat.group
    full = Subgroup.full(g)
    c2 = lat.subgroup(1)
    free = GSet.free_orbit(full)
    cosets = GSet.coset_space(full, c2)
    a = free.disjoint_union(cosets)
    point = GSet.trivial_set(full, 1)

    def rep(p):
        return min(g.mul(p, l) for l in c2.elements)

    t = GMap(a, cosets, [
        cosets.pos[rep(p)] if tag == 0 else cosets.pos[p]
        for (tag, p) in a.points
    ])
    n = GMap(cosets, point, [0] * cosets.size)
    return lat, a, cosets, point, t, n


def test_pullback_over_point_is_product():
    lat, a, b, point, t, n = s3_transfer_setup()
    fib, to_a, to_b = pullback(
        GMap(a, point, [0] * a.size), GMap(b, point, [0] * b.size)
    )
    assert fib.size == a.size * b.size
    assert isomorphic(fib, a.product(b))


def test_pullback_projections_are_equivariant():
    lat, a, b, point, t, n = s3_transfer_setup()
    fib, to_a, to_b = pullback(t, t)
    GMap(fib, a, to_a.targets)  # revalidate
    GMap(fib, a, to_b.targets)
    # the diagonal sits inside the fiber product
    diag = [i for i in range(fib.size)
            if to_a.targets[i] == to_b.targets[i]]
    assert len(diag) == a.size


def test_dependent_product_size_and_action():
    lat, a, b, point, t, n = s3_transfer_setup()
    dp = dependent_product(t, n)
    dp.gset.check()
    # each of the three fibers of t has three points, sections multiply
    assert dp.gset.size == 27
    GMap(dp.gset, point, dp.proj.targets)


def test_dependent_product_gate():
    lat, a, b, point, t, n = s3_transfer_setup()
    with pytest.raises(ResourceError):
        dependent_product(t, n, point_cap=10)


def test_exponential_diagram_commutes():
    lat, a, b, point, t, n = s3_transfer_setup()
    ed = exponential_diagram(t, n)
    ed.pulled.check()
    # evaluation really is a section: t(r'(z)) equals the B-component
    for i, (j, s_pos) in enumerate(ed.pulled.points):
        assert t.targets[ed.r_prime.targets[i]] == j
    GMap(ed.pulled, a, ed.r_prime.targets)  # revalidate equivariance


def test_slice_profile_separates_images():
    lat = lat_of("C2")
    full = Subgroup.full(lat.group)
    c = GSet.trivial_set(full, 2)
    x = GSet.free_orbit(full)
    over0 = GMap(x, c, [0, 0])
    over1 = GMap(x, c, [1, 1])
    assert slice_profile(over0) != slice_profile(over1)
    assert slice_profile(over0) == slice_profile(GMap(x, c, [0] * 2))


def test_compose_and_constant_maps():
    lat, a, b, point, t, n = s3_transfer_setup()
    tn = t.compose(n)
    assert tn.targets == tuple(n.targets[j] for j in t.targets)
    cm = GMap.constant(a, point, 0)
    assert set(cm.targets) == {0}


# -- conjugation ------------------------------------------------------


def test_conjugated_action_agrees_with_class_transport():
    lat = lat_of("S3")
    g = lat.group
    x = GSet.coset_space(lat.subgroup(1), Subgroup.trivial(g))
    for gamma in g.elements():
        new_idx, cprof = conjugate_classes(
            lat, 1, gamma, profile_of_gset(lat, 1, x)
        )
        xc = x.conjugated(gamma)
        xc.check()
        assert xc.acting.mask == lat.subgroup(new_idx).mask
        assert profile_of_gset(lat, new_idx, xc) == cprof


def test_conjugation_by_identity_is_trivial():
    lat = lat_of("D4")
    x = GSet.coset_space(Subgroup.full(lat.group), lat.subgroup(6))
    assert x.conjugated(0).act == x.act


# -- randomized dual-route sweeps -------------------------------------


@pytest.mark.parametrize("spec,seed", [("S3", 11), ("D4", 12), ("Q8", 13), ("A4", 14)])
def test_class_calculus_matches_materialization(spec, seed):
    lat = lat_of(spec)
    rng = random.Random(seed)
    for _ in range(12):
        k = rng.randrange(lat.size)
        h = rng.choice([j for j in range(lat.size) if lat.leq(k, j)])
        k_lat = lat.restrict(k)
        prof = {
            rep: rng.randrange(0, 3)
            for rep in k_lat.class_reps
            if rng.random() < 0.5
        }
        prof = {a: b for a, b in prof.items() if b}
        x = materialize_profile(lat, k, prof)
        assert profile_of_gset(lat, k, x) == dict(sorted(prof.items()))

        hprof = induce_classes(lat, k, h, prof)
        down = restrict_classes(lat, h, k, hprof)
        assert down == profile_of_gset(
            lat, k, materialize_profile(lat, h, hprof).restrict(lat.subgroup(k))
        )

        assert hprof == profile_of_gset(lat, h, induce(x, lat.subgroup(h)))

        other = {
            rep: rng.randrange(1, 3)
            for rep in k_lat.class_reps
            if rng.random() < 0.4
        }
        y = materialize_profile(lat, k, other)
        assert product_classes(lat, k, prof, other) == profile_of_gset(
            lat, k, x.product(y)
        )

        m = lat.subgroup(h).order // lat.subgroup(k).order
        if x.size ** m <= 2000:
            co = coinduce(x, lat.subgroup(h))
            assert coinduce_classes(lat, k, h, prof) == profile_of_gset(
                lat, h, co
            )


# -- rendering --------------------------------------------------------


def test_profile_to_text():
    lat = lat_of("C4")
    assert profile_to_text(lat, 2, {2: 2, 0: 1}) == "[C4/e] + 2*[C4/C4]"
    assert profile_to_text(lat, 2, {}) == "0"
    assert profile_to_text(lat, 2, {1: -1, 2: 1}) == "-[C4/C2] + [C4/C4]"


@given(st.integers(0, 5), st.integers(0, 5))
def test_counting_fixed_points_is_additive(n, m):
    lat = lat_of("C2")
    prof = coinduce_classes(lat, 0, 1, {0: n + m})
    free = prof.get(0, 0)
    assert free == (n + m) * (n + m - 1) // 2
