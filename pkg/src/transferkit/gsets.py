"""Finite actions of subgroups, equivariant maps, and orbit bookkeeping.

Two parallel toolkits live here and cross-check each other in the tests:

* materialized actions (:class:`GSet`, :class:`GMap`) where every point is
  explicit and constructions like induction, coinduction, pullbacks, and
  dependent products are carried out pointwise;
* the class-profile calculus (``*_classes`` functions) which tracks only
  the multiset of orbit types ``[K/L]`` and computes the same operations
  by double-coset and fixed-point counting.

The expensive constructions are gated by ``point_cap`` so a typo cannot
ask for ``|X| ** [H:K]`` tuples by accident.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .errors import DomainError, ResourceError
from .groups import Group, Subgroup, SubgroupLattice, bits, mask_of

DEFAULT_POINT_CAP = 250_000

Profile = dict[Hashable, int]


class GSet:
    """A finite left action of ``acting`` (a subgroup) on opaque points.

    Points are hashables indexed by position; ``act[g][i]`` is the position
    of ``g . points[i]`` for every ``g`` in the acting subgroup.
    """

    def __init__(self, acting: Subgroup, points: Sequence[Hashable],
                 act: dict[int, Sequence[int]], name: str = ""):
        self.acting = acting
        self.group = acting.group
        self.points = tuple(points)
        self.pos = {p: i for i, p in enumerate(self.points)}
        if len(self.pos) != len(self.points):
            raise DomainError("duplicate points in action")
        self.act = {g: tuple(act[g]) for g in acting.elements}
        self.name = name
        self._orbits: tuple[tuple[int, ...], ...] | None = None

    @property
    def size(self) -> int:
        return len(self.points)

    @classmethod
    def from_action(cls, acting: Subgroup, points: Sequence[Hashable],
                    act_fn: Callable[[int, Hashable], Hashable],
                    name: str = "") -> "GSet":
        points = tuple(points)
        pos = {p: i for i, p in enumerate(points)}
        act = {}
        for g in acting.elements:
            row = []
            for p in points:
                q = act_fn(g, p)
                j = pos.get(q)
                if j is None:
                    raise DomainError(f"action leaves the point set: {g} . {p!r}")
                row.append(j)
            act[g] = row
        return cls(acting, points, act, name)

    @classmethod
    def coset_space(cls, acting: Subgroup, sub: Subgroup,
                    name: str = "") -> "GSet":
        """The left coset space ``K/L`` with points the minimal coset reps."""
        if not sub.is_subset_of(acting):
            raise DomainError("coset space needs L <= K")
        group = acting.group
        reps = []
        seen = 0
        for k in acting.elements:
            if seen >> k & 1:
                continue
            reps.append(k)
            for l in sub.elements:
                seen |= 1 << group.mul(k, l)
        rep_of = {}
        for r in reps:
            for l in sub.elements:
                rep_of[group.mul(r, l)] = r
        return cls.from_action(
            acting, reps, lambda g, p: rep_of[group.mul(g, p)], name
        )

    @classmethod
    def trivial_set(cls, acting: Subgroup, n: int, name: str = "") -> "GSet":
        return cls(acting, tuple(range(n)),
                   {g: tuple(range(n)) for g in acting.elements}, name)

    @classmethod
    def free_orbit(cls, acting: Subgroup, name: str = "") -> "GSet":
        return cls.coset_space(acting, Subgroup.trivial(acting.group), name)

    @classmethod
    def empty(cls, acting: Subgroup) -> "GSet":
        return cls(acting, (), {g: () for g in acting.elements})

    def act_on(self, g: int, i: int) -> int:
        return self.act[g][i]

    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """Orbits as sorted position tuples, ordered by least position."""
        if self._orbits is None:
            seen = [False] * self.size
            out = []
            for i in range(self.size):
                if seen[i]:
                    continue
                members = {i}
                frontier = [i]
                while frontier:
                    j = frontier.pop()
                    for g in self.acting.elements:
                        k = self.act[g][j]
                        if k not in members:
                            members.add(k)
                            frontier.append(k)
                orbit = sorted(members)
                for j in orbit:
                    seen[j] = True
                out.append(tuple(orbit))
            self._orbits = tuple(out)
        return self._orbits

    def stabilizer_mask(self, i: int) -> int:
        return mask_of(g for g in self.acting.elements if self.act[g][i] == i)

    def fixed_point_count(self, sub_mask: int) -> int:
        """Number of points fixed by every element of ``sub_mask``."""
        held = range(self.size)
        for g in bits(sub_mask):
            held = [i for i in held if self.act[g][i] == i]
        return len(held)

    def orbit_profile(self) -> Profile:
        """Multiset of orbit types, keyed by canonical stabilizer class.

        The key is the least (over conjugation inside the acting subgroup)
        sorted element tuple of the stabilizer, so profiles computed on
        unrelated point sets compare correctly.
        """
        profile: Profile = {}
        for orbit in self.orbits():
            key = canonical_stab_key(self.acting, self.stabilizer_mask(orbit[0]))
            profile[key] = profile.get(key, 0) + 1
        return profile

    def restrict(self, sub: Subgroup) -> "GSet":
        if not sub.is_subset_of(self.acting):
            raise DomainError("can only restrict along a smaller subgroup")
        return GSet(sub, self.points, {g: self.act[g] for g in sub.elements},
                    self.name)

    def disjoint_union(self, other: "GSet") -> "GSet":
        if other.acting != self.acting:
            raise DomainError("disjoint union needs a common acting subgroup")
        points = [(0, p) for p in self.points] + [(1, q) for q in other.points]
        n = self.size
        act = {
            g: tuple(self.act[g]) + tuple(j + n for j in other.act[g])
            for g in self.acting.elements
        }
        return GSet(self.acting, points, act)

    def product(self, other: "GSet") -> "GSet":
        """Cartesian product with the diagonal action."""
        if other.acting != self.acting:
            raise DomainError("product needs a common acting subgroup")
        points = list(itertools.product(range(self.size), range(other.size)))
        index = {p: i for i, p in enumerate(points)}
        act = {}
        for g in self.acting.elements:
            pa, pb = self.act[g], other.act[g]
            act[g] = tuple(index[pa[i], pb[j]] for (i, j) in points)
        return GSet(self.acting, points, act)

    def conjugated(self, g: int) -> "GSet":
        """The twisted action where ``g k g^-1`` acts as ``k`` did."""
        grp = self.group
        new_acting = self.acting.conjugated(g)
        ginv = grp.inv(g)
        act = {
            l: self.act[grp.mul(grp.mul(ginv, l), g)]
            for l in new_acting.elements
        }
        return GSet(new_acting, self.points, act, self.name)

    def check(self) -> None:
        """Verify the action axioms exhaustively."""
        grp = self.group
        ident = self.act[0]
        if tuple(ident) != tuple(range(self.size)):
            raise DomainError("identity does not act trivially")
        for g in self.acting.elements:
            if sorted(self.act[g]) != list(range(self.size)):
                raise DomainError(f"element {g} does not act by a bijection")
        for g in self.acting.elements:
            for h in self.acting.elements:
                gh = grp.mul(g, h)
                for i in range(self.size):
                    if self.act[g][self.act[h][i]] != self.act[gh][i]:
                        raise DomainError(
                            f"action not compatible at ({g},{h},{i})"
                        )

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<GSet{tag} size={self.size} acting order {self.acting.order}>"


def canonical_stab_key(acting: Subgroup, stab_mask: int) -> tuple[int, ...]:
    """Conjugation-invariant key for a stabilizer subgroup."""
    grp = acting.group
    best = None
    stab = tuple(bits(stab_mask))
    for g in acting.elements:
        cand = tuple(sorted(grp.conj(g, s) for s in stab))
        if best is None or cand < best:
            best = cand
    return best


def isomorphic(x: GSet, y: GSet) -> bool:
    """Equivariant isomorphism test via orbit profiles."""
    if x.acting != y.acting:
        return False
    return x.orbit_profile() == y.orbit_profile()


class GMap:
    """An equivariant map between actions of the same subgroup."""

    def __init__(self, src: GSet, dst: GSet, targets: Sequence[int],
                 name: str = "", validate: bool = True):
        if src.acting != dst.acting:
            raise DomainError("equivariant map needs a common acting subgroup")
        if len(targets) != src.size:
            raise DomainError("target list length does not match the source")
        self.src = src
        self.dst = dst
        self.targets = tuple(targets)
        self.name = name
        if validate:
            for g in src.acting.elements:
                for i in range(src.size):
                    if self.targets[src.act[g][i]] != dst.act[g][self.targets[i]]:
                        raise DomainError(
                            f"map is not equivariant at element {g}, point {i}"
                        )

    def __call__(self, i: int) -> int:
        return self.targets[i]

    def compose(self, then: "GMap") -> "GMap":
        """The composite ``then . self`` (first self, then ``then``)."""
        if then.src is not self.dst:
            raise DomainError("composition needs matching middle object")
        return GMap(self.src, then.dst,
                    [then.targets[t] for t in self.targets], validate=False)

    @classmethod
    def constant(cls, src: GSet, dst: GSet, j: int) -> "GMap":
        if dst.stabilizer_mask(j) != dst.acting.mask:
            raise DomainError("constant maps need a fixed target point")
        return cls(src, dst, [j] * src.size, validate=False)


def induce(x: GSet, up: Subgroup) -> GSet:
    """Induction ``H x_K X`` along ``K <= H``; points are (coset rep, x)."""
    k = x.acting
    if not k.is_subset_of(up):
        raise DomainError("induction needs K <= H")
    grp = up.group
    reps, rep_of = _left_transversal(up, k)
    points = [(t, p) for t in reps for p in x.points]
    index = {p: i for i, p in enumerate(points)}
    act = {}
    for h in up.elements:
        row = []
        for (t, p) in points:
            e = grp.mul(h, t)
            t2 = rep_of[e]
            kk = grp.mul(grp.inv(t2), e)
            row.append(index[t2, x.points[x.act[kk][x.pos[p]]]])
        act[h] = row
    return GSet(up, points, act)


def coinduce(x: GSet, up: Subgroup, *,
             point_cap: int = DEFAULT_POINT_CAP) -> GSet:
    """Coinduction ``map_K(H, X)`` along ``K <= H``.

    A point is a K-equivariant function ``f : H -> X`` with
    ``f(k h) = k . f(h)``, encoded by its values on the minimal
    representatives of the right cosets ``K \\ H``.  The action is
    ``(h . f)(h') = f(h' h)``.  Size is ``|X| ** [H:K]``, hence the gate.
    """
    k = x.acting
    if not k.is_subset_of(up):
        raise DomainError("coinduction needs K <= H")
    grp = up.group
    reps, rep_of = _right_transversal(up, k)
    m = len(reps)
    total = x.size ** m
    if total > point_cap:
        raise ResourceError(
            f"coinduced action has {x.size}**{m} points, over cap {point_cap}"
        )
    rep_pos = {r: i for i, r in enumerate(reps)}
    # moves[h][j] = (j', kk): position j reads position j' through kk in K.
    moves = {}
    for h in up.elements:
        row = []
        for r in reps:
            e = grp.mul(r, h)
            r2 = rep_of[e]
            kk = grp.mul(e, grp.inv(r2))
            row.append((rep_pos[r2], kk))
        moves[h] = row
    points = list(itertools.product(range(x.size), repeat=m))
    index = {p: i for i, p in enumerate(points)}
    act = {}
    for h in up.elements:
        row = []
        mv = moves[h]
        for w in points:
            row.append(index[tuple(x.act[kk][w[j2]] for (j2, kk) in mv)])
        act[h] = row
    return GSet(up, points, act)


def coinduce_map(f: GMap, up: Subgroup, *,
                 point_cap: int = DEFAULT_POINT_CAP) -> GMap:
    """Coinduction applied to a map: postcompose on each transversal value.

    Sends ``phi : H -> X`` to ``f . phi``, so a point (a value tuple) maps
    componentwise.  Functorial: identities and composites are preserved.
    """
    src = coinduce(f.src, up, point_cap=point_cap)
    dst = coinduce(f.dst, up, point_cap=point_cap)
    targets = [dst.pos[tuple(f.targets[v] for v in w)] for w in src.points]
    return GMap(src, dst, targets, validate=False)


def _left_transversal(up: Subgroup, sub: Subgroup):
    """Minimal representatives of the left cosets ``h . sub`` inside up."""
    grp = up.group
    reps = []
    rep_of = {}
    for h in up.elements:
        if h in rep_of:
            continue
        reps.append(h)
        for l in sub.elements:
            rep_of[grp.mul(h, l)] = h
    return reps, rep_of


def _right_transversal(up: Subgroup, sub: Subgroup):
    """Minimal representatives of the right cosets ``sub . h`` inside up."""
    grp = up.group
    reps = []
    rep_of = {}
    for h in up.elements:
        if h in rep_of:
            continue
        reps.append(h)
        for l in sub.elements:
            rep_of[grp.mul(l, h)] = h
    return reps, rep_of


def pullback(f: GMap, g: GMap) -> tuple[GSet, GMap, GMap]:
    """Fiber product of ``f : A -> C`` and ``g : B -> C`` over C.

    Returns (A x_C B, projection to A, projection to B).
    """
    if f.dst is not g.dst and f.dst.points != g.dst.points:
        raise DomainError("pullback needs a common codomain")
    a, b = f.src, g.src
    if a.acting != b.acting:
        raise DomainError("pullback needs a common acting subgroup")
    points = [
        (i, j)
        for i in range(a.size)
        for j in range(b.size)
        if f.targets[i] == g.targets[j]
    ]
    index = {p: n for n, p in enumerate(points)}
    act = {
        h: tuple(index[a.act[h][i], b.act[h][j]] for (i, j) in points)
        for h in a.acting.elements
    }
    p = GSet(a.acting, points, act)
    to_a = GMap(p, a, [i for (i, _) in points], validate=False)
    to_b = GMap(p, b, [j for (_, j) in points], validate=False)
    return p, to_a, to_b


@dataclass
class DependentProduct:
    """``Pi_n(t)`` together with its projection and fiber bookkeeping."""

    gset: GSet
    proj: GMap                      # Pi -> C
    fibers: dict[int, list[int]]    # C position -> B positions over it


def dependent_product(t: GMap, n: GMap, *,
                      point_cap: int = DEFAULT_POINT_CAP) -> DependentProduct:
    """Sections of ``t : A -> B`` over the fibers of ``n : B -> C``.

    A point over ``c`` is a section ``s : n^-1(c) -> A`` with ``t . s = id``,
    acted on by ``(h . s)(b) = h . s(h^-1 b)`` over ``h . c``.
    """
    if t.dst is not n.src and t.dst.points != n.src.points:
        raise DomainError("dependent product needs t to land in the source of n")
    a, b, c = t.src, t.dst, n.dst
    acting = a.acting
    fibers: dict[int, list[int]] = {i: [] for i in range(c.size)}
    for j in range(b.size):
        fibers[n.targets[j]].append(j)
    fiber_a: dict[int, list[int]] = {j: [] for j in range(b.size)}
    for i in range(a.size):
        fiber_a[t.targets[i]].append(i)
    total = 0
    for ci in range(c.size):
        count = 1
        for j in fibers[ci]:
            count *= len(fiber_a[j])
        total += count
        if total > point_cap:
            raise ResourceError(
                f"dependent product exceeds point cap {point_cap}"
            )
    points = []
    for ci in range(c.size):
        for choice in itertools.product(*(fiber_a[j] for j in fibers[ci])):
            points.append((ci, choice))
    index = {p: i for i, p in enumerate(points)}
    fiber_index = {
        ci: {j: k for k, j in enumerate(fibers[ci])} for ci in range(c.size)
    }
    grp = acting.group
    act = {}
    for h in acting.elements:
        hinv = grp.inv(h)
        row = []
        for (ci, choice) in points:
            ci2 = c.act[h][ci]
            moved = tuple(
                a.act[h][choice[fiber_index[ci][b.act[hinv][j2]]]]
                for j2 in fibers[ci2]
            )
            row.append(index[ci2, moved])
        act[h] = row
    p = GSet(acting, points, act)
    proj = GMap(p, c, [ci for (ci, _) in points], validate=False)
    return DependentProduct(p, proj, fibers)


@dataclass
class ExponentialDiagram:
    """The distributivity diagram rewriting a norm past a transfer.

    For ``t : A -> B`` and ``n : B -> C`` this packages
    ``pi = Pi_n(t)`` over C, the pullback ``B x_C pi``, and the three maps
    so that a norm along ``n`` after a transfer along ``t`` equals the
    transfer along ``t_prime`` after the norm along ``n_prime`` after the
    restriction along ``r_prime``.
    """

    pi: GSet
    t_prime: GMap       # pi -> C
    pulled: GSet        # B x_C pi
    n_prime: GMap       # pulled -> pi
    r_prime: GMap       # pulled -> A


def exponential_diagram(t: GMap, n: GMap, *,
                        point_cap: int = DEFAULT_POINT_CAP) -> ExponentialDiagram:
    dp = dependent_product(t, n, point_cap=point_cap)
    pulled, to_b, to_pi = pullback(n, dp.proj)
    fiber_index = {
        ci: {j: k for k, j in enumerate(dp.fibers[ci])}
        for ci in dp.fibers
    }
    evals = []
    for (j, s_pos) in pulled.points:
        ci, choice = dp.gset.points[s_pos]
        evals.append(choice[fiber_index[ci][j]])
    r_prime = GMap(pulled, t.src, evals, name="evaluation")
    # The reciprocity square commutes: t . r_prime is the projection to B.
    for i in range(pulled.size):
        if t.targets[r_prime.targets[i]] != to_b.targets[i]:
            raise DomainError("exponential diagram failed to commute")
    return ExponentialDiagram(dp.gset, dp.proj, pulled, to_pi, r_prime)


def slice_profile(p: GMap) -> Profile:
    """Isomorphism invariant of ``p : X -> C`` in the category over C.

    Orbits of X are keyed by their stabilizer and image point, reduced
    modulo simultaneous conjugation, so two slices are isomorphic exactly
    when their profiles agree (codomains indexed identically).
    """
    x, c = p.src, p.dst
    grp = x.group
    profile: Profile = {}
    for orbit in x.orbits():
        i = orbit[0]
        stab = tuple(bits(x.stabilizer_mask(i)))
        best = None
        for g in x.acting.elements:
            cand = (
                tuple(sorted(grp.conj(g, s) for s in stab)),
                c.act[g][p.targets[i]],
            )
            if best is None or cand < best:
                best = cand
        profile[best] = profile.get(best, 0) + 1
    return profile


# ---------------------------------------------------------------------------
# Class-profile calculus.
#
# A profile is a dict {stabilizer class representative: multiplicity}
# describing a finite K-set up to isomorphism.  Representatives are
# subgroup indices in the lattice of the level subgroup K, i.e. in
# ``lat.restrict(k_idx)``.  Levels themselves are indices in the ambient
# lattice ``lat``.


def class_rep(level_lat: SubgroupLattice, idx: int) -> int:
    return level_lat.class_reps[level_lat.class_of[idx]]


def normalize_profile(level_lat: SubgroupLattice, raw: Profile) -> Profile:
    out: Profile = {}
    for idx, mult in raw.items():
        if mult == 0:
            continue
        rep = class_rep(level_lat, idx)
        out[rep] = out.get(rep, 0) + mult
    return {k: v for k, v in sorted(out.items()) if v != 0}


def profile_of_gset(lat: SubgroupLattice, level: int, x: GSet) -> Profile:
    """Classify a materialized action of ``subgroups[level]``."""
    level_lat = lat.restrict(level)
    if x.acting.mask != lat.subgroup(level).mask:
        raise DomainError("action does not belong to this level")
    raw: Profile = {}
    for orbit in x.orbits():
        idx = level_lat.index_of[x.stabilizer_mask(orbit[0])]
        raw[idx] = raw.get(idx, 0) + 1
    return normalize_profile(level_lat, raw)


def materialize_profile(lat: SubgroupLattice, level: int,
                        profile: Profile) -> GSet:
    """Disjoint union of coset spaces realizing a profile."""
    level_lat = lat.restrict(level)
    acting = lat.subgroup(level)
    out = GSet.empty(acting)
    for idx in sorted(profile):
        mult = profile[idx]
        if mult < 0:
            raise DomainError("cannot materialize a virtual profile")
        orbit = GSet.coset_space(acting, level_lat.subgroup(idx))
        for _ in range(mult):
            out = out.disjoint_union(orbit)
    return out


def profile_size(level_lat: SubgroupLattice, profile: Profile) -> int:
    order = level_lat.ambient.order
    return sum(
        mult * (order // level_lat.subgroup(idx).order)
        for idx, mult in profile.items()
    )


def profile_fixed_points(level_lat: SubgroupLattice, profile: Profile,
                         sub_mask: int) -> int:
    """``|X^M|`` for the action described by ``profile`` and ``M`` the mask."""
    total = 0
    for idx, mult in profile.items():
        if mult:
            total += mult * _fixed_cosets(level_lat, idx, sub_mask)
    return total


def _fixed_cosets(level_lat: SubgroupLattice, idx: int, sub_mask: int) -> int:
    """Cosets of ``K / subgroups[idx]`` fixed by every element of sub_mask."""
    grp = level_lat.group
    lmask = level_lat.subgroup(idx).mask
    reps = level_lat.double_coset_reps(level_lat.trivial_index, idx)
    count = 0
    for k in reps:
        kinv = grp.inv(k)
        if all(lmask >> grp.mul(grp.mul(kinv, m), k) & 1 for m in bits(sub_mask)):
            count += 1
    return count


def restrict_classes(lat: SubgroupLattice, h_idx: int, k_idx: int,
                     profile: Profile) -> Profile:
    """Restriction to a smaller level, by the double coset formula."""
    if not lat.leq(k_idx, h_idx):
        raise DomainError("restriction needs K <= H")
    h_lat = lat.restrict(h_idx)
    k_lat = lat.restrict(k_idx)
    grp = lat.group
    kmask = lat.subgroup(k_idx).mask
    ik = h_lat.index_of[kmask]
    raw: Profile = {}
    for idx, mult in profile.items():
        lsub = h_lat.subgroup(idx)
        for gamma in h_lat.double_coset_reps(ik, idx):
            stab = lsub.conjugate_mask(gamma) & kmask
            j = k_lat.index_of[stab]
            raw[j] = raw.get(j, 0) + mult
    return normalize_profile(k_lat, raw)


def induce_classes(lat: SubgroupLattice, k_idx: int, h_idx: int,
                   profile: Profile) -> Profile:
    """Induction to a larger level: ``[K/L]`` becomes ``[H/L]``."""
    if not lat.leq(k_idx, h_idx):
        raise DomainError("induction needs K <= H")
    k_lat = lat.restrict(k_idx)
    h_lat = lat.restrict(h_idx)
    raw: Profile = {}
    for idx, mult in profile.items():
        j = h_lat.index_of[k_lat.subgroup(idx).mask]
        raw[j] = raw.get(j, 0) + mult
    return normalize_profile(h_lat, raw)


def product_classes(lat: SubgroupLattice, level: int, left: Profile,
                    right: Profile) -> Profile:
    """Product of two actions at one level, by the double coset formula."""
    level_lat = lat.restrict(level)
    raw: Profile = {}
    for ia, ma in left.items():
        amask = level_lat.subgroup(ia).mask
        for ib, mb in right.items():
            bsub = level_lat.subgroup(ib)
            for delta in level_lat.double_coset_reps(ia, ib):
                stab = amask & bsub.conjugate_mask(delta)
                j = level_lat.index_of[stab]
                raw[j] = raw.get(j, 0) + ma * mb
    return normalize_profile(level_lat, raw)


def conjugate_classes(lat: SubgroupLattice, k_idx: int, g: int,
                      profile: Profile) -> tuple[int, Profile]:
    """Transport a profile along conjugation by ``g``; returns (new level, profile)."""
    new_idx = lat.conj_action(k_idx, g)
    k_lat = lat.restrict(k_idx)
    new_lat = lat.restrict(new_idx)
    raw: Profile = {}
    for idx, mult in profile.items():
        m2 = k_lat.subgroup(idx).conjugate_mask(g)
        j = new_lat.index_of[m2]
        raw[j] = raw.get(j, 0) + mult
    return new_idx, normalize_profile(new_lat, raw)


def coinduce_classes(lat: SubgroupLattice, k_idx: int, h_idx: int,
                     profile: Profile) -> Profile:
    """Orbit profile of ``map_K(H, X)`` by fixed-point counting.

    For ``L <= H`` the fixed points of the coinduced action satisfy
    ``|map_K(H,X)^L| = prod over KgL of |X^(K meet gLg^-1)|``; running the
    poset Moebius function over these counts recovers the orbit multiset
    without materializing any tuples.
    """
    if not lat.leq(k_idx, h_idx):
        raise DomainError("coinduction needs K <= H")
    for mult in profile.values():
        if mult < 0:
            raise DomainError("coinduction of a virtual profile is undefined")
    h_lat = lat.restrict(h_idx)
    k_lat = lat.restrict(k_idx)
    grp = lat.group
    kmask = lat.subgroup(k_idx).mask
    ik = h_lat.index_of[kmask]
    horder = h_lat.ambient.order
    fixed = [0] * h_lat.size
    for j in range(h_lat.size):
        lsub = h_lat.subgroup(j)
        count = 1
        for gamma in h_lat.double_coset_reps(ik, j):
            meet = kmask & lsub.conjugate_mask(gamma)
            count *= profile_fixed_points(k_lat, profile, meet)
            if count == 0:
                break
        fixed[j] = count
    mu = h_lat.moebius()
    raw: Profile = {}
    for c, members in enumerate(h_lat.classes):
        j = members[0]
        exact = sum(mu[j][m] * fixed[m] for m in bits(h_lat.up[j]))
        if exact == 0:
            continue
        orbit_size = horder // h_lat.subgroup(j).order
        n = exact * len(members)
        if n % orbit_size or n < 0:
            raise DomainError("inconsistent fixed point counts in coinduction")
        raw[j] = n // orbit_size
    return normalize_profile(h_lat, raw)


def profile_to_text(lat: SubgroupLattice, level: int, profile: Profile) -> str:
    """Render like ``2*[G/G] + [G/C2]`` using level-lattice labels."""
    level_lat = lat.restrict(level)
    hname = lat.label(level)
    if not profile:
        return "0"
    terms = []
    for idx in sorted(profile):
        mult = profile[idx]
        body = f"[{hname}/{level_lat.label(idx)}]"
        if mult == 1:
            terms.append(body)
        elif mult == -1:
            terms.append(f"-{body}")
        else:
            terms.append(f"{mult}*{body}")
    return " + ".join(terms).replace("+ -", "- ")
