"""Independent compatibility oracle via coinduction of equivariant sets.

A pair of transfer systems (mult, add) is compatible exactly when mult is
contained in add and, for every norm ``K -> H`` admitted by mult,
coinduction ``map_K(H, -)`` carries add-admissible K-sets to
add-admissible H-sets.  This module decides that condition directly,
without ever looking at the triple-wise criterion, so the two deciders
can be played against each other.

Quantifying over all finite K-sets reduces to a single test object: if
``X_big`` (``[H:K]`` copies of every admissible orbit type) coinduces
admissibly then every admissible X does, because any point of a coinduced
set is determined by its ``[H:K]`` transversal values and therefore lives
inside the coinduction of a sub-K-set with at most ``[H:K]`` orbits, and
every such sub-K-set embeds into ``X_big``.  On failure a minimal witness
multiset is then located by scanning multisets in size order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable

from .errors import DomainError
from .gsets import (
    DEFAULT_POINT_CAP,
    GMap,
    GSet,
    Profile,
    coinduce_classes,
    coinduce_map,
    profile_to_text,
)
from .groups import SubgroupLattice, bits
from .transfer_systems import TransferSystem, compatible, map_in_indexing


@dataclass(frozen=True)
class OracleWitness:
    """A failing instance: an admissible K-set whose coinduction is not."""

    k_idx: int
    h_idx: int
    profile: Profile
    coinduced: Profile
    bad_types: tuple[int, ...]

    def describe(self, lattice: SubgroupLattice) -> str:
        k_lab = lattice.label(self.k_idx)
        h_lab = lattice.label(self.h_idx)
        h_lat = lattice.restrict(self.h_idx)
        bad = ", ".join(
            f"[{h_lab}/{h_lat.label(t)}]" for t in self.bad_types
        )
        return (
            f"norm {k_lab} -> {h_lab}: admissible input "
            f"{profile_to_text(lattice, self.k_idx, self.profile)} "
            f"coinduces to "
            f"{profile_to_text(lattice, self.h_idx, self.coinduced)} "
            f"with inadmissible orbit type(s) {bad}"
        )


@dataclass(frozen=True)
class OracleReport:
    ok: bool
    refines_ok: bool
    pairs_checked: int
    witness: OracleWitness | None

    def describe(self, lattice: SubgroupLattice) -> str:
        if self.ok:
            return f"compatible ({self.pairs_checked} norm pairs checked)"
        if not self.refines_ok:
            return "incompatible: the multiplicative system is not contained in the additive one"
        return "incompatible: " + self.witness.describe(lattice)


def global_index(lattice: SubgroupLattice, level_lat: SubgroupLattice,
                 idx: int) -> int:
    """Map a level-lattice subgroup index back into the ambient lattice."""
    return lattice.index_of[level_lat.subgroup(idx).mask]


def admissible_types(add: TransferSystem, level: int) -> list[int]:
    """Class representatives L (in the level lattice) with ``L -> level`` admitted."""
    lat = add.lattice
    level_lat = lat.restrict(level)
    out = []
    for rep in level_lat.class_reps:
        if add.admits(global_index(lat, level_lat, rep), level):
            out.append(rep)
    return out


def inadmissible_part(add: TransferSystem, level: int,
                      profile: Profile) -> tuple[int, ...]:
    """Orbit types of the profile whose transfer into the level is missing."""
    lat = add.lattice
    level_lat = lat.restrict(level)
    return tuple(
        rep
        for rep in sorted(profile)
        if profile[rep] and not add.admits(global_index(lat, level_lat, rep), level)
    )


def admissible_hset(add: TransferSystem, level: int, x: GSet) -> bool:
    """Is every orbit stabilizer of the set admitted into the level?"""
    lat = add.lattice
    if x.acting.mask != lat.subgroup(level).mask:
        raise DomainError("the set is not an action of the named level")
    for orb in x.orbits():
        stab = x.stabilizer_mask(orb[0])
        if not add.admits(lat.index_of[stab], level):
            return False
    return True


def check_map_coinduction(
    mult: TransferSystem, add: TransferSystem, k_idx: int, h_idx: int,
    f: GMap, *, point_cap: int = DEFAULT_POINT_CAP,
) -> bool:
    """Coinduce an indexed map along an admitted norm, re-test its indexing.

    For a compatible pair this must come back true for every map of K-sets
    that lies in the additive indexing; the equivalence sweep checks the
    orbit-level statement, this checks the map-level one.
    """
    lat = add.lattice
    if not mult.admits(k_idx, h_idx):
        raise DomainError("the norm pair is not admitted multiplicatively")
    if f.src.acting.mask != lat.subgroup(k_idx).mask:
        raise DomainError("the map is not an action of the norm's source")
    if not map_in_indexing(add, f):
        raise DomainError("the map is not in the additive indexing category")
    big = coinduce_map(f, lat.subgroup(h_idx), point_cap=point_cap)
    return map_in_indexing(add, big)


def norm_pair_reps(mult: TransferSystem) -> list[tuple[int, int]]:
    """Proper admitted norms, one per orbit of simultaneous conjugation."""
    lat = mult.lattice
    seen: set[tuple[int, int]] = set()
    reps = []
    for h in range(lat.size):
        for k in bits(mult.rows[h]):
            if k == h or (k, h) in seen:
                continue
            reps.append((k, h))
            for g in lat.ambient.elements:
                seen.add((lat.conj_action(k, g), lat.conj_action(h, g)))
    return reps


def check_norm_coinduction(
    add: TransferSystem, k_idx: int, h_idx: int, *,
    localize: bool = True,
    memo: dict[Hashable, "OracleWitness | None"] | None = None,
) -> OracleWitness | None:
    """Does ``map_K(H, -)`` preserve add-admissibility?  None means yes.

    The fast path checks the single test object described in the module
    docstring; only on failure is a smallest witness located.
    """
    lat = add.lattice
    if not lat.leq(k_idx, h_idx):
        raise DomainError("norm pair must be nested")
    key = (k_idx, h_idx, add.rows)
    if memo is not None and key in memo:
        return memo[key]
    index = lat.subgroup(h_idx).order // lat.subgroup(k_idx).order
    types = admissible_types(add, k_idx)
    big: Profile = {t: index for t in types}
    co_big = coinduce_classes(lat, k_idx, h_idx, big)
    witness: OracleWitness | None = None
    if inadmissible_part(add, h_idx, co_big):
        if localize:
            witness = _smallest_witness(add, k_idx, h_idx, types, index)
        else:
            witness = OracleWitness(
                k_idx, h_idx, big, co_big, inadmissible_part(add, h_idx, co_big)
            )
    if memo is not None:
        memo[key] = witness
    return witness


def _smallest_witness(add: TransferSystem, k_idx: int, h_idx: int,
                      types: list[int], index: int) -> OracleWitness:
    lat = add.lattice
    for total in range(1, index + 1):
        for combo in itertools.combinations_with_replacement(types, total):
            profile: Profile = {}
            for t in combo:
                profile[t] = profile.get(t, 0) + 1
            co = coinduce_classes(lat, k_idx, h_idx, profile)
            bad = inadmissible_part(add, h_idx, co)
            if bad:
                return OracleWitness(k_idx, h_idx, profile, co, bad)
    raise DomainError(
        "coinduction failed on the big test object but no small witness "
        "exists; this contradicts the transversal bound"
    )


def exhaustive_norm_check(
    add: TransferSystem, k_idx: int, h_idx: int, *, max_orbits: int,
) -> OracleWitness | None:
    """Check every admissible multiset with at most ``max_orbits`` orbits.

    Exponential in ``max_orbits``; exists to cross-check the single-object
    fast path on small cases, including one orbit past the proven bound.
    """
    lat = add.lattice
    types = admissible_types(add, k_idx)
    for total in range(1, max_orbits + 1):
        for combo in itertools.combinations_with_replacement(types, total):
            profile: Profile = {}
            for t in combo:
                profile[t] = profile.get(t, 0) + 1
            co = coinduce_classes(lat, k_idx, h_idx, profile)
            bad = inadmissible_part(add, h_idx, co)
            if bad:
                return OracleWitness(k_idx, h_idx, profile, co, bad)
    return None


def coinduction_compatible(
    mult: TransferSystem, add: TransferSystem, *,
    localize: bool = True,
    memo: dict[Hashable, OracleWitness | None] | None = None,
) -> OracleReport:
    """Decide compatibility by coinduction alone."""
    if mult.lattice is not add.lattice:
        raise DomainError("systems live on different lattices")
    if not mult.refines(add):
        return OracleReport(False, False, 0, None)
    pairs = norm_pair_reps(mult)
    for k_idx, h_idx in pairs:
        witness = check_norm_coinduction(
            add, k_idx, h_idx, localize=localize, memo=memo
        )
        if witness is not None:
            return OracleReport(False, True, len(pairs), witness)
    return OracleReport(True, True, len(pairs), None)


@dataclass
class EquivalenceReport:
    """Outcome of playing the two compatibility deciders against each other."""

    group: str
    systems: int
    pairs: int
    compatible_pairs: int
    refinement_failures: int
    mismatches: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def describe(self) -> str:
        verdict = "agree" if self.ok else f"DISAGREE on {len(self.mismatches)} pairs"
        return (
            f"{self.group}: {self.systems} transfer systems, "
            f"{self.pairs} ordered pairs, {self.compatible_pairs} compatible, "
            f"{self.refinement_failures} fail containment; deciders {verdict}"
        )


def verify_equivalence(
    lattice: SubgroupLattice,
    systems: list[TransferSystem] | None = None,
) -> EquivalenceReport:
    """Run both deciders over every ordered pair of transfer systems.

    The coinduction verdicts are memoized per (norm pair, additive system),
    which is what makes full sweeps over groups like D4 cheap.
    """
    from .transfer_systems import enumerate_transfer_systems

    if systems is None:
        systems = enumerate_transfer_systems(lattice)
    memo: dict[Hashable, OracleWitness | None] = {}
    report = EquivalenceReport(
        lattice.group.name, len(systems), len(systems) ** 2, 0, 0
    )
    for i, mult in enumerate(systems):
        for j, add in enumerate(systems):
            direct = compatible(mult, add)
            indirect = coinduction_compatible(
                mult, add, localize=False, memo=memo
            )
            if not direct.refines_ok:
                report.refinement_failures += 1
            if direct.ok:
                report.compatible_pairs += 1
            if direct.ok != indirect.ok:
                report.mismatches.append((i, j))
    return report
