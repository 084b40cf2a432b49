"""Transfer systems: which transfers (and norms) a theory admits.

A transfer system on the subgroup lattice of G is a partial order on
subgroups refining inclusion that is closed under conjugation and under
intersection (restriction).  Here one is stored as a tuple ``rows`` of
bitmasks: bit ``k`` of ``rows[h]`` says the arrow ``K -> H`` is admitted.

Two construction modes matter and are deliberately distinct:

* :meth:`TransferSystem.from_pairs_raw` takes arrows literally (plus
  reflexivity) so the validator can point at every axiom failure;
* :meth:`TransferSystem.generate` closes the arrows into the least
  genuine transfer system containing them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, ResourceError, SpecError
from .groups import SubgroupLattice, bits, builtin_lattice
from .gsets import GMap

ENUMERATION_SUBGROUP_CAP = 16


@dataclass(frozen=True)
class Violation:
    """One concrete axiom failure, with the lattice indices involved."""

    kind: str
    where: tuple[int, ...]
    text: str


@dataclass(frozen=True)
class CompatibilityReport:
    """Outcome of the triple-wise compatibility test for (mult, add)."""

    ok: bool
    refines_ok: bool
    witness: tuple[int, int, int] | None

    def describe(self, lattice: SubgroupLattice) -> str:
        if self.ok:
            return "compatible"
        if not self.refines_ok:
            return "incompatible: the multiplicative system is not contained in the additive one"
        a, b, c = self.witness
        la, lb, lc = (lattice.label(i) for i in (a, b, c))
        meet = lattice.label(lattice.intersect(b, c))
        return (
            f"incompatible: witness A={la}, B={lb}, C={lc}: "
            f"norm {lb}->{la} and transfer {meet}->{lb} are admitted "
            f"but transfer {lc}->{la} is not"
        )


class TransferSystem:
    """An admissibility relation on the subgroup lattice of one group."""

    def __init__(self, lattice: SubgroupLattice, rows: Sequence[int],
                 name: str = ""):
        if len(rows) != lattice.size:
            raise DomainError("row count does not match the lattice")
        self.lattice = lattice
        self.rows = tuple(rows)
        self.name = name

    # -- constructors --------------------------------------------------

    @classmethod
    def trivial(cls, lattice: SubgroupLattice) -> "TransferSystem":
        return cls(lattice, [1 << h for h in range(lattice.size)], "trivial")

    @classmethod
    def complete(cls, lattice: SubgroupLattice) -> "TransferSystem":
        rows = [0] * lattice.size
        for h in range(lattice.size):
            for k in range(lattice.size):
                if lattice.leq(k, h):
                    rows[h] |= 1 << k
        return cls(lattice, rows, "complete")

    @classmethod
    def from_pairs_raw(cls, lattice: SubgroupLattice,
                       pairs: Iterable[tuple[int, int]],
                       name: str = "") -> "TransferSystem":
        """Reflexive closure of the given arrows, nothing else."""
        rows = [1 << h for h in range(lattice.size)]
        for k, h in pairs:
            rows[h] |= 1 << k
        return cls(lattice, rows, name)

    @classmethod
    def generate(cls, lattice: SubgroupLattice,
                 pairs: Iterable[tuple[int, int]],
                 name: str = "") -> "TransferSystem":
        """Least transfer system containing the given arrows."""
        for k, h in pairs:
            if not lattice.leq(k, h):
                raise DomainError(
                    f"cannot generate from non-nested arrow "
                    f"{lattice.label(k)} -> {lattice.label(h)}"
                )
        rows = _close(lattice, [1 << h for h in range(lattice.size)], pairs)
        return cls(lattice, rows, name)

    # -- queries -------------------------------------------------------

    def admits(self, k: int, h: int) -> bool:
        return bool(self.rows[h] >> k & 1)

    def pairs(self) -> list[tuple[int, int]]:
        """Non-reflexive admitted arrows, sorted by (target, source)."""
        return [
            (k, h)
            for h in range(self.lattice.size)
            for k in bits(self.rows[h])
            if k != h
        ]

    def class_arrows(self) -> list[tuple[int, int]]:
        """Arrows collapsed to conjugacy classes of subgroups."""
        lat = self.lattice
        seen = {
            (lat.class_of[k], lat.class_of[h])
            for (k, h) in self.pairs()
        }
        return sorted(seen)

    def refines(self, other: "TransferSystem") -> bool:
        if other.lattice is not self.lattice:
            raise DomainError("cannot compare systems on different lattices")
        return all(r & ~s == 0 for r, s in zip(self.rows, other.rows))

    def with_pairs(self, pairs: Iterable[tuple[int, int]]) -> "TransferSystem":
        return TransferSystem(
            self.lattice,
            _close(self.lattice, list(self.rows), pairs),
            self.name,
        )

    # -- validation ----------------------------------------------------

    def validate(self) -> list[Violation]:
        """Every axiom instance this relation violates, deterministically ordered."""
        lat = self.lattice
        out: list[Violation] = []
        for h in range(lat.size):
            if not self.admits(h, h):
                out.append(Violation(
                    "reflexivity", (h,),
                    f"{lat.label(h)} -> {lat.label(h)} is missing",
                ))
        for h in range(lat.size):
            for k in bits(self.rows[h]):
                if not lat.leq(k, h):
                    out.append(Violation(
                        "containment", (k, h),
                        f"{lat.label(k)} -> {lat.label(h)} relates "
                        "non-nested subgroups",
                    ))
        for h in range(lat.size):
            for m in bits(self.rows[h]):
                for k in bits(self.rows[m]):
                    if not self.admits(k, h):
                        out.append(Violation(
                            "transitivity", (k, m, h),
                            f"{lat.label(k)} -> {lat.label(m)} -> "
                            f"{lat.label(h)} but {lat.label(k)} -> "
                            f"{lat.label(h)} is missing",
                        ))
        for h in range(lat.size):
            for k in bits(self.rows[h]):
                for g in lat.ambient.elements:
                    k2 = lat.conj_action(k, g)
                    h2 = lat.conj_action(h, g)
                    if not self.admits(k2, h2):
                        out.append(Violation(
                            "conjugation", (k, h, g),
                            f"{lat.label(k)} -> {lat.label(h)} conjugated "
                            f"by element {g} gives {lat.label(k2)} -> "
                            f"{lat.label(h2)}, which is missing",
                        ))
        for h in range(lat.size):
            for k in bits(self.rows[h]):
                if not lat.leq(k, h):
                    continue
                for m in range(lat.size):
                    if not lat.leq(m, h) or m == h:
                        continue
                    meet = lat.intersect(k, m)
                    if not self.admits(meet, m):
                        out.append(Violation(
                            "intersection", (k, h, m),
                            f"{lat.label(k)} -> {lat.label(h)} restricted "
                            f"to {lat.label(m)} needs {lat.label(meet)} -> "
                            f"{lat.label(m)}, which is missing",
                        ))
        return out

    def is_valid(self) -> bool:
        return not self.validate()

    # -- serialization -------------------------------------------------

    def to_arrows_text(self, group_spec: str | None = None) -> str:
        lat = self.lattice
        lines = []
        if group_spec is not None:
            lines.append(f"group: {group_spec}")
        for k, h in self.pairs():
            lines.append(f"{lat.label(k)} -> {lat.label(h)}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        lat = self.lattice
        return {
            "group": lat.group.name,
            "arrows": [
                [lat.label(k), lat.label(h)] for (k, h) in self.pairs()
            ],
        }

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TransferSystem)
            and other.lattice is self.lattice
            and other.rows == self.rows
        )

    def __hash__(self) -> int:
        return hash((id(self.lattice), self.rows))

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<TransferSystem{tag} arrows={len(self.pairs())}>"


def _close(lattice: SubgroupLattice, rows: list[int],
           pairs: Iterable[tuple[int, int]]) -> list[int]:
    """Fixpoint closure under transitivity, conjugation, and intersection."""
    for k, h in pairs:
        rows[h] |= 1 << k
    n = lattice.size
    changed = True
    while changed:
        changed = False
        for h in range(n):
            acc = rows[h]
            for k in bits(acc):
                acc |= rows[k]
            if acc != rows[h]:
                rows[h] = acc
                changed = True
        for h in range(n):
            for k in bits(rows[h]):
                if k == h:
                    continue
                for g in lattice.ambient.elements:
                    h2 = lattice.conj_action(h, g)
                    bit = 1 << lattice.conj_action(k, g)
                    if not rows[h2] & bit:
                        rows[h2] |= bit
                        changed = True
        for h in range(n):
            for k in bits(rows[h]):
                if k == h:
                    continue
                for m in range(n):
                    if m == h or not lattice.leq(m, h):
                        continue
                    bit = 1 << lattice.intersect(k, m)
                    if not rows[m] & bit:
                        rows[m] |= bit
                        changed = True
    return rows


# ---------------------------------------------------------------------------
# Admissibility queries.


def admissible(ts: TransferSystem, k: int, h: int) -> bool:
    """Is the transitive set ``H/K`` admitted?  Requires ``K <= H``."""
    if not ts.lattice.leq(k, h):
        raise DomainError(
            f"{ts.lattice.label(k)} is not contained in {ts.lattice.label(h)}"
        )
    return ts.admits(k, h)


def map_in_indexing(ts: TransferSystem, f: GMap) -> bool:
    """Does every stabilizer jump of the map stay inside the system?

    An equivariant map lies in the indexing category of ``ts`` when for
    every source point ``s`` the arrow ``stab(s) -> stab(f(s))`` is
    admitted.  The acting subgroup may be any member of the lattice.
    """
    lat = ts.lattice
    index_of = lat.index_of
    try:
        for i in range(f.src.size):
            k = index_of[f.src.stabilizer_mask(i)]
            h = index_of[f.dst.stabilizer_mask(f(i))]
            if not ts.admits(k, h):
                return False
    except KeyError as exc:
        raise DomainError(
            "map involves a stabilizer outside the system's lattice"
        ) from exc
    return True


# ---------------------------------------------------------------------------
# Enumeration.


def enumerate_transfer_systems(
    lattice: SubgroupLattice, *,
    max_subgroups: int = ENUMERATION_SUBGROUP_CAP,
) -> list[TransferSystem]:
    """All transfer systems on the lattice, deterministically ordered.

    Backtracks over the proper inclusion pairs in a fixed order; including
    a pair immediately propagates its closure, so only genuinely closed
    relations are visited and each exactly once.
    """
    if lattice.size > max_subgroups:
        raise ResourceError(
            f"enumeration gated at {max_subgroups} subgroups "
            f"(lattice has {lattice.size})"
        )
    all_pairs = [
        (k, h)
        for h in range(lattice.size)
        for k in range(lattice.size)
        if k != h and lattice.leq(k, h)
    ]
    base = [1 << h for h in range(lattice.size)]
    results: list[tuple[int, ...]] = []

    def undecided(rows: list[int], banned: list[int], start: int) -> int:
        for idx in range(start, len(all_pairs)):
            k, h = all_pairs[idx]
            if not rows[h] >> k & 1 and not banned[h] >> k & 1:
                return idx
        return -1

    def conflict(rows: list[int], banned: list[int]) -> bool:
        return any(r & b for r, b in zip(rows, banned))

    def walk(rows: list[int], banned: list[int], start: int) -> None:
        idx = undecided(rows, banned, start)
        if idx == -1:
            results.append(tuple(rows))
            return
        k, h = all_pairs[idx]
        grown = _close(lattice, list(rows), [(k, h)])
        if not conflict(grown, banned):
            walk(grown, banned, idx + 1)
        banned2 = list(banned)
        banned2[h] |= 1 << k
        walk(rows, banned2, idx + 1)

    walk(base, [0] * lattice.size, 0)
    results.sort()
    return [TransferSystem(lattice, rows) for rows in results]


# ---------------------------------------------------------------------------
# Compatibility of a (multiplicative, additive) pair.


def _premise_masks(add: TransferSystem) -> list[int]:
    """For each b, the mask of c with ``b meet c -> b`` admitted by add."""
    cached = getattr(add, "_premise_masks", None)
    if cached is None:
        lat = add.lattice
        cached = []
        for b in range(lat.size):
            m = 0
            for c in range(lat.size):
                if add.admits(lat.intersect(b, c), b):
                    m |= 1 << c
            cached.append(m)
        add._premise_masks = cached
    return cached


def compatible(mult: TransferSystem, add: TransferSystem) -> CompatibilityReport:
    """Triple-wise compatibility criterion with a least witness on failure.

    The pair is compatible when ``mult`` refines ``add`` and for all
    nested ``C <= A`` and every ``B`` with the norm ``B -> A`` admitted:
    if the transfer ``B meet C -> B`` is admitted then so is ``C -> A``.
    The first failing ``(A, B, C)`` in lexicographic index order is
    reported.
    """
    if mult.lattice is not add.lattice:
        raise DomainError("systems live on different lattices")
    lat = mult.lattice
    refines_ok = mult.refines(add)
    if not refines_ok:
        return CompatibilityReport(False, False, None)
    premise = _premise_masks(add)
    for a in range(lat.size):
        for b in bits(mult.rows[a]):
            bad = premise[b] & lat.down[a] & ~add.rows[a]
            if bad:
                c = (bad & -bad).bit_length() - 1
                return CompatibilityReport(False, True, (a, b, c))
    return CompatibilityReport(True, True, None)


def compatible_pairs(
    systems: Sequence[TransferSystem],
) -> list[tuple[int, int]]:
    """Indices (i, j) with systems[i] compatible over systems[j] as additive.

    Pairs are (multiplicative index, additive index).
    """
    out = []
    for i, mult in enumerate(systems):
        for j, add in enumerate(systems):
            if compatible(mult, add).ok:
                out.append((i, j))
    return out


def forced_additive_floor(mult: TransferSystem) -> TransferSystem:
    """The least additive system compatible over ``mult``.

    Starts from the closure of ``mult`` itself and keeps adding the
    conclusions the compatibility triples force, until stable.  Every
    additive system compatible over ``mult`` contains the result.
    """
    lat = mult.lattice
    add = TransferSystem.generate(lat, mult.pairs(), name="floor")
    while True:
        report = compatible(mult, add)
        if report.ok:
            return add
        a, b, c = report.witness
        add = add.with_pairs([(c, a)])


# ---------------------------------------------------------------------------
# Text format.
#
#   group: D4
#   # any full-line comment
#   e -> C4
#   {0,3} -> G
#
# Arrows use subgroup labels of the group named in the header.  A file
# denotes the transfer system generated by its arrows; validation of the
# raw arrows (reflexive closure only) is also available for linting.


def parse_ts_text(text: str) -> tuple[str, list[tuple[str, str]]]:
    """Split a transfer system file into (group spec, label pairs)."""
    group_spec: str | None = None
    arrows: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if group_spec is None:
            if not line.startswith("group:"):
                raise SpecError(
                    f"line {lineno}: expected 'group: <name>' before arrows"
                )
            group_spec = line[len("group:"):].strip()
            if not group_spec:
                raise SpecError(f"line {lineno}: empty group name")
            continue
        if "->" not in line:
            raise SpecError(f"line {lineno}: expected 'K -> H', got {line!r}")
        left, _, right = line.partition("->")
        if not left.strip() or not right.strip():
            raise SpecError(f"line {lineno}: incomplete arrow {line!r}")
        arrows.append((left.strip(), right.strip()))
    if group_spec is None:
        raise SpecError("missing 'group:' header")
    return group_spec, arrows


def load_ts_text(
    text: str, *, generated: bool = True,
) -> tuple[SubgroupLattice, TransferSystem]:
    """Parse and resolve a transfer system file against its group."""
    group_spec, arrows = parse_ts_text(text)
    lattice = builtin_lattice(group_spec)
    pairs = []
    for kl, hl in arrows:
        k = lattice.parse_label(kl)
        h = lattice.parse_label(hl)
        pairs.append((k, h))
    if generated:
        ts = TransferSystem.generate(lattice, pairs)
    else:
        ts = TransferSystem.from_pairs_raw(lattice, pairs)
    return lattice, ts
