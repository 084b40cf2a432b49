"""Finite groups, subgroups, and subgroup lattices with exact arithmetic.

Conventions used throughout the toolkit:

* group elements are indices ``0 .. order-1`` and ``0`` is the identity;
* groups built from permutation generators order their elements by
  breadth-first search from the identity, generators in the given order;
* a subgroup is a bitmask over element indices (bit ``i`` set iff element
  ``i`` belongs to the subgroup);
* conjugation is ``H^g = g H g^-1``, so conjugating by ``h`` after ``g``
  equals conjugating by ``h*g``.

Everything here is exact integer arithmetic; there is no floating point
anywhere in the package.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, ResourceError, SpecError

DEFAULT_ORDER_CAP = 10_000
DEFAULT_LATTICE_ORDER_CAP = 360
# Defensive cap: |G| <= 360 does not bound the number of subgroups (large
# elementary abelian 2-groups pass the order gate), so the lattice builder
# refuses past this many subgroups.
DEFAULT_SUBGROUP_COUNT_CAP = 20_000

_EAGER_TABLE_MAX = 1024


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class Group:
    """A finite group on element indices ``0..order-1`` with identity ``0``.

    Concrete storage lives in the subclasses; this base provides the shared
    derived operations.  ``mul`` is total and exact by construction.
    """

    name: str
    order: int

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def conj(self, g: int, x: int) -> int:
        """Return ``g x g^-1``."""
        return self.mul(self.mul(g, x), self.inv(g))

    def power(self, g: int, n: int) -> int:
        if n < 0:
            g, n = self.inv(g), -n
        acc = 0
        while n:
            if n & 1:
                acc = self.mul(acc, g)
            g = self.mul(g, g)
            n >>= 1
        return acc

    def element_order(self, g: int) -> int:
        n = 1
        x = g
        while x != 0:
            x = self.mul(x, g)
            n += 1
        return n

    @property
    def is_abelian(self) -> bool:
        cached = getattr(self, "_is_abelian", None)
        if cached is None:
            cached = all(
                self.mul(a, b) == self.mul(b, a)
                for a in self.elements()
                for b in self.elements()
            )
            self._is_abelian = cached
        return cached

    def check(self) -> None:
        """Exhaustively verify the group axioms.  O(order^3); test use only."""
        n = self.order
        for a in range(n):
            if self.mul(0, a) != a or self.mul(a, 0) != a:
                raise DomainError(f"{self.name}: element 0 is not an identity")
            if self.mul(a, self.inv(a)) != 0:
                raise DomainError(f"{self.name}: bad inverse for element {a}")
        for a in range(n):
            row = {self.mul(a, b) for b in range(n)}
            if len(row) != n:
                raise DomainError(f"{self.name}: row {a} is not a permutation")
        for a in range(n):
            for b in range(n):
                ab = self.mul(a, b)
                for c in range(n):
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)):
                        raise DomainError(
                            f"{self.name}: associativity fails at ({a},{b},{c})"
                        )

    def __repr__(self) -> str:
        return f"<Group {self.name} order={self.order}>"


class TableGroup(Group):
    """Group stored as an explicit multiplication table."""

    def __init__(self, name: str, table: Sequence[Sequence[int]]):
        self.name = name
        self.order = len(table)
        self._table = [tuple(row) for row in table]
        for i, row in enumerate(self._table):
            if len(row) != self.order:
                raise DomainError(f"table row {i} has length {len(row)}")
        self._inv = [0] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if self._table[a][b] == 0:
                    self._inv[a] = b
                    break
            else:
                raise DomainError(f"element {a} has no inverse in table")

    def mul(self, a: int, b: int) -> int:
        return self._table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]


class PermGroup(Group):
    """Group generated by permutations, elements in BFS order.

    Keeps the faithful permutation image.  For small orders the full table
    is precomputed; past ``_EAGER_TABLE_MAX`` products are composed on
    demand and memoized (such groups exceed the lattice gate anyway).
    """

    def __init__(self, name: str, perms: Sequence[tuple[int, ...]],
                 index: dict[tuple[int, ...], int]):
        self.name = name
        self.order = len(perms)
        self.perms = list(perms)
        self._index = index
        self._table: list[tuple[int, ...]] | None = None
        self._memo: dict[tuple[int, int], int] = {}
        self._inv = [index[_perm_inverse(p)] for p in perms]
        if self.order <= _EAGER_TABLE_MAX:
            self._table = [
                tuple(index[_perm_compose(pa, pb)] for pb in perms)
                for pa in perms
            ]

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return self._table[a][b]
        key = (a, b)
        got = self._memo.get(key)
        if got is None:
            got = self._index[_perm_compose(self.perms[a], self.perms[b])]
            self._memo[key] = got
        return got

    def inv(self, a: int) -> int:
        return self._inv[a]


class ProductGroup(Group):
    """Direct product with element indices packed as ``a * |B| + b``."""

    def __init__(self, left: Group, right: Group, *, name: str | None = None,
                 order_cap: int = DEFAULT_ORDER_CAP):
        self.left = left
        self.right = right
        self.order = left.order * right.order
        if self.order > order_cap:
            raise ResourceError(
                f"product order {self.order} exceeds cap {order_cap}"
            )
        self.name = name or f"{left.name}x{right.name}"

    def _split(self, x: int) -> tuple[int, int]:
        return divmod(x, self.right.order)

    def _join(self, a: int, b: int) -> int:
        return a * self.right.order + b

    def mul(self, a: int, b: int) -> int:
        a1, a2 = self._split(a)
        b1, b2 = self._split(b)
        return self._join(self.left.mul(a1, b1), self.right.mul(a2, b2))

    def inv(self, a: int) -> int:
        a1, a2 = self._split(a)
        return self._join(self.left.inv(a1), self.right.inv(a2))


def _perm_compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Composite ``p after q``: x -> p[q[x]]."""
    return tuple(p[x] for x in q)


def _perm_inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def group_from_generators(perms: Sequence[Sequence[int]], *, name: str = "G",
                          order_cap: int = DEFAULT_ORDER_CAP) -> Group:
    """Close permutation generators into a group.

    Elements are indexed in BFS order from the identity, following the
    generators in the order given, so the numbering is deterministic.
    Raises :class:`ResourceError` if the closure exceeds ``order_cap``.
    """
    if not perms:
        degree = 1
    else:
        degree = len(perms[0])
    gens: list[tuple[int, ...]] = []
    for p in perms:
        t = tuple(int(x) for x in p)
        if len(t) != degree or sorted(t) != list(range(degree)):
            raise DomainError(f"not a permutation of 0..{degree - 1}: {p!r}")
        gens.append(t)
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    queue = 0
    while queue < len(elems):
        cur = elems[queue]
        queue += 1
        for g in gens:
            nxt = _perm_compose(cur, g)
            if nxt not in index:
                if len(elems) >= order_cap:
                    raise ResourceError(
                        f"closure of generators exceeds order cap {order_cap}"
                    )
                index[nxt] = len(elems)
                elems.append(nxt)
    return PermGroup(name, elems, index)


# ---------------------------------------------------------------------------
# Builtin groups.
#
# Grammar:  group := atom ('x' atom)*
#           atom  := ('C' | 'D' | 'S' | 'A') digits | 'Q8'
# Case-sensitive, no whitespace.  D_n has order 2n.

_ATOM_RE = re.compile(r"(C|D|S|A)([0-9]+)$|Q8$")

# Left multiplication by i and j on the quaternion units
# (+1, -1, +i, -i, +j, -j, +k, -k) in that order.
_Q8_I = (2, 3, 1, 0, 6, 7, 5, 4)
_Q8_J = (4, 5, 7, 6, 1, 0, 2, 3)


def _cycle(n: int) -> tuple[int, ...]:
    return tuple((i + 1) % n for i in range(n))


def _atom_generators(kind: str, n: int) -> tuple[list[tuple[int, ...]], int]:
    """Return (permutation generators, expected order) for one atom."""
    if kind == "Q8":
        return [_Q8_I, _Q8_J], 8
    if kind == "C":
        if n == 1:
            return [], 1
        return [_cycle(n)], n
    if kind == "D":
        if n == 1:
            return [_cycle(2)], 2
        if n == 2:
            return [(1, 0, 2, 3), (0, 1, 3, 2)], 4
        rot = _cycle(n)
        refl = tuple((n - i) % n for i in range(n))
        return [rot, refl], 2 * n
    if kind == "S":
        if n <= 1:
            return [], 1
        swap = tuple([1, 0] + list(range(2, n)))
        return [swap, _cycle(n)], _factorial(n)
    if kind == "A":
        if n <= 2:
            return [], 1
        gens = []
        for i in range(n - 2):
            p = list(range(n))
            p[i], p[i + 1], p[i + 2] = p[i + 1], p[i + 2], p[i]
            gens.append(tuple(p))
        return gens, _factorial(n) // 2
    raise SpecError(f"unknown atom kind {kind!r}")


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def parse_group_spec(spec: str) -> list[tuple[str, int]]:
    """Split a group spec into atoms, validating the grammar strictly."""
    if not isinstance(spec, str) or not spec:
        raise SpecError("empty group spec")
    atoms: list[tuple[str, int]] = []
    pos = 0
    for part in spec.split("x"):
        m = _ATOM_RE.fullmatch(part)
        if m is None:
            raise SpecError(
                f"bad atom {part!r} in group spec {spec!r} "
                "(expected C<n>, D<n>, S<n>, A<n>, or Q8)",
                position=pos,
            )
        if part == "Q8":
            atoms.append(("Q8", 8))
        else:
            n = int(m.group(2))
            if n < 1:
                raise SpecError(f"atom {part!r} needs n >= 1", position=pos)
            atoms.append((m.group(1), n))
        pos += len(part) + 1
    return atoms


@lru_cache(maxsize=64)
def builtin_group(spec: str, order_cap: int = DEFAULT_ORDER_CAP) -> Group:
    """Construct a builtin group from a spec like ``C4``, ``D4``, ``C2xS3``.

    The result is cached; element numbering is deterministic across runs.
    """
    atoms = parse_group_spec(spec)
    parts: list[Group] = []
    total = 1
    for kind, n in atoms:
        atom_name = "Q8" if kind == "Q8" else f"{kind}{n}"
        gens, expected = _atom_generators(kind, n)
        total *= expected
        if total > order_cap:
            raise ResourceError(
                f"group {spec!r} has order {total}+ exceeding cap {order_cap}"
            )
        g = group_from_generators(gens, name=atom_name, order_cap=order_cap)
        if g.order != expected:
            raise DomainError(
                f"atom {atom_name}: closure has order {g.order}, "
                f"expected {expected}"
            )
        parts.append(g)
    out = parts[0]
    for right in parts[1:]:
        out = ProductGroup(out, right, order_cap=order_cap)
    out.name = spec
    return out


# ---------------------------------------------------------------------------
# Subgroups.


class Subgroup:
    """A subgroup stored as a bitmask over element indices."""

    __slots__ = ("group", "mask", "elements", "order")

    def __init__(self, group: Group, mask: int):
        if not mask & 1:
            raise DomainError("subgroup mask must contain the identity")
        self.group = group
        self.mask = mask
        self.elements = tuple(bits(mask))
        self.order = len(self.elements)

    @classmethod
    def full(cls, group: Group) -> "Subgroup":
        return cls(group, (1 << group.order) - 1)

    @classmethod
    def trivial(cls, group: Group) -> "Subgroup":
        return cls(group, 1)

    @classmethod
    def generated(cls, group: Group, gens: Iterable[int]) -> "Subgroup":
        return cls(group, subgroup_closure(group, list(gens)))

    def contains(self, g: int) -> bool:
        return bool(self.mask >> g & 1)

    def is_subset_of(self, other: "Subgroup") -> bool:
        return self.mask & ~other.mask == 0

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, self.mask & other.mask)

    def conjugate_mask(self, g: int) -> int:
        """Mask of ``g H g^-1``."""
        grp = self.group
        return mask_of(grp.conj(g, x) for x in self.elements)

    def conjugated(self, g: int) -> "Subgroup":
        return Subgroup(self.group, self.conjugate_mask(g))

    def check_closed(self) -> None:
        for a in self.elements:
            if not self.contains(self.group.inv(a)):
                raise DomainError("subgroup not closed under inverse")
            for b in self.elements:
                if not self.contains(self.group.mul(a, b)):
                    raise DomainError("subgroup not closed under product")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.group is self.group
            and other.mask == self.mask
        )

    def __hash__(self) -> int:
        return hash((id(self.group), self.mask))

    def __repr__(self) -> str:
        return f"<Subgroup order={self.order} of {self.group.name}>"


def subgroup_closure(group: Group, gens: Sequence[int]) -> int:
    """Bitmask of the subgroup generated by ``gens``."""
    mask = 1
    elems = [0]
    queue = 0
    while queue < len(elems):
        cur = elems[queue]
        queue += 1
        for g in gens:
            nxt = group.mul(cur, g)
            if not mask >> nxt & 1:
                mask |= 1 << nxt
                elems.append(nxt)
    return mask


# ---------------------------------------------------------------------------
# Structure names for subgroup aliases.

# Nonabelian types keyed by (order, number of involutions); only the types
# that actually occur inside the builtin ambient families need names, the
# rest fall back to G<order>.
_NONABELIAN_BY_COUNT = {
    (8, 1): "Q8",
    (12, 3): "A4",
    (24, 9): "S4",
    (60, 15): "A5",
    (120, 25): "S5",
    (360, 45): "A6",
}


def _abelian_factors(group: Group, elems: Sequence[int]) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of an abelian subgroup, ascending.

    Per prime p the partition of exponents is recovered from the counts
    s_k = #{x : x^(p^k) = e}: the differences log_p(s_k) - log_p(s_{k-1})
    form the conjugate partition.
    """
    order = len(elems)
    primes = []
    n = order
    p = 2
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        primes.append(n)
    orders = [group.element_order(x) for x in elems]
    partitions: dict[int, list[int]] = {}
    for p in primes:
        target = _p_part(order, p)
        conj = []
        prev = 0
        pk = p
        while True:
            s = sum(1 for o in orders if pk % o == 0)
            conj.append(_int_log(s, p) - prev)
            prev = _int_log(s, p)
            if s == target:
                break
            pk *= p
        lam = []
        i = 1
        while True:
            row = sum(1 for c in conj if c >= i)
            if row == 0:
                break
            lam.append(row)
            i += 1
        partitions[p] = lam  # exponents, descending
    width = max(len(v) for v in partitions.values())
    factors = []
    for i in range(width):
        d = 1
        for p, lam in partitions.items():
            if i < len(lam):
                d *= p ** lam[i]
        factors.append(d)
    return sorted(factors)


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def _int_log(value: int, p: int) -> int:
    out = 0
    while value > 1:
        value //= p
        out += 1
    return out


def structure_name(group: Group, sub: Subgroup) -> str:
    """A short human name for the isomorphism type of ``sub``.

    Distinguishes only the types that occur in practice for the builtin
    ambient groups; anything unrecognized is named ``G<order>``.
    """
    n = sub.order
    if n == 1:
        return "e"
    elems = sub.elements
    orders = {x: group.element_order(x) for x in elems}
    if max(orders.values()) == n:
        return f"C{n}"
    abelian = all(
        group.mul(a, b) == group.mul(b, a) for a in elems for b in elems
    )
    if abelian:
        return "x".join(f"C{d}" for d in _abelian_factors(group, elems))
    if n % 2 == 0:
        half = n // 2
        for r in elems:
            if orders[r] != half:
                continue
            rot = subgroup_closure(group, [r])
            rinv = group.inv(r)
            for s in elems:
                if rot >> s & 1 or orders[s] != 2:
                    continue
                if group.conj(s, r) == rinv:
                    return "S3" if n == 6 else f"D{half}"
    invol = sum(1 for o in orders.values() if o == 2)
    named = _NONABELIAN_BY_COUNT.get((n, invol))
    return named or f"G{n}"


# ---------------------------------------------------------------------------
# Subgroup lattices.


class SubgroupLattice:
    """All subgroups of an ambient group, with conjugation data.

    ``ambient`` defaults to the whole group; building the lattice of a
    proper subgroup (conjugacy, double cosets, cores all relative to that
    subgroup) is what :meth:`restrict` does.

    Subgroups are ordered by (order, element tuple), so index comparisons
    are compatible with inclusion and the numbering is deterministic.
    """

    def __init__(self, group: Group, ambient: Subgroup | None = None, *,
                 order_cap: int = DEFAULT_LATTICE_ORDER_CAP,
                 count_cap: int = DEFAULT_SUBGROUP_COUNT_CAP):
        self.group = group
        self.ambient = ambient if ambient is not None else Subgroup.full(group)
        if self.ambient.order > order_cap:
            raise ResourceError(
                f"ambient order {self.ambient.order} exceeds lattice gate "
                f"{order_cap}"
            )
        self.subgroups: list[Subgroup] = self._enumerate(count_cap)
        self.index_of = {s.mask: i for i, s in enumerate(self.subgroups)}
        n = len(self.subgroups)
        self.size = n
        # up[i] = lattice indices j with subgroups[i] <= subgroups[j];
        # down[j] mirrors it from the other end.
        self.up = [0] * n
        self.down = [0] * n
        for i, si in enumerate(self.subgroups):
            for j, sj in enumerate(self.subgroups):
                if si.mask & ~sj.mask == 0:
                    self.up[i] |= 1 << j
                    self.down[j] |= 1 << i
        self._elem_pos = {g: p for p, g in enumerate(self.ambient.elements)}
        self._conj = self._conjugation_table()
        self.classes = self._conjugacy_classes()
        self.class_of = [0] * n
        for c, members in enumerate(self.classes):
            for i in members:
                self.class_of[i] = c
        self.class_reps = [members[0] for members in self.classes]
        self._inter: dict[tuple[int, int], int] = {}
        self._labels: list[str] | None = None
        self._aliases: dict[str, int] | None = None
        self._moebius: list[dict[int, int]] | None = None
        self._restrictions: dict[int, "SubgroupLattice"] = {}
        self._dcosets: dict[tuple[int, int], tuple[int, ...]] = {}

    # -- construction --------------------------------------------------

    def _enumerate(self, count_cap: int) -> list[Subgroup]:
        group = self.group
        amb = self.ambient.mask
        found: dict[int, list[int]] = {1: []}
        cyclic: list[tuple[int, int]] = []
        for g in self.ambient.elements:
            m = subgroup_closure(group, [g])
            if m & ~amb:
                raise DomainError("ambient set is not closed under products")
            if m not in found:
                found[m] = [g]
                cyclic.append((m, g))
        frontier = list(found)
        while frontier:
            fresh: list[int] = []
            for hmask in frontier:
                hgens = found[hmask]
                for cmask, cgen in cyclic:
                    if cmask & ~hmask == 0:
                        continue
                    jmask = subgroup_closure(group, hgens + [cgen])
                    if jmask not in found:
                        if len(found) >= count_cap:
                            raise ResourceError(
                                f"more than {count_cap} subgroups; "
                                "raise count_cap if this is intended"
                            )
                        found[jmask] = hgens + [cgen]
                        fresh.append(jmask)
            frontier = fresh
        subs = [Subgroup(group, m) for m in found]
        subs.sort(key=lambda s: (s.order, s.elements))
        return subs

    def _conjugation_table(self) -> list[list[int]]:
        table = []
        for sub in self.subgroups:
            row = []
            for g in self.ambient.elements:
                row.append(self.index_of[sub.conjugate_mask(g)])
            table.append(row)
        return table

    def _conjugacy_classes(self) -> list[tuple[int, ...]]:
        seen = [False] * self.size
        classes = []
        for i in range(self.size):
            if seen[i]:
                continue
            orbit = sorted(set(self._conj[i]))
            for j in orbit:
                seen[j] = True
            classes.append(tuple(orbit))
        return classes

    # -- basic queries -------------------------------------------------

    def subgroup(self, i: int) -> Subgroup:
        return self.subgroups[i]

    def leq(self, i: int, j: int) -> bool:
        """Containment subgroups[i] <= subgroups[j]."""
        return bool(self.up[i] >> j & 1)

    def intersect(self, i: int, j: int) -> int:
        key = (i, j) if i <= j else (j, i)
        got = self._inter.get(key)
        if got is None:
            got = self.index_of[self.subgroups[i].mask & self.subgroups[j].mask]
            self._inter[key] = got
        return got

    def conj_action(self, i: int, g: int) -> int:
        """Index of ``subgroups[i]^g`` for ``g`` in the ambient group."""
        return self._conj[i][self._elem_pos[g]]

    def core(self, i: int) -> int:
        """Index of the intersection of all ambient conjugates of i."""
        m = self.subgroups[i].mask
        for j in self.classes[self.class_of[i]]:
            m &= self.subgroups[j].mask
        return self.index_of[m]

    def normalizer_mask(self, i: int) -> int:
        sub = self.subgroups[i]
        return mask_of(
            g for g in self.ambient.elements
            if sub.conjugate_mask(g) == sub.mask
        )

    @property
    def trivial_index(self) -> int:
        return 0

    @property
    def full_index(self) -> int:
        return self.size - 1

    def indices_within(self, h: int) -> list[int]:
        """Lattice indices of all subgroups contained in subgroups[h]."""
        hmask = self.subgroups[h].mask
        return [i for i, s in enumerate(self.subgroups) if s.mask & ~hmask == 0]

    # -- double cosets -------------------------------------------------

    def double_coset_reps(self, k: int, l: int) -> tuple[int, ...]:
        """Representatives of K \\ ambient / L, identity first.

        Deterministic: representatives are the least ambient element of
        each double coset, scanned in increasing order.
        """
        key = (k, l)
        got = self._dcosets.get(key)
        if got is not None:
            return got
        group = self.group
        kel = self.subgroups[k].elements
        lel = self.subgroups[l].elements
        seen = 0
        reps = []
        for g in self.ambient.elements:
            if seen >> g & 1:
                continue
            reps.append(g)
            for a in kel:
                ag = group.mul(a, g)
                for b in lel:
                    seen |= 1 << group.mul(ag, b)
        out = tuple(reps)
        self._dcosets[key] = out
        return out

    # -- restricted lattices and Moebius -------------------------------

    def restrict(self, h: int) -> "SubgroupLattice":
        """The lattice of subgroups[h] as its own ambient group."""
        if self.subgroups[h].mask == self.ambient.mask:
            return self
        got = self._restrictions.get(h)
        if got is None:
            got = SubgroupLattice(self.group, self.subgroups[h])
            self._restrictions[h] = got
        return got

    def moebius(self) -> list[dict[int, int]]:
        """Moebius function of the inclusion poset: mu[i][j] for i <= j."""
        if self._moebius is None:
            mu: list[dict[int, int]] = [dict() for _ in range(self.size)]
            for i in range(self.size):
                mu[i][i] = 1
                above = [j for j in bits(self.up[i]) if j != i]
                for j in above:
                    acc = 0
                    for m in bits(self.up[i] & ~(1 << j)):
                        if self.leq(m, j):
                            acc += mu[i][m]
                    mu[i][j] = -acc
            self._moebius = mu
        return self._moebius

    # -- labels --------------------------------------------------------

    def canonical_label(self, i: int) -> str:
        return "{" + ",".join(str(x) for x in self.subgroups[i].elements) + "}"

    def _build_labels(self) -> None:
        names = [structure_name(self.group, s) for s in self.subgroups]
        counts: dict[str, int] = {}
        for nm in names:
            counts[nm] = counts.get(nm, 0) + 1
        seen: dict[str, int] = {}
        labels = []
        aliases: dict[str, int] = {}
        for i, nm in enumerate(names):
            if counts[nm] == 1:
                label = nm
            else:
                seen[nm] = seen.get(nm, 0) + 1
                label = f"{nm}#{seen[nm]}"
            labels.append(label)
            aliases[label] = i
        aliases.setdefault("e", 0)
        aliases["G"] = self.size - 1
        for i in range(self.size):
            aliases[self.canonical_label(i)] = i
        self._labels = labels
        self._aliases = aliases

    def label(self, i: int) -> str:
        if self._labels is None:
            self._build_labels()
        return self._labels[i]

    def parse_label(self, text: str) -> int:
        """Resolve a subgroup label: alias, ``e``/``G``, or ``{i,j,...}``."""
        if self._aliases is None:
            self._build_labels()
        text = text.strip()
        got = self._aliases.get(text)
        if got is not None:
            return got
        if text.startswith("{") and text.endswith("}"):
            body = text[1:-1].strip()
            try:
                idxs = [int(t) for t in body.split(",")] if body else []
            except ValueError:
                raise SpecError(f"bad subgroup element list {text!r}") from None
            if not all(0 <= x < self.group.order for x in idxs):
                raise SpecError(f"element index out of range in {text!r}")
            mask = mask_of(idxs)
            if not mask & 1:
                raise SpecError(
                    f"{text!r} does not contain the identity element 0"
                )
            idx = self.index_of.get(mask)
            if idx is None:
                raise SpecError(f"{text!r} is not a subgroup of {self.group.name}")
            return idx
        raise SpecError(
            f"unknown subgroup label {text!r} for group {self.group.name}"
        )

    def describe(self) -> str:
        """Multi-line text table of the lattice (the `lattice` CLI view)."""
        lines = [
            f"group {self.group.name}  order {self.ambient.order}  "
            f"subgroups {self.size}  classes {len(self.classes)}"
        ]
        for i, sub in enumerate(self.subgroups):
            cls = self.class_of[i]
            lines.append(
                f"[{i:3d}] {self.label(i):<12} order {sub.order:<4} "
                f"class {cls:<3} core {self.label(self.core(i)):<12} "
                f"members {self.canonical_label(i)}"
            )
        return "\n".join(lines)


@lru_cache(maxsize=32)
def builtin_lattice(spec: str,
                    order_cap: int = DEFAULT_LATTICE_ORDER_CAP) -> SubgroupLattice:
    """Lattice of a builtin group, cached per spec string."""
    return SubgroupLattice(builtin_group(spec), order_cap=order_cap)
