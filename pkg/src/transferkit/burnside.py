"""The bi-incomplete Burnside functor over one finite group.

An element at level H is an integer combination of transitive H-sets,
keyed by conjugacy-class representatives inside H's own subgroup lattice.
A :class:`TambaraContext` couples a compatible pair of transfer systems
and gates the generator operations: restrictions always exist, transfers
need the additive system, norms need the multiplicative system and an
effective (coefficientwise nonnegative) input.

Norms are computed by coinduction at the counting level; transfers by
induction; products by the double-coset product.  The verifier functions
at the bottom re-derive the composition laws on actual sets, which is the
point: the algebra here must never say anything the sets disagree with.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import DomainError, GatingError
from .groups import SubgroupLattice
from .gsets import (
    DEFAULT_POINT_CAP,
    GMap,
    GSet,
    Profile,
    coinduce_classes,
    conjugate_classes,
    dependent_product,
    exponential_diagram,
    induce_classes,
    materialize_profile,
    normalize_profile,
    product_classes,
    profile_to_text,
    pullback,
    restrict_classes,
    slice_profile,
)
from .transfer_systems import (
    CompatibilityReport,
    TransferSystem,
    compatible,
    map_in_indexing,
)


class BurnsideElement:
    """An integer combination of transitive sets at one subgroup level."""

    __slots__ = ("lattice", "level", "coeffs")

    def __init__(self, lattice: SubgroupLattice, level: int,
                 coeffs: Mapping[int, int]):
        level_lat = lattice.restrict(level)
        reps = set(level_lat.class_reps)
        for key in coeffs:
            if key not in reps:
                raise DomainError(
                    f"coefficient key {key} is not a class representative "
                    f"at level {lattice.label(level)}"
                )
        self.lattice = lattice
        self.level = level
        self.coeffs = {k: v for k, v in sorted(coeffs.items()) if v}

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, lattice: SubgroupLattice, level: int) -> "BurnsideElement":
        return cls(lattice, level, {})

    @classmethod
    def basis(cls, lattice: SubgroupLattice, level: int,
              rep: int) -> "BurnsideElement":
        """The single transitive set ``[level / rep]``."""
        return cls(lattice, level, {rep: 1})

    @classmethod
    def one(cls, lattice: SubgroupLattice, level: int) -> "BurnsideElement":
        level_lat = lattice.restrict(level)
        return cls(lattice, level, {level_lat.size - 1: 1})

    # -- structure -----------------------------------------------------

    @property
    def effective(self) -> bool:
        return all(v >= 0 for v in self.coeffs.values())

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        self._align(other)
        merged = dict(self.coeffs)
        for k, v in other.coeffs.items():
            merged[k] = merged.get(k, 0) + v
        return BurnsideElement(self.lattice, self.level, merged)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scaled(other)
        self._align(other)
        prod = product_classes(
            self.lattice, self.level, dict(self.coeffs), dict(other.coeffs)
        )
        return BurnsideElement(self.lattice, self.level, prod)

    def __rmul__(self, other: int) -> "BurnsideElement":
        return self.scaled(other)

    def scaled(self, n: int) -> "BurnsideElement":
        return BurnsideElement(
            self.lattice, self.level, {k: n * v for k, v in self.coeffs.items()}
        )

    def conjugate(self, g: int) -> "BurnsideElement":
        """Transport to the conjugate level; ungated."""
        new_level, moved = conjugate_classes(
            self.lattice, self.level, g, dict(self.coeffs)
        )
        return BurnsideElement(self.lattice, new_level, moved)

    def realize(self) -> GSet:
        """The element as an actual set: coefficient-many copies of each
        transitive set, in class order.  Effective elements only."""
        if not self.effective:
            raise DomainError("only effective elements can be realized")
        return materialize_profile(self.lattice, self.level, dict(self.coeffs))

    def _align(self, other: "BurnsideElement") -> None:
        if other.lattice is not self.lattice:
            raise DomainError("elements live over different lattices")
        if other.level != self.level:
            raise DomainError(
                f"level mismatch: {self.lattice.label(self.level)} "
                f"vs {self.lattice.label(other.level)}"
            )

    # -- presentation --------------------------------------------------

    def text(self) -> str:
        return profile_to_text(self.lattice, self.level, dict(self.coeffs))

    def to_json_dict(self) -> dict:
        level_lat = self.lattice.restrict(self.level)
        rows = sorted(
            [level_lat.label(k), v] for k, v in self.coeffs.items()
        )
        return {"level": self.lattice.label(self.level), "coeffs": rows}

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BurnsideElement)
            and other.lattice is self.lattice
            and other.level == self.level
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.lattice), self.level, tuple(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"<BurnsideElement {self.text()} at {self.lattice.label(self.level)}>"


class TambaraContext:
    """A compatible pair of transfer systems driving the generator ops.

    Construction fails fast with the witness triple when the pair is not
    compatible; nothing downstream ever needs to worry about a norm whose
    interchange past a transfer would leave the additive system.
    """

    def __init__(self, mult: TransferSystem, add: TransferSystem):
        report = compatible(mult, add)
        if not report.ok:
            raise DomainError(
                "cannot build a context over an incompatible pair: "
                + report.describe(mult.lattice)
            )
        self.lattice = mult.lattice
        self.mult = mult
        self.add = add
        self.certificate: CompatibilityReport = report

    # -- element helpers -----------------------------------------------

    def zero(self, level: int) -> BurnsideElement:
        return BurnsideElement.zero(self.lattice, level)

    def one(self, level: int) -> BurnsideElement:
        return BurnsideElement.one(self.lattice, level)

    def basis(self, level: int, rep: int) -> BurnsideElement:
        return BurnsideElement.basis(self.lattice, level, rep)

    # -- generator operations ------------------------------------------

    def res(self, k: int, h: int, x: BurnsideElement) -> BurnsideElement:
        """Restriction from level h to level k; always available."""
        self._expect_level(x, h)
        if not self.lattice.leq(k, h):
            raise DomainError("restriction needs nested subgroups")
        moved = restrict_classes(self.lattice, h, k, dict(x.coeffs))
        return BurnsideElement(self.lattice, k, moved)

    def tr(self, k: int, h: int, x: BurnsideElement) -> BurnsideElement:
        """Transfer (additive induction) from level k to level h."""
        self._expect_level(x, k)
        if not self.lattice.leq(k, h):
            raise DomainError("transfer needs nested subgroups")
        if not self.add.admits(k, h):
            raise GatingError(
                f"transfer {self.lattice.label(k)} -> {self.lattice.label(h)} "
                "is not admitted by the additive system"
            )
        moved = induce_classes(self.lattice, k, h, dict(x.coeffs))
        return BurnsideElement(self.lattice, h, moved)

    def norm(self, k: int, h: int, x: BurnsideElement) -> BurnsideElement:
        """Norm (multiplicative coinduction) from level k to level h.

        Defined on effective elements only: the norm is multiplicative
        but not additive, so it does not extend linearly to virtual
        differences.
        """
        self._expect_level(x, k)
        if not self.lattice.leq(k, h):
            raise DomainError("norm needs nested subgroups")
        if not self.mult.admits(k, h):
            raise GatingError(
                f"norm {self.lattice.label(k)} -> {self.lattice.label(h)} "
                "is not admitted by the multiplicative system"
            )
        if not x.effective:
            raise DomainError(
                "norm of a virtual element: only effective elements "
                "(sets, not differences) have norms"
            )
        moved = coinduce_classes(self.lattice, k, h, dict(x.coeffs))
        return BurnsideElement(self.lattice, h, moved)

    def conj(self, g: int, x: BurnsideElement) -> BurnsideElement:
        return x.conjugate(g)

    def _expect_level(self, x: BurnsideElement, level: int) -> None:
        if x.lattice is not self.lattice:
            raise DomainError("element lives over a different lattice")
        if x.level != level:
            raise DomainError(
                f"expected an element at {self.lattice.label(level)}, "
                f"got one at {self.lattice.label(x.level)}"
            )


# ---------------------------------------------------------------------------
# Spans: the additive morphisms, composed by pullback.


class Span:
    """``[X <- A -> Y]``: restrict along the left leg, transfer the right."""

    def __init__(self, ctx: TambaraContext, left: GMap, right: GMap):
        if left.src is not right.src:
            raise DomainError("span legs must share their source")
        if not map_in_indexing(ctx.add, right):
            raise GatingError(
                "span transfer leg is not admitted by the additive system"
            )
        self.ctx = ctx
        self.left = left
        self.right = right

    @classmethod
    def restriction(cls, ctx: TambaraContext, f: GMap) -> "Span":
        ident = GMap(f.src, f.src, range(f.src.size), validate=False)
        return cls(ctx, f, ident)

    @classmethod
    def transfer(cls, ctx: TambaraContext, f: GMap) -> "Span":
        ident = GMap(f.src, f.src, range(f.src.size), validate=False)
        return cls(ctx, ident, f)


def compose_spans(first: Span, second: Span) -> Span:
    """Composite span via the pullback of the middle cospan.

    Pullback stability keeps the new transfer leg admissible whenever the
    additive system is genuinely a transfer system; that is asserted, not
    assumed.
    """
    if first.right.dst is not second.left.dst:
        raise DomainError("spans do not share the middle object")
    _, to_a, to_b = pullback(first.right, second.left)
    left = to_a.compose(first.left)
    right = to_b.compose(second.right)
    assert map_in_indexing(first.ctx.add, right), (
        "pullback broke transfer gating; the additive system is not "
        "intersection closed"
    )
    return Span(first.ctx, left, right)


def spans_isomorphic(a: Span, b: Span) -> bool:
    """Isomorphism over the two feet, via the slice invariant of X x Y."""
    if a.left.dst is not b.left.dst or a.right.dst is not b.right.dst:
        return False
    return _span_key(a) == _span_key(b)


def _span_key(s: Span) -> Profile:
    base = s.left.dst.product(s.right.dst)
    pairing = GMap(
        s.left.src, base,
        [base.pos[s.left(i), s.right(i)] for i in range(s.left.src.size)],
        validate=False,
    )
    return slice_profile(pairing)


class Bispan:
    """``[X <- A -> B -> Y]``: restrict, then norm, then transfer."""

    def __init__(self, ctx: TambaraContext, res_leg: GMap, norm_leg: GMap,
                 tr_leg: GMap):
        if res_leg.src is not norm_leg.src:
            raise DomainError("bispan legs must share their source")
        if tr_leg.src is not norm_leg.dst:
            raise DomainError("bispan norm and transfer legs do not compose")
        if not map_in_indexing(ctx.mult, norm_leg):
            raise GatingError(
                "bispan norm leg is not admitted by the multiplicative system"
            )
        if not map_in_indexing(ctx.add, tr_leg):
            raise GatingError(
                "bispan transfer leg is not admitted by the additive system"
            )
        self.ctx = ctx
        self.res_leg = res_leg
        self.norm_leg = norm_leg
        self.tr_leg = tr_leg


# ---------------------------------------------------------------------------
# Verifiers: the algebra against the sets.


def verify_mackey_dcf(ctx: TambaraContext, k: int, l: int, h: int,
                      x: BurnsideElement) -> bool:
    """Restriction of a transfer as a sum over double cosets.

    ``res_K tr_L = sum over K\\H/L of tr . res . conj``; the right-hand
    transfers are gated automatically once the left one is, because the
    additive system is closed under intersection.
    """
    lat = ctx.lattice
    if not (lat.leq(k, h) and lat.leq(l, h)):
        raise DomainError("both subgroups must sit inside the level")
    lhs = ctx.res(k, h, ctx.tr(l, h, x))
    sub = lat.restrict(h)
    kk = sub.index_of[lat.subgroup(k).mask]
    ll = sub.index_of[lat.subgroup(l).mask]
    rhs = ctx.zero(k)
    for g in sub.double_coset_reps(kk, ll):
        moved = ctx.conj(g, x)
        m = lat.intersect(k, moved.level)
        rhs = rhs + ctx.tr(m, k, ctx.res(m, moved.level, moved))
    return lhs == rhs


def tambara_sides(
    ctx: TambaraContext, t: GMap, n: GMap, x_over: GMap, *,
    point_cap: int = DEFAULT_POINT_CAP,
) -> tuple[GMap, GMap]:
    """Both composites of the norm-past-transfer interchange, as slices.

    The left side is the norm along ``n`` of the transfer along ``t`` of
    the set ``x_over : S -> A``; the right side routes through the
    exponential diagram of ``(t, n)``.  Both come back as objects over
    the target of ``n``.
    """
    if x_over.dst is not t.src:
        raise DomainError("the element must be realized over the source of t")
    if not map_in_indexing(ctx.add, t):
        raise GatingError(
            "interchange transfer leg is not admitted by the additive system"
        )
    if not map_in_indexing(ctx.mult, n):
        raise GatingError(
            "interchange norm leg is not admitted by the multiplicative system"
        )
    lifted = GMap(
        x_over.src, n.src,
        [t(x_over(i)) for i in range(x_over.src.size)],
        validate=False,
    )
    lhs = dependent_product(lifted, n, point_cap=point_cap).proj

    diagram = exponential_diagram(t, n, point_cap=point_cap)
    _, to_pulled, _ = pullback(diagram.r_prime, x_over)
    normed = dependent_product(
        to_pulled, diagram.n_prime, point_cap=point_cap
    ).proj
    rhs = normed.compose(diagram.t_prime)
    return lhs, rhs


def verify_tambara_interchange(
    ctx: TambaraContext, t: GMap, n: GMap, x_over: GMap, *,
    point_cap: int = DEFAULT_POINT_CAP,
) -> bool:
    lhs, rhs = tambara_sides(ctx, t, n, x_over, point_cap=point_cap)
    return slice_profile(lhs) == slice_profile(rhs)


# ---------------------------------------------------------------------------
# Expression grammar, shared with the command line:
#
#   expr   := term ('+' term)*
#   term   := factor ('*' factor)*
#   factor := INT | '[' H '/' L ']' | call | '(' expr ')'
#   call   := ('res'|'tr'|'norm') '(' K ',' H ',' expr ')'
#           | 'conj' '(' INT ',' expr ')'
#
# H and K are subgroup labels of the whole group; L is a label inside the
# restricted lattice of H.  An integer factor scales; two elements
# multiply in the level's ring.

_OPS = ("res", "tr", "norm", "conj")


def _tokenize(text: str) -> list[tuple[str, object]]:
    out: list[tuple[str, object]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+*(),/":
            out.append((ch, ch))
            i += 1
            continue
        if ch == "[":
            j = text.find("]", i)
            if j == -1:
                raise SpecErrorAt(text, i, "unterminated class literal")
            inner = text[i + 1:j]
            if inner.count("/") != 1:
                raise SpecErrorAt(text, i, "class literal needs one '/'")
            h_lab, l_lab = (part.strip() for part in inner.split("/"))
            out.append(("class", (h_lab, l_lab)))
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(("int", int(text[i:j])))
            i = j
            continue
        if ch == "{":
            j = text.find("}", i)
            if j == -1:
                raise SpecErrorAt(text, i, "unterminated subgroup label")
            out.append(("label", text[i:j + 1]))
            i = j + 1
            continue
        if ch.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "#"):
                j += 1
            word = text[i:j]
            out.append((word, word) if word in _OPS else ("label", word))
            i = j
            continue
        raise SpecErrorAt(text, i, f"unexpected character {ch!r}")
    out.append(("end", None))
    return out


def SpecErrorAt(text: str, pos: int, message: str):
    from .errors import SpecError

    return SpecError(f"column {pos + 1}: {message}", position=pos)


class _ExprParser:
    """Recursive descent over the token list; values are either plain
    integers or Burnside elements, resolved at the operators."""

    def __init__(self, ctx: TambaraContext, text: str):
        self.ctx = ctx
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> str:
        return self.tokens[self.pos][0]

    def take(self, kind: str | None = None):
        tk, value = self.tokens[self.pos]
        if kind is not None and tk != kind:
            raise SpecErrorAt(self.text, 0, f"expected {kind!r}, found {tk!r}")
        self.pos += 1
        return value

    def parse(self):
        value = self.expr()
        if self.peek() != "end":
            raise SpecErrorAt(self.text, 0, "trailing input after expression")
        if isinstance(value, int):
            raise SpecErrorAt(
                self.text, 0, "expression is a bare integer, not an element"
            )
        return value

    def expr(self):
        value = self.term()
        while self.peek() == "+":
            self.take("+")
            value = self._add(value, self.term())
        return value

    def term(self):
        value = self.factor()
        while self.peek() == "*":
            self.take("*")
            value = self._mul(value, self.factor())
        return value

    def factor(self):
        kind = self.peek()
        if kind == "int":
            return self.take("int")
        if kind == "(":
            self.take("(")
            value = self.expr()
            self.take(")")
            return value
        if kind == "class":
            h_lab, l_lab = self.take("class")
            return _class_literal(self.ctx.lattice, h_lab, l_lab)
        if kind in _OPS:
            return self.call(self.take(kind))
        raise SpecErrorAt(self.text, 0, f"unexpected token {kind!r}")

    def call(self, op: str):
        self.take("(")
        if op == "conj":
            g = self.take("int")
            self.take(",")
            x = self._as_element(self.expr())
            self.take(")")
            return self.ctx.conj(g, x)
        k_lab = self.take("label")
        self.take(",")
        h_lab = self.take("label")
        self.take(",")
        x = self._as_element(self.expr())
        self.take(")")
        lat = self.ctx.lattice
        k = lat.parse_label(k_lab)
        h = lat.parse_label(h_lab)
        if op == "res":
            return self.ctx.res(k, h, x)
        if op == "tr":
            return self.ctx.tr(k, h, x)
        return self.ctx.norm(k, h, x)

    def _as_element(self, value):
        if isinstance(value, int):
            raise SpecErrorAt(
                self.text, 0, "expected an element, found a bare integer"
            )
        return value

    def _add(self, a, b):
        if isinstance(a, int) and isinstance(b, int):
            return a + b
        return self._as_element(a) + self._as_element(b)

    def _mul(self, a, b):
        if isinstance(a, int) and isinstance(b, int):
            return a * b
        if isinstance(a, int):
            return b.scaled(a)
        if isinstance(b, int):
            return a.scaled(b)
        return a * b


def _class_literal(lattice: SubgroupLattice, h_lab: str,
                   l_lab: str) -> BurnsideElement:
    level = lattice.parse_label(h_lab)
    level_lat = lattice.restrict(level)
    inner = level_lat.parse_label(l_lab)
    rep = level_lat.class_reps[level_lat.class_of[inner]]
    return BurnsideElement.basis(lattice, level, rep)


def eval_expression(ctx: TambaraContext, text: str) -> BurnsideElement:
    """Evaluate a generator-operation expression to an element."""
    return _ExprParser(ctx, text).parse()


def parse_kset(lattice: SubgroupLattice, level: int, text: str) -> Profile:
    """Parse ``n1*[K/L1] + n2*[K/L2] + ...`` into an orbit profile at K."""
    profile: Profile = {}
    for chunk in text.split("+"):
        part = chunk.strip()
        if not part:
            raise SpecErrorAt(text, 0, "empty summand in the orbit list")
        count = 1
        if "*" in part:
            head, _, part = part.partition("*")
            head = head.strip()
            part = part.strip()
            if not head.isdigit():
                raise SpecErrorAt(text, 0, f"bad multiplicity {head!r}")
            count = int(head)
        if not (part.startswith("[") and part.endswith("]")):
            raise SpecErrorAt(text, 0, f"expected a class literal, got {part!r}")
        inner = part[1:-1]
        if inner.count("/") != 1:
            raise SpecErrorAt(text, 0, "class literal needs one '/'")
        k_lab, l_lab = (s.strip() for s in inner.split("/"))
        if lattice.parse_label(k_lab) != level:
            raise SpecErrorAt(
                text, 0,
                f"orbit {part!r} does not live at level {lattice.label(level)}"
            )
        level_lat = lattice.restrict(level)
        inner_idx = level_lat.parse_label(l_lab)
        rep = level_lat.class_reps[level_lat.class_of[inner_idx]]
        profile[rep] = profile.get(rep, 0) + count
    return normalize_profile(lattice.restrict(level), profile)
