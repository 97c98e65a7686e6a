"""Finite inverse semigroups as closed tables of partial bijections."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import GrowthError, StructuralError
from .pbij import (
    GroundSet,
    PartialBijection,
    classify_point_dynamics,
    compose,
    star,
)

DEFAULT_CAP = 100_000
CAP_ENV = "GROUPOIDAL_MAX_ELEMENTS"


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise StructuralError(f"{CAP_ENV} must be an integer, got {raw!r}") from None
        if value >= 1:
            return value
    return DEFAULT_CAP


def _canonical_key(f: PartialBijection):
    return f.pairs


@dataclass(eq=False)
class InverseSemigroup:
    """Closed element table with multiplication and star tables.

    ``mult[i][j]`` is the index of ``compose(elements[i], elements[j])``.
    """

    elements: tuple[PartialBijection, ...]
    mult: tuple[tuple[int, ...], ...]
    star: tuple[int, ...]
    unit: int
    zero: int | None
    ground: GroundSet
    _index: dict = field(repr=False)

    @classmethod
    def from_elements(cls, elements: Sequence[PartialBijection]) -> "InverseSemigroup":
        elements = tuple(elements)
        if not elements:
            raise StructuralError("an inverse semigroup needs at least one element")
        ground = elements[0].ground
        index = {}
        for i, f in enumerate(elements):
            if f.ground.size != ground.size:
                raise StructuralError("elements live on different ground sets")
            if f in index:
                raise StructuralError("duplicate element in table", {"element": f.to_json()})
            index[f] = i
        mult = []
        for f in elements:
            row = []
            for g in elements:
                h = compose(f, g)
                j = index.get(h)
                if j is None:
                    raise StructuralError("element set is not closed under composition",
                                          {"product": h.to_json()})
                row.append(j)
            mult.append(tuple(row))
        stars = []
        for f in elements:
            j = index.get(star(f))
            if j is None:
                raise StructuralError("element set is not closed under star", {"element": f.to_json()})
            stars.append(j)
        unit = index.get(PartialBijection.identity(ground))
        if unit is None:
            raise StructuralError("identity map missing from element set")
        zero = index.get(PartialBijection.void(ground))
        return cls(elements, tuple(mult), tuple(stars), unit, zero, ground, index)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(range(len(self.elements)))

    def index_of(self, f: PartialBijection) -> int:
        try:
            return self._index[f]
        except KeyError:
            raise StructuralError("element not in semigroup", {"element": f.to_json()}) from None

    def contains(self, f: PartialBijection) -> bool:
        return f in self._index

    def mul(self, i: int, j: int) -> int:
        return self.mult[i][j]

    def leq(self, i: int, j: int) -> bool:
        """Natural order from the tables: ``j* i == i* i``."""
        return self.mult[self.star[j]][i] == self.mult[self.star[i]][i]

    def is_idempotent(self, i: int) -> bool:
        return self.mult[i][i] == i

    def idempotents(self) -> list[int]:
        return [i for i in self if self.mult[i][i] == i]

    def nonzero(self) -> list[int]:
        return [i for i in self if i != self.zero]

    def is_zero(self, i: int) -> bool:
        return self.zero is not None and i == self.zero

    def source_projection(self, i: int) -> int:
        return self.mult[self.star[i]][i]

    def range_projection(self, i: int) -> int:
        return self.mult[i][self.star[i]]

    def to_json(self) -> dict:
        return {
            "ground": self.ground.to_json(),
            "elements": [f.to_json() for f in self.elements],
            "mult": [list(r) for r in self.mult],
            "star": list(self.star),
            "unit": self.unit,
            "zero": self.zero,
        }

    def check_axioms(self) -> list[str]:
        """Table-level sanity checks; returns human-readable violations."""
        bad = []
        n = len(self)
        for i in range(n):
            if self.mult[self.unit][i] != i or self.mult[i][self.unit] != i:
                bad.append(f"unit fails at {i}")
            s = self.star[i]
            if self.mult[self.mult[i][s]][i] != i:
                bad.append(f"a a* a != a at {i}")
            if self.star[s] != i:
                bad.append(f"star not involutive at {i}")
            if self.zero is not None and (self.mult[self.zero][i] != self.zero
                                          or self.mult[i][self.zero] != self.zero):
                bad.append(f"zero does not absorb {i}")
        idem = self.idempotents()
        for a, b in itertools.combinations(idem, 2):
            if self.mult[a][b] != self.mult[b][a]:
                bad.append(f"idempotents {a},{b} do not commute")
        return bad


def generate_closure(generators: Iterable[PartialBijection], cap: int | None = None,
                     *, ground: GroundSet | None = None) -> InverseSemigroup:
    """Inverse semigroup generated by ``generators`` together with the identity.

    Breadth-first over word length; within a layer, new elements are
    ordered by canonical form so indices are reproducible.
    """
    return InverseSemigroup.from_elements(closure_elements(generators, cap, ground=ground))


def closure_elements(generators: Iterable[PartialBijection], cap: int | None = None,
                     *, ground: GroundSet | None = None) -> list[PartialBijection]:
    """The elements of the closure in table order, without building tables."""
    gens = list(generators)
    if cap is None:
        cap = default_cap()
    if ground is None:
        if not gens:
            raise StructuralError("empty generator list needs an explicit ground set")
        ground = gens[0].ground
    for g in gens:
        if g.ground.size != ground.size:
            raise StructuralError("generators live on different ground sets")
    letters = sorted({g for g in gens} | {star(g) for g in gens}, key=_canonical_key)

    eps = PartialBijection.identity(ground)
    order = [eps]
    seen = {eps}
    frontier = []
    for g in letters:
        if g not in seen:
            seen.add(g)
            frontier.append(g)
    while frontier:
        order.extend(frontier)
        if len(order) > cap:
            raise GrowthError(f"closure exceeded cap of {cap} elements", len(order))
        layer = set()
        for w in frontier:
            for g in letters:
                h = compose(w, g)
                if h not in seen:
                    seen.add(h)
                    layer.add(h)
        frontier = sorted(layer, key=_canonical_key)
    return order


def idempotent_semilattice(S: InverseSemigroup) -> InverseSemigroup:
    E = InverseSemigroup.from_elements([S.elements[i] for i in S.idempotents()])
    for a in E:
        for b in E:
            if E.mult[a][b] != E.mult[b][a]:
                raise StructuralError("idempotents do not commute", {"pair": [a, b]})
    return E


def is_semilattice(S: InverseSemigroup) -> bool:
    return all(S.is_idempotent(i) for i in S)


# ---------------------------------------------------------------- maximal structure


@dataclass(eq=False)
class MaximalStructure:
    """Maximal elements with their partially defined product.

    Also serves as the label structure of a groupoid: ``unit``, ``mul`` and
    ``inv`` are what the groupoid construction needs.
    """

    semigroup: InverseSemigroup
    M: tuple[int, ...]
    e: int
    majorant: dict[int, int]
    pmul: dict[tuple[int, int], int | None]
    pinv: dict[int, int]

    @property
    def unit(self) -> int:
        return self.e

    def mul(self, x: int, y: int) -> int | None:
        return self.pmul[(x, y)]

    def inv(self, x: int) -> int:
        return self.pinv[x]

    @property
    def labels(self) -> tuple[int, ...]:
        return self.M

    def is_total(self) -> bool:
        return all(v is not None for v in self.pmul.values())


@dataclass(frozen=True)
class FTilde:
    structure: MaximalStructure

    is_f_tilde = True


@dataclass(frozen=True)
class NotFTilde:
    witness: int
    majorants: tuple[int, int]

    is_f_tilde = False


def maximal_elements(S: InverseSemigroup) -> list[int]:
    nz = S.nonzero()
    return [j for j in nz if not any(k != j and S.leq(j, k) for k in nz)]


def classify_f_tilde(S: InverseSemigroup) -> FTilde | NotFTilde:
    """Decide whether every nonzero element has exactly one maximal majorant."""
    nz = S.nonzero()
    M = maximal_elements(S)
    majorant = {}
    for i in nz:
        ups = [m for m in M if S.leq(i, m)]
        if len(ups) != 1:
            # finite semigroups always have at least one maximal majorant
            return NotFTilde(i, (ups[0], ups[1]))
        majorant[i] = ups[0]
    pmul = {}
    for x in M:
        for y in M:
            p = S.mult[x][y]
            pmul[(x, y)] = None if S.is_zero(p) else majorant[p]
    pinv = {x: S.star[x] for x in M}
    return FTilde(MaximalStructure(S, tuple(M), S.unit, majorant, pmul, pinv))


def partial_product(MS: MaximalStructure, x: int, y: int) -> int | None:
    if x not in MS.pinv or y not in MS.pinv:
        raise StructuralError("partial_product expects maximal elements", {"x": x, "y": y})
    return MS.pmul[(x, y)]


def check_partial_group_laws(MS: MaximalStructure) -> list[str]:
    """Every law of the partial group (M, ., ^-1); returns violations."""
    S, M, e = MS.semigroup, MS.M, MS.e
    mul, inv = MS.mul, MS.inv
    bad: list[str] = []
    if e not in MS.pinv:
        bad.append("unit is not maximal")
        return bad
    for x in M:
        if mul(e, x) != x or mul(x, e) != x:
            bad.append(f"unit law fails at {x}")
        if inv(inv(x)) != x:
            bad.append(f"inverse not involutive at {x}")
        if mul(inv(x), x) != e or mul(x, inv(x)) != e:
            bad.append(f"x^-1 x = x x^-1 = e fails at {x}")
    for x in M:
        for y in M:
            z = mul(x, y)
            if z is None:
                continue
            if mul(inv(y), inv(x)) != inv(z):
                bad.append(f"(xy)^-1 = y^-1 x^-1 fails at {(x, y)}")
            if mul(inv(x), z) != y:
                bad.append(f"x^-1 (xy) = y fails at {(x, y)}")
            if mul(z, inv(y)) != x:
                bad.append(f"(xy) y^-1 = x fails at {(x, y)}")
    for x in M:
        right, left = {}, {}
        for y in M:
            z = mul(x, y)
            if z is not None:
                if z in right:
                    bad.append(f"left cancellation fails: {x}.{right[z]} = {x}.{y}")
                right[z] = y
            w = mul(y, x)
            if w is not None:
                if w in left:
                    bad.append(f"right cancellation fails: {left[w]}.{x} = {y}.{x}")
                left[w] = y
    for x in M:
        for y in M:
            xy = mul(x, y)
            for z in M:
                if S.is_zero(S.mult[S.mult[x][y]][z]):
                    continue
                yz = mul(y, z)
                if xy is None or yz is None:
                    bad.append(f"partial associativity: inner product undefined at {(x, y, z)}")
                    continue
                a, b = mul(xy, z), mul(x, yz)
                if a is None or b is None or a != b:
                    bad.append(f"partial associativity fails at {(x, y, z)}")
    if S.zero is None:
        if not MS.is_total():
            bad.append("no zero but product on M is not total")
        else:
            for a in S:
                for b in S:
                    if MS.majorant[S.mult[a][b]] != mul(MS.majorant[a], MS.majorant[b]):
                        bad.append(f"majorant map not multiplicative at {(a, b)}")
    return bad


# ------------------------------------------------------------- singly generated case


def singly_generated_prediction(beta: PartialBijection) -> bool:
    """Predict whether the inverse semigroup generated by ``beta`` is F-tilde.

    Returns False exactly when the bi-infinite core and the transient part
    are both nonempty and some transient chain is long enough for two
    distinct powers n, m with n = m mod p and |n|, |m| <= reach (p the
    period on the core), i.e. 2 * reach >= p.  The core restriction of
    beta**n then sits under both beta**n and beta**(n-p).  Period 1 counts:
    the identity on the core is then majorized by both the identity and beta.
    """
    dyn = classify_point_dynamics(beta)
    if not dyn.t_inf or not dyn.t_fin:
        return True
    return 2 * dyn.reach < dyn.period


def obstruction_pattern(beta: PartialBijection) -> bool:
    """Coarse obstruction: nonempty core and transient part, nontrivial core.

    Necessary for failure of the F-tilde property but not sufficient; see
    :func:`singly_generated_prediction` for the exact test.
    """
    dyn = classify_point_dynamics(beta)
    return bool(dyn.t_fin) and bool(dyn.t_inf) and dyn.periodic_nonconstant and dyn.nilpotent


# ----------------------------------------------------------------------- characters


def semilattice_characters(E: InverseSemigroup) -> list[frozenset[int]]:
    """Characters of a finite semilattice, as the sets where they equal 1.

    On a finite semilattice these are the principal filters of nonzero
    elements, listed in element order.
    """
    if not is_semilattice(E):
        raise StructuralError("semilattice_characters needs an all-idempotent table")
    out = []
    seen = set()
    for g in E.nonzero():
        filt = frozenset(h for h in E if E.leq(g, h))
        if filt not in seen:
            seen.add(filt)
            out.append(filt)
    return out


def is_character(E: InverseSemigroup, ones: Iterable[int]) -> bool:
    """Brute-force check that the indicator of ``ones`` is a character."""
    ones = set(ones)
    if E.unit not in ones or (E.zero is not None and E.zero in ones):
        return False
    return all((E.mult[a][b] in ones) == (a in ones and b in ones) for a in E for b in E)
