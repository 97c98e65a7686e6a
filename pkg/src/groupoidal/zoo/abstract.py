"""Abstract inverse semigroups made concrete: semilattices, Clifford and Reilly.

Abstract tables are turned into partial bijections by letting each element
act on the left of the nonzero elements: ``a`` sends ``x`` to ``a x``
whenever ``a* a x = x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from ..errors import PreconditionError, StructuralError
from ..groups import GroupTable
from ..isg import FTilde, InverseSemigroup, classify_f_tilde, generate_closure
from ..pbij import GroundSet, PartialBijection


@dataclass(eq=False)
class Embedded:
    """A concrete copy of an abstract inverse semigroup.

    ``index[a]`` is the position of the image of ``a`` in ``semigroup``.
    """

    semigroup: InverseSemigroup
    names: tuple
    index: dict

    def of(self, a) -> int:
        return self.index[a]


def embed_abstract(elements: Sequence[Hashable], mul: Callable, star: Callable,
                   zero: Hashable | None = None) -> Embedded:
    """Faithful left action of an abstract inverse semigroup on its nonzero part.

    The homomorphism property and injectivity are both checked, so a wrong
    table is reported rather than silently embedded.
    """
    elements = list(elements)
    pts = [x for x in elements if x != zero]
    where = {x: i for i, x in enumerate(pts)}
    ground = GroundSet(len(pts), tuple(str(x) for x in pts))

    def left(a) -> PartialBijection:
        aa = mul(star(a), a)
        pairs = []
        for x in pts:
            if mul(aa, x) == x:
                pairs.append((where[x], where[mul(a, x)]))
        return PartialBijection.from_pairs(ground, pairs)

    image = {a: left(a) for a in elements}
    seen: dict = {}
    for a, f in image.items():
        if f in seen:
            raise StructuralError("left action is not faithful", {"elements": [str(seen[f]), str(a)]})
        seen[f] = a
    S = InverseSemigroup.from_elements([image[a] for a in elements])
    index = {a: S.index_of(image[a]) for a in elements}
    for a in elements:
        if index[star(a)] != S.star[index[a]]:
            raise StructuralError("star is not preserved", {"element": str(a)})
        for b in elements:
            if index[mul(a, b)] != S.mult[index[a]][index[b]]:
                raise StructuralError("product is not preserved", {"pair": [str(a), str(b)]})
    return Embedded(S, tuple(elements), index)


def semilattice(ground: GroundSet, family: Iterable[Iterable[int]]) -> InverseSemigroup:
    """Partial identities on the given subsets, closed under intersection."""
    gens = [PartialBijection.identity(ground, s) for s in family]
    return generate_closure(gens, ground=ground)


def chain_semilattice(n: int) -> InverseSemigroup:
    """Identities on the initial segments of an n-point set (a chain of n+1 idempotents)."""
    ground = GroundSet(n)
    return semilattice(ground, [range(k) for k in range(n + 1)])


# ------------------------------------------------------------------- Clifford


INF = "inf"


@dataclass(eq=False)
class Clifford:
    group: GroupTable
    chain: tuple[frozenset[int], ...]
    levels: tuple
    embedded: Embedded
    verdict: FTilde
    predicted_maximal: frozenset
    maximal: frozenset

    @property
    def semigroup(self) -> InverseSemigroup:
        return self.embedded.semigroup

    @property
    def ok(self) -> bool:
        return self.predicted_maximal == self.maximal

    def to_json(self) -> dict:
        return {
            "group_order": self.group.order,
            "chain": [sorted(c) for c in self.chain],
            "size": len(self.semigroup),
            "maximal": sorted([list(m) for m in self.maximal], key=str),
            "predicted_maximal": sorted([list(m) for m in self.predicted_maximal], key=str),
            "ok": self.ok,
        }


def clifford(G: GroupTable, chain: Sequence[Iterable[int]]) -> Clifford:
    """Elements ``(x, n)`` with ``x`` in the n-th subgroup and ``(x,m)(y,n) = (xy, min(m,n))``.

    A chain ``[G_0, ..., G_k]`` stands for the sequence that stays at
    ``G_k`` forever.  Levels ``0..k-1`` are kept and every level from ``k``
    on is collapsed into one top level ``inf``; the dropped finite levels
    sit below it and carry no new maximal elements.
    """
    chain = tuple(frozenset(c) for c in chain)
    if not chain:
        raise PreconditionError("chain must have at least one subgroup")
    if chain[0] != frozenset(G.labels):
        raise PreconditionError("chain must start with the whole group")
    for i, c in enumerate(chain):
        if not G.is_subgroup(c):
            raise PreconditionError("chain member is not a subgroup", {"position": i})
        if i and not c <= chain[i - 1]:
            raise PreconditionError("chain is not descending", {"position": i})
    k = len(chain) - 1
    levels = tuple(range(k)) + (INF,)
    top = len(levels) - 1  # rank of INF for min

    def rank(n):
        return top if n == INF else n

    def sub(n):
        return chain[k] if n == INF else chain[n]

    elements = [(x, n) for n in levels for x in sorted(sub(n))]

    def mul(a, b):
        n = levels[min(rank(a[1]), rank(b[1]))]
        return (G.mul(a[0], b[0]), n)

    def inv(a):
        return (G.inv(a[0]), a[1])

    emb = embed_abstract(elements, mul, inv)
    verdict = classify_f_tilde(emb.semigroup)
    if not verdict.is_f_tilde:
        raise StructuralError("Clifford table is not F-inverse", {"witness": verdict.witness})
    predicted = {(x, n) for n in range(k) for x in chain[n] - chain[n + 1]}
    predicted |= {(x, INF) for x in chain[k]}
    names = {v: a for a, v in emb.index.items()}
    found = frozenset(names[m] for m in verdict.structure.M)
    return Clifford(G, chain, levels, emb, verdict, frozenset(predicted), found)


# --------------------------------------------------------------------- Reilly


Triple = tuple  # (m, x, n)


@dataclass(eq=False)
class ReillyFragment:
    """Triples ``(m, x, n)`` with ``m, n <= bound`` under the twisted product.

    Products that leave the bound are reported, never wrapped around.
    """

    group: GroupTable
    sigma: tuple[int, ...]
    bound: int
    elements: tuple[Triple, ...]
    overflow: list[tuple[Triple, Triple]] = field(default_factory=list)

    def sigma_power(self, k: int, x: int) -> int:
        for _ in range(k):
            x = self.sigma[x]
        return x

    def product(self, a: Triple, b: Triple) -> Triple | None:
        """None when the product leaves the fragment."""
        m, x, n = a
        p, y, q = b
        t = max(n, p)
        out = (m - n + t,
               self.group.mul(self.sigma_power(t - n, x), self.sigma_power(t - p, y)),
               q - p + t)
        if out[0] > self.bound or out[2] > self.bound:
            return None
        return out

    def star(self, a: Triple) -> Triple:
        m, x, n = a
        return (n, self.group.inv(x), m)

    @property
    def unit(self) -> Triple:
        return (0, self.group.unit, 0)

    def leq(self, a: Triple, b: Triple) -> bool:
        """``a <= b`` iff ``a = b (a* a)``; an overflowing product cannot equal ``a``."""
        return self.product(b, self.product(self.star(a), a)) == a

    def maximal(self) -> list[Triple]:
        return [a for a in self.elements if not any(b != a and self.leq(a, b) for b in self.elements)]

    def predicted_maximal(self) -> list[Triple]:
        return [a for a in self.elements if min(a[0], a[2]) == 0]

    def majorants(self, a: Triple) -> list[Triple]:
        M = self.maximal()
        return [b for b in M if self.leq(a, b)]

    def check(self) -> list[str]:
        """Semigroup laws wherever the products stay inside, plus the maximal-element formula."""
        bad = []
        E = self.elements
        for a in E:
            s = self.star(a)
            if self.product(self.product(a, s), a) != a:
                bad.append(f"a a* a != a at {a}")
            for b in E:
                ab = self.product(a, b)
                if ab is None:
                    continue
                for c in E:
                    bc = self.product(b, c)
                    if bc is None:
                        continue
                    left = self.product(ab, c)
                    right = self.product(a, bc)
                    if left != right:
                        bad.append(f"associativity at {(a, b, c)}")
        if sorted(self.maximal()) != sorted(self.predicted_maximal()):
            bad.append("maximal elements differ from {min(m, n) = 0}")
        for a in E:
            if len(self.majorants(a)) != 1:
                bad.append(f"{a} does not have exactly one maximal majorant")
        return bad

    def to_json(self) -> dict:
        return {
            "group_order": self.group.order,
            "sigma": list(self.sigma),
            "bound": self.bound,
            "size": len(self.elements),
            "overflow_pairs": len(self.overflow),
            "maximal": [list(a) for a in sorted(self.maximal())],
        }


def reilly_fragment(G: GroupTable, sigma: Sequence[int], bound: int) -> ReillyFragment:
    sigma = tuple(int(s) for s in sigma)
    if not G.is_automorphism(sigma):
        raise PreconditionError("sigma is not an automorphism of the group", {"sigma": list(sigma)})
    if bound < 0:
        raise PreconditionError("bound must be nonnegative")
    E = tuple((m, x, n) for m in range(bound + 1) for x in G.labels for n in range(bound + 1))
    frag = ReillyFragment(G, sigma, bound, E)
    for a in E:
        for b in E:
            if frag.product(a, b) is None:
                frag.overflow.append((a, b))
    return frag
