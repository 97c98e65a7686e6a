"""Actions on finite sets and the groupoids they generate.

An arrow is a pair ``(x, w)``: a label ``x`` (a maximal element, a group
element, an integer or a lattice vector) and a point ``w`` in the domain
of the partial bijection attached to ``x``.  Source is ``w``, range is the
image of ``w``.  ``(x, w) * (y, v)`` is defined when ``v`` lands on ``w``
and equals ``(x*y, v)``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .errors import GradingError, StructuralError
from .isg import InverseSemigroup, MaximalStructure
from .pbij import GroundSet, PartialBijection, compose, power, star

Arrow = tuple  # (label, point)


@dataclass(eq=False)
class Action:
    semigroup: InverseSemigroup
    omega: GroundSet
    phi: tuple[PartialBijection, ...]

    def __post_init__(self):
        self.phi = tuple(self.phi)


def tautological_action(S: InverseSemigroup) -> Action:
    return Action(S, S.ground, S.elements)


@dataclass
class ActionReport:
    valid: bool
    violations: list[str] = field(default_factory=list)

    @property
    def first(self) -> str | None:
        return self.violations[0] if self.violations else None


def validate_action(A: Action) -> ActionReport:
    """Check that ``phi`` is a unital star-homomorphism into partial bijections."""
    S = A.semigroup
    bad: list[str] = []
    if len(A.phi) != len(S):
        return ActionReport(False, [f"phi has {len(A.phi)} entries for {len(S)} elements"])
    for i, f in enumerate(A.phi):
        if f.ground.size != A.omega.size:
            bad.append(f"phi({i}) lives on a different space")
    if bad:
        return ActionReport(False, bad)
    if A.phi[S.unit] != PartialBijection.identity(A.omega):
        bad.append("unit: phi(identity) is not the identity map")
    if S.zero is not None and not A.phi[S.zero].is_void():
        bad.append("zero: phi(zero) is not the void map")
    for a in S:
        if A.phi[S.star[a]] != star(A.phi[a]):
            bad.append(f"star: phi({a}*) != phi({a})*")
        for b in S:
            if A.phi[S.mult[a][b]] != compose(A.phi[a], A.phi[b]):
                bad.append(f"product: phi({a}.{b}) != phi({a}) phi({b})")
    return ActionReport(not bad, bad)


def _label_json(x):
    return list(x) if isinstance(x, tuple) else x


class Groupoid:
    """Groupoid of arrows ``(x, w)`` with lazily computed fibers.

    ``fiber(x)`` returns the partial bijection on ``omega`` attached to the
    label ``x``; ``enumerated`` lists the labels whose arrows are
    materialized in ``arrows``.  Composition works for any label, so a
    truncated label window still multiplies correctly.
    """

    def __init__(self, omega: GroundSet, labels, fiber: Callable[[Hashable], PartialBijection],
                 enumerated: Iterable[Hashable], name: str = ""):
        self.omega = omega
        self.labels = labels
        self._fiber_fn = fiber
        self._fibers: dict = {}
        self.name = name
        self.enumerated = tuple(enumerated)
        arrows = []
        for x in self.enumerated:
            for w in sorted(self.fiber(x).domain):
                arrows.append((x, w))
        self.arrows: tuple[Arrow, ...] = tuple(arrows)
        self._index = {a: i for i, a in enumerate(self.arrows)}

    # basic structure
    def fiber(self, x) -> PartialBijection:
        f = self._fibers.get(x)
        if f is None:
            f = self._fiber_fn(x)
            self._fibers[x] = f
        return f

    def __len__(self):
        return len(self.arrows)

    def __contains__(self, a) -> bool:
        return a in self._index

    def is_arrow(self, a) -> bool:
        """Membership in the full (possibly not enumerated) groupoid."""
        x, w = a
        if not (isinstance(w, int) and 0 <= w < self.omega.size):
            return False
        return self.fiber(x).get(w) is not None

    def arrow_id(self, a) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise StructuralError("not an enumerated arrow", {"arrow": [_label_json(a[0]), a[1]]}) from None

    def d(self, a) -> int:
        return a[1]

    def r(self, a) -> int:
        x, w = a
        v = self.fiber(x).get(w)
        if v is None:
            raise StructuralError("not an arrow", {"arrow": [_label_json(x), w]})
        return v

    def unit_arrow(self, w: int) -> Arrow:
        return (self.labels.unit, w)

    def units(self) -> list[Arrow]:
        return [self.unit_arrow(w) for w in self.omega.points()]

    def is_unit(self, a) -> bool:
        return a[0] == self.labels.unit

    def inv(self, a) -> Arrow:
        return (self.labels.inv(a[0]), self.r(a))

    def mul(self, g, h) -> Arrow | None:
        """Product ``g h`` (h first), or None when not composable."""
        if self.r(h) != g[1]:
            return None
        x = self.labels.mul(g[0], h[0])
        if x is None:
            raise StructuralError("composable arrows with undefined label product",
                                  {"left": _label_json(g[0]), "right": _label_json(h[0])})
        prod = (x, h[1])
        if not self.is_arrow(prod):
            raise StructuralError("product escaped the arrow set",
                                  {"label": _label_json(x), "point": h[1]})
        return prod

    def by_range(self) -> dict[int, list[Arrow]]:
        out: dict[int, list[Arrow]] = defaultdict(list)
        for a in self.arrows:
            out[self.r(a)].append(a)
        return out

    def by_source(self) -> dict[int, list[Arrow]]:
        out: dict[int, list[Arrow]] = defaultdict(list)
        for a in self.arrows:
            out[a[1]].append(a)
        return out

    def composable_pairs(self) -> Iterator[tuple[Arrow, Arrow]]:
        rng = self.by_range()
        for g in self.arrows:
            for h in rng.get(g[1], ()):
                yield g, h

    def composable_pair_count(self) -> int:
        rng = self.by_range()
        return sum(len(rng.get(g[1], ())) for g in self.arrows)

    # audits
    def check_axioms(self) -> list[str]:
        """Exhaustive groupoid axioms on the enumerated arrows."""
        bad: list[str] = []
        n = self.omega.size
        for g in self.arrows:
            if not (0 <= self.d(g) < n and 0 <= self.r(g) < n):
                bad.append(f"{g}: source or range outside unit space")
                continue
            gi = self.inv(g)
            if not self.is_arrow(gi):
                bad.append(f"{g}: inverse {gi} is not an arrow")
                continue
            if self.d(gi) != self.r(g) or self.r(gi) != self.d(g):
                bad.append(f"{g}: inverse has wrong ends")
            if self.mul(g, gi) != self.unit_arrow(self.r(g)):
                bad.append(f"{g}: g g^-1 is not the unit at r(g)")
            if self.mul(gi, g) != self.unit_arrow(self.d(g)):
                bad.append(f"{g}: g^-1 g is not the unit at d(g)")
            if self.mul(self.unit_arrow(self.r(g)), g) != g or self.mul(g, self.unit_arrow(self.d(g))) != g:
                bad.append(f"{g}: units do not act neutrally")
        rng = self.by_range()
        for g, h in self.composable_pairs():
            gh = self.mul(g, h)
            if self.d(gh) != self.d(h) or self.r(gh) != self.r(g):
                bad.append(f"{g}*{h}: wrong source or range")
            for k in rng.get(h[1], ()):
                left = self.mul(gh, k)
                right = self.mul(g, self.mul(h, k))
                if left != right:
                    bad.append(f"associativity fails at {(g, h, k)}")
        return bad

    def is_principal(self) -> bool:
        seen = set()
        for a in self.arrows:
            key = (a[1], self.r(a))
            if key in seen:
                return False
            seen.add(key)
        return True

    def orbits(self) -> list[frozenset[int]]:
        parent = list(range(self.omega.size))

        def find(u):
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        for a in self.arrows:
            ru, rv = find(a[1]), find(self.r(a))
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        groups: dict[int, set[int]] = defaultdict(set)
        for w in self.omega.points():
            groups[find(w)].add(w)
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def is_pair_groupoid(self) -> bool:
        """Principal and transitive: exactly one arrow between any two points."""
        n = self.omega.size
        return self.is_principal() and len(self.arrows) == n * n

    def edge_list(self) -> list[tuple[int, int, object]]:
        return [(a[1], self.r(a), _label_json(a[0])) for a in self.arrows if not self.is_unit(a)]

    def graphviz(self) -> str:
        lab = self.omega.label
        lines = ["digraph orbits {"]
        for s, t, x in self.edge_list():
            lines.append(f'  "{lab(s)}" -> "{lab(t)}" [label="{x}"];')
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "units": self.omega.to_json(),
            "arrows": [[_label_json(x), w] for x, w in self.arrows],
            "d": [a[1] for a in self.arrows],
            "r": [self.r(a) for a in self.arrows],
            "composable_pairs": self.composable_pair_count(),
            "edges": [list(e) for e in self.edge_list()],
        }


# ------------------------------------------------------------------ constructions


def build_groupoid(A: Action, MS: MaximalStructure) -> Groupoid:
    if MS.semigroup is not A.semigroup:
        raise StructuralError("maximal structure belongs to a different semigroup")
    rep = validate_action(A)
    if not rep.valid:
        raise StructuralError(f"invalid action: {rep.first}", rep.violations)
    phi = A.phi
    G = Groupoid(A.omega, MS, lambda x: phi[x], MS.M, name="action groupoid")
    bad = G.check_axioms()
    if bad:
        raise StructuralError(f"groupoid axioms fail: {bad[0]}", bad)
    return G


def build_graded_groupoid(A: Action, group, grade, labels: Sequence | None = None) -> Groupoid:
    """Groupoid of a grading ``x -> beta_x`` of S by a group.

    ``grade`` maps group elements to element indices of ``A.semigroup``
    (a dict or a callable).  ``labels`` lists the group elements whose
    arrows are materialized (defaults to the whole finite group).
    """
    S = A.semigroup
    g = grade if callable(grade) else grade.__getitem__
    if labels is None:
        labels = group.labels
    labels = list(labels)
    rep = validate_action(A)
    if not rep.valid:
        raise StructuralError(f"invalid action: {rep.first}", rep.violations)
    if g(group.unit) != S.unit:
        raise GradingError("beta_e is the identity", {"beta_e": g(group.unit)})
    for x in labels:
        if g(group.inv(x)) != S.star[g(x)]:
            raise GradingError("beta_{x^-1} = beta_x*", {"x": _label_json(x)})
    for x in labels:
        for y in labels:
            if not S.leq(S.mult[g(x)][g(y)], g(group.mul(x, y))):
                raise GradingError("beta_x beta_y <= beta_xy", {"x": _label_json(x), "y": _label_json(y)})
    for a in S:
        if not any(S.leq(a, g(x)) for x in labels):
            raise GradingError("every element lies under some beta_x", {"element": a})
    phi = A.phi
    G = Groupoid(A.omega, group, lambda x: phi[g(x)], labels, name="graded groupoid")
    return G


def singly_generated_groupoid(beta: PartialBijection, window: int | None = None) -> Groupoid:
    """Integer-graded groupoid of one partial bijection: arrows ``(n, w)``
    with ``w`` in the domain of ``beta**n``.

    Without a core the nonvoid powers are finite and all arrows are listed;
    otherwise labels are truncated to ``|n| <= window`` (default: ground size).
    """
    from .groups import Integers

    ground = beta.ground
    top = 0
    p = beta
    while not p.is_void() and top <= ground.size:
        top += 1
        p = compose(beta, p)
    if top > ground.size:  # some power never dies: there is a core
        top = ground.size if window is None else window
    elif window is not None:
        top = min(top, window)
    cache: dict[int, PartialBijection] = {}

    def fiber(n: int) -> PartialBijection:
        f = cache.get(n)
        if f is None:
            f = power(beta, n)
            cache[n] = f
        return f

    labels = [n for n in range(-top, top + 1) if not fiber(n).is_void()]
    return Groupoid(ground, Integers(), fiber, labels, name="singly generated groupoid")


def decompose_by_fiber(G: Groupoid) -> dict:
    out: dict = {}
    for a in G.arrows:
        out.setdefault(a[0], []).append(a)
    return {k: tuple(v) for k, v in out.items()}


# ----------------------------------------------------------------------- G-sets


def is_gset(G: Groupoid, U: Iterable[Arrow]) -> bool:
    U = list(U)
    return len({a[1] for a in U}) == len(U) == len({G.r(a) for a in U})


def gset_product(G: Groupoid, U: Iterable[Arrow], V: Iterable[Arrow]) -> frozenset:
    by_r: dict[int, list[Arrow]] = defaultdict(list)
    for h in V:
        by_r[G.r(h)].append(h)
    out = set()
    for g in U:
        for h in by_r.get(g[1], ()):
            out.add(G.mul(g, h))
    return frozenset(out)


def gset_inverse(G: Groupoid, U: Iterable[Arrow]) -> frozenset:
    return frozenset(G.inv(a) for a in U)


def ample_map(A: Action, MS: MaximalStructure, alpha: int) -> frozenset:
    """The G-set ``{x} x Dom(phi(alpha))`` with x the majorant of alpha."""
    S = A.semigroup
    if S.is_zero(alpha):
        return frozenset()
    try:
        x = MS.majorant[alpha]
    except KeyError:
        raise StructuralError("element has no unique majorant", {"element": alpha}) from None
    return frozenset((x, w) for w in A.phi[alpha].domain)


def check_ample_homomorphism(A: Action, MS: MaximalStructure, G: Groupoid) -> list[str]:
    S = A.semigroup
    amp = [ample_map(A, MS, a) for a in S]
    bad = []
    if amp[S.unit] != frozenset(G.units()):
        bad.append("identity does not map to the unit space")
    for a in S:
        if not is_gset(G, amp[a]):
            bad.append(f"image of {a} is not a G-set")
        if gset_inverse(G, amp[a]) != amp[S.star[a]]:
            bad.append(f"inverse fails at {a}")
        for b in S:
            if gset_product(G, amp[a], amp[b]) != amp[S.mult[a][b]]:
                bad.append(f"product fails at {(a, b)}")
    for x, arrows in decompose_by_fiber(G).items():
        if not is_gset(G, arrows):
            bad.append(f"fiber {x} is not a G-set")
    return bad
