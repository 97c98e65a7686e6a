"""Odometer and prefix-replacement semigroups on truncated product spaces.

A point of the depth-k space is a word ``(w_0, ..., w_{k-1})`` with
``w_i < radix_i``.  Its index is ``sum w_i * prod_{j<i} radix_j``, so
``w_0`` is the least significant digit and the odometer is ``index + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from math import prod
from typing import Sequence

from ..errors import PreconditionError
from ..groupoid import Groupoid, build_groupoid, singly_generated_groupoid, tautological_action
from ..isg import InverseSemigroup, MaximalStructure, classify_f_tilde, closure_elements, generate_closure
from ..pbij import GroundSet, PartialBijection, star
from ..star_algebra.kumjian import localization_failures


def radices_at(n_vec: Sequence[int], depth: int) -> tuple[int, ...]:
    """Radices for the first ``depth`` coordinates; a short vector is repeated."""
    n_vec = [int(n) for n in n_vec]
    if depth < 1:
        raise PreconditionError("depth must be at least 1")
    if not n_vec or any(n < 2 for n in n_vec):
        raise PreconditionError("radices must be integers >= 2", {"radices": n_vec})
    return tuple(n_vec[i % len(n_vec)] for i in range(depth))


@dataclass(frozen=True)
class WordSpace:
    radices: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.radices)

    @property
    def size(self) -> int:
        return prod(self.radices)

    def index(self, word: Sequence[int]) -> int:
        i, scale = 0, 1
        for w, r in zip(word, self.radices):
            i += w * scale
            scale *= r
        return i

    def word(self, index: int) -> tuple[int, ...]:
        out = []
        for r in self.radices:
            out.append(index % r)
            index //= r
        return tuple(out)

    def words(self) -> list[tuple[int, ...]]:
        return [self.word(i) for i in range(self.size)]

    def prefixes(self, length: int) -> list[tuple[int, ...]]:
        # w_0 varies fastest, matching the index order
        return [tuple(reversed(t)) for t in cartesian(*[range(r) for r in reversed(self.radices[:length])])]

    def ground(self) -> GroundSet:
        sep = "" if max(self.radices) <= 10 else ","
        return GroundSet(self.size, tuple(sep.join(map(str, self.word(i))) for i in range(self.size)))


def odometer(n_vec: Sequence[int], depth: int) -> PartialBijection:
    """The partial map ``beta``: inverse of add-one-with-carry, which is undefined on the top word."""
    X = WordSpace(radices_at(n_vec, depth))
    succ = PartialBijection.from_pairs(X.ground(), [(i, i + 1) for i in range(X.size - 1)])
    return star(succ)


def odometer_successor(n_vec: Sequence[int], depth: int) -> PartialBijection:
    return star(odometer(n_vec, depth))


def gamma(X: WordSpace, u: Sequence[int], v: Sequence[int]) -> PartialBijection:
    """Replace the prefix ``v`` by ``u``; defined on words starting with ``v``."""
    u, v = tuple(u), tuple(v)
    if len(u) != len(v) or not 1 <= len(u) <= X.depth:
        raise PreconditionError("prefixes must have equal length between 1 and the depth")
    for a, b, r in zip(u, v, X.radices):
        if not (0 <= a < r and 0 <= b < r):
            raise PreconditionError("prefix letter out of range", {"u": list(u), "v": list(v)})
    pairs = []
    for i in range(X.size):
        w = X.word(i)
        if w[:len(v)] == v:
            pairs.append((i, X.index(u + w[len(v):])))
    return PartialBijection.from_pairs(X.ground(), pairs)


def _name(u, v) -> str:
    sep = "" if max(u + v, default=0) < 10 else ","
    return f"g({sep.join(map(str, u))};{sep.join(map(str, v))})"


def glimm_generators(X: WordSpace) -> dict[PartialBijection, tuple]:
    """Every prefix replacement, keyed by map, valued by its ``(u, v)``."""
    out = {}
    for j in range(1, X.depth + 1):
        P = X.prefixes(j)
        for u in P:
            for v in P:
                out[gamma(X, u, v)] = (u, v)
    return out


# ------------------------------------------------------------- comparisons


@dataclass
class GroupoidMatch:
    """Arrow bijection between two groupoids obtained from (range, source)."""

    same_pairs: bool
    injective: bool
    composition_ok: bool
    arrows: int
    witness: dict | None = None

    @property
    def ok(self) -> bool:
        return self.same_pairs and self.injective and self.composition_ok

    def to_json(self) -> dict:
        return {"same_pairs": self.same_pairs, "injective": self.injective,
                "composition_ok": self.composition_ok, "arrows": self.arrows,
                "witness": self.witness}


def match_principal_groupoids(G1: Groupoid, G2: Groupoid) -> GroupoidMatch:
    """Match arrows with equal (range, source); then check products correspond."""
    key1 = {a: (G1.r(a), G1.d(a)) for a in G1.arrows}
    key2 = {a: (G2.r(a), G2.d(a)) for a in G2.arrows}
    inj = len(set(key1.values())) == len(key1) and len(set(key2.values())) == len(key2)
    same = set(key1.values()) == set(key2.values())
    m = GroupoidMatch(same, inj, False, len(key1))
    if not (inj and same):
        m.witness = {"only_first": sorted(set(key1.values()) - set(key2.values()))[:5],
                     "only_second": sorted(set(key2.values()) - set(key1.values()))[:5]}
        return m
    back = {k: a for a, k in key2.items()}
    phi = {a: back[k] for a, k in key1.items()}
    for g, h in G1.composable_pairs():
        if phi[G1.mul(g, h)] != G2.mul(phi[g], phi[h]):
            m.witness = {"pair": [str(g), str(h)]}
            return m
    m.composition_ok = True
    return m


# ---------------------------------------------------------------- Glimm report


@dataclass(eq=False)
class GlimmLocalization:
    space: WordSpace
    semigroup: InverseSemigroup
    names: dict[int, str]
    prefixes: dict[int, tuple]
    structure: MaximalStructure | None
    groupoid: Groupoid | None
    checks: dict = field(default_factory=dict)
    intersection: list[str] = field(default_factory=list)
    persisting: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "radices": list(self.space.radices),
            "points": self.space.size,
            "size": len(self.semigroup),
            "maximal": len(self.structure.M) if self.structure else None,
            "arrows": len(self.groupoid.arrows) if self.groupoid else None,
            "checks": dict(self.checks),
            "intersection_with_odometer": self.intersection,
            "coincidences_after_refining": self.persisting,
            "ok": self.ok,
        }


def glimm_localization(n_vec: Sequence[int], depth: int, *, compare: bool = True) -> GlimmLocalization:
    """Prefix replacements of every length up to ``depth``, closed and audited.

    With ``compare`` set, the groupoid is matched against the odometer's and
    the common elements of the two semigroups are listed.  Coincidences at a
    finite depth are re-tested one level deeper, where the same prefix map
    acts on twice as many words.
    """
    X = WordSpace(radices_at(n_vec, depth))
    gens = glimm_generators(X)
    S = generate_closure(list(gens), ground=X.ground())
    names, uv = {}, {}
    for i, f in enumerate(S.elements):
        if f.is_void():
            names[i] = "theta"
        elif i == S.unit:
            names[i] = "eps"
        elif f in gens:
            uv[i] = gens[f]
            names[i] = _name(*gens[f])
        else:
            names[i] = "?"
    rep = GlimmLocalization(X, S, names, uv, None, None)
    rep.checks["closure_is_prefix_maps"] = "?" not in names.values()
    verdict = classify_f_tilde(S)
    rep.checks["f_tilde"] = verdict.is_f_tilde
    if not verdict.is_f_tilde:
        return rep
    MS = verdict.structure
    rep.structure = MS

    predicted = {S.unit} | {i for i, (u, v) in uv.items() if u[-1] != v[-1]}
    rep.checks["maximal_have_unequal_last_letters"] = set(MS.M) == predicted
    rep.checks["prefix_idempotents"] = all(S.is_idempotent(i) for i, (u, v) in uv.items() if u == v)
    A = tautological_action(S)
    rep.checks["localization"] = not localization_failures(A)
    G = build_groupoid(A, MS)
    rep.groupoid = G
    rep.checks["principal"] = G.is_principal()
    if compare:
        H = singly_generated_groupoid(odometer(n_vec, depth))
        rep.checks["same_groupoid_as_odometer"] = match_principal_groupoids(G, H).ok
        rep.checks["pair_groupoid"] = G.is_pair_groupoid()
        odo = set(closure_elements([odometer(n_vec, depth)]))
        common = [i for i, f in enumerate(S.elements) if f in odo]
        rep.intersection = sorted(names[i] for i in common)
        rep.checks["intersection_contains_unit_and_zero"] = {"eps", "theta"} <= set(rep.intersection)
        deeper = WordSpace(radices_at(n_vec, depth + 1))
        odo2 = set(closure_elements([odometer(n_vec, depth + 1)]))
        for i in common:
            if i in uv and gamma(deeper, *uv[i]) in odo2:
                rep.persisting.append(names[i])
        rep.persisting.sort()
        rep.checks["coincidences_vanish_one_level_deeper"] = not rep.persisting
    return rep
