"""Partial bijections of a finite ground set.

Composition convention, used everywhere in the package: ``compose(f, g)``
is "g first, then f", i.e. ``(fg)(t) = f(g(t))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import StructuralError

VOID = -1


@dataclass(frozen=True)
class GroundSet:
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise StructuralError(f"ground set size must be a positive integer, got {self.size!r}")
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != self.size:
                raise StructuralError("labels must have one entry per point",
                                      {"size": self.size, "labels": len(labels)})
            object.__setattr__(self, "labels", labels)

    def label(self, point: int) -> str:
        return self.labels[point] if self.labels else str(point)

    def points(self) -> range:
        return range(self.size)

    def to_json(self) -> dict:
        out: dict = {"size": self.size}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "GroundSet":
        return cls(int(data["size"]), data.get("labels"))


@dataclass(frozen=True)
class PartialBijection:
    """Injective map between two subsets of ``ground``.

    Stored as an image array: ``images[t]`` is the target of ``t`` or ``-1``.
    """

    ground: GroundSet
    images: tuple[int, ...]
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        n = self.ground.size
        if len(images) != n:
            raise StructuralError("image array length differs from ground size")
        seen = set()
        for t in images:
            if t == VOID:
                continue
            if not 0 <= t < n:
                raise StructuralError(f"point {t} outside ground set of size {n}")
            if t in seen:
                raise StructuralError(f"target {t} hit twice; map is not injective")
            seen.add(t)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_hash", hash((self.ground.size, images)))

    def __hash__(self):
        return self._hash

    @classmethod
    def _trusted(cls, ground: GroundSet, images: tuple[int, ...]) -> "PartialBijection":
        # skips validation; only for results of operations on valid maps
        obj = object.__new__(cls)
        object.__setattr__(obj, "ground", ground)
        object.__setattr__(obj, "images", images)
        object.__setattr__(obj, "_hash", hash((ground.size, images)))
        return obj

    @classmethod
    def from_pairs(cls, ground: GroundSet, pairs: Iterable[Sequence[int]]) -> "PartialBijection":
        images = [VOID] * ground.size
        for s, t in pairs:
            s, t = int(s), int(t)
            if not 0 <= s < ground.size:
                raise StructuralError(f"point {s} outside ground set of size {ground.size}")
            if images[s] != VOID:
                raise StructuralError(f"source {s} listed twice")
            images[s] = t
        return cls(ground, tuple(images))

    @classmethod
    def from_dict(cls, ground: GroundSet, mapping: dict) -> "PartialBijection":
        return cls.from_pairs(ground, mapping.items())

    @classmethod
    def identity(cls, ground: GroundSet, subset: Iterable[int] | None = None) -> "PartialBijection":
        if subset is None:
            return cls(ground, tuple(range(ground.size)))
        return cls.from_pairs(ground, ((t, t) for t in subset))

    @classmethod
    def void(cls, ground: GroundSet) -> "PartialBijection":
        return cls(ground, (VOID,) * ground.size)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((s, t) for s, t in enumerate(self.images) if t != VOID)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(s for s, t in enumerate(self.images) if t != VOID)

    @property
    def range(self) -> frozenset[int]:
        return frozenset(t for t in self.images if t != VOID)

    def __call__(self, t: int) -> int:
        v = self.images[t]
        if v == VOID:
            raise KeyError(t)
        return v

    def get(self, t: int) -> int | None:
        v = self.images[t]
        return None if v == VOID else v

    def is_void(self) -> bool:
        return all(t == VOID for t in self.images)

    def is_idempotent(self) -> bool:
        return all(t == VOID or t == s for s, t in enumerate(self.images))

    def is_total(self) -> bool:
        return VOID not in self.images

    def __len__(self):
        return sum(1 for t in self.images if t != VOID)

    def to_json(self) -> list[list[int]]:
        return [[s, t] for s, t in self.pairs]

    def __str__(self):
        lab = self.ground.label
        body = ", ".join(f"{lab(s)}->{lab(t)}" for s, t in self.pairs)
        return "{" + body + "}"


def _check_ground(f: PartialBijection, g: PartialBijection):
    if f.ground.size != g.ground.size:
        raise StructuralError("ground-set mismatch", {"left": f.ground.size, "right": g.ground.size})


def compose(f: PartialBijection, g: PartialBijection) -> PartialBijection:
    """``t -> f(g(t))`` wherever both steps are defined."""
    _check_ground(f, g)
    fi = f.images
    return PartialBijection._trusted(f.ground, tuple(VOID if x == VOID else fi[x] for x in g.images))


def star(f: PartialBijection) -> PartialBijection:
    images = [VOID] * f.ground.size
    for s, t in enumerate(f.images):
        if t != VOID:
            images[t] = s
    return PartialBijection._trusted(f.ground, tuple(images))


def power(f: PartialBijection, n: int) -> PartialBijection:
    """``f**n`` for any integer n (negative powers use the inverse)."""
    base = f if n >= 0 else star(f)
    out = PartialBijection.identity(f.ground)
    for _ in range(abs(n)):
        out = compose(base, out)
    return out


def natural_leq(f: PartialBijection, g: PartialBijection) -> bool:
    """True when f is a restriction of g."""
    _check_ground(f, g)
    gi = g.images
    return all(t == VOID or gi[s] == t for s, t in enumerate(f.images))


def natural_leq_algebraic(f: PartialBijection, g: PartialBijection) -> bool:
    """The same order via ``g* f == f* f``."""
    return compose(star(g), f) == compose(star(f), f)


def restrict(f: PartialBijection, subset: Iterable[int]) -> PartialBijection:
    keep = set(subset)
    return PartialBijection(f.ground, tuple(t if s in keep else VOID for s, t in enumerate(f.images)))


@dataclass(frozen=True)
class DynamicsReport:
    t_inf: frozenset[int]
    t_fin: frozenset[int]
    period: int
    nonconstant: bool
    nilpotent: bool
    nilpotency_index: int
    reach: int

    @property
    def periodic_nonconstant(self) -> bool:
        return bool(self.t_inf) and self.nonconstant


def classify_point_dynamics(f: PartialBijection) -> DynamicsReport:
    """Split the ground set into the bi-infinite core and the transient part.

    ``period`` is the order of f restricted to the core (1 when the core is
    empty or f is the identity there).  ``reach`` is the largest n >= 0 with
    a transient point in the domain of ``f**n`` (-1 if there is none).
    """
    n = f.ground.size
    p = PartialBijection.identity(f.ground)
    for _ in range(n):
        p = compose(f, p)
    t_inf = p.domain & p.range
    t_fin = frozenset(range(n)) - t_inf

    period = 1
    for t in t_inf:
        k, x = 1, f(t)
        while x != t:
            x, k = f(x), k + 1
        period = period * k // _gcd(period, k)
    nonconstant = any(f(t) != t for t in t_inf)

    reach = -1
    q = PartialBijection.identity(f.ground)
    k = 0
    while q.domain & t_fin:
        reach = k
        q = compose(f, q)
        k += 1
    return DynamicsReport(
        t_inf=frozenset(t_inf),
        t_fin=t_fin,
        period=period,
        nonconstant=nonconstant,
        nilpotent=True,  # always so on a finite set
        nilpotency_index=reach + 1,
        reach=reach,
    )


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def all_partial_bijections(ground: GroundSet) -> Iterator[PartialBijection]:
    """Every partial bijection of the ground set (sum_k C(n,k)^2 k! of them)."""
    n = ground.size
    pts = range(n)
    for k in range(n + 1):
        for src in itertools.combinations(pts, k):
            for tgt in itertools.permutations(pts, k):
                yield PartialBijection.from_pairs(ground, zip(src, tgt))


def random_partial_bijection(ground: GroundSet, rng) -> PartialBijection:
    """Uniform-ish sample: random domain size, random domain and injection."""
    n = ground.size
    k = rng.randint(0, n)
    src = rng.sample(range(n), k)
    tgt = rng.sample(range(n), k)
    return PartialBijection.from_pairs(ground, zip(src, tgt))


def pbij_from_json(ground: GroundSet, data) -> PartialBijection:
    return PartialBijection.from_pairs(ground, data)
