"""Toeplitz inverse semigroups of a polyhedral cone in Z^d, evaluated on windows.

Notation is additive.  ``P = {t : A t >= 0}``.  The element
``(x, C)`` translates by ``x`` on ``Dom = {t : t + c in P for c in C}``.
Because every constraint uses a row of ``A``, the domain is the integer
polyhedron ``{t : A t >= b}`` with ``b_j = max_c (-a_j . c)``; the vector
``b`` is stored with the element and two elements with the same ``x`` and
``b`` are equal without any window check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import UndecidedAtWindow, WindowTooSmall
from .groupoid import Groupoid
from .groups import Lattice
from .pbij import GroundSet, PartialBijection

Vector = tuple[int, ...]
DEFAULT_RADIUS = 8


def _add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def _neg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def box(radius: int, d: int) -> tuple[Vector, ...]:
    """Points of [-radius, radius]^d, ordered by L1 norm, then lexicographically."""
    pts = itertools.product(range(-radius, radius + 1), repeat=d)
    return tuple(sorted(pts, key=lambda p: (sum(abs(v) for v in p), p)))


@dataclass(frozen=True)
class ConePair:
    d: int
    constraints: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.constraints)
        if self.d < 1 or any(len(r) != self.d for r in rows):
            raise ValueError("every constraint row needs d entries")
        object.__setattr__(self, "constraints", rows)

    @classmethod
    def orthant(cls, d: int) -> "ConePair":
        return cls(d, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @classmethod
    def from_json(cls, data: dict) -> "ConePair":
        return cls(int(data["d"]), tuple(tuple(r) for r in data["constraints"]))

    def to_json(self) -> dict:
        return {"d": self.d, "constraints": [list(r) for r in self.constraints]}

    @property
    def zero(self) -> Vector:
        return (0,) * self.d

    def contains(self, t: Sequence[int]) -> bool:
        return all(_dot(a, t) >= 0 for a in self.constraints)

    def bounds(self, markers: Iterable[Vector]) -> tuple[int, ...]:
        markers = list(markers)
        return tuple(max(-_dot(a, c) for c in markers) for a in self.constraints)

    def satisfies(self, t: Sequence[int], b: Sequence[int]) -> bool:
        return all(_dot(a, t) >= bj for a, bj in zip(self.constraints, b))

    def points(self, radius: int) -> list[Vector]:
        return [t for t in box(radius, self.d) if self.contains(t)]

    def precedes(self, p: Vector, q: Vector) -> bool:
        """``p <= q`` in the order defined by P: ``q - p`` in P."""
        return self.contains(_sub(q, p))


@dataclass(frozen=True)
class Window:
    lo: int
    hi: int
    d: int

    @classmethod
    def symmetric(cls, k: int, d: int) -> "Window":
        return cls(-k, k, d)

    @property
    def extent(self) -> int:
        return max(abs(self.lo), abs(self.hi))

    def points(self) -> tuple[Vector, ...]:
        return tuple(itertools.product(range(self.lo, self.hi + 1), repeat=self.d))

    def contains(self, x: Sequence[int]) -> bool:
        return all(self.lo <= v <= self.hi for v in x)

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "d": self.d}


# ------------------------------------------------------------------ emptiness


@dataclass(frozen=True)
class EmptinessCertificate:
    """Nonnegative rational multipliers ``y`` with ``y A = 0`` and ``y b > 0``."""

    multipliers: tuple[Fraction, ...]

    def to_json(self) -> list[str]:
        return [str(v) for v in self.multipliers]


def infeasibility_certificate(cone: ConePair, b: Sequence[int]) -> EmptinessCertificate | None:
    """Farkas certificate that ``A t >= b`` has no real solution, or None.

    The multipliers come from a floating-point LP, are rounded to small
    rationals and then re-checked exactly, so a returned certificate is a proof.
    """
    A = np.array(cone.constraints, dtype=float)
    m = A.shape[0]
    res = linprog(c=-np.array(b, dtype=float), A_eq=A.T, b_eq=np.zeros(cone.d),
                  bounds=[(0, 1)] * m, method="highs")
    if res.status != 0 or -res.fun <= 1e-9:
        return None
    y = tuple(Fraction(float(v)).limit_denominator(10_000) for v in res.x)
    if any(v < 0 for v in y):
        return None
    if any(sum(y[i] * cone.constraints[i][k] for i in range(m)) != 0 for k in range(cone.d)):
        return None
    if sum(y[i] * b[i] for i in range(m)) <= 0:
        return None
    return EmptinessCertificate(y)


def find_point(cone: ConePair, b: Sequence[int], radius: int) -> Vector | None:
    for t in box(radius, cone.d):
        if cone.satisfies(t, b):
            return t
    return None


# --------------------------------------------------------------------- elements


@dataclass(frozen=True)
class ToeplitzElement:
    cone: ConePair
    x: Vector | None
    markers: tuple[Vector, ...] = ()
    bounds: tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.x is None

    @property
    def key(self):
        return None if self.x is None else (self.x, self.bounds)

    def in_domain(self, t: Sequence[int]) -> bool:
        return self.x is not None and self.cone.satisfies(t, self.bounds)

    def apply(self, t: Vector) -> Vector | None:
        return _add(t, self.x) if self.in_domain(t) else None

    def to_json(self):
        if self.x is None:
            return None
        return {"x": list(self.x), "markers": [list(c) for c in self.markers]}

    def __str__(self):
        if self.x is None:
            return "Zero"
        return f"({self.x}, {{{', '.join(map(str, self.markers))}}})"


def te_zero(cone: ConePair) -> ToeplitzElement:
    return ToeplitzElement(cone, None)


def _normalize(cone: ConePair, x: Vector, markers: Iterable[Vector]) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Keep 0 and x; drop any other marker that does not change the bound vector."""
    keep = sorted(set(markers) | {cone.zero, x})
    b = cone.bounds(keep)
    for c in list(keep):
        if c == cone.zero or c == x:
            continue
        rest = [m for m in keep if m != c]
        if cone.bounds(rest) == b:
            keep = rest
    return tuple(keep), b


def _make(cone: ConePair, x: Vector, markers: Iterable[Vector], radius: int) -> ToeplitzElement:
    marks, b = _normalize(cone, x, markers)
    if find_point(cone, b, radius) is not None:
        return ToeplitzElement(cone, x, marks, b)
    if infeasibility_certificate(cone, b) is not None:
        return te_zero(cone)
    raise UndecidedAtWindow(
        f"cannot decide whether the domain of {x} with markers {list(marks)} is empty "
        f"within radius {radius}",
        {"x": list(x), "markers": [list(c) for c in marks], "radius": radius},
    )


def te_beta(cone: ConePair, x: Sequence[int], radius: int = DEFAULT_RADIUS) -> ToeplitzElement:
    """The partial translation by x; Zero when x is not a difference of cone points."""
    x = tuple(int(v) for v in x)
    return _make(cone, x, [cone.zero, x], radius)


def te_identity(cone: ConePair) -> ToeplitzElement:
    z = cone.zero
    return ToeplitzElement(cone, z, (z,), cone.bounds([z]))


def te_mul(a: ToeplitzElement, b: ToeplitzElement, radius: int = DEFAULT_RADIUS) -> ToeplitzElement:
    """``a b`` with b acting first: ``(x + y, (C + y) | D)``."""
    if a.is_zero or b.is_zero:
        return te_zero(a.cone)
    y = b.x
    markers = [_add(c, y) for c in a.markers] + list(b.markers)
    return _make(a.cone, _add(a.x, y), markers, radius)


def te_star(a: ToeplitzElement, radius: int = DEFAULT_RADIUS) -> ToeplitzElement:
    if a.is_zero:
        return a
    return _make(a.cone, _neg(a.x), [_sub(c, a.x) for c in a.markers], radius)


def te_word(cone: ConePair, xs: Sequence[Sequence[int]], radius: int = DEFAULT_RADIUS) -> ToeplitzElement:
    """``beta_{x1} ... beta_{xn}`` (the last factor acts first)."""
    out = te_identity(cone)
    for x in xs:
        out = te_mul(out, te_beta(cone, x, radius), radius)
    return out


def te_equal(a: ToeplitzElement, b: ToeplitzElement, window: Window | int = DEFAULT_RADIUS) -> bool:
    """Equal translations and equal domains on the window.

    Matching bound vectors decide equality exactly; otherwise domains are
    compared point by point on the window (window-verified).
    """
    if a.is_zero or b.is_zero:
        return a.is_zero and b.is_zero
    if a.x != b.x:
        return False
    if a.bounds == b.bounds:
        return True
    pts = box(window, a.cone.d) if isinstance(window, int) else window.points()
    return all(a.in_domain(t) == b.in_domain(t) for t in pts)


def te_leq(a: ToeplitzElement, b: ToeplitzElement, window: Window | int = DEFAULT_RADIUS) -> bool:
    if a.is_zero:
        return True
    if b.is_zero or a.x != b.x:
        return False
    pts = box(window, a.cone.d) if isinstance(window, int) else window.points()
    return all(b.in_domain(t) for t in pts if a.in_domain(t))


def domain_witness(a: ToeplitzElement, radius: int = DEFAULT_RADIUS) -> Vector:
    if a.is_zero:
        raise ValueError("Zero has empty domain")
    t = find_point(a.cone, a.bounds, radius)
    if t is None:
        raise UndecidedAtWindow("no domain point inside the search box", {"element": a.to_json()})
    return t


def unique_majorant(a: ToeplitzElement, radius: int = DEFAULT_RADIUS) -> Vector:
    """The translation vector, cross-checked as ``a(t) - t`` at a domain point."""
    t = domain_witness(a, radius)
    x = _sub(a.apply(t), t)
    if x != a.x:
        raise AssertionError("translation part disagrees with the action")
    return x


@dataclass
class Witness:
    point: Vector | None
    method: str
    certificate: EmptinessCertificate | None = None


def _decompose(cone: ConePair, y: Vector, radius: int) -> tuple[Vector, Vector] | None:
    """``y = s - t`` with s, t in P, preferring small t."""
    for t in box(radius, cone.d):
        if cone.contains(t):
            s = _add(y, t)
            if cone.contains(s):
                return s, t
    return None


def suffix_markers(cone: ConePair, xs: Sequence[Vector]) -> list[Vector]:
    out = [cone.zero]
    acc = cone.zero
    for x in reversed(xs):
        acc = _add(acc, x)
        out.append(acc)
    return out


def nonvoid_witness(cone: ConePair, xs: Sequence[Sequence[int]], radius: int = DEFAULT_RADIUS) -> Witness:
    """A point in the domain of ``beta_{x1} ... beta_{xn}``.

    First tries backward substitution (write ``x_n = s_n - t_n``, then
    ``x_{n-1} + s_n = s_{n-1} - t_{n-1}`` and so on; the sum of the t_i
    works), then a direct scan.  If neither finds a point, a Farkas
    certificate of emptiness is returned when one exists.
    """
    xs = [tuple(int(v) for v in x) for x in xs]
    marks = suffix_markers(cone, xs)
    b = cone.bounds(marks)
    carry = cone.zero
    total = cone.zero
    ok = True
    for x in reversed(xs):
        st = _decompose(cone, _add(x, carry), radius)
        if st is None:
            ok = False
            break
        s, t = st
        total = _add(total, t)
        carry = s
    if ok and cone.satisfies(total, b):
        return Witness(total, "backward-substitution")
    t = find_point(cone, b, radius)
    if t is not None:
        return Witness(t, "scan")
    cert = infeasibility_certificate(cone, b)
    if cert is not None:
        return Witness(None, "certificate", cert)
    raise UndecidedAtWindow("no domain point found and no emptiness certificate",
                            {"word": [list(x) for x in xs], "radius": radius})


# ------------------------------------------------------------------- Omega patterns


@dataclass
class OmegaPatterns:
    window: Window
    patterns: tuple[frozenset, ...]
    representatives: dict
    stabilization: list[tuple[int, int]]

    def index(self, pattern: frozenset) -> int | None:
        try:
            return self.patterns.index(pattern)
        except ValueError:
            return None

    @property
    def stable(self) -> bool:
        counts = [c for _, c in self.stabilization]
        return len(counts) >= 2 and counts[-1] == counts[-2]

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "count": len(self.patterns),
            "patterns": [sorted(list(p) for p in pat) for pat in self.patterns],
            "representatives": [list(self.representatives[p]) for p in self.patterns],
            "stabilization": [list(s) for s in self.stabilization],
        }


def pattern_of(cone: ConePair, t: Vector, window: Window) -> frozenset:
    """``(t - P)`` restricted to the window."""
    return frozenset(w for w in window.points() if cone.contains(_sub(t, w)))


def omega_patterns(cone: ConePair, window: Window, scan_radius: int | None = None) -> OmegaPatterns:
    """Distinct window traces of ``t - P`` for cone points t in the scan box."""
    if scan_radius is None:
        scan_radius = 3 * window.extent + 2
    if scan_radius < window.extent:
        raise WindowTooSmall("scan radius must cover the window",
                             {"scan_radius": scan_radius, "window": window.to_json()})
    reps: dict = {}
    order: list = []
    stab = []
    for r in range(window.extent, scan_radius + 1):
        for t in box(r, cone.d):
            if max((abs(v) for v in t), default=0) != r and r != window.extent:
                continue
            if not cone.contains(t):
                continue
            p = pattern_of(cone, t, window)
            if p not in reps:
                reps[p] = t
                order.append(p)
        stab.append((r, len(order)))
    pats = tuple(sorted(order, key=lambda p: (len(p), sorted(p))))
    return OmegaPatterns(window, pats, reps, stab)


# --------------------------------------------------------------- Wiener-Hopf groupoid


@dataclass
class WienerHopf:
    cone: ConePair
    patterns: OmegaPatterns
    groupoid: Groupoid
    violations: list[str] = field(default_factory=list)
    separation: dict = field(default_factory=dict)

    @property
    def psi0_injective(self) -> bool:
        return all(v is not None for v in self.separation.values())


def _pattern_member(a: ToeplitzElement, pattern: frozenset, window: Window) -> bool:
    """Is the Omega point with this trace in Dom(Phi(a))?  Needs ``-C`` inside the window."""
    neg = [_neg(c) for c in a.markers]
    if not all(window.contains(c) for c in neg):
        raise WindowTooSmall(f"markers of {a} leave the window", {"element": a.to_json()})
    return all(c in pattern for c in neg)


def wiener_hopf_groupoid(cone: ConePair, window: Window, te_elements: Sequence[ToeplitzElement] = (),
                         scan_radius: int | None = None, radius: int = DEFAULT_RADIUS) -> WienerHopf:
    """Groupoid of the translation action reduced to one Omega point per pattern.

    Units are the points ``t - P`` for the chosen representatives t; an
    arrow ``(x, i)`` exists when ``t_i + x`` is again a representative.
    The te elements are checked against the action on these points:
    domain membership read off the pattern must match the exact test, and
    the action must be multiplicative and star-compatible.
    """
    pats = omega_patterns(cone, window, scan_radius)
    reps = [pats.representatives[p] for p in pats.patterns]
    where = {t: i for i, t in enumerate(reps)}
    labels = [",".join(map(str, t)) for t in reps]
    ground = GroundSet(len(reps), labels)
    L = Lattice(cone.d)

    def fiber(x):
        images = tuple(where.get(_add(t, x), -1) if cone.contains(_add(t, x)) else -1 for t in reps)
        return PartialBijection(ground, images)

    diffs = sorted({_sub(t2, t1) for t1 in reps for t2 in reps})
    G = Groupoid(ground, L, fiber, diffs, name="Wiener-Hopf groupoid (reduced)")
    out = WienerHopf(cone, pats, G)
    out.violations.extend(G.check_axioms())

    elems = [a for a in te_elements if not a.is_zero]
    for a in elems:
        for i, t in enumerate(reps):
            exact = a.in_domain(t)
            if _pattern_member(a, pats.patterns[i], window) != exact:
                out.violations.append(f"domain of {a} misread at pattern {i}")
            if exact:
                a_star = te_star(a, radius)
                if not a_star.in_domain(a.apply(t)) or a_star.apply(a.apply(t)) != t:
                    out.violations.append(f"star of {a} does not invert it at {t}")
        for b in elems:
            ab = te_mul(a, b, radius)
            for t in reps:
                step = b.apply(t)
                two = a.apply(step) if step is not None else None
                one = ab.apply(t) if not ab.is_zero else None
                if one != two:
                    out.violations.append(f"action not multiplicative for {a}, {b} at {t}")

    out.separation = separate_points(cone, pats, radius)
    return out


def separate_points(cone: ConePair, pats: OmegaPatterns, radius: int = DEFAULT_RADIUS) -> dict:
    """For each pair of patterns, a window point x whose idempotent
    ``beta_x beta_x*`` contains one of them in its domain but not the other
    (None if no such x exists in the window)."""
    window = pats.window
    holds = []
    for x in window.points():
        bx = te_beta(cone, x, radius)
        if bx.is_zero:
            continue
        e = te_mul(bx, te_star(bx, radius), radius)
        try:
            holds.append((x, frozenset(i for i, p in enumerate(pats.patterns)
                                       if _pattern_member(e, p, window))))
        except WindowTooSmall:
            continue
    out = {}
    for i, j in itertools.combinations(range(len(pats.patterns)), 2):
        out[(i, j)] = next((x for x, inside in holds if (i in inside) != (j in inside)), None)
    return out


# -------------------------------------------------------------- character comparison


@dataclass
class BSet:
    word: tuple[Vector, ...]
    bounds: tuple[int, ...]
    minima: tuple[int, ...] | None
    pattern: frozenset | None
    matched: bool | None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "word": [list(x) for x in self.word],
            "pattern": None if self.pattern is None else sorted(list(p) for p in self.pattern),
            "matched": self.matched,
            "note": self.note,
        }


@dataclass
class CharacterReport:
    cone: ConePair
    word_length: int
    window: Window
    pattern_count: int
    bsets: list[BSet]
    psi0_injective: bool
    sensitivity: dict

    @property
    def unmatched(self) -> list[BSet]:
        return [b for b in self.bsets if b.matched is False]

    @property
    def undecided(self) -> list[BSet]:
        return [b for b in self.bsets if b.matched is None]

    @property
    def all_matched(self) -> bool:
        return not self.unmatched and not self.undecided

    def to_json(self) -> dict:
        return {
            "cone": self.cone.to_json(),
            "word_length": self.word_length,
            "window": self.window.to_json(),
            "omega_patterns": self.pattern_count,
            "b_sets": len(self.bsets),
            "unmatched": [b.to_json() for b in self.unmatched],
            "undecided": [b.to_json() for b in self.undecided],
            "psi0_injective": self.psi0_injective,
            "psi0_surjective_on_window": self.all_matched,
            "unmatched_by_length": {str(k): v for k, v in sorted(self.sensitivity.items())},
        }


def _in_group_generated(cone: ConePair, x: Vector, radius: int) -> bool | None:
    try:
        return not te_beta(cone, x, radius).is_zero
    except UndecidedAtWindow:
        return None


def character_comparison(cone: ConePair, word_length: int, window: Window, gen_radius: int = 1,
                         scan_radius: int | None = None, radius: int = DEFAULT_RADIUS) -> CharacterReport:
    """Compare the sets ``B_{x1..xn}`` with the window traces of Omega.

    ``B = {x in PP^-1 : x + P contains Q}`` where ``Q`` is ``P`` cut by the
    translates ``-x_i + P``.  Since ``Q = {q : A q >= b}``, ``B`` is
    ``{x : a_j . x <= min_{q in Q} a_j . q}``; the minima are found by
    scanning and re-checked at a smaller radius.
    """
    if scan_radius is None:
        scan_radius = 3 * window.extent + 2
    pats = omega_patterns(cone, window, scan_radius)
    pattern_set = set(pats.patterns)
    gens = [x for x in box(gen_radius, cone.d) if _in_group_generated(cone, x, radius)]
    member = {x: _in_group_generated(cone, x, radius) for x in window.points()}

    by_bounds: dict = {}
    bsets: list[BSet] = []
    sensitivity: dict = {}
    for n in range(0, word_length + 1):
        sensitivity[n] = 0
        for word in itertools.combinations_with_replacement(gens, n):
            b = tuple(max([0] + [-_dot(a, x) for x in word]) for a in cone.constraints)
            if b in by_bounds:
                continue
            entry = _evaluate_bset(cone, word, b, window, member, pattern_set, scan_radius)
            by_bounds[b] = entry
            bsets.append(entry)
            if entry.matched is False:
                sensitivity[n] += 1

    sep = separate_points(cone, pats, radius)
    injective = all(v is not None for v in sep.values())
    return CharacterReport(cone, word_length, window, len(pats.patterns), bsets, injective, sensitivity)


def _evaluate_bset(cone, word, b, window, member, pattern_set, scan_radius) -> BSet:
    def minima(r):
        pts = [q for q in box(r, cone.d) if cone.satisfies(q, b)]
        if not pts:
            return None
        return tuple(min(_dot(a, q) for q in pts) for a in cone.constraints)

    m = minima(scan_radius)
    if m is None:
        return BSet(word, b, None, None, None, "cut cone has no point in the scan box")
    if minima(max(scan_radius - 2, 1)) != m:
        return BSet(word, b, m, None, None, "minima not stable under the scan radius")
    pat = []
    for x in window.points():
        if all(_dot(a, x) <= mj for a, mj in zip(cone.constraints, m)):
            inside = member[x]
            if inside is None:
                return BSet(word, b, m, None, None, f"membership of {x} in PP^-1 undecided")
            if inside:
                pat.append(x)
    pat = frozenset(pat)
    return BSet(word, b, m, pat, pat in pattern_set)


# ---------------------------------------------------------------- quasi-lattice order


@dataclass
class QuasiLatticeReport:
    cone: ConePair
    window: Window
    pointed: bool
    sigma_single: dict
    sigma_pair: dict
    counterexample: dict | None

    @property
    def quasi_lattice(self) -> bool:
        return self.pointed and self.counterexample is None

    def to_json(self) -> dict:
        return {
            "pointed": self.pointed,
            "quasi_lattice": self.quasi_lattice,
            "counterexample": self.counterexample,
            "sigma_pairs_checked": len(self.sigma_pair),
        }


def _least_upper_bound(cone: ConePair, items: Sequence[Vector], radius: int):
    """(lub or None, minimal upper bounds found in the scan box)."""
    ups = [p for p in cone.points(radius) if all(cone.precedes(s, p) for s in items)]
    minimal = [p for p in ups if not any(q != p and cone.precedes(q, p) for q in ups)]
    if len(minimal) == 1 and all(cone.precedes(minimal[0], p) for p in ups):
        return minimal[0], minimal
    return None, minimal


def quasi_lattice_check(cone: ConePair, window: Window, scan_radius: int | None = None,
                        radius: int = DEFAULT_RADIUS) -> QuasiLatticeReport:
    if scan_radius is None:
        scan_radius = 2 * window.extent + 2
    pts = window.points()
    pointed = not any(any(w) and cone.contains(w) and cone.contains(_neg(w)) for w in pts)
    single, pair = {}, {}
    counter = None
    for x in pts:
        if _in_group_generated(cone, x, radius):
            lub, mins = _least_upper_bound(cone, [cone.zero, x], scan_radius)
            single[x] = lub
            if lub is None and counter is None:
                counter = {"elements": [list(cone.zero), list(x)], "minimal_upper_bounds": [list(m) for m in mins]}
    cone_pts = [p for p in pts if cone.contains(p)]
    for s in cone_pts:
        for t in cone_pts:
            lub, mins = _least_upper_bound(cone, [s, t], scan_radius)
            pair[(s, t)] = lub
            if lub is None and counter is None:
                counter = {"elements": [list(s), list(t)], "minimal_upper_bounds": [list(m) for m in mins]}
    return QuasiLatticeReport(cone, window, pointed, single, pair, counter)


@dataclass
class PairPresentation:
    cone: ConePair
    pairs: list[tuple[Vector, Vector]]
    words_checked: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"pairs": len(self.pairs), "words_checked": self.words_checked,
                "violations": self.violations[:20], "ok": self.ok}


def qlo_presentation(cone: ConePair, pair_radius: int = 1, word_length: int = 3,
                     scan_radius: int | None = None, radius: int = DEFAULT_RADIUS,
                     compare_radius: int | None = None) -> PairPresentation:
    """Pair-form semigroup ``(P x P) + {theta}`` checked against te arithmetic.

    ``(s, t)(u, v) = (s - t + m, v - u + m)`` with ``m`` the least upper
    bound of t and u (theta if there is none); ``(s, t)* = (t, s)``;
    ``(s, t)`` corresponds to ``beta_s beta_t*``.
    """
    if scan_radius is None:
        scan_radius = 2 * pair_radius * word_length + 2
    if compare_radius is None:
        compare_radius = radius
    base = [p for p in box(pair_radius, cone.d) if cone.contains(p)]
    pairs = [(s, t) for s in base for t in base]
    lub_cache: dict = {}

    def lub(t, u):
        key = (t, u)
        if key not in lub_cache:
            lub_cache[key] = _least_upper_bound(cone, [t, u], scan_radius)[0]
        return lub_cache[key]

    def pmul(p, q):
        if p is None or q is None:
            return None
        (s, t), (u, v) = p, q
        m = lub(t, u)
        if m is None:
            return None
        return (_add(_sub(s, t), m), _add(_sub(v, u), m))

    te_cache: dict = {}

    def te_of(p):
        if p is None:
            return te_zero(cone)
        if p not in te_cache:
            s, t = p
            te_cache[p] = te_mul(te_beta(cone, s, radius), te_star(te_beta(cone, t, radius), radius), radius)
        return te_cache[p]

    bad: list[str] = []
    for i, p in enumerate(pairs):
        if not te_equal(te_star(te_of(p), radius), te_of((p[1], p[0])), compare_radius):
            bad.append(f"star fails at {p}")
        for q in pairs[i + 1:]:
            if te_equal(te_of(p), te_of(q), compare_radius):
                bad.append(f"pairs {p} and {q} have the same image")
    count = 0
    frontier = [((p,), p, te_of(p)) for p in pairs]
    count += len(frontier)
    for _ in range(word_length - 1):
        nxt = []
        for word, pw, tw in frontier:
            for q in pairs:
                pq = pmul(pw, q)
                tq = te_mul(tw, te_of(q), radius)
                if not te_equal(te_of(pq), tq, compare_radius):
                    bad.append(f"product mismatch on word {word + (q,)}")
                nxt.append((word + (q,), pq, tq))
                count += 1
        frontier = nxt
    return PairPresentation(cone, pairs, count, bad)


# -------------------------------------------------------------------- obvious action


@dataclass
class ObviousAction:
    truncation: tuple[Vector, ...]
    translations: tuple[Vector, ...]
    groupoid: Groupoid
    orbits: list
    pair_groupoid: bool
    algebra_dim: int
    matrix_units_ok: bool

    def to_json(self) -> dict:
        return {
            "points": [list(t) for t in self.truncation],
            "translations": [list(x) for x in self.translations],
            "arrows": len(self.groupoid.arrows),
            "orbits": [sorted(o) for o in self.orbits],
            "pair_groupoid": self.pair_groupoid,
            "algebra_dim": self.algebra_dim,
            "full_matrix_algebra": self.matrix_units_ok,
        }


def obvious_action_groupoid(cone: ConePair, truncation: Sequence[Sequence[int]],
                            translations: Sequence[Sequence[int]]) -> ObviousAction:
    """Translations restricted to a finite set of cone points, as a Z^d-graded groupoid."""
    from .star_algebra.convolution import AlgebraElement, convolve

    pts = tuple(tuple(int(v) for v in t) for t in truncation)
    for t in pts:
        if not cone.contains(t):
            raise ValueError(f"truncation point {t} is not in the cone")
    where = {t: i for i, t in enumerate(pts)}
    ground = GroundSet(len(pts), [",".join(map(str, t)) for t in pts])
    trans = tuple(sorted({tuple(int(v) for v in x) for x in translations} | {cone.zero}))

    def fiber(x):
        return PartialBijection(ground, tuple(where.get(_add(t, x), -1) for t in pts))

    G = Groupoid(ground, Lattice(cone.d), fiber, trans, name="obvious action groupoid")
    n = len(pts)
    pair = G.is_pair_groupoid()
    units_ok = False
    if pair:
        # e_ij = indicator of the arrow from j to i; check e_ij e_kl = [j == k] e_il
        arrow = {(G.r(a), a[1]): a for a in G.arrows}
        units_ok = True
        for (i, j), a in arrow.items():
            for (k, l), b in arrow.items():
                prod = convolve(G, AlgebraElement.point(a), AlgebraElement.point(b))
                want = AlgebraElement.point(arrow[(i, l)]) if j == k else AlgebraElement()
                if prod != want:
                    units_ok = False
    return ObviousAction(pts, trans, G, G.orbits(), pair, len(G.arrows), units_ok and len(G.arrows) == n * n)
