"""Prefix maps on one-sided subshifts of finite type, handled through cylinders.

Letters are ``1..n``.  A word ``w`` stands for the clopen set of admissible
sequences starting with ``w``; the empty word is the whole space.  A prefix
map is a finite set of pieces ``(v, u)`` sending ``v s`` to ``u s``.

Since the matrix is irreducible and not a permutation, no cylinder is a
single point, so two pieces agree exactly when their words agree.  This is
what makes the normal forms below canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Iterable, Sequence

from ..errors import PreconditionError

Word = tuple


@dataclass(frozen=True)
class CKMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise PreconditionError("matrix must be square and nonempty")
        if any(x not in (0, 1) for r in rows for x in r):
            raise PreconditionError("matrix entries must be 0 or 1")
        if not self.is_irreducible():
            raise PreconditionError("matrix is not irreducible", {"matrix": [list(r) for r in rows]})
        if self.is_permutation():
            raise PreconditionError("matrix is a permutation matrix", {"matrix": [list(r) for r in rows]})

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def letters(self) -> range:
        return range(1, self.n + 1)

    def allowed(self, i: int, j: int) -> bool:
        return self.entries[i - 1][j - 1] == 1

    def followers(self, last: int | None) -> frozenset[int]:
        """Letters that may follow ``last``; every letter may start a word."""
        if last is None:
            return frozenset(self.letters)
        return frozenset(j for j in self.letters if self.allowed(last, j))

    def admissible(self, word: Sequence[int]) -> bool:
        if any(not 1 <= a <= self.n for a in word):
            return False
        return all(self.allowed(a, b) for a, b in zip(word, word[1:]))

    def is_irreducible(self) -> bool:
        n = len(self.entries)
        for i in range(n):
            seen, stack = set(), [i]
            while stack:
                a = stack.pop()
                for b in range(n):
                    if self.entries[a][b] and b not in seen:
                        seen.add(b)
                        stack.append(b)
            if len(seen) != n:
                return False
        return True

    def is_permutation(self) -> bool:
        return all(sum(r) == 1 for r in self.entries) and all(
            sum(r[j] for r in self.entries) == 1 for j in range(len(self.entries)))

    def words(self, length: int) -> list[Word]:
        return [w for w in cartesian(self.letters, repeat=length) if self.admissible(w)]

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def _last(w: Word) -> int | None:
    return w[-1] if w else None


def _is_prefix(a: Word, b: Word) -> bool:
    return len(a) <= len(b) and b[:len(a)] == a


# ----------------------------------------------------------------- cylinders


@dataclass(frozen=True)
class CylinderSet:
    """A clopen set as the antichain of its minimal cylinder words."""

    A: CKMatrix
    words: frozenset

    @classmethod
    def of(cls, A: CKMatrix, words: Iterable[Sequence[int]]) -> "CylinderSet":
        ws = {tuple(w) for w in words}
        for w in ws:
            if not A.admissible(w):
                raise PreconditionError("word is not admissible", {"word": list(w)})
        return cls(A, _normalize_words(A, ws))

    @classmethod
    def whole(cls, A: CKMatrix) -> "CylinderSet":
        return cls(A, frozenset({()}))

    @classmethod
    def empty(cls, A: CKMatrix) -> "CylinderSet":
        return cls(A, frozenset())

    def is_empty(self) -> bool:
        return not self.words

    def contains_sequence(self, seq: Sequence[int]) -> bool:
        """Membership of any sequence at least as long as the longest word."""
        return any(_is_prefix(w, tuple(seq)) for w in self.words)

    def __and__(self, other: "CylinderSet") -> "CylinderSet":
        out = set()
        for a in self.words:
            for b in other.words:
                if _is_prefix(a, b):
                    out.add(b)
                elif _is_prefix(b, a):
                    out.add(a)
        return CylinderSet(self.A, _normalize_words(self.A, out))

    def __or__(self, other: "CylinderSet") -> "CylinderSet":
        return CylinderSet(self.A, _normalize_words(self.A, set(self.words) | set(other.words)))

    def issubset(self, other: "CylinderSet") -> bool:
        return (self & other) == self

    def sorted_words(self) -> list[list[int]]:
        return [list(w) for w in sorted(self.words, key=lambda w: (len(w), w))]

    def __str__(self):
        if self.words == frozenset({()}):
            return "X"
        return " u ".join("[" + "".join(map(str, w)) + "]" for w in sorted(self.words, key=lambda w: (len(w), w))) or "{}"


def _normalize_words(A: CKMatrix, ws: set) -> frozenset:
    ws = {w for w in ws if not any(p != w and _is_prefix(p, w) for p in ws)}
    changed = True
    while changed:
        changed = False
        parents = {w[:-1] for w in ws if w}
        for p in sorted(parents, key=len, reverse=True):
            kids = {p + (l,) for l in A.followers(_last(p))}
            if kids <= ws:
                ws -= kids
                ws.add(p)
                changed = True
                break
    return frozenset(ws)


# --------------------------------------------------------------- prefix maps


@dataclass(frozen=True)
class PrefixMap:
    A: CKMatrix
    pieces: frozenset  # of (v, u)

    @classmethod
    def of(cls, A: CKMatrix, pieces: Iterable[tuple[Sequence[int], Sequence[int]]]) -> "PrefixMap":
        ps = set()
        for v, u in pieces:
            v, u = tuple(v), tuple(u)
            if not (A.admissible(v) and A.admissible(u)):
                raise PreconditionError("piece words must be admissible", {"piece": [list(v), list(u)]})
            if A.followers(_last(v)) != A.followers(_last(u)):
                raise PreconditionError("piece is not a bijection of cylinders", {"piece": [list(v), list(u)]})
            ps.add((v, u))
        dom = [v for v, _ in ps]
        ran = [u for _, u in ps]
        for side in (dom, ran):
            for a in side:
                for b in side:
                    if a != b and _is_prefix(a, b):
                        raise PreconditionError("pieces overlap", {"words": [list(a), list(b)]})
        return cls(A, _normalize_pieces(A, ps))

    @classmethod
    def identity(cls, A: CKMatrix, U: CylinderSet | None = None) -> "PrefixMap":
        words = U.words if U is not None else {()}
        return cls(A, _normalize_pieces(A, {(w, w) for w in words}))

    @classmethod
    def zero(cls, A: CKMatrix) -> "PrefixMap":
        return cls(A, frozenset())

    @classmethod
    def generator(cls, A: CKMatrix, m: int) -> "PrefixMap":
        """Prepend ``m``: defined on sequences whose first letter may follow ``m``."""
        if m not in A.letters:
            raise PreconditionError("letter out of range", {"letter": m})
        return cls.of(A, [((j,), (m, j)) for j in sorted(A.followers(m))])

    def domain(self) -> CylinderSet:
        return CylinderSet(self.A, _normalize_words(self.A, {v for v, _ in self.pieces}))

    def range(self) -> CylinderSet:
        return CylinderSet(self.A, _normalize_words(self.A, {u for _, u in self.pieces}))

    def is_zero(self) -> bool:
        return not self.pieces

    def is_idempotent(self) -> bool:
        return all(v == u for v, u in self.pieces)

    def apply(self, seq: Sequence[int]) -> tuple | None:
        seq = tuple(seq)
        for v, u in self.pieces:
            if _is_prefix(v, seq):
                return u + seq[len(v):]
        return None

    def to_json(self) -> list:
        return [[list(v), list(u)] for v, u in sorted(self.pieces, key=lambda p: (len(p[0]), p))]

    def __str__(self):
        if not self.pieces:
            return "theta"
        return "{" + ", ".join(f"{''.join(map(str, v)) or '.'}->{''.join(map(str, u)) or '.'}"
                               for v, u in sorted(self.pieces, key=lambda p: (len(p[0]), p))) + "}"


def _normalize_pieces(A: CKMatrix, ps: set) -> frozenset:
    ps = set(ps)
    changed = True
    while changed:
        changed = False
        groups: dict = {}
        for v, u in ps:
            if v and u and v[-1] == u[-1]:
                groups.setdefault((v[:-1], u[:-1]), set()).add(v[-1])
        for (pv, pu), ls in sorted(groups.items(), key=lambda kv: -len(kv[0][0])):
            fv, fu = A.followers(_last(pv)), A.followers(_last(pu))
            if fv == fu and ls == fv:
                for l in ls:
                    ps.discard((pv + (l,), pu + (l,)))
                ps.add((pv, pu))
                changed = True
                break
    return frozenset(ps)


def compose(f: PrefixMap, g: PrefixMap) -> PrefixMap:
    """``f g``: apply ``g`` first."""
    out = set()
    for v, u in g.pieces:
        for v2, u2 in f.pieces:
            if _is_prefix(u, v2):
                out.add((v + v2[len(u):], u2))
            elif _is_prefix(v2, u):
                out.add((v, u2 + u[len(v2):]))
    return PrefixMap(f.A, _normalize_pieces(f.A, out))


def star(f: PrefixMap) -> PrefixMap:
    return PrefixMap(f.A, frozenset((u, v) for v, u in f.pieces))


def leq(f: PrefixMap, g: PrefixMap) -> bool:
    """``f`` is a restriction of ``g``."""
    return compose(g, PrefixMap.identity(f.A, f.domain())) == f


def word_map(A: CKMatrix, letters: Sequence[int]) -> PrefixMap:
    """Product of generators; a negative letter ``-m`` stands for the adjoint of ``m``."""
    out = PrefixMap.identity(A)
    for a in letters:
        g = PrefixMap.generator(A, abs(a))
        out = compose(out, g if a > 0 else star(g))
    return out


# --------------------------------------------------------------- relations


@dataclass
class RelationReport:
    ranges_disjoint: bool
    domains_match: bool
    witness: dict | None = None
    table: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.ranges_disjoint and self.domains_match

    def to_json(self) -> dict:
        return {"ranges_disjoint": self.ranges_disjoint, "domains_match": self.domains_match,
                "witness": self.witness, "table": self.table, "ok": self.ok}


def ck_relations(A: CKMatrix) -> RelationReport:
    """Ranges of the generators are disjoint, and the domain of each is the
    union of the ranges it may be followed by."""
    gens = {m: PrefixMap.generator(A, m) for m in A.letters}
    rep = RelationReport(True, True)
    for i in A.letters:
        for j in A.letters:
            if i < j and not (gens[i].range() & gens[j].range()).is_empty():
                rep.ranges_disjoint = False
                rep.witness = rep.witness or {"overlap": [i, j], "cylinder": str(gens[i].range() & gens[j].range())}
    for i in A.letters:
        dom = gens[i].domain()
        union = CylinderSet.empty(A)
        for j in A.letters:
            if A.allowed(i, j):
                union = union | gens[j].range()
        # the projections onto domain and range, computed as maps
        src = compose(star(gens[i]), gens[i])
        if src != PrefixMap.identity(A, dom) or dom != union:
            rep.domains_match = False
            rep.witness = rep.witness or {"letter": i, "domain": str(dom), "union_of_ranges": str(union)}
        rep.table.append({"letter": i, "domain": str(dom), "range": str(gens[i].range())})
    return rep


# ---------------------------------------------------------- free group words


def reduce_word(word: Sequence[int]) -> tuple[int, ...]:
    """Free reduction; ``-m`` is the inverse of ``m``."""
    out: list[int] = []
    for a in word:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def split_word(word: Sequence[int]) -> tuple[tuple, tuple] | None:
    """``(i_1..i_p, j_1..j_q)`` for ``g_i1..g_ip g_jq^-1..g_j1^-1``; None for other shapes."""
    word = tuple(word)
    p = 0
    while p < len(word) and word[p] > 0:
        p += 1
    neg = word[p:]
    if any(a > 0 for a in neg):
        return None
    return word[:p], tuple(-a for a in reversed(neg))


def marker_conditions(A: CKMatrix, word: Sequence[int]) -> dict:
    """The three word conditions; a missing side imposes nothing."""
    parts = split_word(word)
    if parts is None:
        return {"shape": False, "reduced": False, "admissible": False, "common_follower": False}
    i, j = parts
    reduced = not (i and j and i[-1] == j[-1])
    admissible = A.admissible(i) and A.admissible(j)
    common = A.followers(_last(i)) & A.followers(_last(j))
    return {"shape": True, "reduced": reduced, "admissible": admissible, "common_follower": bool(common)}


def is_marker(A: CKMatrix, word: Sequence[int]) -> bool:
    return all(marker_conditions(A, word).values())


def marker_words(A: CKMatrix, max_length: int) -> list[tuple[int, ...]]:
    out = []
    for total in range(max_length + 1):
        for p in range(total + 1):
            q = total - p
            for i in cartesian(A.letters, repeat=p):
                for j in cartesian(A.letters, repeat=q):
                    w = tuple(i) + tuple(-a for a in reversed(j))
                    if is_marker(A, w):
                        out.append(w)
    return out


def marker_map(A: CKMatrix, word: Sequence[int]) -> PrefixMap:
    """``b_i1 .. b_ip b_jq* .. b_j1*`` for the marker word."""
    return word_map(A, word)


def word_str(word: Sequence[int]) -> str:
    if not word:
        return "e"
    return " ".join(f"g{a}" if a > 0 else f"g{-a}^-1" for a in word)


# ----------------------------------------------------------- the fragment


@dataclass(eq=False)
class CKFragment:
    A: CKMatrix
    word_length: int
    elements: list[PrefixMap]
    words: dict  # element -> shortest generating word
    maximal: list[PrefixMap]
    checks: dict = field(default_factory=dict)
    table: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "matrix": self.A.to_json(),
            "word_length": self.word_length,
            "size": len(self.elements),
            "maximal": len(self.maximal),
            "checks": dict(self.checks),
            "marker_table": self.table,
            "witnesses": self.witnesses,
            "ok": self.ok,
        }


def generate_fragment(A: CKMatrix, L: int) -> tuple[list[PrefixMap], dict]:
    """All products of at most ``L`` generators and adjoints, shortest word first."""
    letters = [m for m in A.letters] + [-m for m in A.letters]
    maps = {a: PrefixMap.generator(A, a) if a > 0 else star(PrefixMap.generator(A, -a)) for a in letters}
    eps = PrefixMap.identity(A)
    words = {eps: ()}
    order = [eps]
    frontier = [(eps, ())]
    for _ in range(L):
        nxt = []
        for f, w in frontier:
            for a in letters:
                h = compose(f, maps[a])
                if h not in words:
                    words[h] = w + (a,)
                    order.append(h)
                    nxt.append((h, w + (a,)))
        frontier = nxt
    return order, words


def ck_semigroup(A: CKMatrix, L: int = 4) -> CKFragment:
    """Words of length at most ``L`` in the generators and their adjoints, audited.

    Every element reached has its maximal majorant among the marker maps of
    length at most ``L``, so maximality inside the fragment is maximality in
    the whole semigroup.
    """
    elements, words = generate_fragment(A, L)
    nonzero = [f for f in elements if not f.is_zero()]
    ups = {f: [g for g in nonzero if leq(f, g)] for f in nonzero}
    maximal = [f for f in nonzero if ups[f] == [f]]
    maxset = set(maximal)
    frag = CKFragment(A, L, elements, words, maximal)

    unique = True
    for f in nonzero:
        tops = [g for g in ups[f] if g in maxset]
        if len(tops) != 1:
            unique = False
            frag.witnesses.setdefault("not_unique", {"element": str(f), "tops": [str(g) for g in tops]})
    frag.checks["f_tilde_on_fragment"] = unique

    markers = marker_words(A, L)
    images = {w: marker_map(A, w) for w in markers}
    frag.checks["marker_maps_nonzero"] = all(not f.is_zero() for f in images.values())
    frag.checks["marker_maps_distinct"] = len(set(images.values())) == len(images)
    predicted = set(images.values())
    frag.checks["maximal_equals_marker_maps"] = predicted == maxset
    if predicted != maxset:
        frag.witnesses["maximal_mismatch"] = {
            "marker_not_maximal": [word_str(w) for w, f in images.items() if f not in maxset][:5],
            "maximal_not_marker": [str(f) for f in maxset - predicted][:5]}
    for w in markers:
        frag.table.append({"word": word_str(w), "map": str(images[w]), **marker_conditions(A, w)})

    # reduced words of marker shape that break a condition give the zero map
    nonzero_failures = []
    for total in range(1, L + 1):
        for p in range(total + 1):
            for i in cartesian(A.letters, repeat=p):
                for j in cartesian(A.letters, repeat=total - p):
                    w = tuple(i) + tuple(-a for a in reversed(j))
                    if reduce_word(w) == w and not is_marker(A, w) and not word_map(A, w).is_zero():
                        nonzero_failures.append(word_str(w))
    frag.checks["failing_reduced_words_vanish"] = not nonzero_failures
    if nonzero_failures:
        frag.witnesses["failing_but_nonzero"] = nonzero_failures[:5]

    consistent = True
    for x in markers:
        for y in markers:
            if len(x) + len(y) > L:
                continue
            prod_map = compose(images[x], images[y])
            if prod_map.is_zero():
                continue
            xy = reduce_word(x + y)
            if not is_marker(A, xy):
                consistent = False
                frag.witnesses.setdefault("product", {"x": word_str(x), "y": word_str(y), "xy": word_str(xy)})
                continue
            if not leq(prod_map, marker_map(A, xy)):
                consistent = False
                frag.witnesses.setdefault("order", {"x": word_str(x), "y": word_str(y)})
    frag.checks["marker_products_follow_free_group"] = consistent

    # cylinders of words up to half the length are domains of adjoint words
    cyl_ok = True
    for k in range(1, L // 2 + 1):
        for w in A.words(k):
            f = word_map(A, tuple(-a for a in reversed(w)))
            if f.domain() != CylinderSet.of(A, [w]):
                cyl_ok = False
                frag.witnesses.setdefault("cylinder", list(w))
    frag.checks["cylinders_are_domains"] = cyl_ok
    shift_parts = [PrefixMap.generator(A, m).range() for m in A.letters]
    union = CylinderSet.empty(A)
    for U in shift_parts:
        union = union | U
    frag.checks["adjoint_domains_partition"] = union == CylinderSet.whole(A) and all(
        (U & V).is_empty() for a, U in enumerate(shift_parts) for b, V in enumerate(shift_parts) if a < b)
    return frag


# --------------------------------------------------------------- fixed points


def periodic_fixed_point(f: PrefixMap) -> dict | None:
    """A fixed point of a piece that is not the identity, as ``prefix`` then ``period`` repeated.

    A piece ``v -> v s`` fixes ``v s s s ...`` when that sequence is
    admissible; it moves every other point of a neighborhood, so the map is
    not locally the identity there.
    """
    A = f.A
    for v, u in sorted(f.pieces, key=lambda p: (len(p[0]), p)):
        if v == u:
            continue
        for short, long in ((v, u), (u, v)):
            if len(short) < len(long) and _is_prefix(short, long):
                s = long[len(short):]
                if A.admissible(long + s[:1]):
                    return {"piece": [list(v), list(u)], "prefix": list(short), "period": list(s)}
    return None


def ck_free_audit(fragment: CKFragment) -> dict:
    """Freeness fails as soon as some element fixes a point without being the identity near it."""
    for f in fragment.elements:
        w = periodic_fixed_point(f)
        if w is not None:
            return {"free": False, "element": str(f), "word": word_str(fragment.words[f]), "fixed": w}
    return {"free": True}
