"""Convolution *-algebras of finite (or lazily truncated) groupoids."""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from ..errors import StructuralError
from ..exact import ONE, ZERO, conj, parts, scalar, to_complex
from ..groupoid import Action, Groupoid, ample_map
from ..isg import InverseSemigroup, MaximalStructure


class AlgebraElement:
    """Finitely supported function on arrows with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping | None = None):
        out = {}
        if coeffs:
            for k, v in coeffs.items():
                v = scalar(v)
                if v:
                    out[k] = v
        self.coeffs = out

    @classmethod
    def point(cls, arrow, value=ONE) -> "AlgebraElement":
        return cls({arrow: value})

    @classmethod
    def indicator(cls, arrows: Iterable) -> "AlgebraElement":
        return cls({a: ONE for a in arrows})

    def support(self) -> frozenset:
        return frozenset(self.coeffs)

    def __getitem__(self, arrow):
        return self.coeffs.get(arrow, ZERO)

    def items(self):
        return self.coeffs.items()

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        return isinstance(other, AlgebraElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return AlgebraElement(out)

    def __neg__(self):
        return AlgebraElement({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        c = scalar(c)
        return AlgebraElement({k: c * v for k, v in self.coeffs.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self.coeffs.items(), key=lambda kv: repr(kv[0])))
        return f"AlgebraElement({{{body}}})"

    def to_json(self, G: Groupoid) -> list:
        rows = []
        for a, v in self.coeffs.items():
            re, im = parts(v)
            rows.append([G.arrow_id(a), re, im])
        return sorted(rows)


def _check_support(G: Groupoid, f: AlgebraElement):
    for a in f.coeffs:
        if not G.is_arrow(a):
            raise StructuralError("support outside the arrow set", {"arrow": repr(a)})


def convolve(G: Groupoid, f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """``(f*g)(c) = sum over c = a b of f(a) g(b)``."""
    _check_support(G, f)
    _check_support(G, g)
    by_range = defaultdict(list)
    for b, gv in g.coeffs.items():
        by_range[G.r(b)].append((b, gv))
    out: dict = {}
    for a, fv in f.coeffs.items():
        for b, gv in by_range.get(a[1], ()):
            c = G.mul(a, b)
            out[c] = out.get(c, ZERO) + fv * gv
    return AlgebraElement(out)


def involution(G: Groupoid, f: AlgebraElement) -> AlgebraElement:
    _check_support(G, f)
    return AlgebraElement({G.inv(a): conj(v) for a, v in f.coeffs.items()})


def unit_element(G: Groupoid) -> AlgebraElement:
    return AlgebraElement.indicator(G.units())


def basis(G: Groupoid) -> list[AlgebraElement]:
    return [AlgebraElement.point(a) for a in G.arrows]


def conditional_expectation(G: Groupoid, f: AlgebraElement) -> AlgebraElement:
    """Restriction to the unit arrows."""
    return AlgebraElement({a: v for a, v in f.coeffs.items() if G.is_unit(a)})


def check_convolution_laws(G: Groupoid) -> list[str]:
    """Associativity and anti-multiplicativity of the involution on basis triples."""
    B = basis(G)
    bad = []
    prods = {}
    for i, f in enumerate(B):
        for j, g in enumerate(B):
            prods[i, j] = convolve(G, f, g)
            if involution(G, prods[i, j]) != convolve(G, involution(G, g), involution(G, f)):
                bad.append(f"(fg)* != g* f* at basis pair {(i, j)}")
    by_range = G.by_range()
    idx = {a: i for i, a in enumerate(G.arrows)}
    for (i, j), fg in prods.items():
        if not fg:
            continue
        for c in by_range.get(G.arrows[j][1], ()):
            k = idx[c]
            if convolve(G, fg, B[k]) != convolve(G, B[i], prods[j, k]):
                bad.append(f"associativity fails at basis triple {(i, j, k)}")
    return bad


# ------------------------------------------------------------ regular representation


class RegularRepresentation:
    """Left regular representation on the span of the enumerated arrows."""

    def __init__(self, G: Groupoid):
        self.G = G
        self.index = {a: i for i, a in enumerate(G.arrows)}
        self.by_range = G.by_range()
        self.dim = len(G.arrows)

    def matrix(self, f: AlgebraElement) -> np.ndarray:
        n = self.dim
        M = np.zeros((n, n), dtype=complex)
        for a, v in f.coeffs.items():
            c = to_complex(v)
            for b in self.by_range.get(a[1], ()):
                prod = self.G.mul(a, b)
                i = self.index.get(prod)
                if i is None:
                    raise StructuralError("regular representation needs a closed arrow set")
                M[i, self.index[b]] += c
        return M

    def norm(self, f: AlgebraElement) -> float:
        if not f:
            return 0.0
        return float(np.linalg.norm(self.matrix(f), 2))


def operator_norm(G: Groupoid, f: AlgebraElement) -> float:
    return RegularRepresentation(G).norm(f)


def random_element(G: Groupoid, rng: random.Random, density: float = 0.5, bound: int = 3) -> AlgebraElement:
    coeffs = {}
    for a in G.arrows:
        if rng.random() < density:
            coeffs[a] = (rng.randint(-bound, bound), rng.randint(-bound, bound))
    return AlgebraElement(coeffs)


@dataclass
class CStarAudit:
    samples: int
    worst_identity_gap: float
    worst_submultiplicative_gap: float
    hom_violations: int

    @property
    def ok(self) -> bool:
        return self.hom_violations == 0 and self.worst_identity_gap <= 1e-8 and self.worst_submultiplicative_gap <= 1e-8


def audit_regular_representation(G: Groupoid, samples: int = 10, seed: int = 0) -> CStarAudit:
    """Random rational elements: *-homomorphism, C*-identity, submultiplicativity."""
    rng = random.Random(seed)
    rep = RegularRepresentation(G)
    gap = sub = 0.0
    hom_bad = 0
    for _ in range(samples):
        f = random_element(G, rng)
        g = random_element(G, rng)
        Mf, Mg = rep.matrix(f), rep.matrix(g)
        if not np.allclose(rep.matrix(convolve(G, f, g)), Mf @ Mg, atol=1e-9):
            hom_bad += 1
        if not np.allclose(rep.matrix(involution(G, f)), Mf.conj().T, atol=1e-9):
            hom_bad += 1
        nf = rep.norm(f)
        nff = rep.norm(convolve(G, involution(G, f), f))
        gap = max(gap, abs(nff - nf * nf) / max(1.0, nf * nf))
        sub = max(sub, rep.norm(convolve(G, f, g)) - nf * rep.norm(g))
    return CStarAudit(samples, gap, max(sub, 0.0), hom_bad)


# ---------------------------------------------------------------------------- psi


def semigroup_basis(S: InverseSemigroup) -> list[int]:
    return S.nonzero()


def psi(A: Action, MS: MaximalStructure, G: Groupoid, v: Mapping[int, object]) -> AlgebraElement:
    """Linear extension of ``alpha -> indicator of its G-set``."""
    out = AlgebraElement()
    for alpha, c in v.items():
        if A.semigroup.is_zero(alpha):
            continue
        out = out + AlgebraElement.indicator(ample_map(A, MS, alpha)).scale(c)
    return out


def _rank(rows: list[list], ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    M = DomainMatrix([[QQ(int(x)) if isinstance(x, int) else x for x in r] for r in rows],
                     (len(rows), ncols), QQ)
    return M.rank()


def psi_matrix(A: Action, MS: MaximalStructure, G: Groupoid, columns: list[int] | None = None,
               rows: list | None = None) -> list[list[int]]:
    """0/1 matrix of psi (rows: arrows, columns: semigroup basis)."""
    cols = semigroup_basis(A.semigroup) if columns is None else columns
    rows = list(G.arrows) if rows is None else rows
    ridx = {a: i for i, a in enumerate(rows)}
    M = [[0] * len(cols) for _ in rows]
    for j, alpha in enumerate(cols):
        for a in ample_map(A, MS, alpha):
            M[ridx[a]][j] = 1
    return M


@dataclass
class PsiReport:
    dim_source: int
    dim_target: int
    rank: int
    violations: list[str] = field(default_factory=list)

    @property
    def injective(self) -> bool:
        return self.rank == self.dim_source

    @property
    def surjective(self) -> bool:
        return self.rank == self.dim_target

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective

    def to_json(self) -> dict:
        return {"dim_source": self.dim_source, "dim_target": self.dim_target, "rank": self.rank,
                "injective": self.injective, "surjective": self.surjective,
                "violations": self.violations}


def psi_report(A: Action, MS: MaximalStructure, G: Groupoid) -> PsiReport:
    """Multiplicativity, star and grading on every basis pair, plus the rank."""
    S = A.semigroup
    B = semigroup_basis(S)
    img = {a: psi(A, MS, G, {a: 1}) for a in B}
    zero = AlgebraElement()
    bad = []
    for a in B:
        if involution(G, img[a]) != img[S.star[a]]:
            bad.append(f"star fails at {a}")
        if any(arrow[0] != MS.majorant[a] for arrow in img[a].coeffs):
            bad.append(f"grading fails at {a}")
        if not S.is_idempotent(a) and conditional_expectation(G, img[a]):
            bad.append(f"expectation does not kill {a}")
        for b in B:
            p = S.mult[a][b]
            want = zero if S.is_zero(p) else img[p]
            if convolve(G, img[a], img[b]) != want:
                bad.append(f"product fails at {(a, b)}")
    rank = _rank(psi_matrix(A, MS, G, B), len(B))
    return PsiReport(len(B), len(G.arrows), rank, bad)


class SemigroupRegularRepresentation:
    """Left regular representation of C[S] on the span of S minus zero."""

    def __init__(self, S: InverseSemigroup):
        self.S = S
        self.basis = semigroup_basis(S)
        self.index = {a: i for i, a in enumerate(self.basis)}

    def matrix(self, v: Mapping[int, object]) -> np.ndarray:
        S = self.S
        n = len(self.basis)
        M = np.zeros((n, n), dtype=complex)
        for alpha, c in v.items():
            if S.is_zero(alpha):
                continue
            c = to_complex(scalar(c))
            src = S.source_projection(alpha)
            for b in self.basis:
                if S.mult[src][b] == b:
                    M[self.index[S.mult[alpha][b]], self.index[b]] += c
        return M

    def norm(self, v) -> float:
        return float(np.linalg.norm(self.matrix(v), 2)) if self.basis else 0.0


@dataclass
class RestrictionReport:
    label: object
    dim_source: int
    dim_target: int
    rank: int
    samples: int
    worst_ratio: float
    isometric_gap: float

    @property
    def contractive(self) -> bool:
        return self.worst_ratio <= 1 + 1e-9


def psi_x_restriction(A: Action, MS: MaximalStructure, G: Groupoid, x: int,
                      samples: int = 25, seed: int = 0) -> RestrictionReport:
    """Psi restricted to the span of elements below ``beta_x``.

    Contractivity is measured with the regular representations on both
    sides; ``isometric_gap`` is the largest |norm(psi v) - norm(v)|.
    """
    S = A.semigroup
    below = [a for a in semigroup_basis(S) if S.leq(a, x)]
    target = sorted(ample_map(A, MS, x))
    rank = _rank(psi_matrix(A, MS, G, below, target), len(below)) if target else 0
    rng = random.Random(seed)
    rs = SemigroupRegularRepresentation(S)
    rg = RegularRepresentation(G)
    worst, iso = 0.0, 0.0
    for _ in range(samples):
        v = {a: (rng.randint(-3, 3), rng.randint(-3, 3)) for a in below}
        ns = rs.norm(v)
        ng = rg.norm(psi(A, MS, G, v))
        if ns > 1e-12:
            worst = max(worst, ng / ns)
        elif ng > 1e-9:
            worst = float("inf")
        iso = max(iso, abs(ng - ns))
    return RestrictionReport(x, len(below), len(target), rank, samples, worst, iso)
