"""Localization algebra D(S), the map rho onto the groupoid algebra, and its kernel.

Elements of D(S) are sparse with keys ``(alpha, w)``: the function
``delta_w`` placed in the summand of ``alpha`` (``w`` in Dom(alpha)).
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from ..errors import PreconditionError
from ..exact import ONE, ZERO, conj, scalar, to_complex
from ..groupoid import Action, Groupoid, build_groupoid, validate_action
from ..isg import MaximalStructure
from .convolution import AlgebraElement, convolve, involution


def localization_failures(A: Action) -> list[str]:
    """Why ``A`` is not a localization on its finite discrete space (empty if it is).

    On a discrete space the domains form a basis exactly when every
    singleton is a domain; the action must also be faithful.
    """
    out = []
    rep = validate_action(A)
    if not rep.valid:
        out.append(f"not an action: {rep.first}")
        return out
    if len(set(A.phi)) != len(A.phi):
        out.append("action is not faithful")
    domains = {f.domain for f in A.phi}
    for w in A.omega.points():
        if frozenset([w]) not in domains:
            out.append(f"singleton {{{w}}} is not a domain")
    return out


class LocalizationAlgebra:
    def __init__(self, A: Action):
        self.action = A
        S = A.semigroup
        self.basis = [(a, w) for a in S.nonzero() for w in sorted(A.phi[a].domain)]
        self.index = {b: i for i, b in enumerate(self.basis)}

    def product(self, f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
        """``(a1, f1)(a2, f2) = (a1 a2, w -> f1(a2 w) f2(w))``."""
        S, phi = self.action.semigroup, self.action.phi
        out: dict = {}
        for (a1, w1), c1 in f.items():
            for (a2, w2), c2 in g.items():
                if phi[a2].get(w2) != w1:
                    continue
                key = (S.mult[a1][a2], w2)
                out[key] = out.get(key, ZERO) + c1 * c2
        return AlgebraElement(out)

    def star(self, f: AlgebraElement) -> AlgebraElement:
        """``(a, f)* = (a*, w -> conj f(a* w))``."""
        S, phi = self.action.semigroup, self.action.phi
        return AlgebraElement({(S.star[a], phi[a](w)): conj(c) for (a, w), c in f.items()})

    def vector(self, f: AlgebraElement) -> list:
        v = [QQ(0)] * len(self.basis)
        for key, c in f.items():
            v[self.index[key]] = c
        return v


def rho(MS: MaximalStructure, f: AlgebraElement) -> AlgebraElement:
    """``(alpha, f) -> chi_x (x) f`` with x the majorant of alpha."""
    out: dict = {}
    for (a, w), c in f.items():
        key = (MS.majorant[a], w)
        out[key] = out.get(key, ZERO) + c
    return AlgebraElement(out)


# ------------------------------------------------------------------ coherent families


@dataclass
class Member:
    alpha: int
    f: dict  # point -> exact scalar
    U: frozenset


def is_coherent(A: Action, family: list[Member]) -> bool:
    phi = A.phi
    for m in family:
        if not set(m.f) <= m.U <= phi[m.alpha].domain:
            return False
    for i, m in enumerate(family):
        for n in family[i + 1:]:
            for w in m.U & n.U:
                if phi[m.alpha](w) != phi[n.alpha](w):
                    return False
    return True


def family_sum(family: list[Member]) -> dict:
    out: dict = {}
    for m in family:
        for w, c in m.f.items():
            out[w] = out.get(w, ZERO) + c
    return {w: c for w, c in out.items() if c}


def family_element(family: list[Member]) -> AlgebraElement:
    out: dict = {}
    for m in family:
        for w, c in m.f.items():
            out[(m.alpha, w)] = out.get((m.alpha, w), ZERO) + c
    return AlgebraElement(out)


def point_families(A: Action) -> list[list[Member]]:
    """Two-member zero-sum coherent families supported on one point.

    For each point and each value reached there, the first element with that
    value is paired against every other one.  These span I(S) on a discrete
    space, since a coherent zero-sum family splits into its point pieces.
    """
    S, phi = A.semigroup, A.phi
    groups = defaultdict(list)
    for a in S.nonzero():
        for w in sorted(phi[a].domain):
            groups[(w, phi[a](w))].append(a)
    out = []
    one = ONE
    for (w, _), elems in sorted(groups.items()):
        U = frozenset([w])
        for a in elems[1:]:
            out.append([Member(elems[0], {w: one}, U), Member(a, {w: -one}, U)])
    return out


def domain_pair_families(A: Action) -> list[list[Member]]:
    """Pairs agreeing on the whole of a common domain set, with indicator functions."""
    S, phi = A.semigroup, A.phi
    domains = {phi[a].domain for a in S.nonzero()}
    out = []
    nz = S.nonzero()
    one = ONE
    for i, a in enumerate(nz):
        for b in nz[i + 1:]:
            agree = frozenset(w for w in phi[a].domain & phi[b].domain if phi[a](w) == phi[b](w))
            if agree and agree in domains:
                out.append([Member(a, {w: one for w in agree}, agree),
                            Member(b, {w: -one for w in agree}, agree)])
    return out


def partition_by_majorant(MS: MaximalStructure, family: list[Member]) -> dict[int, list[Member]]:
    blocks: dict[int, list[Member]] = defaultdict(list)
    for m in family:
        blocks[MS.majorant[m.alpha]].append(m)
    return dict(blocks)


def sample_coherent_family(A: Action, rng: random.Random, size: int, zero_sum: bool) -> list[Member]:
    """Random coherent family; with ``zero_sum`` the functions add up to 0."""
    S, phi = A.semigroup, A.phi
    nz = [a for a in S.nonzero() if phi[a].domain]
    fam: list[Member] = []
    for _ in range(size):
        a = rng.choice(nz)
        dom = sorted(phi[a].domain)
        U = set(w for w in dom if rng.random() < 0.7) or {rng.choice(dom)}
        for m in fam:
            for w in list(U & m.U):
                if phi[m.alpha](w) != phi[a](w):
                    U.discard(w)
        if U:
            fam.append(Member(a, {}, frozenset(U)))
    cover = defaultdict(list)
    for k, m in enumerate(fam):
        for w in sorted(m.U):
            cover[w].append(k)
    for w, ks in sorted(cover.items()):
        vals = [QQ(rng.randint(-4, 4), rng.randint(1, 3)) for _ in ks]
        if zero_sum:
            if len(ks) == 1:
                continue
            vals[-1] = -sum(vals[:-1], QQ(0))
        for k, v in zip(ks, vals):
            if v:
                fam[k].f[w] = scalar((v, 0))
    return fam


# ----------------------------------------------------------------------------- report


def _rank(vectors: list[list], ncols: int) -> int:
    if not vectors:
        return 0
    return DomainMatrix([list(v) for v in vectors], (len(vectors), ncols), QQ).rank()


def _real_rows(vectors):
    out = []
    for v in vectors:
        row = []
        for c in v:
            if hasattr(c, "y"):
                if c.y:
                    raise ValueError("real coefficients expected")
                row.append(QQ(c.x))
            else:
                row.append(QQ(c))
        out.append(row)
    return out


@dataclass
class KumjianReport:
    dim_D: int
    dim_groupoid_algebra: int
    rank_rho: int
    dim_kernel: int
    dim_ideal: int
    ideal_in_kernel: bool
    kernel_in_ideal: bool
    hom_violations: list[str] = field(default_factory=list)
    partition_failures: int = 0
    bound_failures: int = 0
    families_sampled: int = 0

    @property
    def surjective(self) -> bool:
        return self.rank_rho == self.dim_groupoid_algebra

    @property
    def kernel_equals_ideal(self) -> bool:
        return self.dim_kernel == self.dim_ideal and self.ideal_in_kernel and self.kernel_in_ideal

    @property
    def ok(self) -> bool:
        return (self.kernel_equals_ideal and self.surjective and not self.hom_violations
                and self.partition_failures == 0 and self.bound_failures == 0)

    def to_json(self) -> dict:
        return {
            "dim_D": self.dim_D, "dim_groupoid_algebra": self.dim_groupoid_algebra,
            "rank_rho": self.rank_rho, "dim_kernel": self.dim_kernel, "dim_ideal": self.dim_ideal,
            "ideal_in_kernel": self.ideal_in_kernel, "kernel_in_ideal": self.kernel_in_ideal,
            "surjective": self.surjective, "hom_violations": self.hom_violations[:10],
            "partition_failures": self.partition_failures,
            "bound_failures": self.bound_failures,
            "families_sampled": self.families_sampled, "ok": self.ok,
        }


def kumjian_rho(A: Action, MS: MaximalStructure, samples: int = 40, seed: int = 0,
                check_hom: bool = True) -> KumjianReport:
    """Compare ker(rho) with the span of zero-sum coherent families, exactly."""
    fails = localization_failures(A)
    if fails:
        raise PreconditionError(f"not a localization: {fails[0]}", fails)
    G = build_groupoid(A, MS)
    D = LocalizationAlgebra(A)
    n = len(D.basis)
    arrow_idx = {a: i for i, a in enumerate(G.arrows)}

    # rho as an exact 0/1 matrix (rows: arrows, columns: basis of D)
    R = [[QQ(0)] * n for _ in G.arrows]
    for j, (a, w) in enumerate(D.basis):
        R[arrow_idx[(MS.majorant[a], w)]][j] = QQ(1)
    Rm = DomainMatrix(R, (len(G.arrows), n), QQ) if G.arrows else None
    rank = Rm.rank() if Rm is not None else 0
    kernel = []
    if Rm is not None:
        ns = Rm.nullspace().to_Matrix()
        kernel = [[QQ(int(x.p), int(x.q)) for x in ns.row(i)] for i in range(ns.rows)]

    families = point_families(A) + domain_pair_families(A)
    ideal = _real_rows([D.vector(family_element(f)) for f in families])
    dim_ideal = _rank(ideal, n)
    ideal_in_kernel = all(not rho(MS, family_element(f)) for f in families)
    kernel_in_ideal = _rank(ideal + kernel, n) == dim_ideal

    rep = KumjianReport(n, len(G.arrows), rank, n - rank, dim_ideal, ideal_in_kernel, kernel_in_ideal)

    if check_hom:
        for b1 in D.basis:
            e1 = AlgebraElement.point(b1)
            if rho(MS, D.star(e1)) != involution(G, rho(MS, e1)):
                rep.hom_violations.append(f"star at {b1}")
            for b2 in D.basis:
                e2 = AlgebraElement.point(b2)
                if rho(MS, D.product(e1, e2)) != convolve(G, rho(MS, e1), rho(MS, e2)):
                    rep.hom_violations.append(f"product at {(b1, b2)}")

    rng = random.Random(seed)
    for _ in range(samples):
        fam = sample_coherent_family(A, rng, rng.randint(2, 6), zero_sum=True)
        if not fam or not is_coherent(A, fam):
            continue
        rep.families_sampled += 1
        for block in partition_by_majorant(MS, fam).values():
            if family_sum(block) or not is_coherent(A, block):
                rep.partition_failures += 1
        # pointwise bound for a sum of several coherent families
        pieces = [sample_coherent_family(A, rng, rng.randint(1, 4), zero_sum=False)
                  for _ in range(rng.randint(1, 3))]
        pieces = [p for p in pieces if p and is_coherent(A, p)]
        xi = AlgebraElement()
        for p in pieces:
            xi = xi + family_element(p)
        r = rho(MS, xi)
        sums = [family_sum(p) for p in pieces]
        for (x, w), c in r.items():
            bound = sum(abs(to_complex(s.get(w, ZERO))) for s in sums)
            if abs(to_complex(c)) > bound + 1e-12:
                rep.bound_failures += 1
        sup_rho = max((abs(to_complex(c)) for _, c in r.items()), default=0.0)
        sup_bound = sum(max((abs(to_complex(c)) for c in s.values()), default=0.0) for s in sums)
        if sup_rho > sup_bound + 1e-12:
            rep.bound_failures += 1
    return rep
