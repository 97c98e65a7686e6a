"""Crossed product by one partial bijection, and its match with the groupoid algebra.

An element is a finitely supported family ``(f_n)`` with ``f_n`` a function
on ``Dom(b**n)``; it is stored sparsely with keys ``(n, w)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..exact import ONE, ZERO, conj, scalar
from ..groupoid import Groupoid, singly_generated_groupoid
from ..pbij import GroundSet, PartialBijection, power
from .convolution import AlgebraElement, convolve, involution


class ExelAlgebra:
    def __init__(self, beta: PartialBijection, window: int | None = None):
        self.beta = beta
        self.omega: GroundSet = beta.ground
        self.groupoid: Groupoid = singly_generated_groupoid(beta, window)
        self.degrees = tuple(self.groupoid.enumerated)
        self._pow: dict[int, PartialBijection] = {}

    def power(self, n: int) -> PartialBijection:
        f = self._pow.get(n)
        if f is None:
            f = power(self.beta, n)
            self._pow[n] = f
        return f

    def domain(self, n: int) -> frozenset[int]:
        return self.power(n).domain

    @property
    def truncated(self) -> bool:
        """True when some power never vanishes, so degrees were cut off."""
        top = max((abs(n) for n in self.degrees), default=0)
        return not self.power(top + 1).is_void()

    def basis(self) -> list[tuple[int, int]]:
        return [(n, w) for n in self.degrees for w in sorted(self.domain(n))]

    def element(self, coeffs) -> AlgebraElement:
        for (n, w) in coeffs:
            if w not in self.domain(n):
                raise ValueError(f"coefficient at ({n}, {w}) lies outside Dom(b^{n})")
        return AlgebraElement(coeffs)

    def product(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        """``(f_n)(g_m)`` lands in degree n+m with value
        ``f_n(w) g_m(b^n w)`` for ``w`` in ``Dom(b^n)`` and ``Dom(b^(n+m))``."""
        out: dict = {}
        for (n, w1), c1 in a.items():
            img = self.power(n).get(w1)
            for (m, w2), c2 in b.items():
                if img != w2:
                    continue
                if w1 not in self.domain(n + m):
                    continue
                key = (n + m, w1)
                out[key] = out.get(key, ZERO) + c1 * c2
        return AlgebraElement(out)

    def star(self, a: AlgebraElement) -> AlgebraElement:
        """Degree -n with value ``conj f_n(b^-n w)`` on ``Dom(b^-n)``."""
        out = {}
        for (n, w), c in a.items():
            out[(-n, self.power(n)(w))] = conj(c)
        return AlgebraElement(out)

    def to_groupoid(self, a: AlgebraElement) -> AlgebraElement:
        """Degree n becomes label -n; ``f_n`` is transported along ``b^n``."""
        out = {}
        for (n, w), c in a.items():
            out[(-n, self.power(n)(w))] = c
        return AlgebraElement(out)


def graded_product_formula(G: Groupoid, f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """Convolution on an integer-graded groupoid written out fiberwise:
    ``(fg)_{n+m}(w) = f_n(b^m w) g_m(w)``."""
    out: dict = {}
    for (n, w1), c1 in f.items():
        for (m, w2), c2 in g.items():
            if G.fiber(m).get(w2) != w1:
                continue
            key = (n + m, w2)
            out[key] = out.get(key, ZERO) + c1 * c2
    return AlgebraElement(out)


@dataclass
class ExelReport:
    omega_size: int
    beta: list
    degrees: tuple
    truncated: bool
    dim_crossed_product: int
    dim_groupoid_algebra: int
    pairs_checked: int = 0
    bijective: bool = False
    counterexample: dict | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.bijective and self.counterexample is None

    def to_json(self) -> dict:
        return {
            "omega_size": self.omega_size,
            "beta": self.beta,
            "degrees": list(self.degrees),
            "truncated": self.truncated,
            "dim_crossed_product": self.dim_crossed_product,
            "dim_groupoid_algebra": self.dim_groupoid_algebra,
            "pairs_checked": self.pairs_checked,
            "bijective": self.bijective,
            "counterexample": self.counterexample,
            "ok": self.ok,
        }


def exel_build_and_iso(omega: GroundSet, beta: PartialBijection, window: int | None = None) -> ExelReport:
    """Build both algebras and check the transport map on every basis pair.

    Products of basis elements may leave the degree window; both sides are
    computed lazily, so those products are still compared exactly.
    """
    if beta.ground.size != omega.size:
        raise ValueError("beta lives on a different space")
    X = ExelAlgebra(beta, window)
    G = X.groupoid
    B = X.basis()
    rep = ExelReport(omega.size, beta.to_json(), X.degrees, X.truncated, len(B), len(G.arrows))

    images = [X.to_groupoid(AlgebraElement.point(b)) for b in B]
    targets = set()
    for img in images:
        (arrow,) = img.support()
        targets.add(arrow)
    rep.bijective = targets == set(G.arrows) and len(targets) == len(B)
    if not rep.bijective:
        rep.counterexample = {"reason": "transport map is not a bijection on bases"}
        return rep

    twist = scalar((1, 2))
    for i, b in enumerate(B):
        a = AlgebraElement({b: twist})
        if X.to_groupoid(X.star(a)) != involution(G, X.to_groupoid(a)):
            rep.counterexample = {"reason": "star", "element": list(b)}
            return rep
        for j, c in enumerate(B):
            e1, e2 = AlgebraElement.point(b), AlgebraElement.point(c)
            lhs = X.to_groupoid(X.product(e1, e2))
            rhs = convolve(G, images[i], images[j])
            rep.pairs_checked += 1
            if lhs != rhs:
                rep.counterexample = {"reason": "product", "pair": [list(b), list(c)]}
                return rep
    return rep
