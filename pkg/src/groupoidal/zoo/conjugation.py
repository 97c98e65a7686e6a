"""A finite F-tilde semigroup acting on the characters of its idempotents.

Characters of a finite semilattice are principal filters.  The element
``a`` takes a character ``z`` with ``z(a* a) = 1`` to ``g -> z(a* g a)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import PreconditionError, StructuralError
from ..groupoid import Action, Groupoid, build_groupoid, validate_action
from ..isg import InverseSemigroup, MaximalStructure, classify_f_tilde
from ..pbij import GroundSet, PartialBijection
from ..star_algebra.convolution import PsiReport, psi_report


def characters(S: InverseSemigroup) -> list[frozenset[int]]:
    """Filters ``{f : e <= f}`` of the nonzero idempotents, as sets of indices of S."""
    E = [e for e in S.idempotents() if not S.is_zero(e)]
    return [frozenset(f for f in E if S.mult[e][f] == e) for e in E]


def conjugate(S: InverseSemigroup, a: int, z: frozenset[int]) -> frozenset[int] | None:
    """The image character, or None when ``z`` is off the domain."""
    if S.source_projection(a) not in z:
        return None
    s = S.star[a]
    return frozenset(g for g in S.idempotents() if S.mult[S.mult[s][g]][a] in z)


@dataclass(eq=False)
class ConjugationAction:
    action: Action
    chars: list[frozenset[int]]
    structure: MaximalStructure
    groupoid: Groupoid
    psi0_identity: bool
    psi: PsiReport
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.psi0_identity and self.psi.bijective and not self.psi.violations and not self.violations

    def to_json(self) -> dict:
        return {"characters": len(self.chars), "arrows": len(self.groupoid.arrows),
                "psi0_identity": self.psi0_identity, "psi": self.psi.to_json(),
                "violations": self.violations, "ok": self.ok}


def conjugation_action(S: InverseSemigroup) -> ConjugationAction:
    verdict = classify_f_tilde(S)
    if not verdict.is_f_tilde:
        raise PreconditionError("semigroup is not F-tilde", {"witness": verdict.witness})
    Z = characters(S)
    where = {z: i for i, z in enumerate(Z)}
    omega = GroundSet(len(Z), tuple("up(" + str(min(z, key=lambda f: len(S.elements[f].domain))) + ")"
                                    for z in Z))
    phi = []
    for a in S:
        pairs = []
        for i, z in enumerate(Z):
            t = conjugate(S, a, z)
            if t is None:
                continue
            if t not in where:
                raise StructuralError("conjugate is not a character", {"element": a, "character": i})
            pairs.append((i, where[t]))
        phi.append(PartialBijection.from_pairs(omega, pairs))
    A = Action(S, omega, phi)
    rep = validate_action(A)
    violations = list(rep.violations)
    # psi0 sends a character to the idempotents whose domain contains it
    psi0 = [frozenset(e for e in S.idempotents() if i in phi[e].domain) for i in range(len(Z))]
    ident = psi0 == Z
    G = build_groupoid(A, verdict.structure)
    return ConjugationAction(A, Z, verdict.structure, G, ident, psi_report(A, verdict.structure, G), violations)
