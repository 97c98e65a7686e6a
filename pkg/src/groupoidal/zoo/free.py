"""Freeness of a localization on a finite discrete space."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..groupoid import Action, build_groupoid, tautological_action
from ..isg import InverseSemigroup, classify_f_tilde
from ..pbij import compose
from ..star_algebra.kumjian import localization_failures


@dataclass
class FreeAudit:
    localization: bool
    free: bool
    f_tilde: bool
    fixed_points_idempotent: bool | None = None
    principal: bool | None = None
    witness: dict | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """The consequences hold whenever their hypotheses do."""
        if not (self.localization and self.free and self.f_tilde):
            return True
        return bool(self.fixed_points_idempotent and self.principal)

    def to_json(self) -> dict:
        return {"localization": self.localization, "free": self.free, "f_tilde": self.f_tilde,
                "fixed_points_idempotent": self.fixed_points_idempotent,
                "principal": self.principal, "witness": self.witness, "ok": self.ok}


def free_localization_audit(S: InverseSemigroup | Action) -> FreeAudit:
    """Free means: whenever ``a`` fixes ``w``, some idempotent domain around ``w``
    is fixed pointwise by ``a``.  For a free F-tilde localization every element
    with a fixed point must then be idempotent and the groupoid principal."""
    A = S if isinstance(S, Action) else tautological_action(S)
    T = A.semigroup
    fails = localization_failures(A)
    idem = [A.phi[e] for e in T.idempotents()]
    free = True
    witness = None
    for a in T:
        f = A.phi[a]
        for w, t in f.pairs:
            if w != t:
                continue
            near = [e for e in idem if w in e.domain and e.domain <= f.domain and compose(f, e) == e]
            if not near:
                free = False
                witness = witness or {"element": a, "point": w}
    verdict = classify_f_tilde(T)
    rep = FreeAudit(not fails, free, verdict.is_f_tilde, witness=witness, notes=fails)
    if not verdict.is_f_tilde:
        return rep
    bad = [a for a in T if any(w == t for w, t in A.phi[a].pairs) and not T.is_idempotent(a)]
    rep.fixed_points_idempotent = not bad
    if bad and rep.witness is None:
        rep.witness = {"non_idempotent_with_fixed_point": bad[0]}
    rep.principal = build_groupoid(A, verdict.structure).is_principal()
    return rep
