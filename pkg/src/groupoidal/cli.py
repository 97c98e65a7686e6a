"""Command-line driver: run JSON job files or the built-in demos.

Exit codes: 0 every check passed, 1 some check failed, 2 undecided at the
configured window, 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .errors import GroupoidalError, InputError, PreconditionError, UndecidedAtWindow
from .groupoid import build_groupoid, singly_generated_groupoid, tautological_action
from .groups import GroupTable
from .isg import (
    check_partial_group_laws, classify_f_tilde, generate_closure, obstruction_pattern,
    singly_generated_prediction,
)
from .pbij import GroundSet, PartialBijection, pbij_from_json
from .star_algebra import audit_regular_representation, exel_build_and_iso, kumjian_rho, psi_report
from .toeplitz import (
    ConePair, Window, character_comparison, obvious_action_groupoid, omega_patterns,
    qlo_presentation, quasi_lattice_check, wiener_hopf_groupoid,
)
from .zoo import (
    CKMatrix, ck_free_audit, ck_relations, ck_semigroup, clifford, conjugation_action,
    free_localization_audit, glimm_localization, odometer, reilly_fragment,
)

KINDS = ("closure", "groupoid", "algebra", "toeplitz", "odometer", "glimm", "cuntz-krieger",
         "conjugation", "clifford", "reilly")

_pairs = {"type": "array", "items": {"type": "array", "items": {"type": "integer"},
                                     "minItems": 2, "maxItems": 2}}
_ground = {"oneOf": [{"type": "integer", "minimum": 0},
                     {"type": "object", "required": ["size"],
                      "properties": {"size": {"type": "integer", "minimum": 0},
                                     "labels": {"type": "array", "items": {"type": "string"}}}}]}
_generators = {"type": "object", "required": ["ground", "generators"],
               "properties": {"ground": _ground, "generators": {"type": "array", "items": _pairs}}}
_radices = {"type": "object", "required": ["radices", "depth"],
            "properties": {"radices": {"type": "array", "items": {"type": "integer", "minimum": 2},
                                       "minItems": 1},
                           "depth": {"type": "integer", "minimum": 1}}}
_group = {"type": "object", "properties": {"cyclic": {"type": "integer", "minimum": 1},
                                           "table": {"type": "array"}}}

PARAMETER_SCHEMAS = {
    "closure": _generators,
    "groupoid": _generators,
    "conjugation": _generators,
    "algebra": {"type": "object", "required": ["ground", "beta"],
                "properties": {"ground": _ground, "beta": _pairs}},
    "toeplitz": {"type": "object", "required": ["constraints"],
                 "properties": {
                     "constraints": {"type": "array", "minItems": 1,
                                     "items": {"type": "array", "items": {"type": "integer"}}},
                     "window": {"type": "integer", "minimum": 1},
                     "word_length": {"type": "integer", "minimum": 0},
                     "checks": {"type": "array", "items": {"enum": [
                         "patterns", "wiener-hopf", "characters", "quasi-lattice", "presentation",
                         "obvious-action"]}},
                     "truncation": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                     "translations": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                 }},
    "odometer": _radices,
    "glimm": _radices,
    "cuntz-krieger": {"type": "object", "required": ["matrix"],
                      "properties": {"matrix": {"type": "array", "items": {
                          "type": "array", "items": {"enum": [0, 1]}}},
                          "word_length": {"type": "integer", "minimum": 0}}},
    "clifford": {"type": "object", "required": ["group", "chain"],
                 "properties": {"group": _group, "chain": {"type": "array", "minItems": 1}}},
    "reilly": {"type": "object", "required": ["group", "sigma", "bound"],
               "properties": {"group": _group, "sigma": {"type": "array", "items": {"type": "integer"}},
                              "bound": {"type": "integer", "minimum": 0}}},
}

JOB_SCHEMA = {
    "type": "object",
    "required": ["kind", "parameters"],
    "properties": {
        "kind": {"enum": list(KINDS)},
        "parameters": {"type": "object"},
        "window": {"type": "integer", "minimum": 1},
        "cap": {"type": "integer", "minimum": 1},
        "word_length": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer"},
        "description": {"type": "string"},
    },
    "additionalProperties": False,
}


@dataclass
class JobSpec:
    kind: str
    parameters: dict
    window: int | None = None
    cap: int | None = None
    word_length: int | None = None
    seed: int = 0
    description: str = ""

    @classmethod
    def from_json(cls, data) -> "JobSpec":
        _validate(data, JOB_SCHEMA, "$")
        _validate(data["parameters"], PARAMETER_SCHEMAS[data["kind"]], "$.parameters")
        return cls(data["kind"], data["parameters"], data.get("window"), data.get("cap"),
                   data.get("word_length"), data.get("seed", 0), data.get("description", ""))


def _validate(data, schema, root: str):
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as e:
        path = root + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path)
        raise InputError(f"{path}: {e.message}", {"schema_path": list(e.absolute_schema_path),
                                                  "path": path}) from None


@dataclass
class Report:
    title: str
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def check(self, name: str, value, witness=None):
        self.checks[name] = bool(value)
        if not value and witness is not None:
            self.witnesses[name] = witness

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"title": self.title, "ok": self.ok, "checks": self.checks,
                "details": self.details, "witnesses": self.witnesses}

    def text(self) -> str:
        lines = [self.title]
        for k, v in self.details.items():
            if isinstance(v, (int, str, float, bool)) or v is None:
                lines.append(f"  {k}: {v}")
        for k, v in self.checks.items():
            lines.append(f"  [{'PASS' if v else 'FAIL'}] {k}")
            if not v and k in self.witnesses:
                lines.append(f"         witness: {json.dumps(self.witnesses[k], sort_keys=True, default=str)}")
        lines.append("all checks passed" if self.ok else "some checks FAILED")
        return "\n".join(lines)


# ------------------------------------------------------------------ runners


def _ground(spec) -> GroundSet:
    if isinstance(spec, int):
        return GroundSet(spec)
    return GroundSet.from_json(spec)


def _maps(params) -> tuple[GroundSet, list[PartialBijection]]:
    g = _ground(params["ground"])
    try:
        return g, [pbij_from_json(g, m) for m in params["generators"]]
    except (ValueError, KeyError) as e:
        raise InputError(f"bad generator: {e}") from None


def _group(spec) -> GroupTable:
    if "cyclic" in spec:
        return GroupTable.cyclic(spec["cyclic"])
    if "table" in spec:
        return GroupTable(spec["table"])
    raise InputError("group needs 'cyclic' or 'table'", {"path": "$.parameters.group"})


def run_closure(job: JobSpec) -> Report:
    g, gens = _maps(job.parameters)
    S = generate_closure(gens, cap=job.cap, ground=g)
    rep = Report(f"closure of {len(gens)} partial bijection(s) on {g.size} points")
    rep.details["size"] = len(S)
    rep.details["idempotents"] = len(S.idempotents())
    rep.check("inverse semigroup axioms", not S.check_axioms(), S.check_axioms()[:3])
    v = classify_f_tilde(S)
    rep.details["f_tilde"] = v.is_f_tilde
    if v.is_f_tilde:
        rep.details["maximal_elements"] = len(v.structure.M)
        bad = check_partial_group_laws(v.structure)
        rep.check("partial group laws on the maximal elements", not bad, bad[:3])
    else:
        rep.details["two_maximal_majorants_of"] = S.elements[v.witness].to_json()
    if len(gens) == 1:
        beta = gens[0]
        pred = singly_generated_prediction(beta)
        rep.details["periodic_part_obstruction"] = obstruction_pattern(beta)
        rep.check("single-generator criterion agrees", pred == v.is_f_tilde,
                  {"predicted": pred, "computed": v.is_f_tilde})
    return rep


def run_groupoid(job: JobSpec) -> Report:
    g, gens = _maps(job.parameters)
    S = generate_closure(gens, cap=job.cap, ground=g)
    rep = Report(f"groupoid of the closure of {len(gens)} map(s) on {g.size} points")
    v = classify_f_tilde(S)
    rep.check("closure is F-tilde", v.is_f_tilde,
              None if v.is_f_tilde else {"element": S.elements[v.witness].to_json()})
    if not v.is_f_tilde:
        return rep
    A = tautological_action(S)
    G = build_groupoid(A, v.structure)
    rep.details.update(semigroup=len(S), arrows=len(G.arrows), units=len(G.units()),
                       principal=G.is_principal(), orbits=len(G.orbits()))
    rep.details["groupoid"] = G.to_json()
    bad = G.check_axioms()
    rep.check("groupoid axioms", not bad, bad[:3])
    pr = psi_report(A, v.structure, G)
    rep.details["psi"] = pr.to_json()
    rep.check("semigroup algebra maps onto the groupoid algebra", pr.surjective and not pr.violations,
              pr.violations[:3])
    return rep


def run_algebra(job: JobSpec) -> Report:
    g = _ground(job.parameters["ground"])
    beta = pbij_from_json(g, job.parameters["beta"])
    ex = exel_build_and_iso(g, beta, job.window)
    rep = Report(f"crossed product by one partial bijection on {g.size} points")
    rep.details.update(dim_crossed_product=ex.dim_crossed_product,
                       dim_groupoid_algebra=ex.dim_groupoid_algebra, truncated=ex.truncated,
                       pairs_checked=ex.pairs_checked)
    rep.check("transport map is a *-isomorphism on every basis pair", ex.ok, ex.counterexample)
    G = singly_generated_groupoid(beta, job.window)
    audit = audit_regular_representation(G, samples=8, seed=job.seed)
    rep.check("C*-identity in the regular representation", audit.ok, {"gap": audit.worst_identity_gap})
    return rep


def run_odometer(job: JobSpec) -> Report:
    p = job.parameters
    beta = odometer(p["radices"], p["depth"])
    n = beta.ground.size
    rep = Report(f"odometer on {n} words")
    G = singly_generated_groupoid(beta)
    rep.details.update(points=n, arrows=len(G.arrows))
    rep.check("groupoid is the pair groupoid", G.is_pair_groupoid())
    rep.check("algebra dimension is points squared", len(G.arrows) == n * n)
    audit = audit_regular_representation(G, samples=6, seed=job.seed)
    rep.check("C*-identity in the regular representation", audit.ok, {"gap": audit.worst_identity_gap})
    if n <= 8:
        ex = exel_build_and_iso(beta.ground, beta)
        rep.check("crossed product matches the groupoid algebra", ex.ok, ex.counterexample)
    return rep


def run_glimm(job: JobSpec) -> Report:
    p = job.parameters
    gl = glimm_localization(p["radices"], p["depth"])
    rep = Report(f"prefix-replacement localization on {gl.space.size} words")
    info = gl.to_json()
    rep.details.update(size=info["size"], maximal=info["maximal"], arrows=info["arrows"])
    rep.details["intersection_with_odometer"] = info["intersection_with_odometer"]
    for k, v in gl.checks.items():
        rep.check(k.replace("_", " "), v)
    if gl.structure is not None and len(gl.semigroup) <= 400:
        kr = kumjian_rho(tautological_action(gl.semigroup), gl.structure, seed=job.seed)
        rep.details["kernel"] = kr.to_json()
        rep.check("kernel of rho is the coherent-family ideal", kr.ok,
                  {"dim_kernel": kr.dim_kernel, "dim_ideal": kr.dim_ideal})
    fa = free_localization_audit(gl.semigroup)
    rep.check("free, and fixed points only for idempotents", fa.free and fa.ok, fa.witness)
    return rep


def run_ck(job: JobSpec) -> Report:
    try:
        A = CKMatrix(job.parameters["matrix"])
    except PreconditionError as e:
        raise InputError(str(e), e.witness) from None
    L = job.word_length if job.word_length is not None else job.parameters.get("word_length", 3)
    rep = Report(f"prefix maps for the {A.n}x{A.n} matrix {A.to_json()}, words up to length {L}")
    rel = ck_relations(A)
    rep.details["relations"] = rel.to_json()
    for row in rel.table:
        rep.details[f"letter {row['letter']}"] = f"domain {row['domain']}, range {row['range']}"
    rep.check("ranges of the generators are disjoint", rel.ranges_disjoint, rel.witness)
    rep.check("each domain is the union of the allowed ranges", rel.domains_match, rel.witness)
    frag = ck_semigroup(A, L)
    rep.details.update(fragment=len(frag.elements), maximal=len(frag.maximal))
    rep.details["marker_table"] = frag.table
    for k, v in frag.checks.items():
        rep.check(k.replace("_", " "), v, frag.witnesses or None)
    rep.details["freeness"] = ck_free_audit(frag)
    rep.details["free"] = rep.details["freeness"]["free"]
    return rep


def run_conjugation(job: JobSpec) -> Report:
    g, gens = _maps(job.parameters)
    S = generate_closure(gens, cap=job.cap, ground=g)
    return _conjugation_report(S, f"conjugation on the characters of a {len(S)}-element closure")


def _conjugation_report(S, title) -> Report:
    v = classify_f_tilde(S)
    rep = Report(title)
    rep.check("semigroup is F-tilde", v.is_f_tilde)
    if not v.is_f_tilde:
        return rep
    ca = conjugation_action(S)
    rep.details.update(characters=len(ca.chars), arrows=len(ca.groupoid.arrows),
                       rank=ca.psi.rank, dim_semigroup_algebra=ca.psi.dim_source)
    rep.check("conjugation is an action", not ca.violations, ca.violations[:3])
    rep.check("psi0 is the identity on characters", ca.psi0_identity)
    rep.check("psi is a linear isomorphism", ca.psi.bijective and not ca.psi.violations,
              ca.psi.to_json())
    return rep


def run_clifford(job: JobSpec) -> Report:
    p = job.parameters
    G = _group(p["group"])
    c = clifford(G, p["chain"])
    rep = Report(f"Clifford semigroup over a group of order {G.order}")
    rep.details.update(size=len(c.semigroup), maximal=len(c.maximal))
    rep.details["maximal_elements"] = sorted(([str(x), str(n)] for x, n in c.maximal))
    rep.check("maximal elements match the level-difference formula", c.ok,
              {"predicted": sorted(map(str, c.predicted_maximal)), "found": sorted(map(str, c.maximal))})
    return rep


def run_reilly(job: JobSpec) -> Report:
    p = job.parameters
    G = _group(p["group"])
    r = reilly_fragment(G, p["sigma"], p["bound"])
    rep = Report(f"Reilly fragment with indices up to {r.bound}")
    rep.details.update(size=len(r.elements), overflow_pairs=len(r.overflow),
                       maximal=len(r.maximal()))
    bad = r.check()
    rep.check("laws inside the bound and maximal elements have min(m, n) = 0", not bad, bad[:3])
    return rep


def run_toeplitz(job: JobSpec) -> Report:
    p = job.parameters
    rows = p["constraints"]
    try:
        cone = ConePair(len(rows[0]), tuple(tuple(r) for r in rows))
    except ValueError as e:
        raise InputError(str(e), {"path": "$.parameters.constraints"}) from None
    k = job.window or p.get("window", 2)
    W = Window.symmetric(k, cone.d)
    L = job.word_length if job.word_length is not None else p.get("word_length", 2)
    checks = p.get("checks", ["patterns", "wiener-hopf"])
    rep = Report(f"translation semigroup of the cone {rows} on the window [-{k},{k}]^{cone.d}")
    if "patterns" in checks:
        pats = omega_patterns(cone, W)
        rep.details["omega_patterns"] = len(pats.patterns)
        rep.details["patterns"] = pats.to_json()
        rep.check("pattern count stabilized while scanning", pats.stable, pats.stabilization)
    if "wiener-hopf" in checks:
        wh = wiener_hopf_groupoid(cone, W)
        rep.details["wiener_hopf_arrows"] = len(wh.groupoid.arrows)
        rep.check("groupoid axioms on the window", not wh.violations, wh.violations[:3])
        rep.check("psi0 separates the Omega points", wh.psi0_injective)
    if "characters" in checks:
        cr = character_comparison(cone, L, W)
        rep.details["characters"] = cr.to_json()
        rep.details["unmatched_b_sets"] = len(cr.unmatched)
        if cr.undecided:
            raise UndecidedAtWindow("some B-sets could not be decided at this window",
                                    [b.to_json() for b in cr.undecided[:3]])
        rep.details["psi0_surjective_on_window"] = cr.all_matched
        if cr.unmatched:
            rep.details["unmatched_character_pattern_found"] = True
            rep.details["witness_b_set"] = json.dumps(cr.unmatched[0].to_json(), sort_keys=True)
    if "quasi-lattice" in checks:
        ql = quasi_lattice_check(cone, W)
        rep.details["quasi_lattice"] = ql.to_json()
        rep.details["is_quasi_lattice"] = ql.counterexample is None
    if "presentation" in checks:
        pp = qlo_presentation(cone, pair_radius=1, word_length=min(L, 3) or 1)
        rep.details["presentation"] = pp.to_json()
        rep.check("pair presentation agrees with translation arithmetic", pp.ok, pp.violations[:3])
    if "obvious-action" in checks:
        trunc = p.get("truncation") or [[i] + [0] * (cone.d - 1) for i in range(4)]
        n = len(trunc)
        trans = p.get("translations") or [[x] + [0] * (cone.d - 1) for x in range(-n + 1, n)]
        oa = obvious_action_groupoid(cone, trunc, trans)
        rep.details["obvious_action"] = oa.to_json()
        rep.check("restricted translations give a full matrix algebra",
                  oa.pair_groupoid and oa.matrix_units_ok and oa.algebra_dim == n * n)
    return rep


RUNNERS = {
    "closure": run_closure,
    "groupoid": run_groupoid,
    "algebra": run_algebra,
    "toeplitz": run_toeplitz,
    "odometer": run_odometer,
    "glimm": run_glimm,
    "cuntz-krieger": run_ck,
    "conjugation": run_conjugation,
    "clifford": run_clifford,
    "reilly": run_reilly,
}


def execute(job: JobSpec) -> Report:
    return RUNNERS[job.kind](job)


# -------------------------------------------------------------------- demos


DEMOS: dict[str, tuple[str, dict]] = {
    "single-generator": ("which single partial bijections generate an F-tilde closure",
                         {"kind": "closure", "parameters": {"ground": 3, "generators": [[[0, 1], [1, 2]]]}}),
    "clifford": ("Clifford semigroup of Z/4 over the chain Z/4 > {0,2} > {0}",
                 {"kind": "clifford", "parameters": {"group": {"cyclic": 4}, "chain": [[0, 1, 2, 3], [0, 2], [0]]}}),
    "reilly": ("bicyclic-type Reilly fragment over Z/3 twisted by inversion",
               {"kind": "reilly", "parameters": {"group": {"cyclic": 3}, "sigma": [0, 2, 1], "bound": 2}}),
    "wiener-hopf": ("translations of the natural numbers inside the integers",
                    {"kind": "toeplitz", "parameters": {"constraints": [[1]], "window": 2, "word_length": 3,
                                                        "checks": ["patterns", "wiener-hopf", "presentation",
                                                                   "obvious-action"]}}),
    "crossed-product": ("crossed product by the odometer against its groupoid algebra",
                        {"kind": "odometer", "parameters": {"radices": [2, 2], "depth": 2}}),
    "glimm": ("prefix replacements against the odometer",
              {"kind": "glimm", "parameters": {"radices": [2, 2], "depth": 2}}),
    "cuntz-krieger": ("golden-mean shift: relations and maximal elements",
                      {"kind": "cuntz-krieger", "parameters": {"matrix": [[1, 1], [1, 0]], "word_length": 4}}),
    "quasi-lattice": ("N^2 inside Z^2: every B-set pattern is an Omega pattern",
                      {"kind": "toeplitz", "parameters": {"constraints": [[1, 0], [0, 1]], "window": 4,
                                                          "word_length": 2,
                                                          "checks": ["quasi-lattice", "characters"]}}),
    "parity-cone": ("the cone 0 <= t2 <= 2 t1: a B-set pattern Omega does not have",
                    {"kind": "toeplitz", "parameters": {"constraints": [[0, 1], [2, -1]], "window": 4,
                                                        "word_length": 2,
                                                        "checks": ["quasi-lattice", "characters"]}}),
    "conjugation": ("a finite semigroup acting on its own characters",
                    {"kind": "conjugation", "parameters": {"ground": 3, "generators": [[[0, 1], [1, 2]]]}}),
}


def _emit(rep: Report, json_path: str | None):
    print(rep.text())
    if json_path:
        Path(json_path).write_text(json.dumps(rep.to_json(), sort_keys=True, indent=2, default=str) + "\n")


def _load(path: str) -> JobSpec:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e.msg} at line {e.lineno}") from None
    return JobSpec.from_json(data)


def _apply_flags(job: JobSpec, args) -> JobSpec:
    for name in ("window", "cap", "word_length", "seed"):
        v = getattr(args, name, None)
        if v is not None:
            setattr(job, name, v)
    return job


def _run_job(job: JobSpec, json_path: str | None, header: str = "") -> int:
    if header:
        print(header)
    rep = execute(job)
    _emit(rep, json_path)
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="groupoidal", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a JSON job file")
    r.add_argument("spec")
    d = sub.add_parser("demo", help="run a built-in demo")
    d.add_argument("name", nargs="?")
    d.add_argument("--list", action="store_true")
    for p in (r, d):
        p.add_argument("--json", metavar="PATH", help="also write the report as JSON")
        p.add_argument("--window", type=int)
        p.add_argument("--cap", type=int)
        p.add_argument("--word-length", dest="word_length", type=int)
        p.add_argument("--seed", type=int)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run_job(_apply_flags(_load(args.spec), args), args.json)
        if args.list or args.name not in DEMOS:
            if args.name and not args.list:
                print(f"unknown demo {args.name!r}", file=sys.stderr)
            for name, (blurb, _) in DEMOS.items():
                print(f"  {name:18s} {blurb}")
            return 0 if args.list else 3
        blurb, data = DEMOS[args.name]
        return _run_job(_apply_flags(JobSpec.from_json(data), args), args.json, f"demo {args.name}: {blurb}")
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        if e.witness:
            print(json.dumps(e.witness, sort_keys=True, default=str), file=sys.stderr)
        return e.exit_code
    except UndecidedAtWindow as e:
        print(f"undecided at this window: {e}", file=sys.stderr)
        print(json.dumps(e.witness, sort_keys=True, default=str), file=sys.stderr)
        return e.exit_code
    except PreconditionError as e:
        print(f"input error: {e}", file=sys.stderr)
        return InputError.exit_code
    except GroupoidalError as e:
        print(f"failure: {e}", file=sys.stderr)
        print(json.dumps(e.witness, sort_keys=True, default=str), file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
