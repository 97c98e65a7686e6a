"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

from __future__ import annotations

import random
import time

import pytest

from conftest import ACCEPTANCE_LINES
from groupoidal.groupoid import singly_generated_groupoid, tautological_action
from groupoidal.groups import GroupTable
from groupoidal.isg import (
    check_partial_group_laws, classify_f_tilde, generate_closure, obstruction_pattern,
    singly_generated_prediction,
)
from groupoidal.pbij import GroundSet, PartialBijection, all_partial_bijections, random_partial_bijection
from groupoidal.star_algebra.convolution import audit_regular_representation, check_convolution_laws
from groupoidal.star_algebra.exel import exel_build_and_iso
from groupoidal.star_algebra.kumjian import kumjian_rho
from groupoidal.toeplitz import (
    ConePair, Window, character_comparison, obvious_action_groupoid, omega_patterns,
    qlo_presentation, wiener_hopf_groupoid,
)
from groupoidal.zoo import (
    CKMatrix, ck_relations, ck_semigroup, clifford, conjugation_action, glimm_localization,
    match_principal_groupoids, odometer,
)


def report(name: str, ok: bool, detail: str = ""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, f"{name}: {detail}"


def single_generator_corpus(seed: int = 2024, samples: int = 500):
    """All maps on 1..4 points, then random maps on 5 points."""
    for n in range(1, 5):
        yield from all_partial_bijections(GroundSet(n))
    rng = random.Random(seed)
    g5 = GroundSet(5)
    for _ in range(samples):
        yield random_partial_bijection(g5, rng)


@pytest.fixture(scope="module")
def single_generator_verdicts():
    out = []
    start = time.perf_counter()
    for beta in single_generator_corpus():
        out.append((beta, classify_f_tilde(generate_closure([beta]))))
    return out, time.perf_counter() - start


def test_single_generator_criterion_matches_closure(single_generator_verdicts):
    verdicts, elapsed = single_generator_verdicts
    wrong = [b.to_json() for b, v in verdicts if v.is_f_tilde != singly_generated_prediction(b)]
    # the coarse pattern is recorded for comparison only
    coarse = sum(1 for b, v in verdicts if v.is_f_tilde == obstruction_pattern(b))
    report("single generator: closure verdict equals reach/period predictor",
           not wrong and elapsed <= 60,
           f"{len(verdicts)} maps, {elapsed:.1f}s, mismatches {wrong[:3]}, coarse-pattern disagreements {coarse}")


def test_partial_group_laws_on_every_f_tilde_closure(single_generator_verdicts):
    verdicts, _ = single_generator_verdicts
    bad = []
    count = 0
    for beta, v in verdicts:
        if v.is_f_tilde:
            count += 1
            laws = check_partial_group_laws(v.structure)
            if laws:
                bad.append((beta.to_json(), laws[0]))
    report("partial group laws on maximal elements", not bad and count > 0, f"{count} structures, {bad[:2]}")


def test_crossed_product_matches_groupoid_algebra():
    start = time.perf_counter()
    failures = []
    count = 0
    maps = []
    for n in range(1, 5):
        maps.extend(all_partial_bijections(GroundSet(n)))
    rng = random.Random(7)
    maps.extend(random_partial_bijection(GroundSet(5), rng) for _ in range(300))
    for beta in maps:
        rep = exel_build_and_iso(beta.ground, beta)
        count += 1
        if not rep.ok:
            failures.append(rep.to_json())
    elapsed = time.perf_counter() - start
    report("crossed product by one partial bijection is its groupoid algebra",
           not failures and elapsed <= 120, f"{count} maps, {elapsed:.1f}s, {failures[:1]}")


def _kumjian_case(S):
    v = classify_f_tilde(S)
    assert v.is_f_tilde
    return kumjian_rho(tautological_action(S), v.structure)


def test_kernel_of_rho_is_the_coherent_ideal():
    g = GroundSet(2)
    cases = {"{0->1}": _kumjian_case(generate_closure([PartialBijection.from_pairs(g, [(0, 1)])]))}
    for radices in [(2, 2), (2, 3)]:
        for depth in (1, 2, 3):
            gl = glimm_localization(radices, depth, compare=False)
            cases[f"glimm {radices} depth {depth}"] = kumjian_rho(tautological_action(gl.semigroup), gl.structure)
    bad = {k: r.to_json() for k, r in cases.items() if not (r.kernel_equals_ideal and r.ok)}
    report("kernel of rho equals the coherent-family ideal", not bad,
           f"{len(cases)} localizations, failures {list(bad)}")


def test_glimm_groupoid_is_the_odometer_groupoid():
    start = time.perf_counter()
    bad = []
    for radices in [(2, 2), (3, 2)]:
        for depth in (1, 2, 3):
            gl = glimm_localization(radices, depth)
            H = singly_generated_groupoid(odometer(radices, depth))
            m = match_principal_groupoids(gl.groupoid, H)
            size = gl.space.size
            audit = audit_regular_representation(H, samples=4, seed=depth)
            if not (gl.ok and m.ok and len(H.arrows) == size * size and len(gl.groupoid.arrows) == size * size
                    and audit.worst_identity_gap <= 1e-8 and audit.ok):
                bad.append((radices, depth, gl.checks, m.to_json(), audit.worst_identity_gap))
    elapsed = time.perf_counter() - start
    report("prefix-replacement groupoid equals the odometer groupoid", not bad and elapsed <= 60,
           f"{elapsed:.1f}s, {bad[:1]}")


def test_cuntz_krieger_relations_and_marker_words():
    bad = []
    for entries in ([[1, 1], [1, 0]], [[1, 1], [1, 1]]):
        A = CKMatrix(entries)
        rel = ck_relations(A)
        if not rel.ok:
            bad.append((entries, "relations", rel.to_json()))
        for L in range(1, 5):
            frag = ck_semigroup(A, L)
            if not frag.ok:
                bad.append((entries, L, {k: v for k, v in frag.checks.items() if not v}))
    report("Cuntz-Krieger relations and marker-word maxima", not bad, f"{bad[:2]}")


def test_wiener_hopf_for_naturals_in_integers():
    cone = ConePair(1, ((1,),))
    counts = {}
    for k in range(1, 6):
        counts[k] = len(omega_patterns(cone, Window.symmetric(k, 1)).patterns)
    W = Window.symmetric(3, 1)
    wh = wiener_hopf_groupoid(cone, W)
    axioms = wh.groupoid.check_axioms() + check_convolution_laws(wh.groupoid)
    pres = qlo_presentation(cone, pair_radius=1, word_length=3)
    ok = (all(c == k + 1 for k, c in counts.items()) and not axioms and not wh.violations
          and wh.psi0_injective and pres.ok)
    report("naturals in integers: k+1 patterns, groupoid axioms, psi0, pair presentation", ok,
           f"counts {counts}, axioms {axioms[:1]}, presentation {pres.to_json()}")


def test_parity_cone_has_an_unmatched_pattern():
    start = time.perf_counter()
    W = Window.symmetric(4, 2)
    parity = character_comparison(ConePair(2, ((0, 1), (2, -1))), 2, W)
    orthant = character_comparison(ConePair.orthant(2), 2, W)
    elapsed = time.perf_counter() - start
    ok = bool(parity.unmatched) and orthant.all_matched and elapsed <= 120
    report("parity cone misses a B-set pattern, the orthant matches all", ok,
           f"unmatched {len(parity.unmatched)}, orthant undecided {len(orthant.undecided)}, {elapsed:.1f}s")


def test_conjugation_action_on_a_battery():
    battery = []
    for n in (2, 3):
        for beta in all_partial_bijections(GroundSet(n)):
            S = generate_closure([beta])
            if classify_f_tilde(S).is_f_tilde and len(S) > 2:
                battery.append((beta.to_json(), S))
    battery.append(("clifford Z4", clifford(GroupTable.cyclic(4), [[0, 1, 2, 3], [0, 2], [0]]).semigroup))
    bad = []
    for name, S in battery:
        ca = conjugation_action(S)
        if not (ca.psi0_identity and ca.psi.bijective and ca.ok):
            bad.append(name)
    report("conjugation action: psi0 identity and psi full rank", len(battery) >= 10 and not bad,
           f"{len(battery)} semigroups, failures {bad[:3]}")


def test_obvious_action_on_four_points():
    oa = obvious_action_groupoid(ConePair(1, ((1,),)), [(0,), (1,), (2,), (3,)],
                                 [(x,) for x in range(-3, 4)])
    ok = oa.pair_groupoid and oa.algebra_dim == 16 and oa.matrix_units_ok
    report("translations of four naturals: pair groupoid, 4x4 matrix algebra", ok,
           f"arrows {oa.algebra_dim}")
