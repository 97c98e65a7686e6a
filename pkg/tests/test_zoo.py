from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoidal.errors import PreconditionError, StructuralError
from groupoidal.groupoid import singly_generated_groupoid
from groupoidal.groups import GroupTable
from groupoidal.isg import classify_f_tilde, generate_closure
from groupoidal.pbij import GroundSet, PartialBijection, compose, power
from groupoidal.zoo import (
    INF, CKMatrix, CylinderSet, PrefixMap, WordSpace, characters, chain_semilattice, ck_free_audit,
    ck_relations, ck_semigroup, clifford, conjugate, conjugation_action, embed_abstract,
    free_localization_audit, gamma, glimm_generators, glimm_localization, is_marker,
    marker_conditions, match_principal_groupoids, odometer, odometer_successor, radices_at,
    reduce_word, reilly_fragment, word_map,
)
from groupoidal.zoo.cuntz_krieger import compose as ck_compose, star as ck_star

GOLDEN = CKMatrix([[1, 1], [1, 0]])
FULL = CKMatrix([[1, 1], [1, 1]])
Z4_CHAIN = [[0, 1, 2, 3], [0, 2], [0]]


# ----------------------------------------------------------------- Clifford


def test_clifford_on_a_chain_of_cyclic_subgroups():
    cl = clifford(GroupTable.cyclic(4), Z4_CHAIN)
    assert len(cl.semigroup) == 7 and cl.ok
    assert cl.maximal == cl.predicted_maximal
    assert cl.maximal == {(1, 0), (3, 0), (2, 1), (0, INF)}
    assert not cl.semigroup.check_axioms()


def test_clifford_of_a_group_is_the_group():
    cl = clifford(GroupTable.cyclic(3), [[0, 1, 2]])
    assert len(cl.semigroup) == 3 and cl.maximal == {(0, INF), (1, INF), (2, INF)}


def test_clifford_rejects_bad_chains():
    Z4 = GroupTable.cyclic(4)
    with pytest.raises(PreconditionError):
        clifford(Z4, [[0, 1, 2, 3], [0, 1]])
    with pytest.raises(PreconditionError):
        clifford(Z4, [[0, 2], [0]])
    with pytest.raises(PreconditionError):
        clifford(Z4, [[0, 1, 2, 3], [0], [0, 2]])


def test_embedding_rejects_a_wrong_table():
    # a two-element group whose star is the identity map: a*a is not the unit
    with pytest.raises(StructuralError):
        embed_abstract([0, 1], lambda a, b: (a + b) % 2, lambda a: a if a == 0 else 0)


# ------------------------------------------------------------------- Reilly


def test_reilly_products():
    R = reilly_fragment(GroupTable.trivial(), [0], 2)
    assert R.product((1, 0, 0), (0, 0, 1)) == (1, 0, 1)
    assert R.product((0, 0, 1), (1, 0, 0)) == (0, 0, 0)
    assert R.product((2, 0, 1), (2, 0, 0)) is None
    assert not R.check()
    Z2 = reilly_fragment(GroupTable.cyclic(2), [0, 1], 1)
    assert Z2.product((0, 1, 1), (1, 1, 0)) == (0, 0, 0)


@pytest.mark.parametrize("order,sigma,bound", [(1, [0], 3), (2, [0, 1], 2), (3, [0, 2, 1], 2)])
def test_reilly_maximal_elements(order, sigma, bound):
    R = reilly_fragment(GroupTable.cyclic(order), sigma, bound)
    assert not R.check()
    assert sorted(R.maximal()) == sorted(R.predicted_maximal())


def test_reilly_needs_an_automorphism():
    with pytest.raises(PreconditionError):
        reilly_fragment(GroupTable.cyclic(3), [0, 1, 1], 2)


# ------------------------------------------------------- odometer and Glimm


def test_word_space_indexing():
    X = WordSpace((3, 2))
    assert X.size == 6 and X.word(5) == (2, 1) and X.index((2, 1)) == 5
    assert [X.index(w) for w in X.words()] == list(range(6))
    assert radices_at([2, 3], 5) == (2, 3, 2, 3, 2)
    with pytest.raises(PreconditionError):
        radices_at([1], 2)


def test_odometer_adds_one_with_carry():
    succ = odometer_successor([2], 3)
    X = WordSpace((2, 2, 2))
    assert X.word(succ(X.index((1, 1, 0)))) == (0, 0, 1)
    assert succ.get(X.index((1, 1, 1))) is None
    assert compose(odometer([2], 3), succ) == PartialBijection.identity(succ.ground, range(7))


def test_prefix_replacement():
    X = WordSpace((2, 2))
    g = gamma(X, (1,), (0,))
    assert sorted((X.word(s), X.word(t)) for s, t in g.pairs) == [((0, 0), (1, 0)), ((0, 1), (1, 1))]
    assert len(glimm_generators(X)) == 4 + 16


@pytest.mark.parametrize("radices,depth", [((2, 2), 1), ((2, 2), 2), ((2, 3), 2), ((3, 2), 2)])
def test_glimm_localization_audits(radices, depth):
    gl = glimm_localization(radices, depth)
    assert gl.ok, gl.checks
    assert len(gl.groupoid.arrows) == gl.space.size ** 2
    assert {"eps", "theta"} <= set(gl.intersection)


def test_odometer_groupoid_is_principal_and_transitive():
    H = singly_generated_groupoid(odometer([2, 3], 2))
    assert H.is_pair_groupoid()


def test_groupoid_match_detects_a_difference():
    a = singly_generated_groupoid(odometer([2], 2))
    g = GroundSet(4)
    b = singly_generated_groupoid(PartialBijection.from_pairs(g, [(0, 1)]))
    assert not match_principal_groupoids(a, b).ok


# --------------------------------------------------------- Cuntz-Krieger


def test_matrix_preconditions():
    with pytest.raises(PreconditionError):
        CKMatrix([[0, 1], [1, 0]])
    with pytest.raises(PreconditionError):
        CKMatrix([[1, 0], [0, 1]])
    with pytest.raises(PreconditionError):
        CKMatrix([[1, 2], [1, 0]])


def test_cylinder_normal_form():
    whole = CylinderSet.whole(GOLDEN)
    assert CylinderSet.of(GOLDEN, [(1,), (2,)]) == whole
    # after 1 both letters may follow, so [11] u [12] is [1]
    assert CylinderSet.of(GOLDEN, [(1, 1), (1, 2)]) == CylinderSet.of(GOLDEN, [(1,)])
    assert (CylinderSet.of(GOLDEN, [(1,)]) & CylinderSet.of(GOLDEN, [(2,)])).is_empty()
    assert CylinderSet.of(GOLDEN, [(2, 1)]).issubset(CylinderSet.of(GOLDEN, [(2,)]))


def test_generators_satisfy_the_relations():
    for A in (GOLDEN, FULL, CKMatrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])):
        assert ck_relations(A).ok


def test_marker_conditions():
    assert is_marker(GOLDEN, (1, -2))
    assert not marker_conditions(GOLDEN, (1, -1))["reduced"]
    assert not marker_conditions(GOLDEN, (2, 2))["admissible"]
    assert not marker_conditions(GOLDEN, (2, -2, 1))["shape"]
    # 2 and 2 share no follower other than 1, 1 follows both: common follower exists
    assert marker_conditions(GOLDEN, (2, -2))["common_follower"]
    assert reduce_word((1, 2, -2, -1, 1)) == (1,)


@pytest.mark.parametrize("A", [GOLDEN, FULL])
@pytest.mark.parametrize("L", [1, 2, 3])
def test_fragment_checks(A, L):
    frag = ck_semigroup(A, L)
    assert frag.ok, frag.checks


def test_golden_mean_fragment_size():
    frag = ck_semigroup(GOLDEN, 4)
    assert len(frag.elements) == 76 and len(frag.maximal) == 59


def test_ck_localization_is_not_free():
    audit = ck_free_audit(ck_semigroup(GOLDEN, 2))
    assert audit["free"] is False


def _apply_letters(A: CKMatrix, word, seq):
    """Prepend or strip letters right to left, directly on a sequence."""
    for a in reversed(word):
        if seq is None or not seq:
            return None
        if a > 0:
            seq = (a,) + seq if A.allowed(a, seq[0]) else None
        else:
            seq = seq[1:] if seq[0] == -a else None
    return seq


def _random_sequence(A: CKMatrix, rng, n=14):
    s = [rng.choice(list(A.letters))]
    while len(s) < n:
        s.append(rng.choice(sorted(A.followers(s[-1]))))
    return tuple(s)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.sampled_from([1, 2, -1, -2]), max_size=5), st.integers(0, 10_000),
       st.sampled_from(["golden", "full"]))
def test_canonical_maps_agree_with_sequence_action(word, seed, which):
    A = GOLDEN if which == "golden" else FULL
    f = word_map(A, word)
    rng = random.Random(seed)
    for _ in range(20):
        seq = _random_sequence(A, rng)
        want = _apply_letters(A, word, seq)
        got = f.apply(seq)
        assert got == want


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([1, 2, -1, -2]), max_size=4),
       st.lists(st.sampled_from([1, 2, -1, -2]), max_size=4))
def test_prefix_maps_form_an_inverse_semigroup(u, v):
    f, g = word_map(GOLDEN, u), word_map(GOLDEN, v)
    assert ck_compose(ck_compose(f, ck_star(f)), f) == f
    assert ck_star(ck_compose(f, g)) == ck_compose(ck_star(g), ck_star(f))
    assert word_map(GOLDEN, u + v) == ck_compose(f, g)


def test_prefix_maps_reject_incompatible_pieces():
    with pytest.raises(StructuralError):
        PrefixMap.of(GOLDEN, [((1,), (2,))])  # followers of 1 and 2 differ


# ------------------------------------------------------- freeness and Z


def test_finite_discrete_localization_audit():
    S = generate_closure([PartialBijection.from_pairs(GroundSet(2), [(0, 1)])])
    audit = free_localization_audit(S)
    assert audit.localization and audit.free and audit.f_tilde and audit.ok
    assert audit.fixed_points_idempotent and audit.principal


def test_non_localization_is_reported():
    S = generate_closure([PartialBijection.from_pairs(GroundSet(2), [(0, 1), (1, 0)])])
    audit = free_localization_audit(S)
    assert not audit.localization and audit.notes


def test_conjugation_action_on_the_shift():
    S = generate_closure([PartialBijection.from_pairs(GroundSet(2), [(0, 1)])])
    Z = characters(S)
    assert len(Z) == 3
    s = S.index_of(PartialBijection.from_pairs(GroundSet(2), [(0, 1)]))
    e0 = S.index_of(PartialBijection.identity(GroundSet(2), [0]))
    e1 = S.index_of(PartialBijection.identity(GroundSet(2), [1]))
    up = {z: min(z, key=lambda f: len(S.elements[f].domain)) for z in Z}
    z0 = next(z for z in Z if up[z] == e0)
    assert up[conjugate(S, s, z0)] == e1
    ca = conjugation_action(S)
    assert ca.ok and len(ca.groupoid.arrows) == 5 and ca.psi.rank == 5


def test_conjugation_needs_f_tilde():
    g = GroundSet(4)
    S = generate_closure([PartialBijection.from_pairs(g, [(0, 1), (1, 0), (2, 3)])])
    with pytest.raises(PreconditionError):
        conjugation_action(S)


def test_conjugation_on_clifford_and_chains():
    ca = conjugation_action(clifford(GroupTable.cyclic(4), Z4_CHAIN).semigroup)
    assert ca.ok and len(ca.chars) == 3 and len(ca.groupoid.arrows) == 7 and ca.psi.rank == 7
    assert conjugation_action(chain_semilattice(3)).ok
