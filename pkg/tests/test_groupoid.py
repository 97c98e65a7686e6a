from __future__ import annotations

import pytest
from hypothesis import given, settings

from conftest import pbij_pairs, pbijs
from groupoidal.errors import GradingError, StructuralError
from groupoidal.groupoid import (
    Action, ample_map, build_graded_groupoid, build_groupoid, check_ample_homomorphism,
    decompose_by_fiber, gset_product, is_gset, singly_generated_groupoid, tautological_action,
    validate_action,
)
from groupoidal.groups import GroupTable
from groupoidal.isg import classify_f_tilde, generate_closure
from groupoidal.pbij import GroundSet, PartialBijection, power
from groupoidal.zoo import chain_semilattice

G2 = GroundSet(2)


def pb(pairs, ground=G2):
    return PartialBijection.from_pairs(ground, pairs)


def action_groupoid(S):
    MS = classify_f_tilde(S).structure
    A = tautological_action(S)
    return A, MS, build_groupoid(A, MS)


def test_shift_groupoid_has_four_arrows():
    S = generate_closure([pb([(0, 1)])])
    A, MS, G = action_groupoid(S)
    assert len(G.arrows) == 4
    slices = {x: len(v) for x, v in decompose_by_fiber(G).items()}
    assert sorted(slices.values()) == [1, 1, 2]
    assert slices[S.unit] == 2
    assert G.is_principal() and G.is_pair_groupoid()
    assert not check_ample_homomorphism(A, MS, G)


def test_group_groupoid():
    S = generate_closure([pb([(0, 1), (1, 0)])])
    _, _, G = action_groupoid(S)
    assert len(G.arrows) == 4
    assert G.orbits() == [frozenset({0, 1})]


def test_semilattice_groupoid_is_its_unit_space():
    E = chain_semilattice(3)
    _, _, G = action_groupoid(E)
    assert all(G.is_unit(a) for a in G.arrows)
    assert len(G.arrows) == 3


def test_ample_map_of_an_idempotent():
    S = generate_closure([pb([(0, 1)])])
    A, MS, G = action_groupoid(S)
    e = S.index_of(pb([(0, 0)]))
    assert ample_map(A, MS, e) == frozenset({(S.unit, 0)})
    assert ample_map(A, MS, S.zero) == frozenset()


def test_graded_groupoid_of_a_swap():
    S = generate_closure([pb([(0, 1), (1, 0)])])
    A = tautological_action(S)
    Z2 = GroupTable.cyclic(2)
    swap = S.index_of(pb([(0, 1), (1, 0)]))
    G = build_graded_groupoid(A, Z2, {0: S.unit, 1: swap})
    assert len(G.arrows) == 4 and not G.check_axioms()
    with pytest.raises(GradingError):
        build_graded_groupoid(A, Z2, {0: S.unit, 1: S.unit})


def test_invalid_action_is_rejected():
    S = generate_closure([pb([(0, 1)])])
    bad = Action(S, G2, [PartialBijection.identity(G2)] * len(S))
    assert not validate_action(bad).valid
    with pytest.raises(StructuralError):
        build_groupoid(bad, classify_f_tilde(S).structure)


def test_singly_generated_groupoid_of_a_shift():
    G = singly_generated_groupoid(pb([(0, 1)]))
    assert sorted(G.arrows) == [(-1, 1), (0, 0), (0, 1), (1, 0)]
    assert G.mul((1, 0), (-1, 1)) == (0, 1)
    assert G.mul((1, 0), (1, 0)) is None


def test_singly_generated_window_truncates_core():
    g = GroundSet(3)
    G = singly_generated_groupoid(PartialBijection.from_pairs(g, [(0, 1), (1, 2), (2, 0)]), window=2)
    assert {a[0] for a in G.arrows} == {-2, -1, 0, 1, 2}
    assert G.is_arrow((7, 0)) and G.r((7, 0)) == 1


@settings(max_examples=40, deadline=None)
@given(pbij_pairs(2, max_size=4))
def test_action_groupoids_satisfy_axioms(fg):
    S = generate_closure(list(fg))
    v = classify_f_tilde(S)
    if not v.is_f_tilde:
        return
    A = tautological_action(S)
    G = build_groupoid(A, v.structure)
    assert not G.check_axioms()
    assert not check_ample_homomorphism(A, v.structure, G)
    for a in S:
        U = ample_map(A, v.structure, a)
        assert is_gset(G, U)
        for b in S:
            assert gset_product(G, U, ample_map(A, v.structure, b)) == ample_map(A, v.structure, S.mult[a][b])


@settings(max_examples=60, deadline=None)
@given(pbijs(max_size=5))
def test_singly_generated_arrows_match_powers(beta):
    G = singly_generated_groupoid(beta)
    assert not G.check_axioms()
    for n, w in G.arrows:
        assert G.r((n, w)) == power(beta, n)(w)
