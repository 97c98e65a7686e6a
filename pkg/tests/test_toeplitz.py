from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoidal.errors import WindowTooSmall
from groupoidal.toeplitz import (
    ConePair, Window, character_comparison, nonvoid_witness, obvious_action_groupoid,
    omega_patterns, qlo_presentation, quasi_lattice_check, te_beta, te_equal, te_identity, te_leq,
    te_mul, te_star, te_word, te_zero, unique_majorant, wiener_hopf_groupoid,
)

N = ConePair(1, ((1,),))
N2 = ConePair.orthant(2)
PARITY = ConePair(2, ((0, 1), (2, -1)))


def domain_on(a, lo=-6, hi=6):
    return {t for t in range(lo, hi + 1) if a.in_domain((t,))}


def test_generators_of_the_naturals():
    assert domain_on(te_beta(N, (1,))) == set(range(0, 7))
    assert domain_on(te_beta(N, (-1,))) == set(range(1, 7))
    assert te_beta(N, (1,)).apply((2,)) == (3,)
    assert not te_beta(PARITY, (1, 1)).is_zero


def test_products_compose_translations():
    b1, bm = te_beta(N, (1,)), te_beta(N, (-1,))
    p = te_mul(b1, bm)  # bm first
    assert p.x == (0,) and domain_on(p) == set(range(1, 7))
    assert te_equal(te_mul(bm, b1), te_identity(N))
    assert te_mul(b1, te_zero(N)).is_zero
    assert unique_majorant(p) == (0,)
    assert unique_majorant(te_word(N, [(2,), (-5,), (1,)])) == (-2,)


def test_equality_and_order():
    a = te_beta(N2, (0, 0))
    b = te_mul(te_beta(N2, (-1, 0)), te_beta(N2, (1, 0)))
    assert te_equal(a, a) and te_equal(te_zero(N2), te_zero(N2))
    c = te_mul(te_beta(N2, (1, 0)), te_beta(N2, (-1, 0)))
    assert te_equal(a, b) and not te_equal(a, c)
    assert te_leq(c, a) and not te_leq(a, c)


def test_nonvoid_witnesses():
    assert nonvoid_witness(N, [(5,), (-3,)]).point == (3,)
    assert nonvoid_witness(N, []).point == (0,)
    assert nonvoid_witness(N2, [(-1, 0)]).point == (1, 0)


def test_patterns_of_the_naturals():
    pats = omega_patterns(N, Window.symmetric(2, 1))
    assert [sorted(p) for p in pats.patterns] == [[(-2,), (-1,), (0,)], [(-2,), (-1,), (0,), (1,)],
                                                   [(-2,), (-1,), (0,), (1,), (2,)]]
    assert pats.stable
    assert len(omega_patterns(N, Window.symmetric(0, 1)).patterns) == 1
    with pytest.raises(WindowTooSmall):
        omega_patterns(N, Window.symmetric(3, 1), scan_radius=1)


def test_patterns_of_the_orthant():
    # each axis contributes the patterns of the naturals
    assert len(omega_patterns(N2, Window.symmetric(1, 2)).patterns) == 4
    assert len(omega_patterns(N2, Window.symmetric(2, 2)).patterns) == 9


def test_wiener_hopf_groupoid_of_the_naturals():
    W = Window.symmetric(2, 1)
    wh = wiener_hopf_groupoid(N, W, [te_beta(N, (1,)), te_beta(N, (-1,))])
    G = wh.groupoid
    assert not G.check_axioms() and not wh.violations and wh.psi0_injective
    assert len(G.arrows) == 9
    assert {a for a in G.arrows if G.is_unit(a)} == set(G.units())


def test_quasi_lattice_verdicts():
    assert quasi_lattice_check(N, Window.symmetric(2, 1)).quasi_lattice
    assert quasi_lattice_check(N2, Window.symmetric(2, 2)).quasi_lattice
    rep = quasi_lattice_check(PARITY, Window.symmetric(2, 2))
    assert not rep.quasi_lattice and rep.counterexample is not None


def test_pair_presentation_of_the_naturals():
    rep = qlo_presentation(N, pair_radius=1, word_length=2)
    assert rep.ok and rep.words_checked > 0


def test_character_comparison_quasi_lattice_case():
    rep = character_comparison(N, 3, Window.symmetric(3, 1))
    assert rep.all_matched and rep.psi0_injective


def test_obvious_action():
    oa = obvious_action_groupoid(N, [(t,) for t in range(4)], [(x,) for x in range(-3, 4)])
    assert oa.pair_groupoid and oa.algebra_dim == 16 and oa.matrix_units_ok
    one = obvious_action_groupoid(N, [(0,)], [(1,)])
    assert len(one.groupoid.arrows) == 1
    few = obvious_action_groupoid(N, [(t,) for t in range(4)], [(2,), (-2,)])
    assert not few.pair_groupoid and len(few.orbits) == 2


gen = st.sampled_from([(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 2)])


@settings(max_examples=60, deadline=None)
@given(st.lists(gen, max_size=4), st.lists(gen, max_size=4))
def test_te_arithmetic_is_an_inverse_semigroup(xs, ys):
    cone, R = N2, 24
    a, b = te_word(cone, xs, R), te_word(cone, ys, R)

    def mul(u, v):
        return te_mul(u, v, R)

    def inv(u):
        return te_star(u, R)

    assert te_equal(mul(mul(a, inv(a)), a), a, R)
    assert te_equal(inv(inv(a)), a, R)
    assert te_equal(inv(mul(a, b)), mul(inv(b), inv(a)), R)
    ab = mul(a, b)
    if not ab.is_zero:
        assert unique_majorant(ab, R) == tuple(u + v for u, v in zip(unique_majorant(a, R), unique_majorant(b, R)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-3, 3), max_size=4), st.integers(-4, 8))
def test_word_domain_matches_pointwise_translation(xs, t):
    a = te_word(N, [(x,) for x in xs], radius=16)
    # apply right-most factor first, staying inside the naturals
    u, ok = t, t >= 0
    for x in reversed(xs):
        u += x
        ok = ok and u >= 0
    assert a.in_domain((t,)) == ok


def test_word_domains_on_the_parity_cone():
    words = list(itertools.product([(1, 0), (1, 2), (-1, 0), (-1, -2)], repeat=2))
    for w in words:
        a = te_word(PARITY, list(w))
        for t in PARITY.points(3):
            u, ok = t, True
            for x in reversed(w):
                u = (u[0] + x[0], u[1] + x[1])
                ok = ok and PARITY.contains(u)
            assert a.in_domain(t) == ok
