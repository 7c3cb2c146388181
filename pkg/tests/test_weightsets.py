import itertools
import random

import pytest

from gl3sw.alcove import (
    EPS1,
    EPS2,
    GraphCoord,
    TypePresentation,
    central_reduce,
    depth,
    digit_flip,
    equiv_class,
    from_graph,
    from_highest_weight,
    restricted_digit,
    to_graph,
)
from gl3sw.errors import CompatibilityError, DepthError, LatticeError
from gl3sw.weightsets import (
    constituent_weight,
    covers,
    default_base,
    herzig_outer_oracle,
    jh_outer,
    jh_set,
    sigma0,
    sigma_out,
    w_question,
)
from gl3sw.weyl import (
    ALL_PERMS,
    ETA,
    UNIT,
    ProductElt,
    finite,
    perm_act,
    restricted_reps,
    vec_add,
    vec_scale,
    vec_sub,
)

rng = random.Random(414243)

THETA = (1, 0, -1)


def rand_mu(p, f, min_depth=2):
    while True:
        mu = tuple(
            tuple(sorted((rng.randrange(p), rng.randrange(p), rng.randrange(p)), reverse=True))
            for _ in range(f)
        )
        if depth(tuple(vec_sub(m, ETA) for m in mu), p) >= min_depth:
            return mu


def rand_type(p, f, min_depth=2):
    s = ProductElt(tuple(finite(ALL_PERMS[rng.randrange(6)]) for _ in range(f)))
    return TypePresentation(s, rand_mu(p, f, min_depth), p)


def full_constituents(tau):
    """All 6^f character-formula constituent highest weights."""
    return frozenset(
        constituent_weight(tau, ProductElt(choice))
        for choice in itertools.product(restricted_reps(), repeat=tau.f)
    )


def mu_zeta(tau):
    return tuple(sum(m) for m in tau.mu)


# --- templates ----------------------------------------------------------------


def test_templates():
    s0, sout = sigma0(), sigma_out()
    assert len(s0) == 9
    assert len(sout) == 6
    assert sout.issubset(s0)
    assert GraphCoord((2, 1, 0), 0) in sout
    assert GraphCoord((0, 0, 0), 0) in s0
    assert GraphCoord((0, 0, 0), 0) not in sout
    assert {g.digit for g in s0} == {0, 1}
    assert sorted(g.eps for g in s0 if g.digit == 1) == sorted(
        g.eps for g in s0 if g not in sout
    )


# --- cardinalities, gradings, containments -------------------------------------


@pytest.mark.parametrize("p,f,n", [(17, 1, 30), (13, 2, 12)])
def test_jh_cardinalities(p, f, n):
    for _ in range(n):
        tau = rand_type(p, f)
        full = jh_set(tau)
        outer = jh_outer(tau)
        assert len(full) == 9**f
        assert len(outer) == 6**f
        assert outer <= full
        for pres in full:
            assert pres.zeta() == mu_zeta(tau)
            assert equiv_class(pres) == pres
            assert pres.depth(p) >= 0
        cand = w_question(tau)
        assert len(cand) == 9**f
        for pres in cand:
            assert pres.zeta() == mu_zeta(tau)


# --- the character-formula cross-check -----------------------------------------


@pytest.mark.parametrize("p,f,n", [(17, 1, 40), (13, 2, 10)])
def test_outer_weights_match_character_formula(p, f, n):
    for _ in range(n):
        tau = rand_type(p, f)
        zeta = mu_zeta(tau)
        expected = frozenset(
            equiv_class(from_highest_weight(hw, p, zeta))
            for hw in full_constituents(tau)
        )
        assert expected == jh_outer(tau)


def test_corner_oracle_subset():
    for p, f in ((17, 1), (13, 2)):
        for _ in range(10):
            tau = rand_type(p, f)
            corners = herzig_outer_oracle(tau)
            assert len(corners) == 2**f
            assert corners <= full_constituents(tau)
            outer = jh_outer(tau)
            for hw in corners:
                assert equiv_class(from_highest_weight(hw, p, mu_zeta(tau))) in outer


def test_corner_oracle_shallow_weights_stay_near_restricted():
    p = 17
    # exactly 1-deep input: constituents may touch alcove walls but stay in
    # the closed simple strip
    tau = TypePresentation(ProductElt((finite((1, 2, 0)),)), ((4, 2, 0),), p)
    assert tau.depth() >= 0
    for hw_tuple in full_constituents(tau):
        hw = hw_tuple[0]
        shifted = vec_add(hw, ETA)
        assert 0 <= shifted[0] - shifted[1] <= p
        assert 0 <= shifted[1] - shifted[2] <= p


def test_inner_weights_are_wall_reflections():
    p = 17
    for _ in range(15):
        tau = rand_type(p, 1)
        zeta = mu_zeta(tau)
        lam = default_base(tau.mu)
        full = jh_set(tau)
        outer = jh_outer(tau)
        uppers = 0
        for hw_tuple in full_constituents(tau):
            hw = hw_tuple[0]
            if restricted_digit(hw, p) != 1:
                continue
            uppers += 1
            pres_up = equiv_class(from_highest_weight(hw_tuple, p, zeta))
            g_up = to_graph(pres_up, lam)[0]
            assert g_up.digit == 1
            # reflect across the dividing wall (dot action)
            c = (hw[0] + 2) - (hw[2]) - p
            low = vec_sub(hw, vec_scale(c, THETA))
            assert restricted_digit(low, p) == 0
            pres_dn = equiv_class(from_highest_weight((low,), p, zeta))
            assert to_graph(pres_dn, lam)[0] == digit_flip(g_up)
            assert pres_dn in full
            assert pres_dn not in outer
        assert uppers == 3


# --- candidate sets -------------------------------------------------------------


def test_w_question_digit_structure():
    for g in sigma0():
        assert digit_flip(digit_flip(g)) == g
    p = 17
    tau = rand_type(p, 1)
    lam = default_base(tau.mu)
    cand = w_question(tau)
    assert len(cand) == 9
    digits = sorted(to_graph(pres, lam)[0].digit for pres in cand)
    assert digits == [0, 0, 0, 1, 1, 1, 1, 1, 1]


def test_depth_and_lattice_gates():
    p = 17
    shallow = TypePresentation(ProductElt((finite((0, 1, 2)),)), ((4, 2, 0),), p)
    assert depth(vec_sub((4, 2, 0), ETA), p) == 1
    with pytest.raises(DepthError):
        jh_set(shallow)
    assert len(jh_set(shallow, exact=False)) == 9
    with pytest.raises(DepthError):
        w_question(shallow)
    deep = rand_type(p, 1)
    with pytest.raises(LatticeError):
        jh_set(deep, lam=deep.mu)
    mu = (14, 7, 0)
    tau = TypePresentation(ProductElt((finite((0, 1, 2)),)), (mu,), p)
    with pytest.raises(DepthError):
        jh_set(tau, lam=(vec_add(mu, (3, 0, 0)),))
    zero_deep = TypePresentation(ProductElt((finite((0, 1, 2)),)), ((2, 1, 0),), p)
    with pytest.raises(DepthError):
        herzig_outer_oracle(zero_deep)


# --- covering -------------------------------------------------------------------


def pres_of(eps, digit, lam=(20, 10, 0), zeta=None):
    return from_graph((GraphCoord(eps, digit),), (lam,), zeta=zeta)


def test_covers_basics():
    x = pres_of(EPS1, 1)
    assert covers(x, x)
    assert covers(x, pres_of(EPS1, 0))
    assert not covers(pres_of(EPS1, 0), x)
    assert not covers(x, pres_of(EPS2, 0))
    assert not covers(x, pres_of(EPS2, 1))
    assert covers(pres_of((0, 0, 0), 0), pres_of((0, 0, 0), 0))
    with pytest.raises(CompatibilityError):
        covers(x, pres_of(EPS1, 0, zeta=(30,)))


def formal_jh_coords(s_perm, mclass):
    return frozenset(
        GraphCoord(vec_add(mclass, perm_act(s_perm, g.eps)), g.digit)
        for g in sigma0()
    )


def brute_cover_coords(g0):
    """Intersection of every formal decomposition set containing g0."""
    out = None
    for s_perm in ALL_PERMS:
        for g in sigma0():
            if g.digit != g0.digit:
                continue
            mclass = central_reduce(
                vec_sub(g0.eps, perm_act(s_perm, g.eps))
            )
            jh = formal_jh_coords(s_perm, mclass)
            assert g0 in jh
            out = jh if out is None else out & jh
    return out


def test_brute_force_covering_oracle():
    lam = (40, 20, 0)
    for _ in range(200):
        g0 = GraphCoord(
            (rng.randint(-4, 4), rng.randint(-4, 4), rng.randint(-4, 4)),
            rng.randint(0, 1),
        )
        brute = brute_cover_coords(g0)
        expected = frozenset(
            GraphCoord(g0.eps, d) for d in range(g0.digit + 1)
        )
        assert brute == expected
        a = from_graph((g0,), (lam,))
        for h in brute | {
            GraphCoord(vec_add(g0.eps, off), d)
            for off in ((0, 0, 0), (1, 0, 0), (0, 1, 0), (-1, 0, 0))
            for d in (0, 1)
        }:
            b = from_graph((h,), (lam,))
            assert covers(a, b) == (h in expected)


ROOTS = ((1, -1, 0), (0, 1, -1), (1, 0, -1))


def pairing(v, root):
    lo = root.index(-1)
    hi = root.index(1)
    return v[hi] - v[lo]


def down_closure(hw, p):
    """All weights reachable from hw by downward dot reflections across
    p-integral walls, within a bounded pairing window."""
    seen = {hw}
    frontier = [hw]
    while frontier:
        lam = frontier.pop()
        shifted = vec_add(lam, ETA)
        for root in ROOTS:
            pair = pairing(shifted, root)
            k = 0
            while k * p < pair:
                c = pair - k * p
                low = vec_sub(lam, vec_scale(c, root))
                if min(pairing(vec_add(low, ETA), r) for r in ROOTS) >= -2 * p:
                    if low not in seen:
                        seen.add(low)
                        frontier.append(low)
                k += 1
    return seen


def test_covering_matches_reflection_order():
    p = 17
    for _ in range(6):
        tau = rand_type(p, 1)
        full = sorted(jh_set(tau), key=lambda x: x.omega)
        for a in full:
            closure = down_closure(a.highest_weight(p)[0], p)
            for b in full:
                hw = b.highest_weight(p)[0]
                reachable = any(
                    vec_add(hw, vec_scale((p - 1) * c, UNIT)) in closure
                    for c in range(-3, 4)
                )
                assert covers(a, b) == reachable
