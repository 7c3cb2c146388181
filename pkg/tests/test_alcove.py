import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl3sw.alcove import (
    EPS1,
    EPS2,
    GraphCoord,
    TypePresentation,
    WeightPresentation,
    central_reduce,
    depth,
    digit_flip,
    equiv_class,
    from_graph,
    from_graph_component,
    from_highest_weight,
    graph_act,
    is_restricted_hw,
    restricted_depth,
    restricted_digit,
    serre_highest_weight,
    serre_weights_equal,
    to_graph,
    to_graph_component,
    zeta_of,
)
from gl3sw.errors import CompatibilityError, DepthError, LatticeError
from gl3sw.weyl import (
    ALL_PERMS,
    DELTA,
    ETA,
    IDENTITY,
    POS_ROOTS,
    UNIT,
    W_TILDE_H,
    AffElt,
    ProductElt,
    finite,
    is_upper_fin,
    p_dot,
    p_dot_unapply,
    restricted_reps,
    translation,
    vec_add,
    vec_scale,
    vec_sub,
)

rng = random.Random(20260815)


def rand_vec(span=6):
    return tuple(rng.randint(-span, span) for _ in range(3))


# --- depth ------------------------------------------------------------------


def test_depth_hand_values():
    assert depth((0, 0, 0), 5) == 0
    assert depth((2, 1, 0), 7) == 1
    assert depth((3, 2, 1), 7) == 1
    assert depth((5, 0, 0), 7) == -1
    assert depth(((0, 0, 0), (3, 2, 1)), 7) == 0


@given(
    st.tuples(*(st.integers(-12, 12) for _ in range(3))),
    st.sampled_from([7, 11, 13]),
    st.integers(0, 8),
)
def test_depth_is_the_deepness_threshold(mu, p, n):
    shifted = vec_add(mu, ETA)
    deep = all(
        n < shifted[i] - shifted[j] < p - n for i, j in POS_ROOTS
    )
    assert (depth(mu, p) >= n) == deep


# --- restricted alcoves -----------------------------------------------------


def test_restricted_digit_hand_values():
    assert restricted_digit((3, 1, 0), 7) == 0
    assert restricted_digit((5, 4, 0), 7) is None  # on the dividing wall
    assert restricted_digit((6, 3, 0), 7) == 1
    assert restricted_digit((9, 1, 0), 7) is None  # outside the simple strip


def test_restricted_depth_hand_values():
    assert restricted_depth((3, 1, 0), 7) == 1
    assert restricted_depth((6, 3, 0), 7) == 0
    assert restricted_depth((5, 4, 0), 7) == -1


def test_is_restricted_hw():
    assert is_restricted_hw((6, 3, 0), 7)
    assert is_restricted_hw((6, 0, 0), 7)
    assert not is_restricted_hw((7, 0, 0), 7)
    assert not is_restricted_hw((0, 1, 0), 7)
    assert not is_restricted_hw(((1, 0, 0), (7, 0, 0)), 7)


def frac_base_alcove_point(p):
    """A uniform-ish rational interior point of the base alcove."""
    while True:
        s1 = Fraction(rng.randint(1, 11 * p - 1), 11)
        s2 = Fraction(rng.randint(1, 11 * p - 1), 11)
        if s1 + s2 != p and s1 + s2 < 2 * p:
            break
    x3 = Fraction(rng.randint(-21, 21), 7)
    x2 = x3 + s2 - 1
    x1 = x2 + s1 - 1
    return (x1, x2, x3), s1, s2


def in_base_alcove(x, p):
    shifted = vec_add(x, ETA)
    return all(0 < shifted[i] - shifted[j] < p for i, j in POS_ROOTS)


def test_restricted_region_tiled_by_the_two_alcoves():
    """The six standard restricted classes map the base alcove onto the two
    restricted alcoves, three classes each, matched by finite-part sign;
    scalar translates do not move the image."""
    p = 11
    reps = restricted_reps()
    for _ in range(60):
        x, s1, s2 = frac_base_alcove_point(p)
        if s1 + s2 > p:
            continue  # keep x inside the base alcove
        for rep in reps:
            y = p_dot(rep, x, p)
            assert restricted_digit(y, p) == (1 if is_upper_fin(rep.perm) else 0)
            assert p_dot_unapply(rep, y, p) == x
    for _ in range(60):
        # a point anywhere in the restricted region, either digit
        y, s1, s2 = frac_base_alcove_point(p)
        dig = 0 if s1 + s2 < p else 1
        assert restricted_digit(y, p) == dig
        for rep in reps:
            u = p_dot_unapply(rep, y, p)
            hit = in_base_alcove(u, p)
            assert hit == (is_upper_fin(rep.perm) == (dig == 1))
            # scalar translates act only on the grading, not the geometry
            shifted = translation(vec_scale(rng.randint(-3, 3), UNIT)) * rep
            assert in_base_alcove(p_dot_unapply(shifted, y, p), p) == hit


def test_p_dot_unapply_roundtrip():
    for _ in range(200):
        x = AffElt(rand_vec(), ALL_PERMS[rng.randrange(6)])
        mu = rand_vec()
        p = rng.choice([7, 11, 13])
        assert p_dot_unapply(x, p_dot(x, mu, p), p) == mu
        assert p_dot(x, p_dot_unapply(x, mu, p), p) == mu


# --- graph coordinates ------------------------------------------------------


def test_central_reduce_and_coords():
    assert central_reduce((0, 0, -1)) == (1, 1, 0)
    assert EPS1 == (1, 0, 0)
    assert EPS2 == (1, 1, 0)
    assert GraphCoord((0, 0, -1), 1).eps == (1, 1, 0)
    assert GraphCoord((5, 4, 3), 0) == GraphCoord((2, 1, 0), 0)
    with pytest.raises(ValueError):
        GraphCoord((0, 0, 0), 2)
    assert digit_flip(GraphCoord((1, 0, 0), 0)) == GraphCoord((1, 0, 0), 1)


def test_graph_act_is_an_action():
    for _ in range(200):
        u = AffElt(rand_vec(), ALL_PERMS[rng.randrange(6)])
        v = AffElt(rand_vec(), ALL_PERMS[rng.randrange(6)])
        g = GraphCoord(rand_vec(), rng.randint(0, 1))
        assert graph_act(u * v, g) == graph_act(u, graph_act(v, g))
        assert graph_act(IDENTITY, g) == g
        assert graph_act(u, g).digit == g.digit
    assert graph_act(translation((1, 2, 3)), GraphCoord((0, 0, 0), 1)) == GraphCoord(
        (-2, -1, 0), 1
    )


# --- coordinate bijection, one component ------------------------------------

SUM_ETA = vec_add(EPS1, EPS2)  # (2, 1, 0)
DIFF12 = vec_sub(EPS1, EPS2)  # (0, -1, 0)
DIFF21 = vec_sub(EPS2, EPS1)


def test_from_graph_component_hand_table():
    lam = (3, 2, 0)
    t_minus = translation(vec_scale(-1, UNIT))
    t_plus = translation(UNIT)
    expected = {
        (SUM_ETA, 0): t_minus,
        (DIFF12, 0): DELTA,
        (DIFF21, 0): t_minus * DELTA**2,
        ((0, 0, 0), 0): IDENTITY,
        (EPS1, 0): t_minus * DELTA**2,
        (EPS2, 0): t_minus * DELTA,
        ((0, 0, 0), 1): t_plus * W_TILDE_H,
        (EPS1, 1): W_TILDE_H * DELTA**2,
        (EPS2, 1): W_TILDE_H * DELTA,
    }
    for (eps, digit), want_w1 in expected.items():
        w1, omega = from_graph_component(GraphCoord(eps, digit), lam)
        assert w1 == want_w1
        assert omega == vec_add(lam, central_reduce(eps))
        # the restricted part does not depend on the base weight
        w1b, _ = from_graph_component(GraphCoord(eps, digit), (0, 0, 0))
        assert w1b == w1


def test_component_roundtrip_random():
    for _ in range(400):
        g = GraphCoord(rand_vec(4), rng.randint(0, 1))
        lam = rand_vec()
        w1, omega = from_graph_component(g, lam)
        assert to_graph_component(w1, omega, lam) == g


def test_to_graph_component_validation():
    lam = (4, 2, 0)
    with pytest.raises(LatticeError):
        to_graph_component(AffElt((0, 0, 0), (1, 0, 2)), lam, lam)
    with pytest.raises(CompatibilityError):
        to_graph_component(IDENTITY, vec_add(lam, (1, 0, 0)), lam)


# --- product-level presentations ---------------------------------------------


def rand_presentation(f):
    coords = tuple(GraphCoord(rand_vec(4), rng.randint(0, 1)) for _ in range(f))
    lam = tuple(rand_vec() for _ in range(f))
    return from_graph(coords, lam), coords, lam


def scalar_shift(pres, nus):
    parts = []
    oms = []
    for x, om, c in zip(pres.w1.parts, pres.omega, nus):
        nu = vec_scale(c, UNIT)
        parts.append(translation(nu) * x)
        oms.append(vec_sub(om, nu))
    return WeightPresentation(ProductElt(tuple(parts)), tuple(oms))


def test_product_roundtrip_and_canonical():
    for f in (1, 2, 3):
        for _ in range(60):
            pres, coords, lam = rand_presentation(f)
            assert to_graph(pres, lam) == coords
            assert equiv_class(pres) == pres
            assert all(om[2] == 0 for om in pres.omega)
            nus = tuple(rng.randint(-4, 4) for _ in range(f))
            moved = scalar_shift(pres, nus)
            assert moved.same_class(pres)
            assert pres.same_class(moved)
            assert equiv_class(moved) == pres
            assert to_graph(moved, lam) == coords
            assert moved.zeta() == pres.zeta()


def test_zeta_matches_base_grading():
    pres, _, lam = rand_presentation(3)
    assert pres.zeta() == tuple(sum(lj) - 3 for lj in lam)
    assert zeta_of(pres) == pres.zeta()


def test_from_graph_with_explicit_grading():
    lam = ((4, 2, 0), (3, 3, 1))
    coords = (GraphCoord(EPS1, 1), GraphCoord((0, 0, 0), 0))
    base = tuple(sum(lj) - 3 for lj in lam)
    pres = from_graph(coords, lam)
    assert pres.zeta() == base
    shifted = from_graph(coords, lam, zeta=(base[0] + 3, base[1] - 6))
    assert shifted.zeta() == (base[0] + 3, base[1] - 6)
    with pytest.raises(CompatibilityError):
        from_graph(coords, lam, zeta=(base[0] + 1, base[1]))
    with pytest.raises(DepthError):
        from_graph((GraphCoord((9, 0, 0), 0),), ((4, 2, 0),), p=7)


def test_type_presentation():
    tau = TypePresentation(
        ProductElt((finite((1, 0, 2)),)), ((5, 3, 0),), 11
    )
    assert tau.f == 1
    assert tau.zeta() == (11,)
    assert zeta_of(tau) == (11,)
    assert tau.depth() == 2
    assert tau.w_tilde().parts[0] == translation((7, 4, 0)) * finite((1, 0, 2))
    with pytest.raises(DepthError):
        TypePresentation(ProductElt((IDENTITY,)), ((11, 0, 0),), 11)
    with pytest.raises(ValueError):
        TypePresentation(ProductElt((translation((1, 0, 0)),)), ((5, 3, 0),), 11)


def test_from_highest_weight_roundtrip():
    p = 13
    for f in (1, 2, 3):
        count = 0
        while count < 40:
            coords = tuple(
                GraphCoord(
                    (rng.randint(0, 2), rng.randint(0, 1), 0), rng.randint(0, 1)
                )
                for _ in range(f)
            )
            lam = tuple(
                (9 + rng.randint(-1, 1), 5 + rng.randint(-1, 1), rng.randint(0, 1))
                for _ in range(f)
            )
            pres = from_graph(coords, lam)
            if pres.depth(p) < 0:
                continue
            count += 1
            hw = pres.highest_weight(p)
            back = from_highest_weight(hw, p, pres.zeta())
            assert back.same_class(pres)
            assert back.highest_weight(p) == hw
            assert serre_highest_weight(back, p) == hw
    with pytest.raises(CompatibilityError):
        from_highest_weight(((0, 0, 0),), 13, (99,))


def test_highest_weight_well_defined_modulo_shifts():
    p = 13
    for f in (1, 2, 3):
        for _ in range(40):
            pres, _, _ = rand_presentation(f)
            nus = tuple(rng.randint(-3, 3) for _ in range(f))
            moved = scalar_shift(pres, nus)
            assert serre_weights_equal(
                pres.highest_weight(p), moved.highest_weight(p), p
            )
            bumped = tuple(
                vec_add(v, (1, 0, 0)) for v in moved.highest_weight(p)
            )
            assert not serre_weights_equal(pres.highest_weight(p), bumped, p)


def test_serre_weights_equal_direction():
    p = 7
    lam = ((3, 1, 0), (2, 2, 1), (4, 0, 0))
    # componentwise scalar difference (-1, p, 0) comes from the shift at
    # component 0; the transposed pattern (p, -1, 0) does not.
    good = tuple(
        vec_add(v, vec_scale(e, UNIT)) for v, e in zip(lam, (-1, p, 0))
    )
    bad = tuple(
        vec_add(v, vec_scale(e, UNIT)) for v, e in zip(lam, (p, -1, 0))
    )
    assert serre_weights_equal(lam, good, p)
    assert not serre_weights_equal(lam, bad, p)
    assert serre_weights_equal((3, 1, 0), vec_add((3, 1, 0), vec_scale(p - 1, UNIT)), p)
    assert not serre_weights_equal((3, 1, 0), vec_add((3, 1, 0), UNIT), p)
    assert not serre_weights_equal((3, 1, 0), (3, 2, 0), p)


# --- landing in the restricted box -------------------------------------------

ALL_NINE = (
    (SUM_ETA, 0),
    (DIFF12, 0),
    (DIFF21, 0),
    ((0, 0, 0), 1),
    (EPS1, 1),
    (EPS2, 1),
    ((0, 0, 0), 0),
    (EPS1, 0),
    (EPS2, 0),
)


@settings(deadline=None, max_examples=40)
@given(
    st.sampled_from([11, 13, 17]),
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-2, 2)),
)
def test_highest_weights_land_restricted(p, jitter):
    a, b, c = jitter
    mu = (2 * (p // 3) + a - b, p // 3 + b, c)
    lam = vec_add(mu, UNIT)
    if depth(vec_sub(lam, ETA), p) < 2:
        return
    for eps, digit in ALL_NINE:
        pres = from_graph((GraphCoord(eps, digit),), (lam,))
        hw = pres.highest_weight(p)[0]
        assert is_restricted_hw(hw, p)
        assert restricted_digit(hw, p) == digit
        assert restricted_depth(hw, p) == pres.depth(p)
