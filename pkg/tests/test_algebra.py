"""Polynomial engine and fibre-table verification tests.

Engine correctness is anchored to independent oracles: a brute-force
monomial LCM oracle for intersections, S-polynomial closure for basis
validity, and (when available) sympy's Groebner implementation for
reduced-basis agreement.  Fibre-row expectations (component counts,
closure verdicts, identity verdicts) were computed by the engine after
it passed those oracles, cross-checked at independent sample points,
and frozen here.
"""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl3sw.alcove import GraphCoord
from gl3sw.algebra import (
    LEMMA_COUNT,
    IdealHandle,
    Poly,
    PolyRing,
    StructureConstants,
    component_ideal,
    component_labels,
    fibre_row,
    fibre_rows,
    groebner,
    ideal_equal,
    ideal_intersect,
    ideal_intersect_all,
    ideal_member,
    ideal_sum,
    is_groebner_basis,
    lemma_identities,
    reduce,
    table_ring,
    verify_components,
    verify_lemma,
)
from gl3sw.errors import UnknownRow, UnlistedComponent

SC13 = StructureConstants(9, 4, 0, 13)
SC17 = StructureConstants(12, 6, 0, 17)

# ---------------------------------------------------------------------------
# polynomial arithmetic and term order
# ---------------------------------------------------------------------------


def _ring(names=("x", "y", "z"), p=13):
    return PolyRing(names, p)


def test_poly_str_and_arithmetic():
    R = _ring()
    x, y, z = (R.var(v) for v in R.variables)
    f = (x + y) * (x - y)
    assert f == x**2 - y**2
    assert str(x * y**2 + 1) == "x*y^2 + 1"
    assert (x - x).is_zero
    assert (f * R.zero()).is_zero
    assert x**0 == R.one()


def test_grevlex_order_degree_two():
    # hand-ordered: x^2 > xy > y^2 > xz > yz > z^2
    R = _ring()
    x, y, z = (R.var(v) for v in R.variables)
    monos = [x**2, x * y, y**2, x * z, y * z, z**2]
    keys = [R.order_key(m.lm) for m in monos]
    assert keys == sorted(keys, reverse=True)


@settings(deadline=None, max_examples=40)
@given(st.data())
def test_poly_distributivity(data):
    R = _ring(p=11)
    vs = [R.var(v) for v in R.variables]

    def rand_poly():
        f = R.zero()
        for _ in range(data.draw(st.integers(1, 3))):
            m = R.const(data.draw(st.integers(1, 10)))
            for v in vs:
                m = m * v ** data.draw(st.integers(0, 2))
            f = f + m
        return f

    f, g, h = rand_poly(), rand_poly(), rand_poly()
    assert (f + g) * h == f * h + g * h


# ---------------------------------------------------------------------------
# normal forms, membership, ideal operations
# ---------------------------------------------------------------------------


def test_member_of_own_ideal():
    R = _ring()
    x, y, _ = (R.var(v) for v in R.variables)
    g = x * y - 1
    assert ideal_member(g, IdealHandle(R, (g,)))


def test_reduce_zero_is_zero():
    R = _ring()
    I = IdealHandle(R, (R.var("x") + R.var("y"),))
    assert reduce(R.zero(), I).is_zero


def test_characteristic_collapse():
    # c11*c22 + p*c12s*c21s == c11*c22 once coefficients live mod p
    R = PolyRing(("c11", "c22", "c12s", "c21s"), 13)
    g = R.var("c11") * R.var("c22") + R.var("c12s") * R.var("c21s") * 13
    assert ideal_member(R.var("c11") * R.var("c22"), IdealHandle(R, (g,)))


def test_textbook_memberships():
    R = _ring()
    x, y, z = (R.var(v) for v in R.variables)
    I = IdealHandle(R, (x * y - 1, y * z - 1))
    assert ideal_member(x - z, I)
    J = IdealHandle(R, (x**2 + y, x * y))
    assert ideal_member(y**2, J)
    assert not ideal_member(x, J)


def test_ideal_algebra_inclusions():
    R = _ring()
    x, y, z = (R.var(v) for v in R.variables)
    I = IdealHandle(R, (x * y - z, y**2))
    J = IdealHandle(R, (x + y,))
    assert ideal_equal(ideal_intersect(I, I), I)
    for g in I.generators:
        assert ideal_member(g, ideal_sum(I, J))
    for g in ideal_intersect(I, J).gb:
        assert ideal_member(g, I)
        assert ideal_member(g, J)


def test_coordinate_intersection():
    R = PolyRing(("x", "y"), 13)
    x, y = R.var("x"), R.var("y")
    got = ideal_intersect(IdealHandle(R, (x,)), IdealHandle(R, (y,)))
    assert ideal_equal(got, IdealHandle(R, (x * y,)))


def test_monomial_intersection_against_lcm_oracle():
    rng = random.Random(91)
    R = _ring()

    def momial(exps):
        m = R.one()
        for v, e in zip(R.variables, exps):
            m = m * R.var(v) ** e
        return m

    for _ in range(50):
        A = [tuple(rng.randint(0, 3) for _ in range(3)) for _ in range(rng.randint(1, 3))]
        B = [tuple(rng.randint(0, 3) for _ in range(3)) for _ in range(rng.randint(1, 3))]
        got = ideal_intersect(
            IdealHandle(R, tuple(momial(e) for e in A)),
            IdealHandle(R, tuple(momial(e) for e in B)),
        )
        lcms = [tuple(max(a[i], b[i]) for i in range(3)) for a in A for b in B]
        want = IdealHandle(R, tuple(momial(e) for e in lcms))
        assert ideal_equal(got, want)


def test_buchberger_closure_random():
    rng = random.Random(7)
    for p in (11, 13, 17):
        R = PolyRing(("x", "y", "z", "w"), p)
        vs = [R.var(v) for v in R.variables]
        for _ in range(5):
            gens = []
            for _ in range(rng.randint(2, 4)):
                f = R.zero()
                for _ in range(rng.randint(1, 4)):
                    m = R.const(rng.randint(1, p - 1))
                    m = m * vs[rng.randrange(4)] ** rng.randint(0, 2)
                    m = m * vs[rng.randrange(4)] ** rng.randint(0, 1)
                    f = f + m
                gens.append(f)
            H = IdealHandle(R, tuple(gens))
            assert is_groebner_basis(groebner(H), R)


def test_reduced_basis_matches_sympy():
    sympy = pytest.importorskip("sympy")
    from sympy import GF
    from sympy import groebner as sympy_groebner

    rng = random.Random(3)
    names = ("x", "y", "z", "w")
    for p in (11, 13):
        R = PolyRing(names, p)
        syms = sympy.symbols(names)
        vs = [R.var(v) for v in names]
        for _ in range(3):
            gens, sgens = [], []
            for _ in range(rng.randint(2, 3)):
                f, sf = R.zero(), sympy.Integer(0)
                for _ in range(rng.randint(2, 4)):
                    es = [rng.randint(0, 2) for _ in range(4)]
                    c = rng.randint(1, p - 1)
                    m, sm = R.const(c), sympy.Integer(c)
                    for v, sv, e in zip(vs, syms, es):
                        m, sm = m * v**e, sm * sv**e
                    f, sf = f + m, sf + sm
                gens.append(f)
                sgens.append(sf)
            mine = {str(g) for g in IdealHandle(R, tuple(gens)).gb}
            theirs = set()
            for expr in sympy_groebner(sgens, *syms, order="grevlex", domain=GF(p)).exprs:
                poly = sympy.Poly(expr, *syms, domain=GF(p))
                terms = sorted(
                    poly.terms(),
                    key=lambda t: (sum(t[0]), tuple(-e for e in reversed(t[0]))),
                    reverse=True,
                )
                rebuilt = R.zero()
                for mono, coeff in terms:
                    m = R.const(int(coeff) % p)
                    for v, e in zip(vs, mono):
                        m = m * v**e
                    rebuilt = rebuilt + m
                theirs.add(str(rebuilt))
            assert mine == theirs


def test_elimination_intersection_closure():
    # intersections carry a valid basis of their own
    R = _ring()
    x, y, z = (R.var(v) for v in R.variables)
    I = IdealHandle(R, (x * y - z**2, y**2 - x * z))
    J = IdealHandle(R, (x**2, y + z))
    got = ideal_intersect(I, J)
    assert is_groebner_basis(got.gb, R)
    assert ideal_equal(ideal_intersect_all((I, J, I)), got)


# ---------------------------------------------------------------------------
# structure constants
# ---------------------------------------------------------------------------


def test_genericity_values():
    assert SC13.genericity == 4
    assert SC17.genericity == 5
    assert StructureConstants.max_genericity(11) == 3
    assert StructureConstants.max_genericity(13) == 4


def test_structure_constants_validation():
    with pytest.raises(ValueError):
        StructureConstants(1, 2, 3, 15)


def test_rotated_constants():
    rot = SC13.rotated()
    assert (rot.a, rot.b, rot.c) == (4, 0, 10)
    assert rot.p == 13


def test_random_generic_sampler():
    rng = random.Random(5)
    for p in (11, 13, 17):
        floor = min(4, StructureConstants.max_genericity(p))
        for _ in range(20):
            sc = StructureConstants.random_generic(rng, p)
            assert sc.genericity >= floor


# ---------------------------------------------------------------------------
# fibre rows: presentations and component ideals
# ---------------------------------------------------------------------------

EXPECTED_COMPONENT_COUNTS = {
    "abag": 1,
    "bgag": 1,
    "bag": 2,
    "abg": 2,
    "aba": 2,
    "ab": 4,
    "ba": 4,
    "a": 6,
    "e": 6,
}

CLOSED_ROWS = frozenset(EXPECTED_COMPONENT_COUNTS) - {"a", "e"}


def test_row_catalogue():
    assert set(fibre_rows()) == set(EXPECTED_COMPONENT_COUNTS)
    with pytest.raises(UnknownRow):
        fibre_row("nope")


def test_component_counts_never_three():
    for label, count in EXPECTED_COMPONENT_COUNTS.items():
        keys = component_labels(label)
        assert len(keys) == count
        assert count != 3


def test_free_row_presentation():
    variables, I = table_ring("abag", SC13)
    assert {"c21", "c32", "d31"} <= set(variables)
    # no relations beyond unit*reciprocal - 1
    assert all(len(g.terms) == 2 for g in I.generators)


def test_aba_presentation_and_components():
    variables, I = table_ring("aba", SC13)
    ring = I.ring
    c11 = ring.var("c11")
    # the single tabulated relation factors as c11 * W
    w = 5 * ring.var("c23") * ring.var("c32") + 4 * ring.var("d33") * ring.var("c22s")
    assert ideal_member(c11 * w, I)
    units = tuple(g for g in I.generators if len(g.terms) == 2)
    comp0 = component_ideal("aba", (GraphCoord((0, 0, 0), 0)), SC13)
    assert ideal_equal(comp0, IdealHandle(ring, (c11,) + units))
    comp1 = component_ideal("aba", ((0, 0, 0), 1), SC13)
    assert ideal_equal(comp1, IdealHandle(ring, (w,) + units))
    # their intersection recovers the row ideal (the displayed identity)
    assert ideal_equal(ideal_intersect(comp0, comp1), I)


def test_bag_product_identity():
    # <c11> ∩ <c22> = <c11*c22> inside the bag chart
    _, I = table_ring("bag", SC13)
    ring = I.ring
    units = tuple(g for g in I.generators if len(g.terms) == 2 and not g.degree() == 2)
    keys = component_labels("bag")
    comps = [component_ideal("bag", k, SC13) for k in keys]
    meet = ideal_intersect_all(comps)
    assert ideal_equal(meet, I)
    assert ideal_member(ring.var("c11") * ring.var("c22"), meet)


def test_identity_row_component_generators():
    row = fibre_row("e")
    gens = dict(row.components)
    eps1_0 = next(k for k in gens if k.digit == 0 and k.eps == (1, 0, 0))
    assert set(gens[eps1_0]) == {"c11", "c22", "c33", "c21", "c31", "c23"}


def test_unlisted_component_raises():
    with pytest.raises(UnlistedComponent):
        component_ideal("aba", ((1, 0, 0), 0), SC13)


def test_verify_components_all_rows():
    for label, count in EXPECTED_COMPONENT_COUNTS.items():
        report = verify_components(label, SC13)
        assert report["component_count"] == count
        assert "containment" in report["checks"]
        assert "never_three" in report["checks"]
        if label in CLOSED_ROWS:
            assert report["intersection_equals_ideal"] is True
        else:
            assert report["intersection_equals_ideal"] is None


def test_verify_components_cyclic_twists():
    for label in EXPECTED_COMPONENT_COUNTS:
        for twist in (1, 2):
            report = verify_components(label, SC13, twist=twist)
            assert report["component_count"] == EXPECTED_COMPONENT_COUNTS[label]
            if label in CLOSED_ROWS:
                assert report["intersection_equals_ideal"] is True


def test_verify_components_other_primes():
    rng = random.Random(17)
    for p in (11, 17):
        sc = StructureConstants.random_generic(rng, p)
        for label in ("bag", "aba", "ab", "ba"):
            report = verify_components(label, sc)
            assert report["intersection_equals_ideal"] is True


# ---------------------------------------------------------------------------
# displayed ideal identities
# ---------------------------------------------------------------------------


def test_lemma_count():
    assert LEMMA_COUNT == 4
    with pytest.raises(ValueError):
        lemma_identities(5, SC13)


def test_lemmas_at_fixed_samples():
    for k in (1, 2, 3, 4):
        assert verify_lemma(k, SC13)
    assert verify_lemma(1, SC17)
    assert verify_lemma(2, SC17)


def test_lemmas_at_random_generic_samples():
    rng = random.Random(29)
    for p in (11, 13, 17):
        sc = StructureConstants.random_generic(rng, p)
        for k in (1, 2, 3, 4):
            assert verify_lemma(k, sc), (k, sc)


def test_lemma_identity_shapes():
    assert len(lemma_identities(1, SC13)) == 1
    assert len(lemma_identities(2, SC13)) == 1
    assert len(lemma_identities(3, SC13)) == 1
    assert len(lemma_identities(4, SC13)) == 3


def test_sign_flip_mutation_flips_verdict():
    for k in (1, 2):
        (lhs, rhs), = lemma_identities(k, SC13)
        assert ideal_equal(lhs, rhs)
        flipped = 0
        for i, g in enumerate(rhs.gb):
            if len(g.terms) < 2:
                continue
            terms = list(g.terms)
            mono, coeff = terms[-1]
            terms[-1] = (mono, (-coeff) % rhs.ring.modulus)
            mutant_gen = Poly._raw(rhs.ring, tuple(terms))
            gens = tuple(mutant_gen if j == i else h for j, h in enumerate(rhs.gb))
            mutant = IdealHandle(rhs.ring, gens)
            assert not ideal_equal(mutant, rhs)
            assert not ideal_equal(lhs, mutant)
            flipped += 1
        assert flipped >= 3
