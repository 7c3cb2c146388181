"""Specialization pairs, the simple-walk engine, and the six-case
classification of geometric weight sets.

A torus-fixed point of the ambient space is an extended affine Weyl element
x.  Its specialization-pair set consists of pairs (y, weight) where y runs
over specializations and weight = (w1, y w1^{-1}(0)) is an obvious weight.
The map theta sending a pair to the finite part of y w1^{-1} is injective
on any such set; walking with a simple reflection s moves theta by right
multiplication with s and either changes the specialization or the weight.
Which branch occurs depends on geometry this module abstracts behind a
branch oracle.  Closing a seed pair under walks and matching the resulting
obvious-weight set against six literal templates classifies the geometric
weight set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .alcove import (
    GraphCoord,
    TypePresentation,
    WeightPresentation,
    central_reduce,
    depth,
    equiv_class,
    from_graph,
    graph_act,
    to_graph,
)
from .errors import (
    ClassificationError,
    ConsistencyError,
    DepthError,
)
from .weightsets import w_question
from .weyl import (
    ALPHA,
    BETA,
    ETA,
    AffElt,
    ProductElt,
    finite,
    perm_act,
    perm_inv,
    perm_mul,
    restricted_rep_by_fin,
    restricted_reps,
    translation,
    vec_neg,
    vec_sub,
)

NEW_SPECIALIZATION = "new_specialization"
NEW_WEIGHT = "new_weight"
BRANCHES = (NEW_SPECIALIZATION, NEW_WEIGHT)

SIMPLE_REFLECTIONS = (ALPHA, BETA)


# --- specialization pairs -------------------------------------------------------


@dataclass(frozen=True)
class SpecPair:
    """A specialization y together with an obvious weight (w1, y w1^{-1}(0)).

    The weight is stored as a canonical presentation class; the defining
    relation omega = y w1^{-1}(0) is checked on the canonical representative
    (it is invariant under scalar shifts).  The weight must be 2-deep.
    """

    y: ProductElt
    weight: WeightPresentation
    p: int

    def __post_init__(self):
        object.__setattr__(self, "weight", equiv_class(self.weight))
        if self.y.f != self.weight.f:
            raise ValueError("component counts differ")
        for y_j, w_j, om_j in zip(self.y.parts, self.weight.w1.parts, self.weight.omega):
            if (y_j * w_j.inverse()).act((0, 0, 0)) != om_j:
                raise ValueError("omega does not equal y w1^{-1}(0)")
        if self.weight.depth(self.p) < 2:
            raise DepthError("specialization-pair weight must be 2-deep")

    @property
    def f(self) -> int:
        return self.y.f


def theta(sp: SpecPair):
    """Finite part of y w1^{-1}, one permutation per component."""
    return tuple(
        (y_j * w_j.inverse()).perm
        for y_j, w_j in zip(sp.y.parts, sp.weight.w1.parts)
    )


def sp_fixed(x: ProductElt, p: int):
    """All specialization pairs of the torus-fixed point x.

    One pair (x, (w1, x w1^{-1}(0))) per choice of restricted class w1 in
    each component; choices whose weight is not 2-deep are dropped.
    """
    out = set()
    for reps in itertools.product(restricted_reps(), repeat=x.f):
        w1 = ProductElt(reps)
        omega = tuple(
            (y_j * w_j.inverse()).act((0, 0, 0))
            for y_j, w_j in zip(x.parts, reps)
        )
        pres = WeightPresentation(w1, omega)
        if pres.depth(p) < 2:
            continue
        out.add(SpecPair(x, pres, p))
    return frozenset(out)


def fixed_point_type(x: ProductElt, p: int) -> TypePresentation:
    """Read off the inertial-type presentation (s, mu) from x = t_{mu+eta}s."""
    mu = tuple(vec_sub(x_j.trans, ETA) for x_j in x.parts)
    s = ProductElt(tuple(finite(x_j.perm) for x_j in x.parts))
    return TypePresentation(s, mu, p)


def wg_fixed(x: ProductElt, p: int):
    """Geometric weight set of the torus-fixed point x.

    Equals the candidate set of the type read off from x = t_{mu+eta}s.
    """
    return w_question(fixed_point_type(x, p))


# --- the simple walk ------------------------------------------------------------


def tilde_sw(w1: AffElt, s: AffElt) -> AffElt:
    """The restricted class determined by s and w1.

    Returns the unique standard restricted representative r with
    r w1^{-1} s^{-1} a translation, i.e. with finite part s * fin(w1).
    """
    return restricted_rep_by_fin(perm_mul(s.perm, w1.perm))


def _walk_depth_gate(y: AffElt, w1: AffElt, s: AffElt, p: int):
    """The three 2-deep requirements for a walk step in one component."""
    sw = tilde_sw(w1, s)
    sw_fin = sw.perm
    probes = (
        (y * w1.inverse() * s * translation(vec_neg(ETA)) * w1).act((0, 0, 0)),
        (y * sw.inverse()).act((0, 0, 0)),
        y.act(vec_neg(perm_act(perm_inv(sw_fin), ETA))),
    )
    for v in probes:
        if depth((vec_sub(v, ETA),), p) < 2:
            raise DepthError("walk step leaves the 2-deep region")


def simple_walk(sp: SpecPair, s: AffElt, oracle) -> SpecPair:
    """One walk step from sp along the simple reflection s (single component).

    The oracle picks the branch: either the specialization moves to
    y w1^{-1} s w1 and the weight is kept, or the specialization is kept and
    the weight moves to (sw1, y sw1^{-1}(0)).  Either way theta moves by
    right multiplication with s.
    """
    if sp.f != 1:
        raise ValueError("the walk engine operates on single-component pairs")
    y = sp.y.parts[0]
    w1 = sp.weight.w1.parts[0]
    _walk_depth_gate(y, w1, s, sp.p)
    branch = oracle(sp, s)
    if branch == NEW_SPECIALIZATION:
        y_new = y * w1.inverse() * s * w1
        return SpecPair(ProductElt((y_new,)), sp.weight, sp.p)
    if branch == NEW_WEIGHT:
        sw = tilde_sw(w1, s)
        omega = (y * sw.inverse()).act((0, 0, 0))
        return SpecPair(ProductElt((y,)), WeightPresentation(ProductElt((sw,)), (omega,)), sp.p)
    raise ValueError(f"oracle returned unknown branch {branch!r}")


def w_obv(sp_set):
    """Obvious weights: projection of a pair set to its weights."""
    return frozenset(sp.weight for sp in sp_set)


def s_set(sp_set):
    """Specializations: projection of a pair set to its first entries."""
    return frozenset(sp.y for sp in sp_set)


def close_sp(seed: SpecPair, oracle):
    """Close a seed pair under simple walks until theta saturates.

    Raises ConsistencyError if theta-injectivity fails (two distinct pairs
    with equal theta), or if some produced weight escapes the geometric
    weight set of some produced specialization -- both certify that the
    oracle answers are not realizable by any point.
    """
    by_theta = {theta(seed): seed}
    queue = [seed]
    while queue:
        sp = queue.pop()
        for s in SIMPLE_REFLECTIONS:
            out = simple_walk(sp, s, oracle)
            key = theta(out)
            known = by_theta.get(key)
            if known is None:
                by_theta[key] = out
                queue.append(out)
            elif known != out:
                raise ConsistencyError(
                    "two distinct pairs share theta; oracle is inconsistent"
                )
    closure = frozenset(by_theta.values())
    weights = w_obv(closure)
    for y in s_set(closure):
        allowed = wg_fixed(y, seed.p)
        if not weights <= allowed:
            raise ConsistencyError(
                "a produced weight escapes the weight set of a specialization"
            )
    return closure


# --- the six cases --------------------------------------------------------------

_Z = (0, 0, 0)
_E1 = (1, 0, 0)
_E2 = (1, 1, 0)
_E12 = (2, 1, 0)
_E1M2 = (0, -1, 0)
_E2M1 = (0, 1, 0)


def graph_flip(g: GraphCoord) -> GraphCoord:
    """Chirality flip of the coordinate lattice: the class of v goes to the
    class of -w0(v).  It exchanges the two fundamental classes, preserves
    alcove digits, and maps each case template to itself."""
    return GraphCoord((-g.eps[2], -g.eps[1], -g.eps[0]), g.digit)


@dataclass(frozen=True)
class GraphAut:
    """A digit-preserving automorphism of the coordinate lattice: an optional
    chirality flip followed by an affine twist (finite permutation plus a
    translation by an arbitrary class)."""

    flip: bool
    aff: AffElt

    def __call__(self, g: GraphCoord) -> GraphCoord:
        if self.flip:
            g = graph_flip(g)
        return graph_act(self.aff, g)


def _coords(*pairs):
    return frozenset(GraphCoord(eps, digit) for eps, digit in pairs)


CASE_OBV = {
    1: _coords((_Z, 0)),
    2: _coords((_E1M2, 1)),
    3: _coords((_Z, 0), (_E1M2, 1)),
    4: _coords((_Z, 0), (_E1M2, 1), (_E2M1, 1)),
    5: _coords((_Z, 1), (_E1, 0), (_E2, 0), (_E12, 1)),
    6: _coords(
        (_Z, 0), (_E1M2, 1), (_E2M1, 1), (_E1, 0), (_E2, 0), (_E12, 1)
    ),
}

CASE_UPPER_BOUND = {
    1: CASE_OBV[1] | _coords((_Z, 1)),
    2: CASE_OBV[2],
    3: CASE_OBV[3] | _coords((_Z, 1)),
    4: CASE_OBV[4] | _coords((_Z, 1)),
    5: CASE_OBV[5] | _coords((_E1, 1), (_E2, 1)),
    6: CASE_OBV[6] | _coords((_Z, 1), (_E1, 1), (_E2, 1)),
}

# Final geometric sets per case; case 1 depends on a geometric sub-variant.
CASE_WG = {
    1: {"lower": CASE_OBV[1], "upper": CASE_UPPER_BOUND[1]},
    2: CASE_OBV[2],
    3: CASE_OBV[3],
    4: CASE_OBV[4],
    5: CASE_UPPER_BOUND[5],
    6: CASE_UPPER_BOUND[6],
}


@dataclass(frozen=True)
class CaseDescriptor:
    """Per-component case data: id in 1..6, graph twist w, base point lam.

    ws holds one graph automorphism per component: the matched weight
    coordinates relative to lam are exactly that automorphism applied to the
    case template.  A bare finite twist does not suffice: one-element
    closures anchored at a nonidentity restricted class need a translation
    component that cannot move into lam without changing the emitted
    weights, and half of the two-element closures are chirality mirrors of
    the case-3 template.

    sub_variant distinguishes the two possible geometric sets in case 1
    ("lower" = one weight, "upper" = two); None for the other cases.
    """

    case_ids: tuple
    ws: tuple
    lams: tuple
    sub_variants: tuple

    def __post_init__(self):
        n = len(self.case_ids)
        if not (len(self.ws) == len(self.lams) == len(self.sub_variants) == n):
            raise ValueError("component counts differ")
        for cid, w, sv in zip(self.case_ids, self.ws, self.sub_variants):
            if cid not in CASE_OBV:
                raise ClassificationError(f"no case {cid}")
            if not isinstance(w, GraphAut):
                raise ValueError("ws entries must be graph automorphisms")
            if (cid == 1) != (sv in ("lower", "upper")):
                raise ValueError("sub_variant is set exactly for case 1")

    @property
    def f(self) -> int:
        return len(self.case_ids)


def _component_weights(weights, j):
    """Project canonical product presentations to component j."""
    return {
        WeightPresentation(ProductElt((w.w1.parts[j],)), (w.omega[j],))
        for w in weights
    }


def _match_case(coords):
    """Find (case_id, aut) with coords == aut(case list)."""
    digits = sorted(g.digit for g in coords)
    for cid, template in CASE_OBV.items():
        if len(template) != len(coords):
            continue
        if sorted(g.digit for g in template) != digits:
            continue
        anchor = next(iter(coords))
        for flip in (False, True):
            base = [graph_flip(g) if flip else g for g in template]
            for perm in itertools.permutations(range(3)):
                u = finite(perm)
                twisted = [graph_act(u, g) for g in base]
                for t in twisted:
                    if t.digit != anchor.digit:
                        continue
                    shift = central_reduce(vec_sub(anchor.eps, t.eps))
                    aut = GraphAut(flip, AffElt(shift, perm))
                    if {aut(g) for g in template} == set(coords):
                        return cid, aut
    raise ClassificationError("weight set matches no case template")


def classify_case(sp_set) -> CaseDescriptor:
    """Classify a theta-injective walk-closed pair set, per component."""
    sp_list = list(sp_set)
    if not sp_list:
        raise ClassificationError("empty pair set")
    if len({theta(sp) for sp in sp_list}) != len(sp_list):
        raise ConsistencyError("pair set is not theta-injective")
    f = sp_list[0].f
    case_ids, ws, lams, subs = [], [], [], []
    for j in range(f):
        weights = _component_weights(w_obv(sp_set), j)
        zeta = next(iter(weights)).zeta()[0]
        lam = (zeta + 3, 0, 0)
        coords = {to_graph(w, (lam,))[0] for w in weights}
        cid, aut = _match_case(coords)
        case_ids.append(cid)
        ws.append(aut)
        lams.append(lam)
        subs.append("lower" if cid == 1 else None)
    return CaseDescriptor(tuple(case_ids), tuple(ws), tuple(lams), tuple(subs))


def wg_from_case(cd: CaseDescriptor):
    """Geometric weight set determined by a case descriptor.

    The per-component template (by case id, with the case-1 sub-variant) is
    twisted by w and transferred through the base weights; the result is the
    product set over components.
    """
    per_component = []
    for cid, aut, sv in zip(cd.case_ids, cd.ws, cd.sub_variants):
        template = CASE_WG[cid][sv] if cid == 1 else CASE_WG[cid]
        per_component.append(tuple(aut(g) for g in template))
    out = set()
    for gs in itertools.product(*per_component):
        out.add(from_graph(gs, cd.lams))
    return frozenset(out)


# --- never-three search ---------------------------------------------------------

_ROOT_A = (1, -1, 0)
_ROOT_B = (0, 1, -1)


def affine_window(radius: int):
    """Affine Weyl elements t_nu s with nu in a radius window of the root lattice."""
    out = []
    for a in range(-radius, radius + 1):
        for b in range(-radius, radius + 1):
            nu = tuple(a * x + b * y for x, y in zip(_ROOT_A, _ROOT_B))
            for perm in itertools.permutations(range(3)):
                out.append(AffElt(nu, perm))
    return tuple(out)


def _translate_template(u: AffElt, template):
    return frozenset(graph_act(u, g) for g in template)


def never_three_violations(sigma, radius: int = 4):
    """Translates of the base template meeting sigma in exactly 3 points."""
    from .weightsets import sigma0

    base = tuple(sigma0())
    bad = []
    for u in affine_window(radius):
        if len(frozenset(sigma) & _translate_template(u, base)) == 3:
            bad.append(u)
    return bad


def sigma_g_from_bounds(lb, ub, radius: int = 4):
    """Resolve the geometric template between a lower and an upper bound.

    For each coordinate in ub minus lb, search for a translate of the base
    template isolating it over the gap with a three-point intersection
    against one of the bounds; the coordinate joins iff the lower bound
    meets that translate in three points.
    """
    from .weightsets import sigma0

    lb, ub = frozenset(lb), frozenset(ub)
    if not lb <= ub:
        raise ValueError("lower bound must be contained in the upper bound")
    base = tuple(sigma0())
    resolved = set(lb)
    for e in ub - lb:
        verdicts = set()
        for u in affine_window(radius):
            tr = _translate_template(u, base)
            if (ub - lb) & tr != {e}:
                continue
            n_ub = len(ub & tr)
            n_lb = len(lb & tr)
            if n_ub != 3 and n_lb != 3:
                continue
            verdicts.add(n_lb == 3)
        if not verdicts:
            raise ClassificationError(
                f"no discriminating translate for {e}"
            )
        if len(verdicts) > 1:
            raise ClassificationError(
                f"contradictory discriminating translates for {e}"
            )
        if verdicts.pop():
            resolved.add(e)
    return frozenset(resolved)


def spec_genericity(m: int) -> int:
    """Genericity guaranteed for every specialization of an m-generic point."""
    if m < 6:
        raise ValueError("requires m >= 6")
    return m - 4
