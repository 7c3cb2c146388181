"""Restricted-alcove bookkeeping: depth, graph coordinates, presentations.

A weight is an integer triple; product-level data stacks one triple per
component (indexed by Z/f).  A graph coordinate packages the class of a
weight modulo the scalar line together with a restricted-alcove digit
(0 = lower, 1 = upper).  A presentation realizes the same datum as a pair
(restricted dominant part, weight in eta + base alcove), up to the
componentwise equivalence (w1, omega) ~ (t_nu w1, omega - nu) for scalar
nu.  Translation between the two pictures is relative to a base weight
lam: the class coordinate measures omega - lam, and the grading of
t_{omega - eta} w1 must match that of t_{lam - eta}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CompatibilityError, DepthError, LatticeError
from .weyl import (
    DELTA,
    ETA,
    POS_ROOTS,
    UNIT,
    W_TILDE_H,
    AffElt,
    ProductElt,
    is_upper_fin,
    p_dot,
    p_dot_unapply,
    restricted_rep_by_fin,
    restricted_reps,
    translation,
    vec_add,
    vec_scale,
    vec_sub,
)


def as_weights(mu):
    """Normalize a weight argument: a bare triple becomes a 1-tuple of triples."""
    mu = tuple(mu)
    if mu and not hasattr(mu[0], "__len__"):
        return (mu,)
    return tuple(tuple(m) for m in mu)


def depth(mu, p: int) -> int:
    """Largest N >= -1 with every component N-deep in the base alcove.

    N-deep at one component means N < <mu + eta, a'> < p - N for all three
    positive coroots a'; -1 reports failure of 0-deepness.
    """
    best = None
    for comp in as_weights(mu):
        shifted = vec_add(comp, ETA)
        for i, j in POS_ROOTS:
            pair = shifted[i] - shifted[j]
            d = min(pair, p - pair) - 1
            best = d if best is None else min(best, d)
    return max(-1, best)


def restricted_digit(lam, p: int):
    """Digit of the open restricted alcove containing lam (None if neither).

    Digit 0: all pairings of lam + eta with positive coroots in (0, p).
    Digit 1: simple pairings in (0, p), highest-root pairing in (p, 2p).
    """
    shifted = vec_add(tuple(lam), ETA)
    s1 = shifted[0] - shifted[1]
    s2 = shifted[1] - shifted[2]
    if not (0 < s1 < p and 0 < s2 < p):
        return None
    theta = s1 + s2
    if theta < p:
        return 0
    if theta > p:
        return 1
    return None


def restricted_depth(lam, p: int) -> int:
    """Depth of lam inside its own open restricted alcove (-1 if in neither)."""
    digit = restricted_digit(lam, p)
    if digit is None:
        return -1
    shifted = vec_add(tuple(lam), ETA)
    vals = []
    for i, j in POS_ROOTS:
        pair = shifted[i] - shifted[j]
        if (i, j) == (0, 2) and digit == 1:
            vals.append(min(pair - p, 2 * p - pair))
        else:
            vals.append(min(pair, p - pair))
    return min(vals) - 1


def is_restricted_hw(lam, p: int) -> bool:
    """Componentwise: both simple pairings of lam lie in [0, p-1]."""
    for comp in as_weights(lam):
        if not (0 <= comp[0] - comp[1] <= p - 1 and 0 <= comp[1] - comp[2] <= p - 1):
            return False
    return True


def central_reduce(v):
    """Canonical representative of v modulo the scalar line: last entry 0."""
    v = tuple(v)
    return (v[0] - v[2], v[1] - v[2], 0)


# canonical lifts of the two fundamental classes modulo scalars
EPS1 = (1, 0, 0)
EPS2 = central_reduce((0, 0, -1))  # = (1, 1, 0)


@dataclass(frozen=True)
class GraphCoord:
    """Weight class modulo scalars (canonical lift) plus an alcove digit."""

    eps: tuple
    digit: int

    def __post_init__(self):
        object.__setattr__(self, "eps", central_reduce(self.eps))
        if self.digit not in (0, 1):
            raise ValueError(f"digit must be 0 or 1, got {self.digit!r}")

    def __repr__(self):
        return f"G({self.eps[0]},{self.eps[1]};{self.digit})"


def digit_flip(g: GraphCoord) -> GraphCoord:
    return GraphCoord(g.eps, 1 - g.digit)


def graph_act(u: AffElt, g: GraphCoord) -> GraphCoord:
    """Affine action on the class coordinate; the alcove digit rides along."""
    return GraphCoord(u.act(g.eps), g.digit)


def graph_act_tuple(u: ProductElt, coords):
    return tuple(graph_act(uj, g) for uj, g in zip(u.parts, coords))


def from_graph_component(g: GraphCoord, lam):
    """Invert the coordinate map at one component relative to base weight lam.

    Returns (w1, omega) with omega = lam + lift(eps) and w1 the unique
    restricted dominant element (scalar translate of a standard class
    representative, alcove matching the digit) whose grading makes
    t_{omega - eta} w1 grade like t_{lam - eta}.
    """
    lam = tuple(lam)
    omega = vec_add(lam, g.eps)
    total = -sum(g.eps) + (3 if g.digit == 1 else 0)
    k = total % 3
    m = (total - k) // 3
    rep = DELTA**k if g.digit == 0 else W_TILDE_H * DELTA**k
    return translation(vec_scale(m, UNIT)) * rep, omega


def to_graph_component(w1: AffElt, omega, lam) -> GraphCoord:
    """Forward coordinate map at one component; validates its inputs.

    Raises LatticeError if w1 is not a scalar translate of a standard
    restricted class representative, CompatibilityError if the gradings of
    t_{omega - eta} w1 and t_{lam - eta} disagree.
    """
    omega = tuple(omega)
    lam = tuple(lam)
    rep = restricted_rep_by_fin(w1.perm)
    q = w1 * rep.inverse()
    if not (q.is_translation() and q.trans[0] == q.trans[1] == q.trans[2]):
        raise LatticeError(f"{w1!r} is not restricted dominant modulo scalars")
    if sum(omega) + w1.omega() != sum(lam):
        raise CompatibilityError(
            f"grading mismatch: {w1!r} with omega {omega} against base {lam}"
        )
    return GraphCoord(vec_sub(omega, lam), 1 if is_upper_fin(w1.perm) else 0)


@dataclass(frozen=True)
class TypePresentation:
    """A pair (finite parts, weights) presenting a tame inertial datum.

    s holds one finite Weyl element per component; mu one weight per
    component, required to lie in the closed base alcove (depth >= 0 at
    the stored prime p).
    """

    s: ProductElt
    mu: tuple
    p: int

    def __post_init__(self):
        object.__setattr__(self, "mu", as_weights(self.mu))
        if self.s.f != len(self.mu):
            raise ValueError("component counts differ")
        for part in self.s.parts:
            if part.trans != (0, 0, 0):
                raise ValueError(f"finite part expected, got {part!r}")
        if depth(self.mu, self.p) < 0:
            raise DepthError(
                f"mu {self.mu} is not 0-deep in the base alcove at p={self.p}"
            )

    @property
    def f(self) -> int:
        return len(self.mu)

    def w_tilde(self) -> ProductElt:
        """The componentwise product t_{mu + eta} s attached to the pair."""
        return ProductElt(
            tuple(
                translation(vec_add(m, ETA)) * w
                for m, w in zip(self.mu, self.s.parts)
            )
        )

    def zeta(self):
        return tuple(sum(m) + 3 for m in self.mu)

    def depth(self) -> int:
        return depth(self.mu, self.p)


@dataclass(frozen=True)
class WeightPresentation:
    """Product-level presentation: restricted dominant parts + weights.

    w1 holds one restricted dominant element per component; omega one
    weight per component (in eta + base alcove for genuine presentations).
    Presentations related by componentwise scalar shifts describe the same
    irreducible.
    """

    w1: ProductElt
    omega: tuple

    def __post_init__(self):
        object.__setattr__(self, "omega", as_weights(self.omega))
        if self.w1.f != len(self.omega):
            raise ValueError("component counts differ")

    @property
    def f(self) -> int:
        return len(self.omega)

    def zeta(self):
        """Grading of t_{omega - eta} w1, one integer per component."""
        return tuple(
            sum(om) - 3 + x.omega() for om, x in zip(self.omega, self.w1.parts)
        )

    def same_class(self, other: "WeightPresentation") -> bool:
        """Equality up to componentwise scalar shifts."""
        if self.f != other.f:
            return False
        for x, om, y, on in zip(
            self.w1.parts, self.omega, other.w1.parts, other.omega
        ):
            d = vec_sub(om, on)
            if not (d[0] == d[1] == d[2]):
                return False
            if translation(d) * x != y:
                return False
        return True

    def highest_weight(self, p: int):
        """Highest weight of the irreducible: component j is the p-scaled
        dot image of omega_j - eta under component j-1 of w1."""
        f = self.f
        return tuple(
            p_dot(self.w1[(j - 1) % f], vec_sub(self.omega[j], ETA), p)
            for j in range(f)
        )

    def depth(self, p: int) -> int:
        return depth(tuple(vec_sub(om, ETA) for om in self.omega), p)


def equiv_class(pres: WeightPresentation) -> WeightPresentation:
    """Canonical representative: last coordinate of every omega forced to 0."""
    parts = []
    oms = []
    for x, om in zip(pres.w1.parts, pres.omega):
        nu = vec_scale(om[2], UNIT)
        parts.append(translation(nu) * x)
        oms.append(vec_sub(om, nu))
    return WeightPresentation(ProductElt(tuple(parts)), tuple(oms))


def from_graph(coords, lam, zeta=None, p=None) -> WeightPresentation:
    """Product-level inverse coordinate map, canonicalized.

    zeta defaults to the grading of t_{lam - eta}; passing another value
    builds the presentation with that grading instead.  When p is given,
    every omega - eta is required to be 0-deep (DepthError otherwise).
    """
    lam = as_weights(lam)
    if len(coords) != len(lam):
        raise ValueError("component counts differ")
    base = tuple(sum(lj) - 3 for lj in lam)
    if zeta is None:
        zeta = base
    parts = []
    oms = []
    for g, lj, z, bz in zip(coords, lam, zeta, base):
        x, om = from_graph_component(g, lj)
        extra = z - bz
        if extra % 3:
            raise CompatibilityError(
                f"grading {z} unreachable from base {bz} by scalar shifts"
            )
        x = translation(vec_scale(extra // 3, UNIT)) * x
        parts.append(x)
        oms.append(om)
    pres = equiv_class(WeightPresentation(ProductElt(tuple(parts)), tuple(oms)))
    if p is not None and pres.depth(p) < 0:
        raise DepthError(f"presentation leaves the 0-deep window at p={p}")
    return pres


def to_graph(pres: WeightPresentation, lam):
    """Product-level forward coordinate map."""
    lam = as_weights(lam)
    if pres.f != len(lam):
        raise ValueError("component counts differ")
    return tuple(
        to_graph_component(x, om, lj)
        for x, om, lj in zip(pres.w1.parts, pres.omega, lam)
    )


def serre_highest_weight(pres: WeightPresentation, p: int):
    return pres.highest_weight(p)


def zeta_of(obj):
    """Componentwise grading of a presentation, type pair, or product element."""
    if isinstance(obj, (WeightPresentation, TypePresentation)):
        return obj.zeta()
    if isinstance(obj, ProductElt):
        return obj.omega()
    return obj.omega()


def from_highest_weight(hw, p: int, zeta) -> WeightPresentation:
    """The unique presentation with the given grading and highest weight.

    Inverts highest_weight: solves the cyclic system tying the scalar
    parts of consecutive components together.  Requires every component of
    hw to lie in the open part of a restricted alcove; raises
    CompatibilityError when no presentation with grading zeta exists.
    """
    hw = as_weights(hw)
    f = len(hw)
    if len(zeta) != f:
        raise ValueError("component counts differ")
    digits = []
    for v in hw:
        d = restricted_digit(v, p)
        if d is None:
            raise CompatibilityError(f"{v} is not interior to a restricted alcove")
        digits.append(d)
    # z_j := 3 m_j + grading(rep_j) satisfies z_j = p z_{j-1} - g_j with
    # g_j := sum(hw_j) - zeta_j; rep_j has the alcove digit of hw_{j+1}.
    gs = [sum(v) - z for v, z in zip(hw, zeta)]
    num = gs[0] + sum(p ** (f - i) * gs[i] for i in range(1, f))
    den = p**f - 1
    if num % den:
        raise CompatibilityError("no presentation with this grading exists")
    zs = [num // den]
    for j in range(1, f):
        zs.append(p * zs[-1] - gs[j])
    parts = []
    for j in range(f):
        digit = digits[(j + 1) % f]
        rep = next(
            r
            for r in restricted_reps()
            if is_upper_fin(r.perm) == (digit == 1) and r.omega() % 3 == zs[j] % 3
        )
        m = (zs[j] - rep.omega()) // 3
        parts.append(translation(vec_scale(m, UNIT)) * rep)
    oms = tuple(
        vec_add(p_dot_unapply(parts[(j - 1) % f], hw[j], p), ETA) for j in range(f)
    )
    # the unique representative reproducing hw on the nose (scalar shifts
    # move the highest weight injectively), so no canonicalization here
    pres = WeightPresentation(ProductElt(tuple(parts)), oms)
    if pres.highest_weight(p) != hw or pres.zeta() != tuple(zeta):
        raise CompatibilityError("reconstruction failed to match the input")
    return pres


def serre_weights_equal(lam1, lam2, p: int) -> bool:
    """Whether two highest weights give the same irreducible.

    The difference must be a scalar at every component, with scalar parts
    e_j satisfying e_j = p d_j - d_{j+1} (cyclically) for integers d_j;
    equivalently sum_j p^(f-1-j) e_j must vanish modulo p^f - 1.
    """
    a, b = as_weights(lam1), as_weights(lam2)
    if len(a) != len(b):
        return False
    f = len(a)
    scalars = []
    for x, y in zip(a, b):
        d = vec_sub(x, y)
        if not (d[0] == d[1] == d[2]):
            return False
        scalars.append(d[0])
    total = sum(e * p ** (f - 1 - j) for j, e in enumerate(scalars))
    return total % (p**f - 1) == 0
