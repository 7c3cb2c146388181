"""Decomposition sets for reduced Deligne-Lusztig representations.

The nine- and six-element coordinate templates, the translated full and
outer weight sets of a tame pair, the digit-flipped candidate-weight
recipe, corner-constituent highest weights straight from the character
formula (an independent cross-check), and the covering order on the
generic window.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .alcove import (
    EPS1,
    EPS2,
    GraphCoord,
    TypePresentation,
    WeightPresentation,
    as_weights,
    depth,
    digit_flip,
    from_graph,
    graph_act_tuple,
    to_graph,
)
from .errors import CompatibilityError, DepthError, LatticeError
from .weyl import (
    ETA,
    UNIT,
    W_TILDE_H,
    IDENTITY,
    ProductElt,
    p_dot,
    translation,
    vec_add,
    vec_sub,
)


@dataclass(frozen=True)
class SigmaTemplate:
    """A per-component template of graph coordinates."""

    entries: frozenset

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, g):
        return g in self.entries

    def issubset(self, other: "SigmaTemplate") -> bool:
        return self.entries <= other.entries


_DIGIT0_OUTER = (
    GraphCoord(vec_add(EPS1, EPS2), 0),
    GraphCoord(vec_sub(EPS1, EPS2), 0),
    GraphCoord(vec_sub(EPS2, EPS1), 0),
)
_DIGIT1_OUTER = (
    GraphCoord((0, 0, 0), 1),
    GraphCoord(EPS1, 1),
    GraphCoord(EPS2, 1),
)
_INNER = (
    GraphCoord((0, 0, 0), 0),
    GraphCoord(EPS1, 0),
    GraphCoord(EPS2, 0),
)

_SIGMA_OUT = SigmaTemplate(frozenset(_DIGIT0_OUTER + _DIGIT1_OUTER))
_SIGMA0 = SigmaTemplate(frozenset(_DIGIT0_OUTER + _DIGIT1_OUTER + _INNER))


def sigma0() -> SigmaTemplate:
    """The nine-coordinate template giving the full decomposition set."""
    return _SIGMA0


def sigma_out() -> SigmaTemplate:
    """The six-coordinate template giving the outer weights."""
    return _SIGMA_OUT


def default_base(mu):
    """The standard base weight: mu + (1,1,1) at every component."""
    return tuple(vec_add(m, UNIT) for m in as_weights(mu))


def _resolve_base(tau: TypePresentation, lam):
    lam = default_base(tau.mu) if lam is None else as_weights(lam)
    if len(lam) != tau.f:
        raise ValueError("component counts differ")
    if depth(tuple(vec_sub(lj, ETA) for lj in lam), tau.p) < 0:
        raise DepthError("base weight is not 0-deep in the shifted alcove")
    for m, lj in zip(tau.mu, lam):
        if sum(m) + 3 != sum(lj):
            raise LatticeError(
                "mu + eta - lam must lie in the root lattice at every component"
            )
    return lam


def _mu_depth(tau: TypePresentation) -> int:
    return depth(tuple(vec_sub(m, ETA) for m in tau.mu), tau.p)


def _check_mu_depth(tau, exact: bool, needed: int = 2):
    d = _mu_depth(tau)
    if d < needed - 1:
        raise DepthError(
            f"mu - eta is only {d}-deep; at least {needed - 1} required"
        )
    if exact and d < needed:
        raise DepthError(
            f"mu - eta is only {d}-deep; the exact set needs {needed}-deep "
            "(pass exact=False for the 1-deep upper bound)"
        )


def _translated(tau, lam, template, eta_shift: bool):
    """Presentations from_graph(t_{mu (+eta) - lam} s (g)) over the template."""
    shift = ETA if eta_shift else (0, 0, 0)
    act = ProductElt(
        tuple(
            translation(vec_sub(vec_add(m, shift), lj)) * w
            for m, lj, w in zip(tau.mu, lam, tau.s.parts)
        )
    )
    out = set()
    for gs in itertools.product(tuple(template), repeat=tau.f):
        out.add(from_graph(graph_act_tuple(act, gs), lam))
    return frozenset(out)


def jh_set(tau: TypePresentation, lam=None, *, exact: bool = True):
    """All constituents of the reduced representation of the pair.

    Exact for mu - eta 2-deep; with exact=False, 1-deep input yields an
    upper bound instead.  Returns canonical WeightPresentations relative
    to lam (default mu + (1,1,1)).
    """
    _check_mu_depth(tau, exact)
    lam = _resolve_base(tau, lam)
    return _translated(tau, lam, _SIGMA0, eta_shift=False)


def jh_outer(tau: TypePresentation, lam=None, *, exact: bool = True):
    """The outer constituents (corner weights of the decomposition)."""
    _check_mu_depth(tau, exact)
    lam = _resolve_base(tau, lam)
    return _translated(tau, lam, _SIGMA_OUT, eta_shift=False)


def w_question(tau: TypePresentation, lam=None):
    """The candidate-weight set of the pair: digit-flipped template moved
    by t_{mu + eta - lam} s."""
    _check_mu_depth(tau, exact=True)
    lam = _resolve_base(tau, lam)
    flipped = SigmaTemplate(frozenset(digit_flip(g) for g in _SIGMA0))
    return _translated(tau, lam, flipped, eta_shift=True)


def constituent_weight(tau: TypePresentation, wts: ProductElt):
    """Highest weight of one character-formula constituent.

    wts picks a restricted dominant element per component; that choice
    labels the presentation (wts, omega) with
    omega_j = t_{mu_j} s_j (wt_h wts_j)^{-1} (0), and the result is its
    Frobenius-twisted highest weight (component j twists by wts_{j-1}).
    """
    if wts.f != tau.f:
        raise ValueError("component counts differ")
    omega = tuple(
        (translation(m_j) * s_j * (W_TILDE_H * w_j).inverse()).act((0, 0, 0))
        for s_j, m_j, w_j in zip(tau.s.parts, tau.mu, wts.parts)
    )
    return WeightPresentation(wts, omega).highest_weight(tau.p)


def herzig_outer_oracle(tau: TypePresentation):
    """Corner-constituent highest weights, via the character formula only.

    Uses the two extreme restricted classes (identity and the shifted
    longest element) at each component: 2^f weights, a subset of the
    outer weights.  Independent of the graph-coordinate machinery.
    """
    if _mu_depth(tau) < 1:
        raise DepthError("mu - eta must be at least 1-deep")
    corners = (IDENTITY, W_TILDE_H)
    out = set()
    for choice in itertools.product(corners, repeat=tau.f):
        out.add(constituent_weight(tau, ProductElt(choice)))
    return frozenset(out)


def covers(a: WeightPresentation, b: WeightPresentation) -> bool:
    """Whether a covers b: same class coordinate at every component and
    the digit of b bounded by the digit of a."""
    if a.f != b.f:
        raise CompatibilityError("component counts differ")
    if a.zeta() != b.zeta():
        raise CompatibilityError("no common coordinate system: gradings differ")
    lam = tuple((z + 3, 0, 0) for z in a.zeta())
    ga = to_graph(a, lam)
    gb = to_graph(b, lam)
    return all(
        x.eps == y.eps and y.digit <= x.digit for x, y in zip(ga, gb)
    )
