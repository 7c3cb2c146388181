"""Iwahori double cosets of Laurent matrices and universal chart matrices.

This module computes, over the Laurent field F_p((v)), the double coset
I z I of an invertible 3x3 matrix with respect to the Iwahori subgroup I
(matrices over F_p[[v]] that are upper triangular with unit diagonal mod v).
Double cosets are indexed by extended affine Weyl elements z = t_nu w via the
monomial embedding of ``laurent.weyl_matrix``.

It also tabulates the nine universal coefficient charts around the admissible
cosets of the antidominant convention (one chart per cyclic-rotation orbit;
the remaining sixteen charts are obtained by conjugating with the rotation
matrix, which normalizes I).  Each chart records:

* a 3x3 template whose entries are sums of terms ``coefficient * v^a (v+p)^b``
  (here p is the residue characteristic; on the mod-p fiber v+p = v);
* the defining relations among the coefficients;
* which coefficients are forced to vanish on the locus where the double coset
  equals the chart's own ``elt`` (the "exact-coset locus"): at a generic point
  of the chart the coset is Bruhat-larger.

Coefficient naming: ``c{i}{k}`` is the plain coefficient in row i, column k
(1-based); a trailing ``s`` marks a unit (never-vanishing) coefficient and a
trailing ``p`` marks the companion coefficient of the next (v+p)-order.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Mapping

from .errors import (
    ConsistencyError,
    MissingVariable,
    NotIwahoriAdapted,
    RelationViolation,
    SingularMatrixError,
    UnknownRow,
)
from .laurent import LaurentMatrix, LaurentPoly, weyl_matrix, zero
from .weyl import (
    ANTIDOMINANT,
    DELTA_ANTI,
    ETA,
    T_UNIT,
    AffElt,
    ProductElt,
    admissible_set,
    bruhat_leq,
    perm_act,
    perm_inv,
    translation,
)

# Length-zero rotation of the antidominant convention.  Its monomial matrix
# [[0,0,1],[v,0,0],[0,v,0]] normalizes the Iwahori subgroup, so conjugating
# by it permutes double cosets; it also maps the chart templates onto each
# other under the index rotation c{i}{k} -> c{i+1}{k+1}.
OMEGA_ROT = T_UNIT * DELTA_ANTI

# ---------------------------------------------------------------------------
# chart catalog
# ---------------------------------------------------------------------------

# A template term: (numerator names, denominator names, power of v, power of
# (v+p)).  The entry value is prod(num)/prod(den) * v^a * (v+p)^b.
Term = tuple[tuple[str, ...], tuple[str, ...], int, int]


def _t(name: str, v: int = 0, w: int = 0) -> Term:
    return ((name,), (), v, w)


def _frac(nums, dens, v: int = 0, w: int = 0) -> Term:
    return (tuple(nums), tuple(dens), v, w)


@dataclass(frozen=True)
class ChartRow:
    """One tabulated universal chart around an admissible double coset."""

    label: str  # word in the generators a, b, g ("e" for the empty word)
    elt: AffElt  # the coset representative: word product times t_(1,1,1)
    entries: tuple  # 3x3 tuple of tuples of Terms
    relations: tuple  # ideal generators: tuples of (int coeff, p power, names)
    variables: tuple  # declared coefficient names, starred ones end in "s"
    forced: frozenset  # coefficients that vanish on the exact-coset locus


def _grid(entry_map: dict) -> tuple:
    return tuple(
        tuple(tuple(entry_map.get((i, k), ())) for k in range(3)) for i in range(3)
    )


def _row(label, elt, entry_map, relations, variables, forced) -> ChartRow:
    return ChartRow(
        label=label,
        elt=elt,
        entries=_grid(entry_map),
        relations=tuple(tuple(tuple(g) for g in gen) for gen in relations),
        variables=tuple(variables),
        forced=frozenset(forced),
    )


def _build_rows() -> tuple:
    rows = []

    # label "abag": elt = t_(2,1,0)
    rows.append(
        _row(
            "abag",
            AffElt((2, 1, 0), (0, 1, 2)),
            {
                (0, 0): [_t("c11s", 0, 2)],
                (1, 0): [_t("c21", 1, 1)],
                (2, 0): [_t("c31", 1, 0), _t("c31p", 1, 1)],
                (1, 1): [_t("c22s", 0, 1)],
                (2, 1): [_t("c32", 1, 0)],
                (2, 2): [_t("c33s", 0, 0)],
            },
            (),
            ("c11s", "c21", "c31", "c31p", "c22s", "c32", "c33s"),
            (),
        )
    )

    # label "bgag": elt = t_(1,2,0)
    rows.append(
        _row(
            "bgag",
            AffElt((1, 2, 0), (0, 1, 2)),
            {
                (0, 0): [_t("c11s", 0, 1)],
                (0, 1): [_t("c12", 0, 1)],
                (1, 1): [_t("c22s", 0, 2)],
                (2, 0): [_t("c31", 1, 0)],
                (2, 1): [_t("c32", 1, 0), _t("c32p", 1, 1)],
                (2, 2): [_t("c33s", 0, 0)],
            },
            (),
            ("c11s", "c12", "c22s", "c31", "c32", "c32p", "c33s"),
            (),
        )
    )

    # label "bag": elt = t_(1,2,0) * transposition(0,1)
    rows.append(
        _row(
            "bag",
            AffElt((1, 2, 0), (1, 0, 2)),
            {
                (0, 0): [_t("c11", 0, 1)],
                (0, 1): [_t("c12s", 0, 1)],
                (1, 0): [_t("c21s", 1, 1)],
                (1, 1): [_t("c22", 0, 1)],
                (2, 0): [_t("c31", 1, 0), _t("c31p", 1, 1)],
                (2, 1): [_t("c32", 1, 0)],
                (2, 2): [_t("c33s", 0, 0)],
            },
            (((1, 0, ("c11", "c22")), (1, 1, ("c12s", "c21s"))),),
            ("c11", "c12s", "c21s", "c22", "c31", "c31p", "c32", "c33s"),
            ("c11", "c22"),
        )
    )

    # label "abg": elt = t_(2,0,1) * transposition(1,2)
    rows.append(
        _row(
            "abg",
            AffElt((2, 0, 1), (0, 2, 1)),
            {
                (0, 0): [_t("c11s", 0, 2)],
                (1, 0): [_t("c21", 1, 0), _t("c21p", 1, 1)],
                (1, 1): [_t("c22", 0, 0)],
                (1, 2): [_t("c23s", 0, 0)],
                (2, 0): [_frac(("c21", "c33"), ("c23s",), 1, 0), _t("c31p", 1, 1)],
                (2, 1): [_t("c32s", 1, 0)],
                (2, 2): [_t("c33", 0, 0)],
            },
            (((1, 0, ("c22", "c33")), (1, 1, ("c32s", "c23s"))),),
            ("c11s", "c21", "c21p", "c22", "c23s", "c31p", "c32s", "c33"),
            ("c22", "c33"),
        )
    )

    # label "aba": elt = t_(1,1,1) * longest
    rows.append(
        _row(
            "aba",
            AffElt((1, 1, 1), (2, 1, 0)),
            {
                (0, 0): [_t("c11", 0, 0)],
                (0, 1): [_t("c12", 0, 0)],
                (0, 2): [_t("c13", 0, 0), _t("c13s", 0, 1)],
                (1, 1): [_t("c22s", 0, 1)],
                (1, 2): [_t("c23", 0, 1)],
                (2, 0): [_t("c31s", 1, 0)],
                (2, 1): [_t("c32", 1, 0)],
                (2, 2): [_t("c33", 0, 0), _t("c33p", 0, 1)],
            },
            (
                ((1, 0, ("c11", "c32")), (-1, 0, ("c12", "c31s"))),
                ((1, 0, ("c11", "c33")), (1, 1, ("c13", "c31s"))),
                (
                    (1, 0, ("c11", "c33p")),
                    (-1, 0, ("c13", "c31s")),
                    (1, 1, ("c13s", "c31s")),
                ),
            ),
            ("c11", "c12", "c13", "c13s", "c22s", "c23", "c31s", "c32", "c33", "c33p"),
            ("c11", "c12", "c13", "c33"),
        )
    )

    # label "ab": elt = t_(1,1,1) * 3-cycle (0 -> 1 -> 2 -> 0)
    rows.append(
        _row(
            "ab",
            AffElt((1, 1, 1), (1, 2, 0)),
            {
                (0, 0): [_frac(("c31", "c12"), ("c32s",), 0, 0)],
                (0, 1): [_t("c12", 0, 0)],
                (0, 2): [_t("c13", 0, 0), _t("c13s", 0, 1)],
                (1, 0): [_t("c21s", 1, 0)],
                (1, 1): [_t("c22", 0, 0)],
                (1, 2): [_t("c23", 0, 0), _t("c23p", 0, 1)],
                (2, 0): [_t("c31", 1, 0)],
                (2, 1): [_t("c32s", 1, 0)],
                (2, 2): [_frac(("c31", "c23"), ("c21s",), 0, 0), _t("c33p", 0, 1)],
            },
            (
                ((1, 0, ("c22", "c31")), (1, 1, ("c21s", "c32s"))),
                ((1, 0, ("c12", "c23")), (-1, 0, ("c22", "c13"))),
                (
                    (1, 0, ("c21s", "c32s", "c13")),
                    (-1, 1, ("c21s", "c32s", "c13s")),
                    (-1, 0, ("c33p", "c21s", "c12")),
                ),
            ),
            ("c12", "c13", "c13s", "c21s", "c22", "c23", "c23p", "c31", "c32s", "c33p"),
            ("c12", "c13", "c22", "c23", "c31"),
        )
    )

    # label "ba": elt = t_(1,1,1) * 3-cycle (0 -> 2 -> 1 -> 0)
    rows.append(
        _row(
            "ba",
            AffElt((1, 1, 1), (2, 0, 1)),
            {
                (0, 0): [_t("c11", 0, 0)],
                (0, 1): [_frac(("c11", "c32"), ("c31s",), 0, 0), _t("c12s", 0, 1)],
                (0, 2): [_t("c13", 0, 0)],
                (1, 1): [_t("c22p", 0, 1)],
                (1, 2): [_t("c23s", 0, 1)],
                (2, 0): [_t("c31s", 1, 0)],
                (2, 1): [_t("c32", 1, 0)],
                (2, 2): [_t("c33", 0, 0), _t("c33p", 0, 1)],
            },
            (
                ((1, 0, ("c11", "c33")), (1, 1, ("c31s", "c13"))),
                (
                    (1, 0, ("c22p", "c11", "c33p")),
                    (-1, 0, ("c22p", "c13", "c31s")),
                    (-1, 1, ("c23s", "c12s", "c31s")),
                ),
            ),
            ("c11", "c12s", "c13", "c22p", "c23s", "c31s", "c32", "c33", "c33p"),
            ("c11", "c13", "c33", "c22p"),
        )
    )

    # label "a": elt = t_(1,1,1) * transposition(0,1)
    rows.append(
        _row(
            "a",
            AffElt((1, 1, 1), (1, 0, 2)),
            {
                (0, 0): [_t("c11", 0, 0)],
                (0, 1): [_t("c12", 0, 0), _t("c12s", 0, 1)],
                (0, 2): [_t("c13", 0, 0)],
                (1, 0): [_t("c21s", 1, 0)],
                (1, 1): [_t("c22", 0, 0), _t("c22p", 0, 1)],
                (1, 2): [_t("c23", 0, 0)],
                (2, 0): [_t("c31", 1, 0)],
                (2, 1): [_t("c32", 1, 0)],
                (2, 2): [_t("c33", 0, 0), _t("c33s", 0, 1)],
            },
            (
                ((1, 0, ("c11", "c22")), (1, 1, ("c12", "c21s"))),
                ((1, 0, ("c11", "c23")), (1, 1, ("c13", "c21s"))),
                ((1, 0, ("c12", "c23")), (-1, 0, ("c13", "c22"))),
                ((1, 0, ("c11", "c32")), (-1, 0, ("c31", "c12"))),
                ((1, 0, ("c11", "c33")), (1, 1, ("c31", "c13"))),
                ((1, 0, ("c12", "c33")), (1, 1, ("c32", "c13"))),
                ((1, 1, ("c21s", "c32")), (1, 0, ("c22", "c31"))),
                ((1, 0, ("c21s", "c33")), (-1, 0, ("c23", "c31"))),
                ((1, 0, ("c22", "c33")), (1, 1, ("c32", "c23"))),
                (
                    (1, 0, ("c11", "c22p", "c33s")),
                    (1, 0, ("c13", "c21s", "c32")),
                    (-1, 0, ("c13", "c22p", "c31")),
                    (-1, 0, ("c12", "c21s", "c33s")),
                    (1, 1, ("c21s", "c12s", "c33s")),
                ),
            ),
            (
                "c11",
                "c12",
                "c12s",
                "c13",
                "c21s",
                "c22",
                "c22p",
                "c23",
                "c31",
                "c32",
                "c33",
                "c33s",
            ),
            ("c11", "c12", "c13", "c22", "c23", "c31", "c32", "c33"),
        )
    )

    # label "e": elt = t_(1,1,1)
    rows.append(
        _row(
            "e",
            AffElt((1, 1, 1), (0, 1, 2)),
            {
                (0, 0): [_t("c11", 0, 0), _t("c11s", 0, 1)],
                (0, 1): [_t("c12", 0, 0)],
                (0, 2): [_t("c13", 0, 0)],
                (1, 0): [_t("c21", 1, 0)],
                (1, 1): [_t("c22", 0, 0), _t("c22s", 0, 1)],
                (1, 2): [_t("c23", 0, 0)],
                (2, 0): [_t("c31", 1, 0)],
                (2, 1): [_t("c32", 1, 0)],
                (2, 2): [_t("c33", 0, 0), _t("c33s", 0, 1)],
            },
            (
                ((1, 0, ("c11", "c22")), (1, 1, ("c12", "c21"))),
                ((1, 0, ("c11", "c23")), (1, 1, ("c13", "c21"))),
                ((1, 0, ("c12", "c23")), (-1, 0, ("c13", "c22"))),
                ((1, 0, ("c11", "c32")), (-1, 0, ("c31", "c12"))),
                ((1, 0, ("c11", "c33")), (1, 1, ("c31", "c13"))),
                ((1, 0, ("c12", "c33")), (1, 1, ("c32", "c13"))),
                ((1, 1, ("c21", "c32")), (1, 0, ("c22", "c31"))),
                ((1, 0, ("c21", "c33")), (-1, 0, ("c23", "c31"))),
                ((1, 0, ("c22", "c33")), (1, 1, ("c32", "c23"))),
                (
                    (1, 0, ("c11", "c22s", "c33s")),
                    (1, 0, ("c22", "c33s", "c11s")),
                    (1, 0, ("c33", "c11s", "c22s")),
                    (-1, 0, ("c11s", "c23", "c32")),
                    (-1, 0, ("c22s", "c13", "c31")),
                    (-1, 0, ("c33s", "c12", "c21")),
                    (1, 0, ("c21", "c13", "c32")),
                ),
            ),
            (
                "c11",
                "c11s",
                "c12",
                "c13",
                "c21",
                "c22",
                "c22s",
                "c23",
                "c31",
                "c32",
                "c33",
                "c33s",
            ),
            ("c11", "c12", "c13", "c21", "c22", "c23", "c31", "c32", "c33"),
        )
    )

    return tuple(rows)


_ROWS = _build_rows()
_ROWS_BY_LABEL = {r.label: r for r in _ROWS}
ROW_LABELS = tuple(r.label for r in _ROWS)


def chart_rows() -> tuple:
    """The nine tabulated chart rows, Bruhat-longest coset first."""
    return _ROWS


def chart_row(label: str) -> ChartRow:
    try:
        return _ROWS_BY_LABEL[label]
    except KeyError:
        raise UnknownRow(f"no tabulated chart row with label {label!r}") from None


def cycle_name(name: str, k: int) -> str:
    """Rotate a coefficient name's indices by k steps (c11 -> c22 -> c33)."""
    i, j = int(name[1]), int(name[2])
    suffix = name[3:]
    return f"c{(i - 1 + k) % 3 + 1}{(j - 1 + k) % 3 + 1}{suffix}"


def resolve_chart(z: AffElt):
    """Return (k, row) with z equal to the k-fold rotation conjugate of row.elt.

    Every admissible coset of the antidominant convention arises exactly once.
    """
    for k in range(3):
        rot = OMEGA_ROT**k
        base = rot.inverse() * z * rot
        for row in _ROWS:
            if base == row.elt:
                return k, row
    raise UnknownRow(f"{z!r} is not a rotation conjugate of a tabulated coset")


def _pretty_generator(gen) -> str:
    parts = []
    for coeff, p_pow, names in gen:
        body = "*".join(("p",) * p_pow + tuple(names))
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        parts.append(f"{sign} {'' if mag == 1 else str(mag) + '*'}{body}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def universal_matrix(z: AffElt, assignment: Mapping[str, int], p: int) -> LaurentMatrix:
    """Evaluate the universal chart matrix of the coset z over F_p.

    The assignment maps the chart's coefficient names (rotated names for the
    conjugate charts) to integers.  On the mod-p fiber the symbol p is zero,
    so a template factor (v+p) contributes a plain factor of v.  Raises
    MissingVariable for absent names, RelationViolation when a unit
    coefficient vanishes or a defining relation fails mod p, and UnknownRow
    for cosets outside the tabulated ones.
    """
    k, row = resolve_chart(z)
    expected = {cycle_name(n, k): n for n in row.variables}
    missing = sorted(set(expected) - set(assignment))
    if missing:
        raise MissingVariable(f"assignment lacks coefficients: {', '.join(missing)}")
    extra = sorted(set(assignment) - set(expected))
    if extra:
        raise ValueError(f"assignment has unknown coefficients: {', '.join(extra)}")
    values = {base: int(assignment[rot]) % p for rot, base in expected.items()}
    for name, val in values.items():
        if name.endswith("s") and val == 0:
            raise RelationViolation(
                f"unit coefficient {cycle_name(name, k)} must be nonzero"
            )
    for gen in row.relations:
        acc = 0
        for coeff, p_pow, names in gen:
            if p_pow:  # p is zero on the mod-p fiber
                continue
            term = coeff
            for n in names:
                term = term * values[n]
            acc += term
        if acc % p:
            raise RelationViolation(
                f"relation {_pretty_generator(gen)} fails modulo {p}"
            )
    cells = []
    for i in range(3):
        cur = []
        for kk in range(3):
            acc = zero(p)
            for nums, dens, v_pow, vp_pow in row.entries[i][kk]:
                c = 1
                for n in nums:
                    c = c * values[n] % p
                for n in dens:
                    c = c * pow(values[n], -1, p) % p
                acc = acc + LaurentPoly.make({v_pow + vp_pow: c}, p)
            cur.append(acc)
        cells.append(cur)
    mat = LaurentMatrix.make(cells, p)
    if k:
        rot = OMEGA_ROT**k
        mat = weyl_matrix(rot, p) * mat * weyl_matrix(rot.inverse(), p)
    return mat


def cell_assignment(z: AffElt, rng: random.Random, p: int) -> dict:
    """Random assignment on the exact-coset locus of the chart of z.

    Unit coefficients are sampled from the nonzero residues, coefficients that
    vanish on the locus are zero, and the remaining ones are unconstrained.
    """
    k, row = resolve_chart(z)
    out = {}
    for name in row.variables:
        if name.endswith("s"):
            val = rng.randrange(1, p)
        elif name in row.forced:
            val = 0
        else:
            val = rng.randrange(p)
        out[cycle_name(name, k)] = val
    return out


# ---------------------------------------------------------------------------
# double coset decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShapeResult:
    """Certified decomposition A = left * monomial(elt) * right with left and
    right in the Iwahori subgroup."""

    elt: AffElt
    valuations: tuple
    left: LaurentMatrix
    right: LaurentMatrix


def _elementary(i: int, j: int, c: LaurentPoly, p) -> LaurentMatrix:
    rows = [[zero(p) for _ in range(3)] for _ in range(3)]
    for d in range(3):
        rows[d][d] = LaurentPoly.make({0: 1}, p)
    rows[i][j] = rows[i][j] + c
    return LaurentMatrix.make(rows, p)


def iwahori_decompose(a: LaurentMatrix) -> ShapeResult:
    """Locate the Iwahori double coset of an invertible Laurent matrix.

    Uses valuation-greedy elimination: repeatedly pick the entry of minimal
    v-valuation (breaking ties towards the largest row, then the smallest
    column, which keeps every clearing factor inside the Iwahori subgroup)
    and clear its row and column with monomial row/column operations.  The
    result is certified exactly: left * monomial * right == a with both
    witnesses Iwahori.

    Integral matrices (no negative valuations) must be upper triangular mod
    v, otherwise NotIwahoriAdapted is raised; matrices with genuinely Laurent
    entries are decomposed unconditionally.  Raises SingularMatrixError for a
    vanishing determinant and ValueError when no prime modulus is set.
    """
    p = a.modulus
    if p is None or p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise ValueError("decomposition requires entries over a prime field")
    det = a.det()
    if det.is_zero():
        raise SingularMatrixError("matrix has zero determinant")
    min_val = a.min_valuation()
    if min_val >= 0:
        for i in range(3):
            for k in range(3):
                if i > k and a[i, k].coeff(0) != 0:
                    raise NotIwahoriAdapted(
                        f"integral matrix has a unit below the diagonal at ({i},{k})"
                    )
    # Junk threshold: strictly above any possible pivot valuation.
    n_clear = 3 * max(0, a.max_degree()) - 2 * min(0, min_val) + 4
    work = [[a[i, k] for k in range(3)] for i in range(3)]
    left = LaurentMatrix.identity(p)
    right = LaurentMatrix.identity(p)
    rem_rows = [0, 1, 2]
    rem_cols = [0, 1, 2]
    perm = [None] * 3
    nu = [None] * 3
    for _ in range(3):
        cands = [
            (work[i][k].valuation(), i, k)
            for i in rem_rows
            for k in rem_cols
            if not work[i][k].is_zero()
        ]
        if not cands:
            raise SingularMatrixError("matrix is rank deficient")
        m = min(v for v, _, _ in cands)
        i0 = max(i for v, i, _ in cands if v == m)
        k0 = min(k for v, i, k in cands if v == m and i == i0)
        pivot_lead_inv = pow(work[i0][k0].leading(), -1, p)
        for i in rem_rows:
            if i == i0:
                continue
            while not work[i][k0].is_zero() and work[i][k0].valuation() < n_clear:
                e = work[i][k0].valuation()
                c = LaurentPoly.make(
                    {e - m: work[i][k0].leading() * pivot_lead_inv % p}, p
                )
                for kk in range(3):
                    work[i][kk] = work[i][kk] - c * work[i0][kk]
                left = left * _elementary(i, i0, c, p)
        for k in rem_cols:
            if k == k0:
                continue
            while not work[i0][k].is_zero() and work[i0][k].valuation() < n_clear:
                e = work[i0][k].valuation()
                c = LaurentPoly.make(
                    {e - m: work[i0][k].leading() * pivot_lead_inv % p}, p
                )
                for ii in range(3):
                    work[ii][k] = work[ii][k] - work[ii][k0] * c
                right = _elementary(k0, k, c, p) * right
        rem_rows.remove(i0)
        rem_cols.remove(k0)
        perm[k0] = i0
        nu[i0] = m
    elt = AffElt(tuple(nu), tuple(perm))
    if sum(nu) != det.valuation():
        raise ConsistencyError(
            "pivot valuations disagree with the determinant valuation"
        )
    mono = weyl_matrix(elt, p)
    residue = weyl_matrix(elt.inverse(), p) * LaurentMatrix.make(work, p)
    if not residue.is_iwahori():
        raise ConsistencyError("elimination residue left the Iwahori subgroup")
    right_wit = residue * right
    if not left.is_iwahori() or not right_wit.is_iwahori():
        raise ConsistencyError("witness factors left the Iwahori subgroup")
    if left * mono * right_wit != a:
        raise ConsistencyError("witness factorization does not reproduce the input")
    return ShapeResult(elt=elt, valuations=elt.trans, left=left, right=right_wit)


def random_iwahori(rng: random.Random, p: int, degree: int = 2) -> LaurentMatrix:
    """Random element of the Iwahori subgroup: polynomial entries up to the
    given degree, unit diagonal and zero below the diagonal modulo v."""
    rows = []
    for i in range(3):
        cur = []
        for k in range(3):
            terms = {}
            lo = 1 if i > k else 0
            for e in range(lo, degree + 1):
                terms[e] = rng.randrange(p)
            if i == k:
                terms[0] = rng.randrange(1, p)
            cur.append(LaurentPoly.make(terms, p))
        rows.append(cur)
    return LaurentMatrix.make(rows, p)


# ---------------------------------------------------------------------------
# shapes of fixed points and order plumbing
# ---------------------------------------------------------------------------


def shape_fixed(y: ProductElt, w_tau: ProductElt) -> ProductElt:
    """Shape of a torus-fixed point relative to a monomial type: the
    componentwise quotient w_tau^{-1} * y."""
    if y.f != w_tau.f:
        raise ValueError("mismatched numbers of components")
    return ProductElt(
        tuple(w.inverse() * x for w, x in zip(w_tau.parts, y.parts))
    )


def product_star(x: ProductElt) -> ProductElt:
    """Componentwise star involution."""
    return ProductElt(tuple(part.star() for part in x.parts))


def _parts(x):
    return x.parts if isinstance(x, ProductElt) else (x,)


def in_admissible(shape, convention: str = ANTIDOMINANT) -> bool:
    """Componentwise membership in the admissible set of the convention."""
    adm = admissible_set(convention)
    return all(part in adm for part in _parts(shape))


def semicont_leq(shape_a, shape_b, convention: str = ANTIDOMINANT) -> bool:
    """Componentwise Bruhat comparison shape_a <= shape_b."""
    pa, pb = _parts(shape_a), _parts(shape_b)
    if len(pa) != len(pb):
        raise ValueError("mismatched numbers of components")
    return all(bruhat_leq(x, y, convention) for x, y in zip(pa, pb))


def sp_defining_type(sp) -> ProductElt:
    """Monomial type whose shape at the given torus-fixed pair is the
    translation by the inverse-image of the regular dominant cocharacter.

    For a pair with component images w_j, the type is y_j * t_{-w_j^{-1}(2,1,0)};
    the resulting shape t_{w_j^{-1}(2,1,0)} is a translation by a Weyl orbit
    member of (2,1,0), hence star-fixed and admissible.
    """
    from .classify import theta

    parts = []
    for yj, th in zip(sp.y.parts, theta(sp)):
        shift = perm_act(perm_inv(th), ETA)
        parts.append(yj * translation(tuple(-c for c in shift)))
    return ProductElt(tuple(parts))
