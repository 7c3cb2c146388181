"""Sparse Laurent polynomials in one variable v, and 3x3 matrices of them.

Coefficients are exact integers (modulus None) or elements of F_p (modulus p).
Series inverses are computed to an explicit truncation order; every consumer
that truncates states the precision it needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SingularMatrixError
from .weyl import AffElt, perm_act, perm_inv


def _norm_coeff(c, modulus):
    return c % modulus if modulus else c


@dataclass(frozen=True)
class LaurentPoly:
    terms: tuple  # sorted tuple of (exponent, coeff) with nonzero coeffs
    modulus: int | None = None

    @classmethod
    def make(cls, terms: dict, modulus=None) -> "LaurentPoly":
        clean = {}
        for e, c in terms.items():
            c = _norm_coeff(c, modulus)
            if c:
                clean[e] = c
        return cls(tuple(sorted(clean.items())), modulus)

    @classmethod
    def const(cls, c, modulus=None) -> "LaurentPoly":
        return cls.make({0: c}, modulus)

    @classmethod
    def v_power(cls, k, modulus=None, coeff=1) -> "LaurentPoly":
        return cls.make({k: coeff}, modulus)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self):
        """Minimal exponent; None for the zero polynomial."""
        return self.terms[0][0] if self.terms else None

    def degree(self):
        return self.terms[-1][0] if self.terms else None

    def coeff(self, e):
        for ee, c in self.terms:
            if ee == e:
                return c
        return 0

    def leading(self):
        """Coefficient of the lowest-order term."""
        return self.terms[0][1] if self.terms else 0

    def __add__(self, other):
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return LaurentPoly.make(d, self.modulus)

    def __sub__(self, other):
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) - c
        return LaurentPoly.make(d, self.modulus)

    def __neg__(self):
        return LaurentPoly.make({e: -c for e, c in self.terms}, self.modulus)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly.make({e: c * other for e, c in self.terms}, self.modulus)
        d = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                d[e] = d.get(e, 0) + c1 * c2
        return LaurentPoly.make(d, self.modulus)

    __rmul__ = __mul__

    def shift(self, k) -> "LaurentPoly":
        """Multiply by v**k."""
        return LaurentPoly(tuple((e + k, c) for e, c in self.terms), self.modulus)

    def truncate(self, T) -> "LaurentPoly":
        """Drop all terms of exponent >= T."""
        return LaurentPoly(tuple((e, c) for e, c in self.terms if e < T), self.modulus)

    def change_modulus(self, modulus) -> "LaurentPoly":
        return LaurentPoly.make(self.as_dict(), modulus)

    def subs_int(self, v_value: int) -> int:
        acc = 0
        for e, c in self.terms:
            if e < 0:
                raise ValueError("negative exponent in integer evaluation")
            acc += c * v_value ** e
        return _norm_coeff(acc, self.modulus)

    def inverse_series(self, T) -> "LaurentPoly":
        """Inverse modulo v**(valuation + T) for a poly with unit lowest term.

        Requires an invertible leading coefficient, which over F_p means any
        nonzero one.
        """
        if self.is_zero():
            raise ZeroDivisionError("inverting the zero polynomial")
        m = self.valuation()
        u = {e - m: c for e, c in self.terms}  # valuation-0 unit series
        c0 = u[0]
        if self.modulus:
            c0_inv = pow(c0, -1, self.modulus)
        else:
            if abs(c0) != 1:
                raise ZeroDivisionError("integer leading coefficient is not a unit")
            c0_inv = c0
        inv = {0: c0_inv}
        for n in range(1, T):
            acc = 0
            for k, ck in u.items():
                if 0 < k <= n:
                    acc += ck * inv.get(n - k, 0)
            inv[n] = _norm_coeff(-c0_inv * acc, self.modulus)
        return LaurentPoly.make(inv, self.modulus).shift(-m)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in self.terms:
            if e == 0:
                bits.append(f"{c}")
            elif e == 1:
                bits.append(f"{c}*v")
            else:
                bits.append(f"{c}*v^{e}")
        return " + ".join(bits)


def zero(modulus=None):
    return LaurentPoly((), modulus)


def one(modulus=None):
    return LaurentPoly.const(1, modulus)


@dataclass(frozen=True)
class LaurentMatrix:
    rows: tuple  # 3x3 nested tuples of LaurentPoly
    modulus: int | None = None

    @classmethod
    def make(cls, rows, modulus=None) -> "LaurentMatrix":
        return cls(tuple(tuple(r) for r in rows), modulus)

    @classmethod
    def identity(cls, modulus=None) -> "LaurentMatrix":
        o, z = one(modulus), zero(modulus)
        return cls.make([[o, z, z], [z, o, z], [z, z, o]], modulus)

    def __getitem__(self, ik):
        i, k = ik
        return self.rows[i][k]

    def __mul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        out = []
        for i in range(3):
            row = []
            for k in range(3):
                acc = zero(self.modulus)
                for j in range(3):
                    acc = acc + self.rows[i][j] * other.rows[j][k]
                row.append(acc)
            out.append(row)
        return LaurentMatrix.make(out, self.modulus)

    def det(self) -> LaurentPoly:
        r = self.rows
        return (
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        )

    def map_entries(self, fn) -> "LaurentMatrix":
        return LaurentMatrix.make(
            [[fn(self.rows[i][k]) for k in range(3)] for i in range(3)], self.modulus
        )

    def change_modulus(self, modulus) -> "LaurentMatrix":
        out = self.map_entries(lambda f: f.change_modulus(modulus))
        return LaurentMatrix(out.rows, modulus)

    def min_valuation(self):
        vals = [
            self.rows[i][k].valuation()
            for i in range(3)
            for k in range(3)
            if not self.rows[i][k].is_zero()
        ]
        if not vals:
            raise SingularMatrixError("zero matrix")
        return min(vals)

    def max_degree(self):
        degs = [
            self.rows[i][k].degree()
            for i in range(3)
            for k in range(3)
            if not self.rows[i][k].is_zero()
        ]
        return max(degs) if degs else 0

    def is_iwahori(self) -> bool:
        """Upper triangular with unit diagonal after reduction modulo v."""
        for i in range(3):
            for k in range(3):
                c0 = self.rows[i][k].coeff(0)
                v = self.rows[i][k].valuation()
                if v is not None and v < 0:
                    return False
                if i > k and c0 != 0:
                    return False
                if i == k and c0 == 0:
                    return False
        return True

    def __repr__(self):
        return "[" + ",\n ".join(str(list(r)) for r in self.rows) + "]"


def weyl_matrix(x: AffElt, modulus=None) -> LaurentMatrix:
    """The embedding into GL3 of Laurent polynomials.

    t_nu maps to diag(v^nu) and a permutation w to the matrix with a one in
    row w(k), column k; the product realizes t_nu * w.
    """
    rows = [[zero(modulus) for _ in range(3)] for _ in range(3)]
    for k in range(3):
        i = x.perm[k]
        rows[i][k] = LaurentPoly.v_power(x.trans[i], modulus)
    return LaurentMatrix.make(rows, modulus)


def matrix_to_weyl(m: LaurentMatrix) -> AffElt:
    """Inverse of weyl_matrix on monomial matrices (one term per row/column)."""
    perm = [None] * 3
    nu = [None] * 3
    for k in range(3):
        hits = [i for i in range(3) if not m.rows[i][k].is_zero()]
        if len(hits) != 1 or len(m.rows[hits[0]][k].terms) != 1:
            raise ValueError("not a monomial matrix")
        i = hits[0]
        perm[k] = i
        nu[i] = m.rows[i][k].valuation()
    return AffElt(tuple(nu), tuple(perm))
