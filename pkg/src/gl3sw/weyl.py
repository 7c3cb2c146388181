"""Extended affine Weyl group of GL3 with exact integer arithmetic.

Elements are written t_nu * w with nu in Z^3 (the character lattice of the
diagonal torus) and w a permutation of {0,1,2}.  The group law is

    (t_nu w)(t_mu u) = t_{nu + w(mu)} (w u),      w(mu)_i = mu_{w^{-1}(i)}.

Two base-alcove conventions are carried in parallel.  The "dominant" system
has simple reflections {ALPHA, BETA, GAMMA0} where GAMMA0 = t_{(1,0,-1)} w0
reflects through the highest-root wall of the dominant base alcove; the
"antidominant" system replaces GAMMA0 by GAMMA = t_{(-1,0,1)} w0.  Each
convention has its own length function, Bruhat order and admissible set.

The length-zero subgroup for the dominant convention is generated by
DELTA = t_{(1,0,0)} sigma (sigma the 3-cycle 0->1->2->0); for the
antidominant convention by DELTA_ANTI = t_{(-1,0,0)} sigma.  Conjugation by
DELTA_ANTI cycles the antidominant generators ALPHA -> BETA -> GAMMA -> ALPHA,
which is the symmetry used by the chart tables in the shapes module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

Vec = tuple  # length-3 tuple of ints (or Fractions in geometric helpers)

IDENTITY_PERM = (0, 1, 2)
W0_PERM = (2, 1, 0)
SIGMA_PERM = (1, 2, 0)  # the 3-cycle 0 -> 1 -> 2 -> 0

# positive roots eps_i - eps_j of GL3, as index pairs i < j
POS_ROOTS = ((0, 1), (0, 2), (1, 2))

ETA = (2, 1, 0)
UNIT = (1, 1, 1)


def perm_mul(u, v):
    """(u v)(i) = u(v(i))."""
    return (u[v[0]], u[v[1]], u[v[2]])


def perm_inv(u):
    out = [0, 0, 0]
    for i, ui in enumerate(u):
        out[ui] = i
    return tuple(out)


def perm_act(w, mu):
    """Natural action on the character lattice: (w mu)_i = mu_{w^{-1}(i)}."""
    out = [0, 0, 0]
    for i in range(3):
        out[w[i]] = mu[i]
    return tuple(out)


def perm_sign(w):
    s = 1
    for i, j in POS_ROOTS:
        if w[i] > w[j]:
            s = -s
    return s


ALL_PERMS = tuple(itertools.permutations(range(3)))


def vec_add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vec_sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vec_neg(a):
    return (-a[0], -a[1], -a[2])


def vec_scale(k, a):
    return (k * a[0], k * a[1], k * a[2])


def vec_dot_coroot(mu, root):
    """Pairing <mu, alpha_{ij}^vee> = mu_i - mu_j."""
    i, j = root
    return mu[i] - mu[j]


@dataclass(frozen=True)
class AffElt:
    """An element t_trans * perm of the extended affine Weyl group."""

    trans: tuple
    perm: tuple

    def __mul__(self, other: "AffElt") -> "AffElt":
        return AffElt(
            vec_add(self.trans, perm_act(self.perm, other.trans)),
            perm_mul(self.perm, other.perm),
        )

    def inverse(self) -> "AffElt":
        winv = perm_inv(self.perm)
        return AffElt(vec_neg(perm_act(winv, self.trans)), winv)

    def __pow__(self, n: int) -> "AffElt":
        if n < 0:
            return self.inverse() ** (-n)
        out = IDENTITY
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def act(self, mu):
        """Unscaled affine action on the lattice: x(mu) = trans + perm(mu)."""
        return vec_add(self.trans, perm_act(self.perm, mu))

    def star(self) -> "AffElt":
        """The anti-automorphism t_nu w -> w^{-1} t_nu.

        It swaps the two length functions (len of the image in the other
        convention equals len of the input) and maps each admissible set
        onto the other one.
        """
        winv = perm_inv(self.perm)
        return AffElt(perm_act(winv, self.trans), winv)

    def omega(self) -> int:
        """Total degree of the translation part: the grading by W~ / W_a."""
        return self.trans[0] + self.trans[1] + self.trans[2]

    def is_translation(self) -> bool:
        return self.perm == IDENTITY_PERM

    def __repr__(self):
        if self.perm == IDENTITY_PERM:
            return f"t{self.trans}"
        return f"t{self.trans}*w{self.perm}"


IDENTITY = AffElt((0, 0, 0), IDENTITY_PERM)


def translation(nu) -> AffElt:
    return AffElt(tuple(nu), IDENTITY_PERM)


def finite(w) -> AffElt:
    return AffElt((0, 0, 0), tuple(w))


W0 = finite(W0_PERM)

# finite simple reflections (shared by both conventions)
ALPHA = finite((1, 0, 2))  # reflection in eps1 - eps2
BETA = finite((0, 2, 1))  # reflection in eps2 - eps3

# affine simple reflections
GAMMA0 = AffElt((1, 0, -1), W0_PERM)  # dominant-convention affine generator
GAMMA = AffElt((-1, 0, 1), W0_PERM)  # antidominant-convention affine generator

# length-zero generators (base alcove stabilizers)
DELTA = AffElt((1, 0, 0), SIGMA_PERM)
DELTA_ANTI = AffElt((-1, 0, 0), SIGMA_PERM)

T_UNIT = translation(UNIT)  # t_{(1,1,1)} = DELTA**3

W_TILDE_H = W0 * translation(vec_neg(ETA))  # w0 t_{-eta} = t_{(0,-1,-2)} w0

DOMINANT = "dominant"
ANTIDOMINANT = "antidominant"

GENS = {
    DOMINANT: (ALPHA, BETA, GAMMA0),
    ANTIDOMINANT: (ALPHA, BETA, GAMMA),
}


def length(x: AffElt, convention: str = DOMINANT) -> int:
    """Iwahori-Matsumoto length for the chosen base-alcove convention."""
    winv = perm_inv(x.perm)
    shift = -1 if convention == DOMINANT else 1
    total = 0
    for i, j in POS_ROOTS:
        pairing = x.trans[i] - x.trans[j]
        if winv[i] < winv[j]:
            total += abs(pairing)
        else:
            total += abs(pairing + shift)
    return total


def alcove_barycenter(convention: str = DOMINANT):
    b = (Fraction(2, 3), Fraction(1, 3), Fraction(0))
    if convention == DOMINANT:
        return b
    return tuple(-c for c in b)


def length_by_separation(x: AffElt, convention: str = DOMINANT) -> int:
    """Count root hyperplanes separating the base alcove from its image.

    Independent of the closed formula in length(); used as a test oracle and
    kept here because the CLI exposes it for spot checks.
    """
    b = alcove_barycenter(convention)
    xb = vec_add(x.trans, perm_act(x.perm, b))
    count = 0
    for root in POS_ROOTS:
        lo = vec_dot_coroot(b, root)
        hi = vec_dot_coroot(xb, root)
        if lo > hi:
            lo, hi = hi, lo
        # integers strictly between lo and hi; pairings are never integral
        count += max(0, _floor(hi) - _floor(lo))
    return count


def _floor(q):
    return q.numerator // q.denominator if isinstance(q, Fraction) else q


def omega_split(x: AffElt, convention: str = DOMINANT):
    """Write x = rho * u with rho length-zero and u in W_a; return (k, u).

    rho is DELTA**k for the dominant convention and DELTA_ANTI**(-k) for the
    antidominant one, where k = x.omega().
    """
    k = x.omega()
    if convention == DOMINANT:
        u = DELTA ** (-k) * x
    else:
        u = DELTA_ANTI ** k * x
    assert u.omega() == 0
    return k, u


def right_descents(u: AffElt, convention: str):
    lu = length(u, convention)
    return [s for s in GENS[convention] if length(u * s, convention) < lu]


def _bruhat_wa(x: AffElt, y: AffElt, convention: str, cache: dict) -> bool:
    if x == y:
        return True
    lx = length(x, convention)
    ly = length(y, convention)
    if lx >= ly:
        return False
    key = (x, y)
    hit = cache.get(key)
    if hit is not None:
        return hit
    s = right_descents(y, convention)[0]
    ys = y * s
    xs = x * s
    if length(xs, convention) < lx:
        res = _bruhat_wa(xs, ys, convention, cache)
    else:
        res = _bruhat_wa(x, ys, convention, cache)
    cache[key] = res
    return res


_BRUHAT_CACHE = {DOMINANT: {}, ANTIDOMINANT: {}}


def bruhat_leq(x: AffElt, y: AffElt, convention: str = DOMINANT) -> bool:
    """Bruhat order for the chosen base alcove; false across W_a-cosets."""
    if x.omega() != y.omega():
        return False
    _, ux = omega_split(x, convention)
    _, uy = omega_split(y, convention)
    return _bruhat_wa(ux, uy, convention, _BRUHAT_CACHE[convention])


def reduced_word(u: AffElt, convention: str = DOMINANT):
    """A reduced word (list of simple generators) for u in W_a."""
    if u.omega() != 0:
        raise ValueError("reduced words only for affine Weyl group elements")
    word = []
    while u != IDENTITY:
        s = right_descents(u, convention)[0]
        word.append(s)
        u = u * s
    word.reverse()
    return word


def p_dot(x: AffElt, mu, p: int):
    """The p-scaled dot action: t_nu w . mu = p nu + w(mu + eta) - eta."""
    return vec_sub(vec_add(vec_scale(p, x.trans), perm_act(x.perm, vec_add(mu, ETA))), ETA)


def p_dot_unapply(x: AffElt, v, p: int):
    """Solve the p-scaled dot action: the unique u with x .p u = v."""
    winv = perm_inv(x.perm)
    inner = vec_add(vec_sub(v, vec_scale(p, x.trans)), ETA)
    return vec_sub(perm_act(winv, inner), ETA)


def _coset_elements(target_omega: int, convention: str, max_len: int):
    """All elements of the W_a-coset with the given grading and length <= max_len."""
    out = []
    span = range(-max_len - 2, max_len + 3)
    for a in span:
        for b in span:
            c = target_omega - a - b
            if abs(c) > max_len + 2:
                continue
            nu = (a, b, c)
            for w in ALL_PERMS:
                x = AffElt(nu, w)
                if length(x, convention) <= max_len:
                    out.append(x)
    return out


_ADM_CACHE = {}


def admissible_set(convention: str = DOMINANT):
    """The set of elements Bruhat-below some t_{s(eta)}, s finite Weyl."""
    cached = _ADM_CACHE.get(convention)
    if cached is not None:
        return cached
    tops = [translation(perm_act(w, ETA)) for w in ALL_PERMS]
    top_len = length(tops[0], convention)
    adm = frozenset(
        x
        for x in _coset_elements(sum(ETA), convention, top_len)
        if any(bruhat_leq(x, t, convention) for t in tops)
    )
    _ADM_CACHE[convention] = adm
    return adm


# --- restricted-alcove representatives -------------------------------------
#
# The dominant p-restricted classes modulo X^0 = Z*(1,1,1): three "lower"
# classes DELTA**k (image alcove = base alcove) and three "upper" classes
# W_TILDE_H * DELTA**k (image = the upper restricted alcove).  The six finite
# parts exhaust the finite Weyl group, so the class of a representative is
# determined by its finite part.


def restricted_reps():
    reps = [DELTA ** k for k in range(3)]
    reps += [W_TILDE_H * DELTA ** k for k in range(3)]
    return reps


def restricted_rep_by_fin(fin):
    for rep in restricted_reps():
        if rep.perm == tuple(fin):
            return rep
    raise ValueError(f"no restricted class with finite part {fin}")


def is_upper_fin(fin) -> bool:
    """True when the restricted class with this finite part is the upper one."""
    return perm_sign(tuple(fin)) == -1


# --- f-fold products --------------------------------------------------------


@dataclass(frozen=True)
class ProductElt:
    """An element of the f-fold product group, indexed by Z/f."""

    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    @property
    def f(self) -> int:
        return len(self.parts)

    def __mul__(self, other: "ProductElt") -> "ProductElt":
        assert self.f == other.f
        return ProductElt(tuple(a * b for a, b in zip(self.parts, other.parts)))

    def inverse(self) -> "ProductElt":
        return ProductElt(tuple(a.inverse() for a in self.parts))

    def pi_twist(self) -> "ProductElt":
        """Rotate embedding indices: (pi x)_j = x_{j+1}."""
        f = self.f
        return ProductElt(tuple(self.parts[(j + 1) % f] for j in range(f)))

    def omega(self):
        return tuple(a.omega() for a in self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, j):
        return self.parts[j % self.f]


def product_identity(f: int) -> ProductElt:
    return ProductElt((IDENTITY,) * f)
