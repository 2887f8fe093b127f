"""Spherical Hecke algebras as Laurent polynomial algebras.

Groups and generator conventions:

* tag "inert_F":   H(GL2(F)), F the unramified quadratic extension;
  generators T = ch(K t(1,0) K) and S^+- = ch(t(1,1) K)^+-.
* tag "split_pair": H(GL2(Q_p) x GL2(Q_p)); generators T1, S1^+-, T2, S2^+-.
* tag "gstar_inert": the determinant-in-Q_p subgroup; its spherical algebra
  is isomorphic to the inert one (same double-coset monoid), carried on the
  same (T, S) variables.
* tag "gstar_split": realized inside the split-pair algebra as the balanced
  subalgebra (each monomial T1^a S1^b T2^c S2^d with a + 2b = c + 2d,
  i.e. equal determinant valuations in both components); the embedding into
  the split pair algebra is then literally the identity on coefficients.

The Satake transform lands in symmetric coordinates with only rational
coefficients: inert T -> p(A + B), S -> AB, written in e1 = A + B and
e2 = AB; split T_i -> u_i + v_i, S_i -> u_i v_i / p in Hecke-normalized
parameters, written in e1_i = u_i + v_i and e2_i = u_i v_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exactnum import (
    Lau,
    NotInImage,
    fr_to_str,
    in_z_inv_p,
)

INERT_VARS = ("T", "S")
SPLIT_VARS = ("T1", "S1", "T2", "S2")

GROUPS = ("inert_F", "split_pair", "gstar_inert", "gstar_split")


class NotMember(ValueError):
    """Ideal membership failed; carries the irreducible remainder."""

    def __init__(self, msg, remainder=None):
        super().__init__(msg)
        self.remainder = remainder


def _vars_for(group: str):
    return INERT_VARS if group in ("inert_F", "gstar_inert") else SPLIT_VARS


class HeckeElem:
    """Element of a spherical Hecke algebra (sparse Laurent polynomial)."""

    __slots__ = ("group", "poly")

    def __init__(self, group: str, poly: Lau):
        if group not in GROUPS:
            raise ValueError(f"unknown group tag {group!r}")
        if poly.vars != _vars_for(group):
            raise ValueError("variable tuple does not match group tag")
        for e in poly.terms:
            t_exps = e[::2]
            if any(t < 0 for t in t_exps):
                raise ValueError("negative exponent on a T generator")
        if group == "gstar_split":
            for e in poly.terms:
                if e[0] + 2 * e[1] != e[2] + 2 * e[3]:
                    raise ValueError("gstar_split element is not determinant balanced")
        self.group = group
        self.poly = poly

    # -- constructors --------------------------------------------------------

    @classmethod
    def one(cls, group: str) -> "HeckeElem":
        return cls(group, Lau.const(_vars_for(group), 1))

    @classmethod
    def zero(cls, group: str) -> "HeckeElem":
        return cls(group, Lau(_vars_for(group)))

    @classmethod
    def gen(cls, group: str, name: str, power: int = 1) -> "HeckeElem":
        return cls(group, Lau.var(_vars_for(group), name, power))

    @classmethod
    def monomial(cls, group: str, exps: Sequence[int], coef=1) -> "HeckeElem":
        return cls(group, Lau.monomial(_vars_for(group), tuple(exps), coef))

    # -- algebra --------------------------------------------------------------

    def _chk(self, other) -> "HeckeElem":
        if isinstance(other, HeckeElem):
            if other.group != self.group:
                raise ValueError("mixed Hecke group tags")
            return other
        return HeckeElem(self.group, Lau.const(self.poly.vars, other))

    def __add__(self, other):
        return HeckeElem(self.group, self.poly + self._chk(other).poly)

    __radd__ = __add__

    def __sub__(self, other):
        return HeckeElem(self.group, self.poly - self._chk(other).poly)

    def __rsub__(self, other):
        return self._chk(other) - self

    def __neg__(self):
        return HeckeElem(self.group, -self.poly)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return HeckeElem(self.group, self.poly * other)
        return HeckeElem(self.group, self.poly * self._chk(other).poly)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return HeckeElem(self.group, self.poly ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.poly == Lau.const(self.poly.vars, other)
        return isinstance(other, HeckeElem) and self.group == other.group and self.poly == other.poly

    def __hash__(self):
        return hash((self.group, self.poly))

    def is_integral(self, p: int) -> bool:
        """All coefficients in Z[1/p]."""
        return self.poly.coeffs_in_z_inv_p(p)

    def __repr__(self):
        return f"Hecke[{self.group}]({self.poly!r})"

    def to_json(self) -> dict:
        terms = []
        for e, c in sorted(self.poly.terms.items()):
            d = {v: k for v, k in zip(self.poly.vars, e)}
            d["coef"] = fr_to_str(c)
            terms.append(d)
        return {"group": self.group, "terms": terms}

    @classmethod
    def from_json(cls, d: Mapping) -> "HeckeElem":
        vs = _vars_for(d["group"])
        poly = Lau(vs)
        for t in d["terms"]:
            poly = poly + Lau.monomial(vs, tuple(int(t.get(v, 0)) for v in vs), Fraction(t["coef"]))
        return cls(d["group"], poly)


# ---------------------------------------------------------------------------
# Satake transform and its inverse


def satake(h: HeckeElem, p: int) -> Lau:
    """Satake transform into symmetric coordinates, as a ring homomorphism.

    inert:  T^a S^b -> p^a e1^a e2^b
    split:  T1^a S1^b T2^c S2^d -> p^-(b+d) e1_1^a e2_1^b e1_2^c e2_2^d
    """
    if h.group in ("inert_F", "gstar_inert"):
        out = Lau(("e1", "e2"))
        for (a, b), c in h.poly.terms.items():
            out = out + Lau.monomial(("e1", "e2"), (a, b), c * Fraction(p) ** a)
        return out
    evars = ("e1_1", "e2_1", "e1_2", "e2_2")
    out = Lau(evars)
    for (a, b, cc, d), c in h.poly.terms.items():
        out = out + Lau.monomial(evars, (a, b, cc, d), c * Fraction(p) ** (-(b + d)))
    return out


def inv_satake(f: Lau, group: str, p: int) -> HeckeElem:
    """Inverse Satake transform; raises NotInImage when f is not expressible.

    Input is a Laurent polynomial in the symmetric coordinates (e1, e2) or
    (e1_1, e2_1, e1_2, e2_2).  e1-exponents must be non-negative; for
    gstar_split the monomials must be determinant balanced.
    """
    vs = _vars_for(group)
    poly = Lau(vs)
    if group in ("inert_F", "gstar_inert"):
        if f.vars != ("e1", "e2"):
            raise ValueError("expected inert symmetric coordinates")
        for (a, b), c in f.terms.items():
            if a < 0:
                raise NotInImage("negative power of e1")
            poly = poly + Lau.monomial(vs, (a, b), c * Fraction(p) ** (-a))
        return HeckeElem(group, poly)
    if f.vars != ("e1_1", "e2_1", "e1_2", "e2_2"):
        raise ValueError("expected split symmetric coordinates")
    for (a, b, cc, d), c in f.terms.items():
        if a < 0 or cc < 0:
            raise NotInImage("negative power of e1")
        if group == "gstar_split" and a + 2 * b != cc + 2 * d:
            raise NotInImage("monomial not determinant balanced")
        poly = poly + Lau.monomial(vs, (a, b, cc, d), c * Fraction(p) ** (b + d))
    return HeckeElem(group, poly)


def involution(h: HeckeElem) -> HeckeElem:
    """xi -> xi((-)^(-1)): T -> T S^-1, S -> S^-1 on each component."""
    vs = h.poly.vars
    out = Lau(vs)
    for e, c in h.poly.terms.items():
        e2 = list(e)
        for i in range(0, len(vs), 2):
            t, s = e2[i], e2[i + 1]
            e2[i], e2[i + 1] = t, -s - t
        out = out + Lau.monomial(vs, tuple(e2), c)
    return HeckeElem(h.group, out)


def monomial_det_val(group: str, exps: Sequence[int]) -> int:
    """v_p(det) grading of a monomial: each T carries 1, each S carries 2.
    For split tags this is the first-component value; on determinant
    balanced monomials both components agree."""
    return exps[0] + 2 * exps[1]


# ---------------------------------------------------------------------------
# the complete homogeneous Hecke lifts


def hecke_homog(n: int, group: str, p: int) -> HeckeElem:
    """Unique spherical operator with Satake value the degree-n complete
    homogeneous sum of the parameters: recursion h_n = (T/p) h_(n-1) - S h_(n-2).
    Only meaningful for the inert tags."""
    if group not in ("inert_F", "gstar_inert"):
        raise ValueError("complete homogeneous lifts are used in the inert setting")
    if n < 0:
        return HeckeElem.zero(group)
    a, b = HeckeElem.one(group), HeckeElem.zero(group)  # h_0, h_-1
    if n == 0:
        return a
    T = HeckeElem.gen(group, "T")
    S = HeckeElem.gen(group, "S")
    for _ in range(n):
        a, b = T * a * Fraction(1, p) - S * b, a
    return a


# ---------------------------------------------------------------------------
# Euler polynomials


@dataclass
class EulerPoly:
    """Polynomial in X with Hecke-operator coefficients; constant term 1."""

    group: str
    coeffs: list  # HeckeElem, degree 0 first

    def __post_init__(self):
        assert self.coeffs[0] == HeckeElem.one(self.group)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def at_one(self) -> HeckeElem:
        out = HeckeElem.zero(self.group)
        for c in self.coeffs:
            out = out + c
        return out

    def involute(self) -> "EulerPoly":
        return EulerPoly(self.group, [involution(c) for c in self.coeffs])

    def involute_at_one(self) -> HeckeElem:
        return self.involute().at_one()

    def satake_in_x(self, p: int) -> Lau:
        """Theta applied coefficientwise, as a polynomial in X over the
        symmetric coordinates."""
        first = satake(self.coeffs[0], p)
        xvars = first.vars + ("X",)
        out = Lau(xvars)
        for k, c in enumerate(self.coeffs):
            sc = satake(c, p).extend_vars(xvars)
            out = out + sc * Lau.var(xvars, "X") ** k
        return out

    def to_json(self) -> dict:
        return {"group": self.group, "coeffs": [c.to_json() for c in self.coeffs]}


def gstar_gen(name: str, group: str, p: int) -> HeckeElem:
    """G* generators in their carried representation.

    T*(p) and S*(p) are T, S (inert) or T1 T2, S1 S2 (split); T*(p^2) is
    the full determinant-valuation-2 operator: T^2 - p^2 S (inert) or
    (T1^2 - p S1)(T2^2 - p S2) (split).
    """
    if group == "gstar_inert":
        T = HeckeElem.gen(group, "T")
        S = HeckeElem.gen(group, "S")
        if name == "Tstar":
            return T
        if name == "Sstar":
            return S
        if name == "T2star":
            return T * T - S * (p ** 2)
    elif group == "gstar_split":
        T1 = Lau.var(SPLIT_VARS, "T1")
        S1 = Lau.var(SPLIT_VARS, "S1")
        T2 = Lau.var(SPLIT_VARS, "T2")
        S2 = Lau.var(SPLIT_VARS, "S2")
        if name == "Tstar":
            return HeckeElem(group, T1 * T2)
        if name == "Sstar":
            return HeckeElem(group, S1 * S2)
        if name == "T2star":
            return HeckeElem(group, (T1 * T1 - p * S1) * (T2 * T2 - p * S2))
    raise ValueError(f"unknown G* generator {name!r} for {group!r}")


def euler_poly(kind: str, p: int) -> EulerPoly:
    """The local Euler factor polynomials.

    asai_inert      (1 - (1/p) T X + S X^2)(1 - S X^2) in H(GL2(F));
    standard_F      1 - (1/p) T X + S X^2;
    asai_star_inert the same shape on G*;
    asai_star_split the degree-4 G* factor with the T*(p^2) middle term;
    rs_split        the Rankin-Selberg factor, defined through the
                    interpolation property Theta(P)(p^-s) = L(pi1 x pi2, s)^-1.
    """
    if p == 2:
        raise ValueError("p must be odd")
    if kind in ("asai_inert", "asai_star_inert"):
        group = "inert_F" if kind == "asai_inert" else "gstar_inert"
        one = HeckeElem.one(group)
        T = HeckeElem.gen(group, "T")
        S = HeckeElem.gen(group, "S")
        return EulerPoly(
            group,
            [one, T * Fraction(-1, p), HeckeElem.zero(group), T * S * Fraction(1, p), -(S * S)],
        )
    if kind == "standard_F":
        group = "inert_F"
        one = HeckeElem.one(group)
        T = HeckeElem.gen(group, "T")
        S = HeckeElem.gen(group, "S")
        return EulerPoly(group, [one, T * Fraction(-1, p), S])
    if kind == "rs_split":
        group = "split_pair"
        one = HeckeElem.one(group)
        T1 = HeckeElem.gen(group, "T1")
        S1 = HeckeElem.gen(group, "S1")
        T2 = HeckeElem.gen(group, "T2")
        S2 = HeckeElem.gen(group, "S2")
        return EulerPoly(
            group,
            [
                one,
                T1 * T2 * Fraction(-1, p),
                (T1 * T1 * S2 + S1 * T2 * T2) * Fraction(1, p) - 2 * S1 * S2,
                T1 * T2 * S1 * S2 * Fraction(-1, p),
                S1 * S1 * S2 * S2,
            ],
        )
    if kind == "asai_star_split":
        group = "gstar_split"
        one = HeckeElem.one(group)
        Ts = gstar_gen("Tstar", group, p)
        Ss = gstar_gen("Sstar", group, p)
        T2s = gstar_gen("T2star", group, p)
        return EulerPoly(
            group,
            [
                one,
                Ts * Fraction(-1, p),
                Ts * Ts * Fraction(1, p ** 2) - T2s * Fraction(1, p ** 2) - Ss,
                Ss * Ts * Fraction(-1, p),
                Ss * Ss,
            ],
        )
    raise ValueError(f"unknown Euler polynomial kind {kind!r}")


# ---------------------------------------------------------------------------
# iota: G* Hecke algebra into the Res(GL2) Hecke algebra


def iota_embed(h: HeckeElem) -> HeckeElem:
    """ch(K* g K*) -> ch(K g K); in the carried coordinates this is a retag
    (the split balanced subalgebra sits inside the split pair algebra)."""
    if h.group == "gstar_inert":
        return HeckeElem("inert_F", h.poly)
    if h.group == "gstar_split":
        return HeckeElem("split_pair", h.poly)
    raise ValueError("iota_embed expects a G* element")


def iota_solve(h: HeckeElem) -> HeckeElem:
    """Inverse of iota_embed on its image; NotInImage otherwise."""
    if h.group == "inert_F":
        return HeckeElem("gstar_inert", h.poly)
    if h.group == "split_pair":
        for e in h.poly.terms:
            if e[0] + 2 * e[1] != e[2] + 2 * e[3]:
                raise NotInImage(f"monomial {e} is not determinant balanced")
        return HeckeElem("gstar_split", h.poly)
    raise ValueError("iota_solve expects a big-group element")


# ---------------------------------------------------------------------------
# ideal membership certificates


@dataclass
class HeckeIdealCert:
    """P = gen1 * U + Q * V, verified by exact re-expansion."""

    target: HeckeElem
    gen1_kind: str  # "p-1" or "(p-1)(1-S)"
    Q: HeckeElem
    U: HeckeElem
    V: HeckeElem
    p: int
    verified: bool = False

    def gen1(self) -> HeckeElem:
        group = self.target.group
        if self.gen1_kind == "p-1":
            return HeckeElem.one(group) * (self.p - 1)
        one = HeckeElem.one(group)
        S = HeckeElem.gen(group, "S")
        return (one - S) * (self.p - 1)

    def verify(self) -> bool:
        ok = self.target == self.gen1() * self.U + self.Q * self.V
        self.verified = bool(ok)
        return self.verified

    def to_json(self) -> dict:
        return {
            "target": self.target.to_json(),
            "ideal": [self.gen1_kind, self.Q.to_json()],
            "U": self.U.to_json(),
            "V": self.V.to_json(),
            "verified": self.verified,
        }


def _mod_reduce(h: HeckeElem, m: int) -> dict:
    """Coefficients mod m = p - 1 (p maps to 1, so p-power denominators drop)."""
    out = {}
    for e, c in h.poly.terms.items():
        num = c.numerator % m
        den = c.denominator % m
        # denominator is a p power, p = 1 mod m, so den = 1 mod m
        if den != 1 % m:
            inv = pow(den, -1, m)
            num = num * inv % m
        if num:
            out[e] = num
    return out


def _mod_poly_sub(a: dict, b: dict, m: int) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = (out.get(e, 0) - c) % m
        if v:
            out[e] = v
        elif e in out:
            del out[e]
    return out


def _mod_poly_mul_mono(a: dict, exps, coef: int, m: int, nvars: int) -> dict:
    out = {}
    for e, c in a.items():
        e2 = tuple(x + y for x, y in zip(e, exps))
        v = c * coef % m
        if v:
            out[e2] = v
    return out


def _shift_var(d: dict, var_index: int, k: int) -> dict:
    if k == 0 or not d:
        return dict(d)
    return {tuple(x + (k if i == var_index else 0) for i, x in enumerate(e)): c for e, c in d.items()}


def _mod_divide_principal(P: dict, Q: dict, var_index: int, m: int, nvars: int):
    """Divide P by Q in the Laurent ring (Z/m)[gens^+-] along one variable.

    Requires the leading coefficient of Q in that variable to be a single
    monomial with a unit coefficient mod m (then division with remainder is
    unique since that leading unit makes Q regular).  Returns
    (quotient, remainder) or None when the leading-unit test fails.
    """
    if not Q:
        raise ZeroDivisionError
    if not P:
        return {}, {}
    # normalize away negative powers of the principal variable
    sp = min(e[var_index] for e in P)
    sq = min(e[var_index] for e in Q)
    Ps = _shift_var(P, var_index, -sp)
    Qs = _shift_var(Q, var_index, -sq)
    dq = max(e[var_index] for e in Qs)
    lead = {e: c for e, c in Qs.items() if e[var_index] == dq}
    if len(lead) != 1:
        return None
    ((lexp, lcoef),) = lead.items()
    try:
        linv = pow(lcoef, -1, m)
    except ValueError:
        return None
    quot: dict = {}
    rem = dict(Ps)
    while rem:
        dr = max(e[var_index] for e in rem)
        if dr < dq:
            break
        e = min(e for e in rem if e[var_index] == dr)
        c = rem[e]
        qe = tuple(x - y for x, y in zip(e, lexp))
        qc = c * linv % m
        quot[qe] = (quot.get(qe, 0) + qc) % m
        if quot[qe] == 0:
            del quot[qe]
        rem = _mod_poly_sub(rem, _mod_poly_mul_mono(Qs, qe, qc, m, nvars), m)
    return _shift_var(quot, var_index, sp - sq), _shift_var(rem, var_index, sp)


def _one_minus_s_mod(group: str, m: int) -> dict:
    vs = _vars_for(group)
    one = (0,) * len(vs)
    s = tuple(1 if i == 1 else 0 for i in range(len(vs)))
    return {one: 1 % m, s: (-1) % m}


def _extract_one_minus_s(Q: dict, group: str, m: int):
    """Q = (1 - S)^j * Q1 mod m with (1 - S) exactly divided out."""
    vs = _vars_for(group)
    oms = _one_minus_s_mod(group, m)
    j = 0
    cur = Q
    while True:
        res = _mod_divide_principal(cur, oms, 1, m, len(vs))
        if res is None:
            break
        q, r = res
        if r:
            break
        cur = q
        j += 1
        if not cur:
            break
    return j, cur


def _lift_mod_poly(d: dict, group: str, m: int) -> HeckeElem:
    vs = _vars_for(group)
    poly = Lau(vs)
    for e, c in d.items():
        c = c % m
        if c > m // 2:
            c -= m
        poly = poly + Lau.monomial(vs, e, c)
    return HeckeElem(group, poly)


def _project_balanced(h: HeckeElem, group: str) -> HeckeElem:
    """Keep the determinant-balanced monomials (projection onto the G* image)."""
    vs = h.poly.vars
    out = Lau(vs)
    for e, c in h.poly.terms.items():
        if e[0] + 2 * e[1] == e[2] + 2 * e[3]:
            out = out + Lau.monomial(vs, e, c)
    return HeckeElem(group, out)


def ideal_cert(P: HeckeElem, gen1_kind: str, Q: HeckeElem, p: int) -> HeckeIdealCert:
    """Certificate that P lies in <gen1, Q>, gen1 = (p-1) or (p-1)(1-S).

    Algorithm: reduce mod p - 1 (p becomes invertible, in fact 1); peel off
    the (1 - S)-factors both generators share; divide by the remaining
    unit-T-leading part; lift the quotient and divide the discrepancy by
    gen1 exactly.  NotMember carries the offending remainder.
    """
    group = P.group
    if Q.group != group:
        raise ValueError("mixed groups")
    if not (P.is_integral(p) and Q.is_integral(p)):
        raise ValueError("ideal_cert expects Z[1/p] coefficients")
    m = p - 1
    vs = _vars_for(group)

    if gen1_kind == "(p-1)(1-S)":
        if group not in ("inert_F", "gstar_inert"):
            raise ValueError("the (p-1)(1-S) ideal arises in the inert setting")
        one = HeckeElem.one(group)
        S = HeckeElem.gen(group, "S")
        # both generators carry a (1 - S) factor, so the ideal is
        # (1 - S) * <p-1, Q/(1-S)> and membership reduces to the p-1 case
        try:
            Q1 = HeckeElem(group, Q.poly.exact_div((one - S).poly))
        except Exception as exc:
            raise ValueError("second generator is not divisible by (1 - S)") from exc
        try:
            P1 = HeckeElem(group, P.poly.exact_div((one - S).poly))
        except Exception:
            raise NotMember("target not divisible by (1 - S)", P)
        inner = ideal_cert(P1, "p-1", Q1, p)
        cert = HeckeIdealCert(P, gen1_kind, Q, inner.U, inner.V, p)
        if not cert.verify():
            raise AssertionError("certificate re-expansion failed")
        return cert

    if gen1_kind != "p-1":
        raise ValueError(f"unknown ideal kind {gen1_kind!r}")

    Pm = _mod_reduce(P, m)
    Qm = _mod_reduce(Q, m)
    if not Qm:
        if Pm:
            raise NotMember("Q vanishes mod p-1 but P does not", P)
        V = HeckeElem.zero(group)
        U = _divide_exact_int(P - Q * V, m, group, p)
        cert = HeckeIdealCert(P, gen1_kind, Q, U, V, p)
        assert cert.verify()
        return cert
    j, Q1m = _extract_one_minus_s(Qm, group, m)
    cur = Pm
    for _ in range(j):
        res = _mod_divide_principal(cur, _one_minus_s_mod(group, m), 1, m, len(vs))
        if res is None or res[1]:
            raise NotMember("target lacks the (1 - S) factor mod p-1", _lift_mod_poly(cur, group, m))
        cur = res[0]
    # principal variable: T (index 0); for split also try T2 (index 2)
    quotient = None
    for vi in (0, 2) if len(vs) == 4 else (0,):
        res = _mod_divide_principal(cur, Q1m, vi, m, len(vs))
        if res is not None:
            q, r = res
            if not r:
                quotient = q
                break
            last_rem = r
        else:
            last_rem = None
    if quotient is None:
        rem = _lift_mod_poly(last_rem, group, m) if last_rem else None
        raise NotMember("nonzero remainder mod p-1", rem)
    V = _lift_mod_poly(quotient, group, m)
    if group == "gstar_split":
        V = _project_balanced(V, group)
    U = _divide_exact_int(P - Q * V, m, group, p)
    cert = HeckeIdealCert(P, gen1_kind, Q, U, V, p)
    if not cert.verify():
        raise NotMember("lifted cofactors failed re-expansion", cert.target - Q * V)
    return cert


def _divide_exact_int(W: HeckeElem, m: int, group: str, p: int) -> HeckeElem:
    poly = Lau(W.poly.vars)
    for e, c in W.poly.terms.items():
        q = c / m
        if not in_z_inv_p(q, p):
            raise NotMember("discrepancy not divisible by p-1", W)
        poly = poly + Lau.monomial(W.poly.vars, e, q)
    return HeckeElem(group, poly)
