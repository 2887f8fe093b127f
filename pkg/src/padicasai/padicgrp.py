"""2x2 matrix groups over Q_p and its unramified quadratic extension.

Provides exact Iwasawa decomposition, the mirabolic coset labels
P(Q_p) t_a n_b G(O_F) (with witnesses), the generalized Cartan labels
G(Z_p) \\ G(F) / G(O_F) (decided by an exact lattice computation, no
precision cap), finite coset enumerations, and a p-local Smith engine
used throughout for lattice membership and subgroup volumes.

Matrices are immutable; every decomposition returns witnesses and is
re-verified by exact multiplication before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactnum import INF, QuadCtx, QuadElem, val_p


class DecompositionError(RuntimeError):
    """A coset decomposition the theory guarantees could not be found."""


# ---------------------------------------------------------------------------
# matrices


class Mat2:
    """2x2 matrix with QuadElem entries over a fixed quadratic context."""

    __slots__ = ("e", "ctx")

    def __init__(self, entries: Sequence, ctx: QuadCtx):
        self.ctx = ctx
        es = []
        for x in entries:
            if not isinstance(x, QuadElem):
                x = QuadElem(Fraction(x), 0, ctx)
            es.append(x)
        if len(es) != 4:
            raise ValueError("need 4 entries")
        self.e = tuple(es)

    # constructors ----------------------------------------------------------

    @classmethod
    def identity(cls, ctx: QuadCtx) -> "Mat2":
        return cls([1, 0, 0, 1], ctx)

    @classmethod
    def diag(cls, a, b, ctx: QuadCtx) -> "Mat2":
        return cls([a, 0, 0, b], ctx)

    @classmethod
    def t(cls, a: int, b: int, ctx: QuadCtx) -> "Mat2":
        """diag(p^a, p^b)."""
        p = Fraction(ctx.p)
        return cls.diag(p ** a, p ** b, ctx)

    @classmethod
    def upper(cls, u, ctx: QuadCtx) -> "Mat2":
        return cls([1, u, 0, 1], ctx)

    @classmethod
    def lower(cls, u, ctx: QuadCtx) -> "Mat2":
        return cls([1, 0, u, 1], ctx)

    @classmethod
    def n_b(cls, b: int, ctx: QuadCtx) -> "Mat2":
        """The basis unipotent [[1, sqrt(r) p^-b], [0, 1]]."""
        return cls.upper(QuadElem(0, Fraction(1, ctx.p ** b) if b >= 0 else Fraction(ctx.p) ** (-b), ctx), ctx)

    # ring / group ops ------------------------------------------------------

    def __mul__(self, other: "Mat2") -> "Mat2":
        a, b, c, d = self.e
        x, y, z, w = other.e
        return Mat2([a * x + b * z, a * y + b * w, c * x + d * z, c * y + d * w], self.ctx)

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.e == other.e and self.ctx == other.ctx

    def __hash__(self):
        return hash((self.e, self.ctx.p, self.ctx.r))

    def det(self) -> QuadElem:
        a, b, c, d = self.e
        return a * d - b * c

    def inv(self) -> "Mat2":
        dt = self.det()
        if dt == self.ctx.zero():
            raise ZeroDivisionError("singular matrix")
        a, b, c, d = self.e
        di = dt.inv()
        return Mat2([d * di, -b * di, -c * di, a * di], self.ctx)

    def transpose(self) -> "Mat2":
        a, b, c, d = self.e
        return Mat2([a, c, b, d], self.ctx)

    def scale(self, s) -> "Mat2":
        return Mat2([x * s for x in self.e], self.ctx)

    # predicates ------------------------------------------------------------

    def min_val(self):
        return min(x.val() for x in self.e)

    def det_val(self):
        return val_p(self.det(), self.ctx.p)

    def is_integral(self) -> bool:
        return all(x.is_integral() for x in self.e)

    def in_KF(self) -> bool:
        """Membership in GL2(O_F)."""
        return self.is_integral() and self.det().is_unit()

    def in_K_base(self) -> bool:
        """Membership in GL2(Z_p)."""
        return (
            all(x.is_rational() and x.is_integral() for x in self.e)
            and self.det().is_unit()
        )

    def is_rational(self) -> bool:
        return all(x.is_rational() for x in self.e)

    def det_is_one_mod_p(self) -> bool:
        d = self.det() - 1
        v = d.val()
        return v == INF or v >= 1

    def cartan_spread(self) -> int:
        """Difference of the two elementary-divisor exponents."""
        mv = self.min_val()
        return abs(self.det_val() - 2 * mv)

    def __repr__(self):
        return f"[[{self.e[0]!r}, {self.e[1]!r}], [{self.e[2]!r}, {self.e[3]!r}]]"

    def to_json(self) -> list:
        return [[self.e[0].to_json(), self.e[1].to_json()], [self.e[2].to_json(), self.e[3].to_json()]]

    @classmethod
    def from_json(cls, d, ctx: QuadCtx) -> "Mat2":
        return cls([QuadElem.from_json(x, ctx) for row in d for x in row], ctx)


# ---------------------------------------------------------------------------
# Iwasawa decomposition over F


@dataclass(frozen=True)
class IwasawaParts:
    u: QuadElem
    f1: QuadElem
    f2: QuadElem
    kappa: Mat2

    def reassemble(self, ctx: QuadCtx) -> Mat2:
        return Mat2.upper(self.u, ctx) * Mat2.diag(self.f1, self.f2, ctx) * self.kappa


def iwasawa_F(g: Mat2) -> IwasawaParts:
    """g = n(u) diag(f1, f2) kappa with kappa in GL2(O_F).

    Clears the bottom row by a right column operation when v(g21) >= v(g22),
    otherwise swaps columns by a unit of determinant 1 first.
    """
    ctx = g.ctx
    if g.det() == ctx.zero():
        raise ZeroDivisionError("singular matrix")
    a, b, c, d = g.e
    vc = c.val()
    vd = d.val()
    if vc >= vd:
        # kappa1 = [[1, 0], [-c/d, 1]] clears the (2,1) entry
        k1 = Mat2([1, 0, -(c / d), 1], ctx)
        h = g * k1
        kappa = k1.inv()
    else:
        # swap columns with determinant 1: [[0, 1], [-1, 0]] then clear
        w = Mat2([0, 1, -1, 0], ctx)
        h0 = g * w
        c0, d0 = h0.e[2], h0.e[3]
        k1 = Mat2([1, 0, -(c0 / d0), 1], ctx)
        h = h0 * k1
        kappa = (w * k1).inv()
    f1, f2 = h.e[0], h.e[3]
    u = h.e[1] / f2
    parts = IwasawaParts(u, f1, f2, kappa)
    assert parts.reassemble(ctx) == g
    assert kappa.in_KF()
    return parts


# ---------------------------------------------------------------------------
# p-local Smith normal form and lattice solving


def _vp(x: Fraction, p: int):
    return val_p(x, p)


def plocal_smith(rows: list[list[Fraction]], p: int):
    """p-local Smith form: returns (U, exps, V) with U*M*V = D.

    U (m x m) and V (n x n) are Z_(p)-invertible rational matrices and
    D is diagonal with D[i][i] = p**exps[i] for i < len(exps), all other
    entries zero.  Row i of D beyond len(exps) is identically zero.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    M = [[Fraction(x) for x in r] for r in rows]
    U = [[Fraction(1 if i == j else 0) for j in range(m)] for i in range(m)]
    V = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    exps: list[int] = []
    k = 0
    while k < min(m, n):
        # find pivot of minimal valuation in the remaining block
        best = None
        for i in range(k, m):
            for j in range(k, n):
                if M[i][j] != 0:
                    v = _vp(M[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, bi, bj = best
        if bi != k:
            M[k], M[bi] = M[bi], M[k]
            U[k], U[bi] = U[bi], U[k]
        if bj != k:
            for r in M:
                r[k], r[bj] = r[bj], r[k]
            for r in V:
                r[k], r[bj] = r[bj], r[k]
        # normalize pivot to exactly p^v (scale row by a p-unit)
        unit = M[k][k] / Fraction(p) ** v
        for j in range(n):
            M[k][j] = M[k][j] / unit
        for j in range(m):
            U[k][j] = U[k][j] / unit
        piv = Fraction(p) ** v
        for i in range(k + 1, m):
            if M[i][k] != 0:
                q = M[i][k] / piv
                for j in range(n):
                    M[i][j] -= q * M[k][j]
                for j in range(m):
                    U[i][j] -= q * U[k][j]
        for j in range(k + 1, n):
            if M[k][j] != 0:
                q = M[k][j] / piv
                for i in range(m):
                    M[i][j] -= q * M[i][k]
                for i in range(n):
                    V[i][j] -= q * V[i][k]
        exps.append(v)
        k += 1
    return U, exps, V


def lattice_from_conditions(rows: list[list[Fraction]], p: int):
    """Basis of L = {x in Q^n : (rows @ x) is p-integral componentwise}.

    Requires the condition matrix to have full column rank (callers stack
    identity rows, so this always holds).  Returns a list of n basis
    vectors; L = Z_(p)-span of them.
    """
    n = len(rows[0])
    U, exps, V = plocal_smith(rows, p)
    if len(exps) < n:
        raise ValueError("condition matrix not of full column rank")
    basis = []
    for i in range(n):
        col = [V[r][i] * Fraction(p) ** (-exps[i]) for r in range(n)]
        basis.append(col)
    return basis


def lattice_solve_affine(rows: list[list[Fraction]], target: list[Fraction], p: int):
    """Solve {x : rows@x - target is p-integral}; returns (x0, basis) or None.

    basis spans the homogeneous solution lattice.
    """
    m = len(rows)
    n = len(rows[0])
    U, exps, V = plocal_smith(rows, p)
    if len(exps) < n:
        raise ValueError("condition matrix not of full column rank")
    # U @ target
    ut = [sum(U[i][j] * target[j] for j in range(m)) for i in range(m)]
    y = [Fraction(0)] * n
    for i in range(n):
        y[i] = ut[i] / Fraction(p) ** exps[i]
    for i in range(n, m):
        if ut[i] != 0 and _vp(ut[i], p) < 0:
            return None
    x0 = [sum(V[r][i] * y[i] for i in range(n)) for r in range(n)]
    basis = []
    for i in range(n):
        basis.append([V[r][i] * Fraction(p) ** (-exps[i]) for r in range(n)])
    return x0, basis


def _conj_condition_rows(left: Mat2, right: Mat2) -> list[list[Fraction]]:
    """Rows expressing the components of left * X * right for rational X.

    X is a rational 2x2 unknown (4 coordinates, row-major); each matrix
    entry of the product contributes two rows (1 and sqrt(r) components).
    """
    ctx = left.ctx
    rows = [[Fraction(0)] * 4 for _ in range(8)]
    for k in range(4):
        X = [Fraction(0)] * 4
        X[k] = Fraction(1)
        xm = Mat2(X, ctx)
        prod = left * xm * right
        for eidx in range(4):
            rows[2 * eidx][k] = prod.e[eidx].a
            rows[2 * eidx + 1][k] = prod.e[eidx].b
    return rows


def _fr_mod_p(x: Fraction, p: int) -> int:
    if x.denominator % p == 0:
        raise ValueError("non p-integral value")
    return x.numerator * pow(x.denominator, -1, p) % p


def kck_membership(g: Mat2, cell: Mat2):
    """Decide g in GL2(Z_p) * cell * GL2(O_F), with witnesses.

    Returns (k, kappa) with g = k * cell * kappa, or None.  The set
    {x : cell^-1 x g in M2(O_F), x in M2(Z_p)} is an exact Z_p-lattice;
    a point of unit determinant in it is found by reducing a basis mod p,
    or shown not to exist (the determinant mod p is a quadratic form on
    the reduction, so emptiness mod p settles exact emptiness).
    """
    ctx = g.ctx
    p = ctx.p
    if g.det_val() != cell.det_val():
        return None
    rows = []
    for i in range(4):
        r = [Fraction(0)] * 4
        r[i] = Fraction(1)
        rows.append(r)
    rows += _conj_condition_rows(cell.inv(), g)
    basis = lattice_from_conditions(rows, p)
    coefs = _fp_point_with_unit_det(basis, p)
    if coefs is None:
        return None
    vec = [Fraction(0)] * 4
    for c, b in zip(coefs, basis):
        if c:
            for i in range(4):
                vec[i] += c * b[i]
    x = Mat2(vec, ctx)
    kappa = cell.inv() * x * g
    k = x.inv()
    assert x.in_K_base() and kappa.in_KF()
    assert k * cell * kappa == g
    return k, kappa


def _fp_point_with_unit_det(basis: list[list[Fraction]], p: int):
    """Small integer coefficients on the basis making det(sum) a p-unit."""
    from itertools import product

    red = [[_fr_mod_p(x, p) for x in b] for b in basis]
    for coefs in product(range(p), repeat=len(basis)):
        if all(c == 0 for c in coefs):
            continue
        v = [sum(c * r[i] for c, r in zip(coefs, red)) % p for i in range(4)]
        if (v[0] * v[3] - v[1] * v[2]) % p != 0:
            return coefs
    return None


# ---------------------------------------------------------------------------
# the P(Q_p) t_a n_b G(O_F) labels


@dataclass(frozen=True)
class CosetWitness:
    label: tuple
    left: Mat2
    right: Mat2
    kind: str  # "pgk" or "cartan"

    def to_json(self) -> dict:
        if self.kind == "pgk":
            lab = {"a": self.label[0], "b": self.label[1]}
        else:
            lab = {"nu2": self.label[0], "nu1": self.label[1], "nu": self.label[2]}
        return {"label": lab, "left": self.left.to_json(), "right": self.right.to_json()}


def pgk_canonical(a: int, b: int, ctx: QuadCtx) -> Mat2:
    """t_a * n_b = [[p^a, p^(a-b) sqrt r], [0, p^a]]."""
    p = Fraction(ctx.p)
    return Mat2(
        [QuadElem(p ** a, 0, ctx), QuadElem(0, p ** (a - b), ctx), ctx.zero(), QuadElem(p ** a, 0, ctx)],
        ctx,
    )


def pgk_label(g: Mat2) -> CosetWitness:
    """Unique (a, b) with g in P(Q_p) t_a n_b G(O_F), plus witnesses.

    a is the valuation content of the bottom row; b is read off the
    sqrt(r)-component of the top-right entry after clearing the row.
    """
    ctx = g.ctx
    p = ctx.p
    if g.det() == ctx.zero():
        raise ZeroDivisionError("singular matrix")
    C, D = g.e[2], g.e[3]
    a = min(C.val(), D.val())
    pa = Fraction(p) ** a
    if D.val() <= C.val():
        kap1 = Mat2([1, 0, -(C / D), QuadElem(pa, 0, ctx) / D], ctx)
    else:
        kap1 = Mat2([-(D / C), QuadElem(pa, 0, ctx) / C, 1, 0], ctx)
    gp = g * kap1
    assert gp.e[2] == ctx.zero() and gp.e[3] == ctx.elem(pa)
    A, B = gp.e[0], gp.e[1]
    vA = A.val()
    vB2 = val_p(B.b, p)
    b = max(0, vA - vB2) if B.b != 0 else 0
    # witnesses: q in P(Q_p), kappa2 with g' = q * (t_a n_b) * kappa2
    if b > 0:
        q1 = B.b * Fraction(p) ** (b - a)
    else:
        q1 = Fraction(p) ** (vA - a)
    q2 = B.a / pa
    q = Mat2([QuadElem(q1, 0, ctx), QuadElem(q2, 0, ctx), ctx.zero(), ctx.one()], ctx)
    M = pgk_canonical(a, b, ctx)
    kap2 = (q * M).inv() * gp
    assert kap2.in_KF()
    right = kap2 * kap1.inv()
    out = CosetWitness((a, b), q, right, "pgk")
    assert q * M * right == g
    return out


# ---------------------------------------------------------------------------
# generalized Cartan labels


def cartan_cell(nu2: int, nu1: int, nu: int, ctx: QuadCtx) -> Mat2:
    """t(1, nu)^-1 n_alpha^t t(nu2, nu1)^-1 = [[p^-nu2, sqrt(r) p^-nu1], [0, p^-nu-nu1]]."""
    p = Fraction(ctx.p)
    return Mat2(
        [
            QuadElem(p ** (-nu2), 0, ctx),
            QuadElem(0, p ** (-nu1), ctx),
            ctx.zero(),
            QuadElem(p ** (-nu - nu1), 0, ctx),
        ],
        ctx,
    )


def gen_cartan_candidates(g: Mat2) -> list[tuple[int, int, int]]:
    mu = g.min_val()
    vdet = g.det_val()
    nu_plus_nu1 = -mu
    nu2 = -vdet - nu_plus_nu1
    out = []
    for nu1 in range(nu2, nu_plus_nu1 + 1):
        nu = nu_plus_nu1 - nu1
        if nu >= 0 and nu1 >= nu2:
            out.append((nu2, nu1, nu))
    return out


def gen_cartan_label(g: Mat2, all_matches: bool = False):
    """Unique (nu2 <= nu1, nu >= 0) with g in G(Z_p) cell G(O_F), witnesses.

    Candidates are pinned by two exact invariants (minimal entry valuation
    and v_p(det)); each is decided by the lattice membership test.
    """
    if g.det() == g.ctx.zero():
        raise ZeroDivisionError("singular matrix")
    matches = []
    for nu2, nu1, nu in gen_cartan_candidates(g):
        cell = cartan_cell(nu2, nu1, nu, g.ctx)
        wit = kck_membership(g, cell)
        if wit is not None:
            matches.append(CosetWitness((nu2, nu1, nu), wit[0], wit[1], "cartan"))
    if all_matches:
        return matches
    if not matches:
        raise DecompositionError("no generalized Cartan cell found (engine bug)")
    if len(matches) > 1:
        raise DecompositionError(f"duplicate Cartan cells: {[m.label for m in matches]}")
    return matches[0]


# ---------------------------------------------------------------------------
# finite coset enumerations


def _units_mod(p: int, L: int) -> list[int]:
    return [u for u in range(1, p ** L) if u % p != 0]


def coset_reps(kind: str, ctx: QuadCtx, **kw) -> list[Mat2]:
    """Finite coset systems used by the Hecke module layer.

    kind = "full_mod_pL": all of GL2(Z/p^L) (field="base") or GL2(O_F/p^L)
        (field="quadratic"), as integral lifts;
    kind = "K_over_Kp": the p^2 - 1 representatives of
        GL2(O_F) / {det = 1 mod p} (field="quadratic"), or the p - 1
        diagonal representatives for the base field;
    kind = "double_to_single": single cosets x_i GL2(O) covering
        GL2(O) t(lam, 0) GL2(O).
    """
    p = ctx.p
    if kind == "full_mod_pL":
        L = kw.get("L", 1)
        fieldq = kw.get("field", "base") == "quadratic"
        q = p ** L
        size = (q * q if fieldq else q) ** 4
        if size > kw.get("cap", 10 ** 7):
            raise ValueError("enumeration too large")
        out = []
        rng = range(q)
        if fieldq:
            elems = [QuadElem(a, b, ctx) for a in rng for b in rng]
        else:
            elems = [QuadElem(a, 0, ctx) for a in rng]
        for e11 in elems:
            for e12 in elems:
                for e21 in elems:
                    for e22 in elems:
                        m = Mat2([e11, e12, e21, e22], ctx)
                        if _detunit(m.det(), p):
                            out.append(m)
        return out
    if kind == "K_over_Kp":
        if kw.get("field", "quadratic") == "base":
            return [Mat2.diag(u, 1, ctx) for u in _units_mod(p, 1)]
        out = []
        alpha = ctx.sqrt_r()
        for u in _units_mod(p, 1):
            out.append(Mat2.diag(u, 1, ctx))
        for u in _units_mod(p, 1):
            out.append(Mat2.diag(QuadElem(u, 0, ctx) * alpha, 1, ctx))
        for u in _units_mod(p, 1):
            for v in _units_mod(p, 1):
                out.append(Mat2.diag(QuadElem(u, 0, ctx) * (alpha + v), 1, ctx))
        return out
    if kind == "double_to_single":
        lam = kw["lam"]
        fieldq = kw.get("field", "quadratic") == "quadratic"
        if lam < 0:
            raise ValueError("lam must be >= 0")
        if lam == 0:
            return [Mat2.identity(ctx)]
        out = []
        betas_full = _of_residues(ctx, lam, fieldq)
        for b in betas_full:
            out.append(Mat2([Fraction(p) ** lam, b, 0, 1], ctx))
        for i in range(1, lam):
            for b in _of_residues(ctx, i, fieldq):
                if b.val() == 0:
                    out.append(Mat2([Fraction(p) ** i, b, 0, Fraction(p) ** (lam - i)], ctx))
        out.append(Mat2([1, 0, 0, Fraction(p) ** lam], ctx))
        return out
    raise ValueError(f"unknown kind {kind!r}")


def _detunit(d: QuadElem, p: int) -> bool:
    return val_p(d, p) == 0


def _of_residues(ctx: QuadCtx, L: int, fieldq: bool) -> list[QuadElem]:
    q = ctx.p ** L
    if fieldq:
        return [QuadElem(a, b, ctx) for a in range(q) for b in range(q)]
    return [QuadElem(a, 0, ctx) for a in range(q)]


# ---------------------------------------------------------------------------
# determinant-one factorization through a diagonal (SL-Smith over O_F)


def sl2_diag_factor(g: Mat2) -> tuple[Mat2, int, int, Mat2]:
    """g = k1 * diag(p^a, p^b) * k2 with k1, k2 integral of determinant 1.

    Requires det(g) = p^(a+b) exactly (unit part 1).  Used to verify that
    double-coset representatives admit determinant-one witnesses.
    """
    ctx = g.ctx
    p = ctx.p
    dv = g.det_val()
    if g.det() != ctx.elem(Fraction(p) ** dv):
        raise ValueError("determinant is not an exact power of p")
    left = Mat2.identity(ctx)
    right = Mat2.identity(ctx)
    w = Mat2([0, 1, -1, 0], ctx)  # det 1 rotation swap
    m = g
    # pivot: bring a minimal-valuation entry to position (1,1)
    vals = [x.val() for x in m.e]
    imin = vals.index(min(vals))
    if imin in (2, 3):
        m = w * m
        left = left * w.inv()
    vals = [m.e[0].val(), m.e[1].val()]
    if vals[1] < vals[0]:
        m = m * w
        right = w.inv() * right
    # clear (1,2) and (2,1)
    a = m.e[0]
    u = Mat2.upper(-(m.e[1] / a), ctx)
    m = m * u
    right = u.inv() * right
    lo = Mat2.lower(-(m.e[2] / a), ctx)
    m = lo * m
    left = left * lo.inv()
    assert m.e[1] == ctx.zero() and m.e[2] == ctx.zero()
    d1, d2 = m.e[0], m.e[3]
    a1, a2 = d1.val(), d2.val()
    # fold units: diag(d1, d2) = diag(u1, u1^-1) diag(p^a1, p^a2), u1 u2 = 1
    u1 = d1 / ctx.elem(Fraction(p) ** a1)
    fold = Mat2.diag(u1, u1.inv(), ctx)
    left = left * fold
    # u1^-1 d2 = p^a2 since the unit parts multiply to det(g)/p^(a1+a2) = 1
    if a1 < a2:
        # diag(p^a1, p^a2) = w^-1 diag(p^a2, p^a1) w
        left = left * w.inv()
        right = w * right
        a1, a2 = a2, a1
    k1, k2 = left, right
    assert k1.det() == ctx.one() and k2.det() == ctx.one()
    assert k1.in_KF() and k2.in_KF()
    assert k1 * Mat2.t(a1, a2, ctx) * k2 == g
    return k1, a1, a2, k2


# ---------------------------------------------------------------------------
# exact volumes of congruence-type subgroups of GL2(Z_p)


@dataclass
class SubgroupConditions:
    """H = {gamma in GL2(Z_p): gamma = x0 + lattice, det in D} for one or
    more affine branches (cell permutations give several branches).

    branches: list of (rows, target) affine lattice conditions; the rows
    always include the four identity rows so the condition matrix has full
    column rank.  det_mode: "unit" or "one_mod_p".
    """

    p: int
    branches: list[tuple[list[list[Fraction]], list[Fraction]]]
    det_mode: str = "unit"


def subgroup_volume(cond: SubgroupConditions) -> Fraction:
    """Haar volume (vol GL2(Z_p) = 1) of the condition set.

    Exact at every odd p: counts the level-1 image by enumerating the
    lattice reduction mod p, and multiplies fiber sizes read off the
    elementary divisors; no large enumeration.
    """
    p = cond.p
    total = Fraction(0)
    gl2_fp = (p ** 2 - 1) * (p ** 2 - p)
    for rows, target in cond.branches:
        sol = lattice_solve_affine(rows, target, p)
        if sol is None:
            continue
        x0, basis = sol
        # elementary divisor exponents of the lattice inside M2(Z_p)
        aexps = [_level_of_vector(b, p) for b in basis]
        if any(a < 0 for a in aexps):
            raise ValueError("lattice not contained in M2(Z_p)")
        M = max(aexps) + 1
        # fiber dimensions: d_k = #{i: a_i <= k}, k = 1..M-1
        fib = 1
        for k in range(1, M):
            dk = sum(1 for a in aexps if a <= k)
            fib *= p ** dk
        # level-1 image: enumerate combinations of the a_i = 0 basis vectors
        free = [b for b, a in zip(basis, aexps) if a == 0]
        count1 = 0
        from itertools import product as iproduct

        for coefs in iproduct(range(p), repeat=len(free)):
            vec = list(x0)
            for c, b in zip(coefs, free):
                if c:
                    for i in range(4):
                        vec[i] += c * b[i]
            det1 = vec[0] * vec[3] - vec[1] * vec[2]
            dmodp = _fr_mod_p(det1, p)
            if cond.det_mode == "unit" and dmodp != 0:
                count1 += 1
            elif cond.det_mode == "one_mod_p" and dmodp == 1 % p:
                count1 += 1
        total += Fraction(count1 * fib, gl2_fp * p ** (4 * (M - 1)))
    return total


def _level_of_vector(b: list[Fraction], p: int) -> int:
    """Elementary-divisor exponent of a primitive-times-p^a basis vector."""
    v = min(_vp(x, p) for x in b if x != 0)
    return int(v)
