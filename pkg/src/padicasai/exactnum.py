"""Exact arithmetic foundation.

Everything downstream (matrix decompositions, Hecke algebras, zeta
integrals) is built on the four algebraic layers in this module:

* ``Fraction`` rationals, with p-adic valuations and Z[1/p] membership
  tests;
* ``QuadElem``, elements a + b*sqrt(r) of the unramified quadratic
  extension F = Q_p(sqrt(r));
* ``Lau``, sparse multivariate Laurent polynomials over Q (the same class
  carries symmetric-coordinate polynomials, Hecke operators and zeta
  numerators, distinguished only by their variable tuples);
* ``RatFunc``, quotients of Laurent polynomials with the denominator kept
  as an explicit multiset of factors of constant term 1.

No floating point is used anywhere: limits s -> 0 are taken by exact
division followed by evaluation at X = 1 (X stands for p^{-s}).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

INF = float("inf")


class NotSymmetric(ValueError):
    """Input polynomial is not invariant under the required variable swap."""


class NotDivisible(ArithmeticError):
    """Exact division failed (a denominator factor does not cancel)."""


class NotInImage(ValueError):
    """Symmetric expression is not in the image of the Satake transform."""


class PrecisionOverflow(RuntimeError):
    """A computation would need a refinement level above the configured cap."""


# ---------------------------------------------------------------------------
# rationals


def Fr(x, y=None) -> Fraction:
    return Fraction(x) if y is None else Fraction(x, y)


def val_p(x, p: int):
    """p-adic valuation of a Fraction, int or QuadElem; val_p(0) = +inf.

    For a QuadElem a + b*sqrt(r) of the unramified extension this is
    min(v_p(a), v_p(b)).
    """
    if isinstance(x, QuadElem):
        return min(val_p(x.a, p), val_p(x.b, p))
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_p_unit(x, p: int) -> bool:
    return x != 0 and val_p(x, p) == 0


def in_z_inv_p(x: Fraction, p: int) -> bool:
    """True when x lies in Z[1/p], i.e. its denominator is a power of p."""
    d = Fraction(x).denominator
    while d % p == 0:
        d //= p
    return d == 1


def fr_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fr_from_str(s: str) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------------------
# the quadratic extension F = Q_p(sqrt(r))


def is_qr(a: int, p: int) -> bool:
    a %= p
    if a == 0:
        return True
    return pow(a, (p - 1) // 2, p) == 1


def smallest_nonresidue(p: int) -> int:
    for r in range(2, p):
        if not is_qr(r, p):
            return r
    raise ValueError(f"no quadratic non-residue mod {p}")


@dataclass(frozen=True)
class QuadCtx:
    """Fixed data of F = Q_p(sqrt(r)): p odd, r a non-residue unit mod p.

    sqrt(r) has trace zero, so the additive character psi_F(x) =
    psi(Tr(x*sqrt(r))) is trivial on Q_p, which the zeta integrals rely on.
    """

    p: int
    r: int

    def __post_init__(self):
        if self.p == 2 or self.p < 2:
            raise ValueError("p must be an odd prime")
        if self.r % self.p == 0 or is_qr(self.r, self.p):
            raise ValueError(f"r={self.r} is not a non-residue unit mod {self.p}")

    @classmethod
    def make(cls, p: int, r: int | None = None) -> "QuadCtx":
        return cls(p, smallest_nonresidue(p) if r is None else r)

    def sqrt_r(self) -> "QuadElem":
        return QuadElem(0, 1, self)

    def one(self) -> "QuadElem":
        return QuadElem(1, 0, self)

    def zero(self) -> "QuadElem":
        return QuadElem(0, 0, self)

    def elem(self, a, b=0) -> "QuadElem":
        return QuadElem(Fraction(a), Fraction(b), self)


class QuadElem:
    """a + b*sqrt(r) with exact rational coordinates."""

    __slots__ = ("a", "b", "ctx")

    def __init__(self, a, b, ctx: QuadCtx):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.ctx = ctx

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.ctx != self.ctx:
                raise ValueError("mixed quadratic contexts")
            return other
        return QuadElem(Fraction(other), 0, self.ctx)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadElem(self.a + o.a, self.b + o.b, self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return QuadElem(self.a - o.a, self.b - o.b, self.ctx)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.ctx)

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadElem(
            self.a * o.a + self.ctx.r * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.ctx,
        )

    __rmul__ = __mul__

    def inv(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q_p(sqrt r)")
        return QuadElem(self.a / n, -self.b / n, self.ctx)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def conj(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.ctx)

    def trace(self) -> Fraction:
        return 2 * self.a

    def norm(self) -> Fraction:
        return self.a * self.a - self.ctx.r * self.b * self.b

    def val(self):
        return val_p(self, self.ctx.p)

    def is_integral(self) -> bool:
        v = self.val()
        return v == INF or v >= 0

    def is_unit(self) -> bool:
        return self.val() == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.a == other and self.b == 0
        if not isinstance(other, QuadElem):
            return NotImplemented
        return self.ctx == other.ctx and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b, self.ctx.p, self.ctx.r))

    def __repr__(self):
        return f"({fr_to_str(self.a)}+{fr_to_str(self.b)}*sqrt{self.ctx.r})"

    def to_json(self) -> dict:
        return {"a": fr_to_str(self.a), "b": fr_to_str(self.b), "r": self.ctx.r}

    @classmethod
    def from_json(cls, d: Mapping, ctx: QuadCtx) -> "QuadElem":
        if int(d.get("r", ctx.r)) != ctx.r:
            raise ValueError("non-residue mismatch")
        return cls(Fraction(d["a"]), Fraction(d["b"]), ctx)


def quad_arith(op: str, x: QuadElem, y: QuadElem | None = None) -> QuadElem:
    """Field arithmetic dispatcher: op in {add, sub, mul, inv}."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inv()
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# sparse multivariate Laurent polynomials over Q


class Lau:
    """Laurent polynomial in a fixed tuple of variables.

    terms maps exponent tuples (integers, possibly negative) to nonzero
    Fractions.  Zero coefficients are never stored, so equality is plain
    dict equality.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None):
        self.vars = tuple(variables)
        self.terms: dict[tuple, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    e = tuple(int(k) for k in e)
                    if len(e) != len(self.vars):
                        raise ValueError("exponent arity mismatch")
                    self.terms[e] = self.terms.get(e, Fraction(0)) + c
                    if not self.terms[e]:
                        del self.terms[e]

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, variables, c) -> "Lau":
        z = (0,) * len(variables)
        return cls(variables, {z: Fraction(c)})

    @classmethod
    def var(cls, variables, name, power: int = 1) -> "Lau":
        e = [0] * len(variables)
        e[tuple(variables).index(name)] = power
        return cls(variables, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, variables, exps, c=1) -> "Lau":
        return cls(variables, {tuple(exps): Fraction(c)})

    def zero_like(self) -> "Lau":
        return Lau(self.vars)

    def one_like(self) -> "Lau":
        return Lau.const(self.vars, 1)

    # -- ring operations ----------------------------------------------------

    def _chk(self, other) -> "Lau":
        if isinstance(other, Lau):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch {other.vars} vs {self.vars}")
            return other
        return Lau.const(self.vars, other)

    def __add__(self, other):
        o = self._chk(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            c2 = t.get(e, Fraction(0)) + c
            if c2:
                t[e] = c2
            elif e in t:
                del t[e]
        out = Lau(self.vars)
        out.terms = t
        return out

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._chk(other))

    def __rsub__(self, other):
        return self._chk(other) - self

    def __neg__(self):
        out = Lau(self.vars)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Lau(self.vars)
            out = Lau(self.vars)
            q = Fraction(other)
            out.terms = {e: c * q for e, c in self.terms.items()}
            return out
        o = self._chk(other)
        t: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = t.get(e, Fraction(0)) + c1 * c2
                if c:
                    t[e] = c
                elif e in t:
                    del t[e]
        out = Lau(self.vars)
        out.terms = t
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if self.is_monomial():
                e, c = next(iter(self.terms.items()))
                return Lau.monomial(self.vars, tuple(n * k for k in e), Fraction(1) / c ** (-n))
            raise NotDivisible("negative power of a non-monomial")
        out = Lau.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Lau.const(self.vars, other)
        if not isinstance(other, Lau):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> Fraction:
        z = (0,) * len(self.vars)
        if self.terms and (len(self.terms) > 1 or z not in self.terms):
            raise ValueError("not a constant")
        return self.terms.get(z, Fraction(0))

    def is_constant(self) -> bool:
        z = (0,) * len(self.vars)
        return not self.terms or (len(self.terms) == 1 and z in self.terms)

    def degree_in(self, name: str):
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    def min_degree_in(self, name: str):
        i = self.vars.index(name)
        return min((e[i] for e in self.terms), default=0)

    def coeff_of(self, name: str, k: int) -> "Lau":
        """Coefficient of name**k, as a Laurent polynomial in the other vars."""
        i = self.vars.index(name)
        rest = tuple(v for v in self.vars if v != name)
        out = Lau(rest)
        for e, c in self.terms.items():
            if e[i] == k:
                out = out + Lau.monomial(rest, e[:i] + e[i + 1:], c)
        return out

    def swap(self, a: str, b: str) -> "Lau":
        i, j = self.vars.index(a), self.vars.index(b)
        t = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[i], e2[j] = e2[j], e2[i]
            t[tuple(e2)] = c
        out = Lau(self.vars)
        out.terms = t
        return out

    def subst(self, assign: Mapping[str, "Lau"]) -> "Lau":
        """Substitute Laurent polynomials for variables (others unchanged).

        Negative exponents require the substituted value to be an
        invertible monomial.
        """
        names = [v for v in self.vars if v in assign]
        if not names:
            return self
        target = assign[names[0]].vars
        out = Lau(target)
        for e, c in self.terms.items():
            term = Lau.const(target, c)
            for v, k in zip(self.vars, e):
                if k == 0:
                    continue
                val = assign[v] if v in assign else Lau.var(target, v)
                term = term * val ** k
            out = out + term
        return out

    def eval(self, point: Mapping[str, object]):
        """Evaluate at field values (Fraction or QuadElem), all vars bound."""
        total = None
        for e, c in sorted(self.terms.items()):
            term = c
            for v, k in zip(self.vars, e):
                if k == 0:
                    continue
                x = point[v]
                if k < 0:
                    x = x.inv() if isinstance(x, QuadElem) else Fraction(1) / Fraction(x)
                    k = -k
                for _ in range(k):
                    term = term * x
            total = term if total is None else total + term
        if total is None:
            return Fraction(0)
        return total

    def extend_vars(self, variables: Sequence[str]) -> "Lau":
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.vars]
        out = Lau(variables)
        for e, c in self.terms.items():
            e2 = [0] * len(variables)
            for pos, k in zip(idx, e):
                e2[pos] = k
            out.terms[tuple(e2)] = c
        return out

    # -- division ------------------------------------------------------------

    def shift_to_poly(self) -> tuple["Lau", tuple]:
        """Factor out the minimal monomial so all exponents are >= 0."""
        if not self.terms:
            return self, (0,) * len(self.vars)
        mins = tuple(min(e[i] for e in self.terms) for i in range(len(self.vars)))
        out = Lau(self.vars)
        out.terms = {tuple(a - b for a, b in zip(e, mins)): c for e, c in self.terms.items()}
        return out, mins

    def exact_div(self, other: "Lau") -> "Lau":
        """Exact quotient self/other; raises NotDivisible when impossible."""
        o = self._chk(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return Lau(self.vars)
        a, sa = self.shift_to_poly()
        b, sb = o.shift_to_poly()
        q = _poly_exact_div(a, b)
        shift = tuple(x - y for x, y in zip(sa, sb))
        return q * Lau.monomial(self.vars, shift)

    def divisible_by(self, other: "Lau") -> bool:
        try:
            self.exact_div(other)
            return True
        except NotDivisible:
            return False

    # -- misc -----------------------------------------------------------------

    def map_coeff(self, f) -> "Lau":
        out = Lau(self.vars)
        for e, c in self.terms.items():
            c2 = Fraction(f(c))
            if c2:
                out.terms[e] = c2
        return out

    def coeffs_in_z_inv_p(self, p: int) -> bool:
        return all(in_z_inv_p(c, p) for c in self.terms.values())

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mon = "*".join(
                f"{v}^{k}" if k != 1 else v for v, k in zip(self.vars, e) if k != 0
            )
            bits.append(fr_to_str(c) + ("*" + mon if mon else ""))
        return " + ".join(bits)

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": {",".join(map(str, e)): fr_to_str(c) for e, c in sorted(self.terms.items())},
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "Lau":
        return cls(
            tuple(d["vars"]),
            {tuple(int(x) for x in k.split(",")): Fraction(v) for k, v in d["terms"].items()},
        )


def _poly_exact_div(a: Lau, b: Lau) -> Lau:
    """Division of true polynomials by the leading-term algorithm (lex)."""
    q = Lau(a.vars)
    r = a
    lb = max(b.terms)
    cb = b.terms[lb]
    while not r.is_zero():
        lr = max(r.terms)
        diff = tuple(x - y for x, y in zip(lr, lb))
        if any(d < 0 for d in diff):
            raise NotDivisible(f"leading term {lr} not divisible by {lb}")
        mono = Lau.monomial(a.vars, diff, r.terms[lr] / cb)
        q = q + mono
        r = r - mono * b
    return q


# ---------------------------------------------------------------------------
# symmetric reduction (elementary symmetric coordinates)

SYM_INERT = ("e1", "e2")
SYM_SPLIT = ("e1_1", "e2_1", "e1_2", "e2_2")
AB = ("A", "B")
UV = ("u1", "v1", "u2", "v2")


def sym_reduce(poly: Lau, pairs: Sequence[tuple[str, str]] | None = None) -> Lau:
    """Rewrite a Laurent polynomial symmetric in each pair (x, y) in terms of
    e1 = x + y and e2 = x*y (Laurent in e2); unpaired variables pass through.

    pairs defaults to the full variable tuple split into consecutive pairs.
    Raises NotSymmetric when the input is not swap-invariant.
    """
    vs = poly.vars
    if pairs is None:
        if len(vs) % 2:
            raise ValueError("odd number of variables and no pairs given")
        pairs = [(vs[2 * i], vs[2 * i + 1]) for i in range(len(vs) // 2)]
    pairs = list(pairs)
    for x, y in pairs:
        if poly.swap(x, y) != poly:
            raise NotSymmetric(f"not symmetric under {x} <-> {y}")
    pair_idx = [(vs.index(x), vs.index(y)) for x, y in pairs]
    paired = {i for ij in pair_idx for i in ij}
    extra_idx = [i for i in range(len(vs)) if i not in paired]
    if len(pairs) == 1:
        enames = ["e1", "e2"]
    else:
        enames = [f"e{j}_{i+1}" for i in range(len(pairs)) for j in (1, 2)]
    out_vars = tuple(enames) + tuple(vs[i] for i in extra_idx)
    out = Lau(out_vars)
    if poly.is_zero():
        return out
    # clear negative pair exponents with a global power of e2 per pair
    shifts = [min(min(e[ix], e[iy]) for e in poly.terms) for ix, iy in pair_idx]
    work = Lau(vs)
    for e, c in poly.terms.items():
        e2 = list(e)
        for (ix, iy), s in zip(pair_idx, shifts):
            e2[ix] -= s
            e2[iy] -= s
        work.terms[tuple(e2)] = c

    def key(e):
        ks = tuple((max(e[ix], e[iy]), min(e[ix], e[iy])) for ix, iy in pair_idx)
        return (ks, tuple(e[i] for i in extra_idx), e)

    while not work.is_zero():
        lead = max(work.terms, key=key)
        c = work.terms[lead]
        sub = Lau.const(vs, c)
        oexp = []
        for (ix, iy), s in zip(pair_idx, shifts):
            a, b = max(lead[ix], lead[iy]), min(lead[ix], lead[iy])
            oexp += [a - b, b + s]
            sub = sub * (Lau.var(vs, vs[ix]) + Lau.var(vs, vs[iy])) ** (a - b)
            sub = sub * (Lau.var(vs, vs[ix]) * Lau.var(vs, vs[iy])) ** b
        for i in extra_idx:
            if lead[i]:
                sub = sub * Lau.var(vs, vs[i], lead[i])
            oexp.append(lead[i])
        out = out + Lau.monomial(out_vars, tuple(oexp), c)
        work = work - sub
    return out


def _evar_pairs(variables: Sequence[str]) -> list[tuple[str, str]]:
    out = []
    if "e1" in variables:
        out.append(("e1", "e2"))
    i = 1
    while f"e1_{i}" in variables:
        out.append((f"e1_{i}", f"e2_{i}"))
        i += 1
    return out


def sym_expand(sym: Lau, pair_vars: Sequence[str]) -> Lau:
    """Inverse of sym_reduce: substitute e1 -> x+y, e2 -> x*y per pair."""
    epairs = _evar_pairs(sym.vars)
    extra = [v for v in sym.vars if all(v not in pr for pr in epairs)]
    target = tuple(pair_vars) + tuple(extra)
    assign: dict[str, Lau] = {}
    for i, (e1n, e2n) in enumerate(epairs):
        x, y = pair_vars[2 * i], pair_vars[2 * i + 1]
        assign[e1n] = Lau.var(target, x) + Lau.var(target, y)
        assign[e2n] = Lau.var(target, x) * Lau.var(target, y)
    for v in extra:
        assign[v] = Lau.var(target, v)
    return sym.subst(assign)


def sym_invert_params(sym: Lau) -> Lau:
    """Apply (x,y) -> (1/x,1/y) on each pair: e1 -> e1/e2, e2 -> 1/e2."""
    vars_ = sym.vars
    assign: dict[str, Lau] = {}
    for e1n, e2n in _evar_pairs(vars_):
        assign[e1n] = Lau.monomial(
            vars_, tuple((1 if v == e1n else (-1 if v == e2n else 0)) for v in vars_)
        )
        assign[e2n] = Lau.monomial(vars_, tuple((-1 if v == e2n else 0) for v in vars_))
    return sym.subst(assign)


_homog_cache: dict = {}


def complete_homog(n: int, x: str, y: str, variables) -> Lau:
    """Complete homogeneous symmetric sum of degree n in two variables,
    (x^(n+1) - y^(n+1)) / (x - y); zero for n < 0.  Cached; treat the
    result as immutable."""
    variables = tuple(variables)
    key = (n, x, y, variables)
    hit = _homog_cache.get(key)
    if hit is not None:
        return hit
    out = Lau(variables)
    if n >= 0:
        ix, iy = variables.index(x), variables.index(y)
        for i in range(n + 1):
            e = [0] * len(variables)
            e[ix], e[iy] = i, n - i
            out = out + Lau.monomial(variables, tuple(e))
    _homog_cache[key] = out
    return out


# ---------------------------------------------------------------------------
# rational functions with factored denominators


class RatFunc:
    """num / prod(factors), factors Laurent polynomials of constant term 1.

    Keeping the denominator factored makes cancellation a sequence of exact
    trial divisions, so sums and products stay fully reduced without any
    multivariate gcd machinery.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Lau, den: Iterable[Lau] = ()):
        self.num = num
        self.den: list[Lau] = [f for f in den if not f.is_constant() or f.constant_value() != 1]
        for f in self.den:
            if f.is_zero():
                raise ZeroDivisionError("zero denominator factor")
        self._cancel()

    def _cancel(self):
        if self.num.is_zero():
            self.den = []
            return
        out = []
        for f in sorted(self.den, key=lambda g: sorted(g.terms)):
            try:
                self.num = self.num.exact_div(f)
            except NotDivisible:
                out.append(f)
        self.den = out

    @classmethod
    def from_lau(cls, num: Lau) -> "RatFunc":
        return cls(num, [])

    @property
    def numerator(self) -> Lau:
        return self.num

    @property
    def denominator(self) -> Lau:
        d = self.num.one_like()
        for f in self.den:
            d = d * f
        return d

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            other = RatFunc.from_lau(Lau.const(self.num.vars, other))
        # common denominator = multiset union of the factor lists
        shared = list(self.den)
        extra = []
        for f in other.den:
            if f in shared:
                shared.remove(f)
            else:
                extra.append(f)
        den = list(self.den) + extra
        n1 = self.num
        for f in extra:
            n1 = n1 * f
        n2 = other.num
        for f in shared:
            n2 = n2 * f
        return RatFunc(n1 + n2, den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.num * other, self.den)
        if isinstance(other, Lau):
            return RatFunc(self.num * other, self.den)
        return RatFunc(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.from_lau(Lau.const(self.num.vars, other))
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.num * other.denominator) == (other.num * self.denominator)

    def is_laurent(self) -> bool:
        return not self.den

    def as_laurent(self) -> Lau:
        if self.den:
            raise NotDivisible(f"denominator {self.den} does not cancel")
        return self.num

    def mul_poly_exact(self, g: Lau) -> "RatFunc":
        return RatFunc(self.num * g, self.den)

    def subst_x(self, name: str, value) -> "RatFunc":
        """Specialize one variable to a rational number (denominators too)."""
        c = Lau.const(self.num.vars, value)
        num = self.num.subst({name: c})
        den = []
        for f in self.den:
            f2 = f.subst({name: c})
            if f2.is_zero():
                raise ZeroDivisionError("denominator vanishes at substitution point")
            if f2.is_constant():
                num = num * (Fraction(1) / f2.constant_value())
            else:
                den.append(f2)
        return RatFunc(num, den)

    def series_coeff(self, name: str, upto: int) -> list[Lau]:
        """Power-series coefficients in `name` (requires factors with
        constant term 1 in name and no negative powers of name)."""
        i = self.num.vars.index(name)
        rest = self.num.vars
        coeffs = []
        # invert each factor as a truncated geometric series
        def trunc_mul(a: list[Lau], b: list[Lau]) -> list[Lau]:
            out = [Lau(rest) for _ in range(upto + 1)]
            for d1, c1 in enumerate(a):
                if c1.is_zero():
                    continue
                for d2, c2 in enumerate(b):
                    if d1 + d2 > upto:
                        break
                    out[d1 + d2] = out[d1 + d2] + c1 * c2
            return out

        def poly_coeffs(f: Lau) -> list[Lau]:
            out = [Lau(rest) for _ in range(upto + 1)]
            for e, c in f.terms.items():
                d = e[i]
                if d < 0:
                    raise ValueError("negative power in series expansion")
                if d <= upto:
                    e2 = list(e)
                    e2[i] = 0
                    out[d] = out[d] + Lau.monomial(rest, tuple(e2), c)
            return out

        cur = poly_coeffs(self.num)
        for f in self.den:
            fc = poly_coeffs(f)
            if fc[0] != Lau.const(rest, 1):
                raise ValueError("factor constant term in series variable is not 1")
            inv = [Lau(rest) for _ in range(upto + 1)]
            inv[0] = Lau.const(rest, 1)
            for d in range(1, upto + 1):
                acc = Lau(rest)
                for k in range(1, d + 1):
                    if not fc[k].is_zero():
                        acc = acc + fc[k] * inv[d - k]
                inv[d] = -acc
            cur = trunc_mul(cur, inv)
        return cur

    def __repr__(self):
        if not self.den:
            return repr(self.num)
        return f"({self.num!r}) / ({' * '.join(map(repr, self.den))})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": [f.to_json() for f in self.den]}

    @classmethod
    def from_json(cls, d: Mapping) -> "RatFunc":
        return cls(Lau.from_json(d["num"]), [Lau.from_json(f) for f in d["den"]])


def ratfunc_exact_div(f: RatFunc, g: Lau) -> Lau:
    """Return the Laurent polynomial h with f = h * (1/g), i.e. h = f*g.

    Raises NotDivisible when f*g still has uncancelled denominator factors.
    This is the s -> 0 workhorse: multiply a zeta value by the inverse
    L-factor polynomial, check the quotient is a Laurent polynomial, then
    evaluate at X = 1.
    """
    if g.is_zero():
        raise ZeroDivisionError("g = 0")
    return f.mul_poly_exact(g).as_laurent()


def lau_eval_x1(h: Lau, name: str) -> Lau:
    """Evaluate a Laurent polynomial at name = 1 (drop that variable)."""
    rest = tuple(v for v in h.vars if v != name)
    i = h.vars.index(name)
    out = Lau(rest)
    for e, c in h.terms.items():
        out = out + Lau.monomial(rest, e[:i] + e[i + 1:], c)
    return out


def json_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
