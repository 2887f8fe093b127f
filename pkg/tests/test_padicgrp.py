import random
from fractions import Fraction

import pytest

from padicasai.exactnum import QuadCtx, QuadElem, val_p
from padicasai.padicgrp import (
    Mat2,
    SubgroupConditions,
    cartan_cell,
    coset_reps,
    gen_cartan_label,
    iwasawa_F,
    kck_membership,
    lattice_from_conditions,
    pgk_canonical,
    pgk_label,
    plocal_smith,
    sl2_diag_factor,
    subgroup_volume,
)


@pytest.fixture
def F3():
    return QuadCtx.make(3)


def rand_gl2(ctx, rng, vmin=-2, vmax=2, rational=False):
    """Random invertible matrix with entry valuations in [vmin, vmax]."""
    p = ctx.p
    while True:
        es = []
        for _ in range(4):
            v = rng.randint(vmin, vmax)
            a = rng.randint(-p ** 2, p ** 2)
            b = 0 if rational else rng.randint(-p ** 2, p ** 2)
            es.append(QuadElem(Fraction(a, 1) * Fraction(p) ** v, Fraction(b) * Fraction(p) ** v, ctx))
        m = Mat2(es, ctx)
        if m.det() != ctx.zero():
            return m


def rand_kf(ctx, rng):
    """Random element of GL2(O_F)."""
    p = ctx.p
    while True:
        es = [QuadElem(rng.randint(0, p ** 2), rng.randint(0, p ** 2), ctx) for _ in range(4)]
        m = Mat2(es, ctx)
        if m.in_KF():
            return m


def rand_kbase(ctx, rng):
    p = ctx.p
    while True:
        m = Mat2([rng.randint(0, p ** 2) for _ in range(4)], ctx)
        if m.in_K_base():
            return m


def rand_mirabolic(ctx, rng):
    p = ctx.p
    a = Fraction(rng.randint(1, p ** 2))
    while a % p == 0:
        a = Fraction(rng.randint(1, p ** 2))
    a *= Fraction(p) ** rng.randint(-2, 2)
    b = Fraction(rng.randint(-p ** 2, p ** 2), rng.choice([1, p]))
    return Mat2([QuadElem(a, 0, ctx), QuadElem(b, 0, ctx), ctx.zero(), ctx.one()], ctx)


# -- Iwasawa ------------------------------------------------------------------


def test_iwasawa_identity(F3):
    parts = iwasawa_F(Mat2.identity(F3))
    assert parts.u == F3.zero() and parts.f1 == F3.one() and parts.f2 == F3.one()
    assert parts.kappa == Mat2.identity(F3)


def test_iwasawa_lower_deep(F3):
    c = F3.elem(Fraction(1, 9))
    g = Mat2([1, 0, c, 1], F3)
    parts = iwasawa_F(g)
    # frozen expected parts: u = c^-1, f1 = c^-1, f2 = c
    assert parts.u == c.inv()
    assert parts.f1 == c.inv()
    assert parts.f2 == c
    assert parts.reassemble(F3) == g


def test_iwasawa_upper_triangular(F3):
    g = Mat2([F3.elem(3), F3.sqrt_r(), F3.zero(), F3.one()], F3)
    parts = iwasawa_F(g)
    assert parts.u == F3.sqrt_r()
    assert parts.f1 == F3.elem(3) and parts.f2 == F3.one()
    assert parts.kappa == Mat2.identity(F3)


@pytest.mark.parametrize("seed", range(25))
def test_iwasawa_roundtrip_random(F3, seed):
    rng = random.Random(seed)
    g = rand_gl2(F3, rng, -3, 3)
    parts = iwasawa_F(g)
    assert parts.reassemble(F3) == g
    assert parts.kappa.in_KF()


def test_iwasawa_roundtrip_thousand(F3):
    rng = random.Random(271828)
    for _ in range(1000):
        g = rand_gl2(F3, rng, -3, 3)
        parts = iwasawa_F(g)
        assert parts.reassemble(F3) == g
        assert parts.kappa.in_KF()


# -- Smith / lattices ---------------------------------------------------------


def test_plocal_smith_shapes():
    rows = [[Fraction(3), Fraction(1)], [Fraction(9), Fraction(6)], [Fraction(0), Fraction(27)]]
    U, exps, V = plocal_smith(rows, 3)
    assert len(exps) == 2
    # U * M * V = diag(p^e)
    m, n = 3, 2
    prod = [[sum(U[i][k] * rows[k][j] for k in range(m)) for j in range(n)] for i in range(m)]
    prod = [[sum(prod[i][k] * V[k][j] for k in range(n)) for j in range(n)] for i in range(m)]
    for i in range(m):
        for j in range(n):
            if i == j and i < len(exps):
                assert prod[i][j] == Fraction(3) ** exps[i]
            else:
                assert prod[i][j] == 0


def test_lattice_from_conditions_simple():
    # {x in Z_p^2 : x1/9 integral} = 9Z x Z
    rows = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)], [Fraction(1, 9), Fraction(0)]]
    basis = lattice_from_conditions(rows, 3)
    vals = sorted(min(val_p(c, 3) for c in b if c != 0) for b in basis)
    assert vals == [0, 2]


# -- P t_a n_b K labels -------------------------------------------------------


def test_pgk_label_canonical(F3):
    g = pgk_canonical(3, 2, F3)
    w = pgk_label(g)
    assert w.label == (3, 2)


def test_pgk_label_identity(F3):
    assert pgk_label(Mat2.identity(F3)).label == (0, 0)


def test_pgk_label_n1(F3):
    # n(sqrt(r)/p) is the canonical b=1 unipotent
    g = Mat2.upper(QuadElem(0, Fraction(1, 3), F3), F3)
    assert pgk_label(g).label == (0, 1)


@pytest.mark.parametrize("seed", range(30))
def test_pgk_label_cover_and_disjoint(F3, seed):
    rng = random.Random(seed)
    a = rng.randint(-2, 2)
    b = rng.randint(0, 2)
    g = rand_mirabolic(F3, rng) * pgk_canonical(a, b, F3) * rand_kf(F3, rng)
    w = pgk_label(g)
    assert w.label == (a, b)
    assert w.left * pgk_canonical(a, b, F3) * w.right == g


@pytest.mark.parametrize("seed", range(15))
def test_pgk_label_random_matrices(F3, seed):
    rng = random.Random(1000 + seed)
    g = rand_gl2(F3, rng, -2, 2)
    w = pgk_label(g)
    a, b = w.label
    assert b >= 0
    assert w.left * pgk_canonical(a, b, F3) * w.right == g
    # left witness is mirabolic over Q_p
    assert w.left.e[2] == F3.zero() and w.left.e[3] == F3.one()
    assert w.left.e[0].is_rational() and w.left.e[1].is_rational()
    assert w.right.in_KF()


# -- generalized Cartan labels -------------------------------------------------


def test_cartan_base_cell(F3):
    g = cartan_cell(0, 0, 0, F3)
    assert gen_cartan_label(g).label == (0, 0, 0)


def test_cartan_central_shift(F3):
    g = Mat2.t(-1, -1, F3) * cartan_cell(0, 0, 0, F3)
    assert gen_cartan_label(g).label == (1, 1, 0)


def test_cartan_witnessed_cell(F3):
    rng = random.Random(7)
    g = rand_kbase(F3, rng) * cartan_cell(0, 2, 1, F3) * rand_kf(F3, rng)
    w = gen_cartan_label(g)
    assert w.label == (0, 2, 1)
    assert w.left * cartan_cell(0, 2, 1, F3) * w.right == g


@pytest.mark.parametrize("seed", range(20))
def test_cartan_cover_unique(F3, seed):
    rng = random.Random(seed)
    nu2 = rng.randint(-2, 1)
    nu1 = rng.randint(nu2, 2)
    nu = rng.randint(0, 2)
    g = rand_kbase(F3, rng) * cartan_cell(nu2, nu1, nu, F3) * rand_kf(F3, rng)
    matches = gen_cartan_label(g, all_matches=True)
    assert [m.label for m in matches] == [(nu2, nu1, nu)]
    m = matches[0]
    assert m.left.in_K_base() and m.right.in_KF()
    assert m.left * cartan_cell(nu2, nu1, nu, F3) * m.right == g


def test_cartan_det_invariant(F3):
    # v_p(det) of the cell is -(nu2 + nu1 + nu)
    for nu2, nu1, nu in [(0, 0, 0), (-1, 2, 1), (1, 1, 3)]:
        assert cartan_cell(nu2, nu1, nu, F3).det_val() == -(nu2 + nu1 + nu)


# -- coset enumerations ---------------------------------------------------------


def test_k_over_kp_count_and_dets(F3):
    reps = coset_reps("K_over_Kp", F3)
    assert len(reps) == F3.p ** 2 - 1
    # determinants cover F_9^* exactly once
    seen = set()
    for m in reps:
        d = m.det()
        key = (d.a % 3, d.b % 3)
        assert key != (0, 0)
        assert key not in seen
        seen.add(key)
    assert len(seen) == 8


def test_double_to_single_counts(F3):
    q = F3.p ** 2
    reps1 = coset_reps("double_to_single", F3, lam=1, field="quadratic")
    assert len(reps1) == q + 1
    reps2 = coset_reps("double_to_single", F3, lam=2, field="quadratic")
    assert len(reps2) == q ** 2 + q
    base1 = coset_reps("double_to_single", F3, lam=1, field="base")
    assert len(base1) == F3.p + 1


def test_full_mod_p_order(F3):
    g = coset_reps("full_mod_pL", F3, L=1, field="base")
    assert len(g) == 48  # |GL2(F_3)|


def test_double_coset_reps_pairwise_distinct(F3):
    # distinct single cosets x K_F: x_i^-1 x_j not in K_F
    reps = coset_reps("double_to_single", F3, lam=1, field="quadratic")
    for i, x in enumerate(reps):
        for y in reps[i + 1:]:
            assert not (x.inv() * y).in_KF()


@pytest.mark.parametrize("lam", [1, 2])
def test_double_to_single_det_one_witnesses(F3, lam):
    # every representative is k1 t(lam, 0) k2 with det(k1) = det(k2) = 1
    for m in coset_reps("double_to_single", F3, lam=lam, field="quadratic"):
        k1, a1, a2, k2 = sl2_diag_factor(m)
        assert (a1, a2) == (lam, 0)
        assert k1.det() == F3.one() and k2.det() == F3.one()


def test_kck_membership_negative(F3):
    # an element of one Cartan cell is not in a different candidate cell
    g = cartan_cell(0, 1, 1, F3)
    assert kck_membership(g, cartan_cell(0, 2, 0, F3)) is None


# -- subgroup volumes -----------------------------------------------------------


def id_rows():
    rows = []
    for i in range(4):
        r = [Fraction(0)] * 4
        r[i] = Fraction(1)
        rows.append(r)
    return rows


def test_volume_full_K(F3):
    cond = SubgroupConditions(3, [(id_rows(), [Fraction(0)] * 4)], "unit")
    assert subgroup_volume(cond) == 1


def test_volume_det_level(F3):
    # {g in K : det g = 1 mod p} has index p - 1
    cond = SubgroupConditions(3, [(id_rows(), [Fraction(0)] * 4)], "one_mod_p")
    assert subgroup_volume(cond) == Fraction(1, 2)


def test_volume_against_enumeration_oracle(F3):
    # brute force over GL2(Z/9): gamma12 = 0 mod 3 (conjugation by diag(p,1)),
    # bottom row fixed mod 3 (a one-cell stabilizer), det = 1 mod 3
    p = 3
    rows = id_rows()
    r = [Fraction(0)] * 4
    r[1] = Fraction(1, p)
    rows.append(r)
    # c gamma = c mod p for c = (0, 1): rows for gamma21, gamma22 - 1
    r21 = [Fraction(0)] * 4
    r21[2] = Fraction(1, p)
    r22 = [Fraction(0)] * 4
    r22[3] = Fraction(1, p)
    target = [Fraction(0)] * 5 + [Fraction(0), Fraction(1, p)]
    cond = SubgroupConditions(p, [(rows + [r21, r22], target)], "one_mod_p")
    got = subgroup_volume(cond)
    q = p ** 2
    count = 0
    total = 0
    for g11 in range(q):
        for g12 in range(q):
            for g21 in range(q):
                for g22 in range(q):
                    det = (g11 * g22 - g12 * g21) % p
                    if det == 0:
                        continue
                    total += 1
                    if g12 % p == 0 and g21 % p == 0 and g22 % p == 1 and det == 1:
                        count += 1
    assert got == Fraction(count, total)


@pytest.mark.parametrize("p,c", [(3, 2), (5, 2), (7, 2)])
def test_volume_K0_and_K011(p, c):
    # vol K_0(p^2) = 1/(p(p+1)); vol K^1_{0,1}(p^2) = 1/(p^2 nu_p)
    ctx = QuadCtx.make(p)
    rows = id_rows()
    r = [Fraction(0)] * 4
    r[2] = Fraction(1, p ** 2)
    cond = SubgroupConditions(p, [(rows + [r], [Fraction(0)] * 5)], "unit")
    assert subgroup_volume(cond) == Fraction(1, p * (p + 1))
    rows2 = id_rows()
    extra = []
    t = [Fraction(0)] * 5
    for idx, target in [(0, 1), (2, 0), (3, 1)]:
        rr = [Fraction(0)] * 4
        rr[idx] = Fraction(1, p ** 2)
        extra.append(rr)
    targets = [Fraction(0)] * 4 + [Fraction(1, p ** 2), Fraction(0), Fraction(1, p ** 2)]
    cond2 = SubgroupConditions(p, [(rows2 + extra, targets)], "unit")
    nu_p = p * (p - 1) ** 2 * (p + 1)
    assert subgroup_volume(cond2) == Fraction(1, p ** 2 * nu_p)
