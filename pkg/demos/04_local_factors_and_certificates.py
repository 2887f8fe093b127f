"""Local factors of integral test vectors and their ideal certificates.

The module of test data is free over the spherical Hecke algebra; the
local factor of a vector is recovered from its normalized period by the
inverse Satake transform.  For vectors integral at determinant level, the
traced factor lies in an explicit two-generator ideal, and the engine
produces cofactors that re-expand exactly.
"""

import random

from padicasai import (
    HeckeElem,
    QuadCtx,
    certify_ideal,
    delta1,
    euler_poly,
    generator_vector,
    gstar_factor,
    hecke_apply,
    local_factor,
)
from padicasai.gstar import cyclotomic_factor_candidate
from padicasai.heckemod import random_integral_vector

p = 3
ctx = QuadCtx.make(p)

# freeness in action: act by a Hecke element, recover it back
h = HeckeElem.gen("inert_F", "T") + HeckeElem.gen("inert_F", "S", -1) * 2
vec = hecke_apply(h, generator_vector(ctx))
print("recovered local factor equals the acting element:", local_factor(vec) == h)

# a random integral vector at determinant level and its certificates
rng = random.Random(0)
vec = random_integral_vector(ctx, rng, "K[p]", origin_vanishing=True)
rep = certify_ideal(vec, 2)
print("\npart-2 certificate route:", rep.route, " verified:", rep.cert.verified)
print("cofactor V:", rep.cert.V)

# the canonical vector: its traced factor IS the involuted Euler factor
d1 = delta1(ctx, "inert")
print("\ncanonical vector: unfolded integral equals 1:", d1["A_s_equals_one"])
print("traced factor equals P'_As(1):", d1["local_factor_is_involuted_asai_at_one"])

# the G* layer: the factor descends, with a certificate, and the Frobenius
# grading exhibits the cyclotomic norm-relation shape
out = gstar_factor(d1["vector"])
cand = cyclotomic_factor_candidate(out)
print("\nG* certificate verified:", out.cert.verified)
print("graded factor terms:", [(t["frob"]) for t in cand["candidate_cyclotomic_factor"]["terms"]])
print("compare: X-degrees of", euler_poly("asai_star_inert", p).involute().coeffs)
