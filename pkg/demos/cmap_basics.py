"""Deciding whether a homomorphism between abelian p-groups is a c-map.

A map lam: A -> B is a c-map when f lam g == g lam f for every pair
f, g in Hom(B, A).  This script walks through one map that is a c-map
and one that is not, and compares the three ways of deciding it.
"""

from cmapkernel import abelian as ab
from cmapkernel import cmap as cm

# Z_27 -> Z_9 + Z_3, sending the generator to (1, 0).
A = ab.AbelianShape(3, (3,))
B = ab.AbelianShape(3, (2, 1))
lam = ab.hom_validate([[1], [0]], A, B)

prof = cm.profile(A, B, lam)
print("A =", A.alphas, " B =", B.alphas, " p =", A.p)
print(f"exp(B) = p^{prof.b}, R = A[p^b] has order {prof.R.order}")
print(f"n1 = {prof.n1}, n2 = {prof.n2}, beta2 = {prof.beta2}, k' = {prof.kprime}, c = {prof.c}")
print("r_1 =", prof.r[0].coeffs, "  lam(r_1) =", lam(prof.r[0]).coeffs)

# Three deciders.  The definition enumerates all (f, g); the basis route
# only looks at e_ij lam e_kl; the structural route checks divisibility.
print("definition:", cm.is_cmap_definition(A, B, lam)[0])
print("basis:     ", cm.is_cmap_basis(A, B, lam)[0])
print("structural:", cm.is_cmap_structural(A, B, lam)[0])
print("verdict:   ", cm.classify(A, B, lam))

# Z_9 + Z_9 -> Z_9, projection onto the first factor.  Swapping the two
# factors through Hom(B, A) exposes the failure.
A = ab.AbelianShape(3, (2, 2))
B = ab.AbelianShape(3, (2,))
lam = ab.hom_validate([[1, 0]], A, B)
ok, (f, g) = cm.is_cmap_definition(A, B, lam)
print()
print("projection Z_9 + Z_9 -> Z_9 is a c-map:", ok)
print("  f =", f.matrix, " g =", g.matrix)
print("  f lam g =", ab.hom_compose(f, ab.hom_compose(lam, g)).matrix)
print("  g lam f =", ab.hom_compose(g, ab.hom_compose(lam, f)).matrix)
print("basis witness (1-based e_ij labels):", cm.is_cmap_basis(A, B, lam)[1])
print("structural condition that fails:", cm.is_cmap_structural(A, B, lam)[1])
