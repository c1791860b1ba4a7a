"""Is the central automorphism group of a p-group abelian?

For a group with no abelian direct factor, the answer is read off the map
lam: Z(G) -> G/G'.  Each verdict below is confirmed by listing Aut_c(G)
and comparing every pair of automorphisms.
"""

from cmapkernel import catalog as cat
from cmapkernel import pgroup as pg

for recipe in ["dihedral:8", "quaternion:8", "modular:2:4", "heisenberg:3",
               "semidihedral:16", "dp(cyclic:2:1,dihedral:8)"]:
    G = cat.build(recipe)
    conn = pg.lambda_map(G)
    v = pg.verdict(G, conn=conn)
    print(f"{recipe}: |G|={G.order} |Z|={conn.Z.order} |G'|={conn.D.order}")
    print(f"  Z(G) ~ {conn.A.alphas}, G/G' ~ {conn.B.alphas}, lam = {conn.lam.matrix}")
    print(f"  {v.kind}: {v.reason}")
    if v.kind != pg.Verdict.NOT_PN:
        autos = pg.central_automorphisms(G, conn=conn)
        abelian, _ = pg.autc_is_abelian_oracle(G, autos)
        print(f"  oracle: |Aut_c| = {len(autos)}, abelian = {abelian}")

# M_16 x M_16 is the smallest example here whose Aut_c is not abelian.
G = cat.build("dp(modular:2:4,modular:2:4)")
conn = pg.lambda_map(G)
v = pg.verdict(G, conn=conn)
print()
print(f"M16 x M16: {v.kind}, {v.reason}")

# Class 2 groups: ker(lam) = G' and exp(G') = exp(G/Z(G)).
print()
print("Heisenberg, class 2 report:", pg.adney_yen_class2_check(cat.build("heisenberg:3")))
