"""Central automorphisms commute exactly when their maps commute through lam.

Each sigma in Aut_c(G) comes from phi in Hom(G/G', Z(G)) via
sigma(g) = g phi(gG').  Two of them commute as permutations of G iff
phi_s lam phi_t == phi_t lam phi_s.  Check that on every pair.
"""

import itertools

from cmapkernel import catalog as cat
from cmapkernel import pgroup as pg

for recipe in ["modular:2:4", "dihedral:16", "semidirect:2:2:2:3", "dp(quaternion:8,cyclic:2:2)"]:
    G = cat.build(recipe)
    conn = pg.lambda_map(G)
    autos = pg.central_automorphisms(G, conn=conn)
    agree = sum(pg.commutes_via_cmap(s, t, conn.lam) == pg.commutes_as_permutations(s, t)
                for s, t in itertools.product(autos, repeat=2))
    commuting = sum(pg.commutes_as_permutations(s, t)
                    for s, t in itertools.product(autos, repeat=2))
    print(f"{recipe}: {len(autos)} central automorphisms, "
          f"{commuting}/{len(autos) ** 2} pairs commute, bridge agrees on {agree}")
