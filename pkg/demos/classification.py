"""Every c-map is trivial, or has image p^k B on R with R/ker(lam) cyclic.

Enumerate all of Hom(A, B) for a handful of small shapes and tally the
verdicts.  For nontrivial c-maps, print the k that the image pins down.
"""

from collections import Counter

from cmapkernel import abelian as ab
from cmapkernel import cmap as cm

pairs = [
    ((2, (3,)), (2, (2, 1))),
    ((2, (2, 1)), (2, (3, 1))),
    ((3, (2, 1)), (3, (2,))),
    ((2, (2,)), (2, (1, 1))),   # equal top factors in B: every c-map is trivial
]

for (p, a), (_, b) in pairs:
    A, B = ab.AbelianShape(p, a), ab.AbelianShape(p, b)
    tally = Counter()
    ks = Counter()
    for lam in ab.hom_enumerate(A, B):
        v = cm.classify(A, B, lam)
        tally[v.kind] += 1
        if v.kind == cm.CMapVerdict.NONTRIVIAL:
            ks[v.k] += 1
    pd = cm.pair_data(A, B)
    print(f"p={p} A={a} B={b}  n1={pd.n1} n2={pd.n2} k'={pd.kprime}  "
          f"{dict(tally)}  nontrivial k: {dict(ks) or '-'}")

# The lemma suite checks every hypothesis/conclusion pair on one map.
A, B = ab.AbelianShape(2, (3,)), ab.AbelianShape(2, (2, 1))
lam = ab.hom_validate([[2], [0]], A, B)
print()
for name, chk in cm.lemma_suite(A, B, lam).items():
    flag = "hyp" if chk.hypothesis else "   "
    print(f"  {flag} {'ok ' if chk.consistent else 'BAD'} {name}")
