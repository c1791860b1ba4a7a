"""A small exhaustive sweep, the same machinery as the acceptance run.

Every map between every pair of small 2-groups goes through all three
deciders and the lemma suite; then a handful of groups are checked
against the Aut_c oracle.  Any disagreement would show up as a mismatch.
"""

import time

from cmapkernel import catalog as cat
from cmapkernel import sweep as sw

t0 = time.perf_counter()
results = sw.sweep_lambdas(primes=(2,), max_exp=3, max_factors=3, workers=1)
print("maps:", sw.summarize(results), f"{time.perf_counter() - t0:.1f}s")

t0 = time.perf_counter()
groups = [(str(r), cat.build(r)) for r in cat.group_corpus(32)]
gres = sw.sweep_groups(groups)
print("groups:", sw.group_summary(gres), f"{time.perf_counter() - t0:.1f}s")
for r in gres:
    if r.verdict == "AutcNonAbelian":
        print("  non-abelian Aut_c:", r.name, "|Aut_c| =", r.autc)
