"""Exhaustive cross-checks over corpora of maps and groups.

These drivers back the ``sweep`` command and the acceptance tests.  Every
result object is ordered by a canonical instance index, independent of how
the work was scheduled.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import abelian as ab
from . import cmap as cm
from . import pgroup as pg
from .errors import CMapKernelError

DEFINITION_BUDGET = 10**7


def partitions(total, max_parts):
    """Non-increasing tuples of positive ints summing to ``total``."""
    out = []

    def rec(rest, largest, cur):
        if rest == 0:
            out.append(tuple(cur))
            return
        if len(cur) == max_parts:
            return
        for x in range(min(rest, largest), 0, -1):
            rec(rest - x, x, cur + [x])

    rec(total, total, [])
    return out


def shape_corpus(p, max_exp=4, max_factors=3):
    """All shapes with order ``<= p^max_exp`` and at most ``max_factors`` factors."""
    return [ab.AbelianShape(p, s) for t in range(1, max_exp + 1)
            for s in partitions(t, max_factors)]


def worker_count():
    cap = os.environ.get("CMAPKERNEL_THREADS")
    n = os.cpu_count() or 1
    return max(1, min(n, int(cap))) if cap else n


@dataclass
class PairResult:
    A: ab.AbelianShape
    B: ab.AbelianShape
    instances: int = 0
    cmaps: int = 0
    trivial: int = 0
    nontrivial: int = 0
    definition_checked: int = 0
    lemma_hits: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)


def definition_in_budget(A, B, budget=DEFINITION_BUDGET):
    h_ab, h_ba = ab.hom_count(A, B), ab.hom_count(B, A)
    return h_ab * h_ba * h_ba <= budget


def check_lambda(A, B, lam, definition=False, result=None):
    """Run every decider and lemma on one map; returns a list of problems."""
    problems = []
    prof = cm.profile(A, B, lam)
    basis_ok, _ = cm.is_cmap_basis(A, B, lam)
    structural_ok, _ = cm.is_cmap_structural(A, B, lam, prof)
    if basis_ok != structural_ok:
        problems.append("basis != structural")
    if definition:
        def_ok, _ = cm.is_cmap_definition(A, B, lam)
        if def_ok != basis_ok:
            problems.append("definition != basis")
        if basis_ok and cm.is_trivial_definition(A, B, lam) != cm.is_trivial_cmap(A, B, lam, prof):
            problems.append("trivial by definition != trivial by image")
    try:
        verdict = cm.classify(A, B, lam, prof)
    except CMapKernelError as exc:
        problems.append(f"classify: {exc}")
        verdict = None
    if verdict is not None and not verdict.is_cmap and structural_ok:
        problems.append("non-c-map satisfies every divisibility condition")
    lemmas = cm.lemma_suite(A, B, lam, prof, cmap=basis_ok)
    for name, chk in lemmas.items():
        if not chk.consistent:
            problems.append(f"lemma {name}")
        if chk.note:
            problems.append(f"lemma {name}: {chk.note}")
    if result is not None:
        result.instances += 1
        result.definition_checked += int(definition)
        if verdict is not None and verdict.is_cmap:
            result.cmaps += 1
            if verdict.kind == cm.CMapVerdict.TRIVIAL:
                result.trivial += 1
            else:
                result.nontrivial += 1
        for name, chk in lemmas.items():
            if chk.hypothesis:
                result.lemma_hits[name] = result.lemma_hits.get(name, 0) + 1
        if problems:
            result.mismatches.append((lam, problems))
    return problems


def sweep_pair(A, B, definition_budget=DEFINITION_BUDGET):
    result = PairResult(A, B)
    definition = definition_in_budget(A, B, definition_budget)
    for lam in ab.hom_enumerate(A, B):
        check_lambda(A, B, lam, definition=definition, result=result)
    return result


def _sweep_pair_args(args):
    return sweep_pair(*args)


def sweep_lambdas(primes=(2, 3), max_exp=4, max_factors=3,
                  definition_budget=DEFINITION_BUDGET, workers=None):
    """Sweep all ``(A, B, lam)`` over the shape corpus for each prime."""
    jobs = []
    for p in primes:
        shapes = shape_corpus(p, max_exp, max_factors)
        jobs += [(A, B, definition_budget) for A in shapes for B in shapes]
    workers = workers or worker_count()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_sweep_pair_args, jobs, chunksize=4))
    return [sweep_pair(*job) for job in jobs]


def summarize(results):
    keys = ("instances", "cmaps", "trivial", "nontrivial", "definition_checked")
    out = {k: sum(getattr(r, k) for r in results) for k in keys}
    out["mismatches"] = sum(len(r.mismatches) for r in results)
    return out


# --- groups ------------------------------------------------------------------


@dataclass
class GroupResult:
    name: str
    order: int
    pn: bool | None = None
    verdict: str | None = None
    oracle: bool | None = None
    autc: int | None = None
    classification: dict | None = None
    bridge_pairs: int = 0
    mismatches: list = field(default_factory=list)

    def key(self):
        """Everything that must not depend on the decomposition chosen."""
        return (self.verdict, self.autc, self.oracle,
                tuple(sorted((self.classification or {}).items())))


def check_group(name, G, seed=None, bridge=True, oracle=True,
                pn_guard=pg.PN_GUARD, autc_guard=pg.AUTC_GUARD):
    res = GroupResult(name, G.order)
    if G.prime_power is None:
        res.verdict = pg.Verdict.NOT_PPOWER
        return res
    conn = pg.lambda_map(G, seed=seed)
    v = pg.verdict(G, conn=conn, pn_guard=pn_guard)
    res.verdict = v.kind
    res.pn = v.kind != pg.Verdict.NOT_PN
    if v.classification is not None:
        cls = v.classification.as_dict()
        cls.pop("witness", None)   # basis-dependent labels
        res.classification = cls
    if not oracle:
        return res
    autos = pg.central_automorphisms(G, guard=autc_guard, conn=conn)
    res.autc = len(autos)
    res.oracle, _ = pg.autc_is_abelian_oracle(G, autos)
    if res.pn:
        expected = ab.hom_count(conn.B, conn.A)
        if res.autc != expected:
            res.mismatches.append(f"|Aut_c| = {res.autc} != |Hom(G/G', Z)| = {expected}")
        if (v.kind == pg.Verdict.ABELIAN) != res.oracle:
            res.mismatches.append(f"verdict {v.kind} but oracle says abelian={res.oracle}")
    if bridge:
        bad = pg.bridge_mismatches(G, autos, conn.lam)
        res.bridge_pairs = len(autos) ** 2
        if bad:
            res.mismatches.append(f"{len(bad)} pairs where the c-map bridge disagrees")
    return res


def sweep_groups(named_groups, seed=None, bridge=True, **guards):
    """``named_groups`` is an iterable of ``(name, CayleyGroup)``."""
    return [check_group(name, G, seed=seed, bridge=bridge, **guards)
            for name, G in named_groups]


def group_summary(results):
    return {
        "instances": len(results),
        "pn": sum(1 for r in results if r.pn),
        "autc_abelian": sum(1 for r in results if r.verdict == pg.Verdict.ABELIAN),
        "autc_nonabelian": sum(1 for r in results if r.verdict == pg.Verdict.NON_ABELIAN),
        "not_pn": sum(1 for r in results if r.verdict == pg.Verdict.NOT_PN),
        "bridge_pairs": sum(r.bridge_pairs for r in results),
        "mismatches": sum(len(r.mismatches) for r in results),
    }
