"""Deciding and classifying c-maps ``lam : A -> B``.

``lam`` is a c-map when ``f lam g == g lam f`` for every pair
``f, g in Hom(B, A)``, and a trivial c-map when every such ``f lam g`` is
zero.  Three deciders are provided and must always agree:

* :func:`is_cmap_definition` enumerates all pairs ``(f, g)``;
* :func:`is_cmap_basis` only looks at products ``e_ij lam e_kl`` of the
  canonical basis maps;
* :func:`is_cmap_structural` checks three divisibility conditions on the
  images of the generators ``r_i`` of ``R = A[p^b]``.

:func:`classify` uses the basis decider and then sorts c-maps into trivial
and nontrivial ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import abelian as ab
from .errors import GuardExceeded, InternalInconsistency, ShapeError

DEFINITION_GUARD = 10**7

# tags returned by is_cmap_structural
OTHER_GENERATORS = "other-generators"     # lam(r_u) in p^n1 B for u > 1
FIRST_COORDINATE = "first-coordinate"     # lam_1(r_1) in <p^k' b_1>
OTHER_COORDINATES = "other-coordinates"   # lam_j(r_1) in <p^n1 b_j> for j > 1


@dataclass(frozen=True)
class PairData:
    """Everything about ``(A, B)`` that does not depend on ``lam``."""

    A: ab.AbelianShape
    B: ab.AbelianShape
    R: ab.Subgroup
    R_parts: tuple
    r: tuple
    n1: int
    n2: int
    beta2: int
    basis: tuple
    labels: tuple
    basis_array: np.ndarray = field(compare=False, repr=False)
    powers: tuple = field(compare=False, repr=False)

    @property
    def kprime(self):
        return min(self.n1, max(self.n2, self.beta2))

    def power(self, k):
        return self.powers[min(k, len(self.powers) - 1)]


def _cyclic_part(R, i):
    keep = [c for c in R.codes
            if all(v == 0 for t, v in enumerate(R.ambient.decode(c)) if t != i)]
    return ab.Subgroup(R.ambient, frozenset(keep))


@lru_cache(maxsize=512)
def pair_data(A, B):
    if A.p != B.p:
        raise ShapeError("A and B must be groups for the same prime")
    p, b = A.p, B.top
    R = ab.torsion_subgroup(A, b)
    parts = tuple(_cyclic_part(R, i) for i in range(A.n))
    exps = [ab.exponent_power(S) for S in parts]
    r = []
    for i, alpha in enumerate(A.alphas):
        vec = [0] * A.n
        vec[i] = p ** max(0, alpha - b)
        r.append(ab.GroupElement(A, tuple(vec)))
    basis = ab.hom_basis(B, A)
    return PairData(
        A=A, B=B, R=R, R_parts=parts, r=tuple(r),
        n1=exps[0], n2=max(exps[1:], default=0),
        beta2=B.alphas[1] if B.n > 1 else 0,
        basis=tuple(basis), labels=tuple(ab.basis_labels(B, A)),
        basis_array=np.stack([e.array for e in basis]),
        powers=tuple(ab.power_subgroup(B, k) for k in range(b + 1)),
    )


@dataclass(frozen=True)
class CMapProfile:
    a: int
    b: int
    n1: int
    n2: int
    beta2: int
    c: int
    kprime: int
    r: tuple
    R: ab.Subgroup
    kernel: ab.Subgroup = field(repr=False)
    image_R: ab.Subgroup = field(repr=False)

    def as_dict(self):
        return {
            "a": self.a, "b": self.b, "n1": self.n1, "n2": self.n2,
            "beta2": self.beta2, "c": self.c, "kprime": self.kprime,
            "r": [list(x.coeffs) for x in self.r],
            "R_order": self.R.order,
            "kernel_order": self.kernel.order,
            "image_R_order": self.image_R.order,
        }


def _check(A, B, lam):
    if lam.source != A or lam.target != B:
        raise ShapeError("lam must be a map A -> B")


def profile(A, B, lam):
    _check(A, B, lam)
    pd = pair_data(A, B)
    ker = ab.kernel(lam)
    return CMapProfile(
        a=A.top, b=B.top, n1=pd.n1, n2=pd.n2, beta2=pd.beta2,
        c=ab.exponent_power(ker), kprime=pd.kprime, r=pd.r, R=pd.R,
        kernel=ker, image_R=ab.image_of(lam, pd.R),
    )


# --- the three deciders ------------------------------------------------------


def _dtype(A, B):
    big = max(max(A.moduli), max(B.moduli))
    return np.int64 if big < (1 << 18) else object


def basis_products(A, B, lam):
    """``P[x, y] = e_x lam e_y`` for all basis maps, as ``(nm, nm, n, m)``."""
    _check(A, B, lam)
    pd = pair_data(A, B)
    dt = _dtype(A, B)
    E = pd.basis_array.astype(dt)
    L = lam.array.astype(dt)
    EL = E @ L
    P = np.einsum("xab,ybc->xyac", EL, E)
    mods = np.asarray(A.moduli, dtype=dt)[:, None]
    return P % mods


def is_cmap_basis(A, B, lam):
    """``(is_cmap, witness)`` from products of canonical basis maps.

    ``lam`` is a c-map iff ``e_ij lam e_kl == 0`` whenever ``(i, j) != (k, l)``.
    The witness is the lexicographically first pair ``((i, j), (k, l))``,
    1-based with ``(i, j) < (k, l)``, on which ``e_ij lam e_kl`` and
    ``e_kl lam e_ij`` differ.
    """
    pd = pair_data(A, B)
    P = basis_products(A, B, lam)
    nonzero = np.any(P.reshape(P.shape[0], P.shape[1], -1) != 0, axis=2)
    np.fill_diagonal(nonzero, False)
    if not nonzero.any():
        return True, None
    bad = nonzero | nonzero.T
    x, y = np.argwhere(np.triu(bad))[0]
    return False, (pd.labels[x], pd.labels[y])


def is_trivial_basis(A, B, lam):
    """``f lam g == 0`` for all f, g, checked on all basis products."""
    return not np.any(basis_products(A, B, lam))


def _divisible(value, p, k):
    return int(value) % (p**k) == 0


def is_cmap_structural(A, B, lam, prof=None):
    """``(is_cmap, failing_tag)`` from divisibility of ``lam(r_i)``."""
    _check(A, B, lam)
    pd = pair_data(A, B)
    p = A.p
    images = [lam(r).coeffs for r in pd.r]
    for u in range(1, A.n):
        if not all(_divisible(v, p, pd.n1) for v in images[u]):
            return False, OTHER_GENERATORS
    if not _divisible(images[0][0], p, pd.kprime):
        return False, FIRST_COORDINATE
    if not all(_divisible(v, p, pd.n1) for v in images[0][1:]):
        return False, OTHER_COORDINATES
    return True, None


def _pairwise(A, B, lam, guard, compare):
    count = ab.hom_count(B, A)
    if count * count > guard:
        raise GuardExceeded("|Hom(B, A)|^2 compositions", count * count, guard)
    F = ab.hom_matrices(B, A, guard=guard)
    dt = _dtype(A, B)
    F = F.astype(dt)
    FL = F @ lam.array.astype(dt)
    mods = np.asarray(A.moduli, dtype=dt)[:, None]
    N = len(F)
    chunk = max(1, (1 << 21) // max(1, N * A.n * B.n))
    for start in range(0, N, chunk):
        stop = min(N, start + chunk)
        # X[f, g] = f lam g, Y[f, g] = g lam f
        X = np.einsum("fab,gbc->fgac", FL[start:stop], F) % mods
        Y = np.einsum("gab,fbc->fgac", FL, F[start:stop]) % mods
        bad = compare(X, Y)
        if bad.any():
            f, g = np.argwhere(bad)[0]
            return False, (int(f) + start, int(g))
    return True, None


def is_cmap_definition(A, B, lam, guard=DEFINITION_GUARD):
    """``(is_cmap, witness)`` by checking ``f lam g == g lam f`` for all pairs.

    The witness is the first failing ``(f, g)`` in enumeration order of
    :func:`cmapkernel.abelian.hom_enumerate`, returned as homomorphisms.
    """
    _check(A, B, lam)

    def differ(X, Y):
        return np.any((X != Y).reshape(X.shape[0], X.shape[1], -1), axis=2)

    ok, idx = _pairwise(A, B, lam, guard, differ)
    if ok:
        return True, None
    F = ab.hom_matrices(B, A, guard=guard)
    f = ab.hom_validate(F[idx[0]].tolist(), B, A)
    g = ab.hom_validate(F[idx[1]].tolist(), B, A)
    return False, (f, g)


def is_trivial_definition(A, B, lam, guard=DEFINITION_GUARD):
    """``f lam g == 0`` for all enumerated pairs."""
    _check(A, B, lam)

    def nonzero(X, Y):
        return np.any((X != 0).reshape(X.shape[0], X.shape[1], -1), axis=2)

    ok, _ = _pairwise(A, B, lam, guard, nonzero)
    return ok


def is_trivial_cmap(A, B, lam, prof=None):
    """Trivial iff ``lam(R) <= p^n1 B``."""
    prof = prof or profile(A, B, lam)
    return ab.subgroup_le(prof.image_R, pair_data(A, B).power(prof.n1))


# --- classification ----------------------------------------------------------


@dataclass(frozen=True)
class CMapVerdict:
    kind: str
    witness: tuple | None = None
    k: int | None = None

    NOT_CMAP = "NotCMap"
    TRIVIAL = "TrivialCMap"
    NONTRIVIAL = "NontrivialCMap"

    @property
    def is_cmap(self):
        return self.kind != self.NOT_CMAP

    def as_dict(self):
        out = {"kind": self.kind}
        if self.witness is not None:
            out["witness"] = [list(w) for w in self.witness]
        if self.k is not None:
            out["k"] = self.k
        return out


def _coset_orders(S, K):
    """Order exponent of ``x + K`` in ``S/K`` for every member ``x`` of S."""
    shape = S.ambient
    mods = np.asarray(shape.moduli, dtype=np.int64)
    x = S.array
    out = np.full(len(x), -1, dtype=np.int64)
    kcodes = np.fromiter(K.codes, dtype=np.int64)
    for t in range(shape.top + 1):
        hit = np.isin(shape.encode((x * shape.p**t) % mods), kcodes) & (out < 0)
        out[hit] = t
    return out


def quotient_is_cyclic(S, K):
    """Fast equivalent of :func:`cmapkernel.abelian.quotient_is_cyclic`."""
    if not ab.subgroup_le(K, S):
        raise ab.NotASubgroup("K is not contained in S")
    index = S.order // K.order
    return bool(np.any(S.ambient.p ** _coset_orders(S, K) == index))


def matching_power(pd, image, start=0):
    """Least ``k >= start`` with ``image == p^k B``, or None."""
    for k in range(start, len(pd.powers)):
        if pd.powers[k].codes == image.codes:
            return k
    return None


def classify(A, B, lam, prof=None):
    ok, witness = is_cmap_basis(A, B, lam)
    if not ok:
        return CMapVerdict(CMapVerdict.NOT_CMAP, witness=witness)
    prof = prof or profile(A, B, lam)
    if is_trivial_cmap(A, B, lam, prof):
        return CMapVerdict(CMapVerdict.TRIVIAL)
    pd = pair_data(A, B)
    k = matching_power(pd, prof.image_R, start=prof.c)
    if k is None or not prof.c <= k < prof.n1:
        raise InternalInconsistency(
            f"nontrivial c-map with lam(R) not of the form p^k B, c <= k < n1 "
            f"(c={prof.c}, n1={prof.n1}, k={k}) for {lam}")
    if not quotient_is_cyclic(prof.R, prof.kernel):
        raise InternalInconsistency(f"R / ker(lam) is not cyclic for {lam}")
    return CMapVerdict(CMapVerdict.NONTRIVIAL, k=k)


# --- lemma suite -------------------------------------------------------------


@dataclass(frozen=True)
class LemmaCheck:
    hypothesis: bool
    conclusion: bool
    iff: bool = False
    note: str | None = None

    @property
    def consistent(self):
        if self.iff:
            return self.hypothesis == self.conclusion
        return (not self.hypothesis) or self.conclusion

    def as_dict(self):
        out = {"hypothesis_holds": self.hypothesis,
               "conclusion_holds": self.conclusion,
               "consistent": self.consistent}
        if self.note:
            out["note"] = self.note
        return out


def _cyclic_subgroup(shape, vec):
    return ab.span(shape, [vec])


@lru_cache(maxsize=512)
def shape_lemmas(A, B, exhaustive_guard=1 << 12):
    """Checks that only depend on the shapes ``A`` and ``B``."""
    pd = pair_data(A, B)
    p = A.p
    out = {}

    if ab.hom_count(B, A) <= exhaustive_guard:
        maps = list(ab.hom_enumerate(B, A, guard=exhaustive_guard))
    else:
        maps = list(pd.basis)
    images = ab.trivial_subgroup(A)
    for f in maps:
        images = ab.subgroup_sum(images, ab.image_of(f))
    out["R_is_sum_of_images"] = LemmaCheck(True, ab.subgroup_eq(images, pd.R))

    total = ab.trivial_subgroup(A)
    for part in pd.R_parts:
        total = ab.subgroup_sum(total, part)
    out["R_splits_over_factors"] = LemmaCheck(True, ab.subgroup_eq(total, pd.R))

    gen_ok = all(ab.subgroup_eq(_cyclic_subgroup(A, r.coeffs), part)
                 for r, part in zip(pd.r, pd.R_parts))
    out["r_i_generates_R_i"] = LemmaCheck(True, gen_ok)

    b1 = B.generator(0)
    e_i1 = [pd.basis[i * B.n] for i in range(A.n)]
    out["e_i1_maps_b1_to_r_i"] = LemmaCheck(
        True, all(e(b1) == r for e, r in zip(e_i1, pd.r)))

    ok = True
    for j in range(1, B.n):
        scale = p ** max(0, pd.n1 - B.alphas[j])
        ok &= pd.basis[j](B.generator(j)) == scale * pd.r[0]
    out["e_1j_maps_b_j_to_scaled_r_1"] = LemmaCheck(B.n > 1, ok)

    inter = ab.kernel_intersection(B, ab.whole_group(A), exhaustive_guard)
    out["p_a_B_is_common_kernel"] = LemmaCheck(
        True, ab.subgroup_eq(inter, pd.power(A.top)))
    return out


def lemma_suite(A, B, lam, prof=None, cmap=None, trivial_products=None):
    """Evaluate every hypothesis/conclusion pair on ``(A, B, lam)``.

    Returns a dict name -> :class:`LemmaCheck`; every entry must be
    consistent.  ``cmap`` and ``trivial_products`` may be passed in when the
    caller already computed them.
    """
    pd = pair_data(A, B)
    prof = prof or profile(A, B, lam)
    if cmap is None:
        cmap = is_cmap_basis(A, B, lam)[0]
    if trivial_products is None:
        trivial_products = is_trivial_basis(A, B, lam)
    p, c, n1 = A.p, prof.c, prof.n1
    imR = prof.image_R
    ker_in_R = ab.subgroup_le(prof.kernel, pd.R)
    trivial = ab.subgroup_le(imR, pd.power(n1))

    out = dict(shape_lemmas(A, B))
    out["kernel_in_R_iff_c_le_n1"] = LemmaCheck(ker_in_R, c <= n1, iff=True)
    out["p_c_B_is_common_kernel_into_ker"] = LemmaCheck(
        True, ab.subgroup_eq(ab.kernel_intersection(B, prof.kernel), pd.power(c)))
    out["cmap_image_in_p_c_B"] = LemmaCheck(cmap, ab.subgroup_le(imR, pd.power(c)))
    out["cmap_with_c_ge_n1_is_trivial"] = LemmaCheck(cmap and c >= n1, trivial)
    out["trivial_iff_image_in_p_n1_B"] = LemmaCheck(trivial_products, trivial, iff=True)
    out["n1_eq_n2_forces_trivial"] = LemmaCheck(cmap and n1 == prof.n2, trivial)

    image_A = ab.image_of(lam)
    coker = next(t for t in range(B.top + 1) if pd.power(t).codes <= image_A.codes)
    out["equal_ker_coker_exponents"] = LemmaCheck(
        cmap and c == coker, ab.subgroup_eq(imR, pd.power(c)))

    others_zero = all(lam(r).is_zero() for r in pd.r[1:])
    imR_cyclic = quotient_is_cyclic(imR, ab.trivial_subgroup(B))
    out["b_eq_n1_kills_other_generators"] = LemmaCheck(
        cmap and B.top == n1, others_zero and imR_cyclic)
    out["equal_top_factors_force_trivial"] = LemmaCheck(
        cmap and B.n > 1 and B.alphas[0] == B.alphas[1], trivial)

    # lam_1(r_1) generates <p^k b_1> with k' <= k < n1  =>  lam(R) = <p^k b_1>
    first = lam(pd.r[0]).coeffs[0]
    k1 = ab.valuation(first, p, B.top)
    hyp = cmap and pd.kprime <= k1 < n1
    cyc = _cyclic_subgroup(B, (p**k1,) + (0,) * (B.n - 1))
    note = None
    if hyp and not ab.subgroup_eq(cyc, pd.power(k1)):
        note = "p^k B differs from <p^k b_1>"
    out["first_coordinate_generates_image"] = LemmaCheck(
        hyp, ab.subgroup_eq(imR, cyc), note=note)

    k = matching_power(pd, imR, start=c)
    shape_ok = k is not None and c <= k < n1
    quotient_ok = shape_ok and ker_in_R and quotient_is_cyclic(pd.R, prof.kernel)
    out["nontrivial_cmap_shape"] = LemmaCheck(cmap and not trivial, quotient_ok)
    out["nontrivial_cmap_shape_converse"] = LemmaCheck(
        quotient_ok, cmap and not trivial)
    return out


def report(A, B, lam, oracle=False, lemmas=False, guard=DEFINITION_GUARD):
    """Everything known about ``lam`` as a JSON-ready dict."""
    prof = profile(A, B, lam)
    basis_ok, witness = is_cmap_basis(A, B, lam)
    structural_ok, tag = is_cmap_structural(A, B, lam, prof)
    verdict = classify(A, B, lam, prof)
    verdicts = {
        "basis": basis_ok,
        "structural": structural_ok,
        "trivial": is_trivial_cmap(A, B, lam, prof),
        "classification": verdict.as_dict(),
    }
    if tag:
        verdicts["structural_failure"] = tag
    out = {"profile": prof.as_dict(), "verdicts": verdicts}
    if witness:
        out["witness"] = [list(w) for w in witness]
    if oracle:
        ok, pair = is_cmap_definition(A, B, lam, guard=guard)
        verdicts["definition"] = ok
        if pair:
            out["definition_witness"] = {"f": [list(r) for r in pair[0].matrix],
                                         "g": [list(r) for r in pair[1].matrix]}
    if lemmas:
        out["lemma_suite"] = {name: chk.as_dict()
                              for name, chk in sorted(lemma_suite(
                                  A, B, lam, prof, cmap=basis_ok).items())}
    return out
