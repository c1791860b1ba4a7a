"""Finite p-groups given by multiplication tables.

Elements are indices ``0 .. order-1`` with ``0`` the identity and
``table[g, h] = g*h``.  This module computes the center and derived
subgroup, the connecting map ``lam : Z(G) -> G/G'``, the central
automorphisms, and the commutativity verdict for ``Aut_c(G)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import abelian as ab
from . import cmap as cm
from .errors import (
    GuardExceeded,
    InternalInconsistency,
    NotAbelian,
    NotAGroup,
    NotClass2,
    NotNormal,
    NotPPower,
)

ORDER_GUARD = 512
PN_GUARD = 256
AUTC_GUARD = 1 << 16


def prime_power(n):
    """``(p, e)`` with ``n == p**e`` and ``e >= 1``, or None."""
    if n < 2:
        return None
    p = next(q for q in range(2, n + 1) if n % q == 0)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return (p, e) if n == 1 else None


class CayleyGroup:
    """A validated multiplication table.  Build with :func:`validate_group`."""

    def __init__(self, table):
        self.table = table
        self.table.flags.writeable = False

    def __repr__(self):
        return f"CayleyGroup(order={self.order})"

    def __eq__(self, other):
        return isinstance(other, CayleyGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    @property
    def order(self):
        return self.table.shape[0]

    @cached_property
    def inverses(self):
        return np.argmin(self.table, axis=1)

    def mul(self, g, h):
        return int(self.table[g, h])

    def power(self, g, k):
        x = 0
        for _ in range(k):
            x = self.table[x, g]
        return int(x)

    @cached_property
    def element_orders(self):
        orders = np.zeros(self.order, dtype=np.int64)
        x = np.arange(self.order)
        cur, k = x.copy(), 1
        while not orders.all():
            orders[(cur == 0) & (orders == 0)] = k
            cur = self.table[cur, x]
            k += 1
        return orders

    @cached_property
    def prime_power(self):
        return prime_power(self.order)

    @property
    def p(self):
        if self.prime_power is None:
            raise NotPPower(f"order {self.order} is not a prime power")
        return self.prime_power[0]

    @cached_property
    def is_abelian(self):
        return np.array_equal(self.table, self.table.T)

    def cyclic(self, g):
        out, x = [0], int(g)
        while x != 0:
            out.append(x)
            x = int(self.table[x, g])
        return out

    @cached_property
    def generators(self):
        """A small generating set, picked greedily by element index."""
        gens, current = [], {0}
        for g in range(self.order):
            if g not in current:
                gens.append(g)
                current = set(closure(self, gens).members)
            if len(current) == self.order:
                break
        return tuple(gens)


def validate_group(table, guard=ORDER_GUARD):
    """Check every group axiom and return a :class:`CayleyGroup`."""
    t = np.array(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotAGroup("shape", t.shape)
    n = t.shape[0]
    if n > guard:
        raise GuardExceeded("group order", n, guard)
    bad = np.argwhere((t < 0) | (t >= n))
    if len(bad):
        raise NotAGroup("closure", tuple(int(v) for v in bad[0]))
    ar = np.arange(n)
    if not np.array_equal(t[0], ar) or not np.array_equal(t[:, 0], ar):
        raise NotAGroup("identity", 0)
    for g in range(n):
        if len(np.unique(t[g])) != n:
            raise NotAGroup("latin-row", g)
        if len(np.unique(t[:, g])) != n:
            raise NotAGroup("latin-column", g)
    for a in range(n):
        # (a*b)*c vs a*(b*c) for all b, c
        left = t[t[a]]
        right = t[a][t]
        if not np.array_equal(left, right):
            b, c = np.argwhere(left != right)[0]
            raise NotAGroup("associativity", (a, int(b), int(c)))
    return CayleyGroup(t)


# --- subsets and subgroups ---------------------------------------------------


@dataclass(frozen=True)
class GroupSubset:
    group: CayleyGroup = field(repr=False)
    members: tuple
    normal: bool = False

    @property
    def order(self):
        return len(self.members)

    def __contains__(self, g):
        return g in self.member_set

    @cached_property
    def member_set(self):
        return frozenset(self.members)

    @cached_property
    def mask(self):
        m = np.zeros(self.group.order, dtype=bool)
        m[list(self.members)] = True
        return m

    def __le__(self, other):
        return self.member_set <= other.member_set


def closure(G, gens):
    """Subgroup generated by ``gens``."""
    members = {0}
    frontier = [0]
    gens = [int(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(G.table[x, g])
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return GroupSubset(G, tuple(sorted(members)))


def is_normal(G, S):
    members = np.array(S.members)
    conj = G.table[G.table[:, members], G.inverses[:, None]]
    return bool(S.mask[conj].all())


def intersection(S, T):
    return GroupSubset(S.group, tuple(sorted(S.member_set & T.member_set)),
                       S.normal and T.normal)


def exponent(G, S):
    return int(np.lcm.reduce(G.element_orders[list(S.members)]))


def center(G):
    t = G.table
    members = [z for z in range(G.order) if np.array_equal(t[z], t[:, z])]
    return GroupSubset(G, tuple(members), normal=True)


def commutator_subgroup(G, S, T):
    """``[S, T]``, generated by ``s^-1 t^-1 s t``."""
    t, inv = G.table, G.inverses
    s = np.array(S.members)[:, None]
    u = np.array(T.members)[None, :]
    comms = np.unique(t[t[inv[s], inv[u]], t[s, u]])
    sub = closure(G, comms.tolist())
    return GroupSubset(G, sub.members, normal=is_normal(G, sub))


def derived_subgroup(G):
    whole = GroupSubset(G, tuple(range(G.order)), normal=True)
    return commutator_subgroup(G, whole, whole)


def nilpotency_class(G):
    """Length of the lower central series, or None if it stalls above 1."""
    whole = GroupSubset(G, tuple(range(G.order)), normal=True)
    current, c = whole, 0
    while current.order > 1:
        nxt = commutator_subgroup(G, current, whole)
        if nxt.order == current.order:
            return None
        current, c = nxt, c + 1
    return c


def quotient(G, N):
    """``(G/N, projection)`` with cosets ordered by their least element."""
    if not is_normal(G, N):
        raise NotNormal("subgroup is not normal")
    members = np.array(N.members)
    proj = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if proj[g] < 0:
            proj[G.table[g, members]] = len(reps)
            reps.append(g)
    reps = np.array(reps)
    table = proj[G.table[reps[:, None], reps[None, :]]]
    return CayleyGroup(table), proj


# --- abelian groups in coordinates -------------------------------------------


@dataclass(frozen=True)
class AbelianizedPresentation:
    """An abelian group (or subgroup) identified with ``shape``.

    ``generators[i]`` is the element realizing the i-th cyclic factor and
    ``coords[g]`` the coefficient vector of element ``g`` (``-1`` rows for
    elements outside the subgroup).  ``elements[code]`` inverts ``coords``.
    """

    shape: ab.AbelianShape
    generators: tuple
    coords: np.ndarray = field(repr=False)
    elements: np.ndarray = field(repr=False)

    def coordinate_map(self, g):
        return tuple(int(v) for v in self.coords[g])

    def element_of(self, vec):
        return int(self.elements[int(self.shape.encode(vec))])


def abelian_decompose(G, members=None, seed=None):
    """Split an abelian p-subgroup of ``G`` into cyclic factors.

    Greedy: repeatedly take an element of largest order whose cyclic subgroup
    meets the span so far trivially.  Ties go to the least index, or to a
    seeded random order when ``seed`` is given.
    """
    members = list(range(G.order)) if members is None else sorted(members)
    if len(members) == 1:
        raise ValueError("the trivial group has no cyclic decomposition")
    pp = prime_power(len(members))
    if pp is None:
        raise NotPPower(f"order {len(members)} is not a prime power")
    t = G.table
    sub = np.array(members)
    if not np.array_equal(t[np.ix_(sub, sub)], t[np.ix_(sub, sub)].T):
        raise NotAbelian("subgroup is not abelian")
    orders = G.element_orders
    rank = {g: i for i, g in enumerate(members)}
    if seed is not None:
        shuffled = members[:]
        random.Random(seed).shuffle(shuffled)
        rank = {g: i for i, g in enumerate(shuffled)}
    candidates = sorted(members, key=lambda g: (-orders[g], rank[g]))

    gens, span = [], {0}
    while len(span) < len(members):
        for g in candidates:
            if g in span:
                continue
            cyc = G.cyclic(g)
            if span.isdisjoint(cyc[1:]):
                gens.append(g)
                span = {int(t[x, y]) for x in span for y in cyc}
                break
        else:
            raise InternalInconsistency("greedy basis extraction failed")

    p = pp[0]
    exps = []
    for g in gens:
        o, e = int(orders[g]), 0
        while o > 1:
            o //= p
            e += 1
        exps.append(e)
    shape = ab.AbelianShape(p, tuple(exps))
    if shape.order != len(members):
        raise InternalInconsistency("generators do not give a direct decomposition")

    # coefficient tuples in code order -> group elements
    powers = [np.array([G.power(g, k) for k in range(m)])
              for g, m in zip(gens, shape.moduli)]
    elements = np.zeros(shape.order, dtype=np.int64)
    vecs = shape.elements
    for i, pw in enumerate(powers):
        elements = t[elements, pw[vecs[:, i]]]
    coords = np.full((G.order, shape.n), -1, dtype=np.int64)
    coords[elements] = vecs
    if len(set(elements.tolist())) != shape.order or set(elements.tolist()) != set(members):
        raise InternalInconsistency("coordinate map is not a bijection")
    return AbelianizedPresentation(shape, tuple(gens), coords, elements)


# --- the connecting map ------------------------------------------------------


@dataclass(frozen=True)
class ConnectingMap:
    """``lam : Z(G) -> G/G'`` in coordinates, with everything around it."""

    group: CayleyGroup = field(repr=False)
    Z: GroupSubset = field(repr=False)
    D: GroupSubset = field(repr=False)
    A_pres: AbelianizedPresentation = field(repr=False)
    B_pres: AbelianizedPresentation = field(repr=False)
    quotient: CayleyGroup = field(repr=False)
    projection: np.ndarray = field(repr=False)
    lam: ab.Homomorphism

    @property
    def A(self):
        return self.A_pres.shape

    @property
    def B(self):
        return self.B_pres.shape

    def __iter__(self):
        return iter((self.A, self.B, self.lam))

    @cached_property
    def b_coords(self):
        """Coordinates of ``gG'`` for every ``g``, shape ``(order, m)``."""
        return self.B_pres.coords[self.projection]


def lambda_map(G, seed=None):
    """Coordinates for ``Z(G) -> G -> G/G'``; unpacks as ``(A, B, lam)``."""
    if G.prime_power is None:
        raise NotPPower(f"order {G.order} is not a prime power")
    Z = center(G)
    D = derived_subgroup(G)
    Q, proj = quotient(G, D)
    A_pres = abelian_decompose(G, Z.members, seed=seed)
    B_pres = abelian_decompose(Q, seed=seed)
    columns = [B_pres.coords[proj[z]] for z in A_pres.generators]
    matrix = [[int(col[i]) for col in columns] for i in range(B_pres.shape.n)]
    lam = ab.hom_validate(matrix, A_pres.shape, B_pres.shape)
    return ConnectingMap(G, Z, D, A_pres, B_pres, Q, proj, lam)


def kernel_in_group(conn):
    """``ker(lam)`` pulled back to elements of G."""
    ker = ab.kernel(conn.lam)
    return GroupSubset(conn.group, tuple(sorted(
        conn.A_pres.element_of(v) for v in ker.array)))


# --- purely non-abelian test -------------------------------------------------


def is_pn(G, guard=PN_GUARD, conn=None):
    """``(is_pn, witness)``; witness ``(A, K)`` with ``G = A x K``, A abelian.

    ``G`` has a nontrivial abelian direct factor iff some central ``z != 1``
    admits a retraction ``G -> <z>``.  Such a retraction factors through
    ``G/G'``, so it is searched among ``Hom(G/G', Z_{|z|})``.
    """
    if G.order > guard:
        raise GuardExceeded("group order for PN search", G.order, guard)
    if G.order == 1:
        return True, None
    conn = conn or lambda_map(G)
    B = conn.B
    bc = conn.b_coords
    p = G.p
    for z in conn.Z.members[1:]:
        e = int(round(np.log(G.element_orders[z]) / np.log(p)))
        target = ab.AbelianShape(p, (e,))
        psis = ab.hom_matrices(B, target)[:, 0, :]
        values = (psis @ bc[z]) % p**e
        hits = np.nonzero(values == 1)[0]
        if len(hits):
            psi = psis[hits[0]]
            K = [g for g in range(G.order) if (bc[g] @ psi) % p**e == 0]
            A = GroupSubset(G, tuple(sorted(G.cyclic(z))), normal=True)
            return False, (A, GroupSubset(G, tuple(K), normal=True))
    return True, None


def normal_subgroups(G, guard=64):
    """All normal subgroups by joining normal closures of single elements."""
    if G.order > guard:
        raise GuardExceeded("group order for normal subgroup search", G.order, guard)
    t, inv = G.table, G.inverses

    def normal_closure(gens):
        sub = set(closure(G, gens).members)
        while True:
            conj = {int(t[t[g, x], inv[g]]) for g in range(G.order) for x in sub}
            if conj <= sub:
                return frozenset(sub)
            sub = set(closure(G, sorted(sub | conj)).members)

    atoms = {normal_closure([g]) for g in range(G.order)}
    found = set(atoms)
    frontier = set(atoms)
    while frontier:
        nxt = set()
        for S in frontier:
            for T in atoms:
                J = frozenset(closure(G, sorted(S | T)).members)
                if J not in found:
                    found.add(J)
                    nxt.add(J)
        frontier = nxt
    return [GroupSubset(G, tuple(sorted(S)), normal=True)
            for S in sorted(found, key=lambda s: (len(s), sorted(s)))]


def is_pn_bruteforce(G, guard=64):
    """Reference PN test: search pairs of normal subgroups ``A x K = G``."""
    subs = normal_subgroups(G, guard)
    for A in subs:
        if A.order == 1:
            continue
        a = np.array(A.members)
        if not np.array_equal(G.table[np.ix_(a, a)], G.table[np.ix_(a, a)].T):
            continue
        for K in subs:
            if A.order * K.order == G.order and not (A.member_set & K.member_set) - {0}:
                return False, (A, K)
    return True, None


# --- central automorphisms ---------------------------------------------------


@dataclass(frozen=True)
class CentralAutomorphism:
    phi: ab.Homomorphism
    sigma: tuple


def central_automorphisms(G, guard=AUTC_GUARD, conn=None, check=True):
    """All ``g -> g * phi(gG')`` for ``phi in Hom(G/G', Z(G))`` that are bijective."""
    conn = conn or lambda_map(G)
    A, B = conn.A, conn.B
    count = ab.hom_count(B, A)
    if count > guard:
        raise GuardExceeded("|Hom(G/G', Z(G))|", count, guard)
    Phi = ab.hom_matrices(B, A, guard=guard)
    mods = np.asarray(A.moduli, dtype=np.int64)
    zvec = np.einsum("hab,gb->hga", Phi, conn.b_coords) % mods
    zel = conn.A_pres.elements[A.encode(zvec)]
    sigmas = G.table[np.arange(G.order)[None, :], zel]
    bijective = np.all(np.sort(sigmas, axis=1) == np.arange(G.order), axis=1)
    if check:
        gens = list(G.generators)
        t = G.table
        # sigma(g s) == sigma(g) sigma(s) for all g and generators s
        lhs = sigmas[:, t[:, gens]]
        rhs = t[sigmas[:, :, None], sigmas[:, gens][:, None, :]]
        if not np.array_equal(lhs, rhs):
            raise InternalInconsistency("lifted map is not a homomorphism")
        inv = G.inverses
        if not conn.Z.mask[t[inv[None, :], sigmas]].all():
            raise InternalInconsistency("lifted map is not central")
    out = []
    for h in np.nonzero(bijective)[0]:
        phi = ab.hom_validate(Phi[h].tolist(), B, A)
        out.append(CentralAutomorphism(phi, tuple(int(v) for v in sigmas[h])))
    return out


def autc_is_abelian_oracle(G, autos=None, conn=None):
    """``(abelian, witness)`` by composing permutations pairwise.

    Automorphisms agreeing on a generating set are equal, so each pair is
    compared on ``G.generators`` only.
    """
    autos = autos if autos is not None else central_automorphisms(G, conn=conn)
    if not autos:
        return True, None
    S = np.array([a.sigma for a in autos])
    gens = list(G.generators)
    SG = S[:, gens]
    H = len(S)
    chunk = max(1, (1 << 22) // max(1, H * len(gens)))
    for start in range(0, H, chunk):
        stop = min(H, start + chunk)
        st = S[start:stop][:, SG]                      # sigma_i(tau_j(g))
        ts = S[:, SG[start:stop]].transpose(1, 0, 2)  # tau_j(sigma_i(g))
        bad = np.any(st != ts, axis=2)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            return False, (autos[start + int(i)], autos[int(j)])
    return True, None


def commutes_as_permutations(sigma, tau):
    s, t = np.array(sigma.sigma), np.array(tau.sigma)
    return bool(np.array_equal(s[t], t[s]))


def commutes_via_cmap(sigma, tau, lam):
    """Compare ``phi_s o lam o phi_t`` with ``phi_t o lam o phi_s``."""
    left = ab.hom_compose(sigma.phi, ab.hom_compose(lam, tau.phi))
    right = ab.hom_compose(tau.phi, ab.hom_compose(lam, sigma.phi))
    return left.matrix == right.matrix


# --- verdict -----------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    kind: str
    reason: str = ""
    classification: cm.CMapVerdict | None = None
    profile: cm.CMapProfile | None = field(default=None, repr=False)
    witness: tuple | None = None

    NOT_PPOWER = "NotPPower"
    NOT_PN = "NotPN"
    ABELIAN = "AutcAbelian"
    NON_ABELIAN = "AutcNonAbelian"

    def as_dict(self):
        out = {"kind": self.kind, "reason": self.reason}
        if self.classification is not None:
            out["classification"] = self.classification.as_dict()
        return out


def verdict(G, seed=None, conn=None, pn_guard=PN_GUARD):
    """Decide whether ``Aut_c(G)`` is abelian via the c-map criterion."""
    if G.prime_power is None:
        return Verdict(Verdict.NOT_PPOWER, f"order {G.order} is not a prime power")
    conn = conn or lambda_map(G, seed=seed)
    pn, witness = is_pn(G, guard=pn_guard, conn=conn)
    if not pn:
        A, K = witness
        return Verdict(Verdict.NOT_PN,
                       f"abelian direct factor of order {A.order} "
                       f"with complement of order {K.order}",
                       witness=(A.members, K.members))
    A, B, lam = conn
    prof = cm.profile(A, B, lam)
    cls = cm.classify(A, B, lam, prof)
    if cls.kind == cm.CMapVerdict.TRIVIAL:
        return Verdict(Verdict.ABELIAN,
                       f"lambda(R) lies in (G/G')^(p^{prof.n1})", cls, prof)
    if cls.kind == cm.CMapVerdict.NONTRIVIAL:
        return Verdict(Verdict.ABELIAN,
                       f"lambda(R) = (G/G')^(p^{cls.k}) with c={prof.c} <= k < "
                       f"n1={prof.n1} and R/(Z(G) cap G') cyclic", cls, prof)
    (i, j), (k, l) = cls.witness
    return Verdict(Verdict.NON_ABELIAN,
                   f"e_{i}{j} lam e_{k}{l} != e_{k}{l} lam e_{i}{j}",
                   cls, prof, witness=cls.witness)


def adney_yen_class2_check(G, conn=None):
    """Consistency report for PN groups of nilpotency class exactly 2."""
    cls = nilpotency_class(G)
    if cls != 2:
        raise NotClass2(cls)
    conn = conn or lambda_map(G)
    A, B, lam = conn
    Q, _ = quotient(G, conn.Z)
    exp_derived = exponent(G, conn.D)
    exp_central_quotient = exponent(Q, GroupSubset(Q, tuple(range(Q.order))))
    ker = kernel_in_group(conn)
    prof = cm.profile(A, B, lam)
    verdict_ = cm.classify(A, B, lam, prof)
    pd = cm.pair_data(A, B)
    out = {
        "nilpotency_class": 2,
        "exp_derived": exp_derived,
        "exp_central_quotient": exp_central_quotient,
        "exponents_equal": exp_derived == exp_central_quotient,
        "kernel_is_derived": ker.member_set == conn.D.member_set,
        "classification": verdict_.as_dict(),
    }
    if verdict_.kind == cm.CMapVerdict.NONTRIVIAL:
        out["image_is_p_c_B"] = ab.subgroup_eq(prof.image_R, pd.power(prof.c))
    out["consistent"] = (out["exponents_equal"] and out["kernel_is_derived"]
                         and out.get("image_is_p_c_B", True))
    return out


def central_automorphisms_bruteforce(G, guard=AUTC_GUARD):
    """Reference ``Aut_c(G)`` without any coordinates.

    Tries every assignment ``s -> s*z_s`` (``z_s`` central) on the
    generators, extends it along the Cayley graph and keeps the bijective
    homomorphisms.  Returns the sigma tables.
    """
    Z = center(G).members
    gens = list(G.generators)
    count = len(Z) ** len(gens)
    if count > guard:
        raise GuardExceeded("central generator assignments", count, guard)
    t = G.table
    out = []
    for zs in itertools.product(Z, repeat=len(gens)):
        images = [int(t[s, z]) for s, z in zip(gens, zs)]
        sigma = np.full(G.order, -1, dtype=np.int64)
        sigma[0] = 0
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s, img in zip(gens, images):
                    y = t[x, s]
                    if sigma[y] < 0:
                        sigma[y] = t[sigma[x], img]
                        nxt.append(int(y))
            frontier = nxt
        hom = np.array_equal(sigma[t[:, gens]], t[sigma[:, None], np.array(images)[None, :]])
        if hom and len(np.unique(sigma)) == G.order:
            out.append(tuple(int(v) for v in sigma))
    return out


def bridge_mismatches(G, autos, lam):
    """Pairs where ``commutes_via_cmap`` and permutation commutation disagree.

    Vectorized over all pairs; returns a list of index pairs ``(i, j)``.
    """
    if not autos:
        return []
    A = lam.source
    Phi = np.array([a.phi.array for a in autos])          # (H, n, m): B -> A
    mods = np.asarray(A.moduli, dtype=np.int64)[:, None]
    PL = Phi @ lam.array                                   # phi o lam : A -> A
    S = np.array([a.sigma for a in autos])
    gens = list(G.generators)
    SG = S[:, gens]
    H = len(autos)
    out = []
    chunk = max(1, (1 << 21) // max(1, H * max(A.n * lam.target.n, len(gens))))
    for start in range(0, H, chunk):
        stop = min(H, start + chunk)
        left = np.einsum("sab,tbc->stac", PL[start:stop], Phi) % mods
        right = np.einsum("tab,sbc->stac", PL, Phi[start:stop]) % mods
        via = np.all((left == right).reshape(stop - start, H, -1), axis=2)
        st = S[start:stop][:, SG]
        ts = S[:, SG[start:stop]].transpose(1, 0, 2)
        perm = np.all(st == ts, axis=2)
        for i, j in np.argwhere(via != perm):
            out.append((start + int(i), int(j)))
    return out
