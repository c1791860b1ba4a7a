"""Finite abelian p-groups in invariant-factor form.

A group is described by an :class:`AbelianShape` ``Z_{p^a1} + ... + Z_{p^an}``
with ``a1 >= ... >= an >= 1``.  Elements are coefficient vectors over the
fixed cyclic generators, homomorphisms are integer matrices whose column
``j`` holds the coordinates of the image of generator ``j``.

Subgroups are materialized as sets of integer codes.  The code of an element
is its mixed-radix index, so iterating codes in increasing order visits the
coefficient tuples in lexicographic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import prod

import numpy as np

from .errors import (
    DivisibilityViolation,
    GuardExceeded,
    NotASubgroup,
    ShapeError,
)

MAX_ORDER = 1 << 62
ELEMENT_GUARD = 1 << 20
DEFAULT_HOM_GUARD = 1 << 20


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def valuation(x, p, cap):
    """p-adic valuation of ``x`` capped at ``cap`` (so ``valuation(0) == cap``)."""
    x = int(x)
    v = 0
    while v < cap and x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class AbelianShape:
    """The group ``Z_{p^alphas[0]} + ... + Z_{p^alphas[-1]}``.

    Exponents may be given in any order; they are sorted non-increasingly and
    ``perm[k]`` records the input position of sorted factor ``k``.
    """

    p: int
    alphas: tuple
    perm: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        p = int(self.p)
        if not is_prime(p):
            raise ShapeError(f"{self.p} is not prime")
        alphas = tuple(int(a) for a in self.alphas)
        if not alphas:
            raise ShapeError("a shape needs at least one cyclic factor")
        if any(a < 1 for a in alphas):
            raise ShapeError(f"exponents must be positive, got {alphas}")
        if p ** sum(alphas) > MAX_ORDER:
            raise ShapeError(f"order {p}^{sum(alphas)} exceeds 2^62")
        order = sorted(range(len(alphas)), key=lambda i: -alphas[i])
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "alphas", tuple(alphas[i] for i in order))
        object.__setattr__(self, "perm", tuple(order))

    def __str__(self):
        return " + ".join(f"Z_{self.p}^{a}" for a in self.alphas)

    @property
    def n(self):
        return len(self.alphas)

    @property
    def top(self):
        """Exponent of the group as a power of p (``alpha_1``)."""
        return self.alphas[0]

    @cached_property
    def moduli(self):
        return tuple(self.p**a for a in self.alphas)

    @cached_property
    def order(self):
        return prod(self.moduli)

    @cached_property
    def weights(self):
        w = [1] * self.n
        for i in range(self.n - 2, -1, -1):
            w[i] = w[i + 1] * self.moduli[i + 1]
        return tuple(w)

    @cached_property
    def elements(self):
        """All elements as an ``(order, n)`` array, row index == element code."""
        if self.order > ELEMENT_GUARD:
            raise GuardExceeded("element enumeration", self.order, ELEMENT_GUARD)
        grids = np.meshgrid(*[np.arange(m, dtype=np.int64) for m in self.moduli],
                            indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    @cached_property
    def element_orders(self):
        """Order exponent (log_p of the order) of every element, by code."""
        return order_exponents(self, self.elements)

    def encode(self, vecs):
        vecs = np.asarray(vecs, dtype=np.int64)
        return vecs @ np.asarray(self.weights, dtype=np.int64)

    def decode(self, code):
        out = []
        for w, m in zip(self.weights, self.moduli):
            out.append((int(code) // w) % m)
        return tuple(out)

    def element(self, coeffs):
        return GroupElement(self, tuple(coeffs))

    def zero(self):
        return GroupElement(self, (0,) * self.n)

    def generator(self, i):
        """The i-th cyclic generator (0-based)."""
        coeffs = [0] * self.n
        coeffs[i] = 1
        return GroupElement(self, tuple(coeffs))


def order_exponents(shape, vecs):
    vecs = np.asarray(vecs, dtype=np.int64).reshape(-1, shape.n)
    mods = np.asarray(shape.moduli, dtype=np.int64)
    out = np.full(len(vecs), shape.top, dtype=np.int64)
    for t in range(shape.top - 1, -1, -1):
        killed = np.all((vecs * shape.p**t) % mods == 0, axis=1)
        out[killed] = t
    return out


@dataclass(frozen=True)
class GroupElement:
    shape: AbelianShape
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.shape.n:
            raise ShapeError(
                f"expected {self.shape.n} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(
            int(c) % m for c, m in zip(self.coeffs, self.shape.moduli)))

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return GroupElement(self.shape, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return add(self, -other)

    def __rmul__(self, k):
        return GroupElement(self.shape, tuple(k * c for c in self.coeffs))

    def is_zero(self):
        return not any(self.coeffs)

    @property
    def code(self):
        return sum(c * w for c, w in zip(self.coeffs, self.shape.weights))


def add(x, y):
    if x.shape != y.shape:
        raise ShapeError(f"cannot add elements of {x.shape} and {y.shape}")
    return GroupElement(x.shape, tuple(a + b for a, b in zip(x.coeffs, y.coeffs)))


def order_of(x):
    """Least power ``p^t`` with ``p^t * x == 0``."""
    p = x.shape.p
    t = 0
    for c, a in zip(x.coeffs, x.shape.alphas):
        t = max(t, a - valuation(c, p, a))
    return p**t


@dataclass(frozen=True)
class Homomorphism:
    """A homomorphism ``source -> target`` given by an ``m x n`` matrix.

    ``matrix[i][j]`` is coordinate ``i`` of the image of source generator
    ``j``.  Entries are reduced modulo the target moduli and must satisfy
    ``p^max(0, beta_i - alpha_j) | matrix[i][j]``.
    """

    source: AbelianShape
    target: AbelianShape
    matrix: tuple

    def __post_init__(self):
        src, tgt = self.source, self.target
        if src.p != tgt.p:
            raise ShapeError("source and target must share the prime")
        rows = [list(r) for r in self.matrix]
        if len(rows) != tgt.n or any(len(r) != src.n for r in rows):
            raise ShapeError(f"matrix must be {tgt.n}x{src.n}")
        p = src.p
        reduced = []
        for i, row in enumerate(rows):
            out = []
            for j, v in enumerate(row):
                v = int(v) % tgt.moduli[i]
                need = p ** max(0, tgt.alphas[i] - src.alphas[j])
                if v % need:
                    raise DivisibilityViolation(i, j, need, v)
                out.append(v)
            reduced.append(tuple(out))
        object.__setattr__(self, "matrix", tuple(reduced))

    def __call__(self, x):
        return hom_apply(self, x)

    @cached_property
    def array(self):
        return np.array(self.matrix, dtype=np.int64).reshape(self.target.n,
                                                             self.source.n)

    def is_zero(self):
        return not any(any(r) for r in self.matrix)

    def row(self, i):
        """The component map into the i-th cyclic factor of the target."""
        return self.matrix[i]

    def apply_many(self, vecs):
        vecs = np.asarray(vecs, dtype=np.int64).reshape(-1, self.source.n)
        mods = np.asarray(self.target.moduli, dtype=np.int64)
        return (vecs @ self.array.T) % mods


def hom_validate(matrix, source, target):
    return Homomorphism(source, target, tuple(tuple(r) for r in matrix))


def zero_hom(source, target):
    return Homomorphism(source, target, ((0,) * source.n,) * target.n)


def identity_hom(shape):
    return Homomorphism(shape, shape, tuple(
        tuple(int(i == j) for j in range(shape.n)) for i in range(shape.n)))


def hom_apply(h, x):
    if x.shape != h.source:
        raise ShapeError(f"element of {x.shape} given to map from {h.source}")
    coeffs = [sum(mij * xj for mij, xj in zip(row, x.coeffs)) for row in h.matrix]
    return GroupElement(h.target, tuple(coeffs))


def hom_compose(g, f):
    """``g o f``: apply ``f`` first."""
    if f.target != g.source:
        raise ShapeError(f"cannot compose: {f.target} != {g.source}")
    G, F = g.matrix, f.matrix
    inner = f.target.n
    out = [[sum(G[i][k] * F[k][j] for k in range(inner))
            for j in range(f.source.n)] for i in range(g.target.n)]
    return Homomorphism(f.source, g.target, tuple(tuple(r) for r in out))


def hom_add(f, g):
    if (f.source, f.target) != (g.source, g.target):
        raise ShapeError("cannot add maps between different groups")
    return Homomorphism(f.source, f.target, tuple(
        tuple(a + b for a, b in zip(r, s)) for r, s in zip(f.matrix, g.matrix)))


def hom_basis(B, A):
    """The maps ``e_ij : B -> A`` with ``b_j -> p^max(0, alpha_i - beta_j) a_i``.

    Returned in lexicographic ``(i, j)`` order, 0-based.
    """
    p = A.p
    out = []
    for i in range(A.n):
        for j in range(B.n):
            rows = [[0] * B.n for _ in range(A.n)]
            rows[i][j] = p ** max(0, A.alphas[i] - B.alphas[j])
            out.append(Homomorphism(B, A, tuple(tuple(r) for r in rows)))
    return out


def basis_labels(B, A):
    """1-based ``(i, j)`` labels matching :func:`hom_basis` order."""
    return [(i + 1, j + 1) for i in range(A.n) for j in range(B.n)]


def hom_count(A, B):
    """``|Hom(A, B)| = prod p^min(alpha_j, beta_i)``."""
    return prod(A.p ** min(a, b) for a in A.alphas for b in B.alphas)


def _entry_values(A, B):
    p = A.p
    return [range(0, p**b, p ** max(0, b - a)) for b in B.alphas for a in A.alphas]


def hom_enumerate(A, B, guard=DEFAULT_HOM_GUARD):
    """Yield every homomorphism ``A -> B`` exactly once.

    Entries are enumerated row-major with the last entry varying fastest.
    """
    count = hom_count(A, B)
    if count > guard:
        raise GuardExceeded(f"|Hom({A}, {B})|", count, guard)
    for flat in itertools.product(*_entry_values(A, B)):
        rows = tuple(tuple(flat[i * A.n:(i + 1) * A.n]) for i in range(B.n))
        yield Homomorphism(A, B, rows)


def hom_matrices(A, B, guard=DEFAULT_HOM_GUARD):
    """All of ``Hom(A, B)`` as an ``(count, m, n)`` array, same order as
    :func:`hom_enumerate`."""
    count = hom_count(A, B)
    if count > guard:
        raise GuardExceeded(f"|Hom({A}, {B})|", count, guard)
    grids = np.meshgrid(*[np.asarray(v, dtype=np.int64) for v in _entry_values(A, B)],
                        indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=1)
    return flat.reshape(count, B.n, A.n)


# --- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    ambient: AbelianShape
    codes: frozenset

    @property
    def order(self):
        return len(self.codes)

    @cached_property
    def sorted_codes(self):
        return np.array(sorted(self.codes), dtype=np.int64)

    @cached_property
    def array(self):
        """Members as an ``(order, n)`` coefficient array, in code order."""
        return self.ambient.elements[self.sorted_codes]

    def elements(self):
        return [GroupElement(self.ambient, tuple(int(c) for c in row))
                for row in self.array]

    def __contains__(self, x):
        return x.code in self.codes

    def __le__(self, other):
        return subgroup_le(self, other)

    def is_trivial(self):
        return self.codes == frozenset((0,))

    def check_closed(self):
        """Raise :class:`NotASubgroup` unless closed under + and negation."""
        if 0 not in self.codes:
            raise NotASubgroup("missing identity")
        arr = self.array
        mods = np.asarray(self.ambient.moduli, dtype=np.int64)
        sums = (arr[:, None, :] + arr[None, :, :]) % mods
        if not set(self.ambient.encode(sums.reshape(-1, self.ambient.n)).tolist()) <= self.codes:
            raise NotASubgroup("not closed under addition")
        if self.ambient.order % self.order:
            raise NotASubgroup("order does not divide the ambient order")
        return self


def subgroup_from_vectors(shape, vecs):
    vecs = np.asarray(vecs, dtype=np.int64).reshape(-1, shape.n)
    mods = np.asarray(shape.moduli, dtype=np.int64)
    return Subgroup(shape, frozenset(shape.encode(vecs % mods).tolist()))


def whole_group(shape):
    return Subgroup(shape, frozenset(range(shape.order)))


def trivial_subgroup(shape):
    return Subgroup(shape, frozenset((0,)))


def power_subgroup(B, k):
    """``p^k B``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    mods = np.asarray(B.moduli, dtype=np.int64)
    scale = B.p ** min(k, B.top)
    return subgroup_from_vectors(B, (B.elements * scale) % mods)


def torsion_subgroup(A, k):
    """``A[p^k] = {x : p^k x = 0}``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    keep = np.nonzero(A.element_orders <= k)[0]
    return Subgroup(A, frozenset(keep.tolist()))


def kernel(h):
    images = h.target.encode(h.apply_many(h.source.elements))
    return Subgroup(h.source, frozenset(np.nonzero(images == 0)[0].tolist()))


def image_of(h, S=None):
    """``h(S)``; the full image when ``S`` is omitted."""
    vecs = h.source.elements if S is None else S.array
    if S is not None and S.ambient != h.source:
        raise ShapeError("subgroup does not live in the source of the map")
    return Subgroup(h.target, frozenset(h.target.encode(h.apply_many(vecs)).tolist()))


def exponent_power(S):
    """``t`` with ``exp(S) = p^t``."""
    return int(S.ambient.element_orders[S.sorted_codes].max())


def exponent_of(S):
    return S.ambient.p ** exponent_power(S)


def subgroup_eq(S, T):
    return S.ambient == T.ambient and S.codes == T.codes


def subgroup_le(S, T):
    return S.ambient == T.ambient and S.codes <= T.codes


def subgroup_intersection(S, T):
    if S.ambient != T.ambient:
        raise ShapeError("subgroups of different groups")
    return Subgroup(S.ambient, S.codes & T.codes)


def subgroup_sum(S, T):
    if S.ambient != T.ambient:
        raise ShapeError("subgroups of different groups")
    a, b = S.array, T.array
    mods = np.asarray(S.ambient.moduli, dtype=np.int64)
    sums = (a[:, None, :] + b[None, :, :]) % mods
    return subgroup_from_vectors(S.ambient, sums.reshape(-1, S.ambient.n))


def span(shape, generators):
    """Subgroup generated by coefficient vectors ``generators``."""
    current = trivial_subgroup(shape)
    for g in generators:
        g = np.asarray(g, dtype=np.int64).reshape(1, shape.n)
        k = int(order_exponents(shape, g)[0])
        multiples = np.arange(shape.p**k, dtype=np.int64)[:, None] * g
        current = subgroup_sum(current, subgroup_from_vectors(shape, multiples))
    return current


def coset_order_power(x, K):
    """Least ``t`` with ``p^t x`` in ``K`` (x a coefficient vector)."""
    shape = K.ambient
    mods = np.asarray(shape.moduli, dtype=np.int64)
    x = np.asarray(x, dtype=np.int64)
    for t in range(shape.top + 1):
        if int(shape.encode((x * shape.p**t) % mods)) in K.codes:
            return t
    raise AssertionError("unreachable: p^top annihilates the group")


def quotient_exponent_power(S, K):
    """``t`` with ``exp(S/K) = p^t``; requires ``K <= S``."""
    if not subgroup_le(K, S):
        raise NotASubgroup("K is not contained in S")
    return max(coset_order_power(x, K) for x in S.array)


def quotient_is_cyclic(S, K):
    """Whether ``S/K`` is cyclic, by scanning for a coset of full order."""
    if not subgroup_le(K, S):
        raise NotASubgroup("K is not contained in S")
    index = S.order // K.order
    p = S.ambient.p
    for x in S.array:
        if p ** coset_order_power(x, K) == index:
            return True
    return False


def decompose_subgroup(S):
    """Split ``S`` into a direct sum of cyclic subgroups.

    Returns ``(shape, generators)`` with generator vectors in the ambient
    group, or ``(None, [])`` for the trivial subgroup.  Greedy: repeatedly
    take an element of largest order meeting the current span trivially.
    """
    shape = S.ambient
    orders = shape.element_orders
    members = sorted(S.codes, key=lambda c: (-int(orders[c]), c))
    current = trivial_subgroup(shape)
    gens, exps = [], []
    while current.order < S.order:
        for c in members:
            if c in current.codes:
                continue
            vec = shape.elements[c]
            cyc = span(shape, [vec])
            if cyc.codes & current.codes == {0}:
                gens.append(tuple(int(v) for v in vec))
                exps.append(int(orders[c]))
                current = subgroup_sum(current, cyc)
                break
        else:
            raise AssertionError("greedy decomposition failed")
    if not gens:
        return None, []
    return AbelianShape(shape.p, tuple(exps)), gens


@lru_cache(maxsize=4096)
def kernel_intersection(B, S, exhaustive_guard=1 << 12):
    """``Intersection of ker f`` over all ``f : B -> S``, with ``S <= A``.

    Enumerates all of ``Hom(B, S)`` when it is small enough, otherwise
    intersects over the canonical basis, which spans ``Hom(B, S)``.
    """
    sub_shape, gens = decompose_subgroup(S)
    if sub_shape is None:
        return whole_group(B)
    if hom_count(B, sub_shape) <= exhaustive_guard:
        maps = hom_enumerate(B, sub_shape, guard=exhaustive_guard)
    else:
        maps = hom_basis(B, sub_shape)
    codes = frozenset(range(B.order))
    for f in maps:
        codes &= kernel(f).codes
    return Subgroup(B, codes)
