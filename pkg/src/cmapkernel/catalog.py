"""Builders for small p-groups, recipe strings and file parsers.

Recipe grammar (used by the command line)::

    recipe := name ":" int (":" int)*  |  "dp(" recipe "," recipe ")"
    name   := cyclic | abelian | dihedral | quaternion | semidihedral
            | modular | heisenberg | extraspecial | semidirect

    cyclic:p:e                Z_{p^e}
    abelian:p:e1:e2:...       Z_{p^e1} x Z_{p^e2} x ...
    dihedral:N                dihedral group of order N = 2^n >= 8
    quaternion:N              generalized quaternion group of order N = 2^n >= 8
    semidihedral:N            semidihedral group of order N = 2^n >= 16
    modular:p:n               <a, b | a^(p^(n-1)) = b^p = 1, b a b^-1 = a^(1+p^(n-2))>
    heisenberg:p              upper unitriangular 3x3 matrices over F_p
    extraspecial:p            order p^3, exponent p^2 (p odd)
    semidirect:p:a:b:t        Z_{p^a} x| Z_{p^b}, generator of the right factor acting by x -> x^t
    dp(R1,R2)                 direct product

Elements are numbered by the lexicographic order of their normal-form
exponent tuples, so built tables are identical across runs.
"""

from __future__ import annotations

import io
import itertools
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import abelian as ab
from .errors import GuardExceeded, InvalidRecipe, ParseError
from .pgroup import ORDER_GUARD, validate_group

KINDS = ("cyclic", "abelian", "dihedral", "quaternion", "semidihedral", "modular",
         "heisenberg", "extraspecial", "semidirect", "direct_product")


@dataclass(frozen=True)
class GroupRecipe:
    kind: str
    params: tuple = ()

    def __str__(self):
        if self.kind == "direct_product":
            return f"dp({self.params[0]},{self.params[1]})"
        return ":".join([self.kind, *map(str, self.params)])

    @property
    def order(self):
        k, ps = self.kind, self.params
        if k == "cyclic":
            return ps[0] ** ps[1]
        if k == "abelian":
            return ps[0] ** sum(ps[1:])
        if k in ("dihedral", "quaternion", "semidihedral"):
            return ps[0]
        if k == "modular":
            return ps[0] ** ps[1]
        if k in ("heisenberg", "extraspecial"):
            return ps[0] ** 3
        if k == "semidirect":
            return ps[0] ** (ps[1] + ps[2])
        return ps[0].order * ps[1].order


def _two_power(n):
    e = n.bit_length() - 1
    return e if n > 0 and 1 << e == n else None


def _check(recipe):
    k, ps = recipe.kind, recipe.params
    if k not in KINDS:
        raise InvalidRecipe(f"unknown group family '{k}'")
    if k == "direct_product":
        if len(ps) != 2:
            raise InvalidRecipe("direct_product takes two recipes")
        _check(ps[0])
        _check(ps[1])
    else:
        if not ps or not all(isinstance(v, int) for v in ps):
            raise InvalidRecipe(f"{k} needs integer parameters")
        arity = {"cyclic": 2, "dihedral": 1, "quaternion": 1, "semidihedral": 1,
                 "modular": 2, "heisenberg": 1, "extraspecial": 1, "semidirect": 4}
        if k in arity and len(ps) != arity[k]:
            raise InvalidRecipe(f"{k} takes {arity[k]} parameters, got {len(ps)}")
        if k in ("cyclic", "abelian", "modular", "heisenberg", "extraspecial",
                 "semidirect") and not ab.is_prime(ps[0]):
            raise InvalidRecipe(f"{ps[0]} is not prime")
    if k == "cyclic" and ps[1] < 1:
        raise InvalidRecipe("cyclic needs e >= 1")
    if k == "abelian" and (len(ps) < 2 or min(ps[1:]) < 1):
        raise InvalidRecipe("abelian needs positive exponents")
    if k in ("dihedral", "quaternion") and (_two_power(ps[0]) or 0) < 3:
        raise InvalidRecipe(f"{k} needs order 2^n >= 8")
    if k == "semidihedral" and (_two_power(ps[0]) or 0) < 4:
        raise InvalidRecipe("semidihedral needs order 2^n >= 16")
    if k == "modular" and ps[1] < (4 if ps[0] == 2 else 3):
        raise InvalidRecipe("modular needs n >= 3 (n >= 4 for p = 2)")
    if k == "extraspecial" and ps[0] == 2:
        raise InvalidRecipe("extraspecial of exponent p^2 needs p odd")
    if k == "semidirect":
        p, a, b, t = ps
        if a < 1 or b < 1:
            raise InvalidRecipe("semidirect needs a, b >= 1")
        if pow(t, p**b, p**a) != 1 % p**a or t % p == 0:
            raise InvalidRecipe(f"{t} does not define an action of Z_{p}^{b} on Z_{p}^{a}")
    if recipe.order > ORDER_GUARD:
        raise InvalidRecipe(f"order {recipe.order} exceeds {ORDER_GUARD}")


def _metacyclic(M, N, t, s):
    """``x^i y^j`` with ``x^M = 1``, ``y^N = x^s``, ``y x y^-1 = x^t``.

    Index of ``x^i y^j`` is ``i*N + j``.
    """
    i = np.arange(M)[:, None, None, None]
    j = np.arange(N)[None, :, None, None]
    i2 = np.arange(M)[None, None, :, None]
    j2 = np.arange(N)[None, None, None, :]
    tpow = np.array([pow(t, e, M) for e in range(N)])
    x = i + tpow[j] * i2
    jj = j + j2
    wrap = jj >= N
    x = (x + np.where(wrap, s, 0)) % M
    jj = jj % N
    table = x * N + jj
    return table.reshape(M * N, M * N)


def _heisenberg(p):
    elems = list(itertools.product(range(p), repeat=3))
    index = {e: k for k, e in enumerate(elems)}
    n = len(elems)
    table = np.zeros((n, n), dtype=np.int64)
    for u, (a, b, c) in enumerate(elems):
        for v, (a2, b2, c2) in enumerate(elems):
            table[u, v] = index[((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p)]
    return table


def _abelian(p, exps):
    shape_mods = [p**e for e in exps]
    grids = np.meshgrid(*[np.arange(m) for m in shape_mods], indexing="ij")
    vecs = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.ones(len(exps), dtype=np.int64)
    for k in range(len(exps) - 2, -1, -1):
        weights[k] = weights[k + 1] * shape_mods[k + 1]
    sums = (vecs[:, None, :] + vecs[None, :, :]) % np.array(shape_mods)
    return sums @ weights


def _direct_product(t1, t2):
    n1, n2 = len(t1), len(t2)
    g = np.arange(n1 * n2)
    a, b = g // n2, g % n2
    return t1[a[:, None], a[None, :]] * n2 + t2[b[:, None], b[None, :]]


def _table(recipe):
    k, ps = recipe.kind, recipe.params
    if k == "cyclic":
        return _abelian(ps[0], [ps[1]])
    if k == "abelian":
        return _abelian(ps[0], list(ps[1:]))
    if k == "dihedral":
        return _metacyclic(ps[0] // 2, 2, -1, 0)
    if k == "quaternion":
        M = ps[0] // 2
        return _metacyclic(M, 2, -1, M // 2)
    if k == "semidihedral":
        M = ps[0] // 2
        return _metacyclic(M, 2, M // 2 - 1, 0)
    if k == "modular":
        p, n = ps
        return _metacyclic(p ** (n - 1), p, 1 + p ** (n - 2), 0)
    if k == "heisenberg":
        return _heisenberg(ps[0])
    if k == "extraspecial":
        p = ps[0]
        return _metacyclic(p * p, p, 1 + p, 0)
    if k == "semidirect":
        p, a, b, t = ps
        return _metacyclic(p**a, p**b, t, 0)
    return _direct_product(_table(ps[0]), _table(ps[1]))


def build(recipe):
    """Multiplication table for ``recipe`` as a validated CayleyGroup."""
    if isinstance(recipe, str):
        recipe = parse_recipe(recipe)
    _check(recipe)
    return validate_group(_table(recipe))


_TOKEN = re.compile(r"\s*(dp\(|\)|,|[A-Za-z_]+(?::-?\d+)+)")


def parse_recipe(text):
    """Parse a recipe string such as ``dp(modular:2:4,cyclic:2:1)``."""
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InvalidRecipe(f"cannot parse recipe at '{text[pos:]}'")
        tokens.append(m.group(1))
        pos = m.end()

    def parse(k):
        if k >= len(tokens):
            raise InvalidRecipe("unexpected end of recipe")
        tok = tokens[k]
        if tok == "dp(":
            left, k = parse(k + 1)
            if k >= len(tokens) or tokens[k] != ",":
                raise InvalidRecipe("expected ',' in dp(...)")
            right, k = parse(k + 1)
            if k >= len(tokens) or tokens[k] != ")":
                raise InvalidRecipe("expected ')' closing dp(...)")
            return GroupRecipe("direct_product", (left, right)), k + 1
        if tok in (",", ")"):
            raise InvalidRecipe(f"unexpected '{tok}'")
        name, *nums = tok.split(":")
        if name == "dp":
            raise InvalidRecipe("dp needs parentheses")
        return GroupRecipe(name, tuple(int(v) for v in nums)), k + 1

    recipe, k = parse(0)
    if k != len(tokens):
        raise InvalidRecipe(f"trailing input after recipe: {''.join(tokens[k:])}")
    _check(recipe)
    return recipe


def dp(left, right):
    return GroupRecipe("direct_product", (left, right))


def standard_recipes(max_order=128):
    """The named families up to ``max_order``, in a fixed order."""
    out = []
    for p in (2, 3, 5):
        for e in range(1, 8):
            if p**e <= max_order:
                out.append(GroupRecipe("cyclic", (p, e)))
    for n in range(3, 8):
        N = 2**n
        if N > max_order:
            break
        out.append(GroupRecipe("dihedral", (N,)))
        out.append(GroupRecipe("quaternion", (N,)))
        if n >= 4:
            out.append(GroupRecipe("semidihedral", (N,)))
            out.append(GroupRecipe("modular", (2, n)))
    for p in (3, 5):
        for n in range(3, 6):
            if p**n <= max_order:
                out.append(GroupRecipe("modular", (p, n)))
        if p**3 <= max_order:
            out.append(GroupRecipe("heisenberg", (p,)))
            out.append(GroupRecipe("extraspecial", (p,)))
    return out


# --- file formats ------------------------------------------------------------


def _lines(source):
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="ascii")
    elif isinstance(source, io.TextIOBase) or hasattr(source, "read"):
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("ascii")
    else:
        raise TypeError("expected a path or a text stream")
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _ints(number, parts):
    try:
        return [int(v) for v in parts]
    except ValueError:
        raise ParseError(number, f"expected integers, got {' '.join(parts)!r}") from None


def ingest(source, guard=ORDER_GUARD):
    """Read a Cayley table file: ``order N`` then N rows of 1-based indices."""
    lines = list(_lines(source))
    if not lines:
        raise ParseError(0, "empty file")
    number, first = lines[0]
    head = first.split()
    if len(head) != 2 or head[0] != "order":
        raise ParseError(number, "expected 'order N'")
    n = _ints(number, head[1:])[0]
    if n < 1:
        raise ParseError(number, "order must be positive")
    if n > guard:
        raise GuardExceeded("group order", n, guard)
    rows = lines[1:]
    if len(rows) != n:
        raise ParseError(rows[-1][0] if rows else number,
                         f"expected {n} table rows, found {len(rows)}")
    table = []
    for number, line in rows:
        vals = _ints(number, line.split())
        if len(vals) != n:
            raise ParseError(number, f"expected {n} entries, found {len(vals)}")
        if any(v < 1 or v > n for v in vals):
            raise ParseError(number, f"entries must lie in 1..{n}")
        table.append([v - 1 for v in vals])
    return validate_group(table, guard=guard)


def dump_table(G):
    """Serialize a group in the format read by :func:`ingest`."""
    lines = [f"order {G.order}"]
    lines += [" ".join(str(v + 1) for v in row) for row in G.table.tolist()]
    return "\n".join(lines) + "\n"


def ingest_lambda_problem(source):
    """Read ``p``, ``A``, ``B`` and ``lambda`` statements into ``(A, B, lam)``."""
    p = A_exps = B_exps = None
    rows = []
    want_rows = None
    for number, line in _lines(source):
        parts = line.split()
        if want_rows is not None and len(rows) < want_rows:
            rows.append((number, _ints(number, parts)))
            continue
        key, args = parts[0], parts[1:]
        if key == "p":
            if len(args) != 1:
                raise ParseError(number, "expected 'p <prime>'")
            p = _ints(number, args)[0]
            if not ab.is_prime(p):
                raise ParseError(number, f"{p} is not prime")
        elif key in ("A", "B"):
            vals = _ints(number, args)
            if not vals or min(vals) < 1:
                raise ParseError(number, f"{key} needs positive exponents")
            if vals != sorted(vals, reverse=True):
                raise ParseError(number, f"{key} exponents must be non-increasing")
            if key == "A":
                A_exps = vals
            else:
                B_exps = vals
        elif key == "lambda":
            if args:
                raise ParseError(number, "'lambda' takes no arguments")
            if B_exps is None or A_exps is None:
                raise ParseError(number, "'lambda' must follow the A and B lines")
            want_rows = len(B_exps)
        else:
            raise ParseError(number, f"unknown statement '{key}'")
    if p is None or A_exps is None or B_exps is None or want_rows is None:
        raise ParseError(0, "missing one of p, A, B, lambda")
    if len(rows) != want_rows:
        raise ParseError(0, f"expected {want_rows} lambda rows, found {len(rows)}")
    for number, vals in rows:
        if len(vals) != len(A_exps):
            raise ParseError(number, f"expected {len(A_exps)} entries per row")
        if min(vals) < 0:
            raise ParseError(number, "lambda entries must be non-negative")
    A = ab.AbelianShape(p, tuple(A_exps))
    B = ab.AbelianShape(p, tuple(B_exps))
    lam = ab.hom_validate([vals for _, vals in rows], A, B)
    return A, B, lam


def dump_lambda_problem(A, B, lam):
    lines = [f"p {A.p}", "A " + " ".join(map(str, A.alphas)),
             "B " + " ".join(map(str, B.alphas)), "lambda"]
    lines += [" ".join(map(str, row)) for row in lam.matrix]
    return "\n".join(lines) + "\n"


def semidirect_recipes(max_order=128):
    """Every valid ``semidirect:p:a:b:t`` with ``t != 1`` reduced mod ``p^a``."""
    out = []
    for p in (2, 3):
        for a in range(1, 8):
            for b in range(1, 8):
                if p ** (a + b) > max_order:
                    continue
                m = p**a
                for t in range(2, m):
                    if t % p and pow(t, p**b, m) == 1:
                        out.append(GroupRecipe("semidirect", (p, a, b, t)))
    return out


def group_corpus(max_order=128):
    """Catalog recipes of order ``<= max_order`` used by the group sweeps.

    Named families, all split metacyclic groups and direct products of
    pairs of small non-abelian groups, in a fixed order.
    """
    named = standard_recipes(max_order) + semidirect_recipes(max_order)
    small = [r for r in standard_recipes(32) if r.kind not in ("cyclic",)]
    products = []
    for x, y in itertools.combinations_with_replacement(small, 2):
        if x.order * y.order <= max_order:
            products.append(dp(x, y))
    for x in small:
        for e in (1, 2):
            c = GroupRecipe("cyclic", (2 if x.order % 2 == 0 else 3, e))
            if x.order * c.order <= max_order:
                products.append(dp(x, c))
    return [r for r in named + products if r.order <= max_order]
