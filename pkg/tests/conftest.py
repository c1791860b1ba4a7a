"""Brute-force helpers that share no code with the library."""

import itertools

import pytest

from cmapkernel import catalog as cat


def elements(moduli):
    return list(itertools.product(*[range(m) for m in moduli]))


def add(moduli, x, y):
    return tuple((a + b) % m for a, b, m in zip(x, y, moduli))


def scale(moduli, k, x):
    return tuple((k * a) % m for a, m in zip(x, moduli))


def order(moduli, x):
    """Order by repeated addition."""
    zero = (0,) * len(moduli)
    k, y = 1, x
    while y != zero:
        y = add(moduli, y, x)
        k += 1
    return k


def apply(matrix, target_moduli, x):
    return tuple(sum(mij * xj for mij, xj in zip(row, x)) % m
                 for row, m in zip(matrix, target_moduli))


def homs(src_moduli, tgt_moduli):
    """All homomorphisms as matrices: generator j goes to any element whose
    order divides the order of generator j."""
    choices = [[y for y in elements(tgt_moduli) if order(tgt_moduli, y) <= m
                and m % order(tgt_moduli, y) == 0] for m in src_moduli]
    out = []
    for images in itertools.product(*choices):
        out.append(tuple(tuple(images[j][i] for j in range(len(src_moduli)))
                         for i in range(len(tgt_moduli))))
    return out


def compose(g, f, moduli):
    """Matrix of g o f by applying to the generators."""
    n = len(f[0])
    cols = []
    for j in range(n):
        fj = tuple(row[j] for row in f)
        cols.append(tuple(sum(gik * x for gik, x in zip(row, fj)) for row in g))
    return tuple(tuple(cols[j][i] % moduli[i] for j in range(n)) for i in range(len(g)))


@pytest.fixture(scope="session")
def d8():
    return cat.build("dihedral:8")


@pytest.fixture(scope="session")
def q8():
    return cat.build("quaternion:8")


@pytest.fixture(scope="session")
def m16():
    return cat.build("modular:2:4")


@pytest.fixture(scope="session")
def heis27():
    return cat.build("heisenberg:3")
