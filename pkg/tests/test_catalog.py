import io

import numpy as np
import pytest

from cmapkernel import catalog as cat
from cmapkernel import cmap as cm
from cmapkernel import pgroup as pg
from cmapkernel.errors import GuardExceeded, InvalidRecipe, NotAGroup, ParseError

Z4_FILE = """# cyclic group of order 4
order 4
1 2 3 4
2 3 4 1
3 4 1 2
4 1 2 3
"""


def test_build_cyclic():
    G = cat.build("cyclic:2:3")
    assert G.order == 8
    assert sorted(G.element_orders.tolist()) == [1, 2, 4, 4, 8, 8, 8, 8]


def test_build_m16(m16):
    assert m16.order == 16 and not m16.is_abelian
    assert pg.center(m16).order == 4
    assert pg.derived_subgroup(m16).order == 2
    # b a b^-1 = a^5 with a = index 2 (x^1 y^0), b = index 1 (x^0 y^1)
    a, b = 2, 1
    t = m16.table
    assert m16.element_orders[a] == 8 and m16.element_orders[b] == 2
    assert t[t[b, a], m16.inverses[b]] == m16.power(a, 5)


def test_build_product_order_256():
    G = cat.build("dp(modular:2:4,modular:2:4)")
    assert G.order == 256
    assert pg.center(G).order == 16


def test_builds_are_deterministic():
    one = cat.build("semidihedral:32")
    two = cat.build(cat.parse_recipe("semidihedral:32"))
    assert np.array_equal(one.table, two.table)


@pytest.mark.parametrize("recipe, order", [
    ("dihedral:8", 8), ("quaternion:16", 16), ("semidihedral:16", 16),
    ("modular:3:3", 27), ("heisenberg:3", 27), ("extraspecial:3", 27),
    ("semidirect:2:2:3:3", 32), ("abelian:3:2:1", 27),
    ("dp(dihedral:8,dp(cyclic:2:1,cyclic:3:1))", 48),
])
def test_orders(recipe, order):
    r = cat.parse_recipe(recipe)
    assert r.order == order == cat.build(r).order
    assert cat.parse_recipe(str(r)) == r


def test_extraspecial_exponents():
    assert set(cat.build("heisenberg:3").element_orders.tolist()) == {1, 3}
    assert set(cat.build("extraspecial:3").element_orders.tolist()) == {1, 3, 9}


@pytest.mark.parametrize("text", [
    "dihedral:4", "quaternion:12", "semidirect:2:2:1:2", "cyclic:4:1", "dp(cyclic:2:1)",
    "modular:2:3", "nosuch:2", "dp(cyclic:2:1,cyclic:2:1", "cyclic:2:1 junk",
    "extraspecial:2", "dp(dihedral:256,cyclic:2:2)",
])
def test_invalid_recipes(text):
    with pytest.raises(InvalidRecipe):
        cat.build(text)


def test_every_corpus_recipe_builds():
    corpus = cat.group_corpus(128)
    assert len(corpus) == len(set(map(str, corpus)))
    for r in corpus:
        assert cat.build(r).order == r.order <= 128


@pytest.mark.parametrize("recipe", ["abelian:2:3:1", "abelian:3:1:1:1", "cyclic:5:2"])
def test_abelian_recipes_decompose_back(recipe):
    G = cat.build(recipe)
    declared = tuple(int(x) for x in recipe.split(":")[2:])
    assert pg.abelian_decompose(G).shape.alphas == declared


# --- files -------------------------------------------------------------------


def test_ingest_z4(tmp_path):
    G = cat.ingest(io.StringIO(Z4_FILE))
    assert G.order == 4 and G.is_abelian
    path = tmp_path / "z4.txt"
    path.write_text(Z4_FILE)
    assert np.array_equal(cat.ingest(path).table, G.table)
    assert cat.dump_table(G).splitlines() == Z4_FILE.splitlines()[1:]


def test_ingest_round_trip(m16):
    again = cat.ingest(io.StringIO(cat.dump_table(m16)))
    assert np.array_equal(again.table, m16.table)


def test_ingest_non_permutation_row():
    bad = Z4_FILE.replace("2 3 4 1", "2 3 3 1")
    with pytest.raises(NotAGroup):
        cat.ingest(io.StringIO(bad))


@pytest.mark.parametrize("text, line", [
    ("", 0), ("size 4\n", 1), ("order 2\n1 2\n", 2), ("order 2\n1 2\n2 x\n", 3),
    ("order 2\n1 2\n2 3\n", 3), ("order 2\n1 2\n2\n", 3),
])
def test_ingest_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        cat.ingest(io.StringIO(text))
    assert info.value.line == line


def test_lambda_problem_file():
    text = "# Z27 -> Z9 + Z3\np 3\nA 3\nB 2 1\nlambda\n1\n0\n"
    A, B, lam = cat.ingest_lambda_problem(io.StringIO(text))
    assert A.alphas == (3,) and B.alphas == (2, 1)
    assert cm.classify(A, B, lam) == cm.CMapVerdict(cm.CMapVerdict.NONTRIVIAL, k=1)
    assert cat.dump_lambda_problem(A, B, lam) == "p 3\nA 3\nB 2 1\nlambda\n1\n0\n"


@pytest.mark.parametrize("text", [
    "p 4\nA 1\nB 1\nlambda\n0\n",
    "p 2\nA 1 2\nB 1\nlambda\n0 0\n",
    "p 2\nA 1\nB 1\nlambda\n0\n0\n",
    "p 2\nA 1\nlambda\n0\n",
    "p 2\nA 1\nB 1\nlambda\n0 1\n",
    "p 2\nA 1\nB 1\nmu\n",
])
def test_lambda_problem_errors(text):
    with pytest.raises(ParseError):
        cat.ingest_lambda_problem(io.StringIO(text))


def test_ingest_order_guard():
    with pytest.raises(GuardExceeded):
        cat.ingest(io.StringIO(Z4_FILE), guard=2)
