import itertools

import numpy as np
import pytest

from cmapkernel import abelian as ab
from cmapkernel import catalog as cat
from cmapkernel import cmap as cm
from cmapkernel import pgroup as pg
from cmapkernel.errors import GuardExceeded, NotAGroup, NotClass2


def cyclic_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


# --- validation --------------------------------------------------------------


def test_validate_trivial_and_cyclic():
    assert pg.validate_group([[0]]).order == 1
    G = pg.validate_group(cyclic_table(4))
    assert G.is_abelian and G.p == 2


def test_non_associative_latin_square():
    # a loop of order 5 with identity 0; Latin but (1*2)*2 != 1*(2*2)
    t = [[0, 1, 2, 3, 4],
         [1, 0, 3, 4, 2],
         [2, 4, 0, 1, 3],
         [3, 2, 4, 0, 1],
         [4, 3, 1, 2, 0]]
    with pytest.raises(NotAGroup) as info:
        pg.validate_group(t)
    assert info.value.axiom == "associativity"


@pytest.mark.parametrize("table, axiom", [
    ([[0, 1], [1, 1]], None),
    ([[1, 0], [0, 1]], "identity"),
    ([[0, 2], [1, 0]], None),
])
def test_validate_rejects(table, axiom):
    with pytest.raises(NotAGroup) as info:
        pg.validate_group(table)
    if axiom:
        assert info.value.axiom == axiom


def test_order_guard():
    with pytest.raises(GuardExceeded):
        pg.validate_group(cyclic_table(16), guard=8)


# --- subgroups ---------------------------------------------------------------


def test_center_derived_abelian():
    G = cat.build("abelian:2:2:1")
    assert pg.center(G).order == 8
    assert pg.derived_subgroup(G).order == 1


@pytest.mark.parametrize("name", ["d8", "heis27"])
def test_center_equals_derived(name, request):
    G = request.getfixturevalue(name)
    Z, D = pg.center(G), pg.derived_subgroup(G)
    assert Z.order == D.order == G.p
    assert Z.member_set == D.member_set
    # direct scan
    t = G.table
    scan = {z for z in range(G.order) if all(t[z, g] == t[g, z] for g in range(G.order))}
    assert scan == Z.member_set
    assert pg.is_normal(G, Z) and pg.is_normal(G, D)


def test_quotients(d8):
    Q, proj = pg.quotient(d8, pg.derived_subgroup(d8))
    assert Q.order == 4 and Q.is_abelian
    assert set(Q.element_orders.tolist()) == {1, 2}
    # projection is a homomorphism
    t = d8.table
    for g, h in itertools.product(range(8), repeat=2):
        assert proj[t[g, h]] == Q.table[proj[g], proj[h]]
    same, _ = pg.quotient(d8, pg.GroupSubset(d8, (0,)))
    assert np.array_equal(same.table, d8.table)
    triv, _ = pg.quotient(d8, pg.GroupSubset(d8, tuple(range(8))))
    assert triv.order == 1


def test_nilpotency_class():
    assert pg.nilpotency_class(cat.build("cyclic:2:3")) == 1
    assert pg.nilpotency_class(cat.build("modular:2:4")) == 2
    assert pg.nilpotency_class(cat.build("dihedral:16")) == 3


# --- decomposition -----------------------------------------------------------


def test_decompose_examples():
    assert pg.abelian_decompose(cat.build("cyclic:2:2")).shape.alphas == (2,)
    assert pg.abelian_decompose(cat.build("abelian:2:1:1")).shape.alphas == (1, 1)
    G = cat.build("semidirect:2:2:2:3")   # Z4 x| Z4, b a b^-1 = a^3
    assert G.order == 16
    Z = pg.center(G)
    assert Z.order == 4
    pres = pg.abelian_decompose(G, Z.members)
    assert pres.shape.alphas == (1, 1)


@pytest.mark.parametrize("recipe", ["abelian:2:3:1", "abelian:3:2:1:1", "abelian:2:2:2:1",
                                    "abelian:5:1:1", "cyclic:3:3"])
@pytest.mark.parametrize("seed", [None, 0, 1, 2])
def test_decompose_round_trip(recipe, seed):
    G = cat.build(recipe)
    declared = tuple(int(x) for x in recipe.split(":")[2:])
    pres = pg.abelian_decompose(G, seed=seed)
    assert pres.shape.alphas == tuple(sorted(declared, reverse=True))
    # coordinate map is an isomorphism
    A = pres.shape
    seen = set()
    for g, h in itertools.product(range(G.order), repeat=2):
        lhs = pres.coordinate_map(int(G.table[g, h]))
        rhs = ab.add(A.element(pres.coordinate_map(g)), A.element(pres.coordinate_map(h))).coeffs
        assert lhs == rhs
    for g in range(G.order):
        seen.add(pres.coordinate_map(g))
        assert pres.element_of(pres.coordinate_map(g)) == g
    assert len(seen) == G.order


# --- PN ----------------------------------------------------------------------


def test_pn_examples(d8):
    assert pg.is_pn(d8)[0]
    G = cat.build("dp(cyclic:2:1,dihedral:8)")
    pn, (A, K) = pg.is_pn(G)
    assert not pn
    assert A.order * K.order == G.order
    assert not (A.member_set & K.member_set) - {0}
    assert pg.is_normal(G, A) and pg.is_normal(G, K)
    assert not pg.is_pn(cat.build("cyclic:3:1"))[0]


def test_pn_guard():
    with pytest.raises(GuardExceeded):
        pg.is_pn(cat.build("dihedral:64"), guard=32)


@pytest.mark.parametrize("recipe", [
    "dihedral:8", "quaternion:8", "dihedral:16", "quaternion:16", "semidihedral:16",
    "modular:2:4", "heisenberg:3", "extraspecial:3", "dp(cyclic:2:1,dihedral:8)",
    "dp(cyclic:2:1,quaternion:8)", "abelian:2:2:1", "semidirect:2:2:2:3",
    "dp(cyclic:2:2,dihedral:8)", "semidirect:2:3:1:5", "cyclic:2:1",
])
def test_pn_matches_bruteforce(recipe):
    G = cat.build(recipe)
    assert pg.is_pn(G)[0] == pg.is_pn_bruteforce(G)[0]


# --- lambda ------------------------------------------------------------------


def test_lambda_d8(d8):
    A, B, lam = pg.lambda_map(d8)
    assert lam.is_zero()
    assert B.alphas == (1, 1)


def test_lambda_m16(m16):
    conn = pg.lambda_map(m16)
    A, B, lam = conn
    assert A.alphas == (2,) and B.alphas == (2, 1)
    assert lam.matrix == ((2,), (0,))
    assert cm.profile(A, B, lam).c == 1


def test_lambda_abelian():
    G = cat.build("abelian:3:2:1")
    A, B, lam = pg.lambda_map(G)
    assert ab.kernel(lam).is_trivial()
    assert ab.image_of(lam).order == G.order


@pytest.mark.parametrize("recipe", ["modular:2:4", "dihedral:16", "heisenberg:3",
                                    "dp(modular:2:4,cyclic:2:1)", "semidirect:2:2:2:3"])
def test_lambda_kernel_is_center_cap_derived(recipe):
    G = cat.build(recipe)
    conn = pg.lambda_map(G)
    expected = pg.intersection(conn.Z, conn.D).member_set
    assert pg.kernel_in_group(conn).member_set == expected


# --- central automorphisms ---------------------------------------------------


def test_autc_counts(d8, m16):
    assert len(pg.central_automorphisms(cat.build("cyclic:2:1"))) == 1
    assert len(pg.central_automorphisms(d8)) == 4
    assert len(pg.central_automorphisms(m16)) == 8


@pytest.mark.parametrize("recipe", ["dihedral:8", "quaternion:8", "modular:2:4",
                                    "heisenberg:3", "dihedral:16", "cyclic:3:2",
                                    "dp(cyclic:2:1,dihedral:8)", "semidirect:2:2:2:3"])
def test_autc_matches_bruteforce(recipe):
    G = cat.build(recipe)
    fast = {a.sigma for a in pg.central_automorphisms(G)}
    slow = set(pg.central_automorphisms_bruteforce(G))
    assert fast == slow
    for sigma in slow:
        s = np.array(sigma)
        z = G.table[G.inverses, s]
        assert pg.center(G).mask[z].all()


def test_oracle_and_bridge(d8, m16):
    for G in (d8, m16):
        conn = pg.lambda_map(G)
        autos = pg.central_automorphisms(G, conn=conn)
        assert pg.autc_is_abelian_oracle(G, autos) == (True, None)
        ident = next(a for a in autos if a.phi.is_zero())
        for a, b in itertools.product(autos, repeat=2):
            assert pg.commutes_via_cmap(a, b, conn.lam) == pg.commutes_as_permutations(a, b)
            assert pg.commutes_via_cmap(ident, b, conn.lam)
        assert pg.bridge_mismatches(G, autos, conn.lam) == []


@pytest.mark.slow
def test_m16_squared_witness():
    G = cat.build("dp(modular:2:4,modular:2:4)")
    conn = pg.lambda_map(G)
    autos = pg.central_automorphisms(G, conn=conn)
    assert len(autos) == ab.hom_count(conn.B, conn.A)
    abelian, (s, t) = pg.autc_is_abelian_oracle(G, autos)
    assert not abelian
    assert not pg.commutes_as_permutations(s, t)
    assert not pg.commutes_via_cmap(s, t, conn.lam)
    v = pg.verdict(G, conn=conn)
    assert v.kind == pg.Verdict.NON_ABELIAN and v.witness is not None


# --- verdict -----------------------------------------------------------------


def test_verdicts(d8, m16, q8, heis27):
    assert pg.verdict(d8).kind == pg.Verdict.ABELIAN
    assert pg.verdict(d8).classification.kind == cm.CMapVerdict.TRIVIAL
    v = pg.verdict(m16)
    assert v.kind == pg.Verdict.ABELIAN
    assert v.classification == cm.CMapVerdict(cm.CMapVerdict.NONTRIVIAL, k=1)
    assert pg.verdict(q8).kind == pg.Verdict.ABELIAN
    assert pg.verdict(heis27).kind == pg.Verdict.ABELIAN
    assert pg.verdict(cat.build("dp(cyclic:2:1,dihedral:8)")).kind == pg.Verdict.NOT_PN
    assert pg.verdict(pg.validate_group(cyclic_table(6))).kind == pg.Verdict.NOT_PPOWER


# --- class 2 -----------------------------------------------------------------


def test_class2_reports(heis27, m16):
    rep = pg.adney_yen_class2_check(heis27)
    assert rep["exp_derived"] == rep["exp_central_quotient"] == 3
    assert rep["consistent"]
    rep = pg.adney_yen_class2_check(m16)
    assert rep["consistent"] and rep["image_is_p_c_B"]
    with pytest.raises(NotClass2) as info:
        pg.adney_yen_class2_check(cat.build("dihedral:16"))
    assert info.value.nilpotency_class == 3


def test_class2_exponent_claim_on_corpus():
    for recipe in cat.group_corpus(64):
        G = cat.build(recipe)
        if G.prime_power is None or pg.nilpotency_class(G) != 2:
            continue
        if not pg.is_pn(G)[0]:
            continue
        rep = pg.adney_yen_class2_check(G)
        assert rep["consistent"], (str(recipe), rep)
