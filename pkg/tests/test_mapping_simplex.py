import json

import pytest

from mbfib import mapping_simplex as ms
from mbfib.decorations import MARKED_SCALED, DecMap, DecSSet
from mbfib.posets import o_upslash
from mbfib.sset import SimplexRef, SimplicialMap, nerve_vertices, standard_simplex


def test_corepresentable_values():
    F = ms.corepresentable(1, 0)
    assert [V.sset.counts() for V in F.values] == [(1,), (1,)]
    G = ms.corepresentable(2, 0)
    assert G.values[2].sset.counts() == (2, 1)
    H = ms.corepresentable(3, 2)
    assert [V.sset.counts() for V in H.values[:2]] == [(), ()]
    assert H.values[2].sset.counts() == (1,)
    for X in (F, G, H):
        assert X.is_valid()
    with pytest.raises(ms.FunctorError):
        ms.corepresentable(2, 3)


@pytest.mark.parametrize("n", range(4))
def test_corepresentable_at_zero_gives_upper_sets(n):
    M = ms.mapping_simplex(ms.corepresentable(n, 0))
    assert ms.is_upper_set(M)
    assert M.sset.counts() == o_upslash(n, 0)[0].sset.counts()


def test_n_zero_is_the_value():
    V = ms.catalog()["L21#"]
    F = ms.chain_functor([], [V])
    M = ms.mapping_simplex(F)
    assert M.sset.counts() == V.sset.counts()
    assert len(M.dec.marked) == len(V.marked)


def test_chain_functor_fibers_and_gluing():
    cat = ms.catalog()
    D1 = cat["D1"]
    pt = cat["pt"] if "pt" in cat else DecSSet(standard_simplex(0), MARKED_SCALED)
    v = D1.sset.gens_of(0)[1]
    f = DecMap(pt, D1, SimplicialMap(pt.sset, D1.sset, {pt.sset.gens[0][0]: SimplexRef(v)}))
    F = ms.chain_functor([f])
    r = ms.check_functor(F)
    assert r["ok"], r


def test_fiber_iso_on_corepresentables():
    for n in range(3):
        for j in range(n + 1):
            M = ms.mapping_simplex(ms.corepresentable(n, j))
            for k in range(n + 1):
                ok, why = ms.fiber_iso(M, k)
                assert ok, why


def test_xi_upper_is_injective():
    for n in range(1, 4):
        for i in range(n):
            f = ms.xi_upper(n, i)
            assert f.is_valid()
            imgs = [r for r in f.assign.values() if not r.degeneracy]
            nd = [g for g, r in f.assign.items() if not r.degeneracy]
            assert len(set(imgs)) == len(nd)


def test_xi_zero_slice_is_inclusion():
    for F in (ms.corepresentable(2, 0), ms.corpus(4, seed=2)[3]):
        if F.n == 0:
            continue
        P, xi, M, Mbar = ms.xi_map(F)
        zero = P.left.index[(0,)]
        slice0 = {}
        for g, (e, m) in P.labels.items():
            if e == SimplexRef(zero, tuple(range(Mbar.sset.dim_of[m.gen]))) and not m.degeneracy:
                slice0[m.gen] = xi.assign[g]
        assert len(slice0) == len(Mbar.sset.dim_of)
        assert all(not r.degeneracy for r in slice0.values())
        assert len(set(slice0.values())) == len(slice0)
        for g, r in slice0.items():
            assert nerve_vertices(M.base, M.proj(r)) == nerve_vertices(Mbar.base, Mbar.proj(SimplexRef(g)))
    with pytest.raises(ms.FunctorError):
        ms.xi_map(ms.corepresentable(0, 0))


def test_seeded_corpus_is_reproducible():
    a = [F.to_dict() for F in ms.corpus(5, seed=7)]
    b = [F.to_dict() for F in ms.corpus(5, seed=7)]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert all(F.cells() <= 6 and F.n <= 3 for F in ms.corpus(20, seed=3))


@pytest.mark.parametrize("k", range(12))
def test_corpus_fibers_and_pushout(k):
    F = ms.corpus(12, seed=11)[k]
    r = ms.check_functor(F)
    assert r["ok"], r


def test_coproduct_preserved():
    F, G = ms.corepresentable(1, 0), ms.corepresentable(1, 1)
    FG = ms.coproduct_functor(F, G)
    assert FG.is_valid()
    a = ms.mapping_simplex(F).sset.counts()
    b = ms.mapping_simplex(G).sset.counts()
    c = ms.mapping_simplex(FG).sset.counts()
    width = max(len(a), len(b))
    pad = lambda t: tuple(t) + (0,) * (width - len(t))
    assert pad(c) == tuple(x + y for x, y in zip(pad(a), pad(b)))


def test_onfun_round_trip():
    F = ms.corpus(3, seed=5)[2]
    G = ms.OnFunctor.from_json(F.to_json())
    assert G.to_dict() == F.to_dict()
    with pytest.raises(ms.FunctorError):
        ms.OnFunctor.from_dict({"format": "dss-v1"})


def test_invalid_functor_rejected():
    two = ms.catalog()["2pt"]
    u, v = two.sset.gens_of(0)
    swap = {u: v, v: u}
    g = DecMap(two, two, SimplicialMap(two.sset, two.sset, {u: SimplexRef(v), v: SimplexRef(u)}))
    assert ms.chain_functor([g]).is_valid()
    B = ms.on_functor(1, [two, two], lambda i, j, s, x: SimplexRef(swap[x.gen]) if i == j else x)
    assert any("unit" in p for p in B.problems())
    with pytest.raises(ms.FunctorError):
        ms.mapping_simplex(B)
