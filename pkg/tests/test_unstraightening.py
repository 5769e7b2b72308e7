import pytest

from mbfib import mapping_simplex as ms
from mbfib.unstraightening import UnstraighteningError, un_value

CAT = ms.catalog()


@pytest.mark.parametrize("name", ["pt", "D1", "D1#", "2pt", "L21", "L21#"])
def test_vertices_over_point(name):
    V = CAT[name]
    U = un_value(ms.chain_functor([], [V]), 2)
    assert U.sset.counts()[0] == V.sset.counts()[0]


@pytest.mark.parametrize("name", ["pt", "D1", "2pt"])
def test_unmarked_values_come_back(name):
    V = CAT[name]
    U = un_value(ms.chain_functor([], [V]), 2)
    assert U.sset.counts() == V.sset.counts()


def test_corepresentable_fiber():
    U = un_value(ms.corepresentable(1, 0), 2)
    assert U.fiber(1).sset.counts() == (1,)
    assert U.fiber(0).sset.counts() == (1,)
    assert U.proj.is_valid()


@pytest.mark.parametrize("k", range(4))
def test_restriction_preserves_lower_fibers(k):
    F = [G for G in ms.corpus(10, seed=4) if G.n >= 1][k]
    U, Ur = un_value(F, 2), un_value(F.restrict(), 2)
    for j in range(F.n):
        assert ms.dec_isomorphic(U.fiber(j), Ur.fiber(j)) is not None


def test_thin_only_over_degenerate_base():
    for F in (ms.corepresentable(2, 0), ms.corepresentable(2, 1)):
        U = un_value(F, 2)
        for t in U.dec.thin:
            assert len(set(U.sigma(t))) < 3
        assert U.dec.thin <= U.dec.lean


def test_families_are_simplicial_maps():
    U = un_value(ms.corepresentable(2, 0), 2)
    for g in U.sset.all_gens():
        assert all(phi.is_valid() for phi in U.family(g))


def test_cap_bounds():
    F = ms.corepresentable(1, 0)
    with pytest.raises(UnstraighteningError):
        un_value(F, 4)
    with pytest.raises(UnstraighteningError):
        un_value(F, -1)
    assert un_value(F, 0).sset.counts() == (2,)
