import pytest
from hypothesis import given, strategies as st

from mbfib import posets
from mbfib.oracles import brute_pn_leq, brute_u_min
from mbfib.posets import (PosetError, chain_leq, chains, cover_type, fmt, mask, o_cat, o_upslash, p_n, pi_map,
                          pi_value, pn_elements, pn_leq, pn_poset, pn_triangle_thin, u_min)
from mbfib.suites import chain_marked


def m(*xs):
    return mask(xs)


def test_o_cat_examples():
    P = o_cat(2, 0, 2)
    assert sorted(P.elements) == [m(0, 2), m(0, 1, 2)]
    assert P.leq(m(0, 2), m(0, 1, 2)) and not P.leq(m(0, 1, 2), m(0, 2))
    assert o_cat(4, 3, 3).elements == [m(3)]
    for n in range(1, 6):
        assert len(o_cat(n, 0, n)) == 2 ** (n - 1)
    with pytest.raises(PosetError):
        o_cat(3, 2, 1)


def test_u_min_examples():
    assert u_min(m(0, 2), m(2)) == m(0, 2)
    assert u_min(m(0, 1, 4), m(3, 4)) == m(0, 1, 3)
    for S in pn_elements(4):
        assert u_min(S, S) == 1 << posets.mmin(S)
    with pytest.raises(PosetError):
        u_min(m(2), m(0, 2))


def test_p2_elements_and_triangles():
    assert sorted(pn_elements(2)) == sorted([m(2), m(0, 2), m(1, 2), m(0, 1, 2)])
    assert pn_triangle_thin(m(0, 2), m(0, 1, 2), m(1, 2))
    assert not pn_triangle_thin(m(0, 2), m(1, 2), m(2))
    X = p_n(2)
    thin = {X.sset.labels[t] for t in X.thin}
    assert (m(0, 2), m(0, 1, 2), m(1, 2)) in thin
    assert (m(0, 2), m(1, 2), m(2)) not in thin


def test_p2_nerve_edges_match_chain_count():
    P = pn_poset(2)
    strict = [(a, b) for a in P.elements for b in P.elements if a != b and pn_leq(a, b)]
    assert p_n(2).sset.counts()[:2] == (4, len(strict))


@pytest.mark.parametrize("n", range(7))
def test_pn_battery(n):
    P = pn_poset(n)
    assert len(P) == 2 ** n
    assert P.check_axioms()
    E = P.elements
    for a in E:
        for b in E:
            assert pn_leq(a, b) == brute_pn_leq(a, b, n)
    covers = set(P.covers())
    typed = {(a, b) for a in E for b in E if cover_type(a, b)}
    assert covers == typed


@given(st.integers(0, 6).flatmap(lambda n: st.tuples(st.just(n), st.sampled_from(pn_elements(n)),
                                                      st.sampled_from(pn_elements(n)))))
def test_u_min_matches_brute_force(case):
    n, S, T = case
    if pn_leq(S, T):
        assert u_min(S, T) == brute_u_min(S, T, n)
    else:
        assert brute_u_min(S, T, n) is None


def test_o_upslash_examples():
    X, proj = o_upslash(2, 0)
    labels = {X.sset.labels[v][0] for v in X.sset.gens_of(0)}
    assert labels == {m(0), m(0, 1), m(0, 2), m(0, 1, 2)}
    edge = {X.sset.labels[e]: e for e in X.sset.gens_of(1)}
    assert edge[(m(0), m(0, 2))] in X.marked
    assert edge[(m(0), m(0, 1, 2))] not in X.marked
    assert X.lean == frozenset(X.sset.gens_of(2))
    assert proj.is_valid()
    for t in X.sset.gens_of(2):
        assert (t in X.thin) == bool(proj.assign[t].degeneracy)


def test_pi_map_examples():
    assert pi_value((m(0), m(2))) == m(0, 2)
    assert pi_value((m(0, 1), m(1, 2))) == m(1, 2)
    C, D = (m(0), m(2)), (m(0), m(0, 2))
    assert chain_marked(C, D)
    assert pi_value(C) == pi_value(D) == m(0, 2)


@pytest.mark.parametrize("n", range(1, 5))
def test_pi_map_monotone_and_collapses_marked_edges(n):
    for j in range(n + 1):
        for l in range(j, n + 1):
            val, f, src, tgt = pi_map(j, l, n)
            assert f.is_valid()
            Ch = chains(j, l)
            for C in Ch:
                for D in Ch:
                    if chain_leq(C, D):
                        assert pn_leq(val(C), val(D))
                    if chain_marked(C, D):
                        assert val(C) == val(D)


def test_poset_exports():
    P = pn_poset(2)
    d = P.to_dict(fmt)
    assert d["format"] == "poset-v1" and len(d["elements"]) == 4
    assert P.to_dot(fmt).count("->") == len(P.covers())
