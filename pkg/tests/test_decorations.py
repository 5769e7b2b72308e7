import pytest
from hypothesis import given, strategies as st

from mbfib.decorations import (MARKED_BISCALED, MARKED_SCALED, SCALED, DecMap, DecorationError, DecSSet,
                               dec_identity, dec_map, dec_product, fiber, flat, flavor_L, flavor_R,
                               flavor_R_marked, make_dec, sharp, underlying_bicat)
from mbfib.posets import p_n
from mbfib.sset import SimplexRef, SimplicialMap, chain_ref, horn, identity_map, standard_simplex


def test_make_dec_examples():
    D2 = standard_simplex(2)
    X = make_dec(D2, SCALED, (), D2.gens_of(2))
    assert X.thin == frozenset(D2.gens_of(2))
    D1 = standard_simplex(1)
    Y = make_dec(D1, MARKED_SCALED, D1.gens_of(1))
    assert Y.marked == frozenset(D1.gens_of(1))
    with pytest.raises(DecorationError):
        make_dec(D2, MARKED_BISCALED, (), D2.gens_of(2), ())


def test_make_dec_rejects_bad_ids():
    D2 = standard_simplex(2)
    with pytest.raises(DecorationError):
        make_dec(D2, MARKED_SCALED, D2.gens_of(2))
    with pytest.raises(DecorationError):
        make_dec(D2, MARKED_SCALED, [999])
    with pytest.raises(DecorationError):
        make_dec(D2, SCALED, D2.gens_of(1))


def test_degenerate_cells_are_stripped_and_decorated():
    D1 = standard_simplex(1)
    v = D1.gens_of(0)[0]
    X = make_dec(D1, MARKED_SCALED, [SimplexRef(v, (0,))])
    assert not X.marked
    assert X.is_marked(SimplexRef(v, (0,)))
    assert X.is_thin(SimplexRef(v, (0, 1)))
    assert X.is_lean(SimplexRef(D1.gens_of(1)[0], (1,)))


def test_flavor_L_examples():
    D2 = standard_simplex(2)
    L = flavor_L(DecSSet(D2, SCALED, (), D2.gens_of(2)))
    assert L.flavor == MARKED_BISCALED
    assert not L.thin and L.lean == frozenset(D2.gens_of(2)) and not L.marked
    L = flavor_L(DecSSet(D2, SCALED))
    assert not L.thin and not L.lean
    P = p_n(2)
    assert flavor_L(P).lean == P.thin
    with pytest.raises(DecorationError):
        flavor_L(flat(D2))


def test_flavor_R_marked_examples():
    D2 = standard_simplex(2)
    S = DecSSet(D2, SCALED, (), D2.gens_of(2))
    X = flavor_R_marked(DecSSet(D2, MARKED_SCALED), identity_map(D2), S)
    assert X.thin == X.lean == frozenset(D2.gens_of(2))
    S_flat = DecSSet(D2, SCALED)
    X = flavor_R_marked(DecSSet(D2, MARKED_SCALED), identity_map(D2), S_flat)
    assert not X.thin and X.lean == frozenset(D2.gens_of(2))
    H = horn(2, 1)
    p = SimplicialMap(H, D2, {g: SimplexRef(g) for g in H.all_gens()})
    X = flavor_R_marked(DecSSet(H, MARKED_SCALED), p, S)
    assert not X.thin and not X.lean


def test_underlying_bicat_examples():
    D2 = standard_simplex(2)
    S = DecSSet(D2, SCALED, (), D2.gens_of(2))
    X = sharp(D2)
    assert underlying_bicat(X, identity_map(D2), S).thin == frozenset(D2.gens_of(2))
    assert not underlying_bicat(X, identity_map(D2), DecSSet(D2, SCALED)).thin


def test_underlying_bicat_fibers_thin_equals_lean():
    # a lean-but-not-thin triangle over a degenerate base triangle
    D2, D1 = standard_simplex(2), standard_simplex(1)
    p = SimplicialMap(D2, D1, {g: chain_ref(D1, [min(v, 1) for v in D2.labels[g]]) for g in D2.all_gens()})
    X = DecSSet(D2, MARKED_BISCALED, (), (), D2.gens_of(2))
    B = underlying_bicat(X, p, DecSSet(D1, SCALED))
    assert B.thin == X.lean


def test_decmap_checks_decorations():
    D1 = standard_simplex(1)
    with pytest.raises(DecorationError):
        DecMap(sharp(D1), flat(D1), identity_map(D1))
    assert dec_identity(sharp(D1)).decoration_failures() == []
    f = DecMap(flat(D1), sharp(D1), identity_map(D1))
    assert f.compose(dec_identity(sharp(D1))).decoration_failures() == []


def test_decmap_flavor_mismatch():
    D1 = standard_simplex(1)
    with pytest.raises(DecorationError):
        DecMap(flat(D1), flat(D1, MARKED_SCALED), identity_map(D1))


def test_product_decorations_are_pointwise():
    D1 = standard_simplex(1)
    P = dec_product(sharp(D1), flat(D1))
    # marked edges are (marked, degenerate) pairs: e x {0} and e x {1}
    pairs = [P.sset.labels[e] for e in P.marked]
    assert len(pairs) == 2
    assert all(not x.degeneracy and y.degeneracy for x, y in pairs)


def test_fiber_of_projection():
    D1 = standard_simplex(1)
    P = dec_product(sharp(D1), sharp(D1))
    F, inc = fiber(P, P.sset.pr2, D1.index[(0,)])
    assert F.sset.counts() == (2, 1)
    assert len(F.marked) == 1


def test_json_round_trip():
    D2 = standard_simplex(2)
    X = make_dec(D2, MARKED_BISCALED, D2.gens_of(1)[:1], (), D2.gens_of(2))
    Y = DecSSet.from_json(X.to_json())
    assert Y.same_decorations(X) and Y.to_json() == X.to_json()


@given(st.sets(st.integers(0, 2)), st.sets(st.integers(0, 1)), st.sets(st.integers(0, 1)))
def test_composition_preserves_decorations(marked, thin, extra_lean):
    # a random biscaled Delta^1 x Delta^1 and its identity composed with the sharp version
    from mbfib.sset import product
    P = product(standard_simplex(1), standard_simplex(1))
    E, T = P.gens_of(1), P.gens_of(2)
    X = DecSSet(P, MARKED_BISCALED, [E[i] for i in marked], [T[i] for i in thin],
                [T[i] for i in thin | extra_lean])
    f = dec_map(X, X, {g: SimplexRef(g) for g in P.all_gens()})
    g = dec_map(X, sharp(P), {g: SimplexRef(g) for g in P.all_gens()})
    assert f.compose(g).decoration_failures() == []
    assert flavor_R(X).thin == X.lean
