import json
import pytest
from hypothesis import given, strategies as st

from mbfib.sset import (SimplexRef, SimplicialMap, SSetError, boundary, chain_ref, coequalizer,
                        colimit, coproduct, factor, horn, identity_map, is_isomorphic, nerve_of_order,
                        point, product, pushout, SimplicialSet, standard_simplex, subcomplex_quotient,
                        surjection, doubled_indices)


def test_standard_simplex_counts():
    assert standard_simplex(0).counts() == (1,)
    assert standard_simplex(2).counts() == (3, 3, 1)
    assert standard_simplex(3).counts() == (4, 6, 4, 1)


def test_negative_dimension_rejected():
    with pytest.raises(SSetError):
        standard_simplex(-1)


def test_horn_and_boundary():
    assert horn(2, 1).counts() == (3, 2)
    assert horn(3, 0).counts() == (4, 6, 3)
    assert boundary(2).counts() == (3, 3)
    with pytest.raises(SSetError):
        horn(2, 3)


def test_nerve_examples():
    chain = nerve_of_order([0, 1, 2], lambda a, b: a <= b)
    assert is_isomorphic(chain, standard_simplex(2)) is not None
    anti = nerve_of_order(["a", "b"], lambda a, b: a == b)
    assert anti.counts() == (2,)


def _brute_product_counts(X, Y):
    out = []
    for m in range(X.dims + Y.dims + 1):
        n = 0
        for x in X.simplices(m):
            for y in Y.simplices(m):
                if not set(x.degeneracy) & set(y.degeneracy):
                    n += 1
        out.append(n)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def test_product_examples():
    D1, D2 = standard_simplex(1), standard_simplex(2)
    assert product(D1, D1).counts()[2] == 2
    assert product(D1, D2).counts()[3] == 3
    assert is_isomorphic(product(point(), D2), D2) is not None


@pytest.mark.parametrize("p,q", [(0, 3), (1, 1), (1, 2), (2, 2), (1, 3)])
def test_product_counts_match_pair_enumeration(p, q):
    X, Y = standard_simplex(p), standard_simplex(q)
    assert product(X, Y).counts() == _brute_product_counts(X, Y)


def test_product_of_horn_matches_enumeration():
    X, Y = horn(2, 1), boundary(2)
    assert product(X, Y).counts() == _brute_product_counts(X, Y)


def test_product_projections_are_maps():
    P = product(standard_simplex(1), horn(2, 0))
    assert P.pr1.is_valid() and P.pr2.is_valid()
    assert P.check_identities()


def test_pushout_collapsing_boundary_of_edge():
    D1 = standard_simplex(1)
    bd, inc = D1.subcomplex(D1.gens_of(0))
    pt = point()
    to_pt = SimplicialMap(bd, pt, {g: SimplexRef(pt.gens[0][0]) for g in bd.all_gens()})
    res = pushout(inc, to_pt)
    assert res.obj.counts() == (1, 1)
    assert all(leg.is_valid() for leg in res.legs)


def test_two_triangles_glued_along_an_edge():
    D1, D2 = standard_simplex(1), standard_simplex(2)
    e01 = chain_ref(D2, (0, 1))
    f = SimplicialMap(D1, D2, {g: chain_ref(D2, D1.labels[g]) for g in D1.all_gens()})
    assert f.assign[D1.index[(0, 1)]] == e01
    res = pushout(f, f)
    assert res.obj.counts() == (4, 5, 2)


def test_coequalizer_of_equal_maps_is_the_target():
    D2 = standard_simplex(2)
    res = coequalizer(identity_map(D2), identity_map(D2))
    assert is_isomorphic(res.obj, D2) is not None


def test_ill_formed_diagram_rejected():
    D1, D2 = standard_simplex(1), standard_simplex(2)
    with pytest.raises(SSetError):
        colimit([D1, D2], [(0, 1, identity_map(D2))])


def test_coproduct_counts():
    assert coproduct([standard_simplex(1), standard_simplex(2)]).obj.counts() == (5, 4, 1)


def test_subcomplex_quotients():
    D1 = standard_simplex(1)
    Q, proj = subcomplex_quotient(D1, D1.gens_of(0))
    assert Q.counts() == (1, 1)
    D2 = standard_simplex(2)
    edge = [D2.index[(0,)], D2.index[(1,)], D2.index[(0, 1)]]
    Q, proj = subcomplex_quotient(D2, edge)
    assert Q.counts() == (2, 2, 1)
    assert proj.is_valid()


def test_quotient_by_empty_adds_a_point():
    D1 = standard_simplex(1)
    Q, _ = subcomplex_quotient(D1, [])
    assert Q.counts() == (3, 1)


def test_quotient_requires_subcomplex():
    D2 = standard_simplex(2)
    with pytest.raises(SSetError):
        subcomplex_quotient(D2, [D2.index[(0, 1)]])


def test_quotient_projection_collapses_and_surjects():
    D3 = standard_simplex(3)
    A = D3.closure([D3.index[(0, 1, 2)]])
    Q, proj = subcomplex_quotient(D3, A)
    images = {r.gen for g, r in proj.assign.items() if g not in A and not r.degeneracy}
    assert images == set(Q.all_gens()) - {proj.assign[next(iter(A))].gen}
    assert len({proj.assign[g].gen for g in A}) == 1


def test_json_round_trip_is_bit_exact():
    X = product(standard_simplex(1), horn(2, 1))
    s = X.to_json()
    Y = SimplicialSet.from_json(s)
    assert Y.to_json() == s
    assert json.loads(s)["format"] == "dss-v1"


def test_dot_lists_all_edges():
    dot = standard_simplex(2).to_dot()
    assert dot.count("->") == 3


def test_validate_detects_bad_map():
    D1, D2 = standard_simplex(1), standard_simplex(2)
    bad = {g: SimplexRef(D2.index[(0,)]) for g in D1.gens_of(0)}
    bad[D1.index[(0, 1)]] = chain_ref(D2, (1, 2))
    assert not SimplicialMap(D1, D2, bad).is_valid()


# -- formal simplex arithmetic ------------------------------------------------

@given(st.sampled_from([(3, ()), (2, (0,)), (1, (0, 1)), (0, (0, 1, 2))]),
       st.data())
def test_apply_is_functorial(cell, data):
    X = product(standard_simplex(1), standard_simplex(2))
    k, dbl = cell
    gens = X.gens_of(k)
    ref = SimplexRef(gens[data.draw(st.integers(0, len(gens) - 1))], dbl)
    m = X.dim(ref)
    p = data.draw(st.integers(0, 3))
    theta = tuple(sorted(data.draw(st.lists(st.integers(0, m), min_size=p + 1, max_size=p + 1))))
    q = data.draw(st.integers(0, 3))
    phi = tuple(sorted(data.draw(st.lists(st.integers(0, p), min_size=q + 1, max_size=q + 1))))
    composite = tuple(theta[t] for t in phi)
    assert X.apply(X.apply(ref, theta), phi) == X.apply(ref, composite)


@given(st.lists(st.integers(0, 5), min_size=1, max_size=7))
def test_epi_mono_factorisation(values):
    theta = tuple(sorted(values))
    image, epi = factor(theta)
    assert tuple(image[e] for e in epi) == theta
    assert surjection(doubled_indices(epi), len(epi) - 1) == epi


@given(st.integers(0, 3), st.integers(0, 3))
def test_normal_form_is_unique(n, extra):
    D = standard_simplex(n)
    seen = {}
    for m in range(n + extra + 1):
        for ref in D.simplices(m):
            verts = tuple(D.apply(ref, (t,)).gen for t in range(m + 1))
            assert seen.setdefault(verts, ref) == ref


def test_simplicial_identities_on_constructions():
    for X in (standard_simplex(4), horn(4, 2), product(standard_simplex(2), standard_simplex(2)),
              subcomplex_quotient(standard_simplex(3), standard_simplex(3).closure([1]))[0]):
        assert X.check_identities()


def test_isomorphism_search_returns_none_or_dict():
    D1 = standard_simplex(1)
    assert is_isomorphic(D1, horn(2, 1)) is None
    iso = is_isomorphic(D1, standard_simplex(1))
    assert iso is not None and len(iso) == 3


def test_empty_sets_are_isomorphic():
    from mbfib.sset import empty
    assert is_isomorphic(empty(), empty()) is not None


def test_chain_ref_with_repeats():
    D2 = standard_simplex(2)
    r = chain_ref(D2, (0, 0, 2))
    assert r.degeneracy == (0,) and D2.labels[r.gen] == (0, 2)
