import pytest

from mbfib import straightening as st
from mbfib.decorations import MARKED_BISCALED, DecSSet
from mbfib.mapping_simplex import dec_isomorphic
from mbfib.oracles import compare_st
from mbfib.posets import chain_points, o_cat, p_n, pi_value
from mbfib.sset import SimplexRef, SimplicialMap, identity_map, is_isomorphic, nerve_of_order, standard_simplex
from mbfib.suites import run_suite, st_oracle_inputs
from mbfib.tensor import gray_pi

MB = MARKED_BISCALED


def test_k2_vertex_count():
    assert st.k_complex(2).sset.counts()[0] == 8


@pytest.mark.parametrize("n", range(1, 5))
def test_k_sub_is_a_cube(n):
    for j in range(n + 1):
        assert st.k_sub(n, j).sset.counts()[0] == 2 ** n


def test_k_face_example():
    assert st.k_face(2, 1, 2).sset.counts()[0] == 2


def test_bad_indices():
    with pytest.raises(st.StraighteningError):
        st.k_sub(2, 3)
    with pytest.raises(st.StraighteningError):
        st.keyscaling_iso(2, 2)
    with pytest.raises(st.StraighteningError):
        st.k_complex(-1)


@pytest.mark.parametrize("n", range(1, 5))
def test_k_scaling_is_pulled_back_from_pn(n):
    K = st.k_complex(n)
    P = p_n(n)
    thin_p = {P.sset.labels[t] for t in P.thin}
    for t in K.sset.gens_of(2):
        img = tuple(pi_value(C) for C in K.sset.labels[t])
        expect = len(set(img)) < 3 or img in thin_p
        assert (t in K.thin) == expect


@pytest.mark.parametrize("n", range(1, 5))
def test_k_marking_matches_gray_triangles(n):
    """Independent check: marked refinements insert points along thin triangles of the cylinder tensor."""
    G = gray_pi(n)
    P = G.sset

    def pt(ref, side):
        X = P.left if side == 0 else P.right
        return [X.labels[v][0] for v in X.vertices(ref)]

    thin = set()
    for t in G.thin:
        a, b = P.labels[t]
        thin.add(tuple(zip(pt(a, 0), pt(b, 1))))
    K = st.k_complex(n)
    for e in K.sset.gens_of(1):
        C, D = K.sset.labels[e]
        pc, pd = chain_points(C), chain_points(D)
        new = [y for y in pd if y not in pc]
        ok = True
        for x, z in zip(pc, pc[1:]):
            inside = [y for y in new if x < y < z]
            if len(inside) > 1 or (inside and (x, inside[0], z) not in thin):
                ok = False
        assert (e in K.marked) == ok


@pytest.mark.parametrize("n,j", [(2, 1), (3, 1), (3, 2)])
def test_keyscaling_examples(n, j):
    res = st.keyscaling_iso(n, j)
    assert res.ok
    assert len(res.bijection) == 2 ** n
    assert not (res.marked_left_only or res.marked_right_only or res.scaled_left_only or res.scaled_right_only)


@pytest.mark.parametrize("n", range(2, 5))
def test_filtration_ends_at_k(n):
    for i in range(n + 1):
        F = st.filtration(n, i)
        assert len(F) == n + 2
        sizes = [X.sset.counts() for X in F]
        assert sizes[-1] == st.k_complex(n).sset.counts()
        for a, b in zip(F, F[1:]):
            assert set(a.sset.labels.values()) <= set(b.sset.labels.values())


@pytest.mark.parametrize("n", range(1, 5))
def test_r_after_s_is_identity(n):
    r, s = st.r_map(n), st.s_map(n)
    comp = s.map.compose(r.map)
    assert all(comp(SimplexRef(g)) == SimplexRef(g) for g in comp.source.all_gens())
    assert not s.decoration_failures()


def test_point_over_last_vertex():
    pt = standard_simplex(0)
    for n in range(3):
        D = standard_simplex(n)
        p = SimplicialMap(pt, D, {pt.gens[0][0]: SimplexRef(D.index[(n,)])})
        assert st.st_value_over_simplex(DecSSet(pt, MB), p, n).sset.counts() == (1,)


@pytest.mark.parametrize("n", range(1, 4))
def test_point_at_zero_gives_ordinal_nerve(n):
    pt = standard_simplex(0)
    D = standard_simplex(n)
    p = SimplicialMap(pt, D, {pt.gens[0][0]: SimplexRef(D.index[(0,)])})
    for j in range(n + 1):
        S = st.st_value_over_simplex(DecSSet(pt, MB), p, j)
        O = o_cat(n, 0, j)
        N = nerve_of_order(O.elements, O.leq)
        assert is_isomorphic(S.sset, N) is not None


def test_value_over_point():
    assert st.st_value_point(DecSSet(standard_simplex(0), MB)).sset.counts() == (1,)
    X = DecSSet(standard_simplex(1), MB)
    assert compare_st(X, None)["ok"]


def test_lean_and_thin_two_simplex():
    """Both straighten to the same scaled set; the thin one carries extra marked edges."""
    D = standard_simplex(2)
    t = D.gens_of(2)
    lean, thin = DecSSet(D, MB, (), (), t), DecSSet(D, MB, (), t, t)
    for p, j in ((None, 0), (identity_map(D), 2)):
        a, b = st.StContext(lean, p, j).value(), st.StContext(thin, p, j).value()
        assert a.sset.to_dict() == b.sset.to_dict()
        assert a.thin == b.thin
        assert a.marked < b.marked
        assert dec_isomorphic(a, b) is None
        assert compare_st(lean, p, j)["ok"] and compare_st(thin, p, j)["ok"]


@pytest.mark.parametrize("case", st_oracle_inputs()[:12], ids=lambda c: c[0] if isinstance(c, tuple) else None)
def test_values_match_presentation_oracle(case):
    name, X, p = case
    for j in ([0] if p is None else [0, 1]):
        r = compare_st(X, p, j)
        assert r["ok"], r["problems"]


def test_alpha_zero_is_iso():
    a = st.alpha_flat(0)
    assert a.source.sset.counts() == a.target.sset.counts() == (1,)


def test_alpha_one_surjective():
    a = st.alpha_flat(1)
    hit = {r.gen for r in a.map.assign.values() if not r.degeneracy}
    assert hit == set(a.target.sset.all_gens())


@pytest.mark.parametrize("n", range(4))
def test_alpha_is_a_decorated_map(n):
    a = st.alpha_flat(n)
    assert a.map.is_valid() and not a.decoration_failures()


def test_alpha_sharp_variants():
    for a in (st.alpha_sharp1(), st.alpha_sharp2()):
        assert a.map.is_valid() and not a.decoration_failures()


def test_alpha_naturality_coface():
    assert st.alpha_naturality(1, 2, (0, 2))
    assert st.alpha_naturality(2, 1, (0, 1, 1))


def test_st_alpha_suite_small():
    rep = run_suite("st-alpha", cap=2)
    assert rep.passed, rep.failures()[:2]


def test_non_biscaled_input_rejected():
    from mbfib.decorations import MARKED_SCALED
    with pytest.raises(st.StraighteningError):
        st.st_value_point(DecSSet(standard_simplex(1), MARKED_SCALED))
