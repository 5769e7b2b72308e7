import pytest

from mbfib import tensor
from mbfib.decorations import MARKED_BISCALED, MARKED_SCALED, DecMap, DecSSet, DecorationError, fiber
from mbfib.lifting import LiftingProblem, NoFiller, solve_lifting, squares, to_terminal
from mbfib.sset import Product, SimplexRef, SimplicialMap, identity_map, nerve_vertices, standard_simplex
from mbfib.suites import gray_oracle, mb_fibration_fixtures, run_suite

MS, MB = MARKED_SCALED, MARKED_BISCALED


def vertex_path(P: Product, t: int) -> tuple:
    a, b = P.labels[t]
    return tuple((P.left.labels[x][0], P.right.labels[y][0])
                 for x, y in zip(P.left.vertices(a), P.right.vertices(b)))


def test_gray_square_flat():
    D = standard_simplex(1)
    G = tensor.gray(DecSSet(D, MS), DecSSet(D, MS))
    assert G.sset.counts() == (4, 5, 2)
    assert [vertex_path(G.sset, t) for t in G.thin] == [((0, 0), (1, 0), (1, 1))]


def test_gray_square_sharp_left():
    D = standard_simplex(1)
    G = tensor.gray(DecSSet(D, MS, D.gens_of(1)), DecSSet(D, MS))
    assert set(G.thin) == set(G.sset.gens_of(2))


@pytest.mark.parametrize("n", range(4))
def test_gray_with_point_is_unit(n):
    D = standard_simplex(n)
    X = DecSSet(D, MS, D.gens_of(1)[:1], D.gens_of(2)[:1])
    G = tensor.gray(X, DecSSet(standard_simplex(0), MS))
    P = G.sset
    assert P.counts() == D.counts()
    assert {P.labels[t][0].gen for t in G.thin} == set(X.thin)


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)])
def test_gray_matches_rule_evaluation(m, n):
    A, B = standard_simplex(m), standard_simplex(n)
    for X in (DecSSet(A, MS), DecSSet(A, MS, A.gens_of(1))):
        for Y in (DecSSet(B, MS), DecSSet(B, MS, B.gens_of(1)[-1:])):
            P = Product(A, B)
            G = tensor.gray(X, Y, P)
            assert set(G.thin) == gray_oracle(X, Y, P)
            assert P.check_identities()


def test_gray_pi_low_dimensions():
    D1 = standard_simplex(1)
    assert set(tensor.gray_pi(1).thin) == set(tensor.gray(DecSSet(D1, MS), DecSSet(D1, MS)).thin)
    Gp = tensor.gray_pi(2)
    G = tensor.gray(DecSSet(D1, MS), DecSSet(standard_simplex(2), MS), Gp.sset)
    extra = set(Gp.thin) - set(G.thin)
    assert [vertex_path(Gp.sset, t) for t in extra] == [((0, 0), (0, 1), (0, 2))]
    assert set(G.thin) <= set(Gp.thin)


def test_lax_cylinder_marking_rule():
    D = standard_simplex(1)
    A = DecSSet(D, MB, D.gens_of(1), D.gens_of(2), D.gens_of(2))
    dec, base, inc = tensor.lax_cylinder(A, identity_map(D))
    P = dec.sset
    paths = {vertex_path(P, e): e for e in P.gens_of(1)}
    assert paths[((0, 0), (0, 1))] in dec.marked
    assert paths[((0, 0), (1, 1))] not in dec.marked
    assert paths[((1, 0), (1, 1))] not in dec.marked
    assert len(dec.marked) == 3
    assert base.is_valid() and base.target.dims == 2
    for path, g in paths.items():
        expect = tuple(i if t == 0 else 2 for t, i in path)
        assert tuple(nerve_vertices(base.target, base(SimplexRef(g)))) == expect
    assert inc.map.is_valid() and not inc.decoration_failures()


def test_lax_cylinder_base_map_and_point():
    D0 = standard_simplex(0)
    dec, base, inc = tensor.lax_cylinder(DecSSet(D0, MB), identity_map(D0))
    assert dec.sset.counts() == (2, 1)
    assert base.target.counts() == (2, 1)
    v = inc.map(SimplexRef(D0.gens[0][0]))
    assert base(v) == SimplexRef(base.target.index[(0,)])


def test_lax_cylinder_thin_over_degenerate_base():
    D = standard_simplex(1)
    A = DecSSet(D, MB, (), (), ())
    dec, base, _ = tensor.lax_cylinder(A, identity_map(D))
    for t in dec.sset.gens_of(2):
        assert t in dec.lean
        assert (t in dec.thin) == bool(base(SimplexRef(t)).degeneracy)


def test_lax_cylinder_rejects_non_biscaled():
    D = standard_simplex(1)
    with pytest.raises(DecorationError):
        tensor.lax_cylinder(DecSSet(D, MS), identity_map(D))


@pytest.mark.parametrize("n", [0, 1, 2])
def test_lax_cylinder_inclusion_lifts_against_fixtures(n):
    D = standard_simplex(n)
    for A in (DecSSet(D, MB), DecSSet(D, MB, D.gens_of(1))):
        _, _, inc = tensor.lax_cylinder(A, identity_map(D))
        for name, p in mb_fibration_fixtures():
            for top, bottom in squares(inc, p):
                assert not isinstance(solve_lifting(LiftingProblem(inc, p, top, bottom)), NoFiller), name


def test_fun_complex_from_point_is_truncation():
    D = standard_simplex(2)
    Y = DecSSet(D, MB, D.gens_of(1)[:1], D.gens_of(2), D.gens_of(2))
    H = tensor.fun_complex(DecSSet(standard_simplex(0), MB), Y, cap=2)
    assert H.sset.counts() == D.counts()
    assert len(H.dec.marked) == 1 and len(H.dec.thin) == 1


def test_fun_complex_vertex_count():
    D = standard_simplex(1)
    H = tensor.fun_complex(DecSSet(D, MB), DecSSet(D, MB, D.gens_of(1), D.gens_of(2), D.gens_of(2)), cap=1)
    assert H.sset.counts()[0] == 3


def test_fun_complex_flavor_mismatch():
    D = standard_simplex(0)
    with pytest.raises(DecorationError):
        tensor.fun_complex(DecSSet(D, MB), DecSSet(D, MS))


def test_map_over_point_gives_fiber_vertices():
    I = standard_simplex(1)
    P = Product(I, I)
    X = DecSSet(P, MB)
    S = DecSSet(I, MB)
    p = DecMap(X, S, SimplicialMap(P, I, {g: P.pr1(SimplexRef(g)) for g in P.all_gens()}))
    pt = standard_simplex(0)
    for s in I.gens_of(0):
        q = SimplicialMap(pt, I, {pt.gens[0][0]: SimplexRef(s)})
        H = tensor.map_over(DecSSet(pt, MB), q, p, cap=1)
        Fs = fiber(X, p.map, s)[0]
        assert H.sset.counts()[0] == Fs.sset.counts()[0] == 2


def test_fun_complex_functorial_in_target():
    D1, D2 = standard_simplex(1), standard_simplex(2)
    X = DecSSet(D1, MB)
    Y1 = DecSSet(D1, MB, (), D1.gens_of(2), D1.gens_of(2))
    Y2 = DecSSet(D2, MB, (), D2.gens_of(2), D2.gens_of(2))
    pt = DecSSet(standard_simplex(0), MB)
    H1, H2, H3 = (tensor.fun_complex(X, Y, cap=1) for Y in (Y1, Y2, pt))
    g = SimplicialMap(D1, D2, {v: SimplexRef(D2.index[D1.labels[v]]) for v in D1.all_gens()})
    h = to_terminal(Y2).map
    gh = g.compose(h)
    a = tensor.post_compose(H1, H2, g).compose(tensor.post_compose(H2, H3, h))
    assert a.assign == tensor.post_compose(H1, H3, gh).assign


def test_fun_complex_functorial_in_source():
    D1 = standard_simplex(1)
    D0 = standard_simplex(0)
    Y = DecSSet(D1, MB, D1.gens_of(1), (), ())
    HX = tensor.fun_complex(DecSSet(D1, MB), Y, cap=1)
    H0 = tensor.fun_complex(DecSSet(D0, MB), Y, cap=1)
    for v in D1.gens_of(0):
        f = SimplicialMap(D0, D1, {D0.gens[0][0]: SimplexRef(v)})
        ev = tensor.pre_compose(HX, H0, f)
        assert ev.is_valid()
    ident = tensor.pre_compose(HX, HX, identity_map(D1))
    assert all(r == SimplexRef(g) for g, r in ident.assign.items())


def test_gray_suite_passes():
    assert run_suite("gray", cap=2).passed
