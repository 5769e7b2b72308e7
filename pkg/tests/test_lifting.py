import pytest

from mbfib import bicat
from mbfib.decorations import MARKED_BISCALED, SCALED, DecMap, DecorationError, DecSSet, dec_identity, sharp
from mbfib.generators import MB_FAMILIES, SCALED_FAMILIES, GeneratorSpec, build, parse_spec
from mbfib.lifting import (BudgetExceeded, Filler, LiftingProblem, NoFiller, SolverStats, all_fillers,
                           has_rlp_up_to, is_local_01_cartesian, problem_from_dict, problem_to_dict,
                           pushout_product, solve_lifting, squares, to_terminal, verify_filler)
from mbfib.oracles import free_generators, lifting_fixtures, naive_fillers
from mbfib.sset import SimplexRef, SimplicialMap, identity_map, is_isomorphic, standard_simplex


def horn_gen():
    return build(parse_spec("sc:i(n=2,i=1)"))


def test_identity_square_filled_by_identity():
    g = horn_gen()
    p = LiftingProblem(g, to_terminal(g.target), g, to_terminal(g.target))
    res = solve_lifting(p)
    assert isinstance(res, Filler)
    assert all(r == SimplexRef(b) for b, r in res.diag.map.assign.items())


def test_horn_into_itself_has_no_filler():
    g = horn_gen()
    A = g.source
    p = LiftingProblem(g, to_terminal(A), dec_identity(A), to_terminal(g.target))
    assert isinstance(solve_lifting(p), NoFiller)
    assert naive_fillers(p) == []


def test_filler_in_2category_nerve_composes():
    C = bicat.lax_triangle()
    N = bicat.scaled_nerve(C, 3)
    X = N.sset
    g = horn_gen()
    right = to_terminal(N.dec)
    seen = 0
    for top, bottom in squares(g, right):
        res = solve_lifting(LiftingProblem(g, right, top, bottom))
        assert isinstance(res, Filler)
        D = g.target.sset
        tri = res.diag.map.assign[D.index[(0, 1, 2)]]
        if tri.degeneracy:
            continue
        objs, arrows = X.labels[tri.gen]
        if len(set(objs)) == 3:
            seen += 1
            f01, f02, f12 = arrows
            assert f02 == C.compose(objs[0], objs[1], objs[2], f12, f01)
    assert seen == 1


def test_budget_is_distinct_from_no_filler():
    g = horn_gen()
    p = LiftingProblem(g, to_terminal(g.target), g, to_terminal(g.target))
    assert isinstance(solve_lifting(p, budget=0), BudgetExceeded)


def test_left_map_must_be_mono():
    D1, pt = standard_simplex(1), standard_simplex(0)
    X, P = DecSSet(D1, SCALED), DecSSet(pt, SCALED)
    collapse = to_terminal(X)
    p = LiftingProblem(collapse, to_terminal(P), dec_identity(P), to_terminal(P))
    with pytest.raises(DecorationError):
        p.validate()


def test_rlp_point_is_fibrant():
    pt = DecSSet(standard_simplex(0), MARKED_BISCALED)
    rep = has_rlp_up_to(to_terminal(pt), MB_FAMILIES, {"n_max": 4})
    assert rep.passed and rep.to_dict()["format"] == "rlp-v1"


def test_rlp_flat_edge_over_marked_edge_fails_a4_with_witness():
    D1 = standard_simplex(1)
    p = DecMap(DecSSet(D1, MARKED_BISCALED), DecSSet(D1, MARKED_BISCALED, D1.gens_of(1)), identity_map(D1))
    rep = has_rlp_up_to(p, ["A4"])
    assert not rep.passed
    (bad,) = rep.failures()
    assert bad["instance"] == "A4" and bad["witness"]["bottom"]["2"] == [D1.index[(0, 1)], []]


def test_rlp_flat_edge_over_point_passes_a4():
    # over a point the base edge is degenerate, so a degenerate lift exists
    X = DecSSet(standard_simplex(1), MARKED_BISCALED)
    assert has_rlp_up_to(to_terminal(X), ["A4"]).passed


def test_nerve_of_2category_passes_scaled_probes():
    N = bicat.scaled_nerve(bicat.walking_2cell(), 3)
    assert has_rlp_up_to(to_terminal(N.dec), SCALED_FAMILIES, {"n_max": 3}).passed


def test_rlp_report_is_deterministic():
    N = bicat.scaled_nerve(bicat.lax_triangle(), 3)
    a = has_rlp_up_to(to_terminal(N.dec), SCALED_FAMILIES, {"n_max": 3}).to_json()
    b = has_rlp_up_to(to_terminal(N.dec), SCALED_FAMILIES, {"n_max": 3}).to_json()
    assert a == b


def test_local_cartesian_identity_edge():
    D1 = standard_simplex(1)
    X = DecSSet(D1, SCALED)
    p = DecMap(X, X, SimplicialMap(D1, D1, {g: SimplexRef(g) for g in D1.all_gens()}))
    assert is_local_01_cartesian(p, D1.index[(0, 1)])["verdict"] == "pass"


def test_local_cartesian_fails_for_non_identity_2cell():
    C = bicat.walking_2cell()
    N = bicat.scaled_nerve(C, 3)
    p = to_terminal(N.dec)
    f = N.edge_of[(0, 1, "f")].gen
    r = is_local_01_cartesian(p, f, cap=3)
    assert r["verdict"] == "fail" and r["witness"]["n"] == 2
    # over a point only equivalences qualify
    A = bicat.scaled_nerve(bicat.walking_arrow(), 3)
    assert is_local_01_cartesian(to_terminal(A.dec), A.sset.gens_of(1)[0], cap=3)["verdict"] == "fail"
    G = bicat.scaled_nerve(bicat.contractible_groupoid(), 3)
    for e in G.sset.gens_of(1):
        assert is_local_01_cartesian(to_terminal(G.dec), e, cap=3)["verdict"] == "pass"


def test_pushout_product_unit():
    f = build(GeneratorSpec("C1", 0))
    g = build(parse_spec("mb:A3(n=2)"))
    pp = pushout_product(f, g)
    assert is_isomorphic(pp.source.sset, g.source.sset) is not None
    assert is_isomorphic(pp.target.sset, g.target.sset) is not None
    assert len(pp.target.marked) == len(g.target.marked) and len(pp.target.thin) == len(g.target.thin)


def test_pushout_product_boundary_times_initial_vertex():
    pp = pushout_product(build(GeneratorSpec("C1", 1)), build(parse_spec("mb:A4")))
    assert pp.source.sset.counts() == (4, 3)
    assert pp.target.sset.counts() == (4, 5, 2)
    assert pp.is_mono()


def test_pushout_product_is_mono():
    pp = pushout_product(build(parse_spec("cof:C2")), build(parse_spec("mb:A1(n=2,i=1)")))
    assert pp.is_mono()
    # every vertex of the horn already sees the marked edge, so nothing new appears
    assert pp.is_iso()


def test_pushout_product_flavor_mismatch():
    with pytest.raises(DecorationError):
        pushout_product(build(parse_spec("cof:C2")), horn_gen())


def test_problem_file_round_trip():
    g = horn_gen()
    p = LiftingProblem(g, to_terminal(g.target), g, to_terminal(g.target))
    q = problem_from_dict(problem_to_dict(p))
    assert problem_to_dict(q) == problem_to_dict(p)
    with pytest.raises(ValueError):
        problem_from_dict({"format": "nope"})


def test_fixture_corpus_shape():
    fx = lifting_fixtures()
    assert len(fx) >= 100
    assert all(free_generators(p) <= 10 for _, p in fx)


@pytest.mark.parametrize("name,p", lifting_fixtures()[::7], ids=lambda v: v if isinstance(v, str) else "")
def test_solver_agrees_with_naive_enumeration(name, p):
    naive = naive_fillers(p)
    res = solve_lifting(p)
    assert isinstance(res, Filler) == bool(naive)
    if isinstance(res, Filler):
        assert verify_filler(p, res.diag)
    found = sorted(tuple(sorted(a.items())) for a in all_fillers(p))
    assert found == sorted(tuple(sorted(a.items())) for a in naive)


def test_solver_is_deterministic_and_counts_nodes():
    g = build(parse_spec("mb:A1(n=3,i=1)"))
    X = sharp(standard_simplex(3))
    right = to_terminal(X)
    top, bottom = next(iter(squares(g, right)))
    p = LiftingProblem(g, right, top, bottom)
    s1, s2 = SolverStats(), SolverStats()
    a, b = solve_lifting(p, stats=s1), solve_lifting(p, stats=s2)
    assert a.diag.map.assign == b.diag.map.assign
    assert s1.nodes == s2.nodes > 0
