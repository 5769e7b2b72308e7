import json
import pathlib

import pytest

from mbfib.generators import (ALL_FAMILIES, GeneratorError, GeneratorSpec, build, default_probes, instances,
                              parse_spec)

GOLDEN = pathlib.Path(__file__).parent / "golden"


def labels(X, ids):
    return {X.sset.labels[g] for g in ids}


def test_inner_horn_scaled():
    f = build(parse_spec("sc:i(n=2,i=1)"))
    assert f.source.sset.counts() == (3, 2)
    assert labels(f.source, f.source.thin) == set()
    assert labels(f.target, f.target.thin) == {(0, 1, 2)}


def test_wonky_simplex_sizes():
    f = build(parse_spec("sc:ii"))
    assert len(f.source.thin) == 5 and len(f.target.thin) == 7
    assert labels(f.target, f.target.thin - f.source.thin) == {(0, 3, 4), (0, 1, 4)}


@pytest.mark.parametrize("n", [3, 4])
def test_outer_horn_with_collapsed_edge(n):
    f = build(GeneratorSpec("SC-iii", n))
    X = f.target.sset
    (t,) = f.target.thin
    from mbfib.sset import SimplexRef
    # the 01-edge of the thin triangle is collapsed to a point
    assert X.edge(SimplexRef(t), 0, 1).degeneracy
    assert X.counts()[0] == n
    assert f.source.thin == f.target.thin
    assert f.is_mono()


def test_mb_examples():
    f = build(parse_spec("mb:A3(n=2)"))
    assert f.source.sset.counts() == (3, 2)
    for X in (f.source, f.target):
        assert labels(X, X.marked) == {(0, 1)}
        assert labels(X, X.thin) == labels(X, X.lean) == ({(0, 1, 2)} if X is f.target else set())
    f = build(parse_spec("mb:A4"))
    assert f.source.sset.counts() == (1,) and f.target.sset.counts() == (2, 1)
    assert len(f.target.marked) == 1
    f = build(parse_spec("mb:S2"))
    assert not f.source.thin and len(f.source.lean) == 1
    assert len(f.target.thin) == 1 and not f.target.marked


def test_s1_marks_the_long_edge():
    f = build(parse_spec("mb:S1"))
    assert labels(f.source, f.source.marked) == {(0, 1), (1, 2)}
    assert labels(f.target, f.target.marked) == {(0, 1), (1, 2), (0, 2)}


def test_a1_lean_only():
    f = build(parse_spec("mb:A1(n=3,i=2)"))
    assert labels(f.target, f.target.lean) == {(1, 2, 3)}
    assert not f.target.thin and not f.target.marked


def test_ms_examples():
    f = build(parse_spec("ms:M1(n=3,i=2)"))
    assert labels(f.target, f.target.thin) == {(1, 2, 3)}
    assert labels(f.source, f.source.thin) == {(1, 2, 3)}
    f = build(parse_spec("ms:MS1"))
    assert labels(f.source, f.source.marked) == {(0, 1), (1, 2)}
    assert len(f.target.marked) == 3 and len(f.target.thin) == 1


def test_e_with_point_probe_is_iso():
    pt = default_probes(0)[0]
    for fam in ("E", "ME"):
        assert build(GeneratorSpec(fam, probe=pt)).is_iso()


def test_e_with_groupoid_probe_marks_everything():
    f = build(GeneratorSpec("E", probe=default_probes(2)[-1]))
    assert not f.source.marked
    assert f.target.marked == frozenset(f.target.sset.gens_of(1))
    assert f.source.lean == f.target.lean == frozenset(f.target.sset.gens_of(2))


def test_cofibrations():
    f = build(parse_spec("cof:C1(n=0)"))
    assert f.source.sset.counts() == () and f.target.sset.counts() == (1,)
    f = build(parse_spec("cof:C2"))
    assert not f.source.marked and len(f.target.marked) == 1
    f = build(parse_spec("cof:C3"))
    assert not f.source.lean and len(f.target.lean) == 1 and not f.target.thin
    f = build(parse_spec("cof:C4"))
    assert len(f.source.lean) == 1 and not f.source.thin and len(f.target.thin) == 1


@pytest.mark.parametrize("fam", ALL_FAMILIES)
def test_every_instance_is_a_mono(fam):
    for spec in instances(fam, 4):
        f = build(spec)
        assert f.is_mono(), spec.name()
        assert f.source.sset.check_identities() and f.target.sset.check_identities()


def test_golden_snapshot():
    golden = json.loads((GOLDEN / "generators.json").read_text())
    from tests.golden.make_generators import snapshot
    assert json.loads(json.dumps(snapshot(), sort_keys=True)) == golden


@pytest.mark.parametrize("bad", [GeneratorSpec("A1", 2, 0), GeneratorSpec("A1", 1, 1), GeneratorSpec("A3", 1),
                                 GeneratorSpec("SC-iii", 2), GeneratorSpec("C1", -1), GeneratorSpec("E")])
def test_bad_parameters(bad):
    with pytest.raises(GeneratorError):
        build(bad)


@pytest.mark.parametrize("text,family,n,i", [
    ("mb:A1(n=3,i=1)", "A1", 3, 1), ("sc:ii", "SC-ii", None, None), ("cof:C2", "C2", None, None),
    ("ms:M3(n=2)", "M3", 2, None), ("sc:i(n=2,i=1)", "SC-i", 2, 1)])
def test_parse_spec(text, family, n, i):
    spec = parse_spec(text)
    assert (spec.family, spec.n, spec.i) == (family, n, i)


@pytest.mark.parametrize("text", ["A1", "mb:Z9", "mb:A1(k=2)", "cof:A1", "xx:C2"])
def test_parse_errors(text):
    with pytest.raises(GeneratorError):
        parse_spec(text)
