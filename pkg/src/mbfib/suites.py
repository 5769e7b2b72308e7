"""Named verification suites with deterministic reports."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product as iproduct

from . import bicat, mapping_simplex as ms, oracles, posets, straightening as st, tensor
from .decorations import MARKED_BISCALED, MARKED_SCALED, SCALED, DecMap, DecSSet, dec_product
from .generators import SCALED_FAMILIES, GeneratorSpec, build
from .lifting import (LiftingProblem, NoFiller, has_rlp_up_to, is_local_01_cartesian, pushout_product,
                      solve_lifting, squares, to_terminal)
from .sset import (Product, SimplexRef, SimplicialMap, SimplicialSet, chain_ref, colimit, horn,
                   standard_simplex)

SUITES = ("pn-order", "u-min", "pi-map", "keyscaling", "gray", "cylinder", "pushout-product",
          "mapping-simplex", "st-alpha", "st-oracle", "slice-fiber", "nerve-fibrancy", "local-cartesian")

# documented safe ranges for the main cap of each suite
SAFE_CAPS = {"pn-order": 7, "u-min": 7, "pi-map": 6, "keyscaling": 6, "gray": 4, "cylinder": 3,
             "pushout-product": 3, "mapping-simplex": 3, "st-alpha": 4, "st-oracle": 1,
             "slice-fiber": 4, "nerve-fibrancy": 4, "local-cartesian": 3}
DEFAULT_CAPS = {"pn-order": 6, "u-min": 6, "pi-map": 5, "keyscaling": 5, "gray": 3, "cylinder": 3,
                "pushout-product": 3, "mapping-simplex": 3, "st-alpha": 4, "st-oracle": 1,
                "slice-fiber": 4, "nerve-fibrancy": 4, "local-cartesian": 3}
DEFAULT_SEED = 20240917
CAPS_ENV = "MBFIB_CAPS"


class SuiteError(ValueError):
    pass


@dataclass
class SuiteSpec:
    name: str
    cap: int | None = None
    seed: int = DEFAULT_SEED
    count: int = 50

    def __post_init__(self):
        if self.name not in SUITES:
            raise SuiteError(f"unknown suite {self.name!r}")
        if self.cap is None:
            self.cap = env_caps().get(self.name, DEFAULT_CAPS[self.name])
        if not 0 <= self.cap <= SAFE_CAPS[self.name]:
            raise SuiteError(f"cap {self.cap} outside the safe range 0..{SAFE_CAPS[self.name]} for {self.name}")


def env_caps() -> dict:
    """Per-suite cap overrides from MBFIB_CAPS, e.g. ``pn-order=5,gray=2``."""
    raw = os.environ.get(CAPS_ENV, "")
    out = {}
    for part in filter(None, (p.strip() for p in raw.split(","))):
        key, _, val = part.partition("=")
        if key in SUITES and val.strip().isdigit():
            out[key] = int(val)
    return out


@dataclass
class SuiteReport:
    suite: str
    cap: int
    seed: int
    cases: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c["verdict"] == "pass" for c in self.cases)

    def add(self, case: str, ok: bool, witness=None, **info):
        entry = {"case": case, "verdict": "pass" if ok else "fail"}
        entry.update(info)
        if not ok:
            entry["witness"] = witness if witness is not None else {"case": case}
        self.cases.append(entry)

    def failures(self) -> list:
        return [c for c in self.cases if c["verdict"] != "pass"]

    def to_dict(self, timings: bool = False) -> dict:
        d = {"format": "suite-v1", "suite": self.suite, "cap": self.cap, "seed": self.seed,
             "passed": self.passed, "cases": self.cases,
             "summary": {"total": len(self.cases), "failed": len(self.failures())}}
        if timings:
            d["seconds"] = round(self.seconds, 3)
        return d


def run_suite(spec: SuiteSpec | str, **kw) -> SuiteReport:
    if isinstance(spec, str):
        spec = SuiteSpec(spec, **kw)
    rep = SuiteReport(spec.name, spec.cap, spec.seed)
    t0 = time.perf_counter()
    _RUNNERS[spec.name](spec, rep)
    rep.seconds = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# posets


def _pn_order(spec, rep):
    for n in range(spec.cap + 1):
        P = posets.pn_poset(n)
        E = P.elements
        rep.add(f"size(n={n})", len(E) == 2 ** n, {"n": n, "size": len(E)})
        bad = None
        for a in E:
            if not posets.pn_leq(a, a):
                bad = ("reflexive", a)
            for b in E:
                if a != b and posets.pn_leq(a, b) and posets.pn_leq(b, a):
                    bad = ("antisymmetric", a, b)
                if posets.pn_leq(a, b) != oracles.brute_pn_leq(a, b, n):
                    bad = ("definition", a, b)
                for c in E:
                    if posets.pn_leq(a, b) and posets.pn_leq(b, c) and not posets.pn_leq(a, c):
                        bad = ("transitive", a, b, c)
        rep.add(f"axioms(n={n})", bad is None, {"n": n, "problem": bad})
        untyped = [(a, b) for a, b in P.covers() if posets.cover_type(a, b) is None]
        typed_noncover = [(a, b) for a in E for b in E if posets.cover_type(a, b) and (a, b) not in set(P.covers())]
        rep.add(f"covers(n={n})", not untyped and not typed_noncover,
                {"n": n, "untyped": untyped[:3], "typed_noncover": typed_noncover[:3]})


def _u_min(spec, rep):
    for n in range(spec.cap + 1):
        E = posets.pn_elements(n)
        bad = []
        pairs = 0
        for a in E:
            for b in E:
                if posets.pn_leq(a, b):
                    pairs += 1
                    if posets.u_min(a, b) != oracles.brute_u_min(a, b, n):
                        bad.append((a, b))
        rep.add(f"u_min(n={n})", not bad, {"n": n, "pairs": bad[:3]}, pairs=pairs)


def chain_marked(C, D) -> bool:
    """Marked refinement edges of the chain poset (flat Gray scaling on Delta^1 x Delta^n)."""
    return posets.insertion_marked(C, D, lambda x, y, z: posets.gray_thin(x, y, z))


def _pi_map(spec, rep):
    for n in range(1, spec.cap + 1):
        for j in range(n + 1):
            for l in range(j, n + 1):
                val, f, src, tgt = posets.pi_map(j, l, n)
                Ch = posets.chains(j, l)
                mono = [(C, D) for C in Ch for D in Ch
                        if posets.chain_leq(C, D) and not posets.pn_leq(val(C), val(D))]
                rep.add(f"monotone(n={n},j={j},l={l})", not mono, {"n": n, "j": j, "l": l, "pairs": mono[:3]})
                bad = [(C, D) for C in Ch for D in Ch if chain_marked(C, D) and val(C) != val(D)]
                rep.add(f"marked(n={n},j={j},l={l})", not bad and f.is_valid(),
                        {"n": n, "j": j, "l": l, "edges": bad[:3]})


# ---------------------------------------------------------------------------
# straightening


def _keyscaling(spec, rep):
    for n in range(2, spec.cap + 1):
        for j in range(1, n):
            res = st.keyscaling_iso(n, j)
            rep.add(f"keyscaling(n={n},j={j})", res.ok, res.to_dict(), vertices=len(res.bijection))


def _st_alpha(spec, rep):
    cache = {}
    for n in range(spec.cap + 1):
        a = st.alpha_flat(n)
        rep.add(f"alpha_flat(n={n})", a.map.is_valid() and not a.decoration_failures(), {"n": n})
    for name, a in (("sharp1", st.alpha_sharp1()), ("sharp2", st.alpha_sharp2())):
        rep.add(f"alpha_{name}", a.map.is_valid() and not a.decoration_failures(), {"which": name})
    a1 = st.alpha_flat(1)
    hit = {r.gen for r in a1.map.assign.values() if not r.degeneracy}
    rep.add("alpha_1 surjective", hit == set(a1.target.sset.all_gens()), {"missing": sorted(set(a1.target.sset.all_gens()) - hit)})
    for k in range(spec.cap + 1):
        for n in range(spec.cap + 1):
            for theta in _monotone(k, n):
                ok = st.alpha_naturality(k, n, theta, cache)
                rep.add(f"naturality({k}->{n},{theta})", ok, {"k": k, "n": n, "theta": list(theta)})


def _monotone(k: int, n: int) -> list:
    return list(combinations_with_replacement(range(n + 1), k + 1))


def st_oracle_inputs() -> list:
    """Decorated inputs built from at most two decorated simplices, with their maps to Delta^0 / Delta^1.

    Each entry is (name, X, p) with p None for the point.
    """
    D1, D2 = standard_simplex(1), standard_simplex(2)
    F = MARKED_BISCALED
    e, t = D1.gens_of(1), D2.gens_of(2)
    cells = [
        ("pt", DecSSet(standard_simplex(0), F)),
        ("D1", DecSSet(D1, F)),
        ("D1#", DecSSet(D1, F, e)),
        ("D2", DecSSet(D2, F)),
        ("D2lean", DecSSet(D2, F, (), (), t)),
        ("D2thin", DecSSet(D2, F, (), t, t)),
    ]
    two = []
    pp = colimit([standard_simplex(0), standard_simplex(0)], []).obj
    two.append(("pt+pt", DecSSet(pp, F)))
    for i in range(3):
        H = horn(2, i)
        for marks in ((), "first", "second", "both"):
            edges = sorted(H.gens_of(1))
            sel = {(): [], "first": edges[:1], "second": edges[1:], "both": edges}[marks]
            two.append((f"horn2_{i}{'#' + marks if marks else ''}", DecSSet(H, F, sel)))
    out = []
    for name, X in cells + two:
        out.append((name, X, None))
        for p in _maps_to_interval(X.sset):
            vals = "".join(str(p.target.labels[p.assign[v].gen][0]) for v in sorted(X.sset.gens_of(0)))
            out.append((f"{name}/{vals}", X, p))
    return out


def _maps_to_interval(X: SimplicialSet) -> list:
    B = standard_simplex(1)
    verts = sorted(X.gens_of(0))
    out = []
    for vals in iproduct((0, 1), repeat=len(verts)):
        pos = dict(zip(verts, vals))
        assign = {}
        ok = True
        for g in X.all_gens():
            seq = [pos[v] for v in X.vertices(SimplexRef(g))]
            if any(a > b for a, b in zip(seq, seq[1:])):
                ok = False
                break
            assign[g] = chain_ref(B, seq)
        if ok:
            out.append(SimplicialMap(X, B, assign))
    return out


def _st_oracle(spec, rep):
    for name, X, p in st_oracle_inputs():
        # cap 0: inputs over the point only; cap 1 adds inputs over Delta^1
        if p is not None and spec.cap < 1:
            continue
        targets = [0] if p is None else [0, 1]
        for j in targets:
            try:
                r = oracles.compare_st(X, p, j)
                ok, why = r["ok"], r["problems"][:3]
            except st.OnePassViolation as exc:
                ok, why = False, [f"one-pass assertion: {exc}"]
            rep.add(f"st({name},j={j})", ok, {"input": name, "j": j, "problems": why})


# ---------------------------------------------------------------------------
# Gray tensor and cylinders


def gray_oracle(X: DecSSet, Y: DecSSet, P: Product) -> set:
    """Thin triangles of the Gray tensor, by evaluating the vertex-level rule on each triangle."""
    out = set()
    for t in P.gens_of(2):
        x, y = P.labels[t]
        xs, ys = X.sset.vertices(x), Y.sset.vertices(y)
        x12 = X.sset.edge(x, 1, 2)
        y01 = Y.sset.edge(y, 0, 1)
        flat_x = xs[1] == xs[2] or (X.flavor != SCALED and x12.gen in X.marked and not x12.degeneracy)
        flat_y = ys[0] == ys[1] or (Y.flavor != SCALED and y01.gen in Y.marked and not y01.degeneracy)
        if X.is_thin(x) and Y.is_thin(y) and (flat_x or flat_y):
            out.add(t)
    return out


def _gray(spec, rep):
    shapes = []
    for m in range(1, spec.cap + 1):
        D = standard_simplex(m)
        shapes.append((f"D{m}", DecSSet(D, MARKED_SCALED)))
        shapes.append((f"D{m}#", DecSSet(D, MARKED_SCALED, D.gens_of(1), D.gens_of(2))))
    for (a, X), (b, Y) in iproduct(shapes, shapes):
        if X.sset.dims + Y.sset.dims > spec.cap + 1:
            continue
        P = Product(X.sset, Y.sset)
        G = tensor.gray(X, Y, P)
        exp = gray_oracle(X, Y, P)
        rep.add(f"gray({a},{b})", set(G.thin) == exp and P.check_identities(),
                {"left": a, "right": b, "extra": sorted(set(G.thin) - exp)[:3], "missing": sorted(exp - set(G.thin))[:3]})
    X = DecSSet(standard_simplex(1), MARKED_SCALED)
    G = tensor.gray(X, X)
    P = G.sset
    names = []
    for t in G.thin:
        verts = [(P.left.labels[a][0], P.right.labels[b][0]) for a, b in
                 zip(P.left.vertices(P.labels[t][0]), P.right.vertices(P.labels[t][1]))]
        names.append(tuple(verts))
    rep.add("gray(D1,D1) thin", names == [((0, 0), (1, 0), (1, 1))], {"thin": names})


def _cylinder(spec, rep):
    for F in ms.corpus(spec.count, spec.seed, n_max=spec.cap):
        if F.n < 1:
            continue
        c = ms.lax_comparison(F)
        ok = c["thin"] and c["lean"] and c["marked_subset"]
        rep.add(f"cylinder({F.name},n={F.n})", ok, {"functor": F.to_dict(), "comparison": c},
                extra_marked=c["extra_marked"])


# ---------------------------------------------------------------------------
# lifting


def mb_fibration_fixtures() -> list:
    """Small MB-fibrations whose simplices are complete in every dimension."""
    F = MARKED_BISCALED
    out = []
    pt = DecSSet(standard_simplex(0), F)
    out.append(("point", to_terminal(pt)))
    for n in (1, 2):
        D = standard_simplex(n)
        X = DecSSet(D, F, (), D.gens_of(2), D.gens_of(2))
        out.append((f"poset[{n}]", to_terminal(X)))
    I = standard_simplex(1)
    B = DecSSet(I, F, I.gens_of(1))
    out.append(("identity D1#", DecMap(B, B, SimplicialMap(I, I, {g: SimplexRef(g) for g in I.all_gens()}))))
    P = Product(I, I)
    XP = dec_product(B, DecSSet(I, F, (), (), ()), P)
    XP = XP.with_(thin=XP.thin | set(P.gens_of(2)), lean=XP.lean | set(P.gens_of(2)))
    base = DecSSet(I, F, I.gens_of(1))
    out.append(("D1# x [1] -> D1#", DecMap(XP, base, SimplicialMap(P, I, {g: P.pr1(SimplexRef(g)) for g in P.all_gens()}),
                                          check=False)))
    return out


def pushout_pairs() -> list:
    fs = [GeneratorSpec("C1", n) for n in range(3)] + [GeneratorSpec(c) for c in ("C2", "C3", "C4")]
    gs = ([GeneratorSpec("A1", n, i) for n in (2, 3) for i in range(1, n)]
          + [GeneratorSpec("A3", n) for n in (2, 3)] + [GeneratorSpec(c) for c in ("A4", "S1", "S2")])
    return [(f, g) for f in fs for g in gs]


def _pushout_product(spec, rep):
    fixtures = mb_fibration_fixtures()
    for f, g in pushout_pairs():
        name = f"{f.name()} x {g.name()}"
        pp = pushout_product(build(f), build(g))
        # the cap bounds the dimension of the glued simplex; cap 3 covers every pair
        if pp.target.sset.dims > spec.cap + 2:
            continue
        if not pp.is_mono():
            rep.add(name, False, {"f": f.name(), "g": g.name(), "reason": "not a monomorphism"})
            continue
        bad = None
        for fname, right in fixtures:
            for top, bottom in squares(pp, right):
                if isinstance(solve_lifting(LiftingProblem(pp, right, top, bottom)), NoFiller):
                    bad = {"fixture": fname, "top": top.map.to_dict(), "bottom": bottom.map.to_dict()}
                    break
            if bad:
                break
        rep.add(name, bad is None, {"f": f.name(), "g": g.name(), **(bad or {})})


# ---------------------------------------------------------------------------
# mapping simplex


def _mapping_simplex(spec, rep):
    for F in ms.corpus(spec.count, spec.seed, n_max=spec.cap):
        r = ms.check_functor(F)
        rep.add(f"functor({F.name},n={F.n})", r["ok"], {"functor": F.to_dict(), "check": r})
    for n in range(spec.cap + 1):
        M = ms.mapping_simplex(ms.corepresentable(n, 0))
        rep.add(f"corepresentable(n={n})", ms.is_upper_set(M), {"n": n}, counts=list(M.sset.counts()))


# ---------------------------------------------------------------------------
# 2-categories


def slice_fiber_check(C: bicat.Strict2Cat, cap: int) -> list:
    """(x, y, ok, detail) comparing slice fibers with hom posets."""
    N = bicat.scaled_nerve(C, cap)
    out = []
    for y in C.objects:
        Z, proj = bicat.slice_over(N.dec, N.vertex_of[y])
        for x in C.objects:
            fib, ids = bicat.slice_fiber(N.dec, N.vertex_of[y], N.vertex_of[x])
            H = C.homs[(x, y)]
            strict = [(a, b) for a in H for b in H if a != b and C.leq(x, y, a, b)]
            verts = {}
            for g in fib.sset.gens_of(0):
                r = Z.sset.labels[g]
                verts[g] = _edge_name(N, r)
            ok = sorted(verts.values()) == sorted(H) and len(fib.sset.gens_of(1)) == len(strict)
            edges = set()
            for g in fib.sset.gens_of(1):
                a, b = fib.sset.faces[g][1].gen, fib.sset.faces[g][0].gen
                edges.add((verts[a], verts[b]))
            ok = ok and edges == set(strict)
            out.append((x, y, ok, {"hom": H, "vertices": sorted(verts.values()), "edges": sorted(edges)}))
    return out


def _edge_name(N: bicat.NerveData, ref: SimplexRef):
    X = N.sset
    if ref.degeneracy:
        obj = X.labels[ref.gen][0][0]
        return N.category.ident[obj]
    return X.labels[ref.gen][1][0]


def _slice_fiber(spec, rep):
    for C in bicat.fixture_2cats():
        for x, y, ok, info in slice_fiber_check(C, spec.cap):
            rep.add(f"slice({C.name},{x}->{y})", ok, {"category": C.to_dict(), "x": x, "y": y, **info})


def _nerve_fibrancy(spec, rep):
    for C in bicat.fixture_2cats():
        N = bicat.scaled_nerve(C, spec.cap)
        r = has_rlp_up_to(to_terminal(N.dec), SCALED_FAMILIES, {"n_max": spec.cap})
        rep.add(f"nerve({C.name})", r.passed, {"category": C.to_dict(), "failures": r.failures()[:2]},
                instances=len(r.instances))


def lax_fixtures(cap: int) -> list:
    return [(C.name, bicat.lax_arrow(bicat.scaled_nerve(C, cap + 2).dec, cap))
            for C in (bicat.walking_2cell(), bicat.lax_triangle(), bicat.contractible_groupoid())]


def _local_cartesian(spec, rep):
    for name, L in lax_fixtures(spec.cap):
        M = L.over(1)
        U = DecSSet(M.source.sset, SCALED, (), M.source.thin)
        p = DecMap(U, L.target, L.ev1, check=False)
        for e in sorted(M.source.marked):
            r = is_local_01_cartesian(p, e, cap=spec.cap)
            rep.add(f"local({name},edge={e})", r["verdict"] == "pass", r)


_RUNNERS = {
    "pn-order": _pn_order, "u-min": _u_min, "pi-map": _pi_map, "keyscaling": _keyscaling,
    "gray": _gray, "cylinder": _cylinder, "pushout-product": _pushout_product,
    "mapping-simplex": _mapping_simplex, "st-alpha": _st_alpha, "st-oracle": _st_oracle,
    "slice-fiber": _slice_fiber, "nerve-fibrancy": _nerve_fibrancy, "local-cartesian": _local_cartesian,
}

__all__ = ["SUITES", "SAFE_CAPS", "DEFAULT_CAPS", "SuiteSpec", "SuiteReport", "SuiteError", "run_suite",
           "env_caps", "st_oracle_inputs", "gray_oracle", "mb_fibration_fixtures", "pushout_pairs",
           "slice_fiber_check", "lax_fixtures", "chain_marked"]
