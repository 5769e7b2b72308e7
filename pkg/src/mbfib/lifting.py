"""Decorated lifting problems, a backtracking solver and RLP-based predicates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .decorations import (MARKED_BISCALED, SCALED, DecMap, DecSSet, DecorationError,
                          dec_product, image_decorations)
from .generators import GeneratorSpec, build, instances
from .sset import (SimplexRef, SimplicialMap, colimit, empty, product_map,
                   standard_simplex, surjection)


@dataclass
class LiftingProblem:
    """A commutative square  A -> X, B -> S  with left : A -> B mono, right : X -> S."""

    left: DecMap
    right: DecMap
    top: DecMap
    bottom: DecMap

    def validate(self):
        if not self.left.is_mono():
            raise DecorationError("left map must be a monomorphism")
        if self.top.source.sset is not self.left.source.sset:
            raise DecorationError("top must start at the source of left")
        if self.bottom.source.sset is not self.left.target.sset:
            raise DecorationError("bottom must start at the target of left")
        for a in self.left.source.sset.all_gens():
            if self.right(self.top.map.assign[a]) != self.bottom(self.left.map.assign[a]):
                raise DecorationError("square does not commute")


@dataclass
class Filler:
    diag: DecMap


@dataclass
class NoFiller:
    nodes: int = 0


@dataclass
class BudgetExceeded:
    nodes: int = 0


@dataclass
class SolverStats:
    nodes: int = 0
    backtracks: int = 0


# ---------------------------------------------------------------------------
# candidate index


def _index(right: DecMap, maxdim: int) -> dict:
    """For each dimension: (faces, projection) -> candidate simplices of X.

    Candidates are listed degenerate first, then by generator id.
    """
    cache = right.__dict__.setdefault("_lift_index", {})
    X = right.source.sset
    out = {}
    for k in range(maxdim + 1):
        if k in cache:
            out[k] = cache[k]
            continue
        table = {}
        cands = X.simplices(k)
        cands.sort(key=lambda r: (0 if r.degeneracy else 1, r.gen, r.degeneracy))
        for r in cands:
            faces = tuple(X.face(r, i) for i in range(k + 1)) if k else ()
            table.setdefault((faces, right(r)), []).append(r)
        cache[k] = table
        out[k] = table
    return out


def _decoration_ok(B: DecSSet, X: DecSSet, b: int, r: SimplexRef) -> bool:
    if b in B.marked and not X.is_marked(r):
        return False
    if b in B.thin and not X.is_thin(r):
        return False
    if b in B.lean and not X.is_lean(r):
        return False
    return True


def iter_fillers(p: LiftingProblem, budget: int | None = None, stats: SolverStats | None = None):
    """Yield every diagonal filler as an assignment dict on the generators of B.

    Generators of B outside the image of A are assigned in order of
    (dimension, id).  Exceeding the node budget raises ``_Budget``, which
    :func:`solve_lifting` turns into BudgetExceeded.
    """
    stats = stats if stats is not None else SolverStats()
    B = p.left.target
    X = p.right.source
    Bs, Xs = B.sset, X.sset
    diag = {}
    for a in p.left.source.sset.all_gens():
        diag[p.left.map.assign[a].gen] = p.top.map.assign[a]
    # B may decorate old cells more strongly than A does
    if any(not _decoration_ok(B, X, b, r) for b, r in diag.items()):
        return
    order = [g for ids in Bs.gens for g in ids if g not in diag]
    if not order:
        yield dict(diag)
        return
    index = _index(p.right, Bs.dims)
    cofaces = {}
    for g in order:
        for f in Bs.faces.get(g, ()):
            cofaces.setdefault(f.gen, []).append(g)
    bottom = p.bottom.map

    def img(ref):
        r = diag[ref.gen]
        if not ref.degeneracy:
            return r
        return Xs.apply(r, surjection(ref.degeneracy, Bs.dim(ref)))

    cache = {}

    def candidates(b):
        k = Bs.dim_of[b]
        faces = tuple(img(f) for f in Bs.faces[b]) if k else ()
        key = (faces, bottom.assign[b])
        hit = cache.get(b)
        if hit is not None and hit[0] == key:
            return hit[1]
        lst = [r for r in index[k].get(key, ()) if _decoration_ok(B, X, b, r)]
        cache[b] = (key, lst)
        return lst

    def forward_ok(b):
        for c in cofaces.get(b, ()):
            if c in diag:
                continue
            if all(f.gen in diag for f in Bs.faces[c]):
                if not candidates(c):
                    return False
        return True

    stack = [iter(candidates(order[0]))]
    depth = 0
    while stack:
        b = order[depth]
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            diag.pop(b, None)
            depth -= 1
            stats.backtracks += 1
            continue
        stats.nodes += 1
        if budget is not None and stats.nodes > budget:
            raise _Budget()
        diag[b] = nxt
        if not forward_ok(b):
            del diag[b]
            continue
        if depth + 1 == len(order):
            yield dict(diag)
            del diag[b]
            continue
        depth += 1
        stack.append(iter(candidates(order[depth])))


class _Budget(Exception):
    pass


def _as_decmap(p: LiftingProblem, assign: dict) -> DecMap:
    return DecMap(p.left.target, p.right.source,
                  SimplicialMap(p.left.target.sset, p.right.source.sset, assign), check=False)


def verify_filler(p: LiftingProblem, diag: DecMap) -> bool:
    """Independent re-check: commutation of both triangles and decorations."""
    try:
        diag.validate()
    except (DecorationError, ValueError, KeyError):
        return False
    for a in p.left.source.sset.all_gens():
        if diag(p.left.map.assign[a]) != p.top.map.assign[a]:
            return False
    for b in p.left.target.sset.all_gens():
        if p.right(diag.map.assign[b]) != p.bottom.map.assign[b]:
            return False
    return True


def solve_lifting(p: LiftingProblem, budget: int | None = 10**6, stats: SolverStats | None = None):
    """First filler found, NoFiller after exhaustive search, or BudgetExceeded."""
    stats = stats if stats is not None else SolverStats()
    try:
        for assign in iter_fillers(p, budget, stats):
            diag = _as_decmap(p, assign)
            if not verify_filler(p, diag):
                raise AssertionError("solver produced an invalid filler")
            return Filler(diag)
    except _Budget:
        return BudgetExceeded(stats.nodes)
    return NoFiller(stats.nodes)


def all_fillers(p: LiftingProblem, budget: int | None = None, stats=None) -> list:
    return list(iter_fillers(p, budget, stats))


# ---------------------------------------------------------------------------
# convenience constructors


def terminal(flavor: str) -> DecSSet:
    return DecSSet(standard_simplex(0), flavor)


def to_terminal(X: DecSSet) -> DecMap:
    T = terminal(X.flavor)
    v = T.sset.gens[0][0]
    assign = {g: SimplexRef(v, tuple(range(k))) for g, k in X.sset.dim_of.items()}
    return DecMap(X, T, SimplicialMap(X.sset, T.sset, assign), check=False)


def empty_dec(flavor: str) -> DecSSet:
    return DecSSet(empty(), flavor)


def from_empty(X: DecSSet) -> DecMap:
    E = empty_dec(X.flavor)
    return DecMap(E, X, SimplicialMap(E.sset, X.sset, {}), check=False)


def maps_into(A: DecSSet, right: DecMap, over: DecMap | None = None, budget=None):
    """Enumerate decorated maps A -> X (optionally over a given map A -> S)."""
    if over is None:
        S = right.target
        if S.sset.counts() != (1,):
            raise ValueError("need a map to the base when the base is not a point")
        v = S.sset.gens[0][0]
        over = DecMap(A, S, SimplicialMap(A.sset, S.sset, {
            g: SimplexRef(v, tuple(range(k))) for g, k in A.sset.dim_of.items()}), check=False)
    left = from_empty(A)
    E = left.source
    top = DecMap(E, right.source, SimplicialMap(E.sset, right.source.sset, {}), check=False)
    p = LiftingProblem(left, right, top, over)
    for assign in iter_fillers(p, budget):
        yield DecMap(A, right.source, SimplicialMap(A.sset, right.source.sset, assign), check=False)


def extensions(left: DecMap, right: DecMap, top: DecMap, bottom: DecMap, budget=None):
    p = LiftingProblem(left, right, top, bottom)
    for assign in iter_fillers(p, budget):
        yield _as_decmap(p, assign)


# ---------------------------------------------------------------------------
# RLP reports


@dataclass
class RlpReport:
    instances: list = field(default_factory=list)
    nodes: int = 0
    backtracks: int = 0
    caps: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r["verdict"] == "pass" for r in self.instances)

    @property
    def budget_hit(self) -> bool:
        return any(r["verdict"] == "budget" for r in self.instances)

    def failures(self) -> list:
        return [r for r in self.instances if r["verdict"] != "pass"]

    def to_dict(self) -> dict:
        return {"format": "rlp-v1", "caps": self.caps, "passed": self.passed,
                "nodes": self.nodes, "backtracks": self.backtracks,
                "instances": self.instances}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def _assign_json(m: DecMap) -> dict:
    return {str(g): [r.gen, list(r.degeneracy)] for g, r in sorted(m.map.assign.items())}


def squares(gen: DecMap, right: DecMap, budget=None, top_filter=None, bottom_filter=None):
    """All commutative squares from the generator ``gen`` into ``right``."""
    A, B = gen.source, gen.target
    base_right = to_terminal(right.target)
    for top in all_maps(A, right, budget):
        if top_filter is not None and not top_filter(top):
            continue
        rt = top.compose(right)
        for bottom in extensions(gen, base_right, rt, to_terminal(B), budget):
            if bottom_filter is not None and not bottom_filter(bottom):
                continue
            yield top, bottom


def all_maps(A: DecSSet, right: DecMap, budget=None):
    """Every decorated map A -> X, enumerated through its image in the base."""
    S = right.target
    for base in maps_into(A, to_terminal(S), None, budget):
        yield from maps_into(A, right, base, budget)


def has_rlp_up_to(right: DecMap, families, caps: dict | None = None, budget: int = 10**6,
                  probes=None, top_filter=None, max_squares: int | None = None) -> RlpReport:
    """Test every generator instance of the given families (n <= caps['n_max']).

    The (E)/(ME) families only run over the finite probe list, so a positive
    report is evidence up to the caps, never a proof.
    """
    caps = dict(caps or {})
    n_max = caps.setdefault("n_max", 3)
    report = RlpReport(caps=caps)
    for fam in families:
        for spec in instances(fam, n_max, probes):
            gen = build(spec)
            if gen.source.flavor != right.source.flavor:
                raise DecorationError(f"family {fam} has flavor {gen.source.flavor}")
            report.instances.append(_check_generator(spec.name(), gen, right, budget, report,
                                                     top_filter, max_squares))
    return report


def _check_generator(name, gen, right, budget, report, top_filter=None, max_squares=None) -> dict:
    stats = SolverStats()
    count = 0
    entry = {"instance": name, "squares": 0, "verdict": "pass"}
    for top, bottom in squares(gen, right, budget, top_filter):
        count += 1
        res = solve_lifting(LiftingProblem(gen, right, top, bottom), budget, stats)
        if isinstance(res, NoFiller):
            entry["verdict"] = "fail"
            entry["witness"] = {"top": _assign_json(top), "bottom": _assign_json(bottom)}
            break
        if isinstance(res, BudgetExceeded):
            entry["verdict"] = "budget"
            break
        if max_squares is not None and count >= max_squares:
            entry["truncated"] = True
            break
    entry["squares"] = count
    report.nodes += stats.nodes
    report.backtracks += stats.backtracks
    return entry


# ---------------------------------------------------------------------------
# local (0,1)-Cartesian edges


def _lambda0_pair(n: int, flavor: str = SCALED):
    D = standard_simplex(n)
    full = set(range(n + 1))
    H = D.subcomplex([g for g in D.all_gens() if (set(D.labels[g]) | {0}) != full])[0]
    t = D.index[(0, 1, n)]
    thin_src = [t] if t in H.dim_of else []
    src = DecSSet(H, flavor, (), thin_src)
    tgt = DecSSet(D, flavor, (), [t])
    left = DecMap(src, tgt, SimplicialMap(H, D, {g: SimplexRef(g) for g in H.all_gens()}))
    return left, D


def is_local_01_cartesian(p: DecMap, e: int, cap: int = 3, equivalences=None,
                          budget: int = 10**6) -> dict:
    """Check the horn condition characterising locally (0,1)-Cartesian edges.

    ``p`` is a map of scaled sets X -> S and ``e`` an edge generator of X.
    Every square from (Lambda^n_0, {01n}) -> (Delta^n, {01n}) with 0->1
    sent to e and 1->n sent to an equivalence of S must have a filler; for
    n = 2 the filler must be thin.  Returns a verdict dict with a witness.
    """
    if p.source.flavor != SCALED:
        raise DecorationError("is_local_01_cartesian expects a map of scaled sets")
    X, S = p.source, p.target
    if equivalences is None:
        from .bicat import detect_equivalences
        equivalences = detect_equivalences(S)
    equivalences = set(equivalences)
    base_term = to_terminal(S)
    stats = SolverStats()
    out = {"edge": e, "cap": cap, "verdict": "pass", "squares": 0}
    for n in range(2, cap + 1):
        left, D = _lambda0_pair(n)
        A, B = left.source, left.target
        e01 = D.index[(0, 1)]
        # the edge 0->1 is pinned to e; enumerate the rest of the horn
        Esub = D.subcomplex([D.index[(0,)], D.index[(1,)], e01])[0]
        Edec = DecSSet(Esub, SCALED)
        pin = DecMap(Edec, A, SimplicialMap(Esub, A.sset, {g: SimplexRef(g) for g in Esub.all_gens()}),
                     check=False)
        xe = X.sset.faces[e]
        pin_top = DecMap(Edec, X, SimplicialMap(Esub, X.sset, {
            D.index[(0,)]: xe[1], D.index[(1,)]: xe[0], e01: SimplexRef(e)}), check=False)
        for top in _pinned_maps(pin, pin_top, X):
            rt = top.compose(p)
            for bottom in extensions(left, base_term, rt, to_terminal(B), budget):
                edge = bottom.map.assign[D.index[(1, n)]]
                if edge.degeneracy == () and edge.gen not in equivalences:
                    continue
                out["squares"] += 1
                res = solve_lifting(LiftingProblem(left, p, top, bottom), budget, stats)
                if isinstance(res, NoFiller):
                    out["verdict"] = "fail"
                    out["witness"] = {"n": n, "top": _assign_json(top), "bottom": _assign_json(bottom)}
                    out["nodes"] = stats.nodes
                    return out
                if isinstance(res, BudgetExceeded):
                    out["verdict"] = "budget"
                    return out
    out["nodes"] = stats.nodes
    return out


def _pinned_maps(pin: DecMap, pin_top: DecMap, X: DecSSet):
    """Maps A -> X extending a fixed map on a subobject (A = pin.target)."""
    A = pin.target
    tx = to_terminal(X)
    yield from extensions(pin, tx, pin_top, to_terminal(A))


# ---------------------------------------------------------------------------
# pushout-products


def pushout_product(f: DecMap, g: DecMap) -> DecMap:
    """The map  X x B  u_{X x A}  Y x A  ->  Y x B  for f : X -> Y and g : A -> B."""
    if f.source.flavor != g.source.flavor:
        raise DecorationError("flavor mismatch")
    X, Y, A, B = f.source, f.target, g.source, g.target
    XA, XB, YA, YB = (dec_product(X, A), dec_product(X, B), dec_product(Y, A), dec_product(Y, B))
    idA = SimplicialMap(A.sset, A.sset, {a: SimplexRef(a) for a in A.sset.all_gens()})
    idB = SimplicialMap(B.sset, B.sset, {b: SimplexRef(b) for b in B.sset.all_gens()})
    idX = SimplicialMap(X.sset, X.sset, {x: SimplexRef(x) for x in X.sset.all_gens()})
    xa_xb = product_map(XA.sset, XB.sset, idX, g.map)
    xa_ya = product_map(XA.sset, YA.sset, f.map, idA)
    res = colimit([XA.sset, XB.sset, YA.sset], [(0, 1, xa_xb), (0, 2, xa_ya)])
    P = res.obj
    dec = image_decorations(P, X.flavor, [(XB, res.legs[1]), (YA, res.legs[2])])
    to_YB = {
        1: product_map(XB.sset, YB.sset, f.map, idB),
        2: product_map(YA.sset, YB.sset, SimplicialMap(Y.sset, Y.sset, {y: SimplexRef(y) for y in Y.sset.all_gens()}), g.map),
        0: product_map(XA.sset, YB.sset, f.map, g.map),
    }
    assign = {}
    for c, (o, gen) in res.reps.items():
        assign[c] = to_YB[o].assign[gen]
    return DecMap(dec, YB, SimplicialMap(P, YB.sset, assign))


# ---------------------------------------------------------------------------
# problem files


def problem_to_dict(p: LiftingProblem) -> dict:
    return {
        "format": "lift-v1",
        "A": p.left.source.to_dict(), "B": p.left.target.to_dict(),
        "X": p.right.source.to_dict(), "S": p.right.target.to_dict(),
        "left": p.left.map.to_dict(), "right": p.right.map.to_dict(),
        "top": p.top.map.to_dict(), "bottom": p.bottom.map.to_dict(),
    }


def problem_from_dict(d: dict) -> LiftingProblem:
    if d.get("format") != "lift-v1":
        raise ValueError("not a lift-v1 problem")
    A, B, X, S = (DecSSet.from_dict(d[k]) for k in ("A", "B", "X", "S"))

    def mk(src, tgt, key):
        return DecMap(src, tgt, SimplicialMap(src.sset, tgt.sset, SimplicialMap.assign_from_dict(d[key])))

    p = LiftingProblem(mk(A, B, "left"), mk(X, S, "right"), mk(A, X, "top"), mk(B, S, "bottom"))
    p.validate()
    return p


__all__ = [
    "LiftingProblem", "Filler", "NoFiller", "BudgetExceeded", "SolverStats", "RlpReport",
    "solve_lifting", "iter_fillers", "all_fillers", "verify_filler", "has_rlp_up_to",
    "is_local_01_cartesian", "pushout_product", "terminal", "to_terminal", "from_empty",
    "empty_dec", "maps_into", "extensions", "squares", "problem_to_dict", "problem_from_dict",
    "GeneratorSpec", "MARKED_BISCALED",
]
