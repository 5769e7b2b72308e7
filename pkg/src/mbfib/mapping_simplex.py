"""Functors out of the rigidified simplex, the mapping simplex and its gluing identities.

An :class:`OnFunctor` stores one marked-scaled value per object of [n] and,
for every i <= j, the action as a full simplicial map

    nerve(O(i, j)) x F(i) -> F(j).

Vertices of the hom nerves are bitmask subsets; the nerve of O(i, j) is
built once per functor and shared by every product that mentions it.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .decorations import (MARKED_BISCALED, MARKED_SCALED, DecMap, DecSSet,
                          image_decorations, ms_as_mb)
from .lifting import maps_into, to_terminal
from .posets import mmax, o_nerve, o_upslash
from .sset import (Product, SimplexRef, SimplicialMap, SimplicialSet, chain_ref, colimit, empty, horn,
                   is_isomorphic, nerve_vertices, pushout, standard_simplex)
from .tensor import lax_cylinder


class FunctorError(ValueError):
    pass


def _const(X: SimplicialSet, label, m: int) -> SimplexRef:
    """The m-dimensional degeneracy of the vertex with the given label."""
    return SimplexRef(X.index[(label,)], tuple(range(m)))


def union_ref(A: SimplicialSet, B: SimplicialSet, C: SimplicialSet, a: SimplexRef, b: SimplexRef) -> SimplexRef:
    """Pointwise union of two nerve simplices of equal dimension, as a simplex of C."""
    return chain_ref(C, [s | t for s, t in zip(nerve_vertices(A, a), nerve_vertices(B, b))])


class OnFunctor:
    """A functor from O^n to marked-scaled simplicial sets."""

    def __init__(self, n: int, values: list, action: dict, name: str = "F"):
        if len(values) != n + 1:
            raise FunctorError(f"need {n + 1} values, got {len(values)}")
        for V in values:
            if V.flavor != MARKED_SCALED:
                raise FunctorError("values must be marked-scaled")
        self.n = n
        self.values = list(values)
        self.action = dict(action)
        self.name = name
        for i in range(n + 1):
            for j in range(i, n + 1):
                if (i, j) not in self.action:
                    raise FunctorError(f"missing action ({i},{j})")
                f = self.action[(i, j)]
                P = f.source
                if not isinstance(P, Product) or P.right is not values[i].sset or f.target is not values[j].sset:
                    raise FunctorError(f"action ({i},{j}) has the wrong shape")
        self.homs = {ij: f.source.left for ij, f in self.action.items()}

    # -- checks --------------------------------------------------------------

    def hom_dec(self, i: int, j: int) -> DecSSet:
        """O(i, j) with every triangle scaled and only degenerate edges marked."""
        H = self.homs[(i, j)]
        return DecSSet(H, MARKED_SCALED, (), H.gens_of(2))

    def problems(self) -> list:
        out = []
        n = self.n
        for (i, j), f in sorted(self.action.items()):
            if not f.is_valid():
                out.append(f"action ({i},{j}) is not simplicial")
                continue
            src = _product_dec(self.hom_dec(i, j), self.values[i], f.source)
            fails = DecMap(src, self.values[j], f, check=False).decoration_failures()
            if fails:
                out.append(f"action ({i},{j}) loses decorations: {fails[:3]}")
        if out:
            return out
        for i in range(n + 1):
            f, P, H = self.action[(i, i)], self.action[(i, i)].source, self.homs[(i, i)]
            for g, k in self.values[i].sset.dim_of.items():
                if f(P.pair(_const(H, 1 << i, k), SimplexRef(g))) != SimplexRef(g):
                    out.append(f"unit fails at object {i}, generator {g}")
                    break
        for i in range(n + 1):
            for j in range(i, n + 1):
                for k in range(j, n + 1):
                    out.extend(self._assoc_problems(i, j, k))
        return out

    def _assoc_problems(self, i: int, j: int, k: int) -> list:
        fij, fjk, fik = self.action[(i, j)], self.action[(j, k)], self.action[(i, k)]
        Hij, Hjk, Hik = self.homs[(i, j)], self.homs[(j, k)], self.homs[(i, k)]
        triple = Product(Hjk, fij.source)
        for g, (t, rest) in triple.labels.items():
            s, x = fij.source.split(rest)
            lhs = fjk(fjk.source.pair(t, fij(rest)))
            rhs = fik(fik.source.pair(union_ref(Hij, Hjk, Hik, s, t), x))
            if lhs != rhs:
                return [f"associativity fails for ({i},{j},{k}) at {t}, {s}, {x}"]
        return []

    def validate(self):
        bad = self.problems()
        if bad:
            raise FunctorError("; ".join(bad))
        return self

    def is_valid(self) -> bool:
        return not self.problems()

    def cells(self) -> int:
        return max((sum(V.sset.counts()) for V in self.values), default=0)

    # -- restriction ---------------------------------------------------------

    def restrict(self) -> "OnFunctor":
        """The restriction to the objects 0..n-1."""
        if self.n == 0:
            raise FunctorError("nothing to restrict to")
        act = {ij: f for ij, f in self.action.items() if ij[1] < self.n}
        return OnFunctor(self.n - 1, self.values[:-1], act, name=self.name + "|")

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {"format": "onfun-v1", "name": self.name, "n": self.n,
                "values": [V.to_dict() for V in self.values],
                "actions": {f"{i},{j}": f.to_dict() for (i, j), f in sorted(self.action.items())}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "OnFunctor":
        if d.get("format") != "onfun-v1":
            raise FunctorError("not an onfun-v1 document")
        n = d["n"]
        values = [DecSSet.from_dict(v) for v in d["values"]]
        action = {}
        for key, a in d["actions"].items():
            i, j = map(int, key.split(","))
            P = Product(o_nerve(n, i, j), values[i].sset)
            action[(i, j)] = SimplicialMap(P, values[j].sset, SimplicialMap.assign_from_dict(a))
        return cls(n, values, action, d.get("name", "F"))

    @classmethod
    def from_json(cls, s: str) -> "OnFunctor":
        return cls.from_dict(json.loads(s))


def _product_dec(A: DecSSet, B: DecSSet, P: Product) -> DecSSet:
    marked = [e for e in P.gens_of(1) if A.is_marked(P.labels[e][0]) and B.is_marked(P.labels[e][1])]
    thin = [t for t in P.gens_of(2) if A.is_thin(P.labels[t][0]) and B.is_thin(P.labels[t][1])]
    return DecSSet(P, A.flavor, marked, thin)


def on_functor(n: int, values: list, act, name: str = "F") -> OnFunctor:
    """Build a functor from ``act(i, j, hom_ref, x_ref) -> ref in values[j]``."""
    action = {}
    for i in range(n + 1):
        for j in range(i, n + 1):
            P = Product(o_nerve(n, i, j), values[i].sset)
            assign = {g: act(i, j, s, x) for g, (s, x) in P.labels.items()}
            action[(i, j)] = SimplicialMap(P, values[j].sset, assign)
    return OnFunctor(n, values, action, name)


def _empty_ms() -> DecSSet:
    return DecSSet(empty(), MARKED_SCALED)


def corepresentable(n: int, j: int, K: DecSSet | None = None) -> OnFunctor:
    """i -> K x nerve O(j, i) (empty below j), acting by union on the second factor."""
    if not 0 <= j <= n:
        raise FunctorError("need 0 <= j <= n")
    values, noms = [], []
    for i in range(n + 1):
        if i < j:
            values.append(_empty_ms())
            noms.append(None)
            continue
        H = o_nerve(n, j, i)
        Hd = DecSSet(H, MARKED_SCALED, (), H.gens_of(2))
        noms.append(H)
        if K is None:
            values.append(Hd)
        else:
            P = Product(K.sset, H)
            values.append(_product_dec(K, Hd, P))

    def act(a, b, s, x):
        if K is None:
            return union_ref(noms[a], o_nerve_cache(n, a, b), noms[b], x, s)
        kx, hx = values[a].sset.split(x)
        return values[b].sset.pair(kx, union_ref(noms[a], o_nerve_cache(n, a, b), noms[b], hx, s))

    cache = {}

    def o_nerve_cache(n_, a, b):
        if (a, b) not in cache:
            cache[(a, b)] = o_nerve(n_, a, b)
        return cache[(a, b)]

    action = {}
    for a in range(n + 1):
        for b in range(a, n + 1):
            H = o_nerve_cache(n, a, b)
            P = Product(H, values[a].sset)
            action[(a, b)] = SimplicialMap(P, values[b].sset, {g: act(a, b, s, x) for g, (s, x) in P.labels.items()})
    name = f"corep({n},{j})" if K is None else f"K x corep({n},{j})"
    return OnFunctor(n, values, action, name)


def chain_functor(maps: list, values: list | None = None, name: str = "chain") -> OnFunctor:
    """The functor with constant actions given by a composable chain of decorated maps."""
    if values is None:
        values = [maps[0].source] + [f.target for f in maps] if maps else []
    n = len(values) - 1
    comp = {}
    for i in range(n + 1):
        comp[(i, i)] = None
        for j in range(i + 1, n + 1):
            prev = comp[(i, j - 1)]
            comp[(i, j)] = maps[j - 1].map if prev is None else prev.compose(maps[j - 1].map)

    def act(i, j, s, x):
        f = comp[(i, j)]
        return x if f is None else f(x)

    return on_functor(n, values, act, name)


def coproduct_functor(F: OnFunctor, G: OnFunctor) -> OnFunctor:
    """The objectwise disjoint union."""
    if F.n != G.n:
        raise FunctorError("functors over different bases")
    n = F.n
    values, legs, reps = [], [], []
    for i in range(n + 1):
        res = colimit([F.values[i].sset, G.values[i].sset], [])
        dec = image_decorations(res.obj, MARKED_SCALED, [(F.values[i], res.legs[0]), (G.values[i], res.legs[1])])
        values.append(dec)
        legs.append(res.legs)
        reps.append(res.reps)
    parts = (F, G)

    def act(i, j, s, x):
        side, g = reps[i][x.gen]
        H = parts[side]
        f = H.action[(i, j)]
        img = f(f.source.pair(s, SimplexRef(g, x.degeneracy)))
        return legs[j][side](img)

    action = {}
    for i in range(n + 1):
        for j in range(i, n + 1):
            P = Product(F.homs[(i, j)], values[i].sset)
            action[(i, j)] = SimplicialMap(P, values[j].sset, {g: act(i, j, s, x) for g, (s, x) in P.labels.items()})
    return OnFunctor(n, values, action, f"{F.name}+{G.name}")


# ---------------------------------------------------------------------------
# the mapping simplex


@dataclass
class MappingSimplex:
    """The coequalizer together with everything needed to map in and out of it."""
    functor: OnFunctor
    dec: DecSSet
    proj: SimplicialMap
    base: SimplicialSet
    pieces: list          # Product F(i) x O_i
    piece_decs: list
    uppers: list          # the decorated O_i
    legs: list
    reps: dict
    extra: dict = field(default_factory=dict)

    @property
    def sset(self) -> SimplicialSet:
        return self.dec.sset

    def vertex(self, j: int) -> int:
        return self.base.index[(j,)]

    def include_value(self, j: int) -> SimplicialMap:
        """F(j) -> M(F), y -> class of (y, {j})."""
        Q, U = self.pieces[j], self.uppers[j].sset
        V = self.functor.values[j].sset
        assign = {g: self.legs[j](Q.pair(SimplexRef(g), _const(U, 1 << j, k))) for g, k in V.dim_of.items()}
        return SimplicialMap(V, self.sset, assign)


def mapping_simplex(F: OnFunctor, check: bool = True) -> MappingSimplex:
    """The coequalizer of  F(i) x O(i,j) x O_j  ==>  F(i) x O_i  with its map to Delta^n."""
    if check:
        F.validate()
    n = F.n
    D = standard_simplex(n)
    uppers = [o_upslash(n, i)[0] for i in range(n + 1)]
    mb_vals = [ms_as_mb(V) for V in F.values]
    Qs = [Product(F.values[i].sset, uppers[i].sset) for i in range(n + 1)]
    objects = list(Qs)
    maps = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            f = F.action[(i, j)]
            H = F.homs[(i, j)]
            P = Product(f.source, uppers[j].sset)
            to_j, to_i = {}, {}
            for g, (a, t) in P.labels.items():
                s, x = f.source.split(a)
                to_j[g] = Qs[j].pair(f(a), t)
                to_i[g] = Qs[i].pair(x, union_ref(H, uppers[j].sset, uppers[i].sset, s, t))
            objects.append(P)
            k = len(objects) - 1
            maps.append((k, j, SimplicialMap(P, Qs[j], to_j)))
            maps.append((k, i, SimplicialMap(P, Qs[i], to_i)))
    res = colimit(objects, maps)
    piece_decs = [_mb_product(mb_vals[i], uppers[i], Qs[i]) for i in range(n + 1)]
    dec = image_decorations(res.obj, MARKED_BISCALED, [(piece_decs[i], res.legs[i]) for i in range(n + 1)])
    proj = {}
    for g, (o, h) in res.reps.items():
        U = uppers[o].sset
        proj[g] = chain_ref(D, [mmax(S) for S in nerve_vertices(U, Qs[o].pr2(SimplexRef(h)))])
    return MappingSimplex(F, dec, SimplicialMap(res.obj, D, proj), D, Qs, piece_decs, uppers,
                          res.legs[:n + 1], res.reps)


def _mb_product(A: DecSSet, B: DecSSet, P: Product) -> DecSSet:
    marked = [e for e in P.gens_of(1) if A.is_marked(P.labels[e][0]) and B.is_marked(P.labels[e][1])]
    thin, lean = [], []
    for t in P.gens_of(2):
        a, b = P.labels[t]
        if A.is_thin(a) and B.is_thin(b):
            thin.append(t)
        if A.is_lean(a) and B.is_lean(b):
            lean.append(t)
    return DecSSet(P, MARKED_BISCALED, marked, thin, lean)


def fiber_gens(M: MappingSimplex, j: int) -> set:
    v = M.vertex(j)
    return {g for g, r in M.proj.assign.items() if r.gen == v}


def fiber_iso(M: MappingSimplex, j: int) -> tuple:
    """Check that F(j) -> M(F) is an isomorphism onto the fiber over j.

    Returns (ok, reason).  Decorations must match exactly, with thin and
    lean of F(j) both read as its scaling.
    """
    inc = M.include_value(j)
    V = ms_as_mb(M.functor.values[j])
    fib = fiber_gens(M, j)
    imgs = {}
    for g, r in inc.assign.items():
        if r.degeneracy:
            return False, f"generator {g} of F({j}) lands on a degenerate simplex"
        if r.gen in imgs.values():
            return False, f"two generators of F({j}) collide"
        imgs[g] = r.gen
    if set(imgs.values()) != fib:
        return False, f"image misses {len(fib - set(imgs.values()))} fiber generators"
    X = M.dec
    for g, h in imgs.items():
        if (g in V.marked) != (h in X.marked):
            return False, f"marking differs at {g}"
        if (g in V.thin) != (h in X.thin) or (g in V.lean) != (h in X.lean):
            return False, f"scaling differs at {g}"
    return True, "ok"


# ---------------------------------------------------------------------------
# the lax comparison and the gluing square


def xi_map(F: OnFunctor, M: MappingSimplex | None = None, Mbar: MappingSimplex | None = None):
    """Delta^1 x M(F|) -> M(F), induced by S -> S and S -> S u {n}.

    Returns (product, map, M, Mbar).
    """
    if F.n == 0:
        raise FunctorError("needs n >= 1")
    n = F.n
    M = M or mapping_simplex(F, check=False)
    Mbar = Mbar or mapping_simplex(F.restrict(), check=False)
    I = standard_simplex(1)
    P = Product(I, Mbar.sset)
    assign = {}
    for g, (e, m) in P.labels.items():
        assign[g] = _xi(M, Mbar, I, e, m, n)
    return P, SimplicialMap(P, M.sset, assign), M, Mbar


def _xi(M, Mbar, I, e, m, n):
    o, h = Mbar.reps[m.gen]
    q = SimplexRef(h, m.degeneracy)
    x, s = Mbar.pieces[o].split(q)
    seq = [S | ((1 << n) if eps else 0) for S, eps in zip(nerve_vertices(Mbar.uppers[o].sset, s), nerve_vertices(I, e))]
    return M.legs[o](M.pieces[o].pair(x, chain_ref(M.uppers[o].sset, seq)))


def xi_upper(n: int, i: int) -> SimplicialMap:
    """The comparison Delta^1 x O^{n-1}_i -> O^n_i on the posets themselves."""
    A = o_upslash(n - 1, i)[0].sset
    B = o_upslash(n, i)[0].sset
    I = standard_simplex(1)
    P = Product(I, A)
    assign = {g: chain_ref(B, [S | ((1 << n) if eps else 0) for S, eps in zip(nerve_vertices(A, s), nerve_vertices(I, e))])
              for g, (e, s) in P.labels.items()}
    return SimplicialMap(P, B, assign)


def pulled_back(P: SimplicialSet, f: SimplicialMap, X: DecSSet) -> DecSSet:
    """Decorate P with every cell whose image under f is decorated in X."""
    marked = [e for e in P.gens_of(1) if X.is_marked(f.assign[e])]
    thin = [t for t in P.gens_of(2) if X.is_thin(f.assign[t])]
    lean = [t for t in P.gens_of(2) if X.is_lean(f.assign[t])]
    return DecSSet(P, MARKED_BISCALED, marked, thin, lean)


@dataclass
class GluingReport:
    ok: bool
    reason: str
    counts: tuple = ()


def gluing_square(F: OnFunctor, M: MappingSimplex | None = None, Mbar: MappingSimplex | None = None) -> GluingReport:
    """Check that M(F) is the pushout of  F(n) <- {1} x M(F|) -> Delta^1 (x) M(F|)."""
    n = F.n
    P, xi, M, Mbar = xi_map(F, M, Mbar)
    cyl = pulled_back(P, xi, M.dec)
    I = standard_simplex(1)
    B = Mbar.sset
    Fn = F.values[n]
    # {1} x M(F|) modelled by M(F|) itself
    to_cyl = SimplicialMap(B, P, {g: P.pair(_const(I, 1, k), SimplexRef(g)) for g, k in B.dim_of.items()})
    to_fn = {}
    for g, k in B.dim_of.items():
        o, h = Mbar.reps[g]
        x, s = Mbar.pieces[o].split(SimplexRef(h))
        f = F.action[(o, n)]
        seq = [S | (1 << n) for S in nerve_vertices(Mbar.uppers[o].sset, s)]
        to_fn[g] = f(f.source.pair(chain_ref(F.homs[(o, n)], seq), x))
    to_fn = SimplicialMap(B, Fn.sset, to_fn)
    res = pushout(to_fn, to_cyl)
    G = res.obj
    glued = image_decorations(G, MARKED_BISCALED, [(ms_as_mb(Fn), res.legs[0]), (cyl, res.legs[1])])
    inc_n = M.include_value(n)
    assign = {}
    for g, (o, h) in res.reps.items():
        if o == 0:
            assign[g] = xi(to_cyl.assign[h])
        elif o == 1:
            assign[g] = inc_n.assign[h]
        else:
            assign[g] = xi.assign[h]
    cmp = DecMap(glued, M.dec, SimplicialMap(G, M.sset, assign), check=False)
    if not cmp.map.is_valid():
        return GluingReport(False, "comparison is not simplicial")
    if not cmp.map.is_iso():
        return GluingReport(False, f"comparison is not bijective: {G.counts()} vs {M.sset.counts()}",
                            (G.counts(), M.sset.counts()))
    if not cmp.is_iso():
        return GluingReport(False, "decorations differ", (G.counts(), M.sset.counts()))
    return GluingReport(True, "ok", G.counts())


def lax_comparison(F: OnFunctor) -> dict:
    """Compare the decorations pulled back along the comparison with the lax cylinder rule.

    Scalings always agree; the pulled-back marking can be larger, since an
    edge whose image collapses or lands on a marked edge is marked there.
    """
    P, xi, M, Mbar = xi_map(F)
    cyl = pulled_back(P, xi, M.dec)
    lax = lax_cylinder(Mbar.dec, Mbar.proj, P)[0]
    return {"thin": lax.thin == cyl.thin, "lean": lax.lean == cyl.lean,
            "marked_subset": lax.marked <= cyl.marked, "marked_equal": lax.marked == cyl.marked,
            "extra_marked": len(cyl.marked - lax.marked)}


def dec_isomorphic(X: DecSSet, Y: DecSSet):
    """Search for a decoration-preserving-and-reflecting isomorphism."""
    def extra(gx, gy):
        return ((gx in X.marked) == (gy in Y.marked) and (gx in X.thin) == (gy in Y.thin)
                and (gx in X.lean) == (gy in Y.lean))
    return is_isomorphic(X.sset, Y.sset, extra)


def is_upper_set(M: MappingSimplex) -> bool:
    """Whether M(F) is exactly O^n_0 (for the corepresentable at 0)."""
    U, proj = o_upslash(M.functor.n, 0)
    if dec_isomorphic(M.dec, U) is None:
        return False
    return True


# ---------------------------------------------------------------------------
# seeded corpus


def catalog() -> dict:
    """Small marked-scaled objects used to populate random functors."""
    D0, D1 = standard_simplex(0), standard_simplex(1)
    e = D1.gens_of(1)
    L = horn(2, 1)
    two = colimit([D0, standard_simplex(0)], []).obj
    return {
        "pt": DecSSet(D0, MARKED_SCALED),
        "D1": DecSSet(D1, MARKED_SCALED),
        "D1#": DecSSet(D1, MARKED_SCALED, e),
        "2pt": DecSSet(two, MARKED_SCALED),
        "L21": DecSSet(L, MARKED_SCALED),
        "L21#": DecSSet(L, MARKED_SCALED, L.gens_of(1)[:1]),
        "empty": _empty_ms(),
    }


def random_functor(rng: random.Random, n_max: int = 3, max_cells: int = 6) -> OnFunctor:
    cat = catalog()
    names = sorted(cat)
    while True:
        kind = rng.choice(["chain", "chain", "corep", "sum"])
        n = rng.randint(0, n_max)
        if kind == "chain":
            F = _random_chain(rng, cat, names, n)
        elif kind == "corep":
            j = rng.randint(max(0, n - 2), n)
            K = cat[rng.choice(["pt", "D1", "D1#", "2pt"])]
            F = corepresentable(n, j, K)
        else:
            F = coproduct_functor(_random_chain(rng, cat, names, n), _random_chain(rng, cat, names, n))
        if F is not None and F.cells() <= max_cells:
            return F


def _random_chain(rng, cat, names, n):
    values = [cat[rng.choice(names)]]
    maps = []
    for _ in range(n):
        for _attempt in range(20):
            tgt = cat[rng.choice(names)]
            options = list(maps_into(values[-1], to_terminal(tgt)))
            if options:
                maps.append(rng.choice(options))
                values.append(tgt)
                break
        else:
            return None
    return chain_functor(maps, values)


def corpus(count: int = 50, seed: int = 20240917, n_max: int = 3, max_cells: int = 6) -> list:
    rng = random.Random(seed)
    return [random_functor(rng, n_max, max_cells) for _ in range(count)]


def check_functor(F: OnFunctor) -> dict:
    """Fiber identities for every object and the gluing square (n >= 1)."""
    M = mapping_simplex(F)
    out = {"name": F.name, "n": F.n, "counts": list(M.sset.counts()), "fibers": [], "gluing": None}
    for j in range(F.n + 1):
        ok, why = fiber_iso(M, j)
        out["fibers"].append({"j": j, "ok": ok, "reason": why})
    if F.n >= 1:
        rep = gluing_square(F, M)
        out["gluing"] = {"ok": rep.ok, "reason": rep.reason}
    out["ok"] = all(f["ok"] for f in out["fibers"]) and (out["gluing"] is None or out["gluing"]["ok"])
    return out


__all__ = [
    "FunctorError", "OnFunctor", "on_functor", "corepresentable", "chain_functor", "coproduct_functor",
    "MappingSimplex", "mapping_simplex", "fiber_iso", "fiber_gens", "xi_map", "xi_upper", "pulled_back",
    "gluing_square", "GluingReport", "lax_comparison", "dec_isomorphic", "is_upper_set", "catalog",
    "random_functor", "corpus", "check_functor", "union_ref",
]
