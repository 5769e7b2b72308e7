"""Gray tensor products, lax cylinders and dimension-capped function complexes."""

from __future__ import annotations

from dataclasses import dataclass, field

from .decorations import (MARKED_BISCALED, MARKED_SCALED, SCALED, DecMap, DecSSet, DecorationError,
                          dec_product)
from .lifting import maps_into, to_terminal
from .sset import (Product, SimplexRef, SimplicialMap, SimplicialSet, chain_ref, doubled_indices,
                   nerve_vertices, sset_from_keys, standard_simplex, surjection)


# ---------------------------------------------------------------------------
# Gray tensor


def _marked_in(X: DecSSet, ref: SimplexRef) -> bool:
    # scaled inputs: only degenerate edges count as marked
    return X.is_marked(ref) if X.flavor != SCALED else bool(ref.degeneracy)


def gray(X: DecSSet, Y: DecSSet, P: Product | None = None) -> DecSSet:
    """X (x) Y: a triangle is thin iff thin in both factors and its X-part 1->2
    or its Y-part 0->1 is marked."""
    P = P or Product(X.sset, Y.sset)
    thin = []
    for t in P.gens_of(2):
        x, y = P.labels[t]
        if not (X.is_thin(x) and Y.is_thin(y)):
            continue
        if _marked_in(X, X.sset.edge(x, 1, 2)) or _marked_in(Y, Y.sset.edge(y, 0, 1)):
            thin.append(t)
    return DecSSet(P, SCALED, (), thin)


def gray_pi(n: int) -> DecSSet:
    """Delta^1 (x) Delta^n with every triangle of {0} x Delta^n scaled as well."""
    I, D = standard_simplex(1), standard_simplex(n)
    G = gray(DecSSet(I, MARKED_SCALED), DecSSet(D, MARKED_SCALED))
    P = G.sset
    v0 = I.index[(0,)]
    extra = [t for t in P.gens_of(2) if P.labels[t][0] == SimplexRef(v0, (0, 1))]
    return G.with_(thin=G.thin | set(extra))


# ---------------------------------------------------------------------------
# lax cylinder


def lax_cylinder(A: DecSSet, p: SimplicialMap, P: Product | None = None):
    """Delta^1 (x)-bar A over Delta^{n+1}, for A over Delta^n.

    The base map sends (0, i) to i and (1, i) to n + 1.  Returns
    (decorated cylinder, base map, inclusion of {0} x A).
    """
    if A.flavor != MARKED_BISCALED:
        raise DecorationError("the lax cylinder expects a biscaled input")
    P = P or Product(standard_simplex(1), A.sset)
    I = P.left
    if I.counts() != (2, 1):
        raise DecorationError("cylinder product must have Delta^1 on the left")
    n = p.target.dims
    D = standard_simplex(n + 1)
    base = {}
    for g, (e, a) in P.labels.items():
        eps = nerve_vertices(I, e)
        img = nerve_vertices(p.target, p(a))
        base[g] = chain_ref(D, [i if not t else n + 1 for t, i in zip(eps, img)])
    zero = I.index[(0,)]
    marked = []
    for g in P.gens_of(1):
        e, a = P.labels[g]
        if a.degeneracy or (A.is_marked(a) and e == SimplexRef(zero, (0,))):
            marked.append(g)
    lean = [t for t in P.gens_of(2) if A.is_lean(P.labels[t][1])]
    thin = [t for t in lean if base[t].degeneracy]
    dec = DecSSet(P, MARKED_BISCALED, marked, thin, lean)
    inc = SimplicialMap(A.sset, P, {g: P.pair(SimplexRef(zero, tuple(range(k))), SimplexRef(g))
                                    for g, k in A.sset.dim_of.items()})
    return dec, SimplicialMap(P, D, base), DecMap(A, dec, inc, check=False)


# ---------------------------------------------------------------------------
# function complexes


def simplex_variant(m: int, flavor: str, variant: str | None, D: SimplicialSet | None = None) -> DecSSet:
    """Delta^m with the decoration used to test a simplex of a function complex.

    ``variant`` is None (minimal), 'marked' (m = 1), 'thin' or 'lean' (m = 2).
    """
    D = D or standard_simplex(m)
    top = D.gens_of(m)
    if variant is None:
        return DecSSet(D, flavor)
    if variant == "marked":
        return DecSSet(D, flavor, top, (), () if flavor == MARKED_BISCALED else None)
    if variant == "thin":
        return DecSSet(D, flavor, (), top, top if flavor == MARKED_BISCALED else None)
    if variant == "lean":
        if flavor != MARKED_BISCALED:
            raise DecorationError("lean variants only exist for biscaled sets")
        return DecSSet(D, flavor, (), (), top)
    raise ValueError(f"unknown variant {variant!r}")


def _variants(flavor: str) -> dict:
    if flavor == SCALED:
        return {"thin": 2}
    if flavor == MARKED_SCALED:
        return {"marked": 1, "thin": 2}
    return {"marked": 1, "thin": 2, "lean": 2}


@dataclass
class HomComplex:
    """A capped simplicial set of maps, with the shapes used to build it."""
    dec: DecSSet
    cap: int
    shapes: dict                 # m -> Product
    gens: dict                   # m -> sorted generator list of shapes[m]
    target: DecSSet
    meta: dict = field(default_factory=dict)

    @property
    def sset(self) -> SimplicialSet:
        return self.dec.sset

    def as_map(self, g: int) -> SimplicialMap:
        """The map shape -> target represented by generator g."""
        m, vals = self.sset.labels[g]
        return SimplicialMap(self.shapes[m], self.target.sset, dict(zip(self.gens[m], vals)))


class _Shapes:
    """Products Delta^m x X (or X x Delta^m) with the structure maps between them."""

    def __init__(self, X: SimplicialSet, cap: int, side: str):
        self.side = side
        self.simplices = [standard_simplex(m) for m in range(cap + 1)]
        self.P = {}
        for m in range(cap + 1):
            D = self.simplices[m]
            self.P[m] = Product(D, X) if side == "left" else Product(X, D)
        self.gens = {m: sorted(P.all_gens()) for m, P in self.P.items()}
        self.X = X

    def _along(self, src: int, tgt: int, theta: tuple) -> SimplicialMap:
        A, B = self.simplices[src], self.simplices[tgt]
        d = SimplicialMap(A, B, {g: chain_ref(B, [theta[v] for v in A.labels[g]]) for g in A.all_gens()})
        Ps, Pt = self.P[src], self.P[tgt]
        out = {}
        for g, (a, b) in Ps.labels.items():
            out[g] = Pt.pair(d(a), b) if self.side == "left" else Pt.pair(a, d(b))
        return SimplicialMap(Ps, Pt, out)

    def coface(self, m: int, i: int) -> SimplicialMap:
        return self._cache(("d", m, i), lambda: self._along(m - 1, m, tuple(t if t < i else t + 1 for t in range(m))))

    def codegeneracy(self, m: int, i: int) -> SimplicialMap:
        return self._cache(("s", m, i), lambda: self._along(m + 1, m, tuple(t if t <= i else t - 1 for t in range(m + 2))))

    def _cache(self, key, make):
        store = self.__dict__.setdefault("_store", {})
        if key not in store:
            store[key] = make()
        return store[key]

    def simplex_part(self, ref: SimplexRef, m: int) -> SimplexRef:
        P = self.P[m]
        return P.pr1(ref) if self.side == "left" else P.pr2(ref)


def _pull(shapes: _Shapes, Y: SimplicialSet, key, along: SimplicialMap, m_new: int):
    m, vals = key
    F = SimplicialMap(shapes.P[m], Y, dict(zip(shapes.gens[m], vals)))
    G = along.compose(F)
    return (m_new, tuple(G.assign[g] for g in shapes.gens[m_new]))


def _capped_complex(shapes: _Shapes, decorate, target: DecMap, over, cap: int, out_flavor: str,
                    budget=None) -> HomComplex:
    """Shared engine: enumerate decorated maps from each shape into the target.

    ``decorate(m, variant)`` returns the decorated shape; ``over(m)`` returns
    the map from the shape to the base of ``target`` (or None for all maps).
    """
    Y = target.source.sset

    def face(key, i):
        m = key[0]
        return _pull(shapes, Y, key, shapes.coface(m, i), m - 1)

    def degen(key, i):
        m = key[0]
        return _pull(shapes, Y, key, shapes.codegeneracy(m, i), m + 1)

    memo = {}

    def split(key):
        if key in memo:
            return memo[key]
        m = key[0]
        out = (key, ())
        for i in range(m):
            y = face(key, i)
            if degen(y, i) == key:
                nd, dbl = split(y)
                eta_y = surjection(dbl, m - 1)
                eta = tuple(eta_y[t if t <= i else t - 1] for t in range(m + 1))
                out = (nd, doubled_indices(eta))
                break
        memo[key] = out
        return out

    keys = []
    for m in range(cap + 1):
        base = decorate(m, None)
        for f in maps_into(base, target, over(m, base) if over else None, budget):
            key = (m, tuple(f.map.assign[g] for g in shapes.gens[m]))
            nd, dbl = split(key)
            if dbl:
                continue
            keys.append(key)
    X = sset_from_keys(keys, face, split=split, dim=lambda k: k[0])
    marked, thin, lean = [], [], []
    for variant, m in _variants(out_flavor).items():
        if m > cap:
            continue
        V = decorate(m, variant)
        for g in X.gens_of(m):
            _, vals = X.labels[g]
            f = SimplicialMap(shapes.P[m], Y, dict(zip(shapes.gens[m], vals)))
            if not DecMap(V, target.source, f, check=False).decoration_failures():
                {"marked": marked, "thin": thin, "lean": lean}[variant].append(g)
    if out_flavor == MARKED_BISCALED:
        lean = sorted(set(lean) | set(thin))
        dec = DecSSet(X, out_flavor, marked, thin, lean)
    else:
        dec = DecSSet(X, out_flavor, marked, thin)
    return HomComplex(dec, cap, shapes.P, shapes.gens, target.source)


def fun_complex(X: DecSSet, Y: DecSSet, cap: int = 2, budget=None) -> HomComplex:
    """Maps Delta^m x X -> Y for m <= cap, decorated through the decorated simplices."""
    if X.flavor != Y.flavor:
        raise DecorationError("flavor mismatch")
    shapes = _Shapes(X.sset, cap, "left")

    def decorate(m, variant):
        return dec_product(simplex_variant(m, X.flavor, variant, shapes.simplices[m]), X, shapes.P[m])

    return _capped_complex(shapes, decorate, to_terminal(Y), None, cap, X.flavor, budget)


def map_over(X: DecSSet, q: SimplicialMap, p: DecMap, cap: int = 2, budget=None) -> HomComplex:
    """Maps Delta^m x X -> Y lying over q o pr_X, where p : Y -> S."""
    shapes = _Shapes(X.sset, cap, "left")
    S = p.target

    def decorate(m, variant):
        return dec_product(simplex_variant(m, X.flavor, variant, shapes.simplices[m]), X, shapes.P[m])

    def over(m, base):
        P = shapes.P[m]
        return DecMap(base, S, SimplicialMap(P, S.sset, {g: q(P.labels[g][1]) for g in P.all_gens()}), check=False)

    return _capped_complex(shapes, decorate, p, over, cap, X.flavor, budget)


def post_compose(H: HomComplex, K: HomComplex, g: SimplicialMap) -> SimplicialMap:
    """Fun(X, Y) -> Fun(X, Y') induced by g : Y -> Y' (both built on the same shapes)."""
    assign = {}
    for h in H.sset.all_gens():
        m, vals = H.sset.labels[h]
        new = (m, tuple(g(v) for v in vals))
        assign[h] = _lookup(K, new)
    return SimplicialMap(H.sset, K.sset, assign)


def pre_compose(H: HomComplex, K: HomComplex, f: SimplicialMap) -> SimplicialMap:
    """Fun(X, Y) -> Fun(X', Y) induced by f : X' -> X; H on X, K on X'."""
    assign = {}
    for h in H.sset.all_gens():
        m, vals = H.sset.labels[h]
        F = SimplicialMap(H.shapes[m], H.target.sset, dict(zip(H.gens[m], vals)))
        Ps, Pt = K.shapes[m], H.shapes[m]
        along = SimplicialMap(Ps, Pt, {z: Pt.pair(a, f(b)) for z, (a, b) in Ps.labels.items()})
        G = along.compose(F)
        assign[h] = _lookup(K, (m, tuple(G.assign[z] for z in K.gens[m])))
    return SimplicialMap(H.sset, K.sset, assign)


def _lookup(K: HomComplex, key) -> SimplexRef:
    """Find a possibly degenerate simplex of K from its raw key."""
    X = K.sset
    if key in X.index:
        return SimplexRef(X.index[key])
    m, vals = key
    # a degenerate key equals s_i of its i-th face for some i
    for i in range(m):
        sub = _face_key(K, key, i)
        if _degen_key(K, sub, i) == key:
            r = _lookup(K, sub)
            return X.degen(r, i)
    raise KeyError("simplex not in the complex")


def _shape_map(K: HomComplex, src: int, tgt: int, theta: tuple) -> SimplicialMap:
    Ps, Pt = K.shapes[src], K.shapes[tgt]
    A, B = Ps.left, Pt.left
    d = SimplicialMap(A, B, {g: chain_ref(B, [theta[v] for v in A.labels[g]]) for g in A.all_gens()})
    return SimplicialMap(Ps, Pt, {z: Pt.pair(d(a), b) for z, (a, b) in Ps.labels.items()})


def _face_key(K, key, i):
    m, vals = key
    along = _shape_map(K, m - 1, m, tuple(t if t < i else t + 1 for t in range(m)))
    F = SimplicialMap(K.shapes[m], K.target.sset, dict(zip(K.gens[m], vals)))
    G = along.compose(F)
    return (m - 1, tuple(G.assign[g] for g in K.gens[m - 1]))


def _degen_key(K, key, i):
    m, vals = key
    along = _shape_map(K, m + 1, m, tuple(t if t <= i else t - 1 for t in range(m + 2)))
    F = SimplicialMap(K.shapes[m], K.target.sset, dict(zip(K.gens[m], vals)))
    G = along.compose(F)
    return (m + 1, tuple(G.assign[g] for g in K.gens[m + 1]))


__all__ = [
    "gray", "gray_pi", "lax_cylinder", "simplex_variant", "HomComplex", "fun_complex", "map_over",
    "post_compose", "pre_compose",
]
