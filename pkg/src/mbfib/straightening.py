"""Chain posets of the rigidified Gray cylinder, the complexes K_n, and straightening values.

A chain from (0, a) to (1, b) in [1] x [m] is a pair of bitmasks (A, B) over
the columns [m].  A simplex of a straightening value is stored as a key
``(cell, entries)`` where ``cell`` is a nondegenerate simplex of the input and
``entries`` is an increasing sequence of triples (A, B, U), U being a subset of
the base ordinal with min U the image of the last column of the chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .decorations import MARKED_BISCALED, MARKED_SCALED, DecMap, DecSSet, dec_subcomplex, restrict
from .posets import (chain_leq, chain_points, chains, gray_thin, insertion_marked, mask, members, mmax,
                     mmin, o_cat, pi_value, pn_triangle_thin)
from .sset import (SimplexRef, SimplicialMap, SimplicialSet, chain_ref, nerve_of_order, nerve_vertices,
                   split_sequence, sset_from_keys, standard_simplex, surjection)

FLAT, LEAN, THIN, SHARP = "flat", "lean", "thin", "sharp"


class StraighteningError(ValueError):
    pass


class OnePassViolation(StraighteningError):
    """A simplex left the (0,*)-then-(1,*) chain shape assumed by the collapse formula."""


# ---------------------------------------------------------------------------
# decorations of the mapping posets of one cell


def _thin_all(*_):
    return True


def _gray_pi(x, y, z):
    return gray_thin(x, y, z, zero_face=True)


def chain_edge_marked(kind: str, C, D) -> bool:
    """Marked edges C < D of the crossing mapping poset of a decorated cell."""
    if C == D:
        return True
    if insertion_marked(C, D, _thin_all if kind == SHARP else _gray_pi):
        return True
    if kind == THIN and mmin(C[0]) == 0 and mmax(C[1]) == 2:
        return pi_value(C) == 0b101 and pi_value(D) == 0b111
    return False


def chain_triangle_scaled(kind: str, C0, C1, C2) -> bool:
    if kind != FLAT:
        return True
    return pn_triangle_thin(pi_value(C0), pi_value(C1), pi_value(C2))


class ChainPoset:
    """The decorated crossing mapping poset Ch((0,a),(1,b)) of a decorated m-simplex."""

    def __init__(self, a: int, b: int, kind: str = FLAT):
        if not 0 <= a <= b:
            raise StraighteningError("need 0 <= a <= b")
        self.a, self.b, self.kind = a, b, kind
        self.elements = chains(a, b)
        self.nerve = nerve_of_order(self.elements, chain_leq)
        X = self.nerve
        marked = [e for e in X.gens_of(1) if chain_edge_marked(kind, *X.labels[e])]
        thin = [t for t in X.gens_of(2) if chain_triangle_scaled(kind, *X.labels[t])]
        self.dec = DecSSet(X, MARKED_SCALED, marked, thin)

    def check_shape(self) -> bool:
        return all(mmax(A) <= mmin(B) for A, B in self.elements)


def k_complex(n: int) -> DecSSet:
    """K_n: chains from (0,0) to (1,n) with the marking and scaling of the flat n-simplex."""
    if n < 0:
        raise StraighteningError("n must be >= 0")
    return _k_complex(n)


@lru_cache(maxsize=None)
def _k_complex(n: int) -> DecSSet:
    return ChainPoset(0, n, FLAT).dec


def sigma_points(n: int, j: int) -> frozenset:
    """Points of the maximal simplex (0,0) < ... < (0,j) < (1,j) < ... < (1,n)."""
    return frozenset([(0, a) for a in range(j + 1)] + [(1, b) for b in range(j, n + 1)])


def _sub_by_points(K: DecSSet, allowed) -> DecSSet:
    X = K.sset
    ids = [g for g in X.all_gens() if all(set(chain_points(C)) <= allowed for C in X.labels[g])]
    return dec_subcomplex(K, ids)[0]


def k_sub(n: int, j: int) -> DecSSet:
    """K_n^j: chains through the image of the j-th maximal simplex of [1] x [n]."""
    if not 0 <= j <= n:
        raise StraighteningError("need 0 <= j <= n")
    return _sub_by_points(k_complex(n), sigma_points(n, j))


def k_face(n: int, j: int, s: int) -> DecSSet:
    """d_s(K_n^j): chains inside the s-th face of the j-th maximal simplex."""
    if not 0 <= j <= n or not 0 < s < n + 1:
        raise StraighteningError("need 0 <= j <= n and 0 < s < n + 1")
    pts = sorted(sigma_points(n, j))
    del pts[s]
    return _sub_by_points(k_complex(n), frozenset(pts))


def _horn_ok(C0, Cr, n: int, i: int) -> bool:
    full = (1 << (n + 1)) - 1
    split = chain_points(C0)
    top = chain_points(Cr)
    for x, z in zip(split, split[1:]):
        cols = {p[1] for p in top if x <= p <= z}
        if (mask(cols) | (1 << i)) == full:
            return False
    return True


def horn_k(n: int, i: int) -> DecSSet:
    """The part of K_n generated under composition by the faces of the horn (n, i).

    A simplex C_0 < ... < C_r belongs to it iff every segment of C_r between
    consecutive points of C_0 has its columns in a face of the horn.
    """
    if n < 1 or not 0 <= i <= n:
        raise StraighteningError("bad horn parameters")
    K = k_complex(n)
    X = K.sset
    ids = [g for g in X.all_gens() if _horn_ok(X.labels[g][0], X.labels[g][-1], n, i)]
    return dec_subcomplex(K, ids)[0]


def filtration(n: int, i: int) -> list:
    """[A_-1, A_0, ..., A_n]: the horn part, then successively adding K_n^0, ..., K_n^n."""
    out = [horn_k(n, i)]
    K = k_complex(n)
    ids = set(out[0].sset.dim_of)
    for j in range(n + 1):
        ids |= set(k_sub(n, j).sset.dim_of)
        out.append(dec_subcomplex(K, ids)[0])
    return out


# ---------------------------------------------------------------------------
# keyscaling comparison


@dataclass
class KeyscalingResult:
    n: int
    j: int
    ok: bool
    bijection: dict  # left label -> right label, on vertices
    marked_left_only: list = field(default_factory=list)
    marked_right_only: list = field(default_factory=list)
    scaled_left_only: list = field(default_factory=list)
    scaled_right_only: list = field(default_factory=list)
    reading: str = "with-identities"

    def to_dict(self) -> dict:
        return {"n": self.n, "j": self.j, "ok": self.ok, "reading": self.reading,
                "vertices": len(self.bijection),
                "marked_left_only": [repr(x) for x in self.marked_left_only],
                "marked_right_only": [repr(x) for x in self.marked_right_only],
                "scaled_left_only": [repr(x) for x in self.scaled_left_only],
                "scaled_right_only": [repr(x) for x in self.scaled_right_only]}


def keyscaling_iso(n: int, j: int, reading: str = "with-identities") -> KeyscalingResult:
    """Compare Delta^1 x d_{j+1}(K_n^j), decorated as in the key scaling statement, with K_n^j.

    The left marking is the product marking together with every edge inside a
    square Delta^1 x {e} for e : C_0 -> C_1 marked with (0, j) in C_0.  With
    ``reading="with-identities"`` identity edges e count as marked; with
    ``"nondegenerate"`` only nondegenerate e do.
    """
    if not 0 < j < n:
        raise StraighteningError("need 0 < j < n")
    face = k_face(n, j, j + 1)
    base = [face.sset.labels[g][0] for g in face.sset.gens_of(0)]
    marked = {(face.sset.labels[e][0], face.sset.labels[e][1]) for e in face.marked}
    bit = 1 << j

    def kmarked(x, y):
        return x == y or (x, y) in marked

    def extra(x, y):
        if not x[0] & bit:
            return False
        if x != y:
            return (x, y) in marked
        if reading == "with-identities":
            return True
        return any(a == x and b != x for a, b in marked) or any(b == x and a[0] & bit for a, b in marked)

    elems = [(e, c) for e in (0, 1) for c in base]
    L = nerve_of_order(elems, lambda u, v: u[0] <= v[0] and chain_leq(u[1], v[1]))

    def image(v):
        e, (A, B) = v
        return (A, B | (bit if e else 0))

    right = k_sub(n, j)
    R = right.sset
    bij = {v: image(v) for v in elems}
    if len(set(bij.values())) != len(elems) or set(bij.values()) != {R.labels[g][0] for g in R.gens_of(0)}:
        return KeyscalingResult(n, j, False, bij)
    for g in L.gens_of(1):
        u, v = L.labels[g]
        if (image(u), image(v)) not in R.index:
            return KeyscalingResult(n, j, False, bij)
    lm, ls = set(), set()
    for g in L.gens_of(1):
        u, v = L.labels[g]
        if (u[0] == v[0] and kmarked(u[1], v[1])) or (kmarked(u[1], v[1]) and extra(u[1], v[1])):
            lm.add((image(u), image(v)))
    for g in L.gens_of(2):
        u, v, w = L.labels[g]
        if chain_triangle_scaled(FLAT, u[1], v[1], w[1]):
            ls.add((image(u), image(v), image(w)))
    rm = {R.labels[e] for e in right.marked}
    rs = {R.labels[t] for t in right.thin}
    res = KeyscalingResult(n, j, lm == rm and ls == rs, bij,
                           sorted(lm - rm), sorted(rm - lm), sorted(ls - rs), sorted(rs - ls), reading)
    return res


# ---------------------------------------------------------------------------
# r_n and s_n


def r_map(n: int, i: int | None = None) -> DecMap:
    """K_n^n -> (Delta^n, flat, {i-1,i,i+1}), a chain goes to its last row-0 column."""
    src = k_sub(n, n)
    D = standard_simplex(n)
    thin = []
    if i is not None and 0 < i < n:
        thin = [D.index[(i - 1, i, i + 1)]]
    tgt = DecSSet(D, MARKED_SCALED, (), thin)
    X = src.sset
    assign = {g: chain_ref(D, [mmax(C[0]) for C in X.labels[g]]) for g in X.all_gens()}
    return DecMap(src, tgt, SimplicialMap(X, D, assign), check=False)


def s_map(n: int) -> DecMap:
    """(Delta^n, flat, flat) -> K_n^n, k goes to (0,0) < ... < (0,k) < (1,n)."""
    tgt = k_sub(n, n)
    D = standard_simplex(n)
    src = DecSSet(D, MARKED_SCALED)
    X = tgt.sset
    chain = lambda k: (mask(range(k + 1)), 1 << n)
    assign = {g: chain_ref(X, [chain(k) for k in D.labels[g]]) for g in D.all_gens()}
    return DecMap(src, tgt, SimplicialMap(D, X, assign), check=False)


# ---------------------------------------------------------------------------
# straightening values


def _ordinal_subsets(lo: int, hi: int) -> list:
    """Elements of O(lo, hi): subsets with the given min and max, smallest first."""
    if lo > hi:
        return []
    return sorted(o_cat(hi, lo, hi).elements, key=lambda m: (bin(m).count("1"), m))


def _map_mask(m: int, table) -> int:
    out = 0
    for c in members(m):
        out |= 1 << table[c]
    return out


class StContext:
    """Everything needed to compute and compare values of the straightening at one object.

    ``X`` is a marked-biscaled set with a structure map ``p`` to Delta^n
    (``p=None`` means over the point); ``j`` is the target object.
    """

    def __init__(self, X: DecSSet, p: SimplicialMap | None, j: int = 0, include_degenerate: bool = True):
        if X.flavor != MARKED_BISCALED:
            raise StraighteningError("expected a marked-biscaled input")
        self.X = X
        self.p = p
        if p is None:
            self.n = 0
        else:
            self.n = p.target.dims if p.target.dims >= 0 else 0
            if p.target.counts() != standard_simplex(self.n).counts():
                raise StraighteningError("structure map must land in a standard simplex")
        if not 0 <= j <= self.n:
            raise StraighteningError("target object out of range")
        self.j = j
        self.include_degenerate = include_degenerate
        self._sigma = {}

    # vertex images in the base, for a simplex given as SimplexRef
    def sigma(self, ref: SimplexRef) -> tuple:
        hit = self._sigma.get(ref)
        if hit is not None:
            return hit
        m = self.X.sset.dim(ref)
        if self.p is None:
            out = (0,) * (m + 1)
        else:
            out = nerve_vertices(self.p.target, self.p(ref))
        self._sigma[ref] = out
        return out

    def normalize(self, cell: SimplexRef, entries) -> tuple:
        """Canonical representative (nondegenerate cell id, entries) of a simplex."""
        X = self.X.sset
        entries = tuple(entries)
        self._check_shape(entries)
        while True:
            sig = self.sigma(cell)
            a = mmax(entries[0][0])
            hi = ~((1 << a) - 1)
            b = mmin(entries[0][1])
            lo = (1 << (b + 1)) - 1
            new = []
            for A, B, U in entries:
                moved = B & ~lo | (1 << b)
                new.append((A & hi, B & lo, U | _map_mask(moved, sig)))
            entries = tuple(new)
            A, B, _ = entries[-1]
            support = A | B
            m = X.dim(cell)
            if support == (1 << (m + 1)) - 1 and not cell.degeneracy:
                return cell.gen, entries
            image = members(support)
            face = X.apply(cell, image)
            eta = surjection(face.degeneracy, len(image) - 1)
            table = {c: eta[k] for k, c in enumerate(image)}
            entries = tuple((_map_mask(A, table), _map_mask(B, table), U) for A, B, U in entries)
            cell = SimplexRef(face.gen)

    def _check_shape(self, entries):
        a = mmin(entries[0][0])
        b = mmax(entries[0][1])
        prev = None
        for A, B, U in entries:
            if not A or not B or mmax(A) > mmin(B) or mmin(A) != a or mmax(B) != b:
                raise OnePassViolation(f"chain {entries!r} is not a (0,*)-then-(1,*) chain with fixed ends")
            if prev is not None and not (prev[0] & A == prev[0] and prev[1] & B == prev[1]
                                         and prev[2] & U == prev[2]):
                raise OnePassViolation(f"entries {entries!r} are not increasing")
            prev = (A, B, U)

    # -- enumeration -------------------------------------------------------
    def normal_forms(self) -> list:
        """All nondegenerate normal forms.

        They live on a nondegenerate cell of dimension m, start at the chain
        (0,0) < (1,m) and end at a chain meeting every column.
        """
        X = self.X.sset
        out = []
        for g in X.all_gens():
            m = X.dim_of[g]
            sig = self.sigma(SimplexRef(g))
            Us = _ordinal_subsets(sig[m], self.j)
            if not Us:
                continue
            full = (1 << (m + 1)) - 1
            elems = [(A, B, U) for A, B in chains(0, m) for U in Us]
            start = [e for e in elems if e[0] == 1 and e[1] == 1 << m]
            above = {e: [f for f in elems if f != e and all(x & y == x for x, y in zip(e, f))]
                     for e in elems}
            stack = [(s,) for s in start]
            while stack:
                c = stack.pop()
                if c[-1][0] | c[-1][1] == full:
                    out.append((g, c))
                for f in above[c[-1]]:
                    stack.append(c + (f,))
        return out

    def cells(self) -> list:
        """(SimplexRef, kind) for every cell contributing decorations."""
        D = self.X
        X = D.sset
        out = []
        for g in X.all_gens():
            m = X.dim_of[g]
            kind = FLAT
            if m == 1 and g in D.marked:
                kind = SHARP
            elif m == 2 and g in D.thin:
                kind = THIN
            elif m == 2 and g in D.lean:
                kind = LEAN
            out.append((SimplexRef(g), kind))
            if kind == LEAN and g in D.thin:
                out.append((SimplexRef(g), THIN))
        if self.include_degenerate:
            for v in X.gens_of(0):
                out.append((SimplexRef(v, (0,)), SHARP))
                out.append((SimplexRef(v, (0, 1)), THIN))
            for e in X.gens_of(1):
                out.append((SimplexRef(e, (0,)), THIN))
                out.append((SimplexRef(e, (1,)), THIN))
        return out

    def decorated_images(self) -> tuple:
        """Normalized images of the decorated edges and triangles of every piece."""
        marked, scaled = set(), set()
        X = self.X.sset
        for cell, kind in self.cells():
            m = X.dim(cell)
            sig = self.sigma(cell)
            for a in range(m + 1):
                for b in range(a, m + 1):
                    Us = _ordinal_subsets(sig[b], self.j)
                    if not Us:
                        continue
                    P = _piece(a, b, kind)
                    for C, D in P.marked_pairs:
                        for U in Us:
                            key = self.normalize(cell, ((C[0], C[1], U), (D[0], D[1], U)))
                            if key[1][0] != key[1][1]:
                                marked.add(key)
                    for tri in P.scaled_triples:
                        for us in _weak_triples(Us):
                            if tri[0] == tri[1] == tri[2] and us[0] == us[2]:
                                continue
                            if (tri[0] == tri[1] and us[0] == us[1]) or (tri[1] == tri[2] and us[1] == us[2]):
                                continue
                            key = self.normalize(cell, tuple((C[0], C[1], U) for C, U in zip(tri, us)))
                            e = key[1]
                            if e[0] != e[1] and e[1] != e[2]:
                                scaled.add(key)
        return marked, scaled

    def value(self) -> DecSSet:
        keys = self.normal_forms()
        for k in keys:
            if self.normalize(SimplexRef(k[0]), k[1]) != k:
                raise OnePassViolation(f"enumerated simplex {k!r} is not in normal form")

        def face(key, i):
            g, entries = key
            return self.normalize(SimplexRef(g), entries[:i] + entries[i + 1:])

        S = sset_from_keys(keys, face)
        marked, scaled = self.decorated_images()
        return DecSSet(S, MARKED_SCALED, [S.index[k] for k in marked if k in S.index],
                       [S.index[k] for k in scaled if k in S.index])


def _weak_triples(Us) -> list:
    out = []
    for x in Us:
        for y in Us:
            if x & y != x:
                continue
            for z in Us:
                if y & z == y:
                    out.append((x, y, z))
    return out


class _Piece:
    def __init__(self, a, b, kind):
        els = chains(a, b)
        self.marked_pairs = [(C, D) for C in els for D in els
                             if C != D and chain_leq(C, D) and chain_edge_marked(kind, C, D)]
        trip = []
        for C0 in els:
            for C1 in els:
                if not chain_leq(C0, C1):
                    continue
                for C2 in els:
                    if chain_leq(C1, C2) and chain_triangle_scaled(kind, C0, C1, C2):
                        trip.append((C0, C1, C2))
        self.scaled_triples = trip


@lru_cache(maxsize=None)
def _piece(a: int, b: int, kind: str) -> _Piece:
    return _Piece(a, b, kind)


def st_value_over_simplex(X: DecSSet, p: SimplicialMap, j: int, include_degenerate: bool = True) -> DecSSet:
    """The value at j of the straightening of X -> Delta^n, as a marked-scaled set."""
    return StContext(X, p, j, include_degenerate).value()


def st_value_point(X: DecSSet, include_degenerate: bool = True) -> DecSSet:
    """The straightening of X over the point."""
    return StContext(X, None, 0, include_degenerate).value()


def st_map(f: SimplicialMap, source: StContext, target: StContext, S: DecSSet, T: DecSSet) -> DecMap:
    """The map of straightening values induced by a map of inputs over the same base."""
    assign = {}
    for g in S.sset.all_gens():
        cell, entries = S.sset.labels[g]
        key = target.normalize(f(SimplexRef(cell)), entries)
        nd, dbl = _split(key)
        assign[g] = SimplexRef(T.sset.index[nd], dbl)
    return DecMap(S, T, SimplicialMap(S.sset, T.sset, assign), check=False)


def _split(key):
    return split_sequence(key)


# ---------------------------------------------------------------------------
# comparison maps alpha


def alpha(X: DecSSet, S: DecSSet | None = None) -> DecMap:
    """St_*(X) -> L_*(X): a chain goes to the vertex at its last row-0 column."""
    S = S if S is not None else st_value_point(X)
    L = DecSSet(X.sset, MARKED_SCALED, X.marked, X.lean)
    assign = {}
    for g in S.sset.all_gens():
        cell, entries = S.sset.labels[g]
        assign[g] = X.sset.apply(SimplexRef(cell), tuple(mmax(A) for A, _, _ in entries))
    return DecMap(S, L, SimplicialMap(S.sset, X.sset, assign), check=False)


def flat_simplex(n: int) -> DecSSet:
    return DecSSet(standard_simplex(n), MARKED_BISCALED)


def alpha_flat(n: int) -> DecMap:
    return alpha(flat_simplex(n))


def alpha_sharp1() -> DecMap:
    D = standard_simplex(1)
    return alpha(DecSSet(D, MARKED_BISCALED, D.gens_of(1), (), ()))


def alpha_sharp2() -> DecMap:
    D = standard_simplex(2)
    return alpha(DecSSet(D, MARKED_BISCALED, (), D.gens_of(2), D.gens_of(2)))


def lean_simplex2() -> DecSSet:
    D = standard_simplex(2)
    return DecSSet(D, MARKED_BISCALED, (), (), D.gens_of(2))


def simplex_operator(k: int, n: int, theta: tuple) -> SimplicialMap:
    """Delta^k -> Delta^n induced by a monotone theta: [k] -> [n]."""
    A, B = standard_simplex(k), standard_simplex(n)
    assign = {g: chain_ref(B, [theta[v] for v in A.labels[g]]) for g in A.all_gens()}
    return SimplicialMap(A, B, assign)


def alpha_naturality(k: int, n: int, theta: tuple, cache: dict | None = None) -> bool:
    """alpha_n o St_*(theta) == theta o alpha_k on every generator."""
    cache = cache if cache is not None else {}

    def get(m):
        if m not in cache:
            X = flat_simplex(m)
            ctx = StContext(X, None)
            S = ctx.value()
            cache[m] = (X, ctx, S, alpha(X, S))
        return cache[m]

    Xk, ck, Sk, ak = get(k)
    Xn, cn, Sn, an = get(n)
    f = simplex_operator(k, n, theta)
    St = st_map(f, ck, cn, Sk, Sn)
    for g in Sk.sset.all_gens():
        r = SimplexRef(g)
        if an.map(St(r)) != f(ak.map(r)):
            return False
    return True


__all__ = [
    "FLAT", "LEAN", "THIN", "SHARP", "StraighteningError", "OnePassViolation", "ChainPoset",
    "chain_edge_marked", "chain_triangle_scaled", "k_complex", "k_sub", "k_face", "horn_k", "filtration",
    "KeyscalingResult", "keyscaling_iso", "r_map", "s_map", "StContext", "st_value_over_simplex",
    "st_value_point", "st_map", "alpha", "alpha_flat", "alpha_sharp1", "alpha_sharp2", "flat_simplex",
    "lean_simplex2", "simplex_operator", "alpha_naturality", "SimplicialSet", "restrict",
]
