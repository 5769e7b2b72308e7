"""Values of the unstraightening at bounded dimension.

An m-simplex over sigma : Delta^m -> Delta^n is a natural family of decorated
maps from the straightening of Delta^m (over sigma) into a functor F out of
O^n.  Families are found object by object: the part of St(j) reached by the
action from smaller objects is forced, the rest is filled by the lifting
solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .decorations import MARKED_BISCALED, DecMap, DecSSet, dec_subcomplex
from .lifting import extensions, to_terminal
from .mapping_simplex import OnFunctor
from .sset import (Product, SimplexRef, SimplicialMap, SimplicialSet, chain_ref, doubled_indices,
                   nerve_vertices, section, split_sequence, sset_from_keys, standard_simplex, surjection)
from .straightening import StContext


class UnstraighteningError(ValueError):
    pass


VARIANTS = {None: 0, "marked": 1, "lean": 2, "thin": 2}


def _decorated_simplex(m: int, variant) -> DecSSet:
    D = standard_simplex(m)
    top = D.gens_of(m)
    if variant == "marked":
        return DecSSet(D, MARKED_BISCALED, top)
    if variant == "lean":
        return DecSSet(D, MARKED_BISCALED, (), (), top)
    if variant == "thin":
        return DecSSet(D, MARKED_BISCALED, (), top, top)
    return DecSSet(D, MARKED_BISCALED)


class _StTable:
    """Straightening values of decorated simplices over Delta^n, cached per (sigma, variant, j)."""

    def __init__(self, n: int):
        self.n = n
        self.base = standard_simplex(n)
        self._ctx = {}
        self._val = {}
        self._prod = {}

    def context(self, sigma: tuple, j: int, variant=None) -> StContext:
        key = (sigma, j, variant)
        if key not in self._ctx:
            m = len(sigma) - 1
            X = _decorated_simplex(m, variant)
            B = self.base
            p = SimplicialMap(X.sset, B, {g: chain_ref(B, [sigma[v] for v in X.sset.labels[g]])
                                          for g in X.sset.all_gens()})
            self._ctx[key] = StContext(X, p, j)
        return self._ctx[key]

    def value(self, sigma: tuple, j: int, variant=None) -> DecSSet:
        key = (sigma, j, variant)
        if key not in self._val:
            self._val[key] = self.context(sigma, j, variant).value()
        return self._val[key]

    def product(self, H: SimplicialSet, sigma: tuple, i: int) -> Product:
        key = (id(H), sigma, i)
        if key not in self._prod:
            self._prod[key] = (H, Product(H, self.value(sigma, i).sset))
        return self._prod[key][1]

    def act(self, sigma: tuple, i: int, k: int, H: SimplicialSet, t: SimplexRef, s: SimplexRef) -> SimplexRef:
        """The O-action St(i) x O(i, k) -> St(k) on a pair of simplices of equal dimension."""
        Si, Sk = self.value(sigma, i).sset, self.value(sigma, k).sset
        cell, entries = Si.labels[s.gen]
        r = Si.dim(s)
        eta = surjection(s.degeneracy, r)
        full = [entries[e] for e in eta]
        Ts = nerve_vertices(H, t)
        ctx = self.context(sigma, k)
        key = ctx.normalize(SimplexRef(cell), tuple((A, B, U | T) for (A, B, U), T in zip(full, Ts)))
        nd, dbl = split_sequence(key)
        return SimplexRef(Sk.index[nd], dbl)

    def along(self, sigma_src: tuple, sigma_tgt: tuple, theta: tuple, j: int) -> SimplicialMap:
        """St(Delta^m', sigma_src)(j) -> St(Delta^m, sigma_tgt)(j) induced by theta : [m'] -> [m]."""
        S, T = self.value(sigma_src, j), self.value(sigma_tgt, j)
        ctx = self.context(sigma_tgt, j)
        D = ctx.X.sset
        assign = {}
        for g in S.sset.all_gens():
            cell, entries = S.sset.labels[g]
            src_cell = self.context(sigma_src, j).X.sset.labels[cell]
            img = chain_ref(D, [theta[v] for v in src_cell])
            key = ctx.normalize(img, entries)
            nd, dbl = split_sequence(key)
            assign[g] = SimplexRef(T.sset.index[nd], dbl)
        return SimplicialMap(S.sset, T.sset, assign)


def _same_gens(src: DecSSet, tgt_sset: SimplicialSet) -> dict:
    return {g: tgt_sset.index[src.sset.labels[g]] for g in src.sset.all_gens()}


def _families(F: OnFunctor, table: _StTable, sigma: tuple, budget=None):
    """Every natural family St(sigma) => F, as a tuple of SimplicialMaps indexed by j."""
    n = F.n
    vals = [table.value(sigma, j) for j in range(n + 1)]

    def rec(j, phis):
        if j > n:
            yield tuple(phis)
            return
        V = vals[j]
        Fj = F.values[j]
        constraints = []
        for i in range(j):
            if not vals[i].sset.dim_of:
                continue
            H = F.homs[(i, j)]
            P = table.product(H, sigma, i)
            act = F.action[(i, j)]
            for z in P.all_gens():
                t, s = P.labels[z]
                img = table.act(sigma, i, j, H, t, s)
                constraints.append((img, act(act.source.pair(t, phis[i](s)))))
        forced = {}
        for img, val in constraints:
            if img.degeneracy:
                eta = surjection(img.degeneracy, V.sset.dim(img))
                val = Fj.sset.apply(val, section(eta))
            prev = forced.setdefault(img.gen, val)
            if prev != val:
                return
        A, inc = dec_subcomplex(V, forced)
        top = DecMap(A, Fj, SimplicialMap(A.sset, Fj.sset, forced), check=False)
        if top.decoration_failures():
            return
        for ext in extensions(inc, to_terminal(Fj), top, to_terminal(V), budget):
            phi = ext.map
            if all(phi(img) == val for img, val in constraints):
                yield from rec(j + 1, phis + [phi])

    yield from rec(0, [])


@dataclass
class UnValue:
    dec: DecSSet
    proj: SimplicialMap
    functor: OnFunctor
    cap: int
    table: _StTable = field(repr=False)

    @property
    def sset(self) -> SimplicialSet:
        return self.dec.sset

    def sigma(self, g: int) -> tuple:
        return self.sset.labels[g][0]

    def family(self, g: int) -> list:
        """The natural family represented by generator g, as maps St(sigma)(j) -> F(j)."""
        sigma, vals = self.sset.labels[g]
        out = []
        for j, row in enumerate(vals):
            V = self.table.value(sigma, j)
            gens = sorted(V.sset.all_gens())
            out.append(SimplicialMap(V.sset, self.functor.values[j].sset, dict(zip(gens, row))))
        return out

    def fiber(self, j: int) -> DecSSet:
        B = self.proj.target
        return dec_subcomplex(self.dec, [g for g, r in self.proj.assign.items()
                                         if B.dim_of[r.gen] == 0 and B.labels[r.gen] == (j,)])[0]


def un_value(F: OnFunctor, cap: int = 2, budget=None) -> UnValue:
    """The unstraightening of F up to dimension cap, as a biscaled set over Delta^n."""
    if cap > 3:
        raise UnstraighteningError("cap above 3 is not supported")
    if cap < 0:
        raise UnstraighteningError("negative cap")
    n = F.n
    table = _StTable(n)

    def encode(sigma, phis):
        return (sigma, tuple(tuple(phi.assign[g] for g in sorted(phi.source.all_gens())) for phi in phis))

    def decode(key):
        sigma, rows = key
        out = []
        for j, row in enumerate(rows):
            V = table.value(sigma, j)
            out.append(SimplicialMap(V.sset, F.values[j].sset, dict(zip(sorted(V.sset.all_gens()), row))))
        return out

    def pull(key, theta):
        sigma, _ = key
        phis = decode(key)
        new_sigma = tuple(sigma[v] for v in theta)
        return encode(new_sigma, [table.along(new_sigma, sigma, theta, j).compose(phis[j])
                                  for j in range(n + 1)])

    def face(key, i):
        m = len(key[0]) - 1
        return pull(key, tuple(t for t in range(m + 1) if t != i))

    def degen(key, i):
        m = len(key[0]) - 1
        return pull(key, tuple(t if t <= i else t - 1 for t in range(m + 2)))

    memo = {}

    def split(key):
        if key in memo:
            return memo[key]
        m = len(key[0]) - 1
        out = (key, ())
        for i in range(m):
            if key[0][i] != key[0][i + 1]:
                continue
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
        for sigma in combinations_with_replacement(range(n + 1), m + 1):
            for phis in _families(F, table, sigma, budget):
                key = encode(sigma, phis)
                if not split(key)[1]:
                    keys.append(key)
    X = sset_from_keys(keys, face, split=split, dim=lambda k: len(k[0]) - 1)
    B = table.base
    proj = SimplicialMap(X, B, {g: chain_ref(B, X.labels[g][0]) for g in X.all_gens()})

    def carries(g, variant) -> bool:
        sigma = X.labels[g][0]
        phis = decode(X.labels[g])
        for j in range(n + 1):
            W = table.value(sigma, j, variant)
            V = table.value(sigma, j)
            ren = _same_gens(W, V.sset)
            f = SimplicialMap(W.sset, F.values[j].sset, {w: phis[j].assign[ren[w]] for w in W.sset.all_gens()})
            if DecMap(W, F.values[j], f, check=False).decoration_failures():
                return False
        return True

    marked = [g for g in X.gens_of(1) if carries(g, "marked")] if cap >= 1 else []
    lean, thin = [], []
    if cap >= 2:
        for g in X.gens_of(2):
            if carries(g, "lean"):
                lean.append(g)
                sigma = X.labels[g][0]
                # thin triangles must lie over degenerate triangles of the base
                if len(set(sigma)) < 3 and carries(g, "thin"):
                    thin.append(g)
    dec = DecSSet(X, MARKED_BISCALED, marked, thin, lean)
    return UnValue(dec, proj, F, cap, table)


__all__ = ["UnstraighteningError", "UnValue", "un_value", "VARIANTS"]
