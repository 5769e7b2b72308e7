"""Decorated simplicial sets: scaled, marked-scaled and marked-biscaled.

Decorations are stored on nondegenerate generators only.  Every degenerate
edge counts as marked and every degenerate triangle as thin and lean.
"""

from __future__ import annotations

import json

from .sset import (Product, SimplexRef, SimplicialMap, SimplicialSet, SSetError,
                   identity_map, product)

SCALED = "Scaled"
MARKED_SCALED = "MarkedScaled"
MARKED_BISCALED = "MarkedBiscaled"
FLAVORS = (SCALED, MARKED_SCALED, MARKED_BISCALED)


class DecorationError(ValueError):
    pass


class DecSSet:
    """A simplicial set with a decoration of the given flavor."""

    def __init__(self, sset: SimplicialSet, flavor: str, marked=(), thin=(), lean=None):
        if flavor not in FLAVORS:
            raise DecorationError(f"unknown flavor {flavor!r}")
        self.sset = sset
        self.flavor = flavor
        self.marked = frozenset(marked) if flavor != SCALED else frozenset()
        self.thin = frozenset(thin)
        if flavor == MARKED_BISCALED:
            self.lean = frozenset(self.thin if lean is None else lean)
        else:
            self.lean = self.thin

    # queries on arbitrary simplices
    def is_marked(self, ref: SimplexRef) -> bool:
        return bool(ref.degeneracy) or ref.gen in self.marked

    def is_thin(self, ref: SimplexRef) -> bool:
        return bool(ref.degeneracy) or ref.gen in self.thin

    def is_lean(self, ref: SimplexRef) -> bool:
        return bool(ref.degeneracy) or ref.gen in self.lean

    def edges(self):
        return self.sset.gens_of(1)

    def triangles(self):
        return self.sset.gens_of(2)

    def with_(self, **kw) -> "DecSSet":
        args = dict(marked=self.marked, thin=self.thin,
                    lean=self.lean if self.flavor == MARKED_BISCALED else None)
        args.update(kw)
        flavor = args.pop("flavor", self.flavor)
        return DecSSet(self.sset, flavor, **args)

    def same_decorations(self, other: "DecSSet") -> bool:
        return (self.flavor == other.flavor and self.marked == other.marked
                and self.thin == other.thin and self.lean == other.lean)

    def to_dict(self) -> dict:
        d = self.sset.to_dict()
        d["format"] = "dec-v1"
        d["flavor"] = self.flavor
        d["marked"] = sorted(self.marked)
        d["thin"] = sorted(self.thin)
        d["lean"] = sorted(self.lean) if self.flavor == MARKED_BISCALED else []
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "DecSSet":
        if d.get("format") != "dec-v1":
            raise DecorationError("not a dec-v1 object")
        base = dict(d, format="dss-v1")
        X = SimplicialSet.from_dict(base)
        return make_dec(X, d["flavor"], d.get("marked", ()), d.get("thin", ()),
                        d.get("lean") if d["flavor"] == MARKED_BISCALED else None)

    @classmethod
    def from_json(cls, s: str) -> "DecSSet":
        return cls.from_dict(json.loads(s))

    def __repr__(self):
        return (f"DecSSet({self.flavor}, {self.sset.counts()}, marked={len(self.marked)}, "
                f"thin={len(self.thin)}, lean={len(self.lean)})")


def _ids(X: SimplicialSet, items, dim: int, what: str) -> set:
    out = set()
    for it in items or ():
        if isinstance(it, SimplexRef):
            if it.gen not in X.dim_of:
                raise DecorationError(f"unknown {what} {it}")
            if X.dim(it) != dim:
                raise DecorationError(f"{what} {it} has wrong dimension")
            if it.degeneracy:
                continue
            out.add(it.gen)
        else:
            if it not in X.dim_of:
                raise DecorationError(f"unknown {what} id {it}")
            if X.dim_of[it] != dim:
                raise DecorationError(f"{what} id {it} has wrong dimension")
            out.add(it)
    return out


def make_dec(sset: SimplicialSet, flavor: str, marked=(), thin=(), lean=None) -> DecSSet:
    """Validated constructor.  Degenerate cells given as SimplexRefs are dropped."""
    if flavor not in FLAVORS:
        raise DecorationError(f"unknown flavor {flavor!r}")
    m = _ids(sset, marked, 1, "marked edge")
    if flavor == SCALED and m:
        raise DecorationError("scaled sets carry no marking")
    t = _ids(sset, thin, 2, "thin triangle")
    if flavor == MARKED_BISCALED:
        l_ = _ids(sset, lean if lean is not None else (), 2, "lean triangle")
        if not t <= l_:
            raise DecorationError("thin triangles must be lean")
        return DecSSet(sset, flavor, m, t, l_)
    if lean:
        raise DecorationError("lean triangles only exist for the biscaled flavor")
    return DecSSet(sset, flavor, m, t)


def flat(X: SimplicialSet, flavor: str = MARKED_BISCALED) -> DecSSet:
    return DecSSet(X, flavor)


def sharp(X: SimplicialSet, flavor: str = MARKED_BISCALED) -> DecSSet:
    """Everything decorated."""
    return DecSSet(X, flavor, X.gens_of(1), X.gens_of(2), X.gens_of(2))


class DecMap:
    """A decoration preserving map of decorated simplicial sets."""

    def __init__(self, source: DecSSet, target: DecSSet, map_: SimplicialMap, check=True):
        if source.flavor != target.flavor:
            raise DecorationError("flavor mismatch")
        if map_.source is not source.sset or map_.target is not target.sset:
            raise DecorationError("map does not match the decorated objects")
        self.source = source
        self.target = target
        self.map = map_
        if check:
            self.validate()

    def __call__(self, ref: SimplexRef) -> SimplexRef:
        return self.map(ref)

    def decoration_failures(self) -> list:
        S, T, f = self.source, self.target, self.map
        bad = []
        for e in S.marked:
            if not T.is_marked(f.assign[e]):
                bad.append(("marked", e))
        for t in S.thin:
            if not T.is_thin(f.assign[t]):
                bad.append(("thin", t))
        if S.flavor == MARKED_BISCALED:
            for t in S.lean:
                if not T.is_lean(f.assign[t]):
                    bad.append(("lean", t))
        return bad

    def validate(self):
        self.map.validate()
        bad = self.decoration_failures()
        if bad:
            raise DecorationError(f"decorations not preserved: {bad[:5]}")

    def compose(self, after: "DecMap") -> "DecMap":
        return DecMap(self.source, after.target, self.map.compose(after.map), check=False)

    def is_mono(self) -> bool:
        return self.map.is_mono()

    def is_iso(self) -> bool:
        """Bijective with decorations reflected as well as preserved."""
        if not self.map.is_iso():
            return False
        S, T, a = self.source, self.target, self.map.assign
        return ({a[g].gen for g in S.marked} == set(T.marked)
                and {a[g].gen for g in S.thin} == set(T.thin)
                and {a[g].gen for g in S.lean} == set(T.lean))

    def to_dict(self) -> dict:
        return {"format": "decmap-v1", "source": self.source.to_dict(),
                "target": self.target.to_dict(), "assign": self.map.to_dict()}


def dec_identity(X: DecSSet) -> DecMap:
    return DecMap(X, X, identity_map(X.sset), check=False)


def dec_map(source: DecSSet, target: DecSSet, assign: dict, check=True) -> DecMap:
    return DecMap(source, target, SimplicialMap(source.sset, target.sset, assign), check=check)


# ---------------------------------------------------------------------------
# products and sub-objects


def dec_product(X: DecSSet, Y: DecSSet, P: Product | None = None) -> DecSSet:
    """Categorical product: a cell is decorated iff both projections are."""
    if X.flavor != Y.flavor:
        raise DecorationError("flavor mismatch")
    P = P or product(X.sset, Y.sset)
    marked, thin, lean = [], [], []
    for e in P.gens_of(1):
        xr, yr = P.labels[e]
        if X.is_marked(xr) and Y.is_marked(yr):
            marked.append(e)
    for t in P.gens_of(2):
        xr, yr = P.labels[t]
        if X.is_thin(xr) and Y.is_thin(yr):
            thin.append(t)
        if X.is_lean(xr) and Y.is_lean(yr):
            lean.append(t)
    return DecSSet(P, X.flavor, marked, thin, lean if X.flavor == MARKED_BISCALED else None)


def restrict(X: DecSSet, sub: SimplicialSet) -> DecSSet:
    """Decorations of X restricted to a subcomplex sharing its ids."""
    ids = set(sub.dim_of)
    return DecSSet(sub, X.flavor, X.marked & ids, X.thin & ids,
                   (X.lean & ids) if X.flavor == MARKED_BISCALED else None)


def dec_subcomplex(X: DecSSet, ids) -> tuple:
    sub, inc = X.sset.subcomplex(ids)
    S = restrict(X, sub)
    return S, DecMap(S, X, inc, check=False)


def image_decorations(target: SimplicialSet, flavor: str, maps: list) -> DecSSet:
    """Decorate ``target`` with the images of decorated cells under the given maps.

    ``maps`` holds pairs (DecSSet, SimplicialMap into target).  Used for
    colimits, whose decorations are generated by the pieces.
    """
    marked, thin, lean = set(), set(), set()
    for D, f in maps:
        for e in D.marked:
            r = f.assign[e]
            if not r.degeneracy:
                marked.add(r.gen)
        for t in D.thin:
            r = f.assign[t]
            if not r.degeneracy:
                thin.add(r.gen)
        for t in D.lean:
            r = f.assign[t]
            if not r.degeneracy:
                lean.add(r.gen)
    if flavor == MARKED_BISCALED:
        return DecSSet(target, flavor, marked, thin, lean | thin)
    return DecSSet(target, flavor, marked if flavor != SCALED else (), thin)


# ---------------------------------------------------------------------------
# flavor changes


def flavor_L(Y: DecSSet) -> DecSSet:
    """(Y, T) -> (Y, flat, flat in T): nothing thin, the scaling becomes lean."""
    if Y.flavor == SCALED:
        return DecSSet(Y.sset, MARKED_BISCALED, (), (), Y.thin)
    if Y.flavor == MARKED_SCALED:
        return DecSSet(Y.sset, MARKED_BISCALED, Y.marked, (), Y.thin)
    raise DecorationError("flavor_L expects a scaled or marked-scaled input")


def flavor_R(X: DecSSet) -> DecSSet:
    """(X, E, T in C) -> (X, C) as a scaled set."""
    if X.flavor != MARKED_BISCALED:
        raise DecorationError("flavor_R expects a biscaled input")
    return DecSSet(X.sset, SCALED, (), X.lean)


def to_marked_scaled(X: DecSSet) -> DecSSet:
    """(X, E, T in C) -> (X, E, C)."""
    if X.flavor == MARKED_SCALED:
        return X
    if X.flavor == SCALED:
        return DecSSet(X.sset, MARKED_SCALED, (), X.thin)
    return DecSSet(X.sset, MARKED_SCALED, X.marked, X.lean)


def ms_as_mb(X: DecSSet) -> DecSSet:
    """Marked-scaled as biscaled with thin = lean."""
    if X.flavor == MARKED_BISCALED:
        return X
    return DecSSet(X.sset, MARKED_BISCALED, X.marked, X.thin, X.thin)


def flavor_R_marked(X: DecSSet, p: SimplicialMap, S: DecSSet) -> DecSSet:
    """A marked simplicial set over a scaled base becomes (X, E, T in all).

    T consists of the triangles lying over thin triangles of S.
    """
    if S.flavor != SCALED:
        raise DecorationError("base must be scaled")
    if p.source is not X.sset or p.target is not S.sset:
        raise DecorationError("structure map does not match")
    thin = [t for t in X.sset.gens_of(2) if S.is_thin(p.assign[t])]
    return DecSSet(X.sset, MARKED_BISCALED, X.marked, thin, X.sset.gens_of(2))


def underlying_bicat(X: DecSSet, p: SimplicialMap, S: DecSSet) -> DecSSet:
    """Scaled set whose thin triangles are the lean triangles over thin ones in S."""
    if X.flavor != MARKED_BISCALED:
        raise DecorationError("underlying_bicat expects a biscaled total space")
    if p.source is not X.sset or p.target is not S.sset:
        raise DecorationError("structure map does not match")
    thin = [t for t in X.lean if S.is_thin(p.assign[t])]
    return DecSSet(X.sset, SCALED, (), thin)


def retag(X: DecSSet, flavor: str) -> DecSSet:
    """Change the flavor tag keeping whatever data the new flavor can hold."""
    if flavor == X.flavor:
        return X
    if flavor == SCALED:
        return DecSSet(X.sset, SCALED, (), X.thin)
    if flavor == MARKED_SCALED:
        return DecSSet(X.sset, MARKED_SCALED, X.marked, X.thin)
    return DecSSet(X.sset, MARKED_BISCALED, X.marked, X.thin, X.lean)


def fiber(X: DecSSet, p: SimplicialMap, vertex: int) -> tuple:
    """Fiber of p : X -> S over a vertex of S, with its inclusion."""
    S = p.target
    ids = []
    for g in X.sset.all_gens():
        r = p.assign[g]
        if S.dim_of[r.gen] == 0 and r.gen == vertex:
            ids.append(g)
    return dec_subcomplex(X, ids)


__all__ = [
    "SCALED", "MARKED_SCALED", "MARKED_BISCALED", "FLAVORS", "DecorationError", "DecSSet",
    "DecMap", "make_dec", "flat", "sharp", "dec_identity", "dec_map", "dec_product", "restrict",
    "dec_subcomplex", "image_decorations", "flavor_L", "flavor_R", "to_marked_scaled",
    "ms_as_mb", "flavor_R_marked", "underlying_bicat", "retag", "fiber", "SSetError",
]
