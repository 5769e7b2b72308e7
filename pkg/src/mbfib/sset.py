"""Finite simplicial sets presented by nondegenerate generators and face tables.

A simplex is carried as a :class:`SimplexRef` in Eilenberg-Zilber normal form:
a nondegenerate generator together with the degeneracy operator applied to
it.  The degeneracy operator is a monotone surjection ``[m] -> [k]`` stored as
the sorted tuple of its doubled indices, i.e. the positions ``t`` with
``eta(t) == eta(t + 1)``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable


class SSetError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class SimplexRef:
    gen: int
    degeneracy: tuple = ()

    def is_degenerate(self) -> bool:
        return bool(self.degeneracy)


# ---------------------------------------------------------------------------
# monotone maps between ordinals, as tuples of values


def surjection(doubled: Iterable[int], m: int) -> tuple:
    """The surjection [m] -> [m - len(doubled)] with the given doubled indices."""
    doubled = set(doubled)
    out = [0]
    for t in range(m):
        out.append(out[-1] + (0 if t in doubled else 1))
    return tuple(out)


def doubled_indices(eta: tuple) -> tuple:
    return tuple(t for t in range(len(eta) - 1) if eta[t] == eta[t + 1])


def factor(theta: tuple) -> tuple[tuple, tuple]:
    """Epi-mono factorisation of a monotone map: returns (image, epi)."""
    image = tuple(sorted(set(theta)))
    pos = {v: k for k, v in enumerate(image)}
    return image, tuple(pos[v] for v in theta)


def section(eta: tuple) -> tuple:
    """The section of a surjection picking the first point of each fibre."""
    first = {}
    for t, v in enumerate(eta):
        first.setdefault(v, t)
    return tuple(first[v] for v in range(len(first)))


def coface(m: int, i: int) -> tuple:
    """delta_i : [m-1] -> [m], skipping i."""
    return tuple(t for t in range(m + 1) if t != i)


def codegeneracy(m: int, i: int) -> tuple:
    """sigma_i : [m+1] -> [m], hitting i twice."""
    return tuple(t if t <= i else t - 1 for t in range(m + 2))


# ---------------------------------------------------------------------------


class SimplicialSet:
    """A finite simplicial set.

    Parameters
    ----------
    gens : list of lists of generator ids, indexed by dimension
    faces : dict mapping each generator of positive dimension to its tuple of
        faces, each a SimplexRef of one dimension lower
    labels : optional dict id -> hashable label, used by constructors to look
        generators up by content
    """

    def __init__(self, gens, faces, labels=None, check=True):
        while gens and not gens[-1]:
            gens = gens[:-1]
        self.gens = [list(g) for g in gens]
        self.faces = {g: tuple(fs) for g, fs in faces.items()}
        self.dim_of = {}
        for k, ids in enumerate(self.gens):
            for g in ids:
                if g in self.dim_of:
                    raise SSetError(f"duplicate generator id {g}")
                self.dim_of[g] = k
        self.labels = dict(labels) if labels else {}
        self.index = {lab: g for g, lab in self.labels.items()}
        self._mono = {}
        self._apply = {}
        if check:
            self.validate()

    # -- basic data -------------------------------------------------------
    @property
    def dims(self) -> int:
        return len(self.gens) - 1

    def counts(self) -> tuple:
        return tuple(len(g) for g in self.gens)

    def all_gens(self):
        for ids in self.gens:
            yield from ids

    def gens_of(self, k: int) -> list:
        return self.gens[k] if 0 <= k < len(self.gens) else []

    def dim(self, ref: SimplexRef) -> int:
        return self.dim_of[ref.gen] + len(ref.degeneracy)

    def ref(self, label, degeneracy=()) -> SimplexRef:
        return SimplexRef(self.index[label], tuple(degeneracy))

    def label(self, ref: SimplexRef):
        return self.labels.get(ref.gen, ref.gen)

    def validate(self):
        for k, ids in enumerate(self.gens):
            for g in ids:
                fs = self.faces.get(g, ())
                if k == 0:
                    if fs:
                        raise SSetError(f"vertex {g} has faces")
                    continue
                if len(fs) != k + 1:
                    raise SSetError(f"generator {g} has {len(fs)} faces, expected {k + 1}")
                for f in fs:
                    if f.gen not in self.dim_of:
                        raise SSetError(f"face of {g} references unknown generator {f.gen}")
                    if self.dim(f) != k - 1:
                        raise SSetError(f"face of {g} has wrong dimension")
                    if list(f.degeneracy) != sorted(set(f.degeneracy)):
                        raise SSetError(f"face of {g} is not in normal form")

    # -- formal simplex arithmetic ---------------------------------------
    def mono_face(self, gen: int, image: tuple) -> SimplexRef:
        """The face of a generator spanned by the given sorted vertex indices."""
        k = self.dim_of[gen]
        if len(image) == k + 1:
            return SimplexRef(gen)
        key = (gen, image)
        hit = self._mono.get(key)
        if hit is not None:
            return hit
        missing = next(t for t in range(k + 1) if t not in image)
        face = self.faces[gen][missing]
        theta = tuple(v if v < missing else v - 1 for v in image)
        out = self.apply(face, theta)
        self._mono[key] = out
        return out

    def apply(self, ref: SimplexRef, theta: tuple) -> SimplexRef:
        """theta^* ref for a monotone map theta : [p] -> [dim ref]."""
        key = (ref, theta)
        hit = self._apply.get(key)
        if hit is not None:
            return hit
        m = self.dim(ref)
        eta = surjection(ref.degeneracy, m)
        comp = tuple(eta[t] for t in theta)
        image, epi = factor(comp)
        face = self.mono_face(ref.gen, image)
        eta2 = surjection(face.degeneracy, len(image) - 1)
        out = SimplexRef(face.gen, doubled_indices(tuple(eta2[e] for e in epi)))
        self._apply[key] = out
        return out

    def face(self, ref: SimplexRef, i: int) -> SimplexRef:
        m = self.dim(ref)
        if not 0 <= i <= m or m == 0:
            raise SSetError("face index out of range")
        return self.apply(ref, coface(m, i))

    def degen(self, ref: SimplexRef, i: int) -> SimplexRef:
        m = self.dim(ref)
        if not 0 <= i <= m:
            raise SSetError("degeneracy index out of range")
        return self.apply(ref, codegeneracy(m, i))

    def vertices(self, ref: SimplexRef) -> tuple:
        m = self.dim(ref)
        return tuple(self.apply(ref, (t,)).gen for t in range(m + 1))

    def edge(self, ref: SimplexRef, a: int, b: int) -> SimplexRef:
        return self.apply(ref, (a, b))

    def simplices(self, m: int) -> list:
        """All m-simplices (degenerate ones included), in a fixed order."""
        out = []
        for k in range(min(m, self.dims) + 1):
            for J in combinations(range(m), m - k):
                for g in self.gens[k]:
                    out.append(SimplexRef(g, J))
        return out

    def check_identities(self) -> bool:
        """d_i d_j = d_{j-1} d_i for i < j on every generator."""
        for k in range(2, len(self.gens)):
            for g in self.gens[k]:
                r = SimplexRef(g)
                fs = [self.face(r, j) for j in range(k + 1)]
                for j in range(k + 1):
                    for i in range(j):
                        if self.face(fs[j], i) != self.face(fs[i], j - 1):
                            return False
        return True

    # -- sub-objects ------------------------------------------------------
    def closure(self, ids: Iterable[int]) -> set:
        todo = list(ids)
        seen = set()
        while todo:
            g = todo.pop()
            if g in seen:
                continue
            seen.add(g)
            todo.extend(f.gen for f in self.faces.get(g, ()))
        return seen

    def is_subcomplex(self, ids: Iterable[int]) -> bool:
        ids = set(ids)
        return all(f.gen in ids for g in ids for f in self.faces.get(g, ()))

    def subcomplex(self, ids: Iterable[int]):
        """The simplicial subset on the given generators (same ids) and its inclusion."""
        ids = set(ids)
        unknown = ids - set(self.dim_of)
        if unknown:
            raise SSetError(f"unknown generators {sorted(unknown)}")
        if not self.is_subcomplex(ids):
            raise SSetError("generator set is not closed under faces")
        gens = [[g for g in self.gens[k] if g in ids] for k in range(len(self.gens))]
        sub = SimplicialSet(gens, {g: self.faces[g] for g in ids if g in self.faces},
                            {g: l for g, l in self.labels.items() if g in ids}, check=False)
        return sub, SimplicialMap(sub, self, {g: SimplexRef(g) for g in ids})

    # -- serialisation ----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "format": "dss-v1",
            "dims": self.dims,
            "gens": [list(g) for g in self.gens],
            "faces": {str(g): [{"gen": f.gen, "degeneracy": list(f.degeneracy)} for f in fs]
                      for g, fs in sorted(self.faces.items()) if fs},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "SimplicialSet":
        if d.get("format", "dss-v1") != "dss-v1":
            raise SSetError("not a dss-v1 object")
        faces = {int(g): tuple(SimplexRef(f["gen"], tuple(f["degeneracy"])) for f in fs)
                 for g, fs in d["faces"].items()}
        return cls(d["gens"], faces)

    @classmethod
    def from_json(cls, s: str) -> "SimplicialSet":
        return cls.from_dict(json.loads(s))

    def to_dot(self, name="X", marked=(), label=None) -> str:
        label = label or (lambda g: str(self.labels.get(g, g)))
        marked = set(marked)
        lines = [f'digraph "{name}" {{']
        for g in self.gens_of(0):
            lines.append(f'  v{g} [label="{_esc(label(g))}"];')
        for e in self.gens_of(1):
            src = self.faces[e][1].gen
            dst = self.faces[e][0].gen
            style = ' [style=bold, color="red"]' if e in marked else ""
            lines.append(f"  v{src} -> v{dst}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"SimplicialSet{self.counts()}"


def _esc(s: str) -> str:
    return s.replace('"', '\\"')


class SimplicialMap:
    """A map of simplicial sets given by its values on generators."""

    def __init__(self, source: SimplicialSet, target: SimplicialSet, assign: dict, check=False):
        self.source = source
        self.target = target
        self.assign = dict(assign)
        if check:
            self.validate()

    def __call__(self, ref: SimplexRef) -> SimplexRef:
        img = self.assign[ref.gen]
        if not ref.degeneracy:
            return img
        m = self.source.dim(ref)
        eta = surjection(ref.degeneracy, m)
        return self.target.apply(img, eta)

    def validate(self):
        src, tgt = self.source, self.target
        for g in src.all_gens():
            if g not in self.assign:
                raise SSetError(f"generator {g} unassigned")
            img = self.assign[g]
            k = src.dim_of[g]
            if img.gen not in tgt.dim_of or tgt.dim(img) != k:
                raise SSetError(f"image of {g} has wrong dimension")
            for i in range(k + 1 if k else 0):
                if self(src.faces[g][i]) != tgt.face(img, i):
                    raise SSetError(f"map does not commute with d_{i} on {g}")

    def is_valid(self) -> bool:
        try:
            self.validate()
        except (SSetError, KeyError):
            return False
        return True

    def compose(self, after: "SimplicialMap") -> "SimplicialMap":
        """after o self."""
        return SimplicialMap(self.source, after.target,
                             {g: after(r) for g, r in self.assign.items()})

    def is_mono(self) -> bool:
        imgs = list(self.assign.values())
        return all(not r.degeneracy for r in imgs) and len(set(imgs)) == len(imgs)

    def is_iso(self) -> bool:
        return self.is_mono() and len(self.assign) == len(self.target.dim_of)

    def image_gens(self) -> set:
        return {r.gen for r in self.assign.values() if not r.degeneracy}

    def to_dict(self) -> dict:
        return {str(g): {"gen": r.gen, "degeneracy": list(r.degeneracy)}
                for g, r in sorted(self.assign.items())}

    @staticmethod
    def assign_from_dict(d: dict) -> dict:
        return {int(g): SimplexRef(r["gen"], tuple(r["degeneracy"])) for g, r in d.items()}


def identity_map(X: SimplicialSet) -> SimplicialMap:
    return SimplicialMap(X, X, {g: SimplexRef(g) for g in X.all_gens()})


# ---------------------------------------------------------------------------
# constructors


class _Builder:
    """Incremental construction with content labels; ids are handed out in order."""

    def __init__(self):
        self.gens = []
        self.faces = {}
        self.labels = {}
        self.index = {}

    def add(self, label: Hashable, dim: int, faces=()) -> int:
        if label in self.index:
            return self.index[label]
        g = len(self.labels)
        while len(self.gens) <= dim:
            self.gens.append([])
        self.gens[dim].append(g)
        self.labels[g] = label
        self.index[label] = g
        if dim:
            self.faces[g] = tuple(faces)
        return g

    def build(self, check=True) -> SimplicialSet:
        return SimplicialSet(self.gens, self.faces, self.labels, check=check)


def empty() -> SimplicialSet:
    return SimplicialSet([], {})


def nerve_of_order(elements: list, leq, cap: int | None = None) -> SimplicialSet:
    """Nerve of a finite poset; nondegenerate k-simplices are strict chains.

    Labels are the chains, as tuples of elements.
    """
    n = len(elements)
    idx = {e: k for k, e in enumerate(elements)}
    above = {e: [f for f in elements if f != e and leq(e, f)] for e in elements}
    b = _Builder()
    level = [(e,) for e in elements]
    for c in level:
        b.add(c, 0)
    k = 0
    while level and (cap is None or k < cap):
        k += 1
        nxt = []
        for c in level:
            for f in above[c[-1]]:
                nxt.append(c + (f,))
        nxt.sort(key=lambda c: tuple(idx[e] for e in c))
        for c in nxt:
            b.add(c, k, [SimplexRef(b.index[c[:i] + c[i + 1:]]) for i in range(k + 1)])
        level = nxt
    del n
    return b.build(check=False)


def chain_ref(X: SimplicialSet, seq) -> SimplexRef:
    """The simplex of a nerve given by a weakly increasing sequence of elements."""
    seq = tuple(seq)
    chain = [seq[0]]
    doubled = []
    for t in range(1, len(seq)):
        if seq[t] == seq[t - 1]:
            doubled.append(t - 1)
        else:
            chain.append(seq[t])
    return SimplexRef(X.index[tuple(chain)], tuple(doubled))


def split_sequence(key) -> tuple:
    """Default degeneracy split for keys of the form (tag, entries).

    Consecutive equal entries are collapsed; returns (nondegenerate key, doubled).
    """
    tag, entries = key
    kept = [entries[0]]
    doubled = []
    for t in range(1, len(entries)):
        if entries[t] == entries[t - 1]:
            doubled.append(t - 1)
        else:
            kept.append(entries[t])
    return (tag, tuple(kept)), tuple(doubled)


def sset_from_keys(keys, face, split=split_sequence, dim=None, order=None, check=False) -> SimplicialSet:
    """Build a simplicial set from nondegenerate simplex keys and a face function.

    ``face(key, i)`` returns the key of the i-th face, possibly degenerate;
    ``split`` turns any key into (nondegenerate key, doubled indices).  The
    key set is closed downward automatically.  Keys default to (tag, entries)
    pairs whose dimension is ``len(entries) - 1``.
    """
    dim = dim or (lambda k: len(k[1]) - 1)
    order = order or repr
    by_dim: dict = {}
    seen = set()
    stack = list(keys)
    facemap = {}
    while stack:
        k = stack.pop()
        if k in seen:
            continue
        seen.add(k)
        d = dim(k)
        by_dim.setdefault(d, []).append(k)
        if d == 0:
            continue
        fs = []
        for i in range(d + 1):
            nd, dbl = split(face(k, i))
            fs.append((nd, dbl))
            if nd not in seen:
                stack.append(nd)
        facemap[k] = fs
    b = _Builder()
    for d in sorted(by_dim):
        for k in sorted(by_dim[d], key=order):
            faces = [SimplexRef(b.index[nd], dbl) for nd, dbl in facemap.get(k, ())]
            b.add(k, d, faces)
    return b.build(check=check)


def nerve_vertices(X: SimplicialSet, ref: SimplexRef) -> tuple:
    """Inverse of chain_ref: the element sequence of a nerve simplex."""
    chain = X.labels[ref.gen]
    eta = surjection(ref.degeneracy, len(chain) - 1 + len(ref.degeneracy))
    return tuple(chain[e] for e in eta)


def standard_simplex(n: int) -> SimplicialSet:
    if n < 0:
        raise SSetError("negative dimension")
    return nerve_of_order(list(range(n + 1)), lambda a, b: a <= b)


def boundary(n: int) -> SimplicialSet:
    D = standard_simplex(n)
    ids = [g for g in D.all_gens() if len(D.labels[g]) <= n]
    return D.subcomplex(ids)[0]


def horn(n: int, i: int) -> SimplicialSet:
    """Lambda^n_i as a subcomplex of Delta^n (ids shared with standard_simplex(n))."""
    if n < 1 or not 0 <= i <= n:
        raise SSetError("bad horn parameters")
    D = standard_simplex(n)
    full = set(range(n + 1))
    ids = [g for g in D.all_gens() if (set(D.labels[g]) | {i}) != full]
    return D.subcomplex(ids)[0]


def point() -> SimplicialSet:
    return standard_simplex(0)


# ---------------------------------------------------------------------------
# products


class Product(SimplicialSet):
    """X x Y with generators labelled by jointly nondegenerate pairs of simplices."""

    def __init__(self, X: SimplicialSet, Y: SimplicialSet):
        self.left, self.right = X, Y
        b = _Builder()
        self._b = b
        top = (X.dims + Y.dims) if X.dims >= 0 and Y.dims >= 0 else -1
        for m in range(top + 1):
            for p in range(min(m, X.dims) + 1):
                for q in range(min(m, Y.dims) + 1):
                    if p + q < m:
                        continue
                    for Jx in combinations(range(m), m - p):
                        rest = [t for t in range(m) if t not in Jx]
                        for Jy in combinations(rest, m - q):
                            for gx in X.gens[p]:
                                for gy in Y.gens[q]:
                                    xr, yr = SimplexRef(gx, Jx), SimplexRef(gy, Jy)
                                    faces = ()
                                    if m:
                                        faces = [self._pair_b(X.face(xr, i), Y.face(yr, i), m - 1)
                                                 for i in range(m + 1)]
                                    b.add((xr, yr), m, faces)
        super().__init__(b.gens, b.faces, b.labels, check=False)
        del self._b
        self.pr1 = SimplicialMap(self, X, {g: lab[0] for g, lab in self.labels.items()})
        self.pr2 = SimplicialMap(self, Y, {g: lab[1] for g, lab in self.labels.items()})

    def _pair_b(self, xr, yr, m):
        X, Y = self.left, self.right
        common = sorted(set(xr.degeneracy) & set(yr.degeneracy))
        if not common:
            return SimplexRef(self._b.index[(xr, yr)])
        delta = section(surjection(common, m))
        x2, y2 = X.apply(xr, delta), Y.apply(yr, delta)
        return SimplexRef(self._b.index[(x2, y2)], tuple(common))

    def pair(self, xr: SimplexRef, yr: SimplexRef) -> SimplexRef:
        X, Y = self.left, self.right
        m = X.dim(xr)
        if Y.dim(yr) != m:
            raise SSetError("pair of simplices of different dimension")
        common = sorted(set(xr.degeneracy) & set(yr.degeneracy))
        if not common:
            return SimplexRef(self.index[(xr, yr)])
        delta = section(surjection(common, m))
        x2, y2 = X.apply(xr, delta), Y.apply(yr, delta)
        return SimplexRef(self.index[(x2, y2)], tuple(common))

    def split(self, ref: SimplexRef) -> tuple:
        return self.pr1(ref), self.pr2(ref)


def product(X: SimplicialSet, Y: SimplicialSet) -> Product:
    return Product(X, Y)


def product_map(P: Product, Q: Product, f: SimplicialMap, g: SimplicialMap) -> SimplicialMap:
    """f x g : P = X x Y -> Q = X' x Y'."""
    return SimplicialMap(P, Q, {z: Q.pair(f(xr), g(yr)) for z, (xr, yr) in P.labels.items()})


def map_into_product(Q: Product, f: SimplicialMap, g: SimplicialMap) -> SimplicialMap:
    """(f, g) : Z -> X x Y."""
    return SimplicialMap(f.source, Q, {z: Q.pair(f.assign[z], g.assign[z]) for z in f.source.all_gens()})


# ---------------------------------------------------------------------------
# colimits


class Colimit:
    """Result of :func:`colimit`: the object, the cocone maps and representatives."""

    def __init__(self, obj, legs, reps):
        self.obj = obj
        self.legs = legs
        self.reps = reps  # generator of obj -> (object index, generator)

    def __iter__(self):
        return iter((self.obj, self.legs))


def colimit(objects: list, maps: list, max_rounds: int = 100000) -> Colimit:
    """Colimit of a finite diagram.

    ``maps`` is a list of triples ``(i, j, f)`` with ``f : objects[i] -> objects[j]``.
    The quotient is computed by union-find on formal simplices: every
    generator ``a`` of a source is identified with its image, degenerate
    images collapse classes, and conflicts between two degenerate
    representatives are resolved through their faces.
    """
    for i, j, f in maps:
        if f.source is not objects[i] or f.target is not objects[j]:
            raise SSetError("ill-formed diagram: map endpoints do not match objects")

    parent = {}
    collapse = {}
    ndim = {}
    for o, X in enumerate(objects):
        for g, k in X.dim_of.items():
            parent[(o, g)] = (o, g)
            ndim[(o, g)] = k

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def norm(node, eta):
        while True:
            r = find(node)
            c = collapse.get(r)
            if c is None:
                return r, eta
            ceta, node = c
            eta = tuple(ceta[e] for e in eta)

    def formal(o, ref):
        X = objects[o]
        return (o, ref.gen), surjection(ref.degeneracy, X.dim(ref))

    def apply_formal(node, eta, theta):
        o, g = node
        X = objects[o]
        ref = X.apply(SimplexRef(g, doubled_indices(eta)), theta)
        return formal(o, ref)

    def face_eqs(s1, s2):
        m = len(s1[1]) - 1
        for i in range(m + 1 if m else 0):
            th = coface(m, i)
            queue.append((apply_formal(*s1, th), apply_formal(*s2, th)))

    queue = deque()
    for i, j, f in maps:
        for g in objects[i].all_gens():
            queue.append((formal(i, SimplexRef(g)), formal(j, f.assign[g])))

    rounds = 0
    while queue:
        rounds += 1
        if rounds > max_rounds:
            raise SSetError("colimit closure did not converge")
        s1, s2 = queue.popleft()
        r1, e1 = norm(*s1)
        r2, e2 = norm(*s2)
        if r1 == r2 and e1 == e2:
            continue
        d1, d2 = ndim[r1], ndim[r2]
        m = len(e1) - 1
        id1, id2 = d1 == m, d2 == m
        if e1 == e2:
            a, b = sorted((r1, r2))
            parent[b] = a
            face_eqs((r1, tuple(range(d1 + 1))), (r2, tuple(range(d2 + 1))))
        elif id1 and not id2:
            collapse[r1] = (e2, r2)
            face_eqs((r1, e1), (r2, e2))
        elif id2 and not id1:
            collapse[r2] = (e1, r1)
            face_eqs((r2, e2), (r1, e1))
        else:
            # two different degenerate representatives
            queue.appendleft((s1, s2))
            queue.appendleft(((r2, tuple(range(d2 + 1))), apply_formal(r1, e1, section(e2))))
            queue.appendleft(((r1, tuple(range(d1 + 1))), apply_formal(r2, e2, section(e1))))
            for i in range(m + 1):
                th = coface(m, i)
                queue.appendleft((apply_formal(r1, e1, th), apply_formal(r2, e2, th)))

    # assemble
    classes = {}
    for node in parent:
        r = find(node)
        if r in collapse:
            continue
        classes.setdefault(r, []).append(node)
    roots = sorted(classes, key=lambda r: (ndim[r], min(classes[r])))
    newid = {r: k for k, r in enumerate(roots)}
    gens = []
    faces = {}
    labels = {}
    for r in roots:
        k = ndim[r]
        while len(gens) <= k:
            gens.append([])
        gid = newid[r]
        gens[k].append(gid)
        labels[gid] = min(classes[r])

    def to_ref(node, eta):
        r, e = norm(node, eta)
        return SimplexRef(newid[r], doubled_indices(e))

    for r in roots:
        k = ndim[r]
        if k == 0:
            continue
        o, g = r
        X = objects[o]
        faces[newid[r]] = tuple(to_ref(*formal(o, X.face(SimplexRef(g), i))) for i in range(k + 1))
    C = SimplicialSet(gens, faces, labels, check=False)
    legs = []
    for o, X in enumerate(objects):
        legs.append(SimplicialMap(X, C, {g: to_ref((o, g), tuple(range(k + 1)))
                                         for g, k in X.dim_of.items()}))
    reps = {newid[r]: r for r in roots}
    return Colimit(C, legs, reps)


def coproduct(objects: list) -> Colimit:
    return colimit(list(objects), [])


def pushout(f: SimplicialMap, g: SimplicialMap) -> Colimit:
    """Pushout of B <- A -> C with f : A -> B and g : A -> C; legs (B, C)."""
    if f.source is not g.source:
        raise SSetError("pushout legs must share a source")
    res = colimit([f.source, f.target, g.target], [(0, 1, f), (0, 2, g)])
    res.legs = res.legs[1:]
    return res


def coequalizer(f: SimplicialMap, g: SimplicialMap) -> Colimit:
    if f.source is not g.source or f.target is not g.target:
        raise SSetError("coequalizer needs parallel maps")
    res = colimit([f.source, f.target], [(0, 1, f), (0, 1, g)])
    res.legs = res.legs[1:]
    return res


def subcomplex_quotient(X: SimplicialSet, A: Iterable[int]):
    """X/A: collapse the subcomplex spanned by the generator ids A to a point.

    With A empty the result is X with a disjoint point, the pushout along
    the empty map.  Returns (quotient, projection).
    """
    A = set(A)
    if not A <= set(X.dim_of):
        raise SSetError("unknown generators in subcomplex")
    if not X.is_subcomplex(A):
        raise SSetError("A is not closed under faces")
    sub, inc = X.subcomplex(A)
    pt = point()
    v = pt.gens[0][0]
    to_pt = SimplicialMap(sub, pt, {g: SimplexRef(v, tuple(range(k))) for g, k in sub.dim_of.items()})
    res = pushout(inc, to_pt)
    return res.obj, res.legs[0]


def is_isomorphic(X: SimplicialSet, Y: SimplicialSet, extra=None):
    """Search for an isomorphism X -> Y; returns the assignment dict or None.

    ``extra(gx, gy)`` may veto individual generator matches (for decorations).
    """
    if X.counts() != Y.counts():
        return None
    order = [g for ids in X.gens for g in ids]
    assign = {}
    used = set()

    def ok(gx, gy):
        if gy in used:
            return False
        if extra is not None and not extra(gx, gy):
            return False
        k = X.dim_of[gx]
        if k == 0:
            return True
        for i, f in enumerate(X.faces[gx]):
            img = SimplexRef(assign[f.gen].gen, f.degeneracy) if not assign[f.gen].degeneracy else None
            if img is None or Y.faces[gy][i] != img:
                return False
        return True

    def rec(t):
        if t == len(order):
            return True
        gx = order[t]
        for gy in Y.gens[X.dim_of[gx]]:
            if ok(gx, gy):
                assign[gx] = SimplexRef(gy)
                used.add(gy)
                if rec(t + 1):
                    return True
                used.discard(gy)
                del assign[gx]
        return False

    import sys
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, len(order) + 100))
    try:
        found = rec(0)
    finally:
        sys.setrecursionlimit(limit)
    return dict(assign) if found else None
