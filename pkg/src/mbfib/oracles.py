"""Slow, independent reference implementations used to cross-check the fast code paths."""

from __future__ import annotations

from itertools import combinations

from .decorations import MARKED_BISCALED, MARKED_SCALED, SCALED, DecSSet, dec_identity
from .generators import ALL_FAMILIES, build, instances
from .lifting import LiftingProblem, squares, to_terminal
from .posets import chains, mmax, mmin, pn_leq
from .sset import SimplexRef, SimplicialMap, horn, split_sequence, standard_simplex, surjection
from .straightening import (FLAT, SHARP, THIN, LEAN, StContext, _map_mask, _ordinal_subsets,
                            chain_edge_marked, chain_triangle_scaled)


# ---------------------------------------------------------------------------
# lifting


def naive_fillers(p: LiftingProblem, limit: int | None = None) -> list:
    """Every filler, by plain depth-first enumeration of all simplices of X per generator.

    Each generator of B outside A may go to any simplex of X of its dimension
    (degenerate ones included); only completed assignments are checked
    against faces, decorations and the bottom map, generator by generator.
    """
    B, X = p.left.target, p.right.source
    Bs, Xs = B.sset, X.sset
    fixed = {p.left.map.assign[a].gen: p.top.map.assign[a] for a in p.left.source.sset.all_gens()}
    free = [g for g in sorted(Bs.dim_of, key=lambda g: (Bs.dim_of[g], g)) if g not in fixed]
    pools = [Xs.simplices(Bs.dim_of[g]) for g in free]
    out = []

    def consistent(assign, g):
        r = assign[g]
        if p.right(r) != p.bottom.map.assign[g]:
            return False
        k = Bs.dim_of[g]
        if k == 1 and B.is_marked(SimplexRef(g)) and not X.is_marked(r):
            return False
        if k == 2:
            if B.is_thin(SimplexRef(g)) and not X.is_thin(r):
                return False
            if B.is_lean(SimplexRef(g)) and not X.is_lean(r):
                return False
        for i, f in enumerate(Bs.faces.get(g, ())):
            base = assign[f.gen]
            img = base if not f.degeneracy else Xs.apply(base, surjection(f.degeneracy, Bs.dim(f)))
            if Xs.face(r, i) != img:
                return False
        return True

    def rec(t, assign):
        if limit is not None and len(out) >= limit:
            return
        if t == len(free):
            out.append(dict(assign))
            return
        g = free[t]
        for r in pools[t]:
            assign[g] = r
            if consistent(assign, g):
                rec(t + 1, assign)
            del assign[g]

    start = dict(fixed)
    for g in list(fixed):
        if not consistent(start, g):
            return []
    rec(0, start)
    return out


def free_generators(p: LiftingProblem) -> int:
    image = {r.gen for r in p.left.map.assign.values()}
    return sum(1 for g in p.left.target.sset.all_gens() if g not in image)


def _small_targets(flavor: str) -> list:
    """Objects over a point: a few that are fibrant-looking and a few that are not."""
    D1, D2, H = standard_simplex(1), standard_simplex(2), horn(2, 1)
    H0 = horn(2, 0)
    out = [("D1", DecSSet(D1, flavor)), ("D2 flat", DecSSet(D2, flavor)), ("horn", DecSSet(H, flavor)),
           ("D2 thin", DecSSet(D2, flavor, D2.gens_of(1) if flavor != SCALED else (), D2.gens_of(2),
                               D2.gens_of(2) if flavor == MARKED_BISCALED else None))]
    if flavor != SCALED:
        out.append(("D1 marked", DecSSet(D1, flavor, D1.gens_of(1))))
        out.append(("horn0 marked", DecSSet(H0, flavor, [H0.index[(0, 1)]])))
    if flavor == MARKED_BISCALED:
        out.append(("D2 lean", DecSSet(D2, flavor, (), (), D2.gens_of(2))))
    out.append(("D3 thin", DecSSet(standard_simplex(3), flavor, (), standard_simplex(3).gens_of(2),
                                   standard_simplex(3).gens_of(2) if flavor == MARKED_BISCALED else None)))
    return out


def lifting_fixtures(max_free: int = 10, per_pair: int = 3, n_max: int = 3) -> list:
    """Deterministic lifting problems (name, problem) with at most ``max_free`` unassigned generators.

    Each generator of every family up to n_max is squared against small
    targets over a point, keeping ``per_pair`` squares spread over the
    enumeration, and against its own source via the identity (these are
    mostly unfillable).
    """
    targets = {fl: _small_targets(fl) for fl in (SCALED, MARKED_SCALED, MARKED_BISCALED)}
    out = []

    def keep(name, p):
        if free_generators(p) <= max_free:
            out.append((name, p))

    for fam in ALL_FAMILIES:
        for spec in instances(fam, n_max):
            gen = build(spec)
            A = gen.source
            keep(f"{spec.name()} -> self", LiftingProblem(gen, to_terminal(A), dec_identity(A),
                                                         to_terminal(gen.target)))
            for tname, X in targets[A.flavor]:
                right = to_terminal(X)
                sq = []
                for top, bottom in squares(gen, right):
                    sq.append((top, bottom))
                    if len(sq) >= 200:
                        break
                picks = sorted({round(k * (len(sq) - 1) / max(per_pair - 1, 1)) for k in range(per_pair)}) if sq else []
                for k in picks:
                    top, bottom = sq[k]
                    keep(f"{spec.name()} -> {tname} #{k}", LiftingProblem(gen, right, top, bottom))
    return out


# ---------------------------------------------------------------------------
# posets


def brute_u_min(S: int, T: int, n: int) -> int | None:
    """Least U (by inclusion) with min U = min S, max U = min T and S inside U u T."""
    if not pn_leq(S, T):
        return None
    s, t = mmin(S), mmin(T)
    cands = []
    for r in range(n + 2):
        for sub in combinations(range(n + 1), r):
            U = 0
            for x in sub:
                U |= 1 << x
            if U and mmin(U) == s and mmax(U) == t and S & ~(U | T) == 0:
                cands.append(U)
    least = [U for U in cands if all(U & V == U for V in cands)]
    return least[0] if least else None


def brute_pn_leq(S: int, T: int, n: int) -> bool:
    """The order on P_n by its existential definition."""
    if mmin(S) > mmin(T):
        return False
    s, t = mmin(S), mmin(T)
    for bits in range(1 << (n + 1)):
        if bits and mmin(bits) == s and mmax(bits) == t and S & ~(bits | T) == 0:
            return True
    return False


# ---------------------------------------------------------------------------
# straightening: levelwise presentation with union-find


class _UF:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def _weak_chains(elems, leq, length):
    out = []
    stack = [(e,) for e in elems]
    while stack:
        c = stack.pop()
        if len(c) == length:
            out.append(c)
            continue
        for f in elems:
            if leq(c[-1], f):
                stack.append(c + (f,))
    return out


def _cell_kind(X: DecSSet, ref: SimplexRef) -> list:
    k = X.sset.dim(ref)
    if ref.degeneracy:
        return [SHARP] if k == 1 else [THIN] if k == 2 else [FLAT]
    kinds = [FLAT]
    if k == 1 and ref.gen in X.marked:
        kinds.append(SHARP)
    if k == 2 and ref.gen in X.lean:
        kinds.append(LEAN)
    if k == 2 and ref.gen in X.thin:
        kinds.append(THIN)
    return kinds


class StOracle:
    """Simplices of a straightening value as classes of all representatives.

    A representative at level r is (cell, entries) with cell any simplex of X
    up to dimension ``max_cell_dim`` (degenerate ones included) and entries a
    weakly increasing sequence of r + 1 pairs (chain, U) with fixed chain
    ends.  Classes are generated by: stripping a common row-0 prefix,
    moving a common row-1 suffix into U, and the face and degeneracy maps of X.
    """

    def __init__(self, X: DecSSet, p: SimplicialMap | None, j: int = 0, max_cell_dim: int | None = None):
        self.ctx = StContext(X, p, j)
        self.X = X
        Xs = X.sset
        top = max(Xs.dim_of.values()) if Xs.dim_of else 0
        self.max_cell_dim = max_cell_dim if max_cell_dim is not None else top + 1
        self.cells = [r for m in range(self.max_cell_dim + 1) for r in Xs.simplices(m)]

    def _sigma(self, cell):
        return self.ctx.sigma(cell)

    def reps(self, r: int) -> list:
        Xs = self.X.sset
        out = []
        for cell in self.cells:
            m = Xs.dim(cell)
            sig = self._sigma(cell)
            for a in range(m + 1):
                for b in range(a, m + 1):
                    Us = _ordinal_subsets(sig[b], self.ctx.j)
                    if not Us:
                        continue
                    elems = [(A, B, U) for A, B in chains(a, b) for U in Us]
                    leq = lambda x, y: all(s & t == s for s, t in zip(x, y))
                    for c in _weak_chains(elems, leq, r + 1):
                        out.append((cell, c))
        return out

    def _links(self):
        """cell -> [(bigger cell, i)] with d_i(bigger) = cell, and [(smaller, i)] with s_i(smaller) = cell."""
        if hasattr(self, "_up"):
            return self._up, self._down
        Xs = self.X.sset
        up, down = {}, {}
        for c in self.cells:
            m = Xs.dim(c)
            if m >= 1:
                for i in range(m + 1):
                    up.setdefault(Xs.face(c, i), []).append((c, i))
            if m + 1 <= self.max_cell_dim:
                for i in range(m + 1):
                    down.setdefault(Xs.degen(c, i), []).append((c, i))
        self._up, self._down = up, down
        return up, down

    def classes(self, r: int):
        Xs = self.X.sset
        uf = _UF()
        reps = self.reps(r)
        present = set(reps)
        for x in reps:
            uf.add(x)
        up, down = self._links()
        for x in reps:
            cell, ent = x
            common_a = ent[0][0]
            for a2 in _bits(common_a):
                if a2 > mmin(common_a):
                    keep = ~((1 << a2) - 1)
                    y = (cell, tuple((A & keep, B, U) for A, B, U in ent))
                    if y in present:
                        uf.union(x, y)
            common_b = ent[0][1]
            sig = self._sigma(cell)
            for b2 in _bits(common_b):
                if b2 < mmax(common_b):
                    lo = (1 << (b2 + 1)) - 1
                    y = (cell, tuple((A, B & lo, U | _map_mask(B & ~((1 << b2) - 1), sig)) for A, B, U in ent))
                    if y in present:
                        uf.union(x, y)
            m = Xs.dim(cell)
            for big, i in up.get(cell, ()):
                table = {c: (c if c < i else c + 1) for c in range(m + 1)}
                y = (big, tuple((_map_mask(A, table), _map_mask(B, table), U) for A, B, U in ent))
                if y in present:
                    uf.union(x, y)
            for small, i in down.get(cell, ()):
                table = {c: (c if c <= i else c - 1) for c in range(m + 1)}
                y = (small, tuple((_map_mask(A, table), _map_mask(B, table), U) for A, B, U in ent))
                if y in present:
                    uf.union(x, y)
        groups = {}
        for x in reps:
            groups.setdefault(uf.find(x), []).append(x)
        return list(groups.values())

    def decorated(self, group, r: int) -> bool:
        for cell, ent in group:
            kinds = _cell_kind(self.X, cell)
            Cs = [(A, B) for A, B, _ in ent]
            Us = [U for _, _, U in ent]
            if r == 1:
                if Us[0] != Us[1]:
                    continue
                if any(chain_edge_marked(k, Cs[0], Cs[1]) for k in kinds):
                    return True
            elif r == 2:
                if any(chain_triangle_scaled(k, *Cs) for k in kinds):
                    return True
        return False


def _bits(m: int):
    k = 0
    while m:
        if m & 1:
            yield k
        m >>= 1
        k += 1


def compare_st(X: DecSSet, p: SimplicialMap | None, j: int = 0, value: DecSSet | None = None,
               max_level: int | None = None) -> dict:
    """Check a computed straightening value against the union-find presentation.

    Returns a report with per-level class counts and any discrepancy found.
    """
    ctx = StContext(X, p, j)
    S = value if value is not None else ctx.value()
    oracle = StOracle(X, p, j)
    Ss = S.sset
    top = max_level if max_level is not None else max(Ss.dims, 0) + 1
    report = {"levels": {}, "ok": True, "problems": []}
    for r in range(top + 1):
        groups = oracle.classes(r)
        seen = {}
        for grp in groups:
            forms = {ctx.normalize(c, e) for c, e in grp}
            if len(forms) != 1:
                report["ok"] = False
                report["problems"].append(f"level {r}: one class has {len(forms)} normal forms")
                continue
            key = forms.pop()
            nd, dbl = split_sequence(key)
            if nd not in Ss.index:
                report["ok"] = False
                report["problems"].append(f"level {r}: normal form {nd!r} missing from the value")
                continue
            ref = SimplexRef(Ss.index[nd], dbl)
            if ref in seen:
                report["ok"] = False
                report["problems"].append(f"level {r}: two classes share {ref}")
            seen[ref] = grp
            if r in (1, 2) and not dbl:
                dec = oracle.decorated(grp, r)
                have = (ref.gen in S.marked) if r == 1 else (ref.gen in S.thin)
                if dec != have:
                    report["ok"] = False
                    report["problems"].append(f"level {r}: decoration mismatch at {nd!r} (oracle {dec})")
        expected = len(Ss.simplices(r))
        report["levels"][r] = (len(groups), expected)
        if len(seen) != expected:
            report["ok"] = False
            report["problems"].append(f"level {r}: {len(seen)} classes vs {expected} simplices")
    return report


__all__ = ["naive_fillers", "free_generators", "lifting_fixtures", "brute_u_min", "brute_pn_leq", "StOracle", "compare_st"]
