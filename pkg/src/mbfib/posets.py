"""Finite posets of subsets: the categories O^I, the posets P_n, O^n_{i/} and chain posets.

Subsets of [n] are bitmasks (bit k set iff k is a member).  Chains in the
poset [1] x [n] from (0, j) to (1, l) are pairs of bitmasks (A, B): A lists
the row-0 points, B the row-1 points, and max A <= min B.
"""

from __future__ import annotations

import json
from itertools import combinations

from .decorations import MARKED_BISCALED, SCALED, DecSSet
from .sset import SimplexRef, SimplicialMap, chain_ref, nerve_of_order, nerve_vertices, standard_simplex


# ---------------------------------------------------------------------------
# bitmask helpers


def mask(items) -> int:
    out = 0
    for x in items:
        out |= 1 << x
    return out


def members(m: int) -> tuple:
    out = []
    k = 0
    while m:
        if m & 1:
            out.append(k)
        m >>= 1
        k += 1
    return tuple(out)


def mmin(m: int) -> int:
    return (m & -m).bit_length() - 1


def mmax(m: int) -> int:
    return m.bit_length() - 1


def fmt(m: int) -> str:
    return "{" + ",".join(map(str, members(m))) + "}"


class PosetError(ValueError):
    pass


class FinPoset:
    """A finite poset given by its elements and an order predicate."""

    def __init__(self, elements, leq, name="P"):
        self.elements = list(elements)
        self.name = name
        self._leq = leq
        self.pos = {e: k for k, e in enumerate(self.elements)}

    def leq(self, a, b) -> bool:
        return self._leq(a, b)

    def __len__(self):
        return len(self.elements)

    def check_axioms(self) -> bool:
        E = self.elements
        for a in E:
            if not self.leq(a, a):
                return False
        for a in E:
            for b in E:
                if a != b and self.leq(a, b) and self.leq(b, a):
                    return False
        for a in E:
            up = [b for b in E if self.leq(a, b)]
            for b in up:
                for c in E:
                    if self.leq(b, c) and not self.leq(a, c):
                        return False
        return True

    def covers(self) -> list:
        E = self.elements
        out = []
        for a in E:
            for b in E:
                if a == b or not self.leq(a, b):
                    continue
                if not any(c != a and c != b and self.leq(a, c) and self.leq(c, b) for c in E):
                    out.append((a, b))
        return out

    def nerve(self, cap=None):
        return nerve_of_order(self.elements, self.leq, cap)

    def to_dict(self, show=str) -> dict:
        return {"format": "poset-v1", "name": self.name,
                "elements": [show(e) for e in self.elements],
                "covers": [[show(a), show(b)] for a, b in self.covers()]}

    def to_json(self, show=str) -> str:
        return json.dumps(self.to_dict(show), sort_keys=True, indent=1)

    def to_dot(self, show=str, marked=()) -> str:
        marked = set(marked)
        lines = [f'digraph "{self.name}" {{', "  rankdir=BT;"]
        for e in self.elements:
            lines.append(f'  n{self.pos[e]} [label="{show(e)}"];')
        for a, b in self.covers():
            style = ' [color="red", style=bold]' if (a, b) in marked else ""
            lines.append(f"  n{self.pos[a]} -> n{self.pos[b]}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# O^I(i, j)


def o_cat(I, i: int, j: int) -> FinPoset:
    """Subsets S of the linear order I with min S = i and max S = j, under inclusion.

    I is either an int n (for [n]) or an increasing sequence of ints.
    """
    I = tuple(range(I + 1)) if isinstance(I, int) else tuple(I)
    if i not in I or j not in I:
        raise PosetError("endpoints not in I")
    if i > j:
        raise PosetError("need i <= j")
    inner = [x for x in I if i < x < j]
    base = mask({i, j})
    elems = []
    for r in range(len(inner) + 1):
        for sub in combinations(inner, r):
            elems.append(base | mask(sub))
    return FinPoset(elems, lambda a, b: a & b == a, name=f"O({i},{j})")


def o_nerve(n: int, i: int, j: int):
    """Nerve of O^n(i, j), labels are chains of bitmasks."""
    return o_cat(n, i, j).nerve()


# ---------------------------------------------------------------------------
# P_n


def pn_leq(S: int, T: int) -> bool:
    """S <= T iff min S <= min T and every element of S that is >= min T lies in T."""
    t = mmin(T)
    if mmin(S) > t:
        return False
    high = S >> t << t
    return high & T == high


def pn_elements(n: int, lo: int = 0) -> list:
    """Nonempty subsets of [lo, n] containing n, ordered by size then value."""
    rest = list(range(lo, n))
    out = []
    for r in range(len(rest), -1, -1):
        for sub in combinations(rest, r):
            out.append(mask(sub) | (1 << n))
    return out


def pn_poset(n: int, lo: int = 0) -> FinPoset:
    return FinPoset(pn_elements(n, lo), pn_leq, name=f"P[{lo},{n}]")


def u_min(S: int, T: int) -> int:
    """The minimal U with min U = min S, max U = min T and S contained in U u T."""
    if not pn_leq(S, T):
        raise PosetError(f"{fmt(S)} is not below {fmt(T)}")
    s, t = mmin(S), mmin(T)
    between = S & ~((1 << (s + 1)) - 1) & ((1 << t) - 1)
    return (1 << s) | (1 << t) | between


def pn_triangle_thin(S: int, T: int, W: int) -> bool:
    return u_min(S, W) == (u_min(S, T) | u_min(T, W))


def cover_type(U: int, V: int) -> str | None:
    """'O1' if V adds one element above min U, 'O2' if V drops min U and min V = min U + 1."""
    if mmin(U) == mmin(V) and V & U == U and bin(V ^ U).count("1") == 1:
        return "O1"
    if V == U & ~(1 << mmin(U)) and V and mmin(V) == mmin(U) + 1:
        return "O2"
    return None


def p_n(n: int, cap: int | None = None, lo: int = 0) -> DecSSet:
    """The scaled nerve of P_n (or P_[lo, n]); labels are chains of bitmasks."""
    X = pn_poset(n, lo).nerve(cap)
    thin = [g for g in X.gens_of(2) if pn_triangle_thin(*X.labels[g])]
    return DecSSet(X, SCALED, (), thin)


# ---------------------------------------------------------------------------
# O^n_{i/}


def o_upslash(n: int, i: int):
    """Subsets with minimum i under inclusion, decorated, with the projection max.

    Returns (DecSSet[MarkedBiscaled], SimplicialMap to Delta^n).
    """
    if not 0 <= i <= n:
        raise PosetError("need 0 <= i <= n")
    rest = list(range(i + 1, n + 1))
    elems = []
    for r in range(len(rest) + 1):
        for sub in combinations(rest, r):
            elems.append((1 << i) | mask(sub))
    X = nerve_of_order(elems, lambda a, b: a & b == a)
    marked = []
    for e in X.gens_of(1):
        S, T = X.labels[e]
        if T == S | (1 << mmax(T)):
            marked.append(e)
    lean = list(X.gens_of(2))
    thin = []
    for t in lean:
        a, b, c = (mmax(S) for S in X.labels[t])
        if a == b or b == c:
            thin.append(t)
    D = standard_simplex(n)
    proj = SimplicialMap(X, D, {g: chain_ref(D, [mmax(S) for S in X.labels[g]]) for g in X.all_gens()})
    return DecSSet(X, MARKED_BISCALED, marked, thin, lean), proj


# ---------------------------------------------------------------------------
# chains in [1] x [n]


def chain_points(C) -> list:
    """(A, B) -> sorted list of points (row, column)."""
    A, B = C
    return [(0, a) for a in members(A)] + [(1, b) for b in members(B)]


def chains(j: int, l: int) -> list:
    """Chains in [1] x [n] from (0, j) to (1, l), as (A, B) bitmask pairs."""
    inner = list(range(j, l + 1))
    out = []
    for ra in range(len(inner) + 1):
        for As in combinations(inner, ra):
            A = mask(As) | (1 << j)
            top = mmax(A)
            cand = [x for x in inner if x >= top]
            for rb in range(len(cand) + 1):
                for Bs in combinations(cand, rb):
                    B = mask(Bs) | (1 << l)
                    if mmin(B) >= top:
                        C = (A, B)
                        if C not in out:
                            out.append(C)
    out.sort(key=lambda C: (bin(C[0]).count("1") + bin(C[1]).count("1"), C))
    return out


def chain_leq(C, D) -> bool:
    return C[0] & D[0] == C[0] and C[1] & D[1] == C[1]


def chain_poset(j: int, l: int) -> FinPoset:
    return FinPoset(chains(j, l), chain_leq, name=f"Ch[(0,{j}),(1,{l})]")


def pi_value(C) -> int:
    """C -> the row-1 part of C together with its last row-0 column."""
    A, B = C
    return (1 << mmax(A)) | B


def gray_thin(p0, p1, p2, zero_face: bool = False) -> bool:
    """Thinness of a nondegenerate triangle of Delta^1 (x) Delta^n (flat factors).

    ``zero_face`` adds every triangle of {0} x Delta^n, as for the straightening cylinder.
    """
    (e0, a0), (e1, a1), (e2, a2) = p0, p1, p2
    if zero_face and e0 == e1 == e2 == 0:
        return True
    return a0 == a1 or (a1 == a2 and e1 == e2)


def insertion_marked(C, D, thin) -> bool:
    """Whether the refinement C < D is a marked edge of the rigidified mapping space.

    Marked edges are generated by inserting one point y between consecutive
    points x < z of C with (x, y, z) thin, independently in several gaps.
    """
    if C == D or not chain_leq(C, D):
        return False
    pc, pd = chain_points(C), chain_points(D)
    new = [p for p in pd if p not in pc]
    for x, z in zip(pc, pc[1:]):
        inside = [y for y in new if x < y < z]
        if len(inside) > 1:
            return False
        if inside and not thin(x, inside[0], z):
            return False
    return True


def pi_map(j: int, l: int, n: int | None = None):
    """The map from the chain poset Ch((0,j),(1,l)) to P_[j,l] and its nerve version.

    Returns (value function, SimplicialMap between the nerves, source nerve,
    target nerve).
    """
    src = chain_poset(j, l).nerve()
    tgt = pn_poset(l, j).nerve()
    assign = {g: chain_ref(tgt, [pi_value(C) for C in src.labels[g]]) for g in src.all_gens()}
    return pi_value, SimplicialMap(src, tgt, assign), src, tgt


__all__ = [
    "mask", "members", "mmin", "mmax", "fmt", "FinPoset", "PosetError", "o_cat", "o_nerve",
    "pn_leq", "pn_elements", "pn_poset", "u_min", "pn_triangle_thin", "cover_type", "p_n",
    "o_upslash", "chain_points", "chains", "chain_leq", "chain_poset", "pi_value", "gray_thin",
    "insertion_marked", "pi_map", "nerve_vertices", "SimplexRef",
]
