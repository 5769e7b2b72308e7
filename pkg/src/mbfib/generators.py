"""Generating anodyne maps and generating cofibrations as decorated inclusions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product as iproduct

from .decorations import (MARKED_BISCALED, MARKED_SCALED, SCALED, DecMap, DecSSet,
                          DecorationError, restrict)
from .sset import (SimplexRef, SimplicialMap, SimplicialSet, _Builder, empty, standard_simplex,
                   subcomplex_quotient)

SCALED_FAMILIES = ("SC-i", "SC-ii", "SC-iii")
MB_FAMILIES = ("A1", "A2", "A3", "A4", "S1", "S2", "E")
MS_FAMILIES = ("M1", "M2", "M3", "M4", "MS1", "ME")
COF_FAMILIES = ("C1", "C2", "C3", "C4")
ALL_FAMILIES = SCALED_FAMILIES + MB_FAMILIES + MS_FAMILIES + COF_FAMILIES

# the wonky 4-simplex
WONKY_T = ((0, 2, 4), (1, 2, 3), (0, 1, 3), (1, 3, 4), (0, 1, 2))
WONKY_EXTRA = ((0, 3, 4), (0, 1, 4))


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int | None = None
    i: int | None = None
    probe: object = None

    def name(self) -> str:
        args = []
        if self.n is not None:
            args.append(f"n={self.n}")
        if self.i is not None:
            args.append(f"i={self.i}")
        if self.probe is not None:
            args.append("probe")
        return self.family + (f"({','.join(args)})" if args else "")


# ---------------------------------------------------------------------------
# helpers


def _cells(D: SimplicialSet, tuples) -> list:
    return [D.index[tuple(t)] for t in tuples if tuple(t) in D.index]


def _all(D: SimplicialSet, k: int) -> list:
    return list(D.gens_of(k))


def _inclusion(src: DecSSet, tgt: DecSSet) -> DecMap:
    inc = SimplicialMap(src.sset, tgt.sset, {g: SimplexRef(g) for g in src.sset.all_gens()})
    return DecMap(src, tgt, inc)


def _sub(D: SimplicialSet, keep) -> SimplicialSet:
    return D.subcomplex([g for g in D.all_gens() if keep(D.labels[g])])[0]


def _horn_sub(D: SimplicialSet, n: int, i: int) -> SimplicialSet:
    full = set(range(n + 1))
    return _sub(D, lambda lab: (set(lab) | {i}) != full)


def _dec(X, flavor, marked=(), thin=(), lean=None) -> DecSSet:
    ids = set(X.dim_of)
    marked = [g for g in marked if g in ids]
    thin = [g for g in thin if g in ids]
    if flavor == MARKED_BISCALED:
        lean = [g for g in (lean if lean is not None else thin) if g in ids]
        return DecSSet(X, flavor, marked, thin, lean)
    return DecSSet(X, flavor, marked, thin)


def _check_inner(n, i):
    if n is None or i is None or n < 2 or not 0 < i < n:
        raise GeneratorError("inner horn needs n >= 2 and 0 < i < n")


def groupoid_nerve(objects: int, cap: int) -> SimplicialSet:
    """Nerve of the contractible groupoid on the given number of objects, up to cap.

    Nondegenerate simplices are object sequences without consecutive repeats.
    """
    b = _Builder()
    for k in range(cap + 1):
        for seq in iproduct(range(objects), repeat=k + 1):
            if any(seq[t] == seq[t + 1] for t in range(k)):
                continue
            faces = []
            for i in range(k + 1 if k else 0):
                s = seq[:i] + seq[i + 1:]
                chain = [s[0]]
                doubled = []
                for t in range(1, len(s)):
                    if s[t] == s[t - 1]:
                        doubled.append(t - 1)
                    else:
                        chain.append(s[t])
                faces.append(SimplexRef(b.index[tuple(chain)], tuple(doubled)))
            b.add(seq, k, faces)
    return b.build()


def default_probes(cap: int = 2) -> list:
    """Finite stand-ins for "every Kan complex": a point and truncated groupoid nerves.

    Only a sound but incomplete check: lifting against these probes is
    necessary, not sufficient, for the full family.
    """
    out = [standard_simplex(0)]
    for k in range(1, cap + 1):
        out.append(groupoid_nerve(2, k))
    return out


# ---------------------------------------------------------------------------
# scaled


def scaled_anodyne(spec: GeneratorSpec) -> DecMap:
    fam, n, i = spec.family, spec.n, spec.i
    if fam == "SC-i":
        _check_inner(n, i)
        D = standard_simplex(n)
        T = _cells(D, [(i - 1, i, i + 1)])
        H = _horn_sub(D, n, i)
        return _inclusion(_dec(H, SCALED, thin=T), _dec(D, SCALED, thin=T))
    if fam == "SC-ii":
        D = standard_simplex(4)
        T = _cells(D, WONKY_T)
        return _inclusion(_dec(D, SCALED, thin=T), _dec(D, SCALED, thin=T + _cells(D, WONKY_EXTRA)))
    if fam == "SC-iii":
        if n is None or n < 3:
            raise GeneratorError("SC-iii needs n >= 3")
        D = standard_simplex(n)
        edge = [D.index[(0,)], D.index[(1,)], D.index[(0, 1)]]
        Q, q = subcomplex_quotient(D, edge)
        H = _horn_sub(D, n, 0)
        img = {q.assign[g].gen for g in H.all_gens() if not q.assign[g].degeneracy}
        Qs = Q.subcomplex(Q.closure(img))[0]
        t = q.assign[D.index[(0, 1, n)]]
        T = [] if t.degeneracy else [t.gen]
        return _inclusion(_dec(Qs, SCALED, thin=T), _dec(Q, SCALED, thin=T))
    raise GeneratorError(f"not a scaled family: {fam}")


# ---------------------------------------------------------------------------
# marked-biscaled and marked-scaled


def _probe_sset(probe) -> SimplicialSet:
    if probe is None:
        raise GeneratorError("family E needs a probe")
    return probe.sset if isinstance(probe, DecSSet) else probe


def mb_anodyne(spec: GeneratorSpec) -> DecMap:
    fam, n, i = spec.family, spec.n, spec.i
    F = MARKED_BISCALED
    if fam == "A1":
        _check_inner(n, i)
        D = standard_simplex(n)
        L = _cells(D, [(i - 1, i, i + 1)])
        H = _horn_sub(D, n, i)
        return _inclusion(_dec(H, F, lean=L), _dec(D, F, lean=L))
    if fam == "A2":
        D = standard_simplex(4)
        T = _cells(D, WONKY_T)
        return _inclusion(_dec(D, F, lean=T), _dec(D, F, lean=T + _cells(D, WONKY_EXTRA)))
    if fam == "A3":
        if n is None or n < 2:
            raise GeneratorError("A3 needs n >= 2")
        D = standard_simplex(n)
        E = _cells(D, [(0, 1)])
        T = _cells(D, [(0, 1, n)])
        H = _horn_sub(D, n, 0)
        return _inclusion(_dec(H, F, E, T, T), _dec(D, F, E, T, T))
    if fam == "A4":
        D = standard_simplex(1)
        P = D.subcomplex([D.index[(0,)]])[0]
        return _inclusion(_dec(P, F), _dec(D, F, _all(D, 1)))
    if fam == "S1":
        D = standard_simplex(2)
        T = _all(D, 2)
        return _inclusion(_dec(D, F, _cells(D, [(0, 1), (1, 2)]), T, T), _dec(D, F, _all(D, 1), T, T))
    if fam == "S2":
        D = standard_simplex(2)
        T = _all(D, 2)
        return _inclusion(_dec(D, F, lean=T), _dec(D, F, thin=T, lean=T))
    if fam == "E":
        K = _probe_sset(spec.probe)
        T = _all(K, 2)
        return _inclusion(_dec(K, F, (), T, T), _dec(K, F, _all(K, 1), T, T))
    raise GeneratorError(f"not an MB family: {fam}")


def ms_anodyne(spec: GeneratorSpec) -> DecMap:
    fam, n, i = spec.family, spec.n, spec.i
    F = MARKED_SCALED
    if fam == "M1":
        _check_inner(n, i)
        D = standard_simplex(n)
        T = _cells(D, [(i - 1, i, i + 1)])
        return _inclusion(_dec(_horn_sub(D, n, i), F, thin=T), _dec(D, F, thin=T))
    if fam == "M2":
        D = standard_simplex(4)
        T = _cells(D, WONKY_T)
        return _inclusion(_dec(D, F, thin=T), _dec(D, F, thin=T + _cells(D, WONKY_EXTRA)))
    if fam == "M3":
        if n is None or n < 2:
            raise GeneratorError("M3 needs n >= 2")
        D = standard_simplex(n)
        E = _cells(D, [(0, 1)])
        T = _cells(D, [(0, 1, n)])
        return _inclusion(_dec(_horn_sub(D, n, 0), F, E, T), _dec(D, F, E, T))
    if fam == "M4":
        D = standard_simplex(1)
        P = D.subcomplex([D.index[(0,)]])[0]
        return _inclusion(_dec(P, F), _dec(D, F, _all(D, 1)))
    if fam == "MS1":
        D = standard_simplex(2)
        T = _all(D, 2)
        return _inclusion(_dec(D, F, _cells(D, [(0, 1), (1, 2)]), T), _dec(D, F, _all(D, 1), T))
    if fam == "ME":
        K = _probe_sset(spec.probe)
        T = _all(K, 2)
        return _inclusion(_dec(K, F, (), T), _dec(K, F, _all(K, 1), T))
    raise GeneratorError(f"not an MS family: {fam}")


def generating_cofibration(spec: GeneratorSpec) -> DecMap:
    fam, n = spec.family, spec.n
    F = MARKED_BISCALED
    if fam == "C1":
        if n is None or n < 0:
            raise GeneratorError("C1 needs n >= 0")
        D = standard_simplex(n)
        B = _sub(D, lambda lab: len(lab) <= n)
        return _inclusion(_dec(B, F), _dec(D, F))
    if fam == "C2":
        D = standard_simplex(1)
        return _inclusion(_dec(D, F), _dec(D, F, _all(D, 1)))
    if fam == "C3":
        D = standard_simplex(2)
        return _inclusion(_dec(D, F), _dec(D, F, lean=_all(D, 2)))
    if fam == "C4":
        D = standard_simplex(2)
        T = _all(D, 2)
        return _inclusion(_dec(D, F, lean=T), _dec(D, F, thin=T, lean=T))
    raise GeneratorError(f"not a cofibration family: {fam}")


def build(spec: GeneratorSpec) -> DecMap:
    if spec.family in SCALED_FAMILIES:
        return scaled_anodyne(spec)
    if spec.family in MB_FAMILIES:
        return mb_anodyne(spec)
    if spec.family in MS_FAMILIES:
        return ms_anodyne(spec)
    if spec.family in COF_FAMILIES:
        return generating_cofibration(spec)
    raise GeneratorError(f"unknown family {spec.family}")


def instances(family: str, n_max: int, probes=None) -> list:
    """All parameter instances of a family with n <= n_max."""
    if family in ("SC-i", "A1", "M1"):
        return [GeneratorSpec(family, n, i) for n in range(2, n_max + 1) for i in range(1, n)]
    if family in ("A3", "M3"):
        return [GeneratorSpec(family, n) for n in range(2, n_max + 1)]
    if family == "SC-iii":
        return [GeneratorSpec(family, n) for n in range(3, n_max + 1)]
    if family == "C1":
        return [GeneratorSpec(family, n) for n in range(0, n_max + 1)]
    if family in ("E", "ME"):
        probes = probes if probes is not None else default_probes(min(n_max, 2))
        return [GeneratorSpec(family, probe=p) for p in probes]
    return [GeneratorSpec(family)]


# ---------------------------------------------------------------------------
# name grammar:  sc:i(n=3,i=1)  sc:ii  mb:A1(n=3,i=1)  ms:M3(n=2)  cof:C2

_PREFIX = {"sc": SCALED_FAMILIES, "mb": MB_FAMILIES, "ms": MS_FAMILIES, "cof": COF_FAMILIES}
_NAME = re.compile(r"^(sc|mb|ms|cof):([A-Za-z0-9-]+)(?:\(([^)]*)\))?$")


def parse_spec(text: str) -> GeneratorSpec:
    m = _NAME.match(text.strip())
    if not m:
        raise GeneratorError(f"cannot parse generator name {text!r}")
    prefix, fam, args = m.groups()
    if prefix == "sc" and not fam.startswith("SC-"):
        fam = "SC-" + fam
    if fam not in _PREFIX[prefix]:
        raise GeneratorError(f"unknown family {fam!r} for prefix {prefix!r}")
    kw = {}
    for part in filter(None, (args or "").split(",")):
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in ("n", "i"):
            raise GeneratorError(f"unknown parameter {key!r}")
        kw[key] = int(val)
    probe = None
    if fam in ("E", "ME"):
        probe = default_probes(2)[-1]
    return GeneratorSpec(fam, kw.get("n"), kw.get("i"), probe)


__all__ = [
    "GeneratorSpec", "GeneratorError", "scaled_anodyne", "mb_anodyne", "ms_anodyne",
    "generating_cofibration", "build", "instances", "parse_spec", "default_probes",
    "groupoid_nerve", "ALL_FAMILIES", "SCALED_FAMILIES", "MB_FAMILIES", "MS_FAMILIES",
    "COF_FAMILIES", "WONKY_T", "WONKY_EXTRA", "empty", "DecorationError", "restrict",
]
