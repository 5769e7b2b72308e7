"""Command-line front end: ``mbfib make|lift|check|export|bench``."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time

from . import bicat, posets, straightening as st, tensor
from .decorations import MARKED_BISCALED, MARKED_SCALED, DecMap, DecSSet, dec_identity
from .generators import GeneratorError, build, parse_spec
from .lifting import (BudgetExceeded, Filler, LiftingProblem, NoFiller, SolverStats, problem_from_dict,
                      problem_to_dict, solve_lifting, to_terminal)
from .mapping_simplex import corepresentable, mapping_simplex
from .sset import SimplicialSet, boundary, horn, identity_map, standard_simplex
from .suites import SUITES, SuiteError, SuiteSpec, run_suite

EXIT_FILLER, EXIT_NO_FILLER, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3


class GrammarError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"parse error at position {pos}: {msg}\n  {text}\n  {' ' * pos}^")
        self.pos = pos


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, no whitespace, so equal objects give equal bytes."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# object grammar


_HEAD = re.compile(r"[a-z0-9-]+")
_ARGS = re.compile(r"[A-Za-z0-9\[\]-]+")
_TWO_CATS = {c.name: c for c in bicat.fixture_2cats()}


def _split(text: str) -> tuple:
    m = _HEAD.match(text)
    if not m:
        raise GrammarError(text, 0, "expected a construction name")
    head = m.group(0)
    pos = m.end()
    if pos == len(text) or text[pos] != ":":
        raise GrammarError(text, pos, "expected ':'")
    pos += 1
    args = []
    while True:
        m = _ARGS.match(text, pos)
        if not m:
            raise GrammarError(text, pos, "expected an argument")
        args.append(m.group(0))
        pos = m.end()
        if pos == len(text):
            return head, args, pos
        if text[pos] != ",":
            raise GrammarError(text, pos, "expected ',' or end of input")
        pos += 1


def _ints(text: str, args: list, count: int) -> list:
    if len(args) != count:
        raise GrammarError(text, len(text), f"expected {count} argument(s), got {len(args)}")
    out = []
    for a in args:
        if not a.isdigit():
            raise GrammarError(text, text.index(a, text.index(":")), f"expected an integer, got {a!r}")
        out.append(int(a))
    return out


def _two_cat(text: str, name: str) -> bicat.Strict2Cat:
    if name not in _TWO_CATS:
        raise GrammarError(text, text.index(":") + 1,
                           f"unknown 2-category {name!r}; known: {', '.join(sorted(_TWO_CATS))}")
    return _TWO_CATS[name]


def make(text: str):
    """Build the object named by ``text``; returns something with to_dict() or a DecMap."""
    text = text.strip()
    if text.split(":", 1)[0] in ("sc", "mb", "ms", "cof"):
        try:
            return build(parse_spec(text))
        except GeneratorError as exc:
            raise GrammarError(text, 0, str(exc)) from None
    head, args, _ = _split(text)
    if head == "pn":
        return posets.pn_poset(*_ints(text, args, 1))
    if head == "pnset":
        return posets.p_n(*_ints(text, args, 1))
    if head == "o":
        return posets.o_upslash(*_ints(text, args, 2))[0]
    if head == "kcomplex":
        return st.k_complex(*_ints(text, args, 1))
    if head == "simplex":
        return standard_simplex(*_ints(text, args, 1))
    if head == "boundary":
        return boundary(*_ints(text, args, 1))
    if head == "horn":
        return horn(*_ints(text, args, 2))
    if head == "gray":
        m, n = _ints(text, args, 2)
        return tensor.gray(DecSSet(standard_simplex(m), MARKED_SCALED), DecSSet(standard_simplex(n), MARKED_SCALED))
    if head == "alpha":
        return st.alpha_flat(*_ints(text, args, 1))
    if head == "cyl":
        n = _ints(text, args, 1)[0]
        D = standard_simplex(n)
        return tensor.lax_cylinder(DecSSet(D, MARKED_BISCALED), identity_map(D))[0]
    if head == "st":
        n, j = _ints(text, args, 2)
        if j > n:
            raise GrammarError(text, len(text), "target object must be at most the base dimension")
        D = standard_simplex(n)
        return st.st_value_over_simplex(DecSSet(D, MARKED_BISCALED), identity_map(D), j)
    if head == "fun":
        if len(args) not in (2, 3):
            raise GrammarError(text, len(text), "expected M,N and an optional cap")
        m, n, *rest = _ints(text, args, len(args))
        X, Y = DecSSet(standard_simplex(m), MARKED_BISCALED), DecSSet(standard_simplex(n), MARKED_BISCALED)
        return tensor.fun_complex(X, Y, rest[0] if rest else 2).dec
    if head == "msimplex":
        n, j = _ints(text, args, 2)
        return mapping_simplex(corepresentable(n, j)).dec
    if head in ("s2c", "nerve", "laxarrow"):
        if len(args) not in (1, 2):
            raise GrammarError(text, len(text), "expected a 2-category name and an optional cap")
        C = _two_cat(text, args[0])
        cap = _ints(text, args[1:], 1)[0] if len(args) == 2 else None
        if head == "s2c":
            return C
        N = bicat.scaled_nerve(C, cap if cap is not None else 3).dec
        if head == "nerve":
            return N
        return bicat.lax_arrow(N, cap if cap is not None else 2).dec
    if head == "slice":
        if len(args) not in (2, 3):
            raise GrammarError(text, len(text), "expected a 2-category name, an object and an optional cap")
        C = _two_cat(text, args[0])
        y, *rest = _ints(text, args[1:], len(args) - 1)
        N = bicat.scaled_nerve(C, rest[0] if rest else 3)
        if y not in N.vertex_of:
            raise GrammarError(text, text.rindex(args[1]), f"no object {y} in {C.name}")
        return bicat.slice_over(N.dec, N.vertex_of[y])[0]
    if head == "lift":
        if args == ["inner-horn"]:
            return inner_horn_problem()
        if args == ["unfillable"]:
            return unfillable_problem()
        raise GrammarError(text, text.index(":") + 1, "known problems: inner-horn, unfillable")
    raise GrammarError(text, 0, f"unknown construction {head!r}")


def inner_horn_problem() -> LiftingProblem:
    """Lambda^2_1 -> Delta^2 against the thin 2-simplex over a point: fillable."""
    g = build(parse_spec("sc:i(n=2,i=1)"))
    X = g.target
    return LiftingProblem(g, to_terminal(X), g, to_terminal(g.target))


def unfillable_problem() -> LiftingProblem:
    """Lambda^2_1 -> Delta^2 against the horn itself over a point: no filler."""
    g = build(parse_spec("sc:i(n=2,i=1)"))
    A = g.source
    return LiftingProblem(g, to_terminal(A), dec_identity(A), to_terminal(g.target))


def to_dict(obj) -> dict:
    if isinstance(obj, LiftingProblem):
        return problem_to_dict(obj)
    if isinstance(obj, posets.FinPoset):
        return obj.to_dict(show=posets.fmt)
    return obj.to_dict()


def to_dot(obj) -> str:
    if isinstance(obj, LiftingProblem):
        obj = obj.left
    if isinstance(obj, DecMap):
        return obj.target.sset.to_dot("target", marked=obj.target.marked)
    if isinstance(obj, DecSSet):
        return obj.sset.to_dot("X", marked=obj.marked)
    if isinstance(obj, SimplicialSet):
        return obj.to_dot("X")
    if isinstance(obj, posets.FinPoset):
        return obj.to_dot(show=posets.fmt)
    if isinstance(obj, bicat.Strict2Cat):
        return _s2c_dot(obj.to_dict())
    raise TypeError(f"no DOT rendering for {type(obj).__name__}")


def _s2c_dot(d: dict) -> str:
    lines = [f'digraph "{d["name"]}" {{']
    for o in d["objects"]:
        lines.append(f'  o{o} [label="{o}"];')
    for key, hom in sorted(d["homs"].items()):
        a, b = key.split(",")
        for e in hom["elements"]:
            lines.append(f'  o{a} -> o{b} [label="{e}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(d: dict) -> str:
    """DOT rendering of a serialized object, chosen by its format tag."""
    fmt = d.get("format")
    if fmt == "dss-v1":
        return SimplicialSet.from_dict(d).to_dot("X")
    if fmt == "dec-v1":
        X = DecSSet.from_dict(d)
        return X.sset.to_dot("X", marked=X.marked)
    if fmt == "decmap-v1":
        return export_dot(d["target"])
    if fmt == "lift-v1":
        return export_dot(d["B"])
    if fmt == "poset-v1":
        lines = [f'digraph "{d["name"]}" {{', "  rankdir=BT;"]
        idx = {e: k for k, e in enumerate(d["elements"])}
        for e, k in idx.items():
            lines.append(f'  n{k} [label="{e}"];')
        for a, b in d["covers"]:
            lines.append(f"  n{idx[a]} -> n{idx[b]};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "s2c-v1":
        return _s2c_dot(d)
    raise ValueError(f"cannot export format {fmt!r}")


# ---------------------------------------------------------------------------
# subcommands


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_make(args) -> int:
    try:
        obj = make(args.expr)
    except GrammarError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    _emit(to_dot(obj) if args.dot else dumps(to_dict(obj)) + "\n", args.out)
    return 0


def lift_report(p: LiftingProblem, budget: int | None) -> tuple:
    """(exit code, rlp-style report dict) for one problem."""
    stats = SolverStats()
    res = solve_lifting(p, budget, stats)
    rep = {"format": "lift-report-v1", "budget": budget, "nodes": stats.nodes, "backtracks": stats.backtracks}
    if isinstance(res, Filler):
        rep["verdict"] = "filler"
        rep["filler"] = {str(g): [r.gen, list(r.degeneracy)] for g, r in sorted(res.diag.map.assign.items())}
        return EXIT_FILLER, rep
    if isinstance(res, NoFiller):
        image = {r.gen for r in p.left.map.assign.values()}
        rep["verdict"] = "no-filler"
        rep["witness"] = {"square": problem_to_dict(p),
                          "unassigned": sorted(g for g in p.left.target.sset.all_gens() if g not in image)}
        return EXIT_NO_FILLER, rep
    assert isinstance(res, BudgetExceeded)
    rep["verdict"] = "budget"
    return EXIT_BUDGET, rep


def cmd_lift(args) -> int:
    try:
        with open(args.file) as fh:
            p = problem_from_dict(json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        print(f"invalid problem file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    code, rep = lift_report(p, args.budget)
    _emit(dumps(rep) + "\n", args.out)
    return code


def cmd_check(args) -> int:
    try:
        spec = SuiteSpec(args.suite, args.cap, args.seed)
    except SuiteError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    rep = run_suite(spec)
    if args.json:
        print(dumps(rep.to_dict()))
    else:
        for c in rep.cases:
            print(f"{c['verdict'].upper():4} {c['case']}")
        s = rep.to_dict()["summary"]
        print(f"{rep.suite}: {s['total'] - s['failed']}/{s['total']} passed (cap={rep.cap}, seed={rep.seed})")
    return 0 if rep.passed else 1


def cmd_export(args) -> int:
    try:
        with open(args.file) as fh:
            d = json.load(fh)
        dot = export_dot(d)
    except (OSError, ValueError, KeyError) as exc:
        print(f"cannot export: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(dot, args.out)
    return 0


BENCH = {
    "pn-poset(6)": lambda: posets.pn_poset(6).covers(),
    "k-complex(4)": lambda: st.k_complex(4),
    "msimplex(3,0)": lambda: mapping_simplex(corepresentable(3, 0)),
    "nerve(2cell,4)": lambda: bicat.scaled_nerve(_TWO_CATS["2cell"], 4),
    "lift(inner-horn)": lambda: solve_lifting(inner_horn_problem()),
}


def cmd_bench(args) -> int:
    rows = []
    for name, fn in BENCH.items():
        best = None
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            fn()
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
        rows.append({"case": name, "seconds": round(best, 6)})
    if args.suites:
        for name in args.suites:
            rep = run_suite(name)
            rows.append({"case": f"suite:{name}", "seconds": round(rep.seconds, 3), "passed": rep.passed})
    if args.json:
        print(dumps({"format": "bench-v1", "repeat": args.repeat, "rows": rows}))
    else:
        for r in rows:
            print(f"{r['seconds']:>10.4f}s  {r['case']}")
    return 0


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as "budget exceeded"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mbfib", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make", help="emit a named construction as JSON or DOT")
    p.add_argument("expr", help="e.g. pn:3, mb:A2, kcomplex:4, nerve:2cell, lift:inner-horn")
    p.add_argument("--dot", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_make)

    p = sub.add_parser("lift", help="solve a lift-v1 problem (exit 0 filler, 1 none, 2 budget)")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--cap", type=int)
    p.add_argument("--seed", type=int, default=SuiteSpec.seed)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("export", help="render a JSON artifact as DOT")
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("bench", help="time representative constructions")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--suites", nargs="*", choices=SUITES)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
