"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 inconclusive (precision or search
limits reached), 3 internal inconsistency or oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import mpmath

from . import generators, io, oracle
from .classify import as_fraction, classify
from .errors import KGraphError, ParseError
from .kms import core_trace, kms1_eval, toeplitz_eval, toeplitz_state
from .periodicity import CharacterSpec, periodicity_group
from .periods import period_group
from .report import BASIS, REPORT_VERSION, analyze, classification_dict, graph_summary, tool_version
from .spectral import decimal


def _emit(obj, args) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _envelope(command: str, args, body: dict) -> dict:
    return {
        "report_version": REPORT_VERSION,
        "tool_version": tool_version(),
        "command": command,
        "settings": {
            "precision_bits": args.precision,
            "denominator_bound": args.denominator_bound,
            "per_box": args.per_box,
            "seed": args.seed,
        },
        **body,
    }


def _path(g, text: str):
    text = text.strip()
    if text in g.vertex_index:
        return g.vertex_path(text)
    ids = [t for t in text.replace(" ", ",").split(",") if t]
    for t in ids:
        if t not in g.edge:
            raise ParseError("path", f"unknown edge {t!r}")
    return g.path(ids)


def _betas(text: str) -> list[Fraction]:
    try:
        return [as_fraction(t) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError("--beta", str(exc)) from exc


def cmd_validate(args):
    g = io.parse_kgraph(args.graph)
    return 0, {"valid": True, "graph": graph_summary(g)}


def cmd_analyze(args):
    g = io.parse_kgraph(args.graph)
    rep = analyze(g, _betas(args.beta), args.precision, args.denominator_bound, args.per_box, args.seed)
    return 0, rep.to_dict()


def cmd_classify(args):
    g = io.parse_kgraph(args.graph)
    out = [
        classification_dict(classify(g, b, args.precision, args.denominator_bound), args.precision)
        for b in _betas(args.beta)
    ]
    return 0, {"factor_types": out, "basis": BASIS["factor_types"]}


def cmd_kms(args):
    g = io.parse_kgraph(args.graph)
    r = "preferred" if args.r == "preferred" else [t for t in args.r.split(",")]
    if args.epsilon.startswith("extremal:"):
        eps = ("extremal", args.epsilon.split(":", 1)[1])
        if eps[1] not in g.vertex_index:
            raise ParseError("--epsilon", f"unknown vertex {eps[1]!r}")
    else:
        eps = [t for t in args.epsilon.split(",")]
    st = toeplitz_state(g, args.beta, r, eps, args.precision)
    p = args.precision
    body = {
        "beta": str(st.beta),
        "r": [decimal(x, p) for x in st.r],
        "y": {v: decimal(x, p) for v, x in zip(g.vertices, st.y)},
        "epsilon": {v: decimal(x, p) for v, x in zip(g.vertices, st.epsilon)},
        "m_eps": {v: decimal(x, p) for v, x in zip(g.vertices, st.m_eps)},
        "eps_dot_y": decimal(st.eps_dot_y, p),
    }
    if args.mu:
        mu = _path(g, args.mu)
        nu = _path(g, args.nu or args.mu)
        body["value"] = decimal(toeplitz_eval(st, mu, nu), p)
    return 0, body


def cmd_kms1(args):
    g = io.parse_kgraph(args.graph)
    per = periodicity_group(g, args.per_box, args.precision)
    angles = [as_fraction(t) for t in args.chi.split(",") if t.strip()] if args.chi else []
    if not angles:
        angles = [0] * per.lattice.rank
    angles = [mpmath.mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else a for a in angles]
    mu = _path(g, args.mu)
    nu = _path(g, args.nu)
    val = kms1_eval(g, CharacterSpec(angles), mu, nu, per, args.precision)
    body = {
        "mu": str(mu),
        "nu": str(nu),
        "value": {"re": decimal(val.real, args.precision), "im": decimal(val.imag, args.precision)},
        "periodicity_group": {"basis": [list(b) for b in per.basis], "box": per.box},
    }
    return 0, body


def cmd_per(args):
    g = io.parse_kgraph(args.graph)
    per = periodicity_group(g, args.per_box, args.precision)
    P = period_group(g)
    return 0, {
        "periodicity_group": {"basis": [list(b) for b in per.basis], "box": per.box,
                              "members_in_box": [list(m) for m in per.members]},
        "period_group": {"basis": [list(b) for b in P.basis], "index": P.index},
        "basis": BASIS["periodicity_group"],
    }


def cmd_sample(args):
    g = io.parse_kgraph(args.graph)
    seed = 0 if args.seed is None else args.seed
    stream = oracle.SampleStream(g, seed)
    counts = oracle.empirical_cylinder_masses(stream, args.length, args.samples)
    freq = {" ".join(k) if k else "": v / args.samples for k, v in sorted(counts.items())}
    return 0, {"samples": args.samples, "length": args.length, "frequencies": freq}


def cmd_oracle(args):
    g = io.parse_kgraph(args.graph)
    check = oracle.CHECKS[args.check]
    kw = {"bound": args.bound, "precision_bits": args.precision, "denominator_bound": args.denominator_bound,
          "seed": 0 if args.seed is None else args.seed}
    if args.samples:
        kw["samples"] = args.samples
    res = check(g, **kw)
    return (0 if res.ok else 3), {"check": res.name, "ok": res.ok, "details": res.details}


def cmd_gen(args):
    if args.family == "example":
        g = generators.named_example(args.params[0])
    elif args.family == "cycle":
        k = int(args.params[0])
        basis = [[int(x) for x in row.split(",")] for row in args.params[1].split(";")]
        g = generators.cycle(k, basis)
    elif args.family == "single-vertex":
        counts = [int(x) for x in args.params[0].split(",")]
        g = generators.single_vertex(len(counts), counts)
    elif args.family == "pullback":
        g = generators.pullback(io.parse_kgraph(args.params[0]), int(args.params[1]))
    elif args.family == "fixture":
        g = io.load_fixture(args.params[0])
    else:
        raise ParseError("family", f"unknown family {args.family!r}")
    return 0, io.kgraph_to_dict(g)


def cmd_core_trace(args):
    g = io.parse_kgraph(args.graph)
    omega = [v for v in args.omega.split(",") if v]
    val = core_trace(g, omega, args.level, args.vertex, precision_bits=args.precision)
    return 0, {"omega": omega, "level": args.level, "vertex": args.vertex, "value": decimal(val, args.precision)}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=256, help="working precision in bits")
    common.add_argument("--denominator-bound", type=int, default=10_000, help="Q for the dense/discrete test")
    common.add_argument("--per-box", type=int, default=5, help="search box radius for the periodicity group")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--output", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="kgraph", description="Invariants and KMS states of finite k-graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, graph=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if graph:
            p.add_argument("graph", help="JSON file, JSON text, or fixture name")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check the k-graph axioms")
    add("analyze", cmd_analyze, "full invariant report").add_argument("--beta", default="1,2")
    add("classify", cmd_classify, "factor type at the given beta").add_argument("--beta", default="1")
    p = add("kms", cmd_kms, "Toeplitz KMS state")
    p.add_argument("--beta", required=True)
    p.add_argument("--r", default="preferred", help='"preferred" or comma list; entries may be log:<q>')
    p.add_argument("--epsilon", default=None, help="comma list or extremal:<vertex>")
    p.add_argument("--mu")
    p.add_argument("--nu")
    p = add("kms1", cmd_kms1, "KMS_1 state of a character on s_mu s_nu*")
    p.add_argument("--chi", default="", help="angles in [0,1) per generator of the periodicity group")
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    add("per", cmd_per, "periodicity group")
    p = add("core-trace", cmd_core_trace, "trace on a class block of the core")
    p.add_argument("--omega", required=True)
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--vertex", required=True)
    p = add("sample", cmd_sample, "Monte-Carlo cylinder frequencies")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--length", type=int, default=1)
    p = sub.add_parser("oracle", parents=[common], help="cross-check a fast algorithm against its oracle")
    p.add_argument("check", choices=sorted(oracle.CHECKS))
    p.add_argument("graph")
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(func=cmd_oracle)
    p = sub.add_parser("gen", parents=[common], help="emit a generated k-graph as JSON")
    p.add_argument("family", choices=["example", "cycle", "single-vertex", "pullback", "fixture"])
    p.add_argument("params", nargs="+")
    p.set_defaults(func=cmd_gen, graph=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    if getattr(args, "epsilon", "") is None:
        args.epsilon = f"extremal:{io.parse_kgraph(args.graph).vertices[0]}"
    try:
        code, body = args.func(args)
    except KGraphError as exc:
        _emit(_envelope(args.command, args, {"error": type(exc).__name__, "message": str(exc)}), args)
        return exc.exit_code
    except (ValueError, KeyError) as exc:
        _emit(_envelope(args.command, args, {"error": type(exc).__name__, "message": str(exc)}), args)
        return 1
    if args.command == "gen":
        _emit(body, args)
    elif args.command == "analyze":
        _emit(body, args)
    else:
        _emit(_envelope(args.command, args, body), args)
    return code


if __name__ == "__main__":
    sys.exit(main())
