"""Command-line front end: ``liepoint {symm,table,flows,optimal,reduce,verify} SYSTEM``.

Exit status: 0 success, 1 usage or parse error, 2 mathematical failure
(non-closed span, unsupported generator class), 3 verification tolerance
exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
import time
from fractions import Fraction

from . import detsolve, liealg, numverify, optsys, reduce
from .exprcore import Context, ParseError, parse_expr, rewrite, substitute, to_str
from .exprcore.expr import Sym
from .exprcore.printer import poly_to_str
from .jet import LeadingTermError
from .ratpoly import NonSplitError
from .systemspec import SystemSpec, bundled, load_spec

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_VERIFY = 0, 1, 2, 3

MATH_ERRORS = (liealg.NotClosedError, liealg.UnsupportedFlowError, NonSplitError,
               reduce.UnsupportedGeneratorError, reduce.NonInvariantError, LeadingTermError,
               numverify.LeadingTermError, numverify.NumericBlowupError, numverify.CoverageError,
               detsolve.DependentFieldsError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(_sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class VerificationFailure(Exception):
    pass


# -- helpers ----------------------------------------------------------------

def _generators(spec: SystemSpec, degree: int):
    """Named basis when the file lists one, else the computed basis."""
    if spec.expected:
        return list(spec.expected), list(spec.labels)
    basis = detsolve.solve_symmetries(spec.system, degree).basis
    return list(basis), [f"X{i + 1}" for i in range(len(basis))]


def _algebra(spec: SystemSpec, degree: int) -> liealg.LieAlgebra:
    gens, labels = _generators(spec, degree)
    return liealg.structure_constants(gens, labels)


def _reference(spec: SystemSpec) -> dict | None:
    name = spec.extra.get("reference_tables")
    return bundled(name) if name else None


def _same(a: str, b: str) -> bool:
    ctx = Context(free=True)
    return rewrite(parse_expr(a, ctx)) == rewrite(parse_expr(b, ctx))


def _fmt_table(labels, rows) -> str:
    width = max([len(c) for r in rows for c in r] + [len(l) for l in labels]) + 2
    head = " " * 6 + "".join(l.ljust(width) for l in labels)
    lines = [head.rstrip(), "-" * len(head.rstrip())]
    for l, r in zip(labels, rows):
        lines.append(l.ljust(4) + "| " + "".join(c.ljust(width) for c in r).rstrip())
    return "\n".join(lines)


# -- commands ---------------------------------------------------------------

def cmd_symm(spec: SystemSpec, args) -> tuple[dict, str]:
    t0 = time.perf_counter()
    sys = spec.system
    basis = detsolve.solve_symmetries(sys, args.degree).basis
    elapsed = time.perf_counter() - t0
    gens = []
    for X in basis:
        gens.append({"field": X.label(), "components": X.to_dict(sys),
                     "check_generator": detsolve.check_generator(X, sys)})
    out = {"system": spec.name, "degree": args.degree, "dimension": len(basis),
           "generators": gens}
    if spec.expected:
        contained = [detsolve.span_contains(basis, X) for X in spec.expected]
        out["expected"] = {
            "labels": list(spec.labels),
            "dimension": len(spec.expected),
            "contained": dict(zip(spec.labels, contained)),
            "expected_pass_check": all(detsolve.check_generator(X, sys) for X in spec.expected),
            "span_equal": all(contained) and detsolve.same_span(list(spec.expected), list(basis)),
        }
    lines = [f"system {spec.name}: polynomial symmetries of degree <= {args.degree}",
             f"dimension {len(basis)}"]
    for k, g in enumerate(gens):
        flag = "" if g["check_generator"] else "   [FAILS check]"
        lines.append(f"  Y{k + 1} = {g['field']}{flag}")
    if spec.expected:
        e = out["expected"]
        lines.append(f"expected basis ({e['dimension']} fields): "
                     + ", ".join(f"{l} {'in' if c else 'NOT in'} span"
                                 for l, c in e["contained"].items()))
        lines.append("span equal to expected: " + ("yes" if e["span_equal"] else "no"))
    if args.timing:
        lines.append(f"solve time {elapsed:.2f} s")
    return out, "\n".join(lines)


def cmd_table(spec: SystemSpec, args) -> tuple[dict, str]:
    alg = _algebra(spec, args.degree)
    comm = liealg.commutator_table(alg)
    adj = liealg.adjoint_table(alg, args.adjoint_sign)
    out = {"labels": list(alg.labels), "commutator": comm, "adjoint_sign": args.adjoint_sign,
           "adjoint": adj}
    lines = ["commutator table [row, column]", _fmt_table(alg.labels, comm), "",
             f"adjoint table Ad(exp(eps*row)) column, sign convention {args.adjoint_sign}",
             _fmt_table(alg.labels, adj)]
    if args.diff_paper:
        ref = _reference(spec)
        if ref is None:
            raise ValueError("this system file has no reference transcription")
        # an adjoint entry is reproducible when some sign convention yields it
        by_sign = {sg: liealg.adjoint_table(alg, sg) for sg in liealg.SIGNS}
        diffs = []
        for name, ours, theirs in (("lie_table", comm, ref["lie_table"]),
                                   ("adjoint_table", adj, ref["adjoint_table"])):
            for i, row in enumerate(theirs):
                for j, entry in enumerate(row):
                    if _same(ours[i][j], entry):
                        continue
                    signs = [sg for sg, t in by_sign.items() if _same(t[i][j], entry)] \
                        if name == "adjoint_table" else []
                    diffs.append({"table": name, "row": alg.labels[i], "column": alg.labels[j],
                                  "printed": entry, "computed": ours[i][j],
                                  "reproducible_with_sign": signs[0] if signs else None})
        out["differences"] = diffs
        bad_rows = sorted({d["row"] for d in diffs if d["reproducible_with_sign"] is None})
        out["unreproducible_rows"] = bad_rows
        lines += ["", f"differences from the printed tables: {len(diffs)}"]
        for d in diffs:
            note = (f"matches sign {d['reproducible_with_sign']}" if d["reproducible_with_sign"]
                    else "unreproducible from the commutator table")
            lines.append(f"  {d['table']} [{d['row']}, {d['column']}]: printed {d['printed']!r}, "
                         f"computed {d['computed']!r} ({note})")
        if bad_rows:
            lines.append("rows with entries no sign convention reproduces: " + ", ".join(bad_rows))
    return out, "\n".join(lines)


def cmd_flows(spec: SystemSpec, args) -> tuple[dict, str]:
    gens, labels = _generators(spec, args.degree)
    sys = spec.system
    ref = _reference(spec) if args.diff_paper else None
    flows = []
    lines = []
    coords = ", ".join(sys.coordinates)
    for k, (X, lab) in enumerate(zip(gens, labels)):
        fl = liealg.flow(X)
        entry = {"label": lab, "map": {z: to_str(fl[z]) for z in sys.coordinates}}
        if ref is not None and k < len(ref["flows"]):
            ctx = Context(free=True, aliases=sys.aliases)
            want = {sys.aliases.get(z, z): rewrite(parse_expr(e, ctx))
                    for z, e in ref["flows"][k].items()}
            entry["matches_printed"] = liealg.flow_matches(fl, want)
        flows.append(entry)
        image = ", ".join(entry["map"][z] for z in sys.coordinates)
        tag = ""
        if "matches_printed" in entry:
            tag = "   [matches printed map]" if entry["matches_printed"] else "   [DIFFERS from printed map]"
        lines.append(f"g{k + 1}: ({coords}) -> ({image}){tag}")
    return {"flows": flows}, "\n".join(lines)


def cmd_optimal(spec: SystemSpec, args) -> tuple[dict, str]:
    alg = _algebra(spec, args.degree)
    ref = _reference(spec)
    labels = ref["optimal_system"] if ref else []
    rep = optsys.classify(alg, args.samples, args.seed, args.adjoint_sign, labels)
    return rep.to_json(), rep.to_text()


def _element(spec: SystemSpec, args, label: str):
    alg = _algebra(spec, args.degree)
    a = optsys.parse_element(alg, label)
    return alg, alg.element_field(a)


def cmd_reduce(spec: SystemSpec, args) -> tuple[dict, str]:
    sys = spec.system
    label = args.element
    _, X = _element(spec, args, label)
    Q = reduce.characteristic(X, sys)
    ans = reduce.invariants(X, sys)
    rs = reduce.reduce_system(sys, ans)
    order = sys.symbol_order()
    q = {d: poly_to_str(p, order) for d, p in Q.as_dict().items()}
    out = {"element": label, "field": X.label(), "characteristics": q,
           "ansatz": ans.to_json(sys), "reduced": rs.to_json()}
    lines = [f"{label} = {X.label()}", "characteristics:"]
    lines += [f"  Q_{d} = {v}" for d, v in q.items()]
    lines.append(f"similarity variable: s = {to_str(ans.s)}   ({ans.domain})")
    for k, d in enumerate(sys.dependents):
        lines.append(f"  {d} = {to_str(ans.form(k))}")
    lines.append("reduced system:")
    lines += ["  " + e + " = 0" for e in rs.equation_strings()]
    return out, "\n".join(lines)


def _float_map(items) -> dict:
    out = {}
    for it in items or []:
        k, _, v = it.partition("=")
        if not _:
            raise ValueError(f"expected NAME=VALUE, got {it!r}")
        out[k.strip()] = float(v)
    return out


def cmd_verify(spec: SystemSpec, args) -> tuple[dict, str]:
    sys = spec.system
    cfg = dict(spec.extra.get("verify", {}))
    label = args.element or cfg.get("element")
    if not label:
        raise ValueError("no --element given and the system file has no verify.element")
    params = dict(cfg.get("parameters", {}))
    params.update(_float_map(args.param))
    missing = [p for p in sys.parameters if p not in params]
    if missing:
        raise ValueError(f"no value for parameter(s) {', '.join(missing)}")
    h = args.step or cfg.get("step", 1e-3)
    tol = args.tol if args.tol is not None else cfg.get("tolerance", 1e-6)
    g = cfg.get("grid", {"x_range": [1.0, 2.0], "y_range": [0.0, 1.0], "nx": 21, "ny": 21})
    grid = numverify.GridSpec(tuple(g["x_range"]), tuple(g["y_range"]), g["nx"], g["ny"])
    _, X = _element(spec, args, label)
    ans = reduce.invariants(X, sys)
    rs = reduce.reduce_system(sys, ans)
    ode = numverify.to_first_order(rs, params)
    init = [float(v) for v in args.init.split(",")] if args.init else cfg.get("initial")
    if init is None:
        init = [1.0] * len(ode.state_names)
    if len(init) != len(ode.state_names):
        raise ValueError(f"initial state needs {len(ode.state_names)} values "
                         f"({', '.join(ode.state_names)}), got {len(init)}")
    s0 = cfg.get("s0", 0.0)
    x_name, y_name = sys.independents
    from .exprcore import evaluate

    svals = [float(evaluate(ans.s, {x_name: x, y_name: y})) for x, y in grid.points()]
    margin = 4 * h + (2 * args.fd_step if args.mode == "fd" else 0.0)
    lo, hi = min(svals + [s0]) - margin, max(svals + [s0]) + margin
    traj = numverify.integrate_range(ode, s0, init, h, lo, hi)
    if args.trajectory:
        traj.to_csv(args.trajectory)
    report = numverify.pde_residual(sys, ans, traj, grid, params, args.mode, args.fd_step)
    out = report.to_json()
    out.update({"element": label, "state": list(ode.state_names), "initial": init, "step": h,
                "parameters": params, "tolerance": tol, "passed": report.max_residual <= tol})
    lines = [f"{label}: s = {to_str(ans.s)}, state ({', '.join(ode.state_names)}) = {tuple(init)}",
             f"RK4 step {h}, s in [{lo:.4f}, {hi:.4f}], grid {grid.nx}x{grid.ny} "
             f"over {grid.x_range} x {grid.y_range}, mode {args.mode}"]
    for k, eq in enumerate(out["equations"]):
        lines.append(f"  equation {k + 1}: max |res| = {eq['max_abs']:.3e}, "
                     f"mean = {eq['mean_abs']:.3e}")
    lines.append(f"max residual {report.max_residual:.3e} (tolerance {tol:g}): "
                 + ("ok" if out["passed"] else "FAILED"))
    if not out["passed"]:
        raise VerificationFailure(out, "\n".join(lines))
    return out, "\n".join(lines)


COMMANDS = {"symm": cmd_symm, "table": cmd_table, "flows": cmd_flows,
            "optimal": cmd_optimal, "reduce": cmd_reduce, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("system", help="system JSON file (bundled names such as rnc.json also work)")
    common.add_argument("--degree", type=int, default=2, help="ansatz degree (default 2)")
    common.add_argument("--adjoint-sign", choices=liealg.SIGNS, default="eq6")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("--out", help="write the output here instead of stdout")
    common.add_argument("--json", action="store_true", help="emit JSON")

    p = _Parser(prog="liepoint", description="Lie point symmetry toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("symm", parents=[common], help="symmetry algebra")
    s.add_argument("--timing", action="store_true")
    t = sub.add_parser("table", parents=[common], help="commutator and adjoint tables")
    t.add_argument("--diff-paper", action="store_true")
    f = sub.add_parser("flows", parents=[common], help="one-parameter groups")
    f.add_argument("--diff-paper", action="store_true")
    sub.add_parser("optimal", parents=[common], help="one-dimensional optimal system")
    r = sub.add_parser("reduce", parents=[common], help="similarity reduction")
    r.add_argument("--element", required=True, help='e.g. X4 or "X4-X3"')
    v = sub.add_parser("verify", parents=[common], help="numeric plug-back of a reduction")
    v.add_argument("--element")
    v.add_argument("--param", action="append", help="NAME=VALUE, repeatable")
    v.add_argument("--init", help="comma-separated initial state")
    v.add_argument("--step", type=float)
    v.add_argument("--tol", type=float)
    v.add_argument("--mode", choices=("analytic", "fd"), default="analytic")
    v.add_argument("--fd-step", type=float, default=1e-3)
    v.add_argument("--trajectory", help="write the trajectory as CSV")
    return p


def _emit(args, payload: dict, text: str) -> None:
    body = json.dumps(payload, indent=2, default=_json_default) if args.json else text
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body + "\n")
    else:
        print(body)


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError(type(o).__name__)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.degree < 0 or args.samples < 1:
        print("liepoint: --degree must be >= 0 and --samples >= 1", file=_sys.stderr)
        return EXIT_USAGE
    try:
        spec = load_spec(args.system)
        payload, text = COMMANDS[args.command](spec, args)
    except VerificationFailure as e:
        payload, text = e.args
        _emit(args, payload, text)
        return EXIT_VERIFY
    except MATH_ERRORS as e:
        print(f"liepoint: {e}", file=_sys.stderr)
        return EXIT_MATH
    except (ParseError, ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"liepoint: {e}", file=_sys.stderr)
        return EXIT_USAGE
    _emit(args, payload, text)
    return EXIT_OK


if __name__ == "__main__":
    _sys.exit(main())
