"""Command line: ``two-ray verify | trace | classify | check-format``."""

from __future__ import annotations

import argparse
import json
import sys

from .blowup import centre_normal_form, equation_classes, is_ideal_variable, orbinates
from .chamber import endpoint_classify, ray_scan
from .corpus import CorpusError, load, normalize_id, verify_tables
from .fano import SchemaError
from .game import FIBRATION, GameError, trace_link
from .polyring import BudgetExceeded
from .tomformat import degrees_from_upper, detect_configuration, pure_power_report, unprojection_shape_check

EXIT_OK, EXIT_DIFF, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=str)


def _family(args):
    corpus = load(args.tables)
    fid = normalize_id(args.id)
    if fid not in corpus:
        raise UsageError(f"unknown family id {fid}")
    return corpus[fid]


def diagram(trace) -> str:
    """The link as a one-line chain plus a line per step."""
    lines = [f"{trace.family} (level {trace.level})"]
    chain = ["Y"]
    for i, step in enumerate(trace.steps):
        label = step.label()
        if step.kind == FIBRATION:
            base = trace.endpoint.get("base")
            chain.append(f"--{label}--> P({','.join(map(str, base))})")
        elif i == len(trace.steps) - 1:
            chain.append(f"--{label}--> X'")
        else:
            chain.append(f"--{label}--> Y{i + 1}")
    lines.append(" ".join(chain))
    for i, step in enumerate(trace.steps):
        on = ",".join(step.wall_variables) or "-"
        extra = ""
        if step.contracted_curve:
            extra = (
                f"  contracts P({','.join(map(str, step.contracted))}) in {','.join(step.contracted_curve)}"
                f", extracts P({','.join(map(str, step.extracted))}) in {','.join(step.extracted_curve)}"
            )
        lines.append(f"  wall {i + 1} [{on}] {step.label()} ({step.evidence}){extra}")
    ep = trace.endpoint
    if ep["class"] == FIBRATION and "fibre" in ep:
        fib = ep["fibre"]
        lines.append(
            f"  fibre: degree {fib['degrees']} in P({','.join(map(str, fib['weights']))}),"
            f" dP degree {ep['dp_degree']}"
        )
    elif "d" in ep:
        lines.append(f"  contraction: d = {ep['d']}, target weights {ep['target_weights']}")
        if "discrepancy" in ep:
            lines.append(f"  discrepancy {ep['discrepancy']}")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    report = verify_tables(load(args.tables), args.level)
    print(report.dumps() if args.json else report.text())
    return report.exit_status()


def cmd_trace(args) -> int:
    trace = trace_link(_family(args), args.level)
    print(trace.dumps() if args.json else diagram(trace))
    return EXIT_OK


def cmd_classify(args) -> int:
    fam = _family(args)
    if fam.grading is None:
        raise UsageError(f"{fam.id} has no grading")
    kind = endpoint_classify(ray_scan(fam.grading, fam.cox_variables))
    print(_dump({"family": fam.id, "endpoint": kind}) if args.json else kind)
    return EXIT_OK


def format_report(fam) -> dict:
    out: dict = {"family": fam.id}
    if fam.tom:
        degrees = degrees_from_upper(fam.tom["degrees"])
        k = fam.tom.get("k", 1)
        config = detect_configuration(degrees, k)
        out["tom"] = {"k": k, "double_cover": fam.tom.get("double_cover"), "configuration": config.label, "pivot": config.pivot}
        ideal = dict(fam.tom.get("ideal_weights", {}))
        if not ideal and config.pivot is not None:
            # base case of the lemma: one pivot-weight ideal coordinate in B, two in A
            count = 1 if config.label == "B" else 2
            ideal = {f"y{i + 1}": config.pivot for i in range(count)}
        if ideal:
            out["tom"]["findings"] = [
                {"variables": list(f.variables), "kind": f.kind, "pfaffian": f.pfaffian}
                for f in pure_power_report(degrees, ideal, k)
            ]
    if fam.equations and fam.centre is not None:
        o = orbinates(fam)
        out["centre_form"] = str(centre_normal_form(fam)[0])
        polys = fam.polynomials()
        ideal_vars = [n for n in fam.cox_variables if is_ideal_variable(n)]
        shape = unprojection_shape_check(polys, fam.centre_coordinate, ideal_vars, (o.xi, o.x1))
        out["shape"] = {"flags": shape.flags, "verdict": shape.verdict}
        out["three_free"] = equation_classes(fam)[1]
    if len(out) == 1:
        raise UsageError(f"{fam.id} has neither a Tom matrix nor equations")
    return out


def _format_text(rep: dict) -> str:
    lines = [rep["family"]]
    if "tom" in rep:
        t = rep["tom"]
        lines.append(f"  Tom_{t['k']} matrix of {t['double_cover']}: configuration {t['configuration']} (pivot {t['pivot']})")
        for f in t.get("findings", []):
            lines.append(f"  {f['kind']} in {','.join(f['variables'])} forced in Pf_{f['pfaffian']}")
    if "shape" in rep:
        flags = " ".join(f"{y}:{'yes' if v else 'no'}" for y, v in rep["shape"]["flags"].items())
        lines.append(f"  centre {rep['centre_form']}; pure (xi,x1) part {flags} -> {rep['shape']['verdict']}")
        lines.append(f"  exactly three E-free unprojection equations: {rep['three_free']}")
    return "\n".join(lines)


def cmd_check_format(args) -> int:
    rep = format_report(_family(args))
    print(_dump(rep) if args.json else _format_text(rep))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="two-ray", description="Sarkisov 2-ray game toolkit for index-2 Fano 3-folds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, level=True):
        p.add_argument("--tables", metavar="PATH", action="append", help="extra family file or directory (overrides by id)")
        p.add_argument("--json", action="store_true", help="machine readable output")
        if level:
            p.add_argument("--level", type=int, choices=(1, 2), default=2)

    p = sub.add_parser("verify", help="recompute the tables and diff against the expected rows")
    common(p)
    p.set_defaults(func=cmd_verify)
    for name, func, helptext in (
        ("trace", cmd_trace, "run the 2-ray game for one family"),
        ("classify", cmd_classify, "endpoint class of one family"),
        ("check-format", cmd_check_format, "Tom format and unprojection shape checks"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("id")
        common(p, level=name == "trace")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, SchemaError, CorpusError, OSError) as exc:
        print(f"two-ray: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GameError, BudgetExceeded, ValueError, ArithmeticError) as exc:
        print(f"two-ray: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
