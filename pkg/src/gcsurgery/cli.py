"""Command line entry point: ``gcsurgery <command> ...``.

Exit status: 0 on success (or a verified certificate), 1 when a
verification or invariant check fails, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import calculus, planner
from .diagram import (
    FramedLinkDiagram,
    as_fraction,
    build_borromean,
    build_chain,
    build_hopf,
    build_s1_sigma,
    build_unknot,
)
from .invariants import DEFAULT_BUDGET, invariant_report, report_json
from .torus_surgery import ProductFourManifold, ledger_report

OK, FAILURE, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _write(path, text):
    """Write atomically, or to stdout when no path is given."""
    if not path or path == "-":
        sys.stdout.write(text + "\n")
        return
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text + "\n")
    os.replace(tmp, path)


def _load_json(path_or_text):
    try:
        if os.path.exists(path_or_text):
            with open(path_or_text) as fh:
                return json.load(fh)
        if not path_or_text.lstrip().startswith(("{", "[")):
            raise InputError("no such file: %s" % path_or_text)
        return json.loads(path_or_text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError("cannot read %s: %s" % (path_or_text, exc))


def _load_diagram(path):
    data = _load_json(path)
    if "three_manifold" in data:
        data = data["three_manifold"]
    return FramedLinkDiagram.from_dict(data)


def _framings(text, count=None):
    vals = [as_fraction(v) for v in text.split(",")] if text else []
    if count is not None:
        vals = (vals + [as_fraction(0)] * count)[:count] if len(vals) <= count else None
        if vals is None:
            raise InputError("preset takes at most %d framings" % count)
    return vals


def cmd_build(args):
    preset = args.preset
    if preset == "unknot":
        d = build_unknot(*_framings(args.framing, 1))
    elif preset == "hopf":
        d = build_hopf(*_framings(args.framing, 2))
    elif preset == "chain":
        vals = _framings(args.framing)
        if not vals:
            raise InputError("chain needs --framing f1,f2,...")
        d = build_chain(vals)
    elif preset == "borromean":
        d = build_borromean(*_framings(args.framing, 3))
    else:
        if args.h is None:
            raise InputError("s1-sigma needs --h")
        d = build_s1_sigma(args.h)
    _write(args.output, d.to_json())
    return OK


def cmd_inv(args):
    d = _load_diagram(args.file)
    rep = invariant_report(d, with_pi1=args.pi1, budget=args.budget)
    if args.json:
        print(report_json(rep))
    else:
        h1 = rep["h1"]
        print("H1: rank %d, torsion %s" % (h1["rank"], h1["torsion"]))
        if "pi1" in rep:
            pi1 = rep["pi1"]
            print("pi1: <%s | %s>" % (", ".join(pi1["generators"]), ", ".join(pi1["relators"])))
        rec = rep["recognition"]
        print("recognized: %s (%s)" % (rec["name"], rec["confidence"]))
    return OK


def cmd_apply(args):
    d = _load_diagram(args.file)
    params = _load_json(args.params) if args.params else {}
    if not isinstance(params, dict):
        raise InputError("--params must be a JSON object")
    out, step = calculus.apply_rule(d, args.rule, check_pi1=args.check_pi1, **params)
    _write(args.output, out.to_json())
    info = step.to_dict()
    print(json.dumps(info, sort_keys=True) if args.json
          else "%s: H1 %s -> %s" % (step.rule, step.h1_before, step.h1_after), file=sys.stderr)
    return OK


def cmd_normalize(args):
    d = _load_diagram(args.file)
    out, trace = calculus.normalize(d, check_pi1=args.check_pi1)
    _write(args.output, out.to_json())
    if args.trace:
        _write(args.trace, json.dumps(trace.to_dict(), indent=2, sort_keys=True))
    print("%d steps: %s" % (len(trace.steps), ", ".join(s.rule for s in trace.steps)),
          file=sys.stderr)
    return OK


def _target_from_args(args):
    p = [int(x) for x in args.p.split(",")] if args.p else []
    c = args.c if args.c is not None else len(p)
    return planner.TargetSpec(args.a, args.g, args.b, c, tuple(p), args.n)


def cmd_plan(args):
    sched = planner.make_schedule(_target_from_args(args))
    _write(args.output, sched.to_json())
    return OK


def cmd_run(args):
    sched = planner.SurgerySchedule.from_dict(_load_json(args.schedule))
    m = planner.execute(sched, args.convention)
    _write(args.output, m.to_json())
    return OK


def _summarize(cert, as_json):
    if as_json:
        print(json.dumps({"target": cert.target.to_dict(), "verdict": cert.verdict,
                          "h1": cert.to_dict()["h1"]}, sort_keys=True))
    else:
        print("%s: %s (H1 expected %s, computed %s; loci %d/%d)"
              % (cert.target, cert.verdict, cert.h1_expected, cert.h1_computed,
                 cert.loci_computed, cert.loci_expected))


def cmd_verify(args):
    if args.grid:
        targets = _load_json(args.grid)
        code = OK
        for data in targets:
            cert = planner.plan_run_verify(planner.TargetSpec.from_dict(data), args.convention)
            _summarize(cert, args.json)
            if cert.verdict != planner.VERIFIED:
                code = FAILURE
        return code
    if not args.result or not args.target:
        raise InputError("verify needs RESULT and --target (or --grid FILE)")
    m = ProductFourManifold.from_dict(_load_json(args.result))
    t = planner.TargetSpec.from_dict(_load_json(args.target))
    cert = planner.verify(m, t, check_pi1=args.check_pi1)
    if args.cert:
        _write(args.cert, cert.to_json())
    _summarize(cert, args.json)
    return OK if cert.verdict == planner.VERIFIED else FAILURE


def cmd_report(args):
    data = _load_json(args.file)
    if "ledger" in data:
        rep = ledger_report(ProductFourManifold.from_dict(data))
    elif "verdict" in data:
        rep = {k: data[k] for k in ("target", "h1", "loci", "parity_ok", "summands", "verdict")}
    else:
        rep = invariant_report(FramedLinkDiagram.from_dict(data), with_pi1=False)
    if args.json:
        print(report_json(rep))
    else:
        for key, value in sorted(rep.items()):
            print("%s: %s" % (key, json.dumps(value, sort_keys=True)))
    return OK


def build_parser():
    ap = argparse.ArgumentParser(prog="gcsurgery", description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="write a library diagram")
    b.add_argument("--preset", required=True,
                   choices=["unknot", "hopf", "chain", "borromean", "s1-sigma"])
    b.add_argument("--framing", help="comma separated framings, e.g. 1,-2 or 7/3")
    b.add_argument("--h", type=int, help="genus for s1-sigma")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_build)

    i = sub.add_parser("inv", parents=[common], help="homology, pi_1 and recognition")
    i.add_argument("file")
    i.add_argument("--pi1", action="store_true")
    i.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="Tietze step budget")
    i.set_defaults(func=cmd_inv)

    a = sub.add_parser("apply", parents=[common], help="apply one calculus rule")
    a.add_argument("file")
    a.add_argument("--rule", required=True, choices=sorted(calculus.RULES))
    a.add_argument("--params", help='JSON object, e.g. \'{"cid": 0}\'')
    a.add_argument("--check-pi1", action="store_true")
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_apply)

    nz = sub.add_parser("normalize", parents=[common], help="simplify a diagram")
    nz.add_argument("file")
    nz.add_argument("--check-pi1", action="store_true")
    nz.add_argument("-o", "--output")
    nz.add_argument("--trace")
    nz.set_defaults(func=cmd_normalize)

    pl = sub.add_parser("plan", parents=[common], help="surgery schedule for a target")
    pl.add_argument("--a", type=int, default=0)
    pl.add_argument("--g", type=int, default=0)
    pl.add_argument("--b", type=int, default=0)
    pl.add_argument("--c", type=int)
    pl.add_argument("--p", help="lens orders, comma separated")
    pl.add_argument("--n", type=int, required=True)
    pl.add_argument("-o", "--output")
    pl.set_defaults(func=cmd_plan)

    r = sub.add_parser("run", parents=[common], help="execute a schedule")
    r.add_argument("schedule")
    r.add_argument("--convention", choices=["figure", "slope"], default="figure")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", parents=[common], help="certify a result against a target")
    v.add_argument("result", nargs="?")
    v.add_argument("--target", help="target JSON file or inline JSON")
    v.add_argument("--cert")
    v.add_argument("--grid", help="JSON list of targets: plan, run and verify each")
    v.add_argument("--convention", choices=["figure", "slope"], default="figure")
    v.add_argument("--check-pi1", action="store_true")
    v.set_defaults(func=cmd_verify)

    rp = sub.add_parser("report", parents=[common], help="ledger, certificate or invariant summary")
    rp.add_argument("file")
    rp.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except calculus.InvariantViolation as exc:
        print("invariant check failed: %s" % exc, file=sys.stderr)
        return FAILURE
    except (InputError, ValueError, KeyError, TypeError) as exc:
        # RuleError and DiagramError are ValueErrors
        print("error: %s" % exc, file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
