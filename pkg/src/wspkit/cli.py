"""Command-line front end.

Exit codes: 0 = satisfiable / valid / success, 1 = unsatisfiable / invalid,
2 = error (parse failure, classification failure, bad arguments).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from wspkit import classify as cls
from wspkit import formats, kernel, reductions, solver
from wspkit.core import is_valid_plan, validate_schema
from wspkit.errors import WspError
from wspkit.formats import parse_constraint_line


def _read(path: str) -> str:
    return Path(path).read_text()


def _load_schema(path: str):
    schema = formats.parse_instance(_read(path))
    report = validate_schema(schema)
    if report.errors:
        raise WspError("invalid instance: " + "; ".join(report.errors))
    return schema


def cmd_solve(args) -> int:
    schema = _load_schema(args.instance)
    if args.engine == "fpt":
        outcome = solver.solve_fpt(schema, task_cap=args.task_cap)
    else:
        outcome = solver.solve_bruteforce(schema, plan_cap=args.plan_cap)
    print(f"status: {outcome.status}")
    if not outcome.satisfiable:
        return 1
    text = formats.serialize_plan(outcome.plan, schema.tasks)
    if args.plan_out:
        Path(args.plan_out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    schema = _load_schema(args.instance)
    plan = formats.parse_plan(_read(args.plan))
    verdict = is_valid_plan(schema, plan)
    if verdict:
        print("valid")
        return 0
    for v in verdict.violations:
        print(f"violation [{v.check}]: {v.detail}")
    return 1


def cmd_kernelize(args) -> int:
    schema = _load_schema(args.instance)
    result = kernel.kernelize(schema)
    reduced = result.schema
    print(f"tasks: {len(schema.tasks)} -> {len(reduced.tasks)}")
    print(f"users: {len(schema.users)} -> {len(reduced.users)}")
    print(f"constraints: {len(schema.constraints)} -> {len(reduced.constraints)}")
    print(f"verdict: {result.verdict}")
    header = [
        f"kernelized from {args.instance}",
        f"verdict: {result.verdict}",
    ]
    Path(args.out).write_text(formats.serialize_instance(reduced, header))
    if args.log:
        Path(args.log).write_text(formats.serialize_kernel_log(result))
    return 0


def _spec_from_args(args) -> cls.RelationSpec:
    if args.spec:
        return formats.parse_relation_spec(_read(args.spec))
    tokens = [args.kind]
    if args.params:
        tokens.extend(args.params.split(","))
    arity = args.arity
    names = [str(i) for i in range(1, arity + 1)]
    kind = args.kind
    if kind in ("eq", "neq"):
        tokens = [kind, names[0], names[1] if arity >= 2 else names[0]]
    elif kind in ("bind", "sep"):
        split = args.split
        tokens = [kind,
                  "{%s}" % ",".join(names[:split]),
                  "{%s}" % ",".join(names[split:])]
        if args.params:
            raise WspError(f"{kind} takes --split, not --params")
    elif kind in ("atmost", "atleast"):
        tokens = [kind, args.params or "2", "{%s}" % ",".join(names)]
    elif kind == "peruser":
        lo, hi = (args.params or "1,2").split(",")
        tokens = [kind, lo, hi, "{%s}" % ",".join(names)]
    else:
        raise WspError(f"unknown kind {kind!r}")
    constraint = parse_constraint_line(tokens)
    return cls.spec_from_constraint(constraint, arity_cap=args.arity_cap)


def cmd_classify(args) -> int:
    spec = _spec_from_args(args)
    print(f"arity: {spec.arity}")
    reg = cls.is_regular(spec)
    print(f"regular: {'yes' if reg.regular else 'no'}")
    if not reg.regular:
        blocks = sorted(sorted(b) for b in reg.counterexample)
        print("  counterexample partition: "
              + "|".join("{%s}" % ",".join(map(str, b)) for b in blocks))
    else:
        closed = cls.is_intersection_closed(spec)
        print(f"intersection-closed: {'yes' if closed.intersection_closed else 'no'}")
        if not closed.intersection_closed:
            a, b = closed.witness
            print(f"  witness: {sorted(a)} and {sorted(b)}")
    if spec.arity == 3:
        ok = cls.matches_ternary_condition(spec)
        print(f"ternary-gadget condition: {'yes' if ok else 'no'}")
    return 0


def cmd_reduce(args) -> int:
    if args.source == "sat":
        formula = formats.parse_dimacs(_read(args.input))
        schema = reductions.sat_to_wsp(formula)
        header = [
            f"reduced from CNF {args.input}",
            f"variables: {formula.num_vars} clauses: {len(formula.clauses)}",
            f"tasks: {len(schema.tasks)} (= 2n+1) users: {len(schema.users)}",
        ]
    else:
        inst = formats.parse_mchs(_read(args.input))
        gadget = reductions.GADGETS.get(args.gadget)
        if gadget is None:
            raise WspError(
                f"unknown gadget {args.gadget!r}; choose from "
                + ", ".join(sorted(reductions.GADGETS))
            )
        schema = reductions.mchs_to_wsp(inst, gadget)
        header = [
            f"reduced from MCHS {args.input} with gadget {gadget.name}",
            f"colors: {inst.num_colors} sets: {len(inst.sets)}",
            f"tasks: {len(schema.tasks)} constraints: {len(schema.constraints)}",
        ]
    text = formats.serialize_instance(schema, header)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for line in header:
        print(f"# {line}", file=sys.stderr)
    return 0


def cmd_generate(args) -> int:
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    schema = reductions.gen_random_instance(
        args.tasks, args.users, args.constraints, kinds, args.seed, args.density
    )
    header = [
        f"generated: tasks={args.tasks} users={args.users} "
        f"constraints={args.constraints}",
        f"kinds={args.kinds} density={args.density} seed={args.seed}",
    ]
    text = formats.serialize_instance(schema, header)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsp", description="Workflow satisfiability toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide an instance and emit a plan")
    p.add_argument("instance")
    p.add_argument("--engine", choices=("fpt", "brute"), default="fpt")
    p.add_argument("--plan-out")
    p.add_argument("--task-cap", type=int, default=solver.DEFAULT_TASK_CAP)
    p.add_argument("--plan-cap", type=int, default=solver.DEFAULT_PLAN_CAP)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a plan against an instance")
    p.add_argument("instance")
    p.add_argument("plan")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kernelize", help="reduce users to at most the task count")
    p.add_argument("instance")
    p.add_argument("--out", required=True)
    p.add_argument("--log")
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("classify", help="classify a relation")
    p.add_argument("spec", nargs="?", help="relation spec file")
    p.add_argument("--kind", help="catalog kind instead of a spec file")
    p.add_argument("--params", help="comma-separated integer parameters")
    p.add_argument("--arity", type=int, default=3)
    p.add_argument("--split", type=int, default=1,
                   help="left set size for bind/sep instantiation")
    p.add_argument("--arity-cap", type=int, default=cls.DEFAULT_ARITY_CAP)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reduce", help="build a WSP instance from SAT or MCHS")
    p.add_argument("input")
    p.add_argument("--from", dest="source", choices=("sat", "mchs"), required=True)
    p.add_argument("--gadget", default="bind-singleton")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("generate", help="generate a random instance")
    p.add_argument("--tasks", type=int, required=True)
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--constraints", type=int, required=True)
    p.add_argument("--kinds", default="neq,peruser")
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "classify" and not args.spec and not args.kind:
        print("error: classify needs a spec file or --kind", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (WspError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
