"""``reconcile`` command line: plan, explain, validate, bench.

Exit codes: 0 ok, 1 bad input, 2 unsolvable, 3 budget exhausted,
4 plan rejected by ``validate``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import explainers as ex
from .grounding import format_plan, format_step, ground, parse_plan, plan_cost, validate
from .model_space import flatten, flatten_plan
from .pddl import PDDLError, load_model
from .perturb import (ACTION_FAULTS, DEFAULT_EXPLAINERS, FAULT_KINDS, FaultSpec, InsufficientCandidates,
                      load_problems, rows_to_csv, rows_to_json, run_matrix)
from .planner import Budget, BudgetExceeded, Planner

EXIT_OK, EXIT_INPUT, EXIT_UNSOLVABLE, EXIT_BUDGET, EXIT_INVALID = 0, 1, 2, 3, 4

CLASS_CHOICES = ("mpe", "ppe", "mce", "mce-approx", "mme")


class CliError(Exception):
    def __init__(self, msg: str, code: int):
        super().__init__(msg)
        self.code = code


def _budget(args) -> Budget:
    return Budget(max_expansions=args.max_expansions, time_limit=args.time_limit,
                  search_time_limit=args.time_limit)


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-expansions", type=int, default=1_000_000, help="per planner call")
    p.add_argument("--time-limit", type=float, default=60.0, help="seconds, per planner call and per search")


def _add_robot_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--robot-domain", "--domain", dest="robot_domain", required=True)
    p.add_argument("--robot-problem", "--problem", dest="robot_problem", required=True)


def _read_plan(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read plan: {e}", EXIT_INPUT) from None
    try:
        return parse_plan(text)
    except PDDLError as e:
        raise CliError(str(e.with_filename(path)), EXIT_INPUT) from None


def _load(domain: str, problem: str):
    try:
        return load_model(domain, problem)
    except PDDLError as e:
        raise CliError(str(e), EXIT_INPUT) from None
    except OSError as e:
        raise CliError(f"cannot read model: {e}", EXIT_INPUT) from None


def cmd_plan(args) -> int:
    model = _load(args.robot_domain, args.robot_problem)
    planner = Planner(_budget(args))
    res = planner.optimal_plan(ground(model))
    if not res.solved:
        print("unsolvable", file=sys.stderr)
        return EXIT_UNSOLVABLE
    text = format_plan(res.plan) + f"; cost = {res.cost}\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_explain(args) -> int:
    robot = _load(args.robot_domain, args.robot_problem)
    human = _load(args.human_domain, args.human_problem or args.robot_problem)
    budget = _budget(args)
    planner = Planner(budget)
    computed = args.plan is None
    if computed:
        res = planner.optimal_plan(ground(robot))
        if not res.solved:
            print("unsolvable: the robot model has no plan", file=sys.stderr)
            return EXIT_UNSOLVABLE
        plan = res.plan
    else:
        plan = _read_plan(args.plan)
    try:
        inst = ex.MrpInstance(robot, human, plan, granularity=args.granularity, budget=budget, planner=planner)
    except ex.NotOptimal as e:
        raise CliError(f"{e}", EXIT_INPUT) from None
    which = args.explainer
    if which == "mce" and args.no_heuristic:
        which = "mce-noh"
    expl = ex.explain(inst, which, budget=budget, seed=args.seed)
    task_r = inst.task(inst.gamma_r)
    cost = plan_cost(task_r, inst.search_plan)

    if args.json:
        out = expl.to_json()
        out["granularity"] = args.granularity
        out["plan"] = [format_step(s) for s in plan]
        out["plan_cost"] = cost
        out["plan_computed"] = computed
        out["rendering"] = expl.lines()
        print(json.dumps(out, indent=2))
        return EXIT_OK
    if args.demo:
        print("Plan >> " + " -> ".join(format_step(s) for s in plan) + f"  (cost {cost})")
        if not expl.edits:
            print("Explanation >> (none needed)")
        for line in expl.lines():
            print(f"Explanation >> {line}")
        return EXIT_OK
    if computed:
        print("; plan: " + " ".join(format_step(s) for s in plan) + f"  cost = {cost}", file=sys.stderr)
    for line in expl.lines():
        print(line)
    return EXIT_OK


def cmd_validate(args) -> int:
    model = _load(args.robot_domain, args.robot_problem)
    plan = _read_plan(args.plan)
    task = ground(model)
    if args.granularity == "grounded":
        task, plan = ground(flatten(model)), flatten_plan(plan)
    verdict = validate(task, plan)
    print(verdict.describe(plan))
    return EXIT_OK if verdict.valid else EXIT_INVALID


def cmd_bench(args) -> int:
    try:
        problems = load_problems(args.fixtures, args.domains)
    except PDDLError as e:
        raise CliError(str(e), EXIT_INPUT) from None
    except OSError as e:
        raise CliError(f"cannot read fixtures: {e}", EXIT_INPUT) from None
    if not problems:
        raise CliError("no problems found", EXIT_INPUT)
    try:
        specs = [FaultSpec(seed=args.seed + k, n_faults=n, fault_kinds=tuple(args.fault_kinds),
                           granularity=args.granularity, allow_additions=args.allow_additions)
                 for n in args.faults for k in range(args.instances)]
    except ValueError as e:
        raise CliError(str(e), EXIT_INPUT) from None
    rows = run_matrix(problems, specs, args.explainers, _budget(args), repeats=args.repeats,
                      jobs=args.jobs, seed=args.seed)
    with_times = not args.omit_times
    csv_text = rows_to_csv(rows, with_times)
    if args.csv:
        Path(args.csv).write_text(csv_text)
    if args.json_out:
        Path(args.json_out).write_text(rows_to_json(rows, with_times) + "\n")
    if not args.csv:
        sys.stdout.write(csv_text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="reconcile", description="Plan explanations as model reconciliation.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="compute a cost-optimal plan")
    _add_robot_flags(p)
    p.add_argument("--out", help="write the plan here instead of stdout")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("explain", help="explain a plan against a human model")
    _add_robot_flags(p)
    p.add_argument("--human-domain", required=True)
    p.add_argument("--human-problem", help="defaults to the robot problem")
    p.add_argument("--plan", help="plan file; an optimal robot plan is computed if omitted")
    p.add_argument("--class", dest="explainer", choices=CLASS_CHOICES, default="mce")
    p.add_argument("--no-heuristic", action="store_true", help="mce without relevance ordering")
    p.add_argument("--granularity", choices=("lifted", "grounded"), default="lifted")
    p.add_argument("--seed", type=int, default=None, help="random tie-breaking in the model search")
    p.add_argument("--json", action="store_true")
    p.add_argument("--demo", action="store_true", help="'Explanation >>' style output")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("validate", help="check a plan against a model")
    _add_robot_flags(p)
    p.add_argument("--plan", required=True)
    p.add_argument("--granularity", choices=("lifted", "grounded"), default="lifted")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="fault-injection benchmark matrix")
    p.add_argument("--fixtures", help="directory of <domain>/ folders (default: bundled)")
    p.add_argument("--domains", nargs="+")
    p.add_argument("--faults", type=int, nargs="+", default=[5])
    p.add_argument("--instances", type=int, default=1, help="seeded instances per fault count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fault-kinds", nargs="+", choices=sorted(FAULT_KINDS), default=list(ACTION_FAULTS))
    p.add_argument("--allow-additions", action="store_true")
    p.add_argument("--granularity", choices=("lifted", "grounded"), default="lifted")
    p.add_argument("--explainers", nargs="+", choices=sorted(ex.EXPLAINERS), default=list(DEFAULT_EXPLAINERS))
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", help="write CSV here (default: stdout)")
    p.add_argument("--json-out", help="also write JSON rows here")
    p.add_argument("--omit-times", action="store_true", help="blank the time column (byte-stable output)")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ex.SearchSpaceTooLarge as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ex.Unsolvable, ex.NoExplanation) as e:
        print(f"unsolvable: {e}", file=sys.stderr)
        return EXIT_UNSOLVABLE
    except (InsufficientCandidates, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
