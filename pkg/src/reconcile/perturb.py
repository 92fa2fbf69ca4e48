"""Human models by fault injection, and the explainer benchmark matrix."""
from __future__ import annotations

import csv
import io
import itertools
import json
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .explainers import EXPLAINERS, MrpInstance, SearchSpaceTooLarge, explain
from .grounding import ground
from .model_space import (ADD, DEL, GOAL, INIT, PRE, ModelFeature, flatten, gamma, gamma_inverse)
from .pddl import LiftedModel, load_model
from .planner import DEFAULT_BUDGET, Budget, BudgetExceeded, Planner

FAULT_KINDS = {
    "drop-precondition": PRE,
    "drop-add-effect": ADD,
    "drop-del-effect": DEL,
    "drop-init": INIT,
    "drop-goal": GOAL,
}
ACTION_FAULTS = ("drop-precondition", "drop-add-effect", "drop-del-effect")

CSV_COLUMNS = ("domain", "problem", "explainer", "size", "time_ms", "expansions", "planner_calls", "status")
DEFAULT_EXPLAINERS = ("mpe", "ppe", "mce-noh", "mce", "mce-approx", "mme")


class InsufficientCandidates(ValueError):
    pass


@dataclass(frozen=True)
class FaultSpec:
    seed: int = 0
    n_faults: int = 5
    fault_kinds: tuple[str, ...] = ACTION_FAULTS
    granularity: str = "lifted"
    allow_additions: bool = False

    def __post_init__(self):
        unknown = set(self.fault_kinds) - set(FAULT_KINDS)
        if unknown:
            raise ValueError(f"unknown fault kinds {sorted(unknown)}")
        if self.n_faults < 0:
            raise ValueError("n_faults must be >= 0")
        if self.granularity not in ("lifted", "grounded"):
            raise ValueError(f"unknown granularity {self.granularity!r}")

    @property
    def tag(self) -> str:
        return f"f{self.n_faults}s{self.seed}"


def _addition_candidates(model: LiftedModel, kinds: set[str]) -> list[ModelFeature]:
    """Features absent from the model that could be added to one of its schemas."""
    dom = model.domain
    consts = dict(dom.constants)
    present = gamma(model)
    out = []
    for s in model.schemas:
        terms = list(s.parameters) + sorted(consts.items())
        for pred, sig in dom.predicates:
            pools = [[v for v, t in terms if dom.is_subtype(t, want)] for want in sig]
            for args in itertools.product(*pools):
                atom = (pred,) + args
                for kind in (PRE, ADD, DEL):
                    if kind not in kinds:
                        continue
                    f = ModelFeature(kind, s.name, atom)
                    if f not in present:
                        out.append(f)
    return out


def drop_features(model: LiftedModel, features: Iterable[ModelFeature]) -> LiftedModel:
    state = gamma(model)
    features = set(features)
    missing = features - state
    if missing:
        raise ValueError(f"features not in the model: {sorted(map(str, missing))}")
    return gamma_inverse(state - features, model)


def inject(model: LiftedModel, spec: FaultSpec) -> LiftedModel:
    """Weaken ``model`` by removing ``spec.n_faults`` random features.

    With ``allow_additions`` the faults may also add features the model lacks
    (preconditions/effects over a schema's own parameters).  The result is
    deterministic in ``spec.seed``.
    """
    if spec.granularity == "grounded":
        model = flatten(model)
    kinds = {FAULT_KINDS[k] for k in spec.fault_kinds}
    state = gamma(model)
    removals = sorted(f for f in state if f.kind in kinds)
    additions = _addition_candidates(model, kinds) if spec.allow_additions else []
    pool = [(f, "remove") for f in removals] + [(f, "add") for f in sorted(additions)]
    if spec.n_faults > len(pool):
        raise InsufficientCandidates(f"{spec.n_faults} faults requested, {len(pool)} candidates available")
    rng = random.Random(spec.seed)
    order = pool[:]
    rng.shuffle(order)
    chosen_rm, chosen_add = set(), set()
    for f, sign in order:
        if len(chosen_rm) + len(chosen_add) == spec.n_faults:
            break
        if sign == "remove":
            chosen_rm.add(f)
            continue
        # keep the model well formed: no atom both added and deleted by one action
        twin_kind = {ADD: DEL, DEL: ADD}.get(f.kind)
        if twin_kind is not None:
            twin = ModelFeature(twin_kind, f.action, f.atom)
            if (twin in state and twin not in chosen_rm) or twin in chosen_add:
                continue
        chosen_add.add(f)
    if len(chosen_rm) + len(chosen_add) < spec.n_faults:
        raise InsufficientCandidates(f"could only place {len(chosen_rm) + len(chosen_add)} consistent faults")
    return gamma_inverse((state - chosen_rm) | chosen_add, model)


# ---------------------------------------------------------------------------
# fixtures

@dataclass(frozen=True)
class Problem:
    domain: str
    problem_id: str
    model: LiftedModel


def fixture_root() -> Path:
    return Path(str(resources.files("reconcile") / "fixtures"))


def load_problems(root: str | Path | None = None, domains: Sequence[str] | None = None) -> list[Problem]:
    """Problems laid out as ``<root>/<domain>/{domain,robot-domain}.pddl`` + ``problem*.pddl``."""
    root = Path(root) if root is not None else fixture_root()
    out = []
    for d in sorted(p for p in root.iterdir() if p.is_dir()):
        if domains and d.name not in domains:
            continue
        dom = d / "domain.pddl"
        if not dom.exists():
            dom = d / "robot-domain.pddl"
        if not dom.exists():
            continue
        for prob in sorted(d.glob("problem*.pddl")):
            out.append(Problem(d.name, prob.stem, load_model(dom, prob)))
    return out


# ---------------------------------------------------------------------------
# experiment matrix

@dataclass
class BenchRow:
    domain: str
    problem: str
    explainer: str
    size: int | None = None
    time_ms: float | None = None
    expansions: int | None = None
    planner_calls: int | None = None
    status: str = "ok"
    delta: int | None = None
    evaluated: int | None = None
    times_ms: list[float] = field(default_factory=list)

    def csv_row(self, with_times: bool = True) -> list[str]:
        def fmt(v):
            return "" if v is None else str(v)
        t = f"{self.time_ms:.1f}" if with_times and self.time_ms is not None else ""
        return [self.domain, self.problem, self.explainer, fmt(self.size), t,
                fmt(self.expansions), fmt(self.planner_calls), self.status]


def run_one(problem: Problem, spec: FaultSpec, explainer: str, budget: Budget = DEFAULT_BUDGET,
            repeats: int = 3, seed: int | None = None) -> BenchRow:
    """One matrix cell.  Each repeat gets a fresh instance so memo tables do not carry over."""
    row = BenchRow(problem.domain, f"{problem.problem_id}:{spec.tag}", explainer)
    try:
        human = inject(problem.model, spec)
        robot = flatten(problem.model) if spec.granularity == "grounded" else problem.model
        planner = Planner(budget)
        res = planner.optimal_plan(ground(robot))
        if not res.solved:
            row.status = "unsolvable"
            return row
        for r in range(max(1, repeats)):
            inst = MrpInstance(robot, human, res.plan, budget=budget, planner=Planner(budget))
            if r == 0:
                row.delta = len(inst.delta)
            expl = explain(inst, explainer, budget=budget, seed=seed)
            row.times_ms.append(expl.elapsed * 1000)
            if r == 0:
                row.size = expl.size
                row.expansions = expl.expansions
                row.evaluated = expl.evaluated
                row.planner_calls = expl.planner_calls
        row.time_ms = statistics.median(row.times_ms)
    except BudgetExceeded:
        row.status = "budget"
    except SearchSpaceTooLarge:
        row.status = "too-large"
    except Exception as e:  # recorded per row, never aborts the matrix
        row.status = f"error:{type(e).__name__}"
    if row.status != "ok":
        row.size = None
    return row


def _run_cell(args) -> BenchRow:
    return run_one(*args)


def run_matrix(problems: Sequence[Problem], specs: Sequence[FaultSpec],
               explainers: Sequence[str] = DEFAULT_EXPLAINERS, budget: Budget = DEFAULT_BUDGET,
               repeats: int = 3, jobs: int = 1, seed: int | None = None) -> list[BenchRow]:
    for e in explainers:
        if e not in EXPLAINERS:
            raise ValueError(f"unknown explainer {e!r}")
    cells = [(p, s, e, budget, repeats, seed) for p in problems for s in specs for e in explainers]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map preserves submission order, so output order is canonical
            return list(pool.map(_run_cell, cells))
    return [_run_cell(c) for c in cells]


def rows_to_csv(rows: Iterable[BenchRow], with_times: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_row(with_times))
    return buf.getvalue()


def rows_to_json(rows: Iterable[BenchRow], with_times: bool = True) -> str:
    out = []
    for r in rows:
        d = asdict(r)
        if not with_times:
            d["time_ms"] = None
            d["times_ms"] = []
        out.append(d)
    return json.dumps(out, indent=2)
