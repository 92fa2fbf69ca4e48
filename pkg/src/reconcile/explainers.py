"""Explanations as model updates for a model reconciliation instance.

Given the planner's model, the human's model and a plan that is optimal in the
former, each explainer returns a set of edits (oriented human -> robot) to be
applied to the human's model:

    mpe          the whole model difference
    ppe          the difference restricted to actions used by the plan
    mce_exact    smallest edit set after which the plan is optimal
    mce_approx   same search with cheap necessary conditions instead of a planner
    mme          smallest edit set whose completeness survives any further edits
"""
from __future__ import annotations

import heapq
import itertools
import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .grounding import GroundTask, Plan, causal_link_coverage, ground, plan_cost
from .model_space import (Edit, IllFormedState, ModelState, apply_edits, flatten,
                          flatten_plan, gamma, gamma_inverse, merge_templates, model_delta)
from .pddl import LiftedModel
from .planner import DEFAULT_BUDGET, Budget, BudgetExceeded, Planner

MPE, PPE, MCE, MCE_APPROX, MME = "MPE", "PPE", "MCE", "MCE-approx", "MME"
CLASSES = (MPE, PPE, MCE, MCE_APPROX, MME)


class NotOptimal(ValueError):
    """The plan handed to an instance is not optimal in the robot's model."""


class Unsolvable(ValueError):
    pass


class NoExplanation(RuntimeError):
    pass


class SearchSpaceTooLarge(ValueError):
    pass


@dataclass
class Explanation:
    kind: str
    edits: tuple[Edit, ...]
    expansions: int = 0
    evaluated: int = 0
    planner_calls: int = 0
    elapsed: float = 0.0
    complete: bool | None = None
    monotonic: bool | None = None
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        self.edits = tuple(sorted(self.edits))

    @property
    def size(self) -> int:
        return len(self.edits)

    def lines(self) -> list[str]:
        return [str(e) for e in self.edits]

    def to_json(self) -> dict:
        return {
            "class": self.kind,
            "edits": [e.to_json() for e in self.edits],
            "size": self.size,
            "complete": self.complete,
            "monotonic": self.monotonic,
            "expansions": self.expansions,
            "planner_calls": self.planner_calls,
            "elapsed_ms": round(self.elapsed * 1000, 3),
            "flags": list(self.flags),
        }


class MrpInstance:
    """A plan, the robot's model it is optimal in, and the human's model.

    With ``granularity="grounded"`` both models are first re-expressed with one
    schema per ground action, so edits name ground actions (``move_loc1_loc2``).
    """

    def __init__(self, robot_model: LiftedModel, human_model: LiftedModel, plan: Plan,
                 granularity: str = "lifted", budget: Budget = DEFAULT_BUDGET,
                 planner: Planner | None = None, verify: bool = True):
        if granularity not in ("lifted", "grounded"):
            raise ValueError(f"unknown granularity {granularity!r}")
        self.plan = tuple(tuple(s) for s in plan)
        self.granularity = granularity
        self.budget = budget
        self.planner = planner or Planner(budget)
        if granularity == "grounded":
            robot_model, human_model = flatten(robot_model), flatten(human_model)
            self.search_plan = flatten_plan(self.plan)
        else:
            self.search_plan = self.plan
        self.robot_model = robot_model
        self.human_model = human_model
        self.template = merge_templates(robot_model, human_model)
        self.gamma_r = gamma(robot_model)
        self.gamma_h = gamma(human_model)
        self.delta: tuple[Edit, ...] = tuple(sorted(model_delta(self.gamma_h, self.gamma_r)))
        self._adds = [e.feature if e.sign == "add" else None for e in self.delta]
        self._removes = [e.feature if e.sign == "remove" else None for e in self.delta]
        self._tasks: dict[ModelState, GroundTask | None] = {}
        self._complete: dict[ModelState, bool] = {}
        if verify:
            task = self.task(self.gamma_r)
            if not self.planner.is_plan_optimal(task, self.search_plan):
                raise NotOptimal("plan is not optimal in the robot's model "
                                 f"(cost {plan_cost(task, self.search_plan)}, "
                                 f"optimum {self.planner.optimal_cost(task)})")

    @classmethod
    def build(cls, robot_model: LiftedModel, human_model: LiftedModel, plan: Plan | None = None,
              **kwargs) -> "MrpInstance":
        """Like the constructor, but computes an optimal robot plan when none is given."""
        if plan is None:
            planner = kwargs.get("planner") or Planner(kwargs.get("budget", DEFAULT_BUDGET))
            kwargs["planner"] = planner
            res = planner.optimal_plan(ground(robot_model))
            if not res.solved:
                raise Unsolvable("robot model has no plan")
            plan = res.plan
        return cls(robot_model, human_model, plan, **kwargs)

    # -- model evaluation -------------------------------------------------

    def state_for(self, applied: int) -> ModelState:
        """Human model with the delta edits whose bits are set in ``applied``."""
        added, removed = [], []
        i = 0
        while applied:
            if applied & 1:
                if self._adds[i] is not None:
                    added.append(self._adds[i])
                else:
                    removed.append(self._removes[i])
            applied >>= 1
            i += 1
        return (self.gamma_h - frozenset(removed)) | frozenset(added)

    def model(self, state: ModelState) -> LiftedModel:
        return gamma_inverse(state, self.template)

    def task(self, state: ModelState) -> GroundTask | None:
        """Ground task of a model state, or None if the state is not a well-formed model."""
        try:
            return self._tasks[state]
        except KeyError:
            pass
        try:
            task = ground(self.model(state))
        except IllFormedState:
            task = None
        self._tasks[state] = task
        return task

    def is_complete(self, state: ModelState) -> bool:
        """Is the plan optimal in the model described by ``state``?"""
        hit = self._complete.get(state)
        if hit is None:
            task = self.task(state)
            hit = task is not None and self.planner.is_plan_optimal(task, self.search_plan)
            self._complete[state] = hit
        return hit

    def edits_of(self, applied: int) -> tuple[Edit, ...]:
        return tuple(e for i, e in enumerate(self.delta) if applied >> i & 1)

    def mask_of(self, edits: Iterable[Edit]) -> int:
        index = {e: i for i, e in enumerate(self.delta)}
        m = 0
        for e in edits:
            if e not in index:
                raise ValueError(f"edit {e} is not part of the model difference")
            m |= 1 << index[e]
        return m

    def plan_actions(self, plan: Sequence | None) -> set[str]:
        """Feature-level action identifiers used by a plan (already in search naming)."""
        return {step[0] for step in plan or ()}


class _Run:
    """Bookkeeping shared by the explainers: timing, planner calls, budget."""

    def __init__(self, inst: MrpInstance, budget: Budget | None):
        self.inst = inst
        self.budget = budget or inst.budget
        self.t0 = time.perf_counter()
        self.calls0 = inst.planner.stats.calls
        self.expansions = 0
        self.evaluated = 0

    def tick(self) -> None:
        self.evaluated += 1
        b = self.budget
        if b.max_model_nodes is not None and self.evaluated > b.max_model_nodes:
            raise BudgetExceeded(f"model-space search exceeded {b.max_model_nodes} nodes")
        if b.search_time_limit is not None and time.perf_counter() - self.t0 > b.search_time_limit:
            raise BudgetExceeded(f"model-space search exceeded {b.search_time_limit}s")

    def result(self, kind: str, edits: Iterable[Edit], **kw) -> Explanation:
        return Explanation(kind, tuple(edits), expansions=self.expansions, evaluated=self.evaluated,
                           planner_calls=self.inst.planner.stats.calls - self.calls0,
                           elapsed=time.perf_counter() - self.t0, **kw)


# ---------------------------------------------------------------------------
# direct explanations

def mpe(inst: MrpInstance) -> Explanation:
    run = _Run(inst, None)
    return run.result(MPE, inst.delta, complete=True, monotonic=True)


def ppe(inst: MrpInstance) -> Explanation:
    """Model differences on actions that occur in the plan.

    Init/goal differences are kept when their atom occurs in a precondition or
    effect of a plan step in either model; such explanations carry the
    ``ppe-init-goal-scope`` flag.
    """
    run = _Run(inst, None)
    acts = inst.plan_actions(inst.search_plan)
    atoms = set()
    for task in (inst.task(inst.gamma_r), inst.task(inst.gamma_h)):
        atoms |= _step_atoms(task, inst.search_plan)
    edits, flags = [], []
    for e in inst.delta:
        f = e.feature
        if f.action is not None:
            if f.action in acts:
                edits.append(e)
        elif f.atom in atoms:
            edits.append(e)
            flags = ["ppe-init-goal-scope"]
    return run.result(PPE, edits, flags=tuple(flags))


def _step_atoms(task: GroundTask | None, plan: Sequence) -> set:
    if task is None:
        return set()
    mask = 0
    for step in plan or ():
        a = task.by_name.get(tuple(step))
        if a is not None:
            mask |= a.pre | a.add | a.dele
    return set(task.atoms(mask))


# ---------------------------------------------------------------------------
# model-space search from the human's model

def _search_up(inst: MrpInstance, run: _Run, goal_test: Callable[[int], bool],
               relevance: Callable[[int], Callable[[Edit], bool]] | None,
               seed: int | None) -> int:
    """Uniform-cost search over subsets of the delta, starting from the human model.

    Every edit costs 1, so the first subset passing ``goal_test`` has minimum
    cardinality.  ``relevance(parent)`` returns a predicate over edits; among
    equal-cost candidates, relevant ones are popped first.  Ties are broken
    lexicographically, or uniformly at random when a seed is given.
    """
    n = len(inst.delta)
    rng = random.Random(seed) if seed is not None else None
    counter = itertools.count()

    def key(mask):
        if rng is not None:
            return rng.random()
        return tuple(i for i in range(n) if mask >> i & 1)

    fringe = [(0, 0, key(0), next(counter), 0)]
    closed = set()
    while fringe:
        cost, _, _, _, mask = heapq.heappop(fringe)
        if mask in closed:
            continue
        closed.add(mask)
        run.tick()
        if goal_test(mask):
            return mask
        run.expansions += 1
        relevant = relevance(mask) if relevance is not None else None
        for i in range(n):
            bit = 1 << i
            if mask & bit:
                continue
            child = mask | bit
            if child in closed:
                continue
            flag = 0 if relevant is None or relevant(inst.delta[i]) else 1
            heapq.heappush(fringe, (cost + 1, flag, key(child), next(counter), child))
    raise NoExplanation("no subset of the model difference makes the plan optimal")


def _relevance_from(inst: MrpInstance, task: GroundTask | None, plans: Sequence) -> Callable[[Edit], bool]:
    acts = set()
    atoms = set()
    for p in plans:
        acts |= inst.plan_actions(p)
        atoms |= _step_atoms(task, p)

    def relevant(edit: Edit) -> bool:
        f = edit.feature
        if f.action is not None:
            return f.action in acts
        return f.atom in atoms

    return relevant


def mce_exact(inst: MrpInstance, use_heuristic: bool = True, budget: Budget | None = None,
              seed: int | None = None) -> Explanation:
    run = _Run(inst, budget)

    def goal(mask: int) -> bool:
        return inst.is_complete(inst.state_for(mask))

    def relevance(mask: int):
        # pi_H is the cheaper plan that refuted optimality at this node.  When
        # the robot plan does not execute there is none, and relevance is
        # judged on the robot plan alone (no extra planner call).
        state = inst.state_for(mask)
        task = inst.task(state)
        pi_h = None
        if task is not None:
            pi_h = inst.planner.check_optimal(task, inst.search_plan)[1]
        return _relevance_from(inst, task, [inst.search_plan, pi_h])

    found = _search_up(inst, run, goal, relevance if use_heuristic else None, seed)
    flags = ("relevance-ordering",) if use_heuristic else ()
    return run.result(MCE, inst.edits_of(found), complete=True, flags=flags)


def mce_approx(inst: MrpInstance, budget: Budget | None = None, seed: int | None = None) -> Explanation:
    """Approximate MCE: the optimality test is replaced by three cheap conditions.

    1. the plan executes in the updated model;
    2. it got cheaper than in the human's model, or the human's own optimal
       plan no longer executes;
    3. every step contributes a causal link.
    """
    run = _Run(inst, budget)
    task_h = inst.task(inst.gamma_h)
    base_cost = plan_cost(task_h, inst.search_plan) if task_h is not None else math.inf
    pi_h = None
    if base_cost < math.inf:
        optimal, pi_h = inst.planner.check_optimal(task_h, inst.search_plan)
        if optimal:
            # already explicable in the human's model
            return run.result(MCE_APPROX, (), flags=("approximate",))
    # when the plan fails in the human's model, condition 2 follows from 1
    # (any executable cost beats inf), so pi_H is not needed

    def goal(mask: int) -> bool:
        task = inst.task(inst.state_for(mask))
        if task is None:
            return False
        c = plan_cost(task, inst.search_plan)
        if c == math.inf:
            return False
        if not (pi_h is None or plan_cost(task, pi_h) == math.inf or c < base_cost):
            return False
        return causal_link_coverage(task, inst.search_plan)

    relevant = _relevance_from(inst, task_h, [inst.search_plan, pi_h])
    found = _search_up(inst, run, goal, lambda _mask: relevant, seed)
    return run.result(MCE_APPROX, inst.edits_of(found), flags=("approximate",))


# ---------------------------------------------------------------------------
# model-space search from the robot's model

@dataclass
class _DownSearch:
    safe: list[int] = field(default_factory=list)
    failed: list[int] = field(default_factory=list)


def _search_down(inst: MrpInstance, run: _Run, prune: bool) -> _DownSearch:
    """Enumerate, level by level, every set R of delta edits that can be undone
    from the robot's model such that the plan stays optimal after undoing any
    subset of R.

    With ``prune`` a set is discarded as soon as it contains a set already
    known to break optimality; without it, such sets are still evaluated and
    only afterwards rejected because some immediate subset is unsafe.
    """
    n = len(inst.delta)
    full = (1 << n) - 1
    out = _DownSearch()
    safe = set()
    fringe = [(0, (), 0)]
    closed = set()

    def contains_failed(mask: int) -> bool:
        return any(f & mask == f for f in out.failed)

    while fringe:
        size, _, removed = heapq.heappop(fringe)
        if removed in closed:
            continue
        closed.add(removed)
        if prune and contains_failed(removed):
            continue
        run.tick()
        complete = inst.is_complete(inst.state_for(full ^ removed))
        if not complete:
            out.failed.append(removed)
            continue
        if not prune and any(removed ^ (1 << i) not in safe for i in range(n) if removed >> i & 1):
            continue
        safe.add(removed)
        out.safe.append(removed)
        run.expansions += 1
        for i in range(n):
            bit = 1 << i
            if removed & bit:
                continue
            child = removed | bit
            if child in closed or (prune and contains_failed(child)):
                continue
            heapq.heappush(fringe, (size + 1, tuple(j for j in range(n) if child >> j & 1), child))
    return out


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _check_mme_size(inst: MrpInstance, budget: Budget) -> None:
    if len(inst.delta) > budget.mme_max_delta:
        raise SearchSpaceTooLarge(
            f"model difference has {len(inst.delta)} edits (limit {budget.mme_max_delta}); "
            "exact MME search is exponential in it, use --class mce instead")


def mme(inst: MrpInstance, budget: Budget | None = None, prune: bool = True) -> Explanation:
    run = _Run(inst, budget)
    _check_mme_size(inst, run.budget)
    found = _search_down(inst, run, prune)
    best = 0
    for s in found.safe:
        # among equally large sets the last one in canonical order wins
        if _popcount(s) >= _popcount(best):
            best = s
    full = (1 << len(inst.delta)) - 1
    flags = () if prune else ("no-pruning",)
    return run.result(MME, inst.edits_of(full ^ best), complete=True, monotonic=True, flags=flags)


def enumerate_mmes(inst: MrpInstance, budget: Budget | None = None) -> list[Explanation]:
    """Every minimum-size monotonic explanation (there may be several)."""
    run = _Run(inst, budget)
    _check_mme_size(inst, run.budget)
    found = _search_down(inst, run, prune=True)
    top = max(_popcount(s) for s in found.safe)
    full = (1 << len(inst.delta)) - 1
    return [run.result(MME, inst.edits_of(full ^ s), complete=True, monotonic=True)
            for s in found.safe if _popcount(s) == top]


# ---------------------------------------------------------------------------
# properties of explanations

def check_completeness(inst: MrpInstance, expl: Explanation | Iterable[Edit]) -> bool:
    edits = expl.edits if isinstance(expl, Explanation) else tuple(expl)
    return inst.is_complete(apply_edits(inst.gamma_h, edits))


@dataclass
class MonotonicityVerdict:
    monotonic: bool
    exhaustive: bool
    checked: int
    total: int
    witness: tuple[Edit, ...] | None = None  # further edits that break completeness
    confidence: float = 1.0  # bound on the fraction of unseen failures is 1 - confidence

    def __bool__(self) -> bool:
        return self.monotonic


def check_monotonicity(inst: MrpInstance, expl: Explanation | Iterable[Edit], budget: Budget | None = None,
                       exhaustive_limit: int = 20, samples: int = 2000, seed: int = 0) -> MonotonicityVerdict:
    """Does completeness hold after the explanation plus any further subset of the
    remaining model difference?

    Exhaustive (smallest extensions first) up to ``exhaustive_limit`` remaining
    edits; above that, ``samples`` random extensions are tried and the verdict
    is flagged non-exhaustive.
    """
    edits = expl.edits if isinstance(expl, Explanation) else tuple(expl)
    run = _Run(inst, budget)
    base = inst.mask_of(edits)
    rest = [i for i in range(len(inst.delta)) if not base >> i & 1]
    total = 2 ** len(rest)

    def fails(extra: Sequence[int]) -> bool:
        run.tick()
        mask = base
        for i in extra:
            mask |= 1 << i
        return not inst.is_complete(inst.state_for(mask))

    checked = 0
    if len(rest) <= exhaustive_limit:
        for k in range(len(rest) + 1):
            for extra in itertools.combinations(rest, k):
                checked += 1
                if fails(extra):
                    return MonotonicityVerdict(False, True, checked, total,
                                               tuple(inst.delta[i] for i in extra))
        return MonotonicityVerdict(True, True, checked, total)
    rng = random.Random(seed)
    for _ in range(samples):
        extra = [i for i in rest if rng.random() < 0.5]
        checked += 1
        if fails(extra):
            return MonotonicityVerdict(False, False, checked, total, tuple(inst.delta[i] for i in extra))
    # rule of three: with no failure in N samples, the failing fraction is < 3/N at 95%
    return MonotonicityVerdict(True, False, checked, total, confidence=max(0.0, 1 - 3 / samples))


EXPLAINERS: dict[str, Callable[..., Explanation]] = {
    "mpe": lambda inst, **kw: mpe(inst),
    "ppe": lambda inst, **kw: ppe(inst),
    "mce": lambda inst, **kw: mce_exact(inst, use_heuristic=True, budget=kw.get("budget"), seed=kw.get("seed")),
    "mce-noh": lambda inst, **kw: mce_exact(inst, use_heuristic=False, budget=kw.get("budget"),
                                            seed=kw.get("seed")),
    "mce-approx": lambda inst, **kw: mce_approx(inst, budget=kw.get("budget"), seed=kw.get("seed")),
    "mme": lambda inst, **kw: mme(inst, budget=kw.get("budget")),
}


def explain(inst: MrpInstance, which: str, **kw) -> Explanation:
    try:
        fn = EXPLAINERS[which]
    except KeyError:
        raise ValueError(f"unknown explainer {which!r}; choose from {sorted(EXPLAINERS)}") from None
    return fn(inst, **kw)
