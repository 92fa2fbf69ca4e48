"""Cost-optimal planning over ground tasks.

A* over bitmask states, guided by h_max (admissible) or by nothing at all
(``heuristic="blind"``, i.e. uniform-cost search).  Ties on f are broken by
smaller h, then by insertion order, so runs are deterministic.
"""
from __future__ import annotations

import heapq
import math
import threading
import time
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .grounding import GroundTask, Plan, Step, plan_cost


class BudgetExceeded(RuntimeError):
    """A search hit its expansion or time limit before reaching a verdict."""


@dataclass(frozen=True)
class Budget:
    """Search limits.  The first two apply to every planner call; the rest bound
    the model-space searches built on top of the planner."""

    max_expansions: int = 1_000_000
    time_limit: float = 60.0  # seconds, per planner call
    max_model_nodes: int | None = None
    search_time_limit: float | None = None  # seconds, per explainer call
    mme_max_delta: int = 16


DEFAULT_BUDGET = Budget()


class Status(str, Enum):
    SOLVED = "solved"
    UNSOLVABLE = "unsolvable"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass
class PlanResult:
    status: Status
    plan: Plan | None = None
    cost: float = math.inf
    expansions: int = 0
    elapsed: float = 0.0

    @property
    def solved(self) -> bool:
        return self.status is Status.SOLVED


class _Relaxation:
    """Per-task index structures for h_max."""

    def __init__(self, task: GroundTask):
        n = len(task.fluents)
        self.n = n
        self.pre_lists = []
        self.add_lists = []
        self.costs = []
        self.by_pre: list[list[int]] = [[] for _ in range(n)]
        self.no_pre = []
        for i, a in enumerate(task.actions):
            pre = _bits(a.pre)
            self.pre_lists.append(pre)
            self.add_lists.append(_bits(a.add))
            self.costs.append(a.cost)
            if not pre:
                self.no_pre.append(i)
            for f in pre:
                self.by_pre[f].append(i)
        self.goal = _bits(task.goal)

    def hmax(self, state: int) -> float:
        if not self.goal:
            return 0
        dist = [math.inf] * self.n
        heap = []
        for f in _bits(state):
            dist[f] = 0
            heap.append((0, f))
        remaining = [len(p) for p in self.pre_lists]
        for i in self.no_pre:
            c = self.costs[i]
            for f in self.add_lists[i]:
                if c < dist[f]:
                    dist[f] = c
                    heapq.heappush(heap, (c, f))
        goals_left = set(self.goal)
        worst = 0
        done = [False] * self.n
        while heap:
            d, f = heapq.heappop(heap)
            if done[f] or d > dist[f]:
                continue
            done[f] = True
            if f in goals_left:
                goals_left.discard(f)
                worst = d
                if not goals_left:
                    return worst
            for i in self.by_pre[f]:
                remaining[i] -= 1
                if remaining[i] == 0:
                    # popped in nondecreasing order, so d is the max over pre
                    c = d + self.costs[i]
                    for g in self.add_lists[i]:
                        if c < dist[g]:
                            dist[g] = c
                            heapq.heappush(heap, (c, g))
        return math.inf


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        low = mask & -mask
        i = low.bit_length() - 1
        out.append(i)
        mask ^= low
    return out


def _relaxation(task: GroundTask) -> _Relaxation:
    rel = getattr(task, "_hmax_cache", None)
    if rel is None:
        rel = _Relaxation(task)
        task._hmax_cache = rel
    return rel


def hmax(task: GroundTask, state: int | None = None) -> float:
    return _relaxation(task).hmax(task.init if state is None else state)


def astar(task: GroundTask, budget: Budget = DEFAULT_BUDGET, heuristic: str = "hmax",
          bound: float = math.inf) -> PlanResult:
    """A* search.  Only plans with cost strictly below ``bound`` are considered."""
    start_time = time.perf_counter()
    deadline = start_time + budget.time_limit
    if heuristic == "hmax":
        h = _relaxation(task).hmax
    elif heuristic == "blind":
        def h(_state):
            return 0
    else:
        raise ValueError(f"unknown heuristic {heuristic!r}")

    actions = task.actions
    goal = task.goal
    init = task.init
    h0 = h(init)
    if h0 >= bound or h0 == math.inf:
        return PlanResult(Status.UNSOLVABLE, elapsed=time.perf_counter() - start_time)

    g = {init: 0}
    parent: dict[int, tuple[int, int]] = {}
    hcache = {init: h0}
    counter = 0
    heap = [(h0, h0, counter, init)]
    closed = set()
    expansions = 0
    while heap:
        f, hv, _, state = heapq.heappop(heap)
        if state in closed:
            continue
        gs = g[state]
        if f > gs + hv:  # stale entry
            continue
        if state & goal == goal:
            plan = []
            s = state
            while s in parent:
                s, ai = parent[s]
                plan.append(actions[ai].name)
            plan.reverse()
            return PlanResult(Status.SOLVED, tuple(plan), gs, expansions, time.perf_counter() - start_time)
        closed.add(state)
        expansions += 1
        if expansions > budget.max_expansions:
            return PlanResult(Status.BUDGET_EXCEEDED, expansions=expansions,
                              elapsed=time.perf_counter() - start_time)
        if expansions & 1023 == 0 and time.perf_counter() > deadline:
            return PlanResult(Status.BUDGET_EXCEEDED, expansions=expansions,
                              elapsed=time.perf_counter() - start_time)
        for ai, a in enumerate(actions):
            if state & a.pre != a.pre:
                continue
            nxt = (state & ~a.dele) | a.add
            ng = gs + a.cost
            if ng >= bound:
                continue
            old = g.get(nxt)
            if old is not None and old <= ng:
                continue
            hn = hcache.get(nxt)
            if hn is None:
                hn = h(nxt)
                hcache[nxt] = hn
            if hn == math.inf or ng + hn >= bound:
                continue
            g[nxt] = ng
            parent[nxt] = (state, ai)
            closed.discard(nxt)
            counter += 1
            heapq.heappush(heap, (ng + hn, hn, counter, nxt))
    return PlanResult(Status.UNSOLVABLE, expansions=expansions, elapsed=time.perf_counter() - start_time)


def optimal_plan(task: GroundTask, budget: Budget = DEFAULT_BUDGET, heuristic: str = "hmax") -> PlanResult:
    return astar(task, budget, heuristic)


def optimal_cost(task: GroundTask, budget: Budget = DEFAULT_BUDGET, heuristic: str = "hmax") -> float:
    """C* of the task; ``math.inf`` if unsolvable.  Raises BudgetExceeded."""
    res = astar(task, budget, heuristic)
    if res.status is Status.BUDGET_EXCEEDED:
        raise BudgetExceeded(f"optimal_cost: {res.expansions} expansions")
    return res.cost


def cheaper_plan(task: GroundTask, cost: float, budget: Budget = DEFAULT_BUDGET) -> PlanResult:
    """Look for an (optimal) plan strictly cheaper than ``cost``."""
    return astar(task, budget, "hmax", bound=cost)


def is_plan_optimal(task: GroundTask, plan: Sequence[Step], budget: Budget = DEFAULT_BUDGET) -> bool:
    """True iff ``plan`` is valid and no strictly cheaper plan exists.  Raises BudgetExceeded."""
    c = plan_cost(task, plan)
    if c == math.inf:
        return False
    if c == 0:
        return True
    res = cheaper_plan(task, c, budget)
    if res.status is Status.BUDGET_EXCEEDED:
        raise BudgetExceeded(f"is_plan_optimal: {res.expansions} expansions")
    return res.status is Status.UNSOLVABLE


@dataclass
class PlannerStats:
    calls: int = 0
    cache_hits: int = 0
    expansions: int = 0


class Planner:
    """Budgeted planner with memoisation keyed on the canonical task identity.

    Safe to share between threads: the memo tables are guarded by a lock and
    searches themselves run outside it.
    """

    def __init__(self, budget: Budget = DEFAULT_BUDGET):
        self.budget = budget
        self.stats = PlannerStats()
        self._plans: dict[tuple, PlanResult] = {}
        self._optimal: dict[tuple, tuple[bool, Plan | None]] = {}
        self._lock = threading.Lock()

    def _count(self, res: PlanResult) -> None:
        with self._lock:
            self.stats.calls += 1
            self.stats.expansions += res.expansions

    def optimal_plan(self, task: GroundTask) -> PlanResult:
        key = task.key
        with self._lock:
            hit = self._plans.get(key)
            if hit is not None:
                self.stats.cache_hits += 1
                return hit
        res = astar(task, self.budget)
        self._count(res)
        if res.status is Status.BUDGET_EXCEEDED:
            raise BudgetExceeded(f"planner: {res.expansions} expansions / {res.elapsed:.1f}s")
        with self._lock:
            self._plans[key] = res
        return res

    def optimal_cost(self, task: GroundTask) -> float:
        return self.optimal_plan(task).cost

    def check_optimal(self, task: GroundTask, plan: Sequence[Step]) -> tuple[bool, Plan | None]:
        """(is ``plan`` optimal, a strictly cheaper optimal plan if one was found)."""
        plan = tuple(tuple(s) for s in plan)
        key = (task.key, plan)
        with self._lock:
            hit = self._optimal.get(key)
            if hit is not None:
                self.stats.cache_hits += 1
                return hit
        c = plan_cost(task, plan)
        if c == math.inf:
            out = (False, None)
        elif c == 0:
            out = (True, None)
        else:
            known = self._plans.get(task.key)
            if known is not None:
                out = (known.cost >= c, None if known.cost >= c else known.plan)
            else:
                res = cheaper_plan(task, c, self.budget)
                self._count(res)
                if res.status is Status.BUDGET_EXCEEDED:
                    raise BudgetExceeded(f"planner: {res.expansions} expansions / {res.elapsed:.1f}s")
                out = (res.status is Status.UNSOLVABLE, res.plan)
                if res.solved:
                    with self._lock:
                        self._plans.setdefault(task.key, res)
        with self._lock:
            self._optimal[key] = out
        return out

    def is_plan_optimal(self, task: GroundTask, plan: Sequence[Step]) -> bool:
        return self.check_optimal(task, plan)[0]
