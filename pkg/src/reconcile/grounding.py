"""Grounding of lifted models into STRIPS tasks, and plan execution.

States inside a ground task are bitmasks over an indexed fluent universe;
the set-based helpers (``progress``, ``plan_cost``, ``validate``) wrap that
for callers who think in atoms.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .pddl import ActionSchema, Atom, LiftedModel, PDDLSyntaxError, format_atom, parse_sexpr

Step = tuple  # (action name, obj1, obj2, ...)
Plan = tuple  # tuple[Step, ...]


class UnknownAction(KeyError):
    pass


@dataclass(frozen=True)
class GroundAction:
    name: Step
    pre: int
    add: int
    dele: int
    cost: int

    def __str__(self) -> str:
        return format_atom(self.name)


class GroundTask:
    """Grounded STRIPS task; immutable after construction."""

    def __init__(self, fluents: Sequence[Atom], actions: Iterable[GroundAction], init: int, goal: int):
        self.fluents = tuple(fluents)
        self.index = {f: i for i, f in enumerate(self.fluents)}
        self.actions = tuple(sorted(actions, key=lambda a: a.name))
        self.by_name = {a.name: a for a in self.actions}
        self.init = init
        self.goal = goal

    def mask(self, atoms: Iterable[Atom]) -> int:
        m = 0
        for a in atoms:
            m |= 1 << self.index[a]
        return m

    def atoms(self, mask: int) -> frozenset:
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(self.fluents[i])
            mask >>= 1
            i += 1
        return frozenset(out)

    def action(self, name: Step) -> GroundAction:
        try:
            return self.by_name[tuple(name)]
        except KeyError:
            raise UnknownAction(format_atom(name)) from None

    @cached_property
    def key(self) -> tuple:
        """Canonical, hashable identity of the task (memoisation key)."""
        return (
            self.fluents,
            tuple((a.name, a.pre, a.add, a.dele, a.cost) for a in self.actions),
            self.init,
            self.goal,
        )

    def __repr__(self) -> str:
        return f"GroundTask(|F|={len(self.fluents)}, |A|={len(self.actions)})"


def _substitute(atoms: Iterable[Atom], binding: dict[str, str]) -> list[Atom]:
    return [(a[0],) + tuple(binding.get(x, x) for x in a[1:]) for a in atoms]


def bindings(model: LiftedModel, schema: ActionSchema) -> list[tuple[str, ...]]:
    """All type-consistent argument tuples for ``schema`` (full Cartesian product)."""
    pools = [model.objects_of_type(t) for _, t in schema.parameters]
    return list(itertools.product(*pools))


def ground(model: LiftedModel) -> GroundTask:
    grounded = []
    universe: set[Atom] = set(model.init) | set(model.goal)
    for schema in model.schemas:
        variables = schema.variables
        for args in bindings(model, schema):
            env = dict(zip(variables, args))
            pre = _substitute(schema.preconditions, env)
            add = _substitute(schema.add_effects, env)
            dele = _substitute(schema.del_effects, env)
            universe.update(pre, add, dele)
            grounded.append(((schema.name,) + args, pre, add, dele, schema.cost))
    fluents = sorted(universe)
    index = {f: i for i, f in enumerate(fluents)}

    def m(atoms):
        out = 0
        for a in atoms:
            out |= 1 << index[a]
        return out

    actions = [GroundAction(name, m(pre), m(add), m(dele), cost) for name, pre, add, dele, cost in grounded]
    return GroundTask(fluents, actions, m(model.init), m(model.goal))


# ---------------------------------------------------------------------------
# execution semantics

def apply_mask(state: int, action: GroundAction) -> int | None:
    if state & action.pre != action.pre:
        return None
    return (state & ~action.dele) | action.add


def progress(task: GroundTask, state: Iterable[Atom], name: Step) -> frozenset | None:
    """Successor of ``state`` under action ``name``; None when the action is inapplicable.

    Raises UnknownAction if ``name`` does not ground in this task.
    """
    action = task.action(name)
    state = frozenset(state)
    pre = task.atoms(action.pre)
    if not pre <= state:
        return None
    return (state - task.atoms(action.dele)) | task.atoms(action.add)


def plan_cost(task: GroundTask, plan: Sequence[Step]) -> float:
    """Sum of action costs if the plan reaches the goal from init, otherwise inf."""
    state = task.init
    total = 0
    for step in plan:
        action = task.by_name.get(tuple(step))
        if action is None:
            return math.inf
        state = apply_mask(state, action)
        if state is None:
            return math.inf
        total += action.cost
    if state & task.goal != task.goal:
        return math.inf
    return total


def is_valid(task: GroundTask, plan: Sequence[Step]) -> bool:
    return plan_cost(task, plan) < math.inf


@dataclass(frozen=True)
class Verdict:
    valid: bool
    cost: float
    failing_step: int | None = None
    unknown_action: bool = False
    missing: frozenset = frozenset()
    goal_gap: frozenset = frozenset()

    def describe(self, plan: Sequence[Step] = ()) -> str:
        if self.valid:
            return f"valid, cost {self.cost}"
        if self.failing_step is not None:
            step = format_atom(plan[self.failing_step]) if plan else f"#{self.failing_step}"
            if self.unknown_action:
                return f"invalid at step {self.failing_step} {step}: unknown action"
            missing = " ".join(format_atom(a) for a in sorted(self.missing))
            return f"invalid at step {self.failing_step} {step}: missing {missing}"
        gap = " ".join(format_atom(a) for a in sorted(self.goal_gap))
        return f"invalid: goal not reached, unmet {gap}"


def validate(task: GroundTask, plan: Sequence[Step]) -> Verdict:
    state = task.init
    total = 0
    for i, step in enumerate(plan):
        action = task.by_name.get(tuple(step))
        if action is None:
            return Verdict(False, math.inf, failing_step=i, unknown_action=True)
        nxt = apply_mask(state, action)
        if nxt is None:
            return Verdict(False, math.inf, failing_step=i, missing=task.atoms(action.pre & ~state))
        state = nxt
        total += action.cost
    gap = task.goal & ~state
    if gap:
        return Verdict(False, math.inf, goal_gap=task.atoms(gap))
    return Verdict(True, total)


def causal_link_coverage(task: GroundTask, plan: Sequence[Step]) -> bool:
    """True when every step supplies some effect that a later step (or the goal)
    needs, with no step in between deleting it.

    Unknown actions make the check fail.
    """
    acts = []
    for step in plan:
        a = task.by_name.get(tuple(step))
        if a is None:
            return False
        acts.append(a)
    # the goal acts as a final consumer with no effects
    consumers = [(a.pre, a.dele) for a in acts] + [(task.goal, 0)]
    for i, a in enumerate(acts):
        live = a.add
        for pre, dele in consumers[i + 1:]:
            if live & pre:
                break
            live &= ~dele
            if not live:
                return False
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# plan files

def format_step(step: Step) -> str:
    return format_atom(step)


def parse_plan(text: str) -> Plan:
    """Read a plan in the usual planner-output form: one ``(name args...)`` per line.

    ``;`` comments (e.g. a trailing ``; cost = 4``) are ignored.
    """
    steps = []
    for expr in parse_sexpr(text):
        if not isinstance(expr, list) or not expr or any(isinstance(x, list) for x in expr):
            raise PDDLSyntaxError(f"malformed plan step {expr!r}", getattr(expr, "line", None),
                                  getattr(expr, "col", None))
        steps.append(tuple(str(x) for x in expr))
    return tuple(steps)


def format_plan(plan: Sequence[Step]) -> str:
    return "".join(format_step(s) + "\n" for s in plan)
