"""Slow, obviously-correct reference implementations used by the tests.

Nothing here imports the planner or the grounder: actions are instantiated
directly from the lifted model, states are frozensets of atoms, and optimal
costs come from plain Dijkstra.  Model-space answers are found by enumerating
subsets of the model difference.
"""
from __future__ import annotations

import heapq
import itertools
import math

from reconcile.model_space import IllFormedState, apply_edits, gamma, gamma_inverse, model_delta, merge_templates


def _is_a(model, typ, want):
    parents = dict(model.domain.types)
    seen = set()
    while typ not in seen:
        if typ == want:
            return True
        seen.add(typ)
        typ = parents.get(typ, "object")
    return want == "object"


def instantiate(model):
    """{(name, *args): (pre, add, del, cost)} with frozenset atom sets."""
    objs = dict(model.domain.constants)
    objs.update(model.objects)
    out = {}
    for s in model.domain.schemas:
        pools = [sorted(o for o, t in objs.items() if _is_a(model, t, want)) for _, want in s.parameters]
        for args in itertools.product(*pools):
            env = dict(zip((v for v, _ in s.parameters), args))

            def sub(atoms):
                return frozenset((a[0],) + tuple(env.get(x, x) for x in a[1:]) for a in atoms)

            out[(s.name,) + args] = (sub(s.preconditions), sub(s.add_effects), sub(s.del_effects), s.cost)
    return out


def step(actions, state, name):
    """Successor state, or None if inapplicable / unknown."""
    a = actions.get(tuple(name))
    if a is None or not a[0] <= state:
        return None
    return (state - a[2]) | a[1]


def plan_cost(model, plan, actions=None):
    actions = actions if actions is not None else instantiate(model)
    state = frozenset(model.init)
    total = 0
    for name in plan:
        state = step(actions, state, name)
        if state is None:
            return math.inf
        total += actions[tuple(name)][3]
    return total if model.goal <= state else math.inf


def blind_search(model, limit=200_000, bound=math.inf):
    """(optimal cost, states closed) by uniform-cost search.

    Only costs strictly below ``bound`` are explored; cost is inf if no such plan exists.
    """
    actions = sorted(instantiate(model).items())
    start = frozenset(model.init)
    dist = {start: 0}
    heap = [(0, 0, start)]
    tie = itertools.count(1)
    done = set()
    while heap:
        d, _, s = heapq.heappop(heap)
        if s in done:
            continue
        done.add(s)
        if model.goal <= s:
            return d, len(done)
        if len(done) > limit:
            raise RuntimeError("oracle state limit")
        for _, (pre, add, dele, c) in actions:
            if pre <= s and d + c < bound:
                t = (s - dele) | add
                if d + c < dist.get(t, math.inf):
                    dist[t] = d + c
                    heapq.heappush(heap, (d + c, next(tie), t))
    return math.inf, len(done)


def optimal_cost(model):
    return blind_search(model)[0]


def reachable_states(model, limit=200_000):
    actions = list(instantiate(model).values())
    start = frozenset(model.init)
    seen = {start}
    todo = [start]
    while todo:
        s = todo.pop()
        for pre, add, dele, _ in actions:
            if pre <= s:
                t = (s - dele) | add
                if t not in seen:
                    seen.add(t)
                    if len(seen) > limit:
                        return len(seen)
                    todo.append(t)
    return len(seen)


class Reconciliation:
    """Brute-force view of one reconciliation instance (lifted or pre-flattened models)."""

    def __init__(self, robot, human, plan):
        self.robot, self.human, self.plan = robot, human, tuple(tuple(s) for s in plan)
        self.template = merge_templates(robot, human)
        self.gh = gamma(human)
        self.delta = sorted(model_delta(self.gh, gamma(robot)))
        self._memo = {}

    def complete(self, edits) -> bool:
        key = frozenset(edits)
        if key not in self._memo:
            try:
                m = gamma_inverse(apply_edits(self.gh, key), self.template)
            except IllFormedState:
                self._memo[key] = False
                return False
            c = plan_cost(m, self.plan)
            self._memo[key] = c < math.inf and blind_search(m, bound=c)[0] == math.inf
        return self._memo[key]

    def subsets(self, k):
        return (frozenset(c) for c in itertools.combinations(self.delta, k))

    def min_complete_size(self) -> int:
        for k in range(len(self.delta) + 1):
            if any(self.complete(s) for s in self.subsets(k)):
                return k
        raise AssertionError("even the full difference is not complete")

    def is_monotonic(self, edits) -> bool:
        edits = frozenset(edits)
        rest = [e for e in self.delta if e not in edits]
        return all(self.complete(edits | set(extra))
                   for k in range(len(rest) + 1) for extra in itertools.combinations(rest, k))

    def minimal_monotonic(self) -> tuple[int, list[frozenset]]:
        """Size of the smallest monotonic edit set, and all sets of that size."""
        everything = [frozenset(c) for k in range(len(self.delta) + 1) for c in itertools.combinations(self.delta, k)]
        ok = {s: self.complete(s) for s in everything}
        # monotonic(S) iff S complete and every one-step extension monotonic; go top down
        mono = {}
        for s in sorted(everything, key=len, reverse=True):
            mono[s] = ok[s] and all(mono[s | {e}] for e in self.delta if e not in s)
        best = min(len(s) for s in everything if mono[s])
        return best, [s for s in everything if mono[s] and len(s) == best]
