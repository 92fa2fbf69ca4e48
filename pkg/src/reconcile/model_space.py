"""Planning models as flat feature sets, and unit edits between them.

A model is encoded as a set of features such as ``move-has-precondition-hand-tucked``
(one per init atom, goal atom, precondition, add/delete effect and action cost).
Edits add or remove a single feature; explanation search happens over subsets
of the symmetric difference between two such sets.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, replace
from functools import total_ordering
from typing import Iterable

from .pddl import ActionSchema, Atom, Domain, LiftedModel
from .grounding import bindings, Plan

log = logging.getLogger(__name__)

INIT = "init-has"
GOAL = "goal-has"
PRE = "precondition"
ADD = "add-effect"
DEL = "del-effect"
COST = "cost"
KINDS = (INIT, GOAL, PRE, ADD, DEL, COST)
ACTION_KINDS = (PRE, ADD, DEL, COST)


class IllFormedState(ValueError):
    pass


class IllegalEdit(ValueError):
    pass


def render_atom(atom: Atom) -> str:
    return "_".join(atom)


@total_ordering
@dataclass(frozen=True)
class ModelFeature:
    kind: str
    action: str | None = None
    atom: Atom | None = None
    cost_value: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown feature kind {self.kind!r}")
        if (self.kind in (INIT, GOAL)) != (self.action is None):
            raise ValueError(f"{self.kind} features {'must not' if self.action is None else 'must'} "
                             "name an action")
        if (self.kind == COST) != (self.cost_value is not None) or (self.kind == COST) == (self.atom is not None):
            raise ValueError("exactly one of atom / cost_value must be set")

    @property
    def sort_key(self) -> tuple:
        return (self.action or "", KINDS.index(self.kind), self.atom or (), self.cost_value or 0)

    def __lt__(self, other: "ModelFeature") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        if self.kind in (INIT, GOAL):
            return f"{self.kind}-{render_atom(self.atom)}"
        tail = str(self.cost_value) if self.kind == COST else render_atom(self.atom)
        return f"{self.action}-has-{self.kind}-{tail}"


ModelState = frozenset  # frozenset[ModelFeature]


@dataclass(frozen=True, order=True)
class Edit:
    feature: ModelFeature
    sign: str  # "add" | "remove"

    def __post_init__(self):
        if self.sign not in ("add", "remove"):
            raise ValueError(f"bad edit sign {self.sign!r}")

    def __str__(self) -> str:
        return str(self.feature) if self.sign == "add" else f"not {self.feature}"

    def inverse(self) -> "Edit":
        return Edit(self.feature, "remove" if self.sign == "add" else "add")

    def to_json(self) -> dict:
        return {"sign": self.sign, "feature": str(self.feature)}


def gamma(model: LiftedModel) -> ModelState:
    feats = [ModelFeature(INIT, atom=a) for a in model.init]
    feats += [ModelFeature(GOAL, atom=a) for a in model.goal]
    for s in model.schemas:
        feats += [ModelFeature(PRE, s.name, a) for a in s.preconditions]
        feats += [ModelFeature(ADD, s.name, a) for a in s.add_effects]
        feats += [ModelFeature(DEL, s.name, a) for a in s.del_effects]
        feats.append(ModelFeature(COST, s.name, cost_value=s.cost))
    return frozenset(feats)


def gamma_inverse(state: Iterable[ModelFeature], template: LiftedModel) -> LiftedModel:
    """Rebuild a model from its features.

    ``template`` supplies everything the encoding leaves out: types, predicates,
    objects and the parameter lists of every schema that may appear.
    """
    init, goal = set(), set()
    parts: dict[str, dict[str, set]] = defaultdict(lambda: {PRE: set(), ADD: set(), DEL: set(), COST: set()})
    for f in state:
        if f.kind == INIT:
            init.add(f.atom)
        elif f.kind == GOAL:
            goal.add(f.atom)
        else:
            parts[f.action][f.kind].add(f.cost_value if f.kind == COST else f.atom)
    signatures = {s.name: s.parameters for s in template.schemas}
    schemas = []
    for name in sorted(parts):
        p = parts[name]
        if name not in signatures:
            raise IllFormedState(f"feature names action '{name}' unknown to the template")
        clash = p[ADD] & p[DEL]
        if clash:
            raise IllFormedState(f"action '{name}' both adds and deletes {sorted(clash)[0]}")
        if len(p[COST]) > 1:
            raise IllFormedState(f"action '{name}' has several costs {sorted(p[COST])}")
        if p[COST]:
            cost = next(iter(p[COST]))
        else:
            log.warning("action '%s' has no cost feature; defaulting to 1", name)
            cost = 1
        schemas.append(ActionSchema(name, signatures[name], frozenset(p[PRE]), frozenset(p[ADD]),
                                    frozenset(p[DEL]), cost))
    domain = template.domain
    reqs = set(domain.requirements)
    if any(s.cost != 1 for s in schemas):
        reqs.add(":action-costs")
    domain = replace(domain, requirements=frozenset(reqs), schemas=tuple(schemas))
    return replace(template, domain=domain, init=frozenset(init), goal=frozenset(goal))


def model_delta(a: ModelState, b: ModelState) -> frozenset:
    """Edits taking ``a`` to ``b``: adds for b minus a, removes for a minus b."""
    return frozenset([Edit(f, "add") for f in b - a] + [Edit(f, "remove") for f in a - b])


def apply_edits(state: ModelState, edits: Iterable[Edit]) -> ModelState:
    edits = list(edits)
    adds = {e.feature for e in edits if e.sign == "add"}
    removes = {e.feature for e in edits if e.sign == "remove"}
    if adds & removes:
        raise IllegalEdit(f"feature both added and removed: {sorted(adds & removes)[0]}")
    present = adds & state
    if present:
        raise IllegalEdit(f"cannot add present feature {sorted(present)[0]}")
    absent = removes - state
    if absent:
        raise IllegalEdit(f"cannot remove absent feature {sorted(absent)[0]}")
    return frozenset((state - removes) | adds)


def check_state(state: Iterable[ModelFeature]) -> None:
    """Raise IllFormedState unless ``state`` meets the feature-set invariants."""
    costs: dict[str, int] = defaultdict(int)
    adds, dels = set(), set()
    for f in state:
        if f.kind == COST:
            costs[f.action] += 1
        elif f.kind == ADD:
            adds.add((f.action, f.atom))
        elif f.kind == DEL:
            dels.add((f.action, f.atom))
    multi = [a for a, n in costs.items() if n > 1]
    if multi:
        raise IllFormedState(f"action '{multi[0]}' has several cost features")
    if adds & dels:
        a, atom = sorted(adds & dels)[0]
        raise IllFormedState(f"action '{a}' both adds and deletes {atom}")


def feature_actions(features: Iterable[ModelFeature]) -> set[str]:
    return {f.action for f in features if f.action is not None}


# ---------------------------------------------------------------------------
# grounded granularity

def ground_name(step) -> str:
    return "_".join(step)


def flatten(model: LiftedModel) -> LiftedModel:
    """Re-express a model with one parameterless schema per ground action.

    ``move ?from ?to`` becomes ``move_loc1_loc2`` etc., so that features speak
    about individual ground actions.  Atoms a ground action both deletes and
    adds are kept as adds only, which leaves its effect unchanged.
    """
    schemas = []
    seen = set()
    for s in model.schemas:
        for args in bindings(model, s):
            env = dict(zip(s.variables, args))

            def sub(atoms):
                return frozenset((a[0],) + tuple(env.get(x, x) for x in a[1:]) for a in atoms)

            name = ground_name((s.name,) + args)
            if name in seen:
                raise ValueError(f"ground action name clash on '{name}'")
            seen.add(name)
            add = sub(s.add_effects)
            # delete-then-add: an atom both deleted and added stays true
            schemas.append(ActionSchema(name, (), sub(s.preconditions), add,
                                        sub(s.del_effects) - add, s.cost))
    return model.with_schemas(schemas)


def flatten_plan(plan: Plan) -> Plan:
    return tuple((ground_name(step),) for step in plan)


def merge_templates(*models: LiftedModel) -> LiftedModel:
    """A template covering the union of several models' vocabularies.

    Shared names must agree (same parent type, same predicate signature,
    same object type, same schema parameters).
    """
    first = models[0]

    def union(label, getter):
        merged: dict = {}
        for m in models:
            for k, v in getter(m):
                if k in merged and merged[k] != v:
                    raise ValueError(f"models disagree on {label} '{k}': {merged[k]} vs {v}")
                merged[k] = v
        return tuple(sorted(merged.items()))

    types = union("type", lambda m: m.domain.types)
    constants = union("constant", lambda m: m.domain.constants)
    predicates = union("predicate", lambda m: m.domain.predicates)
    objects = union("object", lambda m: m.objects)
    params = union("schema parameters", lambda m: ((s.name, s.parameters) for s in m.schemas))
    reqs = frozenset().union(*(m.domain.requirements for m in models))
    domain = Domain(first.domain.name, reqs, types, constants, predicates,
                    tuple(ActionSchema(n, p) for n, p in params))
    return LiftedModel(domain, first.problem_name, objects, first.init, first.goal)
