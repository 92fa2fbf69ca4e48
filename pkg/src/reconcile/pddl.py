"""Parser and emitter for typed STRIPS PDDL with optional action costs.

Only the fragment that maps onto a flat feature space is accepted:
``:strips``, ``:typing`` and ``:action-costs`` (``(increase (total-cost) k)``).
Anything else is rejected with a diagnostic carrying ``file:line:col``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Iterator

Atom = tuple  # (predicate, arg1, arg2, ...)

SUPPORTED_REQUIREMENTS = frozenset({":strips", ":typing", ":action-costs"})

# requirement -> human name used in diagnostics
_UNSUPPORTED_KEYWORDS = {
    "not": "negative-preconditions",
    "or": "disjunctive-preconditions",
    "imply": "disjunctive-preconditions",
    "exists": "existential-preconditions",
    "forall": "universal-preconditions/effects",
    "when": "conditional-effects",
    "=": "equality",
    "either": "either-types",
    "decrease": "numeric-fluents",
    "assign": "numeric-fluents",
    "scale-up": "numeric-fluents",
    "scale-down": "numeric-fluents",
}


class PDDLError(Exception):
    """Base class for all front-end diagnostics."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None,
                 filename: str | None = None):
        self.message = message
        self.line = line
        self.col = col
        self.filename = filename
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.filename or "<string>"
        if self.line is not None:
            where += f":{self.line}:{self.col}"
        return f"{where}: {self.message}"

    def with_filename(self, filename: str) -> "PDDLError":
        self.filename = filename
        self.args = (str(self),)
        return self


class PDDLSyntaxError(PDDLError):
    pass


class UnsupportedFeature(PDDLError):
    pass


class SemanticError(PDDLError):
    pass


class UndeclaredObject(SemanticError):
    pass


# ---------------------------------------------------------------------------
# s-expressions

class Token(str):
    """A symbol that remembers where it came from."""

    line: int
    col: int

    def __new__(cls, text: str, line: int, col: int):
        tok = super().__new__(cls, text)
        tok.line = line
        tok.col = col
        return tok


class SList(list):
    line: int = 0
    col: int = 0


_TOKEN_RE = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


def _tokens(text: str) -> Iterator[Token]:
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        s = m.group()
        if s[0] in " \t\r\n\f\v" or s[0] == ";":
            nl = s.count("\n")
            if nl:
                line += nl
                line_start = m.start() + s.rfind("\n") + 1
            continue
        yield Token(s, line, m.start() - line_start + 1)


def parse_sexpr(text: str) -> list:
    """Read every top-level s-expression in ``text``; symbols are lower-cased."""
    stack: list[SList] = [SList()]
    for tok in _tokens(text):
        if tok == "(":
            node = SList()
            node.line, node.col = tok.line, tok.col
            stack.append(node)
        elif tok == ")":
            if len(stack) == 1:
                raise PDDLSyntaxError("unbalanced ')'", tok.line, tok.col)
            node = stack.pop()
            stack[-1].append(node)
        else:
            stack[-1].append(Token(tok.lower(), tok.line, tok.col))
    if len(stack) > 1:
        node = stack[-1]
        raise PDDLSyntaxError("unclosed '('", node.line, node.col)
    return list(stack[0])


def _pos(node) -> tuple[int | None, int | None]:
    return getattr(node, "line", None), getattr(node, "col", None)


def _expect_list(node, what: str) -> SList:
    if not isinstance(node, list):
        raise PDDLSyntaxError(f"expected {what}, got {node!r}", *_pos(node))
    return node


def _expect_symbol(node, what: str) -> Token:
    if isinstance(node, list):
        raise PDDLSyntaxError(f"expected {what}, got a list", *_pos(node))
    return node


# ---------------------------------------------------------------------------
# data model

@dataclass(frozen=True)
class ActionSchema:
    name: str
    parameters: tuple[tuple[str, str], ...]  # ((?var, type), ...)
    preconditions: frozenset = frozenset()
    add_effects: frozenset = frozenset()
    del_effects: frozenset = frozenset()
    cost: int = 1

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.parameters)


@dataclass(frozen=True)
class Domain:
    name: str
    requirements: frozenset = frozenset()
    types: tuple[tuple[str, str], ...] = ()  # (type, parent); roots have parent "object"
    constants: tuple[tuple[str, str], ...] = ()
    predicates: tuple[tuple[str, tuple[str, ...]], ...] = ()  # (name, arg types)
    schemas: tuple[ActionSchema, ...] = ()

    @property
    def uses_costs(self) -> bool:
        return ":action-costs" in self.requirements

    def schema(self, name: str) -> ActionSchema:
        for s in self.schemas:
            if s.name == name:
                return s
        raise KeyError(name)

    def predicate_types(self) -> dict[str, tuple[str, ...]]:
        return dict(self.predicates)

    def parent_map(self) -> dict[str, str]:
        return dict(self.types)

    def is_subtype(self, sub: str, sup: str) -> bool:
        parents = self.parent_map()
        seen = set()
        t = sub
        while t not in seen:
            if t == sup:
                return True
            seen.add(t)
            if t == "object":
                break
            t = parents.get(t, "object")
        return sup == "object"


@dataclass(frozen=True)
class LiftedModel:
    """A full planning problem: domain plus objects, initial state and goal."""

    domain: Domain
    problem_name: str = "p"
    objects: tuple[tuple[str, str], ...] = ()
    init: frozenset = frozenset()
    goal: frozenset = frozenset()

    @property
    def name(self) -> str:
        return self.domain.name

    @property
    def schemas(self) -> tuple[ActionSchema, ...]:
        return self.domain.schemas

    def all_objects(self) -> dict[str, str]:
        objs = dict(self.domain.constants)
        objs.update(self.objects)
        return objs

    def objects_of_type(self, typ: str) -> list[str]:
        return sorted(o for o, t in self.all_objects().items() if self.domain.is_subtype(t, typ))

    def with_schemas(self, schemas: Iterable[ActionSchema]) -> "LiftedModel":
        return replace(self, domain=replace(self.domain, schemas=tuple(sorted(schemas, key=lambda s: s.name))))


def format_atom(atom: Atom) -> str:
    return "(" + " ".join(atom) + ")"


# ---------------------------------------------------------------------------
# parsing helpers

def _typed_list(items: list, default: str = "object") -> list[tuple[Token, Token]]:
    """Parse ``a b - t c - u d`` into [(a, t), (b, t), (c, u), (d, default)]."""
    out: list[tuple[Token, Token]] = []
    pending: list[Token] = []
    i = 0
    while i < len(items):
        item = items[i]
        if isinstance(item, list):
            if item and item[0] == "either":
                raise UnsupportedFeature("unsupported PDDL feature: either-types", *_pos(item))
            raise PDDLSyntaxError("unexpected list in typed list", *_pos(item))
        if item == "-":
            if i + 1 >= len(items):
                raise PDDLSyntaxError("dangling '-' in typed list", item.line, item.col)
            typ = items[i + 1]
            if isinstance(typ, list):
                if typ and typ[0] == "either":
                    raise UnsupportedFeature("unsupported PDDL feature: either-types", *_pos(typ))
                raise PDDLSyntaxError("expected type name", *_pos(typ))
            out.extend((p, typ) for p in pending)
            pending = []
            i += 2
            continue
        pending.append(item)
        i += 1
    out.extend((p, Token(default, p.line, p.col)) for p in pending)
    return out


def _check_keywords(node) -> None:
    if isinstance(node, list) and node and not isinstance(node[0], list):
        head = node[0]
        if head in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedFeature(
                f"unsupported PDDL feature: {_UNSUPPORTED_KEYWORDS[head]} ('{head}')", head.line, head.col)


def _conjuncts(node) -> list:
    """Flatten an ``(and ...)`` formula (or a single literal / empty list)."""
    node = _expect_list(node, "formula")
    if not node:
        return []
    if node[0] == "and":
        out = []
        for sub in node[1:]:
            out.extend(_conjuncts(sub))
        return out
    return [node]


def _atom(node, where: str) -> tuple:
    node = _expect_list(node, f"atom in {where}")
    _check_keywords(node)
    if not node:
        raise PDDLSyntaxError(f"empty atom in {where}", *_pos(node))
    for x in node:
        if isinstance(x, list):
            raise PDDLSyntaxError(f"nested term in {where}", *_pos(x))
    return tuple(node)


class _DomainBuilder:
    def __init__(self, tree: list):
        self.tree = tree
        self.name = ""
        self.requirements: set[str] = set()
        self.types: dict[str, str] = {}
        self.constants: dict[str, str] = {}
        self.predicates: dict[str, tuple[str, ...]] = {}
        self.schemas: dict[str, ActionSchema] = {}
        self.declared_types = False

    def build(self) -> Domain:
        tree = self.tree
        if len(tree) < 2 or tree[0] != "define":
            raise PDDLSyntaxError("expected (define (domain ...) ...)", *_pos(tree))
        header = _expect_list(tree[1], "(domain <name>)")
        if len(header) != 2 or header[0] != "domain":
            raise PDDLSyntaxError("expected (domain <name>)", *_pos(header))
        self.name = str(_expect_symbol(header[1], "domain name"))
        actions = []
        for section in tree[2:]:
            section = _expect_list(section, "domain section")
            if not section:
                raise PDDLSyntaxError("empty section", *_pos(section))
            key = section[0]
            if key == ":requirements":
                self._requirements(section[1:])
            elif key == ":types":
                self._types(section[1:])
            elif key == ":constants":
                for obj, typ in _typed_list(section[1:]):
                    self._declare_object(self.constants, obj, typ)
            elif key == ":predicates":
                self._predicates(section[1:])
            elif key == ":functions":
                self._functions(section[1:])
            elif key == ":action":
                actions.append(section)
            elif key in (":durative-action", ":derived", ":axiom"):
                raise UnsupportedFeature(f"unsupported PDDL feature: {key[1:]}", key.line, key.col)
            else:
                raise PDDLSyntaxError(f"unknown domain section {key!r}", *_pos(key))
        for sec in actions:
            schema = self._action(sec)
            if schema.name in self.schemas:
                raise SemanticError(f"duplicate action '{schema.name}'", *_pos(sec))
            self.schemas[schema.name] = schema
        return Domain(
            name=self.name,
            requirements=frozenset(self.requirements),
            types=tuple(sorted(self.types.items())),
            constants=tuple(sorted(self.constants.items())),
            predicates=tuple(sorted(self.predicates.items())),
            schemas=tuple(self.schemas[k] for k in sorted(self.schemas)),
        )

    def _requirements(self, reqs) -> None:
        for r in reqs:
            r = _expect_symbol(r, "requirement")
            if r not in SUPPORTED_REQUIREMENTS:
                raise UnsupportedFeature(f"unsupported PDDL requirement {r}", r.line, r.col)
            self.requirements.add(str(r))

    def _types(self, items) -> None:
        self.declared_types = True
        for name, parent in _typed_list(items):
            if name == "object":
                continue
            if name in self.types:
                raise SemanticError(f"duplicate type '{name}'", name.line, name.col)
            self.types[str(name)] = str(parent)
        for name, parent in self.types.items():
            if parent != "object" and parent not in self.types:
                raise SemanticError(f"type '{name}' has undeclared parent '{parent}'")
        # cycles
        for name in self.types:
            seen = {name}
            t = self.types[name]
            while t != "object":
                if t in seen:
                    raise SemanticError(f"cyclic type hierarchy at '{name}'")
                seen.add(t)
                t = self.types[t]

    def _check_type(self, typ: Token) -> None:
        if typ != "object" and typ not in self.types:
            raise SemanticError(f"undeclared type '{typ}'", typ.line, typ.col)

    def _declare_object(self, table: dict, obj: Token, typ: Token) -> None:
        self._check_type(typ)
        if obj in table:
            raise SemanticError(f"duplicate object '{obj}'", obj.line, obj.col)
        table[str(obj)] = str(typ)

    def _predicates(self, items) -> None:
        for p in items:
            p = _expect_list(p, "predicate declaration")
            if not p:
                raise PDDLSyntaxError("empty predicate declaration", *_pos(p))
            name = _expect_symbol(p[0], "predicate name")
            if name in self.predicates:
                raise SemanticError(f"duplicate predicate '{name}'", name.line, name.col)
            params = _typed_list(p[1:])
            for var, typ in params:
                if not var.startswith("?"):
                    raise PDDLSyntaxError(f"predicate parameter must be a variable, got '{var}'",
                                          var.line, var.col)
                self._check_type(typ)
            self.predicates[str(name)] = tuple(str(t) for _, t in params)

    def _functions(self, items) -> None:
        i = 0
        while i < len(items):
            f = items[i]
            if isinstance(f, list) and len(f) == 1 and f[0] == "total-cost":
                i += 1
                if i + 1 < len(items) and items[i] == "-":
                    i += 2
                continue
            raise UnsupportedFeature("unsupported PDDL feature: numeric-fluents", *_pos(f))

    def _parent(self, t: str) -> str:
        return self.types.get(t, "object")

    def _subtype(self, sub: str, sup: str) -> bool:
        while True:
            if sub == sup or sup == "object":
                return True
            if sub == "object":
                return False
            sub = self._parent(sub)

    def _check_atom(self, atom: tuple, node, env: dict[str, str]) -> None:
        name = atom[0]
        if name not in self.predicates:
            raise SemanticError(f"undeclared predicate '{name}'", *_pos(name))
        sig = self.predicates[name]
        if len(sig) != len(atom) - 1:
            raise SemanticError(f"predicate '{name}' expects {len(sig)} arguments, got {len(atom) - 1}",
                                *_pos(name))
        for arg, want in zip(atom[1:], sig):
            if arg.startswith("?"):
                if arg not in env:
                    raise SemanticError(f"unbound variable '{arg}'", *_pos(arg))
                have = env[arg]
            else:
                if arg not in self.constants:
                    raise UndeclaredObject(f"undeclared constant '{arg}'", *_pos(arg))
                have = self.constants[arg]
            if not self._subtype(have, want):
                raise SemanticError(f"argument '{arg}' of type '{have}' does not fit '{want}' in '{name}'",
                                    *_pos(arg))

    def _action(self, sec: SList) -> ActionSchema:
        if len(sec) < 2:
            raise PDDLSyntaxError("action without name", *_pos(sec))
        name = _expect_symbol(sec[1], "action name")
        fields: dict[str, object] = {}
        rest = sec[2:]
        if len(rest) % 2:
            raise PDDLSyntaxError(f"malformed action '{name}'", *_pos(sec))
        for key, val in zip(rest[0::2], rest[1::2]):
            key = _expect_symbol(key, "action keyword")
            if key not in (":parameters", ":precondition", ":effect"):
                raise UnsupportedFeature(f"unsupported action field {key}", key.line, key.col)
            fields[str(key)] = val
        params = _typed_list(_expect_list(fields.get(":parameters", SList()), "parameter list"))
        env: dict[str, str] = {}
        for var, typ in params:
            if not var.startswith("?"):
                raise PDDLSyntaxError(f"parameter must be a variable, got '{var}'", var.line, var.col)
            self._check_type(typ)
            if var in env:
                raise SemanticError(f"duplicate parameter '{var}' in '{name}'", var.line, var.col)
            env[str(var)] = str(typ)

        pre: set[tuple] = set()
        for lit in _conjuncts(fields.get(":precondition", SList())):
            _check_keywords(lit)
            atom = _atom(lit, f"precondition of '{name}'")
            self._check_atom(atom, lit, env)
            pre.add(tuple(str(x) for x in atom))

        add: set[tuple] = set()
        dele: set[tuple] = set()
        cost = None
        for lit in _conjuncts(fields.get(":effect", SList())):
            if lit and lit[0] == "not":
                if len(lit) != 2:
                    raise PDDLSyntaxError("malformed (not ...)", *_pos(lit))
                atom = _atom(lit[1], f"effect of '{name}'")
                self._check_atom(atom, lit, env)
                dele.add(tuple(str(x) for x in atom))
            elif lit and lit[0] == "increase":
                cost = self._cost(lit, name, cost)
            else:
                _check_keywords(lit)
                atom = _atom(lit, f"effect of '{name}'")
                self._check_atom(atom, lit, env)
                add.add(tuple(str(x) for x in atom))
        clash = add & dele
        if clash:
            a = sorted(clash)[0]
            raise SemanticError(f"action '{name}' both adds and deletes {format_atom(a)}", *_pos(sec))
        return ActionSchema(
            name=str(name),
            parameters=tuple((str(v), str(t)) for v, t in params),
            preconditions=frozenset(pre),
            add_effects=frozenset(add),
            del_effects=frozenset(dele),
            cost=1 if cost is None else cost,
        )

    def _cost(self, lit, name, previous) -> int:
        if (len(lit) != 3 or not isinstance(lit[1], list) or list(lit[1]) != ["total-cost"]
                or isinstance(lit[2], list)):
            raise UnsupportedFeature("unsupported PDDL feature: numeric-fluents", *_pos(lit))
        if previous is not None:
            raise SemanticError(f"action '{name}' increases total-cost twice", *_pos(lit))
        try:
            value = int(lit[2])
        except ValueError:
            raise UnsupportedFeature(f"non-constant action cost '{lit[2]}'", *_pos(lit[2])) from None
        if value < 0:
            raise SemanticError(f"negative action cost in '{name}'", *_pos(lit[2]))
        return value


def _single_define(text: str) -> SList:
    exprs = parse_sexpr(text)
    if len(exprs) != 1:
        raise PDDLSyntaxError(f"expected exactly one (define ...) form, found {len(exprs)}",
                              *(_pos(exprs[1]) if len(exprs) > 1 else (1, 1)))
    return _expect_list(exprs[0], "(define ...)")


def parse_domain(text: str, filename: str | None = None) -> Domain:
    try:
        return _DomainBuilder(_single_define(text)).build()
    except PDDLError as e:
        if filename:
            e.with_filename(filename)
        raise


def parse_problem(text: str, domain: Domain, filename: str | None = None) -> LiftedModel:
    try:
        return _parse_problem(_single_define(text), domain)
    except PDDLError as e:
        if filename:
            e.with_filename(filename)
        raise


def _parse_problem(tree: SList, domain: Domain) -> LiftedModel:
    if len(tree) < 2 or tree[0] != "define":
        raise PDDLSyntaxError("expected (define (problem ...) ...)", *_pos(tree))
    header = _expect_list(tree[1], "(problem <name>)")
    if len(header) != 2 or header[0] != "problem":
        raise PDDLSyntaxError("expected (problem <name>)", *_pos(header))
    pname = str(header[1])
    types = dict(domain.types)
    objects: dict[str, str] = {}
    init: set[tuple] = set()
    goal: set[tuple] = set()
    for section in tree[2:]:
        section = _expect_list(section, "problem section")
        if not section:
            raise PDDLSyntaxError("empty section", *_pos(section))
        key = section[0]
        if key == ":domain":
            if len(section) != 2 or section[1] != domain.name:
                raise SemanticError(f"problem refers to domain {section[1:]!r}, expected '{domain.name}'",
                                    *_pos(section))
        elif key == ":requirements":
            for r in section[1:]:
                if r not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedFeature(f"unsupported PDDL requirement {r}", *_pos(r))
        elif key == ":objects":
            for obj, typ in _typed_list(section[1:]):
                if typ != "object" and typ not in types:
                    raise SemanticError(f"undeclared type '{typ}'", typ.line, typ.col)
                if obj in objects or obj in dict(domain.constants):
                    raise SemanticError(f"duplicate object '{obj}'", obj.line, obj.col)
                objects[str(obj)] = str(typ)
        elif key == ":init":
            for lit in section[1:]:
                lit = _expect_list(lit, "initial atom")
                if lit and lit[0] == "=":
                    # (= (total-cost) 0) is the only numeric initialisation allowed
                    if len(lit) == 3 and isinstance(lit[1], list) and list(lit[1]) == ["total-cost"]:
                        continue
                    raise UnsupportedFeature("unsupported PDDL feature: numeric-fluents", *_pos(lit))
                atom = _atom(lit, ":init")
                _check_ground(atom, domain, objects, lit)
                init.add(tuple(str(x) for x in atom))
        elif key == ":goal":
            if len(section) != 2:
                raise PDDLSyntaxError("expected a single goal formula", *_pos(section))
            for lit in _conjuncts(section[1]):
                _check_keywords(lit)
                atom = _atom(lit, ":goal")
                _check_ground(atom, domain, objects, lit)
                goal.add(tuple(str(x) for x in atom))
        elif key == ":metric":
            if list(section[1:2]) != ["minimize"] or len(section) != 3 or not isinstance(section[2], list) \
                    or list(section[2]) != ["total-cost"]:
                raise UnsupportedFeature("only (:metric minimize (total-cost)) is supported", *_pos(section))
        else:
            raise PDDLSyntaxError(f"unknown problem section {key!r}", *_pos(key))
    return LiftedModel(
        domain=domain,
        problem_name=pname,
        objects=tuple(sorted(objects.items())),
        init=frozenset(init),
        goal=frozenset(goal),
    )


def _check_ground(atom: tuple, domain: Domain, objects: dict[str, str], node) -> None:
    preds = dict(domain.predicates)
    consts = dict(domain.constants)
    name = atom[0]
    if name not in preds:
        raise SemanticError(f"undeclared predicate '{name}'", *_pos(name))
    sig = preds[name]
    if len(sig) != len(atom) - 1:
        raise SemanticError(f"predicate '{name}' expects {len(sig)} arguments, got {len(atom) - 1}",
                            *_pos(name))
    for arg, want in zip(atom[1:], sig):
        if arg.startswith("?"):
            raise SemanticError(f"variable '{arg}' in ground atom", *_pos(arg))
        typ = objects.get(arg, consts.get(arg))
        if typ is None:
            raise UndeclaredObject(f"undeclared object '{arg}'", *_pos(arg))
        if not domain.is_subtype(typ, want):
            raise SemanticError(f"object '{arg}' of type '{typ}' does not fit '{want}' in '{name}'",
                                *_pos(arg))


# ---------------------------------------------------------------------------
# emission

def _typed(items: Iterable[tuple[str, str]]) -> str:
    items = list(items)
    parts = []
    for i, (name, typ) in enumerate(items):
        # a bare name followed by a typed group would be claimed by it
        if typ == "object" and not any(t != "object" for _, t in items[i + 1:]):
            parts.append(name)
        else:
            parts.append(f"{name} - {typ}")
    return " ".join(parts)


def _conj(atoms: Iterable[Atom], negate: bool = False) -> list[str]:
    if negate:
        return [f"(not {format_atom(a)})" for a in sorted(atoms)]
    return [format_atom(a) for a in sorted(atoms)]


def emit_domain(domain: Domain) -> str:
    lines = [f"(define (domain {domain.name})"]
    if domain.requirements:
        lines.append("  (:requirements " + " ".join(sorted(domain.requirements)) + ")")
    if domain.types:
        lines.append("  (:types " + _typed(domain.types) + ")")
    if domain.constants:
        lines.append("  (:constants " + _typed(domain.constants) + ")")
    if domain.predicates:
        lines.append("  (:predicates")
        for name, sig in domain.predicates:
            args = _typed((f"?x{i}", t) for i, t in enumerate(sig))
            lines.append(f"    ({name}{' ' + args if args else ''})")
        lines.append("  )")
    if domain.uses_costs:
        lines.append("  (:functions (total-cost) - number)")
    for s in domain.schemas:
        lines.append(f"  (:action {s.name}")
        lines.append(f"    :parameters ({_typed(s.parameters)})")
        pre = _conj(s.preconditions)
        lines.append(f"    :precondition (and {' '.join(pre)})" if pre else "    :precondition ()")
        eff = _conj(s.add_effects) + _conj(s.del_effects, negate=True)
        if domain.uses_costs:
            eff.append(f"(increase (total-cost) {s.cost})")
        lines.append(f"    :effect (and {' '.join(eff)})" if eff else "    :effect ()")
        lines.append("  )")
    lines.append(")")
    return "\n".join(lines) + "\n"


def emit_problem(model: LiftedModel) -> str:
    d = model.domain
    lines = [f"(define (problem {model.problem_name})", f"  (:domain {d.name})"]
    if model.objects:
        lines.append("  (:objects " + _typed(model.objects) + ")")
    init = _conj(model.init)
    if d.uses_costs:
        init.append("(= (total-cost) 0)")
    lines.append("  (:init")
    lines.extend("    " + a for a in init)
    lines.append("  )")
    lines.append("  (:goal (and " + " ".join(_conj(model.goal)) + "))")
    if d.uses_costs:
        lines.append("  (:metric minimize (total-cost))")
    lines.append(")")
    return "\n".join(lines) + "\n"


def emit_pddl(model: LiftedModel) -> tuple[str, str]:
    """Render a model back to (domain text, problem text)."""
    return emit_domain(model.domain), emit_problem(model)


def load_model(domain_path, problem_path) -> LiftedModel:
    with open(domain_path) as f:
        domain = parse_domain(f.read(), filename=str(domain_path))
    with open(problem_path) as f:
        return parse_problem(f.read(), domain, filename=str(problem_path))
