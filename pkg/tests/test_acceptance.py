"""Acceptance criteria, one test per criterion.

Each test records a one-line verdict that is printed in the terminal summary
(``[PASS] criterion N: ...``).  Run on its own with ``pytest tests/test_acceptance.py``.
"""
import math
import random
import statistics
import time

import pytest

from reconcile.cli import main
from reconcile.explainers import (MrpInstance, check_completeness, check_monotonicity, mce_approx, mce_exact, mme,
                                  mpe)
from reconcile.grounding import ground, parse_plan, plan_cost, validate
from reconcile.model_space import apply_edits, flatten, gamma, gamma_inverse
from reconcile.pddl import emit_pddl, load_model, parse_domain, parse_problem
from reconcile.perturb import FaultSpec, inject, load_problems, run_one
from reconcile.planner import optimal_cost, optimal_plan

import oracles
from conftest import DATA, FETCH, FIXTURES

BENCH_DOMAINS = ["blocksworld", "logistics", "rover"]


def _bench():
    return load_problems(FIXTURES, BENCH_DOMAINS)


class Case:
    """One fault-injected instance with every explainer's answer."""

    def __init__(self, problem, n_faults, seed):
        self.label = f"{problem.domain}/{problem.problem_id} f{n_faults} s{seed}"
        self.problem = problem
        self.human = inject(problem.model, FaultSpec(seed=seed, n_faults=n_faults))
        self.plan = optimal_plan(ground(problem.model)).plan
        self.inst = MrpInstance(problem.model, self.human, self.plan)
        self.mce = mce_exact(self.inst, use_heuristic=True)
        self.mce_noh = mce_exact(MrpInstance(problem.model, self.human, self.plan), use_heuristic=False)
        self.approx = mce_approx(self.inst)
        self.mme = mme(self.inst)
        self.mpe = mpe(self.inst)
        self.oracle = oracles.Reconciliation(problem.model, self.human, self.plan)


@pytest.fixture(scope="module")
def minimality_suite():
    probs = _bench()
    # 60 instances; 8 problems x 5 fault counts are all covered by i % 8, i % 5
    return [Case(probs[i % len(probs)], 1 + i % 5, 1000 + i) for i in range(60)]


@pytest.fixture(scope="module")
def monotonicity_suite():
    probs = _bench()
    return [Case(probs[i % len(probs)], 4 + i % 5, 2000 + i) for i in range(32)]


def test_1_fetch_worked_example(acceptance, capsys):
    t0 = time.perf_counter()
    robot = load_model(FETCH / "robot-domain.pddl", FETCH / "problem.pddl")
    human = load_model(FETCH / "human-domain.pddl", FETCH / "problem.pddl")
    code = main(["plan", "--domain", str(FETCH / "robot-domain.pddl"), "--problem", str(FETCH / "problem.pddl")])
    plan = parse_plan(capsys.readouterr().out)
    cost = plan_cost(ground(robot), plan)
    reference_plan = parse_plan((FETCH / "plan.txt").read_text())
    lifted = MrpInstance(robot, human, plan)
    grounded = MrpInstance(robot, human, plan, granularity="grounded")
    mce_g = mce_exact(grounded).lines()
    mme_l = mme(lifted).lines()
    mpe_l = mpe(lifted).size
    elapsed = time.perf_counter() - t0
    ok = (code == 0 and cost == 4 and sorted(plan) == sorted(reference_plan)
          and mce_g == ["move_loc1_loc2-has-precondition-hand-tucked"]
          and mme_l == ["move-has-precondition-crouched", "tuck-has-add-effect-crouched"]
          and mpe_l == 3 and elapsed < 5.0)
    acceptance("1 fetch", ok, f"plan cost {cost}, MCE {mce_g}, MME {mme_l}, |MPE| {mpe_l}, {elapsed:.2f}s (< 5s)")
    assert ok


def test_2_mce_matches_brute_force(acceptance, minimality_suite):
    t0 = time.perf_counter()
    bad = []
    for c in minimality_suite:
        want = c.oracle.min_complete_size()
        if c.mce.size != want or not check_completeness(c.inst, c.mce):
            bad.append(f"{c.label}: got {c.mce.size}, oracle {want}")
    n = len(minimality_suite)
    ok = n >= 50 and not bad
    acceptance("2 mce-minimality", ok, f"{n - len(bad)}/{n} instances agree with brute force "
                                       f"(oracle {time.perf_counter() - t0:.0f}s)" + (f"; {bad[:3]}" if bad else ""))
    assert ok, bad


def test_3_mme_monotonic_and_minimal(acceptance, monotonicity_suite):
    bad = []
    for c in monotonicity_suite:
        assert len(c.inst.delta) <= 8
        verdict = check_monotonicity(c.inst, c.mme)
        best, sets = c.oracle.minimal_monotonic()
        if not (verdict.monotonic and verdict.exhaustive and c.oracle.is_monotonic(c.mme.edits)
                and c.mme.size == best and frozenset(c.mme.edits) in sets):
            bad.append(f"{c.label}: size {c.mme.size}, oracle {best}, monotonic {verdict.monotonic}")
    n = len(monotonicity_suite)
    ok = n >= 30 and not bad
    acceptance("3 mme-monotonicity", ok, f"{n - len(bad)}/{n} instances exhaustively monotonic and minimum"
               + (f"; {bad[:3]}" if bad else ""))
    assert ok, bad


def test_4_size_chain(acceptance, minimality_suite, monotonicity_suite):
    cases = minimality_suite + monotonicity_suite
    bad = [c.label for c in cases if not (c.approx.size <= c.mce.size <= c.mme.size <= c.mpe.size)]
    acceptance("4 size-chain", not bad, f"{len(bad)} violations of approx <= mce <= mme <= mpe over {len(cases)} "
                                        "instances")
    assert not bad


def test_5_heuristic_non_degradation(acceptance, minimality_suite, monotonicity_suite):
    cases = minimality_suite + monotonicity_suite
    diff = [c.label for c in cases if c.mce.size != c.mce_noh.size]
    med_h = statistics.median(c.mce.expansions for c in cases)
    med_n = statistics.median(c.mce_noh.expansions for c in cases)
    ok = not diff and med_h <= med_n
    acceptance("5 heuristic", ok, f"{len(cases) - len(diff)}/{len(cases)} identical sizes; median expansions "
                                  f"{med_h} with relevance ordering vs {med_n} without")
    assert ok


def test_6_exponential_trend(acceptance):
    problem = next(p for p in _bench() if p.domain == "blocksworld" and p.problem_id == "problem-3")
    medians = {}
    for n in (3, 5, 7, 10):
        # per seed: median of 3 timed runs on fresh instances; then median across seeds
        times = []
        for seed in range(7):
            row = run_one(problem, FaultSpec(seed=seed, n_faults=n), "mce", repeats=3)
            assert row.status == "ok" and row.delta == n
            times.append(row.time_ms)
        medians[n] = statistics.median(times)
    seq = [medians[n] for n in (3, 5, 7, 10)]
    ratio = medians[10] / medians[3]
    ok = all(a <= b for a, b in zip(seq, seq[1:])) and ratio > 2
    acceptance("6 exponential-trend", ok, "blocksworld/problem-3 median MCE ms "
               + ", ".join(f"|delta|={n}: {medians[n]:.1f}" for n in medians) + f"; t(10)/t(3) = {ratio:.1f}")
    assert ok


def test_7_pruning(acceptance):
    bw = [p for p in _bench() if p.domain == "blocksworld"]
    lines, ok = [], True
    for k, p in enumerate(bw):
        human = inject(p.model, FaultSpec(seed=k, n_faults=10))
        plan = optimal_plan(ground(p.model)).plan
        pruned = mme(MrpInstance(p.model, human, plan))
        plain = mme(MrpInstance(p.model, human, plan), prune=False)
        ok &= pruned.evaluated <= 512 and plain.evaluated > pruned.evaluated and pruned.size == plain.size
        lines.append(f"{pruned.evaluated}/{plain.evaluated}")
    acceptance("7 pruning", ok, "10-fault blocksworld, nodes evaluated pruned/unpruned of 1024: " + ", ".join(lines))
    assert ok


def _fixture_models():
    models = [(f"{p.domain}/{p.problem_id}", p.model) for p in load_problems(FIXTURES)]
    for name in ("human-domain", "human2-domain"):
        models.append((f"fetch/{name}", load_model(FETCH / f"{name}.pddl", FETCH / "problem.pddl")))
    d = DATA / "prop2"
    models.append(("prop2/robot", load_model(d / "robot-domain.pddl", d / "robot-problem.pddl")))
    models.append(("prop2/human", load_model(d / "human-domain.pddl", d / "human-problem.pddl")))
    return models


def _fuzz_plan(rng, task, base):
    names = [a.name for a in task.actions]
    kind = rng.randrange(4)
    if kind == 0:
        return tuple(rng.choice(names) for _ in range(rng.randrange(9)))
    if kind == 1:  # random walk over applicable actions: valid prefix, usually missing the goal
        state, plan = task.init, []
        for _ in range(rng.randrange(12)):
            ok = [a for a in task.actions if state & a.pre == a.pre]
            if not ok:
                break
            a = rng.choice(ok)
            state = (state & ~a.dele) | a.add
            plan.append(a.name)
        return tuple(plan)
    plan = list(base)
    if kind == 2 and plan:  # small mutation of an optimal plan
        i = rng.randrange(len(plan))
        op = rng.randrange(3)
        if op == 0:
            del plan[i]
        elif op == 1:
            plan.insert(i, rng.choice(names))
        else:
            j = rng.randrange(len(plan))
            plan[i], plan[j] = plan[j], plan[i]
    return tuple(plan)


def test_8_planner_soundness(acceptance):
    fixtures = _fixture_models()
    rng = random.Random(8)
    mutants = []
    for k in range(40):  # fault-injected variants as extra tasks
        p = rng.choice(_bench())
        spec = FaultSpec(seed=k, n_faults=rng.randrange(1, 8))
        mutants.append((f"{p.domain}/{p.problem_id}~{k}", inject(p.model, spec)))
    models = fixtures + mutants
    checked, skipped, mismatched = [], [], []
    for name, m in models:
        if oracles.reachable_states(m, limit=100_000) > 100_000:
            skipped.append(name)
            continue
        checked.append(name)
        if optimal_cost(ground(m)) != oracles.optimal_cost(m):
            mismatched.append(name)
    fuzz_bad, valid_count = [], 0
    tasks = {}
    for i in range(1000):
        name, m = models[i % len(models)]
        if name not in tasks:
            task = ground(m)
            tasks[name] = (task, optimal_plan(task).plan or (), oracles.instantiate(m))
        task, base, acts = tasks[name]
        plan = _fuzz_plan(rng, task, base)
        c, v = plan_cost(task, plan), validate(task, plan)
        valid_count += v.valid
        if (c == math.inf) != (not v.valid) or c != oracles.plan_cost(m, plan, acts) or (v.valid and v.cost != c):
            fuzz_bad.append((name, plan))
    fixture_names = {n for n, _ in fixtures}
    ok = not mismatched and not fuzz_bad and fixture_names <= set(checked)
    acceptance("8 planner", ok, f"optimal cost = blind search on {len(checked) - len(mismatched)}/{len(checked)} "
                                f"tasks ({len(fixtures)} fixtures, all checked; {len(skipped)} mutants over 1e5 "
                                f"states skipped); plan_cost/validate agree on {1000 - len(fuzz_bad)}/1000 fuzzed "
                                f"plans ({valid_count} valid)")
    assert ok, (mismatched, fuzz_bad[:3], skipped)


def test_9_round_trips(acceptance):
    models = [m for _, m in _fixture_models()]
    rng = random.Random(9)
    bench = _bench()
    mutants = []
    while len(mutants) < 200:
        p = rng.choice(bench)
        spec = FaultSpec(seed=rng.randrange(10**6), n_faults=rng.randrange(1, 11),
                         allow_additions=rng.random() < 0.3,
                         fault_kinds=rng.choice([("drop-precondition", "drop-add-effect", "drop-del-effect"),
                                                 ("drop-precondition", "drop-init", "drop-goal")]))
        mutants.append(inject(p.model, spec))
    bad = []
    for i, m in enumerate(models + mutants):
        g = gamma(m)
        back = gamma_inverse(g, m)
        dt, pt = emit_pddl(m)
        reparsed = parse_problem(pt, parse_domain(dt))
        if back != m or gamma(back) != g or reparsed != m or emit_pddl(reparsed) != (dt, pt):
            bad.append(i)
    flat = flatten(models[0])
    ok = not bad and gamma_inverse(gamma(flat), flat) == flat
    acceptance("9 round-trips", ok, f"gamma and PDDL round-trips exact on {len(models)} fixtures + "
                                    f"{len(mutants)} mutants ({len(bad)} failures)")
    assert ok, bad


def test_10_feasible_but_not_complete(acceptance):
    d = DATA / "prop2"
    robot = load_model(d / "robot-domain.pddl", d / "robot-problem.pddl")
    human = load_model(d / "human-domain.pddl", d / "human-problem.pddl")
    plan = parse_plan((d / "plan.txt").read_text())
    inst = MrpInstance(robot, human, plan)
    plan_c = plan_cost(ground(robot), plan)
    human_opt = optimal_cost(ground(human))
    feasible = [e for e in inst.delta if str(e) == "init-has-z"]
    updated = ground(inst.model(apply_edits(inst.gamma_h, feasible)))
    is_feasible = validate(updated, plan).valid
    complete = check_completeness(inst, feasible)
    e = mce_exact(inst)
    ok = (plan_c < human_opt and is_feasible and not complete and check_completeness(inst, e)
          and set(e.edits) > set(feasible))
    acceptance("10 feasibility-vs-optimality", ok,
               f"plan cost {plan_c} < human optimum {human_opt}; {{init-has-z}} feasible={is_feasible} "
               f"complete={complete}; MCE continues to {sorted(e.lines())}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
