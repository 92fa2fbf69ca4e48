"""Explainer comparison: size and time per explainer, per domain.

Runs the fault-injection matrix over the bundled fixtures and prints median
size / time per (domain, explainer); raw rows go to CSV/JSON if asked.

    python3 scripts/compare_explainers.py --faults 5 --instances 3 --csv out/explainers.csv
"""
import argparse
import statistics
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

from reconcile.perturb import DEFAULT_EXPLAINERS, FaultSpec, load_problems, rows_to_csv, rows_to_json, run_matrix
from reconcile.planner import Budget


@dataclass
class Config:
    domains: tuple = ("blocksworld", "logistics", "rover")
    faults: int = 5
    instances: int = 3
    seed: int = 0
    repeats: int = 3
    jobs: int = 1
    time_limit: float = 120.0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--domains", nargs="+", default=list(Config.domains))
    ap.add_argument("--faults", type=int, default=Config.faults)
    ap.add_argument("--instances", type=int, default=Config.instances)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--repeats", type=int, default=Config.repeats)
    ap.add_argument("--jobs", type=int, default=Config.jobs)
    ap.add_argument("--csv")
    ap.add_argument("--json")
    a = ap.parse_args()
    cfg = Config(tuple(a.domains), a.faults, a.instances, a.seed, a.repeats, a.jobs)

    problems = load_problems(domains=cfg.domains)
    specs = [FaultSpec(seed=cfg.seed + k, n_faults=cfg.faults) for k in range(cfg.instances)]
    budget = Budget(time_limit=cfg.time_limit, search_time_limit=cfg.time_limit)
    rows = run_matrix(problems, specs, DEFAULT_EXPLAINERS, budget, repeats=cfg.repeats, jobs=cfg.jobs)

    groups = defaultdict(list)
    for r in rows:
        groups[(r.domain, r.explainer)].append(r)
    print(f"{'domain':<12} {'explainer':<11} {'size':>6} {'time ms':>9} {'ok':>5}")
    for d in cfg.domains:
        for e in DEFAULT_EXPLAINERS:
            rs = groups[(d, e)]
            ok = [r for r in rs if r.status == "ok"]
            size = statistics.median(r.size for r in ok) if ok else float("nan")
            t = statistics.median(r.time_ms for r in ok) if ok else float("nan")
            print(f"{d:<12} {e:<11} {size:>6} {t:>9.1f} {len(ok):>2}/{len(rs)}")
    if a.csv:
        Path(a.csv).parent.mkdir(parents=True, exist_ok=True)
        Path(a.csv).write_text(rows_to_csv(rows))
    if a.json:
        Path(a.json).parent.mkdir(parents=True, exist_ok=True)
        Path(a.json).write_text(rows_to_json(rows))


if __name__ == "__main__":
    main()
