"""MCE search time as the model difference grows.

For each difference size, injects that many faults under several seeds into
one problem and reports the median (over seeds) of the median-of-3 MCE time.

    python3 scripts/mce_scaling.py --domain blocksworld --problem problem-3
"""
import argparse
import statistics
from dataclasses import dataclass

from reconcile.perturb import FaultSpec, load_problems, run_one


@dataclass
class Config:
    domain: str = "blocksworld"
    problem: str = "problem-3"
    sizes: tuple = (3, 5, 7, 10)
    seeds: int = 7
    repeats: int = 3
    explainer: str = "mce"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--domain", default=Config.domain)
    ap.add_argument("--problem", default=Config.problem)
    ap.add_argument("--sizes", type=int, nargs="+", default=list(Config.sizes))
    ap.add_argument("--seeds", type=int, default=Config.seeds)
    ap.add_argument("--repeats", type=int, default=Config.repeats)
    ap.add_argument("--explainer", default=Config.explainer)
    a = ap.parse_args()
    cfg = Config(a.domain, a.problem, tuple(a.sizes), a.seeds, a.repeats, a.explainer)

    problem = next(p for p in load_problems(domains=[cfg.domain]) if p.problem_id == cfg.problem)
    print(f"{'|delta|':>7} {'median ms':>10} {'min':>8} {'max':>8} {'median size':>12}")
    for n in cfg.sizes:
        rows = [run_one(problem, FaultSpec(seed=s, n_faults=n), cfg.explainer, repeats=cfg.repeats)
                for s in range(cfg.seeds)]
        ok = [r for r in rows if r.status == "ok"]
        times = [r.time_ms for r in ok]
        print(f"{n:>7} {statistics.median(times):>10.1f} {min(times):>8.1f} {max(times):>8.1f} "
              f"{statistics.median(r.size for r in ok):>12}")


if __name__ == "__main__":
    main()
