"""MME search effort with and without pruning supersets of failed sets.

    python3 scripts/mme_pruning.py --faults 10 --seeds 2
"""
import argparse
from dataclasses import dataclass

from reconcile.explainers import MrpInstance, mme
from reconcile.grounding import ground
from reconcile.perturb import FaultSpec, inject, load_problems
from reconcile.planner import optimal_plan


@dataclass
class Config:
    domain: str = "blocksworld"
    faults: int = 10
    seeds: int = 1


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--domain", default=Config.domain)
    ap.add_argument("--faults", type=int, default=Config.faults)
    ap.add_argument("--seeds", type=int, default=Config.seeds)
    a = ap.parse_args()
    cfg = Config(a.domain, a.faults, a.seeds)

    total = 2 ** cfg.faults
    print(f"{'problem':<12} {'seed':>4} {'size':>4} {'pruned':>8} {'unpruned':>9} {'of':>6} {'pruned ms':>10}")
    for k, p in enumerate(load_problems(domains=[cfg.domain])):
        for s in range(cfg.seeds):
            seed = k * cfg.seeds + s
            human = inject(p.model, FaultSpec(seed=seed, n_faults=cfg.faults))
            plan = optimal_plan(ground(p.model)).plan
            pruned = mme(MrpInstance(p.model, human, plan))
            plain = mme(MrpInstance(p.model, human, plan), prune=False)
            print(f"{p.problem_id:<12} {seed:>4} {pruned.size:>4} {pruned.evaluated:>8} {plain.evaluated:>9} "
                  f"{total:>6} {pruned.elapsed * 1000:>10.0f}")


if __name__ == "__main__":
    main()
