# scripts/run_trials.py
"""
Randomized trials for the characterization results:

  python scripts/run_trials.py --trials 200 --seed 7

Each trial draws two weighted families (ambient dim <= 8, <= 5 members,
member dims 1..n, weights in [1, 2]) with random local frames and checks
  - fusion weaving and lifted weaving agree, with both bound sandwiches
  - universal_lower >= alpha^2 / (B^2 + D^2) and universal_lower == alpha
  - ||T_sigma||^2 == lambda_max(S_sigma) and ||T_sigma|| <= 2 sqrt(B_VW)
Exit code 1 when any trial fails.
"""

import argparse
import logging
import os
import sys
import time

import numpy as np

# Add project root to Python path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from config import Settings, configure_logging
from core.builtins import random_local_system, random_weighted_family
from core.lifting import equivalence_check
from core.weaving import synthesis_norm_check


def run_trial(rng: np.random.Generator, settings: Settings, max_dim: int = 8, max_size: int = 5) -> dict:
    n = int(rng.integers(1, max_dim + 1))
    m = int(rng.integers(1, max_size + 1))
    v = random_weighted_family(rng, n, m)
    w = random_weighted_family(rng, n, m)
    v_system = random_local_system(rng, v)
    w_system = random_local_system(rng, w)

    report = equivalence_check(v_system, w_system, settings=settings)
    fusion = report.fusion
    norms = synthesis_norm_check(v, w, settings)
    return {
        "n": n,
        "m": m,
        "woven": fusion.woven,
        "equivalence": report.holds,
        "lemma_floor": fusion.lemma_floor_holds,
        "sharpening": abs(fusion.universal_lower - fusion.alpha) <= 1e-12 * max(1.0, fusion.universal_upper),
        "synthesis_norms": norms.holds,
    }


def run_trials(trials: int, seed: int, settings: Settings) -> dict:
    rng = np.random.default_rng(seed)
    outcomes = [run_trial(rng, settings) for _ in range(trials)]
    checks = ("equivalence", "lemma_floor", "sharpening", "synthesis_norms")
    failures = {c: sum(not o[c] for o in outcomes) for c in checks}
    return {
        "trials": trials,
        "woven": sum(o["woven"] for o in outcomes),
        "failures": failures,
        "passed": all(v == 0 for v in failures.values()),
    }


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    settings = Settings.from_env()
    configure_logging(settings)
    logging.getLogger().setLevel(logging.WARNING)

    started = time.perf_counter()
    summary = run_trials(args.trials, args.seed, settings)
    print(f"trials: {summary['trials']} (woven: {summary['woven']})")
    for name, count in summary["failures"].items():
        print(f"  {name}: {count} failures")
    print(f"elapsed: {time.perf_counter() - started:.2f}s")
    return 0 if summary["passed"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
