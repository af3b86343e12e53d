"""Classify random modal formulas by the cluster sizes on which they hold.

    python3 scripts/scroggs_table.py --count 300 --seed 7
"""

import argparse
import collections
import random
from dataclasses import dataclass

from bairelogic.decision import classify_scroggs
from bairelogic.errors import BudgetExceededError
from bairelogic.formula import bounded_width, random_formula, render


@dataclass
class TableConfig:
    count: int = 300
    seed: int = 7
    n_vars: int = 3
    max_size: int = 12
    cap: int = 8


def classify(f, cap):
    try:
        return str(classify_scroggs(f, cap=cap))
    except BudgetExceededError:
        return "over budget"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in vars(TableConfig()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=int, default=value)
    cfg = TableConfig(**vars(ap.parse_args()))

    print("bounded width formulas:")
    for n in range(1, 5):
        print(f"  bd{n}: {classify(bounded_width(n), cfg.cap)}")

    rng = random.Random(cfg.seed)
    tally = collections.Counter()
    examples = {}
    for _ in range(cfg.count):
        f = random_formula(rng, n_vars=cfg.n_vars, max_size=cfg.max_size, max_depth=3)
        label = classify(f, cfg.cap)
        tally[label] += 1
        examples.setdefault(label, render(f))
    print(f"\n{cfg.count} random formulas (seed {cfg.seed}):")
    for label, k in sorted(tally.items(), key=lambda kv: -kv[1]):
        print(f"  {label:<14} {k:>5}   e.g. {examples[label]}")


if __name__ == "__main__":
    main()
