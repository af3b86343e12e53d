"""Sweep small S4 frames: quotient sizes, axiom checks and resolvability.

    python3 scripts/sweep_quotients.py --max-worlds 5
"""

import argparse
import collections
import time
from dataclasses import dataclass

from bairelogic.algebra import verify_axioms
from bairelogic.frame import qmax, popcount, s4_frames_up_to
from bairelogic.maps import find_baire_resolution
from bairelogic.quotient import build_quotient


@dataclass
class SweepConfig:
    max_worlds: int = 5
    max_k: int = 4


def largest_resolution(fr, max_k):
    best = 0
    for k in range(1, max_k + 1):
        if find_baire_resolution(fr, k) is None:
            break
        best = k
    return best


def sweep(cfg: SweepConfig):
    rows = []
    for n in range(1, cfg.max_worlds + 1):
        start = time.perf_counter()
        frames = [fr for fr in s4_frames_up_to(n) if fr.size == n]
        carriers = collections.Counter()
        resolvable = collections.Counter()
        monadic = 0
        for fr in frames:
            q = build_quotient(fr)
            carriers[popcount(qmax(fr))] += 1
            monadic += verify_axioms(q.algebra, "monadic").ok
            resolvable[largest_resolution(fr, cfg.max_k)] += 1
        rows.append((n, len(frames), monadic, dict(sorted(carriers.items())),
                     dict(sorted(resolvable.items())), time.perf_counter() - start))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-worlds", type=int, default=SweepConfig.max_worlds)
    ap.add_argument("--max-k", type=int, default=SweepConfig.max_k)
    args = ap.parse_args()
    cfg = SweepConfig(args.max_worlds, args.max_k)
    print("worlds  frames  monadic  |qmax| histogram            largest k histogram       secs")
    for n, count, monadic, carriers, resolvable, secs in sweep(cfg):
        print(f"{n:>6}  {count:>6}  {monadic:>7}  {str(carriers):<26}  {str(resolvable):<24}  {secs:.2f}")


if __name__ == "__main__":
    main()
