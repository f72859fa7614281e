"""Wall time of each suite in symbolic mode (one shared context, as in `verify --suite all`)."""

import argparse
import time

from fedosphere.suites import SUITES, Context, run_suites


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--mode", choices=("symbolic", "points"), default="symbolic")
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    ctx = Context(seed=args.seed, points=args.points, mode=args.mode)
    total = 0.0
    for name in SUITES:
        t0 = time.perf_counter()
        rep = run_suites([name], ctx)
        dt = time.perf_counter() - t0
        total += dt
        n = rep.counts()
        print(f"{name:14s} {dt:7.1f} s  pass={n['pass']} fail={n['fail']} skip={n['skip']}")
    print(f"{'total':14s} {total:7.1f} s")


if __name__ == "__main__":
    main()
