#!/usr/bin/env python3
"""Random gapped modules: distances between normalized restrictions against the 2*lam bound."""

from __future__ import annotations

import argparse
import random
from collections import Counter

from gapped.gapped import restriction_stability_report
from gapped.random_models import random_gapped_module
from gapped.scalars import INF, format_scalar


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--modules", type=int, default=200)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    ratios: Counter = Counter()
    failures = 0
    for _ in range(args.modules):
        G = random_gapped_module(rng)
        rep = restriction_stability_report(G)
        failures += not rep.ok
        for _, _, d, _ in rep.pairs:
            ratios[d / G.gap if d != INF else INF] += 1
    print(f"seed {args.seed}, {args.modules} modules, {failures} over the bound")
    print("d_inter / lam histogram:")
    for key in sorted(ratios):
        print(f"  {format_scalar(key):>6}: {ratios[key]}")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
