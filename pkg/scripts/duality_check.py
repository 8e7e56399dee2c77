#!/usr/bin/env python3
"""Check c(a, G) = -c(a*, dual G) on the cosphere model and on random gapped modules."""

from __future__ import annotations

import argparse
import random

from gapped.contact_model import build_cosphere_model
from gapped.gapped import dual_pairing, gapped_dual, gapped_spectral_invariant
from gapped.random_models import random_total_gapped_module, random_witnessed_class
from gapped.scalars import format_scalar


def check(G, a) -> tuple:
    c = gapped_spectral_invariant(G, a)
    d = gapped_spectral_invariant(gapped_dual(G), dual_pairing(G, a))
    return c, d, c == -d


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cases", type=int, default=100)
    args = ap.parse_args()
    ok = True
    n = args.n
    for degree in (0, 2 * n - 2, 2 * n - 1, 3 * n - 2):
        model = build_cosphere_model(n, 4, degree)
        c, d, good = check(model.module, model.class_vector(model.generator))
        ok &= good
        print(f"degree {degree} ({model.generator}): c={format_scalar(c)} dual={format_scalar(d)}")
    rng = random.Random(args.seed)
    done = 0
    while done < args.cases:
        G = random_total_gapped_module(rng)
        a = random_witnessed_class(rng, G)
        if a is None:
            continue
        ok &= check(G, a)[2]
        done += 1
    print(f"{done} random modules checked: {'ok' if ok else 'FAILED'}")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
