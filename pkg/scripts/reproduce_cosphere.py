#!/usr/bin/env python3
"""Print the spectral values of the cosphere model next to the closed form -2pi*ceil(k/2)."""

from __future__ import annotations

import argparse

from gapped.contact_model import SHModelClass, cosphere_invariant, expected_value
from gapped.scalars import format_scalar, parse_scalar


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--mmax", type=int, default=6)
    ap.add_argument("--h", default="0")
    args = ap.parse_args()
    h = parse_scalar(args.h)
    ok = True
    print(f"{'class':>6} {'degree':>6} {'computed':>12} {'expected':>12}")
    for kind in ("u", "au"):
        for k in range(2 * args.mmax + 1):
            theta = SHModelClass(kind, k)
            got = cosphere_invariant(args.n, args.mmax, h, theta)
            want = expected_value(theta, h)
            ok &= got == want
            print(f"{str(theta):>6} {theta.degree(args.n):>6} {format_scalar(got):>12} {format_scalar(want):>12}")
    print("all match" if ok else "MISMATCH")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
