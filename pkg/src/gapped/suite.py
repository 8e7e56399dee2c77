"""Seeded randomized property suite behind ``gapped suite``.

Each property draws from its own ``random.Random`` derived from the seed, so
adding cases to one property never perturbs another.  Output is plain text
in a fixed order, which makes reruns byte-identical.
"""

from __future__ import annotations

import random
from typing import Callable

from .contact_model import SHModelClass, cosphere_invariant, expected_value
from .gapped import (
    dual_pairing,
    gapped_dual,
    gapped_spectral_invariant,
    identity_certificate,
    enumerate_restrictions,
    padding_certificate,
    restriction_stability_report,
    stability_bound_check,
    validate_gapped,
)
from .linalg_ff import compose
from .matching import bottleneck_distance, brute_force_bottleneck
from .persistence import barcode, brute_force_barcode, rank_invariant
from .random_models import (
    random_barcode,
    random_gapped_module,
    random_matrix,
    random_persistence_module,
    random_total_gapped_module,
    random_witnessed_class,
)
from .scalars import format_scalar


def check_barcode_oracle(rng: random.Random) -> bool:
    M = random_persistence_module(rng, max_len=4, max_dim=3)
    B = barcode(M)
    if B != brute_force_barcode(M):
        return False
    pos = list(M.indices) + ([None] if M.has_colimit else [])
    for i in range(len(M.indices)):
        for j in range(i, M.n_positions):
            alive = 0
            for bar, m in B.bars:
                starts = bar.birth <= pos[i]
                if pos[j] is None:
                    ends = bar.infinite
                else:
                    ends = bar.infinite or bar.death >= pos[j]
                if starts and ends:
                    alive += m
            if alive != rank_invariant(M, i, j):
                return False
    return True


def check_bottleneck_oracle(rng: random.Random) -> bool:
    B1, B2 = random_barcode(rng, 5), random_barcode(rng, 5)
    return bottleneck_distance(B1, B2) == brute_force_bottleneck(B1, B2)


def check_restriction_stability(rng: random.Random) -> bool:
    G = random_gapped_module(rng, max_points=8)
    return restriction_stability_report(G).ok


def check_spectral_stability(rng: random.Random) -> bool:
    while True:
        G = random_gapped_module(rng, max_points=12)
        a = random_witnessed_class(rng, G)
        if a is None:
            continue
        g = G.indices[1] - G.indices[0]
        u = g * rng.randint(-2, 2)
        delta = abs(u) + G.gap + g * rng.randint(0, 1)
        H, certs = padding_certificate(G, [rng.randint(0, 2) for _ in G.indices], u, delta)
        if not certs:
            continue
        rep = stability_bound_check(G, H, delta, certs[0], a)
        seq = enumerate_restrictions(G, G.gap)[0]
        same = stability_bound_check(G, G, 0, identity_certificate(G, seq), a)
        return rep.holds and rep.difference == abs(u) and same.c_first == same.c_second


def check_duality(rng: random.Random) -> bool:
    while True:
        G = random_total_gapped_module(rng)
        a = random_witnessed_class(rng, G)
        if a is not None:
            break
    D = gapped_dual(G)
    validate_gapped(D)
    return gapped_spectral_invariant(G, a) == -gapped_spectral_invariant(D, dual_pairing(G, a))


def check_associativity(rng: random.Random) -> bool:
    p = rng.choice([2, 3, 5])
    a, b, c, d = (rng.randint(0, 4) for _ in range(4))
    A, B, C = random_matrix(rng, a, b, p), random_matrix(rng, b, c, p), random_matrix(rng, c, d, p)
    return compose(compose(A, B), C) == compose(A, compose(B, C))


PROPERTIES: list = [
    ("linalg_associativity", check_associativity),
    ("barcode_oracle", check_barcode_oracle),
    ("bottleneck_oracle", check_bottleneck_oracle),
    ("restriction_stability", check_restriction_stability),
    ("spectral_stability", check_spectral_stability),
    ("duality", check_duality),
]


def run_property(name: str, check: Callable, seed: int, cases: int) -> tuple:
    rng = random.Random(f"{seed}/{name}")
    passed = 0
    first_fail = None
    for k in range(cases):
        if check(rng):
            passed += 1
        elif first_fail is None:
            first_fail = k
    return passed, first_fail


def run_suite(seed: int, cases: int) -> tuple:
    lines = [f"seed {seed}", f"cases {cases}"]
    ok = True
    for name, check in PROPERTIES:
        passed, fail = run_property(name, check, seed, cases)
        status = "PASS" if passed == cases else f"FAIL (first failing case {fail})"
        ok &= passed == cases
        lines.append(f"{name}: {passed}/{cases} {status}")
    bad = []
    for k in range(0, 7):
        for kind in ("u", "au"):
            theta = SHModelClass(kind, k)
            if cosphere_invariant(3, 6, 0, theta) != expected_value(theta):
                bad.append(str(theta))
    ok &= not bad
    lines.append(f"cosphere_reproduction: {14 - len(bad)}/14 {'PASS' if not bad else 'FAIL ' + ','.join(bad)}")
    lines.append(f"c(0, u^6) = {format_scalar(cosphere_invariant(3, 6, 0, SHModelClass('u', 6)))}")
    lines.append("result " + ("PASS" if ok else "FAIL"))
    return lines, ok


__all__ = ["PROPERTIES", "run_property", "run_suite"]
