#!/usr/bin/env python3
"""Reference values for the failure-probability bounds, computed in 50-digit
arithmetic with mpmath. Writes tests/oracles/bound_reference.inc.

    python3 tests/oracles/bound_reference.py > tests/oracles/bound_reference.inc
"""

from mpmath import mp, mpf, exp, binomial

mp.dps = 50


def eps1(phi, n, p, edges, m, proof=False):
    phi, n, p, edges = mpf(phi), mpf(n), mpf(p), mpf(edges)
    s = (1 - 2 * p) ** 2
    first = 2 * n**m * exp(-s * phi ** (2 * m) / (8 * n**m * max(edges, n ** (m - 1))))
    coef = 16 * p * (1 - p) if proof else 16 * (1 - p)
    return first + coef * edges / (s * phi ** (2 * m))


def eps2(n, q):
    return exp(-((1 - 2 * mpf(q)) ** 2) * mpf(n) / 2)


def combined(phi, n, p, q, edges, m):
    return min(mpf(1), eps1(phi, n, p, edges, m) + eps2(n, q))


# (phi, n, p, q, edges, m)
GRID = [
    (60, 10, 0.1, 0.1, 210, 6),
    (35, 8, 0.0, 0.0, 28, 6),
    (35, 8, 0.2, 0.3, 28, 6),
    (10, 10, 0.1, 0.25, 210, 6),
    (12, 10, 0.3, 0.1, 120, 6),
    (8, 8, 0.05, 0.2, 28, 6),
    (20, 12, 0.15, 0.4, 924, 6),
    (50, 16, 0.45, 0.05, 8008, 6),
    (3, 10, 0.1, 0.1, 20, 2),
    (5, 10, 0.0, 0.0, 45, 2),
    (5, 10, 0.25, 0.25, 45, 2),
    (8, 16, 0.1, 0.2, 120, 2),
    (12, 24, 0.2, 0.3, 276, 2),
    (2.5, 6, 0.05, 0.45, 9, 2),
    (30, 40, 0.3, 0.1, 780, 2),
    (1.5, 4, 0.4, 0.0, 6, 2),
    (7, 12, 0.35, 0.15, 300, 2),
    (9, 9, 0.1, 0.49, 84, 6),
    (14, 9, 0.2, 0.2, 84, 6),
    (100, 20, 0.1, 0.1, 38760, 6),
]


def lit(x):
    # values below the double range are written as an exact zero
    return mp.nstr(x, 25, min_fixed=-1, max_fixed=-1) if abs(x) > mpf("1e-300") else "0.0"


print("// Generated by bound_reference.py. Do not edit.")
print("// {phi, n, p, q, edges, m, epsilon1, epsilon1_proof, epsilon2, combined}")
print("inline constexpr BoundRow kBoundGrid[] = {")
for phi, n, p, q, e, m in GRID:
    vals = [eps1(phi, n, p, e, m), eps1(phi, n, p, e, m, True), eps2(n, q), combined(phi, n, p, q, e, m)]
    print(f"    {{{phi}, {n}, {p}, {q}, {e}, {m}, {', '.join(lit(v) for v in vals)}}},")
print("};")
print()
print("// Complete 6-uniform hypergraphs: phi = C(n,3)/2, |E| = C(n,6), p = q = 0.1.")
print("// {n, phi, edges, combined}")
print("inline constexpr DecayRow kCompleteDecay[] = {")
for n in range(8, 65):
    phi = binomial(n, 3) / 2
    e = binomial(n, 6)
    print(f"    {{{n}, {lit(phi)}, {int(e)}, {lit(combined(phi, n, 0.1, 0.1, e, 6))}}},")
print("};")
