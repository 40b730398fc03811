"""Normalization weights of the reinforced walk, and how fast they reach
their asymptotic shape.

The drift-removing weights a_k follow the one-step recurrence
a_{k+1} = a_k k / (k + 2p - 1); the variance scale is v_n = sum a_k^2.
This script cross-checks the recurrence against an independent log-gamma
evaluation and then probes the classic limits

    a_n n^{2p-1}        -> Gamma(2p)
    v_n (3-4p)/n^{3-4p} -> Gamma(2p)^2          (p < 3/4)
    v_n / log n         -> Gamma(3/2)^2 = pi/4  (p = 3/4)

The critical limit converges only like 1/log n, which is worth seeing
with real numbers: even at n = 10^6 the measured ratio sits ~7% high.
"""

import math

import numpy as np

from erwalk import WalkParams, a_via_loggamma, asymptotic_ratios, build_coefficients

print("=== recurrence vs independent log-gamma oracle ===")
for p in (0.1, 0.3, 0.65, 0.9):
    table = build_coefficients(WalkParams(p=p, q=0.5, n=10 ** 6))
    probe = np.array([10, 10 ** 3, 10 ** 6])
    gap = np.max(np.abs(table.a[probe - 1] / a_via_loggamma(probe, p) - 1.0))
    print(f"  p={p:4}: max relative gap over n in {{10, 1e3, 1e6}}: {gap:.2e}")

print()
print("=== diffusive asymptotics at n = 10^6 ===")
for p in (0.3, 0.65):
    r = asymptotic_ratios(build_coefficients(WalkParams(p=p, q=0.5, n=10 ** 6)))
    print(f"  p={p:4}: a-ratio = {r.a_ratio:.6f}   v-ratio = {r.v_ratio:.6f}   (both -> 1)")

print()
print("=== critical regime: v_n / log n against both candidate constants ===")
print("    the transient is ((pi/4) * euler_gamma + c) / log n with c ~ 0.3455,")
print("    so convergence is painfully slow:")
for n in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6):
    r = asymptotic_ratios(build_coefficients(WalkParams(p=0.75, q=0.5, n=n)))
    dev_pi4 = r.v_ratio / (math.pi / 4) - 1.0
    dev_34 = r.v_ratio / 0.75 - 1.0
    print(
        f"  n = 10^{round(math.log10(n))}: v_n/log n = {r.v_ratio:.5f}"
        f"   vs pi/4: {dev_pi4:+.2%}   vs 3/4: {dev_34:+.2%}"
    )
print("    (pi/4 = 0.78540 is the Stirling-consistent constant; 3/4 is not.)")
