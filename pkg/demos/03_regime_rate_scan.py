"""Decay of the normal approximation across the three memory regimes.

The claimed upper-bound shapes are log n / sqrt(n) below p = 1/2,
log n / n^{(3-4p)/2} between 1/2 and 3/4, and log log n / sqrt(log n) at
the critical point.  Constants are unknown, so the checkable content is:
the fitted decay exponent, and that the envelope ratio W1 / rate does not
grow with n.  Everything here uses the exact dynamic program, so the
curves are noise-free.
"""

import numpy as np

from erwalk import w1_scan_exact

NS = [2 ** e for e in range(6, 12)]

for p, label in ((0.3, "diffusive-low"), (0.65, "diffusive-high"), (0.75, "critical")):
    report = w1_scan_exact(p, 0.5, NS)
    print(f"=== p = {p} ({label}) ===")
    print("      n        W1          rate        W1/rate")
    for n, w1, rate, ratio in zip(report.ns, report.w1, report.rate, report.ratio):
        print(f"  {n:7d}   {w1:.6f}   {rate:.6f}   {ratio:.6f}")
    slope = "n/a (log-log fit uninformative here)" if np.isnan(report.fitted_slope) \
        else f"{report.fitted_slope:.4f}"
    print(f"  fitted log-log slope: {slope}")
    print(f"  envelope max  C  = {report.envelope_c:.4f}")
    print(f"  envelope drift   = {report.envelope_drift:.4f}  (<= 1 means the bound never tightens)")
    print()

print("notes: at p = 0.3 the measured slope hugs -1/2, visibly better than the")
print("log-corrected bound; at p = 0.65 the bound's exponent is (3-4p)/2 = 0.2")
print("but the measured decay is again ~ -1/2, so the envelope ratio shrinks;")
print("at the critical point only slow log-decay is visible, and monotone")
print("decrease plus a non-growing envelope is the meaningful desk-scale check.")
