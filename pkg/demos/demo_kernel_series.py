"""
Kernel series and their decay
=============================

The polyanalytic resolvent kernel ``P2L(s, q)`` has a power-series expansion
in ``q`` that converges for ``|q| < |s|``.  Its truncation error shrinks
geometrically at the ratio ``rho = |q| / |s|``.
"""

# %%
# Closed form versus series
# -------------------------
from fueterkit.hcore import E1, Quaternion
from fueterkit.kern import (appell_kernel_series, dbar_kernel_partial_sums, dbar_tail_bound,
                            kernel_eval)
from fueterkit.verify import series_decay_rate

s = Quaternion(2.0)
print("P2L(2, e1) =", kernel_eval("P2L", s, E1))
print("series     =", appell_kernel_series("left", s, E1, tol=1e-14))

# %%
# Truncation error against the analytic tail bound
# ------------------------------------------------
s = Quaternion(1.2, 0.4, -0.9, 0.3)
for rho in (0.25, 0.5, 0.9):
    q = Quaternion(0.1, 0.5, 0.2, -0.3)
    q = q * (rho * abs(s) / abs(q))
    ref = kernel_eval("P2L", s, q)
    sums = dbar_kernel_partial_sums("left", s, q, 40)
    for N in (5, 10, 20, 40):
        err = abs(sums[N - 1] - ref)
        print(f"rho={rho:4}  N={N:3}  error={err:9.3e}  bound={dbar_tail_bound(rho, N, abs(s)):9.3e}")

# %%
# Fitted ratio
# ------------
# A log-linear fit of the errors recovers ``rho``.
for rho in (0.25, 0.5, 0.9):
    q = Quaternion(0.1, 0.5, 0.2, -0.3)
    q = q * (rho * abs(s) / abs(q))
    print(f"rho={rho}  fitted ratio={series_decay_rate(s, q):.4f}")
