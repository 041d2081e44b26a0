"""
Functional calculi for a commuting quadruple
============================================

A quaternionic matrix ``T = T0 + e1 T1 + e2 T2 + e3 T3`` with commuting real
components has an S-spectrum computed from a companion linearisation.  Contour
integrals over a slice then give the S-, F- and P2-calculi.
"""

# %%
# A random commuting quadruple and its spectrum
# ---------------------------------------------
import numpy as np

from fueterkit.contour import SliceContour
from fueterkit.hcore import E2
from fueterkit.opcalc import (FunctionalCalculus, default_contour, monomial_oracle,
                              random_commuting_operator, resolvent_eval, s_spectrum, series_oracle,
                              operator_norm_bound)
from fueterkit.sfun import exponential, power

T = random_commuting_operator(np.random.default_rng(7), 3)
print(s_spectrum(T).to_csv())

# %%
# Calculi of powers against closed forms
# --------------------------------------
calc = FunctionalCalculus(T)
for which in ("S", "F", "P2"):
    M = calc.apply(which, power(4))
    O = monomial_oracle(which, 4, T)
    print(which, "deviation from closed form:", abs(M - O))

# %%
# Independence of the contour
# ---------------------------
# Another radius and another imaginary unit give the same operator.
R = default_contour(T).outer.radius
other = FunctionalCalculus(T, SliceContour.disk(2 * R, 0.0, E2))
print("P2(exp) contour change:", abs(calc.apply("P2", exponential()) - other.apply("P2", exponential())))

# %%
# Resolvent versus its series
# ---------------------------
s = 3.0 * operator_norm_bound(T)
print("P2 resolvent vs series:", abs(resolvent_eval("P2L", s, T) - series_oracle("dbar_kernel_op", "left", s, T)))
