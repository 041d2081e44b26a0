"""
Polyanalytic monomials from the conjugate Fueter operator
=========================================================

Applying the conjugate Fueter operator ``Dbar`` to ``q^n`` gives a polynomial
in ``q`` and ``qbar`` that is annihilated by ``D^2``.  This script builds those
polynomials exactly, splits them into Appell polynomials, and confirms the
exact results with finite differences.
"""

# %%
# Exact images of the powers
# --------------------------
# ``apply_operator_sym`` works on rational coefficients, so every identity
# below holds with zero tolerance.
from fueterkit.hcore import Quaternion
from fueterkit.numdiff import fd_apply
from fueterkit.qpoly import (appell, apply_operator_sym, dbar_monomial, dbar_monomial_appell,
                             laplacian_monomial, polyanalytic_split, q_power)

for n in range(1, 5):
    print(f"Dbar q^{n} =", dbar_monomial(n))

assert all(apply_operator_sym("Dbar", q_power(n)) == dbar_monomial(n) for n in range(1, 21))

# %%
# Appell form
# -----------
# The same polynomials written through the monogenic Appell sequence.
for ell in range(4):
    print(f"Q_{ell} =", appell(ell))

assert all(dbar_monomial(n) == dbar_monomial_appell(n) for n in range(2, 21))
print("Laplacian of q^3 =", laplacian_monomial(3))

# %%
# Splitting into monogenic parts
# ------------------------------
# An order-2 polyanalytic polynomial is ``f0 + x0 f1`` with ``f0, f1`` monogenic.
f0, f1 = polyanalytic_split(dbar_monomial(4))
print("f0 =", f0)
print("f1 =", f1)

# %%
# Numerical confirmation
# ----------------------
# Central differences reproduce the exact derivative at a generic point.
q = Quaternion(0.3, -0.2, 0.5, 0.1)
p = q_power(4)
numeric = fd_apply("Dbar", p.evaluate, q)
exact = dbar_monomial(4).evaluate(q)
print("finite-difference error:", abs(numeric - exact))
print("D^2 residual of Dbar q^4:", abs(fd_apply("D2", dbar_monomial(4).evaluate, q)))
