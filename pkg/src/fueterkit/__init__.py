"""Quaternionic slice functions, Fueter-type kernels and functional calculi
on the S-spectrum for commuting matrix quadruples.

Submodules
----------
hcore    quaternion arithmetic and slice geometry
qpoly    exact polynomials in ``q, qbar`` and the operators ``D``, ``Dbar``, ``Delta``
sfun     slice hyperholomorphic functions
kern     Cauchy, F- and P2-kernels with their series
contour  slice contours and quadrature of the integral formulas
opcalc   S-spectrum, resolvents and the S-, F-, P2-calculi
numdiff  finite-difference operators and PDE residuals
verify   named checks grouped into suites
"""
from .errors import *  # noqa: F401,F403
from .hcore import (E1, E2, E3, ONE, Quaternion, format_quaternion, imaginary_unit,
                    parse_quaternion, same_sphere, slice_compose, slice_decompose)
from .qpoly import (AxialPoly, QQbarPoly, appell, apply_operator_sym, dbar_monomial,
                    dbar_monomial_appell, laplacian_monomial, polyanalytic_split)
from .sfun import (SliceFunction, StemFunction, builtin, exponential, left_series, power,
                   rational, right_series, slice_eval, tf_extend)
from .kern import appell_kernel_series, dbar_kernel_series, kernel_eval, qcs
from .contour import (SliceContour, cauchy_eval, contour_independence_check,
                      fueter_integral_eval, polyanalytic_integral_eval)
from .opcalc import (CommutingOperator, FunctionalCalculus, QuaternionMatrix, calculus_apply,
                     qcs_op_inverse, resolvent_eval, s_spectrum, series_oracle)
from .numdiff import FDConfig, fd_apply, residual_suite, vekua2_residual

__version__ = "0.1.0"
