"""Hyper-singular power-kernel convolutions and their integral equations.

The package defines the convolution family with kernels t**(lam-1)/Gamma(lam)
for all admissible real orders, including the classically divergent range
lam <= 0 realized through Laplace-domain analytic continuation; solves the
associated weakly singular Volterra equations by two independent routes; and
runs the desk-scale majorant pipeline showing that a positive forcing still
yields a solution vanishing at t = 0.
"""

__version__ = "0.1.0"

from .grid import GridFunction, graded_grid, uniform_grid
from .kernel_algebra import Delta, PhiKernel, conv_hyper, conv_positive, convolve, phi_eval, semigroup_check
from .laplace import (
    InversionConfig,
    LaplaceImage,
    TailModel,
    forward_laplace,
    inf_denominator_bound,
    invert,
    inversion_crosscheck,
    phi_image,
)
from .nsp import (
    InitialData,
    ParadoxReport,
    b0_from_initial_data,
    green_tensor_bound_check,
    heat_evolved_spectrum,
    kernel_bound_constant,
    run_paradox,
)
from .quadrature import SingularRule, singular_weights, tail_integral
from .special_functions import (
    AnalyticFunction,
    RegularizationSpec,
    beta,
    gamma,
    reciprocal_gamma,
    regularized_moment,
)
from .comparison import DominationReport, build_inequality_instance, verify_domination
from .volterra import (
    SolverCertificate,
    VolterraProblem,
    make_problem,
    small_time_exponent,
    solve_laplace,
    solve_picard,
    spectral_bound_check,
)
