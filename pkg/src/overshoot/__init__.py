"""Overshoot between samples of band-limited signals.

Bounds on the peak value of a signal relative to its samples, operator
norms of kernel interpolation, L1 norms of the kernels, and numerical
lower-bound oracles.
"""

from .bounds import (BoundResult, RationalRate, best_upper_bound, c1_corollary_bound,
                     c1_cos_bound, c1_sqrt_bound, c2_asymptotic, c2_new_bound, c2_sota_bound,
                     layered_overshoot_bound, nyquist_overshoot_bound)
from .errors import (DomainError, NonConvergenceError, ParameterError, PreconditionError,
                     ToleranceError)
from .kernels import KernelSpec, LayeredFilter, Variant, eval_freq, eval_time
from .l1norm import QuadratureSpec, kernel_l1
from .opnorm import GridSpec, operator_norm, reconstruct, sample_instants, shannon_reconstruct
from .verify import TrigPoly, extremal_check, lp_c1_trig, monte_carlo_lower_bound

__version__ = "0.1.0"
