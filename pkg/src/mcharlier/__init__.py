"""Multiple Charlier polynomials: exact evaluation, certified zeros and limit laws."""

from .core import (
    MultiIndex,
    ParameterSet,
    RecurrenceData,
    ResourceLimitError,
    ScaledPolynomialHandle,
    ValidationError,
    coefficients,
    contour_integral_eval,
    eval_explicit,
    eval_recurrence,
    eval_rodrigues,
    generating_coefficient,
    recurrence_coeffs,
    subleading_coeff,
)
from .limits import (
    LimitLaw,
    RegimeParams,
    alpha_beta,
    decay_diagnostic,
    density_v,
    g_r,
    limit_law,
    ratio_bound_fixed,
    ratio_limit_fixed,
    ratio_limit_varying,
    stieltjes_empirical,
    stieltjes_limit,
)
from .ortho import MomentResidual, moment_sum, normalization_sum
from .zeros import EmpiricalMeasure, ZeroSet, empirical_measure, find_zeros, interlacing_check, ks_distance

__version__ = "0.1.0"
