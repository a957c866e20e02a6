"""Numerical asymptotics: ratio method, differential approximants, amplitudes, conjectures."""
from .conjectures import (RASCHEL_VARIANTS, DomainError, ExponentStudy, arccos_branches, exponent_study,
                          raschel_g, rho_Q, speculation_constant)
from .constants import (AsymptoticConstants, Estimate, estimate_constants, kappa_extrapolate,
                        subtract_singular_and_reestimate)
from .da import DAResult, DefectiveApproximant, Singularity, SurveyResult, da_survey, fit_da
from .estimators import AmplitudeEstimator, DifferentialApproximant, RatioAnalysis
from .floatseq import FloatSeq
from .ratio import ratio_estimators

__all__ = [
    "AmplitudeEstimator", "AsymptoticConstants", "DAResult", "DefectiveApproximant", "DifferentialApproximant",
    "DomainError", "Estimate", "ExponentStudy", "FloatSeq", "RASCHEL_VARIANTS", "RatioAnalysis", "Singularity",
    "SurveyResult", "arccos_branches", "da_survey", "estimate_constants", "exponent_study", "fit_da",
    "kappa_extrapolate", "ratio_estimators", "raschel_g", "rho_Q", "speculation_constant",
    "subtract_singular_and_reestimate",
]
