"""Commutator error terms, the vanishing criterion and the example surveys."""
from .criterion import CriterionResult, hom_multiplicity, vanishing_criterion
from .derivative import (curvature_module, derivative_space, derivative_weights,
                         random_curvature_derivative, second_bianchi_matrix)
from .error import ErrorTerm, error_term
from .qk import QK_CASES, QKReport, qk_generator_errors
from .surveys import (SurveyReport, derived_c, form_block, g2_survey, g2_table, load_golden,
                      nearly_kaehler_survey, rarita_schwinger, spin7_survey, survey_report)

__all__ = [
    "QK_CASES", "CriterionResult", "ErrorTerm", "QKReport", "SurveyReport", "curvature_module",
    "derivative_space", "derivative_weights", "derived_c", "error_term", "form_block",
    "g2_survey", "g2_table", "hom_multiplicity", "load_golden", "nearly_kaehler_survey",
    "qk_generator_errors", "random_curvature_derivative", "rarita_schwinger",
    "second_bianchi_matrix", "spin7_survey", "survey_report", "vanishing_criterion",
]
