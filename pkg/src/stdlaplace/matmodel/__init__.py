"""Matrix models of bundle fibres and curvature, q(R) and the curvature identities."""
from .curvature import (CurvatureDerivative, CurvatureTensor, TorsionForm, constant,
                        curvature_model, from_endomorphisms, q_of_R, random_bianchi, sphere,
                        symmetric_pair, symmetric_space_casimir)
from .gradients import (ConformalWeight, GradientSpec, b_operator, codifferential_gradient,
                        conformal_weights, gradient_from_map, gradient_targets, wedge_gradient,
                        weight_trace)
from .grassmann import IntegralReport, grassmann_integral_check
from .identities import IdentityReport, curvature_identities_check
from .reps import (MatrixRep, direct_sum, exterior, label_component, rep_functor, spinor,
                   symmetric_traceless, tangent, tensor, trivial)

__all__ = [
    "ConformalWeight", "CurvatureDerivative", "CurvatureTensor", "GradientSpec",
    "IdentityReport", "IntegralReport", "MatrixRep", "TorsionForm", "b_operator",
    "codifferential_gradient", "conformal_weights", "constant", "curvature_identities_check",
    "curvature_model", "direct_sum", "exterior", "from_endomorphisms", "gradient_from_map",
    "gradient_targets", "grassmann_integral_check", "label_component", "q_of_R",
    "random_bianchi", "rep_functor", "sphere", "spinor", "symmetric_pair",
    "symmetric_space_casimir", "symmetric_traceless", "tangent", "tensor", "trivial",
    "wedge_gradient", "weight_trace",
]
