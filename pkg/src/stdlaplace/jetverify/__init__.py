"""Exact jet computations at a point: Levi-Civita geometry of a metric jet, operators on
section jets, and checks of the commutator formula and related identities."""
from .checks import (JetReport, equivariant_maps, verify_commutator, verify_forms, verify_gauge,
                     verify_identities)
from .metric import (Geometry, MetricJet, flat_jet, geometry_at_origin, metric_from_curvature,
                     random_metric_jet, regauge, sphere_jet)
from .operators import (Fiber, SectionJet, apply_operator, covariant_derivative, laplacian,
                        random_section)
from .poly import DegreeBudgetError, Monomials, PolyJet, monomials
from .suite import SuiteReport, form_gradients, jet_seeds, replay, run_suite

__all__ = [
    "DegreeBudgetError", "Fiber", "Geometry", "JetReport", "MetricJet", "Monomials", "PolyJet",
    "SectionJet", "SuiteReport", "apply_operator", "covariant_derivative", "equivariant_maps",
    "flat_jet", "form_gradients", "geometry_at_origin", "jet_seeds", "laplacian",
    "metric_from_curvature", "monomials", "random_metric_jet", "random_section", "regauge",
    "replay", "run_suite", "sphere_jet", "verify_commutator", "verify_forms", "verify_gauge",
    "verify_identities",
]
