"""Reinhardt domains in C^2 with noncompact automorphism group.

Log-shadow domain models, monomial automorphism search, normalized forms and
their Aut_0 actions, the case (i)-(iii) classifier, and boundary smoothness
checks.
"""
from .domain import (
    CustomDomain,
    LogPoint,
    ModulusPoint,
    ReinhardtDomain,
    TheoremI,
    TheoremII,
    TheoremIII,
    axis_intersections,
    contains,
    rasterize_shadow,
    sample_boundary,
    shadow_value,
)
from .monomial import (
    MonomialMap,
    apply_log,
    candidate_shapes,
    compose,
    invert,
    line_containment_probe,
    preserves,
    search_aut_alg,
)
from .normal_forms import NormalForm, as_domain, classify, invert_z2, smooth_admissible
from .smoothness import SmoothnessClass, smoothness_class_case_i, smoothness_witness

__version__ = "0.1.0"
