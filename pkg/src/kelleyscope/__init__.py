"""Exact intersection numbers, Kelley measures and Mägerl-Namioka covers for finite set algebras."""

from .algebra import (
    Element,
    Family,
    GroundSet,
    complement,
    full_algebra_positive,
    is_antichain,
    is_centered,
    join,
    meet,
    quotient_by_ideal,
)
from .errors import BudgetError, CertificateError, DomainError, KelleyscopeError, StructuralError
from .generators import IdealSpec, InstanceSpec, generate, ideal_truncation
from .intersection import (
    IntersectionCertificate,
    WeightedSequence,
    intersection_index,
    intersection_number_bruteforce,
    intersection_number_exact,
    verify_certificate,
)
from .kelley import CoverCertificate, class_feasible, cover_from_measure, synthesize_measure_from_cover
from .measures import Measure, is_strictly_positive
from .mn import MNReport, mn_min_cover
from .sweep import Analysis, run_sweep

__version__ = "0.1.0"
