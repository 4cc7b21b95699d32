"""Exact (co)homology of Coxeter groups with group-ring and Hecke-algebra coefficients."""

from .coxeter import CoxeterMatrix, CoxeterSystem, coxeter_matrix
from .complexes import MirroredComplex, davis_chamber, load_mirrored_complex
from .groupring import GroupRing, GroupRingElement
from .hecke import HeckeAlgebra, HeckeElement
from .homology import ChainComplexZ, HomologySummary, cohomology, homology, smith_normal_form

__version__ = "0.1.0"

__all__ = [
    "ChainComplexZ",
    "CoxeterMatrix",
    "CoxeterSystem",
    "GroupRing",
    "GroupRingElement",
    "HeckeAlgebra",
    "HeckeElement",
    "HomologySummary",
    "MirroredComplex",
    "cohomology",
    "coxeter_matrix",
    "davis_chamber",
    "homology",
    "load_mirrored_complex",
    "smith_normal_form",
]
