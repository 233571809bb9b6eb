"""Section-to-section interaction laws for slender fibers modeled as Hermite beams.

Modules: geometry (elements, shape functions), potentials (point and section
laws), quadrature, oracles (brute-force reference integrals), pair (element
pair forces and stiffness), elastic (beam surrogate), broadphase, solver,
config/scenarios/cli (runs and outputs), verification and bench.
"""

from .geometry import BeamElement, NodeDOF, gap_state, hermite_basis, shape_functions
from .potentials import (CrossSectionPair, LJComposite, LennardJones, LongRangeMonopole, Power,
                         RegularizedLJ, ShortRangeSmallSep, regularize_lj)
from .quadrature import QuadratureRule

__all__ = [
    "BeamElement", "NodeDOF", "gap_state", "hermite_basis", "shape_functions",
    "CrossSectionPair", "LJComposite", "LennardJones", "LongRangeMonopole", "Power",
    "RegularizedLJ", "ShortRangeSmallSep", "regularize_lj", "QuadratureRule",
]
