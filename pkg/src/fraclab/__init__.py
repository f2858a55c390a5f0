"""fraclab: numerical cross-checks for explicit fractional-Laplacian formulas.

The package turns a family of closed-form identities for the fractional
Laplacian (torsion profiles in balls and ellipsoids, an antisymmetric
barrier, Poisson-kernel representations, Bochner dimension lifting, and
fractional perimeters) into machine-checked, reproducible experiments.
Every evaluator is pure; randomized routines are seeded and deterministic.
"""

from .specfun import FracParams, ConstantSet, constants, gamma_fn, hyp2f1, bessel_j
from .quadrature import QuadSpec, IntegralResult, integrate_adaptive, integrate_pv, integrate_mc

__all__ = [
    "FracParams",
    "ConstantSet",
    "constants",
    "gamma_fn",
    "hyp2f1",
    "bessel_j",
    "QuadSpec",
    "IntegralResult",
    "integrate_adaptive",
    "integrate_pv",
    "integrate_mc",
]

__version__ = "0.1.0"
