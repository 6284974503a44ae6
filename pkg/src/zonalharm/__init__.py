"""Spherical harmonics on R^d: canonical decompositions, zonal expansions,
Fourier and Hankel transforms, each paired with an independent check."""

from .bessel import bessel_j, spherical_j
from .gegenbauer import GegenbauerPoly, ZonalKernel, gegenbauer, gegenbauer_eval
from .harmonic import HarmonicDecomposition, decompose, harmonic_dim, project
from .polyalg import (
    HomogeneousPolynomial,
    PolynomialParseError,
    UnitVector,
    laplacian,
    parse_polynomial,
    sphere_inner_product,
)
from .transforms import (
    RadialProfile,
    bochner_components,
    bochner_laplacian,
    hankel,
    sphere_ft_components,
    sphere_ft_laplacian,
    sphere_ft_oracle,
)
from .zonal import ZonalExpansion, ZonalProfile, evaluate_expansion, expand

__version__ = "0.1.0"

__all__ = [
    "HomogeneousPolynomial",
    "PolynomialParseError",
    "UnitVector",
    "laplacian",
    "parse_polynomial",
    "sphere_inner_product",
    "HarmonicDecomposition",
    "decompose",
    "harmonic_dim",
    "project",
    "GegenbauerPoly",
    "ZonalKernel",
    "gegenbauer",
    "gegenbauer_eval",
    "ZonalExpansion",
    "ZonalProfile",
    "evaluate_expansion",
    "expand",
    "bessel_j",
    "spherical_j",
    "RadialProfile",
    "hankel",
    "bochner_components",
    "bochner_laplacian",
    "sphere_ft_components",
    "sphere_ft_laplacian",
    "sphere_ft_oracle",
]
