"""Exact cohomology rings of polygon spaces: nice and perfect manifold
presentations with a polynomial normal-form oracle."""

from .hkn_ring import HknPolynomial, PresentationError, betti, graded_basis
from .labels import NiceLabel, PerfectLabel
from .lengths import LengthError, LengthVector, random_generic
from .nice_ring import RingElement, chern, cup, elementary_product, normal_form, to_hkn
from .perfect_ring import PerfectElement, perfect_product, phi, psi

__all__ = [
    "HknPolynomial", "PresentationError", "betti", "graded_basis",
    "NiceLabel", "PerfectLabel",
    "LengthError", "LengthVector", "random_generic",
    "RingElement", "chern", "cup", "elementary_product", "normal_form", "to_hkn",
    "PerfectElement", "perfect_product", "phi", "psi",
]
