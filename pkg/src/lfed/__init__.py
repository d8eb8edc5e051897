"""Exact images, normal forms and Mathieu-Zhao checks for E-derivations and derivations."""
from .claims import ClaimReport, HypothesisError, verify_claim
from .image import compare_images, ideal_slice_test, image_basis, member
from .maps import Derivation, EDerivation, Endomorphism, PolyAutomorphism, classify, conjugate
from .mzlab import check_prop27, conjecture45_explore, mz_spot_check, radical_scan
from .normalize import (
    linearize_triangular_derivation,
    normalize_affine_dim2,
    shift_to_origin,
)
from .polyring import PolyRing, Polynomial
from .scalar import Scalar, field, resonance

__version__ = "0.1.0"

__all__ = [
    "ClaimReport",
    "Derivation",
    "EDerivation",
    "Endomorphism",
    "HypothesisError",
    "PolyAutomorphism",
    "PolyRing",
    "Polynomial",
    "Scalar",
    "check_prop27",
    "classify",
    "compare_images",
    "conjecture45_explore",
    "conjugate",
    "field",
    "ideal_slice_test",
    "image_basis",
    "linearize_triangular_derivation",
    "member",
    "mz_spot_check",
    "normalize_affine_dim2",
    "radical_scan",
    "resonance",
    "shift_to_origin",
    "verify_claim",
]
