"""Truncated-perturbation algebra used to derive and audit the single-f equations."""
from .termsum import Monomial, TermSum, diff_termsums, parse_symbol
from .derive import derive_pair, derive_scalar_equation, derive_unreduced, derive_eta

__all__ = ["Monomial", "TermSum", "diff_termsums", "parse_symbol", "derive_pair",
           "derive_scalar_equation", "derive_unreduced", "derive_eta"]
