"""Exact localization and projection-formula checks on ind-Grassmannians."""

from .errors import LocProjError, NoStabilization
from .grassmann import WeightList, euler_localized, martin_chi, residue_sum_check
from .models import EXAMPLES, get_spec, load_spec
from .plethysm import SymFun, lambda_w_series
from .projection import Cutoffs, VerificationReport, check_conditions, rhs_sum, verify_projection
from .series import Character, Grading, RationalCharacter, Truncation, expand

__all__ = [
    "Character",
    "RationalCharacter",
    "Grading",
    "Truncation",
    "expand",
    "SymFun",
    "lambda_w_series",
    "WeightList",
    "euler_localized",
    "martin_chi",
    "residue_sum_check",
    "EXAMPLES",
    "get_spec",
    "load_spec",
    "Cutoffs",
    "VerificationReport",
    "check_conditions",
    "rhs_sum",
    "verify_projection",
    "LocProjError",
    "NoStabilization",
]
