"""Hilbert Eisenstein series over real quadratic fields of narrow class number one."""

__version__ = "0.1.0"

from .cyclo import CycloNumber, ResidueMap, parse_cyclo, reduce_mod_p, sqrt_disc, valuation_at_p
from .quadfield import QuadField, OIdeal, make_field
from .rayclass import RayCharacter, gauss_sum, named_character, ray_class_group
from .lvalues import l_value_nonpositive, l_value_numeric
from .eisenstein import EisensteinSeries
from .congruence import CuspFormData, c_constant, check_fourier_congruence, congruence_module_order, criterion_report
from .specialvalues import eisenstein_special_value, mod_p_nonvanishing, verify_special_value_numeric

__all__ = [
    "CycloNumber", "ResidueMap", "parse_cyclo", "reduce_mod_p", "sqrt_disc", "valuation_at_p",
    "QuadField", "OIdeal", "make_field",
    "RayCharacter", "gauss_sum", "named_character", "ray_class_group",
    "l_value_nonpositive", "l_value_numeric",
    "EisensteinSeries",
    "CuspFormData", "c_constant", "check_fourier_congruence", "congruence_module_order", "criterion_report",
    "eisenstein_special_value", "mod_p_nonvanishing", "verify_special_value_numeric",
]
