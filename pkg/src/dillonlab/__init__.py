"""Analysis of vectorial Boolean functions and Dillon's D-property."""
from .catalog import FamilySpec, build, gold, parse_spec, random_quadratic, restricted, x3_tr9
from .dproperty import (
    D_FUNCTION,
    NOT_D_FUNCTION,
    DReport,
    UltraTransitiveSet,
    apn_check_anf,
    check_d,
    d_check_anf_span,
    d_check_bruteforce,
    d_check_ddt,
    d_check_hyperplane_quadratic,
    d_check_moment3_quadratic,
    d_check_moment4,
    d_check_plateaued,
    dimension_bounds,
    omega_report,
    second_order_spectrum,
    verify_moment_identities,
)
from .gf2n import FieldCtx, SubspaceBasis, make_field
from .spectra import differential_uniformity, is_apn, nonlinearity, plateaued_profile, walsh_row
from .vbf import VBF, AffineMap, QuadraticAnf, from_anf, from_truth_table, from_univariate, restrict

__version__ = "0.1.0"
