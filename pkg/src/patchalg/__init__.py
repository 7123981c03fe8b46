"""patchalg: exact truncated arithmetic in analytic subrings of K[[X,Y]].

Canonical forms over charts t = X - c_j Y with generators z_k = Y/(X - c_k Y),
their valuation, additive support splitting and membership tests, matrix
factorization by the Cartan iteration, Hensel roots, Kummer-extension
valuation transfer, and the division-algebra valuation certificate.
"""

__version__ = "0.1.0"

from .scalars import FieldDescriptor, Scalar, QQ, cyclotomic_field, field_arith, root_of_unity
from .series import BivarSeries, TruncSeries, poly_simple_root, prime_valuation, weierstrass_div
from .analytic import (
    AnalyticElement,
    Configuration,
    LocalizedElement,
    PrimePoint,
    chart_ratio_unit,
    default_configuration,
    embed_xy,
    membership,
    prime_point_valuation,
    random_element,
    split,
    t_element,
    unit_invert,
    weierstrass_prepare_linear,
    z_generator,
)
from .oracle import OracleCache, lin_indep_check, oracle_expand, oracle_of_element, source_of
from .patching import FactorizationResult, PatchMatrix, cartan_factor, gl_factor
from .kummer import (
    DivisionAlgebraCertificate,
    KummerElement,
    KummerExtension,
    Scenario,
    build_scenario,
    certify_division_algebra,
    hensel_root,
    quaternion_mul,
    quaternion_norm,
)

__all__ = [
    "__version__",
    "FieldDescriptor", "Scalar", "QQ", "cyclotomic_field", "field_arith", "root_of_unity",
    "BivarSeries", "TruncSeries", "poly_simple_root", "prime_valuation", "weierstrass_div",
    "AnalyticElement", "Configuration", "LocalizedElement", "PrimePoint",
    "chart_ratio_unit", "default_configuration", "embed_xy", "membership",
    "prime_point_valuation", "random_element", "split", "t_element", "unit_invert",
    "weierstrass_prepare_linear", "z_generator",
    "OracleCache", "lin_indep_check", "oracle_expand", "oracle_of_element", "source_of",
    "FactorizationResult", "PatchMatrix", "cartan_factor", "gl_factor",
    "DivisionAlgebraCertificate", "KummerElement", "KummerExtension", "Scenario",
    "build_scenario", "certify_division_algebra", "hensel_root",
    "quaternion_mul", "quaternion_norm",
]
