"""Moments of gcd products over finite abelian groups.

Pick a uniform residue l modulo the exponent of a finite abelian group given
as a product of cyclic factors Z/n_1 x ... x Z/n_k, and form the product of
gcd(l, n_j) over the factors. This package computes the moments of that
random variable three independent ways (direct enumeration over one period,
a multiplicative product over local factors at each prime, and a census of
element orders in a power of the group), always in exact rational
arithmetic, and studies the Dirichlet series whose coefficients are the
corresponding counts of homomorphisms, including its closed forms and the
residue at its rightmost pole.
"""

from .abgroup import (
    DEFAULT_ENUMERATION_CAP,
    AbelianGroup,
    PPrimaryProfile,
    build_group,
    count_annihilated,
    count_order_exact,
    order_reciprocal_sum,
    order_reciprocal_sum_bruteforce,
)
from .igusa import (
    IgusaQuery,
    ResidueEstimate,
    ZetaComparison,
    compare_routes,
    hom_count,
    hurwitz_zeta,
    residue_at_pole,
    riemann_zeta,
    series_partial,
    zeta_euler_closed_form,
    zeta_hurwitz_closed_form,
)
from .moments import (
    MomentQuery,
    MomentReport,
    brute_moment_complex,
    brute_moment_exact,
    census_moment,
    euler_product_moment,
    gcd_average_via_totient,
    gcd_product,
    local_factor,
    verify_query,
)
from .numtheory import (
    BigRational,
    EnumerationCapError,
    FactoredNat,
    divisors,
    euler_phi,
    factorize,
    gcd_divisor_sum,
    is_prime,
    lcm_all,
    ord_p,
    valuation_fiber_count,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "BigRational",
    "DEFAULT_ENUMERATION_CAP",
    "EnumerationCapError",
    "FactoredNat",
    "IgusaQuery",
    "MomentQuery",
    "MomentReport",
    "PPrimaryProfile",
    "ResidueEstimate",
    "ZetaComparison",
    "__version__",
    "brute_moment_complex",
    "brute_moment_exact",
    "build_group",
    "census_moment",
    "compare_routes",
    "count_annihilated",
    "count_order_exact",
    "divisors",
    "euler_phi",
    "euler_product_moment",
    "factorize",
    "gcd_average_via_totient",
    "gcd_divisor_sum",
    "gcd_product",
    "hom_count",
    "hurwitz_zeta",
    "is_prime",
    "lcm_all",
    "local_factor",
    "ord_p",
    "order_reciprocal_sum",
    "order_reciprocal_sum_bruteforce",
    "residue_at_pole",
    "riemann_zeta",
    "series_partial",
    "verify_query",
    "valuation_fiber_count",
    "zeta_euler_closed_form",
    "zeta_hurwitz_closed_form",
]
