"""2-descent via 2-isogeny for curves with a rational 2-torsion point.

Library layout:

  arith    exact integer primitives (primality, valuations, symbols)
  local    solvability of w^2 = d1 + c z^2 + d2 z^4 over R and Q_l
  descent  curves, isogenies, Selmer groups, point search, rank bounds
  family   everything specific to y^2 = x^3 + 18p^2x
  cli      command-line front end (isodescent ...)
"""

from .arith import (
    is_prime,
    jacobi,
    mod_pow,
    primes_up_to,
    quartic_symbol,
    squarefree_class,
    valuation,
)
from .descent import (
    PSI,
    PSIBAR,
    CurveModel,
    CurvePoint,
    HomSpacePoint,
    RankBounds,
    SelmerGroup,
    alpha_image,
    apply_dual_isogeny,
    apply_isogeny,
    bad_places,
    divisor_classes,
    dual_curve,
    homspace_to_curve,
    rank_bounds,
    search_homspace_points,
    selmer,
    torsion_info,
)
from .family import (
    FamilyReport,
    PrimeClass,
    ReprWitness,
    classify,
    closed_form_selmer_psi,
    closed_form_selmer_psibar,
    curve_for_prime,
    find_repr,
    proposition_rank,
    theorem_bound,
    transform_point,
    verify_prime,
    witness_homspace_point,
)
from .local import (
    INFINITY,
    Place,
    QuarticForm,
    SolvabilityCertificate,
    Verdict,
    brute_oracle,
    solvable_everywhere_locally,
    solvable_padic,
    solvable_real,
)

__version__ = "0.1.0"

__all__ = [
    "CurveModel",
    "CurvePoint",
    "FamilyReport",
    "HomSpacePoint",
    "INFINITY",
    "PSI",
    "PSIBAR",
    "Place",
    "PrimeClass",
    "QuarticForm",
    "RankBounds",
    "ReprWitness",
    "SelmerGroup",
    "SolvabilityCertificate",
    "Verdict",
    "alpha_image",
    "apply_dual_isogeny",
    "apply_isogeny",
    "bad_places",
    "brute_oracle",
    "classify",
    "closed_form_selmer_psi",
    "closed_form_selmer_psibar",
    "curve_for_prime",
    "divisor_classes",
    "dual_curve",
    "find_repr",
    "homspace_to_curve",
    "is_prime",
    "jacobi",
    "mod_pow",
    "primes_up_to",
    "proposition_rank",
    "quartic_symbol",
    "rank_bounds",
    "search_homspace_points",
    "selmer",
    "solvable_everywhere_locally",
    "solvable_padic",
    "solvable_real",
    "squarefree_class",
    "theorem_bound",
    "torsion_info",
    "transform_point",
    "valuation",
    "verify_prime",
    "witness_homspace_point",
]
