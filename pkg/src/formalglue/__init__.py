"""Fiber products of complete local rings and gluing of formal schemes."""

from .errors import *  # noqa: F401,F403
from .poly import DS, LocalOrder, Poly, field_from_label, parse_poly, poly_arith, prime_field
from .standard import ideal_contains, leading_monomials, mora_normal_form, std_basis, syzygies
from .local_ring import (
    ArtinianTruncation,
    InvariantsReport,
    LocalRingPresentation,
    depth,
    edim,
    invariants,
    is_regular,
    krull_dim,
    present,
    truncate,
)
from .resolution import (
    BettiTable,
    FreeResolution,
    ModulePresentation,
    PoincareTruncation,
    betti_numbers,
    check_betti_inequality,
    check_domination,
    check_syzygy_recursion,
    minimal_resolution,
    poincare_residue_field,
    poincare_series,
)
from .fiber import (
    FiberProductResult,
    SurjectionSpec,
    check_surjective,
    fiber_invariants,
    fiber_over_k,
    fiber_product,
    fiber_same_ambient,
    verify_fibercomplete,
)
from .gluing import Atlas, Chart, ClosedImmersionSpec, GluedScheme, glue, noetherian_report, singularity_report
from .session import parse_session, serialize

__version__ = "0.1.0"
