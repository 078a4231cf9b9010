"""Exact heights, local Weil functions, position tests, staircase filtrations,
and a campaign harness for families of moving hypersurfaces over Q."""

from .errors import (
    ConfigError,
    ConsistencyError,
    CoordinateChangeRequiredError,
    PointOnHypersurfaceError,
    PositionError,
    SearchExhaustedError,
)
from .places import (
    HeightKernel,
    Place,
    height_kernel_scalar,
    local_norm,
    log_exact,
    padic_valuation,
    product_formula_check,
    sorted_places,
    support,
)
from .projgeom import (
    HomForm,
    ProjectivePoint,
    enumerate_Td,
    ensure_leading_nonzero,
    evaluate,
    first_main_identity,
    form_height,
    form_local_norm,
    normalize_point,
    norms_and_height,
    point_height,
    substitute,
    tilde_normalize,
    to_common_degree,
    weil_multiplier,
)
from .position import (
    PositionVerdict,
    ReductionResult,
    certify_dim_at_most,
    check_position,
    macaulay_map_rank,
    only_trivial_zero,
    reduce_to_general,
    sylvester_resultant,
)
from .filtration import (
    FiltrationData,
    build_filtration,
    choose_L,
    filtration_stats,
    kernel_claim_check,
    lemma33_count,
    quotient_dim_rank,
    staircase_tuples,
)
from .family import (
    CampaignConfig,
    MovingFamily,
    MovingForm,
    PointSequence,
    load_config,
    parse_family_spec,
)
from .campaign import (
    CampaignSummary,
    InstanceRecord,
    evaluate_instance,
    nondegeneracy_probe,
    run_campaign,
    smallness_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]
