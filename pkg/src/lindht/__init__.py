"""Blackwell comparisons, plane scans, and Stein exponents for binary
distributed hypothesis testing under linear compression."""

__version__ = "0.1.0"

from .blackwell import (
    Channel,
    Dichotomy,
    ErrorRegion,
    and_or_incomparable,
    degradation_feasible,
    dominates,
    pair_channel,
    pair_dichotomy,
    region_dominates,
    roc_region,
    syndrome_dichotomy,
    trunc_to_syndrome_channel_indep,
    trunc_to_syndrome_channel_opposite,
    truncation_dichotomy,
)
from .exponents import (
    ExponentPoint,
    JointDist4,
    concave_envelope,
    derivative_at_rate_one,
    e_truncation,
    fi_curve,
    han_closed_form_independence,
    han_exponent_bsc,
    induced_joint,
    ipf_project,
    random_test_channels_search,
    sweep_bsc_curves,
)
from .gf2 import (
    CanonicalCode,
    Gf2Matrix,
    canonicalize,
    enumerate_codes,
    rank,
    split_even_odd,
    syndrome_map,
    truncation_matrix,
)
from .probmodel import (
    Dist,
    DsbsPair,
    bern_product_dist,
    conv,
    d2,
    h2,
    h2_inv,
    pair_dist,
    syndrome_dist,
)
from .scan import ScanConfig, ScanResult, boundary_extract, scan_grid

__all__ = [name for name in dir() if not name.startswith("_")]
