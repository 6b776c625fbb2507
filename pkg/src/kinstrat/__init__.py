"""Kinematic strata of Mandelstam matrices.

Membership tests for the Mandelstam/Lorentzian/momentum-conserving regions,
classification of massless matrices into signed-matroid strata, closed-form
and brute-force stratum censuses, and explicit momentum-configuration
sampling with numerical dimension verification.
"""

from .census import (
    CensusQuery,
    CensusRow,
    build_table,
    components_r3,
    count_massless,
    count_mmc,
    count_rank2,
    dim_massless,
    dim_mmc,
    mmc_admissible,
    mmc_top_count,
    nonempty_massless,
)
from .classify import StratumLabel, check_rank_one_blocks, classify_massless
from .exactmat import (
    MandelstamVerdict,
    Signature,
    SymmetricMatrix,
    conjugate_by_signs,
    eigen_signature,
    is_mandelstam,
    minor_sign_test,
    principal_minor,
    row_sums,
)
from .matroid import (
    RankTwoMatroid,
    SignedMatroid,
    SignVector,
    enumerate_matroids,
    enumerate_signed,
    signed_leq,
    stirling2,
    underlying_simple,
)
from .realize import (
    MomentumConfig,
    cyclic_order,
    estimate_dimension,
    gram,
    perturb_to_refinement,
    sample_mmc,
    sample_stratum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
