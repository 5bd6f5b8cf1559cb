"""Statistical battery: paired tests, effect sizes, bootstrap, dominance."""

from .battery import BatteryConfig, ComparisonReport, run_battery
from .bootstrap import BootstrapCI, bootstrap_bca
from .dominance import (
    DominanceSide,
    DominanceVerdict,
    Ecdf,
    KsResult,
    check_fsd,
    check_ssd,
    ecdf,
    ks_two_sample,
)
from .paired import (
    EffectSize,
    PairedSample,
    TestResult,
    classify_effect,
    cohens_d,
    hedges_g,
    paired_t_one_tailed,
    wilcoxon_signed_rank,
)

__all__ = [
    "BatteryConfig",
    "ComparisonReport",
    "run_battery",
    "BootstrapCI",
    "bootstrap_bca",
    "DominanceSide",
    "DominanceVerdict",
    "Ecdf",
    "KsResult",
    "check_fsd",
    "check_ssd",
    "ecdf",
    "ks_two_sample",
    "EffectSize",
    "PairedSample",
    "TestResult",
    "classify_effect",
    "cohens_d",
    "hedges_g",
    "paired_t_one_tailed",
    "wilcoxon_signed_rank",
]
