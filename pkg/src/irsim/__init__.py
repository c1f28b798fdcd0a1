"""Monte-Carlo downlink simulator for rate-splitting multiple access with
reflecting-surface assistance, against NOMA and TDMA baselines."""

from .channel import (
    ChannelRealization,
    ImpairmentParams,
    ReflectionVector,
    SystemGeometry,
    corrupt,
    draw_realization,
    effective_row,
    path_gain,
)
from .engine import (
    CurvePoint,
    ScenarioConfig,
    TrialResult,
    config_from_dict,
    run_sweep,
    run_trial,
    write_csv,
)
from .precoding import PrecoderSet, mf_precoder, random_unit, zf_precoders
from .rates import PowerAllocation, RateReport, SnrPoint, noma_report, rsma_report, tdma_report
from .reflection import IrsStrategyConfig, build_target, constrained_ls, phase_align_common

__version__ = "0.1.0"
