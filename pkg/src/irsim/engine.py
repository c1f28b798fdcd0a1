"""Monte-Carlo sweep engine.

Per trial: draw one fading block, corrupt it once into the estimated view,
draw the common precoder, then run every configured scheme on the *same*
block (paired comparison). Reflections and precoders are designed from the
estimate; rates are evaluated on the truth. Trials use disjoint
counter-based substreams keyed on (master_seed, snr_index, trial, attempt),
so results do not depend on execution order or worker count.
"""

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .channel import (
    ChannelRealization,
    ImpairmentParams,
    SystemGeometry,
    corrupt,
    draw_realization,
    effective_row,
)
from .errors import ConfigError, DegenerateTrialsError, RankDeficientError
from .precoding import PrecoderSet, mf_precoder, random_unit, zf_precoders
from .rates import PowerAllocation, RateReport, SnrPoint, noma_report, rsma_report, tdma_report
from .reflection import IrsStrategyConfig, build_target, constrained_ls, phase_align_common

SCHEMES = ("RSMA", "IRS-RSMA", "NOMA", "IRS-NOMA", "TDMA", "IRS-TDMA")
METRICS = ("sum_rate", "common_rate_user1", "common_rate_user2")
TDMA_MODES = ("orthogonal", "simultaneous")
CSV_HEADER = "scheme,metric,alpha_c,snr_db,mean_bpcu,stderr_bpcu,trials"

_MASK64 = (1 << 64) - 1
_MAX_ATTEMPTS = 100
_REDRAW_BUDGET = 0.01


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one sweep; see SCENARIO_SCHEMA for the JSON form."""

    geometry: SystemGeometry
    schemes: tuple
    snr_grid_db: tuple
    rsma_alpha_c: tuple = (0.9,)
    noma_split: tuple = (7.0 / 8.0, 1.0 / 8.0)
    impairments: ImpairmentParams = field(default_factory=ImpairmentParams)
    irs: IrsStrategyConfig = field(default_factory=IrsStrategyConfig)
    tdma_mode: str = "orthogonal"
    trials: int = 5000
    master_seed: int = 12345
    metrics: tuple = ("sum_rate",)
    common_rate_requirement: float = 4.0
    compare_perfect_csi: bool = False
    # Test hook: alternative realization source, signature (geometry, rng).
    # Not part of the JSON schema and incompatible with worker processes.
    channel_source: Optional[Callable] = None

    def __post_init__(self):
        object.__setattr__(self, "schemes", tuple(self.schemes))
        object.__setattr__(self, "snr_grid_db", tuple(float(s) for s in self.snr_grid_db))
        object.__setattr__(self, "rsma_alpha_c", tuple(float(a) for a in self.rsma_alpha_c))
        object.__setattr__(self, "noma_split", tuple(float(a) for a in self.noma_split))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        self._validate()

    def _validate(self):
        if not self.schemes:
            raise ConfigError("schemes: at least one scheme required")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ConfigError(f"schemes: unknown scheme {s!r}, expected one of {SCHEMES}")
        if len(set(self.schemes)) != len(self.schemes):
            raise ConfigError("schemes: duplicate entries")
        if any(b <= a for a, b in zip(self.snr_grid_db, self.snr_grid_db[1:])):
            raise ConfigError("snr_grid_db: must be strictly increasing")
        if not self.rsma_alpha_c and any(s.endswith("RSMA") for s in self.schemes):
            raise ConfigError("rsma_alpha_c: at least one value required for RSMA schemes")
        if any(a < 0 or a > 1 for a in self.rsma_alpha_c):
            raise ConfigError("rsma_alpha_c: values must lie in [0, 1]")
        if len(set(self.rsma_alpha_c)) != len(self.rsma_alpha_c):
            raise ConfigError("rsma_alpha_c: duplicate entries")
        if self.trials < 1:
            raise ConfigError("trials: must be at least 1")
        if not isinstance(self.master_seed, int):
            raise ConfigError("master_seed: must be an integer")
        if self.tdma_mode not in TDMA_MODES:
            raise ConfigError(f"tdma_mode: expected one of {TDMA_MODES}")
        if not self.metrics:
            raise ConfigError("metrics: at least one metric required")
        for m in self.metrics:
            if m not in METRICS:
                raise ConfigError(f"metrics: unknown metric {m!r}, expected one of {METRICS}")
        if "common_rate_user2" in self.metrics and self.geometry.users < 2:
            raise ConfigError("metrics: common_rate_user2 needs at least two users")
        if any(s.startswith("IRS-") for s in self.schemes):
            if self.geometry.irs_elements < 1:
                raise ConfigError("geometry.irs_elements: IRS schemes need at least one element")
            if self.irs.strategy == "off":
                raise ConfigError("irs.strategy: 'off' conflicts with IRS schemes in the list")
        if any(s.endswith("NOMA") for s in self.schemes):
            if self.geometry.users != 2:
                raise ConfigError("geometry.users: NOMA schemes require exactly two users")
            if abs(sum(self.noma_split) - 1.0) > 1e-12:
                raise ConfigError("noma_split: fractions must sum to one")
            if self.noma_split[0] < self.noma_split[1]:
                raise ConfigError("noma_split: weak user (index 0) must get the larger fraction")
            d = self.geometry.user_distances_m
            if d[0] < d[1]:
                raise ConfigError(
                    "geometry.user_distances_m: NOMA expects the weak (farther) user first"
                )
        if self.common_rate_requirement < 0:
            raise ConfigError("common_rate_requirement: must be nonnegative")

    def curve_keys(self):
        """Deterministic list of (scheme_label, alpha_c_or_None, metric)."""
        keys = []
        variants = ("imperfect-csi", "perfect-csi") if self.compare_perfect_csi else (None,)
        for scheme in self.schemes:
            base = scheme[4:] if scheme.startswith("IRS-") else scheme
            for variant in variants:
                label = scheme if variant is None else f"{scheme}/{variant}"
                if base == "RSMA":
                    for alpha in self.rsma_alpha_c:
                        for metric in self.metrics:
                            keys.append((label, alpha, metric))
                else:
                    for metric in self.metrics:
                        if metric == "sum_rate":
                            keys.append((label, None, metric))
        return keys


@dataclass(frozen=True)
class CurvePoint:
    scheme: str
    metric: str
    alpha_c: Optional[float]
    snr_db: float
    mean_bpcu: float
    stderr_bpcu: float
    trials: int


@dataclass(frozen=True)
class TrialResult:
    """Reports keyed by (scheme_label, alpha_c_or_None), plus bookkeeping."""

    reports: dict
    redraws: int
    scheme_digests: dict


def _trial_rng(master_seed, snr_index, trial_index, attempt=0):
    if not (0 <= snr_index < 1 << 16 and 0 <= trial_index < 1 << 32 and 0 <= attempt < 1 << 16):
        raise ConfigError("trial substream index out of range")
    word = (snr_index << 48) | (trial_index << 16) | attempt
    key = np.array([master_seed & _MASK64, word], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _digest(real: ChannelRealization) -> str:
    h = hashlib.sha1(np.ascontiguousarray(real.direct).tobytes())
    if real.cascade is not None:
        h.update(np.ascontiguousarray(real.cascade).tobytes())
    return h.hexdigest()


def _design_reflections(cfg, scheme_base, est, p_c):
    geom = cfg.geometry
    if scheme_base == "RSMA" and cfg.irs.strategy == "phase_align_common":
        return [phase_align_common(est, k, p_c) for k in range(geom.users)]
    targets = [build_target(est.direct, k, cfg.irs.boost_factor) for k in range(geom.users)]
    return [constrained_ls(est, k, targets[k], cfg.irs.ls_ridge) for k in range(geom.users)]


def _run_scheme(cfg, scheme, true, est, p_c, snr):
    """Rates of one scheme on a shared block; returns [(alpha_c, report)]."""
    geom = cfg.geometry
    base = scheme[4:] if scheme.startswith("IRS-") else scheme
    if scheme.startswith("IRS-"):
        vs = _design_reflections(cfg, base, est, p_c)
        est_rows = [effective_row(est, k, vs[k]) for k in range(geom.users)]
        true_rows = [effective_row(true, k, vs[k]) for k in range(geom.users)]
    else:
        est_rows = [est.direct[k] for k in range(geom.users)]
        true_rows = [true.direct[k] for k in range(geom.users)]
    beta = cfg.impairments.sic_error_factor
    if base == "RSMA":
        pre = PrecoderSet(tuple(zf_precoders(est_rows)), p_c)
        return [
            (alpha, rsma_report(true_rows, pre, PowerAllocation.rsma(alpha, geom.users), snr, beta))
            for alpha in cfg.rsma_alpha_c
        ]
    if base == "NOMA":
        beam = mf_precoder(est_rows[1])  # one cluster beam, matched to the strong (near) user
        pre = PrecoderSet((beam, beam))
        alloc = PowerAllocation.noma(cfg.noma_split)
        return [(None, noma_report(true_rows, pre, alloc, snr, beta))]
    pre = PrecoderSet(tuple(zf_precoders(est_rows)))
    return [(None, tdma_report(true_rows, pre, snr, cfg.tdma_mode))]


def run_trial(cfg: ScenarioConfig, snr_index: int, trial_index: int) -> TrialResult:
    """One paired trial at one SNR point, redrawing on degenerate channels."""
    snr = SnrPoint(cfg.snr_grid_db[snr_index])
    source = cfg.channel_source or draw_realization
    for attempt in range(_MAX_ATTEMPTS):
        rng = _trial_rng(cfg.master_seed, snr_index, trial_index, attempt)
        true = source(cfg.geometry, rng)
        est = corrupt(true, cfg.impairments.csi_error_variance, rng)
        p_c = random_unit(cfg.geometry.bs_antennas, rng)
        variants = (
            (("imperfect-csi", est), ("perfect-csi", true))
            if cfg.compare_perfect_csi
            else ((None, est),)
        )
        reports, digests = {}, {}
        try:
            for scheme in cfg.schemes:
                for variant, est_view in variants:
                    label = scheme if variant is None else f"{scheme}/{variant}"
                    for alpha, report in _run_scheme(cfg, scheme, true, est_view, p_c, snr):
                        reports[(label, alpha)] = report
                    digests[label] = _digest(true)
        except RankDeficientError:
            continue
        return TrialResult(reports, attempt, digests)
    raise DegenerateTrialsError(
        f"trial ({snr_index}, {trial_index}) still degenerate after {_MAX_ATTEMPTS} redraws"
    )


def _metric_value(report: RateReport, metric: str) -> float:
    if metric == "sum_rate":
        return report.sum_rate
    if metric == "common_rate_user1":
        return report.common_rate_per_user[0]
    if metric == "common_rate_user2":
        return report.common_rate_per_user[1]
    raise ConfigError(f"metrics: unknown metric {metric!r}")


def _run_chunk(cfg, snr_index, start, stop):
    """Metric arrays for trials [start, stop) at one SNR point."""
    keys = cfg.curve_keys()
    out = {key: np.empty(stop - start) for key in keys}
    redraws = 0
    for t in range(start, stop):
        res = run_trial(cfg, snr_index, t)
        redraws += res.redraws
        for key in keys:
            label, alpha, metric = key
            out[key][t - start] = _metric_value(res.reports[(label, alpha)], metric)
    return out, redraws


def _chunk_args(cfg, workers):
    per_worker = max(1, -(-cfg.trials // workers))
    for snr_index in range(len(cfg.snr_grid_db)):
        for start in range(0, cfg.trials, per_worker):
            yield snr_index, start, min(start + per_worker, cfg.trials)


def run_sweep(cfg: ScenarioConfig, workers: int = 1) -> list:
    """Ergodic means with standard errors for every configured curve.

    ``workers`` > 1 distributes (snr, trial-range) cells over processes;
    the aggregation is indexed by trial, so the result is identical for any
    worker count.
    """
    keys = cfg.curve_keys()
    n_snr = len(cfg.snr_grid_db)
    values = {key: np.empty((n_snr, cfg.trials)) for key in keys}
    redraws = 0
    if workers > 1 and cfg.channel_source is not None:
        raise ConfigError("channel_source: test hook is single-process only")
    if workers <= 1 or n_snr == 0:
        for snr_index in range(n_snr):
            chunk, drawn = _run_chunk(cfg, snr_index, 0, cfg.trials)
            redraws += drawn
            for key in keys:
                values[key][snr_index] = chunk[key]
    else:
        jobs = list(_chunk_args(cfg, workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for (snr_index, start, stop), (chunk, drawn) in zip(
                jobs, pool.map(_run_chunk_star, ((cfg, *j) for j in jobs))
            ):
                redraws += drawn
                for key in keys:
                    values[key][snr_index, start:stop] = chunk[key]
    if redraws > _REDRAW_BUDGET * max(1, n_snr * cfg.trials):
        raise DegenerateTrialsError(
            f"{redraws} redraws exceed the {_REDRAW_BUDGET:.0%} budget"
        )
    points = []
    for label, alpha, metric in keys:
        samples = values[(label, alpha, metric)]
        for snr_index, snr_db in enumerate(cfg.snr_grid_db):
            col = samples[snr_index]
            stderr = float(np.std(col, ddof=1) / np.sqrt(cfg.trials)) if cfg.trials > 1 else 0.0
            points.append(
                CurvePoint(label, metric, alpha, snr_db, float(np.mean(col)), stderr, cfg.trials)
            )
    points.sort(key=_point_key)
    return points


def _run_chunk_star(args):
    return _run_chunk(*args)


def _point_key(p: CurvePoint):
    return (p.scheme, p.metric, -1.0 if p.alpha_c is None else p.alpha_c, p.snr_db)


def _fmt(x) -> str:
    return f"{x:.6g}"


def write_csv(points, sink) -> int:
    """Write curve records to a byte sink; returns the row count.

    Header then one row per record, sorted by (scheme, metric, alpha_c,
    snr_db) with blank alpha_c first; byte-identical for identical inputs.
    """
    sink.write((CSV_HEADER + "\n").encode("utf-8"))
    count = 0
    for p in sorted(points, key=_point_key):
        alpha = "" if p.alpha_c is None else _fmt(p.alpha_c)
        row = f"{p.scheme},{p.metric},{alpha},{_fmt(p.snr_db)},{_fmt(p.mean_bpcu)},{_fmt(p.stderr_bpcu)},{p.trials}\n"
        sink.write(row.encode("utf-8"))
        count += 1
    return count


SCENARIO_SCHEMA = {
    "geometry": "object: bs_antennas, users, irs_elements, user_distances_m,"
    " irs_user_distances_m, path_loss_exponent, reference_distance_m",
    "schemes": f"nonempty list from {SCHEMES}",
    "snr_grid_db": "strictly increasing list of decibel values",
    "rsma_alpha_c": "list of common-stream fractions in [0, 1] (RSMA curves)",
    "noma_split": "two stream fractions summing to one, weak user first",
    "impairments": "object: sic_error_factor, csi_error_variance",
    "irs": "object: strategy (off | phase_align_common | constrained_ls),"
    " boost_factor, ls_ridge",
    "tdma_mode": "orthogonal | simultaneous",
    "trials": "Monte-Carlo trials per SNR point (>= 1)",
    "master_seed": "64-bit integer master seed",
    "metrics": f"list from {METRICS}",
    "common_rate_requirement": "threshold annotation in bpcu (default 4.0)",
    "compare_perfect_csi": "bool: additionally run every scheme with a perfect estimate",
}

_GEOMETRY_FIELDS = (
    "bs_antennas",
    "users",
    "irs_elements",
    "user_distances_m",
    "irs_user_distances_m",
    "path_loss_exponent",
    "reference_distance_m",
)


def config_from_dict(doc: dict) -> ScenarioConfig:
    """Build a ScenarioConfig from a JSON-shaped dict, rejecting unknown keys."""
    if not isinstance(doc, dict):
        raise ConfigError("scenario: top level must be an object")
    unknown = set(doc) - set(SCENARIO_SCHEMA)
    if unknown:
        raise ConfigError(f"scenario: unknown field {sorted(unknown)[0]!r}")
    for required in ("geometry", "schemes", "snr_grid_db"):
        if required not in doc:
            raise ConfigError(f"{required}: field is required")
    geo = doc["geometry"]
    if not isinstance(geo, dict):
        raise ConfigError("geometry: must be an object")
    unknown = set(geo) - set(_GEOMETRY_FIELDS)
    if unknown:
        raise ConfigError(f"geometry: unknown field {sorted(unknown)[0]!r}")
    try:
        geometry = SystemGeometry(**geo)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"geometry: {exc}") from exc
    kwargs = {"geometry": geometry, "schemes": doc["schemes"], "snr_grid_db": doc["snr_grid_db"]}
    try:
        if "impairments" in doc:
            kwargs["impairments"] = ImpairmentParams(**doc["impairments"])
        if "irs" in doc:
            kwargs["irs"] = IrsStrategyConfig(**doc["irs"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"impairments/irs: {exc}") from exc
    for name in (
        "rsma_alpha_c",
        "noma_split",
        "tdma_mode",
        "trials",
        "master_seed",
        "metrics",
        "common_rate_requirement",
        "compare_perfect_csi",
    ):
        if name in doc:
            kwargs[name] = doc[name]
    try:
        return ScenarioConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def with_overrides(cfg: ScenarioConfig, seed=None, trials=None, tdma_mode=None) -> ScenarioConfig:
    """Copy of cfg with common CLI overrides applied."""
    changes = {}
    if seed is not None:
        changes["master_seed"] = seed
    if trials is not None:
        changes["trials"] = trials
    if tdma_mode is not None:
        changes["tdma_mode"] = tdma_mode
    return replace(cfg, **changes) if changes else cfg
