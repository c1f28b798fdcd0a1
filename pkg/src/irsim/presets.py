"""Shipped scenario presets reproducing the three reference experiments.

The two calibration constants below (reference distance of the path-loss
model and the least-squares boost factor) are frozen from the one-time
search in ``irsim calibrate`` / ``scripts/calibrate.py``; everything else
is fixed by the experiment descriptions.
"""

from .engine import ScenarioConfig, config_from_dict

# Frozen by the calibration run (see scripts/calibrate.py); the path-loss
# reference distance anchors the common-rate experiment, the boost factor
# anchors the imperfect-SIC sum-rate experiment.
REFERENCE_DISTANCE_M = 24.0
BOOST_FACTOR = 4.0

_GEOMETRY = {
    "bs_antennas": 4,
    "users": 2,
    "irs_elements": 50,
    "user_distances_m": [50.0, 30.0],
    "irs_user_distances_m": [10.0, 10.0],
    "path_loss_exponent": 2.5,
    "reference_distance_m": REFERENCE_DISTANCE_M,
}

PRESET_DOCS = {
    "fig2": "per-user common-message rates, phase-aligned surfaces, perfect CSI/SIC",
    "fig3": "sum rates under residual SIC errors, constrained-LS surfaces, alpha_c sweep",
    "fig4": "sum rates with perfect vs imperfect CSI, constrained-LS surfaces",
}

_PRESETS = {
    "fig2": {
        "geometry": _GEOMETRY,
        "schemes": ["RSMA", "IRS-RSMA"],
        "snr_grid_db": [0, 5, 10, 15, 20, 25, 30],
        "rsma_alpha_c": [0.9],
        "impairments": {"sic_error_factor": 0.0, "csi_error_variance": 0.0},
        "irs": {"strategy": "phase_align_common", "boost_factor": BOOST_FACTOR, "ls_ridge": 1e-9},
        "trials": 5000,
        "master_seed": 61001,
        "metrics": ["common_rate_user1", "common_rate_user2"],
        "common_rate_requirement": 4.0,
    },
    "fig3": {
        "geometry": _GEOMETRY,
        "schemes": ["RSMA", "IRS-RSMA", "NOMA", "IRS-NOMA", "TDMA", "IRS-TDMA"],
        "snr_grid_db": [0, 5, 10, 15, 20, 25, 30, 35, 40],
        "rsma_alpha_c": [0.25, 0.5, 0.75],
        "noma_split": [0.875, 0.125],
        "impairments": {"sic_error_factor": 0.01, "csi_error_variance": 0.0},
        "irs": {"strategy": "constrained_ls", "boost_factor": BOOST_FACTOR, "ls_ridge": 1e-9},
        "tdma_mode": "orthogonal",
        "trials": 5000,
        "master_seed": 61002,
        "metrics": ["sum_rate"],
    },
    "fig4": {
        "geometry": _GEOMETRY,
        "schemes": ["IRS-RSMA", "IRS-NOMA", "IRS-TDMA"],
        "snr_grid_db": [0, 5, 10, 15, 20, 25, 30, 35, 40],
        "rsma_alpha_c": [0.9],
        "noma_split": [0.875, 0.125],
        "impairments": {"sic_error_factor": 0.0, "csi_error_variance": 0.5},
        "irs": {"strategy": "constrained_ls", "boost_factor": BOOST_FACTOR, "ls_ridge": 1e-9},
        "tdma_mode": "simultaneous",
        "trials": 5000,
        "master_seed": 61003,
        "metrics": ["sum_rate"],
        "compare_perfect_csi": True,
    },
}

PRESET_NAMES = tuple(_PRESETS)


def get_preset(name: str) -> ScenarioConfig:
    if name not in _PRESETS:
        raise KeyError(f"unknown preset {name!r}")
    return config_from_dict(_PRESETS[name])


def preset_dict(name: str) -> dict:
    """JSON-shaped copy of a preset, e.g. as a starting point for edits."""
    import copy

    return copy.deepcopy(_PRESETS[name])
