"""Transmit precoder construction: zero-forcing, matched filter, random unit.

All emitted precoders have unit Euclidean norm; stream powers are applied
separately by the rate formulas.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, ZeroChannelError
from .linalg import right_pinv

UNIT_NORM_TOL = 1e-9


@dataclass(frozen=True)
class PrecoderSet:
    """One optional common precoder plus per-user private precoders."""

    private: tuple
    common: Optional[np.ndarray] = None

    def __post_init__(self):
        private = tuple(np.asarray(p, dtype=np.complex128) for p in self.private)
        object.__setattr__(self, "private", private)
        if self.common is not None:
            object.__setattr__(self, "common", np.asarray(self.common, dtype=np.complex128))
        for p in private + ((self.common,) if self.common is not None else ()):
            if abs(np.linalg.norm(p) - 1.0) > UNIT_NORM_TOL:
                raise DimensionMismatchError("precoders must have unit norm")


def zf_precoders(rows) -> list:
    """Zero-forcing private precoders from stacked (estimated) channel rows.

    Columns of the right pseudo-inverse, each normalized to unit norm, so
    row_j @ p_k = 0 for j != k when evaluated against the same rows.
    Propagates RankDeficientError for colinear user channels.
    """
    stacked = np.asarray(rows, dtype=np.complex128)
    pinv = right_pinv(stacked)
    cols = []
    for k in range(stacked.shape[0]):
        col = pinv[:, k]
        cols.append(col / np.linalg.norm(col))
    return cols


def mf_precoder(row) -> np.ndarray:
    """Conjugate-matched unit-norm direction: row @ p equals ||row||."""
    row = np.asarray(row, dtype=np.complex128)
    norm = np.linalg.norm(row)
    if norm <= 1e-12:
        raise ZeroChannelError("cannot match a zero channel row")
    return np.conj(row) / norm


def random_unit(m: int, rng) -> np.ndarray:
    """Uniform draw on the complex unit sphere in C^m."""
    if m < 1:
        raise DimensionMismatchError("need at least one antenna")
    v = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2.0)
    return v / np.linalg.norm(v)
