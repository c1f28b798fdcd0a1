"""Per-trial achievable rates for the three multiple-access schemes.

Gaussian-signaling Shannon rates log2(1 + SINR) in bits per channel use,
with g_{k,x} = |row_k @ p_x|^2 evaluated on the *true* effective rows.
Noise power is 1, so an SNR point's transmit power is 10^(dB/10).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidAllocationError, UserCountError
from .precoding import PrecoderSet

ALLOC_TOL = 1e-12


@dataclass(frozen=True)
class SnrPoint:
    snr_db: float

    def __post_init__(self):
        if not math.isfinite(self.snr_db):
            raise DomainError("snr_db must be finite")

    @property
    def power(self):
        """Transmit power over unit noise power."""
        return 10.0 ** (self.snr_db / 10.0)


@dataclass(frozen=True)
class PowerAllocation:
    """Common-stream fraction (RSMA only) plus per-user stream fractions."""

    alpha_c: float
    alpha_k: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha_k", tuple(float(a) for a in self.alpha_k))
        if self.alpha_c < 0 or any(a < 0 for a in self.alpha_k):
            raise InvalidAllocationError("power fractions must be nonnegative")

    @classmethod
    def rsma(cls, alpha_c, users=2):
        """Equal private split: alpha_k = (1 - alpha_c) / K."""
        return cls(float(alpha_c), tuple((1.0 - alpha_c) / users for _ in range(users)))

    @classmethod
    def noma(cls, split=(7.0 / 8.0, 1.0 / 8.0)):
        return cls(0.0, tuple(split))

    @classmethod
    def tdma(cls, users=2):
        return cls(0.0, tuple(1.0 for _ in range(users)))


@dataclass(frozen=True)
class RateReport:
    """Rates of one trial and one scheme, all in bpcu."""

    common_rate_per_user: tuple
    common_rate: float
    stream_rates: tuple
    sum_rate: float

    def __post_init__(self):
        rates = self.common_rate_per_user + self.stream_rates + (self.common_rate, self.sum_rate)
        if any(r < 0 or not math.isfinite(r) for r in rates):
            raise DomainError("rates must be finite and nonnegative")
        if self.common_rate_per_user and abs(self.common_rate - min(self.common_rate_per_user)) > 1e-9:
            raise DomainError("common_rate must be the minimum over users")
        if abs(self.sum_rate - (self.common_rate + sum(self.stream_rates))) > 1e-9:
            raise DomainError("sum_rate must equal common_rate + stream rates")


def _gains(true_rows, precoders):
    # per-pair dot products, so reductions match scalar recomputation exactly
    rows = [np.asarray(r, dtype=np.complex128) for r in true_rows]
    return np.array([[abs(np.dot(row, p)) ** 2 for p in precoders] for row in rows])


def _rate(sinr):
    return float(np.log2(1.0 + sinr))


def rsma_report(true_rows, pre: PrecoderSet, alloc: PowerAllocation, snr: SnrPoint,
                sic_error: float = 0.0) -> RateReport:
    """Single-layer rate splitting: every user decodes the common stream
    treating all privates as noise, cancels it once, then decodes its
    private stream with a residual fraction ``sic_error`` of the common
    stream's received power left in the denominator.
    """
    k = len(true_rows)
    if pre.common is None:
        raise InvalidAllocationError("rate splitting requires a common precoder")
    if len(alloc.alpha_k) != k or len(pre.private) != k:
        raise InvalidAllocationError("one private stream per user required")
    if abs(alloc.alpha_c + sum(alloc.alpha_k) - 1.0) > ALLOC_TOL:
        raise InvalidAllocationError("rate-splitting fractions must sum to one")
    p = snr.power
    g = _gains(true_rows, list(pre.private) + [pre.common])
    g_priv, g_c = g[:, :k], g[:, k]
    alpha = alloc.alpha_k

    common_rates = []
    stream_rates = []
    for u in range(k):
        private_load = sum(alpha[j] * p * g_priv[u, j] for j in range(k))
        common_rates.append(_rate(alloc.alpha_c * p * g_c[u] / (private_load + 1.0)))
        interference = sum(alpha[j] * p * g_priv[u, j] for j in range(k) if j != u)
        interference += sic_error * alloc.alpha_c * p * g_c[u]
        stream_rates.append(_rate(alpha[u] * p * g_priv[u, u] / (interference + 1.0)))
    common_rates = tuple(common_rates)
    common_rate = min(common_rates)
    stream_rates = tuple(stream_rates)
    return RateReport(common_rates, common_rate, stream_rates, common_rate + sum(stream_rates))


def noma_report(true_rows, pre: PrecoderSet, alloc: PowerAllocation, snr: SnrPoint,
                sic_error: float = 0.0) -> RateReport:
    """Two-user power-domain superposition with SIC at the strong user.

    User 1 (weak, more power) decodes its own stream treating user 2's as
    noise; user 2 cancels user 1's stream first, with a residual fraction
    ``sic_error`` of its received power remaining.
    """
    if len(true_rows) != 2 or len(pre.private) != 2 or len(alloc.alpha_k) != 2:
        raise UserCountError("power-domain superposition is implemented for two users")
    a1, a2 = alloc.alpha_k
    if a1 < a2:
        raise InvalidAllocationError("the weak user (index 0) must get the larger fraction")
    if abs(a1 + a2 - 1.0) > ALLOC_TOL:
        raise InvalidAllocationError("stream fractions must sum to one")
    p = snr.power
    g = _gains(true_rows, pre.private)
    sinr1 = a1 * p * g[0, 0] / (a2 * p * g[0, 1] + 1.0)
    sinr2 = a2 * p * g[1, 1] / (sic_error * a1 * p * g[1, 0] + 1.0)
    streams = (_rate(sinr1), _rate(sinr2))
    return RateReport((0.0, 0.0), 0.0, streams, sum(streams))


def tdma_report(true_rows, pre: PrecoderSet, snr: SnrPoint, mode: str = "orthogonal") -> RateReport:
    """Time-division baseline with full power per scheduled stream.

    ``orthogonal``: one user per slot, rate scaled by the 1/K time share and
    free of inter-user interference. ``simultaneous``: all streams transmit
    at full power at once, so imperfect zero forcing leaves an interference
    floor. No SIC in either mode.
    """
    k = len(true_rows)
    if len(pre.private) != k:
        raise UserCountError("one stream per user required")
    p = snr.power
    g = _gains(true_rows, pre.private)
    if mode == "orthogonal":
        streams = tuple(_rate(p * g[u, u]) / k for u in range(k))
    elif mode == "simultaneous":
        streams = tuple(
            _rate(
                p * g[u, u]
                / (sum(p * g[u, j] for j in range(k) if j != u) + 1.0)
            )
            for u in range(k)
        )
    else:
        raise DomainError(f"unknown tdma mode {mode!r}")
    zeros = tuple(0.0 for _ in range(k))
    return RateReport(zeros, 0.0, streams, sum(streams))
