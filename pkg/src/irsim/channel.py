"""Block-fading channel model with distance path loss and reflected links.

One realization is a single coherence block: per-user direct rows plus, when
reflecting surfaces are present, per-user cascade matrices built from the
product of the BS-to-surface rows and the conjugated surface-to-user
coefficients. The received signal at user k for transmit vector x is
``row_k @ x`` (conjugate-row convention), where the effective row is
``direct_k + v @ cascade_k`` for reflection coefficients v.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, DomainError

AMPLITUDE_TOL = 1e-12


def path_gain(distance_m, exponent, reference_m):
    """Power gain (d/d0)^-eta of a link at distance d.

    Applied as an amplitude factor sqrt(gain) on unit-variance fading.
    """
    if distance_m <= 0 or reference_m <= 0:
        raise DomainError("distances must be positive")
    if exponent <= 0:
        raise DomainError("path-loss exponent must be positive")
    return float((distance_m / reference_m) ** (-exponent))


@dataclass(frozen=True)
class SystemGeometry:
    """Antenna/user/surface counts and link distances.

    The BS-to-surface distance reuses the BS-to-user distance of the
    connected user; every user has its own dedicated surface and cross paths
    through other users' surfaces are neglected.
    """

    bs_antennas: int
    users: int
    irs_elements: int
    user_distances_m: tuple
    irs_user_distances_m: tuple
    path_loss_exponent: float = 2.5
    reference_distance_m: float = 10.0

    def __post_init__(self):
        if self.users < 1 or self.bs_antennas < self.users:
            raise DomainError("need bs_antennas >= users >= 1")
        if self.irs_elements < 0:
            raise DomainError("irs_elements must be nonnegative")
        object.__setattr__(self, "user_distances_m", tuple(float(d) for d in self.user_distances_m))
        object.__setattr__(
            self, "irs_user_distances_m", tuple(float(d) for d in self.irs_user_distances_m)
        )
        if len(self.user_distances_m) != self.users:
            raise DomainError("one BS-user distance per user required")
        if len(self.irs_user_distances_m) != self.users:
            raise DomainError("one surface-user distance per user required")
        if any(d <= 0 for d in self.user_distances_m + self.irs_user_distances_m):
            raise DomainError("distances must be positive")
        if self.path_loss_exponent <= 0 or self.reference_distance_m <= 0:
            raise DomainError("path_loss_exponent and reference_distance_m must be positive")

    def direct_gains(self):
        d0, eta = self.reference_distance_m, self.path_loss_exponent
        return np.array([path_gain(d, eta, d0) for d in self.user_distances_m])

    def cascade_gains(self):
        """Composite per-entry power gain of each user's reflected path."""
        d0, eta = self.reference_distance_m, self.path_loss_exponent
        bs_irs = self.direct_gains()  # BS-surface distance equals BS-user distance
        irs_user = np.array([path_gain(d, eta, d0) for d in self.irs_user_distances_m])
        return bs_irs * irs_user


@dataclass(frozen=True)
class ImpairmentParams:
    """Residual-SIC fraction and relative CSI error variance.

    sic_error_factor is the fraction of a canceled stream's received power
    left as interference; csi_error_variance is the per-entry variance of the
    additive estimation error on the unit-variance fading component. Zero
    means the respective impairment is off.
    """

    sic_error_factor: float = 0.0
    csi_error_variance: float = 0.0

    def __post_init__(self):
        if self.sic_error_factor < 0 or self.csi_error_variance < 0:
            raise DomainError("impairment parameters must be nonnegative")


@dataclass(frozen=True)
class ReflectionVector:
    """Per-element complex reflection coefficients, amplitudes bounded by 1."""

    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=np.complex128)
        object.__setattr__(self, "v", v)
        if v.ndim != 1:
            raise DimensionMismatchError("reflection coefficients must form a vector")
        if v.size and np.abs(v).max() > 1.0 + AMPLITUDE_TOL:
            raise DomainError("reflection amplitude exceeds the unit bound")

    def __len__(self):
        return self.v.size


@dataclass(frozen=True)
class ChannelRealization:
    """Direct rows (K, M) plus per-user cascade matrices (K, N, M).

    Row n of ``cascade[k]`` is the conjugated surface-to-user coefficient
    times the BS-to-surface row n, so the effective row is affine in the
    reflection coefficients. ``direct_gain``/``cascade_gain`` record the link
    power gains needed to scale estimation errors. Treat instances as
    immutable; they are shared across schemes within a trial.
    """

    direct: np.ndarray
    cascade: Optional[np.ndarray]
    direct_gain: np.ndarray
    cascade_gain: Optional[np.ndarray]

    @property
    def users(self):
        return self.direct.shape[0]

    @property
    def antennas(self):
        return self.direct.shape[1]

    @property
    def elements(self):
        return 0 if self.cascade is None else self.cascade.shape[1]


def _cn(rng, shape):
    """Circularly-symmetric complex Gaussian with unit per-entry variance."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def draw_realization(geom: SystemGeometry, rng) -> ChannelRealization:
    """Draw one coherence block for the given geometry.

    Fading is i.i.d. unit-variance complex Gaussian scaled by the amplitude
    of each link's path gain. Draw order is fixed (direct rows, BS-surface
    matrices, surface-user coefficients) so equal seeds give equal blocks.
    """
    k, m, n = geom.users, geom.bs_antennas, geom.irs_elements
    direct_gain = geom.direct_gains()
    direct = np.sqrt(direct_gain)[:, None] * _cn(rng, (k, m))
    if n == 0:
        return ChannelRealization(direct, None, direct_gain, None)
    bs_irs_gain = direct_gain  # BS-surface distance equals the BS-user distance
    irs_user_gain = np.array(
        [path_gain(d, geom.path_loss_exponent, geom.reference_distance_m) for d in geom.irs_user_distances_m]
    )
    bs_irs = np.sqrt(bs_irs_gain)[:, None, None] * _cn(rng, (k, n, m))
    irs_user = np.sqrt(irs_user_gain)[:, None] * _cn(rng, (k, n))
    cascade = np.conj(irs_user)[:, :, None] * bs_irs
    return ChannelRealization(direct, cascade, direct_gain, bs_irs_gain * irs_user_gain)


def effective_row(real: ChannelRealization, user: int, v=None) -> np.ndarray:
    """Effective channel row direct_k + v @ cascade_k for user k.

    ``v`` may be a ReflectionVector, a plain array, or None (reflection off).
    """
    if user < 0 or user >= real.users:
        raise DimensionMismatchError(f"user index {user} out of range")
    if v is None or real.cascade is None:
        return real.direct[user]
    coeff = v.v if isinstance(v, ReflectionVector) else np.asarray(v, dtype=np.complex128)
    if coeff.shape != (real.elements,):
        raise DimensionMismatchError(
            f"reflection length {coeff.shape} does not match {real.elements} elements"
        )
    return real.direct[user] + coeff @ real.cascade[user]


def corrupt(real: ChannelRealization, err_var: float, rng) -> ChannelRealization:
    """Estimated view: add CN(0, err_var) error on each unit-variance fading
    coefficient, scaled by the amplitude of its link gain.

    Applies to direct and cascade rows alike. err_var = 0 returns the input
    realization unchanged (and consumes no randomness).
    """
    if err_var < 0:
        raise DomainError("csi error variance must be nonnegative")
    if err_var == 0.0:
        return real
    scale = np.sqrt(err_var)
    direct = real.direct + np.sqrt(real.direct_gain)[:, None] * scale * _cn(rng, real.direct.shape)
    if real.cascade is None:
        return replace(real, direct=direct)
    cascade = real.cascade + (
        np.sqrt(real.cascade_gain)[:, None, None] * scale * _cn(rng, real.cascade.shape)
    )
    return replace(real, direct=direct, cascade=cascade)
