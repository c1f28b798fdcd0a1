"""Reflection-coefficient design for the per-user surfaces.

Two strategies: phase alignment that adds the reflected common-stream path
constructively on top of the direct path, and a constrained least-squares
design that steers each user's effective row toward a boosted target
orthogonalized against the other users. Both consume the *estimated*
realization; rates are computed later on the true one.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, ReflectionVector
from .errors import DimensionMismatchError, DomainError, ZeroChannelError
from .linalg import least_squares, orth_complement

STRATEGIES = ("off", "phase_align_common", "constrained_ls")


@dataclass(frozen=True)
class IrsStrategyConfig:
    strategy: str = "constrained_ls"
    boost_factor: float = 3.0
    ls_ridge: float = 1e-9

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise DomainError(f"unknown strategy {self.strategy!r}, expected one of {STRATEGIES}")
        if self.boost_factor <= 0:
            raise DomainError("boost_factor must be positive")
        if self.ls_ridge < 0:
            raise DomainError("ls_ridge must be nonnegative")


def phase_align_common(est: ChannelRealization, user: int, p_c) -> ReflectionVector:
    """Unit-amplitude phases that add every reflected common-path term in
    phase with the direct one.

    With a0 = direct_k @ p_c and a_n = cascade_k[n] @ p_c the coefficients
    are exp(j(arg a0 - arg a_n)), which makes |effective @ p_c| equal
    |a0| + sum |a_n| (triangle equality). Elements with negligible |a_n|
    get coefficient 1; their phase is irrelevant.
    """
    if est.cascade is None or est.elements < 1:
        raise DimensionMismatchError("phase alignment needs at least one element")
    p_c = np.asarray(p_c, dtype=np.complex128)
    a0 = est.direct[user] @ p_c
    an = est.cascade[user] @ p_c
    v = np.exp(1j * (np.angle(a0) - np.angle(an)))
    v[np.abs(an) <= 1e-15] = 1.0
    return ReflectionVector(v)


def build_target(est_rows, user: int, boost: float) -> np.ndarray:
    """Target row for the least-squares design: own estimated direct row
    orthogonalized against the other users', rescaled to boost * own norm.

    Falls back to boost * own row when the rows are (near-)colinear.
    """
    rows = [np.asarray(r, dtype=np.complex128) for r in est_rows]
    own = rows[user]
    own_norm = np.linalg.norm(own)
    if own_norm <= 1e-12:
        raise ZeroChannelError("cannot build a target from a zero row")
    others = [r for j, r in enumerate(rows) if j != user]
    q = orth_complement(own, others)
    q_norm = np.linalg.norm(q)
    if q_norm > 1e-8 * own_norm:
        return boost * own_norm * q / q_norm
    return boost * own


def constrained_ls(est: ChannelRealization, user: int, target, ridge: float) -> ReflectionVector:
    """Reflection coefficients minimizing ||effective_row - target||^2 +
    ridge * ||v||^2, projected entrywise onto the unit disk.

    The effective row is affine in v, so the unconstrained problem is a
    linear least squares in v; entries exceeding unit amplitude afterwards
    are rescaled to the disk boundary, preserving phase.
    """
    if est.cascade is None or est.elements < 1:
        raise DimensionMismatchError("constrained LS needs at least one element")
    target = np.asarray(target, dtype=np.complex128)
    if target.shape != (est.antennas,):
        raise DimensionMismatchError("target length does not match the antenna count")
    residual = target - est.direct[user]
    v = least_squares(est.cascade[user].T, residual, ridge)
    for _ in range(3):
        mag = np.abs(v)
        over = mag > 1.0
        if not over.any():
            break
        v[over] /= mag[over]
    return ReflectionVector(v)
