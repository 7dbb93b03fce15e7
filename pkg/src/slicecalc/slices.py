"""Slice coordinates ``q = t + r*iota`` and the increment split.

Every non-real quaternion lies on exactly one complex slice ``R + iota R``
with ``iota`` a unit imaginary.  Increments ``h`` at such a point split
into a part commuting with ``iota`` and a part anticommuting with it.
"""

from __future__ import annotations

import math
import warnings
from typing import NamedTuple

from .errors import DegenerateSlice
from .quaternion import I, J, K, Quaternion, mul

# below this imaginary magnitude a point is treated as real
R_MIN = 1e-12
# grids exclude 0 < r < R_BAND when testing the non-real equations
R_BAND = 1e-6
# sin(beta) below this is considered on the singular subplane R + kR
POLE_SIN = 1e-6


class NearPoleWarning(UserWarning):
    """Angle chart evaluated next to the poles beta = 0, pi."""


class UnitImaginary(Quaternion):
    """A quaternion with zero scalar part and unit norm (so it squares to -1)."""

    __slots__ = ()

    @classmethod
    def from_vector(cls, v: Quaternion) -> "UnitImaginary":
        r = math.hypot(v.x, v.y, v.z)
        if r <= R_MIN:
            raise DegenerateSlice("zero vector has no direction")
        return cls(0.0, v.x / r, v.y / r, v.z / r)


class SliceForm(NamedTuple):
    t: float
    r: float
    iota: UnitImaginary

    def recompose(self) -> Quaternion:
        return Quaternion(self.t, self.r * self.iota.x,
                          self.r * self.iota.y, self.r * self.iota.z)


class SphericalAngles(NamedTuple):
    alpha: float
    beta: float


class IncrementSplit(NamedTuple):
    h_par: Quaternion
    h_perp: Quaternion


def imag_norm(q: Quaternion) -> float:
    return math.hypot(q.x, q.y, q.z)


def slice_form(q: Quaternion, r_min: float = R_MIN) -> SliceForm:
    """Decompose ``q`` as ``t + r*iota`` with ``r >= 0``.

    Raises :class:`DegenerateSlice` when ``r <= r_min``.
    """
    r = imag_norm(q)
    if r <= r_min:
        raise DegenerateSlice(f"point {q} is real; iota is undefined")
    return SliceForm(q.t, r, UnitImaginary(0.0, q.x / r, q.y / r, q.z / r))


def iota_from_angles(angles: SphericalAngles) -> UnitImaginary:
    """``cos a sin b i + sin a sin b j + cos b k``."""
    alpha, beta = angles
    sb = math.sin(beta)
    if abs(sb) < POLE_SIN:
        warnings.warn(f"iota chart evaluated near a pole (sin beta = {sb:.3g})",
                      NearPoleWarning, stacklevel=2)
    return UnitImaginary(0.0, math.cos(alpha) * sb, math.sin(alpha) * sb,
                         math.cos(beta))


def angles_of(iota: Quaternion) -> SphericalAngles:
    """Chart coordinates of a unit imaginary, ``alpha`` in (-pi, pi], ``beta`` in [0, pi]."""
    beta = math.acos(max(-1.0, min(1.0, iota.z)))
    alpha = math.atan2(iota.y, iota.x)
    return SphericalAngles(alpha, beta)


def iota_tangents(angles: SphericalAngles) -> tuple[Quaternion, Quaternion]:
    """Analytic partials of the chart with respect to ``alpha`` and ``beta``."""
    alpha, beta = angles
    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    d_alpha = Quaternion(0.0, -sa * sb, ca * sb, 0.0)
    d_beta = Quaternion(0.0, ca * cb, sa * cb, -sb)
    return d_alpha, d_beta


def split_increment(h: Quaternion, iota: Quaternion) -> IncrementSplit:
    """``h_par = (h - iota h iota)/2`` and ``h_perp = (h + iota h iota)/2``."""
    ihi = mul(mul(iota, h), iota)
    return IncrementSplit((h - ihi) * 0.5, (h + ihi) * 0.5)


def perp_direction(iota: Quaternion) -> UnitImaginary:
    """A unit imaginary orthogonal to ``iota``.

    Gram-Schmidt of the first of ``i, j, k`` that is not parallel to
    ``iota``; the scan order keeps reports reproducible.
    """
    for e in (I, J, K):
        w = e - iota * e.dot(iota)
        # numerically parallel axes would give an ill-conditioned direction
        if imag_norm(w) > 1e-3:
            w = w - iota * w.dot(iota)
            return UnitImaginary.from_vector(w)
    raise DegenerateSlice("iota is not a unit imaginary")  # pragma: no cover
