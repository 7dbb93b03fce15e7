"""Coordinate partials, the left Fueter operator and the characteristic equations.

Functions are wrapped in :class:`QFunction`, which carries a domain
descriptor and, optionally, exact coordinate partials.  Every routine
here uses the exact partials when present and central differences
otherwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple, Optional

from .errors import DegenerateSlice, DomainExit, OutsideRadius, SingularSubplane
from .quaternion import I, J, K, ONE, ZERO, Quaternion, inverse, mul, norm
from .slices import (
    POLE_SIN,
    R_BAND,
    NearPoleWarning,
    SphericalAngles,
    angles_of,
    imag_norm,
    iota_from_angles,
    iota_tangents,
    slice_form,
)

DEFAULT_STEP = 1e-5
TOL_FD = 1e-6
TOL_EXACT = 1e-10

AXES = ("t", "x", "y", "z")
UNITS = {"t": ONE, "x": I, "y": J, "z": K}


class Domain(str, Enum):
    WHOLE = "whole"
    NONREAL = "nonreal"
    BALL = "ball"


class PartialDerivatives(NamedTuple):
    d_t: Quaternion
    d_x: Quaternion
    d_y: Quaternion
    d_z: Quaternion


@dataclass(frozen=True)
class QFunction:
    """A quaternion-valued function of a quaternion variable.

    ``exact_partials`` returns all four coordinate partials at a point.
    ``slice_function`` marks functions of the form ``u(t, r) + iota v(t, r)``
    (power series, ``iota``), for which ``f(conj q)`` pairs with ``f(q)``.
    """

    name: str
    evaluator: Callable[[Quaternion], Quaternion]
    domain: Domain = Domain.WHOLE
    radius: float = math.inf
    exact_partials: Optional[Callable[[Quaternion], PartialDerivatives]] = None
    slice_function: bool = False
    smooth: bool = True
    metadata: dict = field(default_factory=dict, compare=False)

    def contains(self, q: Quaternion) -> bool:
        if self.domain is Domain.NONREAL:
            return imag_norm(q) > 0.0
        if self.domain is Domain.BALL:
            return norm(q) < self.radius
        return True

    def check(self, q: Quaternion) -> None:
        if self.contains(q):
            return
        if self.domain is Domain.BALL:
            raise OutsideRadius(f"{q} is outside B(0, {self.radius}) for {self.name}")
        raise DomainExit(f"{q} is outside the domain of {self.name}")

    def __call__(self, q: Quaternion) -> Quaternion:
        self.check(q)
        return self.evaluator(q)

    @property
    def has_exact_partials(self) -> bool:
        return self.exact_partials is not None


def default_step(q: Quaternion, base: float = DEFAULT_STEP) -> float:
    """Finite-difference step scaled by ``max(1, |q|)``."""
    return base * max(1.0, norm(q))


def partial_fd(f: QFunction, q: Quaternion, axis: str, step: float) -> Quaternion:
    """Central difference ``(f(q + s e) - f(q - s e)) / 2s`` along one axis."""
    if step <= 0:
        raise ValueError("step must be positive")
    e = UNITS[axis]
    return (f(q + e * step) - f(q - e * step)) * (0.5 / step)


def partials_fd(f: QFunction, q: Quaternion, step: Optional[float] = None) -> PartialDerivatives:
    s = default_step(q) if step is None else step
    return PartialDerivatives(*(partial_fd(f, q, a, s) for a in AXES))


def partials(f: QFunction, q: Quaternion, step: Optional[float] = None) -> PartialDerivatives:
    """Exact partials when ``f`` provides them, central differences otherwise."""
    if f.exact_partials is not None:
        f.check(q)
        return f.exact_partials(q)
    return partials_fd(f, q, step)


def pow_partials(n: int, q: Quaternion) -> PartialDerivatives:
    """Exact partials of ``q**n`` by the noncommutative product rule.

    ``d(q^k) = d(q^{k-1}) q + q^{k-1} e``, started from ``d(q^0) = 0``.
    """
    if n < 0:
        raise ValueError("exponent must be nonnegative")
    out = []
    for e in (ONE, I, J, K):
        d = ZERO
        qk = ONE
        for _ in range(n):
            d = mul(d, q) + mul(qk, e)
            qk = mul(qk, q)
        out.append(d)
    return PartialDerivatives(*out)


def partial_exact_pow(n: int, q: Quaternion, axis: str) -> Quaternion:
    """``sum_{m<n} q^m e q^(n-1-m)`` for the unit ``e`` of ``axis``."""
    return pow_partials(n, q)[AXES.index(axis)]


def fueter_apply(p: PartialDerivatives) -> Quaternion:
    """Left Fueter operator ``d_t + i d_x + j d_y + k d_z``."""
    return p.d_t + mul(I, p.d_x) + mul(J, p.d_y) + mul(K, p.d_z)


def jacobian_apply(p: PartialDerivatives, h: Quaternion) -> Quaternion:
    """Real-linear Jacobian action ``d_t h0 + d_x h1 + d_y h2 + d_z h3``."""
    return p.d_t * h.t + p.d_x * h.x + p.d_y * h.y + p.d_z * h.z


def cullen_residual(f: QFunction, q: Quaternion, step: Optional[float] = None) -> float:
    """Norm of ``(d/dt + iota d/dr) f`` at a non-real point."""
    sf = slice_form(q)
    if f.exact_partials is not None:
        p = partials(f, q)
        d_t, d_r = p.d_t, jacobian_apply(p, sf.iota)
    else:
        s = default_step(q) if step is None else step
        d_t = partial_fd(f, q, "t", s)
        d_r = (f(q + sf.iota * s) - f(q - sf.iota * s)) * (0.5 / s)
    return norm(d_t + mul(sf.iota, d_r))


def partial_iota(f: QFunction, q: Quaternion, step: Optional[float] = None) -> Quaternion:
    """Angular derivative ``(di/da)^-1 df/da + (di/db)^-1 df/db`` at fixed ``(t, r)``.

    The chart is ``iota(a, b) = cos a sin b i + sin a sin b j + cos b k``;
    ``step`` is the angular increment of the central differences.
    """
    sf = slice_form(q)
    ang = angles_of(sf.iota)
    if abs(math.sin(ang.beta)) < POLE_SIN:
        raise SingularSubplane(f"{q} lies on the singular subplane R + kR")
    h = DEFAULT_STEP if step is None else step
    t, r = sf.t, sf.r

    def at(alpha: float, beta: float) -> Quaternion:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NearPoleWarning)
            iota = iota_from_angles(SphericalAngles(alpha, beta))
        return f(Quaternion(t, r * iota.x, r * iota.y, r * iota.z))

    df_da = (at(ang.alpha + h, ang.beta) - at(ang.alpha - h, ang.beta)) * (0.5 / h)
    df_db = (at(ang.alpha, ang.beta + h) - at(ang.alpha, ang.beta - h)) * (0.5 / h)
    t_alpha, t_beta = iota_tangents(ang)
    return mul(inverse(t_alpha), df_da) + mul(inverse(t_beta), df_db)


@dataclass
class ResidualVector:
    """Characteristic-equation residual norms at one point.

    The real branch fills ``eq1``..``eq3``; the non-real branch fills
    ``eq4``..``eq6`` and ``cullen``.  ``fueter_consistency`` is left
    ``None`` on the singular subplane.
    """

    point: Quaternion
    real_branch: bool
    exact: bool
    eq1: Optional[float] = None
    eq2: Optional[float] = None
    eq3: Optional[float] = None
    eq4: Optional[float] = None
    eq5: Optional[float] = None
    eq6: Optional[float] = None
    cullen: Optional[float] = None
    fueter_consistency: Optional[float] = None

    def equations(self) -> dict[str, float]:
        names = ("eq1", "eq2", "eq3") if self.real_branch else ("eq4", "eq5", "eq6", "cullen")
        return {n: getattr(self, n) for n in names}

    def max_equation(self) -> float:
        return max(self.equations().values())


def _slice_coefficients(iota: Quaternion, e: Quaternion) -> tuple[Quaternion, Quaternion]:
    """``(e - iota e iota)/2`` and ``(e + iota e iota)/4``."""
    iei = mul(mul(iota, e), iota)
    return (e - iei) * 0.5, (e + iei) * 0.25


def characteristic_residuals(
    f: QFunction,
    q: Quaternion,
    step: Optional[float] = None,
    r_band: float = R_BAND,
) -> ResidualVector:
    """Residuals of the six characteristic equations at ``q``.

    Real branch (``r <= r_band``)::

        |df/dx - i df/dt|, |df/dy - j df/dt|, |df/dz - k df/dt|

    Non-real branch, for each unit ``e`` of ``x, y, z``::

        |df/de - ((e - iota e iota)/2) df/dt + ((e + iota e iota)/4) Df|
    """
    p = partials(f, q, step)
    exact = f.exact_partials is not None
    if imag_norm(q) <= r_band:
        return ResidualVector(
            point=q, real_branch=True, exact=exact,
            eq1=norm(p.d_x - mul(I, p.d_t)),
            eq2=norm(p.d_y - mul(J, p.d_t)),
            eq3=norm(p.d_z - mul(K, p.d_t)),
        )
    sf = slice_form(q)
    df = fueter_apply(p)
    res = []
    for e, d_e in ((I, p.d_x), (J, p.d_y), (K, p.d_z)):
        par, perp = _slice_coefficients(sf.iota, e)
        res.append(norm(d_e - mul(par, p.d_t) + mul(perp, df)))
    cullen = norm(p.d_t + mul(sf.iota, jacobian_apply(p, sf.iota)))
    try:
        consistency = _decomposition_gap(f, q, p, step)
    except SingularSubplane:
        consistency = None
    return ResidualVector(
        point=q, real_branch=False, exact=exact,
        eq4=res[0], eq5=res[1], eq6=res[2], cullen=cullen,
        fueter_consistency=consistency,
    )


def _decomposition_gap(f: QFunction, q: Quaternion, p: PartialDerivatives,
                       step: Optional[float]) -> float:
    sf = slice_form(q)
    d_iota = partial_iota(f, q, DEFAULT_STEP if step is None else step)
    rhs = p.d_t + mul(sf.iota, jacobian_apply(p, sf.iota)) - d_iota * (1.0 / sf.r)
    return norm(fueter_apply(p) - rhs)


def fueter_decomposition_residual(f: QFunction, q: Quaternion,
                                  step: Optional[float] = None) -> float:
    """``|Df - (df/dt + iota df/dr - (1/r) df/diota)|`` at a non-real point."""
    if imag_norm(q) <= 0.0:
        raise DegenerateSlice(f"{q} is real")
    return _decomposition_gap(f, q, partials(f, q, step), step)
