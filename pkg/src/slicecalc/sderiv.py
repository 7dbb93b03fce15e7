"""The S-derivative: limit estimates, closed forms and sufficiency checks.

At a real point the derivative is a single quaternion ``A`` with
``h^-1 (f(q+h) - f(q) - h A) -> 0``.  Off the real axis it is a pair
``(B, C)`` with ``h^-1 (f(q+h) - f(q) - h_par B - h_perp C) -> 0``, where
``h_par``, ``h_perp`` split ``h`` relative to the point's own ``iota``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .diffops import (
    TOL_EXACT,
    TOL_FD,
    QFunction,
    characteristic_residuals,
    fueter_apply,
    partial_iota,
    partials,
)
from .errors import DegenerateSlice
from .quaternion import Quaternion, conj, inverse, mul, norm
from .slices import R_BAND, R_MIN, imag_norm, perp_direction, slice_form, split_increment

DEFAULT_STEPS = (1e-2, 1e-3, 1e-4, 1e-5)
N_PROBES = 8
PROBE_SEED = 20240611
# a decade of step must buy at least this fraction of a decade of residual
MIN_RATE = 0.8
EPS = np.finfo(float).eps


class PointKind(str, Enum):
    REAL = "real"
    NONREAL = "nonreal"


@dataclass
class SDerivative:
    kind: PointKind
    point: Quaternion
    A: Optional[Quaternion] = None
    B: Optional[Quaternion] = None
    C: Optional[Quaternion] = None
    # conjugate-quotient value of C, for slice functions only
    C_quotient: Optional[Quaternion] = None

    @property
    def parallel(self) -> Quaternion:
        return self.A if self.kind is PointKind.REAL else self.B


@dataclass
class ConvergenceTrace:
    steps: list[float]
    residuals: list[float]
    floors: list[float] = field(default_factory=list)

    def __post_init__(self):
        if any(s <= 0 for s in self.steps):
            raise ValueError("steps must be positive")
        if any(b >= a for a, b in zip(self.steps, self.steps[1:])):
            raise ValueError("steps must be strictly decreasing")

    def rates(self) -> list[float]:
        """Residual reduction factor between consecutive steps."""
        out = []
        for a, b in zip(self.residuals, self.residuals[1:]):
            out.append(math.inf if b == 0 else a / b)
        return out

    @property
    def nonconvergent(self) -> bool:
        """True unless the residual falls at least linearly with the step.

        A pair of steps passes when the residual drops by ``MIN_RATE`` times
        the step ratio, or when the smaller-step residual is already at the
        rounding floor.
        """
        floors = self.floors or [0.0] * len(self.steps)
        for i in range(len(self.steps) - 1):
            a, b = self.residuals[i], self.residuals[i + 1]
            if b <= floors[i + 1]:
                continue
            need = MIN_RATE * self.steps[i] / self.steps[i + 1]
            if b == 0 or a / b >= need:
                continue
            return True
        return False

    def summary(self) -> dict:
        return {
            "steps": list(self.steps),
            "residuals": list(self.residuals),
            "nonconvergent": self.nonconvergent,
        }


@lru_cache(maxsize=32)
def probe_directions(seed: int = PROBE_SEED, count: int = N_PROBES) -> tuple[Quaternion, ...]:
    """``count`` directions drawn uniformly on the unit sphere of H."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        v = rng.normal(size=4)
        n = float(np.linalg.norm(v))
        if n > 1e-8:
            out.append(Quaternion(*(float(c) / n for c in v)))
    return tuple(out)


def is_real_point(q: Quaternion, r_band: float = R_BAND) -> bool:
    return imag_norm(q) <= r_band


def estimate(
    f: QFunction,
    q: Quaternion,
    steps: Optional[Sequence[float]] = None,
    seed: int = PROBE_SEED,
    r_band: float = R_BAND,
    scale: bool = True,
) -> tuple[SDerivative, ConvergenceTrace]:
    """Estimate the S-derivative at ``q`` from its defining limit.

    ``A`` (or ``B``) comes from a central secant along the real direction,
    where ``h_perp`` vanishes.  ``C`` comes from a central secant along a
    unit imaginary ``eta`` orthogonal to ``iota``, where ``h_par`` vanishes.
    The trace holds, for each step, the worst residual of the defining
    limit over a fixed set of generic directions.  Steps are multiplied by
    ``max(1, |q|)`` unless ``scale`` is false.
    """
    base = DEFAULT_STEPS if steps is None else tuple(steps)
    factor = max(1.0, norm(q)) if scale else 1.0
    hs = [s * factor for s in base]
    probes = probe_directions(seed)
    f0 = f(q)
    real = is_real_point(q, r_band)
    if not real:
        sf = slice_form(q)
        eta = perp_direction(sf.iota)
        splits = [split_increment(d, sf.iota) for d in probes]

    residuals, floors = [], []
    par = perp = None
    for s in hs:
        par = (f(q + s) - f(q - s)) * (0.5 / s)
        if not real:
            he = eta * s
            perp = mul(inverse(he * 2.0), f(q + he) - f(q - he))
        worst = 0.0
        for n, d in enumerate(probes):
            h = d * s
            if real:
                model = mul(h, par)
            else:
                hp, hq = splits[n]
                model = mul(hp * s, par) + mul(hq * s, perp)
            worst = max(worst, norm(mul(inverse(h), f(q + h) - f0 - model)))
        residuals.append(worst)
        # cancellation noise of a difference quotient at this step
        floors.append(64.0 * EPS * max(1.0, norm(f0)) / s)

    trace = ConvergenceTrace(hs, residuals, floors)
    if real:
        return SDerivative(PointKind.REAL, q, A=par), trace
    return SDerivative(PointKind.NONREAL, q, B=par, C=perp), trace


def slice_quotient(f: QFunction, q: Quaternion) -> Quaternion:
    """``(q - conj q)^-1 (f(q) - f(conj q))``; defined off the real axis."""
    if imag_norm(q) <= R_MIN:
        raise DegenerateSlice(f"{q} is real")
    return mul(inverse(q - conj(q)), f(q) - f(conj(q)))


def closed_form(
    f: QFunction,
    q: Quaternion,
    step: Optional[float] = None,
    r_band: float = R_BAND,
) -> SDerivative:
    """``A = B = df/dt`` and ``C = -Df/2``, from the coordinate partials.

    For slice functions the conjugate-quotient value of ``C`` is also
    filled in so callers can compare the two routes.
    """
    p = partials(f, q, step)
    if is_real_point(q, r_band):
        return SDerivative(PointKind.REAL, q, A=p.d_t)
    c = fueter_apply(p) * -0.5
    cq = slice_quotient(f, q) if f.slice_function else None
    return SDerivative(PointKind.NONREAL, q, B=p.d_t, C=c, C_quotient=cq)


def estimate_tolerance(reference: Quaternion, tol: float = TOL_FD) -> float:
    """``max(10 tol, 1e-6 |reference|)``."""
    return max(10.0 * tol, 1e-6 * norm(reference))


def perp_routes(f: QFunction, q: Quaternion, step: Optional[float] = None) -> dict[str, Quaternion]:
    """The perpendicular derivative by up to three independent routes.

    ``fueter``: ``-Df/2``; ``iota``: ``(1/2r) df/diota``; ``quotient``: the
    conjugate quotient, for slice functions only.
    """
    sf = slice_form(q)
    out = {
        "fueter": fueter_apply(partials(f, q, step)) * -0.5,
        "iota": partial_iota(f, q, step) * (0.5 / sf.r),
    }
    if f.slice_function:
        out["quotient"] = slice_quotient(f, q)
    return out


def route_gap(routes: dict[str, Quaternion]) -> float:
    vals = list(routes.values())
    gap = 0.0
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            gap = max(gap, norm(vals[i] - vals[j]))
    return gap


@dataclass
class SufficiencyRow:
    point: Quaternion
    equations: dict[str, float]
    equation_tol: float
    estimate: SDerivative
    closed: SDerivative
    estimate_gap: float
    estimate_tol: float
    nonconvergent: bool
    passed: bool


def equation_tolerance(f: QFunction, tol_fd: float = TOL_FD, tol_exact: float = TOL_EXACT) -> float:
    return tol_exact if f.exact_partials is not None else tol_fd


def compare_estimate(est: SDerivative, closed: SDerivative, tol: float = TOL_FD) -> tuple[float, float]:
    """Worst gap between estimated and closed-form fields, and its tolerance."""
    if est.kind is PointKind.REAL:
        pairs = [(est.A, closed.A)]
    else:
        pairs = [(est.B, closed.B), (est.C, closed.C)]
    gap, allowed = 0.0, math.inf
    for e, c in pairs:
        gap = max(gap, norm(e - c))
        allowed = min(allowed, estimate_tolerance(c, tol))
    return gap, allowed


def verify_sufficiency(
    f: QFunction,
    grid: Iterable[Quaternion],
    step: Optional[float] = None,
    tol_fd: float = TOL_FD,
    tol_exact: float = TOL_EXACT,
    r_band: float = R_BAND,
) -> list[SufficiencyRow]:
    """Per point: equations hold and the limit estimate meets the closed form."""
    rows = []
    eq_tol = equation_tolerance(f, tol_fd, tol_exact)
    for q in grid:
        res = characteristic_residuals(f, q, step, r_band)
        eqs = res.equations()
        est, trace = estimate(f, q, r_band=r_band)
        closed = closed_form(f, q, step, r_band)
        gap, allowed = compare_estimate(est, closed, tol_fd)
        ok = (max(eqs.values()) <= eq_tol and gap <= allowed and not trace.nonconvergent)
        rows.append(SufficiencyRow(q, eqs, eq_tol, est, closed, gap, allowed,
                                   trace.nonconvergent, ok))
    return rows


def lipschitz_estimate(points: Sequence[Quaternion], values: Sequence[Quaternion]) -> float:
    """Largest ``|f(p) - f(p')| / |p - p'|`` over nearest-neighbour pairs.

    A discrete continuity surrogate; reported, never asserted.
    """
    if len(points) < 2:
        return 0.0
    P = np.asarray(points, dtype=float)
    V = np.asarray(values, dtype=float)
    d = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=-1)
    np.fill_diagonal(d, np.inf)
    nn = np.argmin(d, axis=1)
    dq = d[np.arange(len(P)), nn]
    dv = np.linalg.norm(V - V[nn], axis=1)
    mask = dq > 0
    return float(np.max(dv[mask] / dq[mask])) if mask.any() else 0.0


def axis_gap(f: QFunction, t: float, iota: Quaternion,
             radii: Sequence[float] = (1e-1, 1e-2, 1e-3)) -> list[dict]:
    """How far ``B`` and ``C`` at ``t + r iota`` sit from ``A`` at ``t``, as ``r`` shrinks."""
    a = closed_form(f, Quaternion(t, 0.0, 0.0, 0.0)).A
    out = []
    for r in radii:
        q = Quaternion(t, r * iota.x, r * iota.y, r * iota.z)
        cf = closed_form(f, q)
        out.append({"r": r, "B_minus_A": norm(cf.B - a), "C_minus_A": norm(cf.C - a)})
    return out
