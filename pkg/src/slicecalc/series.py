"""Unilateral power series ``sum q^k a_k`` with coefficients on the right.

On a slice ``q = t + r*iota`` each power is ``q^n = u_n + iota v_n`` with
real ``u_n, v_n`` that do not depend on ``iota``, so a series splits as
``u(t, r) + iota v(t, r)`` with ``u = sum u_n a_n`` and ``v = sum v_n a_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .diffops import DEFAULT_STEP, TOL_FD, Domain, PartialDerivatives, QFunction, fueter_apply
from .errors import DegenerateSlice, OutsideRadius
from .quaternion import I, J, K, ONE, ZERO, Quaternion, conj, inverse, mul, norm
from .slices import R_BAND, R_MIN, UnitImaginary, imag_norm

DEFAULT_ORDER = 64


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple[Quaternion, ...]
    radius: float = math.inf

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least one coefficient")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "coeffs", tuple(Quaternion.coerce(a) for a in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def _check(self, q: Quaternion) -> None:
        if not norm(q) < self.radius:
            raise OutsideRadius(f"|q| = {norm(q):.6g} is not below the radius {self.radius}")

    def __call__(self, q: Quaternion) -> Quaternion:
        return self.eval(q)

    def eval(self, q: Quaternion) -> Quaternion:
        """Horner form ``a_0 + q(a_1 + q(a_2 + ...))``; ``q`` always multiplies from the left."""
        self._check(q)
        qt, qx, qy, qz = q
        at, ax, ay, az = self.coeffs[-1]
        # inlined mul(q, acc) + a
        for bt, bx, by, bz in reversed(self.coeffs[:-1]):
            at, ax, ay, az = (
                qt * at - qx * ax - qy * ay - qz * az + bt,
                qt * ax + qx * at + qy * az - qz * ay + bx,
                qt * ay - qx * az + qy * at + qz * ax + by,
                qt * az + qx * ay - qy * ax + qz * at + bz,
            )
        return Quaternion(at, ax, ay, az)

    def partials(self, q: Quaternion) -> PartialDerivatives:
        """Termwise exact coordinate partials.

        Runs ``d(q^k) = d(q^{k-1}) q + q^{k-1} e`` alongside the powers and
        accumulates ``sum d(q^k) a_k``; products are inlined for speed.
        """
        self._check(q)
        qt, qx, qy, qz = q
        out = []
        for et, ex, ey, ez in (ONE, I, J, K):
            dt = dx = dy = dz = 0.0          # d(q^k)
            pt, px, py, pz = 1.0, 0.0, 0.0, 0.0  # q^k
            st = sx = sy = sz = 0.0          # running sum
            for at, ax, ay, az in self.coeffs[1:]:
                dt, dx, dy, dz = (
                    dt * qt - dx * qx - dy * qy - dz * qz + pt * et - px * ex - py * ey - pz * ez,
                    dt * qx + dx * qt + dy * qz - dz * qy + pt * ex + px * et + py * ez - pz * ey,
                    dt * qy - dx * qz + dy * qt + dz * qx + pt * ey - px * ez + py * et + pz * ex,
                    dt * qz + dx * qy - dy * qx + dz * qt + pt * ez + px * ey - py * ex + pz * et,
                )
                pt, px, py, pz = (
                    pt * qt - px * qx - py * qy - pz * qz,
                    pt * qx + px * qt + py * qz - pz * qy,
                    pt * qy - px * qz + py * qt + pz * qx,
                    pt * qz + px * qy - py * qx + pz * qt,
                )
                st += dt * at - dx * ax - dy * ay - dz * az
                sx += dt * ax + dx * at + dy * az - dz * ay
                sy += dt * ay - dx * az + dy * at + dz * ax
                sz += dt * az + dx * ay - dy * ax + dz * at
            out.append(Quaternion(st, sx, sy, sz))
        return PartialDerivatives(*out)

    def slice_decompose(self, t: float, r: float) -> tuple[Quaternion, Quaternion]:
        """``(u, v)`` with ``f(t + r iota) = u + iota v`` for every unit ``iota``."""
        if r < 0:
            raise ValueError("r must be nonnegative")
        if not math.hypot(t, r) < self.radius:
            raise OutsideRadius(f"(t, r) = ({t}, {r}) is outside the radius {self.radius}")
        un, vn = 1.0, 0.0
        u, v = ZERO, ZERO
        for a in self.coeffs:
            u = u + a * un
            v = v + a * vn
            un, vn = t * un - r * vn, r * un + t * vn
        return u, v

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[: order + 1], self.radius)

    def tail_bound(self, rho: float, order: int) -> float:
        """``sum_{order < k <= N} rho^k |a_k|``, bounding ``|f - f_order|`` on ``|q| <= rho``."""
        return math.fsum(rho ** k * norm(a) for k, a in enumerate(self.coeffs) if k > order)

    def root_test_radius(self) -> float:
        """Root-test radius estimate from the last half of the stored coefficients."""
        tail = [(k, norm(a)) for k, a in enumerate(self.coeffs) if k >= max(1, len(self.coeffs) // 2)]
        vals = [n ** (1.0 / k) for k, n in tail if n > 0]
        if not vals:
            return math.inf
        top = max(vals)
        return math.inf if top == 0 else 1.0 / top

    def as_qfunction(self, name: str) -> QFunction:
        return QFunction(
            name=name,
            evaluator=self.eval,
            domain=Domain.WHOLE if math.isinf(self.radius) else Domain.BALL,
            radius=self.radius,
            exact_partials=self.partials,
            slice_function=True,
            metadata={"series": self},
        )


def termwise_derivative(s: PowerSeries) -> PowerSeries:
    """Series of ``df/dt``: coefficients ``(k+1) a_{k+1}``, same radius."""
    if len(s.coeffs) == 1:
        return PowerSeries((ZERO,), s.radius)
    return PowerSeries(tuple(a * float(k) for k, a in enumerate(s.coeffs) if k > 0), s.radius)


def monomial(n: int, radius: float = math.inf) -> PowerSeries:
    return PowerSeries(tuple(ONE if k == n else ZERO for k in range(n + 1)), radius)


def exp_series(order: int = DEFAULT_ORDER, radius: float = math.inf) -> PowerSeries:
    return PowerSeries(tuple(ONE * (1.0 / math.factorial(k)) for k in range(order + 1)), radius)


def perp_quotient(s: PowerSeries, q: Quaternion) -> Quaternion:
    """``(q - conj q)^-1 (f(q) - f(conj q))``."""
    if imag_norm(q) <= R_MIN:
        raise DegenerateSlice(f"{q} is real")
    return mul(inverse(q - conj(q)), s.eval(q) - s.eval(conj(q)))


@dataclass(frozen=True)
class SliceComponents:
    """A function given by its slice parts ``u(t, r)``, ``v(t, r)``.

    ``evaluate`` must agree with ``u + iota v``; it is what the
    angle-independence check compares against.
    """

    uv: Callable[[float, float], tuple[Quaternion, Quaternion]]
    evaluate: Callable[[Quaternion], Quaternion]
    radius: float = math.inf

    def slice_decompose(self, t: float, r: float) -> tuple[Quaternion, Quaternion]:
        return self.uv(t, r)

    def eval(self, q: Quaternion) -> Quaternion:
        return self.evaluate(q)


def cr_residual(s, t: float, r: float, step: float = DEFAULT_STEP) -> float:
    """Largest of ``|du/dt - dv/dr|`` and ``|du/dr + dv/dt|`` by central differences.

    ``s`` is anything with ``slice_decompose(t, r)``: a :class:`PowerSeries`
    or :class:`SliceComponents`.
    """
    h = step
    u_tp, v_tp = s.slice_decompose(t + h, r)
    u_tm, v_tm = s.slice_decompose(t - h, r)
    # r - h may dip below zero next to the axis
    u_rp, v_rp = _decompose_signed(s, t, r + h)
    u_rm, v_rm = _decompose_signed(s, t, r - h)
    c = 0.5 / h
    du_dt, dv_dt = (u_tp - u_tm) * c, (v_tp - v_tm) * c
    du_dr, dv_dr = (u_rp - u_rm) * c, (v_rp - v_rm) * c
    return max(norm(du_dt - dv_dr), norm(du_dr + dv_dt))


def _decompose_signed(s, t: float, r: float) -> tuple[Quaternion, Quaternion]:
    if r >= 0:
        return s.slice_decompose(t, r)
    # f(t - |r| iota) = u(t, |r|) - iota v(t, |r|), i.e. u is even and v odd in r
    u, v = s.slice_decompose(t, -r)
    return u, -v


def random_units(rng: np.random.Generator, count: int) -> list[UnitImaginary]:
    out = []
    while len(out) < count:
        v = rng.normal(size=3)
        n = float(np.linalg.norm(v))
        if n > 1e-8:
            out.append(UnitImaginary(0.0, float(v[0] / n), float(v[1] / n), float(v[2] / n)))
    return out


@dataclass
class SliceCriterionRow:
    """One point of the slice criterion; each gap has its own allowance."""

    t: float
    r: float
    angle_gap: float
    angle_allowed: float
    cr: float
    cr_allowed: float
    c_from_v: Quaternion
    c_fueter: Quaternion
    c_quotient: Quaternion
    route_gap: float
    route_allowed: float

    @property
    def passed(self) -> bool:
        return (self.angle_gap <= self.angle_allowed
                and self.cr <= self.cr_allowed
                and self.route_gap <= self.route_allowed)


def _fd_partials(evaluate, q: Quaternion, step: float) -> PartialDerivatives:
    out = []
    for e in (ONE, I, J, K):
        out.append((evaluate(q + e * step) - evaluate(q - e * step)) * (0.5 / step))
    return PartialDerivatives(*out)


def slice_criterion_check(
    s,
    grid: Iterable[tuple[float, float]],
    step: float = DEFAULT_STEP,
    seed: int = 0,
    n_units: int = 4,
    tol_angle: float = 1e-10,
    tol_cr: float = TOL_FD,
    tol_routes: float = 1e-5,
) -> list[SliceCriterionRow]:
    """Slice-criterion checks at each ``(t, r)``.

    Per point: (a) ``f(t + r iota) = u + iota v`` at ``n_units`` random
    ``iota``; (b) the Cauchy-Riemann pair for ``u, v``; (c) the
    perpendicular derivative ``v/r`` against ``-Df/2`` and the
    conjugate quotient, pairwise.  Each tolerance is scaled by
    ``max(1, size)`` of the quantities it compares.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for t, r in grid:
        t, r = float(t), float(r)
        if r <= R_BAND:
            raise DegenerateSlice(f"r = {r} is inside the excluded band")
        u, v = s.slice_decompose(t, r)
        units = random_units(rng, n_units)
        angle_gap = 0.0
        scale = max(1.0, norm(u) + norm(v))
        for iota in units:
            q = Quaternion(t, r * iota.x, r * iota.y, r * iota.z)
            angle_gap = max(angle_gap, norm(s.eval(q) - (u + mul(iota, v))))
        cr = cr_residual(s, t, r, step)

        q = Quaternion(t, r * units[0].x, r * units[0].y, r * units[0].z)
        if isinstance(s, PowerSeries):
            p = s.partials(q)
        else:
            p = _fd_partials(s.eval, q, step * max(1.0, norm(q)))
        c_v = v * (1.0 / r)
        c_d = fueter_apply(p) * -0.5
        c_q = mul(inverse(q - conj(q)), s.eval(q) - s.eval(conj(q)))
        gap = max(norm(c_v - c_d), norm(c_v - c_q), norm(c_d - c_q))
        c_scale = max(1.0, norm(c_v), norm(c_d), norm(c_q))
        d_scale = max(1.0, max(norm(d) for d in p))
        rows.append(SliceCriterionRow(
            t=t, r=r,
            angle_gap=angle_gap, angle_allowed=tol_angle * scale,
            cr=cr, cr_allowed=tol_cr * d_scale,
            c_from_v=c_v, c_fueter=c_d, c_quotient=c_q,
            route_gap=gap, route_allowed=tol_routes * c_scale,
        ))
    return rows


# -- file format ---------------------------------------------------------

def loads(text: str) -> PowerSeries:
    """Parse the series text format.

    First non-blank line ``R=<real> N=<int>``; then ``N + 1`` lines
    ``t x y z``, line ``k`` holding ``a_k``.  ``#`` starts a comment.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty series file")
    header = dict(tok.split("=", 1) for tok in lines[0].split())
    try:
        radius = float(header["R"])
        order = int(header["N"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad series header {lines[0]!r}; expected 'R=<real> N=<int>'") from exc
    body = lines[1:]
    if len(body) != order + 1:
        raise ValueError(f"header declares N={order} but {len(body)} coefficient lines follow")
    coeffs = []
    for k, ln in enumerate(body):
        parts = ln.split()
        if len(parts) != 4:
            raise ValueError(f"coefficient line {k} needs 4 components, got {len(parts)}")
        coeffs.append(Quaternion(*(float(p) for p in parts)))
    return PowerSeries(tuple(coeffs), radius)


def dumps(s: PowerSeries) -> str:
    lines = [f"R={s.radius!r} N={s.order}"]
    lines += [" ".join(repr(float(c)) for c in a) for a in s.coeffs]
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> PowerSeries:
    return loads(Path(path).read_text())


def dump(s: PowerSeries, path: str | Path) -> None:
    Path(path).write_text(dumps(s))
