"""Batch execution of every check over a catalog and a grid."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..diffops import (
    DEFAULT_STEP,
    TOL_EXACT,
    TOL_FD,
    characteristic_residuals,
    default_step,
)
from ..errors import SliceCalcError
from ..quaternion import I, Quaternion, render
from ..sderiv import (
    DEFAULT_STEPS,
    PROBE_SEED,
    PointKind,
    axis_gap,
    closed_form,
    compare_estimate,
    estimate,
    lipschitz_estimate,
    perp_routes,
    route_gap,
)
from ..series import slice_criterion_check
from ..slices import imag_norm, slice_form
from .catalog import CatalogEntry, Expectation
from .grid import GridSpec

log = logging.getLogger(__name__)

ROUTE_TOL = 1e-5
SLICE_MATCH = 1e-9


@dataclass(frozen=True)
class RunConfig:
    step: float = DEFAULT_STEP
    tol: float = TOL_FD
    tol_exact: float = TOL_EXACT
    route_tol: float = ROUTE_TOL
    steps: tuple[float, ...] = DEFAULT_STEPS
    seed: int = 0
    trace: bool = False

    def as_dict(self) -> dict:
        return {
            "step": self.step,
            "tol": self.tol,
            "tol_exact": self.tol_exact,
            "route_tol": self.route_tol,
            "steps": list(self.steps),
            "seed": self.seed,
            "trace": self.trace,
        }


@dataclass
class Row:
    index: int
    point: Quaternion
    check: str
    residual: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class Skip:
    index: int
    point: Quaternion
    check: str
    reason: str


@dataclass
class FunctionResult:
    entry: CatalogEntry
    rows: list[Row]
    skipped: list[Skip]
    n_points: int
    n_expected: int
    diagnostics: dict

    @property
    def failed(self) -> list[Row]:
        return [r for r in self.rows if not r.passed]

    def violation(self) -> Optional[str]:
        """Why the rows contradict the entry's expectation, or ``None``."""
        exp = self.entry.expectation
        failed = self.failed
        if exp is Expectation.S_DERIVABLE:
            if failed:
                return f"{len(failed)} rows failed for an S-derivable function"
            if not self.rows:
                return "no rows were produced"
            return None
        if exp is Expectation.NOT_S_DERIVABLE:
            return None if failed else "no row failed for a non-S-derivable function"
        on = [r for r in self.rows if _on_slice(r.point, self.entry.slice_axis)]
        bad_on = [r for r in on if not r.passed]
        bad_off = [r for r in failed if not _on_slice(r.point, self.entry.slice_axis)]
        if not on:
            return "no grid point lies on the distinguished slice"
        if bad_on:
            return f"{len(bad_on)} rows failed on the distinguished slice"
        if not bad_off:
            return "no row failed off the distinguished slice"
        return None

    def summary(self) -> dict:
        return {
            "points": self.n_points,
            "rows": len(self.rows),
            "passed": len(self.rows) - len(self.failed),
            "failed": len(self.failed),
            "skipped": len(self.skipped),
            "expected_records": self.n_expected,
            "violation": self.violation(),
        }


@dataclass
class RunResult:
    config: RunConfig
    grid: GridSpec
    functions: list[FunctionResult]

    @property
    def violations(self) -> int:
        return sum(1 for f in self.functions if f.violation() is not None)


def _on_slice(q: Quaternion, axis: Optional[Quaternion]) -> bool:
    if axis is None or imag_norm(q) <= 0.0:
        return False
    iota = slice_form(q).iota
    return abs(iota.dot(axis)) >= 1.0 - SLICE_MATCH


def _checks_for(entry: CatalogEntry, q: Quaternion, r_band: float) -> list[str]:
    checks = ["characteristic", "s_derivative"]
    if imag_norm(q) > r_band:
        checks += ["fueter_decomposition", "perp_routes"]
        if entry.slice_parts is not None:
            checks += ["slice_criterion.angle", "slice_criterion.cr", "slice_criterion.routes"]
    return checks


def _reason(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}"


def _point_rows(entry: CatalogEntry, index: int, q: Quaternion, grid: GridSpec,
                config: RunConfig, closed_values: list) -> tuple[list[Row], list[Skip]]:
    f = entry.function
    r_band = grid.r_band
    checks = _checks_for(entry, q, r_band)
    rows: list[Row] = []
    skips: list[Skip] = []
    if not f.contains(q):
        try:
            f.check(q)
        except SliceCalcError as exc:
            reason = _reason(exc)
        return rows, [Skip(index, q, c, reason) for c in checks]
    fd_step = default_step(q, config.step)
    done = set()

    def skip_rest(exc: Exception, names: Sequence[str]):
        for c in names:
            if c not in done:
                skips.append(Skip(index, q, c, _reason(exc)))
                done.add(c)

    # characteristic equations and the decomposition of the Fueter operator
    try:
        res = characteristic_residuals(f, q, fd_step, r_band)
        eqs = res.equations()
        tol = config.tol_exact if res.exact else config.tol
        rows.append(Row(index, q, "characteristic", max(eqs.values()), tol,
                        max(eqs.values()) <= tol,
                        {"branch": "real" if res.real_branch else "nonreal",
                         "exact_partials": res.exact, **eqs}))
        done.add("characteristic")
        if "fueter_decomposition" in checks:
            if res.fueter_consistency is None:
                skips.append(Skip(index, q, "fueter_decomposition",
                                  "SingularSubplane: point lies on R + kR"))
            else:
                rows.append(Row(index, q, "fueter_decomposition", res.fueter_consistency,
                                config.tol, res.fueter_consistency <= config.tol))
            done.add("fueter_decomposition")
    except SliceCalcError as exc:
        skip_rest(exc, ["characteristic", "fueter_decomposition"])

    # limit estimate against closed form
    try:
        est, trace = estimate(f, q, config.steps, seed=PROBE_SEED + config.seed, r_band=r_band)
        closed = closed_form(f, q, fd_step, r_band)
        gap, allowed = compare_estimate(est, closed, config.tol)
        detail = {"kind": est.kind.value}
        if est.kind is PointKind.REAL:
            detail.update(A=render(closed.A), A_estimate=render(est.A))
        else:
            detail.update(B=render(closed.B), C=render(closed.C),
                          B_estimate=render(est.B), C_estimate=render(est.C))
        detail["nonconvergent"] = trace.nonconvergent
        detail["final_residual"] = trace.residuals[-1]
        if config.trace:
            detail["trace"] = trace.summary()
        rows.append(Row(index, q, "s_derivative", gap, allowed,
                        gap <= allowed and not trace.nonconvergent, detail))
        closed_values.append(closed)
    except SliceCalcError as exc:
        skip_rest(exc, ["s_derivative"])
    done.add("s_derivative")

    if "perp_routes" in checks:
        try:
            routes = perp_routes(f, q, fd_step)
            gap = route_gap(routes)
            rows.append(Row(index, q, "perp_routes", gap, config.route_tol,
                            gap <= config.route_tol,
                            {k: render(v) for k, v in routes.items()}))
        except SliceCalcError as exc:
            skip_rest(exc, ["perp_routes"])
        done.add("perp_routes")

    if "slice_criterion.angle" in checks:
        sf = slice_form(q)
        try:
            (sc,) = slice_criterion_check(entry.slice_parts, [(sf.t, sf.r)], config.step,
                                   seed=config.seed + index, tol_cr=config.tol,
                                   tol_routes=config.route_tol)
            rows.append(Row(index, q, "slice_criterion.angle", sc.angle_gap, sc.angle_allowed,
                            sc.angle_gap <= sc.angle_allowed))
            rows.append(Row(index, q, "slice_criterion.cr", sc.cr, sc.cr_allowed,
                            sc.cr <= sc.cr_allowed))
            rows.append(Row(index, q, "slice_criterion.routes", sc.route_gap, sc.route_allowed,
                            sc.route_gap <= sc.route_allowed,
                            {"v_over_r": render(sc.c_from_v), "fueter": render(sc.c_fueter),
                             "quotient": render(sc.c_quotient)}))
        except SliceCalcError as exc:
            skip_rest(exc, ["slice_criterion.angle", "slice_criterion.cr", "slice_criterion.routes"])
    return rows, skips


def _diagnostics(entry: CatalogEntry, closed_values: list) -> dict:
    real = [c for c in closed_values if c.kind is PointKind.REAL]
    nonreal = [c for c in closed_values if c.kind is PointKind.NONREAL]
    out = {
        "lipschitz_A": lipschitz_estimate([c.point for c in real], [c.A for c in real]),
        "lipschitz_B": lipschitz_estimate([c.point for c in nonreal], [c.B for c in nonreal]),
        "lipschitz_C": lipschitz_estimate([c.point for c in nonreal], [c.C for c in nonreal]),
    }
    f = entry.function
    probe = Quaternion(0.5)
    if f.contains(probe) and f.contains(Quaternion(0.5, 0.1)):
        try:
            out["axis_gap"] = axis_gap(f, 0.5, I)
        except SliceCalcError as exc:
            out["axis_gap"] = _reason(exc)
    return out


def run_entry(entry: CatalogEntry, grid: GridSpec, points: Sequence[Quaternion],
              config: RunConfig) -> FunctionResult:
    rows: list[Row] = []
    skips: list[Skip] = []
    closed_values: list = []
    expected = 0
    for index, q in enumerate(points):
        expected += len(_checks_for(entry, q, grid.r_band))
        r, s = _point_rows(entry, index, q, grid, config, closed_values)
        rows.extend(r)
        skips.extend(s)
    result = FunctionResult(entry, rows, skips, len(points), expected,
                            _diagnostics(entry, closed_values))
    log.info("%s: %d rows, %d failed, %d skipped", entry.name, len(rows),
             len(result.failed), len(skips))
    return result


def run(catalog: Sequence[CatalogEntry], grid: GridSpec,
        config: RunConfig = RunConfig()) -> RunResult:
    """Run every applicable check; results come back in catalog then grid order."""
    points = grid.generate()
    return RunResult(config, grid, [run_entry(e, grid, points, config) for e in catalog])
