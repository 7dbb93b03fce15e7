"""Built-in functions with known S-derivability."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from ..diffops import Domain, PartialDerivatives, QFunction, pow_partials
from ..quaternion import I, J, K, ONE, ZERO, Quaternion, conj, mul
from ..series import PowerSeries, SliceComponents, exp_series, monomial
from ..slices import imag_norm, slice_form

CATALOG_SEED = 7
EXP_RADIUS = 4.0
MAX_POWER = 8


class Expectation(str, Enum):
    S_DERIVABLE = "SDerivable"
    NOT_S_DERIVABLE = "NotSDerivable"
    SLICE_ONLY = "SliceOnly"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    function: QFunction
    expectation: Expectation
    # unit imaginary of the only slice where a SliceOnly entry behaves
    slice_axis: Optional[Quaternion] = None
    notes: str = ""
    # slice parts for the criterion checks, when the function has them
    slice_parts: object = field(default=None, compare=False)

    def describe_expectation(self) -> str:
        if self.expectation is Expectation.SLICE_ONLY:
            return f"SliceOnly({self.slice_axis})"
        return self.expectation.value


def _iota(q: Quaternion) -> Quaternion:
    return slice_form(q).iota


def _iota_partials(q: Quaternion) -> PartialDerivatives:
    sf = slice_form(q)
    iota, r = sf.iota, sf.r
    # d(v/|v|)/dx_e = (e - <e, iota> iota) / r
    return PartialDerivatives(
        ZERO,
        (I - iota * iota.x) * (1.0 / r),
        (J - iota * iota.y) * (1.0 / r),
        (K - iota * iota.z) * (1.0 / r),
    )


def power_function(n: int) -> CatalogEntry:
    s = monomial(n)
    f = QFunction(
        name=f"pow{n}",
        evaluator=lambda q, n=n: q ** n,
        exact_partials=lambda q, n=n: pow_partials(n, q),
        slice_function=True,
        metadata={"series": s},
    )
    return CatalogEntry(f.name, f, Expectation.S_DERIVABLE,
                        notes=f"q^{n}", slice_parts=s)


def iota_function() -> CatalogEntry:
    f = QFunction(
        name="iota",
        evaluator=_iota,
        domain=Domain.NONREAL,
        exact_partials=_iota_partials,
        slice_function=True,
    )
    parts = SliceComponents(uv=lambda t, r: (ZERO, ONE), evaluate=_iota)
    return CatalogEntry("iota", f, Expectation.S_DERIVABLE,
                        notes="q -> iota(q), u = 0, v = 1, defined off the real axis",
                        slice_parts=parts)


def exp_function(order: int = 64, radius: float = EXP_RADIUS) -> CatalogEntry:
    s = exp_series(order, radius)
    return CatalogEntry("exp", s.as_qfunction("exp"), Expectation.S_DERIVABLE,
                        notes=f"sum q^k / k!, k <= {order}, ball of radius {radius}",
                        slice_parts=s)


def series_entry(name: str, s: PowerSeries) -> CatalogEntry:
    return CatalogEntry(name, s.as_qfunction(name), Expectation.S_DERIVABLE,
                        notes=f"user series, N = {s.order}, R = {s.radius}", slice_parts=s)


def _random_quaternion(rng: np.random.Generator, nonreal: bool = False) -> Quaternion:
    v = rng.uniform(-1.0, 1.0, size=4)
    q = Quaternion(*(float(c) for c in v))
    if nonreal and imag_norm(q) < 0.1:
        q = q + I
    return q


def builtin_catalog(seed: int = CATALOG_SEED) -> list[CatalogEntry]:
    rng = np.random.default_rng(seed)
    a, b = _random_quaternion(rng), _random_quaternion(rng)
    c = _random_quaternion(rng, nonreal=True)

    entries = [power_function(n) for n in range(MAX_POWER + 1)]
    entries.append(iota_function())
    entries.append(exp_function())

    linear = PowerSeries((b, a))
    entries.append(CatalogEntry("linear", linear.as_qfunction("linear"), Expectation.S_DERIVABLE,
                                notes=f"q a + b, a = {a}, b = {b}", slice_parts=linear))

    entries.append(CatalogEntry(
        "conj", QFunction("conj", conj), Expectation.NOT_S_DERIVABLE,
        notes="q -> conj(q)"))
    entries.append(CatalogEntry(
        "left_i", QFunction("left_i", lambda q: mul(I, q)), Expectation.SLICE_ONLY,
        slice_axis=I, notes="q -> i q; behaves only on the slice R + iR"))
    entries.append(CatalogEntry(
        "left_a", QFunction("left_a", lambda q, c=c: mul(c, q)), Expectation.NOT_S_DERIVABLE,
        notes=f"q -> a q, a = {c}"))
    return entries
