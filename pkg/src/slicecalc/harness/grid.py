"""Sample-point grids.

A grid is written as ``;``-separated parts::

    box(lo,hi,n)          n^4 lattice on [lo, hi]^4, minus the r-band
    axis(lo,hi,n)         n real points
    ball(radius,n[,t,x,y,z])   n seeded uniform points in a 4-ball, minus the r-band
    point(<quaternion>)   one explicit point, e.g. point(1+0i+1j+0k)
    band(r)               width of the excluded band around the real axis

``default`` expands to the standard grid.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from ..quaternion import Quaternion, parse
from ..slices import R_BAND, imag_norm

DEFAULT_GRID = "box(-1.5,1.5,5);axis(-1.5,1.5,25);ball(2,100);band(1e-6)"

_PART_RE = re.compile(r"^\s*(box|axis|ball|point|band)\s*\((.*)\)\s*$")


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridPart:
    kind: str
    args: tuple


@dataclass(frozen=True)
class GridSpec:
    parts: tuple[GridPart, ...]
    r_band: float = R_BAND
    seed: int = 0
    text: str = field(default="", compare=False)

    def generate(self) -> list[Quaternion]:
        """All points, in part order; deterministic for a given seed."""
        rng = np.random.default_rng(self.seed)
        pts: list[Quaternion] = []
        for part in self.parts:
            if part.kind == "box":
                lo, hi, n = part.args
                ticks = [float(v) for v in np.linspace(lo, hi, n)]
                for c in itertools.product(ticks, repeat=4):
                    q = Quaternion(*c)
                    if imag_norm(q) >= self.r_band:
                        pts.append(q)
            elif part.kind == "axis":
                lo, hi, n = part.args
                pts.extend(Quaternion(float(t)) for t in np.linspace(lo, hi, n))
            elif part.kind == "ball":
                radius, n, center = part.args
                made = 0
                while made < n:
                    v = rng.normal(size=4)
                    v /= np.linalg.norm(v)
                    v *= radius * rng.uniform() ** 0.25
                    q = center + Quaternion(*(float(c) for c in v))
                    if imag_norm(q) >= self.r_band:
                        pts.append(q)
                        made += 1
            elif part.kind == "point":
                pts.append(part.args[0])
        return pts


def _floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise GridError(f"bad number in {text!r}") from exc


def parse_grid(text: str, seed: int = 0) -> GridSpec:
    """Parse a grid string; raises :class:`GridError` on malformed input."""
    source = text.strip()
    expanded = DEFAULT_GRID if source in ("", "default") else source
    parts: list[GridPart] = []
    r_band = R_BAND
    for chunk in expanded.split(";"):
        if not chunk.strip():
            continue
        m = _PART_RE.match(chunk)
        if m is None:
            raise GridError(f"unknown grid part {chunk.strip()!r}")
        kind, body = m.group(1), m.group(2)
        if kind == "point":
            try:
                parts.append(GridPart("point", (parse(body),)))
            except ValueError as exc:
                raise GridError(str(exc)) from exc
            continue
        vals = _floats(body)
        if kind == "band":
            if len(vals) != 1 or vals[0] < 0:
                raise GridError("band takes one nonnegative width")
            r_band = vals[0]
        elif kind in ("box", "axis"):
            if len(vals) != 3 or vals[2] < 1 or vals[2] != int(vals[2]) or vals[0] > vals[1]:
                raise GridError(f"{kind} takes (lo, hi, n) with lo <= hi and integer n >= 1")
            parts.append(GridPart(kind, (vals[0], vals[1], int(vals[2]))))
        elif kind == "ball":
            if len(vals) not in (2, 6) or vals[0] <= 0 or vals[1] < 0 or vals[1] != int(vals[1]):
                raise GridError("ball takes (radius, n) or (radius, n, t, x, y, z)")
            center = Quaternion(*vals[2:]) if len(vals) == 6 else Quaternion()
            parts.append(GridPart("ball", (vals[0], int(vals[1]), center)))
    return GridSpec(tuple(parts), r_band=r_band, seed=seed, text=expanded)
