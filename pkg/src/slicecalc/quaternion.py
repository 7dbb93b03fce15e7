"""Floating-point quaternion division algebra.

Quaternions are immutable 4-tuples ``(t, x, y, z)`` standing for
``t + x i + y j + z k``.  Real scalars mix freely with quaternions in
arithmetic.

    >>> I * J
    Quaternion(t=0.0, x=0.0, y=0.0, z=1.0)
    >>> J * I
    Quaternion(t=0.0, x=0.0, y=0.0, z=-1.0)
    >>> (1 + I) * (1 + J)
    Quaternion(t=1.0, x=1.0, y=1.0, z=1.0)
"""

from __future__ import annotations

import math
import re
from typing import NamedTuple, Union

from .errors import ZeroDivisorError

# squared norms below this are treated as zero divisors
ZERO_DIVISOR_NORM2 = 1e-300

DEFAULT_ABS_TOL = 1e-12
DEFAULT_REL_TOL = 1e-9

Real = Union[int, float]


class Quaternion(NamedTuple):
    t: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def coerce(cls, value: "Quaternion | Real") -> "Quaternion":
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, (int, float)):
            return cls(float(value), 0.0, 0.0, 0.0)
        raise TypeError(f"cannot interpret {value!r} as a quaternion")

    # -- parts --------------------------------------------------------
    @property
    def scalar(self) -> float:
        return self.t

    @property
    def vector(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    def is_real(self, tol: float = 0.0) -> bool:
        return math.hypot(self.x, self.y, self.z) <= tol

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.t + other.t, self.x + other.x,
                              self.y + other.y, self.z + other.z)
        if isinstance(other, (int, float)):
            return Quaternion(self.t + other, self.x, self.y, self.z)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.t - other.t, self.x - other.x,
                              self.y - other.y, self.z - other.z)
        if isinstance(other, (int, float)):
            return Quaternion(self.t - other, self.x, self.y, self.z)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(other - self.t, -self.x, -self.y, -self.z)
        return NotImplemented

    def __neg__(self):
        return Quaternion(-self.t, -self.x, -self.y, -self.z)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.t * other, self.x * other,
                              self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(other * self.t, other * self.x,
                              other * self.y, other * self.z)
        return NotImplemented

    def __truediv__(self, other):
        # real divisors only; quaternion quotients are side-ambiguous
        if isinstance(other, (int, float)):
            return Quaternion(self.t / other, self.x / other,
                              self.y / other, self.z / other)
        return NotImplemented

    def __abs__(self) -> float:
        return norm(self)

    # -- algebra ------------------------------------------------------
    def conj(self) -> "Quaternion":
        return Quaternion(self.t, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return norm(self)

    def norm2(self) -> float:
        return self.t * self.t + self.x * self.x + self.y * self.y + self.z * self.z

    def inverse(self) -> "Quaternion":
        return inverse(self)

    def __pow__(self, n: int) -> "Quaternion":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def dot(self, other: "Quaternion") -> float:
        return (self.t * other.t + self.x * other.x
                + self.y * other.y + self.z * other.z)

    def __str__(self) -> str:
        return render(self)


def mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a b``."""
    at, ax, ay, az = a
    bt, bx, by, bz = b
    return Quaternion(
        at * bt - ax * bx - ay * by - az * bz,
        at * bx + ax * bt + ay * bz - az * by,
        at * by - ax * bz + ay * bt + az * bx,
        at * bz + ax * by - ay * bx + az * bt,
    )


def conj(q: Quaternion) -> Quaternion:
    return Quaternion(q.t, -q.x, -q.y, -q.z)


def norm(q: Quaternion) -> float:
    # hypot scales internally, so tiny and huge components keep full precision
    return math.hypot(q.t, q.x, q.y, q.z)


def inverse(q: Quaternion) -> Quaternion:
    """``conj(q) / |q|^2``; raises :class:`ZeroDivisorError` near zero."""
    n2 = q.t * q.t + q.x * q.x + q.y * q.y + q.z * q.z
    if n2 < ZERO_DIVISOR_NORM2:
        raise ZeroDivisorError(f"quaternion {render(q)} has no inverse")
    return Quaternion(q.t / n2, -q.x / n2, -q.y / n2, -q.z / n2)


def isclose(a: Quaternion | Real, b: Quaternion | Real,
            abs_tol: float = DEFAULT_ABS_TOL,
            rel_tol: float = DEFAULT_REL_TOL) -> bool:
    a = Quaternion.coerce(a)
    b = Quaternion.coerce(b)
    return norm(a - b) <= abs_tol + rel_tol * max(norm(a), norm(b))


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
ZERO = Quaternion(0.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


# -- text form ----------------------------------------------------------

def _signed(value: float) -> str:
    value = float(value)
    sign = "-" if math.copysign(1.0, value) < 0 else "+"
    return f"{sign}{abs(value)!r}"


def render(q: Quaternion) -> str:
    """Render as ``a+bi+cj+dk`` with round-trip float digits."""
    return f"{float(q.t)!r}{_signed(q.x)}i{_signed(q.y)}j{_signed(q.z)}k"


_NUM = r"(?:\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|inf|nan)"
_QUAT_RE = re.compile(
    rf"^\s*([+-]?\s*{_NUM})"
    rf"\s*([+-])\s*({_NUM})\s*i"
    rf"\s*([+-])\s*({_NUM})\s*j"
    rf"\s*([+-])\s*({_NUM})\s*k\s*$"
)


def parse(text: str) -> Quaternion:
    """Inverse of :func:`render`; whitespace between tokens is allowed.

    >>> parse("1 - 2i + 0.5j + 3e-1k")
    Quaternion(t=1.0, x=-2.0, y=0.5, z=0.3)
    """
    m = _QUAT_RE.match(text)
    if m is None:
        raise ValueError(f"not a quaternion literal: {text!r}")
    t = float(m.group(1).replace(" ", ""))
    parts = []
    for sign, mag in ((m.group(2), m.group(3)), (m.group(4), m.group(5)),
                      (m.group(6), m.group(7))):
        value = float(mag)
        parts.append(-value if sign == "-" else value)
    return Quaternion(t, *parts)
