"""Exceptions raised by the slice-calculus routines."""


class SliceCalcError(Exception):
    """Base class for all library errors."""


class ZeroDivisorError(SliceCalcError, ZeroDivisionError):
    """Inverse requested for a quaternion whose squared norm underflows."""


class DegenerateSlice(SliceCalcError):
    """The point is (numerically) real, so its imaginary unit is undefined."""


class SingularSubplane(SliceCalcError):
    """The point lies too close to R + kR, where the angle chart degenerates."""


class DomainExit(SliceCalcError):
    """A point or finite-difference probe left the function's domain."""


class OutsideRadius(DomainExit):
    """Series evaluation requested at or beyond the declared radius."""
