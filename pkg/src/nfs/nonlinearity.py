"""Nonlinearities g with two derivatives, the certified interval, and C2 norms.

The blessed representation is a polynomial g(z) = sum_{j >= 2} a_j z^j, for
which suprema over an interval are computed exactly from the critical points
(companion-matrix roots of the next derivative). Arbitrary callables with
supplied first and second derivatives are supported through dense sampling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import IntervalExceeded, NonconformingG
from .grid import RealField, check_same_grid

ORIGIN_TOL = 1e-14
INTERVAL_SLACK = 1e-9
MIN_SAMPLES_PER_UNIT = 10_000


@dataclass(frozen=True)
class IntervalI:
    """Symmetric interval [-a, a] with a = c_e (||u0||_H4 + 1)."""

    lower: float
    upper: float

    def __post_init__(self):
        if self.lower != -self.upper or not (self.upper > 0):
            raise ValueError(f"interval must be symmetric about 0: {self}")

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class C2Report:
    sup_g: float
    sup_g1: float
    sup_g2: float
    c2_norm: float
    big_m: float


class Nonlinearity:
    """g with evaluators for g, g', g''; vanishing value and slope at 0."""

    def __init__(
        self,
        coeffs: Optional[Sequence[float]] = None,
        funcs: Optional[tuple[Callable, Callable, Callable]] = None,
    ):
        if (coeffs is None) == (funcs is None):
            raise ValueError("provide exactly one of coeffs or funcs")
        if coeffs is not None:
            a = np.asarray(coeffs, dtype=np.float64)
            if a.size == 0 or not np.any(a):
                raise NonconformingG("polynomial must not be identically zero")
            # full ascending coefficient array, degrees 0..J
            full = np.concatenate([[0.0, 0.0], a])
            self.kind = "polynomial"
            self.coeffs = a
            self._asc = full
            self._asc1 = np.polynomial.polynomial.polyder(full)
            self._asc2 = np.polynomial.polynomial.polyder(full, 2)
            self._funcs = None
        else:
            g, g1, g2 = funcs
            for name, val in (("g(0)", g(0.0)), ("g'(0)", g1(0.0))):
                if abs(val) > ORIGIN_TOL:
                    raise NonconformingG(f"{name} = {val} violates the origin condition")
            self.kind = "callable"
            self.coeffs = None
            self._funcs = (g, g1, g2)

    def _eval_poly(self, asc: np.ndarray, z):
        return _kernels.poly_eval(asc[::-1], z)

    def g(self, z):
        if self.kind == "polynomial":
            return self._eval_poly(self._asc, z)
        return self._funcs[0](z)

    def g1(self, z):
        if self.kind == "polynomial":
            return self._eval_poly(self._asc1, z)
        return self._funcs[1](z)

    def g2(self, z):
        if self.kind == "polynomial":
            return self._eval_poly(self._asc2, z)
        return self._funcs[2](z)

    def minus(self, other: "Nonlinearity") -> "Nonlinearity":
        """Difference g - other; exact for two polynomials."""
        if self.kind == "polynomial" and other.kind == "polynomial":
            a, b = self.coeffs, other.coeffs
            m = max(a.size, b.size)
            diff = np.zeros(m)
            diff[: a.size] += a
            diff[: b.size] -= b
            if not np.any(diff):
                return _ZERO
            return Nonlinearity(coeffs=diff)
        return Nonlinearity(
            funcs=(
                lambda z: np.asarray(self.g(z)) - np.asarray(other.g(z)),
                lambda z: np.asarray(self.g1(z)) - np.asarray(other.g1(z)),
                lambda z: np.asarray(self.g2(z)) - np.asarray(other.g2(z)),
            )
        )


class _ZeroNonlinearity(Nonlinearity):
    """Identically zero difference; only produced by minus()."""

    def __init__(self):
        self.kind = "zero"
        self.coeffs = np.zeros(1)
        self._funcs = None

    def g(self, z):
        return np.zeros_like(np.asarray(z, dtype=np.float64))

    g1 = g
    g2 = g


_ZERO = _ZeroNonlinearity()


def build_interval(u0_h4: float, c_e: float) -> IntervalI:
    """Certified range of pointwise values u0 + v for v in the unit-rho ball."""
    upper = c_e * u0_h4 + c_e
    return IntervalI(lower=-upper, upper=upper)


def _poly_sup(asc: np.ndarray, asc_der: np.ndarray, interval: IntervalI) -> float:
    """Exact supremum of |polynomial| over the interval via critical points."""
    candidates = [interval.lower, interval.upper]
    der = np.trim_zeros(asc_der, "b")
    if der.size > 1:
        roots = np.polynomial.polynomial.polyroots(der)
        for r in roots:
            if abs(r.imag) < 1e-9 * max(1.0, abs(r.real)) and (
                interval.lower <= r.real <= interval.upper
            ):
                candidates.append(float(r.real))
    vals = np.polynomial.polynomial.polyval(np.asarray(candidates), asc)
    return float(np.max(np.abs(vals)))


def _sampled_sup(fn, interval: IntervalI, samples: int) -> float:
    z = np.linspace(interval.lower, interval.upper, samples)
    return float(np.max(np.abs(np.asarray(fn(z)))))


def c2_norm(
    g: Nonlinearity, interval: IntervalI, samples: int = 0, big_m: float | None = None
) -> C2Report:
    """Suprema of |g|, |g'|, |g''| over the interval and their sum.

    Exact for polynomials; callables are sampled densely (at least 1001 odd
    points, default density 10^4 per unit length).
    """
    if g.kind == "polynomial":
        if abs(g.g(0.0)) > ORIGIN_TOL or abs(g.g1(0.0)) > ORIGIN_TOL:
            raise NonconformingG("polynomial has nonzero value or slope at 0")
        asc3 = np.polynomial.polynomial.polyder(g._asc2)
        sup_g = _poly_sup(g._asc, g._asc1, interval)
        sup_g1 = _poly_sup(g._asc1, g._asc2, interval)
        sup_g2 = _poly_sup(g._asc2, asc3, interval)
    elif g.kind == "zero":
        sup_g = sup_g1 = sup_g2 = 0.0
    else:
        if samples <= 0:
            samples = max(1001, int(MIN_SAMPLES_PER_UNIT * interval.width) | 1)
        if samples < 1001 or samples % 2 == 0:
            raise ValueError("samples must be odd and >= 1001")
        sup_g = _sampled_sup(g.g, interval, samples)
        sup_g1 = _sampled_sup(g.g1, interval, samples)
        sup_g2 = _sampled_sup(g.g2, interval, samples)
    total = sup_g + sup_g1 + sup_g2
    m = total if big_m is None else big_m
    if m < total:
        raise ValueError(f"big_m = {m} below the computed C2 norm {total}")
    return C2Report(sup_g=sup_g, sup_g1=sup_g1, sup_g2=sup_g2, c2_norm=total, big_m=m)


def check_dm_membership(report: C2Report, big_m: float) -> bool:
    """True iff the C2 norm fits inside the closed ball of radius big_m."""
    return report.c2_norm <= big_m


def compose(
    g: Nonlinearity,
    u0: RealField,
    v: RealField,
    interval: IntervalI | None = None,
) -> RealField:
    """Pointwise G(x) = g(u0(x) + v(x)), with certified-interval enforcement.

    Values outside the interval by more than a tiny slack indicate that the
    iterate left the ball or that the embedding constant is loose; this is an
    error, never a silent clamp.
    """
    check_same_grid(u0, v)
    z = u0.values + v.values
    if interval is not None:
        lo, hi = np.min(z), np.max(z)
        if lo < interval.lower - INTERVAL_SLACK or hi > interval.upper + INTERVAL_SLACK:
            raise IntervalExceeded(
                f"pointwise range [{lo}, {hi}] exceeds certified interval "
                f"[{interval.lower}, {interval.upper}]"
            )
    return RealField(u0.spec, np.asarray(g.g(z)), role="composition")


def c2_distance(
    g1: Nonlinearity, g2: Nonlinearity, interval: IntervalI, samples: int = 0
) -> float:
    """C2 norm of g1 - g2 over the interval."""
    diff = g1.minus(g2)
    if diff.kind == "zero":
        return 0.0
    if diff.kind == "polynomial":
        asc3 = np.polynomial.polynomial.polyder(diff._asc2)
        return (
            _poly_sup(diff._asc, diff._asc1, interval)
            + _poly_sup(diff._asc1, diff._asc2, interval)
            + _poly_sup(diff._asc2, asc3, interval)
        )
    return c2_norm(diff, interval, samples=samples).c2_norm
