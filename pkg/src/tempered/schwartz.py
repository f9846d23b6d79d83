"""Schwartz functions on R as finite Hermite expansions.

A :class:`SchwartzFn` stores coefficients ``a_n`` of ``f = sum a_n h_n`` in
the 2pi-adapted Hermite basis of :mod:`tempered.hermite`.  Derivative,
multiplication by ``x`` and the Fourier transform act on coefficients by
short recurrences, so these operations are exact up to rounding.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hermite import SQRT_2PI, hermite_functions, hermite_series

TRIM_TOL = 1e-14
EQ_TOL = 1e-12

SEMINORM_GRID = 4096
GOLDEN_REL_STEP = 1e-6

BASIS_TAG = "hermite-2pi"

# (-i)^n for n mod 4
_FOURIER_PHASE = np.array([1.0, -1.0j, -1.0, 1.0j])


def _canonical(coeffs) -> np.ndarray:
    a = np.array(coeffs, dtype=complex).ravel()
    if a.size == 0:
        return np.zeros(1, dtype=complex)
    mags = np.abs(a)
    peak = mags.max()
    if peak == 0.0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(mags > TRIM_TOL * peak)[0]
    return a[: keep[-1] + 1]


class SchwartzFn:
    """Finite Hermite expansion ``sum_n coeffs[n] * h_n(x)``.

    Instances are immutable.  Trailing coefficients below ``1e-14`` times
    the largest one are trimmed on construction.  ``==`` compares
    coefficientwise with tolerance ``1e-12 * (1 + max|a_n|)``.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs):
        a = _canonical(coeffs)
        a.setflags(write=False)
        self._coeffs = a

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> int:
        return self._coeffs.size - 1

    def is_zero(self) -> bool:
        return not np.any(self._coeffs)

    def padded(self, length: int) -> np.ndarray:
        """Coefficient vector zero-padded (or truncated) to ``length``."""
        out = np.zeros(length, dtype=complex)
        n = min(length, self._coeffs.size)
        out[:n] = self._coeffs[:n]
        return out

    def __call__(self, x):
        return evaluate(self, x)

    def __add__(self, other):
        if not isinstance(other, SchwartzFn):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, SchwartzFn):
            return NotImplemented
        return add(self, scale(-1.0, other))

    def __neg__(self):
        return scale(-1.0, self)

    def __mul__(self, c):
        if isinstance(c, SchwartzFn):
            return NotImplemented
        return scale(c, self)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SchwartzFn):
            return NotImplemented
        n = max(self._coeffs.size, other._coeffs.size)
        a, b = self.padded(n), other.padded(n)
        peak = max(np.abs(a).max(), np.abs(b).max())
        return bool(np.all(np.abs(a - b) <= EQ_TOL * (1.0 + peak)))

    __hash__ = None

    def __repr__(self):
        return f"SchwartzFn(degree={self.degree}, coeffs={np.array2string(self._coeffs, precision=4)})"

    def to_dict(self) -> dict:
        return {
            "basis": BASIS_TAG,
            "coeffs": [[float(c.real), float(c.imag)] for c in self._coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "SchwartzFn":
        return cls(coeffs_from_json(obj))

    @classmethod
    def from_json(cls, text: str) -> "SchwartzFn":
        return cls.from_dict(json.loads(text))


def coeffs_from_json(obj) -> np.ndarray:
    """Parse the ``{"basis": ..., "coeffs": [[re, im], ...]}`` payload."""
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object")
    if obj.get("basis") != BASIS_TAG:
        raise ValueError(f"unsupported basis {obj.get('basis')!r}; expected {BASIS_TAG!r}")
    raw = obj.get("coeffs")
    if not isinstance(raw, list) or not raw:
        raise ValueError("'coeffs' must be a non-empty list of [re, im] pairs")
    out = np.empty(len(raw), dtype=complex)
    for i, pair in enumerate(raw):
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
        ):
            raise ValueError(f"coeffs[{i}] is not a [re, im] pair of numbers")
        out[i] = complex(pair[0], pair[1])
    return out


@dataclass(frozen=True, order=True)
class SeminormIndex:
    """Index ``(k, n)`` of ``p_{k,n}(f) = sup |x|^k |f^(n)(x)|``."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 0 or self.n < 0:
            raise ValueError("seminorm indices must be non-negative")

    @classmethod
    def of(cls, idx) -> "SeminormIndex":
        if isinstance(idx, SeminormIndex):
            return idx
        k, n = idx
        return cls(int(k), int(n))

    def as_list(self) -> list[int]:
        return [self.k, self.n]


# constructors -----------------------------------------------------------

def zero() -> SchwartzFn:
    return SchwartzFn([0.0])


def basis(n: int) -> SchwartzFn:
    if n < 0:
        raise ValueError("basis index must be non-negative")
    a = np.zeros(n + 1, dtype=complex)
    a[n] = 1.0
    return SchwartzFn(a)


def gaussian() -> SchwartzFn:
    """``exp(-pi x^2) = 2^(-1/4) h_0``."""
    return SchwartzFn([2.0 ** -0.25])


def random_schwartz(rng: np.random.Generator, degree: int, decay: float = 2.0) -> SchwartzFn:
    """Complex Gaussian coefficients damped by ``(1 + n)^-decay``."""
    n = np.arange(degree + 1)
    z = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return SchwartzFn(z * (1.0 + n) ** -decay)


# pointwise -------------------------------------------------------------

def evaluate(f: SchwartzFn, x):
    """``f(x) = sum a_n h_n(x)``; accepts scalars or arrays."""
    vals = hermite_series(f.coeffs, x)
    return complex(vals) if np.ndim(vals) == 0 else vals


# linear structure ----------------------------------------------------------

def add(f: SchwartzFn, g: SchwartzFn) -> SchwartzFn:
    n = max(f.coeffs.size, g.coeffs.size)
    return SchwartzFn(f.padded(n) + g.padded(n))


def scale(c: complex, f: SchwartzFn) -> SchwartzFn:
    return SchwartzFn(complex(c) * f.coeffs)


# ladder operators --------------------------------------------------------

def derivative_coeffs(a: np.ndarray) -> np.ndarray:
    """Coefficients of ``f'``: ``h_n' = sqrt(2 pi) (sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1})``."""
    a = np.asarray(a, dtype=complex)
    n = np.arange(a.size)
    out = np.zeros(a.size + 1, dtype=complex)
    out[:-2] += SQRT_2PI * np.sqrt(n[1:] / 2.0) * a[1:]
    out[1:] -= SQRT_2PI * np.sqrt((n + 1) / 2.0) * a
    return out


def mul_by_x_coeffs(a: np.ndarray) -> np.ndarray:
    """Coefficients of ``x f``: ``x h_n = (sqrt(n/2) h_{n-1} + sqrt((n+1)/2) h_{n+1}) / sqrt(2 pi)``."""
    a = np.asarray(a, dtype=complex)
    n = np.arange(a.size)
    out = np.zeros(a.size + 1, dtype=complex)
    out[:-2] += np.sqrt(n[1:] / 2.0) * a[1:] / SQRT_2PI
    out[1:] += np.sqrt((n + 1) / 2.0) * a / SQRT_2PI
    return out


def derivative(f: SchwartzFn, order: int = 1) -> SchwartzFn:
    a = f.coeffs
    for _ in range(order):
        a = derivative_coeffs(a)
    return SchwartzFn(a)


def mul_by_x(f: SchwartzFn) -> SchwartzFn:
    return SchwartzFn(mul_by_x_coeffs(f.coeffs))


def mul_by_poly(f: SchwartzFn, poly: Sequence[float]) -> SchwartzFn:
    """``p(x) f(x)`` for ``p = poly[0] + poly[1] x + ...`` (Horner in x)."""
    p = np.asarray(poly, dtype=float).ravel()
    if p.size == 0:
        return zero()
    acc = p[-1] * f.coeffs
    for c in p[-2::-1]:
        acc = mul_by_x_coeffs(acc)
        acc[: f.coeffs.size] += c * f.coeffs
    return SchwartzFn(acc)


# Fourier ------------------------------------------------------------------

def fourier_phase(length: int) -> np.ndarray:
    return _FOURIER_PHASE[np.arange(length) % 4]


def fourier(f: SchwartzFn) -> SchwartzFn:
    """Fourier transform with kernel ``exp(-2 pi i x xi)``: ``a_n -> (-i)^n a_n``."""
    return SchwartzFn(fourier_phase(f.coeffs.size) * f.coeffs)


def inverse_fourier(f: SchwartzFn) -> SchwartzFn:
    return SchwartzFn(np.conj(fourier_phase(f.coeffs.size)) * f.coeffs)


# pairings -----------------------------------------------------------------

def pairing(f: SchwartzFn, g: SchwartzFn) -> complex:
    """Bilinear ``int f g dx``, no conjugation."""
    n = min(f.coeffs.size, g.coeffs.size)
    return complex(np.dot(f.coeffs[:n], g.coeffs[:n]))


def inner(f: SchwartzFn, g: SchwartzFn) -> complex:
    """``int conj(f) g dx``."""
    n = min(f.coeffs.size, g.coeffs.size)
    return complex(np.vdot(f.coeffs[:n], g.coeffs[:n]))


def l2_norm(f: SchwartzFn) -> float:
    return float(np.linalg.norm(f.coeffs))


# seminorms ----------------------------------------------------------------

def seminorm_radius(degree: int, idx: SeminormIndex) -> float:
    """Half-width of the search window for ``p_{k,n}``.

    The Hermite turning-point bound ``sqrt((2(N+n)+1)/pi)`` is widened by
    the weight exponent ``k`` so the envelope peak of ``|x|^k x^(N+n)
    exp(-pi x^2)`` stays inside.
    """
    return math.sqrt((2 * (degree + idx.n) + 1 + idx.k) / math.pi)


def _weighted_abs(coeffs: np.ndarray, k: int, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    vals = np.abs(hermite_series(coeffs, x))
    if k:
        vals = vals * np.abs(x) ** k
    return vals


def seminorm(f: SchwartzFn, idx, grid: int = SEMINORM_GRID) -> float:
    """Estimate ``p_{k,n}(f) = sup_x |x|^k |f^(n)(x)|``.

    Samples the weighted derivative on ``grid`` uniform points over
    ``[-R, R]`` (see :func:`seminorm_radius`) and polishes the best
    sample by golden-section search on its two neighbouring cells until
    the bracket has shrunk by ``1e-6``.  Every returned value is an actual
    function value, so the estimate never exceeds the true supremum by
    more than rounding.
    """
    idx = SeminormIndex.of(idx)
    if f.is_zero():
        return 0.0
    g = derivative(f, idx.n).coeffs
    radius = seminorm_radius(f.degree, idx)
    xs = np.linspace(-radius, radius, grid)
    vals = _weighted_abs(g, idx.k, xs)
    best = int(np.argmax(vals))
    lo = xs[max(best - 1, 0)]
    hi = xs[min(best + 1, grid - 1)]
    peak = _golden_max(lambda x: float(_weighted_abs(g, idx.k, x)), lo, hi)
    return float(max(vals[best], peak))


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(func, lo: float, hi: float) -> float:
    width0 = hi - lo
    best = max(func(lo), func(hi))
    if width0 <= 0.0:
        return best
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = func(c), func(d)
    while hi - lo > GOLDEN_REL_STEP * width0:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = func(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = func(d)
        best = max(best, fc, fd)
    return max(best, fc, fd)
