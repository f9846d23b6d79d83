"""Tempered distributions as Hermite coefficient functionals.

A distribution ``u`` acts on ``f = sum a_n h_n`` by ``u(f) = sum c_n a_n``
with ``c_n = u(h_n)``.  Continuity on the Schwartz space is the polynomial
growth bound ``|c_n| <= C (1 + n)^p``.

Operators are extended by duality: a linear map ``A`` on Schwartz
functions induces ``A^T u = u o A``.  When ``A`` has banded coefficient
action the transpose can be computed column by column from ``A(h_n)``,
which keeps every application a finite sum.
"""

from __future__ import annotations

import functools
import json
import math
from typing import Callable, Sequence

import numpy as np

from . import schwartz as sw
from .hermite import hermite_at_zero
from .schwartz import SchwartzFn

GROWTH_CHECK_N = 4096
MAX_BANDWIDTH = 64
_PROBE_COLUMNS = tuple(range(17)) + (31, 32, 63, 64, 127, 128)

# sup_x |h_n(x)| <= (2 pi)^{1/4} pi^{-1/4} = 2^{1/4}
HERMITE_SUP = 2.0 ** 0.25


class TemperedDist:
    """Base class; subclasses supply ``coeff(n)`` or a finite vector."""

    label = "distribution"

    def coeff(self, n: int) -> complex:
        raise NotImplementedError

    def coeffs(self, length: int) -> np.ndarray:
        """First ``length`` coefficients ``u(h_0) .. u(h_{length-1})``."""
        return np.array([self.coeff(n) for n in range(length)], dtype=complex)

    def __call__(self, f: SchwartzFn) -> complex:
        return apply(self, f)

    def __add__(self, other):
        if not isinstance(other, TemperedDist):
            return NotImplemented
        return combine(1.0, self, 1.0, other)

    def __sub__(self, other):
        if not isinstance(other, TemperedDist):
            return NotImplemented
        return combine(1.0, self, -1.0, other)

    def __rmul__(self, c):
        return combine(complex(c), self, 0.0, ZERO)

    def __neg__(self):
        return combine(-1.0, self, 0.0, ZERO)


class FiniteCoeffs(TemperedDist):
    """Distribution with finitely many nonzero coefficients (image of an embedding)."""

    def __init__(self, coeffs, label: str = "finite"):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        self._c = c
        self.label = label

    @property
    def vector(self) -> np.ndarray:
        return self._c

    def coeff(self, n: int) -> complex:
        return complex(self._c[n]) if n < self._c.size else 0j

    def coeffs(self, length: int) -> np.ndarray:
        out = np.zeros(length, dtype=complex)
        m = min(length, self._c.size)
        out[:m] = self._c[:m]
        return out

    def __repr__(self):
        return f"FiniteCoeffs(len={self._c.size}, label={self.label!r})"

    def to_dict(self) -> dict:
        return {
            "kind": "distribution",
            "basis": sw.BASIS_TAG,
            "coeffs": [[float(c.real), float(c.imag)] for c in self._c],
        }


class Oracle(TemperedDist):
    """Coefficient oracle ``n -> c_n`` with declared growth ``C (1+n)^p``."""

    def __init__(self, coeff_at: Callable[[int], complex], growth_C: float, growth_p: float,
                 label: str, block: Callable[[int], np.ndarray] | None = None):
        if growth_C < 0 or growth_p < 0:
            raise ValueError("growth constants must be non-negative")
        self._coeff_at = coeff_at
        self._block = block
        self.growth_C = float(growth_C)
        self.growth_p = float(growth_p)
        self.label = label

    def coeff(self, n: int) -> complex:
        if n < 0:
            raise ValueError("coefficient index must be non-negative")
        return complex(self._coeff_at(n))

    def coeffs(self, length: int) -> np.ndarray:
        if self._block is not None:
            return np.asarray(self._block(length), dtype=complex)[:length]
        return super().coeffs(length)

    def growth_bound(self, n) -> np.ndarray:
        return self.growth_C * (1.0 + np.asarray(n, dtype=float)) ** self.growth_p

    def check_growth(self, n_max: int = GROWTH_CHECK_N) -> bool:
        """Verify the declared bound on ``c_0 .. c_{n_max}``."""
        c = self.coeffs(n_max + 1)
        bound = self.growth_bound(np.arange(n_max + 1))
        return bool(np.all(np.abs(c) <= bound * (1.0 + 1e-12)))

    def __repr__(self):
        return f"Oracle({self.label!r}, C={self.growth_C:g}, p={self.growth_p:g})"

    def to_dict(self) -> dict:
        if self.label not in BUILTIN_ORACLES:
            raise ValueError(f"oracle {self.label!r} is not a named built-in and cannot be serialized")
        return {"kind": "distribution", "oracle": self.label}


def apply(u: TemperedDist, f: SchwartzFn) -> complex:
    """``u(f) = sum_{n <= deg f} c_n a_n``."""
    a = f.coeffs
    return complex(np.dot(u.coeffs(a.size), a))


# constructors ----------------------------------------------------------

ZERO = FiniteCoeffs([0.0], label="zero")


def zero_dist() -> FiniteCoeffs:
    return ZERO


def embed_schwartz(g: SchwartzFn) -> FiniteCoeffs:
    """``M_g(f) = int g f dx`` (bilinear)."""
    return FiniteCoeffs(g.coeffs, label="M_g")


def embed_l2(v) -> FiniteCoeffs:
    """Embed an L2 coefficient vector (or anything with ``.coeffs``)."""
    vec = getattr(v, "coeffs", v)
    return FiniteCoeffs(vec, label="L2")


@functools.lru_cache(maxsize=8)
def _delta_block(length: int) -> np.ndarray:
    out = hermite_at_zero(max(length - 1, 0)).astype(complex)
    out.setflags(write=False)
    return out


def _delta_coeff(n: int) -> complex:
    return complex(_delta_block(_bucket(n))[n])


def _const_one_block(length: int) -> np.ndarray:
    return sw.fourier_phase(length) * _delta_block(length)


def _const_one_coeff(n: int) -> complex:
    return complex(_const_one_block(_bucket(n))[n])


def _bucket(n: int) -> int:
    # power-of-two cache buckets for single-coefficient lookups
    return max(64, 1 << (n + 1).bit_length())


def delta() -> Oracle:
    """``delta(f) = f(0)``; coefficients ``h_n(0)``."""
    return Oracle(_delta_coeff, HERMITE_SUP, 0.0, "delta", block=_delta_block)


def constant_one() -> Oracle:
    """``1(f) = int f dx``; coefficients ``int h_n = (-i)^n h_n(0)``."""
    return Oracle(_const_one_coeff, HERMITE_SUP, 0.0, "const_one", block=_const_one_block)


BUILTIN_ORACLES = {"delta": delta, "const_one": constant_one}


# linear combinations -------------------------------------------------------

def combine(a: complex, u: TemperedDist, b: complex, v: TemperedDist) -> TemperedDist:
    """``a u + b v``."""
    if isinstance(u, FiniteCoeffs) and isinstance(v, FiniteCoeffs):
        n = max(u.vector.size, v.vector.size)
        return FiniteCoeffs(a * u.coeffs(n) + b * v.coeffs(n), label="combination")
    Cu, pu = _growth_of(u)
    Cv, pv = _growth_of(v)
    return Oracle(
        lambda n: a * u.coeff(n) + b * v.coeff(n),
        abs(a) * Cu + abs(b) * Cv,
        max(pu, pv),
        f"({a})*{u.label}+({b})*{v.label}",
        block=lambda m: a * u.coeffs(m) + b * v.coeffs(m),
    )


def _growth_of(u: TemperedDist) -> tuple[float, float]:
    if isinstance(u, Oracle):
        return u.growth_C, u.growth_p
    if isinstance(u, FiniteCoeffs):
        return float(np.abs(u.vector).max()), 0.0
    raise TypeError(f"unsupported distribution {u!r}")


# duality -------------------------------------------------------------------

GrowthMap = Callable[[float, float], "tuple[float, float]"]


class DistOperator:
    """Transpose ``u -> u o A`` of a banded linear map ``A`` on Schwartz functions.

    Column ``n`` of ``A`` is ``A(h_n)``; the transposed coefficients are
    ``(A^T u)_n = sum_m u_m A(h_n)_m``.  ``growth`` maps a declared oracle
    bound ``(C, p)`` to a bound for the image; without it the operator
    only accepts :class:`FiniteCoeffs`.
    """

    def __init__(self, op: Callable[[SchwartzFn], SchwartzFn], label: str,
                 bandwidth: int, growth: GrowthMap | None = None):
        self.op = op
        self.label = label
        self.bandwidth = bandwidth
        self.growth = growth
        self._column = functools.lru_cache(maxsize=None)(self._column_uncached)

    def _column_uncached(self, n: int) -> tuple[int, np.ndarray]:
        col = self.op(sw.basis(n)).coeffs
        lo = max(n - self.bandwidth, 0)
        seg = np.array(col[lo : n + self.bandwidth + 1], dtype=complex)
        if np.any(col[:lo]) or np.any(col[n + self.bandwidth + 1 :]):
            raise ValueError(f"{self.label}: column {n} exceeds bandwidth {self.bandwidth}")
        seg.setflags(write=False)
        return lo, seg

    def column(self, n: int) -> tuple[int, np.ndarray]:
        return self._column(n)

    def __call__(self, u: TemperedDist) -> TemperedDist:
        if isinstance(u, FiniteCoeffs):
            L = u.vector.size
            padded = u.coeffs(L + 2 * self.bandwidth + 1)
            out = np.zeros(L + self.bandwidth, dtype=complex)
            for n in range(out.size):
                lo, seg = self.column(n)
                out[n] = np.dot(padded[lo : lo + seg.size], seg)
            return FiniteCoeffs(out, label=f"{self.label}^T({u.label})")
        if isinstance(u, Oracle):
            if self.growth is None:
                raise ValueError(f"{self.label}: no growth map, cannot act on oracle {u.label!r}")
            C, p = self.growth(u.growth_C, u.growth_p)
            w = self.bandwidth

            def coeff_at(n: int) -> complex:
                lo, seg = self.column(n)
                return complex(np.dot(u.coeffs(lo + seg.size)[lo:], seg))

            def block(m: int) -> np.ndarray:
                src = u.coeffs(m + 2 * w + 1)
                out = np.empty(m, dtype=complex)
                for n in range(m):
                    lo, seg = self.column(n)
                    out[n] = np.dot(src[lo : lo + seg.size], seg)
                return out

            return Oracle(coeff_at, C, p, f"{self.label}^T({u.label})", block=block)
        raise TypeError(f"unsupported distribution {u!r}")

    def then(self, other: "DistOperator") -> "DistOperator":
        """``other o self`` on distributions, i.e. the transpose of ``A_self o A_other``."""
        A, B = self.op, other.op
        growth = None
        if self.growth is not None and other.growth is not None:
            g1, g2 = self.growth, other.growth
            growth = lambda C, p: g2(*g1(C, p))  # noqa: E731
        return DistOperator(lambda f: A(B(f)), f"{other.label}.{self.label}",
                            self.bandwidth + other.bandwidth, growth)


def _probe_bandwidth(op: Callable[[SchwartzFn], SchwartzFn], label: str) -> int:
    widths = []
    for n in _PROBE_COLUMNS:
        col = op(sw.basis(n)).coeffs
        nz = np.nonzero(col)[0]
        widths.append(int(np.abs(nz - n).max()) if nz.size else 0)
    w = max(widths)
    if w > MAX_BANDWIDTH:
        raise ValueError(f"{label}: bandwidth {w} exceeds {MAX_BANDWIDTH}")
    tail = widths[-4:]
    if len(set(tail)) > 1 and tail[-1] > tail[0]:
        raise ValueError(f"{label}: bandwidth grows with degree ({widths}); not banded")
    return w


def adjoint_map(A: Callable[[SchwartzFn], SchwartzFn], label: str = "A",
                growth: GrowthMap | None = None, seed: int = 0) -> DistOperator:
    """Extend ``A`` to distributions by ``(A^T u)(f) = u(A f)``.

    ``A`` is spot-checked for linearity and its bandwidth is probed on a
    fixed set of basis columns.
    """
    from .lcs import check_linear

    check_linear(A, np.random.default_rng(seed))
    return DistOperator(A, label, _probe_bandwidth(A, label), growth)


# growth bookkeeping for the built-in band operators ------------------------

def _growth_x(C: float, p: float) -> tuple[float, float]:
    # |(x u)_n| <= (sqrt(n/2)|c_{n-1}| + sqrt((n+1)/2)|c_{n+1}|)/sqrt(2 pi)
    #          <= 2^p / sqrt(pi) * C (1+n)^{p+1/2}
    return C * 2.0 ** p / math.sqrt(math.pi), p + 0.5


def _growth_derivative(C: float, p: float) -> tuple[float, float]:
    # |(u')_n| <= sqrt(2 pi)(sqrt(n/2)|c_{n-1}| + sqrt((n+1)/2)|c_{n+1}|)
    #          <= 2^{p+1} sqrt(pi) C (1+n)^{p+1/2}
    return C * 2.0 ** (p + 1) * math.sqrt(math.pi), p + 0.5


def _growth_poly(poly: np.ndarray) -> GrowthMap:
    def growth(C: float, p: float) -> tuple[float, float]:
        total = 0.0
        Cj, pj = C, p
        for j, coef in enumerate(poly):
            if j:
                Cj, pj = _growth_x(Cj, pj)
            total += abs(coef) * Cj
        return total, p + 0.5 * (poly.size - 1)
    return growth


def _neg_derivative(f: SchwartzFn) -> SchwartzFn:
    return sw.SchwartzFn(-sw.derivative_coeffs(f.coeffs))


FOURIER_T = DistOperator(sw.fourier, "F", 0, lambda C, p: (C, p))
DERIVATIVE_T = DistOperator(_neg_derivative, "d/dx", 1, _growth_derivative)
IDENTITY_T = DistOperator(lambda f: f, "id", 0, lambda C, p: (C, p))


def fourier_dist(u: TemperedDist) -> TemperedDist:
    """``(F u)(f) = u(F f)``: coefficients ``c_n -> (-i)^n c_n``."""
    if isinstance(u, FiniteCoeffs):
        return FiniteCoeffs(sw.fourier_phase(u.vector.size) * u.vector, label=f"F({u.label})")
    return FOURIER_T(u)


def inverse_fourier_dist(u: TemperedDist) -> TemperedDist:
    if isinstance(u, FiniteCoeffs):
        return FiniteCoeffs(np.conj(sw.fourier_phase(u.vector.size)) * u.vector,
                            label=f"F^-1({u.label})")
    return DistOperator(sw.inverse_fourier, "F^-1", 0, lambda C, p: (C, p))(u)


def derivative_dist(u: TemperedDist) -> TemperedDist:
    """``u'(f) = -u(f')``."""
    return DERIVATIVE_T(u)


def mul_poly_dist(u: TemperedDist, poly: Sequence[float]) -> TemperedDist:
    """``(p u)(f) = u(p f)`` for a real polynomial ``p = poly[0] + poly[1] x + ...``."""
    p = np.asarray(poly, dtype=float).ravel()
    if p.size == 0:
        p = np.zeros(1)
    op = DistOperator(lambda f: sw.mul_by_poly(f, p), "mul[" + ",".join(f"{c:g}" for c in p) + "]",
                      max(p.size - 1, 0), _growth_poly(p))
    return op(u)


# JSON -----------------------------------------------------------------------

def dist_from_dict(obj: dict) -> TemperedDist:
    if not isinstance(obj, dict) or obj.get("kind") != "distribution":
        raise ValueError("expected an object with \"kind\": \"distribution\"")
    if "oracle" in obj:
        name = obj["oracle"]
        if name not in BUILTIN_ORACLES:
            raise ValueError(f"unknown oracle {name!r}; known: {sorted(BUILTIN_ORACLES)}")
        return BUILTIN_ORACLES[name]()
    return FiniteCoeffs(sw.coeffs_from_json(obj))


def dist_to_json(u: TemperedDist) -> str:
    return json.dumps(u.to_dict())


def dist_from_json(text: str) -> TemperedDist:
    return dist_from_dict(json.loads(text))
