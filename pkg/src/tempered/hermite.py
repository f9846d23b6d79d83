"""Hermite functions adapted to the ``exp(-2*pi*i*x*xi)`` Fourier convention.

The basis functions are

    h_n(x) = (2*pi)**(1/4) * psi_n(sqrt(2*pi) * x)

where ``psi_n`` are the classical L2-orthonormal Hermite functions
``H_n(t) exp(-t**2/2) / sqrt(2**n n! sqrt(pi))``.  With this scaling the
h_n are orthonormal in L2(R) and satisfy ``F h_n = (-i)**n h_n``.

Quadrature rules carry the weight ``exp(-2*pi*x**2)``, the square of the
basis Gaussian, so products of two expansions are integrated exactly.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import roots_hermite

SQRT_2PI = math.sqrt(2.0 * math.pi)
_H_PREFACTOR = (2.0 * math.pi) ** 0.25 * math.pi ** -0.25  # (2 pi)^{1/4} * pi^{-1/4}

# Rescale threshold for the weighted recurrence.
_BIG = 1e150
_LOG_BIG = math.log(_BIG)

MAX_RULE_ORDER = 4096


def hermite_functions(n_max: int, x) -> np.ndarray:
    """Evaluate h_0 .. h_{n_max} at the points ``x``.

    Parameters
    ----------
    n_max : int
        Highest degree, ``n_max >= 0``.
    x : array_like
        Evaluation points (any shape).

    Returns
    -------
    numpy.ndarray
        Array of shape ``(n_max + 1,) + shape(x)``.

    Notes
    -----
    The upward recurrence

        psi_{n+1} = sqrt(2/(n+1)) t psi_n - sqrt(n/(n+1)) psi_{n-1}

    is run on an unnormalized sequence starting from 1, with the running
    logarithmic scale tracked per point.  The Gaussian factor is applied
    only at the end as ``exp(log_scale - t**2/2)``, so nothing overflows
    and far-field values underflow cleanly to zero.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    x = np.asarray(x, dtype=float)
    t = SQRT_2PI * x
    half_t2 = 0.5 * t * t

    out = np.empty((n_max + 1,) + x.shape)
    log_scale = np.zeros(x.shape)
    prev = np.zeros(x.shape)
    cur = np.ones(x.shape)
    out[0] = np.exp(-half_t2)
    for n in range(n_max):
        nxt = math.sqrt(2.0 / (n + 1)) * t * cur - math.sqrt(n / (n + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _BIG
        if np.any(big):
            cur = np.where(big, cur / _BIG, cur)
            prev = np.where(big, prev / _BIG, prev)
            log_scale = log_scale + np.where(big, _LOG_BIG, 0.0)
        with np.errstate(under="ignore"):
            out[n + 1] = cur * np.exp(log_scale - half_t2)
    out *= _H_PREFACTOR
    return out


def eval_hermite(n: int, x):
    """Return h_n(x); scalar in, scalar out."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    vals = hermite_functions(n, x)[n]
    return float(vals) if np.ndim(vals) == 0 else vals


def hermite_series(coeffs, x) -> np.ndarray:
    """Evaluate ``sum_n coeffs[n] * h_n(x)``."""
    coeffs = np.asarray(coeffs)
    x = np.asarray(x, dtype=float)
    if coeffs.size == 0:
        return np.zeros(x.shape, dtype=coeffs.dtype)
    basis = hermite_functions(coeffs.size - 1, x)
    return np.tensordot(coeffs, basis, axes=(0, 0))


def hermite_at_zero(n_max: int) -> np.ndarray:
    """h_n(0) for n = 0..n_max, from the two-step recurrence at t = 0."""
    out = np.zeros(n_max + 1)
    out[0] = 2.0 ** 0.25
    for n in range(2, n_max + 1, 2):
        out[n] = -math.sqrt((n - 1) / n) * out[n - 2]
    return out


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss rule for the weight ``exp(-2*pi*x**2)`` on R.

    ``weights`` integrate ``g(x) * exp(-2*pi*x**2)`` from samples of ``g``.
    ``fn_weights`` integrate a full integrand ``F(x)`` from samples of ``F``
    (they equal ``weights * exp(2*pi*x**2)`` but are computed without the
    overflowing exponential).  At large orders the outermost ``weights``
    underflow to zero; ``fn_weights`` stay positive.
    """

    nodes: np.ndarray
    weights: np.ndarray
    fn_weights: np.ndarray

    @property
    def order(self) -> int:
        return self.nodes.size

    def integrate(self, g: Callable) -> complex:
        """Approximate ``int g(x) exp(-2 pi x^2) dx``."""
        return np.dot(self.weights, g(self.nodes))

    def integrate_full(self, func: Callable) -> complex:
        """Approximate ``int func(x) dx`` for ``func`` carrying its own decay."""
        return np.dot(self.fn_weights, func(self.nodes))


@functools.lru_cache(maxsize=64)
def gauss_rule(order: int) -> QuadratureRule:
    """Gauss-Hermite rule of the given order rescaled to ``exp(-2*pi*x**2)``.

    Exact for ``p(x) exp(-2 pi x^2)`` with ``deg p <= 2*order - 1``.
    """
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    if order > MAX_RULE_ORDER:
        raise ValueError(f"quadrature order {order} exceeds {MAX_RULE_ORDER}")
    t, w = roots_hermite(order)
    x = t / SQRT_2PI
    # Christoffel form of w_j * exp(t_j^2): 1 / sum_k psi_k(t_j)^2.
    psi = hermite_functions(order - 1, x) / (2.0 * math.pi) ** 0.25
    fn_w = 1.0 / np.einsum("ij,ij->j", psi, psi)
    nodes = np.ascontiguousarray(x)
    weights = np.ascontiguousarray(w / SQRT_2PI)
    fn_weights = fn_w / SQRT_2PI
    for arr in (nodes, weights, fn_weights):
        arr.setflags(write=False)
    return QuadratureRule(nodes, weights, fn_weights)


def default_rule_order(max_degree: int) -> int:
    return 2 * max_degree + 32


def project(sample: Callable, degree: int, rule: QuadratureRule | None = None) -> np.ndarray:
    """Hermite coefficients ``a_n = int f(x) h_n(x) dx`` for ``n <= degree``.

    ``sample`` is the function ``f`` itself, vectorized over numpy arrays.
    The result is exact whenever ``f`` lies in the span of
    ``h_0 .. h_M`` with ``M + degree <= 2 * rule.order - 1``; for other
    rapidly decaying ``f`` it is a quadrature approximation.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if rule is None:
        rule = gauss_rule(default_rule_order(degree))
    if rule.order < degree + 1:
        raise ValueError(
            f"rule order {rule.order} too small for degree {degree} (need >= {degree + 1})"
        )
    values = np.asarray(sample(rule.nodes))
    if values.shape == ():
        values = np.full(rule.order, values)
    basis = hermite_functions(degree, rule.nodes)
    return basis @ (rule.fn_weights * values)
