"""L2 as Hermite coefficient sequences, Fourier multipliers and H^s norms.

L2(R) is identified with l2 through the orthonormal Hermite basis, so the
Fourier transform is the unimodular diagonal ``(-i)^n`` and an isometry.
Fourier multipliers ``F^-1 m(xi) F`` with non-polynomial symbols are not
closed on finite expansions; they are applied by quadrature projection and
report an aliasing residual.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import schwartz as sw
from .hermite import gauss_rule, project
from .schwartz import SchwartzFn

ALIAS_STEP = 16
BOUND_CHECKS = 100
BOUND_SLACK = 1e-9


# L2 elements ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class L2Elem:
    """Truncated l2 sequence plus a bound on the norm of the untracked tail.

    The true L2 norm lies in ``[|coeffs|, sqrt(|coeffs|^2 + declared_tail^2)]``.
    """

    coeffs: np.ndarray
    declared_tail: float = 0.0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        tail = float(self.declared_tail)
        if not tail >= 0 or not math.isfinite(tail):
            raise ValueError("declared_tail must be finite and non-negative")
        object.__setattr__(self, "declared_tail", tail)

    def norm_bounds(self) -> tuple[float, float]:
        lo = float(np.linalg.norm(self.coeffs))
        return lo, math.hypot(lo, self.declared_tail)

    def to_dict(self) -> dict:
        d = {
            "basis": sw.BASIS_TAG,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }
        d["tail"] = self.declared_tail
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "L2Elem":
        tail = obj.get("tail", 0.0) if isinstance(obj, dict) else 0.0
        if not isinstance(tail, (int, float)) or isinstance(tail, bool):
            raise ValueError("'tail' must be a number")
        return cls(sw.coeffs_from_json(obj), tail)

    @classmethod
    def from_json(cls, text: str) -> "L2Elem":
        return cls.from_dict(json.loads(text))


def to_l2(f: SchwartzFn) -> L2Elem:
    return L2Elem(f.coeffs, 0.0)


def fourier_l2(v: L2Elem) -> L2Elem:
    """Fourier transform on L2; exact isometry, tail unchanged."""
    return L2Elem(sw.fourier_phase(v.coeffs.size) * v.coeffs, v.declared_tail)


def inverse_fourier_l2(v: L2Elem) -> L2Elem:
    return L2Elem(np.conj(sw.fourier_phase(v.coeffs.size)) * v.coeffs, v.declared_tail)


def extend_by_density(
    op: Callable[[SchwartzFn], SchwartzFn],
    bound: float,
    v: L2Elem,
    tol: float,
    seed: int = 0,
) -> L2Elem:
    """Apply a bounded operator known on finite expansions to an L2 element.

    ``op`` must satisfy ``|op f| <= bound * |f|``; this is checked on 100
    seeded random expansions of the same length as ``v``.  The finite part
    of ``v`` is mapped directly and the tail bound is propagated as
    ``bound * v.declared_tail``, which must not exceed ``tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not bound >= 0:
        raise ValueError("operator bound must be non-negative")
    rng = np.random.default_rng(seed)
    degree = v.coeffs.size - 1
    for i in range(BOUND_CHECKS):
        f = sw.random_schwartz(rng, degree, decay=2.0 if i % 2 else 0.0)
        lhs = sw.l2_norm(op(f))
        rhs = bound * sw.l2_norm(f)
        if lhs > rhs * (1.0 + BOUND_SLACK) + 1e-300:
            raise ValueError(
                f"operator bound violated: |op f| = {lhs:.6g} > {bound:g} * |f| = {rhs:.6g}"
            )
    out_tail = bound * v.declared_tail
    if out_tail > tol:
        raise ValueError(
            f"propagated tail {out_tail:.3g} exceeds tol {tol:.3g}; use a finer truncation"
        )
    return L2Elem(op(SchwartzFn(v.coeffs)).coeffs, out_tail)


# multipliers -----------------------------------------------------------------

@dataclass(frozen=True)
class Multiplier:
    """Symbol ``m(xi)`` with ``|m(xi)| <= K (1 + |xi|)^growth_degree``."""

    symbol: Callable[[np.ndarray], np.ndarray]
    growth_degree: int
    label: str

    def __call__(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return np.broadcast_to(np.asarray(self.symbol(xi), dtype=complex), xi.shape)

    def growth_constant(self) -> float:
        """Empirical ``K`` on a log-spaced grid up to ``|xi| = 1e3``.

        Raises ``ValueError`` if the ratio ``|m| / (1+|xi|)^d`` is still
        increasing over the last decade, i.e. the declared degree is too low.
        """
        mag = np.concatenate([[0.0], np.logspace(-3, 3, 601)])
        xi = np.concatenate([-mag[::-1], mag])
        ratio = np.abs(self(xi)) / (1.0 + np.abs(xi)) ** self.growth_degree
        if not np.all(np.isfinite(ratio)):
            raise ValueError(f"{self.label}: symbol is not finite on the check grid")
        last = np.abs(xi) >= 100.0
        lx, lr = np.log(np.abs(xi[last])), np.log(np.maximum(ratio[last], 1e-300))
        slope = np.polyfit(lx, lr, 1)[0] if np.ptp(lr) > 1e-12 else 0.0
        if slope > 0.05:
            raise ValueError(
                f"{self.label}: |m| grows faster than degree {self.growth_degree} (slope excess {slope:.3f})"
            )
        return float(ratio.max())


def japanese_bracket(s: float) -> Multiplier:
    s = float(s)
    return Multiplier(lambda xi: (1.0 + xi * xi) ** (0.5 * s),
                      max(math.ceil(s), 0), f"japanese_bracket:{s:g}")


def laplacian_2pi() -> Multiplier:
    """Symbol ``|2 pi xi|^2``, the multiplier of ``-d^2/dx^2``."""
    return Multiplier(lambda xi: (2.0 * math.pi * xi) ** 2, 2, "laplacian_2pi")


def one() -> Multiplier:
    return Multiplier(lambda xi: np.ones_like(xi), 0, "one")


def d_dx() -> Multiplier:
    """Symbol ``2 pi i xi``, the multiplier of ``d/dx``."""
    return Multiplier(lambda xi: 2j * math.pi * xi, 1, "d_dx")


def multiplier_from_label(label: str) -> Multiplier:
    """Look up ``"one"``, ``"laplacian_2pi"``, ``"d_dx"`` or ``"japanese_bracket:<s>"``."""
    if label == "one":
        return one()
    if label == "laplacian_2pi":
        return laplacian_2pi()
    if label == "d_dx":
        return d_dx()
    if label.startswith("japanese_bracket:"):
        try:
            s = float(label.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad order in multiplier label {label!r}") from None
        if not math.isfinite(s):
            raise ValueError(f"bad order in multiplier label {label!r}")
        return japanese_bracket(s)
    raise ValueError(f"unknown multiplier {label!r}")


class MultiplierResult(NamedTuple):
    fn: SchwartzFn
    aliasing_residual: float
    proj_degree: int


def default_proj_degree(f: SchwartzFn, m: Multiplier) -> int:
    return f.degree + 2 * m.growth_degree + 8


def _project_symbol_product(m: Multiplier, fhat: SchwartzFn, degree: int) -> np.ndarray:
    rule = gauss_rule(2 * degree + 32)
    return project(lambda xi: m(xi) * fhat(xi), degree, rule)


def apply_multiplier(m: Multiplier, f: SchwartzFn, proj_degree: int | None = None) -> MultiplierResult:
    """``F^-1 P[m * F f]`` with ``P`` the quadrature projection onto degree ``proj_degree``.

    The residual is the l2 distance between the projections at
    ``proj_degree`` and ``proj_degree + 16``.  For polynomial symbols of
    degree ``<= proj_degree - deg f`` the result is exact.
    """
    if proj_degree is None:
        proj_degree = default_proj_degree(f, m)
    if proj_degree < f.degree + m.growth_degree:
        raise ValueError(
            f"proj_degree {proj_degree} < degree(f) + growth_degree = {f.degree + m.growth_degree}"
        )
    fhat = sw.fourier(f)
    coarse = _project_symbol_product(m, fhat, proj_degree)
    fine = _project_symbol_product(m, fhat, proj_degree + ALIAS_STEP)
    residual = math.hypot(np.linalg.norm(fine[: coarse.size] - coarse),
                          np.linalg.norm(fine[coarse.size:]))
    return MultiplierResult(sw.inverse_fourier(SchwartzFn(coarse)), residual, proj_degree)


def lambda_s(s: float, f: SchwartzFn, proj_degree: int | None = None) -> SchwartzFn:
    """``Lambda_s f = F^-1 <xi>^s F f`` with ``<xi> = (1 + xi^2)^(1/2)``."""
    return apply_multiplier(japanese_bracket(s), f, proj_degree).fn


class SobolevEstimate(NamedTuple):
    norm: float
    aliasing_residual: float
    proj_degree: int


def sobolev_estimate(f: SchwartzFn, s: float, proj_degree: int | None = None) -> SobolevEstimate:
    res = apply_multiplier(japanese_bracket(s), f, proj_degree)
    return SobolevEstimate(sw.l2_norm(res.fn), res.aliasing_residual, res.proj_degree)


def sobolev_norm(f: SchwartzFn, s: float, proj_degree: int | None = None) -> float:
    """``|Lambda_s f|_{L2}``."""
    return sobolev_estimate(f, s, proj_degree).norm


def h_k_classical_norm(f: SchwartzFn, k: int) -> float:
    """``sqrt(sum_{j<=k} |f^(j)|_2^2)`` from exact ladder derivatives."""
    if k < 0:
        raise ValueError("k must be non-negative")
    total = 0.0
    a = f.coeffs
    for j in range(k + 1):
        if j:
            a = sw.derivative_coeffs(a)
        total += float(np.vdot(a, a).real)
    return math.sqrt(total)


def norm_equivalence_constants(k: int) -> tuple[float, float]:
    """Constants ``c1, c2`` with ``c1 |f|_{H^k classical} <= |Lambda_k f| <= c2 |f|_{H^k classical}``.

    Both squared norms are frequency integrals of ``|F f|^2`` against
    ``(1 + xi^2)^k`` and ``sum_j (2 pi xi)^(2j)``; the constants are the
    square roots of the extreme values of their ratio over ``xi^2 = y >= 0``.
    """
    y = np.concatenate([[0.0], np.logspace(-8, 8, 20001)])
    a = 4.0 * math.pi ** 2
    num = (1.0 + y) ** k
    den = sum((a * y) ** j for j in range(k + 1))
    ratio = np.append(num / den, a ** -k)
    return math.sqrt(ratio.min()), math.sqrt(ratio.max())
