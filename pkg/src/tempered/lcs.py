"""Seminorm families, sup-balls and empirical continuity certificates.

A linear map ``A`` on the Schwartz space is continuous iff for every
output seminorm ``(k, n)`` there is a finite set ``s`` of input seminorms
and a constant ``C >= 0`` with

    p_{k,n}(A f) <= C * max_{i in s} p_i(f)      for all f.

:class:`BoundCertificate` stores such data and :func:`validate_certificate`
tries to falsify it on seeded random test functions.  A clean report is
evidence, never proof.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .schwartz import SchwartzFn, SeminormIndex, random_schwartz, seminorm

BOUND_SLACK = 1e-8
BOUNDARY_TOL = 1e-12
VONN_FLOOR = 1e-9
LINEARITY_TOL = 1e-9


def _indices(indices: Iterable) -> tuple[SeminormIndex, ...]:
    out = tuple(sorted({SeminormIndex.of(i) for i in indices}))
    if not out:
        raise ValueError("index set must be non-empty")
    return out


@dataclass(frozen=True)
class SeminormFamily:
    """A family ``index -> seminorm``; defaults to the Schwartz family."""

    description: str = "schwartz p_{k,n}(f) = sup |x|^k |f^(n)(x)|"
    evaluator: Callable[[SeminormIndex, SchwartzFn], float] = field(
        default=lambda idx, f: seminorm(f, idx), repr=False
    )

    def __call__(self, idx, f: SchwartzFn) -> float:
        return self.evaluator(SeminormIndex.of(idx), f)

    def sup(self, f: SchwartzFn, indices: Iterable) -> float:
        return max(self(i, f) for i in _indices(indices))


SCHWARTZ_FAMILY = SeminormFamily()


def finset_sup(f: SchwartzFn, indices: Iterable, family: SeminormFamily = SCHWARTZ_FAMILY) -> float:
    """``max_{i in indices} p_i(f)``; the index set must be non-empty."""
    return family.sup(f, indices)


@dataclass(frozen=True)
class BasisBall:
    """``{f : p_i(f) < radius for all i in indices}``."""

    indices: tuple[SeminormIndex, ...]
    radius: float

    def __init__(self, indices: Iterable, radius: float):
        if not radius > 0:
            raise ValueError("ball radius must be positive")
        object.__setattr__(self, "indices", _indices(indices))
        object.__setattr__(self, "radius", float(radius))


@dataclass(frozen=True)
class BallMembership:
    inside: bool
    value: float
    near_boundary: bool

    def __bool__(self):
        return self.inside


def in_ball(f: SchwartzFn, ball: BasisBall, family: SeminormFamily = SCHWARTZ_FAMILY) -> BallMembership:
    """Strict membership test; flags values within 1e-12 of the radius."""
    value = finset_sup(f, ball.indices, family)
    near = abs(value - ball.radius) <= BOUNDARY_TOL * max(1.0, ball.radius)
    return BallMembership(value < ball.radius, value, near)


@dataclass(frozen=True)
class Bound:
    inputs: tuple[SeminormIndex, ...]
    C: float


class BoundCertificate(Mapping):
    """Map ``output index -> Bound(input index set, C)``."""

    def __init__(self, bounds: Mapping):
        if not bounds:
            raise ValueError("certificate must contain at least one bound")
        data = {}
        for out, entry in bounds.items():
            if isinstance(entry, Bound):
                inputs, C = entry.inputs, entry.C
            else:
                inputs, C = entry
            C = float(C)
            if not C >= 0 or not math.isfinite(C):
                raise ValueError(f"certificate constant must be finite and >= 0, got {C}")
            data[SeminormIndex.of(out)] = Bound(_indices(inputs), C)
        self._bounds = dict(sorted(data.items()))

    def __getitem__(self, key):
        return self._bounds[SeminormIndex.of(key)]

    def __iter__(self):
        return iter(self._bounds)

    def __len__(self):
        return len(self._bounds)

    def to_dict(self) -> dict:
        return {
            "bounds": [
                {"out": out.as_list(), "in": [i.as_list() for i in b.inputs], "C": b.C}
                for out, b in self._bounds.items()
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "BoundCertificate":
        if not isinstance(obj, dict) or not isinstance(obj.get("bounds"), list):
            raise ValueError("certificate JSON needs a 'bounds' list")
        bounds = {}
        for entry in obj["bounds"]:
            try:
                out = SeminormIndex.of(entry["out"])
                inputs = [SeminormIndex.of(i) for i in entry["in"]]
                C = entry["C"]
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"malformed certificate entry {entry!r}") from exc
            if out in bounds:
                raise ValueError(f"duplicate output index {out.as_list()}")
            bounds[out] = (inputs, C)
        return cls(bounds)

    @classmethod
    def from_json(cls, text: str) -> "BoundCertificate":
        return cls.from_dict(json.loads(text))


def random_test_function(rng: np.random.Generator, max_degree: int) -> SchwartzFn:
    """Degree uniform on ``0..max_degree``, coefficients ``N(0,1)_C / (1+n)^2``."""
    degree = int(rng.integers(0, max_degree + 1))
    return random_schwartz(rng, degree, decay=2.0)


def check_linear(op: Callable[[SchwartzFn], SchwartzFn], rng: np.random.Generator,
                 max_degree: int = 12, pairs: int = 10) -> None:
    """Spot-check additivity and homogeneity; raise ``ValueError`` if either fails."""
    for _ in range(pairs):
        f = random_test_function(rng, max_degree)
        g = random_test_function(rng, max_degree)
        c = complex(rng.standard_normal(), rng.standard_normal())
        lhs, rhs = op(f + g), op(f) + op(g)
        scale_ = 1.0 + max(np.abs(lhs.coeffs).max(), np.abs(rhs.coeffs).max())
        n = max(lhs.coeffs.size, rhs.coeffs.size)
        if np.abs(lhs.padded(n) - rhs.padded(n)).max() > LINEARITY_TOL * scale_:
            raise ValueError("operator is not additive")
        lhs, rhs = op(c * f), c * op(f)
        scale_ = 1.0 + max(np.abs(lhs.coeffs).max(), np.abs(rhs.coeffs).max())
        n = max(lhs.coeffs.size, rhs.coeffs.size)
        if np.abs(lhs.padded(n) - rhs.padded(n)).max() > LINEARITY_TOL * scale_:
            raise ValueError("operator is not homogeneous")


@dataclass
class Violation:
    trial: int
    out: SeminormIndex
    lhs: float
    rhs: float
    coeffs: np.ndarray

    def to_dict(self) -> dict:
        return {
            "trial": self.trial,
            "out": self.out.as_list(),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.lhs / self.rhs if self.rhs > 0 else math.inf,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }


@dataclass
class CertificateReport:
    seed: int
    trials: int
    trials_run: int
    max_degree: int
    max_ratio: dict[SeminormIndex, float]
    violations: list[Violation]

    @property
    def clean(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "trials_run": self.trials_run,
            "max_degree": self.max_degree,
            "clean": self.clean,
            "max_ratio": [
                {"out": k.as_list(), "max_ratio": v} for k, v in sorted(self.max_ratio.items())
            ],
            "violations": [v.to_dict() for v in self.violations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def validate_certificate(
    op: Callable[[SchwartzFn], SchwartzFn],
    cert: BoundCertificate,
    trials: int = 1000,
    max_degree: int = 16,
    seed: int = 0,
    stop_on_violation: bool = False,
    family: SeminormFamily = SCHWARTZ_FAMILY,
) -> CertificateReport:
    """Try to falsify ``p_out(op f) <= C * max_{i in s} p_i(f)``.

    Each trial draws one random test function (see
    :func:`random_test_function`) and checks every bound in ``cert`` with
    relative slack ``1e-8``.  ``max_ratio`` records the largest observed
    ``p_out(op f) / max p_i(f)`` per output index.
    """
    if not len(cert):
        raise ValueError("empty certificate")
    rng = np.random.default_rng(seed)
    check_linear(op, np.random.default_rng([seed, 1]), max_degree=min(max_degree, 12))

    max_ratio = {out: 0.0 for out in cert}
    violations: list[Violation] = []
    run = 0
    for trial in range(trials):
        f = random_test_function(rng, max_degree)
        image = op(f)
        run += 1
        for out, bound in cert.items():
            lhs = family(out, image)
            base = family.sup(f, bound.inputs)
            if base > 0:
                max_ratio[out] = max(max_ratio[out], lhs / base)
            elif lhs > 0:
                max_ratio[out] = math.inf
            if lhs > bound.C * base * (1.0 + BOUND_SLACK):
                violations.append(Violation(trial, out, lhs, bound.C * base, f.coeffs.copy()))
        if violations and stop_on_violation:
            break
    return CertificateReport(seed, trials, run, max_degree, max_ratio, violations)


def vonN_bounded_diagnostic(samples: Iterable[SchwartzFn], indices: Iterable,
                            family: SeminormFamily = SCHWARTZ_FAMILY) -> float:
    """Witness radius ``r`` with ``max_{i} p_i(f) < r`` for every sample.

    Returns ``(1 + 1e-9) * max_f finset_sup(f, indices)``, floored at 1e-9
    so the radius stays positive.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("sample list must be non-empty")
    idx = _indices(indices)
    top = max(family.sup(f, idx) for f in samples)
    return max((1.0 + 1e-9) * top, VONN_FLOOR)
