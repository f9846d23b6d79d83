"""End-to-end acceptance checks, shared by ``tempered selftest`` and pytest.

Every check draws its data from a fixed seed and compares the library
against an oracle that does not go through the code path under test
(trapezoidal quadrature, finite differences, brute-force grids, closed
forms).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import distribution as dist
from . import lcs
from . import schwartz as sw
from . import sobolev as sob
from .hermite import hermite_functions

SEED = 20240917


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _rng(tag: int) -> np.random.Generator:
    return np.random.default_rng([SEED, tag])


def trapezoid_grid(half_width: float, step: float) -> tuple[np.ndarray, float]:
    n = int(round(2 * half_width / step))
    x = np.linspace(-half_width, half_width, n + 1)
    return x, x[1] - x[0]


def trapezoid_integral(values: np.ndarray, dx: float, axis: int = -1):
    """Trapezoid rule; spectrally accurate for rapidly decaying smooth integrands."""
    return np.trapezoid(values, dx=dx, axis=axis)


def central_derivative(func: Callable, x0: float, h: float = 1e-3) -> complex:
    """Eighth-order central difference for ``func'(x0)``."""
    w = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
    pts = x0 + h * np.arange(-4, 5)
    return complex(np.dot(w, func(pts)) / h)


# individual criteria ---------------------------------------------------------

def check_fourier_eigenstructure() -> tuple[bool, str]:
    x, dx = trapezoid_grid(12.0, 1e-3)
    xi = np.linspace(-3.0, 3.0, 20)
    basis_x = hermite_functions(24, x)
    weights = np.full(x.size, dx)
    weights[[0, -1]] *= 0.5
    kernel = np.exp(-2j * np.pi * np.outer(xi, x))
    direct = (kernel * weights) @ basis_x.T
    expected = hermite_functions(24, xi).T * sw.fourier_phase(25)
    err = float(np.abs(direct - expected).max())
    return err <= 1e-8, f"max |quad F h_n - (-i)^n h_n| = {err:.2e} (tol 1e-8, n<=24)"


def check_plancherel() -> tuple[bool, str]:
    rng = _rng(2)
    worst = 0.0
    for _ in range(1000):
        f = sw.random_schwartz(rng, int(rng.integers(0, 257)), decay=0.0)
        worst = max(worst, abs(sw.l2_norm(sw.fourier(f)) - sw.l2_norm(f)))
    return worst <= 1e-13, f"max | |Ff| - |f| | = {worst:.2e} over 1000 inputs deg<=256 (tol 1e-13)"


def check_fourier_symmetry() -> tuple[bool, str]:
    rng = _rng(3)
    worst = 0.0
    for _ in range(1000):
        f = sw.random_schwartz(rng, int(rng.integers(0, 65)))
        g = sw.random_schwartz(rng, int(rng.integers(0, 65)))
        worst = max(worst, abs(sw.pairing(sw.fourier(f), g) - sw.pairing(f, sw.fourier(g))))
    f = sw.random_schwartz(rng, 8)
    g = sw.random_schwartz(rng, 8)
    x, dx = trapezoid_grid(8.0, 1e-2)
    kernel = np.exp(-2j * np.pi * np.outer(x, x))  # rows: xi, cols: x
    inner_x = trapezoid_integral(kernel * f(x)[None, :], dx)  # (F f)(xi)
    double = complex(trapezoid_integral(inner_x * g(x), dx))
    quad_err = abs(double - sw.pairing(sw.fourier(f), g))
    ok = worst <= 1e-13 and quad_err <= 1e-7
    return ok, (f"max |<Ff,g>-<f,Fg>| = {worst:.2e} (tol 1e-13); "
                f"double-integral check {quad_err:.2e} (tol 1e-7)")


def _random_dist(rng: np.random.Generator, i: int) -> dist.TemperedDist:
    kind = i % 4
    if kind == 0:
        return dist.delta()
    if kind == 1:
        return dist.constant_one()
    return dist.FiniteCoeffs(sw.random_schwartz(rng, int(rng.integers(0, 33))).coeffs)


def check_duality() -> tuple[bool, str]:
    rng = _rng(4)
    worst = {"fourier": 0.0, "derivative": 0.0, "mul_poly": 0.0}
    for i in range(500):
        u = _random_dist(rng, i)
        f = sw.random_schwartz(rng, int(rng.integers(0, 33)))
        poly = rng.standard_normal(int(rng.integers(1, 4)))
        cases = {
            "fourier": (dist.fourier_dist(u), sw.fourier(f)),
            "derivative": (dist.derivative_dist(u), sw.scale(-1.0, sw.derivative(f))),
            "mul_poly": (dist.mul_poly_dist(u, poly), sw.mul_by_poly(f, poly)),
        }
        for key, (Tu, Af) in cases.items():
            worst[key] = max(worst[key], abs(dist.apply(Tu, f) - dist.apply(u, Af)))
    nat = 0.0
    for _ in range(100):
        g = sw.random_schwartz(rng, int(rng.integers(0, 65)))
        lhs = dist.fourier_dist(dist.embed_schwartz(g)).vector
        rhs = dist.embed_schwartz(sw.fourier(g)).vector
        n = max(lhs.size, rhs.size)
        nat = max(nat, float(np.abs(np.pad(lhs, (0, n - lhs.size)) - np.pad(rhs, (0, n - rhs.size))).max()))
    ok = max(worst.values()) <= 1e-13 and nat <= 1e-13
    parts = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    return ok, f"max |T u(f) - u(A f)|: {parts}; F M_f vs M_Ff {nat:.1e} (tol 1e-13)"


def check_delta() -> tuple[bool, str]:
    rng = _rng(5)
    d, fd, dd = dist.delta(), dist.fourier_dist(dist.delta()), dist.derivative_dist(dist.delta())
    x, dx = trapezoid_grid(10.0, 2e-3)
    e0 = e1 = e2 = 0.0
    for _ in range(100):
        f = sw.random_schwartz(rng, int(rng.integers(0, 33)))
        e0 = max(e0, abs(dist.apply(d, f) - f(0.0)))
        e1 = max(e1, abs(dist.apply(fd, f) - complex(trapezoid_integral(f(x), dx))))
        e2 = max(e2, abs(dist.apply(dd, f) + central_derivative(f, 0.0)))
    ok = e0 <= 1e-12 and e1 <= 1e-8 and e2 <= 1e-8
    return ok, (f"delta(f)-f(0) {e0:.1e} (1e-12); F delta(f)-int f {e1:.1e} (1e-8); "
                f"delta'(f)+f'(0) {e2:.1e} (1e-8)")


def check_lambda_two() -> tuple[bool, str]:
    rng = _rng(6)
    worst_l2 = worst_lap = 0.0
    c = (2.0 * math.pi) ** -2
    lap = sob.laplacian_2pi()
    for _ in range(100):
        f = sw.random_schwartz(rng, int(rng.integers(0, 17)))
        f2 = sw.derivative(f, 2)
        target = f + sw.scale(-c, f2)
        got = sob.lambda_s(2.0, f)
        n = max(got.coeffs.size, target.coeffs.size)
        worst_l2 = max(worst_l2, np.linalg.norm(got.padded(n) - target.padded(n)) / sw.l2_norm(target))
        got = sob.apply_multiplier(lap, f).fn
        n = max(got.coeffs.size, f2.coeffs.size)
        worst_lap = max(worst_lap, np.linalg.norm(got.padded(n) + f2.padded(n)) / sw.l2_norm(f2))
    ok = worst_l2 <= 1e-8 and worst_lap <= 1e-8
    return ok, (f"rel |L_2 f - (f - (2pi)^-2 f'')| = {worst_l2:.1e}; "
                f"rel |m_lap f + f''| = {worst_lap:.1e} (tol 1e-8)")


def check_h0_is_l2() -> tuple[bool, str]:
    rng = _rng(7)
    worst = 0.0
    for _ in range(100):
        f = sw.random_schwartz(rng, int(rng.integers(0, 33)))
        worst = max(worst, abs(sob.sobolev_norm(f, 0.0) - sw.l2_norm(f)))
    return worst <= 1e-10, f"max |H^0 norm - L2 norm| = {worst:.1e} (tol 1e-10)"


def _gauss_cos(x):
    return np.exp(-x * x) * np.cos(x)


GAUSS_COS_NORM_SQ = 0.5 * math.sqrt(math.pi / 2.0) * (1.0 + math.exp(-0.5))


def density_tails(ns=(8, 16, 32, 64), reference_degree: int = 200) -> list[float]:
    """L2 distance from ``exp(-x^2) cos x`` to its degree-N Hermite truncation."""
    a = sw_project(_gauss_cos, reference_degree)
    return [float(np.linalg.norm(a[n + 1:])) for n in ns]


def sw_project(func, degree: int) -> np.ndarray:
    from .hermite import gauss_rule, project

    return project(func, degree, gauss_rule(2 * degree + 32))


def check_blt() -> tuple[bool, str]:
    rng = _rng(8)
    ok = True
    for _ in range(20):
        v = sob.L2Elem(sw.random_schwartz(rng, int(rng.integers(0, 65))).coeffs,
                       float(rng.uniform(0.0, 1e-3)))
        ext = sob.extend_by_density(sw.fourier, 1.0, v, tol=1e-2)
        ref = sob.fourier_l2(v)
        ok &= ext.coeffs.size == ref.coeffs.size and np.array_equal(ext.coeffs, ref.coeffs)
        ok &= ext.declared_tail == v.declared_tail
        doubled = sob.extend_by_density(lambda f: sw.scale(2.0, sw.fourier(f)), 2.0, v, tol=1e-2)
        ok &= doubled.declared_tail == 2.0 * v.declared_tail
    tails = density_tails()
    monotone = all(a > b for a, b in zip(tails, tails[1:]))
    a = sw_project(_gauss_cos, 200)
    norm_err = abs(float(np.vdot(a, a).real) - GAUSS_COS_NORM_SQ)
    ok = bool(ok and monotone and norm_err <= 1e-12)
    tail_txt = ", ".join(f"{t:.1e}" for t in tails)
    return ok, (f"extension matches fourier_l2 exactly, tail scales by M; "
                f"truncation tails N=8,16,32,64: {tail_txt}; |a|^2 vs closed form {norm_err:.1e}")


def check_certificates() -> tuple[bool, str]:
    ident = lcs.BoundCertificate({(k, n): ([(k, n)], 1.0) for k, n in [(0, 0), (1, 1), (2, 0)]})
    rep = lcs.validate_certificate(lambda f: f, ident, trials=200, max_degree=16, seed=SEED)
    ratios = list(rep.max_ratio.values())
    ident_ok = rep.clean and all(abs(r - 1.0) <= 1e-6 for r in ratios)
    bad = lcs.BoundCertificate({(0, 0): ([(0, 0)], 1.0)})
    rep_d = lcs.validate_certificate(sw.derivative, bad, trials=10_000, max_degree=16,
                                     seed=SEED, stop_on_violation=True)
    refuted = not rep_d.clean and rep_d.trials_run <= 10_000
    return ident_ok and refuted, (
        f"identity max_ratio {min(ratios):.12f}..{max(ratios):.12f} clean={rep.clean}; "
        f"derivative certificate refuted after {rep_d.trials_run} trial(s)"
    )


def brute_force_seminorm(f: sw.SchwartzFn, idx, points: int = 1_000_000, chunk: int = 100_000) -> float:
    idx = sw.SeminormIndex.of(idx)
    g = sw.derivative(f, idx.n)
    half = 1.5 * sw.seminorm_radius(f.degree, idx)
    xs = np.linspace(-half, half, points)
    best = 0.0
    for start in range(0, points, chunk):
        x = xs[start:start + chunk]
        vals = np.abs(g(x)) * np.abs(x) ** idx.k
        best = max(best, float(vals.max()))
    return best


def check_seminorm_estimator() -> tuple[bool, str]:
    rng = _rng(10)
    worst_over = 0.0
    worst_under = 0.0
    for _ in range(50):
        f = sw.random_schwartz(rng, int(rng.integers(0, 17)))
        idx = (int(rng.integers(0, 4)), int(rng.integers(0, 4)))
        est = sw.seminorm(f, idx)
        brute = brute_force_seminorm(f, idx)
        worst_over = max(worst_over, est / brute - 1.0)
        worst_under = max(worst_under, 1.0 - est / brute)
    axioms = 0.0
    for _ in range(50):
        f = sw.random_schwartz(rng, int(rng.integers(0, 17)))
        g = sw.random_schwartz(rng, int(rng.integers(0, 17)))
        c = complex(rng.standard_normal(), rng.standard_normal())
        idx = (int(rng.integers(0, 4)), int(rng.integers(0, 4)))
        sub = sw.seminorm(f + g, idx) - sw.seminorm(f, idx) - sw.seminorm(g, idx)
        hom = abs(sw.seminorm(c * f, idx) - abs(c) * sw.seminorm(f, idx)) / (1.0 + abs(c))
        axioms = max(axioms, sub, hom)
    ok = worst_over <= 0.01 and worst_under <= 1e-10 and axioms <= 1e-8
    return ok, (f"estimate/brute - 1 in [{-worst_under:.1e}, {worst_over:.1e}] (allowed [-1e-10, 0.01]); "
                f"axiom defect {axioms:.1e} (tol 1e-8)")


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]], float | None]] = [
    (1, "fourier eigenstructure", check_fourier_eigenstructure, 10.0),
    (2, "plancherel", check_plancherel, 5.0),
    (3, "fourier symmetry", check_fourier_symmetry, None),
    (4, "duality law", check_duality, None),
    (5, "delta identities", check_delta, None),
    (6, "lambda_2 identity", check_lambda_two, None),
    (7, "H^0 = L^2", check_h0_is_l2, None),
    (8, "BLT extension and density", check_blt, None),
    (9, "certificate falsifier", check_certificates, None),
    (10, "seminorm estimator", check_seminorm_estimator, None),
]

SELFTEST_BUDGET = 300.0


def run_criterion(number: int) -> CheckResult:
    for num, name, func, budget in CRITERIA:
        if num == number:
            start = time.perf_counter()
            passed, detail = func()
            elapsed = time.perf_counter() - start
            if budget is not None and elapsed > budget:
                passed = False
                detail += f"; runtime {elapsed:.1f}s exceeds {budget:.0f}s"
            return CheckResult(num, name, bool(passed), detail, elapsed)
    raise KeyError(number)


def run_all(emit: Callable[[str], None] | None = None) -> list[CheckResult]:
    results = []
    for num, *_ in CRITERIA:
        res = run_criterion(num)
        results.append(res)
        if emit is not None:
            emit(res.line())
    return results
