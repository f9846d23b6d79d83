import json
import math

import numpy as np
import pytest

from tempered import lcs
from tempered import schwartz as sw
from tempered.lcs import BasisBall, BoundCertificate
from tempered.schwartz import SeminormIndex

from conftest import random_fn

# Largest p_00(F f) / max(p_00, p_20)(f) seen in 10^4 trials (seed 0, degree <= 16).
FOURIER_EMPIRICAL_C = 1.7060056087116258


def test_finset_sup_examples(rng):
    assert lcs.finset_sup(sw.zero(), [(0, 0), (1, 1)]) == 0.0
    assert lcs.finset_sup(sw.gaussian(), [(0, 0)]) == pytest.approx(1.0, abs=1e-9)
    f = random_fn(rng)
    assert lcs.finset_sup(f, [(1, 2)]) == sw.seminorm(f, (1, 2))
    assert lcs.finset_sup(f, [(0, 0), (1, 2)]) == max(sw.seminorm(f, (0, 0)), sw.seminorm(f, (1, 2)))


def test_finset_sup_rejects_empty():
    with pytest.raises(ValueError):
        lcs.finset_sup(sw.gaussian(), [])


def test_finset_sup_is_a_seminorm(rng):
    idx = [(0, 0), (2, 1), (1, 3)]
    for _ in range(10):
        f, g = random_fn(rng, 12), random_fn(rng, 12)
        c = complex(rng.standard_normal(), rng.standard_normal()) * 3
        assert lcs.finset_sup(f + g, idx) <= lcs.finset_sup(f, idx) + lcs.finset_sup(g, idx) + 1e-8
        assert abs(lcs.finset_sup(c * f, idx) - abs(c) * lcs.finset_sup(f, idx)) <= 1e-8 * (1 + abs(c))


def test_ball_membership_examples():
    ball = BasisBall([(0, 0)], 0.5)
    assert lcs.in_ball(sw.zero(), BasisBall([(3, 3), (0, 1)], 1e-6))
    assert not lcs.in_ball(sw.gaussian(), ball)
    assert lcs.in_ball(sw.scale(0.1, sw.gaussian()), ball)


def test_ball_boundary_flag():
    value = lcs.finset_sup(sw.gaussian(), [(0, 0)])
    res = lcs.in_ball(sw.gaussian(), BasisBall([(0, 0)], value))
    assert not res.inside  # strict inequality
    assert res.near_boundary


def test_ball_validation():
    with pytest.raises(ValueError):
        BasisBall([(0, 0)], 0.0)
    with pytest.raises(ValueError):
        BasisBall([], 1.0)


def test_ball_nesting(rng):
    for _ in range(10):
        f = random_fn(rng, 10)
        r1, r2 = sorted(rng.uniform(0.05, 3.0, 2))
        small, big = [(0, 0)], [(0, 0), (1, 1)]
        if lcs.in_ball(f, BasisBall(small, r1)):
            assert lcs.in_ball(f, BasisBall(small, r2))
        if lcs.in_ball(f, BasisBall(big, r1)):
            assert lcs.in_ball(f, BasisBall(small, r1))


def test_certificate_json_round_trip():
    cert = BoundCertificate({(0, 0): ([(2, 0), (0, 0)], 2 * math.pi), (1, 1): ([(1, 1)], 1.0)})
    again = BoundCertificate.from_json(cert.to_json())
    assert again.to_dict() == cert.to_dict()
    assert json.loads(cert.to_json())["bounds"][0] == {"out": [0, 0], "in": [[0, 0], [2, 0]], "C": 2 * math.pi}


@pytest.mark.parametrize("payload", [
    "{}",
    '{"bounds": []}',
    '{"bounds": [{"out": [0, 0], "in": [], "C": 1}]}',
    '{"bounds": [{"out": [0, 0], "in": [[0, 0]], "C": -1}]}',
    '{"bounds": [{"out": [0], "in": [[0, 0]], "C": 1}]}',
])
def test_certificate_rejects_malformed(payload):
    with pytest.raises(ValueError):
        BoundCertificate.from_json(payload)


def test_identity_certificate():
    cert = BoundCertificate({(k, n): ([(k, n)], 1.0) for k in range(3) for n in range(3)})
    rep = lcs.validate_certificate(lambda f: f, cert, trials=20, seed=3)
    assert rep.clean
    assert all(r == pytest.approx(1.0, abs=1e-6) for r in rep.max_ratio.values())


@pytest.mark.parametrize("c", [0.5, 2.0, -3.0 + 4.0j])
def test_scaled_identity_ratio(c):
    cert = BoundCertificate({(1, 0): ([(1, 0)], abs(c))})
    rep = lcs.validate_certificate(lambda f: sw.scale(c, f), cert, trials=20, seed=1)
    assert rep.clean
    assert rep.max_ratio[SeminormIndex(1, 0)] == pytest.approx(abs(c), abs=1e-6)


def test_fourier_certificate_clean():
    cert = BoundCertificate({(0, 0): ([(2, 0), (0, 0)], 2 * math.pi)})
    rep = lcs.validate_certificate(sw.fourier, cert, trials=200, seed=0)
    assert rep.clean
    assert rep.max_ratio[SeminormIndex(0, 0)] <= FOURIER_EMPIRICAL_C
    tight = BoundCertificate({(0, 0): ([(2, 0), (0, 0)], 1.75)})
    assert lcs.validate_certificate(sw.fourier, tight, trials=200, seed=0).clean


def test_derivative_certificate_refuted():
    cert = BoundCertificate({(0, 0): ([(0, 0)], 1.0)})
    rep = lcs.validate_certificate(sw.derivative, cert, trials=10_000, seed=0, stop_on_violation=True)
    assert not rep.clean
    v = rep.violations[0]
    f = sw.SchwartzFn(v.coeffs)
    # the witness really violates the bound
    assert sw.seminorm(sw.derivative(f), (0, 0)) > sw.seminorm(f, (0, 0))


def test_certificate_report_is_reproducible():
    cert = BoundCertificate({(0, 0): ([(0, 0), (0, 1)], 1.0)})
    a = lcs.validate_certificate(sw.mul_by_x, cert, trials=15, seed=9)
    b = lcs.validate_certificate(sw.mul_by_x, cert, trials=15, seed=9)
    assert a.to_json() == b.to_json()


def test_certificate_rejects_nonlinear_op():
    cert = BoundCertificate({(0, 0): ([(0, 0)], 1.0)})
    with pytest.raises(ValueError, match="additive"):
        lcs.validate_certificate(lambda f: sw.SchwartzFn(np.abs(f.coeffs) ** 2), cert, trials=1)
    with pytest.raises(ValueError, match="homogeneous"):
        lcs.validate_certificate(lambda f: sw.SchwartzFn(f.coeffs.real), cert, trials=1)


def test_vonN_diagnostic():
    assert lcs.vonN_bounded_diagnostic([sw.zero()], [(0, 0)]) == 1e-9
    r = lcs.vonN_bounded_diagnostic([sw.gaussian()], [(0, 0)])
    assert r == pytest.approx(1.0, abs=1e-8)
    assert r > lcs.finset_sup(sw.gaussian(), [(0, 0)])
    with pytest.raises(ValueError):
        lcs.vonN_bounded_diagnostic([], [(0, 0)])


def test_vonN_diagnostic_scales(rng):
    samples = [random_fn(rng, 8) for _ in range(4)]
    idx = [(0, 0), (1, 1)]
    r1 = lcs.vonN_bounded_diagnostic(samples, idx)
    r2 = lcs.vonN_bounded_diagnostic([2 * f for f in samples], idx)
    assert r2 == pytest.approx(2 * r1, rel=1e-9)
