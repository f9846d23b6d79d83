"""Schwartz functions, tempered distributions and Sobolev norms on R.

Functions are finite expansions in Hermite functions scaled so that the
Fourier transform ``(F u)(xi) = int exp(-2 pi i x xi) u(x) dx`` is the
diagonal map ``a_n -> (-i)^n a_n``.
"""

from .distribution import (
    FiniteCoeffs,
    Oracle,
    TemperedDist,
    adjoint_map,
    apply,
    constant_one,
    delta,
    derivative_dist,
    embed_l2,
    embed_schwartz,
    fourier_dist,
    mul_poly_dist,
)
from .hermite import QuadratureRule, eval_hermite, gauss_rule, hermite_functions, project
from .lcs import BasisBall, BoundCertificate, finset_sup, in_ball, validate_certificate, vonN_bounded_diagnostic
from .schwartz import (
    SchwartzFn,
    SeminormIndex,
    add,
    basis,
    derivative,
    evaluate,
    fourier,
    gaussian,
    inner,
    inverse_fourier,
    l2_norm,
    mul_by_poly,
    mul_by_x,
    pairing,
    scale,
    seminorm,
    zero,
)
from .sobolev import (
    L2Elem,
    Multiplier,
    apply_multiplier,
    extend_by_density,
    fourier_l2,
    h_k_classical_norm,
    lambda_s,
    sobolev_norm,
)

__version__ = "0.1.0"
