"""Differential entropy, negentropy, and the non-Gaussianity measures.

All entropies are in bits (log base 2).  Joint densities factorize in the
rotated coordinates u, v with unit Jacobian, so their entropy splits into

    H[p] = log2(Zu * Zv) + (1/ln 2) * ( -<ln g>_u - <ln k>_v ),

two 1-D integrals.  Negentropy is the entropy of the moment-matched normal
minus the density's own entropy: non-negative, zero exactly for Gaussians,
and invariant under affine changes of coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import (Params, conditional_of, gaussian_equivalent,
                            make_density, marginal_of)
from .moments import _factor_moments, moments_1d
from .quadrature import Domain, QuadTolerance, integrate_1d
from .specfun import _xlogx, shape_constants

__all__ = [
    "NegentropyValue",
    "NgReport",
    "differential_entropy",
    "gaussian_entropy_closed",
    "negentropy",
    "ng_report",
    "marginal_negentropy_limits",
    "conditional_gaussian_mismatch",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class NegentropyValue:
    value: float
    h_actual: float
    h_gaussian: float
    err_estimate: float

    def __post_init__(self):
        if abs(self.value - (self.h_gaussian - self.h_actual)) > 1e-12:
            raise ValueError("value field inconsistent with its terms")


@dataclass(frozen=True)
class NgReport:
    """Every negentropy at one P: joint, origin-conditional, and marginal
    forms for both planes, their pairwise sums, and the defect of the
    small-P decomposition ng_total ~ ng_cond + ng_marg."""

    p: float
    n_ff_joint: float
    n_nf_joint: float
    ng_total: float
    n_ff_cond: float
    n_nf_cond: float
    ng_cond: float
    n_ff_marg: float
    n_nf_marg: float
    ng_marg: float
    decomposition_residual: float


def _entropy_1d(pdf, dom, tol, seeds=()):
    """(-integral p ln p, err) for a 1-D density over ``dom`` (nats)."""
    v, e = integrate_1d(lambda x: _xlogx(pdf(x)), dom, tol, seed_points=seeds)
    return -v, e


def _entropy_with_err(spec, tol):
    """Differential entropy in bits with a propagated error estimate."""
    if spec.ndim == 2:
        zu, zv = spec.z_plus, spec.z_minus
        su, eu = _entropy_1d(lambda u: spec.factor_plus(u) / zu,
                             spec.dom_plus, tol)
        sv, ev = _entropy_1d(lambda v: spec.factor_minus(v) / zv,
                             spec.dom_minus, tol)
        # -<ln g>_u = S_u - ln Zu for the normalized factor; reassemble.
        h_nats = math.log(zu * zv) + (su - math.log(zu)) + (sv - math.log(zv))
        return h_nats / _LN2, (eu + ev) / _LN2
    h_nats, err = _entropy_1d(spec.pdf1, spec.domain(), tol, seeds=spec.seeds)
    return h_nats / _LN2, err / _LN2


def differential_entropy(spec, tol=None):
    """H = -integral p log2 p of a density spec, in bits."""
    tol = tol or spec.tol
    h, _ = _entropy_with_err(spec, tol)
    return h


def gaussian_entropy_closed(plane, params, tol=None):
    """Entropy (bits) of the covariance-matched Gaussian joint density."""
    p = params.p
    if plane == "far_field":
        return math.log2(math.pi * math.e * math.sqrt(3.0) / p)
    if plane == "near_field":
        sc = shape_constants(tol)
        return math.log2(2.0 * math.pi * math.e * params.sigma
                         * math.sqrt(sc.a2 / sc.a1) * p)
    raise ValueError(f"unknown plane {plane!r}")


def negentropy(spec, tol=None):
    """Negentropy of a density spec, with the matched Gaussian sharing the
    spec's own mean and (co)variance."""
    tol = tol or spec.tol
    h_actual, err = _entropy_with_err(spec, tol)
    if spec.ndim == 2:
        (_, s2_u), (_, s2_v) = _factor_moments(spec, tol)
        det = s2_u * s2_v   # = var^2 - cov^2 in the original coordinates
        h_gauss = math.log2(2.0 * math.pi * math.e * math.sqrt(det))
    else:
        _, var = moments_1d(spec, tol)
        h_gauss = 0.5 * math.log2(2.0 * math.pi * math.e * var)
    return NegentropyValue(value=h_gauss - h_actual, h_actual=h_actual,
                           h_gaussian=h_gauss, err_estimate=err)


def ng_report(params, tol=None):
    """All nine negentropies at one P (origin slices for the conditionals)."""
    tol = tol or QuadTolerance()
    ff = make_density("far_field", "spdc", "joint", params, tol)
    nf = make_density("near_field", "spdc", "joint", params, tol)

    n_ff_joint = negentropy(ff, tol).value
    n_nf_joint = negentropy(nf, tol).value
    n_ff_cond = negentropy(conditional_of(ff, 0.0, tol), tol).value
    n_nf_cond = negentropy(conditional_of(nf, 0.0, tol), tol).value
    n_ff_marg = negentropy(marginal_of(ff, tol), tol).value
    n_nf_marg = negentropy(marginal_of(nf, tol), tol).value

    ng_total = n_ff_joint + n_nf_joint
    ng_cond = n_ff_cond + n_nf_cond
    ng_marg = n_ff_marg + n_nf_marg
    return NgReport(p=params.p,
                    n_ff_joint=n_ff_joint, n_nf_joint=n_nf_joint,
                    ng_total=ng_total,
                    n_ff_cond=n_ff_cond, n_nf_cond=n_nf_cond, ng_cond=ng_cond,
                    n_ff_marg=n_ff_marg, n_nf_marg=n_nf_marg, ng_marg=ng_marg,
                    decomposition_residual=ng_total - ng_cond - ng_marg)


def marginal_negentropy_limits(tol=None):
    """Limiting marginal non-Gaussianities (small P, large P).

    In the small-P limit the far-field marginal degenerates to the pure
    sinc^2(.^2) shape while the near-field one becomes Gaussian; at large P
    the roles swap, with the near-field marginal tending to the pure
    sint^2(.^2) shape.  Both limits are scale-free, so each equals the
    negentropy of its unit-scale shape density.
    """
    tol = tol or QuadTolerance()
    sc = shape_constants(tol)

    # sinc^2(s^2) shape: zeroth moment by quadrature, second via the
    # memoized moment ratio, log-integral = 2 * i_ff by parity.
    from .specfun import sinc
    b1, _ = integrate_1d(lambda x: sinc(x * x) ** 2,
                         Domain.full_line(osc_scale=1.0), tol)
    h_sinc = math.log2(b1) - 2.0 * sc.i_ff / (b1 * _LN2)
    n_small = 0.5 * math.log2(2.0 * math.pi * math.e * sc.sinc_moment_ratio) - h_sinc

    h_sint = math.log2(sc.a1) - sc.i_nf / (sc.a1 * _LN2)
    n_large = 0.5 * math.log2(2.0 * math.pi * math.e * sc.a2 / sc.a1) - h_sint
    return n_small, n_large


def conditional_gaussian_mismatch(plane, params, tol=None):
    """Entropy excess H[g(xi1|0)] - H[p(xi1|0)] of the covariance-matched
    Gaussian joint's origin conditional over the true origin conditional.

    This is the quantity whose small-P vanishing makes the total
    non-Gaussianity split into conditional plus marginal parts; unlike a
    negentropy, the reference here is NOT moment-matched to the slice.
    """
    tol = tol or QuadTolerance()
    joint = make_density(plane, "spdc", "joint", params, tol)
    matched = gaussian_equivalent(joint, tol)
    h_g = differential_entropy(conditional_of(matched, 0.0, tol), tol)
    h_p = differential_entropy(conditional_of(joint, 0.0, tol), tol)
    return h_g - h_p
