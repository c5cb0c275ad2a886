"""Second moments, covariance matrices, and the EPR / Mancini criteria.

All joint densities factorize in the rotated coordinates u, v (see the
distributions module), so every covariance entry reduces to the pair of
1-D second moments E[u^2], E[v^2]:

    var(xi1) = var(xi2) = (E[u^2] + E[v^2]) / 2,
    cov(xi1, xi2)       = (E[u^2] - E[v^2]) / 2.

Closed forms follow from the kernel shape constants: the sinc^2(.^2) weight
has second-moment ratio 3/4, giving the far-field variance
(1/4)(1 + 3/P^2); the sint^2(.^2) weight gives the near-field variance
(1/4)(sigma^2 + 4 A2 P^2 / A1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import DensitySpec, Params, conditional_of, make_density
from .quadrature import QuadTolerance, integrate_1d
from .specfun import shape_constants

__all__ = [
    "Cov2",
    "EprResult",
    "CondVariances",
    "covariance_numeric",
    "covariance_closed",
    "moments_1d",
    "conditional_variances",
    "gaussian_conditional_variances",
    "schmidt_number",
    "epr_product",
    "gaussian_epr_product",
    "mancini_product",
    "mancini_boundary",
    "find_epr_crossings",
]


@dataclass(frozen=True)
class Cov2:
    """2x2 covariance matrix of a symmetric bivariate density."""

    var1: float
    var2: float
    cov: float

    def __post_init__(self):
        if not (self.var1 > 0 and self.var2 > 0):
            raise ValueError("variances must be positive")
        if abs(self.cov) > math.sqrt(self.var1 * self.var2) + 1e-12:
            raise ValueError("covariance violates Cauchy-Schwarz")

    @property
    def matrix(self):
        return np.array([[self.var1, self.cov], [self.cov, self.var2]])

    @property
    def det(self):
        return self.var1 * self.var2 - self.cov * self.cov


@dataclass(frozen=True)
class EprResult:
    """Conditional-variance product with its two one-sided verdicts."""

    var_x_cond: float
    var_q_cond: float
    product: float
    entangled_flag: bool
    nongaussian_witness_flag: bool

    def __post_init__(self):
        if abs(self.product - self.var_x_cond * self.var_q_cond) > 1e-12:
            raise ValueError("product field inconsistent with its factors")


@dataclass(frozen=True)
class CondVariances:
    """Origin-slice conditional variances, raw and in the scale-free forms
    var_q * P^2 and var_x / P^2 used for parameter sweeps."""

    var_q_cond: float
    var_x_cond: float
    var_q_norm: float
    var_x_norm: float

    def __iter__(self):
        return iter((self.var_q_cond, self.var_x_cond))


def _factor_moments(spec2d, tol):
    """Central first/second moments of the u and v factors of a joint."""
    out = []
    for f, dom, z in ((spec2d.factor_plus, spec2d.dom_plus, spec2d.z_plus),
                      (spec2d.factor_minus, spec2d.dom_minus, spec2d.z_minus)):
        m1, _ = integrate_1d(lambda t: t * f(t), dom, tol)
        m2, _ = integrate_1d(lambda t: t * t * f(t), dom, tol)
        mean = m1 / z
        out.append((mean, m2 / z - mean * mean))
    return out


def covariance_numeric(spec2d, tol=None):
    """Covariance matrix of a joint density by quadrature."""
    if spec2d.form != "joint":
        raise ValueError("covariance_numeric expects a joint density")
    tol = tol or spec2d.tol
    (mu_u, s2_u), (mu_v, s2_v) = _factor_moments(spec2d, tol)
    var = 0.5 * (s2_u + s2_v)
    cov = 0.5 * (s2_u - s2_v)
    # The factor means feed the (zero) coordinate means; keep them observable.
    mean1 = (mu_u + mu_v) / math.sqrt(2.0)
    mean2 = (mu_u - mu_v) / math.sqrt(2.0)
    result = Cov2(var1=var, var2=var, cov=cov)
    object.__setattr__(result, "mean", (mean1, mean2))
    return result


def covariance_closed(plane, params, tol=None):
    """Closed-form covariance matrix of the spdc joint on the given plane."""
    p = params.p
    if plane == "far_field":
        var = 0.25 * (1.0 + 3.0 / (p * p))
        cov = 0.25 * (1.0 - 3.0 / (p * p))
    elif plane == "near_field":
        sc = shape_constants(tol)
        t2 = 4.0 * sc.a2 / sc.a1 * p * p
        s2 = params.sigma ** 2
        var = 0.25 * (s2 + t2)
        cov = 0.25 * (s2 - t2)
    else:
        raise ValueError(f"unknown plane {plane!r}")
    return Cov2(var1=var, var2=var, cov=cov)


def moments_1d(spec, tol=None):
    """(mean, variance) of a 1-D density spec.

    Marginals reuse their parent joint's factor moments (exact reduction);
    conditionals integrate their own pdf.
    """
    if spec.ndim != 1:
        raise ValueError("moments_1d expects a 1-D form")
    tol = tol or spec.tol
    if spec.form == "marginal" and spec.parent is not None:
        (mu_u, s2_u), (mu_v, s2_v) = _factor_moments(spec.parent, tol)
        mean = (mu_u - mu_v) / math.sqrt(2.0)
        var = 0.5 * (s2_u + s2_v)
        return mean, var
    dom = spec.domain()
    m1, _ = integrate_1d(lambda x: x * spec.pdf1(x), dom, tol,
                         seed_points=spec.seeds)
    m2, _ = integrate_1d(lambda x: x * x * spec.pdf1(x), dom, tol,
                         seed_points=spec.seeds)
    return m1, m2 - m1 * m1


def conditional_variances(params, tol=None, fixed_q=0.0, fixed_x=0.0):
    """Variances of the spdc conditional slices on both planes.

    Defaults to origin slices; other slice values are accepted because the
    conditional shape depends on them once P is large.
    """
    tol = tol or QuadTolerance()
    ff = make_density("far_field", "spdc", "joint", params, tol)
    nf = make_density("near_field", "spdc", "joint", params, tol)
    _, var_q = moments_1d(conditional_of(ff, fixed_q, tol), tol)
    _, var_x = moments_1d(conditional_of(nf, fixed_x, tol), tol)
    p2 = params.p ** 2
    return CondVariances(var_q_cond=var_q, var_x_cond=var_x,
                         var_q_norm=var_q * p2, var_x_norm=var_x / p2)


def gaussian_conditional_variances(alpha, params):
    """Origin-slice conditional variances of the Gaussian-alpha model."""
    if not (alpha > 0):
        raise ValueError("alpha must be positive")
    ap2 = alpha * params.p ** 2
    s2 = params.sigma ** 2
    var_q = 1.0 / (1.0 + ap2)
    var_x = s2 * ap2 / (s2 + ap2)
    return var_q, var_x


def schmidt_number(sigma_plus, delta_minus):
    """Effective mode count K of a double-Gaussian state with the given
    sum and difference widths: K = (1/4)(s/d + d/s)^2."""
    if not (sigma_plus > 0 and delta_minus > 0):
        raise ValueError("widths must be positive")
    r = sigma_plus / delta_minus
    return 0.25 * (r + 1.0 / r) ** 2


def _epr_from_variances(var_x, var_q):
    product = var_x * var_q
    return EprResult(var_x_cond=var_x, var_q_cond=var_q, product=product,
                     entangled_flag=product < 0.25,
                     nongaussian_witness_flag=product > 0.25)


def epr_product(params, tol=None):
    """EPR conditional-variance product of the spdc model at origin slices."""
    cv = conditional_variances(params, tol)
    return _epr_from_variances(cv.var_x_cond, cv.var_q_cond)


def gaussian_epr_product(alpha, params):
    """EPR product of the Gaussian-alpha model (analytic)."""
    var_q, var_x = gaussian_conditional_variances(alpha, params)
    return _epr_from_variances(var_x, var_q)


def mancini_product(params, model="spdc", alpha=None, tol=None):
    """Product of the sum-momentum and difference-position variances.

    Values below 1 certify non-separability.  For the spdc model the product
    is 4 (A2/A1) P^2; for the gaussian model it is alpha P^2.
    """
    p2 = params.p ** 2
    if model == "spdc":
        sc = shape_constants(tol)
        return 4.0 * (sc.a2 / sc.a1) * p2
    if model == "gaussian":
        if alpha is None or not (alpha > 0):
            raise ValueError("gaussian model requires alpha > 0")
        return alpha * p2
    raise ValueError(f"unknown model {model!r}")


def mancini_boundary(tol=None):
    """The P at which the spdc sum/difference product reaches 1."""
    sc = shape_constants(tol)
    return math.sqrt(sc.a1 / (4.0 * sc.a2))


def find_epr_crossings(tol=None):
    """The two P values where the spdc EPR product crosses 1/4.

    Bisection on the brackets [0.1, 1] and [1, 5] down to 1e-4 in P,
    then a single Newton step with a central finite difference.
    """
    tol = tol or QuadTolerance()

    def f(p):
        return epr_product(Params(p=p), tol).product - 0.25

    roots = []
    for lo, hi in ((0.1, 1.0), (1.0, 5.0)):
        flo, fhi = f(lo), f(hi)
        if flo * fhi >= 0:
            raise RuntimeError(f"EPR product does not change sign on "
                               f"[{lo}, {hi}]; upstream variance bug likely")
        while hi - lo > 1e-4:
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if flo * fm <= 0:
                hi, fhi = mid, fm
            else:
                lo, flo = mid, fm
        root = 0.5 * (lo + hi)
        h = 5e-4
        slope = (f(root + h) - f(root - h)) / (2.0 * h)
        if slope != 0.0:
            root -= f(root) / slope
        roots.append(root)
    return tuple(roots)
