"""Two-photon probability densities in dimensionless coordinates.

Every density handled here factorizes in the rotated coordinates
u = (xi1 + xi2)/sqrt(2), v = (xi1 - xi2)/sqrt(2) into a Gaussian sum-factor
g(u) and a kernel difference-factor k(v):

* far field / spdc:       g(u) = exp(-u^2),        k(v) = sinc^2(P^2 v^2 / 2)
* near field / spdc:      g(u) = exp(-u^2/sigma^2), k(v) = sint^2(v^2 / (2 P^2))
* far field / gaussian:   same g,                  k(v) = exp(-alpha P^2 v^2)
* near field / gaussian:  same g,                  k(v) = exp(-v^2 / (alpha P^2))

which in the original coordinates reproduces the joint densities
exp(-(xi1+xi2)^2/2) * sinc^2(P^2 (xi1-xi2)^2/4) and so on.  The rotation is
orthogonal (unit Jacobian), so normalization and moments reduce to products
of 1-D integrals over u and v.

Marginals require a genuine convolution, m(xi2) = norm * sqrt(2) *
integral g(w) k(w - sqrt(2) xi2) dw, and sit inside entropy integrands, so
they are tabulated once on a uniform grid by FFT convolution (sampled finely
enough that the Gaussian spectrum kills aliasing from the oscillatory
kernel) and interpolated with a cubic spline.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.signal import fftconvolve

from .quadrature import Domain, QuadTolerance, integrate_1d
from .specfun import shape_constants, sinc, sint

__all__ = [
    "Physical",
    "Params",
    "DensitySpec",
    "make_density",
    "eval_density",
    "marginal_of",
    "conditional_of",
    "gaussian_equivalent",
    "DegenerateSliceError",
]

PLANES = ("far_field", "near_field")
MODELS = ("spdc", "gaussian")
FORMS = ("joint", "marginal", "conditional_at")


class DegenerateSliceError(ValueError):
    """Conditioning on a value where the marginal vanishes."""


@dataclass(frozen=True)
class Physical:
    """Physical provenance of the dimensionless parameters (SI units)."""

    crystal_length: float
    pump_wavenumber: float
    beam_waist: float
    plane_z: float = 0.0

    @property
    def diffraction_length(self):
        return self.pump_wavenumber * self.beam_waist ** 2 / 2.0


@dataclass(frozen=True)
class Params:
    """Dimensionless geometry: P = sqrt(L/(2 z0)), sigma^2 = 1 + (z/z0)^2."""

    p: float
    sigma: float = 1.0
    physical: Physical | None = None

    def __post_init__(self):
        if not (self.p > 0):
            raise ValueError("p must be positive")
        if not (self.sigma >= 1):
            raise ValueError("sigma must be >= 1")
        if self.physical is not None:
            z0 = self.physical.diffraction_length
            p_ref = math.sqrt(self.physical.crystal_length / (2.0 * z0))
            s_ref = math.sqrt(1.0 + (self.physical.plane_z / z0) ** 2)
            if abs(self.p - p_ref) > 1e-12 * max(1.0, p_ref) or \
               abs(self.sigma - s_ref) > 1e-12 * max(1.0, s_ref):
                raise ValueError("dimensionless parameters inconsistent with "
                                 "their physical provenance")

    @classmethod
    def from_physical(cls, crystal_length, pump_wavenumber, beam_waist, plane_z=0.0):
        phys = Physical(crystal_length, pump_wavenumber, beam_waist, plane_z)
        z0 = phys.diffraction_length
        p = math.sqrt(crystal_length / (2.0 * z0))
        sigma = math.sqrt(1.0 + (plane_z / z0) ** 2)
        return cls(p=p, sigma=sigma, physical=phys)


def _factors(plane, model, params, alpha):
    """Sum/difference factor callables, domains, and kernel feature scales.

    Returns (g, k, dom_g, dom_k, k_freq, k_width, g_width) where k_freq(v)
    is the local phase slope |d phase / dv| of the oscillatory kernel (0 for
    Gaussian models), k_width the central feature width of k, and g_width
    the 1/e width of g.
    """
    p, sigma = params.p, params.sigma

    if plane == "far_field":
        def g(u):
            return np.exp(-np.asarray(u, float) ** 2)
        g_width = 1.0
    else:
        def g(u):
            return np.exp(-(np.asarray(u, float) / sigma) ** 2)
        g_width = sigma
    dom_g = Domain.full_line()

    if model == "spdc":
        if plane == "far_field":
            c = 0.5 * p * p

            def k(v):
                return sinc(c * np.asarray(v, float) ** 2) ** 2

            def k_freq(v):
                return p * p * abs(v)

            k_width = math.sqrt(2.0) / p
            dom_k = Domain.full_line(osc_scale=c)
        else:
            c = 1.0 / (2.0 * p * p)

            def k(v):
                return sint(c * np.asarray(v, float) ** 2) ** 2

            def k_freq(v):
                return abs(v) / (p * p)

            k_width = math.sqrt(2.0) * p
            dom_k = Domain.full_line(osc_scale=c)
    else:
        a = float(alpha)
        if plane == "far_field":
            c = a * p * p
        else:
            c = 1.0 / (a * p * p)

        def k(v):
            return np.exp(-c * np.asarray(v, float) ** 2)

        def k_freq(v):
            return 0.0

        k_width = 1.0 / math.sqrt(c)
        dom_k = Domain.full_line()

    return g, k, dom_g, dom_k, k_freq, k_width, g_width


class DensitySpec:
    """A fully-specified 1-D or 2-D probability density.

    Treat instances as immutable after construction; the marginal table is
    the only internal cache and refines itself under a lock.
    """

    def __init__(self, plane, model, form, params, norm, *, alpha=None,
                 fixed=None, tol=None, pdf1=None, osc_scale=None, seeds=(),
                 core_extent=0.0, factor_plus=None, factor_minus=None,
                 dom_plus=None, dom_minus=None, parent=None):
        self.plane = plane
        self.model = model
        self.form = form
        self.params = params
        self.norm = norm
        self.alpha = alpha
        self.fixed = fixed
        self.tol = tol or QuadTolerance()
        self.ndim = 2 if form == "joint" else 1
        # Rotated-coordinate factors (joint forms only).
        self.factor_plus = factor_plus
        self.factor_minus = factor_minus
        self.dom_plus = dom_plus
        self.dom_minus = dom_minus
        # 1-D evaluation path (marginal/conditional forms only).
        self.pdf1 = pdf1
        self.osc_scale = osc_scale   # oscillation hint for integrals over the pdf
        self.seeds = tuple(seeds)    # known feature locations for the core region
        self.core_extent = core_extent  # smooth-bulk reach, beyond which the tail is pure kernel
        self.parent = parent         # originating joint, for 1-D forms

    def domain(self):
        """Integration domain suited to integrals of this density."""
        if self.ndim != 1:
            raise ValueError("domain() applies to 1-D forms; joints factorize")
        return Domain.full_line(osc_scale=self.osc_scale,
                                core_extent=self.core_extent)

    def __call__(self, *point):
        return eval_density(self, *point)


def make_density(plane, model, form, params, tol=None, *, alpha=None, fixed=0.0):
    """Construct a normalized density; normalization is always by quadrature."""
    if plane not in PLANES:
        raise ValueError(f"unknown plane {plane!r}")
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}")
    if model == "gaussian":
        if alpha is None or not (alpha > 0):
            raise ValueError("gaussian model requires alpha > 0")
    elif alpha is not None:
        raise ValueError("alpha applies to the gaussian model only")
    tol = tol or QuadTolerance()

    g, k, dom_g, dom_k, k_freq, k_width, g_width = _factors(plane, model, params, alpha)
    zg, eg = integrate_1d(g, dom_g, tol)
    zk, ek = integrate_1d(k, dom_k, tol)
    z = zg * zk
    if not (z > 0 and np.isfinite(z)):
        raise RuntimeError("normalization integral is not positive and finite")

    spec = DensitySpec(plane, model, "joint", params, 1.0 / z, alpha=alpha,
                       tol=tol, factor_plus=g, factor_minus=k,
                       dom_plus=dom_g, dom_minus=dom_k)
    spec.z_plus = zg
    spec.z_minus = zk
    spec.k_freq = k_freq
    spec.k_width = k_width
    spec.g_width = g_width

    if form == "joint":
        return spec
    if form == "marginal":
        return marginal_of(spec, tol)
    return conditional_of(spec, fixed, tol)


def eval_density(spec, *point):
    """Evaluate the density at a point (two coordinates for joints, one else)."""
    if len(point) == 1 and isinstance(point[0], (tuple, list)):
        point = tuple(point[0])
    if len(point) != spec.ndim:
        raise TypeError(f"{spec.form} density takes {spec.ndim} coordinate(s), "
                        f"got {len(point)}")
    if spec.ndim == 2:
        x1 = np.asarray(point[0], float)
        x2 = np.asarray(point[1], float)
        u = (x1 + x2) / math.sqrt(2.0)
        v = (x1 - x2) / math.sqrt(2.0)
        out = spec.norm * spec.factor_plus(u) * spec.factor_minus(v)
    else:
        out = spec.pdf1(np.asarray(point[0], float))
    out = np.asarray(out, float)
    return float(out) if out.ndim == 0 else out


class _MarginalTable:
    """Uniform-grid FFT-convolution table for a marginal, with spline lookup.

    The marginal is m(xi2) = norm*sqrt(2)*C(sqrt(2)*xi2) with
    C(z) = integral g(w) k(w - z) dw.  C is tabulated on a symmetric uniform
    z-grid; the step resolves the Gaussian, the kernel core, and the output
    ripple.  Two asymptotic devices keep the table bounded: the kernel's
    deep oscillatory tail (phase beyond ~300 rad) is replaced by its exact
    local average before convolving, and lookups past ``z_cap`` fall back to
    the smooth averaged envelope Zg * c_env / (osc * z^2)^2.  Both averages
    are exact to O(1/phase^2); the regions they serve carry ~1e-4 of the
    probability mass.
    """

    _PHASE_SMOOTH = 300.0

    def __init__(self, joint):
        self.joint = joint
        self._lock = threading.Lock()
        self._spline = None
        self._zmax = 0.0
        # Averaged squared-kernel envelope: sin^2 -> 1/2 for the sinc shape,
        # (2/pi) cos -> 2/pi^2 for the sint shape, each over phase^2.
        self.c_env = 0.5 if joint.plane == "far_field" else 2.0 / math.pi ** 2
        self.osc = joint.dom_minus.osc_scale
        self.z_cap = None   # set by marginal_of once the needed extent is known

    def _k_avg(self, v):
        y = self.osc * np.square(v)
        return self.c_env / (y * y)

    def _k_eff(self, v):
        v_c = math.sqrt(self._PHASE_SMOOTH / self.osc)
        out = np.where(np.abs(v) <= v_c, self.joint.factor_minus(v),
                       self._k_avg(np.where(np.abs(v) > v_c, v, v_c)))
        return out

    def _build(self, zmax):
        j = self.joint
        wg = 7.0 * j.g_width
        vmax = zmax + wg
        v_c = math.sqrt(self._PHASE_SMOOTH / self.osc)
        f_max = j.k_freq(min(vmax, v_c))
        h = math.pi / (18.0 * f_max + 33.0 / j.g_width + 33.0 / j.k_width + 18.0)
        m = int(math.ceil(wg / h))
        n = int(math.ceil(zmax / h)) + 2
        w = h * np.arange(-m, m + 1)
        gv = j.factor_plus(w)
        vk = h * np.arange(-(m + n), m + n + 1)
        kv = self._k_eff(vk)
        conv = fftconvolve(kv, gv, mode="valid") * h   # length 2n+1, z = j*h
        z = h * np.arange(-n, n + 1)
        self._spline = CubicSpline(z, conv, extrapolate=False)
        self._zmax = n * h

    def ensure(self, zmax):
        if self.z_cap is not None:
            zmax = min(zmax, self.z_cap)
        with self._lock:
            if self._spline is None or zmax > self._zmax:
                self._build(max(zmax * 1.05, 1.0))

    def c_of(self, z):
        z = np.asarray(z, float)
        need = float(np.max(np.abs(z))) if z.size else 0.0
        self.ensure(need)
        az = np.abs(z)
        inside = az <= self._zmax
        out = np.where(inside, self._spline(np.where(inside, z, 0.0)),
                       self.joint.z_plus * self._k_avg(np.where(inside, 1.0, z)))
        return np.clip(np.nan_to_num(out, nan=0.0), 0.0, None)


def marginal_of(spec2d, tol=None):
    """The 1-D marginal p(xi2) of a joint density, tabulated and cached."""
    if spec2d.form != "joint":
        raise ValueError("marginal_of expects a joint density")
    tol = tol or spec2d.tol
    j = spec2d
    rt2 = math.sqrt(2.0)

    if j.model == "gaussian":
        # Gaussian marginals of a Gaussian joint are exactly normal; the
        # convolution table would be pointless (and the algebraic-map
        # integration path probes coordinates far beyond any finite table).
        var_u = 0.5 * j.g_width ** 2
        var_v = 0.5 * j.k_width ** 2
        var = 0.5 * (var_u + var_v)

        def pdf(x):
            x = np.asarray(x, float)
            return np.exp(-x * x / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)

        return DensitySpec(j.plane, j.model, "marginal", j.params, 1.0,
                           alpha=j.alpha, tol=tol, pdf1=pdf, osc_scale=None,
                           seeds=(0.0,), parent=j)

    table = _MarginalTable(j)

    def pdf(x):
        return j.norm * rt2 * table.c_of(rt2 * np.asarray(x, float))

    osc = j.dom_minus.osc_scale * 2.0   # tail m ~ k(sqrt(2) xi2)
    sc = shape_constants(tol)
    if j.plane == "far_field":
        var_v = 1.5 / j.params.p ** 2
    else:
        var_v = 2.0 * j.params.p ** 2 * sc.a2 / sc.a1
    var = 0.5 * (0.5 * j.g_width ** 2 + var_v)
    extent = 11.0 * math.sqrt(var)
    table.z_cap = math.sqrt(2.0) * 2.0 * max(extent, math.sqrt(32.0 * math.pi / osc))
    out = DensitySpec(j.plane, j.model, "marginal", j.params, 1.0,
                      alpha=j.alpha, tol=tol, pdf1=pdf, osc_scale=osc,
                      seeds=(0.0,), core_extent=extent, parent=j)
    out._table = table

    # Cross-check the table against direct quadrature at a few points; a
    # mis-aligned convolution grid would corrupt every downstream entropy.
    for x2 in (0.0, 0.7 * j.g_width):
        bulk = -x2 + j.g_width * math.sqrt(2.0) * np.linspace(-10.0, 10.0, 21)
        direct, derr = integrate_1d(
            lambda x1, _x2=x2: eval_density(j, x1, np.full_like(np.asarray(x1, float), _x2)),
            Domain.full_line(osc_scale=j.dom_minus.osc_scale / 2.0),
            tol.scaled(100.0), seed_points=tuple(np.append(bulk, x2)))
        tab = float(pdf(x2))
        if abs(tab - direct) > 1e-6 * max(abs(direct), 1e-12) + 10.0 * derr + 1e-12:
            raise RuntimeError("marginal table disagrees with direct quadrature")
    return out


def conditional_of(spec2d, fixed_value=0.0, tol=None):
    """The normalized slice p(xi1 | xi2 = fixed_value) of a joint density."""
    if spec2d.form != "joint":
        raise ValueError("conditional_of expects a joint density")
    tol = tol or spec2d.tol
    j = spec2d
    c = float(fixed_value)
    if j.model == "spdc":
        osc = j.dom_minus.osc_scale / 2.0   # kernel phase (P^2/4)(xi1 - c)^2 etc.
    else:
        osc = None

    def slice_unnorm(x1):
        x1 = np.asarray(x1, float)
        u = (x1 + c) / math.sqrt(2.0)
        v = (x1 - c) / math.sqrt(2.0)
        return j.factor_plus(u) * j.factor_minus(v)

    # Seed the whole Gaussian bulk: at small P the oscillatory core spans
    # thousands of units and a width-one bump between panel nodes would be
    # invisible to the adaptive pass.
    gw = j.g_width * math.sqrt(2.0)
    seeds = tuple(np.concatenate([-c + gw * np.linspace(-10.0, 10.0, 21), [c]]))
    dom = Domain.full_line(osc_scale=osc)
    s, serr = integrate_1d(slice_unnorm, dom, tol, seed_points=seeds)
    if not (s > 0) or not np.isfinite(s) or s <= 10.0 * serr:
        raise DegenerateSliceError(
            f"marginal vanishes (slice weight {s!r}) at {fixed_value!r}")

    def pdf(x):
        return slice_unnorm(x) / s

    return DensitySpec(j.plane, j.model, "conditional_at", j.params, 1.0 / s,
                       alpha=j.alpha, fixed=c, tol=tol, pdf1=pdf,
                       osc_scale=osc, seeds=seeds, parent=j)


def gaussian_equivalent(spec2d, tol=None):
    """The Gaussian joint density sharing the mean vector and covariance.

    The sum-factor is common to both models, so matching reduces to matching
    the difference-factor variance: alpha = 1/3 in the far field (from the
    sinc-shape second-moment ratio 3/4) and alpha = 4*A2/A1 in the near
    field, independent of P in both cases.
    """
    if spec2d.ndim != 2:
        raise ValueError("gaussian_equivalent expects a joint density")
    tol = tol or spec2d.tol
    if spec2d.model == "gaussian":
        return make_density(spec2d.plane, "gaussian", "joint", spec2d.params,
                            tol, alpha=spec2d.alpha)
    sc = shape_constants(tol)
    if spec2d.plane == "far_field":
        alpha = 1.0 / 3.0
    else:
        alpha = 4.0 * sc.a2 / sc.a1
    return make_density(spec2d.plane, "gaussian", "joint", spec2d.params,
                        tol, alpha=alpha)
