"""Pointwise fractional-Laplacian evaluators and the antisymmetric barrier.

Two independent evaluation routes are provided: the full-space principal
value form, and the half-space form for antisymmetric fields (kernel
difference against the reflected point plus an exact zero-order term).
Closed forms cover the torsion profiles of balls (any solid-harmonic
multiplier), the two-ball antisymmetric barrier, and the stability
functions K, F, f, g that control the barrier outside the reflected ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .specfun import (
    DomainError,
    FracParams,
    a_hyp,
    c_frac,
    c_tilde,
    gamma_torsion,
    hyp2f1,
    sphere_area,
)
from .quadrature import (
    DEFAULT_SPEC,
    IntegralResult,
    QuadSpec,
    _adaptive_1d,
    _annulus_integral,
    _sphere_rule,
    integrate_pv,
)


class SingularLocusError(ValueError):
    """Evaluation requested on the measure-zero locus where the closed form
    blows up (the boundary of the reflected ball)."""


class ValidationError(ValueError):
    """A declared structural property (harmonicity, antisymmetry) failed a
    numerical spot check."""


class BoundarySentinel:
    """Typed stand-in for the -infinity boundary value of the torsion closed
    form; deliberately not a float so it cannot leak into arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf(boundary of the support ball)"


NEG_INF_BOUNDARY = BoundarySentinel()


# ---------------------------------------------------------------------------
# fields


@dataclass
class ScalarField:
    """Evaluable function on R^n with symmetry metadata.

    ``f`` is vectorized: it maps an (N,) array for dim 1, or an (N, dim)
    array otherwise, to an (N,) array of values.  ``support_radius`` is the
    radius of a ball (centred at the origin) containing the support, or None
    when the field merely decays; ``effective_radius`` then bounds the region
    outside which the field is numerically negligible.
    """

    dim: int
    f: Callable
    antisymmetric: bool = False
    support_radius: float | None = None
    effective_radius: float | None = None
    smoothness_note: str = ""
    far_value: float = 0.0  # limit at infinity (nonzero for constants)

    def __call__(self, pts):
        return np.asarray(self.f(pts), dtype=float)

    def cutoff_radius(self) -> float:
        if self.support_radius is not None:
            return self.support_radius
        if self.effective_radius is not None:
            return self.effective_radius
        return 8.0

    def reflect_points(self, pts):
        pts = np.asarray(pts, dtype=float)
        out = pts.copy()
        if self.dim == 1:
            return -out
        out[..., 0] = -out[..., 0]
        return out

    def check_antisymmetry(self, rng_seed: int = 7, samples: int = 32, tol: float = 1e-12):
        """Spot-check u(x - 2 x_1 e_1) = -u(x) on seeded random points."""
        rng = np.random.default_rng(rng_seed)
        R = self.cutoff_radius()
        pts = rng.uniform(-R, R, size=(samples, self.dim))
        if self.dim == 1:
            pts = pts[:, 0]
        vals = self(pts) + self(self.reflect_points(pts))
        scale = 1.0 + np.max(np.abs(self(pts)))
        if np.max(np.abs(vals)) > tol * scale:
            raise ValidationError("field is not antisymmetric at sampled points")


def _as_eval_points(x, dim):
    x = np.asarray(x, dtype=float)
    if dim == 1:
        return float(np.ravel(x)[0])
    return x.reshape(dim)


class FracLapResult(NamedTuple):
    value: float
    err_estimate: float
    converged: bool
    evaluations: int

    def __float__(self):
        return self.value


def _kernel_pow(n: int, s: float) -> float:
    return n + 2.0 * s


def _far_polar(f, x, r_lo, r_caps, spec, m_ang):
    """Integrate f over the polar shell r in (r_lo, cap(omega)) around x,
    with per-direction radial caps (array aligned with the sphere rule).
    The angular error is estimated from the half-density direction subset,
    reusing the same per-direction radial integrals."""
    n = x.size if x.ndim else 1
    omega, w = _sphere_rule(n, m_ang)
    per_dir = np.zeros(omega.shape[0])
    err, evals, ok = 0.0, 0, True
    xv = np.atleast_1d(x)
    for i in range(omega.shape[0]):
        hi = r_caps[i]
        if hi <= r_lo:
            continue

        def radial(r, _om=omega[i]):
            r = np.atleast_1d(r)
            pts = xv[None, :] + r[:, None] * _om[None, :]
            vals = np.asarray(f(pts[:, 0] if n == 1 else pts), dtype=float)
            return vals * r ** (n - 1)

        res = _adaptive_1d(radial, r_lo, hi, spec)
        per_dir[i] = res.value
        err += abs(w[i]) * res.err_estimate
        evals += res.evaluations
        ok = ok and res.converged
    total = float(w @ per_dir)
    if n >= 2 and omega.shape[0] >= 8:
        half = 2.0 * float(w[::2] @ per_dir[::2])
        err += abs(total - half)
    return IntegralResult(total, err, evals, ok)


def frac_lap_pv(
    u: ScalarField, x, p: FracParams, q: QuadSpec = DEFAULT_SPEC, *, m_ang: int = 64
) -> FracLapResult:
    """(-Delta)^s u(x) as the principal-value singular integral
    c_{n,s} PV int (u(x) - u(y)) |x-y|^{-n-2s} dy."""
    n, s = p.n, p.s
    if n != u.dim:
        raise DomainError(f"field dimension {u.dim} != parameter dimension {n}")
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    xs = xv[0] if n == 1 else xv
    ux = float(u(np.array([xs]) if n == 1 else xv[None, :])[0])
    kp = _kernel_pow(n, s)

    def integrand(pts):
        pts_arr = np.asarray(pts, dtype=float)
        if n == 1:
            d = np.abs(pts_arr - xv[0])
        else:
            d = np.sqrt(np.sum((pts_arr - xv[None, :]) ** 2, axis=-1))
        return (ux - u(pts_arr)) * d ** (-kp)

    # when x sits far outside the support the data occupies a narrow angular
    # cone; refine the angular rule in proportion to the subtended angle
    ru = u.cutoff_radius()
    xnorm = float(np.linalg.norm(xv))
    if n >= 2 and xnorm > ru:
        m_ang = int(m_ang * min(16, 2 * math.ceil(xnorm / ru) + 2))
    r0 = min(1.0, 0.5 * max(ru, 1.0))
    near = integrate_pv(integrand, xs, ("ball", xs, r0), q, m_ang=m_ang)
    rmax = xnorm + ru + 1.0
    omega, _ = _sphere_rule(n, m_ang)
    caps = np.full(omega.shape[0], rmax)
    far = _far_polar(integrand, xv, r0, caps, q, m_ang)
    # beyond rmax the field equals its limit at infinity: exact kernel tail
    tail = (ux - u.far_value) * sphere_area(n) * rmax ** (-2.0 * s) / (2.0 * s)
    tail_err = 0.0 if u.support_radius is not None else abs(tail) * 1e-3
    c = c_frac(n, s)
    return FracLapResult(
        c * (near.value + far.value + tail),
        c * (near.err_estimate + far.err_estimate + tail_err),
        near.converged and far.converged,
        near.evaluations + far.evaluations,
    )


def frac_lap_antisym(
    u: ScalarField, x, p: FracParams, q: QuadSpec = DEFAULT_SPEC, *, m_ang: int = 64
) -> FracLapResult:
    """(-Delta)^s u(x) for antisymmetric u via the half-space form: the
    kernel difference |x-y|^{-n-2s} - |x*-y|^{-n-2s} integrated over the
    half-space, plus the exact zero-order term (c_{1,s}/s) u(x) x_1^{-2s}."""
    n, s = p.n, p.s
    if n != u.dim:
        raise DomainError(f"field dimension {u.dim} != parameter dimension {n}")
    if not u.antisymmetric:
        raise ValidationError("frac_lap_antisym requires an antisymmetric field")
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    x1 = xv[0]
    if x1 <= 0.0:
        raise DomainError(f"evaluation point must have x_1 > 0, got x_1={x1}")
    xs = xv[0] if n == 1 else xv
    ux = float(u(np.array([xs]) if n == 1 else xv[None, :])[0])
    kp = _kernel_pow(n, s)
    xref = xv.copy()
    xref[0] = -xref[0]

    def kernel_diff(pts):
        pts_arr = np.asarray(pts, dtype=float)
        if n == 1:
            d1 = np.abs(pts_arr - xv[0])
            d2 = np.abs(pts_arr - xref[0])
        else:
            d1 = np.sqrt(np.sum((pts_arr - xv[None, :]) ** 2, axis=-1))
            d2 = np.sqrt(np.sum((pts_arr - xref[None, :]) ** 2, axis=-1))
        return d1 ** (-kp) - d2 ** (-kp)

    def integrand_near(pts):
        pts_arr = np.asarray(pts, dtype=float)
        return (ux - u(pts_arr)) * kernel_diff(pts_arr)

    def integrand_data(pts):
        pts_arr = np.asarray(pts, dtype=float)
        return -u(pts_arr) * kernel_diff(pts_arr)

    delta = 0.5 * x1
    near = integrate_pv(integrand_near, xs, ("ball", xs, delta), q, m_ang=m_ang)

    # exact mass of the kernel difference over the half-space minus B_delta(x):
    # int_{R^n_+ \ B_delta(x)} D dy
    #   = |S^{n-1}| delta^{-2s}/(2s) - 2 (c_tilde/c_{n,s}) x_1^{-2s}
    #     + int_{B_delta(x)} |x*-y|^{-n-2s} dy,
    # which removes every truncation tail from the u(x)-part of the integral.
    c = c_frac(n, s)
    ct = c_tilde(s)

    def refl_kernel(pts):
        pts_arr = np.asarray(pts, dtype=float)
        if n == 1:
            d2 = np.abs(pts_arr - xref[0])
        else:
            d2 = np.sqrt(np.sum((pts_arr - xref[None, :]) ** 2, axis=-1))
        return d2 ** (-kp)

    small = _annulus_integral(refl_kernel, xs, 1e-14 * delta, delta, n, q, m_ang)
    mass = (
        sphere_area(n) * delta ** (-2.0 * s) / (2.0 * s)
        - 2.0 * (ct / c) * x1 ** (-2.0 * s)
        + small.value
    )

    # data term over the (compact) intersection of the support with the
    # half-space, per-direction caps at the plane and the support sphere
    ru = u.cutoff_radius()
    xnorm = float(np.linalg.norm(xv))
    omega, _ = _sphere_rule(n, m_ang)
    om1 = omega[:, 0]
    xdotom = omega @ xv if n > 1 else omega[:, 0] * xv[0]
    disc = xdotom ** 2 + ru ** 2 - xnorm ** 2
    r_supp = np.where(disc > 0.0, -xdotom + np.sqrt(np.maximum(disc, 0.0)), delta)
    plane = np.where(om1 < 0.0, x1 / np.maximum(-om1, 1e-300), np.inf)
    caps = np.minimum(r_supp, plane)
    far = _far_polar(integrand_data, xv, delta, caps, q, m_ang)

    c1 = c_frac(1, s)
    zero_order = (c1 / s) * ux * x1 ** (-2.0 * s)
    return FracLapResult(
        c * (near.value + ux * mass + far.value) + zero_order,
        c * (near.err_estimate + abs(ux) * small.err_estimate + far.err_estimate),
        near.converged and far.converged and small.converged,
        near.evaluations + far.evaluations + small.evaluations,
    )


# ---------------------------------------------------------------------------
# closed forms for torsion profiles with solid-harmonic multipliers


def _laplacian_stencil(P: Callable, pts: np.ndarray, h: float = 1e-3) -> np.ndarray:
    n = pts.shape[1]
    acc = -2.0 * n * np.asarray(P(pts), dtype=float)
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        acc = acc + np.asarray(P(pts + e), dtype=float) + np.asarray(P(pts - e), dtype=float)
    return acc / h ** 2


def validate_solid_harmonic(P: Callable, ell: int, n: int, rng_seed: int = 11):
    """Check that P is homogeneous of degree ell and harmonic, by sampling."""
    rng = np.random.default_rng(rng_seed)
    pts = rng.uniform(-1.0, 1.0, size=(20, n))
    vals = np.asarray(P(pts), dtype=float)
    scale = float(np.max(np.abs(vals))) + 1.0
    lap = _laplacian_stencil(P, pts)
    # stencil truncation is h^2 * (4th derivatives): exact through degree 3,
    # and well below any O(1) Laplacian of a genuinely non-harmonic P
    if np.max(np.abs(lap)) > max(1e-8, 1e-5 * (2 ** max(ell - 3, 0) - 1)) * scale:
        raise ValidationError("multiplier polynomial is not harmonic")
    hom = np.asarray(P(2.0 * pts), dtype=float) - 2.0 ** ell * vals
    if np.max(np.abs(hom)) > 1e-9 * (2.0 ** ell) * scale:
        raise ValidationError(f"multiplier is not homogeneous of degree {ell}")


def torsion_closed_form(
    ell: int, P: Callable, rho: float, x, p: FracParams, *, validate: bool = True
):
    """(-Delta)^s of P(x) * gamma_{n,s} (rho^2 - |x|^2)^s_+ for a solid
    harmonic P of degree ell.

    Inside B_rho the value is (gamma_{n,s}/gamma_{n+2l,s}) P(x); outside it
    picks up the hypergeometric factor of the exterior formula; on the
    boundary sphere the true value is -infinity, returned as a typed
    sentinel."""
    n, s = p.n, p.s
    if validate:
        validate_solid_harmonic(P, ell, n)
    xv = np.atleast_2d(np.asarray(x, dtype=float))
    t = float(np.linalg.norm(xv[0])) / rho
    ratio = gamma_torsion(n, s) / gamma_torsion(n + 2 * ell, s)
    Px = float(np.asarray(P(xv), dtype=float)[0])
    if abs(t - 1.0) < 1e-12:
        return NEG_INF_BOUNDARY
    if t < 1.0:
        return ratio * Px
    m = n + 2 * ell
    hyp = hyp2f1((n + 2.0 * s) / 2.0 + ell, s + 1.0, (n + 2.0 * s) / 2.0 + 1.0 + ell, t ** -2)
    return -ratio * Px * a_hyp(m, s) * t ** (-(n + 2.0 * s + 2.0 * ell)) * hyp


# ---------------------------------------------------------------------------
# stability functions K, F, f, g


class StabilityValues(NamedTuple):
    K: float
    F: float
    f: float
    g: float


def stability_functions(tau: float, p: FracParams) -> StabilityValues:
    """The four closed-form stability functions at tau in (0, 1):
    K = a_{n,s}(1-tau)^{-s} tau^{(n+2s)/2}, F = 2F1(1, n/2; (n+2s)/2+1; tau),
    f = 1 - K (F - 1), g = K ((n+2s)/(2s) - F) - 1."""
    if not (0.0 < tau < 1.0):
        raise DomainError(f"tau must lie in (0,1), got {tau}")
    n, s = p.n, p.s
    K = a_hyp(n, s) * (1.0 - tau) ** (-s) * tau ** ((n + 2.0 * s) / 2.0)
    F = hyp2f1(1.0, n / 2.0, (n + 2.0 * s) / 2.0 + 1.0, tau)
    fv = 1.0 - K * (F - 1.0)
    gv = K * ((n + 2.0 * s) / (2.0 * s) - F) - 1.0
    return StabilityValues(K, F, fv, gv)


class StabilityFunctions:
    """Stability-function evaluator with an optional interpolation cache.

    Repeated scans (the barrier inequality sweep is the hot loop) switch to a
    cubic interpolant of the smooth parts once the call count passes the
    threshold; the (1-tau)^{-s} prefactor is kept analytic so accuracy does
    not degrade toward tau = 1.
    """

    def __init__(self, p: FracParams, cache_threshold: int = 10_000):
        self.p = p
        self.cache_threshold = cache_threshold
        self.calls = 0
        self._spline = None

    def _build_cache(self):
        from scipy.interpolate import CubicSpline

        n, s = self.p.n, self.p.s
        taus = np.linspace(1e-6, 1.0 - 1e-6, 2001)
        Fs = np.array([hyp2f1(1.0, n / 2.0, (n + 2.0 * s) / 2.0 + 1.0, t) for t in taus])
        self._spline = CubicSpline(taus, Fs)

    def _F(self, tau: float) -> float:
        n, s = self.p.n, self.p.s
        if self._spline is not None and 1e-6 <= tau <= 1.0 - 1e-6:
            return float(self._spline(tau))
        return hyp2f1(1.0, n / 2.0, (n + 2.0 * s) / 2.0 + 1.0, tau)

    def values(self, tau: float) -> StabilityValues:
        if not (0.0 < tau < 1.0):
            raise DomainError(f"tau must lie in (0,1), got {tau}")
        self.calls += 1
        if self._spline is None and self.calls > self.cache_threshold:
            self._build_cache()
        n, s = self.p.n, self.p.s
        K = a_hyp(n, s) * (1.0 - tau) ** (-s) * tau ** ((n + 2.0 * s) / 2.0)
        F = self._F(tau)
        return StabilityValues(K, F, 1.0 - K * (F - 1.0), K * ((n + 2.0 * s) / (2.0 * s) - F) - 1.0)


# ---------------------------------------------------------------------------
# the antisymmetric barrier


@dataclass(frozen=True)
class BarrierSpec:
    """Two-ball barrier phi(x) = x_1 (psi_{B_rho(a)} + psi_{B_rho(a*)})(x),
    where a* = a - 2 a_1 e_1 is the mirror image of the centre a across
    {x_1 = 0} (the reflection with the factor 2; dropping it would destroy
    the antisymmetry of the barrier)."""

    a: tuple
    rho: float
    params: FracParams

    def __post_init__(self):
        a = tuple(float(c) for c in np.atleast_1d(np.asarray(self.a, dtype=float)))
        if len(a) != self.params.n:
            raise DomainError("centre dimension does not match params")
        if a[0] < 0.0:
            raise DomainError("centre must lie in the closed upper half-space")
        if self.rho <= 0.0:
            raise DomainError("radius must be positive")
        object.__setattr__(self, "a", a)

    @property
    def a_reflected(self) -> np.ndarray:
        ar = np.array(self.a, dtype=float)
        ar[0] = -ar[0]
        return ar


def _torsion_profile(pts, center, rho, n, s):
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    q = rho ** 2 - np.sum((pts - np.asarray(center)[None, :]) ** 2, axis=-1)
    return gamma_torsion(n, s) * np.maximum(q, 0.0) ** s


def barrier_eval(b: BarrierSpec, x):
    """phi(x); vectorized over an (N, n) array of points."""
    n, s = b.params.n, b.params.s
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    vals = pts[:, 0] * (
        _torsion_profile(pts, b.a, b.rho, n, s)
        + _torsion_profile(pts, b.a_reflected, b.rho, n, s)
    )
    return vals if np.ndim(x) > 1 else float(vals[0])


def barrier_field(b: BarrierSpec) -> ScalarField:
    n = b.params.n
    R = float(np.linalg.norm(b.a)) + b.rho

    def f(pts):
        arr = np.asarray(pts, dtype=float)
        if n == 1:
            arr = arr.reshape(-1, 1)
        return barrier_eval(b, np.atleast_2d(arr))

    return ScalarField(dim=n, f=f, antisymmetric=True, support_radius=R,
                       smoothness_note="C^s at the two sphere boundaries")


def barrier_frac_lap(b: BarrierSpec, x, stab: StabilityFunctions | None = None) -> float:
    """Closed-form (-Delta)^s phi at x in the open upper half of B_rho(a).

    Inside the lens B_rho(a) cap B_rho(a*) the value is exactly
    2 (n+2s) x_1 / n.  Outside the reflected ball it is assembled from the
    stability functions: (n+2s)/n f(tau) x_1 + (2s/n) g(tau) a_1 with
    tau = (rho / |x - a*|)^2.  The sphere |x - a*| = rho is a singular locus.
    """
    n, s = b.params.n, b.params.s
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if xv[0] <= 0.0:
        raise DomainError("closed form stated on the open upper half-ball: x_1 > 0")
    da = float(np.linalg.norm(xv - np.array(b.a)))
    if da >= b.rho:
        raise DomainError("x must lie inside B_rho(a)")
    dref = float(np.linalg.norm(xv - b.a_reflected))
    if abs(dref - b.rho) < 1e-12:
        raise SingularLocusError("x lies on the boundary of the reflected ball")
    x1 = xv[0]
    if dref < b.rho:
        return 2.0 * (n + 2.0 * s) * x1 / n
    tau = (b.rho / dref) ** 2
    if stab is not None:
        sv = stab.values(tau)
    else:
        sv = stability_functions(tau, b.params)
    a1 = b.a[0]
    return (n + 2.0 * s) / n * sv.f * x1 + 2.0 * s / n * sv.g * a1
