"""Poisson-kernel machinery for the ball: the s-harmonic extension of
exterior data, its folded (antisymmetric) representation, the mean-value
formula for the first derivative at the centre, the radial weight psi_s,
and the one-dimensional zeta_R family with its slope limit c_0(s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .specfun import DomainError, FracParams, gamma_poisson
from .quadrature import DEFAULT_SPEC, IntegralResult, QuadSpec, integrate_adaptive
from .fraclap import ValidationError


@dataclass
class ExteriorData:
    """Boundary data g on R^n \\ B_r for the fractional Poisson integral.

    ``g`` is vectorized ((N,) for dim 1, else (N, dim)).  ``decay_exponent``
    is the claimed rate |g(y)| <= C |y|^{-decay_exponent} used to bound the
    truncation tail; compactly supported data may set ``support_radius``
    instead, which removes the tail entirely.
    """

    dim: int
    g: Callable
    r: float = 1.0
    antisymmetric: bool = False
    decay_exponent: float = 0.0
    support_radius: float | None = None

    def __call__(self, pts):
        return np.asarray(self.g(pts), dtype=float)

    def outer_radius(self, p: FracParams, tol: float) -> float:
        if self.support_radius is not None:
            return self.support_radius
        # tail of |g|(|y|^2-r^2)^{-s}|y|^{-n} ~ C R^{1-n-2s-d+n-1}; solve for R
        d = self.decay_exponent
        power = d + 2.0 * p.s - 1.0
        if power <= 0.0:
            raise ValidationError("data decay too weak for integrability")
        R = max(4.0 * self.r, (1.0 / max(tol, 1e-12)) ** (1.0 / power))
        return min(R, 1e6)

    def validate_integrability(self, p: FracParams, q: QuadSpec = DEFAULT_SPEC):
        """Numerical check that the Poisson integral of |g| is finite."""
        res = _poisson_raw(self, np.zeros(self.dim), p, q, absolute=True)
        if not (math.isfinite(res.value)):
            raise ValidationError("Poisson integral of |g| is not finite")
        return res.value


def _angular_average(d: ExteriorData, x, R_values, kernel, m_ang: int = 128,
                     absolute=False):
    """For each radius R in R_values, the angular integral of
    kernel(x, y) g(y) over |y| = R (dim 2), or the two-point sum (dim 1)."""
    x = np.atleast_1d(x)
    if d.dim == 1:
        out = []
        for R in np.atleast_1d(R_values):
            ys = np.array([R, -R])
            gv = d(ys)
            if absolute:
                gv = np.abs(gv)
            out.append(float(np.sum(kernel(x, ys) * gv)))
        return np.array(out)
    th = 2.0 * math.pi * np.arange(m_ang) / m_ang
    omega = np.stack([np.cos(th), np.sin(th)], axis=-1)
    out = []
    for R in np.atleast_1d(R_values):
        ys = R * omega
        gv = d(ys)
        if absolute:
            gv = np.abs(gv)
        out.append(float(np.sum(kernel(x, ys) * gv)) * (2.0 * math.pi / m_ang) * R)
    return np.array(out)


def _poisson_raw(d: ExteriorData, x, p: FracParams, q: QuadSpec,
                 absolute=False) -> IntegralResult:
    n, s = p.n, p.s
    r = d.r
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    rx = float(np.linalg.norm(xv))
    if rx >= r:
        raise DomainError("Poisson extension point must lie inside the ball")

    def kernel(xp, ys):
        ys2 = np.atleast_1d(ys)
        if n == 1:
            return 1.0 / np.abs(ys2 - xp[0])
        dist = np.sqrt(np.sum((ys2 - xp[None, :]) ** 2, axis=-1))
        return dist ** (-n)

    R_out = d.outer_radius(p, q.abs_tol)

    def radial(Rv):
        Rv = np.atleast_1d(Rv)
        ang = _angular_average(d, xv, Rv, kernel, absolute=absolute)
        w = ((r ** 2 - rx ** 2) / (Rv ** 2 - r ** 2)) ** s
        if n == 1:
            return ang * w
        return ang * w  # the R^{n-1} surface factor is inside _angular_average

    res = integrate_adaptive(radial, (r, R_out), q, endpoint_powers=(-s, None))
    return IntegralResult(gamma_poisson(n, s) * res.value,
                          gamma_poisson(n, s) * res.err_estimate,
                          res.evaluations, res.converged)


def poisson_extend(d: ExteriorData, x, p: FracParams, q: QuadSpec = DEFAULT_SPEC) -> float:
    """s-harmonic extension of the exterior data at a point x in B_r:
    u(x) = gamma_{n,s} int_{R^n \\ B_r} ((r^2-|x|^2)/(|y|^2-r^2))^s
    g(y) |x-y|^{-n} dy."""
    return _poisson_raw(d, x, p, q).value


def antisym_representation(d: ExteriorData, x, p: FracParams,
                           q: QuadSpec = DEFAULT_SPEC) -> float:
    """Folded form of the Poisson integral for antisymmetric data: the
    kernel difference |x-y|^{-n} - |x*-y|^{-n} integrated over the exterior
    half-space only."""
    if not d.antisymmetric:
        raise ValidationError("antisym_representation requires antisymmetric data")
    n, s = p.n, p.s
    r = d.r
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    rx = float(np.linalg.norm(xv))
    if rx >= r:
        raise DomainError("evaluation point must lie inside the ball")
    R_out = d.outer_radius(p, q.abs_tol)

    if n == 1:

        def radial(Rv):
            Rv = np.atleast_1d(Rv)
            gv = d(Rv)
            w = ((r ** 2 - rx ** 2) / (Rv ** 2 - r ** 2)) ** s
            ker = 1.0 / np.abs(Rv - xv[0]) - 1.0 / (Rv + xv[0])
            return gv * w * ker

        res = integrate_adaptive(radial, (r, R_out), q, endpoint_powers=(-s, None))
        return gamma_poisson(n, s) * res.value

    m_ang = 128
    th = math.pi * (np.arange(m_ang) + 0.5) / m_ang  # upper semicircle
    omega = np.stack([np.cos(th), np.sin(th)], axis=-1)
    xr = xv.copy()
    xr[0] = -xr[0]

    def radial(Rv):
        Rv = np.atleast_1d(Rv)
        out = np.empty(Rv.size)
        for i, R in enumerate(Rv):
            ys = R * omega
            dist = np.sqrt(np.sum((ys - xv[None, :]) ** 2, axis=-1))
            dist_ref = np.sqrt(np.sum((ys - xr[None, :]) ** 2, axis=-1))
            ker = dist ** (-n) - dist_ref ** (-n)
            out[i] = float(np.sum(ker * d(ys))) * (math.pi / m_ang) * R
        w = ((r ** 2 - rx ** 2) / (Rv ** 2 - r ** 2)) ** s
        return out * w

    res = integrate_adaptive(radial, (r, R_out), q, endpoint_powers=(-s, None))
    return gamma_poisson(n, s) * res.value


class PoissonExtension:
    """Extension of exterior data as an everywhere-defined function: the data
    itself outside the ball, the Poisson integral inside.  Values inside are
    interpolated from Chebyshev nodes (the extension is analytic there)."""

    def __init__(self, d: ExteriorData, p: FracParams, q: QuadSpec = DEFAULT_SPEC,
                 nodes: int = 48):
        if d.dim != 1:
            raise DomainError("cached extension implemented for dim 1")
        self.d, self.p, self.q = d, p, q
        k = np.arange(nodes)
        # Chebyshev nodes on (-r, r), avoiding the boundary
        self._xs = d.r * 0.999999 * np.cos(math.pi * (k + 0.5) / nodes)
        self._vals = np.array([poisson_extend(d, xi, p, q) for xi in self._xs])
        order = np.argsort(self._xs)
        self._xs = self._xs[order]
        self._vals = self._vals[order]

    def __call__(self, y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        inside = np.abs(y) < self.d.r
        out = np.where(inside, 0.0, self.d(y))
        if np.any(inside):
            from scipy.interpolate import CubicSpline

            if not hasattr(self, "_spl"):
                self._spl = CubicSpline(self._xs, self._vals)
            out = np.where(inside, self._spl(y), out)
        return out


def meanvalue_derivative(d: ExteriorData, r: float, p: FracParams,
                         q: QuadSpec = DEFAULT_SPEC) -> float:
    """d/dx_1 u(0) of the s-harmonic extension u of antisymmetric data, via
    the weighted exterior integral
    2 n gamma_{n,s} int_{R^n_+ \\ B_r^+} r^{2s} y_1 u(y) (|y|^2-r^2)^{-s}
    |y|^{-n-2} dy, valid for every radius r in (0, 1]."""
    if not (0.0 < r <= 1.0):
        raise DomainError(f"radius must lie in (0, 1], got {r}")
    if abs(d.r - 1.0) > 1e-12:
        raise DomainError("the mean-value formula is stated for data outside B_1")
    if not d.antisymmetric:
        raise ValidationError("mean-value derivative formula requires antisymmetric data")
    n, s = p.n, p.s
    if n != 1:
        raise DomainError("implemented for dim 1 (the acceptance dimension)")
    u = PoissonExtension(d, p, q) if r < 1.0 else None
    R_out = d.outer_radius(p, q.abs_tol)

    def uval(y):
        if u is None:
            return d(np.atleast_1d(y))
        return u(y)

    def integrand(y):
        y = np.atleast_1d(y)
        return r ** (2.0 * s) * y * uval(y) / ((y ** 2 - r ** 2) ** s * y ** (n + 2))

    res = integrate_adaptive(integrand, (r, R_out), q, endpoint_powers=(-s, None),
                             breakpoints=[1.0] if r < 1.0 else ())
    return 2.0 * n * gamma_poisson(n, s) * res.value


# ---------------------------------------------------------------------------
# radial weight psi_s


def psi_s_weight(p: FracParams, y) -> float:
    """psi_s(y) = n(n+2) gamma_{n,s} int_0^{min(1/|y|, 1)}
    r^{2s+n+1} (1-r^2)^{-s} dr, the radial weight representing d_1 u(0).

    The (1-r^2)^{-s} endpoint is removed analytically by the substitution
    v = (1-r^2)^{1-s} before adaptive quadrature."""
    n, s = p.n, p.s
    ynorm = float(np.linalg.norm(np.atleast_1d(np.asarray(y, dtype=float))))
    T = min(1.0 / ynorm, 1.0) if ynorm > 0 else 1.0
    qexp = 2.0 * s + n + 1.0

    if T < 1.0:
        res = integrate_adaptive(lambda t: t ** qexp * (1.0 - t * t) ** (-s), (0.0, T))
        val = res.value
    else:
        # v = (1-r^2)^{1-s}: integral = 1/(2(1-s)) int_0^1 r^{q-1} dv-form
        def h(v):
            v = np.asarray(v, dtype=float)
            r2 = 1.0 - v ** (1.0 / (1.0 - s))
            r2 = np.clip(r2, 0.0, 1.0)
            return r2 ** ((qexp - 1.0) / 2.0) / (2.0 * (1.0 - s))

        res = integrate_adaptive(h, (0.0, 1.0))
        val = res.value
    return n * (n + 2.0) * gamma_poisson(n, s) * val


@dataclass
class WeightPsiS:
    """psi_s with a fitted two-sided comparison constant against
    (1+|y|^{n+2s+2})^{-1}."""

    params: FracParams
    sandwich_C: float | None = None

    def eval(self, y) -> float:
        return psi_s_weight(self.params, y)

    def fit_sandwich(self, radii=None) -> float:
        """Fit the smallest C with C^{-1} <= psi_s(y) (1+|y|^{n+2s+2}) <= C
        on a coarse radius grid; store it with a 5% safety margin."""
        n, s = self.params.n, self.params.s
        if radii is None:
            radii = np.concatenate([np.linspace(0.0, 2.0, 41), np.geomspace(2.0, 50.0, 40)])
        ratios = np.array(
            [psi_s_weight(self.params, [rr] + [0.0] * (n - 1)) * (1.0 + rr ** (n + 2 * s + 2))
             for rr in radii]
        )
        C = 1.05 * max(float(np.max(ratios)), 1.0 / float(np.min(ratios)))
        self.sandwich_C = C
        return C


# ---------------------------------------------------------------------------
# the zeta_R family


def _a_slope(s: float) -> float:
    # normalisation of the one-dimensional Poisson kernel, sin(pi s)/pi,
    # i.e. gamma_{1,s}; this makes zeta_1 the genuine s-harmonic extension
    return math.sin(math.pi * s) / math.pi


def zeta_interval(R: float, s: float, x: float, q: QuadSpec = DEFAULT_SPEC) -> float:
    """zeta_R(x): the s-harmonic function on (-R, R) with exterior values
    +-R, evaluated through zeta_R(x) = R zeta_1(x/R) and
    zeta_1(x) = 2 a_s x (1-x^2)^s int_1^inf dt / ((t^2-x^2)(t^2-1)^s)."""
    if R <= 0.0:
        raise DomainError("R must be positive")
    if not (abs(x) < R):
        raise DomainError(f"|x| must be < R, got x={x}, R={R}")
    if not (0.0 < s < 1.0):
        raise DomainError("s must lie in (0,1)")
    z = x / R
    if z == 0.0:
        return 0.0
    a_s = _a_slope(s)

    # substitute t = 1/w: int_1^inf dt/((t^2-z^2)(t^2-1)^s)
    #                   = int_0^1 w^{2s} dw / ((1-z^2 w^2)(1-w^2)^s)
    def h(w):
        w = np.asarray(w, dtype=float)
        return w ** (2.0 * s) / ((1.0 - z * z * w * w) * (1.0 - w * w) ** s)

    res = integrate_adaptive(h, (0.0, 1.0), q, endpoint_powers=(None, -s))
    return R * 2.0 * a_s * z * (1.0 - z * z) ** s * res.value


def c0_limit(s: float, q: QuadSpec = DEFAULT_SPEC) -> float:
    """c_0(s) = 2 a_s int_1^inf dt / (t^2 (t^2-1)^s), the R -> infinity
    limit of zeta_R(x)/x."""
    if not (0.0 < s < 1.0):
        raise DomainError("s must lie in (0,1)")

    def h(w):
        w = np.asarray(w, dtype=float)
        return w ** (2.0 * s) / (1.0 - w * w) ** s

    res = integrate_adaptive(h, (0.0, 1.0), q, endpoint_powers=(None, -s))
    return 2.0 * _a_slope(s) * res.value


# ---------------------------------------------------------------------------
# weighted half-space norm


def anorm_halfspace(u: Callable, p: FracParams, q: QuadSpec = DEFAULT_SPEC,
                    R_out: float = 60.0, breakpoints=()) -> float:
    """The weighted norm int_{R^n_+} x_1 |u(x)| / (1 + |x|^{n+2s+2}) dx
    (dim 1: int_0^infty x |u| / (1+x^{n+2s+2})); truncated at R_out where the
    weight has decayed below any contribution of bounded data."""
    n, s = p.n, p.s
    if n != 1:
        raise DomainError("implemented for dim 1")

    def integrand(x):
        x = np.atleast_1d(x)
        return x * np.abs(np.asarray(u(x), dtype=float)) / (1.0 + x ** (n + 2.0 * s + 2.0))

    res = integrate_adaptive(integrand, (0.0, R_out), q, breakpoints=breakpoints)
    return res.value
