"""Dimension lifting for the fractional Laplacian and general radial Levy
operators: the n-dimensional operator applied to x_1 f(x) equals x_1 times
the (n+2)-dimensional operator applied to the 3-isotropic lift of f.

The (n+2)-dimensional principal values are evaluated through an exact
angular reduction of the inner three coordinates (the sphere-average of the
kernel has a closed form), so the check never integrates in n+2 raw
dimensions.  The kernel lift j_{n+2}(r) = -j_n'(r) / (2 pi r) and the Hankel
representation of the Fourier symbol complete the picture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.special as _sp

from .specfun import DomainError, FracParams, c_frac, gamma_fn
from .quadrature import DEFAULT_SPEC, QuadSpec, integrate_adaptive, integrate_pv
from .fraclap import ScalarField, ValidationError, frac_lap_pv


@dataclass
class SymmetricProfile:
    """Function on R^n symmetric (even) in the first variable.

    Same vectorization convention as ScalarField.  ``support_radius`` /
    ``effective_radius`` bound the region of numerically relevant values.
    """

    dim: int
    f: Callable
    support_radius: float | None = None
    effective_radius: float | None = None

    def __call__(self, pts):
        return np.asarray(self.f(pts), dtype=float)

    def cutoff_radius(self) -> float:
        if self.support_radius is not None:
            return self.support_radius
        if self.effective_radius is not None:
            return self.effective_radius
        return 8.0

    def check_symmetry(self, rng_seed: int = 5, samples: int = 32, tol: float = 1e-12):
        rng = np.random.default_rng(rng_seed)
        R = self.cutoff_radius()
        pts = rng.uniform(-R, R, size=(samples, self.dim))
        flipped = pts.copy()
        flipped[:, 0] = -flipped[:, 0]
        a = self(pts if self.dim > 1 else pts[:, 0])
        b = self(flipped if self.dim > 1 else flipped[:, 0])
        scale = 1.0 + float(np.max(np.abs(a)))
        if np.max(np.abs(a - b)) > tol * scale:
            raise ValidationError("profile is not symmetric in the first variable")


def lift_3isotropic(profile: SymmetricProfile) -> Callable:
    """The 3-isotropic lift on R^{n+2}:
    f~(x~) = f(sqrt(x~_1^2+x~_2^2+x~_3^2), x~_4, ..., x~_{n+2})."""
    n = profile.dim

    def lifted(pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        rad = np.sqrt(np.sum(pts[:, :3] ** 2, axis=-1))
        if n == 1:
            return profile(rad)
        rest = pts[:, 3:]
        return profile(np.concatenate([rad[:, None], rest], axis=-1))

    return lifted


def antisym_product_field(profile: SymmetricProfile) -> ScalarField:
    """The antisymmetric field x_1 f(x) built from a symmetric profile."""
    n = profile.dim

    def g(pts):
        arr = np.asarray(pts, dtype=float)
        first = arr if n == 1 else arr[..., 0]
        return first * profile(arr)

    return ScalarField(dim=n, f=g, antisymmetric=True,
                       support_radius=profile.support_radius,
                       effective_radius=profile.effective_radius)


# ---------------------------------------------------------------------------
# reduced principal values of the lifted fractional Laplacian


def _lifted_flap_1d(profile: SymmetricProfile, t: float, s: float,
                    q: QuadSpec) -> tuple[float, float, bool, int]:
    """(-Delta)^s of the radial lift on R^3 at radius t > 0, via the exact
    sphere average of the kernel:
    c_{3,s} (2 pi / (t (1+2s))) PV int_R (f(t) - f(|r|)) r |t-r|^{-1-2s} dr."""
    ft = float(profile(np.array([t]))[0])
    kp = 1.0 + 2.0 * s

    def integrand(r):
        r = np.asarray(r, dtype=float)
        return (ft - profile(np.abs(r))) * r * np.abs(t - r) ** (-kp)

    R = max(t + profile.cutoff_radius() + 1.0, 4.0 * t)
    res = integrate_pv(integrand, t, (-R, R), q)
    # beyond |r| = R the profile vanishes; exact tail of f(t) r |t-r|^{-1-2s}
    if s == 0.5:
        block = math.log((R + t) / (R - t))
    else:
        block = ((R + t) ** (1.0 - 2.0 * s) - (R - t) ** (1.0 - 2.0 * s)) / (1.0 - 2.0 * s)
    tail = ft * (block + t * ((R - t) ** (-2.0 * s) + (R + t) ** (-2.0 * s)) / (2.0 * s))
    pref = c_frac(3, s) * 2.0 * math.pi / (t * (1.0 + 2.0 * s))
    return (pref * (res.value + tail), abs(pref) * res.err_estimate,
            res.converged, res.evaluations)


def _lifted_flap_2d(profile: SymmetricProfile, t: float, w0: float, s: float,
                    q: QuadSpec, m_ang: int = 64) -> tuple[float, float, bool, int]:
    """(-Delta)^s of the 3-isotropic lift on R^4 at ((t,0,0), w0), reduced to
    a planar principal value: with x = (t, w0) in the (sigma, w) plane,
    c_{4,s} (pi / (t (1+s))) PV int_{R^2} (f(x) - f(|sigma|, w)) sigma
    |x - y|^{-2-2s} dy."""
    fx = float(profile(np.array([[t, w0]]))[0])
    kp = 2.0 + 2.0 * s
    x = np.array([t, w0])

    def even_profile(pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        folded = pts.copy()
        folded[:, 0] = np.abs(folded[:, 0])
        return profile(folded)

    def integrand(pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        d = np.sqrt(np.sum((pts - x[None, :]) ** 2, axis=-1))
        return (fx - even_profile(pts)) * pts[:, 0] * d ** (-kp)

    ru = profile.cutoff_radius()
    R = max(4.0, 2.0 * (abs(t) + abs(w0)) + 2.0 * ru)
    near = integrate_pv(integrand, x, ("ball", x, min(1.0, 0.5 * R)), q, m_ang=m_ang)
    from .fraclap import _far_polar  # shared polar shell helper

    caps = np.full(m_ang, R)
    far = _far_polar(integrand, x, min(1.0, 0.5 * R), caps, q, m_ang)
    # exact tail: odd angular part drops, leaving f(x) * t * 2 pi R^{-2s}/(2s)
    tail = fx * t * 2.0 * math.pi * R ** (-2.0 * s) / (2.0 * s)
    pref = c_frac(4, s) * math.pi / (t * (1.0 + s))
    return (pref * (near.value + far.value + tail),
            abs(pref) * (near.err_estimate + far.err_estimate),
            near.converged and far.converged,
            near.evaluations + far.evaluations)


class BochnerCheck(float):
    """Residual of the lifting identity; carries the two sides and their
    quadrature error estimates for tolerance accounting."""

    lhs: float
    rhs: float
    err_sum: float
    converged: bool

    def __new__(cls, residual, lhs, rhs, err_sum, converged):
        obj = super().__new__(cls, residual)
        obj.lhs = lhs
        obj.rhs = rhs
        obj.err_sum = err_sum
        obj.converged = converged
        return obj


def bochner_residual(profile: SymmetricProfile, x, p: FracParams,
                     q: QuadSpec = DEFAULT_SPEC) -> BochnerCheck:
    """(-Delta)^s [x_1 f](x) in R^n minus x_1 (-Delta)^s f~ in R^{n+2} at
    ((x_1,0,0), x'), both by principal-value quadrature."""
    n, s = p.n, p.s
    if n != profile.dim:
        raise DomainError("profile dimension does not match parameters")
    if n not in (1, 2):
        raise DomainError("residual check implemented for n in {1, 2}")
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    x1 = xv[0]
    if x1 == 0.0:
        raise DomainError("the check point needs x_1 != 0 (both sides vanish)")

    g = antisym_product_field(profile)
    lhs = frac_lap_pv(g, xv[0] if n == 1 else xv, p, q)
    if n == 1:
        val, err, conv, ev = _lifted_flap_1d(profile, abs(x1), s, q)
    else:
        val, err, conv, ev = _lifted_flap_2d(profile, abs(x1), xv[1], s, q)
    rhs = math.copysign(1.0, x1) * abs(x1) * val
    err_sum = lhs.err_estimate + abs(x1) * err
    return BochnerCheck(lhs.value - rhs, lhs.value, rhs, err_sum,
                        lhs.converged and conv)


# ---------------------------------------------------------------------------
# Levy kernels: lift and symbol


@dataclass
class LevyKernel:
    """Radial jump density j_n(r) in dimension n.

    ``dj`` is the radial derivative when available in closed form (used by
    the lift); otherwise a central difference is taken.  ``decay_radius``
    bounds the numerically relevant support of r^{n+1} j_n(r)."""

    n: int
    j: Callable
    dj: Callable | None = None
    decay_radius: float = 10.0
    name: str = ""

    def __call__(self, r):
        return np.asarray(self.j(np.asarray(r, dtype=float)), dtype=float)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        if self.dj is not None:
            return np.asarray(self.dj(r), dtype=float)
        h = 1e-5 * np.maximum(np.abs(r), 1e-2)
        return (self(r + h) - self(r - h)) / (2.0 * h)

    def validate(self, q: QuadSpec = DEFAULT_SPEC):
        """Nonincreasing on a grid; second-moment integrability by quadrature."""
        grid = np.geomspace(1e-3, self.decay_radius, 200)
        vals = self(grid)
        if np.any(np.diff(vals) > 1e-12 * (1.0 + np.abs(vals[:-1]))):
            raise ValidationError("kernel profile must be nonincreasing")
        near = integrate_adaptive(
            lambda r: np.minimum(1.0, r ** 2) * self(r) * r ** (self.n - 1),
            (0.0, self.decay_radius), q.with_tol(1e-6, 1e-6))
        if not math.isfinite(near.value):
            raise ValidationError("kernel fails the min(1, |x|^2) integrability check")
        return near.value


def kernel_lift(k: LevyKernel) -> LevyKernel:
    """The (n+2)-dimensional kernel j_{n+2}(r) = -j_n'(r) / (2 pi r); the
    Fourier symbol keeps the same radial profile."""
    if np.any(k.derivative(np.geomspace(0.05, k.decay_radius, 64)) > 1e-10):
        raise ValidationError("kernel lift requires a nonincreasing profile")

    def j2(r):
        r = np.asarray(r, dtype=float)
        return -k.derivative(r) / (2.0 * math.pi * r)

    return LevyKernel(n=k.n + 2, j=j2, decay_radius=k.decay_radius,
                      name=f"lift({k.name})" if k.name else "lifted")


def kernel_reconstruct(k2: LevyKernel, r: float, q: QuadSpec = DEFAULT_SPEC) -> float:
    """Inverse of the lift: j_n(r) = 2 pi int_r^inf t j_{n+2}(t) dt."""
    res = integrate_adaptive(lambda t: np.asarray(t) * k2(t), (r, k2.decay_radius), q)
    return 2.0 * math.pi * res.value


def levy_symbol(k: LevyKernel, tau: float, q: QuadSpec = DEFAULT_SPEC) -> float:
    """Fourier symbol of the Levy operator with kernel j_n, as the Hankel-type
    integral
    psi(tau) = (2 pi)^{n/2} int_0^inf (1/(2^{n/2-1} Gamma(n/2))
               - (r tau)^{1-n/2} J_{n/2-1}(r tau)) r^{n-1} j_n(r) dr."""
    if tau <= 0.0:
        raise DomainError("the symbol is evaluated at tau > 0")
    n = k.n
    nu = n / 2.0 - 1.0
    const = 1.0 / (2.0 ** (n / 2.0 - 1.0) * gamma_fn(n / 2.0))

    def bracket(r):
        r = np.asarray(r, dtype=float)
        z = r * tau
        with np.errstate(invalid="ignore", divide="ignore"):
            term = np.where(z > 0.0, z ** (-nu) * _sp.jv(nu, z), const)
        return const - term

    def integrand(r):
        r = np.asarray(r, dtype=float)
        return bracket(r) * r ** (n - 1) * k(r)

    res = integrate_adaptive(integrand, (0.0, k.decay_radius), q)
    val = (2.0 * math.pi) ** (n / 2.0) * res.value
    if not res.converged:
        return float("nan")
    return val
