"""Fractional perimeter and interaction functionals, the perimeter
interpolation inequality, the half-space extension-energy constant, and the
fourth-moment identities.

The double integrals behind the s-perimeter are Monte Carlo estimates with
an exactly-normalized power-law importance sampler on the inner variable
(radius drawn from the kernel tail beyond the distance to the opposite set),
so the only sampling noise left is indicator variance.  The near-diagonal
blow-up of the outer integrand is truncated at an analytic distance floor
whose bias bound is folded into the reported error.

This chapter's kernel power is n + sigma with order sigma in (0, 1); it is
always an explicit argument, never conflated with the n + 2s power used by
the operator modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import (
    DomainError,
    FracParams,
    a_tilde_ext,
    gamma_fn,
    phi_halfspace,
    sphere_area,
    unit_ball_volume,
)
from .quadrature import DEFAULT_SPEC, IntegralResult, QuadSpec, integrate_adaptive
from .geometry import ShapeDescriptor
from .fraclap import ValidationError


@dataclass
class SetPair:
    """Disjoint pair for the interaction functional I_sigma(A, B)."""

    A: ShapeDescriptor
    B: ShapeDescriptor
    sigma: float

    def validate_disjoint(self, q: QuadSpec = DEFAULT_SPEC, samples: int = 20000):
        rng = np.random.default_rng(q.rng_seed)
        box = np.asarray(self.A.bounding_box, dtype=float)
        pts = rng.random((samples, box.shape[0])) * (box[:, 1] - box[:, 0]) + box[:, 0]
        both = self.A.membership(pts) & self.B.membership(pts)
        if np.any(both):
            raise ValidationError("interaction pair is not disjoint on MC samples")


def _sample_sphere(rng, m, n):
    v = rng.standard_normal((m, n))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def halfspace_kernel_mass(n: int, sigma: float) -> float:
    """int_{z_1 > 1} |z|^{-n-sigma} dz; the mass beyond a plane at distance d
    is this constant times d^{-sigma}."""
    return (math.pi ** ((n - 1) / 2.0) * gamma_fn((sigma + 1.0) / 2.0)
            / (sigma * gamma_fn((n + sigma) / 2.0)))


def _interaction_outer(
    outer_pred,
    inner_pred,
    dist_lower,
    box,
    n: int,
    sigma: float,
    q: QuadSpec,
    m_inner: int = 32,
    collar_depth: float = 0.0,
    collar_perimeter: float = 0.0,
):
    """MC estimate of int_{X} int_{Y} |x-y|^{-n-sigma} dy dx.

    ``outer_pred``/``inner_pred`` are membership predicates of X and Y;
    ``dist_lower(x)`` is a positive lower bound for dist(x, Y) on X.  The
    inner integral is importance-sampled exactly from the kernel tail beyond
    that distance, so only indicator variance remains.

    When Y touches X along a hypersurface, the outer integrand blows up like
    dist^{-sigma}; points with dist < ``collar_depth`` are then replaced by
    the flat-boundary collar value
    A(n, sigma) * collar_perimeter * depth^{1-sigma} / (1-sigma),
    whose curvature correction enters the error estimate.
    """
    box = np.asarray(box, dtype=float)
    vol = float(np.prod(box[:, 1] - box[:, 0]))
    rng = np.random.default_rng(q.rng_seed)
    N = q.mc_samples
    pts = rng.random((N, n)) * (box[:, 1] - box[:, 0]) + box[:, 0]
    inX = outer_pred(pts)
    contrib = np.zeros(N)
    idx = np.flatnonzero(inX)
    if idx.size:
        d = np.maximum(np.asarray(dist_lower(pts[idx]), dtype=float), 1e-300)
        keep = d >= collar_depth
        kidx = idx[keep]
        dk = d[keep]
        if kidx.size:
            U = rng.random((kidx.size, m_inner))
            radii = dk[:, None] * U ** (-1.0 / sigma)
            dirs = _sample_sphere(rng, kidx.size * m_inner, n).reshape(kidx.size, m_inner, n)
            ys = pts[kidx][:, None, :] + radii[..., None] * dirs
            hits = inner_pred(ys.reshape(-1, n)).reshape(kidx.size, m_inner)
            # sampler normalization: int_{|z|>d} |z|^{-n-sigma} dz
            #                        = |S^{n-1}| d^{-sigma} / sigma
            norm = sphere_area(n) * dk ** (-sigma) / sigma
            contrib[kidx] = norm * hits.mean(axis=1)
    mean = float(contrib.mean())
    se = float(contrib.std(ddof=1) / math.sqrt(N)) if N > 1 else float("inf")
    value = vol * mean
    err = vol * se
    if collar_depth > 0.0 and collar_perimeter > 0.0:
        A = halfspace_kernel_mass(n, sigma)
        value += (A * collar_perimeter * collar_depth ** (1.0 - sigma)
                  / (1.0 - sigma))
        # curvature / corner correction of the flat-collar model
        err += 2.0 * A * collar_perimeter * collar_depth ** (2.0 - sigma) / (2.0 - sigma)
    return IntegralResult(value, err, N * (1 + m_inner), True)


def interaction(pair: SetPair, window: ShapeDescriptor | None,
                p_dim: int, q: QuadSpec = DEFAULT_SPEC) -> IntegralResult:
    """I_sigma(A, B) restricted so the outer set is bounded (A or A cap
    window must have a finite bounding box)."""
    A, B, sigma = pair.A, pair.B, pair.sigma
    box = A.bounding_box if window is None else window.bounding_box

    def dlow(pts):
        return B.distance_to_boundary(pts)

    return _interaction_outer(
        lambda pts: A.membership(pts),
        lambda pts: B.membership(pts),
        dlow, box, p_dim, sigma, q)


def frac_perimeter(E: ShapeDescriptor, Omega: ShapeDescriptor, p: FracParams,
                   q: QuadSpec = DEFAULT_SPEC, sigma: float | None = None,
                   m_inner: int = 32, collar_depth: float = 0.01) -> IntegralResult:
    """Per_sigma(E; Omega) = I(E cap Omega, E^c cap Omega)
    + I(E cap Omega, E^c \\ Omega) + I(E \\ Omega, E^c cap Omega), each term
    by importance-sampled MC.  ``sigma`` defaults to p.s (kernel power
    n + sigma).  The first term carries the near-diagonal blow-up; its deep
    collar around the boundary of E is integrated with the flat-boundary
    closed form against the classical perimeter of E in Omega.
    """
    n = p.n
    sigma = p.s if sigma is None else float(sigma)
    if not (0.0 < sigma < 1.0):
        raise DomainError("kernel order sigma must lie in (0,1)")
    box = Omega.bounding_box

    dE = E.distance_to_boundary
    dOm = Omega.distance_to_boundary
    mE = E.membership
    mOm = Omega.membership

    try:
        per_in_window = E.classical_perimeter_in_ball(
            _window_radius(Omega), center=_window_center(Omega))
    except (AttributeError, DomainError):
        per_in_window = 0.0
        collar_depth = 0.0

    specs = [
        # X = E cap Omega, Y = E^c cap Omega: dist(x, Y) >= dist(x, dE)
        (lambda pts: mE(pts) & mOm(pts),
         lambda pts: (~mE(pts)) & mOm(pts),
         lambda pts: dE(pts),
         collar_depth, per_in_window),
        # X = E cap Omega, Y = E^c \ Omega: dist >= max(d_dE, d_dOmega)
        (lambda pts: mE(pts) & mOm(pts),
         lambda pts: (~mE(pts)) & (~mOm(pts)),
         lambda pts: np.maximum(dE(pts), dOm(pts)),
         0.0, 0.0),
        # I(E \ Omega, E^c cap Omega) computed with the bounded factor
        # outside: X = E^c cap Omega, Y = E \ Omega
        (lambda pts: (~mE(pts)) & mOm(pts),
         lambda pts: mE(pts) & (~mOm(pts)),
         lambda pts: np.maximum(dE(pts), dOm(pts)),
         0.0, 0.0),
    ]
    terms = []
    for i, (xp, yp, dl, cd, cp) in enumerate(specs):
        qi = QuadSpec(abs_tol=q.abs_tol, rel_tol=q.rel_tol,
                      max_refinements=q.max_refinements, pv_cutoffs=q.pv_cutoffs,
                      mc_samples=q.mc_samples, rng_seed=q.rng_seed + 101 * i)
        terms.append(_interaction_outer(xp, yp, dl, box, n, sigma, qi,
                                        m_inner=m_inner, collar_depth=cd,
                                        collar_perimeter=cp))
    return IntegralResult(math.fsum(t.value for t in terms),
                          math.fsum(t.err_estimate for t in terms),
                          sum(t.evaluations for t in terms), True)


def frac_perimeter_terms(E: ShapeDescriptor, Omega: ShapeDescriptor,
                         p: FracParams, q: QuadSpec = DEFAULT_SPEC,
                         sigma: float | None = None) -> list[IntegralResult]:
    """The three interaction terms of the perimeter decomposition,
    I(E cap Om, E^c cap Om), I(E cap Om, E^c \\ Om), I(E \\ Om, E^c cap Om),
    each estimated separately (the third via its bounded factor)."""
    n = p.n
    sigma = p.s if sigma is None else float(sigma)
    box = Omega.bounding_box
    dE, dOm = E.distance_to_boundary, Omega.distance_to_boundary
    mE, mOm = E.membership, Omega.membership
    try:
        per0 = E.classical_perimeter_in_ball(_window_radius(Omega),
                                             center=_window_center(Omega))
        cd = 0.01
    except (AttributeError, DomainError):
        per0, cd = 0.0, 0.0
    combos = [
        (lambda pts: mE(pts) & mOm(pts), lambda pts: (~mE(pts)) & mOm(pts),
         lambda pts: dE(pts), cd, per0),
        (lambda pts: mE(pts) & mOm(pts), lambda pts: (~mE(pts)) & (~mOm(pts)),
         lambda pts: np.maximum(dE(pts), dOm(pts)), 0.0, 0.0),
        (lambda pts: (~mE(pts)) & mOm(pts), lambda pts: mE(pts) & (~mOm(pts)),
         lambda pts: np.maximum(dE(pts), dOm(pts)), 0.0, 0.0),
    ]
    out = []
    for i, (xp, yp, dl, cdi, cpi) in enumerate(combos):
        qi = QuadSpec(abs_tol=q.abs_tol, rel_tol=q.rel_tol,
                      max_refinements=q.max_refinements, pv_cutoffs=q.pv_cutoffs,
                      mc_samples=q.mc_samples, rng_seed=q.rng_seed + 977 * (i + 1))
        out.append(_interaction_outer(xp, yp, dl, box, n, sigma, qi,
                                      collar_depth=cdi, collar_perimeter=cpi))
    return out


def _window_radius(Omega) -> float:
    box = np.asarray(Omega.bounding_box, dtype=float)
    return float(np.max(np.abs(box)))


def _window_center(Omega):
    box = np.asarray(Omega.bounding_box, dtype=float)
    return 0.5 * (box[:, 0] + box[:, 1])


# ---------------------------------------------------------------------------
# quadrature oracle for the ball (used by tests as the independent route)


def _composite_gk_nodes(edges):
    """Nodes and weights of GK15 panels over consecutive edge pairs."""
    from .quadrature import _GK_X, _GK_WK

    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        h = 0.5 * (b - a)
        xs.append(0.5 * (a + b) + h * _GK_X)
        ws.append(h * _GK_WK)
    return np.concatenate(xs), np.concatenate(ws)


def ball_perimeter_quadrature(sigma: float, R_out: float = 60.0,
                              levels: int = 14) -> float:
    """Per_sigma(B_1; R^2) in dim 2 by polar-coordinates tensor quadrature:
    2 pi int_0^1 t g(t) dt, g(t) = int_1^{R_out} 2 R h(t, R) dR + tail,
    h(t, R) = int_0^pi (t^2 + R^2 - 2 t R cos th)^{-(2+sigma)/2} dth.

    The (1-t)^{-sigma} and (R-1)^{-sigma} edge singularities are absorbed by
    power substitutions; the angular peak at th = 0 is resolved by panels
    refined geometrically toward 0.  Fully vectorized and deterministic.
    """
    beta = 1.0 / (1.0 - sigma)
    # keep 1-t and R-1 above 1e-11 so the distance form stays resolvable; the
    # truncated edge mass is O(1e-11^{1-sigma}), far below the 1% target
    u_min = 1e-11 ** (1.0 - sigma)

    # t = 1 - u^beta on (0,1): geometric panels toward u = 0
    u_edges = np.concatenate([[u_min], np.geomspace(10 * u_min, 1.0, levels + 8)])
    u, wu = _composite_gk_nodes(u_edges)
    t = 1.0 - u ** beta
    wt = wu * beta * u ** (beta - 1.0)  # dt

    # R = 1 + v^beta on (1, 2), then plain panels on (2, R_out)
    v, wv = _composite_gk_nodes(u_edges)
    R1 = 1.0 + v ** beta
    wR1 = wv * beta * v ** (beta - 1.0)
    r_edges = np.geomspace(2.0, R_out, levels)
    R2, wR2 = _composite_gk_nodes(r_edges)
    R = np.concatenate([R1, R2])
    wR = np.concatenate([wR1, wR2])

    th_edges = np.concatenate([[0.0], math.pi * np.geomspace(2.0 ** (-40), 1.0, 41)])
    th, wth = _composite_gk_nodes(th_edges)
    sin_half_sq = np.sin(0.5 * th) ** 2

    p_half = (2.0 + sigma) / 2.0
    total = 0.0
    for i in range(t.size):  # chunk over t to bound memory
        ti = t[i]
        gap2 = (R - ti) ** 2
        d2 = gap2[:, None] + 4.0 * ti * R[:, None] * sin_half_sq[None, :]
        ang = d2 ** (-p_half) @ wth
        g = 2.0 * float((R * ang) @ wR) + 2.0 * math.pi * R_out ** (-sigma) / sigma
        total += wt[i] * ti * g
    return 2.0 * math.pi * total


# ---------------------------------------------------------------------------
# interpolation inequality


def interpolation_check(E: ShapeDescriptor, R: float, eps: float, p: FracParams,
                        q: QuadSpec = DEFAULT_SPEC, sigma: float | None = None):
    """lhs = Per_sigma(E; B_R); rhs = eps^{-(1-sigma)/sigma} R^{1-sigma}/(1-sigma)
    * Per(E; B_{(1+eps^{-1/sigma})R}) + eps R^{n-sigma}/sigma.
    Returns (lhs, rhs, ratio)."""
    n = p.n
    sigma = p.s if sigma is None else float(sigma)
    if not (0.0 < eps < 3.0 ** (-1.0 / sigma)):
        raise DomainError("eps must lie in (0, 3^{-1/sigma})")
    from .geometry import Ball

    window = Ball(center=(0.0,) * n, radius=R)
    lhs_res = frac_perimeter(E, window, p, q, sigma=sigma)
    big_R = (1.0 + eps ** (-1.0 / sigma)) * R
    per_classical = E.classical_perimeter_in_ball(big_R)
    rhs = (eps ** (-(1.0 - sigma) / sigma) * R ** (1.0 - sigma) / (1.0 - sigma)
           * per_classical + eps * R ** (n - sigma) / sigma)
    return lhs_res.value, rhs, lhs_res.value / rhs


# ---------------------------------------------------------------------------
# half-space extension energy


def halfspace_energy(p: FracParams) -> float:
    """Phi_{halfspace,0}(1) = 2 pi^{n/2-1} Gamma((s+1)/2) Gamma((1-s)/2)
    / (Gamma(s/2) Gamma((n-s)/2+1)) (closed form)."""
    return phi_halfspace(p.n, p.s)


def halfspace_energy_quadrature(p: FracParams, q: QuadSpec = DEFAULT_SPEC) -> float:
    """Cross-check route: the energy as the product
    a~(n,s)^2 omega_{n-1} (int_0^1 r^{-s}(1-r^2)^{(n-1)/2} dr)
    (int_0^pi (sin th)^{s-1} dth), each factor by quadrature."""
    n, s = p.n, p.s
    omega = math.pi ** ((n - 1) / 2.0) / gamma_fn((n - 1) / 2.0 + 1.0)
    I1 = integrate_adaptive(
        lambda r: r ** (-s) * (1.0 - r * r) ** ((n - 1) / 2.0), (0.0, 1.0), q,
        endpoint_powers=(-s, None))
    I2 = integrate_adaptive(
        lambda th: np.sin(th) ** (s - 1.0), (0.0, math.pi), q,
        endpoint_powers=(s - 1.0, s - 1.0))
    return a_tilde_ext(s) ** 2 * omega * I1.value * I2.value


# ---------------------------------------------------------------------------
# fourth-moment identities


def moment_integrals(n: int, q: QuadSpec = DEFAULT_SPEC):
    """(int_{B_1} x_1^4 dx, int_{S^{n-1}} theta_1^4 dH^{n-1}) by quadrature:
    the sphere factor is reduced to the polar angle, the ball moment adds the
    radial power."""
    if n < 2:
        raise DomainError("moment identities stated for n >= 2")
    s_nm1 = sphere_area(n - 1) if n > 2 else 2.0

    def ang(phi):
        return np.cos(phi) ** 4 * np.sin(phi) ** (n - 2)

    res = integrate_adaptive(ang, (0.0, math.pi), q)
    sphere_moment = s_nm1 * res.value
    ball_moment = sphere_moment / (n + 4.0)
    return ball_moment, sphere_moment


def moment_closed_forms(n: int):
    """The reference values 3 H^{n-1}(S^{n-1}) / (n(n+2)(n+4)) and
    3 H^{n-1}(S^{n-1}) / (n(n+2))."""
    area = sphere_area(n)
    return 3.0 * area / (n * (n + 2.0) * (n + 4.0)), 3.0 * area / (n * (n + 2.0))
