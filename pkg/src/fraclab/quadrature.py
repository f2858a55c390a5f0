"""Deterministic quadrature: adaptive Gauss-Kronrod panels, tanh-sinh for
integrable endpoint singularities, principal-value integration by symmetric
exclusion with Richardson acceleration, and seeded Monte Carlo.

Integrands are vectorized: a 1-D integrand maps an ndarray of abscissae to an
ndarray of values; an n-D integrand maps an (N, n) array of points to (N,).
Non-convergence is reported through the ``converged`` flag, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from heapq import heappush, heappop
from typing import Callable, Sequence

import numpy as np

from .specfun import DomainError, sphere_area


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances, refinement limits, PV cutoff schedule and MC sampling."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_refinements: int = 2000
    pv_cutoffs: tuple = tuple(0.5 * 2.0 ** (-k) for k in range(14))
    mc_samples: int = 200_000
    rng_seed: int = 20240 + 1

    def __post_init__(self):
        cuts = tuple(float(c) for c in self.pv_cutoffs)
        if len(cuts) == 0 or cuts[-1] <= 0.0:
            raise DomainError("pv_cutoffs must be positive")
        if not all(cuts[i] > cuts[i + 1] for i in range(len(cuts) - 1)):
            raise DomainError("pv_cutoffs must be strictly decreasing")
        if self.mc_samples < 1:
            raise DomainError("mc_samples must be >= 1")
        object.__setattr__(self, "pv_cutoffs", cuts)

    def with_tol(self, abs_tol: float, rel_tol: float | None = None) -> "QuadSpec":
        return QuadSpec(
            abs_tol=abs_tol,
            rel_tol=self.rel_tol if rel_tol is None else rel_tol,
            max_refinements=self.max_refinements,
            pv_cutoffs=self.pv_cutoffs,
            mc_samples=self.mc_samples,
            rng_seed=self.rng_seed,
        )


@dataclass(frozen=True)
class IntegralResult:
    value: float
    err_estimate: float
    evaluations: int
    converged: bool = True

    def __post_init__(self):
        if not math.isfinite(self.err_estimate):
            object.__setattr__(self, "err_estimate", float("inf"))


DEFAULT_SPEC = QuadSpec()


# ---------------------------------------------------------------------------
# Gauss-Kronrod 15(7) panel rule

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_GK_X = np.concatenate([-_XGK[:-1], _XGK[::-1]])          # 15 nodes ascending
_GK_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_gw = np.zeros(15)
_gw[1:-1:2] = np.concatenate([_WG[:-1], _WG[::-1]])
_gw[7] = _WG[3]
_GK_WG = _gw
del _gw


def _gk_panel(f, a: float, b: float):
    """One GK15 panel on [a, b]; returns (value, error_estimate)."""
    h = 0.5 * (b - a)
    x = 0.5 * (a + b) + h * _GK_X
    y = np.asarray(f(x), dtype=float)
    ik = h * float(np.dot(_GK_WK, y))
    ig = h * float(np.dot(_GK_WG, y))
    diff = abs(ik - ig)
    resk = abs(ik)
    # QUADPACK-style sharpened estimate
    err = diff
    if diff != 0.0 and resk != 0.0:
        err = resk * min(1.0, (200.0 * diff / resk) ** 1.5) if diff < resk else diff
    return ik, max(err, abs(ik) * 1e-15)


def _adaptive_1d(f, a: float, b: float, spec: QuadSpec, breakpoints=()) -> IntegralResult:
    if b <= a:
        return IntegralResult(0.0, 0.0, 0, True)
    pts = sorted({a, b, *[p for p in breakpoints if a < p < b]})
    heap = []
    evals = 0
    for lo, hi in zip(pts, pts[1:]):
        v, e = _gk_panel(f, lo, hi)
        evals += 15
        heappush(heap, (-e, lo, hi, v, e))
    splits = 0
    while splits < spec.max_refinements:
        total = math.fsum(item[3] for item in heap)
        err = math.fsum(item[4] for item in heap)
        if err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            return IntegralResult(total, err, evals, True)
        _, lo, hi, v0, _ = heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval exhausted at machine precision
            heappush(heap, (0.0, lo, hi, v0, 0.0))
            break
        for a2, b2 in ((lo, mid), (mid, hi)):
            v, e = _gk_panel(f, a2, b2)
            evals += 15
            heappush(heap, (-e, a2, b2, v, e))
        splits += 1
    total = math.fsum(item[3] for item in heap)
    err = math.fsum(item[4] for item in heap)
    ok = err <= max(spec.abs_tol, spec.rel_tol * abs(total))
    return IntegralResult(total, err, evals, ok)


# ---------------------------------------------------------------------------
# tanh-sinh (double exponential) rule for endpoint singularities

_TS_CACHE: dict = {}


def _ts_nodes(level: int):
    """Nodes/weights of the tanh-sinh rule at step h = 2^-level on (-1, 1)."""
    if level not in _TS_CACHE:
        h = 2.0 ** (-level)
        kmax = int(math.ceil(6.0 / h))
        k = np.arange(-kmax, kmax + 1)
        t = k * h
        u = 0.5 * math.pi * np.sinh(t)
        x = np.tanh(u)
        # sech^2(u) written via exp to avoid cosh overflow at the extreme nodes
        sech2 = (2.0 / (np.exp(u) + np.exp(-u))) ** 2
        w = h * 0.5 * math.pi * np.cosh(t) * sech2
        keep = ((1.0 - np.abs(x)) > 1e-290) & (w > 0.0)
        _TS_CACHE[level] = (x[keep], w[keep])
    return _TS_CACHE[level]


def _tanhsinh_1d(f, a: float, b: float, spec: QuadSpec) -> IntegralResult:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    prev = None
    last_diff = float("inf")
    evals = 0
    val = 0.0
    hit = False
    for level in range(3, 13):
        x, w = _ts_nodes(level)
        y = np.asarray(f(mid + half * x), dtype=float)
        evals += x.size
        val = half * float(np.dot(w, y))
        if prev is not None:
            last_diff = abs(val - prev)
            if hit:
                # one refinement past first convergence: the doubling roughly
                # squares the accuracy, so last_diff now bounds the error
                return IntegralResult(val, last_diff, evals, True)
            hit = last_diff <= max(spec.abs_tol, spec.rel_tol * abs(val))
        prev = val
    return IntegralResult(val, last_diff, evals, hit)


# ---------------------------------------------------------------------------
# 2-D boxes: tensor Gauss-Kronrod with adaptive rectangle splitting


def _gk2_cell(f, cell):
    (ax, bx), (ay, by) = cell
    hx, hy = 0.5 * (bx - ax), 0.5 * (by - ay)
    cx, cy = 0.5 * (ax + bx), 0.5 * (ay + by)
    X, Y = np.meshgrid(cx + hx * _GK_X, cy + hy * _GK_X, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel()], axis=-1)
    vals = np.asarray(f(pts), dtype=float).reshape(15, 15)
    ik = hx * hy * float(_GK_WK @ vals @ _GK_WK)
    ig = hx * hy * float(_GK_WG @ vals @ _GK_WG)
    err = abs(ik - ig)
    return ik, max(err, abs(ik) * 1e-14)


def _adaptive_2d(f, box, spec: QuadSpec) -> IntegralResult:
    heap = []
    v, e = _gk2_cell(f, box)
    evals = 225
    heappush(heap, (-e, box, v, e))
    splits = 0
    while splits < spec.max_refinements:
        total = math.fsum(item[2] for item in heap)
        err = math.fsum(item[3] for item in heap)
        if err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            return IntegralResult(total, err, evals, True)
        _, cell, _, _ = heappop(heap)
        (ax, bx), (ay, by) = cell
        if bx - ax >= by - ay:
            m = 0.5 * (ax + bx)
            children = (((ax, m), (ay, by)), ((m, bx), (ay, by)))
        else:
            m = 0.5 * (ay + by)
            children = (((ax, bx), (ay, m)), ((ax, bx), (m, by)))
        for child in children:
            v, e = _gk2_cell(f, child)
            evals += 225
            heappush(heap, (-e, child, v, e))
        splits += 1
    total = math.fsum(item[2] for item in heap)
    err = math.fsum(item[3] for item in heap)
    ok = err <= max(spec.abs_tol, spec.rel_tol * abs(total))
    return IntegralResult(total, err, evals, ok)


def _substituted_half(f, a: float, m: float, alpha: float, left: bool, spec: QuadSpec):
    """Integrate f over [a, m] (or [m, b] when left=False) with a declared
    power singularity f ~ (distance to endpoint)^alpha, alpha in (-1, 0), by
    the exact substitution x = endpoint +- t^{1/(1+alpha)} that makes the
    integrand bounded."""
    beta = 1.0 / (1.0 + alpha)
    width = abs(m - a)
    T = width ** (1.0 + alpha)
    sgn = 1.0 if left else -1.0

    def g(t):
        t = np.asarray(t, dtype=float)
        x = a + sgn * t ** beta
        return np.asarray(f(x), dtype=float) * beta * t ** (beta - 1.0)

    return _adaptive_1d(g, 0.0, T, spec)


def integrate_adaptive(
    f: Callable,
    domain,
    spec: QuadSpec = DEFAULT_SPEC,
    *,
    breakpoints: Sequence[float] = (),
    singular_endpoints: bool = False,
    endpoint_powers: tuple | None = None,
) -> IntegralResult:
    """Integrate f over an interval (a, b) or a box ((ax,bx),(ay,by)).

    Integrable endpoint blow-up is handled two ways: ``endpoint_powers``
    (alpha_left, alpha_right) declares known power singularities, removed by
    an exact substitution; ``singular_endpoints`` switches to the tanh-sinh
    rule for undeclared (but integrable) endpoint behaviour.
    """
    if np.ndim(domain[0]) == 0:
        a, b = float(domain[0]), float(domain[1])
        if endpoint_powers is not None:
            aL, aR = endpoint_powers
            mid = 0.5 * (a + b)
            parts = []
            if aL is not None and aL < 0.0:
                parts.append(_substituted_half(f, a, mid, aL, True, spec))
            else:
                parts.append(_adaptive_1d(f, a, mid, spec, breakpoints))
            if aR is not None and aR < 0.0:
                parts.append(_substituted_half(f, b, mid, aR, False, spec))
            else:
                parts.append(_adaptive_1d(f, mid, b, spec, breakpoints))
            return IntegralResult(
                math.fsum(p.value for p in parts),
                math.fsum(p.err_estimate for p in parts),
                sum(p.evaluations for p in parts),
                all(p.converged for p in parts),
            )
        if singular_endpoints:
            return _tanhsinh_1d(f, a, b, spec)
        return _adaptive_1d(f, a, b, spec, breakpoints)
    if len(domain) == 2:
        return _adaptive_2d(f, domain, spec)
    raise DomainError("integrate_adaptive supports intervals and 2-D boxes")


# ---------------------------------------------------------------------------
# principal value by symmetric exclusion + Richardson


def _sphere_rule(n: int, m: int):
    """Antipodally symmetric quadrature nodes/weights on S^{n-1}."""
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if n == 2:
        th = 2.0 * math.pi * np.arange(m) / m
        w = np.full(m, 2.0 * math.pi / m)
        return np.stack([np.cos(th), np.sin(th)], axis=-1), w
    if n == 3:
        # product rule: GK-like Gauss-Legendre in cos(phi), trapezoid in theta
        mu, wmu = np.polynomial.legendre.leggauss(m)
        th = 2.0 * math.pi * np.arange(2 * m) / (2 * m)
        wth = 2.0 * math.pi / (2 * m)
        MU, TH = np.meshgrid(mu, th, indexing="ij")
        sin_phi = np.sqrt(1.0 - MU ** 2)
        pts = np.stack([MU, sin_phi * np.cos(TH), sin_phi * np.sin(TH)], axis=-1)
        w = (wmu[:, None] * wth * np.ones_like(TH)).ravel()
        return pts.reshape(-1, 3), w
    raise DomainError(f"sphere rule implemented for n <= 3, got n={n}")


def _annulus_integral(f, x0, eps, R, n, spec, m_ang=64, breakpoints=()):
    """integral of f over the annulus eps < |y - x0| < R, with antipodally
    paired angular nodes so odd parts cancel exactly.  The angular
    discretization error is estimated by comparing against the half-density
    rule and added to the radial error estimate."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    omega, w = _sphere_rule(n, m_ang)

    def make_radial(om, wts):
        def radial(r):
            r = np.atleast_1d(r)
            pts = x0[None, None, :] + r[:, None, None] * om[None, :, :]
            if n == 1:
                vals = np.asarray(f(pts[..., 0].ravel()), dtype=float).reshape(r.size, -1)
            else:
                vals = np.asarray(f(pts.reshape(-1, n)), dtype=float).reshape(r.size, -1)
            return (vals @ wts) * r ** (n - 1)
        return radial

    inner = _adaptive_1d(make_radial(omega, w), eps, R, spec, breakpoints=breakpoints)
    ang_err = 0.0
    if n >= 2 and omega.shape[0] >= 8:
        half = _adaptive_1d(make_radial(omega[::2], 2.0 * w[::2]), eps, R, spec,
                            breakpoints=breakpoints)
        ang_err = abs(inner.value - half.value)
    return IntegralResult(inner.value, inner.err_estimate + ang_err,
                          inner.evaluations * omega.shape[0], inner.converged)


def integrate_pv(
    f: Callable,
    x0,
    domain,
    spec: QuadSpec = DEFAULT_SPEC,
    *,
    m_ang: int = 64,
    breakpoints: Sequence[float] = (),
) -> IntegralResult:
    """Cauchy principal value of an integrand singular at x0.

    The exclusion is a symmetric ball; the cutoff schedule of ``spec`` drives
    a sequence of shell integrals that is Richardson-accelerated.  The result
    is flagged non-converged when successive cutoff values fail to settle.

    ``domain`` is a 1-D interval (a, b) containing x0, or ("ball", x0, R) in
    dimension n <= 3 (the ball must be centred at the singular point).
    """
    if isinstance(domain, tuple) and len(domain) == 3 and domain[0] == "ball":
        _, center, R = domain
        center = np.atleast_1d(np.asarray(center, dtype=float))
        x0v = np.atleast_1d(np.asarray(x0, dtype=float))
        if not np.allclose(center, x0v):
            raise DomainError("PV ball domain must be centred at the singular point")
        n = center.size
        outer_pieces = []
        w_sym = float(R)
    else:
        a, b = float(domain[0]), float(domain[1])
        x0f = float(np.ravel(x0)[0])
        if not (a < x0f < b):
            raise DomainError("PV point must lie inside the domain")
        n = 1
        w_sym = min(x0f - a, b - x0f)
        outer_pieces = [(a, x0f - w_sym), (x0f + w_sym, b)]
        x0v = np.array([x0f])

    cutoffs = [c for c in spec.pv_cutoffs if c < w_sym]
    if not cutoffs:
        raise DomainError("no pv_cutoffs inside the symmetric window")

    # fixed outer (asymmetric) part, independent of the cutoff
    outer_val, outer_err, evals = 0.0, 0.0, 0
    for lo, hi in outer_pieces:
        if hi > lo:
            r = _adaptive_1d(f, lo, hi, spec, breakpoints)
            outer_val += r.value
            outer_err += r.err_estimate
            evals += r.evaluations

    # base shell [smallest cutoff, w_sym], then increments between cutoffs
    base = _annulus_integral(f, x0v if n > 1 else x0v[0], cutoffs[-1], w_sym, n,
                             spec, m_ang, breakpoints)
    evals += base.evaluations
    quad_err = outer_err + base.err_estimate
    increments = []
    for k in range(len(cutoffs) - 1):
        shell = _annulus_integral(f, x0v if n > 1 else x0v[0], cutoffs[k + 1],
                                  cutoffs[k], n, spec, m_ang)
        increments.append(shell.value)
        quad_err += shell.err_estimate
        evals += shell.evaluations
    # I(cutoffs[k]) = base - sum of shells below cutoff k
    seq = [base.value]
    for inc in reversed(increments):
        seq.append(seq[-1] - inc)
    seq = seq[::-1]  # ordered by decreasing cutoff; seq[-1] = finest

    value, rich_err, converged = _richardson(seq, spec)
    return IntegralResult(outer_val + value, quad_err + rich_err, evals, converged)


def _richardson(seq, spec: QuadSpec):
    """Accelerate the cutoff sequence of a symmetric-exclusion PV integral.

    The cutoffs are geometric, so the residual is itself geometric with an
    unknown ratio; Aitken's delta-squared removes it without knowing the
    order.  Returns (value, residual_estimate, converged)."""
    last = seq[-1]
    tol = max(spec.abs_tol, spec.rel_tol * abs(last))
    if len(seq) >= 2 and abs(seq[-1] - seq[-2]) <= tol:
        return last, abs(seq[-1] - seq[-2]), True
    if len(seq) < 3:
        return last, float("inf"), False
    accel = []
    for k in range(len(seq) - 2):
        d1 = seq[k + 1] - seq[k]
        d2 = seq[k + 2] - seq[k + 1]
        den = d2 - d1
        if den != 0.0:
            accel.append(seq[k + 2] - d2 * d2 / den)
        else:
            accel.append(seq[k + 2])
    resid = abs(accel[-1] - accel[-2]) if len(accel) >= 2 else abs(accel[-1] - last)
    return accel[-1], resid, resid <= 10.0 * tol


# ---------------------------------------------------------------------------
# Monte Carlo


def _region_box_membership(region):
    if isinstance(region, tuple):
        box = np.asarray(region, dtype=float)
        return box, None
    box = np.asarray(region.bounding_box, dtype=float)
    return box, region.membership


def integrate_mc(f: Callable, region, spec: QuadSpec = DEFAULT_SPEC) -> IntegralResult:
    """Plain Monte Carlo over a box or a shape with membership oracle.

    Unbiased; the error estimate is the sample standard error; output is a
    deterministic function of ``spec.rng_seed``.
    """
    if spec.mc_samples < 1:
        raise DomainError("mc_samples must be >= 1")
    box, membership = _region_box_membership(region)
    n = box.shape[0]
    vol = float(np.prod(box[:, 1] - box[:, 0]))
    rng = np.random.default_rng(spec.rng_seed)
    N = spec.mc_samples
    pts = rng.random((N, n)) * (box[:, 1] - box[:, 0]) + box[:, 0]
    vals = np.asarray(f(pts), dtype=float)
    if membership is not None:
        vals = np.where(membership(pts), vals, 0.0)
    mean = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(N)) if N > 1 else float("inf")
    return IntegralResult(vol * mean, vol * se, N, True)


def mc_region_volume(region, spec: QuadSpec = DEFAULT_SPEC) -> IntegralResult:
    """Volume of a membership-defined region by seeded Monte Carlo."""
    return integrate_mc(lambda pts: np.ones(pts.shape[0]), region, spec)
