"""Moving-planes geometry: the ellipsoid / inner-parallel family and its
stability-exponent limit, critical-plane computation, slab symmetric
difference measures, and the sharp perturbed-disk counterexample family.

Shapes are analytic descriptors (membership oracle + boundary sampling +
interior distance where meaningful) serializable to a small versioned JSON
schema, so experiment configurations round-trip through the CLI.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .specfun import DomainError, FracParams, gamma_torsion, hyp2f1
from .quadrature import DEFAULT_SPEC, QuadSpec
from .fraclap import ValidationError

SHAPE_SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# shape descriptors


class ShapeDescriptor:
    """Analytic set description with membership test and boundary access."""

    kind = "abstract"

    def membership(self, pts) -> np.ndarray:
        raise NotImplementedError

    def membership_outer(self, pts, margin: float) -> np.ndarray:
        """Membership of a slightly inflated set; used for predicate margins."""
        raise NotImplementedError

    @property
    def bounding_box(self):
        raise NotImplementedError

    def boundary_points(self, m: int) -> np.ndarray:
        raise NotImplementedError

    def distance_to_boundary(self, pts) -> np.ndarray:
        """Unsigned distance to the boundary (meaningful inside and outside)."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_dict(d: dict) -> "ShapeDescriptor":
        if d.get("shape_schema_version") != SHAPE_SCHEMA_VERSION:
            raise DomainError("unsupported shape schema version")
        kind = d["kind"]
        if kind == "ball":
            return Ball(center=tuple(d["center"]), radius=d["radius"])
        if kind == "halfspace":
            return HalfSpace(dim=d["dim"], offset=d["offset"])
        if kind == "ellipsoid":
            return Ellipsoid(dim=d["dim"], eps=d["eps"])
        if kind == "inner_parallel":
            return InnerParallel(ShapeDescriptor.from_dict(d["base"]), d["rho"])
        if kind == "perturbed_disk":
            return PerturbedDisk(eps=d["eps"], alpha=d["alpha"])
        raise DomainError(f"unknown shape kind {kind!r}")

    @staticmethod
    def from_json(text: str) -> "ShapeDescriptor":
        return ShapeDescriptor.from_dict(json.loads(text))


def _pts2d(pts):
    return np.atleast_2d(np.asarray(pts, dtype=float))


@dataclass
class Ball(ShapeDescriptor):
    center: tuple
    radius: float
    kind = "ball"

    def __post_init__(self):
        self.center = tuple(float(c) for c in np.atleast_1d(self.center))
        if self.radius <= 0:
            raise DomainError("ball radius must be positive")

    @property
    def dim(self):
        return len(self.center)

    def membership(self, pts):
        pts = _pts2d(pts)
        c = np.asarray(self.center)
        return np.sum((pts - c[None, :]) ** 2, axis=-1) < self.radius ** 2

    def membership_outer(self, pts, margin):
        pts = _pts2d(pts)
        c = np.asarray(self.center)
        return np.sum((pts - c[None, :]) ** 2, axis=-1) < (self.radius + margin) ** 2

    @property
    def bounding_box(self):
        return [(c - self.radius, c + self.radius) for c in self.center]

    def boundary_points(self, m):
        return self.center + self.radius * _unit_sphere_grid(self.dim, m)

    def distance_to_boundary(self, pts):
        pts = _pts2d(pts)
        c = np.asarray(self.center)
        return np.abs(self.radius - np.sqrt(np.sum((pts - c[None, :]) ** 2, axis=-1)))

    @property
    def interior_ball_radius(self):
        return self.radius

    def classical_perimeter_in_ball(self, R, center=None):
        """H^{n-1}(boundary cap inside B_R(center)); exact when the window
        ball contains the whole sphere."""
        c = np.zeros(self.dim) if center is None else np.asarray(center)
        gap = R - (np.linalg.norm(np.asarray(self.center) - c) + self.radius)
        if gap < 0:
            raise DomainError("window ball must contain the sphere")
        from .specfun import sphere_area

        return sphere_area(self.dim) * self.radius ** (self.dim - 1)

    def to_dict(self):
        return {"shape_schema_version": SHAPE_SCHEMA_VERSION, "kind": "ball",
                "center": list(self.center), "radius": self.radius}


@dataclass
class HalfSpace(ShapeDescriptor):
    """{x_1 < offset}."""

    dim: int
    offset: float = 0.0
    kind = "halfspace"

    def membership(self, pts):
        return _pts2d(pts)[:, 0] < self.offset

    def membership_outer(self, pts, margin):
        return _pts2d(pts)[:, 0] < self.offset + margin

    @property
    def bounding_box(self):
        # unbounded; a conventional window for MC callers
        return [(-4.0, 4.0)] * self.dim

    def boundary_points(self, m):
        grid = np.linspace(-2.0, 2.0, m)
        if self.dim == 2:
            return np.stack([np.full(m, self.offset), grid], axis=-1)
        raise DomainError("boundary sampling for halfspace implemented in dim 2")

    def distance_to_boundary(self, pts):
        return np.abs(_pts2d(pts)[:, 0] - self.offset)

    def classical_perimeter_in_ball(self, R, center=None):
        """H^{n-1}({x_1 = offset} cap B_R); dim 2: a chord of length
        2 sqrt(R^2 - offset^2)."""
        c1 = 0.0 if center is None else float(np.asarray(center)[0])
        h = abs(self.offset - c1)
        if h >= R:
            return 0.0
        if self.dim == 2:
            return 2.0 * math.sqrt(R * R - h * h)
        if self.dim == 3:
            return math.pi * (R * R - h * h)
        raise DomainError("implemented for dim 2 and 3")

    def to_dict(self):
        return {"shape_schema_version": SHAPE_SCHEMA_VERSION, "kind": "halfspace",
                "dim": self.dim, "offset": self.offset}


def _unit_sphere_grid(n, m):
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        th = 2.0 * math.pi * np.arange(m) / m
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    if n == 3:
        k = int(math.sqrt(m)) + 1
        phi = math.pi * (np.arange(k) + 0.5) / k
        th = 2.0 * math.pi * np.arange(k) / k
        P, T = np.meshgrid(phi, th, indexing="ij")
        return np.stack([np.cos(P), np.sin(P) * np.cos(T), np.sin(P) * np.sin(T)],
                        axis=-1).reshape(-1, 3)
    raise DomainError("sphere grids implemented for n <= 3")


def _ellipse_project(u, v, a, b, grid: int = 256):
    """Distance from points (u, v) (arrays) to the ellipse
    u^2/a^2 + v^2/b^2 = 1: dense scan over the quarter arc followed by a few
    Newton steps on the stationarity equation."""
    u = np.abs(np.atleast_1d(np.asarray(u, dtype=float)))
    v = np.abs(np.atleast_1d(np.asarray(v, dtype=float)))
    th = np.linspace(0.0, 0.5 * math.pi, grid)
    ex, ey = a * np.cos(th), b * np.sin(th)
    d2 = (u[:, None] - ex[None, :]) ** 2 + (v[:, None] - ey[None, :]) ** 2
    t = th[np.argmin(d2, axis=1)]
    for _ in range(8):
        st, ct = np.sin(t), np.cos(t)
        # stationarity: f(t) = u a sin t - v b cos t - (a^2-b^2) sin t cos t
        f = u * a * st - v * b * ct - (a * a - b * b) * st * ct
        fp = u * a * ct + v * b * st - (a * a - b * b) * (ct * ct - st * st)
        step = np.where(np.abs(fp) > 1e-14, f / np.where(fp == 0, 1.0, fp), 0.0)
        t = np.clip(t - step, 0.0, 0.5 * math.pi)
    return np.sqrt((u - a * np.cos(t)) ** 2 + (v - b * np.sin(t)) ** 2)


@dataclass
class Ellipsoid(ShapeDescriptor):
    """The one-parameter family x_1^2/(1+eps)^2 + |x'|^2 < 1."""

    dim: int
    eps: float
    kind = "ellipsoid"

    def __post_init__(self):
        if self.eps < 0.0:
            raise DomainError("eps must be nonnegative")

    def _qform(self, pts):
        pts = _pts2d(pts)
        return pts[:, 0] ** 2 / (1.0 + self.eps) ** 2 + np.sum(pts[:, 1:] ** 2, axis=-1)

    def membership(self, pts):
        return self._qform(pts) < 1.0

    def membership_outer(self, pts, margin):
        pts = _pts2d(pts)
        q = (pts[:, 0] ** 2 / (1.0 + self.eps + margin) ** 2
             + np.sum(pts[:, 1:] ** 2, axis=-1) / (1.0 + margin) ** 2)
        return q < 1.0

    @property
    def bounding_box(self):
        b = [(-1.0 - self.eps, 1.0 + self.eps)] + [(-1.0, 1.0)] * (self.dim - 1)
        return b

    def boundary_points(self, m):
        sph = _unit_sphere_grid(self.dim, m)
        out = sph.copy()
        out[:, 0] *= 1.0 + self.eps
        return out

    def distance_to_boundary(self, pts):
        pts = _pts2d(pts)
        u = pts[:, 0]
        v = np.sqrt(np.sum(pts[:, 1:] ** 2, axis=-1))
        return _ellipse_project(u, v, 1.0 + self.eps, 1.0)

    @property
    def interior_ball_radius(self):
        # curvature radius at the long-axis poles
        return 1.0 / (1.0 + self.eps)

    @property
    def inradius(self):
        return 1.0

    @property
    def circumradius(self):
        return 1.0 + self.eps

    def rho_deficit(self):
        """circumradius - inradius; equals eps exactly for this family."""
        return self.circumradius - self.inradius

    def to_dict(self):
        return {"shape_schema_version": SHAPE_SCHEMA_VERSION, "kind": "ellipsoid",
                "dim": self.dim, "eps": self.eps}


@dataclass
class InnerParallel(ShapeDescriptor):
    """Inner parallel set {x in base : dist(x, boundary of base) > rho}."""

    base: ShapeDescriptor
    rho: float
    kind = "inner_parallel"

    def __post_init__(self):
        r_int = getattr(self.base, "interior_ball_radius", None)
        if r_int is not None and self.rho >= r_int:
            raise DomainError(
                f"rho={self.rho} must be below the interior ball radius {r_int}")
        if self.rho <= 0.0:
            raise DomainError("rho must be positive")

    @property
    def dim(self):
        return self.base.dim

    def membership(self, pts):
        inside = self.base.membership(pts)
        d = self.base.distance_to_boundary(pts)
        return inside & (d > self.rho)

    def membership_outer(self, pts, margin):
        inside = self.base.membership(pts)
        d = self.base.distance_to_boundary(pts)
        return inside & (d > self.rho - margin)

    @property
    def bounding_box(self):
        return [(lo + self.rho, hi - self.rho) for lo, hi in self.base.bounding_box]

    def boundary_points(self, m):
        bp = self.base.boundary_points(m)
        # pull each boundary point inward along the (approximate) normal
        out = []
        for pt in bp:
            out.append(_pull_inward(self.base, pt, self.rho))
        return np.asarray(out)

    def distance_to_boundary(self, pts):
        # exact under the interior ball condition: d_inner = d_base - rho inside
        return np.abs(self.base.distance_to_boundary(pts) - self.rho)

    def to_dict(self):
        return {"shape_schema_version": SHAPE_SCHEMA_VERSION, "kind": "inner_parallel",
                "base": self.base.to_dict(), "rho": self.rho}


def _pull_inward(base: ShapeDescriptor, pt: np.ndarray, rho: float) -> np.ndarray:
    """Point at distance rho inside the base from the boundary point pt,
    found along the inward normal estimated from the distance function."""
    h = 1e-6
    n = pt.size
    grad = np.zeros(n)
    # gradient of the squared membership defect; use central differences of
    # the distance function of the base taken with an interior sign
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        dp = _signed_dist(base, pt + e)
        dm = _signed_dist(base, pt - e)
        grad[i] = (dp - dm) / (2 * h)
    grad /= max(np.linalg.norm(grad), 1e-12)
    x = pt + rho * grad  # signed distance increases inward
    # Newton polish: move along grad until signed distance is rho
    for _ in range(40):
        d = _signed_dist(base, x) - rho
        if abs(d) < 1e-12:
            break
        x = x - d * grad
    return x


def _signed_dist(base: ShapeDescriptor, pt) -> float:
    inside = bool(base.membership(pt[None, :])[0])
    d = float(base.distance_to_boundary(pt[None, :])[0])
    return d if inside else -d


def inner_parallel(base: ShapeDescriptor, rho: float) -> InnerParallel:
    """Descriptor of {x : dist(x, boundary) > rho}; the Minkowski identity
    inner + B_rho = base holds under the interior ball condition."""
    return InnerParallel(base, rho)


@dataclass
class Complement(ShapeDescriptor):
    """Complement of a base shape; shares its boundary."""

    base: ShapeDescriptor
    kind = "complement"

    @property
    def dim(self):
        return self.base.dim

    def membership(self, pts):
        return ~self.base.membership(pts)

    def membership_outer(self, pts, margin):
        return ~self.base.membership(pts)

    @property
    def bounding_box(self):
        return self.base.bounding_box

    def boundary_points(self, m):
        return self.base.boundary_points(m)

    def distance_to_boundary(self, pts):
        return self.base.distance_to_boundary(pts)

    def classical_perimeter_in_ball(self, R, center=None):
        return self.base.classical_perimeter_in_ball(R, center=center)

    def to_dict(self):
        return {"shape_schema_version": SHAPE_SCHEMA_VERSION, "kind": "complement",
                "base": self.base.to_dict()}


@dataclass
class EmptyShape(ShapeDescriptor):
    """The empty set (zero perimeter, no boundary)."""

    dim: int = 2
    kind = "empty"

    def membership(self, pts):
        return np.zeros(_pts2d(pts).shape[0], dtype=bool)

    def membership_outer(self, pts, margin):
        return self.membership(pts)

    @property
    def bounding_box(self):
        return [(-1.0, 1.0)] * self.dim

    def boundary_points(self, m):
        return np.empty((0, self.dim))

    def distance_to_boundary(self, pts):
        return np.full(_pts2d(pts).shape[0], np.inf)

    def classical_perimeter_in_ball(self, R, center=None):
        return 0.0

    def to_dict(self):
        return {"shape_schema_version": SHAPE_SCHEMA_VERSION, "kind": "empty",
                "dim": self.dim}


# ---------------------------------------------------------------------------
# perturbed disk (sharp counterexample family)


def _poub(u):
    """h(u) = exp(-1/u) extended by 0; building block of the blend."""
    u = np.asarray(u, dtype=float)
    with np.errstate(over="ignore", divide="ignore"):
        return np.where(u > 0.0, np.exp(-1.0 / np.maximum(u, 1e-300)), 0.0)


def _blend_down(u):
    """C-infinity transition 1 -> 0 on [0, 1] (partition-of-unity blend)."""
    return _poub(1.0 - u) / (_poub(u) + _poub(1.0 - u))


def bump_eta(tau):
    """Smooth odd bump with eta(tau) = 2 tau on (-1/4, 1/4), |eta| <= 1,
    support in (-1, 1): eta(tau) = 2 tau * blend((|tau|-1/4)/(3/4))."""
    tau = np.asarray(tau, dtype=float)
    a = np.abs(tau)
    chi = np.where(a <= 0.25, 1.0, np.where(a >= 1.0, 0.0,
                   _blend_down(np.clip((a - 0.25) / 0.75, 0.0, 1.0))))
    return 2.0 * tau * chi


@dataclass
class PerturbedDisk(ShapeDescriptor):
    """Unit disk in R^2 whose lower-right boundary arc is replaced by the
    graph x_2 = -sqrt(1-x_1^2) - eps * eta((x_1 - eps^{1-1/alpha}) / eps^{1/alpha})
    for x_1 in (0, 1/2)."""

    eps: float
    alpha: float
    kind = "perturbed_disk"

    def __post_init__(self):
        if not (0.0 < self.eps < 0.05):
            raise DomainError("eps must be small and positive (< 0.05)")
        if self.alpha <= 1.0:
            raise DomainError("alpha must exceed 1")

    @property
    def dim(self):
        return 2

    @property
    def bump_center(self):
        return self.eps ** (1.0 - 1.0 / self.alpha)

    @property
    def bump_halfwidth(self):
        return self.eps ** (1.0 / self.alpha)

    def lower_graph(self, x1):
        x1 = np.asarray(x1, dtype=float)
        arg = (x1 - self.bump_center) / self.bump_halfwidth
        return -np.sqrt(np.maximum(1.0 - x1 ** 2, 0.0)) - self.eps * bump_eta(arg)

    def membership(self, pts):
        pts = _pts2d(pts)
        x1, x2 = pts[:, 0], pts[:, 1]
        window = (x1 > 0.0) & (x1 < 0.5) & (x2 > -1.5) & (x2 < -0.5)
        in_disk = x1 ** 2 + x2 ** 2 < 1.0
        above = x2 > self.lower_graph(x1)
        return np.where(window, above, in_disk)

    def membership_outer(self, pts, margin):
        pts = _pts2d(pts)
        x1, x2 = pts[:, 0], pts[:, 1]
        window = (x1 > 0.0) & (x1 < 0.5) & (x2 > -1.5) & (x2 < -0.5)
        in_disk = x1 ** 2 + x2 ** 2 < (1.0 + margin) ** 2
        above = x2 > self.lower_graph(x1) - margin
        return np.where(window, above, in_disk)

    @property
    def bounding_box(self):
        pad = 2.0 * self.eps
        return [(-1.0 - pad, 1.0 + pad), (-1.0 - pad, 1.0 + pad)]

    def boundary_points(self, m):
        """Dense boundary sampling: circle points away from the replaced arc,
        graph points (extra-dense across the bump) inside it."""
        th = 2.0 * math.pi * np.arange(m) / m
        circ = np.stack([np.cos(th), np.sin(th)], axis=-1)
        keep = ~((circ[:, 0] > 0.0) & (circ[:, 0] < 0.5) & (circ[:, 1] < -0.5))
        circ = circ[keep]
        xs_uniform = np.linspace(1e-4, 0.5 - 1e-4, m // 2)
        c, w = self.bump_center, self.bump_halfwidth
        xs_bump = np.linspace(max(c - 1.5 * w, 1e-4), min(c + 1.5 * w, 0.5), m)
        xs = np.concatenate([xs_uniform, xs_bump])
        graph = np.stack([xs, self.lower_graph(xs)], axis=-1)
        return np.concatenate([circ, graph], axis=0)

    def distance_to_boundary(self, pts):
        pts = _pts2d(pts)
        bp = self.boundary_points(2000)
        d2 = np.sum((pts[:, None, :] - bp[None, :, :]) ** 2, axis=-1)
        return np.sqrt(np.min(d2, axis=1))

    def to_dict(self):
        return {"shape_schema_version": SHAPE_SCHEMA_VERSION, "kind": "perturbed_disk",
                "eps": self.eps, "alpha": self.alpha}

    def enclosing_radii(self, m: int = 4000):
        """(r, R) with B_r subset Omega subset B_R, from boundary samples."""
        bp = self.boundary_points(m)
        nrm = np.sqrt(np.sum(bp ** 2, axis=-1))
        return float(np.min(nrm)), float(np.max(nrm))

    def interior_ball_radius(self):
        raise DomainError("no analytic interior-ball radius for this family")


# ---------------------------------------------------------------------------
# the ellipsoid torsion family


@dataclass(frozen=True)
class FamilyParams:
    """Shape-family parameters: eps for the ellipsoid/parallel family (the
    family hypothesis needs eps < 1/4), alpha for the perturbed disk."""

    params: FracParams
    eps: float = 0.0
    alpha: float = 2.0

    def __post_init__(self):
        if not (0.0 <= self.eps < 0.25):
            raise DomainError("ellipsoid family requires eps in [0, 1/4)")
        if self.alpha <= 1.0:
            raise DomainError("alpha must exceed 1")


def gamma_torsion_ellipsoid(fp: FamilyParams) -> float:
    """gamma_{n,s,eps} = gamma_{n,s} / ((1+eps) 2F1((n+2s)/2, 1/2; n/2;
    1-(1+eps)^2)); the hypergeometric argument is negative and handled by the
    Pfaff continuation."""
    n, s = fp.params.n, fp.params.s
    z = 1.0 - (1.0 + fp.eps) ** 2
    return gamma_torsion(n, s) / ((1.0 + fp.eps) * hyp2f1((n + 2.0 * s) / 2.0, 0.5, n / 2.0, z))


def ellipsoid_torsion(fp: FamilyParams, x) -> float | np.ndarray:
    """u_eps(x) = gamma_{n,s,eps} (1 - x_1^2/(1+eps)^2 - |x'|^2)^s_+, the
    explicit torsion profile of the ellipsoid."""
    n, s = fp.params.n, fp.params.s
    pts = _pts2d(x)
    q = 1.0 - pts[:, 0] ** 2 / (1.0 + fp.eps) ** 2 - np.sum(pts[:, 1:] ** 2, axis=-1)
    vals = gamma_torsion_ellipsoid(fp) * np.maximum(q, 0.0) ** s
    return vals if np.ndim(x) > 1 else float(vals[0])


def parallel_param(fp: FamilyParams, r) -> np.ndarray:
    """Chart phi_eps(r) = (a_eps(|r|) sqrt(1-|r|^2), b_eps(|r|) r) of the
    upper boundary of the inner parallel set G_eps at distance 1/2."""
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0 or (r.ndim == 1 and fp.params.n > 2)
    rr = np.atleast_2d(r if r.ndim > 0 else np.array([r]))
    if rr.shape[-1] != fp.params.n - 1:
        rr = rr.reshape(-1, fp.params.n - 1)
    tau = np.sqrt(np.sum(rr ** 2, axis=-1))
    if np.any(tau >= 1.0):
        raise DomainError("chart parameter must satisfy |r| < 1")
    e = fp.eps
    root = np.sqrt(1.0 + ((1.0 + e) ** 2 - 1.0) * tau ** 2)
    a = 1.0 + e - 1.0 / (2.0 * root)
    b = 1.0 - (1.0 + e) / (2.0 * root)
    first = a * np.sqrt(1.0 - tau ** 2)
    out = np.concatenate([first[:, None], b[:, None] * rr], axis=-1)
    return out[0] if scalar and out.shape[0] == 1 else out


# ---------------------------------------------------------------------------
# boundary seminorm and the exponent experiment


def boundary_seminorm(u: Callable, chart: Callable, grid: int = 256,
                      param_dim: int = 1, refine_rounds: int = 24) -> float:
    """sup over boundary pairs of |u(x)-u(y)| / |x-y| with x = chart(r),
    y = chart(r~): coarse grid scan, then local refinement around the best
    pair (the supremum may live in the diagonal limit).  The returned value
    is a refined lower bound of the true supremum."""
    if grid < 64:
        raise DomainError("grid must have at least 64 points per dimension")
    if param_dim == 1:
        params = np.linspace(-1.0, 1.0, grid + 2)[1:-1][:, None]
    elif param_dim == 2:
        g = np.linspace(-1.0, 1.0, grid + 2)[1:-1]
        A, B = np.meshgrid(g, g, indexing="ij")
        params = np.stack([A.ravel(), B.ravel()], axis=-1)
        params = params[np.sum(params ** 2, axis=-1) < 1.0 - 1e-9]
    else:
        raise DomainError("charts implemented for 1- and 2-dim parameters")

    pts = np.atleast_2d(chart(params))
    vals = np.asarray(u(pts), dtype=float)
    if np.unique(np.round(pts, 12), axis=0).shape[0] < pts.shape[0]:
        raise ValidationError("degenerate chart: repeated boundary points")

    def pair_quotient(P, V):
        diff = np.abs(V[:, None] - V[None, :])
        dist = np.sqrt(np.sum((P[:, None, :] - P[None, :, :]) ** 2, axis=-1))
        # guard coincident pairs (and the diagonal) against 0/0
        with np.errstate(invalid="ignore", divide="ignore"):
            q = np.where(dist > 1e-9, diff / np.where(dist == 0, 1.0, dist), -1.0)
        idx = np.unravel_index(np.argmax(q), q.shape)
        return float(q[idx]), idx

    best, (i, j) = pair_quotient(pts, vals)
    r1, r2 = params[i].copy(), params[j].copy()
    width = 2.0 / grid
    for _ in range(refine_rounds):
        if width < 1e-6:
            break
        local = []
        for centre in (r1, r2):
            offs = np.linspace(-width, width, 9)
            if param_dim == 1:
                cand = centre[None, :] + offs[:, None]
            else:
                O1, O2 = np.meshgrid(offs, offs, indexing="ij")
                cand = centre[None, :] + np.stack([O1.ravel(), O2.ravel()], axis=-1)
            cand = cand[np.sum(cand ** 2, axis=-1) < 1.0 - 1e-12]
            local.append(cand)
        cand = np.concatenate(local, axis=0)
        P = np.atleast_2d(chart(cand))
        V = np.asarray(u(P), dtype=float)
        q, (i, j) = pair_quotient(P, V)
        if q > best:
            best = q
            r1, r2 = cand[i].copy(), cand[j].copy()
        width *= 0.5
    return best


@dataclass
class LimitRatioResult:
    limit: float
    ratios: list
    eps_list: list
    monotone: bool


def limit_ratio_experiment(eps_list, p: FracParams, grid: int = 512) -> LimitRatioResult:
    """Extrapolated eps -> 0 limit of [u_eps]_{boundary of G_eps} / eps.

    The deficit rho(Omega_eps) equals eps exactly for this family, so the
    ratio uses eps directly.  The error of the ratio is O(eps); a two-point
    linear extrapolation in eps removes the leading term."""
    eps_list = sorted(float(e) for e in eps_list)
    if len(eps_list) < 3:
        raise DomainError("need at least 3 eps values")
    if eps_list[-1] >= 0.25:
        raise DomainError("family hypothesis needs eps < 1/4")
    ratios = []
    for e in reversed(eps_list):  # decreasing
        fp = FamilyParams(params=p, eps=e)
        chart = lambda r: parallel_param(fp, r)
        field = lambda pts: ellipsoid_torsion(fp, pts)
        val = boundary_seminorm(field, chart, grid=grid, param_dim=p.n - 1)
        ratios.append(val / e)
    eps_desc = list(reversed(eps_list))
    r1, r0 = ratios[-1], ratios[-2]
    e1, e0 = eps_desc[-1], eps_desc[-2]
    limit = r1 + (r1 - r0) * e1 / (e0 - e1)
    gaps = [abs(r - limit) for r in ratios]
    monotone = all(gaps[i] >= gaps[i + 1] - 1e-12 for i in range(len(gaps) - 1))
    return LimitRatioResult(limit, ratios, eps_desc, monotone)


# ---------------------------------------------------------------------------
# moving planes: critical plane and slab measures


def critical_plane(shape: ShapeDescriptor, e, tol: float = 1e-9,
                   m_boundary: int = 1000, margin: float = 1e-9,
                   max_depth: int = 48) -> float:
    """Critical value lambda of the moving-planes sweep in direction e: the
    infimum of mu for which the reflected cap
    {x in shape : x.e > mu} stays inside the shape for all plane positions
    above mu.  Bisection over the cap-inclusion predicate evaluated on
    boundary samples of the cap, with a small safety margin."""
    e = np.asarray(e, dtype=float)
    e = e / np.linalg.norm(e)
    bp = shape.boundary_points(m_boundary)
    proj = bp @ e
    Lam = float(np.max(proj))
    lo_all = float(np.min(proj))

    def predicate(mu):
        cap = bp[proj > mu + 1e-15]
        if cap.shape[0] == 0:
            return True
        refl = cap - 2.0 * ((cap @ e) - mu)[:, None] * e[None, :]
        return bool(np.all(shape.membership_outer(refl, margin)))

    hi = Lam - max(tol, 1e-12)
    if not predicate(hi):
        raise ValidationError("cap-inclusion predicate fails arbitrarily close "
                              "to the first touching plane")
    lo = lo_all
    if predicate(lo):
        return lo  # the sweep never fails; critical plane at the far end
    for _ in range(max_depth):
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def slab_measure(shape: ShapeDescriptor, lam: float, gamma: float, e,
                 mc: QuadSpec = DEFAULT_SPEC, rel_target: float = 0.02,
                 abs_floor: float = 1e-7, max_batches: int = 64) -> tuple:
    """Monte Carlo measure of {x in Omega symdiff Omega' :
    dist(x, plane) <= gamma}, where Omega' is the reflection of Omega across
    the critical plane {x.e = lam}.  Sampling is restricted to the slab and
    batched until the standard error is below rel_target * value (or the
    absolute floor).  Returns (value, standard_error, samples)."""
    if not (0.0 < gamma <= 0.25):
        raise DomainError("gamma must lie in (0, 1/4]")
    e = np.asarray(e, dtype=float)
    e = e / np.linalg.norm(e)
    n = e.size
    box = np.asarray(shape.bounding_box, dtype=float)
    # widen the box to cover the reflected copy
    span = np.abs(box[:, 1] - box[:, 0]).max() + 2.0 * abs(lam)
    lo = box[:, 0] - span * np.abs(e)
    hi = box[:, 1] + span * np.abs(e)
    vol_axis = hi - lo

    rng = np.random.default_rng(mc.rng_seed)
    batch = max(mc.mc_samples // 4, 10_000)
    hits, total = 0.0, 0
    hits_sq = 0.0
    for _ in range(max_batches):
        pts = rng.random((batch, n)) * vol_axis + lo
        t = pts @ e
        in_slab = np.abs(t - lam) <= gamma
        member = shape.membership(pts)
        refl = pts - 2.0 * (t - lam)[:, None] * e[None, :]
        member_ref = shape.membership(refl)
        ind = in_slab & (member ^ member_ref)
        hits += float(np.sum(ind))
        hits_sq += float(np.sum(ind))  # indicator: squares equal values
        total += batch
        p_hat = hits / total
        vol = float(np.prod(vol_axis))
        value = vol * p_hat
        se = vol * math.sqrt(max(p_hat * (1.0 - p_hat), 1e-300) / total)
        if se <= max(rel_target * value, abs_floor):
            return value, se, total
    return value, se, total
