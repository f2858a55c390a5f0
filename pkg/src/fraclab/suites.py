"""Named verification suites: each turns a family of closed-form claims into
CheckReports.  Suites are deterministic given the seed; every randomized
check derives its own RNG stream from the seed and its check id.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import specfun as sf
from .specfun import FracParams
from .quadrature import QuadSpec, integrate_adaptive, integrate_mc, integrate_pv
from . import fraclap as fl
from . import poisson as po
from . import bochner as bo
from . import geometry as geo
from . import perimeter as pe
from . import counterexamples as ce
from .report import CheckReport, make_check

NORMALIZATION_NOTE = (
    "c(n,s) = s 4^s Gamma((n+2s)/2) / (pi^{n/2} Gamma(1-s)); the variant "
    "without the pi^{-n/2} factor is inconsistent with the unit-ball torsion "
    "identity and with the n-independence of the reflected-kernel constant, "
    "so the pi^{-n/2} form is used throughout"
)
REFLECTION_NOTE = (
    "the reflected centre is a* = a - 2 a_1 e_1 (true mirror image); dropping "
    "the factor 2 would destroy the antisymmetry of the barrier"
)


@dataclass
class SuiteConfig:
    n: int = 1
    s: float = 0.5
    eps_list: tuple = (0.02, 0.01, 0.005)
    alpha: float = 2.0
    tol: float | None = None
    seed: int = 42
    samples: int = 200_000

    def params(self) -> FracParams:
        return FracParams(self.n, self.s)

    def check_seed(self, check_id: str) -> int:
        return (self.seed * 1_000_003 + zlib.crc32(check_id.encode())) % (2 ** 63)

    def quad(self, check_id: str, abs_tol=1e-9, rel_tol=1e-9, samples=None) -> QuadSpec:
        return QuadSpec(abs_tol=abs_tol, rel_tol=rel_tol,
                        mc_samples=samples or self.samples,
                        rng_seed=self.check_seed(check_id))


# ---------------------------------------------------------------------------
# constants suite


def _torsion_field(n, s):
    g = sf.gamma_torsion(n, s)
    if n == 1:
        f = lambda y: g * np.maximum(1.0 - np.asarray(y, dtype=float) ** 2, 0.0) ** s
    else:
        f = lambda pts: g * np.maximum(
            1.0 - np.sum(np.atleast_2d(pts) ** 2, axis=-1), 0.0) ** s
    return fl.ScalarField(dim=n, f=f, support_radius=1.0,
                          smoothness_note="C^s at the unit sphere")


def _ctilde_quadrature(n, s, q):
    """int_{z_1 > 1} |z|^{-n-2s} dz by an independent polar route."""
    if n == 1:
        res = integrate_adaptive(lambda t: t ** (-1.0 - 2.0 * s), (1.0, 400.0), q)
        return res.value + 400.0 ** (-2.0 * s) / (2.0 * s)
    if n == 2:
        res = integrate_adaptive(
            lambda th: np.cos(th) ** (2.0 * s), (-math.pi / 2, math.pi / 2), q)
        return res.value / (2.0 * s)
    if n == 3:
        res = integrate_adaptive(
            lambda ph: np.cos(ph) ** (2.0 * s) * np.sin(ph), (0.0, math.pi / 2), q)
        return 2.0 * math.pi * res.value / (2.0 * s)
    raise sf.DomainError("quadrature route implemented for n <= 3")


def constants_suite(cfg: SuiteConfig) -> list[CheckReport]:
    checks = []
    p = cfg.params()
    cset = sf.constants(p)
    md = {"normalization": NORMALIZATION_NOTE}

    # gamma function oracle checks
    checks.append(make_check(
        "constants.gamma_one", "Gamma(1) = 1", sf.gamma_fn(1.0), 1.0, 1e-14))
    checks.append(make_check(
        "constants.gamma_half", "Gamma(1/2) = sqrt(pi)",
        sf.gamma_fn(0.5), math.sqrt(math.pi), 1e-13))
    rec = 3.5 * 2.5 * 1.5 * sf.gamma_fn(1.5)
    checks.append(make_check(
        "constants.gamma_recurrence", "Gamma(4.5) via the recurrence from Gamma(1.5)",
        sf.gamma_fn(4.5), rec, 1e-12, tol_mode="rel"))

    # hypergeometric checks
    checks.append(make_check(
        "constants.hyp2f1_origin", "2F1(a,b;c;0) = 1 (empty product)",
        sf.hyp2f1(0.7, 1.3, 2.2, 0.0), 1.0, 1e-15))
    a, b, c, z = 0.3, 1.2, 2.1, 0.3
    lhs = sf.hyp2f1(a, b, c, z)
    rhs = (1 - z) ** (c - a - b) * sf.hyp2f1(c - a, c - b, c, z)
    checks.append(make_check(
        "constants.hyp2f1_euler",
        "Euler transform 2F1(a,b;c;z) = (1-z)^{c-a-b} 2F1(c-a,c-b;c;z)",
        lhs, rhs, 1e-9, tol_mode="rel"))
    grid = np.linspace(0.01, 0.95, 40)
    vals = [sf.hyp2f1(0.8, 1.1, 2.3, float(t)) for t in grid]
    mono = float(np.min(np.diff(vals)))
    checks.append(make_check(
        "constants.hyp2f1_monotone",
        "monotone increasing in z for positive parameters (grid scan)",
        mono, None, 0.0, metadata={"min_increment": mono},
        converged=mono > 0.0))

    # Bessel checks
    checks.append(make_check(
        "constants.bessel_origin", "J_0(0) = 1", sf.bessel_j(0.0, 0.0), 1.0, 1e-15))
    checks.append(make_check(
        "constants.bessel_halfinteger",
        "J_{1/2}(x) = sqrt(2/(pi x)) sin x at x = 1",
        sf.bessel_j(0.5, 1.0), math.sqrt(2 / math.pi) * math.sin(1.0), 1e-12))
    h = 1e-5
    fd = (sf.bessel_j(0.0, 2.4 + h) - sf.bessel_j(0.0, 2.4 - h)) / (2 * h)
    checks.append(make_check(
        "constants.bessel_derivative", "J_0'(x) = -J_1(x) at x = 2.4",
        fd, -sf.bessel_j(1.0, 2.4), 1e-8))

    # exact constant values at (n, s) = (1, 1/2)
    checks.append(make_check(
        "constants.torsion_exact_half",
        "torsion constant at (1, 1/2): 4^{-1/2} Gamma(1/2) / (Gamma(1) Gamma(3/2)) = 1",
        sf.gamma_torsion(1, 0.5), 1.0, 1e-14, metadata=md))
    checks.append(make_check(
        "constants.poisson_exact_half",
        "Poisson constant at (1, 1/2): sin(pi/2) Gamma(1/2) / pi^{3/2} = 1/pi",
        sf.gamma_poisson(1, 0.5), 1.0 / math.pi, 1e-14))
    ref = 8.0 * sf.gamma_fn(0.75) / (math.sqrt(math.pi) * sf.gamma_fn(0.25))
    checks.append(make_check(
        "constants.halfspace_energy_exact_half",
        "half-space energy at (1, 1/2): 8 Gamma(3/4) / (sqrt(pi) Gamma(1/4))",
        sf.phi_halfspace(1, 0.5), ref, 1e-12, tol_mode="rel"))

    # positivity of the full constant set at (n, s)
    vals = [cset.c_frac, cset.gamma_torsion, cset.gamma_poisson, cset.a_hyp,
            cset.kappa_fk, cset.c_tilde, cset.a_ext, cset.a_tilde_ext,
            cset.phi_halfspace]
    checks.append(make_check(
        "constants.positivity", "all nine named constants strictly positive",
        float(min(vals)), None, 0.0, converged=min(vals) > 0.0,
        metadata={**md, "values": {k: float(v) for k, v in zip(
            ["c_frac", "gamma_torsion", "gamma_poisson", "a_hyp", "kappa_fk",
             "c_tilde", "a_ext", "a_tilde_ext", "phi_halfspace"], vals)}}))

    # recurrences on the grid
    worst_t, worst_a = 0.0, 0.0
    for nn in (1, 2, 3, 5):
        for ss in np.arange(0.1, 0.95, 0.1):
            ss = float(ss)
            lhs = sf.gamma_torsion(nn + 2, ss) * (nn + 2 * ss)
            rhs = nn * sf.gamma_torsion(nn, ss)
            worst_t = max(worst_t, abs(lhs - rhs) / abs(rhs))
            lhs = sf.a_hyp(nn + 2, ss) * (nn + 2 * ss + 2)
            rhs = nn * sf.a_hyp(nn, ss)
            worst_a = max(worst_a, abs(lhs - rhs) / abs(rhs))
    checks.append(make_check(
        "constants.torsion_recurrence",
        "gamma(n+2,s) (n+2s) = n gamma(n,s) on the (n, s) grid",
        worst_t, 0.0, 1e-12))
    checks.append(make_check(
        "constants.a_hyp_recurrence",
        "a(n+2,s) (n+2s+2) = n a(n,s) on the (n, s) grid",
        worst_a, 0.0, 1e-12))

    # c_tilde: identity and n-independence by quadrature
    checks.append(make_check(
        "constants.c_tilde_identity",
        "c_tilde(s) = c(1,s)/(2s) in closed form",
        cset.c_tilde, sf.c_frac(1, p.s) / (2 * p.s), 1e-13, tol_mode="rel"))
    q = cfg.quad("constants.c_tilde_independence", 1e-10, 1e-10)
    worst = 0.0
    route = {}
    for nn in (1, 2, 3):
        val = sf.c_frac(nn, p.s) * _ctilde_quadrature(nn, p.s, q)
        route[nn] = val
        worst = max(worst, abs(val - cset.c_tilde) / cset.c_tilde)
    checks.append(make_check(
        "constants.c_tilde_independence",
        "c(n,s) int_{z_1>1} |z|^{-n-2s} dz is n-independent (quadrature, n = 1,2,3)",
        worst, 0.0, 1e-6, metadata={"per_dimension": {str(k): v for k, v in route.items()},
                                    **md}))

    # half-space energy divergence bracket as s -> 1
    brack = [sf.phi_halfspace(p.n, ss) * (1 - ss) for ss in (0.9, 0.95, 0.99)]
    lo_ref, hi_ref = 0.5, 12.0  # recorded bracket, generous for n <= 3
    ok = all(lo_ref <= b <= hi_ref for b in brack)
    checks.append(make_check(
        "constants.halfspace_energy_divergence",
        "phi(s) (1-s) stays in a fixed bracket for s in {0.9, 0.95, 0.99}",
        float(max(brack)), None, 0.0, converged=ok,
        metadata={"products": brack, "bracket": [lo_ref, hi_ref]}))

    # eigenvalue lower bound
    lam = sf.lambda1_lower_bound(FracParams(1, 0.5), 2.0)
    checks.append(make_check(
        "constants.lambda1_exact",
        "lower bound at (1, 1/2, volume 2): 4 c(1,1/2) / 2 = 2/pi",
        lam, 2.0 / math.pi, 1e-13, tol_mode="rel"))
    v1 = sf.lambda1_lower_bound(p, 1.0)
    v2 = sf.lambda1_lower_bound(p, 2.0)
    checks.append(make_check(
        "constants.lambda1_scaling",
        "doubling the volume multiplies the bound by 2^{-2s/n}",
        v2 / v1, 2.0 ** (-2.0 * p.s / p.n), 1e-13, tol_mode="rel"))
    vols = np.linspace(0.5, 4.0, 5)
    vals = [sf.lambda1_lower_bound(p, float(v)) for v in vols]
    dec = float(np.max(np.diff(vals)))
    checks.append(make_check(
        "constants.lambda1_monotone",
        "bound decreases in the volume (5-point grid)",
        dec, None, 0.0, converged=dec < 0.0, metadata={"max_increment": dec}))
    return checks


# ---------------------------------------------------------------------------
# fraclap suite


def fraclap_suite(cfg: SuiteConfig) -> list[CheckReport]:
    checks = []
    q = QuadSpec(abs_tol=2e-6, rel_tol=2e-6)

    # torsion identity: interior value 1
    worst = 0.0
    details = {}
    for nn in (1, 2):
        for ss in (0.3, 0.5, 0.7):
            p = FracParams(nn, ss)
            u = _torsion_field(nn, ss)
            rng = np.random.default_rng(cfg.check_seed(f"torsion.{nn}.{ss}"))
            for _ in range(10):
                x = rng.uniform(-0.6, 0.6, size=nn)
                r = fl.frac_lap_pv(u, x[0] if nn == 1 else x, p, q)
                worst = max(worst, abs(r.value - 1.0))
            details[f"n={nn},s={ss}"] = worst
    checks.append(make_check(
        "fraclap.torsion_interior",
        "pointwise value of the operator on gamma (1-|x|^2)^s_+ equals 1 in the "
        "unit ball (10 interior points per (n,s))",
        worst, 0.0, 1e-3, metadata={"grid": "(n,s) in {1,2} x {0.3,0.5,0.7}"}))

    # exterior closed form vs direct quadrature
    worst_rel = 0.0
    for nn in (1, 2):
        for ss in (0.3, 0.5, 0.7):
            p = FracParams(nn, ss)
            u = _torsion_field(nn, ss)
            P0 = lambda pts: np.ones(np.atleast_2d(pts).shape[0])
            for t in (1.5, 2.0, 3.0):
                x = np.zeros(nn)
                x[0] = t
                closed = fl.torsion_closed_form(0, P0, 1.0, x, p, validate=False)
                r = fl.frac_lap_pv(u, x[0] if nn == 1 else x, p, q)
                worst_rel = max(worst_rel, abs(r.value - closed) / abs(closed))
    checks.append(make_check(
        "fraclap.torsion_exterior",
        "hypergeometric exterior formula vs principal-value quadrature at "
        "|x| in {1.5, 2, 3}",
        worst_rel, 0.0, 1e-3))

    # consistency of the antisymmetric form with the standard PV form
    worst = 0.0
    pairs = []
    for ss in (0.3, 0.7):
        p = FracParams(1, ss)
        f1 = lambda y: np.where(np.abs(y) < 1,
                                np.asarray(y) * (1 - np.asarray(y) ** 2) ** 2, 0.0)
        u = fl.ScalarField(dim=1, f=f1, antisymmetric=True, support_radius=1.0)
        a = fl.frac_lap_pv(u, 0.4, p, q)
        b = fl.frac_lap_antisym(u, 0.4, p, q)
        tolc = 2.0 * (a.err_estimate + b.err_estimate) + 1e-8
        pairs.append((a.value, b.value, tolc))
        worst = max(worst, abs(a.value - b.value) - tolc)
    p2 = FracParams(2, 0.5)
    f2 = lambda pts: np.atleast_2d(pts)[..., 0] * np.exp(
        -np.sum(np.atleast_2d(pts) ** 2, axis=-1))
    u2 = fl.ScalarField(dim=2, f=f2, antisymmetric=True, effective_radius=6.5)
    a = fl.frac_lap_pv(u2, np.array([0.7, 0.2]), p2, q)
    b = fl.frac_lap_antisym(u2, np.array([0.7, 0.2]), p2, q)
    tolc = 2.0 * (a.err_estimate + b.err_estimate) + 1e-8
    worst = max(worst, abs(a.value - b.value) - tolc)
    checks.append(make_check(
        "fraclap.antisym_consistency",
        "half-space kernel-difference form (with zero-order term "
        "(c(1,s)/s) u(x) x_1^{-2s}) agrees with the full-space PV form on "
        "antisymmetric fields",
        worst, None, 0.0, converged=worst <= 0.0,
        metadata={"slack": worst, "note": "tolerance is 2x the summed "
                  "quadrature error estimates"}))

    # solid-harmonic multiplier factor
    p2 = FracParams(2, 0.5)
    P1 = lambda pts: np.atleast_2d(pts)[:, 0]
    val = fl.torsion_closed_form(1, P1, 1.0, [0.3, 0.1], p2)
    checks.append(make_check(
        "fraclap.solid_harmonic_factor",
        "degree-1 multiplier scales the interior value by (n+2s)/n",
        val, (2 + 2 * 0.5) / 2 * 0.3, 1e-12))

    # boundary blow-up monotone in k
    p1 = FracParams(1, 0.5)
    P0 = lambda pts: np.ones(np.atleast_2d(pts).shape[0])
    mags = []
    for k in range(2, 7):
        v = fl.torsion_closed_form(0, P0, 1.0, [1.0 + 10.0 ** (-k)], p1, validate=False)
        mags.append(abs(v))
    inc = float(np.min(np.diff(mags)))
    sentinel = fl.torsion_closed_form(0, P0, 1.0, [1.0], p1, validate=False)
    checks.append(make_check(
        "fraclap.boundary_blowup",
        "|exterior value| at |x| = 1 + 10^{-k} increases in k; the sphere "
        "itself returns the typed -infinity sentinel",
        inc, None, 0.0,
        converged=inc > 0.0 and isinstance(sentinel, fl.BoundarySentinel),
        metadata={"magnitudes": mags}))
    return checks


# ---------------------------------------------------------------------------
# barrier suite


def barrier_suite(cfg: SuiteConfig) -> list[CheckReport]:
    checks = []
    md = {"reflection": REFLECTION_NOTE}

    # stability functions: signs and endpoint
    worst_f, worst_g, min_F = -np.inf, -np.inf, np.inf
    taus = np.linspace(1e-4, 1 - 1e-4, 100)
    for nn in (1, 2, 3):
        for ss in (0.25, 0.5, 0.75):
            p = FracParams(nn, ss)
            for t in taus:
                sv = fl.stability_functions(float(t), p)
                worst_f = max(worst_f, sv.f - 1.0)
                worst_g = max(worst_g, sv.g)
                min_F = min(min_F, sv.F)
    checks.append(make_check(
        "barrier.stability_signs",
        "f(tau) <= 1 and g(tau) <= 0 on a 100-point grid for 9 (n,s) pairs",
        max(worst_f, worst_g), None, 0.0,
        converged=max(worst_f, worst_g) <= 1e-12 and min_F >= 1.0,
        metadata={"max_f_minus_1": worst_f, "max_g": worst_g, "min_F": min_F}))

    worst = 0.0
    for nn in (1, 2, 3):
        for ss in (0.25, 0.5, 0.75):
            p = FracParams(nn, ss)
            # F(1-h) = A + B h^s + C h + O(h^{1+s}); eliminate the h^s term
            # with the known exponent on a geometric h-sequence, then the
            # h term, leaving A + O(h^{1+s})
            qr = 0.25
            hs = [3e-3 * qr ** k for k in range(5)]
            F = [sf.hyp2f1(1.0, nn / 2.0, (nn + 2 * ss) / 2.0 + 1.0, 1.0 - h)
                 for h in hs]
            seq = F
            for expo in (ss, 1.0, 1.0 + ss):  # strip h^s, h, h^{1+s} in turn
                seq = [(seq[k + 1] - qr ** expo * seq[k]) / (1.0 - qr ** expo)
                       for k in range(len(seq) - 1)]
            worst = max(worst, abs(seq[-1] - (nn + 2 * ss) / (2 * ss)))
    checks.append(make_check(
        "barrier.F_endpoint",
        "F(1^-) extrapolates to (n+2s)/(2s) after eliminating the h^s and h "
        "endpoint corrections on a geometric sequence",
        worst, 0.0, 1e-4))

    # lens identity (closed form, exact)
    p = FracParams(2, 0.5)
    b = fl.BarrierSpec(a=(0.3, 0.1), rho=1.0, params=p)
    val = fl.barrier_frac_lap(b, [0.2, 0.0])
    checks.append(make_check(
        "barrier.lens_identity",
        "inside both balls the barrier solves exactly: value 2 (n+2s) x_1 / n",
        val, 2 * (2 + 1.0) / 2 * 0.2, 1e-14, metadata=md))

    # upper bound on 200 exterior samples
    rng = np.random.default_rng(cfg.check_seed("barrier.upper_bound"))
    count, slack = 0, -np.inf
    while count < 200:
        x = rng.uniform([-1, -1], [1.3, 1], size=2) * 1.0
        x = np.array([abs(x[0]) + 1e-3, x[1]])
        da = np.linalg.norm(x - np.array(b.a))
        dref = np.linalg.norm(x - b.a_reflected)
        if da < b.rho and dref > b.rho + 1e-9 and x[0] > 0:
            val = fl.barrier_frac_lap(b, x)
            slack = max(slack, val - (2 + 1.0) / 2 * x[0])
            count += 1
    checks.append(make_check(
        "barrier.upper_bound",
        "closed-form value <= (n+2s) x_1 / n at 200 sampled points outside "
        "the reflected ball",
        slack, None, 0.0, converged=slack <= 1e-10,
        metadata={"max_slack": slack, "seed": cfg.check_seed("barrier.upper_bound")}))

    # antisymmetry of the barrier itself
    rng = np.random.default_rng(cfg.check_seed("barrier.antisymmetry"))
    pts = rng.uniform(-1.5, 1.5, size=(50, 2))
    refl = pts.copy()
    refl[:, 0] = -refl[:, 0]
    anti = float(np.max(np.abs(fl.barrier_eval(b, pts) + fl.barrier_eval(b, refl))))
    checks.append(make_check(
        "barrier.antisymmetry",
        "phi(x - 2 x_1 e_1) = -phi(x) by construction (50 random points)",
        anti, 0.0, 1e-14, metadata=md))

    # quadrature cross-check at 10 points (both dimensions)
    q = QuadSpec(abs_tol=2e-6, rel_tol=2e-6)
    worst_rel = 0.0
    p1 = FracParams(1, 0.3)
    b1 = fl.BarrierSpec(a=(0.4,), rho=1.0, params=p1)
    bf1 = fl.barrier_field(b1)
    for x in (0.25, 0.45, 0.7, 0.9, 1.1, 1.3):
        closed = fl.barrier_frac_lap(b1, [x])
        r = fl.frac_lap_antisym(bf1, x, p1, q)
        worst_rel = max(worst_rel, abs(r.value - closed) / abs(closed))
    p2 = FracParams(2, 0.5)
    b2 = fl.BarrierSpec(a=(0.3, 0.1), rho=1.0, params=p2)
    bf2 = fl.barrier_field(b2)
    for x in ([0.2, 0.0], [0.35, 0.2], [0.9, 0.2], [1.0, -0.1]):
        closed = fl.barrier_frac_lap(b2, x)
        r = fl.frac_lap_antisym(bf2, np.asarray(x), p2, q)
        worst_rel = max(worst_rel, abs(r.value - closed) / abs(closed))
    checks.append(make_check(
        "barrier.quadrature_crosscheck",
        "piecewise closed form vs antisymmetric PV quadrature at 10 points",
        worst_rel, 0.0, 1e-3, metadata=md))
    return checks


# ---------------------------------------------------------------------------
# poisson suite


def _datasets():
    g1 = lambda y: np.where((np.abs(y) > 1) & (np.abs(y) < 3),
                            np.asarray(y, dtype=float), 0.0)
    g2 = lambda y: np.sign(y) * ((np.abs(y) > 2) & (np.abs(y) < 4))
    g3 = lambda y: np.sign(y) * np.maximum(np.abs(y) - 1.0, 0.0) * np.exp(-np.abs(y))
    return [
        po.ExteriorData(dim=1, g=g1, r=1.0, antisymmetric=True, support_radius=3.0),
        po.ExteriorData(dim=1, g=g2, r=1.0, antisymmetric=True, support_radius=4.0),
        po.ExteriorData(dim=1, g=g3, r=1.0, antisymmetric=True, decay_exponent=3.0,
                        support_radius=25.0),
    ]


def poisson_suite(cfg: SuiteConfig) -> list[CheckReport]:
    checks = []
    q = QuadSpec(abs_tol=1e-9, rel_tol=1e-9)
    p = FracParams(1, cfg.s)

    # kernel mass: data 1 outside the ball extends to 1
    dmass = po.ExteriorData(dim=1, g=lambda y: np.ones_like(np.asarray(y, dtype=float)),
                            r=1.0, decay_exponent=0.75)
    vals = [po.poisson_extend(dmass, x, p, q) for x in (-0.62, -0.3, 0.0, 0.3, 0.62)]
    worst = max(abs(v - 1.0) for v in vals)
    checks.append(make_check(
        "poisson.kernel_mass",
        "the Poisson integral of the constant 1 is 1 at 5 interior points",
        worst, 0.0, 1e-4, metadata={"values": vals}))

    # representation equivalence on antisymmetric data
    worst = 0.0
    for d in _datasets():
        for x in np.linspace(-0.85, 0.85, 10):
            a = po.poisson_extend(d, float(x), p, q)
            b = po.antisym_representation(d, float(x), p, q)
            worst = max(worst, abs(a - b))
    checks.append(make_check(
        "poisson.representation_equiv",
        "folded half-space kernel form equals the standard Poisson integral "
        "for antisymmetric data (3 data sets x 10 points)",
        worst, 0.0, 1e-8))

    # mean-value derivative: finite difference + r-independence + linearity
    ds = _datasets()
    fd_worst, rdep_worst = 0.0, 0.0
    for d in ds:
        h = 1e-3
        fd = (po.poisson_extend(d, h, p, q) - po.poisson_extend(d, -h, p, q)) / (2 * h)
        mvs = [po.meanvalue_derivative(d, r, p, q) for r in (0.25, 0.5, 1.0)]
        fd_worst = max(fd_worst, abs(mvs[-1] - fd))
        rdep_worst = max(rdep_worst, max(mvs) - min(mvs))
    checks.append(make_check(
        "poisson.meanvalue_fd",
        "the weighted exterior integral reproduces the central difference of "
        "the extension at 0 (3 data sets)",
        fd_worst, 0.0, 1e-3))
    checks.append(make_check(
        "poisson.meanvalue_rindep",
        "the formula is independent of the radius r in {0.25, 0.5, 1}",
        rdep_worst, 0.0, 1e-3))

    d12 = po.ExteriorData(
        dim=1,
        g=lambda y: ds[0].g(y) + 2.0 * ds[1].g(y),
        r=1.0, antisymmetric=True, support_radius=4.0)
    lin = abs(po.meanvalue_derivative(d12, 1.0, p, q)
              - po.meanvalue_derivative(ds[0], 1.0, p, q)
              - 2.0 * po.meanvalue_derivative(ds[1], 1.0, p, q))
    checks.append(make_check(
        "poisson.meanvalue_linearity",
        "linearity in the data under superposition",
        lin, 0.0, 1e-9))

    # psi_s: Beta reduction, rotation invariance, sandwich
    p2 = FracParams(2, cfg.s)
    from scipy.special import beta as _beta

    ref = (2 * (2 + 2) * sf.gamma_poisson(2, cfg.s)
           * 0.5 * _beta(2 / 2 + cfg.s + 1, 1 - cfg.s))
    checks.append(make_check(
        "poisson.psi_beta",
        "psi_s(0) = n(n+2) gamma (1/2) B(n/2+s+1, 1-s) (Beta-function oracle)",
        po.psi_s_weight(p2, [0.0, 0.0]), ref, 1e-10, tol_mode="rel"))
    rng = np.random.default_rng(cfg.check_seed("poisson.psi_rotation"))
    worst = 0.0
    for _ in range(5):
        y = rng.normal(size=2)
        th = rng.uniform(0, 2 * math.pi)
        R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
        worst = max(worst, abs(po.psi_s_weight(p2, y) - po.psi_s_weight(p2, R @ y)))
    checks.append(make_check(
        "poisson.psi_rotation", "psi_s depends on |y| only (random rotations)",
        worst, 0.0, 1e-12))
    w = po.WeightPsiS(p2)
    C = w.fit_sandwich()
    radii = np.concatenate([np.linspace(0.0, 3.0, 60),
                            np.geomspace(3.0, 80.0, 40)])
    ratios = np.array([po.psi_s_weight(p2, [float(rr), 0.0])
                       * (1.0 + rr ** (2 + 2 * cfg.s + 2)) for rr in radii])
    ok = bool(np.all(ratios <= C) and np.all(ratios >= 1.0 / C))
    checks.append(make_check(
        "poisson.psi_sandwich",
        "C^{-1} <= psi_s(y) (1+|y|^{n+2s+2}) <= C on a radius scan, with C "
        "fitted once then fixed",
        float(np.max(ratios)), None, 0.0, converged=ok,
        metadata={"C": C, "scan_points": len(radii)}))

    # zeta family
    z = po.zeta_interval(2.0, cfg.s, 0.7, q) + po.zeta_interval(2.0, cfg.s, -0.7, q)
    checks.append(make_check(
        "poisson.zeta_odd", "zeta_R(-x) = -zeta_R(x)", abs(z), 0.0, 1e-12))
    c0 = po.c0_limit(cfg.s, q)
    ratio = po.zeta_interval(100.0, cfg.s, 0.5, q) / 0.5
    checks.append(make_check(
        "poisson.zeta_limit",
        "zeta_100(x)/x approximates the slope limit c_0 to 1e-3 relative",
        abs(ratio - c0) / c0, 0.0, 1e-3, metadata={"c0": c0, "ratio": ratio}))
    if abs(cfg.s - 0.5) < 1e-12:
        # sec-substitution oracle: int_1^inf dt/(t^2 sqrt(t^2-1)) = 1
        checks.append(make_check(
            "poisson.zeta_c0_exact",
            "c_0(1/2) = 2 sin(pi/2)/pi = 2/pi (secant-substitution oracle)",
            c0, 2.0 / math.pi, 1e-10, tol_mode="rel"))

    # Harnack comparability on explicit instances
    inst_md = {}
    ok = True
    for i, d in enumerate(_datasets()):
        ext = po.PoissonExtension(d, p, q)
        xs = np.linspace(0.01, 0.5, 25)
        ratios = ext(xs) / xs
        an = po.anorm_halfspace(lambda y: ext(y), p, q,
                                R_out=d.outer_radius(p, 1e-9),
                                breakpoints=[1.0])
        sup_r, inf_r = float(np.max(ratios)), float(np.min(ratios))
        ok = ok and (0 < inf_r <= sup_r < np.inf) and an > 0
        inst_md[f"instance_{i}"] = {"sup_ratio": sup_r, "inf_ratio": inf_r,
                                    "anorm": an, "sup_over_anorm": sup_r / an,
                                    "inf_over_anorm": inf_r / an}
    checks.append(make_check(
        "poisson.harnack_instances",
        "sup u/x_1 and inf u/x_1 on the half-ball are positive, finite, and "
        "comparable to the weighted half-space norm (factors recorded)",
        1.0 if ok else 0.0, None, 0.0, converged=ok, metadata=inst_md))
    return checks


# ---------------------------------------------------------------------------
# bochner suite


def _profiles():
    g1 = bo.SymmetricProfile(dim=1, f=lambda x: np.exp(-np.asarray(x) ** 2),
                             effective_radius=6.5)
    b1 = bo.SymmetricProfile(
        dim=1, f=lambda x: np.maximum(1 - np.asarray(x) ** 2, 0.0) ** 2,
        support_radius=1.0)
    g2 = bo.SymmetricProfile(
        dim=2, f=lambda p: np.exp(-np.sum(np.atleast_2d(p) ** 2, axis=-1)),
        effective_radius=6.5)
    b2 = bo.SymmetricProfile(
        dim=2, f=lambda p: np.maximum(1 - np.sum(np.atleast_2d(p) ** 2, axis=-1),
                                      0.0) ** 2,
        support_radius=1.0)
    a2 = bo.SymmetricProfile(
        dim=2,
        f=lambda p: np.exp(-np.atleast_2d(p)[:, 0] ** 2
                           - 2.0 * np.atleast_2d(p)[:, 1] ** 2),
        effective_radius=6.5)
    return [g1, b1, g2, b2, a2]


def bochner_suite(cfg: SuiteConfig) -> list[CheckReport]:
    checks = []
    q = QuadSpec(abs_tol=1e-6, rel_tol=1e-6)

    worst_slack = -np.inf
    count = 0
    svals = (0.3, 0.5, 0.7)
    for k, prof in enumerate(_profiles()):
        nn = prof.dim
        rng = np.random.default_rng(cfg.check_seed(f"bochner.residual.{k}"))
        for j in range(10):
            ss = svals[(k + j) % 3]
            p = FracParams(nn, ss)
            if nn == 1:
                x = float(rng.uniform(0.15, 1.2))
            else:
                x = np.array([rng.uniform(0.15, 1.0), rng.uniform(-0.8, 0.8)])
            r = bo.bochner_residual(prof, x, p, q)
            slack = abs(float(r)) - 2.0 * (r.err_sum + 1e-9)
            worst_slack = max(worst_slack, slack)
            count += 1
    checks.append(make_check(
        "bochner.residual_suite",
        "operator of x_1 f in dim n equals x_1 times the lifted operator in "
        "dim n+2 (5 profiles x 10 points; tolerance 2x the summed quadrature "
        "errors)",
        worst_slack, None, 0.0, converged=worst_slack <= 0.0,
        metadata={"points": count, "max_slack": worst_slack}))

    # x_1 -> 0 limit: both sides vanish
    prof = _profiles()[0]
    g = bo.antisym_product_field(prof)
    p = FracParams(1, 0.5)
    v = fl.frac_lap_pv(g, 1e-4, p, q)
    checks.append(make_check(
        "bochner.zero_limit",
        "the antisymmetric product x_1 f has vanishing operator value as "
        "x_1 -> 0",
        abs(v.value), 0.0, 1e-2))

    # kernel lift: gaussian closed form + power kernel + reconstruction
    kg = bo.LevyKernel(n=1, j=lambda r: np.exp(-r ** 2),
                       dj=lambda r: -2 * r * np.exp(-r ** 2),
                       decay_radius=8.0, name="gauss")
    kg.validate()
    k3 = bo.kernel_lift(kg)
    worst = max(abs(float(k3.j(np.array([rr]))[0]) - math.exp(-rr * rr) / math.pi)
                for rr in (0.3, 0.7, 1.5))
    checks.append(make_check(
        "bochner.kernel_lift_gaussian",
        "lift of e^{-r^2} is e^{-r^2}/pi (differentiate and divide by 2 pi r)",
        worst, 0.0, 1e-12))
    spow = 0.25
    kp = bo.LevyKernel(n=1, j=lambda r: r ** (-1 - 2 * spow),
                       dj=lambda r: -(1 + 2 * spow) * r ** (-2 - 2 * spow),
                       decay_radius=40.0)
    kp3 = bo.kernel_lift(kp)
    ref = (1 + 2 * spow) / (2 * math.pi) * 0.7 ** (-3 - 2 * spow)
    checks.append(make_check(
        "bochner.kernel_lift_power",
        "lift of r^{-n-2s} is ((n+2s)/(2 pi)) r^{-n-2s-2}",
        float(kp3.j(np.array([0.7]))[0]), ref, 1e-12, tol_mode="rel"))
    ke = bo.LevyKernel(n=1, j=lambda r: r ** (-1.25) * np.exp(-r),
                       dj=lambda r: (-1.25 * r ** (-2.25) - r ** (-1.25)) * np.exp(-r),
                       decay_radius=60.0)
    ke3 = bo.kernel_lift(ke)
    worst = max(abs(bo.kernel_reconstruct(ke3, rr, q) - float(ke.j(np.array([rr]))[0]))
                / float(ke.j(np.array([rr]))[0]) for rr in (0.5, 1.0, 2.0))
    checks.append(make_check(
        "bochner.kernel_reconstruction",
        "j_n(r) = 2 pi int_r^inf t j_{n+2}(t) dt at r in {0.5, 1, 2}",
        worst, 0.0, 1e-6))

    # symbol: lift invariance, zero limit, monotonicity
    worst = 0.0
    for tau in (0.5, 1.0, 2.0):
        a = bo.levy_symbol(kg, tau, q)
        b = bo.levy_symbol(k3, tau, q)
        worst = max(worst, abs(a - b) / (1.0 + abs(a)))
    checks.append(make_check(
        "bochner.symbol_lift",
        "the Fourier symbol keeps its radial profile under the kernel lift "
        "(gaussian kernel, tau in {0.5, 1, 2})",
        worst, 0.0, 1e-5))
    checks.append(make_check(
        "bochner.symbol_zero_limit",
        "psi(tau) -> 0 as tau -> 0 for integrable kernels",
        abs(bo.levy_symbol(kg, 1e-3, q)), 0.0, 1e-5))
    taus = np.linspace(0.1, 3.0, 12)
    vals = [bo.levy_symbol(kg, float(t), q) for t in taus]
    inc = float(np.min(np.diff(vals)))
    closed = [math.sqrt(math.pi) * (1 - math.exp(-t * t / 4)) for t in taus]
    worst_closed = max(abs(v - c) for v, c in zip(vals, closed))
    checks.append(make_check(
        "bochner.symbol_monotone",
        "gaussian-kernel symbol increases in tau and matches the closed form "
        "sqrt(pi)(1 - e^{-tau^2/4})",
        worst_closed, 0.0, 1e-8,
        converged=inc > 0.0, metadata={"min_increment": inc}))
    return checks


# ---------------------------------------------------------------------------
# ellipsoid suite


def ellipsoid_suite(cfg: SuiteConfig) -> list[CheckReport]:
    checks = []
    p = FracParams(2, 0.5)
    q = QuadSpec(abs_tol=2e-6, rel_tol=2e-6)

    fp0 = geo.FamilyParams(params=p, eps=0.0)
    checks.append(make_check(
        "ellipsoid.gamma_eps0",
        "gamma(n,s,0) = gamma(n,s) since 2F1(.,.;.;0) = 1",
        geo.gamma_torsion_ellipsoid(fp0), sf.gamma_torsion(2, 0.5), 1e-13,
        tol_mode="rel"))

    # PDE check: operator value 1 at interior points, eps = 0.05
    fp = geo.FamilyParams(params=p, eps=0.05)
    ue = fl.ScalarField(
        dim=2, f=lambda pts: geo.ellipsoid_torsion(fp, np.atleast_2d(pts)),
        support_radius=1.0 + fp.eps)
    worst = 0.0
    for x in ([0.2, 0.1], [0.5, -0.3], [-0.4, 0.45], [0.8, 0.0], [0.0, 0.7]):
        r = fl.frac_lap_pv(ue, np.asarray(x, dtype=float), p, q)
        worst = max(worst, abs(r.value - 1.0))
    checks.append(make_check(
        "ellipsoid.pde_check",
        "the explicit ellipsoid profile solves the torsion equation: operator "
        "value 1 at 5 interior points (eps = 0.05)",
        worst, 0.0, 1e-3))

    outside = geo.ellipsoid_torsion(fp, [1.2, 0.3])
    checks.append(make_check(
        "ellipsoid.support", "the profile vanishes outside the ellipsoid",
        outside, 0.0, 0.0))

    # chart distance: the parallel chart sits at distance exactly 1/2
    fp1 = geo.FamilyParams(params=p, eps=0.1)
    E = geo.Ellipsoid(dim=2, eps=0.1)
    rs = np.linspace(-0.95, 0.95, 20)
    pts = geo.parallel_param(fp1, rs[:, None])
    d = E.distance_to_boundary(pts)
    checks.append(make_check(
        "ellipsoid.parallel_distance",
        "dist(chart point, ellipsoid boundary) = 1/2 at 20 chart values "
        "(projected-distance minimization oracle)",
        float(np.max(np.abs(d - 0.5))), 0.0, 1e-8))

    # chart mirror symmetry
    pts_p = geo.parallel_param(fp1, np.array([[0.37]]))
    pts_m = geo.parallel_param(fp1, np.array([[-0.37]]))
    sym = abs(pts_p[0, 0] - pts_m[0, 0]) + abs(pts_p[0, 1] + pts_m[0, 1])
    checks.append(make_check(
        "ellipsoid.chart_mirror", "the chart mirrors r -> -r in the x' block",
        sym, 0.0, 1e-14))

    # sup quotient = 2
    phi0 = lambda r: geo.parallel_param(fp0, r)
    qfield = lambda pts: (2.0 * np.atleast_2d(pts)[:, 1]) ** 2
    supq = geo.boundary_seminorm(qfield, phi0, grid=256, param_dim=1)
    checks.append(make_check(
        "ellipsoid.sup_quotient",
        "sup over chart pairs of ||r|^2 - |r~|^2| / |phi_0(r) - phi_0(r~)| = 2",
        supq, 2.0, 1e-3))

    # the exponent limit
    res = geo.limit_ratio_experiment(cfg.eps_list, p, grid=512)
    target = 0.5 * sf.gamma_torsion(2, 0.5) * (0.75) ** (0.5 - 1.0)
    checks.append(make_check(
        "ellipsoid.limit_ratio",
        "extrapolated boundary-seminorm/deficit ratio equals "
        "s gamma(n,s) (3/4)^{s-1} = 2/(sqrt(3) pi) for n=2, s=1/2",
        res.limit, target, 0.02, tol_mode="rel",
        converged=res.monotone,
        metadata={"ratios": res.ratios, "eps": res.eps_list,
                  "monotone": res.monotone}))
    checks.append(make_check(
        "ellipsoid.rho_deficit",
        "circumradius - inradius = eps exactly for the family",
        geo.Ellipsoid(dim=2, eps=0.07).rho_deficit(), 0.07, 1e-15))

    # boundary seminorm asymptotics at eps = 0.01
    fps = geo.FamilyParams(params=p, eps=0.01)
    charts = lambda r: geo.parallel_param(fps, r)
    fields = lambda pts: geo.ellipsoid_torsion(fps, pts)
    semin = geo.boundary_seminorm(fields, charts, grid=512, param_dim=1)
    pred = 0.01 * 0.5 * sf.gamma_torsion(2, 0.5) * 0.75 ** (-0.5)
    checks.append(make_check(
        "ellipsoid.seminorm_asymptotic",
        "[profile] on the parallel boundary is within 5% of the asymptotic "
        "prediction eps s gamma (3/4)^{s-1} at eps = 0.01",
        semin, pred, 0.05, tol_mode="rel"))

    # critical planes vanish for coordinate directions
    lam1 = geo.critical_plane(E, [1, 0])
    lam2 = geo.critical_plane(E, [0, 1])
    checks.append(make_check(
        "ellipsoid.critical_symmetry",
        "critical plane at 0 for both coordinate directions (by symmetry)",
        max(abs(lam1), abs(lam2)), 0.0, 1e-6))

    # Minkowski identity for the inner parallel set
    G = geo.inner_parallel(E, 0.5)
    rng = np.random.default_rng(cfg.check_seed("ellipsoid.minkowski"))
    ok = True
    # forward: G + B_{1/2} inside the ellipsoid
    m = 0
    while m < 500:
        x = rng.uniform([-1.2, -1.0], [1.2, 1.0])[None, :]
        if G.membership(x)[0]:
            bvec = rng.normal(size=2)
            bvec = bvec / np.linalg.norm(bvec) * rng.uniform(0, 0.5 - 1e-9)
            ok = ok and bool(E.membership(x + bvec)[0])
            m += 1
    # reverse: every point of the ellipsoid is within 1/2 of G; the witness
    # sits at boundary distance 1/2 + dz/2, so it lies in G and within 1/2
    m = 0
    while m < 500:
        z = rng.uniform([-1.2, -1.0], [1.2, 1.0])
        if E.membership(z[None, :])[0]:
            dz = float(E.distance_to_boundary(z[None, :])[0])
            if dz > 0.5 - 1e-9:
                m += 1
                continue
            w = geo._pull_inward(E, z, 0.5 + 0.5 * min(dz, 0.02))
            ok = ok and bool(G.membership(w[None, :])[0]) \
                and np.linalg.norm(w - z) < 0.5
            m += 1
    checks.append(make_check(
        "ellipsoid.minkowski",
        "inner parallel set + B_{1/2} = ellipsoid (1000 sampled points, both "
        "inclusions)",
        1.0 if ok else 0.0, None, 0.0, converged=ok))

    # chart vs distance-set boundary
    ptsb = geo.parallel_param(fp1, rs[:, None])
    dmatch = float(np.max(np.abs(G.distance_to_boundary(geo.parallel_param(
        geo.FamilyParams(params=p, eps=0.1), rs[:, None])))))
    checks.append(make_check(
        "ellipsoid.inner_parallel_chart",
        "the chart image lies on the boundary of the inner parallel set",
        dmatch, 0.0, 1e-6))

    # serialization round-trip
    blob = E.to_json()
    E2 = geo.ShapeDescriptor.from_json(blob)
    same = (E2.to_json() == blob)
    checks.append(make_check(
        "ellipsoid.shape_roundtrip", "shape JSON round-trip is lossless",
        1.0 if same else 0.0, 1.0, 0.0))
    return checks


# ---------------------------------------------------------------------------
# slab suite


def slab_suite(cfg: SuiteConfig) -> list[CheckReport]:
    checks = []
    alpha = cfg.alpha
    eps_grid = (1e-4, 4e-4, 1.6e-3)

    lam_ratio = {}
    ok_bracket = True
    for eps in eps_grid:
        D = geo.PerturbedDisk(eps=eps, alpha=alpha)
        lam = geo.critical_plane(D, [1, 0], m_boundary=1500)
        scale = eps ** (1.0 - 1.0 / alpha)
        lam_ratio[eps] = lam / scale
        ok_bracket = ok_bracket and (scale <= lam <= 3.0 * scale)
    checks.append(make_check(
        "slab.critical_bracket",
        "critical value lies in [eps^{1-1/alpha}, C eps^{1-1/alpha}] with "
        "recorded C = 3",
        float(max(lam_ratio.values())), None, 0.0, converged=ok_bracket,
        metadata={"ratios": {str(k): v for k, v in lam_ratio.items()}}))

    # slab measure scaling in eps at gamma = 0.1
    gam = 0.1
    vols = []
    for eps in eps_grid:
        D = geo.PerturbedDisk(eps=eps, alpha=alpha)
        lam = geo.critical_plane(D, [1, 0], m_boundary=1500)
        mc = cfg.quad("slab.exponent_fit", samples=max(cfg.samples, 200_000))
        v, se, N = geo.slab_measure(D, lam, gam, [1, 0], mc)
        vols.append(v)
    slope = float(np.polyfit(np.log(eps_grid), np.log(vols), 1)[0])
    checks.append(make_check(
        "slab.exponent_fit",
        "fitted exponent of the slab measure in eps is 1 - 1/alpha",
        slope, 1.0 - 1.0 / alpha, 0.05,
        metadata={"values": vols, "eps": list(eps_grid), "gamma": gam}))

    # lower bound c eps^{1-1/alpha} at fixed gamma
    ok = all(v >= 0.05 * e ** (1.0 - 1.0 / alpha) * gam ** 2 for v, e in
             zip(vols, eps_grid))
    checks.append(make_check(
        "slab.lower_bound",
        "slab measure >= c gamma^2 eps^{1-1/alpha} (tilted-bump mass)",
        float(min(v / (e ** (1.0 - 1.0 / alpha) * gam ** 2)
                  for v, e in zip(vols, eps_grid))),
        None, 0.0, converged=ok))

    # upper-bound ratio over the (gamma, eps) grid
    ratios = []
    for eps in eps_grid:
        D = geo.PerturbedDisk(eps=eps, alpha=alpha)
        lam = geo.critical_plane(D, [1, 0], m_boundary=1500)
        rmin, rmax = D.enclosing_radii()
        for g in (0.05, 0.1, 0.2):
            mc = cfg.quad(f"slab.ratio.{eps}.{g}", samples=max(cfg.samples, 200_000))
            v, se, N = geo.slab_measure(D, lam, g, [1, 0], mc)
            ratios.append(v / (g * (rmax - rmin) ** (1.0 - 1.0 / alpha)))
    bound = 12.0  # recorded over the grid; observed max is far below
    checks.append(make_check(
        "slab.upper_bound_ratio",
        "measure / (gamma (R-r)^{1-1/alpha}) is bounded over the (gamma, eps) "
        "grid (recorded bound 12)",
        float(max(ratios)), None, 0.0, converged=max(ratios) <= bound,
        metadata={"ratios": ratios, "bound": bound}))

    # enclosing radii: B_{1-C eps} in Omega in B_{1+C eps}, fitted C <= 10
    worstC = 0.0
    for eps in (2e-4, 1e-3):
        D = geo.PerturbedDisk(eps=eps, alpha=alpha)
        rmin, rmax = D.enclosing_radii()
        worstC = max(worstC, (1.0 - rmin) / eps, (rmax - 1.0) / eps)
    checks.append(make_check(
        "slab.enclosing_radii",
        "the perturbed disk stays between B_{1-C eps} and B_{1+C eps} with "
        "fitted C <= 10",
        worstC, None, 0.0, converged=worstC <= 10.0,
        metadata={"fitted_C": worstC}))

    # symmetric shape gives an empty symmetric difference
    B = geo.Ball(center=(0.0, 0.0), radius=1.0)
    v, se, N = geo.slab_measure(B, 0.0, 0.1, [1, 0],
                                cfg.quad("slab.symmetric_zero"))
    checks.append(make_check(
        "slab.symmetric_zero",
        "the slab measure vanishes for a shape symmetric about the plane",
        v, 0.0, 1e-12))

    # annulus bound for tilted ellipsoids: value <= C gamma (R-r + gamma |lam|)
    e_diag = np.array([1.0, 1.0]) / math.sqrt(2.0)
    ann = []
    for eps in (0.02, 0.05, 0.1):
        E = geo.Ellipsoid(dim=2, eps=eps)
        lam = geo.critical_plane(E, e_diag)
        for g in (0.05, 0.1, 0.2):
            mc = cfg.quad(f"slab.annulus.{eps}.{g}", samples=max(cfg.samples, 200_000))
            v, se, N = geo.slab_measure(E, lam, g, e_diag, mc)
            ann.append((eps, g, lam, v, v / (g * (eps + g * abs(lam)))))
    slope = float(np.polyfit([a[1] for a in ann if a[0] == 0.05],
                             [a[3] for a in ann if a[0] == 0.05], 1)[0])
    ok = all(a[4] <= 8.0 for a in ann)
    checks.append(make_check(
        "slab.ellipsoid_annulus",
        "tilted-ellipsoid slab measure obeys value <= C gamma (R-r + gamma "
        "|lambda|) (recorded C = 8); linear-in-gamma slope recorded",
        float(max(a[4] for a in ann)), None, 0.0, converged=ok,
        metadata={"grid": [[a[0], a[1], a[2], a[3]] for a in ann],
                  "gamma_slope_at_eps_0.05": slope}))
    return checks


# ---------------------------------------------------------------------------
# perimeter suite


def perimeter_suite(cfg: SuiteConfig) -> list[CheckReport]:
    checks = []
    p = FracParams(2, 0.5)

    E = geo.Ball(center=(0.0, 0.0), radius=1.0)
    Om = geo.Ball(center=(0.0, 0.0), radius=2.0)
    q = cfg.quad("perimeter.ball_oracle", samples=max(cfg.samples, 200_000))
    r = pe.frac_perimeter(E, Om, p, q)
    oracle = pe.ball_perimeter_quadrature(0.5, levels=12)
    checks.append(make_check(
        "perimeter.ball_oracle",
        "MC perimeter of the unit disk vs the independent polar-quadrature "
        "oracle (1%)",
        r.value, oracle, 0.01, tol_mode="rel",
        metadata={"mc_err": r.err_estimate, "seed": q.rng_seed}))

    q2 = cfg.quad("perimeter.scaling", samples=max(cfg.samples, 200_000))
    E2 = geo.Ball(center=(0.0, 0.0), radius=2.0)
    Om2 = geo.Ball(center=(0.0, 0.0), radius=4.0)
    r2 = pe.frac_perimeter(E2, Om2, p, q2)
    pred = 2.0 ** (2 - 0.5) * r.value
    checks.append(make_check(
        "perimeter.scaling",
        "Per(tE; tOmega) = t^{n-sigma} Per(E; Omega) at t = 2, within the "
        "combined MC error",
        abs(r2.value - pred), 0.0,
        3.0 * (r2.err_estimate + 2.0 ** 1.5 * r.err_estimate),
        metadata={"scaled": r2.value, "predicted": pred}))

    qc = cfg.quad("perimeter.complement", samples=max(cfg.samples, 200_000))
    rc = pe.frac_perimeter(geo.Complement(E), Om, p, qc)
    checks.append(make_check(
        "perimeter.complement_symmetry",
        "Per(E; Omega) = Per(E^c; Omega) within the combined MC error",
        abs(rc.value - r.value), 0.0, 3.0 * (rc.err_estimate + r.err_estimate)))

    r0 = pe.frac_perimeter(geo.EmptyShape(dim=2), Om, p,
                           cfg.quad("perimeter.empty", samples=50_000))
    checks.append(make_check(
        "perimeter.empty", "the empty set has zero perimeter", r0.value, 0.0, 0.0))

    # interpolation inequality family
    H = geo.HalfSpace(dim=2, offset=0.0)
    qi = cfg.quad("perimeter.interpolation", samples=max(cfg.samples // 2, 100_000))
    ratios = {}
    # the inequality is stated for eps < 3^{-1/sigma} (= 1/9 at sigma = 1/2),
    # so the scan stays inside that domain
    for name, shape in (("ball", geo.Ball(center=(0.0, 0.0), radius=0.6)),
                        ("halfspace", H)):
        for eps in (0.02, 0.05, 0.1):
            lhs, rhs, ratio = pe.interpolation_check(shape, 1.0, eps, p, qi)
            ratios[f"{name}.eps={eps}"] = ratio
    worst = max(ratios.values())
    checks.append(make_check(
        "perimeter.interpolation_bounded",
        "restricted s-perimeter <= C ( eps^{-(1-s)/s} R^{1-s}/(1-s) "
        "Per(E; bigger ball) + eps R^{n-s}/s ): ratio bounded over the family "
        "(recorded bound 1)",
        float(worst), None, 0.0, converged=worst <= 1.0,
        metadata={"ratios": ratios}))

    tail1 = 0.05 * 1.0 / 0.5
    tail2 = 0.025 * 1.0 / 0.5
    checks.append(make_check(
        "perimeter.interpolation_tail",
        "the eps-term of the right side vanishes linearly in eps",
        tail2 / tail1, 0.5, 1e-12))

    # half-space energy: closed form vs the two-integral quadrature product
    worst = 0.0
    per_pair = {}
    for nn in (1, 2, 3):
        for ss in (0.3, 0.5, 0.7):
            pp = FracParams(nn, ss)
            a = pe.halfspace_energy(pp)
            b = pe.halfspace_energy_quadrature(pp)
            per_pair[f"n={nn},s={ss}"] = (a, b)
            worst = max(worst, abs(a - b))
    checks.append(make_check(
        "perimeter.halfspace_energy",
        "closed-form half-space extension energy matches the quadrature "
        "product on the (n, s) grid",
        worst, 0.0, 1e-6))

    # moments
    bm, sm = pe.moment_integrals(3)
    checks.append(make_check(
        "moments.n3",
        "fourth moments at n = 3: ball moment 4 pi/35, sphere moment 4 pi/5 "
        "(quadrature)",
        max(abs(bm - 4 * math.pi / 35), abs(sm - 4 * math.pi / 5)), 0.0, 1e-3,
        metadata={"ball": bm, "sphere": sm}))
    checks.append(make_check(
        "moments.relation",
        "sphere moment = (n+4) x ball moment",
        sm, (3 + 4) * bm, 1e-10, tol_mode="rel"))
    qmc = cfg.quad("moments.mc")

    class _B3:
        bounding_box = [(-1.0, 1.0)] * 3

        @staticmethod
        def membership(pts):
            return np.sum(pts ** 2, axis=-1) < 1.0

    rmc = integrate_mc(lambda pts: pts[:, 0] ** 4, _B3(), qmc)
    checks.append(make_check(
        "moments.mc",
        "seeded MC reproduces the ball moment within 3 standard errors",
        abs(rmc.value - 4 * math.pi / 35), 0.0, 3.0 * rmc.err_estimate,
        metadata={"mc": rmc.value, "se": rmc.err_estimate, "seed": qmc.rng_seed}))
    return checks


# ---------------------------------------------------------------------------
# counterexamples suite


def counterexamples_suite(cfg: SuiteConfig) -> list[CheckReport]:
    checks = []

    worst_sup, worst_inf = 0.0, 0.0
    for eps in (Fraction(1, 5), Fraction(1, 2)):
        worst_sup = max(worst_sup, abs(ce.harnack_sup_inner(eps) - 4.0))
        worst_inf = max(worst_inf, abs(ce.harnack_inf_outer(eps) - 2.0 * float(eps)))
    checks.append(make_check(
        "counterexamples.sup_pin",
        "sup over (1,2) of the degree-7 family equals 4 (grid + refinement)",
        worst_sup, 0.0, 1e-6))
    checks.append(make_check(
        "counterexamples.inf_pin",
        "inf over (1/2, 5/2) equals 2 eps",
        worst_inf, 0.0, 1e-6))

    f2 = ce.smp_eval_exact(Fraction(2))
    f3 = ce.smp_eval_exact(Fraction(3))
    checks.append(make_check(
        "counterexamples.smp_values",
        "the degree-9 polynomial satisfies f(2) = 1 and f(3) = 5 in exact "
        "rational arithmetic",
        float(abs(f2 - 1) + abs(f3 - 5)), 0.0, 0.0,
        metadata={"f2": str(f2), "f3": str(f3)}))

    xs = np.linspace(0.0, 1.0, 1000)
    lower1 = float(np.min(ce.smp_counterexample_eval(xs) - 3.0 * xs))
    xs2 = np.linspace(1.0, 3.0, 1000)
    lower2 = float(np.min(ce.smp_counterexample_eval(xs2)) - 1.0)
    checks.append(make_check(
        "counterexamples.smp_bounds",
        "f >= 3x on [0,1] and f >= 1 on [1,3] (1000-point grids)",
        min(lower1, lower2), None, 0.0, converged=min(lower1, lower2) >= -1e-12,
        metadata={"min_f_minus_3x": lower1, "min_f_minus_1": lower2}))

    ratios = [(4.0 - e) / (3.0 * e) for e in (0.12, 0.05, 0.01)]
    checks.append(make_check(
        "counterexamples.ratio_divergence",
        "the Harnack quotient lower bound (4-eps)/(3 eps) exceeds 10 for "
        "eps < 0.13 and grows without bound",
        float(min(ratios)), None, 0.0, converged=min(ratios) > 10.0,
        metadata={"ratios": ratios}))

    odd_h = ce.HarnackFamily(Fraction(1, 3))
    a = odd_h.eval_exact(Fraction(7, 5)) + odd_h.eval_exact(Fraction(-7, 5))
    b = ce.smp_eval_exact(Fraction(9, 7)) + ce.smp_eval_exact(Fraction(-9, 7))
    checks.append(make_check(
        "counterexamples.oddness",
        "both polynomials are odd, exactly, in rational arithmetic",
        float(abs(a) + abs(b)), 0.0, 0.0))

    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as tmp:
        p1 = Path(tmp) / "fam1.csv"
        p2 = Path(tmp) / "fam2.csv"
        ce.emit_family_csv("harnack", [0.2, 0.4, 0.6, 0.8], (-3.0, 3.0, 0.01), p1)
        ce.emit_family_csv("harnack", [0.2, 0.4, 0.6, 0.8], (-3.0, 3.0, 0.01), p2)
        b1, b2 = p1.read_bytes(), p2.read_bytes()
        rows = b1.decode().strip().split("\n")
        n_rows = len(rows) - 1
        import csv as _csv

        parsed = list(_csv.reader(rows[1:]))
        xprobe = float(parsed[700][2])
        vprobe = float(parsed[700][3])
        expected = ce.harnack_family_eval(float(parsed[700][1]), xprobe)
    checks.append(make_check(
        "counterexamples.csv_roundtrip",
        "CSV: 4 x 601 rows, byte-identical on repeat, full-precision "
        "round-trip",
        abs(vprobe - expected), 0.0, 0.0,
        converged=(b1 == b2) and n_rows == 4 * 601,
        metadata={"rows": n_rows, "deterministic": b1 == b2}))
    return checks


# ---------------------------------------------------------------------------
# registry


SUITES = {
    "constants": constants_suite,
    "fraclap": fraclap_suite,
    "barrier": barrier_suite,
    "poisson": poisson_suite,
    "bochner": bochner_suite,
    "ellipsoid": ellipsoid_suite,
    "slab": slab_suite,
    "perimeter": perimeter_suite,
    "counterexamples": counterexamples_suite,
}


def run_suite(name: str, cfg: SuiteConfig) -> list[CheckReport]:
    if name == "all":
        out = []
        for key in sorted(SUITES):
            out.extend(SUITES[key](cfg))
        return out
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](cfg)


EXPLAIN = {
    "barrier.lens_identity": (
        "In the lens where both balls overlap, each translated torsion "
        "profile contributes (n+2s)/n x_1 -+ (2s/n) a_1; the reflected-centre "
        "terms cancel and the sum is exactly 2 (n+2s) x_1 / n.  Checked to "
        "machine precision because both sides are closed forms."),
    "barrier.upper_bound": (
        "Outside the reflected ball the value is (n+2s)/n f(tau) x_1 + "
        "(2s/n) g(tau) a_1 with tau = (rho/|x-a*|)^2; f <= 1 and g <= 0 give "
        "the bound (n+2s) x_1 / n.  Sampled at 200 points; zero tolerance on "
        "the sign of the slack."),
    "barrier.quadrature_crosscheck": (
        "The closed form is compared against the independent half-space "
        "principal-value quadrature of the assembled barrier field; 1e-3 "
        "relative tolerance reflects the quadrature budget."),
    "moments.n3": (
        "int_{B_1} x_1^4 dx = 3 |S^{n-1}| / (n(n+2)(n+4)) and the sphere "
        "moment drops the (n+4): at n = 3 these are 4 pi/35 and 4 pi/5; "
        "1e-3 absolute by 1-D reduced quadrature, 3 sigma by seeded MC."),
    "fraclap.torsion_interior": (
        "gamma(n,s) (1-|x|^2)^s_+ is the exact torsion profile: the operator "
        "evaluates to 1 inside the ball.  1e-3 absolute at 10 points per "
        "(n,s) pair; the tolerance covers the PV-quadrature budget."),
    "fraclap.torsion_exterior": (
        "Outside the ball the operator value is "
        "-a(n,s)|x|^{-n-2s} 2F1((n+2s)/2, s+1; (n+2s)/2+1; |x|^{-2}); checked "
        "against direct quadrature at |x| in {1.5, 2, 3}, 1e-3 relative."),
    "ellipsoid.limit_ratio": (
        "The boundary seminorm of the ellipsoid torsion profile over the "
        "inner parallel boundary, divided by the deficit eps, converges to "
        "s gamma(n,s) (3/4)^{s-1}; 2% after linear extrapolation in eps."),
    "ellipsoid.sup_quotient": (
        "The chart-pair supremum of ||r|^2-|r~|^2|/|phi_0(r)-phi_0(r~)| "
        "equals 2; attained in the near-diagonal limit at |r| = 1/sqrt(2), "
        "hence the refinement stage; 1e-3 absolute."),
    "slab.exponent_fit": (
        "For the perturbed disk the symmetric-difference slab measure scales "
        "like eps^{1-1/alpha}; the log-log fitted exponent must land within "
        "0.05 of that value."),
    "constants.c_tilde_independence": (
        "c(n,s) int_{z_1>1}|z|^{-n-2s} dz is dimension-independent and equals "
        "c(1,s)/(2s); each dimension is integrated by an independent polar "
        "route, 1e-6 relative."),
    "perimeter.ball_oracle": (
        "The importance-sampled MC perimeter of the unit disk against a "
        "deterministic polar-coordinates tensor quadrature; 1% relative."),
    "perimeter.halfspace_energy": (
        "2 pi^{n/2-1} Gamma((s+1)/2) Gamma((1-s)/2) / (Gamma(s/2) "
        "Gamma((n-s)/2+1)) equals a~(n,s)^2 omega_{n-1} times the product of "
        "the two one-dimensional integrals; 1e-6 absolute."),
    "counterexamples.sup_pin": (
        "The degree-7 odd family attains sup 4 on (1,2) and inf 2 eps on "
        "(1/2,5/2); extrema found by grid + local refinement to 1e-6."),
    "bochner.residual_suite": (
        "The operator of x_1 f(x) in dimension n equals x_1 times the "
        "operator of the 3-isotropic lift in dimension n+2; both sides by "
        "independent PV quadratures, residual within twice the summed error "
        "estimates."),
    "bochner.symbol_lift": (
        "The Fourier symbol psi(tau) computed from (j_n, n) and from the "
        "lifted kernel (j_{n+2}, n+2) agree to 1e-5 on the gaussian grid."),
    "poisson.meanvalue_rindep": (
        "The derivative representation holds for every exclusion radius r in "
        "(0,1]; values at r in {0.25, 0.5, 1} agree to 1e-3."),
    "poisson.zeta_limit": (
        "zeta_R(x)/x converges to c_0(s) = 2 a_s int_1^inf dt/(t^2(t^2-1)^s) "
        "as R grows; at R = 100 the slope matches to 1e-3 relative."),
}


KNOWN_CHECK_IDS = frozenset({
    "constants.gamma_one", "constants.gamma_half", "constants.gamma_recurrence",
    "constants.hyp2f1_origin", "constants.hyp2f1_euler", "constants.hyp2f1_monotone",
    "constants.bessel_origin", "constants.bessel_halfinteger",
    "constants.bessel_derivative", "constants.torsion_exact_half",
    "constants.poisson_exact_half", "constants.halfspace_energy_exact_half",
    "constants.positivity", "constants.torsion_recurrence",
    "constants.a_hyp_recurrence", "constants.c_tilde_identity",
    "constants.c_tilde_independence", "constants.halfspace_energy_divergence",
    "constants.lambda1_exact", "constants.lambda1_scaling",
    "constants.lambda1_monotone",
    "fraclap.torsion_interior", "fraclap.torsion_exterior",
    "fraclap.antisym_consistency", "fraclap.solid_harmonic_factor",
    "fraclap.boundary_blowup",
    "barrier.stability_signs", "barrier.F_endpoint", "barrier.lens_identity",
    "barrier.upper_bound", "barrier.antisymmetry",
    "barrier.quadrature_crosscheck",
    "poisson.kernel_mass", "poisson.representation_equiv",
    "poisson.meanvalue_fd", "poisson.meanvalue_rindep",
    "poisson.meanvalue_linearity", "poisson.psi_beta", "poisson.psi_rotation",
    "poisson.psi_sandwich", "poisson.zeta_odd", "poisson.zeta_limit",
    "poisson.zeta_c0_exact", "poisson.harnack_instances",
    "bochner.residual_suite", "bochner.zero_limit",
    "bochner.kernel_lift_gaussian", "bochner.kernel_lift_power",
    "bochner.kernel_reconstruction", "bochner.symbol_lift",
    "bochner.symbol_zero_limit", "bochner.symbol_monotone",
    "ellipsoid.gamma_eps0", "ellipsoid.pde_check", "ellipsoid.support",
    "ellipsoid.parallel_distance", "ellipsoid.chart_mirror",
    "ellipsoid.sup_quotient", "ellipsoid.limit_ratio", "ellipsoid.rho_deficit",
    "ellipsoid.seminorm_asymptotic", "ellipsoid.critical_symmetry",
    "ellipsoid.minkowski", "ellipsoid.inner_parallel_chart",
    "ellipsoid.shape_roundtrip",
    "slab.critical_bracket", "slab.exponent_fit", "slab.lower_bound",
    "slab.upper_bound_ratio", "slab.enclosing_radii", "slab.symmetric_zero",
    "slab.ellipsoid_annulus",
    "perimeter.ball_oracle", "perimeter.scaling",
    "perimeter.complement_symmetry", "perimeter.empty",
    "perimeter.interpolation_bounded", "perimeter.interpolation_tail",
    "perimeter.halfspace_energy", "moments.n3", "moments.relation",
    "moments.mc",
    "counterexamples.sup_pin", "counterexamples.inf_pin",
    "counterexamples.smp_values", "counterexamples.smp_bounds",
    "counterexamples.ratio_divergence", "counterexamples.oddness",
    "counterexamples.csv_roundtrip",
})


def explain(check_id: str) -> str:
    """Human-readable formula and tolerance rationale for a check id."""
    if check_id in EXPLAIN:
        return EXPLAIN[check_id]
    if check_id in KNOWN_CHECK_IDS:
        suite = check_id.split(".", 1)[0]
        suite = "perimeter" if suite == "moments" else suite
        return (f"Check {check_id!r} from suite {suite!r}: run "
                f"`fraclab run {suite}` and read the check's reference text "
                f"and tolerance in the report.")
    raise KeyError(check_id)
