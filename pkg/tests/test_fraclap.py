"""Pointwise fractional-Laplacian evaluators, closed forms, and the barrier."""

import math

import numpy as np
import pytest

from fraclab.specfun import DomainError, FracParams, c_frac, gamma_torsion
from fraclab.quadrature import QuadSpec, integrate_adaptive
import fraclab.fraclap as fl

SPEC = QuadSpec(abs_tol=1e-7, rel_tol=1e-7)


def torsion_field(n, s):
    g = gamma_torsion(n, s)
    if n == 1:
        f = lambda y: g * np.maximum(1 - np.asarray(y, dtype=float) ** 2, 0.0) ** s
    else:
        f = lambda pts: g * np.maximum(
            1 - np.sum(np.atleast_2d(pts) ** 2, axis=-1), 0.0) ** s
    return fl.ScalarField(dim=n, f=f, support_radius=1.0)


def test_constant_field_maps_to_zero():
    cf = fl.ScalarField(dim=1, f=lambda y: np.ones_like(np.asarray(y, dtype=float)),
                        effective_radius=5.0, far_value=1.0)
    r = fl.frac_lap_pv(cf, 0.1, FracParams(1, 0.5), SPEC)
    assert abs(r.value) < 1e-6


@pytest.mark.parametrize("n,s", [(1, 0.5), (2, 0.5), (1, 0.3)])
def test_torsion_identity_interior(n, s):
    u = torsion_field(n, s)
    x = 0.3 if n == 1 else np.array([0.3, 0.2])
    r = fl.frac_lap_pv(u, x, FracParams(n, s), SPEC)
    assert r.value == pytest.approx(1.0, abs=1e-5)
    assert r.converged


def test_bump_outside_support_matches_direct_quadrature():
    # outside the support the value is -c int u(y)|x-y|^{-n-2s} dy < 0
    n, s = 1, 0.4
    f = lambda y: np.where(np.abs(y) < 1, (1 - np.asarray(y) ** 2) ** 2, 0.0)
    u = fl.ScalarField(dim=1, f=f, support_radius=1.0)
    x = 1.7
    r = fl.frac_lap_pv(u, x, FracParams(n, s), SPEC)
    direct = integrate_adaptive(
        lambda y: f(y) * np.abs(x - y) ** (-(1 + 2 * s)), (-1.0, 1.0), SPEC)
    assert r.value < 0
    assert r.value == pytest.approx(-c_frac(n, s) * direct.value, rel=1e-6)


def test_antisym_zero_field():
    z = fl.ScalarField(dim=1, f=lambda y: np.zeros_like(np.asarray(y, dtype=float)),
                       antisymmetric=True, support_radius=1.0)
    r = fl.frac_lap_antisym(z, 0.5, FracParams(1, 0.5), SPEC)
    assert abs(r.value) < 1e-12


@pytest.mark.parametrize("s", [0.3, 0.7])
def test_antisym_agrees_with_pv_1d(s):
    p = FracParams(1, s)
    f = lambda y: np.where(np.abs(y) < 1,
                           np.asarray(y) * (1 - np.asarray(y) ** 2) ** 2, 0.0)
    u = fl.ScalarField(dim=1, f=f, antisymmetric=True, support_radius=1.0)
    a = fl.frac_lap_pv(u, 0.4, p, SPEC)
    b = fl.frac_lap_antisym(u, 0.4, p, SPEC)
    assert abs(a.value - b.value) <= 2 * (a.err_estimate + b.err_estimate) + 1e-9


def test_antisym_agrees_with_pv_2d():
    p = FracParams(2, 0.5)
    f = lambda pts: np.atleast_2d(pts)[..., 0] * np.exp(
        -np.sum(np.atleast_2d(pts) ** 2, axis=-1))
    u = fl.ScalarField(dim=2, f=f, antisymmetric=True, effective_radius=6.5)
    x = np.array([0.7, 0.2])
    a = fl.frac_lap_pv(u, x, p, SPEC)
    b = fl.frac_lap_antisym(u, x, p, SPEC)
    assert abs(a.value - b.value) <= 2 * (a.err_estimate + b.err_estimate) + 1e-8


def test_antisym_requires_positive_x1_and_antisymmetry():
    f = lambda y: np.asarray(y, dtype=float)
    u = fl.ScalarField(dim=1, f=f, antisymmetric=True, support_radius=2.0)
    with pytest.raises(DomainError):
        fl.frac_lap_antisym(u, -0.2, FracParams(1, 0.5), SPEC)
    v = fl.ScalarField(dim=1, f=f, antisymmetric=False, support_radius=2.0)
    with pytest.raises(fl.ValidationError):
        fl.frac_lap_antisym(v, 0.2, FracParams(1, 0.5), SPEC)


def test_antisymmetry_spot_check_helper():
    f = lambda y: np.asarray(y, dtype=float) ** 2  # even, not antisymmetric
    u = fl.ScalarField(dim=1, f=f, antisymmetric=True, support_radius=2.0)
    with pytest.raises(fl.ValidationError):
        u.check_antisymmetry()


# ---------------------------------------------------------------------------
# torsion closed forms


def test_closed_form_inside_is_one():
    p = FracParams(2, 0.35)
    P0 = lambda pts: np.ones(np.atleast_2d(pts).shape[0])
    for x in ([0.0, 0.0], [0.4, 0.3], [0.0, -0.9]):
        assert fl.torsion_closed_form(0, P0, 1.0, x, p) == pytest.approx(1.0)
    # any radius: the profile carries its own scaling
    assert fl.torsion_closed_form(0, P0, 2.5, [1.0, 0.5], p) == pytest.approx(1.0)


def test_closed_form_degree_one_factor():
    p = FracParams(2, 0.5)
    P1 = lambda pts: np.atleast_2d(pts)[:, 0]
    val = fl.torsion_closed_form(1, P1, 1.0, [0.3, 0.1], p)
    assert val == pytest.approx((p.n + 2 * p.s) / p.n * 0.3, rel=1e-12)


def test_closed_form_exterior_vs_pv_quadrature():
    p = FracParams(1, 0.5)
    P0 = lambda pts: np.ones(np.atleast_2d(pts).shape[0])
    closed = fl.torsion_closed_form(0, P0, 1.0, [2.0], p)
    u = torsion_field(1, 0.5)
    r = fl.frac_lap_pv(u, 2.0, p, SPEC)
    assert r.value == pytest.approx(closed, abs=1e-4)


def test_closed_form_boundary_sentinel_and_blowup():
    p = FracParams(1, 0.5)
    P0 = lambda pts: np.ones(np.atleast_2d(pts).shape[0])
    v = fl.torsion_closed_form(0, P0, 1.0, [1.0], p, validate=False)
    assert isinstance(v, fl.BoundarySentinel)
    with pytest.raises(TypeError):
        v + 1.0  # the sentinel must not enter arithmetic
    mags = [abs(fl.torsion_closed_form(0, P0, 1.0, [1.0 + 10.0 ** (-k)], p,
                                       validate=False))
            for k in range(2, 7)]
    assert np.all(np.diff(mags) > 0)


def test_nonharmonic_multiplier_rejected():
    p = FracParams(2, 0.5)
    bad = lambda pts: np.atleast_2d(pts)[:, 0] ** 2  # Laplacian 2, not harmonic
    with pytest.raises(fl.ValidationError):
        fl.torsion_closed_form(2, bad, 1.0, [0.3, 0.1], p)
    wrong_degree = lambda pts: np.atleast_2d(pts)[:, 0]
    with pytest.raises(fl.ValidationError):
        fl.torsion_closed_form(2, wrong_degree, 1.0, [0.3, 0.1], p)


# ---------------------------------------------------------------------------
# stability functions


def test_stability_limits_at_zero():
    p = FracParams(2, 0.5)
    sv = fl.stability_functions(1e-10, p)
    assert sv.f == pytest.approx(1.0, abs=1e-8)
    assert sv.g == pytest.approx(-1.0, abs=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
def test_stability_signs_on_grid(n, s):
    p = FracParams(n, s)
    for tau in np.linspace(1e-4, 1 - 1e-4, 100):
        sv = fl.stability_functions(float(tau), p)
        assert sv.F >= 1.0
        assert sv.f <= 1.0 + 1e-12
        assert sv.g <= 1e-12
        assert sv.K > 0.0


def test_stability_domain():
    p = FracParams(1, 0.5)
    for tau in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(DomainError):
            fl.stability_functions(tau, p)


def test_stability_cache_matches_direct():
    p = FracParams(2, 0.5)
    cached = fl.StabilityFunctions(p, cache_threshold=0)
    for tau in (0.1, 0.37, 0.8, 0.97):
        direct = fl.stability_functions(tau, p)
        via_cache = cached.values(tau)
        assert via_cache.f == pytest.approx(direct.f, abs=1e-8)
        assert via_cache.g == pytest.approx(direct.g, abs=1e-8)
    assert cached._spline is not None  # the hot loop actually switched over


# ---------------------------------------------------------------------------
# the barrier


def _bspec(n=2, s=0.5):
    return fl.BarrierSpec(a=(0.3, 0.1) if n == 2 else (0.4,), rho=1.0,
                          params=FracParams(n, s))


def test_barrier_zero_on_symmetry_plane():
    b = _bspec()
    pts = np.array([[0.0, 0.3], [0.0, -0.8], [0.0, 0.0]])
    assert np.all(fl.barrier_eval(b, pts) == 0.0)


def test_barrier_antisymmetric_and_compact():
    b = _bspec()
    rng = np.random.default_rng(3)
    pts = rng.uniform(-2, 2, size=(64, 2))
    refl = pts.copy()
    refl[:, 0] = -refl[:, 0]
    assert np.max(np.abs(fl.barrier_eval(b, pts) + fl.barrier_eval(b, refl))) < 1e-14
    far = np.array([[2.5, 0.0], [0.0, 2.5], [-3.0, 1.0]])
    assert np.all(fl.barrier_eval(b, far) == 0.0)


def test_barrier_lens_value_exact():
    b = _bspec()
    x = [0.2, 0.0]  # inside both balls
    assert fl.barrier_frac_lap(b, x) == pytest.approx(2 * (2 + 1.0) / 2 * 0.2)


def test_barrier_upper_bound_sampled():
    b = _bspec()
    rng = np.random.default_rng(17)
    found = 0
    while found < 200:
        x = np.array([rng.uniform(0.0, 1.3), rng.uniform(-1.0, 1.0)])
        da = np.linalg.norm(x - np.array(b.a))
        dref = np.linalg.norm(x - b.a_reflected)
        if x[0] > 0 and da < b.rho and dref > b.rho + 1e-9:
            val = fl.barrier_frac_lap(b, x)
            assert val <= (2 + 1.0) / 2 * x[0] + 1e-10
            found += 1


def test_barrier_singular_locus_and_domain():
    b = _bspec()
    on_sphere = b.a_reflected + np.array([1.0, 0.0])
    if on_sphere[0] > 0 and np.linalg.norm(on_sphere - np.array(b.a)) < b.rho:
        with pytest.raises(fl.SingularLocusError):
            fl.barrier_frac_lap(b, on_sphere)
    with pytest.raises(DomainError):
        fl.barrier_frac_lap(b, [-0.1, 0.0])
    with pytest.raises(DomainError):
        fl.barrier_frac_lap(b, [1.9, 0.0])


def test_barrier_closed_form_vs_quadrature():
    p = FracParams(1, 0.3)
    b = fl.BarrierSpec(a=(0.4,), rho=1.0, params=p)
    bf = fl.barrier_field(b)
    for x in (0.3, 0.9, 1.2):
        closed = fl.barrier_frac_lap(b, [x])
        r = fl.frac_lap_antisym(bf, x, p, SPEC)
        assert r.value == pytest.approx(closed, rel=1e-3)


def test_barrier_spec_validation():
    with pytest.raises(DomainError):
        fl.BarrierSpec(a=(-0.1,), rho=1.0, params=FracParams(1, 0.5))
    with pytest.raises(DomainError):
        fl.BarrierSpec(a=(0.1,), rho=0.0, params=FracParams(1, 0.5))
