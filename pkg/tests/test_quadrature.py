"""Quadrature engine: deterministic panels, PV symmetric exclusion, MC."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraclab.specfun import DomainError, gamma_fn, gamma_torsion, c_frac
from fraclab.quadrature import (
    QuadSpec,
    integrate_adaptive,
    integrate_mc,
    integrate_pv,
)


def test_linear_integral():
    r = integrate_adaptive(lambda x: x, (0.0, 1.0))
    assert r.value == pytest.approx(0.5, abs=1e-12)
    assert r.converged


def test_sin_power_endpoint_singularity():
    # int_0^pi (sin th)^{s-1} dth = sqrt(pi) Gamma(s/2) / Gamma((s+1)/2)
    s = 0.5
    r = integrate_adaptive(lambda th: np.sin(th) ** (s - 1), (0.0, math.pi),
                           endpoint_powers=(s - 1, s - 1))
    ref = math.sqrt(math.pi) * gamma_fn(s / 2) / gamma_fn((s + 1) / 2)
    assert r.value == pytest.approx(ref, rel=1e-9)


def test_radial_power_integral():
    # int_0^1 r^{-s}(1-r^2)^{(n-1)/2} dr = Gamma((n+1)/2)Gamma((1-s)/2)
    #                                      / (2 Gamma((n-s)/2+1)) at n=3, s=0.5
    n, s = 3, 0.5
    r = integrate_adaptive(lambda x: x ** (-s) * (1 - x * x) ** ((n - 1) / 2),
                           (0.0, 1.0), endpoint_powers=(-s, None))
    ref = gamma_fn(2.0) * gamma_fn(0.25) / (2.0 * gamma_fn(2.25))
    assert r.value == pytest.approx(ref, rel=1e-10)


def test_box_integral():
    r = integrate_adaptive(lambda p: p[:, 0] ** 2 + p[:, 1], ((0, 1), (0, 2)))
    assert r.value == pytest.approx(2.0 / 3.0 + 2.0, rel=1e-12)


def test_determinism():
    f = lambda x: np.exp(-x * x)
    a = integrate_adaptive(f, (0.0, 3.0))
    b = integrate_adaptive(f, (0.0, 3.0))
    assert a == b


def test_budget_exhaustion_flag():
    spec = QuadSpec(abs_tol=1e-15, rel_tol=1e-15, max_refinements=3)
    r = integrate_adaptive(lambda x: np.abs(x - 1 / math.pi) ** 0.2, (0.0, 1.0),
                           spec)
    assert not r.converged


def test_quadspec_validation():
    with pytest.raises(DomainError):
        QuadSpec(pv_cutoffs=(0.1, 0.2))
    with pytest.raises(DomainError):
        QuadSpec(mc_samples=0)


def test_pv_odd_kernel():
    r = integrate_pv(lambda x: 1.0 / x, 0.0, (-1.0, 1.0))
    assert abs(r.value) <= 1e-10
    assert r.converged


@given(st.lists(st.floats(min_value=-2.0, max_value=2.0), min_size=1, max_size=4))
@settings(max_examples=25, deadline=None)
def test_pv_antisymmetry_property(coeffs):
    # any integrand odd about x0 has vanishing principal value
    x0 = 0.3

    def f(y):
        t = np.asarray(y) - x0
        odd = sum(c * t ** (2 * k + 1) for k, c in enumerate(coeffs))
        return odd / np.abs(t) ** 2.2

    r = integrate_pv(f, x0, (x0 - 1.0, x0 + 1.0))
    assert abs(r.value) <= 1e-8 * (1.0 + sum(abs(c) for c in coeffs))


def test_pv_torsion_profile_at_zero():
    # (-Delta)^{1/2} of (1-x^2)^{1/2}_+ at 0 equals 1 with c(1,1/2) = 1/pi
    s = 0.5
    g = gamma_torsion(1, s)
    psi = lambda y: g * np.maximum(1 - np.asarray(y) ** 2, 0.0) ** s
    f = lambda y: (psi(0.0) - psi(y)) * np.abs(y) ** (-(1 + 2 * s))
    R = 60.0
    r = integrate_pv(f, 0.0, (-R, R), breakpoints=[-1.0, 1.0])
    tail = psi(0.0) * 2.0 * R ** (-2 * s) / (2 * s)
    assert c_frac(1, s) * (r.value + tail) == pytest.approx(1.0, abs=1e-6)


def test_pv_divergent_flagged():
    # 1/|x| has no principal value: the cutoff sequence diverges
    r = integrate_pv(lambda x: 1.0 / np.abs(x), 0.0, (-1.0, 1.0))
    assert not r.converged


class _Ball3:
    def __init__(self):
        self.bounding_box = [(-1.0, 1.0)] * 3

    @staticmethod
    def membership(pts):
        return np.sum(pts ** 2, axis=-1) < 1.0


def test_mc_ball_volume():
    spec = QuadSpec(mc_samples=200_000, rng_seed=7)
    r = integrate_mc(lambda p: np.ones(len(p)), _Ball3(), spec)
    assert abs(r.value - 4 * math.pi / 3) <= 3 * r.err_estimate


def test_mc_fourth_moment():
    spec = QuadSpec(mc_samples=200_000, rng_seed=11)
    r = integrate_mc(lambda p: p[:, 0] ** 4, _Ball3(), spec)
    assert abs(r.value - 4 * math.pi / 35) <= 3 * r.err_estimate


def test_mc_seed_reproducibility():
    spec = QuadSpec(mc_samples=50_000, rng_seed=123)
    a = integrate_mc(lambda p: p[:, 0] ** 2, _Ball3(), spec)
    b = integrate_mc(lambda p: p[:, 0] ** 2, _Ball3(), spec)
    assert a.value == b.value  # bit-identical


def test_mc_error_scaling():
    # quadrupling the samples halves the standard error within a factor 1.5
    base = QuadSpec(mc_samples=40_000, rng_seed=5)
    quad = QuadSpec(mc_samples=160_000, rng_seed=5)
    se1 = integrate_mc(lambda p: np.ones(len(p)), _Ball3(), base).err_estimate
    se2 = integrate_mc(lambda p: np.ones(len(p)), _Ball3(), quad).err_estimate
    ratio = se1 / se2
    assert 2.0 / 1.5 <= ratio <= 2.0 * 1.5
