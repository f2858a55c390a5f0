"""Poisson-kernel machinery: extension, folded representation, mean-value
derivative, the weight psi_s, and the zeta_R family."""

import math

import numpy as np
import pytest
from scipy.special import beta as _beta, betainc

from fraclab.specfun import DomainError, FracParams, gamma_poisson
from fraclab.quadrature import QuadSpec, integrate_adaptive
import fraclab.poisson as po
import fraclab.fraclap as fl

SPEC = QuadSpec(abs_tol=1e-9, rel_tol=1e-9)
P1 = FracParams(1, 0.4)


def dataset(which=0):
    if which == 0:
        g = lambda y: np.where((np.abs(y) > 1) & (np.abs(y) < 3),
                               np.asarray(y, dtype=float), 0.0)
        return po.ExteriorData(dim=1, g=g, r=1.0, antisymmetric=True,
                               support_radius=3.0)
    g = lambda y: np.sign(y) * ((np.abs(y) > 2) & (np.abs(y) < 4))
    return po.ExteriorData(dim=1, g=g, r=1.0, antisymmetric=True,
                           support_radius=4.0)


def test_kernel_mass_is_one():
    d = po.ExteriorData(dim=1, g=lambda y: np.ones_like(np.asarray(y, dtype=float)),
                        r=1.0, decay_exponent=0.75)
    vals = [po.poisson_extend(d, x, P1, SPEC) for x in (-0.62, 0.0, 0.3, 0.5, 0.62)]
    assert max(abs(v - 1.0) for v in vals) < 1e-4
    assert max(vals) - min(vals) < 1e-4


def test_extension_antisymmetric_in_x():
    d = dataset()
    for x in (0.2, 0.55):
        assert po.poisson_extend(d, x, P1, SPEC) == pytest.approx(
            -po.poisson_extend(d, -x, P1, SPEC), abs=1e-12)


def test_extension_positive_at_center_for_nonneg_data():
    g = lambda y: ((np.abs(y) > 1) & (np.abs(y) < 2)).astype(float)
    d = po.ExteriorData(dim=1, g=g, r=1.0, support_radius=2.0)
    assert po.poisson_extend(d, 0.0, P1, SPEC) > 0.0


def test_folded_representation_matches_standard():
    d = dataset()
    for x in np.linspace(-0.8, 0.8, 10):
        a = po.poisson_extend(d, float(x), P1, SPEC)
        b = po.antisym_representation(d, float(x), P1, SPEC)
        assert a == pytest.approx(b, abs=1e-10)


def test_folded_zero_on_plane_and_positive_for_shifted_data():
    d = dataset()
    assert po.antisym_representation(d, 0.0, P1, SPEC) == pytest.approx(0.0, abs=1e-14)
    g = lambda y: np.sign(y) * (np.abs(y) > 2.0) * (np.abs(y) < 3.0)
    dpos = po.ExteriorData(dim=1, g=g, r=1.0, antisymmetric=True, support_radius=3.0)
    for x in (0.1, 0.4, 0.7):
        assert po.antisym_representation(dpos, x, P1, SPEC) > 0.0


def test_folded_requires_antisymmetric_flag():
    g = lambda y: np.ones_like(np.asarray(y, dtype=float))
    d = po.ExteriorData(dim=1, g=g, r=1.0, antisymmetric=False, support_radius=3.0)
    with pytest.raises(fl.ValidationError):
        po.antisym_representation(d, 0.3, P1, SPEC)


def test_meanvalue_zero_data():
    g = lambda y: np.zeros_like(np.asarray(y, dtype=float))
    d = po.ExteriorData(dim=1, g=g, r=1.0, antisymmetric=True, support_radius=2.0)
    assert po.meanvalue_derivative(d, 0.5, P1, SPEC) == 0.0


def test_meanvalue_r_independence_and_fd():
    d = dataset()
    mvs = [po.meanvalue_derivative(d, r, P1, SPEC) for r in (0.25, 0.5, 1.0)]
    assert max(mvs) - min(mvs) < 1e-3
    h = 1e-3
    fd = (po.poisson_extend(d, h, P1, SPEC)
          - po.poisson_extend(d, -h, P1, SPEC)) / (2 * h)
    assert mvs[-1] == pytest.approx(fd, abs=1e-3)


def test_meanvalue_domain_errors():
    d = dataset()
    with pytest.raises(DomainError):
        po.meanvalue_derivative(d, 1.5, P1, SPEC)
    d_wrong = po.ExteriorData(dim=1, g=d.g, r=2.0, antisymmetric=True,
                              support_radius=4.0)
    with pytest.raises(DomainError):
        po.meanvalue_derivative(d_wrong, 0.5, P1, SPEC)


def test_meanvalue_linearity():
    d0, d1 = dataset(0), dataset(1)
    dsum = po.ExteriorData(dim=1, g=lambda y: d0.g(y) + 2.0 * d1.g(y), r=1.0,
                           antisymmetric=True, support_radius=4.0)
    lhs = po.meanvalue_derivative(dsum, 1.0, P1, SPEC)
    rhs = (po.meanvalue_derivative(d0, 1.0, P1, SPEC)
           + 2.0 * po.meanvalue_derivative(d1, 1.0, P1, SPEC))
    assert lhs == pytest.approx(rhs, abs=1e-9)


# ---------------------------------------------------------------------------
# psi_s


def test_psi_s_beta_reduction():
    p = FracParams(2, 0.3)
    ref = 2 * 4 * gamma_poisson(2, 0.3) * 0.5 * _beta(2.3, 0.7)
    assert po.psi_s_weight(p, [0.0, 0.0]) == pytest.approx(ref, rel=1e-9)
    # general radius against the incomplete-Beta oracle
    y = [1.7, 0.8]
    T = 1.0 / np.hypot(*y) ** 2
    ref = 2 * 4 * gamma_poisson(2, 0.3) * 0.5 * _beta(2.3, 0.7) * betainc(2.3, 0.7, T)
    assert po.psi_s_weight(p, y) == pytest.approx(ref, rel=1e-9)


def test_psi_s_rotation_invariance():
    p = FracParams(2, 0.45)
    rng = np.random.default_rng(2)
    for _ in range(5):
        y = rng.normal(size=2)
        th = rng.uniform(0, 2 * math.pi)
        R = np.array([[math.cos(th), -math.sin(th)],
                      [math.sin(th), math.cos(th)]])
        assert po.psi_s_weight(p, y) == pytest.approx(
            po.psi_s_weight(p, R @ y), abs=1e-12)


def test_psi_s_sandwich():
    p = FracParams(2, 0.45)
    w = po.WeightPsiS(p)
    C = w.fit_sandwich()
    radii = np.concatenate([np.linspace(0.0, 3.0, 50), np.geomspace(3, 60, 30)])
    for rr in radii:
        ratio = po.psi_s_weight(p, [float(rr), 0.0]) * (1 + rr ** (2 + 2 * p.s + 2))
        assert 1.0 / C <= ratio <= C


def test_exterior_data_integrability_validation():
    # decay too weak for the (|y|^2-r^2)^{-s}|y|^{-n} weight
    d = po.ExteriorData(dim=1, g=lambda y: np.abs(y) ** 0.5, r=1.0,
                        decay_exponent=-0.5)
    with pytest.raises(fl.ValidationError):
        d.outer_radius(FracParams(1, 0.2), 1e-9)


# ---------------------------------------------------------------------------
# zeta family


def test_zeta_odd_and_domain():
    assert po.zeta_interval(2.0, 0.5, 0.7) == pytest.approx(
        -po.zeta_interval(2.0, 0.5, -0.7), abs=1e-13)
    with pytest.raises(DomainError):
        po.zeta_interval(1.0, 0.5, 1.0)


def test_zeta_slope_limit():
    for s in (0.3, 0.5, 0.8):
        c0 = po.c0_limit(s)
        ratio = po.zeta_interval(100.0, s, 0.5) / 0.5
        assert abs(ratio - c0) <= 1e-3 * c0


def test_c0_secant_substitution_oracle():
    # t = sec(theta) turns the c0 integral into
    # int_0^{pi/2} cos(theta) tan(theta)^{1-2s} d(theta)
    for s in (0.3, 0.5):
        oracle = integrate_adaptive(
            lambda th: np.cos(th) * np.tan(th) ** (1 - 2 * s),
            (0.0, math.pi / 2 - 1e-13), SPEC)
        a_s = math.sin(math.pi * s) / math.pi
        assert po.c0_limit(s) == pytest.approx(2 * a_s * oracle.value, rel=1e-7)
    assert po.c0_limit(0.5) == pytest.approx(2.0 / math.pi, rel=1e-10)


def test_harnack_instance_comparability():
    d = dataset()
    ext = po.PoissonExtension(d, P1, SPEC)
    xs = np.linspace(0.01, 0.5, 20)
    ratios = ext(xs) / xs
    an = po.anorm_halfspace(lambda y: ext(y), P1, SPEC, R_out=3.0,
                            breakpoints=[1.0])
    assert 0 < ratios.min() <= ratios.max() < np.inf
    assert an > 0
    # comparability factors are order one for this data
    assert 0.01 < ratios.min() / an and ratios.max() / an < 100.0
