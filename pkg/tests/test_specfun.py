"""Special functions and named constants against independent oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraclab import specfun as sf
from fraclab.specfun import DomainError, FracParams
from fraclab.quadrature import integrate_adaptive


def test_gamma_trivia():
    assert sf.gamma_fn(1.0) == pytest.approx(1.0, abs=1e-14)
    assert sf.gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)


def test_gamma_recurrence_oracle():
    # recurrence-from-Gamma(1.5) oracle
    target = 3.5 * 2.5 * 1.5 * sf.gamma_fn(1.5)
    assert sf.gamma_fn(4.5) == pytest.approx(target, rel=1e-12)


def test_gamma_poles_raise():
    for x in (0.0, -1.0, -5.0):
        with pytest.raises(DomainError):
            sf.gamma_fn(x)


@given(st.floats(min_value=0.2, max_value=30.0))
@settings(max_examples=60, deadline=None)
def test_gamma_functional_equation(x):
    assert sf.gamma_fn(x + 1.0) == pytest.approx(x * sf.gamma_fn(x), rel=1e-11)


def test_gamma_against_math_library():
    xs = np.linspace(0.1, 50.0, 197)
    worst = max(abs(sf.gamma_fn(float(x)) - math.gamma(float(x)))
                / math.gamma(float(x)) for x in xs)
    assert worst < 1e-12


def _hyp_series(a, b, c, z, terms=2000):
    # brute-force series oracle
    acc, term = 1.0, 1.0
    for k in range(terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        acc += term
        if abs(term) < 1e-17 * abs(acc):
            break
    return acc


def test_hyp2f1_at_zero():
    assert sf.hyp2f1(0.7, 1.9, 2.4, 0.0) == 1.0


def test_hyp2f1_euler_transform_against_series():
    a, b, c, z = 0.3, 1.2, 2.1, 0.3
    lhs = _hyp_series(a, b, c, z)
    rhs = (1 - z) ** (c - a - b) * _hyp_series(c - a, c - b, c, z)
    assert lhs == pytest.approx(rhs, rel=1e-9)
    assert sf.hyp2f1(a, b, c, z) == pytest.approx(lhs, rel=1e-12)
    assert (1 - z) ** (c - a - b) * sf.hyp2f1(c - a, c - b, c, z) == \
        pytest.approx(lhs, rel=1e-9)


def test_hyp2f1_endpoint_value():
    # F(tau) = 2F1(1, n/2; n/2+s+1; tau) tends to (n+2s)/(2s) = 3 for n=2, s=1/2
    vals = [sf.hyp2f1(1.0, 1.0, 2.5, 1.0 - h) for h in (1e-6, 1e-8, 1e-10)]
    # endpoint correction is O(h^s): eliminate with the known exponent
    q = 1e-2
    ex = (vals[1] - q ** 0.5 * vals[0]) / (1 - q ** 0.5)
    assert ex == pytest.approx(3.0, abs=1e-5)


def test_hyp2f1_branch_consistency():
    # both sides of the z = 0.75 hand-off agree with an external reference
    import scipy.special as sp

    for z in (0.7499999, 0.7500001, 0.9, 0.99):
        assert sf.hyp2f1(0.8, 1.1, 2.3, z) == pytest.approx(
            float(sp.hyp2f1(0.8, 1.1, 2.3, z)), rel=1e-10)


def test_hyp2f1_negative_argument_pfaff():
    a, b, c, z = 1.25, 0.5, 1.0, -0.5625
    direct = _hyp_series(a, b, c, z)  # alternating but convergent at |z|<1
    assert sf.hyp2f1(a, b, c, z) == pytest.approx(direct, rel=1e-10)


def test_hyp2f1_monotone_in_z():
    grid = np.linspace(0.01, 0.95, 60)
    vals = [sf.hyp2f1(0.8, 1.1, 2.3, float(t)) for t in grid]
    assert np.all(np.diff(vals) > 0)


def test_hyp2f1_domain_errors():
    with pytest.raises(DomainError):
        sf.hyp2f1(1.0, 1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        sf.hyp2f1(1.0, 1.0, -2.0, 0.5)


def test_bessel_trivia():
    assert sf.bessel_j(0.0, 0.0) == 1.0
    x = 1.0
    assert sf.bessel_j(0.5, x) == pytest.approx(
        math.sqrt(2.0 / (math.pi * x)) * math.sin(x), abs=1e-12)


def test_bessel_derivative_identity():
    h = 1e-5
    fd = (sf.bessel_j(0.0, 2.4 + h) - sf.bessel_j(0.0, 2.4 - h)) / (2 * h)
    assert fd == pytest.approx(-sf.bessel_j(1.0, 2.4), abs=1e-8)


def test_bessel_domain_errors():
    with pytest.raises(DomainError):
        sf.bessel_j(11.0, 1.0)
    with pytest.raises(DomainError):
        sf.bessel_j(1.0, 101.0)


def test_fracparams_validation():
    with pytest.raises(DomainError):
        FracParams(0, 0.5)
    with pytest.raises(DomainError):
        FracParams(1, 1.0)
    with pytest.raises(DomainError):
        FracParams(2, 0.0)


def test_constants_exact_values_at_one_half():
    cset = sf.constants(FracParams(1, 0.5))
    assert cset.gamma_torsion == pytest.approx(1.0, abs=1e-14)
    assert cset.gamma_poisson == pytest.approx(1.0 / math.pi, abs=1e-14)
    ref = 8.0 * sf.gamma_fn(0.75) / (math.sqrt(math.pi) * sf.gamma_fn(0.25))
    assert cset.phi_halfspace == pytest.approx(ref, rel=1e-12)
    assert cset.c_frac == pytest.approx(1.0 / math.pi, rel=1e-13)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
@pytest.mark.parametrize("s", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_constant_recurrences(n, s):
    assert sf.gamma_torsion(n + 2, s) * (n + 2 * s) == pytest.approx(
        n * sf.gamma_torsion(n, s), rel=1e-12)
    assert sf.a_hyp(n + 2, s) * (n + 2 * s + 2) == pytest.approx(
        n * sf.a_hyp(n, s), rel=1e-12)


@pytest.mark.parametrize("n,s", [(1, 0.2), (2, 0.5), (3, 0.8), (5, 0.35)])
def test_constants_positive(n, s):
    cset = sf.constants(FracParams(n, s))
    for name in ("c_frac", "gamma_torsion", "gamma_poisson", "a_hyp",
                 "kappa_fk", "c_tilde", "a_ext", "a_tilde_ext",
                 "phi_halfspace"):
        assert getattr(cset, name) > 0.0, name


def test_c_tilde_identity_and_independence():
    for s in (0.2, 0.5, 0.8):
        assert sf.c_tilde(s) == pytest.approx(sf.c_frac(1, s) / (2 * s), rel=1e-13)
    # quadrature of the defining integral for n = 2 (independent polar route)
    s = 0.4
    res = integrate_adaptive(lambda th: np.cos(th) ** (2 * s),
                             (-math.pi / 2, math.pi / 2))
    assert sf.c_frac(2, s) * res.value / (2 * s) == pytest.approx(
        sf.c_tilde(s), rel=1e-6)


def test_phi_halfspace_divergence_bracket():
    prods = [sf.phi_halfspace(2, s) * (1 - s) for s in (0.9, 0.95, 0.99)]
    assert all(0.5 <= p <= 12.0 for p in prods)


def test_lambda1_bound():
    # exact arithmetic at (1, 1/2, volume 2) using c(1,1/2) = 1/pi
    val = sf.lambda1_lower_bound(FracParams(1, 0.5), 2.0)
    assert val == pytest.approx(2.0 / math.pi, rel=1e-13)
    # scaling law
    p = FracParams(2, 0.3)
    assert sf.lambda1_lower_bound(p, 2.0) / sf.lambda1_lower_bound(p, 1.0) == \
        pytest.approx(2.0 ** (-2 * 0.3 / 2), rel=1e-13)
    # monotone decreasing on a 5-point grid
    vols = np.linspace(0.5, 4.0, 5)
    vals = [sf.lambda1_lower_bound(p, float(v)) for v in vols]
    assert np.all(np.diff(vals) < 0)
    with pytest.raises(DomainError):
        sf.lambda1_lower_bound(p, 0.0)
