"""Special functions and the named constants shared by every evaluator.

Gamma and the Gauss hypergeometric function are implemented here directly
(deterministic, dependency-free rational/series evaluations); Bessel J is
delegated to scipy behind the same validated surface.  The ``constants``
routine evaluates every named constant of the problem family from its
Gamma-function closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.special as _sp


class DomainError(ValueError):
    """Argument outside the validated domain of a special function."""


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class FracParams:
    """Dimension n >= 1 and fractional order s in (0, 1)."""

    n: int
    s: float

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise DomainError(f"dimension must be a positive integer, got {self.n}")
        if not (0.0 < self.s < 1.0):
            raise DomainError(f"order s must lie in (0,1), got {self.s}")


# ---------------------------------------------------------------------------
# Gamma / Beta

# Lanczos coefficients, g = 7, 9 terms.  Relative error below 1e-13 on the
# real line away from the poles, which is ample for every tolerance used here.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos_gamma(x: float) -> float:
    # valid for x >= 0.5
    x = x - 1.0
    acc = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def gamma_fn(x: float) -> float:
    """Gamma(x) for real x away from the poles at 0, -1, -2, ..."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise DomainError(f"gamma pole at {x}")
    if x >= 0.5:
        return _lanczos_gamma(x)
    # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return math.pi / (math.sin(math.pi * x) * _lanczos_gamma(1.0 - x))


def beta_fn(a: float, b: float) -> float:
    """Euler Beta(a, b) = Gamma(a) Gamma(b) / Gamma(a+b)."""
    return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b)


# ---------------------------------------------------------------------------
# Gauss hypergeometric 2F1


_SERIES_MAX_TERMS = 4000


def _hyp2f1_series(a: float, b: float, c: float, z: float, tol: float = 1e-15) -> float:
    """Direct power series; caller guarantees |z| small enough to converge."""
    term = 1.0
    acc = 1.0
    for k in range(_SERIES_MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        acc += term
        if abs(term) <= tol * max(1.0, abs(acc)):
            return acc
    raise DomainError(f"hypergeometric series did not converge at z={z}")


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric 2F1(a, b; c; z) for real z < 1.

    The raw series is used for z in [0, 0.75].  Near z = 1 the connection
    formula in the argument 1-z takes over (valid for non-integer c-a-b,
    which holds for every call pattern in this package, where c-a-b is
    +-s with s in (0,1)).  Negative z is mapped into (0,1) by the Pfaff
    transformation.
    """
    if c <= 0.0 and c == math.floor(c):
        raise DomainError(f"2F1 undefined for non-positive integer c={c}")
    if z >= 1.0:
        raise DomainError(f"2F1 argument must satisfy z < 1, got z={z}")
    if z == 0.0:
        return 1.0
    if z < 0.0:
        # Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1))
        w = z / (z - 1.0)
        return (1.0 - z) ** (-a) * hyp2f1(a, c - b, c, w)
    if z <= 0.75:
        return _hyp2f1_series(a, b, c, z)
    # linear transformation in 1-z
    cab = c - a - b
    if cab == math.floor(cab):
        raise DomainError(f"1-z connection formula needs non-integer c-a-b, got {cab}")
    w = 1.0 - z
    t1 = (
        gamma_fn(c)
        * gamma_fn(cab)
        / (gamma_fn(c - a) * gamma_fn(c - b))
        * _hyp2f1_series(a, b, 1.0 - cab, w)
    )
    t2 = (
        w ** cab
        * gamma_fn(c)
        * gamma_fn(-cab)
        / (gamma_fn(a) * gamma_fn(b))
        * _hyp2f1_series(c - a, c - b, 1.0 + cab, w)
    )
    return t1 + t2


# ---------------------------------------------------------------------------
# Bessel J (delegated to scipy behind the validated surface)


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind J_nu(x), nu in [0,10], x in [0,100]."""
    if not (0.0 <= nu <= 10.0):
        raise DomainError(f"order nu={nu} outside validated range [0, 10]")
    if not (0.0 <= x <= 100.0):
        raise DomainError(f"argument x={x} outside validated range [0, 100]")
    return float(_sp.jv(nu, x))


# ---------------------------------------------------------------------------
# named constants


def unit_ball_volume(n: int) -> float:
    """|B_1| in R^n."""
    return math.pi ** (n / 2.0) / gamma_fn(n / 2.0 + 1.0)


def sphere_area(n: int) -> float:
    """H^{n-1}(S^{n-1}), the surface measure of the unit sphere in R^n."""
    return n * unit_ball_volume(n)


@dataclass(frozen=True)
class ConstantSet:
    """Every named constant of the formula family at fixed (n, s).

    c_frac        normalization of the singular-integral fractional Laplacian,
                  c_{n,s} = s 4^s Gamma((n+2s)/2) / (pi^{n/2} Gamma(1-s)).
                  This is the variant that makes the torsion identity
                  (-Delta)^s [gamma (1-|x|^2)^s_+] = 1 hold and makes the
                  reflected-kernel constant c_tilde independent of n.
    gamma_torsion torsion-profile constant 4^{-s} Gamma(n/2) /
                  (Gamma((n+2s)/2) Gamma(1+s)).
    gamma_poisson Poisson-kernel constant sin(pi s) Gamma(n/2) / pi^{n/2+1}.
    a_hyp         exterior-formula constant s Gamma(n/2) /
                  (Gamma((n+2s)/2+1) Gamma(1-s)).
    kappa_fk      Faber-Krahn eigenvalue constant.
    c_tilde       reflected-kernel constant, equal to c_{1,s}/(2s) for all n.
    a_ext         extension (Poisson) kernel constant Gamma((n+s)/2) /
                  (pi^{n/2} Gamma(s/2)).
    a_tilde_ext   half-space trace constant 2 Gamma((s+1)/2) /
                  (pi^{1/2} Gamma(s/2)).
    phi_halfspace half-space extension energy of the indicator at unit scale.
    """

    c_frac: float
    gamma_torsion: float
    gamma_poisson: float
    a_hyp: float
    kappa_fk: float
    c_tilde: float
    a_ext: float
    a_tilde_ext: float
    phi_halfspace: float


def c_frac(n: int, s: float) -> float:
    return s * math.pi ** (-n / 2.0) * 4.0 ** s * gamma_fn((n + 2 * s) / 2.0) / gamma_fn(1.0 - s)


def gamma_torsion(n: int, s: float) -> float:
    return 4.0 ** (-s) * gamma_fn(n / 2.0) / (gamma_fn((n + 2 * s) / 2.0) * gamma_fn(1.0 + s))


def gamma_poisson(n: int, s: float) -> float:
    return math.sin(math.pi * s) * gamma_fn(n / 2.0) / math.pi ** (n / 2.0 + 1.0)


def a_hyp(n: int, s: float) -> float:
    return s * gamma_fn(n / 2.0) / (gamma_fn((n + 2 * s) / 2.0 + 1.0) * gamma_fn(1.0 - s))


def kappa_fk(n: int, s: float) -> float:
    return (
        n
        / 2.0 ** (1.0 - 2.0 * s)
        * unit_ball_volume(n) ** (1.0 + 2.0 * s / n)
        * (1.0 - s)
        * math.pi ** (-n / 2.0)
        * gamma_fn(n / 2.0 + s)
        / gamma_fn(2.0 + s)
    )


def c_tilde(s: float) -> float:
    # independent of the dimension; equals c_{1,s}/(2s)
    return 2.0 ** (2.0 * s - 1.0) * gamma_fn(s + 0.5) / (math.pi ** 0.5 * gamma_fn(1.0 - s))


def a_ext(n: int, s: float) -> float:
    return gamma_fn((n + s) / 2.0) / (math.pi ** (n / 2.0) * gamma_fn(s / 2.0))


def a_tilde_ext(s: float) -> float:
    return 2.0 * gamma_fn((s + 1.0) / 2.0) / (math.pi ** 0.5 * gamma_fn(s / 2.0))


def phi_halfspace(n: int, s: float) -> float:
    return (
        2.0
        * math.pi ** (n / 2.0 - 1.0)
        * gamma_fn((s + 1.0) / 2.0)
        * gamma_fn((1.0 - s) / 2.0)
        / (gamma_fn(s / 2.0) * gamma_fn((n - s) / 2.0 + 1.0))
    )


def constants(p: FracParams) -> ConstantSet:
    """Evaluate all nine named constants at (n, s) from their closed forms."""
    n, s = p.n, p.s
    return ConstantSet(
        c_frac=c_frac(n, s),
        gamma_torsion=gamma_torsion(n, s),
        gamma_poisson=gamma_poisson(n, s),
        a_hyp=a_hyp(n, s),
        kappa_fk=kappa_fk(n, s),
        c_tilde=c_tilde(s),
        a_ext=a_ext(n, s),
        a_tilde_ext=a_tilde_ext(s),
        phi_halfspace=phi_halfspace(n, s),
    )


def lambda1_lower_bound(p: FracParams, volume: float) -> float:
    """Lower bound (n/2s) |B_1|^{1+2s/n} c_{n,s} volume^{-2s/n} for the first
    Dirichlet eigenvalue of the fractional Laplacian on a set of given volume."""
    if volume <= 0.0:
        raise DomainError(f"volume must be positive, got {volume}")
    n, s = p.n, p.s
    return (
        n / (2.0 * s)
        * unit_ball_volume(n) ** (1.0 + 2.0 * s / n)
        * c_frac(n, s)
        * volume ** (-2.0 * s / n)
    )
