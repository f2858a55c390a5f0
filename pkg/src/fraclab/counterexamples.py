"""Explicit polynomial families defeating the classical Harnack inequality
and strong maximum principle for antisymmetric s-harmonic approximations.

Coefficients are exact rationals; evaluation is Horner in the requested
arithmetic, so the endpoint-pinning checks (sup = 4, inf = 2 eps, f(2) = 1,
f(3) = 5) hold to rational exactness where stated.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .specfun import DomainError


@dataclass(frozen=True)
class HarnackFamily:
    """Odd degree-7 polynomial family f^(eps)(x) = a x + b x^3 + c x^5 + d x^7
    with sup over (1,2) pinned at 4 and inf over (1/2, 5/2) pinned at 2 eps."""

    eps: Fraction

    def __post_init__(self):
        eps = Fraction(self.eps)
        if not (0 < eps < 1):
            raise DomainError("eps must lie in (0, 1)")
        object.__setattr__(self, "eps", eps)

    @property
    def coefficients(self) -> tuple:
        e = self.eps
        a = Fraction(5, 54) * (64 + 5 * e)
        b = -Fraction(1, 72) * (128 + 73 * e)
        c = Fraction(1, 36) * (-8 + 23 * e)
        d = Fraction(1, 216) * (16 - 19 * e)
        return (a, b, c, d)

    def eval_exact(self, x: Fraction) -> Fraction:
        a, b, c, d = self.coefficients
        x2 = x * x
        return x * (a + x2 * (b + x2 * (c + x2 * d)))


def harnack_family_eval(eps, x):
    """f^(eps)(x), vectorized (float Horner on the exact coefficients)."""
    fam = HarnackFamily(Fraction(eps).limit_denominator(10 ** 12)
                        if not isinstance(eps, Fraction) else eps)
    a, b, c, d = (float(c_) for c_ in fam.coefficients)
    x = np.asarray(x, dtype=float)
    x2 = x * x
    out = x * (a + x2 * (b + x2 * (c + x2 * d)))
    return out if out.ndim else float(out)


_SMP_COEFFS = (
    Fraction(-371, 43200),   # x^9
    Fraction(167, 1440),     # x^7
    Fraction(-2681, 14400),  # x^5
    Fraction(-4193, 2160),   # x^3
    Fraction(301, 50),       # x^1
)


def smp_counterexample_eval(x):
    """The odd degree-9 polynomial of the strong-maximum-principle
    counterexample; f(2) = 1 and f(3) = 5 exactly."""
    c9, c7, c5, c3, c1 = (float(c) for c in _SMP_COEFFS)
    x = np.asarray(x, dtype=float)
    x2 = x * x
    out = x * (c1 + x2 * (c3 + x2 * (c5 + x2 * (c7 + x2 * c9))))
    return out if out.ndim else float(out)


def smp_eval_exact(x: Fraction) -> Fraction:
    c9, c7, c5, c3, c1 = _SMP_COEFFS
    x = Fraction(x)
    x2 = x * x
    return x * (c1 + x2 * (c3 + x2 * (c5 + x2 * (c7 + x2 * c9))))


# ---------------------------------------------------------------------------
# extremum pinning (grid + refinement; tests cross-check via derivative roots)


def _extremum_on_interval(fun, lo: float, hi: float, mode: str,
                          grid: int = 4001, rounds: int = 40) -> float:
    xs = np.linspace(lo, hi, grid)
    vals = fun(xs)
    pick = np.argmax(vals) if mode == "sup" else np.argmin(vals)
    x0 = xs[pick]
    width = (hi - lo) / (grid - 1)
    best = vals[pick]
    for _ in range(rounds):
        a = max(lo, x0 - width)
        b = min(hi, x0 + width)
        xs = np.linspace(a, b, 33)
        vals = fun(xs)
        pick = np.argmax(vals) if mode == "sup" else np.argmin(vals)
        x0 = xs[pick]
        best = vals[pick]
        width *= 0.4
    return float(best)


def harnack_sup_inner(eps) -> float:
    """sup over (1, 2) of f^(eps); pinned at 4."""
    return _extremum_on_interval(lambda x: harnack_family_eval(eps, x), 1.0, 2.0, "sup")


def harnack_inf_outer(eps) -> float:
    """inf over (1/2, 5/2) of f^(eps); pinned at 2 eps."""
    return _extremum_on_interval(lambda x: harnack_family_eval(eps, x), 0.5, 2.5, "inf")


def harnack_ratio_lower_bound(eps: float) -> float:
    """(4 - eps) / (3 eps), the lower bound for the Harnack quotient of the
    s-harmonic approximants; diverges as eps -> 0."""
    return (4.0 - eps) / (3.0 * eps)


# ---------------------------------------------------------------------------
# CSV emission


_FAMILIES = {
    "harnack": lambda eps, xs: harnack_family_eval(eps, xs),
    "smp": lambda eps, xs: smp_counterexample_eval(xs),
}


def emit_family_csv(family: str, eps_list, grid, path) -> Path:
    """Write (family, eps, x, f) rows at 17 significant digits, UTF-8, LF.

    ``grid`` is (lo, hi, step); identical inputs produce byte-identical
    files."""
    if family not in _FAMILIES:
        raise DomainError(f"unknown family {family!r}; choose from {sorted(_FAMILIES)}")
    lo, hi, step = grid
    m = int(round((hi - lo) / step)) + 1
    xs = lo + step * np.arange(m)
    fn = _FAMILIES[family]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["family", "eps", "x", "f"])
    eps_iter = list(eps_list) if family == "harnack" else [0.0]
    for eps in eps_iter:
        vals = fn(eps, xs)
        for x, v in zip(xs, vals):
            writer.writerow([family, "%.17g" % float(eps), "%.17g" % x, "%.17g" % v])
    path = Path(path)
    try:
        path.write_bytes(buf.getvalue().encode("utf-8"))
    except OSError as exc:
        raise IOError(f"could not write {path}: {exc}") from exc
    return path
