"""Closed-form reference values: ball spectra, torsion constants, pair spectra.

Dirichlet eigenvalues of a ball of radius r in R^d are (z / r)^2 where z
runs over the positive zeros of the Bessel functions J_{m + d/2 - 1}
(angular order m, multiplicity 1 for m = 0 and 2 for m >= 1 in d = 2;
multiplicity 2m + 1 in d = 3). Torsion quantities for the ball follow from
the explicit profile w(x) = (r^2 - |x|^2) / (2 d).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.special import jn_zeros, jv

from .grid import unit_ball_volume


@lru_cache(maxsize=256)
def bessel_zeros(order: float, count: int) -> tuple[float, ...]:
    """First `count` positive zeros of J_order (order may be half-integer)."""
    if count < 1:
        return ()
    if float(order).is_integer():
        return tuple(jn_zeros(int(order), count))
    # bracket scan: consecutive zeros of J_nu are separated by less than pi
    # once past the first; step conservatively and refine by brentq
    zeros: list[float] = []
    step = 0.1
    x = max(order, 0.0) + step  # J_nu > 0 just right of the origin for nu > 0
    prev = jv(order, x)
    while len(zeros) < count:
        x_next = x + step
        cur = jv(order, x_next)
        if prev == 0.0:
            zeros.append(x)
        elif prev * cur < 0.0:
            zeros.append(float(brentq(lambda s: jv(order, s), x, x_next)))
        x, prev = x_next, cur
    return tuple(zeros[:count])


@lru_cache(maxsize=64)
def ball_eigenvalues_unit(count: int, dim: int = 2) -> tuple[float, ...]:
    """First `count` Dirichlet eigenvalues of the unit-radius ball in R^dim."""
    if dim not in (2, 3):
        raise ValueError(f"dim must be 2 or 3, got {dim}")
    vals: list[float] = []
    m = 0
    # accumulate by angular order until the smallest new candidate exceeds
    # the current count-th value
    while True:
        zs = bessel_zeros(m + dim / 2 - 1, count)
        mult = 1 if m == 0 else (2 if dim == 2 else 2 * m + 1)
        for z in zs:
            vals.extend([z * z] * mult)
        vals.sort()
        next_first = bessel_zeros(m + 1 + dim / 2 - 1, 1)[0] ** 2
        if len(vals) >= count and next_first > vals[count - 1]:
            return tuple(vals[:count])
        m += 1


def ball_eigenvalues(count: int, radius: float = 1.0, dim: int = 2) -> np.ndarray:
    """First `count` Dirichlet eigenvalues of a ball of given radius."""
    base = np.asarray(ball_eigenvalues_unit(count, dim))
    return base / radius**2


def ball_radius_for_measure(measure: float, dim: int = 2) -> float:
    return (measure / unit_ball_volume(dim)) ** (1.0 / dim)


def two_ball_eigenvalues(
    count: int,
    fractions: tuple[float, float] = (0.5, 0.5),
    dim: int = 2,
    total_measure: float | None = None,
) -> np.ndarray:
    """Merged spectrum of two disjoint balls holding the given measure split.

    fractions are shares of the total measure (default: the unit-ball
    volume, so fractions (1/2, 1/2) give the two-ball minimizer).
    """
    f1, f2 = fractions
    if f1 <= 0 or f2 <= 0:
        raise ValueError("both measure fractions must be positive")
    if total_measure is None:
        total_measure = unit_ball_volume(dim)
    r1 = ball_radius_for_measure(f1 * total_measure, dim)
    r2 = ball_radius_for_measure(f2 * total_measure, dim)
    merged = np.concatenate(
        [ball_eigenvalues(count, r1, dim), ball_eigenvalues(count, r2, dim)]
    )
    merged.sort()
    return merged[:count]


def minimizer_eigenvalue(dim: int = 2) -> float:
    """Lowest eigenvalue of the two-ball minimizer of unit-ball measure.

    Both balls carry half the measure, so this equals 2^(2/d) times the
    first eigenvalue of the unit ball; it is also the second eigenvalue
    (the pair spectrum starts with a double eigenvalue).
    """
    j1 = bessel_zeros(dim / 2 - 1, 1)[0]
    return 2 ** (2.0 / dim) * j1 * j1


def ball_first_eigenvalue(dim: int = 2) -> float:
    """First Dirichlet eigenvalue of the unit-radius ball."""
    j1 = bessel_zeros(dim / 2 - 1, 1)[0]
    return j1 * j1


def ball_torsion(radius: float = 1.0, dim: int = 2) -> float:
    """Torsional rigidity of the ball: integral of the torsion function."""
    return unit_ball_volume(dim) * radius ** (dim + 2) / (dim * (dim + 2))


def ball_torsion_sup(radius: float = 1.0, dim: int = 2) -> float:
    """Max of the ball torsion function, attained at the center."""
    return radius * radius / (2.0 * dim)


def ball_torsion_boundary_grad(radius: float = 1.0, dim: int = 2) -> float:
    """|grad w| on the ball boundary for the explicit radial profile."""
    return radius / dim


def pair_torsion(dim: int = 2) -> float:
    """Torsional rigidity of the two-ball minimizer of unit-ball measure."""
    r = 2.0 ** (-1.0 / dim)
    return 2.0 * ball_torsion(r, dim)


def pair_boundary_grad(dim: int = 2) -> float:
    """Boundary gradient of the torsion function on the minimizer balls."""
    return ball_torsion_boundary_grad(2.0 ** (-1.0 / dim), dim)


def kohler_jobin_scale_invariant(dim: int = 2) -> float:
    """Scale-invariant product lambda_1^((d+2)/2) * T for the unit ball."""
    lam = ball_first_eigenvalue(dim)
    return lam ** ((dim + 2) / 2.0) * ball_torsion(1.0, dim)


def pair_kohler_jobin_scale_invariant(dim: int = 2) -> float:
    """Scale-invariant lambda_2-torsion product for the two-ball minimizer."""
    lam = minimizer_eigenvalue(dim)
    return lam ** ((dim + 2) / 2.0) * pair_torsion(dim)
