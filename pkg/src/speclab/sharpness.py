"""Stability exponent probes along parametric families.

fit_exponent regresses log |lambda_k gap| against log lambda_2 gap over
a family snapshot grid; slopes materially below 1/2 on positive-part
data would contradict the sharp stability bound, slopes near 1/2 show
its exponent cannot be improved. doubling_check measures the prefactor
in the two-copy identity instead of asserting a literal constant: the
scaling law lambda(c Omega) = c^-2 lambda(Omega) fixes what the power
of two must be, and the probe reports what the data says.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import reference
from .errors import InsufficientDataError, SpecLabError
from .families import FAMILY_RANGES, domain_family
from .grid import GridDomain, rescale_domain
from .inequalities import BUDGET_FLOOR_REL, InequalityRecord, Uncertain
from .operators import SpectrumResult, extrapolate_spectra, spectrum

DEFAULT_T_GRID = (0.02, 0.04, 0.08, 0.16)
DEFAULT_FIT_H = 1.0 / 48.0
MIN_FIT_POINTS = 4

# log-spaced snapshots sitting above the error-budget floor of each
# family: the lambda_2 gap opens linearly in t for volume-split but only
# quadratically (or slower) for the other two, so their usable ranges
# start higher
FAMILY_T_GRIDS = {
    "volume-split": DEFAULT_T_GRID,
    "ellipse-pair": (0.2, 0.3, 0.45, 0.65),
    "dumbbell-neck": (0.08, 0.16, 0.3, 0.6),
}


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares slope of log gap_k against log gap_2."""

    family: str
    k: int
    samples: tuple[tuple[float, float], ...]
    slope: float
    intercept: float
    r_squared: float

    def to_record(self) -> dict:
        return {
            "family": self.family,
            "k": self.k,
            "n_points": len(self.samples),
            "samples": [list(s) for s in self.samples],
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
        }


@dataclass(frozen=True)
class GapSample:
    """Eigenvalue gaps to the two-ball reference at one family snapshot."""

    t: float
    gap2: Uncertain
    gaps: tuple[Uncertain, ...]  # signed lambda_k(Omega_t) - lambda_k(pair)


def family_gap_samples(
    family: str,
    t_grid: Sequence[float],
    h: float = DEFAULT_FIT_H,
    k_max: int = 6,
) -> list[GapSample]:
    """Solve the family snapshots and collect eigenvalue gaps."""
    lo, hi = FAMILY_RANGES[family]
    for t in t_grid:
        if not lo < t <= hi:
            raise ValueError(f"t={t} outside range ({lo}, {hi}] of {family!r}")
    theta = reference.two_ball_eigenvalues(k_max, dim=2)
    out = []
    for t in t_grid:
        xs = extrapolate_spectra(
            spectrum(domain_family(family, t, h), k_max),
            spectrum(domain_family(family, t, h / 2.0), k_max),
        )
        gaps = tuple(
            Uncertain(float(xs.eigenvalues[i]) - theta[i], xs.error_for(i))
            for i in range(k_max)
        )
        out.append(GapSample(t=t, gap2=gaps[1], gaps=gaps))
    return out


def analytic_split_samples(
    t_grid: Sequence[float], k_max: int = 6
) -> list[GapSample]:
    """Closed-form gap samples for the volume-split family.

    The family is a disjoint pair of balls with measure fractions
    (1/2 + t, 1/2 - t), so its spectrum is the sorted merge of two scaled
    Bessel spectra; no grids involved.
    """
    theta = reference.two_ball_eigenvalues(k_max, dim=2)
    out = []
    for t in t_grid:
        vals = reference.two_ball_eigenvalues(
            k_max, fractions=(0.5 + t, 0.5 - t), dim=2
        )
        gaps = tuple(
            Uncertain(float(vals[i] - theta[i])) for i in range(k_max)
        )
        out.append(GapSample(t=float(t), gap2=gaps[1], gaps=gaps))
    return out


def fit_from_samples(
    family: str,
    k: int,
    samples: Sequence[GapSample],
    positive_part: bool = False,
) -> ExponentFit:
    """Log-log fit of the k-th gap magnitude against the lambda_2 gap.

    Snapshots whose lambda_2 gap (or k-th gap magnitude) does not exceed
    its own error budget are dropped; fewer than 4 surviving points is an
    insufficient-data error.
    """
    pairs = []
    for s in samples:
        if s.gap2.value <= s.gap2.error:
            continue
        g = s.gaps[k - 1]
        y = g.value if positive_part else abs(g.value)
        if y <= g.error:
            continue
        pairs.append((s.gap2.value, y))
    if len(pairs) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"{family} k={k}: only {len(pairs)} usable points "
            f"(need {MIN_FIT_POINTS})"
        )
    pairs.sort()
    x = np.log(np.array([p[0] for p in pairs]))
    y = np.log(np.array([p[1] for p in pairs]))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    var = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if var == 0.0 else max(0.0, 1.0 - float(np.sum(resid**2)) / var)
    return ExponentFit(
        family=family,
        k=k,
        samples=tuple(pairs),
        slope=float(slope),
        intercept=float(intercept),
        r_squared=min(r2, 1.0),
    )


def fit_exponent(
    family: str,
    k: int,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
    h: float = DEFAULT_FIT_H,
    positive_part: bool = False,
) -> ExponentFit:
    samples = family_gap_samples(family, t_grid, h, k_max=max(k, 2))
    return fit_from_samples(family, k, samples, positive_part)


def fit_all_exponents(
    family: str,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
    h: float = DEFAULT_FIT_H,
    k_max: int = 6,
    positive_part: bool = False,
) -> dict[int, ExponentFit | None]:
    """One family solve, fits for every k; None where data is too thin."""
    samples = family_gap_samples(family, t_grid, h, k_max)
    fits: dict[int, ExponentFit | None] = {}
    for k in range(1, k_max + 1):
        try:
            fits[k] = fit_from_samples(family, k, samples, positive_part)
        except InsufficientDataError:
            fits[k] = None
    return fits


# ----------------------------------------------------------------------
# doubling construction


def doubled_domain(omega: GridDomain, gap_cells: int = 4) -> GridDomain:
    """Two disjoint half-measure copies of omega on one grid.

    Each copy is omega rescaled by 2^(-1/d); disjointness is exact at the
    matrix level (the copies share no stencil neighbors).
    """
    half = rescale_domain(omega, 2.0 ** (-1.0 / omega.dim))
    m = half.mask
    gap = np.zeros((gap_cells,) + m.shape[1:], dtype=bool)
    mask = np.concatenate([m, gap, m], axis=0)
    return GridDomain(
        h=half.h, origin=half.origin, mask=mask, label=f"{omega.label}x2"
    )


def doubling_check(
    omega_coarse: GridDomain,
    omega_fine: GridDomain,
    k: int,
) -> InequalityRecord:
    """Measure the prefactor of the two-copy spectral identity.

    lhs = |lambda_k(Omega) - lambda_k(ball)|, rhs = |lambda_2k(doubled) -
    lambda_2k(two-ball set)|, both against analytic references. The ratio
    is recorded; its log2 is the measured power of two relating the two
    sides (the scaling law predicts -2/d).
    """
    if abs(omega_coarse.h - 2.0 * omega_fine.h) > 1e-9 * omega_coarse.h:
        raise SpecLabError("doubling check expects spacings (h, h/2)")
    d = omega_fine.dim
    xs = extrapolate_spectra(
        spectrum(omega_coarse, k), spectrum(omega_fine, k)
    )
    xs2 = extrapolate_spectra(
        spectrum(doubled_domain(omega_coarse), 2 * k),
        spectrum(doubled_domain(omega_fine), 2 * k),
    )
    ball = reference.ball_eigenvalues(k, 1.0, d)
    theta = reference.two_ball_eigenvalues(2 * k, dim=d)
    lam = Uncertain(float(xs.eigenvalues[k - 1]), xs.error_for(k - 1))
    lam2 = Uncertain(float(xs2.eigenvalues[2 * k - 1]), xs2.error_for(2 * k - 1))
    lhs = Uncertain(abs(lam.value - ball[k - 1]), lam.error)
    rhs = Uncertain(abs(lam2.value - theta[2 * k - 1]), lam2.error)
    ratio = math.nan if rhs.value <= 0 else lhs.value / rhs.value
    scale = max(lhs.value, rhs.value, 1e-300)
    budget = (lhs.error + rhs.error + BUDGET_FLOOR_REL * scale) / scale
    return InequalityRecord(
        "doubling-identity", omega_fine.label, k, omega_fine.h,
        lhs.value, rhs.value, None, ratio, budget, "constant-unknown",
    )


def measured_power_of_two(record: InequalityRecord) -> float:
    """Power p with lhs = 2^p rhs for one doubling record."""
    if not math.isfinite(record.ratio) or record.ratio <= 0:
        return math.nan
    return math.log2(record.ratio)


def doubling_power_fit(
    records: Sequence[InequalityRecord],
) -> tuple[float, float]:
    """Pooled power of two and r-squared across doubling records.

    Fits log2 lhs = log2 rhs + p (unit slope); r_squared measures how
    well a single power explains all records.
    """
    pts = [
        (math.log2(r.rhs_constant_free), math.log2(r.lhs))
        for r in records
        if r.lhs > 0 and r.rhs_constant_free > 0
    ]
    if len(pts) < 2:
        raise InsufficientDataError("need at least 2 usable doubling records")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    power = float(np.mean(y - x))
    resid = y - (x + power)
    var = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if var == 0.0 else max(0.0, 1.0 - float(np.sum(resid**2)) / var)
    return power, min(r2, 1.0)
