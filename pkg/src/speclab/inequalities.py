"""Inequality evaluation harness with explicit error budgets.

Every check evaluates both sides of one inequality on solver output and
produces an InequalityRecord. Known-constant inequalities get a verdict
(holds / holds-within-budget / violated); inequalities whose dimensional
constant is non-explicit are recorded as constant-unknown and their
lhs/rhs ratios are aggregated into empirical constants. The reference
side for the two-ball minimizer and the ball is always analytic
(Bessel-based); grids only enter through the domain under study.

Error model: extrapolated quantities carry |q_{h/2} - q_h| estimates,
propagated to first order through each formula, and every verdict allows
a relative budget floored at 1 percent.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import reference
from .asymmetry import AsymmetryResult, fraenkel1, fraenkel2
from .decomposition import Decomposition, decompose
from .errors import DegenerateDomainError, SpecLabError
from .families import DomainSpec, build_domain
from .grid import (
    GridDomain,
    TwoBallConfig,
    boundary_cell_count,
    union,
)
from .operators import (
    SpectrumResult,
    TorsionResult,
    extrapolate_spectra,
    extrapolate_torsion,
    spectrum,
    torsion,
)

BUDGET_FLOOR_REL = 0.01

DEFAULT_SWEEP_H = 1.0 / 48.0
DEFAULT_K_MAX = 6

GAP_CONSTANT = math.exp(1.0 / (4.0 * math.pi))


# ----------------------------------------------------------------------
# first-order error propagation


@dataclass(frozen=True)
class Uncertain:
    """A value with an absolute error bound, combined to first order."""

    value: float
    error: float = 0.0

    @staticmethod
    def of(x: "Uncertain | float") -> "Uncertain":
        return x if isinstance(x, Uncertain) else Uncertain(float(x))

    def __add__(self, other):
        o = Uncertain.of(other)
        return Uncertain(self.value + o.value, self.error + o.error)

    __radd__ = __add__

    def __sub__(self, other):
        o = Uncertain.of(other)
        return Uncertain(self.value - o.value, self.error + o.error)

    def __rsub__(self, other):
        return Uncertain.of(other).__sub__(self)

    def __mul__(self, other):
        o = Uncertain.of(other)
        err = abs(self.value) * o.error + abs(o.value) * self.error
        return Uncertain(self.value * o.value, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Uncertain.of(other)
        val = self.value / o.value
        err = self.error / abs(o.value) + abs(val) * o.error / abs(o.value)
        return Uncertain(val, err)

    def __rtruediv__(self, other):
        return Uncertain.of(other).__truediv__(self)

    def __pow__(self, p: float):
        if self.value <= 0:
            raise ValueError(f"power of non-positive uncertain value {self.value}")
        val = self.value**p
        return Uncertain(val, abs(p) * val * self.error / self.value)

    def positive_part(self) -> "Uncertain":
        return Uncertain(max(self.value, 0.0), self.error)


# ----------------------------------------------------------------------
# records and verdicts


@dataclass(frozen=True)
class InequalityRecord:
    """One inequality evaluation row (CSV schema order)."""

    inequality_id: str
    domain: str
    k: int | None
    h: float
    lhs: float
    rhs_constant_free: float
    known_constant: float | None
    ratio: float
    error_budget: float
    verdict: str
    theta_reference: str = "analytic"

    def to_row(self) -> list[str]:
        def num(x, fmt="%.10g"):
            if x is None or (isinstance(x, float) and not math.isfinite(x)):
                return ""
            return fmt % x

        return [
            self.inequality_id,
            self.domain,
            "" if self.k is None else str(self.k),
            num(self.h),
            num(self.lhs),
            num(self.rhs_constant_free),
            num(self.known_constant),
            num(self.ratio),
            num(self.error_budget),
            self.verdict,
        ]

    def to_record(self) -> dict:
        def num(x):
            if x is None or not math.isfinite(x):
                return None
            return x

        return {
            "inequality_id": self.inequality_id,
            "domain": self.domain,
            "k": self.k,
            "h": self.h,
            "lhs": num(self.lhs),
            "rhs_constant_free": num(self.rhs_constant_free),
            "known_constant": self.known_constant,
            "ratio": num(self.ratio),
            "error_budget": num(self.error_budget),
            "verdict": self.verdict,
            "theta_reference": self.theta_reference,
        }


CSV_COLUMNS = [
    "inequality_id",
    "domain",
    "k",
    "h",
    "lhs",
    "rhs_constant_free",
    "known_constant",
    "ratio",
    "error_budget",
    "verdict",
]


def _record(
    inequality_id: str,
    domain: str,
    k: int | None,
    h: float,
    lhs: Uncertain,
    rhs_cf: Uncertain,
    known_constant: float | None,
    direction: str = "le",
) -> InequalityRecord:
    """Assemble a record and decide the verdict.

    direction "le": assert lhs <= known_constant * rhs_cf; "ge" the
    reverse. known_constant None yields a constant-unknown record whose
    ratio is kept for aggregation (nan when the constant-free side is not
    positive beyond its own error).
    """
    ratio = math.nan
    if rhs_cf.value > 0 and math.isfinite(rhs_cf.value):
        ratio = lhs.value / rhs_cf.value

    const = 1.0 if known_constant is None else known_constant
    scale = max(abs(lhs.value), abs(const * rhs_cf.value), 1e-300)
    tol_abs = lhs.error + const * rhs_cf.error + BUDGET_FLOOR_REL * scale
    budget = tol_abs / scale

    if known_constant is None:
        if rhs_cf.value <= rhs_cf.error:
            ratio = math.nan  # both sides at noise level: equality case
        return InequalityRecord(
            inequality_id, domain, k, h, lhs.value, rhs_cf.value, None,
            ratio, budget, "constant-unknown",
        )

    bound = known_constant * rhs_cf.value
    excess = lhs.value - bound if direction == "le" else bound - lhs.value
    if excess <= 0:
        verdict = "holds"
    elif excess <= tol_abs:
        verdict = "holds-within-budget"
    else:
        verdict = "violated"
    return InequalityRecord(
        inequality_id, domain, k, h, lhs.value, rhs_cf.value, known_constant,
        ratio, budget, verdict,
    )


# ----------------------------------------------------------------------
# per-domain precomputation


@dataclass
class DomainStudy:
    """Everything the checks need about one domain, solved once.

    Extrapolated quantities drive continuum-facing comparisons; the
    single-grid fine results are kept for same-grid difference checks
    where systematic bias cancels.
    """

    spec: DomainSpec
    domain_fine: GridDomain
    spectrum: SpectrumResult
    spectrum_fine: SpectrumResult
    torsion: TorsionResult
    torsion_fine: TorsionResult
    asym1: AsymmetryResult | None = None
    asym2: AsymmetryResult | None = None
    decomp: Decomposition | None = None
    union_spectrum: SpectrumResult | None = None
    lambda2_fine: float = math.nan

    @property
    def label(self) -> str:
        return self.domain_fine.label

    @property
    def dim(self) -> int:
        return self.domain_fine.dim

    @property
    def h(self) -> float:
        return self.domain_fine.h

    def lam(self, k: int) -> Uncertain:
        """Extrapolated k-th eigenvalue (1-based) with its budget."""
        return Uncertain(
            float(self.spectrum.eigenvalues[k - 1]),
            self.spectrum.error_for(k - 1, BUDGET_FLOOR_REL),
        )

    def torsion_value(self) -> Uncertain:
        return Uncertain(
            self.torsion.torsion, self.torsion.torsion_budget(BUDGET_FLOOR_REL)
        )

    def sup_w_value(self) -> Uncertain:
        return Uncertain(
            self.torsion.sup_w, self.torsion.sup_w_budget(BUDGET_FLOOR_REL)
        )


def study_domain(
    spec: DomainSpec,
    h: float = DEFAULT_SWEEP_H,
    k_max: int = DEFAULT_K_MAX,
    with_asymmetry: bool = True,
    with_decomposition: bool = True,
) -> DomainStudy:
    """Solve one domain at spacings h and h/2 and bundle the results."""
    dom_c = build_domain(spec, h)
    dom_f = build_domain(spec, h / 2.0)
    s_c = spectrum(dom_c, k_max)
    s_f = spectrum(dom_f, k_max)
    t_c = torsion(dom_c)
    t_f = torsion(dom_f)
    study = DomainStudy(
        spec=spec,
        domain_fine=dom_f,
        spectrum=extrapolate_spectra(s_c, s_f),
        spectrum_fine=s_f,
        torsion=extrapolate_torsion(t_c, t_f),
        torsion_fine=t_f,
        lambda2_fine=float(s_f.eigenvalues[1]),
    )
    if with_asymmetry:
        study.asym1 = fraenkel1(dom_f)
        study.asym2 = fraenkel2(dom_f)
    if with_decomposition:
        dec_c = decompose(dom_c, s_c)
        dec_f = decompose(dom_f, s_f)
        study.decomp = dec_f
        u_c = union(dec_c.omega_plus, dec_c.omega_minus, f"{dom_c.label}+-")
        u_f = union(dec_f.omega_plus, dec_f.omega_minus, f"{dom_f.label}+-")
        study.union_spectrum = extrapolate_spectra(
            spectrum(u_c, k_max), spectrum(u_f, k_max)
        )
    return study


# ----------------------------------------------------------------------
# reference quantities (analytic side)


def _theta_lambda(k: int, dim: int) -> float:
    return float(reference.two_ball_eigenvalues(k, dim=dim)[k - 1])


def _ball_lambda(k: int, dim: int) -> float:
    return float(reference.ball_eigenvalues(k, 1.0, dim)[k - 1])


def _lambda1_of_ball_with_measure(m: float, dim: int) -> float:
    from .grid import unit_ball_volume

    return reference.ball_first_eigenvalue(dim) * (unit_ball_volume(dim) / m) ** (
        2.0 / dim
    )


# ----------------------------------------------------------------------
# known-constant checks


def check_faber_krahn(study: DomainStudy) -> InequalityRecord:
    """lambda_1(Omega) >= lambda_1(ball of the same measure)."""
    return _record(
        "faber-krahn", study.label, 1, study.h,
        study.lam(1), Uncertain(_ball_lambda(1, study.dim)), 1.0, "ge",
    )


def check_krahn_szego(study: DomainStudy) -> InequalityRecord:
    """lambda_2(Omega) >= lambda_2 of the two-ball minimizer."""
    return _record(
        "krahn-szego", study.label, 2, study.h,
        study.lam(2), Uncertain(reference.minimizer_eigenvalue(study.dim)),
        1.0, "ge",
    )


def check_saint_venant(study: DomainStudy) -> InequalityRecord:
    """T(Omega) <= T(ball of the same measure)."""
    return _record(
        "saint-venant", study.label, None, study.h,
        study.torsion_value(),
        Uncertain(reference.ball_torsion(1.0, study.dim)), 1.0, "le",
    )


def check_talenti(study: DomainStudy) -> InequalityRecord:
    """sup of the torsion function is maximized by the ball."""
    return _record(
        "talenti", study.label, None, study.h,
        study.sup_w_value(),
        Uncertain(reference.ball_torsion_sup(1.0, study.dim)), 1.0, "le",
    )


def check_cheng_yang(study: DomainStudy, k: int) -> InequalityRecord:
    """lambda_k <= (1 + 4/d) k^(2/d) lambda_1."""
    d = study.dim
    rhs = Uncertain(float(k) ** (2.0 / d)) * study.lam(1)
    return _record(
        "cheng-yang", study.label, k, study.h,
        study.lam(k), rhs, 1.0 + 4.0 / d, "le",
    )


def check_kohler_jobin(study: DomainStudy, order: int) -> InequalityRecord:
    """Scale-invariant eigenvalue-torsion product bounded below.

    order 1: lambda_1^((d+2)/2) T minimized by the ball; order 2: the
    lambda_2 analogue minimized by the two-ball set.
    """
    d = study.dim
    expo = (d + 2) / 2.0
    if order == 1:
        lhs = study.lam(1) ** expo * study.torsion_value()
        ref = reference.kohler_jobin_scale_invariant(d)
    elif order == 2:
        lhs = study.lam(2) ** expo * study.torsion_value()
        ref = reference.pair_kohler_jobin_scale_invariant(d)
    else:
        raise ValueError("order must be 1 or 2")
    return _record(
        f"kohler-jobin-{order}", study.label, order, study.h,
        lhs, Uncertain(ref), 1.0, "ge",
    )


def check_eigenvalue_torsion_gap(
    omega: GridDomain,
    omega_sub: GridDomain,
    k: int,
    *,
    spectra: tuple[SpectrumResult, SpectrumResult] | None = None,
    torsions: tuple[TorsionResult, TorsionResult] | None = None,
) -> InequalityRecord:
    """Reciprocal eigenvalue gap controlled by the torsion deficit.

    For omega_sub inside omega: 0 <= 1/lambda_k(omega) -
    1/lambda_k(omega_sub) <= exp(1/(4 pi)) k lambda_k(omega)^(d/2)
    (T(omega) - T(omega_sub)). Both sides are evaluated on the same grid
    so the discretization bias largely cancels.
    """
    omega.require_same_grid(omega_sub)
    if not np.all(omega.mask[omega_sub.mask]):
        raise SpecLabError("omega_sub is not contained in omega")
    d = omega.dim
    if spectra is None:
        spectra = (spectrum(omega, k), spectrum(omega_sub, k))
    if torsions is None:
        torsions = (torsion(omega), torsion(omega_sub))
    s, s_sub = spectra
    t, t_sub = torsions
    lam = Uncertain(float(s.eigenvalues[k - 1]), s.error_for(k - 1))
    lam_sub = Uncertain(
        float(s_sub.eigenvalues[k - 1]), s_sub.error_for(k - 1)
    )
    lhs = 1.0 / lam - 1.0 / lam_sub
    gap = Uncertain(t.torsion, t.torsion_budget()) - Uncertain(
        t_sub.torsion, t_sub.torsion_budget()
    )
    rhs = Uncertain(float(k)) * lam ** (d / 2.0) * gap
    rec = _record(
        "eigenvalue-torsion-gap", omega.label, k, omega.h,
        lhs, rhs, GAP_CONSTANT, "le",
    )
    # left half of the sandwich: the gap of reciprocals is nonnegative
    if lhs.value < -(lhs.error + BUDGET_FLOOR_REL / max(lam.value, 1.0)):
        rec = InequalityRecord(
            rec.inequality_id, rec.domain, rec.k, rec.h, rec.lhs,
            rec.rhs_constant_free, rec.known_constant, rec.ratio,
            rec.error_budget, "violated",
        )
    return rec


def check_torsion_volume(
    omega: GridDomain,
    witness: TwoBallConfig,
    *,
    torsions: tuple[TorsionResult, TorsionResult] | None = None,
    theta: GridDomain | None = None,
) -> InequalityRecord:
    """Torsion loss under intersection controlled by the volume outside.

    T(Omega) - T(Omega ∩ Theta) <= (1/d + 2^(-2/d)/d^2) |Omega \\ Theta|
    for the rasterized witness pair Theta.
    """
    d = omega.dim
    if theta is None:
        theta = _rasterize_pair(omega, witness)
    omega.require_same_grid(theta)
    inter_mask = omega.mask & theta.mask
    outside_mask = omega.mask & ~theta.mask
    if torsions is None:
        t_omega = torsion(omega)
        t_inter = (
            torsion(omega.with_mask(inter_mask, f"{omega.label}&pair"))
            if inter_mask.any()
            else None
        )
    else:
        t_omega, t_inter = torsions
    # empty intersection contributes zero torsion, not an error
    lhs = Uncertain(t_omega.torsion, t_omega.torsion_budget()) - Uncertain(
        t_inter.torsion if t_inter is not None else 0.0,
        t_inter.torsion_budget() if t_inter is not None else 0.0,
    )
    out_measure = float(outside_mask.sum()) * omega.h**d
    out_err = 0.0
    if outside_mask.any():
        out_err = (
            boundary_cell_count(omega.with_mask(outside_mask, "outside"))
            * omega.h**d
        )
    rhs = Uncertain(out_measure, out_err)
    const = 1.0 / d + 1.0 / (2.0 ** (2.0 / d) * d * d)
    return _record(
        "torsion-volume-control", omega.label, None, omega.h,
        lhs, rhs, const, "le",
    )


def _rasterize_pair(template: GridDomain, witness: TwoBallConfig) -> GridDomain:
    r2 = witness.radius**2
    coords = np.meshgrid(*template.axes(), indexing="ij")
    d1 = sum((x - c) ** 2 for x, c in zip(coords, witness.center1))
    d2 = sum((x - c) ** 2 for x, c in zip(coords, witness.center2))
    mask = np.minimum(d1, d2) < r2
    # the witness may stick out of the template lattice; only its overlap
    # with the domain matters, so clearing the border layer loses nothing
    for axis in range(template.dim):
        mask[(slice(None),) * axis + (0,)] = False
        mask[(slice(None),) * axis + (-1,)] = False
    return template.with_mask(mask, "witness-pair")


def check_split_ball_gap(
    study: DomainStudy, decomp: Decomposition | None = None
) -> InequalityRecord:
    """Gap to the larger piece's ball bounded by twice the minimizer gap.

    Applies when the decomposition pieces straddle half the reference
    measure: lambda_2(Omega) - lambda_1(B+) <= 2 (lambda_2(Omega) -
    lambda_2(two-ball set)), B+ the ball with the larger piece's measure.
    """
    from .grid import unit_ball_volume

    d = study.dim
    decomp = decomp or study.decomp
    if decomp is None:
        raise SpecLabError("split-ball check needs a decomposition")
    m_plus = decomp.omega_plus.measure()
    m_minus = decomp.omega_minus.measure()
    if m_plus < m_minus:
        m_plus, m_minus = m_minus, m_plus
    half = unit_ball_volume(d) / 2.0
    cell_band = 0.5 * boundary_cell_count(study.domain_fine) * study.h**d
    if not (m_minus < half - cell_band and m_plus > half + cell_band):
        return InequalityRecord(
            "split-ball-gap", study.label, None, study.h,
            math.nan, math.nan, 2.0, math.nan, math.nan, "not-applicable",
        )
    lam2 = study.lam(2)
    m_err = 0.5 * boundary_cell_count(decomp.omega_plus) * study.h**d
    lam_ball = Uncertain(_lambda1_of_ball_with_measure(m_plus, d)) * (
        Uncertain(1.0, (2.0 / d) * m_err / m_plus)
    )
    lhs = lam2 - lam_ball
    rhs = lam2 - Uncertain(reference.minimizer_eigenvalue(d))
    return _record(
        "split-ball-gap", study.label, None, study.h, lhs, rhs, 2.0, "le"
    )


# ----------------------------------------------------------------------
# constant-unknown stability checks


def _delta_lambda2(study: DomainStudy) -> Uncertain:
    """lambda_2(Omega) - lambda_2(minimizer), analytic reference side."""
    gap = study.lam(2) - Uncertain(reference.minimizer_eigenvalue(study.dim))
    if gap.value < -gap.error:
        raise SpecLabError(
            f"lambda_2 of {study.label!r} sits below the minimizer value "
            "beyond budget: discretization bias"
        )
    return gap


def check_stability_coarse(study: DomainStudy, k: int) -> InequalityRecord:
    """|lambda_k(Omega) - lambda_k(pair)| vs the 1/(d+1)-power gap."""
    d = study.dim
    lhs = Uncertain(
        abs(study.lam(k).value - _theta_lambda(k, d)), study.lam(k).error
    )
    gap = _delta_lambda2(study)
    if gap.value <= gap.error:
        rhs = Uncertain(0.0, gap.error)
    else:
        rhs = (
            Uncertain(float(k) ** (2.0 + 4.0 / d))
            * study.lam(2) ** (d / (d + 1.0))
            * gap ** (1.0 / (d + 1.0))
        )
    return _record(
        "stability-coarse", study.label, k, study.h, lhs, rhs, None
    )


def _sharp_rhs(study: DomainStudy, k: int) -> Uncertain:
    d = study.dim
    gap = _delta_lambda2(study)
    if gap.value <= gap.error:
        return Uncertain(0.0, gap.error)
    return (
        Uncertain(float(k) ** (2.0 + 4.0 / d))
        * study.lam(2) ** 0.5
        * gap**0.5
    )


def check_stability_positive(study: DomainStudy, k: int) -> InequalityRecord:
    """(lambda_k(Omega) - lambda_k(pair))_+ vs the sqrt-power gap."""
    lhs = (study.lam(k) - Uncertain(_theta_lambda(k, study.dim))).positive_part()
    return _record(
        "stability-sharp-positive", study.label, k, study.h,
        lhs, _sharp_rhs(study, k), None,
    )


def check_stability_pair(study: DomainStudy, k: int) -> InequalityRecord:
    """|lambda_k of the decomposition pieces' union - lambda_k(pair)|.

    Precondition (checked): max of the pieces' lambda_1 does not exceed
    lambda_2(Omega) beyond budget.
    """
    if study.decomp is None or study.union_spectrum is None:
        raise SpecLabError("pair stability check needs a decomposition")
    tol = max(2.0 * BUDGET_FLOOR_REL, study.lam(2).error / study.lam(2).value)
    if study.decomp.worst_lambda1 > study.lambda2_fine * (1.0 + tol):
        raise SpecLabError(
            f"decomposition of {study.label!r} violates the lambda_2 bound: "
            f"{study.decomp.worst_lambda1:.6g} > {study.lambda2_fine:.6g}"
        )
    u = study.union_spectrum
    lam_u = Uncertain(float(u.eigenvalues[k - 1]), u.error_for(k - 1))
    lhs = Uncertain(
        abs(lam_u.value - _theta_lambda(k, study.dim)), lam_u.error
    )
    return _record(
        "stability-sharp-pair", study.label, k, study.h,
        lhs, _sharp_rhs(study, k), None,
    )


def check_ball_stability(study: DomainStudy, k: int) -> InequalityRecord:
    """|lambda_k(Omega) - lambda_k(ball)| vs the lambda_1 sqrt-power gap."""
    d = study.dim
    lam1 = study.lam(1)
    lhs = Uncertain(
        abs(study.lam(k).value - _ball_lambda(k, d)), study.lam(k).error
    )
    gap = lam1 - Uncertain(_ball_lambda(1, d))
    if gap.value <= gap.error:
        rhs = Uncertain(0.0, gap.error)
    else:
        rhs = Uncertain(float(k) ** (2.0 + 4.0 / d)) * lam1**0.5 * gap**0.5
    return _record(
        "ball-stability", study.label, k, study.h, lhs, rhs, None
    )


def check_quantitative_fk_ks(
    study: DomainStudy,
) -> tuple[InequalityRecord, InequalityRecord]:
    """Quantitative isoperimetric ratios for lambda_1 and lambda_2.

    Records (lambda_1/lambda_1(B) - 1) vs asymmetry^2 and
    (lambda_2/lambda_2(pair) - 1) vs pair-asymmetry^(d+1); the aggregated
    minimum ratio over a corpus is the empirical constant.
    """
    if study.asym1 is None or study.asym2 is None:
        raise SpecLabError("quantitative checks need asymmetry results")
    d = study.dim
    lhs1 = study.lam(1) / Uncertain(_ball_lambda(1, d)) - 1.0
    f1 = Uncertain(study.asym1.value, study.asym1.value_error)
    rhs1 = f1 * f1 if f1.value > 0 else Uncertain(0.0, f1.error)
    rec1 = _record(
        "quantitative-faber-krahn", study.label, 1, study.h,
        lhs1.positive_part(), rhs1, None,
    )
    lhs2 = study.lam(2) / Uncertain(reference.minimizer_eigenvalue(d)) - 1.0
    f2 = Uncertain(study.asym2.value, study.asym2.value_error)
    rhs2 = f2 ** (d + 1.0) if f2.value > 0 else Uncertain(0.0, f2.error)
    rec2 = _record(
        "quantitative-krahn-szego", study.label, 2, study.h,
        lhs2.positive_part(), rhs2, None,
    )
    return rec1, rec2


def check_torsion_split_probe(study: DomainStudy) -> InequalityRecord:
    """Exploratory: minimizer gap of lambda_2 vs squared torsion deficit.

    Data channel only (posed as an open question): relative lambda_2 gap
    against ((T(Omega) - T(pieces union)) / T(Omega))^2 for the
    decomposition pieces. No verdict is ever attached.
    """
    if study.decomp is None:
        raise SpecLabError("torsion split probe needs a decomposition")
    lam2_theta = reference.minimizer_eigenvalue(study.dim)
    lhs = (study.lam(2) - Uncertain(lam2_theta)) / Uncertain(lam2_theta)
    t_omega = Uncertain(
        study.torsion_fine.torsion, study.torsion_fine.torsion_budget()
    )
    u = union(study.decomp.omega_plus, study.decomp.omega_minus)
    t_union = torsion(u)
    deficit = (
        t_omega - Uncertain(t_union.torsion, t_union.torsion_budget())
    ) / t_omega
    rhs = (
        deficit * deficit
        if deficit.value > 0
        else Uncertain(0.0, deficit.error)
    )
    return _record(
        "torsion-split-probe", study.label, None, study.h,
        lhs.positive_part(), rhs, None,
    )


# ----------------------------------------------------------------------
# witness intersection bundle (shared by two checks)


@dataclass
class WitnessIntersection:
    theta: GridDomain
    inter: GridDomain | None
    inter_spectrum: SpectrumResult | None
    inter_torsion: TorsionResult | None


def witness_intersection(study: DomainStudy, k_max: int) -> WitnessIntersection:
    """Rasterize the pair witness and solve on the intersection."""
    if study.asym2 is None:
        raise SpecLabError("witness intersection needs the pair asymmetry")
    theta = _rasterize_pair(study.domain_fine, study.asym2.witness)
    inter_mask = study.domain_fine.mask & theta.mask
    if inter_mask.sum() < 8 * (k_max + 1):
        return WitnessIntersection(theta, None, None, None)
    inter = study.domain_fine.with_mask(inter_mask, f"{study.label}&pair")
    return WitnessIntersection(
        theta, inter, spectrum(inter, k_max), torsion(inter)
    )


# ----------------------------------------------------------------------
# sweep


@dataclass
class SweepReport:
    records: list[InequalityRecord]
    failures: list[dict]
    aggregates: dict[str, dict]
    provenance: dict[str, dict]

    @property
    def violation_count(self) -> int:
        return sum(1 for r in self.records if r.verdict == "violated")


def domain_checks(study: DomainStudy, k_max: int = DEFAULT_K_MAX) -> list[
    InequalityRecord
]:
    """All applicable checks for one solved domain."""
    records = [
        check_faber_krahn(study),
        check_krahn_szego(study),
        check_saint_venant(study),
        check_talenti(study),
        check_kohler_jobin(study, 1),
        check_kohler_jobin(study, 2),
    ]
    for k in range(1, k_max + 1):
        records.append(check_cheng_yang(study, k))
        records.append(check_stability_coarse(study, k))
        records.append(check_stability_positive(study, k))
        records.append(check_ball_stability(study, k))
    if study.decomp is not None:
        records.append(check_split_ball_gap(study))
        records.append(check_torsion_split_probe(study))
        if study.union_spectrum is not None:
            for k in range(1, k_max + 1):
                records.append(check_stability_pair(study, k))
    if study.asym2 is not None:
        wi = witness_intersection(study, k_max)
        records.append(
            check_torsion_volume(
                study.domain_fine,
                study.asym2.witness,
                torsions=(study.torsion_fine, wi.inter_torsion),
                theta=wi.theta,
            )
        )
        if wi.inter is not None:
            for k in range(1, k_max + 1):
                records.append(
                    check_eigenvalue_torsion_gap(
                        study.domain_fine,
                        wi.inter,
                        k,
                        spectra=(study.spectrum_fine, wi.inter_spectrum),
                        torsions=(study.torsion_fine, wi.inter_torsion),
                    )
                )
        rec1, rec2 = check_quantitative_fk_ks(study)
        records.extend([rec1, rec2])
    return records


def aggregate(records: Sequence[InequalityRecord]) -> dict[str, dict]:
    """Per-inequality summary: verdict counts and empirical constants."""
    out: dict[str, dict] = {}
    for rec in records:
        agg = out.setdefault(
            rec.inequality_id,
            {
                "rows": 0,
                "violations": 0,
                "within_budget": 0,
                "not_applicable": 0,
                "max_ratio": None,
                "min_ratio": None,
            },
        )
        agg["rows"] += 1
        if rec.verdict == "violated":
            agg["violations"] += 1
        elif rec.verdict == "holds-within-budget":
            agg["within_budget"] += 1
        elif rec.verdict == "not-applicable":
            agg["not_applicable"] += 1
        if math.isfinite(rec.ratio):
            if agg["max_ratio"] is None or rec.ratio > agg["max_ratio"]:
                agg["max_ratio"] = rec.ratio
            if agg["min_ratio"] is None or rec.ratio < agg["min_ratio"]:
                agg["min_ratio"] = rec.ratio
    return out


def run_domain(
    spec: DomainSpec,
    h: float = DEFAULT_SWEEP_H,
    k_max: int = DEFAULT_K_MAX,
) -> tuple[list[InequalityRecord], dict]:
    """Study one domain and evaluate every applicable check on it."""
    study = study_domain(spec, h, k_max)
    records = domain_checks(study, k_max)
    prov: dict = {
        "spec": {"kind": spec.kind, "params": spec.params, "label": spec.label},
        "spectrum": study.spectrum.to_record(),
        "torsion": study.torsion.to_record(),
        "theta_reference": "analytic",
    }
    if study.asym1 is not None:
        prov["witness_ball"] = study.asym1.witness_record()
        prov["asymmetry1"] = study.asym1.value
    if study.asym2 is not None:
        prov["witness_pair"] = study.asym2.witness_record()
        prov["asymmetry2"] = study.asym2.value
    if study.decomp is not None:
        prov["decomposition"] = study.decomp.to_record()
    return records, prov


def sweep(
    corpus: Sequence[DomainSpec],
    k_max: int = DEFAULT_K_MAX,
    h: float = DEFAULT_SWEEP_H,
    jobs: int = 1,
    progress: Callable[[str], None] | None = None,
) -> SweepReport:
    """Evaluate all checks over a corpus; per-domain failures are recorded
    and the sweep continues."""
    records: list[InequalityRecord] = []
    failures: list[dict] = []
    provenance: dict[str, dict] = {}

    def handle(label: str, outcome):
        if isinstance(outcome, Exception):
            failures.append({"domain": label, "error": str(outcome)})
        else:
            recs, prov = outcome
            records.extend(recs)
            provenance[label] = prov
        if progress is not None:
            progress(label)

    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                (spec.label, pool.submit(run_domain, spec, h, k_max))
                for spec in corpus
            ]
            for label, fut in futures:
                try:
                    handle(label, fut.result())
                except Exception as exc:  # noqa: BLE001 - recorded, not raised
                    handle(label, exc)
    else:
        for spec in corpus:
            try:
                handle(spec.label, run_domain(spec, h, k_max))
            except (SpecLabError, DegenerateDomainError, ValueError) as exc:
                handle(spec.label, exc)

    records.sort(key=lambda r: (r.inequality_id, r.domain, r.k or 0))
    return SweepReport(records, failures, aggregate(records), provenance)


# ----------------------------------------------------------------------
# serialization


def records_to_csv(records: Sequence[InequalityRecord]) -> str:
    """Render records as CSV text (deterministic bytes for fixed input)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.to_row())
    return buf.getvalue()


def report_to_json(report: SweepReport) -> str:
    payload = {
        "records": [r.to_record() for r in report.records],
        "aggregates": report.aggregates,
        "failures": report.failures,
        "provenance": report.provenance,
    }
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)
