"""Splitting a domain into two disjoint pieces governed by the second mode.

For a connected domain the pieces are the sign sets of the second
eigenfunction, whose first eigenvalues both equal lambda_2 of the whole
set in the continuum. For a disconnected domain two strategies compete:
grouping whole connected components, and the nodal split inside the
component that carries the second mode (needed when one component holds
both of the lowest two eigenvalues, where any component grouping has
max(lambda_1) above lambda_2). The better of the two is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy import ndimage

from .errors import DecompositionError
from .grid import GridDomain
from .operators import SpectrumResult, spectrum

# |u_2| below this fraction of its peak counts as the nodal line
NODAL_ZERO_REL = 1e-10

# hard sanity ceiling on max(lambda_1 of pieces) / lambda_2; finer
# tolerances are asserted by the verification harness, not here
GROSS_VIOLATION = 1.10

# exhaustive component-partition search cutoff
EXHAUSTIVE_COMPONENT_LIMIT = 12


@dataclass(frozen=True)
class Decomposition:
    """Two disjoint open subsets with lambda_1 of each piece."""

    omega_plus: GridDomain
    omega_minus: GridDomain
    lambda1_plus: float
    lambda1_minus: float
    source: str  # "nodal" or "components"

    @property
    def worst_lambda1(self) -> float:
        return max(self.lambda1_plus, self.lambda1_minus)

    def to_record(self) -> dict:
        return {
            "source": self.source,
            "lambda1_plus": self.lambda1_plus,
            "lambda1_minus": self.lambda1_minus,
            "measure_plus": self.omega_plus.measure(),
            "measure_minus": self.omega_minus.measure(),
        }


def connected_components(omega: GridDomain) -> list[GridDomain]:
    """Face-connected components (4-connectivity in 2D, 6 in 3D)."""
    structure = ndimage.generate_binary_structure(omega.dim, 1)
    labels, n = ndimage.label(omega.mask, structure=structure)
    return [
        omega.with_mask(labels == i, f"{omega.label}#c{i}")
        for i in range(1, n + 1)
    ]


def _drop_isolated(mask: np.ndarray) -> np.ndarray:
    """Remove cells with no face neighbor in the set, until stable."""
    mask = mask.copy()
    while True:
        neighbors = np.zeros(mask.shape, dtype=np.int8)
        for axis in range(mask.ndim):
            for shift in (1, -1):
                neighbors += np.roll(mask, shift, axis=axis)
        isolated = mask & (neighbors == 0)
        if not isolated.any():
            return mask
        mask &= ~isolated


def _sign_masks(
    omega: GridDomain, u2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    scale = float(np.max(np.abs(u2)))
    zero = np.abs(u2) <= NODAL_ZERO_REL * scale
    plus = _drop_isolated(omega.mask & (u2 > 0) & ~zero)
    minus = _drop_isolated(omega.mask & (u2 < 0) & ~zero)
    return plus, minus


def _nodal_candidate(
    omega: GridDomain, spec: SpectrumResult
) -> tuple[GridDomain, GridDomain] | None:
    u2 = spec.eigenfunctions[1]
    plus, minus = _sign_masks(omega, u2)
    if not plus.any() or not minus.any():
        return None
    return (
        omega.with_mask(plus, f"{omega.label}+"),
        omega.with_mask(minus, f"{omega.label}-"),
    )


def _rotated_candidate(
    omega: GridDomain, spec: SpectrumResult
) -> tuple[GridDomain, GridDomain] | None:
    """Sign-changing representative inside the span of the two lowest modes.

    A converged second eigenvector of a connected mask must change sign
    (the first is one-signed, orthogonality forces it). When lambda_1 and
    lambda_2 are numerically degenerate, as for two lobes joined by a
    hair-thin neck, the solver may return lobe-localized basis vectors of
    the cluster instead; any unit vector of their span is then an equally
    valid second mode. Scan rotations for the one that splits its mass
    most evenly between signs. Downstream the pieces are still checked by
    independent solves, so a bad pick cannot slip through.
    """
    u1 = spec.eigenfunctions[0]
    u2 = spec.eigenfunctions[1]
    total = float(np.sum(u2 * u2))
    best_score, best_v = -1.0, None
    for phi in np.linspace(-np.pi / 2, np.pi / 2, 65):
        v = np.cos(phi) * u2 + np.sin(phi) * u1
        score = min(
            float(np.sum(v[v > 0] ** 2)), float(np.sum(v[v < 0] ** 2))
        )
        if score > best_score:
            best_score, best_v = score, v
    if best_score < 1e-4 * total:
        return None
    plus, minus = _sign_masks(omega, best_v)
    if not plus.any() or not minus.any():
        return None
    return (
        omega.with_mask(plus, f"{omega.label}+"),
        omega.with_mask(minus, f"{omega.label}-"),
    )


def _component_candidate(
    components: list[GridDomain], omega: GridDomain
) -> tuple[GridDomain, GridDomain]:
    """Partition whole components into two groups minimizing max lambda_1.

    lambda_1 of a group is the min over its components, so only the
    assignment of the lowest-lambda_1 components matters; the exhaustive
    search below is cheap because per-component values are reused.
    """
    lam = [spectrum(c, 1).eigenvalues[0] for c in components]
    if len(components) > EXHAUSTIVE_COMPONENT_LIMIT:
        order = np.argsort(lam)
        group1 = {int(order[0])}
        group2 = set(range(len(components))) - group1
    else:
        best = None
        indices = range(len(components))
        for size in range(1, len(components) // 2 + 1):
            for combo in combinations(indices, size):
                g1 = set(combo)
                g2 = set(indices) - g1
                score = max(min(lam[i] for i in g1), min(lam[i] for i in g2))
                if best is None or score < best[0]:
                    best = (score, g1, g2)
        _, group1, group2 = best

    def merge(group: set, tag: str) -> GridDomain:
        mask = np.zeros_like(omega.mask)
        for i in group:
            mask |= components[i].mask
        return omega.with_mask(mask, f"{omega.label}{tag}")

    return merge(group1, "+"), merge(group2, "-")


def decompose(omega: GridDomain, spec: SpectrumResult) -> Decomposition:
    """Disjoint pieces whose worst lambda_1 stays at or below lambda_2.

    Connected domains use the sign sets of the second eigenfunction. For
    disconnected domains both the component grouping and (when the second
    mode changes sign) the nodal split are solved independently and the
    one with the smaller max(lambda_1) wins.
    """
    if spec.k < 2:
        raise DecompositionError("need the second eigenfunction to decompose")
    lambda2 = float(spec.eigenvalues[1])
    components = connected_components(omega)

    candidates: list[tuple[GridDomain, GridDomain, str]] = []
    nodal = _nodal_candidate(omega, spec)
    if nodal is None and len(components) == 1:
        nodal = _rotated_candidate(omega, spec)
    if nodal is not None:
        candidates.append((*nodal, "nodal"))
    if len(components) >= 2:
        candidates.append((*_component_candidate(components, omega), "components"))

    if not candidates:
        raise DecompositionError(
            f"second eigenfunction of connected domain {omega.label!r} "
            "does not change sign; eigenfunction quality problem"
        )

    best: Decomposition | None = None
    for plus, minus, source in candidates:
        lam_p = float(spectrum(plus, 1).eigenvalues[0])
        lam_m = float(spectrum(minus, 1).eigenvalues[0])
        cand = Decomposition(plus, minus, lam_p, lam_m, source)
        if best is None or cand.worst_lambda1 < best.worst_lambda1:
            best = cand

    if best.worst_lambda1 > lambda2 * GROSS_VIOLATION:
        raise DecompositionError(
            f"decomposition of {omega.label!r} exceeds lambda_2 grossly: "
            f"max(lambda_1) = {best.worst_lambda1:.6g} vs lambda_2 = {lambda2:.6g}"
        )
    return best
