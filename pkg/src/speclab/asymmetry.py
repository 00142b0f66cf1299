"""Fraenkel asymmetries: best overlap of a set by one ball or a ball pair.

Both asymmetries minimize |Omega symdiff W| / |Omega| over witness
placements W: a single ball of equal measure, or two disjoint balls of
half measure each. The search runs Nelder-Mead on a smoothed overlap
objective (cell coverage ramped linearly over one cell width, so the
optimizer sees slopes instead of rasterization plateaus) from several
deterministic starts, then polishes with a pattern search on the exact
mask objective. The reported value is recomputed exactly from the
witness rasterized on an aligned extension of the domain's own lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.optimize import minimize

from .grid import (
    GridDomain,
    TwoBallConfig,
    boundary_cell_count,
    pad_cells,
    unit_ball_volume,
)

# overlap penalty weight for the pair witness, in units of the lens volume
OVERLAP_PENALTY = 4.0

# pattern-search step ladder in units of h
POLISH_STEPS = (1.0, 0.5, 0.25)


@dataclass(frozen=True)
class BallConfig:
    """Placement of a single ball witness."""

    center: tuple
    radius: float


@dataclass
class AsymmetryResult:
    """Outcome of a witness search.

    value is exact for the returned witness: the symmetric difference is
    counted cell by cell on a covering grid aligned with the domain.
    hit_search_bounds is set when the optimizer touched the center search
    box (the domain box inflated to twice its extent); a True flag means
    the reported value is only an upper bound for the unconstrained
    infimum.
    """

    value: float
    witness: BallConfig | TwoBallConfig
    trace: list = field(default_factory=list, repr=False)
    hit_search_bounds: bool = False
    value_error: float = 0.0

    def witness_record(self) -> dict:
        if isinstance(self.witness, BallConfig):
            return {
                "kind": "ball",
                "center": [float(c) for c in self.witness.center],
                "radius": self.witness.radius,
            }
        return {
            "kind": "ball-pair",
            "center1": [float(c) for c in self.witness.center1],
            "center2": [float(c) for c in self.witness.center2],
            "radius": self.witness.radius,
        }


def _interior_points(omega: GridDomain) -> np.ndarray:
    grids = np.meshgrid(*omega.axes(), indexing="ij")
    return np.stack([g[omega.mask] for g in grids], axis=1)


def _search_box(omega: GridDomain) -> tuple[np.ndarray, np.ndarray]:
    """Center box: the domain bounding box inflated to twice its extent."""
    lo = np.asarray(omega.origin)
    hi = lo + np.asarray(omega.extent) * omega.h
    half = (hi - lo) / 2.0
    mid = (lo + hi) / 2.0
    return mid - 2.0 * half, mid + 2.0 * half


def _lens_volume(dist: float, r: float, dim: int) -> float:
    """Volume of the intersection of two balls of radius r at distance dist."""
    if dist >= 2.0 * r:
        return 0.0
    if dim == 2:
        half = dist / 2.0
        return 2.0 * (
            r * r * math.acos(half / r)
            - half * math.sqrt(max(r * r - half * half, 0.0))
        )
    return math.pi * (4.0 * r + dist) * (2.0 * r - dist) ** 2 / 12.0


class _WitnessProblem:
    """Shared machinery for the 1-ball and 2-ball witness searches."""

    def __init__(self, omega: GridDomain, n_balls: int):
        self.omega = omega
        self.n_balls = n_balls
        self.dim = omega.dim
        self.h = omega.h
        self.measure = omega.measure()
        self.radius = (self.measure / n_balls / unit_ball_volume(self.dim)) ** (
            1.0 / self.dim
        )
        self.points = _interior_points(omega)
        self.box_lo, self.box_hi = _search_box(omega)
        self.cell = omega.h**omega.dim

        # covering lattice: the domain lattice extended so any feasible
        # witness ball fits strictly inside (same origin modulo h)
        slack = self.radius + 2.0 * self.h
        lo = np.asarray(omega.origin)
        hi = lo + np.asarray(omega.extent) * omega.h
        before = np.ceil((lo - (self.box_lo - slack)) / self.h).astype(int)
        after = np.ceil(((self.box_hi + slack) - hi) / self.h).astype(int)
        self.cover = pad_cells(
            omega, np.maximum(before, 0), np.maximum(after, 0)
        )
        self.cover_axes = self.cover.axes()

        self.trace: list = []
        self.hit_bounds = False

    # -- smooth objective --------------------------------------------------

    def smooth_value(self, params: np.ndarray) -> float:
        """Smoothed symmetric difference (volume units, constants kept)."""
        centers = params.reshape(self.n_balls, self.dim)
        coverage = np.zeros(len(self.points))
        for c in centers:
            dist = np.linalg.norm(self.points - c, axis=1)
            frac = np.clip((self.radius - dist) / self.h + 0.5, 0.0, 1.0)
            coverage = np.minimum(coverage + frac, 1.0)
        overlap = float(coverage.sum()) * self.cell
        value = 2.0 * self.measure - 2.0 * overlap
        if self.n_balls == 2:
            dist = float(np.linalg.norm(centers[0] - centers[1]))
            value += OVERLAP_PENALTY * _lens_volume(dist, self.radius, self.dim)
        for c in centers:
            excess = np.maximum(self.box_lo - c, 0.0) + np.maximum(
                c - self.box_hi, 0.0
            )
            if excess.any():
                self.hit_bounds = True
                value += 100.0 * self.measure * float(excess @ excess) / self.h**2
        self.trace.append((tuple(float(x) for x in params), value / self.measure))
        return value

    # -- exact objective -----------------------------------------------------

    def _ball_window(self, c: np.ndarray):
        """Witness cells of one ball inside its covering-lattice window."""
        sel = []
        local = []
        for a in range(self.dim):
            ax = self.cover_axes[a]
            i0 = int(np.searchsorted(ax, c[a] - self.radius - self.h))
            i1 = int(np.searchsorted(ax, c[a] + self.radius + self.h))
            sel.append(slice(i0, i1))
            shape = [1] * self.dim
            shape[a] = i1 - i0
            local.append((ax[i0:i1] - c[a]).reshape(shape))
        d2 = sum(x * x for x in local)
        return tuple(sel), d2 < self.radius**2

    def exact_value(self, centers: np.ndarray) -> float:
        """|Omega symdiff W| / |Omega|, W rasterized on the covering lattice.

        Valid for disjoint witness balls (no cell is inside both).
        """
        w_cells = 0
        both = 0
        for c in centers:
            sel, wmask = self._ball_window(c)
            w_cells += int(wmask.sum())
            both += int((wmask & self.cover.mask[sel]).sum())
        symdiff = (self.omega.interior_count - both) + (w_cells - both)
        return symdiff * self.cell / self.measure

    def polish(self, centers: np.ndarray) -> np.ndarray:
        """Exact-objective pattern search over sub-cell center moves."""
        best = centers.copy()
        best_val = self.exact_value(best)
        for step in POLISH_STEPS:
            improved = True
            while improved:
                improved = False
                for b in range(self.n_balls):
                    for a in range(self.dim):
                        for sign in (1.0, -1.0):
                            cand = best.copy()
                            cand[b, a] += sign * step * self.h
                            if not self._feasible(cand):
                                continue
                            val = self.exact_value(cand)
                            if val < best_val - 1e-15:
                                best, best_val = cand, val
                                improved = True
        return best

    def _feasible(self, centers: np.ndarray) -> bool:
        if self.n_balls == 2:
            dist = float(np.linalg.norm(centers[0] - centers[1]))
            if dist < 2.0 * self.radius - 1e-12:
                return False
        return bool(
            np.all(centers >= self.box_lo) and np.all(centers <= self.box_hi)
        )

    def project_feasible(self, centers: np.ndarray) -> np.ndarray:
        """Push overlapping pair centers apart to tangency along their axis."""
        centers = np.clip(centers, self.box_lo, self.box_hi)
        if self.n_balls != 2:
            return centers
        axis = centers[1] - centers[0]
        dist = float(np.linalg.norm(axis))
        if dist >= 2.0 * self.radius:
            return centers
        if dist < 1e-12:
            axis = np.zeros(self.dim)
            axis[0] = 1.0
        else:
            axis = axis / dist
        mid = (centers[0] + centers[1]) / 2.0
        return np.stack([mid - self.radius * axis, mid + self.radius * axis])

    # -- deterministic starts ------------------------------------------------

    def seeds(self) -> list[np.ndarray]:
        out = []
        centroid = self.points.mean(axis=0)
        if self.n_balls == 1:
            out.append(centroid.reshape(1, -1))
        else:
            axis = self._principal_axis()
            out.append(
                np.stack(
                    [centroid - self.radius * axis, centroid + self.radius * axis]
                )
            )
            comp = self._component_centroids()
            if comp is not None:
                out.append(comp)
        out.extend(self._scan_seeds())
        return out

    def _principal_axis(self) -> np.ndarray:
        centered = self.points - self.points.mean(axis=0)
        cov = centered.T @ centered
        _, vecs = np.linalg.eigh(cov)
        axis = vecs[:, -1]
        if axis[int(np.argmax(np.abs(axis)))] < 0:
            axis = -axis
        return axis

    def _component_centroids(self) -> np.ndarray | None:
        labels, n = ndimage.label(
            self.omega.mask,
            structure=ndimage.generate_binary_structure(self.dim, 1),
        )
        if n < 2:
            return None
        flat = labels[self.omega.mask]
        sizes = np.bincount(flat)[1:]
        top = np.argsort(sizes)[::-1][:2] + 1
        cents = [self.points[flat == lab].mean(axis=0) for lab in top]
        return np.stack(cents)

    def _scan_seeds(self) -> list[np.ndarray]:
        """Coarse lattice scan of single-ball overlap; greedy pair assembly."""
        step = max(4.0 * self.h, self.radius / 4.0)
        lo = np.asarray(self.omega.origin) - self.radius / 2.0
        hi = (
            np.asarray(self.omega.origin)
            + np.asarray(self.omega.extent) * self.h
            + self.radius / 2.0
        )
        axes = [np.arange(lo[a], hi[a] + step, step) for a in range(self.dim)]
        grids = np.meshgrid(*axes, indexing="ij")
        cand = np.stack([g.ravel() for g in grids], axis=1)
        scores = np.empty(len(cand))
        for i, c in enumerate(cand):
            d2 = np.sum((self.points - c) ** 2, axis=1)
            scores[i] = np.sum(d2 < self.radius**2)
        order = np.argsort(scores, kind="stable")[::-1]
        if self.n_balls == 1:
            return [cand[order[0]].reshape(1, -1)]
        first = cand[order[0]]
        for j in order[1:]:
            if np.linalg.norm(cand[j] - first) >= 2.0 * self.radius:
                return [np.stack([first, cand[j]])]
        return []


def _optimize(problem: _WitnessProblem) -> AsymmetryResult:
    best_params = None
    best_val = np.inf
    for seed in problem.seeds():
        res = minimize(
            problem.smooth_value,
            seed.ravel(),
            method="Nelder-Mead",
            options={
                "xatol": problem.h / 4.0,
                "fatol": problem.cell / 10.0,
                "maxiter": 400 * problem.n_balls,
                "initial_simplex": _simplex(seed.ravel(), problem.radius / 4.0),
            },
        )
        if res.fun < best_val:
            best_val = float(res.fun)
            best_params = res.x
    centers = problem.project_feasible(
        best_params.reshape(problem.n_balls, problem.dim)
    )
    centers = problem.polish(centers)
    value = problem.exact_value(centers)

    # one-cell slack on every boundary involved: crude but honest
    surface = (
        problem.n_balls
        * problem.dim
        * unit_ball_volume(problem.dim)
        * problem.radius ** (problem.dim - 1)
    )
    value_error = (
        boundary_cell_count(problem.omega) * problem.cell + surface * problem.h
    ) / problem.measure

    if problem.n_balls == 1:
        witness: BallConfig | TwoBallConfig = BallConfig(
            center=tuple(float(x) for x in centers[0]), radius=problem.radius
        )
    else:
        witness = TwoBallConfig(
            center1=tuple(float(x) for x in centers[0]),
            center2=tuple(float(x) for x in centers[1]),
            radius=problem.radius,
        )
    return AsymmetryResult(
        value=value,
        witness=witness,
        trace=problem.trace,
        hit_search_bounds=problem.hit_bounds,
        value_error=value_error,
    )


def _simplex(x0: np.ndarray, scale: float) -> np.ndarray:
    """Regularized start simplex: vertex steps of a fixed geometric size."""
    n = len(x0)
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        simplex[i + 1, i] += scale
    return simplex


def fraenkel1(omega: GridDomain) -> AsymmetryResult:
    """Best single equal-measure ball: |Omega symdiff B| / |Omega|."""
    return _optimize(_WitnessProblem(omega, n_balls=1))


def fraenkel2(omega: GridDomain) -> AsymmetryResult:
    """Best disjoint half-measure pair: |Omega symdiff (B1 u B2)| / |Omega|."""
    return _optimize(_WitnessProblem(omega, n_balls=2))
