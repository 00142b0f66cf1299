"""Rasterized open sets on uniform Cartesian grids.

An open set is represented by a boolean mask over cell centers: a cell
belongs to the set iff its center lies inside the analytic shape
(cell-center rasterization, unbiased to first order in the spacing).
Grids carry an explicit origin so that independently built domains can be
compared or combined only when they live on the same lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateDomainError, GridMismatchError, InvalidConfigError

Predicate = Callable[..., np.ndarray]

#: padding (in cells) added around auto-fitted bounding boxes; one padded
#: layer of exterior cells is required for the discrete boundary to exist.
DEFAULT_PAD = 2


@dataclass(frozen=True)
class GridDomain:
    """Open set rasterized on a uniform grid.

    mask[i, j(, k)] is True for interior cells; axis 0 is x. The outermost
    cell layer is always exterior, so every interior cell has a well
    defined discrete neighborhood.
    """

    h: float
    origin: tuple[float, ...]
    mask: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool)
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "origin", tuple(float(x) for x in self.origin))
        if self.h <= 0:
            raise InvalidConfigError(f"grid spacing must be positive, got {self.h}")
        if mask.ndim != len(self.origin):
            raise InvalidConfigError("origin dimension does not match mask rank")
        if mask.ndim not in (2, 3):
            raise InvalidConfigError(f"only dim 2 and 3 are supported, got {mask.ndim}")
        if not mask.any():
            raise DegenerateDomainError(f"domain {self.label!r} has no interior cells")
        for axis in range(mask.ndim):
            edge_lo = np.take(mask, 0, axis=axis)
            edge_hi = np.take(mask, mask.shape[axis] - 1, axis=axis)
            if edge_lo.any() or edge_hi.any():
                raise InvalidConfigError(
                    f"domain {self.label!r} touches the lattice boundary; "
                    "enlarge the bounding box"
                )

    @property
    def dim(self) -> int:
        return self.mask.ndim

    @property
    def extent(self) -> tuple[int, ...]:
        return self.mask.shape

    @property
    def interior_count(self) -> int:
        return int(self.mask.sum())

    def measure(self) -> float:
        """Lebesgue measure of the rasterized set: cell count times h^dim."""
        return self.interior_count * self.h**self.dim

    def axes(self) -> list[np.ndarray]:
        """Cell-center coordinates along each axis."""
        return [
            self.origin[a] + (np.arange(self.mask.shape[a]) + 0.5) * self.h
            for a in range(self.dim)
        ]

    def cell_centers(self) -> list[np.ndarray]:
        """Meshgrid arrays of cell-center coordinates (ij indexing)."""
        return list(np.meshgrid(*self.axes(), indexing="ij"))

    def same_grid(self, other: "GridDomain") -> bool:
        return (
            self.dim == other.dim
            and self.extent == other.extent
            and abs(self.h - other.h) <= 1e-12 * self.h
            and all(
                abs(a - b) <= 1e-9 * self.h
                for a, b in zip(self.origin, other.origin)
            )
        )

    def require_same_grid(self, other: "GridDomain") -> None:
        if not self.same_grid(other):
            raise GridMismatchError(
                f"domains {self.label!r} and {other.label!r} live on different grids"
            )

    def with_mask(self, mask: np.ndarray, label: str) -> "GridDomain":
        """New domain with the same grid and a different interior mask."""
        return replace(self, mask=mask, label=label)

    def translated(self, offset: Sequence[float]) -> "GridDomain":
        """Same mask, origin shifted by offset (exact translation)."""
        new_origin = tuple(o + d for o, d in zip(self.origin, offset))
        return replace(self, origin=new_origin)


def from_predicate(
    pred: Predicate,
    lo: Sequence[float],
    hi: Sequence[float],
    h: float,
    label: str = "",
    pad: int = DEFAULT_PAD,
) -> GridDomain:
    """Rasterize the set {x : pred(x)} on an auto-fitted grid.

    lo/hi bound the analytic shape; the grid adds `pad` exterior cells on
    every side. pred receives meshgrid coordinate arrays and must return a
    boolean array.
    """
    lo = [float(x) for x in lo]
    hi = [float(x) for x in hi]
    if len(lo) != len(hi):
        raise InvalidConfigError("bounding box corners have different dimensions")
    if any(b <= a for a, b in zip(lo, hi)):
        raise InvalidConfigError("bounding box is empty")
    shape = [int(np.ceil((b - a) / h)) + 2 * pad for a, b in zip(lo, hi)]
    origin = tuple(a - pad * h for a in lo)
    axes = [origin[i] + (np.arange(shape[i]) + 0.5) * h for i in range(len(shape))]
    coords = np.meshgrid(*axes, indexing="ij")
    mask = np.asarray(pred(*coords), dtype=bool)
    return GridDomain(h=h, origin=origin, mask=mask, label=label)


def rasterize_like(
    template: GridDomain, pred: Predicate, label: str = ""
) -> GridDomain:
    """Rasterize a predicate on an existing domain's exact grid."""
    coords = template.cell_centers()
    mask = np.asarray(pred(*coords), dtype=bool)
    return template.with_mask(mask, label)


def make_ball(
    radius: float,
    center: Sequence[float],
    h: float,
    label: str | None = None,
) -> GridDomain:
    """Rasterized open ball. Requires radius > 2h to resolve the shape."""
    if radius <= 2 * h:
        raise DegenerateDomainError(
            f"ball radius {radius} too small for spacing {h} (need radius > 2h)"
        )
    center = [float(c) for c in center]
    lo = [c - radius for c in center]
    hi = [c + radius for c in center]

    def inside(*coords):
        return sum((x - c) ** 2 for x, c in zip(coords, center)) < radius**2

    if label is None:
        label = f"ball(r={radius:g})"
    return from_predicate(inside, lo, hi, h, label=label)


@dataclass(frozen=True)
class TwoBallConfig:
    """Placement of two disjoint equal balls, each of half a target measure."""

    center1: tuple[float, ...]
    center2: tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center1", tuple(float(x) for x in self.center1))
        object.__setattr__(self, "center2", tuple(float(x) for x in self.center2))
        if len(self.center1) != len(self.center2):
            raise InvalidConfigError("ball centers have different dimensions")
        if self.radius <= 0:
            raise InvalidConfigError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return len(self.center1)

    @property
    def separation(self) -> float:
        return float(
            np.sqrt(sum((a - b) ** 2 for a, b in zip(self.center1, self.center2)))
        )

    def ball_measure(self) -> float:
        return unit_ball_volume(self.dim) * self.radius**self.dim

    def validate(self, tol: float = 0.0) -> None:
        """Disjointness up to tol (one grid cell when rasterizing)."""
        gap = self.separation - 2 * self.radius
        if gap < -tol:
            raise InvalidConfigError(
                f"balls overlap: separation {self.separation:.6g} < "
                f"2*radius {2 * self.radius:.6g}"
            )


def unit_ball_volume(dim: int) -> float:
    """Volume of the unit ball: pi in d=2, 4*pi/3 in d=3."""
    if dim == 2:
        return float(np.pi)
    if dim == 3:
        return 4.0 * float(np.pi) / 3.0
    raise InvalidConfigError(f"unsupported dimension {dim}")


def make_ball_pair(
    config: TwoBallConfig, h: float, label: str | None = None
) -> GridDomain:
    """Rasterized union of the two disjoint balls of a TwoBallConfig.

    Tangent balls (separation exactly 2*radius) are allowed; overlap beyond
    one grid cell is rejected.
    """
    config.validate(tol=h)
    c1, c2, r = config.center1, config.center2, config.radius
    lo = [min(a, b) - r for a, b in zip(c1, c2)]
    hi = [max(a, b) + r for a, b in zip(c1, c2)]

    def inside(*coords):
        d1 = sum((x - c) ** 2 for x, c in zip(coords, c1))
        d2 = sum((x - c) ** 2 for x, c in zip(coords, c2))
        return np.minimum(d1, d2) < r**2

    if label is None:
        label = f"ball-pair(r={r:g},sep={config.separation:g})"
    return from_predicate(inside, lo, hi, h, label=label)


def intersect(a: GridDomain, b: GridDomain, label: str = "") -> GridDomain:
    a.require_same_grid(b)
    return a.with_mask(a.mask & b.mask, label or f"({a.label})&({b.label})")


def set_minus(a: GridDomain, b: GridDomain, label: str = "") -> GridDomain:
    a.require_same_grid(b)
    return a.with_mask(a.mask & ~b.mask, label or f"({a.label})\\({b.label})")


def union(a: GridDomain, b: GridDomain, label: str = "") -> GridDomain:
    a.require_same_grid(b)
    return a.with_mask(a.mask | b.mask, label or f"({a.label})|({b.label})")


def pad_cells(
    a: GridDomain,
    before: Sequence[int],
    after: Sequence[int],
    label: str = "",
) -> GridDomain:
    """Extend the lattice by exterior cells on each side (same grid family).

    The interior mask is unchanged; the origin shifts by whole cells, so
    the result stays aligned with the source lattice and set operations
    against other extensions of the same lattice remain exact.
    """
    widths = [(int(b), int(f)) for b, f in zip(before, after)]
    if any(b < 0 or f < 0 for b, f in widths):
        raise InvalidConfigError("cell padding must be nonnegative")
    new_mask = np.pad(a.mask, widths)
    origin = tuple(o - b * a.h for o, (b, _) in zip(a.origin, widths))
    return GridDomain(h=a.h, origin=origin, mask=new_mask, label=label or a.label)


def boundary_cell_count(a: GridDomain) -> int:
    """Number of interior cells with at least one exterior face-neighbor."""
    edge = np.zeros_like(a.mask)
    for axis in range(a.dim):
        for shift in (1, -1):
            edge |= a.mask & ~np.roll(a.mask, shift, axis=axis)
    return int(edge.sum())


def measure(a: GridDomain) -> float:
    return a.measure()


def symm_diff_measure(a: GridDomain, b: GridDomain) -> float:
    """|a \\ b| + |b \\ a| on a common grid (exact on masks)."""
    a.require_same_grid(b)
    return int(np.logical_xor(a.mask, b.mask).sum()) * a.h**a.dim


def rescale_domain(
    a: GridDomain, factor: float, h: float | None = None, label: str = ""
) -> GridDomain:
    """Rescale a domain about its bounding-box center by point resampling.

    The rasterized set is treated as the analytic shape (a union of cells);
    the rescaled copy is re-rasterized by the cell-center rule on a fresh
    grid of spacing `h` (default: the original spacing). Measures scale as
    factor^dim up to one-cell rasterization error.
    """
    if factor <= 0:
        raise InvalidConfigError("scale factor must be positive")
    if h is None:
        h = a.h
    idx = np.nonzero(a.mask)
    lo_c = [a.origin[d] + idx[d].min() * a.h for d in range(a.dim)]
    hi_c = [a.origin[d] + (idx[d].max() + 1) * a.h for d in range(a.dim)]
    mid = [(lo + hi) / 2 for lo, hi in zip(lo_c, hi_c)]

    def inside(*coords):
        # map new cell centers back into the original lattice
        ijk = []
        for d, x in enumerate(coords):
            src = mid[d] + (x - mid[d]) / factor
            ijk.append(np.floor((src - a.origin[d]) / a.h).astype(np.int64))
        ok = np.ones(coords[0].shape, dtype=bool)
        for d, ind in enumerate(ijk):
            ok &= (ind >= 0) & (ind < a.mask.shape[d])
        out = np.zeros(coords[0].shape, dtype=bool)
        out[ok] = a.mask[tuple(ind[ok] for ind in ijk)]
        return out

    lo = [mid[d] + (lo_c[d] - mid[d]) * factor for d in range(a.dim)]
    hi = [mid[d] + (hi_c[d] - mid[d]) * factor for d in range(a.dim)]
    return from_predicate(inside, lo, hi, h, label=label or f"scaled({a.label})")


def write_pgm(a: GridDomain, path: str | Path) -> None:
    """Export the mask as a portable greymap (P2) for debugging."""
    if a.dim != 2:
        raise InvalidConfigError("PGM export is only available for dim 2")
    # PGM rows run top to bottom; mask axis 1 (y) becomes image rows
    img = np.flipud(a.mask.T.astype(np.uint8) * 255)
    lines = [f"P2\n# {a.label}\n{img.shape[1]} {img.shape[0]}\n255"]
    for row in img:
        lines.append(" ".join(str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")
