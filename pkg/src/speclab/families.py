"""Canonical shapes and parametric domain families, all of unit-ball measure.

Every shape is normalized analytically on its parameters (radii, axes,
neck width) before rasterization, so the target measure equals the volume
of the unit ball exactly in the continuum; the rasterized measure then
deviates only by the usual one-cell boundary error.

Families (2D):
  volume-split   two disjoint balls of area fractions (1/2 + t, 1/2 - t)
  ellipse-pair   a half-area ball next to a half-area ellipse of aspect 1+t
  dumbbell-neck  two half-area balls joined by a rectangular neck of width t
All families reproduce the two-ball minimizer (two disjoint equal balls of
half measure) at t = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidConfigError
from .grid import (
    GridDomain,
    TwoBallConfig,
    from_predicate,
    make_ball_pair,
    unit_ball_volume,
)

#: radius of each ball in the two-ball minimizer (half measure), d = 2
PAIR_RADIUS_2D = 2.0**-0.5

#: gap between shape boundaries used by all two-piece constructions
PIECE_GAP = 0.5


def minimizer_config(separation: float = 3.0) -> TwoBallConfig:
    """Canonical two-ball minimizer placement: centers on the x axis.

    The separation (default 3, slightly above tangency 2r = sqrt(2)) does
    not affect the spectrum; it is fixed so rasterizations are reproducible
    and the two balls land on identical sub-cell offsets whenever
    separation is an integer multiple of the spacing.
    """
    half = separation / 2.0
    return TwoBallConfig(
        center1=(-half, 0.0), center2=(half, 0.0), radius=PAIR_RADIUS_2D
    )


@dataclass(frozen=True)
class DomainSpec:
    """Declarative description of a shape: kind, parameters, label."""

    kind: str
    params: dict = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        if self.kind not in SHAPE_BUILDERS:
            raise InvalidConfigError(
                f"unknown shape kind {self.kind!r}; known: {sorted(SHAPE_BUILDERS)}"
            )
        if not self.label:
            tag = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
            object.__setattr__(self, "label", f"{self.kind}({tag})")


def build_domain(spec: DomainSpec, h: float) -> GridDomain:
    """Rasterize a DomainSpec at spacing h (deterministic)."""
    dom = SHAPE_BUILDERS[spec.kind](h, **spec.params)
    return dom.with_mask(dom.mask, spec.label)


def domain_family(name: str, t: float, h: float) -> GridDomain:
    """Family snapshot: deterministic domain of measure pi at parameter t."""
    if name not in FAMILY_RANGES:
        raise InvalidConfigError(
            f"unknown family {name!r}; known: {sorted(FAMILY_RANGES)}"
        )
    lo, hi = FAMILY_RANGES[name]
    if not (lo <= t <= hi):
        raise InvalidConfigError(f"family {name!r}: t={t:g} outside [{lo:g}, {hi:g}]")
    return build_domain(DomainSpec(name, {"t": t}), h)


# ----------------------------------------------------------------------
# shape builders (all of area pi in d=2)


def _disk(h: float, area: float = math.pi) -> GridDomain:
    r = math.sqrt(area / math.pi)
    def inside(x, y):
        return x * x + y * y < r * r
    return from_predicate(inside, (-r, -r), (r, r), h)


def _ball3d(h: float, volume: float | None = None) -> GridDomain:
    if volume is None:
        volume = unit_ball_volume(3)
    r = (volume / unit_ball_volume(3)) ** (1.0 / 3.0)
    def inside(x, y, z):
        return x * x + y * y + z * z < r * r
    return from_predicate(inside, (-r,) * 3, (r,) * 3, h)


def _rectangle(h: float, aspect: float = 1.0) -> GridDomain:
    # sides a x b with a/b = aspect and a*b = pi
    b = math.sqrt(math.pi / aspect)
    a = aspect * b
    def inside(x, y):
        return (np.abs(x) < a / 2) & (np.abs(y) < b / 2)
    return from_predicate(inside, (-a / 2, -b / 2), (a / 2, b / 2), h)


def _ellipse(h: float, aspect: float = 1.0) -> GridDomain:
    # semi-axes a x b with a/b = aspect and pi*a*b = pi
    a = math.sqrt(aspect)
    b = 1.0 / a
    def inside(x, y):
        return (x / a) ** 2 + (y / b) ** 2 < 1.0
    return from_predicate(inside, (-a, -b), (a, b), h)


def _stadium(h: float, aspect: float = 2.0) -> GridDomain:
    # rectangle L x w capped by half-disks of radius w/2; aspect = (L+w)/w
    if aspect <= 1.0:
        raise InvalidConfigError("stadium aspect must exceed 1")
    w = math.sqrt(math.pi / (aspect - 1.0 + math.pi / 4.0))
    L = (aspect - 1.0) * w
    def inside(x, y):
        core = (np.abs(x) < L / 2) & (np.abs(y) < w / 2)
        caps = (np.abs(x) - L / 2) ** 2 + y * y < (w / 2) ** 2
        return core | caps
    half = L / 2 + w / 2
    return from_predicate(inside, (-half, -w / 2), (half, w / 2), h)


def _annulus(h: float, hole: float = 0.25) -> GridDomain:
    # hole = inner disk area / pi; outer radius chosen so the ring has area pi
    if not (0.0 < hole < 1.0):
        raise InvalidConfigError("annulus hole fraction must lie in (0, 1)")
    r_in = math.sqrt(hole)
    r_out = math.sqrt(1.0 + hole)
    def inside(x, y):
        rho2 = x * x + y * y
        return (rho2 < r_out**2) & (rho2 > r_in**2)
    return from_predicate(inside, (-r_out, -r_out), (r_out, r_out), h)


def _half_disk(h: float) -> GridDomain:
    r = math.sqrt(2.0)
    def inside(x, y):
        return (x * x + y * y < r * r) & (y > 0)
    return from_predicate(inside, (-r, 0.0), (r, r), h)


def _l_shape(h: float) -> GridDomain:
    # square of side s minus its upper-right quadrant; area 3 s^2 / 4 = pi
    s = math.sqrt(4.0 * math.pi / 3.0)
    def inside(x, y):
        square = (np.abs(x) < s / 2) & (np.abs(y) < s / 2)
        corner = (x > 0) & (y > 0)
        return square & ~corner
    return from_predicate(inside, (-s / 2, -s / 2), (s / 2, s / 2), h)


def _right_triangle(h: float) -> GridDomain:
    # isoceles right triangle with legs a on the axes; a^2 / 2 = pi
    a = math.sqrt(2.0 * math.pi)
    def inside(x, y):
        return (x > 0) & (y > 0) & (x + y < a)
    return from_predicate(inside, (0.0, 0.0), (a, a), h)


def _two_balls(h: float, sep: float = 3.0) -> GridDomain:
    """Two disjoint equal balls of half measure at boundary separation sep*r."""
    r = PAIR_RADIUS_2D
    if sep < 2.0:
        raise InvalidConfigError("two_balls separation factor must be >= 2")
    return make_ball_pair(
        TwoBallConfig(
            center1=(-sep * r / 2, 0.0), center2=(sep * r / 2, 0.0), radius=r
        ),
        h,
    )


def _volume_split(h: float, t: float = 0.0) -> GridDomain:
    if not (0.0 <= t < 0.5):
        raise InvalidConfigError(f"volume-split requires 0 <= t < 0.5, got {t:g}")
    r1 = math.sqrt(0.5 + t)
    r2 = math.sqrt(0.5 - t)
    half = (r1 + r2 + PIECE_GAP) / 2.0
    c1, c2 = (-half, 0.0), (half, 0.0)
    def inside(x, y):
        in1 = (x - c1[0]) ** 2 + y * y < r1 * r1
        in2 = (x - c2[0]) ** 2 + y * y < r2 * r2
        return in1 | in2
    return from_predicate(
        inside, (c1[0] - r1, -r1), (c2[0] + r2, r1), h
    )


def _ellipse_pair(h: float, t: float = 0.0) -> GridDomain:
    if not (0.0 <= t <= 1.5):
        raise InvalidConfigError(f"ellipse-pair requires 0 <= t <= 1.5, got {t:g}")
    r = PAIR_RADIUS_2D
    a = r * math.sqrt(1.0 + t)
    b = r / math.sqrt(1.0 + t)
    half = (r + a + PIECE_GAP) / 2.0
    def inside(x, y):
        ball = (x + half) ** 2 + y * y < r * r
        ell = ((x - half) / a) ** 2 + (y / b) ** 2 < 1.0
        return ball | ell
    ymax = max(r, b)
    return from_predicate(inside, (-half - r, -ymax), (half + a, ymax), h)


def _dumbbell_area(r: float, c: float, t: float) -> float:
    """Area of two balls (radius r, centers +-c) plus a neck |y|<t/2, |x|<c."""
    if t == 0.0:
        return 2.0 * math.pi * r * r
    lens = (t / 2.0) * math.sqrt(r * r - t * t / 4.0) + r * r * math.asin(
        t / (2.0 * r)
    )
    return 2.0 * math.pi * r * r + 2.0 * c * t - 2.0 * lens


def _dumbbell_neck(h: float, t: float = 0.0) -> GridDomain:
    if not (0.0 <= t <= 0.7):
        raise InvalidConfigError(f"dumbbell-neck requires 0 <= t <= 0.7, got {t:g}")
    r0 = PAIR_RADIUS_2D
    c0 = r0 + PIECE_GAP / 2.0
    s = math.sqrt(math.pi / _dumbbell_area(r0, c0, t))
    r, c, w = s * r0, s * c0, s * t
    def inside(x, y):
        balls = np.minimum((x - c) ** 2, (x + c) ** 2) + y * y < r * r
        neck = (np.abs(x) < c) & (np.abs(y) < w / 2)
        return balls | neck
    return from_predicate(inside, (-c - r, -r), (c + r, r), h)


SHAPE_BUILDERS: dict[str, Callable[..., GridDomain]] = {
    "disk": _disk,
    "ball3d": _ball3d,
    "rectangle": _rectangle,
    "ellipse": _ellipse,
    "stadium": _stadium,
    "annulus": _annulus,
    "half_disk": _half_disk,
    "l_shape": _l_shape,
    "right_triangle": _right_triangle,
    "two_balls": _two_balls,
    "volume-split": _volume_split,
    "ellipse-pair": _ellipse_pair,
    "dumbbell-neck": _dumbbell_neck,
}

FAMILY_RANGES: dict[str, tuple[float, float]] = {
    "volume-split": (0.0, 0.45),
    "ellipse-pair": (0.0, 1.5),
    "dumbbell-neck": (0.0, 0.7),
}
