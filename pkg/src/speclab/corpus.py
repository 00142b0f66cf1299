"""Default planar domain corpus for inequality sweeps.

Mix of smooth, cornered, multiply connected, disconnected, and
near-minimizer shapes, all normalized to unit-ball measure. Family
members cover the sharpness t-grids plus a few far-from-minimizer
values.
"""

from __future__ import annotations

from .families import DomainSpec


def _spec(kind: str, **params) -> DomainSpec:
    return DomainSpec(kind=kind, params=params)


def default_corpus() -> list[DomainSpec]:
    specs: list[DomainSpec] = [_spec("disk")]
    specs += [_spec("rectangle", aspect=a) for a in (1.0, 1.5, 2.0, 3.0, 4.0)]
    specs += [_spec("ellipse", aspect=a) for a in (1.2, 1.5, 2.0, 2.5, 3.0)]
    specs += [_spec("stadium", aspect=a) for a in (1.5, 2.0, 3.0, 4.0, 6.0)]
    specs += [_spec("annulus", hole=q) for q in (0.05, 0.1, 0.2, 0.3, 0.4)]
    specs += [_spec("half_disk"), _spec("l_shape"), _spec("right_triangle")]
    specs += [_spec("two_balls", sep=s) for s in (2.05, 2.5, 3.0, 4.0)]
    specs += [
        _spec("volume-split", t=t)
        for t in (0.02, 0.04, 0.05, 0.08, 0.1, 0.16, 0.25, 0.35, 0.45)
    ]
    specs += [
        _spec("ellipse-pair", t=t)
        for t in (0.02, 0.04, 0.08, 0.16, 0.3, 0.5, 0.8, 1.2)
    ]
    specs += [
        _spec("dumbbell-neck", t=t)
        for t in (0.02, 0.04, 0.08, 0.16, 0.3, 0.5, 0.7)
    ]
    return specs


def connected_corpus() -> list[DomainSpec]:
    """Connected members only (their nodal pieces feed the gap checks)."""
    disconnected = {"two_balls", "volume-split", "ellipse-pair"}
    return [s for s in default_corpus() if s.kind not in disconnected]
