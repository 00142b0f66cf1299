"""Independent oracles used by the test suite.

Deliberately avoids scipy.special and numpy.linalg for the quantities it
checks: Bessel functions come from the power series, their roots from
bisection, and dense eigenvalues from a cyclic Jacobi sweep. Slow and
simple on purpose.
"""

from __future__ import annotations

import math

import numpy as np


# ----------------------------------------------------------------------
# Bessel J_0 / J_1 by power series, roots by bisection


def bessel_j0(x: float) -> float:
    # alternating series sum_m (-1)^m (x/2)^{2m} / (m!)^2; fine in double
    # precision for the x <= 12 range the tests use
    z = -(x * x) / 4.0
    term = 1.0
    total = 1.0
    for m in range(1, 200):
        term *= z / (m * m)
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            break
    return total


def bessel_j1(x: float) -> float:
    z = -(x * x) / 4.0
    term = x / 2.0
    total = term
    for m in range(1, 200):
        term *= z / (m * (m + 1))
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)):
            break
    return total


def bisect_root(f, lo: float, hi: float, iters: int = 200) -> float:
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    assert flo * fhi < 0, f"no sign change on [{lo}, {hi}]"
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


J01 = bisect_root(bessel_j0, 2.0, 3.0)  # first root of J_0, ~2.404826
J11 = bisect_root(bessel_j1, 3.0, 4.5)  # first root of J_1, ~3.831706
J21 = bisect_root(  # first root of J_2 via J_2 = 2 J_1/x - J_0
    lambda x: 2.0 * bessel_j1(x) / x - bessel_j0(x), 4.5, 6.0
)
J02 = bisect_root(bessel_j0, 4.5, 6.0)  # second root of J_0, ~5.520078
J12 = bisect_root(bessel_j1, 6.0, 8.0)  # second root of J_1, ~7.015587
J31 = bisect_root(  # J_3 = (4/x) J_2 - J_1
    lambda x: (4.0 / x) * (2.0 * bessel_j1(x) / x - bessel_j0(x))
    - bessel_j1(x),
    5.5,
    7.5,
)


def disk_eigenvalues(count: int, radius: float = 1.0) -> list[float]:
    """Dirichlet eigenvalues of a disk: squared Bessel roots / radius^2.

    Multiplicities: angular order 0 roots are simple, higher orders
    double. Enough levels are tabulated for count <= 10.
    """
    levels = [(J01, 1), (J11, 2), (J21, 2), (J02, 1), (J31, 2), (J12, 2)]
    vals: list[float] = []
    for root, mult in levels:
        vals.extend([root * root] * mult)
    vals.sort()
    assert count <= len(vals)
    return [v / radius**2 for v in vals[:count]]


def two_ball_values(count: int, fractions=(0.5, 0.5)) -> list[float]:
    """Sorted Dirichlet spectrum of two disjoint disks of total area pi."""
    merged: list[float] = []
    for frac in fractions:
        merged.extend(v / frac for v in disk_eigenvalues(count))
    merged.sort()
    return merged[:count]


def rectangle_eigenvalues(a: float, b: float, count: int) -> list[float]:
    """Dirichlet spectrum of an a x b rectangle: pi^2 (m^2/a^2 + n^2/b^2)."""
    vals = [
        math.pi**2 * (m * m / a**2 + n * n / b**2)
        for m in range(1, count + 2)
        for n in range(1, count + 2)
    ]
    vals.sort()
    return vals[:count]


# ----------------------------------------------------------------------
# dense symmetric eigenvalues via cyclic Jacobi rotations


def jacobi_eigenvalues(a: np.ndarray, sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi; ascending."""
    m = np.array(a, dtype=float, copy=True)
    n = m.shape[0]
    assert m.shape == (n, n)
    assert np.allclose(m, m.T, atol=1e-12 * max(1.0, abs(m).max()))
    for _ in range(sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if abs(apq) < 1e-300:
                    continue
                off = max(off, abs(apq))
                theta = 0.5 * math.atan2(2.0 * apq, m[q, q] - m[p, p])
                c, s = math.cos(theta), math.sin(theta)
                rp = c * m[p, :] - s * m[q, :]
                rq = s * m[p, :] + c * m[q, :]
                m[p, :], m[q, :] = rp, rq
                cp = c * m[:, p] - s * m[:, q]
                cq = s * m[:, p] + c * m[:, q]
                m[:, p], m[:, q] = cp, cq
        if off < 1e-14 * max(1.0, abs(np.diag(m)).max()):
            break
    return np.sort(np.diag(m))


# ----------------------------------------------------------------------
# brute-force asymmetry scans on the grid


def scan_ball_asymmetry(omega, refine: int = 2) -> float:
    """Best single-ball symmetric-difference fraction by center scan.

    Rasterizes candidate balls on omega's own lattice and scans centers
    on progressively finer sublattices around the best cell. Upper bound
    on the true asymmetry; the optimizer should do at least this well.
    """
    h = omega.h
    measure = omega.measure()
    radius = math.sqrt(measure / math.pi)
    axes = omega.axes()
    lo = [float(ax.min()) for ax in axes]
    hi = [float(ax.max()) for ax in axes]
    # candidate balls can poke out of the domain box; extend the lattice
    # far enough that every xor cell is counted
    pad = int(math.ceil(radius / h)) + 2
    axes_ext = [
        np.concatenate(
            [ax[0] - h * np.arange(pad, 0, -1), ax, ax[-1] + h * np.arange(1, pad + 1)]
        )
        for ax in axes
    ]
    xs, ys = np.meshgrid(*axes_ext, indexing="ij")
    mask_ext = np.pad(omega.mask, pad)

    def value(cx: float, cy: float) -> float:
        ball = (xs - cx) ** 2 + (ys - cy) ** 2 < radius**2
        return float(np.logical_xor(ball, mask_ext).sum()) * h * h / measure

    best = (math.inf, 0.0, 0.0)
    step = 4 * h
    cx = lo[0]
    while cx <= hi[0]:
        cy = lo[1]
        while cy <= hi[1]:
            v = value(cx, cy)
            if v < best[0]:
                best = (v, cx, cy)
            cy += step
        cx += step
    for _ in range(refine):
        step /= 4.0
        v0, bx, by = best
        for dx in range(-3, 4):
            for dy in range(-3, 4):
                v = value(bx + dx * step, by + dy * step)
                if v < best[0]:
                    best = (v, bx + dx * step, by + dy * step)
    return best[0]
