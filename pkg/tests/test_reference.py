"""Closed-form reference values against an independent Bessel oracle."""

import math

import numpy as np
import pytest

from speclab.reference import (
    ball_eigenvalues,
    ball_eigenvalues_unit,
    ball_first_eigenvalue,
    ball_radius_for_measure,
    ball_torsion,
    ball_torsion_boundary_grad,
    ball_torsion_sup,
    bessel_zeros,
    kohler_jobin_scale_invariant,
    minimizer_eigenvalue,
    pair_kohler_jobin_scale_invariant,
    pair_torsion,
    two_ball_eigenvalues,
)

from oracles import J01, J02, J11, J12, J21, J31, disk_eigenvalues, two_ball_values


def test_bessel_zeros_match_bisection_oracle():
    assert bessel_zeros(0, 2)[0] == pytest.approx(J01, abs=1e-10)
    assert bessel_zeros(0, 2)[1] == pytest.approx(J02, abs=1e-10)
    assert bessel_zeros(1, 2)[0] == pytest.approx(J11, abs=1e-10)
    assert bessel_zeros(1, 2)[1] == pytest.approx(J12, abs=1e-10)
    assert bessel_zeros(2, 1)[0] == pytest.approx(J21, abs=1e-10)
    assert bessel_zeros(3, 1)[0] == pytest.approx(J31, abs=1e-9)


def test_half_integer_orders_interlace():
    # zeros of J_{1/2}(x) = sqrt(2/(pi x)) sin x are exactly n pi
    zs = bessel_zeros(0.5, 4)
    assert np.allclose(zs, [math.pi, 2 * math.pi, 3 * math.pi, 4 * math.pi],
                       atol=1e-9)


def test_unit_disk_spectrum_with_multiplicities():
    got = ball_eigenvalues_unit(10, dim=2)
    ref = disk_eigenvalues(10)
    assert np.allclose(got, ref, rtol=1e-12)
    # double eigenvalues come from the m >= 1 angular modes
    assert got[1] == pytest.approx(got[2])
    assert got[1] == pytest.approx(J11**2)


def test_ball3d_spectrum_head():
    got = ball_eigenvalues_unit(5, dim=3)
    # j_{1/2,1} = pi, next angular order 3/2 has multiplicity 3
    assert got[0] == pytest.approx(math.pi**2, rel=1e-12)
    assert got[1] == pytest.approx(got[2]) == pytest.approx(got[3])
    assert got[4] > got[3]


def test_eigenvalue_scaling_in_radius():
    base = ball_eigenvalues(4, radius=1.0)
    scaled = ball_eigenvalues(4, radius=2.0)
    assert np.allclose(scaled, base / 4.0, rtol=1e-14)


def test_radius_for_measure_roundtrip():
    r = ball_radius_for_measure(math.pi / 2.0)
    assert math.pi * r * r == pytest.approx(math.pi / 2.0, rel=1e-14)
    assert ball_radius_for_measure(4.0 * math.pi / 3.0, dim=3) == pytest.approx(1.0)


def test_two_ball_merge_against_oracle():
    for fr in ((0.5, 0.5), (0.58, 0.42), (0.75, 0.25)):
        got = two_ball_eigenvalues(8, fr)
        ref = two_ball_values(8, fr)
        assert np.allclose(got, ref, rtol=1e-10)


def test_two_ball_equal_split_is_doubled_ball():
    got = two_ball_eigenvalues(6)
    # every eigenvalue of the half-area ball appears twice
    assert got[0] == pytest.approx(got[1])
    assert got[0] == pytest.approx(2.0 * J01**2, rel=1e-12)
    assert got[2] == pytest.approx(got[3])


def test_two_ball_rejects_degenerate_fractions():
    with pytest.raises(ValueError):
        two_ball_eigenvalues(4, (1.0, 0.0))


def test_minimizer_eigenvalue_value():
    assert minimizer_eigenvalue(2) == pytest.approx(2.0 * J01**2, rel=1e-12)
    assert ball_first_eigenvalue(2) == pytest.approx(J01**2, rel=1e-12)
    assert ball_first_eigenvalue(3) == pytest.approx(math.pi**2, rel=1e-12)


def test_ball_torsion_quantities():
    # profile (r^2 - |x|^2) / (2 d): integral, sup, boundary slope
    assert ball_torsion(1.0, 2) == pytest.approx(math.pi / 8.0, rel=1e-14)
    assert ball_torsion_sup(1.0, 2) == pytest.approx(0.25)
    assert ball_torsion_boundary_grad(1.0, 2) == pytest.approx(0.5)
    # torsion scales like r^(d+2)
    assert ball_torsion(2.0, 2) == pytest.approx(16.0 * math.pi / 8.0)


def test_pair_torsion_value():
    # two balls of radius 2^(-1/2): 2 * (pi/8) * 2^(-2) = pi/16
    assert pair_torsion(2) == pytest.approx(math.pi / 16.0, rel=1e-14)


def test_scale_invariant_products():
    kj1 = kohler_jobin_scale_invariant(2)
    assert kj1 == pytest.approx(J01**4 * math.pi / 8.0, rel=1e-12)
    kj2 = pair_kohler_jobin_scale_invariant(2)
    assert kj2 == pytest.approx((2 * J01**2) ** 2 * math.pi / 16.0, rel=1e-12)
    # the pair product is exactly twice the one-ball product in d = 2
    assert kj2 == pytest.approx(2.0 * kj1, rel=1e-12)
