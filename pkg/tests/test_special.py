import math

import numpy as np
import pytest

from floquet_well.special import (
    BranchPolicy,
    bessel_coupling_matrix,
    bessel_j,
    bessel_j_row,
    branch_sqrt,
)


def series_oracle(n: int, x: float, terms: int = 40) -> float:
    """Independent ascending-series evaluation of J_n(x)."""
    total = 0.0
    half = 0.5 * x
    for k in range(terms):
        total += (-1) ** k * half ** (2 * k + n) / (math.factorial(k) * math.factorial(k + n))
    return total


def test_bessel_at_zero():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert bessel_j(5, 0.0) == 0.0


def test_bessel_frozen_series_values():
    # values computed once with the 40-term ascending series
    assert bessel_j(2, 0.5) == pytest.approx(0.030604023458682638, abs=1e-12)
    assert bessel_j(0, 1.0) == pytest.approx(0.7651976865579666, abs=1e-12)
    assert bessel_j(5, 2.5) == pytest.approx(0.019501625134503226, abs=1e-12)


@pytest.mark.parametrize("x", [0.05, 0.2, 0.49, 0.5, 0.8, 1.0, 2.0, 3.3, 5.0, 8.0])
def test_bessel_vs_series_oracle(x):
    for n in range(0, 11):
        assert bessel_j(n, x) == pytest.approx(series_oracle(n, x), abs=1e-12)


def test_bessel_negative_order_symmetry():
    for n in range(-6, 7):
        for x in (0.2, 1.7, 4.0):
            assert bessel_j(n, x) == pytest.approx((-1) ** n * bessel_j(-n, x), abs=1e-14)


@pytest.mark.parametrize("x", np.linspace(0.0, 5.0, 11))
def test_bessel_sum_of_squares(x):
    row = bessel_j_row(30, float(x))
    total = row[0] ** 2 + 2.0 * np.sum(row[1:] ** 2)
    assert total == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("x", np.linspace(0.1, 5.0, 8))
def test_bessel_recurrence(x):
    x = float(x)
    for n in range(1, 9):
        lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x)
        assert lhs == pytest.approx(2 * n / x * bessel_j(n, x), abs=1e-10)


def test_bessel_rejects_negative_argument():
    with pytest.raises(ValueError):
        bessel_j(0, -0.1)


def test_coupling_matrix_structure():
    m = bessel_coupling_matrix(5, 0.8)
    for n in range(5):
        for l in range(5):
            assert m[n, l] == pytest.approx(bessel_j(n - l, 0.8), abs=1e-14)
    # identity at zero drive
    assert np.allclose(bessel_coupling_matrix(5, 0.0), np.eye(5))


def test_branch_sqrt_trivial():
    assert branch_sqrt(4 + 0j, BranchPolicy.OUTGOING_RIGHT) == pytest.approx(2 + 0j)
    assert branch_sqrt(-1 + 0j, BranchPolicy.PRINCIPAL) == pytest.approx(1j)


def test_branch_sqrt_first_order_expansion():
    w = branch_sqrt(4 - 0.01j, BranchPolicy.OUTGOING_RIGHT)
    assert w.real == pytest.approx(2.0, abs=5e-6)
    assert w.imag == pytest.approx(-0.0025, abs=5e-6)


def test_branch_sqrt_squares_back():
    rng = np.random.default_rng(11)
    for _ in range(300):
        mag = 10.0 ** rng.uniform(-12, 6)
        z = mag * np.exp(1j * rng.uniform(-np.pi, np.pi))
        for policy in BranchPolicy:
            w = branch_sqrt(z, policy)
            assert abs(w * w - z) <= 1e-14 * abs(z)


def test_outgoing_branch_closed_channel_is_evanescent():
    # negative real argument: outgoing continuation keeps Im > 0 either side
    w_above = branch_sqrt(complex(-4.0, 1e-14), BranchPolicy.OUTGOING_RIGHT)
    w_real = branch_sqrt(complex(-4.0, 0.0), BranchPolicy.OUTGOING_RIGHT)
    w_below = branch_sqrt(complex(-4.0, -1e-14), BranchPolicy.OUTGOING_RIGHT)
    for w in (w_above, w_real, w_below):
        assert w.imag == pytest.approx(2.0, abs=1e-9)
    # ... where the principal branch jumps
    assert branch_sqrt(complex(-4.0, -1e-14), BranchPolicy.PRINCIPAL).imag < 0


def test_outgoing_branch_open_channel_grows():
    # decaying root, open channel: slightly below the positive real axis,
    # continuous with +sqrt and Im < 0 (growing outgoing tail)
    w = branch_sqrt(complex(9.0, -1e-3), BranchPolicy.OUTGOING_RIGHT)
    assert w.real == pytest.approx(3.0, abs=1e-6)
    assert w.imag < 0.0


def test_outgoing_branch_cut_location():
    # the cut sits on the negative imaginary axis
    left = branch_sqrt(complex(-1e-9, -4.0), BranchPolicy.OUTGOING_RIGHT)
    right = branch_sqrt(complex(1e-9, -4.0), BranchPolicy.OUTGOING_RIGHT)
    assert abs(left - right) > 1.0  # jump across the cut
    # continuity along a path through the upper half plane
    thetas = np.linspace(0.0, np.pi * 0.999, 200)
    vals = [branch_sqrt(4.0 * np.exp(1j * t), BranchPolicy.OUTGOING_RIGHT) for t in thetas]
    steps = np.abs(np.diff(vals))
    assert steps.max() < 0.05
