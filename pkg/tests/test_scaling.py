import cmath
import math

import numpy as np
import pytest

from conftest import branch
from ptspectra.core import ModelParams
from ptspectra.errors import PuiseuxOutOfRange
from ptspectra.scaling import (OutOfBranch, closed_form_n0, complex_mode_count, integrate_branch, mode_tau,
                               ode_rhs, puiseux_seed, puiseux_sqrt_coefficient, reality_residual)
from ptspectra.stokes import critical_mapped_energy

TAU_C0 = 2 ** 2.5 * 3 ** -1.75


def test_rhs_on_closed_form():
    for t in (1e-3, 0.1, 0.5):
        e = closed_form_n0(t)
        exact = cmath.exp(-1j * math.pi / 3) * 1.5 ** (2 / 3) * (2 / 3) * t ** (-1 / 3)
        assert ode_rhs(t, e, 0, sqrt_ref=puiseux_sqrt_coefficient(0)) == pytest.approx(exact, rel=1e-8)


def test_rhs_real_continuation_becomes_real():
    # sqrt(E - i) is not real on the real axis, but the phase of rhs dies off as E grows
    ratios = [abs(ode_rhs(5.0, e, 2).imag) / abs(ode_rhs(5.0, e, 2)) for e in (10.0, 100.0, 1000.0)]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] < 5e-4


def test_seed_modulus_and_side():
    for n in range(6):
        s = puiseux_seed(n, 1e-5)
        target = 1j if n % 2 == 0 else -1j
        assert abs(s - target) == pytest.approx((3 * (2 * n + 1) * 1e-5 / 2) ** (2 / 3), rel=1e-14)
        assert abs(s - target) < 0.01


def test_seed_agrees_with_closed_form():
    assert abs(puiseux_seed(0, 1e-4) - closed_form_n0(1e-4)) <= 1e-4 ** (4 / 3)


def test_seed_range():
    with pytest.raises(PuiseuxOutOfRange):
        puiseux_seed(0, 0.1)


def test_n0_matches_closed_form():
    br = integrate_branch(0, tol=1e-9)
    assert np.max(np.abs(br.E - closed_form_n0(br.tau))) <= 1e-6
    assert br.tau_c == pytest.approx(TAU_C0, abs=1e-6)
    assert br.E_c == pytest.approx(3 ** -0.5, abs=1e-6)


@pytest.mark.parametrize("n", range(6))
def test_branch_shape(n):
    br = branch(n)
    assert len(br.samples) >= 400
    assert br.monotone_im
    assert abs(br.E[0] - (1j if n % 2 == 0 else -1j)) < 1e-3
    assert br.E_c > 0
    if n <= 1:
        assert np.all(np.diff(br.E.real) > 0)
    else:
        # Re E overshoots E_c slightly before the branch bends down onto the axis
        assert br.E.real.max() <= 1.06 * br.E_c


@pytest.mark.parametrize("n", range(6))
def test_endpoint_matches_boundary_crossing(n):
    assert branch(n).E_c == pytest.approx(critical_mapped_energy(n), abs=1e-4)


@pytest.mark.parametrize("n", range(6))
def test_reality_residual_along_branch(n):
    br = branch(n)
    idx = np.linspace(0, len(br.tau) - 1, 20).astype(int)
    assert max(reality_residual(br, int(k)) for k in idx) <= 1e-5


def test_conjugate_branch_solves_conjugated_ode():
    br = branch(1)
    t = br.tau[150]
    h = 1e-6
    d = (br.at(t + h) - br.at(t - h)) / (2 * h)
    # conjugating the whole equation maps (-1)^n i to its mirror, which n -> n + 1 also does
    w = cmath.sqrt(br.E[150].conjugate() - 1j)
    rhs = 3 * br.E[150].conjugate() / (2.5 * t + w)
    rhs_other = 3 * br.E[150].conjugate() / (2.5 * t - w)
    assert min(abs(d.conjugate() - rhs), abs(d.conjugate() - rhs_other)) <= 1e-6 * abs(d)


@pytest.mark.parametrize("n", [0, 1, 3])
def test_two_thirds_power_law(n):
    br = branch(n)
    t = br.tau[1:40]
    d = np.abs(br.E[1:40] - (1j if n % 2 == 0 else -1j))
    slope = np.polyfit(np.log(t), np.log(d), 1)[0]
    assert slope == pytest.approx(2 / 3, rel=0.01)


def test_mode_tau_formula():
    p = ModelParams(1, 1.0, 4.0)
    assert mode_tau(2, p) == pytest.approx(7 * math.pi / (4 * math.sqrt(4.0 ** 5)))


def test_mode_tau_shrinks_with_length():
    taus = [mode_tau(1, ModelParams(1, 1.0, L)) for L in (2, 4, 8, 16)]
    assert all(a > b for a, b in zip(taus, taus[1:]))
    pred = branch(1).at(mode_tau(1, ModelParams(1, 1.0, 80.0)))
    assert abs(pred + 1j) < 1e-2


def test_complex_mode_count_grows():
    br = branch(1)
    counts = [complex_mode_count(ModelParams(1, 1.0, L), br.tau_c) for L in np.linspace(1, 8, 15)]
    assert all(a <= b for a, b in zip(counts, counts[1:]))
    assert counts[-1] > counts[0]


def test_predict_out_of_branch():
    with pytest.raises(OutOfBranch):
        branch(1).predict(1, ModelParams(1, 1.0, 1.0))
