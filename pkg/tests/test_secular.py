import cmath
import inspect
import math

import numpy as np
import pytest

from conftest import branch, spectrum
from ptspectra import secular
from ptspectra.airy import airy_zero_wkb
from ptspectra.core import ComplexPath, ModelParams, QFunction, action_integral
from ptspectra.linear import kappa
from ptspectra.scaling import mode_tau, relevant_turning_point
from ptspectra.secular import (MASLOV, bounded_pair, breakup_residuals, bs_levels, bt_levels, complex_level,
                               complex_quantization_residual, secular_data, secular_residuals, y_action)
from ptspectra.stokes import critical_mapped_energy, relevant_pair


def _unit(n):
    return ModelParams(n, 1.0, 1.0)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_decomposition_and_reality(n):
    rng = np.random.default_rng(n)
    p = ModelParams(n, 1.0, 2.0)
    for e in rng.uniform(0.05, 3.0, 34):
        d = secular_data(e * p.energy_unit, p)
        assert d.I_T == pytest.approx(d.I_M + 2 * d.I_L, abs=1e-8 * (1 + abs(d.I_T)))
        assert abs(d.I_T_complex.imag) <= 1e-8 * (1 + abs(d.I_T))
        assert abs(d.I_M_complex.imag) <= 1e-8 * (1 + abs(d.I_T))


def test_box_integral_is_the_real_segment():
    p = ModelParams(1, 1.0, 1.5)
    E = 2.0 * p.energy_unit
    seg = action_integral(ComplexPath([-1.0, 1.0], cmath.sqrt(QFunction(2.0, 1)(-1.0))), QFunction(2.0, 1))
    assert secular_data(E, p).I_T == pytest.approx(p.scale * seg.real, rel=1e-10)


@pytest.mark.parametrize("n", [1, 2])
def test_delta_changes_sign_at_critical_energy(n):
    ec = critical_mapped_energy(n)
    p = _unit(n)
    assert abs(secular_data(ec, p).Delta) <= 1e-4
    below = secular_data(0.9 * ec, p).Delta
    above = secular_data(1.1 * ec, p).Delta
    assert below * above < 0
    assert above < 0 < below  # BS side has e^Delta >> 1


def test_bounded_pair_stays_bounded():
    for delta in (-800.0, -5.0, 0.0, 5.0, 800.0):
        a, b = bounded_pair(1.1, 0.4, delta)
        assert abs(a) <= 2 and abs(b) <= 2


def test_bounded_pair_keeps_zero_sets():
    it, im = 0.7, 2.1
    for delta in (-3.0, 0.5, 4.0):
        raw = (math.sin(it) + math.exp(delta) * math.cos(im), -math.sin(it) + math.exp(delta) * math.cos(im))
        scale = max(1.0, math.exp(delta))
        assert bounded_pair(it, im, delta) == pytest.approx((raw[0] / scale, raw[1] / scale), abs=1e-14)


def test_residual_vanishes_at_box_levels():
    p = ModelParams(1, 1.0, 0.3)
    recs = spectrum(1, 1.0, 0.3, 15)
    es = [r.E.real for r in recs]
    for e in es:
        assert min(map(abs, secular_residuals(e, p))) <= 5e-2
    for a, b in zip(es, es[1:]):
        assert min(map(abs, secular_residuals(0.5 * (a + b), p))) >= 0.3


def test_residual_vanishes_at_bound_states():
    # the ground state sits where leading-order WKB is weakest; see the notes
    p = ModelParams(1, 1.0, 6.0)
    es = [r.E.real for r in spectrum(1, 1.0, 6.0, 8) if r.E.imag == 0]
    for e in es[1:]:
        assert min(map(abs, secular_residuals(e, p))) <= 5e-2
    assert min(map(abs, secular_residuals(es[0], p))) <= 0.1
    for a, b in zip(es, es[1:]):
        assert min(map(abs, secular_residuals(0.5 * (a + b), p))) >= 0.3


def test_bt_levels_free_limit():
    L = 1.3
    got = bt_levels(ModelParams(1, 1e-8, L), 6)
    assert got == pytest.approx([(math.pi * j / (2 * L)) ** 2 for j in range(1, 7)], rel=1e-6)


def test_bs_levels_ignore_the_box():
    a = bs_levels(ModelParams(1, 1.0, 4.0), 6)
    b = bs_levels(ModelParams(1, 1.0, 8.0), 6)
    assert a == pytest.approx(b, rel=1e-6)


def test_bs_levels_against_shooting():
    bs = bs_levels(ModelParams(1, 1.0, 6.0), 8)
    exact = [r.E.real for r in spectrum(1, 1.0, 6.0, 8) if r.E.imag == 0]
    for j in range(3, 9):
        assert bs[j - 1] == pytest.approx(exact[j - 1], rel=0.02)


@pytest.mark.parametrize("n", [1, 2])
def test_integrals_are_monotone(n):
    p = _unit(n)
    grid = np.linspace(0.05, 4.0, 40)
    it = [secular_data(e, p).I_T for e in grid]
    im = [secular_data(e, p).I_M for e in grid]
    assert np.all(np.diff(it) > 0) and np.all(np.diff(im) > 0)


def test_factorization_identity():
    rng = np.random.default_rng(5)
    for it, im in rng.uniform(-20, 20, (200, 2)):
        for s in (1, -1):
            lhs = s * math.sin(it) + math.cos(im)
            rhs = 2 * math.sin(0.5 * (s * it - im + math.pi / 2)) * math.cos(0.5 * (s * it + im - math.pi / 2))
            assert lhs == pytest.approx(rhs, abs=1e-10)


@pytest.mark.parametrize("j", [1, 2, 3])
def test_breakup_at_tuned_length(j):
    br = branch(1)
    L = ((j - 0.25) * math.pi / br.tau_c) ** (1 / 2.5)
    p = ModelParams(1, 1.0, L)
    left, _ = breakup_residuals(br.E_c * p.energy_unit, p)
    assert left <= 0.1


def test_left_integral_reverses():
    p = ModelParams(1, 1.0, 2.0)
    e = 0.8
    q = QFunction(e, 1)
    a1, _ = relevant_pair(e, 1)
    fwd, end = action_integral(ComplexPath([-1.0, a1], cmath.sqrt(q(-1.0))), q, return_end=True)
    back = action_integral(ComplexPath([a1, -1.0], end), q)
    assert back == pytest.approx(-fwd, rel=1e-12)
    assert secular_data(e * p.energy_unit, p).I_L == pytest.approx(-p.scale * back.real, rel=1e-10)


def test_linear_quantization_is_airy():
    p = ModelParams(0, 1.0, 5.0)
    k = kappa(p)
    for j in (1, 2, 3):
        s = airy_zero_wkb(j)
        e = 1j + cmath.exp(-1j * math.pi / 3) * s / k
        assert y_action(e * p.energy_unit, p) == pytest.approx(2 / 3 * s ** 1.5, rel=1e-9)
        assert complex_quantization_residual(e * p.energy_unit, p) <= 1e-9
        lvl = complex_level(p, j, e * p.energy_unit)
        assert lvl == pytest.approx(e * p.energy_unit, rel=1e-8)


def test_complex_levels_against_shooting():
    p = ModelParams(1, 1.0, 3.0)
    br = branch(1)
    cx = [r.E for r in spectrum(1, 1.0, 3.0, 12) if r.E.imag != 0]
    j = 1
    while mode_tau(j, p) < 0.8 * br.tau_c:
        seed = br.predict(j, p) * p.energy_unit
        lvl = complex_level(p, j, seed)
        assert min(abs(lvl - z) for z in cx) <= 0.03 * abs(lvl)
        j += 1
    assert j > 1


def test_conjugate_residual_uses_mirror_image():
    p = ModelParams(1, 1.0, 3.0)
    E = 13.0 - 30.0j
    e = E / p.energy_unit
    alpha = relevant_turning_point(1, e)
    r1 = complex_quantization_residual(E, p, alpha=alpha)
    r2 = complex_quantization_residual(E.conjugate(), p, alpha=-alpha.conjugate(), wall=1.0)
    assert r1 == pytest.approx(r2, rel=1e-10)


def test_maslov_is_a_literal_quarter_pi():
    assert MASLOV == math.pi / 4
    src = inspect.getsource(secular)
    assert src.count("pi / 4") == 1
