import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ptspectra.core import ModelParams, QFunction, potential_sign


def test_potential_sign_matches_power_of_i():
    for n in range(6):
        assert potential_sign(n) == pytest.approx(1j ** (2 * n + 1))


@pytest.mark.parametrize("kw", [dict(n=-1, g=1, L=1), dict(n=1, g=-1, L=1), dict(n=1, g=1, L=0),
                                dict(n=1, g=1, L=1, hbar=0), dict(n=1.5, g=1, L=1)])
def test_params_reject_bad_values(kw):
    with pytest.raises(ValueError):
        ModelParams(**kw)


def test_mapping_round_trip_and_units():
    p = ModelParams(2, 0.7, 1.3, hbar=0.9)
    assert p.energy_unit == pytest.approx(0.7 * 1.3 ** 5)
    assert p.scale == pytest.approx(math.sqrt(0.7) * 1.3 ** 3.5 / 0.9)
    E = 3.2 - 1.1j
    assert p.from_mapped(p.to_mapped(E)) == pytest.approx(E, rel=1e-14)


def test_mapping_undefined_without_coupling():
    with pytest.raises(ZeroDivisionError):
        ModelParams(1, 0.0, 1.0).to_mapped(1.0)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 5), re=st.floats(-5, 5), im=st.floats(-5, 5))
def test_roots_are_zeros_on_one_circle(n, re, im):
    e = complex(re, im)
    if abs(e) < 1e-3:
        return
    q = QFunction(e, n)
    r = q.roots()
    assert len(r) == 2 * n + 1
    assert np.max(np.abs([q(z) for z in r])) <= 1e-10 * max(1.0, abs(e))
    assert np.allclose(np.abs(r), abs(e) ** (1 / (2 * n + 1)), rtol=1e-12)


def test_y_cubed_example():
    # n = 1, E = 1: y^3 = -i
    r = QFunction(1.0, 1).roots()
    for z in r:
        assert z ** 3 == pytest.approx(-1j, abs=1e-14)


def test_coefficients_highest_first():
    c = QFunction(2.0, 1).coefficients()
    assert c == [-1j, 0, 0, 2.0]
    assert np.allclose(np.sort_complex(np.roots(c)), np.sort_complex(QFunction(2.0, 1).roots()))


def test_derivative_matches_difference():
    q = QFunction(0.4 + 0.3j, 2)
    y, h = 0.3 - 0.2j, 1e-6
    assert q.derivative(y) == pytest.approx((q(y + h) - q(y - h)) / (2 * h), rel=1e-8)


def test_constant_q_has_no_roots():
    assert QFunction(1.0, 1, coupling=0).roots().size == 0
    assert cmath.isclose(QFunction(1.0, 1, coupling=0)(3.0), 1.0)
