import cmath
import math

import pytest

from ptspectra.core import ComplexPath, QFunction, action_integral, sqrtq_continued
from ptspectra.errors import TurningPointOnPath


def test_constant_q_gives_length_times_sqrt():
    q = QFunction(4.0, 0, coupling=0)
    assert action_integral(ComplexPath([-1, 1j, 1]), q) == pytest.approx(2 * 2.0, abs=1e-12)


def test_linear_q_closed_form():
    # int_{-1}^{1} sqrt(E + i y) dy = (2 / 3i) [(E + i)^1.5 - (E - i)^1.5] on the principal sheet for E > 0
    E = 2.0
    exact = (2 / 3) / 1j * ((E + 1j) ** 1.5 - (E - 1j) ** 1.5)
    assert action_integral(ComplexPath([-1.0, 1.0]), QFunction(E, 0)) == pytest.approx(exact, rel=1e-12)


def test_from_turning_point_closed_form():
    # n = 0: Q = E + i y vanishes at y = iE; int_{iE}^{-1} sqrt(Q) = (2 / 3i)(E - i)^1.5 up to sheet
    E = 0.8
    val = action_integral(ComplexPath([1j * E, -1.0]), QFunction(E, 0))
    exact = (2 / 3) / 1j * (E - 1j) ** 1.5
    assert min(abs(val - exact), abs(val + exact)) <= 1e-11


def test_branch_seed_flips_sheet():
    q = QFunction(0.5, 1)
    a = action_integral(ComplexPath([-1.0, 1.0], 1.0), q)
    b = action_integral(ComplexPath([-1.0, 1.0], -1.0), q)
    assert a == pytest.approx(-b, rel=1e-13)


def test_continuation_is_continuous_around_a_turning_point():
    # a loop around the single turning point of y -> 1 + i y flips the sign of sqrt
    q = QFunction(1.0, 0)
    c = 1j
    loop = [c + 0.5 * cmath.exp(1j * t) for t in [k * 2 * math.pi / 16 for k in range(16)]] + [c + 0.5]
    s = sqrtq_continued(ComplexPath(loop, 1.0), q)
    assert s[-1] == pytest.approx(-s[0], rel=1e-12)


def test_interior_turning_point_rejected():
    with pytest.raises(TurningPointOnPath):
        action_integral(ComplexPath([-1.0 + 1j, 1.0 + 1j]), QFunction(1.0, 0))


def test_reversal_negates():
    q = QFunction(0.3 - 0.2j, 1)
    path = ComplexPath([-1.0, 0.2 - 0.4j, 1.0], 1.0)
    v, end = action_integral(path, q, return_end=True)
    w = action_integral(path.reversed(end), q)
    assert w == pytest.approx(-v, rel=1e-12)
