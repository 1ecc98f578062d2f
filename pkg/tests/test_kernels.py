import os
import subprocess
import sys

import numpy as np
import pytest

from ptspectra import _kernels_py, kernels

CASES = [
    (4.0 + 0j, 1j, 1, -1.0),
    (30.0 + 2j, -8j, 3, 1.0),
    (150.0 - 1j, 50j, 1, -1.0),
    (0.5 + 0j, 0j, 1, 1.0),
]


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernel not built")
@pytest.mark.parametrize("a,b,p,y0", CASES)
def test_backends_agree(a, b, p, y0):
    from ptspectra import _kernels

    u1, v1, l1, _ = _kernels.shoot(a, b, p, y0, 0.0, 1e-11)
    u2, v2, l2, _ = _kernels_py.shoot(a, b, p, y0, 0.0, 1e-11)
    x1 = np.array([u1, v1]) * np.exp(l1)
    x2 = np.array([u2, v2]) * np.exp(l2)
    assert np.max(np.abs(x1 - x2)) <= 1e-12 * np.max(np.abs(x1))


@pytest.mark.parametrize("a,b,p,y0", CASES[:2])
def test_recorded_profile_ends_at_shoot_value(a, b, p, y0):
    grid = np.linspace(y0, 0.0, 11)[1:]
    n = len(grid)
    rp, rd, rl = np.zeros(n, complex), np.zeros(n, complex), np.zeros(n)
    u, v, lg, _ = kernels.shoot_record(a, b, p, y0, 0.0, grid, rp, rd, rl, 1e-11)
    assert rp[-1] * np.exp(rl[-1]) == pytest.approx(u * np.exp(lg), rel=1e-12)


def test_free_particle_is_a_sine():
    # psi'' = -a psi from y=-1 with psi=0, psi'=1 gives sin(k(y+1))/k
    u, v, lg, _ = kernels.shoot(9.0, 0j, 1, -1.0, 0.0, 1e-12)
    assert u * np.exp(lg) == pytest.approx(np.sin(3.0) / 3.0, abs=1e-11)
    assert v * np.exp(lg) == pytest.approx(np.cos(3.0), abs=1e-11)


def test_env_var_forces_python():
    env = dict(os.environ, PTSPECTRA_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from ptspectra import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
