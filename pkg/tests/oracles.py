"""Independent reference computations used only by the tests.

None of these share code with the package's solvers.
"""
import numpy as np
import scipy.linalg as sl


def fd_matrix(n, g, L, points, hbar=1.0):
    """Fourth-order finite-difference matrix for -hbar^2 psi'' - g (i x)^(2n+1) psi on (-L, L).

    Dirichlet walls; the first and last rows use the odd reflection
    psi(-L - h) = -psi(-L + h).  The matrix is complex symmetric.
    """
    x = np.linspace(-L, L, points + 2)[1:-1]
    h = x[1] - x[0]
    c = hbar * hbar / (12 * h * h)
    V = -g * (1j * x) ** (2 * n + 1)
    A = np.diag(30 * c + V) + np.diag(np.full(points - 1, -16 * c), 1) + np.diag(np.full(points - 1, -16 * c), -1)
    A += np.diag(np.full(points - 2, c), 2) + np.diag(np.full(points - 2, c), -2)
    A[0, 0] -= c
    A[-1, -1] -= c
    return A


def fd_spectrum(n, g, L, points=4000, count=5, hbar=1.0):
    """Lowest ``count`` eigenvalues by real part from a dense eigensolve."""
    w = sl.eigvals(fd_matrix(n, g, L, points, hbar), overwrite_a=True, check_finite=False)
    return w[np.argsort(w.real)][:count]


def mp_airy(z, dps=30):
    """Ai(z), Ai'(z) at extended precision."""
    import mpmath as mp

    with mp.workdps(dps):
        zz = mp.mpc(z.real, z.imag)
        return complex(mp.airyai(zz)), complex(mp.airyai(zz, derivative=1))


def mp_airy_zeros(k):
    import mpmath as mp

    return [float(-mp.airyaizero(j)) for j in range(1, k + 1)]


def box_levels(L, count, hbar=1.0):
    return [(np.pi * hbar * j / (2 * L)) ** 2 for j in range(1, count + 1)]


def march_dirichlet(E, n, g, L, steps=20000, hbar=1.0):
    """psi(L) for psi(-L) = 0, psi'(-L) = 1 by fixed-step classical RK4 in x."""
    h = 2 * L / steps
    x = -L
    y = np.array([0j, 1 + 0j])

    def f(x, y):
        V = -g * (1j * x) ** (2 * n + 1)
        return np.array([y[1], (V - E) * y[0] / hbar ** 2])

    for _ in range(steps):
        k1 = f(x, y)
        k2 = f(x + h / 2, y + h / 2 * k1)
        k3 = f(x + h / 2, y + h / 2 * k2)
        k4 = f(x + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        x += h
    return y[0]
