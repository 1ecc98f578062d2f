# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled DOPRI5 integrator for psi'' = -(a + b y^p) psi on a real segment.

The state is (psi, psi').  Whenever max(|psi|, |psi'|) exceeds RENORM the
state is divided by that magnitude and its log is accumulated, so the true
solution is state * exp(logscale).  Must agree with ``_kernels_py``.
"""
from libc.math cimport log, pow, fabs, sqrt, fmin, fmax

cdef double RENORM = 1e100

# Dormand-Prince 5(4)
cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40


cdef inline double cabs2(double complex z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef inline double complex pot(double complex a, double complex b, int p, double y) nogil:
    cdef double yp = 1.0
    cdef int k
    for k in range(p):
        yp *= y
    return a + b * yp


cdef int _integrate(double complex a, double complex b, int p, double y0, double y1,
                    double complex *psi, double complex *dpsi, double *logscale,
                    double tol, double kw, double *grid, int ngrid,
                    double complex *rec_psi, double complex *rec_dpsi, double *rec_log,
                    long max_steps) nogil:
    cdef double direction = 1.0 if y1 >= y0 else -1.0
    cdef double span = fabs(y1 - y0)
    cdef double t = y0, h, h_free, hs, err, sc, fac, target, nrm
    cdef double complex u = psi[0], v = dpsi[0]
    cdef double complex k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v, k5u, k5v, k6u, k6v, k7u, k7v
    cdef double complex un, vn, eu, ev
    cdef long steps = 0
    cdef int gi = 0
    cdef bint hit
    h = fmin(span, 0.05 / kw)
    k1u = v
    k1v = -pot(a, b, p, t) * u
    while direction * (y1 - t) > 0:
        if steps >= max_steps:
            return -2
        hit = False
        target = y1
        if gi < ngrid:
            target = grid[gi]
        h_free = h  # step before clipping to a node, restored after the hit
        if h >= fabs(target - t):
            h = fabs(target - t)
            hit = True
        if h < 1e-14 * span and not hit:
            return -1
        hs = direction * h
        k2u = v + hs * A21 * k1v
        k2v = -pot(a, b, p, t + C2 * hs) * (u + hs * A21 * k1u)
        k3u = v + hs * (A31 * k1v + A32 * k2v)
        k3v = -pot(a, b, p, t + C3 * hs) * (u + hs * (A31 * k1u + A32 * k2u))
        k4u = v + hs * (A41 * k1v + A42 * k2v + A43 * k3v)
        k4v = -pot(a, b, p, t + C4 * hs) * (u + hs * (A41 * k1u + A42 * k2u + A43 * k3u))
        k5u = v + hs * (A51 * k1v + A52 * k2v + A53 * k3v + A54 * k4v)
        k5v = -pot(a, b, p, t + C5 * hs) * (u + hs * (A51 * k1u + A52 * k2u + A53 * k3u + A54 * k4u))
        k6u = v + hs * (A61 * k1v + A62 * k2v + A63 * k3v + A64 * k4v + A65 * k5v)
        k6v = -pot(a, b, p, t + hs) * (u + hs * (A61 * k1u + A62 * k2u + A63 * k3u + A64 * k4u + A65 * k5u))
        un = u + hs * (B1 * k1u + B3 * k3u + B4 * k4u + B5 * k5u + B6 * k6u)
        vn = v + hs * (B1 * k1v + B3 * k3v + B4 * k4v + B5 * k5v + B6 * k6v)
        k7u = vn
        k7v = -pot(a, b, p, t + hs) * un
        eu = hs * (E1 * k1u + E3 * k3u + E4 * k4u + E5 * k5u + E6 * k6u + E7 * k7u)
        ev = hs * (E1 * k1v + E3 * k3v + E4 * k4v + E5 * k5v + E6 * k6v + E7 * k7v)
        sc = fmax(fmax(kw * cabs2(u), cabs2(v)), fmax(kw * cabs2(un), cabs2(vn)))
        err = fmax(kw * cabs2(eu), cabs2(ev)) / (sc if sc > 0 else 1.0)
        if err <= tol * h:
            steps += 1
            t = target if hit else t + hs
            u = un
            v = vn
            k1u = k7u
            k1v = k7v
            nrm = fmax(cabs2(u), cabs2(v))
            if nrm > RENORM:
                u = u / nrm
                v = v / nrm
                k1u = k1u / nrm
                k1v = k1v / nrm
                logscale[0] += log(nrm)
            if hit and gi < ngrid:
                rec_psi[gi] = u
                rec_dpsi[gi] = v
                rec_log[gi] = logscale[0]
                gi += 1
            if err == 0:
                fac = 5.0
            else:
                fac = fmin(5.0, 0.9 * pow(tol * h / err, 0.25))
            if not hit:
                h = h * fac
            else:
                h = fmax(h_free, h * fac)
        else:
            h = h * fmax(0.2, 0.9 * pow(tol * h / err, 0.25))
    psi[0] = u
    dpsi[0] = v
    return <int>(steps if steps < 2000000000 else 2000000000)


def shoot(double complex a, double complex b, int p, double y0, double y1,
          double tol=1e-11, long max_steps=50000000):
    """Integrate from y0 with (psi, psi') = (0, 1) to y1.

    Returns (psi, dpsi, logscale, steps).
    """
    cdef double complex psi = 0.0, dpsi = 1.0
    cdef double logscale = 0.0
    cdef double kw = sqrt(fmax(1.0, cabs2(a) + cabs2(b)))
    cdef int rc
    with nogil:
        rc = _integrate(a, b, p, y0, y1, &psi, &dpsi, &logscale, tol, kw, NULL, 0, NULL, NULL, NULL, max_steps)
    if rc == -1:
        raise FloatingPointError("step size underflow")
    if rc == -2:
        raise FloatingPointError("step budget exhausted")
    return psi, dpsi, logscale, rc


def shoot_record(double complex a, double complex b, int p, double y0, double y1,
                 double[::1] grid, double complex[::1] rec_psi, double complex[::1] rec_dpsi,
                 double[::1] rec_log, double tol=1e-11, long max_steps=50000000):
    """As ``shoot`` but stores the state at each grid node (ordered from y0 to y1)."""
    cdef double complex psi = 0.0, dpsi = 1.0
    cdef double logscale = 0.0
    cdef double kw = sqrt(fmax(1.0, cabs2(a) + cabs2(b)))
    cdef int n = grid.shape[0]
    cdef int rc
    with nogil:
        rc = _integrate(a, b, p, y0, y1, &psi, &dpsi, &logscale, tol, kw,
                        &grid[0] if n > 0 else NULL, n,
                        &rec_psi[0] if n > 0 else NULL, &rec_dpsi[0] if n > 0 else NULL,
                        &rec_log[0] if n > 0 else NULL, max_steps)
    if rc == -1:
        raise FloatingPointError("step size underflow")
    if rc == -2:
        raise FloatingPointError("step budget exhausted")
    return psi, dpsi, logscale, rc
