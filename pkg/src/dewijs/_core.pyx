# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels.

Each kernel consumes a numpy BitGenerator through the C API in exactly the
order the pure-Python fallback (dewijs._sampling_py) does, so both backends
produce bit-identical output for the same stream.  Consumption contracts:

* walk-on-spheres: one standard uniform per executed jump;
* Euler walk:      two standard normals per time step (x, then y);
* lattice walk:    one raw uint64 per 32 steps, two direction bits per step,
                   least-significant bits first, buffer discarded per walk.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport atan2, sqrt, M_PI
from libc.stdint cimport int64_t, uint32_t, uint64_t

cdef extern from *:
    # opaque wrappers keep the compiler from fusing the cos/sin pair into
    # one sincos call, whose rounding can differ from the separate libm
    # functions by one ulp and break bit-compatibility with the fallback
    """
    #include <math.h>
    static double __attribute__((noinline)) dewijs_cos(double x) { return cos(x); }
    static double __attribute__((noinline)) dewijs_sin(double x) { return sin(x); }
    """
    double dewijs_cos(double x) nogil
    double dewijs_sin(double x) nogil

import numpy as np

from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (random_standard_normal,
                                           random_standard_normal_fill,
                                           random_standard_uniform)

cdef const char *CAPSULE_NAME = "BitGenerator"

DEF NORMAL_BUF = 512


cdef bitgen_t *_bitgen(object bit_generator) except NULL:
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE_NAME):
        raise ValueError("expected a numpy BitGenerator")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, CAPSULE_NAME)


def wos_angles(object bit_generator, double x0, double y0, Py_ssize_t n,
               double tol, long cap):
    """Exit angles of n walk-on-spheres runs from (x0, y0) in the unit disk.

    Returns (angles array in [0, 2pi), number of walks that hit the cap).
    """
    cdef bitgen_t *rng = _bitgen(bit_generator)
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double x, y, d, theta
    cdef Py_ssize_t i
    cdef long it, capped = 0
    with nogil:
        for i in range(n):
            x = x0
            y = y0
            it = 0
            while it < cap:
                d = 1.0 - sqrt(x * x + y * y)
                if d <= tol:
                    break
                theta = 2.0 * M_PI * random_standard_uniform(rng)
                x += d * dewijs_cos(theta)
                y += d * dewijs_sin(theta)
                it += 1
            if it >= cap:
                capped += 1
            theta = atan2(y, x)
            if theta < 0.0:
                theta += 2.0 * M_PI
            out[i] = theta
    return out_arr, capped


def euler_angles(object bit_generator, double x0, double y0, Py_ssize_t n,
                 double step):
    """Exit angles of n Euler-discretized Brownian paths from (x0, y0).

    Steps have per-coordinate variance ``step``; the first segment that
    crosses the circle is intersected with it.
    """
    cdef bitgen_t *rng = _bitgen(bit_generator)
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double s = sqrt(step)
    cdef double x, y, dx, dy, nx, ny, a, b, c, t, theta
    cdef Py_ssize_t i
    cdef int k
    # normals are drawn through a refill buffer; the consumed sequence is
    # identical to per-call draws, so the fallback stays bit-compatible
    cdef double buf[NORMAL_BUF]
    cdef int bi = NORMAL_BUF
    with nogil:
        for i in range(n):
            x = x0
            y = y0
            while True:
                # pairwise consumption from an even-sized buffer: no draw is
                # ever discarded, so refills never shift the stream
                if bi == NORMAL_BUF:
                    random_standard_normal_fill(rng, NORMAL_BUF, buf)
                    for k in range(NORMAL_BUF):
                        buf[k] *= s
                    bi = 0
                dx = buf[bi]
                dy = buf[bi + 1]
                bi += 2
                nx = x + dx
                ny = y + dy
                if nx * nx + ny * ny >= 1.0:
                    a = dx * dx + dy * dy
                    b = 2.0 * (x * dx + y * dy)
                    c = x * x + y * y - 1.0
                    t = (-b + sqrt(b * b - 4.0 * a * c)) / (2.0 * a)
                    x += t * dx
                    y += t * dy
                    break
                x = nx
                y = ny
            theta = atan2(y, x)
            if theta < 0.0:
                theta += 2.0 * M_PI
            out[i] = theta
    return out_arr


cdef inline uint64_t _pack(long x, long y) nogil:
    # bias both coordinates so +-1 on either half never carries across;
    # positions stay well inside +-2^30 of the origin
    return ((<uint64_t> <uint32_t> (x + 0x40000000)) << 32) \
        | (<uint64_t> <uint32_t> (y + 0x40000000))


def occupation_sums(object bit_generator, long sx, long sy,
                    Py_ssize_t n_walks, long horizon,
                    long[::1] site_x, long[::1] site_y, double[::1] site_w):
    """Sum over walks of the site-weighted occupation up to ``horizon``.

    Each walk starts at (sx, sy) (occupation counts the start at t=0) and
    takes ``horizon`` simple-random-walk steps.  Positions are packed into
    one 64-bit word so each step is a table add plus equality checks; the
    common one- and two-site cases are specialized.
    """
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef double total = 0.0
    cdef double acc, w0, w1
    cdef long words = horizon >> 5
    cdef long tail = horizon & 31
    cdef long wi
    cdef Py_ssize_t i, j, m = site_x.shape[0]
    cdef uint64_t buf, pos, start, code0 = 0, code1 = 0
    cdef uint64_t delta[4]
    cdef uint64_t *codes = NULL
    cdef int k
    codes_arr = np.empty(max(m, 1), dtype=np.uint64)
    cdef uint64_t[::1] codes_view = codes_arr
    for j in range(m):
        codes_view[j] = _pack(site_x[j], site_y[j])
    codes = &codes_view[0]
    delta[0] = (<uint64_t> 1) << 32        # +x
    delta[1] = <uint64_t> 0 - ((<uint64_t> 1) << 32)  # -x
    delta[2] = 1                           # +y
    delta[3] = <uint64_t> 0 - <uint64_t> 1  # -y
    start = _pack(sx, sy)
    w0 = site_w[0] if m > 0 else 0.0
    w1 = site_w[1] if m > 1 else 0.0
    if m > 0:
        code0 = codes[0]
    if m > 1:
        code1 = codes[1]
    with nogil:
        if m == 2:
            for i in range(n_walks):
                pos = start
                acc = 0.0
                if pos == code0:
                    acc += w0
                elif pos == code1:
                    acc += w1
                for wi in range(words):
                    buf = rng.next_uint64(rng.state)
                    for k in range(32):
                        pos += delta[buf & 3]
                        buf >>= 2
                        if pos == code0:
                            acc += w0
                        elif pos == code1:
                            acc += w1
                if tail:
                    buf = rng.next_uint64(rng.state)
                    for k in range(tail):
                        pos += delta[buf & 3]
                        buf >>= 2
                        if pos == code0:
                            acc += w0
                        elif pos == code1:
                            acc += w1
                total += acc
        else:
            for i in range(n_walks):
                pos = start
                acc = 0.0
                for j in range(m):
                    if pos == codes[j]:
                        acc += site_w[j]
                        break
                for wi in range(words):
                    buf = rng.next_uint64(rng.state)
                    for k in range(32):
                        pos += delta[buf & 3]
                        buf >>= 2
                        for j in range(m):
                            if pos == codes[j]:
                                acc += site_w[j]
                                break
                if tail:
                    buf = rng.next_uint64(rng.state)
                    for k in range(tail):
                        pos += delta[buf & 3]
                        buf >>= 2
                        for j in range(m):
                            if pos == codes[j]:
                                acc += site_w[j]
                                break
                total += acc
    return total
