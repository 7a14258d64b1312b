"""Pure-Python reference implementations of the sampling kernels.

These mirror dewijs._core draw for draw: the walk-on-spheres kernel takes one
standard uniform per jump, the Euler kernel two standard normals per step,
and the lattice walk one raw uint64 per 32 steps (two bits per step, least
significant first, remainder discarded at the end of each walk).  Given the
same BitGenerator state they return bit-identical results to the compiled
kernels; they are one to two orders of magnitude slower and exist as the
import-time fallback and as an executable specification of the contract.
"""

import math

import numpy as np

_DIR_X = np.array([1, -1, 0, 0], dtype=np.int64)
_DIR_Y = np.array([0, 0, 1, -1], dtype=np.int64)


def wos_angles(bit_generator, x0, y0, n, tol, cap):
    gen = np.random.Generator(bit_generator)
    out = np.empty(n, dtype=np.float64)
    capped = 0
    for i in range(n):
        x, y = x0, y0
        it = 0
        while it < cap:
            d = 1.0 - math.sqrt(x * x + y * y)
            if d <= tol:
                break
            theta = 2.0 * math.pi * gen.random()
            x += d * math.cos(theta)
            y += d * math.sin(theta)
            it += 1
        if it >= cap:
            capped += 1
        theta = math.atan2(y, x)
        if theta < 0.0:
            theta += 2.0 * math.pi
        out[i] = theta
    return out, capped


def euler_angles(bit_generator, x0, y0, n, step):
    gen = np.random.Generator(bit_generator)
    out = np.empty(n, dtype=np.float64)
    s = math.sqrt(step)
    for i in range(n):
        x, y = x0, y0
        while True:
            dx = s * gen.standard_normal()
            dy = s * gen.standard_normal()
            nx, ny = x + dx, y + dy
            if nx * nx + ny * ny >= 1.0:
                a = dx * dx + dy * dy
                b = 2.0 * (x * dx + y * dy)
                c = x * x + y * y - 1.0
                t = (-b + math.sqrt(b * b - 4.0 * a * c)) / (2.0 * a)
                x += t * dx
                y += t * dy
                break
            x, y = nx, ny
        theta = math.atan2(y, x)
        if theta < 0.0:
            theta += 2.0 * math.pi
        out[i] = theta
    return out


def occupation_sums(bit_generator, sx, sy, n_walks, horizon,
                    site_x, site_y, site_w):
    site_x = np.asarray(site_x, dtype=np.int64)
    site_y = np.asarray(site_y, dtype=np.int64)
    site_w = np.asarray(site_w, dtype=np.float64)
    words_per_walk = (horizon + 31) // 32
    t = np.arange(horizon)
    word = t >> 5
    shift = (2 * (t & 31)).astype(np.uint64)
    mask = np.uint64(3)
    total = 0.0
    for _ in range(n_walks):
        raw = bit_generator.random_raw(words_per_walk)
        dirs = ((raw[word] >> shift) & mask).astype(np.int64)
        px = sx + np.concatenate(([0], np.cumsum(_DIR_X[dirs])))
        py = sy + np.concatenate(([0], np.cumsum(_DIR_Y[dirs])))
        for j in range(len(site_x)):
            total += site_w[j] * np.count_nonzero(
                (px == site_x[j]) & (py == site_y[j])
            )
    return float(total)
