"""Tensor-product Gauss-Legendre panels with dyadic corner refinement.

The two singular integrals in this package (cell-averaged log covariance and
the random-walk potential kernel) both integrate a function that is smooth
away from one corner of a rectangle.  Splitting the rectangle into dyadic
L-shaped shells shrinking toward that corner keeps every panel smooth, so a
fixed-order Gauss rule converges geometrically per shell.
"""

import numpy as np
from numpy.polynomial.legendre import leggauss

_NODES = {}


def gauss_nodes(n):
    if n not in _NODES:
        _NODES[n] = leggauss(n)
    return _NODES[n]


def quad_box(f, ax, bx, ay, by, n=16):
    """Tensor Gauss-Legendre integral of f over [ax,bx] x [ay,by]."""
    x, w = gauss_nodes(n)
    xs = 0.5 * (bx - ax) * x + 0.5 * (bx + ax)
    ys = 0.5 * (by - ay) * x + 0.5 * (by + ay)
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    ww = np.outer(w, w) * (0.25 * (bx - ax) * (by - ay))
    return float(np.sum(f(xx, yy) * ww))


def quad_box_corner(f, side_x, side_y, n=16, levels=26):
    """Integrate f over [0,side_x] x [0,side_y] with a singularity at (0,0).

    The integrand must be integrable at the corner (log-type or bounded).
    ``levels`` dyadic shells leave an untreated square of relative side
    2**-levels whose contribution is below 1e-14 for log-type singularities.
    """
    total = 0.0
    hi = 1.0
    for _ in range(levels):
        lo = hi / 2.0
        total += quad_box(f, lo * side_x, hi * side_x, 0.0, hi * side_y, n)
        total += quad_box(f, 0.0, lo * side_x, lo * side_y, hi * side_y, n)
        hi = lo
    return total
