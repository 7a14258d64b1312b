"""Cell-averaged logarithmic generalized covariance on the unit grid.

``cell_cov(s, t)`` returns

    Gamma(s,t) = - integral over two unit squares at integer lag (s,t) of
                 log ||x - y||  (average, i.e. divided by both cell areas)

computed through the difference-variable (tent) representation

    Gamma(s,t) = - int_{[-1,1]^2} (1-|u|)(1-|v|) log||(s+u, t+v)|| du dv.

The tent weight is polynomial on each of the four unit quadrants, and the
log factor is singular at most at one quadrant corner (only for |s|,|t| <= 1,
since lags are integers).  Singular quadrants are handled by dyadic corner
refinement, smooth ones by a single Gauss panel.  Values are cached per
canonical dihedral representative 0 <= s <= t.
"""

import threading

import numpy as np

from .errors import QuadratureFailure
from .quadrature import quad_box, quad_box_corner

CELL_COV_TOL = 1e-10

_cache = {}
_cache_lock = threading.Lock()


def canonical_lag(s, t):
    """Dihedral-group representative of a lag: 0 <= s <= t."""
    s, t = abs(int(s)), abs(int(t))
    return (s, t) if s <= t else (t, s)


def _integrate(s, t, n, levels):
    total = 0.0
    for a in (-1.0, 0.0):
        for b in (-1.0, 0.0):

            def f(u, v):
                r2 = (s + u) ** 2 + (t + v) ** 2
                return -(1.0 - np.abs(u)) * (1.0 - np.abs(v)) * 0.5 * np.log(r2)

            px, py = -float(s), -float(t)
            if a <= px <= a + 1.0 and b <= py <= b + 1.0:
                # the log zero sits at a quadrant corner; refine toward it
                sx = 1.0 if px == a else -1.0
                sy = 1.0 if py == b else -1.0
                total += quad_box_corner(
                    lambda p, q: f(px + sx * p, py + sy * q),
                    1.0, 1.0, n=n, levels=levels,
                )
            else:
                total += quad_box(f, a, a + 1.0, b, b + 1.0, n=n)
    return total


def cell_cov(s, t):
    """Cell-averaged generalized covariance at integer lag (s, t).

    Symmetric under the 8-element dihedral group; finite for every lag
    including (0,0).  Raises QuadratureFailure if two quadrature resolutions
    disagree beyond 1e-10.
    """
    key = canonical_lag(s, t)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    coarse = _integrate(key[0], key[1], n=16, levels=26)
    fine = _integrate(key[0], key[1], n=24, levels=30)
    if abs(fine - coarse) > CELL_COV_TOL:
        raise QuadratureFailure(
            f"cell_cov{key}: resolutions differ by {abs(fine - coarse):.3e} "
            f"> {CELL_COV_TOL:g}"
        )
    with _cache_lock:
        _cache[key] = fine
    return fine


def prefill(lags):
    """Populate the lag cache single-threaded (safe before parallel reads)."""
    for s, t in lags:
        cell_cov(s, t)


def cache_size():
    return len(_cache)


def export_csv(max_lag, fh):
    """Write the table `s,t,value` for all |s|,|t| <= max_lag."""
    fh.write("s,t,value\n")
    for s in range(-max_lag, max_lag + 1):
        for t in range(-max_lag, max_lag + 1):
            fh.write(f"{s},{t},{cell_cov(s, t):.12g}\n")
