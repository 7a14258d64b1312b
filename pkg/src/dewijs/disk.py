"""Hitting distributions and kriging on the unit disk.

For Brownian motion started at an interior point x0, the first-hitting
density on the unit circle is the Poisson kernel

    v(x, x0) = (1/2pi) (1 - ||x0||^2) / ||x - x0||^2,   ||x|| = 1,

which is simultaneously the coefficient function of the contour kriging
predictor for the logarithmic generalized covariance.  This module provides
the analytic kernel, two hitting-point samplers (walk-on-spheres and Euler
discretization), the mean-value identity check that ties the kernel to the
log covariance, and a discretized-boundary kriging solve whose weights
converge to Poisson-kernel arc integrals.

Boundary points are represented by their angle in [0, 2pi).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.stats

from . import backend
from .errors import NotInteriorError, QuadratureFailure, WalkCapWarning
from .kriging import KrigingSolution, solve_bordered
from .rng import allocate, worker_bit_generators

BOUNDARY_TOL = 1e-6
WOS_ITERATION_CAP = 100_000
EULER_MAX_STEP = 1e-3


def _require_interior(x0):
    r = math.hypot(x0[0], x0[1])
    if r >= 1.0:
        raise NotInteriorError(f"point {tuple(x0)} is not interior to the unit disk")
    return r


def _quad(f, a, b, points=None, epsabs=1e-12, epsrel=1e-12):
    res = scipy.integrate.quad(
        f, a, b, points=points, limit=400, epsabs=epsabs, epsrel=epsrel,
        full_output=1,
    )
    if len(res) > 3 and "roundoff" not in str(res[3]):
        raise QuadratureFailure(f"quad failed on [{a}, {b}]: {res[3]}")
    return res[0]


def poisson_kernel(angle, x0):
    """Hitting density at the boundary point with the given angle."""
    r = _require_interior(x0)
    dx = math.cos(angle) - x0[0]
    dy = math.sin(angle) - x0[1]
    return (1.0 - r * r) / (2.0 * math.pi * (dx * dx + dy * dy))


def poisson_segment_integral(theta_a, theta_b, x0):
    """Integral of the Poisson kernel over the arc [theta_a, theta_b]."""
    _require_interior(x0)
    return _quad(lambda th: poisson_kernel(th, x0), theta_a, theta_b,
                 epsabs=1e-13)


def poisson_normalization(x0):
    """Total mass of the Poisson kernel around the circle (should be 1)."""
    phi = math.atan2(x0[1], x0[0])
    # split at the density peak so the adaptive rule sees it
    return _quad(lambda th: poisson_kernel(th, x0), phi - math.pi,
                 phi + math.pi, points=[phi])


def harmonic_identity_check(x0, y):
    """|integral of log||x'-y|| against the hitting density - log||x0-y|||.

    Valid for y on or outside the circle; on-circle y makes the integrand
    log-singular at y's angle, which the quadrature isolates by splitting
    the window symmetrically around the singular angle.
    """
    _require_interior(x0)
    ry = math.hypot(y[0], y[1])
    # allow 1-ulp shortfall from constructing on-circle points via cos/sin
    if ry < 1.0 - 1e-12:
        raise ValueError(f"y must satisfy ||y|| >= 1, got {tuple(y)}")
    phi = math.atan2(y[1], y[0])

    def integrand(th):
        dx = math.cos(th) - y[0]
        dy = math.sin(th) - y[1]
        return 0.5 * math.log(dx * dx + dy * dy) * poisson_kernel(th, x0)

    val = _quad(integrand, phi - math.pi, phi + math.pi, points=[phi],
                epsabs=1e-11, epsrel=1e-11)
    return abs(val - math.log(math.hypot(x0[0] - y[0], x0[1] - y[1])))


# ---------------------------------------------------------------------------
# hitting-point samplers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HittingDistribution:
    """Analytic or empirical first-hitting distribution on the circle.

    ``kind`` is "analytic" (Poisson kernel at x0) or "empirical" (sampled
    angles).  Empirical samples lie exactly on the circle; ``boundary_tol``
    records the walk-on-spheres capture tolerance.
    """

    kind: str
    x0: tuple
    angles: np.ndarray = None
    method: str = ""
    seed: int = 0
    workers: int = 1
    step: float = 0.0
    boundary_tol: float = BOUNDARY_TOL
    capped_walks: int = 0

    def density(self, angle):
        if self.kind != "analytic":
            raise ValueError("density is defined for analytic distributions")
        return poisson_kernel(angle, self.x0)

    def normalization(self):
        return poisson_normalization(self.x0)

    def histogram(self, bins=36):
        if self.kind != "empirical":
            raise ValueError("histogram requires an empirical distribution")
        counts, edges = np.histogram(self.angles, bins=bins,
                                     range=(0.0, 2.0 * math.pi))
        return counts, edges


def analytic_hitting(x0):
    _require_interior(x0)
    return HittingDistribution("analytic", tuple(x0))


def sample_hitting(x0, n, method="wos", seed=0, workers=1, step=1e-4,
                   boundary_tol=BOUNDARY_TOL, cap=WOS_ITERATION_CAP):
    """Draw n first-hitting angles from x0 by the requested sampler.

    "wos" jumps uniformly on the largest circle around the current point
    contained in the disk until within ``boundary_tol`` of the boundary,
    then projects.  "euler" takes Gaussian steps of per-coordinate variance
    ``step`` (must be <= 1e-3) and intersects the first exiting segment with
    the circle.  Sampling is split across ``workers`` independent streams;
    output is bit-reproducible for fixed (seed, workers) and identical under
    both backends.
    """
    _require_interior(x0)
    if n < 1:
        raise ValueError("n must be >= 1")
    counts = allocate(n, workers)
    bgs = worker_bit_generators(seed, len(counts))
    x, y = float(x0[0]), float(x0[1])
    if method == "wos":
        calls = [
            (lambda bg=bg, c=c: backend.wos_angles(bg, x, y, c, boundary_tol, cap))
            for bg, c in zip(bgs, counts)
        ]
        results = backend.run_per_worker(calls)
        angles = np.concatenate([r[0] for r in results])
        capped = sum(r[1] for r in results)
    elif method == "euler":
        if not 0.0 < step <= EULER_MAX_STEP:
            raise ValueError(f"euler requires 0 < step <= {EULER_MAX_STEP:g}")
        calls = [
            (lambda bg=bg, c=c: backend.euler_angles(bg, x, y, c, step))
            for bg, c in zip(bgs, counts)
        ]
        angles = np.concatenate(backend.run_per_worker(calls))
        capped = 0
    else:
        raise ValueError(f"unknown sampling method {method!r}")
    if capped:
        warnings.warn(
            f"{capped} walk(s) hit the {cap}-iteration cap before reaching "
            f"the boundary tolerance", WalkCapWarning, stacklevel=2,
        )
    return HittingDistribution(
        "empirical", (x, y), angles=angles, method=method, seed=int(seed),
        workers=int(workers), step=float(step if method == "euler" else 0.0),
        boundary_tol=float(boundary_tol), capped_walks=int(capped),
    )


def expected_bin_counts(x0, n, bins=36):
    """n times the Poisson-kernel mass of each of ``bins`` equal angle bins."""
    edges = np.linspace(0.0, 2.0 * math.pi, bins + 1)
    mass = [poisson_segment_integral(a, b, x0)
            for a, b in zip(edges[:-1], edges[1:])]
    return float(n) * np.asarray(mass), edges


def chi_square_statistic(counts, expected):
    counts = np.asarray(counts, dtype=float)
    expected = np.asarray(expected, dtype=float)
    return float(np.sum((counts - expected) ** 2 / expected))


def chi_square_threshold(bins=36, quantile=0.999):
    return float(scipy.stats.chi2.ppf(quantile, bins - 1))


def total_variation(counts_a, counts_b):
    """Total-variation distance between two binned empirical distributions."""
    p = np.asarray(counts_a, dtype=float)
    q = np.asarray(counts_b, dtype=float)
    return 0.5 * float(np.abs(p / p.sum() - q / q.sum()).sum())


# ---------------------------------------------------------------------------
# kriging from arc segments of the circle
# ---------------------------------------------------------------------------

def _tent_log_integral(w, k):
    """integral_{-w}^{w} (w - |u|) log(2 |sin((k w + u)/2)|) du.

    The log factor vanishes where (k w + u) is a multiple of 2 pi, i.e. at
    u* = -k w + 2 pi m inside the window for k in {0, 1, n-1}; the singular
    log|u - u*| part is integrated in closed form and the smooth remainder
    by adaptive quadrature.
    """
    stars = []
    for m in (-1, 0, 1):
        u = -k * w + 2.0 * math.pi * m
        if -w - 1e-15 <= u <= w + 1e-15:
            stars.append(min(max(u, -w), w))

    def smooth(u):
        val = math.log(abs(2.0 * math.sin(0.5 * (k * w + u))))
        for us in stars:
            if u != us:
                val -= math.log(abs(u - us))
            else:
                return 0.0  # removable after subtraction
        return (w - abs(u)) * val

    # ratio 2 sin(d/2)/d is smooth and positive near each zero, so the
    # subtracted integrand is continuous; kinks at 0 and u* guide quad
    interior = sorted({p for p in stars + [0.0] if -w < p < w})
    total = _quad(smooth, -w, w, points=interior or None, epsabs=1e-13,
                  epsrel=1e-13)

    def primitive(t, amp, sign):
        # antiderivative of (amp - sign*t) log|t|
        if t == 0.0:
            return 0.0
        return ((amp * t - sign * 0.5 * t * t) * math.log(abs(t))
                - amp * t + sign * 0.25 * t * t)

    for us in stars:
        # integral of (w - |u|) log|u - us| over [-w, 0] and [0, w]
        for lo, hi, sign in ((-w, 0.0, -1.0), (0.0, w, 1.0)):
            amp = w - sign * us
            total += primitive(hi - us, amp, sign) - primitive(lo - us, amp, sign)
    return total


def arc_averaged_gram_row(n_segments):
    """First row of the circulant Gram matrix of arc-averaged -log kernels."""
    w = 2.0 * math.pi / n_segments
    row = np.empty(n_segments)
    for k in range(n_segments // 2 + 1):
        val = -_tent_log_integral(w, k) / (w * w)
        row[k] = val
        if k:
            row[n_segments - k] = val
    return row


def _arc_target_vector(x0, n_segments):
    r2 = x0[0] ** 2 + x0[1] ** 2
    phi = math.atan2(x0[1], x0[0])
    w = 2.0 * math.pi / n_segments
    out = np.empty(n_segments)
    for j in range(n_segments):
        a, b = j * w, (j + 1) * w

        def f(th):
            return -0.5 * math.log(1.0 - 2.0 * math.sqrt(r2) * math.cos(th - phi) + r2)

        out[j] = _quad(f, a, b, epsabs=1e-13, epsrel=1e-13) / w
    return out


@dataclass(frozen=True)
class CircleKrigingResult:
    solution: KrigingSolution
    n_segments: int
    x0: tuple
    edges: np.ndarray
    poisson_integrals: np.ndarray

    @property
    def weights(self):
        return self.solution.weights

    @property
    def max_error(self):
        return float(np.max(np.abs(self.weights - self.poisson_integrals)))


def discretized_circle_kriging(x0, n_segments):
    """Krige the interior point x0 from n equal arc segments of the circle.

    The segment-to-segment covariance is the arc average of -log distance
    (the one-dimensional analogue of unit-cell regularization), the target
    vector its segment average against x0.  Weights sum to one and approach
    the Poisson-kernel integral of each segment as segments shrink.
    """
    _require_interior(x0)
    n = int(n_segments)
    if n < 8:
        raise ValueError("n_segments must be >= 8")
    row = arc_averaged_gram_row(n)
    idx = np.arange(n)
    gram = row[(idx[:, None] - idx[None, :]) % n]
    k0 = _arc_target_vector(x0, n)
    weights, lagrange = solve_bordered(gram, k0)
    edges = np.linspace(0.0, 2.0 * math.pi, n + 1)
    pois = np.array([poisson_segment_integral(a, b, x0)
                     for a, b in zip(edges[:-1], edges[1:])])
    sites = tuple(
        (math.cos(0.5 * (edges[j] + edges[j + 1])),
         math.sin(0.5 * (edges[j] + edges[j + 1])))
        for j in range(n)
    )
    # the point target's self term uses the zero-at-zero convention, making
    # this Matheron's relative variance (sign not constrained)
    variance = float(-2.0 * weights @ k0 + weights @ gram @ weights)
    sol = KrigingSolution(weights, lagrange, prediction_variance=variance,
                          sites=sites, target=tuple(x0))
    return CircleKrigingResult(sol, n, tuple(x0), edges, pois)


def circle_kriging_to_csv(result: CircleKrigingResult, fh):
    fh.write("segment,theta_start,theta_end,weight,poisson_integral\n")
    for j in range(result.n_segments):
        fh.write(f"{j},{result.edges[j]:.12g},{result.edges[j + 1]:.12g},"
                 f"{result.weights[j]:.12g},{result.poisson_integrals[j]:.12g}\n")
