"""Independent oracles used to pin expected values in the tests.

Each oracle deliberately avoids the code path it checks: the potential
kernel is summed from exact binomial transition probabilities instead of the
torus quadrature, K0 is integrated from its integral representation instead
of series/continued fractions, and the cell-averaged covariance is averaged
over random point pairs instead of Gauss panels.
"""

import numpy as np
import scipy.integrate
from scipy.special import gammaln


def potential_series(s, t, terms=200_000):
    """a(s,t) from the transition-probability series with 1/T extrapolation.

    The two-dimensional walk splits into independent one-dimensional walks
    along the diagonals, so P(S_t = (s,t)) is a product of binomials.  The
    partial sums converge like c/T; Richardson extrapolation on the halved
    horizon removes that term.
    """
    a, b = s + t, s - t
    tt = np.arange(0, terms + 1, dtype=float)

    def prob(k1, k2):
        out = np.zeros_like(tt)
        ok = ((tt + k1) % 2 == 0) & (np.abs(k1) <= tt) & (np.abs(k2) <= tt)
        tv = tt[ok]

        def log_p(k):
            m = 0.5 * (tv + k)
            return (gammaln(tv + 1) - gammaln(m + 1) - gammaln(tv - m + 1)
                    - tv * np.log(2.0))

        out[ok] = np.exp(log_p(k1) + log_p(k2))
        return out

    partial = np.cumsum(prob(0, 0) - prob(a, b))
    return 2.0 * partial[terms] - partial[terms // 2]


def potential_diagonal_exact(n):
    """Closed form on the diagonal: a(n,n) = (4/pi) sum_{k=1}^{n} 1/(2k-1)."""
    return 4.0 / np.pi * sum(1.0 / (2 * k - 1) for k in range(1, n + 1))


def k0_integral(x):
    """K0(x) by adaptive quadrature of int_0^inf exp(-x cosh t) dt.

    Factored as exp(-x) int exp(-2 x sinh^2(t/2)) dt so large x neither
    overflows cosh nor underflows the integrand.
    """
    t_max = np.arccosh(1.0 + 760.0 / x)
    val, err = scipy.integrate.quad(
        lambda t: np.exp(-2.0 * x * np.sinh(0.5 * t) ** 2), 0.0, t_max,
        epsabs=1e-14, epsrel=1e-13, limit=400,
    )
    return float(np.exp(-x) * val)


def cell_cov_zero_lag_mc(n_pairs=10_000_000, seed=123):
    """Monte Carlo for the zero-lag cell average of -log distance.

    Returns (estimate, standard error) over ``n_pairs`` uniform point pairs
    in the unit square.
    """
    gen = np.random.default_rng(seed)
    x = gen.random((n_pairs, 2))
    y = gen.random((n_pairs, 2))
    v = -np.log(np.hypot(x[:, 0] - y[:, 0], x[:, 1] - y[:, 1]))
    return float(v.mean()), float(v.std(ddof=1) / np.sqrt(n_pairs))


def dirichlet_dense_solve(interior, boundary, x):
    """Hitting distribution by an independent dense linear solve."""
    interior = sorted(interior)
    boundary = sorted(boundary)
    n = len(interior)
    index = {p: i for i, p in enumerate(interior)}
    m = np.eye(n)
    rhs = np.zeros((n, len(boundary)))
    bindex = {p: j for j, p in enumerate(boundary)}
    for i, (px, py) in enumerate(interior):
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            q = (px + dx, py + dy)
            if q in index:
                m[i, index[q]] -= 0.25
            else:
                rhs[i, bindex[q]] += 0.25
    h = np.linalg.solve(m, rhs)
    return {p: h[index[x], j] for p, j in bindex.items()}
