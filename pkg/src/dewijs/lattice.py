"""Simple-random-walk potential kernel and lattice Markov verification.

The potential kernel of the simple random walk on the square lattice is

    a(s,t) = (1/pi^2) int_{[0,pi]^2} (1 - cos(s u) cos(t v)) / D(u,v) du dv,
    D(u,v) = sin^2(u/2) + sin^2(v/2),

the lattice counterpart of the Brownian potential kernel; -a is the
generalized covariance of the first-order intrinsic autoregression.  The
numerator kills the non-integrable pole of 1/D at the origin; the remaining
bounded corner discontinuity is handled by dyadic shell refinement and
oscillation by lag-proportional paneling.  A sparse minimum-norm correction
then enforces the defining identity

    (1/4) sum_{neighbors y of x} a(y) - a(x) = [x = 0]

exactly (to solver precision) on every interior lag of the table.

The Markov verification couples two independent computations on a finite
domain: ordinary kriging weights under the kernel -a (sites on the domain
boundary) and first-hitting probabilities of the simple random walk solved
from the discrete Dirichlet problem.  They agree to solver precision, the
lattice incarnation of the hitting-measure description of the conditional
expectation.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from . import backend
from .contrasts import LATTICE, POINT, Contrast
from .errors import IncompatibleKernelError, NotInteriorError
from .kernels import inner_product, lattice_potential_kernel
from .kriging import KrigingProblem, gram_matrix, solve_ordinary_kriging
from .quadrature import quad_box, quad_box_corner
from .rng import allocate, worker_bit_generators

NEIGHBOR_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


# ---------------------------------------------------------------------------
# potential kernel table
# ---------------------------------------------------------------------------

def _potential_quadrature(s, t, n=16, levels=26):
    """Torus integral for a(s,t) at one canonical lag (s, t >= 0)."""
    if s == 0 and t == 0:
        return 0.0

    def f(u, v):
        den = np.sin(0.5 * u) ** 2 + np.sin(0.5 * v) ** 2
        num = 2.0 * np.sin(0.5 * s * u) ** 2 \
            + np.cos(s * u) * 2.0 * np.sin(0.5 * t * v) ** 2
        return num / den

    pu = max(4, s + 1)
    pv = max(4, t + 1)
    hu = math.pi / pu
    hv = math.pi / pv
    total = 0.0
    for i in range(pu):
        for j in range(pv):
            if i == 0 and j == 0:
                total += quad_box_corner(f, hu, hv, n=n, levels=levels)
            else:
                total += quad_box(f, i * hu, (i + 1) * hu, j * hv,
                                  (j + 1) * hv, n=n)
    return total / math.pi ** 2


def _laplacian_correction(values):
    """Minimum-norm correction making the potential identity exact.

    ``values`` is the dense (2L+1)^2 table; entry (0,0) stays pinned at 0.
    Constraints run over interior lags |s|,|t| <= L-1.
    """
    size = values.shape[0]
    lag = size // 2

    def idx(s, t):
        return (s + lag) * size + (t + lag)

    free = [k for k in range(size * size) if k != idx(0, 0)]
    col_of = {k: c for c, k in enumerate(free)}

    rows, cols, data, rhs = [], [], [], []
    r = 0
    flat = values.ravel()
    for s in range(-lag + 1, lag):
        for t in range(-lag + 1, lag):
            target = 1.0 if (s, t) == (0, 0) else 0.0
            acc = 0.0
            for (k, w) in [(idx(s, t), -1.0)] + [
                (idx(s + ds, t + dt), 0.25) for ds, dt in NEIGHBOR_STEPS
            ]:
                acc += w * flat[k]
                if k in col_of:
                    rows.append(r)
                    cols.append(col_of[k])
                    data.append(w)
            rhs.append(target - acc)
            r += 1
    a_mat = scipy.sparse.csr_matrix((data, (rows, cols)),
                                    shape=(r, len(free)))
    gram = (a_mat @ a_mat.T).tocsc()
    y = scipy.sparse.linalg.spsolve(gram, np.asarray(rhs))
    delta = a_mat.T @ y
    corrected = flat.copy()
    corrected[np.asarray(free)] += delta
    return corrected.reshape(size, size)


@dataclass(frozen=True)
class PotentialKernelTable:
    max_lag: int
    values: np.ndarray  # dense grid, index [s + max_lag, t + max_lag]

    def lookup(self, s, t):
        lag = self.max_lag
        if abs(s) > lag or abs(t) > lag:
            raise ValueError(f"lag ({s},{t}) outside table (max_lag={lag})")
        return float(self.values[s + lag, t + lag])

    def laplacian_residual(self):
        """Max deviation from the potential identity over interior lags."""
        v = self.values
        worst = 0.0
        lag = self.max_lag
        for s in range(-lag + 1, lag):
            for t in range(-lag + 1, lag):
                mean = 0.25 * (v[s + 1 + lag, t + lag] + v[s - 1 + lag, t + lag]
                               + v[s + lag, t + 1 + lag] + v[s + lag, t - 1 + lag])
                target = 1.0 if (s, t) == (0, 0) else 0.0
                worst = max(worst, abs(mean - v[s + lag, t + lag] - target))
        return worst

    def to_csv(self, fh):
        fh.write("s,t,a\n")
        lag = self.max_lag
        for s in range(-lag, lag + 1):
            for t in range(-lag, lag + 1):
                fh.write(f"{s},{t},{self.values[s + lag, t + lag]:.12g}\n")


def potential_kernel(max_lag, correct=True) -> PotentialKernelTable:
    """Build the dense potential-kernel table for |s|,|t| <= max_lag."""
    lag = int(max_lag)
    if not 1 <= lag <= 64:
        raise ValueError("max_lag must be between 1 and 64")
    size = 2 * lag + 1
    values = np.empty((size, size))
    canonical = {}
    for s in range(lag + 1):
        for t in range(s, lag + 1):
            canonical[(s, t)] = _potential_quadrature(s, t)
    for s in range(-lag, lag + 1):
        for t in range(-lag, lag + 1):
            key = (abs(s), abs(t))
            if key[0] > key[1]:
                key = (key[1], key[0])
            values[s + lag, t + lag] = canonical[key]
    if correct:
        values = _laplacian_correction(values)
    return PotentialKernelTable(lag, values)


# ---------------------------------------------------------------------------
# lattice domains and the discrete Dirichlet problem
# ---------------------------------------------------------------------------

class LatticeDomain:
    """Finite interior set enclosed by a boundary set on the integer lattice.

    Invariants checked at construction: interior and boundary are disjoint,
    and every lattice neighbor of an interior point is interior or boundary,
    so a walk from the interior must hit the boundary before leaving.
    """

    def __init__(self, interior, boundary=None):
        interior = {(int(p[0]), int(p[1])) for p in interior}
        if not interior:
            raise ValueError("domain needs at least one interior point")
        combinatorial = {
            (x + dx, y + dy)
            for x, y in interior for dx, dy in NEIGHBOR_STEPS
        } - interior
        if boundary is None:
            boundary = combinatorial
        else:
            boundary = {(int(p[0]), int(p[1])) for p in boundary}
            if boundary & interior:
                raise ValueError("interior and boundary sets overlap")
            missing = combinatorial - boundary
            if missing:
                raise ValueError(
                    f"boundary does not enclose the interior; missing {sorted(missing)[:4]}"
                )
        self.interior = frozenset(interior)
        self.boundary = frozenset(boundary)
        self.interior_order = tuple(sorted(interior))
        self.boundary_order = tuple(sorted(boundary))
        self._factorization = None

    def diameter(self):
        pts = self.interior_order + self.boundary_order
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return max(max(xs) - min(xs), max(ys) - min(ys))

    def _factors(self):
        if self._factorization is None:
            n = len(self.interior_order)
            index = {p: i for i, p in enumerate(self.interior_order)}
            bindex = {p: i for i, p in enumerate(self.boundary_order)}
            rows, cols, data = [], [], []
            brows, bcols, bdata = [], [], []
            for i, (x, y) in enumerate(self.interior_order):
                for dx, dy in NEIGHBOR_STEPS:
                    q = (x + dx, y + dy)
                    if q in index:
                        rows.append(i)
                        cols.append(index[q])
                        data.append(0.25)
                    elif q in bindex:
                        brows.append(i)
                        bcols.append(bindex[q])
                        bdata.append(0.25)
            stay = scipy.sparse.csc_matrix(
                (data, (rows, cols)), shape=(n, n))
            exit_ = scipy.sparse.csr_matrix(
                (bdata, (brows, bcols)), shape=(n, len(self.boundary_order)))
            m = scipy.sparse.identity(n, format="csc") - stay
            self._factorization = (scipy.sparse.linalg.splu(m), exit_)
        return self._factorization


def box_domain(m):
    """Domain whose interior is an m-by-m block (centered for odd m)."""
    lo = -((m - 1) // 2)
    interior = [(i, j) for i in range(lo, lo + m) for j in range(lo, lo + m)]
    return LatticeDomain(interior)


def random_simply_connected_domain(n_cells, seed):
    """Grow a random connected interior set and fill its holes.

    Seeded growth from the origin by uniform frontier picks; enclosed holes
    are absorbed into the interior afterwards so the complement is connected.
    """
    gen = np.random.Generator(worker_bit_generators(seed, 1)[0])
    interior = {(0, 0)}
    frontier = set(NEIGHBOR_STEPS)
    for _ in range(max(0, int(n_cells) - 1)):
        pick = sorted(frontier)[int(gen.integers(len(frontier)))]
        interior.add(pick)
        frontier.discard(pick)
        for dx, dy in NEIGHBOR_STEPS:
            q = (pick[0] + dx, pick[1] + dy)
            if q not in interior:
                frontier.add(q)
    # flood fill the complement from outside the bounding box; unreachable
    # complement cells are holes
    xs = [p[0] for p in interior]
    ys = [p[1] for p in interior]
    x0, x1 = min(xs) - 1, max(xs) + 1
    y0, y1 = min(ys) - 1, max(ys) + 1
    outside = set()
    stack = [(x0, y0)]
    while stack:
        p = stack.pop()
        if p in outside or p in interior:
            continue
        if not (x0 <= p[0] <= x1 and y0 <= p[1] <= y1):
            continue
        outside.add(p)
        stack.extend((p[0] + dx, p[1] + dy) for dx, dy in NEIGHBOR_STEPS)
    for x in range(x0 + 1, x1):
        for y in range(y0 + 1, y1):
            if (x, y) not in outside:
                interior.add((x, y))
    return LatticeDomain(interior)


def hitting_probabilities(dom: LatticeDomain, x):
    """First-hitting distribution on the boundary for a walk from x.

    Solves the discrete Dirichlet problem through one sparse factorization
    of the interior Laplacian, shared across calls on the same domain.
    Returns a dict keyed by boundary point.
    """
    x = (int(x[0]), int(x[1]))
    if x not in dom.interior:
        raise NotInteriorError(f"{x} is not an interior point of the domain")
    lu, exit_ = dom._factors()
    e = np.zeros(len(dom.interior_order))
    e[dom.interior_order.index(x)] = 1.0
    z = lu.solve(e, trans="T")
    probs = exit_.T @ z
    return {p: float(v) for p, v in zip(dom.boundary_order, probs)}


def dynkin_crosscheck(dom: LatticeDomain, x, table: PotentialKernelTable):
    """Max |kriging weight - hitting probability| over the boundary.

    The kriging side uses the generalized covariance -a with the boundary
    points as sites and x as target; the hitting side solves the Dirichlet
    problem.  Both are independent linear solves.
    """
    kernel = lattice_potential_kernel(table)
    problem = KrigingProblem(dom.boundary_order, tuple(x), kernel)
    solution = solve_ordinary_kriging(problem)
    hits = hitting_probabilities(dom, x)
    worst = 0.0
    for site, w in zip(solution.sites, solution.weights):
        worst = max(worst, abs(w - hits[site]))
    return worst


def kriging_weight_matrix(dom: LatticeDomain, table: PotentialKernelTable):
    """Kriging weights for every interior target at once (one factorization)."""
    kernel = lattice_potential_kernel(table)
    sites = dom.boundary_order
    n = len(sites)
    gram = gram_matrix(kernel, sites, sites)
    bordered = np.zeros((n + 1, n + 1))
    bordered[:n, :n] = gram
    bordered[:n, n] = 1.0
    bordered[n, :n] = 1.0
    lu, piv = scipy.linalg.lu_factor(bordered)
    rhs = np.ones((n + 1, len(dom.interior_order)))
    rhs[:n, :] = gram_matrix(kernel, sites, dom.interior_order)
    sol = scipy.linalg.lu_solve((lu, piv), rhs)
    return sol[:n, :]  # column per interior point


def kriged_surface_laplacian_residual(dom: LatticeDomain, boundary_data,
                                      table: PotentialKernelTable):
    """Max discrete-Laplacian residual of the kriged surface.

    ``boundary_data`` maps boundary points to values (dict or array over
    the sorted boundary).  The kriged value at each interior point is the
    weight-matrix combination of the boundary data; the residual at x is
    (1/4) sum of neighbor values - value(x) with boundary values filled in.
    """
    if isinstance(boundary_data, dict):
        data = np.array([boundary_data[p] for p in dom.boundary_order])
    else:
        data = np.asarray(boundary_data, dtype=float)
        if data.shape != (len(dom.boundary_order),):
            raise ValueError("boundary data length does not match boundary size")
    weights = kriging_weight_matrix(dom, table)
    kriged = {p: float(w) for p, w in
              zip(dom.interior_order, weights.T @ data)}
    bvals = dict(zip(dom.boundary_order, data))
    worst = 0.0
    for (x, y), v in kriged.items():
        acc = 0.0
        for dx, dy in NEIGHBOR_STEPS:
            q = (x + dx, y + dy)
            acc += kriged[q] if q in kriged else bvals[q]
        worst = max(worst, abs(0.25 * acc - v))
    return worst


# ---------------------------------------------------------------------------
# occupation-time identity (Monte Carlo)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OccupationCheckResult:
    estimate: float
    kernel_value: float
    relative_error: float
    calibration: float       # estimate / kernel value; the lattice analogue
    horizon: int             # of the continuum proportionality constant
    n_walks: int
    seed: int
    workers: int
    walks_per_atom: tuple = field(default=())


def _proportional_allocation(weights, n):
    """Deterministic largest-remainder split of n walks by |weight|."""
    w = np.abs(np.asarray(weights, dtype=float))
    shares = w / w.sum() * n
    counts = np.floor(shares).astype(int)
    rest = n - counts.sum()
    order = np.argsort(-(shares - counts), kind="stable")
    for i in range(rest):
        counts[order[i]] += 1
    return counts


def occupation_identity_check(sigma: Contrast, nu: Contrast, horizon, n_walks,
                              seed=0, workers=1,
                              table: PotentialKernelTable = None):
    """Monte Carlo check of the occupation-time form of the inner product.

    Walks start from the atoms of sigma (allocated proportionally to
    |weight|) and accumulate the nu-weighted occupation over ``horizon``
    steps; the weighted average estimates the -a inner product of the two
    contrasts.  Finite-horizon truncation biases the estimate at O(1/T), so
    the check is corroborative, with the tolerance chosen accordingly by the
    caller.  The ratio estimate/kernel value is reported as ``calibration``.
    """
    for c in (sigma, nu):
        if len(c) and (c.space != LATTICE or c.support_kind != POINT):
            raise IncompatibleKernelError(
                "occupation check requires point-support lattice contrasts")
    horizon = int(horizon)
    n_walks = int(n_walks)
    if horizon < 1 or n_walks < 1:
        raise ValueError("horizon and n_walks must be positive")
    if len(nu) == 0 or len(sigma) == 0:
        return OccupationCheckResult(0.0, 0.0, 0.0, math.nan, horizon,
                                     n_walks, int(seed), int(workers))
    if table is None:
        span = max(
            max(abs(a.location[0] - b.location[0]),
                abs(a.location[1] - b.location[1]))
            for a in sigma.atoms for b in nu.atoms
        )
        table = potential_kernel(max(1, span))
    kernel_value = inner_product(sigma, nu, lattice_potential_kernel(table))

    site_x = np.array([a.location[0] for a in nu.atoms], dtype=np.int64)
    site_y = np.array([a.location[1] for a in nu.atoms], dtype=np.int64)
    site_w = np.array([a.weight for a in nu.atoms], dtype=np.float64)

    counts = _proportional_allocation([a.weight for a in sigma.atoms], n_walks)
    if np.any(counts == 0):
        raise ValueError("n_walks too small to cover every start atom")
    workers = max(1, int(workers))
    bgs = worker_bit_generators(seed, len(sigma.atoms) * workers)
    estimate = 0.0
    for ai, atom in enumerate(sigma.atoms):
        per_worker = allocate(int(counts[ai]), workers)
        calls = [
            (lambda bg=bgs[ai * workers + w], c=c:
             backend.occupation_sums(bg, int(atom.location[0]),
                                     int(atom.location[1]), c, horizon,
                                     site_x, site_y, site_w))
            for w, c in enumerate(per_worker)
        ]
        totals = backend.run_per_worker(calls)
        estimate += atom.weight * (sum(totals) / counts[ai])
    if kernel_value != 0.0:
        relative_error = abs(estimate - kernel_value) / abs(kernel_value)
        calibration = estimate / kernel_value
    else:
        relative_error = 0.0 if estimate == 0.0 else math.inf
        calibration = math.nan
    return OccupationCheckResult(
        float(estimate), float(kernel_value), float(relative_error),
        float(calibration), horizon, n_walks, int(seed), workers,
        tuple(int(c) for c in counts),
    )


# ---------------------------------------------------------------------------
# domain file format
# ---------------------------------------------------------------------------

def write_domain(dom: LatticeDomain, fh):
    fh.write("s,t,role\n")
    for p in dom.interior_order:
        fh.write(f"{p[0]},{p[1]},interior\n")
    for p in dom.boundary_order:
        fh.write(f"{p[0]},{p[1]},boundary\n")


def read_domain(fh) -> LatticeDomain:
    header = fh.readline()
    if not header.strip().startswith("s,t,role"):
        raise ValueError("domain file must start with 's,t,role' header")
    interior, boundary = [], []
    for line in fh:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        s, t, role = line.split(",")
        if role == "interior":
            interior.append((int(s), int(t)))
        elif role == "boundary":
            boundary.append((int(s), int(t)))
        else:
            raise ValueError(f"unknown role {role!r}")
    return LatticeDomain(interior, boundary or None)
