"""Generalized covariance kernels and spectral densities.

Four kernel kinds are supported, all returned as generalized covariances
(the sign convention that makes them positive semidefinite on contrasts):

* ``log``                -log||p - q||, the de Wijs generalized covariance;
                         zero-separation evaluations use the value-0
                         convention and emit CoincidentPointWarning.
* ``bessel_k0``          K0(a ||p - q||), a > 0, the stationary Markov
                         covariance whose a -> 0 limit recovers log
                         differences; same zero-separation convention.
* ``cell_log``           the unit-cell average of -log distance at integer
                         lags (see cellcov module); finite at lag (0,0).
* ``lattice_potential``  -a(s,t) for the simple-random-walk potential kernel
                         table built by the lattice module; a(0,0) = 0.

The Brownian potential kernel g(x,y) = -log||y-x|| / pi is exposed separately
as :func:`brownian_potential`; kriging weights are unaffected by the factor.

Every kernel accepts an additive shift and a positive scale.  Contrast inner
products are invariant to the shift because contrasts have zero total mass,
which is the computational face of the anchor-independence of the potential
kernel construction.
"""

import math
import warnings
from dataclasses import dataclass, replace

from . import cellcov
from .bessel import bessel_k0
from .contrasts import CELL, LATTICE, POINT, Contrast
from .errors import (CoincidentPointWarning, IncompatibleKernelError,
                     MixedSupportError, PoleAtOriginError)

LOG = "log"
BESSEL_K0 = "bessel_k0"
CELL_LOG = "cell_log"
LATTICE_POTENTIAL = "lattice_potential"

_POINT_KINDS = (LOG, BESSEL_K0, LATTICE_POTENTIAL)


@dataclass(frozen=True)
class Kernel:
    kind: str
    a: float = 0.0          # inverse range of the bessel_k0 kernel
    table: object = None    # potential-kernel table for lattice_potential
    shift: float = 0.0
    scale: float = 1.0

    def shifted(self, c):
        """Same kernel with constant c added to every evaluation."""
        return replace(self, shift=self.shift + c)

    def scaled(self, m):
        """Same kernel with every evaluation multiplied by m > 0."""
        if not m > 0:
            raise ValueError("scale factor must be positive")
        return replace(self, shift=self.shift * m, scale=self.scale * m)


def log_kernel():
    return Kernel(LOG)


def bessel_k0_kernel(a):
    if not a > 0:
        raise ValueError(f"bessel_k0 kernel requires a > 0, got {a!r}")
    return Kernel(BESSEL_K0, a=float(a))


def cell_log_kernel():
    return Kernel(CELL_LOG)


def lattice_potential_kernel(table):
    """Kernel -a(s,t) from a potential-kernel table (lattice module)."""
    return Kernel(LATTICE_POTENTIAL, table=table)


def _integer_lag(dx, dy, kind):
    sx, sy = round(dx), round(dy)
    if abs(dx - sx) > 1e-9 or abs(dy - sy) > 1e-9:
        raise IncompatibleKernelError(
            f"{kind} kernel requires integer lags, got ({dx}, {dy})"
        )
    return int(sx), int(sy)


def _base_value(k, p, q):
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    if k.kind == CELL_LOG:
        return cellcov.cell_cov(*_integer_lag(dx, dy, k.kind))
    if k.kind == LATTICE_POTENTIAL:
        return -k.table.lookup(*_integer_lag(dx, dy, k.kind))
    r2 = dx * dx + dy * dy
    if r2 == 0.0:
        warnings.warn(
            f"{k.kind} kernel evaluated at zero separation; using value 0",
            CoincidentPointWarning, stacklevel=3,
        )
        return 0.0
    if k.kind == LOG:
        return -0.5 * math.log(r2)
    if k.kind == BESSEL_K0:
        return bessel_k0(k.a * math.sqrt(r2))
    raise ValueError(f"unknown kernel kind {k.kind!r}")


def gen_cov(k: Kernel, p, q) -> float:
    """Generalized covariance between locations p and q (symmetric)."""
    return k.scale * _base_value(k, p, q) + k.shift


def brownian_potential(p, q) -> float:
    """Potential kernel of planar Brownian motion, -log||q - p|| / pi."""
    r2 = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
    if r2 == 0.0:
        warnings.warn(
            "brownian potential evaluated at zero separation; using value 0",
            CoincidentPointWarning, stacklevel=2,
        )
        return 0.0
    return -0.5 * math.log(r2) / math.pi


def _check_compat(sigma, nu, k):
    if len(sigma) == 0 or len(nu) == 0:
        return
    if sigma.space != nu.space:
        raise MixedSupportError("contrasts live in different spaces")
    if sigma.support_kind != nu.support_kind:
        raise MixedSupportError("contrasts mix point and cell support")
    kind = sigma.support_kind
    if kind == CELL and k.kind != CELL_LOG:
        raise IncompatibleKernelError(
            f"cell-support contrasts require the cell_log kernel, got {k.kind}"
        )
    if kind == POINT and k.kind == CELL_LOG:
        raise IncompatibleKernelError(
            "point-support contrasts cannot use the cell_log kernel"
        )
    if k.kind == LATTICE_POTENTIAL and sigma.space != LATTICE:
        raise IncompatibleKernelError(
            "lattice_potential kernel requires lattice-space contrasts"
        )


def inner_product(sigma: Contrast, nu: Contrast, k: Kernel) -> float:
    """Bilinear form sum_ij sigma_i nu_j gen_cov(k, x_i, y_j).

    For the de Wijs kernel this is cov(Z_sigma, Z_nu).  Coincident
    cross-pairs under a point kernel contribute the convention value 0 and
    are flagged through CoincidentPointWarning (raised inside gen_cov).
    """
    _check_compat(sigma, nu, k)
    total = 0.0
    for a in sigma.atoms:
        for b in nu.atoms:
            total += a.weight * b.weight * gen_cov(k, a.location, b.location)
    return total


# ---------------------------------------------------------------------------
# spectral densities of the limit diagram
# ---------------------------------------------------------------------------

STATIONARY_AR = "stationary_ar"
INTRINSIC_AR = "intrinsic_ar"
GEN_OU = "gen_ou"
DE_WIJS = "de_wijs"

# the limit-diagram de Wijs entry is (w^2 + e^2)^-1; the covariance-transform
# normalization carries the extra 1/(2 pi).  Both constants are exposed.
DE_WIJS_DIAGRAM_CONSTANT = 1.0
DE_WIJS_COVARIANCE_CONSTANT = 1.0 / (2.0 * math.pi)


@dataclass(frozen=True)
class SpectralModel:
    kind: str
    beta: float = 0.0   # stationary autoregression, 0 <= beta < 1
    alpha: float = 0.0  # generalized Ornstein-Uhlenbeck, alpha > 0


def stationary_ar(beta):
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"stationary_ar requires 0 <= beta < 1, got {beta!r}")
    return SpectralModel(STATIONARY_AR, beta=float(beta))


def intrinsic_ar():
    return SpectralModel(INTRINSIC_AR)


def gen_ou(alpha):
    if not alpha > 0:
        raise ValueError(f"gen_ou requires alpha > 0, got {alpha!r}")
    return SpectralModel(GEN_OU, alpha=float(alpha))


def de_wijs():
    return SpectralModel(DE_WIJS)


def spectral_density(m: SpectralModel, w: float, e: float) -> float:
    """Limit-diagram spectral density of model m at frequency (w, e).

    The two intrinsic models (intrinsic_ar, de_wijs) have a pole at the
    origin and raise PoleAtOriginError there.
    """
    if m.kind == STATIONARY_AR:
        return 1.0 / (1.0 - m.beta
                      + m.beta * (math.sin(0.5 * w) ** 2 + math.sin(0.5 * e) ** 2))
    if m.kind == INTRINSIC_AR:
        s = math.sin(0.5 * w) ** 2 + math.sin(0.5 * e) ** 2
        if s == 0.0:
            raise PoleAtOriginError("intrinsic autoregression density pole at (0,0)")
        return 1.0 / s
    if m.kind == GEN_OU:
        return 1.0 / (m.alpha ** 2 + w * w + e * e)
    if m.kind == DE_WIJS:
        r2 = w * w + e * e
        if r2 == 0.0:
            raise PoleAtOriginError("de Wijs density pole at (0,0)")
        return 1.0 / r2
    raise ValueError(f"unknown spectral model {m.kind!r}")


def de_wijs_spectral_density(w, e, normalization="diagram"):
    """De Wijs density under either exposed normalization constant."""
    base = spectral_density(de_wijs(), w, e)
    if normalization == "diagram":
        return DE_WIJS_DIAGRAM_CONSTANT * base
    if normalization == "covariance":
        return DE_WIJS_COVARIANCE_CONSTANT * base
    raise ValueError(f"unknown normalization {normalization!r}")
