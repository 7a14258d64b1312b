"""Intrinsic kriging for the de Wijs process and its Markov-property checks.

The de Wijs process is the planar generalized Gaussian random field with
logarithmic variogram, indexed by zero-mass signed measures (contrasts).
This package evaluates its generalized covariances, solves the associated
ordinary kriging systems, and verifies numerically that the kriging weights
on enclosing boundaries coincide with first-hitting distributions: the
Poisson kernel for Brownian motion on the disk, and discrete harmonic
measure for the simple random walk on the lattice.
"""

from .backend import active_backend
from .contrasts import (Atom, Contrast, check_finiteness, from_pairs,
                        linear_combine, make_contrast)
from .disk import (discretized_circle_kriging, harmonic_identity_check,
                   poisson_kernel, poisson_normalization, sample_hitting)
from .kernels import (Kernel, SpectralModel, bessel_k0_kernel, cell_log_kernel,
                      de_wijs, gen_cov, gen_ou, inner_product, intrinsic_ar,
                      lattice_potential_kernel, log_kernel, spectral_density,
                      stationary_ar)
from .cellcov import cell_cov
from .kriging import (KrigingProblem, KrigingSolution, reproduce_table1,
                      screening_report, solve_ordinary_kriging)
from .lattice import (LatticeDomain, PotentialKernelTable, box_domain,
                      dynkin_crosscheck, hitting_probabilities,
                      occupation_identity_check, potential_kernel,
                      random_simply_connected_domain)

__version__ = "0.1.0"

__all__ = [
    "Atom", "Contrast", "Kernel", "KrigingProblem", "KrigingSolution",
    "LatticeDomain", "PotentialKernelTable", "SpectralModel",
    "active_backend", "bessel_k0_kernel", "box_domain", "cell_cov",
    "cell_log_kernel", "check_finiteness", "de_wijs",
    "discretized_circle_kriging", "dynkin_crosscheck", "from_pairs",
    "gen_cov", "gen_ou", "harmonic_identity_check", "hitting_probabilities",
    "inner_product", "intrinsic_ar", "lattice_potential_kernel",
    "linear_combine", "log_kernel", "make_contrast",
    "occupation_identity_check", "poisson_kernel", "poisson_normalization",
    "potential_kernel", "random_simply_connected_domain", "reproduce_table1",
    "sample_hitting", "screening_report", "solve_ordinary_kriging",
    "spectral_density", "stationary_ar",
]
