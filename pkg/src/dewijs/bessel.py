"""Modified Bessel function K0 without external special-function dependencies.

Two regimes, crossing over at x = 2:

* x <= 2: the classical ascending series
      K0(x) = -(log(x/2) + gamma) I0(x) + sum_{k>=1} (x^2/4)^k / (k!)^2 * H_k
  with H_k the harmonic numbers; terms fall like 1/(k!)^2 so ~20 terms reach
  machine precision.

* x > 2: Temme's continued fraction (CF2) for the irregular solution,
      K0(x) = sqrt(pi/(2x)) exp(-x) / S,
  where S is accumulated from the Steed/Thompson-Barnett recurrence.  Unlike
  the plain large-argument asymptotic series, whose optimal truncation error
  is ~exp(-2x) and therefore cannot reach 1e-12 near the crossover, CF2
  converges to machine precision uniformly on (2, inf).

Relative accuracy is ~1e-14 everywhere; tests pin 1e-12 against an
independent quadrature of the integral representation.
"""

import math

_EULER_GAMMA = 0.5772156649015328606
_MAX_ITER = 400
_EPS = 1e-16


def bessel_i0(x):
    """Ascending series for I0; adequate for |x| <= 2 where it is needed."""
    x = float(x)
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, _MAX_ITER):
        term *= q / (k * k)
        total += term
        if term < _EPS * total:
            break
    return total


def _k0_series(x):
    q = 0.25 * x * x
    term = 1.0
    harmonic = 0.0
    total = 0.0
    for k in range(1, _MAX_ITER):
        term *= q / (k * k)
        harmonic += 1.0 / k
        contrib = term * harmonic
        total += contrib
        if contrib < _EPS * (abs(total) + 1.0):
            break
    return -(math.log(0.5 * x) + _EULER_GAMMA) * bessel_i0(x) + total


def _k0_cf2(x):
    # Temme's CF2 at order nu=0 (a1 = 1/4 - nu^2).
    a1 = 0.25
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1 = 0.0
    q2 = 1.0
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAX_ITER):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    return math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s


def bessel_k0(x):
    """K0(x) for scalar x > 0."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"bessel_k0 requires x > 0, got {x!r}")
    if x <= 2.0:
        return _k0_series(x)
    return _k0_cf2(x)
