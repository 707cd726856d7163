"""Even profile functions written as functions of z = k*rho**2.

``sin(a rho)/(a rho)`` (k > 0) and ``sinh(a rho)/(a rho)`` (k < 0) are the same
entire function of ``z``, so one power series covers both signs of k and the
flat limit. Closed forms are used away from z = 0, the series near it.
"""

import math

from numpy.polynomial import Polynomial

_NTERMS = 16
# switch-over points; truncation error of the series is far below 1 ulp there
_SERIES_Z = 0.25
_ARC_SERIES_Z = 1e-2

_S = Polynomial([(-1) ** n / math.factorial(2 * n + 1) for n in range(_NTERMS)])
_dS = _S.deriv()
_P = Polynomial((_S * _S).coef[:_NTERMS])
# q(z) = (1 - S(z)**2) / z
_Q = Polynomial(-_P.coef[1:])
_dQ = _Q.deriv()
_T = Polynomial([math.factorial(2 * n) / (4 ** n * math.factorial(n) ** 2 * (2 * n + 1))
                 for n in range(12)])


def sinc_z(z):
    """S(z) = sin(sqrt z)/sqrt z, continued as sinh(sqrt -z)/sqrt -z for z < 0."""
    if abs(z) < _SERIES_Z:
        return float(_S(z))
    if z > 0:
        s = math.sqrt(z)
        return math.sin(s) / s
    s = math.sqrt(-z)
    return math.sinh(s) / s


def sinc_z_deriv(z):
    """dS/dz."""
    if abs(z) < _SERIES_Z:
        return float(_dS(z))
    if z > 0:
        s = math.sqrt(z)
        return (s * math.cos(s) - math.sin(s)) / (2.0 * s ** 3)
    s = math.sqrt(-z)
    return -(s * math.cosh(s) - math.sinh(s)) / (2.0 * s ** 3)


def defect_z(z):
    """q(z) = (1 - S(z)**2)/z, regular at z = 0 with q(0) = 1/3."""
    if abs(z) < _SERIES_Z:
        return float(_Q(z))
    S = sinc_z(z)
    return (1.0 - S * S) / z


def defect_z_deriv(z):
    if abs(z) < _SERIES_Z:
        return float(_dQ(z))
    S = sinc_z(z)
    return -(2.0 * S * sinc_z_deriv(z) + defect_z(z)) / z


def arcsinc_z(z):
    """T(z) = arcsin(sqrt z)/sqrt z, continued as arcsinh(sqrt -z)/sqrt -z.

    Defined for z < 1; T(z) = 1 at z = 0.
    """
    if abs(z) < _ARC_SERIES_Z:
        return float(_T(z))
    if z > 0:
        s = math.sqrt(z)
        return math.asin(s) / s
    s = math.sqrt(-z)
    return math.asinh(s) / s


__all__ = ["sinc_z", "sinc_z_deriv", "defect_z", "defect_z_deriv", "arcsinc_z"]
