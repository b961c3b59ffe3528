"""Adaptive-quadrature oracles for the Gaussian overlap and normalization.

These integrate the raw packet moduli pointwise and serve as an independent
check on the closed forms in :mod:`collapsim.criterion`.  Each axis is
integrated over [min center - 10 sigma_max, max center + 10 sigma_max] after
an affine rescaling that puts the bulk of the product near the origin with
unit width; the rescaling only conditions the integrand, it cannot bias the
result.
"""

from __future__ import annotations

import math
import warnings

from scipy.integrate import IntegrationWarning, quad

from .packets import GaussianPacket

# Beyond this many product-widths from the product center the integrand is
# below exp(-450); truncating there changes nothing at 1e-8 tolerance.
_TAIL_CUT = 42.0

_MIN_SIGMA = 1e-15
_MAX_SIGMA = 1.0


class QuadratureError(RuntimeError):
    """Raised when the adaptive integrator cannot reach the requested accuracy."""


def _axis_quad(c1: float, s1: float, c2: float, s2: float) -> float:
    """Quadrature of one Cartesian factor of |psi_1||psi_2|."""
    s_max = max(s1, s2)
    lo = min(c1, c2) - 10.0 * s_max
    hi = max(c1, c2) + 10.0 * s_max

    # Rescale around the product-Gaussian bulk: location and width of the
    # product are used only as a change of variables.
    ss = s1 * s1 + s2 * s2
    w = s1 * s2 / math.sqrt(ss)
    m = (c1 * s2 * s2 + c2 * s1 * s1) / ss

    u_lo = max((lo - m) / w, -_TAIL_CUT)
    u_hi = min((hi - m) / w, _TAIL_CUT)
    if u_lo >= u_hi:
        return 0.0

    n1 = (2.0 * math.pi * s1 * s1) ** -0.25
    n2 = (2.0 * math.pi * s2 * s2) ** -0.25

    def integrand(u: float) -> float:
        x = m + w * u
        e1 = (x - c1) / s1
        e2 = (x - c2) / s2
        return w * n1 * n2 * math.exp(-0.25 * (e1 * e1 + e2 * e2))

    interior = [u for u in ((c1 - m) / w, (c2 - m) / w, 0.0) if u_lo < u < u_hi]
    with warnings.catch_warnings():
        # roundoff warnings at this tolerance are expected; the returned
        # error estimate is checked explicitly below
        warnings.simplefilter("ignore", IntegrationWarning)
        value, err = quad(
            integrand,
            u_lo,
            u_hi,
            points=sorted(set(interior)) or None,
            epsabs=1e-11,
            epsrel=1e-11,
            limit=200,
        )
    if err > 1e-9:
        raise QuadratureError(
            f"axis quadrature did not converge: estimate {value!r}, error {err!r}, "
            f"centers ({c1}, {c2}), widths ({s1}, {s2})"
        )
    return value


def overlap_integral_quadrature(p1: GaussianPacket, p2: GaussianPacket) -> float:
    """Numerical integral of |psi_1| * |psi_2| over all space.

    Widths must lie within [1e-15, 1] m so the rescaled integrand stays
    well conditioned.  Agrees with the analytic overlap to 1e-8 absolute.
    """
    for s in p1.sigma + p2.sigma:
        if not (_MIN_SIGMA <= s <= _MAX_SIGMA):
            raise ValueError(f"widths must lie within [{_MIN_SIGMA}, {_MAX_SIGMA}] m, got {s}")
    out = 1.0
    for axis in range(3):
        out *= _axis_quad(
            p1.center[axis], p1.sigma[axis], p2.center[axis], p2.sigma[axis]
        )
    return out


def norm_quadrature(p: GaussianPacket) -> float:
    """Numerical integral of |psi|^2 over all space (should be 1)."""
    for s in p.sigma:
        if not (_MIN_SIGMA <= s <= _MAX_SIGMA):
            raise ValueError(f"widths must lie within [{_MIN_SIGMA}, {_MAX_SIGMA}] m, got {s}")
    out = 1.0
    for c, s in zip(p.center, p.sigma):
        norm = (2.0 * math.pi * s * s) ** -0.5

        def integrand(u: float) -> float:
            return s * norm * math.exp(-0.5 * u * u)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            value, err = quad(integrand, -_TAIL_CUT, _TAIL_CUT, epsabs=1e-11, limit=200)
        if err > 1e-9:
            raise QuadratureError(f"norm quadrature did not converge for sigma={s}")
        out *= value
    return out
