"""Two-sided attractor-dimension estimates.

The upper bound comes from the trace majorant of the linearized evolution:
q(n) <= -gamma n + (B2/sqrt2) sqrt(n/alpha) ||curl g|| / gamma, whose
positive root gives dim <= ||curl g||^2 / (8 pi alpha gamma^4).

The lower bound counts unstable directions of a stationary Kolmogorov flow
at wavenumber s ~ 1/sqrt(alpha) driven with the amplitude of
:func:`bardina.instability.threshold_amplitude`; the count is asymptotic to
the area of the admissible region, and optimizing the product
area(delta) * delta^4 over the region parameter produces the constant
c1 ~ 6.5e-7 multiplying the same ratio ||curl g||^2 / (alpha gamma^4).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import instability
from .inequalities import B2

__all__ = [
    "upper_bound",
    "trace_bound_q",
    "lambda_choice",
    "area_a",
    "lower_bound_constant",
    "lower_bound",
    "DimensionReport",
    "dimension_report",
]

DELTA_MAX = 1.0 / math.sqrt(3.0)
# arithmetic prefactor of the lower-bound constant: (1/8)(21/(110 pi))^2
C1_PREFACTOR = (21.0 / (110.0 * math.pi)) ** 2 / 8.0


def upper_bound(alpha: float, gamma: float, curl_g_norm_sq: float) -> float:
    """dim <= ||curl g||^2 / (8 pi alpha gamma^4).

    Raises:
        ValueError: on non-positive alpha, gamma, or forcing norm.
    """
    if alpha <= 0 or gamma <= 0 or curl_g_norm_sq <= 0:
        raise ValueError("alpha, gamma and ||curl g||^2 must be positive")
    return curl_g_norm_sq / (8.0 * math.pi * alpha * gamma**4)


def trace_bound_q(n, alpha: float, gamma: float, curl_g_norm: float):
    """Analytic majorant of the n-trace of the linearization:
    -gamma*n + (B2/sqrt2) sqrt(n/alpha) ||curl g|| / gamma.

    Its positive root equals :func:`upper_bound` of the same forcing.
    """
    if alpha <= 0 or gamma <= 0 or curl_g_norm < 0:
        raise ValueError("alpha, gamma must be positive, ||curl g|| >= 0")
    narr = np.asarray(n, dtype=np.float64)
    if np.any(narr < 1):
        raise ValueError("n must be >= 1")
    out = -gamma * narr + (B2 / math.sqrt(2.0)) * np.sqrt(narr / alpha) * curl_g_norm / gamma
    return float(out) if np.ndim(n) == 0 else out


def lambda_choice(s: int, delta: float, alpha: float, gamma: float) -> float:
    """Forcing amplitude making every admissible chain unstable; see
    :func:`bardina.instability.threshold_amplitude`."""
    return instability.threshold_amplitude(s, delta, alpha, gamma)


def area_a(delta: float, resolution: int = 1000) -> float:
    """Normalized area of the admissible region (wavenumber s scaled to 1)
    by midpoint quadrature on a resolution x resolution grid.

    The grid spans [delta, 1/sqrt3] x [-1/6, 1/6], so the two straight
    cuts fall on cell edges and only the circular arcs are sampled.
    """
    if not 0.0 < delta < DELTA_MAX:
        raise ValueError("delta must lie in (0, 1/sqrt(3))")
    if resolution < 8:
        raise ValueError("resolution too small")
    ht = (DELTA_MAX - delta) / resolution
    hr = (1.0 / 3.0) / resolution
    t = delta + ht * (np.arange(resolution) + 0.5)
    r = -1.0 / 6.0 + hr * (np.arange(resolution) + 0.5)
    t2 = (t * t)[:, None]
    inside = (t2 + r * r < 1.0 / 3.0) & (t2 + (r - 1.0) ** 2 > 1.0) & (t2 + (r + 1.0) ** 2 > 1.0)
    return float(np.count_nonzero(inside)) * ht * hr


@lru_cache(maxsize=4)
def _optimize_c1(grid_points: int, resolution: int) -> tuple[float, float]:
    deltas = np.linspace(0.05, DELTA_MAX - 0.005, grid_points)
    vals = np.array([area_a(float(d), resolution) * d**4 for d in deltas])
    i = int(vals.argmax())
    lo = deltas[max(i - 1, 0)]
    hi = deltas[min(i + 1, grid_points - 1)]
    # golden-section refinement on the bracket at doubled resolution
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    fine = 2 * resolution

    def score(d: float) -> float:
        return area_a(d, fine) * d**4

    a, b = lo, hi
    c, d = b - inv_phi * (b - a), a + inv_phi * (b - a)
    fc, fd = score(c), score(d)
    for _ in range(40):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = score(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = score(d)
    delta_star = float(0.5 * (a + b))
    return C1_PREFACTOR * score(delta_star), delta_star


def lower_bound_constant(grid_points: int = 160, resolution: int = 1000) -> tuple[float, float]:
    """(c1, delta_star): maximum of area(delta)*delta^4 over the region
    parameter, times the arithmetic prefactor (1/8)(21/(110 pi))^2.

    Coarse grid scan followed by golden-section refinement; results are
    cached per (grid_points, resolution).
    """
    return _optimize_c1(grid_points, resolution)


def lower_bound(alpha: float, gamma: float) -> float:
    """Certified dimension lower bound c1 * ||curl g_s||^2 / (alpha gamma^4)
    for the Kolmogorov forcing at s = ceil(1/sqrt(alpha)) with the
    threshold amplitude at the optimal delta.

    Raises:
        ValueError: if alpha is so large that the admissible region holds
            no lattice points ("no lower bound certified at this alpha").
    """
    if alpha <= 0 or gamma <= 0:
        raise ValueError("alpha and gamma must be positive")
    s = math.ceil(1.0 / math.sqrt(alpha))
    c1, delta_star = lower_bound_constant()
    if s < 4 or not instability.region_lattice(s, delta_star):
        raise ValueError(f"no lower bound certified at this alpha (s={s}: region empty)")
    lam = instability.threshold_amplitude(s, delta_star, alpha, gamma)
    curl_sq = (gamma * lam * s) ** 2
    return c1 * curl_sq / (alpha * gamma**4)


@dataclass(frozen=True)
class DimensionReport:
    """Both dimension estimates for the threshold forcing at one alpha."""

    alpha: float
    gamma: float
    s: int
    curl_g_norm_sq: float
    upper: float
    lower: float
    constant_c1: float
    delta_star: float


def dimension_report(alpha: float, gamma: float) -> DimensionReport:
    """Evaluate both bounds on the same forcing g_s; lower <= upper always
    (their ratio is the alpha-independent constant 8 pi c1)."""
    if alpha <= 0 or gamma <= 0:
        raise ValueError("alpha and gamma must be positive")
    s = math.ceil(1.0 / math.sqrt(alpha))
    c1, delta_star = lower_bound_constant()
    lower = lower_bound(alpha, gamma)  # raises if not certifiable
    lam = instability.threshold_amplitude(s, delta_star, alpha, gamma)
    curl_sq = (gamma * lam * s) ** 2
    return DimensionReport(
        alpha=alpha,
        gamma=gamma,
        s=s,
        curl_g_norm_sq=curl_sq,
        upper=upper_bound(alpha, gamma, curl_sq),
        lower=lower,
        constant_c1=c1,
        delta_star=delta_star,
    )
