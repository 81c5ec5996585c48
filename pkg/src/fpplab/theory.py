"""Closed-form quantities for first-passage percolation on the complete
graph with i.i.d. edge weights E^{-s}, where E is a standard exponential
and s > 0.

Everything here is an explicit formula: the path cost scale g_s, its
integer minimizer (the limiting hopcount), the tie parameters where two
hopcounts compete, the left-tail coefficient a_k of a k-term weight sum,
the centering sequence for the minimal weight, and the resulting
extreme-value survival function. Heavy numerics live in `numerics`; this
module must stay cheap enough to call in tight loops.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

SQRT2PI = math.sqrt(2.0 * math.pi)

# Relative gap on cost-scale values below which two integer minimizers are
# treated as tied. A floating-point s never hits a tie parameter exactly;
# callers wanting tie behavior should construct s via tie_point(j).
TIE_REL_TOL = 1e-9


def _check_s(s: float) -> float:
    s = float(s)
    if not math.isfinite(s) or s <= 0.0:
        raise DomainError(f"disorder parameter must be positive, got {s}")
    return s


@dataclass(frozen=True)
class Disorder:
    """Weight-law parameter: edge weight is E^{-s} with E ~ Exp(1).

    Small s means weights cluster near 1 (weak disorder); large s
    stretches the law across many orders of magnitude. The reciprocal
    p = 1/s appears in most tail formulas, so it is exposed as a property.
    """

    s: float

    def __post_init__(self):
        _check_s(self.s)

    @property
    def p(self) -> float:
        return 1.0 / self.s


def weight_scale(s: float, x: float) -> float:
    """Cost scale g_s(x) = x^{s+1} / (x-1)^s of an x-edge route, x >= 1.

    The minimal weight between two fixed vertices concentrates around
    g_s(k) / (log n)^s where k minimizes this function over the integers.
    At x = 1 the scale diverges (a direct edge does not shrink with n),
    so the value is +inf there. Evaluated in log form so large s and x
    near 2 cannot overflow.
    """
    s = _check_s(s)
    x = float(x)
    if x < 1.0:
        raise DomainError(f"route length must be >= 1, got {x}")
    if x == 1.0:
        return math.inf
    return math.exp((s + 1.0) * math.log(x) - s * math.log(x - 1.0))


def tie_point(j: int) -> float:
    """The parameter s at which j-edge and (j+1)-edge routes tie.

    Solves g_s(j) = g_s(j+1):  s_j = log(1 + 1/j) / log(1 + 1/(j^2 - 1)).
    Strictly inside (j-1, j) for every j >= 2.
    """
    j = int(j)
    if j < 2:
        raise DomainError(f"tie index must be >= 2, got {j}")
    return math.log1p(1.0 / j) / math.log1p(1.0 / (j * j - 1.0))


def limit_hops(s: float) -> int:
    """The integer minimizer k*(s) of the cost scale.

    For s <= 1 the scale is increasing on {2, 3, ...}, so k* = 2. For
    s > 1 the continuous minimizer sits at x = s + 1 and the integer
    minimizer is one of its two neighbors. On a tie (see near_tie) the
    smaller hopcount is returned.
    """
    s = _check_s(s)
    if s <= 1.0:
        return 2
    lo = max(2, math.floor(s + 1.0))
    hi = lo + 1
    return lo if weight_scale(s, lo) <= weight_scale(s, hi) else hi


def near_tie(s: float, rel_tol: float = TIE_REL_TOL) -> int | None:
    """Return j if s sits on the tie between hopcounts j and j+1, else None.

    Detection compares the two candidate cost-scale values at relative
    tolerance rel_tol; exact ties are measure-zero in floating point.
    """
    s = _check_s(s)
    if s <= 1.0:
        return None
    lo = max(2, math.floor(s + 1.0))
    g_lo = weight_scale(s, lo)
    g_hi = weight_scale(s, lo + 1)
    if abs(g_lo - g_hi) <= rel_tol * max(g_lo, g_hi):
        return lo
    return None


@lru_cache(maxsize=4096)
def tail_coefficient_log(s: float, k: int) -> float:
    """log a_k, the prefactor of the left tail of a k-term weight sum.

    The tail of F_k (the CDF of E_1^{-s} + ... + E_k^{-s} near zero) is
        F_k(z) = a_k z^{-(k-1)p/2} exp(-k^{p+1} z^{-p}) (1 + o(1)),
    with p = 1/s. The coefficient satisfies a_1 = 1 and the recursion

        a_k = a_{k-1} * p*sqrt(2*pi)/sqrt(p*(p+1))
              * (k/(k-1))^{(k-2)p/2} * k^{(p-1)/2} * (k-1)^{1/2},

    equivalently in closed form

        a_k = (2*pi*p/(p+1))^{(k-1)/2} * k^{(p(k-1)-1)/2}.

    The recursion is what a Laplace expansion of the defining convolution
    produces step by step; the closed form telescopes it. Both are
    implemented (the closed form doubles as a unit-test cross-check) and
    the quadrature oracle in `numerics` validates the value independently.
    Accumulated in log space; cached per (s, k).
    """
    s = _check_s(s)
    k = int(k)
    if k < 1:
        raise DomainError(f"term count must be >= 1, got {k}")
    p = 1.0 / s
    la = 0.0
    step_const = math.log(p * SQRT2PI / math.sqrt(p * (p + 1.0)))
    for m in range(2, k + 1):
        la += (step_const
               + 0.5 * (m - 2) * p * math.log(m / (m - 1.0))
               + 0.5 * (p - 1.0) * math.log(m)
               + 0.5 * math.log(m - 1.0))
    return la


def tail_coefficient(s: float, k: int) -> float:
    """a_k in linear scale; see tail_coefficient_log."""
    return math.exp(tail_coefficient_log(s, k))


def tail_coefficient_closed_log(s: float, k: int) -> float:
    """log a_k via the telescoped closed form (cross-check route)."""
    s = _check_s(s)
    k = int(k)
    if k < 1:
        raise DomainError(f"term count must be >= 1, got {k}")
    if k == 1:
        return 0.0
    p = 1.0 / s
    return (0.5 * (k - 1) * math.log(2.0 * math.pi * p / (p + 1.0))
            + 0.5 * (p * (k - 1) - 1.0) * math.log(k))


def tail_log_cdf(s: float, k: int, z) -> float | np.ndarray:
    """Leading-order log F_k(z) deep in the left tail.

    log of a_k z^{-(k-1)p/2} exp(-k^{p+1} z^{-p}). Useful as a seed for
    quantile inversion and as the comparison target for the quadrature
    oracle; not accurate for moderate z.
    """
    s = _check_s(s)
    p = 1.0 / s
    z = np.asarray(z, dtype=float)
    out = (tail_coefficient_log(s, k)
           - 0.5 * (k - 1) * p * np.log(z)
           - k ** (p + 1.0) * np.power(z, -p))
    return float(out) if out.ndim == 0 else out


def gumbel_sf(s: float, k: int, t) -> float | np.ndarray:
    """Limit survival function exp(-a_k e^t) of the standardized minimum.

    Applies both to the minimal k-edge route weight in the graph and to
    the minimum of n^{k-1} independent k-term sums, after centering by
    centering_value; t is the standardized coordinate.
    """
    a = tail_coefficient(s, k)
    t = np.asarray(t, dtype=float)
    out = np.exp(-a * np.exp(t))
    return float(out) if out.ndim == 0 else out


def centering_value(s: float, k: int, log_n: float, t: float) -> float:
    """The weight threshold z_n(t) whose exceedance probability tends to
    gumbel_sf(s, k, t).

    z_n(t) = g/L^s + (g/L^{s+1}) * ( -log L/(2p) + t/((k-1)p) + (log g)/2 )

    with L = log n and g = weight_scale(s, k). Takes log n rather than n
    so astronomically large scales stay representable.
    """
    s = _check_s(s)
    if log_n <= 1.0:
        raise DomainError(f"log n must exceed 1, got {log_n}")
    p = 1.0 / s
    g = weight_scale(s, k)
    lead = g / log_n ** s
    corr = (g / log_n ** (s + 1.0)) * (
        -math.log(log_n) / (2.0 * p)
        + t / ((k - 1) * p)
        + 0.5 * math.log(g))
    return lead + corr


def standardize_weight(s: float, k: int, log_n: float, w) -> float | np.ndarray:
    """Invert centering_value: the t with centering_value(s,k,log_n,t) = w.

    Exact affine inverse, so standardize(center(t)) = t to rounding.
    """
    s = _check_s(s)
    if log_n <= 1.0:
        raise DomainError(f"log n must exceed 1, got {log_n}")
    p = 1.0 / s
    g = weight_scale(s, k)
    lead = g / log_n ** s
    scale = g / log_n ** (s + 1.0)
    base = -math.log(log_n) / (2.0 * p) + 0.5 * math.log(g)
    w = np.asarray(w, dtype=float)
    out = ((w - lead) / scale - base) * (k - 1) * p
    return float(out) if out.ndim == 0 else out


def correlated_tail_exponent(s: float, k: int, j: int) -> float:
    """Joint left-tail rate for two k-edge routes sharing j edges.

    -log P(both sums <= z) grows like C * z^{-p} with
    C = ((k-j) nu + j)^{p+1}, nu = 2^{1/(p+1)}: the optimal cost splits
    the budget between the shared block (paid once) and the two private
    blocks (paid twice, hence the nu premium).
    """
    s = _check_s(s)
    k, j = int(k), int(j)
    if not (1 <= j <= k):
        raise DomainError(f"shared-edge count must be in [1, {k}], got {j}")
    p = 1.0 / s
    nu = 2.0 ** (1.0 / (p + 1.0))
    return ((k - j) * nu + j) ** (p + 1.0)


@dataclass(frozen=True)
class PoissonCondition:
    """Diagnostics for the overlap-penalty inequality behind the Poisson
    count approximation.

    margin is u(j/k) where
        u(x) = ((1-x) nu + x)^{p+1} - 2 + x k/(k-1),
    and holds means margin > 0: a pair of k-edge routes overlapping in j
    edges is exponentially rarer than the crude union bound needs.
    slope_at_zero is u'(0), useful when inspecting where the inequality
    is tightest.
    """

    s: float
    k: int
    j: int
    margin: float
    holds: bool
    slope_at_zero: float

    def profile(self, x) -> float | np.ndarray:
        """u(x) on [0, 1]; the condition evaluates it at x = j/k."""
        p = 1.0 / self.s
        nu = 2.0 ** (1.0 / (p + 1.0))
        x = np.asarray(x, dtype=float)
        out = (np.power((1.0 - x) * nu + x, p + 1.0) - 2.0
               + x * self.k / (self.k - 1.0))
        return float(out) if out.ndim == 0 else out


def poisson_condition(s: float, k: int, j: int) -> PoissonCondition:
    """Evaluate the overlap-penalty margin for (s, k, j).

    Defined for s > 1 (below that the route length is pinned at 2 and no
    overlap range exists), k >= 3, and 1 <= j <= k-2.
    """
    s = _check_s(s)
    if s <= 1.0:
        raise DomainError(f"overlap condition needs s > 1, got {s}")
    k, j = int(k), int(j)
    if k < 3:
        raise DomainError(f"route length must be >= 3, got {k}")
    if not (1 <= j <= k - 2):
        raise DomainError(f"overlap must be in [1, {k - 2}], got {j}")
    p = 1.0 / s
    nu = 2.0 ** (1.0 / (p + 1.0))
    x = j / k
    margin = ((1.0 - x) * nu + x) ** (p + 1.0) - (2.0 - j / (k - 1.0))
    du0 = (p + 1.0) * nu ** p * (1.0 - nu) + k / (k - 1.0)
    return PoissonCondition(s=s, k=k, j=j, margin=margin,
                            holds=margin > 0.0, slope_at_zero=du0)
