"""Independent numerical oracles for the weight-sum distribution F_k.

The centerpiece is an iterated-convolution tabulation of log F_k, where
F_k is the CDF of E_1^{-s} + ... + E_k^{-s}. Everything is carried in log
space end to end: the probabilities of interest routinely sit below
1e-100, far under the linear floating-point floor. On top of the table
sit a quantile inverter for minima of astronomically many independent
copies, a joint-tail integral for routes sharing edges, and the
tie-parameter hop-split probability.

Nothing in the convolution pipeline assumes the closed-form tail
coefficient from `theory`; the deep-tail representation subtracts and
re-adds the same analytic envelope, so tabulated values are pure
quadrature output. That independence is what makes the cross-checks
between the two modules meaningful.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.special import roots_legendre

from . import theory
from .errors import DomainError, InversionError, QuadratureError

_TRANSFORMS = ("log-substitution", "linear")


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls for the adaptive panel quadrature.

    node_count is the initial total node budget of a refinement pass
    (panels of 16 Gauss-Legendre nodes; refinement doubles the panel
    count until two passes agree within tolerance). transform selects the
    integration coordinate: "log-substitution" integrates in log t, which
    resolves the boundary-layer structure of these integrands and is the
    default; "linear" integrates in t directly and is kept as a
    cross-checking fallback.
    """

    node_count: int = 128
    tolerance: float = 1e-9
    transform: str = "log-substitution"

    def __post_init__(self):
        if self.node_count < 32:
            raise DomainError(
                f"node_count must be >= 32, got {self.node_count}")
        if not (0.0 < self.tolerance <= 1e-3):
            raise DomainError(
                f"tolerance must lie in (0, 1e-3], got {self.tolerance}")
        if self.transform not in _TRANSFORMS:
            raise DomainError(
                f"transform must be one of {_TRANSFORMS}, "
                f"got {self.transform!r}")


DEFAULT_SPEC = QuadratureSpec()

_GL_NODES = 16
_GL_X, _GL_W = roots_legendre(_GL_NODES)
_MAX_PANELS = 2048
# convergence floor: below this absolute gap, panel doubling has hit
# rounding noise of the log-sum-exp accumulation
_ABS_FLOOR = 3e-13


def _s_of(d) -> float:
    if isinstance(d, theory.Disorder):
        return d.s
    return theory._check_s(d)


def _log_integral(log_f, t_hi: float, s: float, spec: QuadratureSpec,
                  extra_probes=()) -> float:
    """log of the integral of exp(log_f) over (0, t_hi).

    The integrand is located by probing (a geometric ladder down from
    t_hi plus caller-supplied structured probe sets), then integrated
    over the probe-supported window with panel-doubled Gauss-Legendre in
    the coordinate chosen by spec.transform.
    """
    span = 45.0 + 40.0 * s
    probes = t_hi * np.exp(np.linspace(-span, 0.0, 900))
    for e in extra_probes:
        e = np.asarray(e, dtype=float)
        e = e[(e > 0.0) & (e <= t_hi)]
        if len(e):
            probes = np.concatenate([probes, e])
    probes = np.unique(probes)
    le = log_f(probes)
    le = np.where(np.isfinite(le), le, -np.inf)
    m = float(np.max(le))
    if m == -math.inf:
        return -math.inf
    keep = np.flatnonzero(le > m - 45.0)
    lo = probes[max(keep[0] - 1, 0)]
    hi = probes[min(keep[-1] + 1, len(probes) - 1)]

    log_coord = spec.transform == "log-substitution"
    if log_coord:
        ulo, uhi = math.log(lo), math.log(hi)
    else:
        ulo, uhi = lo, hi
    wide = hi / lo > 50.0
    panels = max(2, spec.node_count // _GL_NODES)
    prev_val = None
    while panels <= _MAX_PANELS:
        if log_coord or not wide:
            edges = np.linspace(ulo, uhi, panels + 1)
        else:
            # no substitution, but grade the panel edges geometrically
            # so a peak far below hi still gets resolved
            edges = np.exp(np.linspace(math.log(lo), math.log(hi),
                                       panels + 1))
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        u = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        lw = np.log((half[:, None] * _GL_W[None, :]).ravel())
        if log_coord:
            t = np.exp(u)
            le = log_f(t) + u + lw
        else:
            le = log_f(u) + lw
        le = np.where(np.isfinite(le), le, -np.inf)
        mm = float(np.max(le))
        if mm == -math.inf:
            return -math.inf
        val = mm + math.log(float(np.sum(np.exp(le - mm))))
        if prev_val is not None and abs(val - prev_val) <= max(
                spec.tolerance * abs(val), _ABS_FLOOR):
            return val
        prev_val = val
        panels *= 2
    raise QuadratureError(
        f"panel refinement did not converge (upper limit {t_hi:.6g}, "
        f"last value {prev_val})")


class _CdfTable:
    """Tabulated log F_k over a tail window, built by iterated convolution.

    Each level j in 2..k is tabulated on a depth grid in v = w^{-p}
    (deeper v = deeper tail) by convolving the single-term density
    against level j-1:

        F_j(w) = int_0^{w/2} f_1(t) F_{j-1}(w-t) dt
               + int_0^{w/2} F_{j-1}(y) f_1(w-y) dy,

    the symmetric split keeping each piece's structured endpoint at its
    own integration origin. Storage is two cubic splines per level: a
    shallow branch of log F against log v on v < v_split, and a deep
    branch holding the residual against the analytic tail envelope on
    v >= v_split (residual frozen beyond the built depth). The envelope
    is subtracted and re-added exactly, so the represented values carry
    no information from the closed-form coefficient.
    """

    V_MIN = 1e-8
    V_SPLIT = 4.0
    N_SHALLOW = 500
    N_DEEP = 900

    def __init__(self, s: float, k: int, v_max: float,
                 spec: QuadratureSpec = DEFAULT_SPEC):
        self.s, self.k, self.p = s, k, 1.0 / s
        self.spec = spec
        self.v_max = max(float(v_max), 2.0 * self.V_SPLIT)
        if k == 1:
            self._top = None
            return
        top_expo = k ** (self.p + 1.0) * self.v_max
        prev = None
        for j in range(2, k):
            vj = 1.25 * (top_expo + 80.0) / j ** (self.p + 1.0)
            prev = self._build_level(j, vj, prev)
        self._top = self._build_level(k, self.v_max, prev)

    # ---- evaluation ----

    def log_cdf(self, w):
        w = np.asarray(w, dtype=float)
        if self._top is None:
            out = -np.power(w, -self.p)
        else:
            out = self._eval_level(self._top, w)
        return float(out) if out.ndim == 0 else out

    def log_cdf_and_dw(self, w):
        """(log F_k(w), d log F_k / dw); the derivative feeds densities."""
        w = np.asarray(w, dtype=float)
        p = self.p
        if self._top is None:
            lf = -np.power(w, -p)
            dlf = p * np.power(w, -p - 1.0)
        else:
            lf, dlf = self._eval_level(self._top, w, want_slope=True)
        if lf.ndim == 0:
            return float(lf), float(dlf)
        return lf, dlf

    def _eval_level(self, level, w, want_slope=False):
        p = self.p
        j = level["j"]
        v = np.power(w, -p)
        out = np.empty_like(v)
        slope = np.empty_like(v) if want_slope else None
        sh = v < level["v_split"]
        if np.any(sh):
            vs = v[sh]
            vc = np.maximum(vs, level["v_lo"])
            u = np.log(vc)
            val = level["spline_shallow"](u)
            tiny = vs < level["v_lo"]
            if np.any(tiny):
                # below the built range log F is linear in v to first order
                val = np.where(tiny, val * (vs / level["v_lo"]), val)
            out[sh] = val
            if want_slope:
                # d log F / dv: spline slope over v in range, the linear
                # extension's constant rate below it
                dldv = level["spline_shallow"](u, 1) / vc
                if np.any(tiny):
                    c0 = float(level["spline_shallow"](
                        math.log(level["v_lo"])))
                    dldv = np.where(tiny, c0 / level["v_lo"], dldv)
                slope[sh] = dldv * (-p) * vs / w[sh]
        dp = ~sh
        if np.any(dp):
            vd = v[dp]
            vv = np.clip(vd, None, level["v_cap"])
            resid = level["spline_deep"](vv)
            asym = (level["log_a"] + 0.5 * (j - 1) * p * np.log(vd)
                    - j ** (p + 1.0) * vd)
            out[dp] = asym + resid
            if want_slope:
                dresid = np.where(vd <= level["v_cap"],
                                  level["spline_deep"](vv, 1), 0.0)
                dv = (0.5 * (j - 1) * p / vd - j ** (p + 1.0) + dresid)
                slope[dp] = dv * (-p) * vd / w[dp]
        if want_slope:
            return out, slope
        return out

    # ---- construction ----

    def _build_level(self, j, v_need, prev_level):
        s, p = self.s, self.p
        v_split = self.V_SPLIT
        u_grid = np.linspace(math.log(self.V_MIN), math.log(v_split),
                             self.N_SHALLOW)
        v_deep = np.linspace(v_split, max(v_need, v_split * 2.0),
                             self.N_DEEP)
        v_all = np.concatenate([np.exp(u_grid[:-1]), v_deep])
        w_all = np.power(v_all, -s)

        logF = np.empty_like(w_all)
        for i, w in enumerate(w_all):
            logF[i] = self._convolve_one(j, w, prev_level)

        la = theory.tail_coefficient_log(s, j)
        level = {"j": j, "v_split": v_split, "log_a": la,
                 "v_lo": math.exp(u_grid[0]), "v_cap": v_deep[-1]}
        n_sh = self.N_SHALLOW - 1
        # both branches interpolate through the shared seam knot
        level["spline_shallow"] = CubicSpline(
            np.concatenate([np.log(v_all[:n_sh]), [math.log(v_split)]]),
            np.concatenate([logF[:n_sh], [logF[n_sh]]]))
        asym_deep = (la + 0.5 * (j - 1) * p * np.log(v_deep)
                     - j ** (p + 1.0) * v_deep)
        level["spline_deep"] = CubicSpline(v_deep, logF[n_sh:] - asym_deep)
        return level

    def _log_f1(self, t):
        p = self.p
        with np.errstate(divide="ignore", over="ignore"):
            return math.log(p) - (p + 1.0) * np.log(t) - np.power(t, -p)

    def _log_prev(self, prev_level, y):
        if prev_level is None:
            with np.errstate(divide="ignore", over="ignore"):
                return -np.power(y, -self.p)
        return self._eval_level(prev_level, y)

    def _convolve_one(self, j, w, prev_level):
        p, s = self.p, self.s

        def log_integrand_a(t):
            return self._log_f1(t) + self._log_prev(prev_level, w - t)

        def log_integrand_b(y):
            return self._log_prev(prev_level, y) + self._log_f1(w - y)

        # the constrained minimum of the joint exponent puts the single
        # term at w/j and the remaining block at w(1 - 1/j); probe both
        # neighborhoods at the local Laplace width
        v = w ** (-p)
        hpp = p * (p + 1.0) * v * (j ** (p + 2.0)) * (1.0 + 1.0 / (j - 1.0))
        sig_t = w / math.sqrt(hpp)
        grid = np.linspace(-40.0, 40.0, 161)
        mode_f1 = ((p + 1.0) / p) ** (-s)
        loc_a = [w / j + sig_t * grid,
                 mode_f1 * np.exp(np.linspace(-3.0, 3.0, 41))]
        loc_b = [w * (1.0 - 1.0 / j) + sig_t * grid]
        half_w = 0.5 * w
        la = _log_integral(log_integrand_a, half_w, s, self.spec, loc_a)
        lb = _log_integral(log_integrand_b, half_w, s, self.spec, loc_b)
        m = max(la, lb)
        if m == -math.inf:
            raise QuadratureError(
                f"convolution vanished at weight {w:.6g} (level {j})")
        return m + math.log(math.exp(la - m) + math.exp(lb - m))


# ---- table cache ----

_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def _get_table(s: float, k: int, v_need: float,
               spec: QuadratureSpec) -> _CdfTable:
    """Fetch or build the (s, k, spec) table covering depth v_need.

    Lookups are lock-protected; construction happens outside the lock,
    so two threads may occasionally build the same table. The duplicate
    work is accepted in exchange for never blocking readers on a build.
    """
    key = (s, k, spec)
    with _CACHE_LOCK:
        tab = _CACHE.get(key)
    if tab is not None and tab.v_max >= v_need:
        return tab
    v_built = 2.0 ** math.ceil(math.log2(max(v_need, 8.0)))
    tab = _CdfTable(s, k, v_built, spec)
    with _CACHE_LOCK:
        old = _CACHE.get(key)
        if old is None or old.v_max < tab.v_max:
            _CACHE[key] = tab
        else:
            tab = old
    return tab


def clear_cache():
    with _CACHE_LOCK:
        _CACHE.clear()


# ---- public oracles ----

def log_cdf(d, k: int, z, spec: QuadratureSpec | None = None):
    """log F_k(z) by iterated convolution; z scalar or array.

    F_k is the CDF of a sum of k independent E^{-s} terms. The relative
    accuracy of the returned log value follows spec.tolerance.
    """
    s = _s_of(d)
    k = int(k)
    if k < 1:
        raise DomainError(f"term count must be >= 1, got {k}")
    spec = spec or DEFAULT_SPEC
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr <= 0.0):
        raise DomainError("weight threshold must be positive")
    v_need = float(np.max(np.power(z_arr, -1.0 / s))) * 1.05
    tab = _get_table(s, k, v_need, spec)
    out = tab.log_cdf(z_arr)
    return out


def min_quantile(d, k: int, log_m: float, u: float,
                 spec: QuadratureSpec | None = None) -> float:
    """Quantile of the minimum of m independent k-term sums, m = e^{log_m}.

    Returns z with F_k(z) = 1 - (1-u)^{1/m}, the u-quantile of the
    minimum. m enters only through log_m, so scales like n^{k-1} with
    n far beyond integer range are fine. k = 1 inverts the exponential
    law in closed form; k >= 2 root-finds on the tabulated log F_k,
    seeded by inverting the analytic tail envelope.
    """
    s = _s_of(d)
    k = int(k)
    if k < 1:
        raise DomainError(f"term count must be >= 1, got {k}")
    if not (0.0 < u < 1.0):
        raise DomainError(f"u must be in (0,1), got {u}")
    if log_m < 0.0:
        raise DomainError(f"log m must be >= 0, got {log_m}")
    p = 1.0 / s

    # target log F value: log(1 - (1-u)^{1/m}), evaluated stably
    q = math.log1p(-u) * math.exp(-log_m)
    if q < -1e-12:
        target = math.log(-math.expm1(q))
    else:
        target = math.log(-math.log1p(-u)) - log_m

    if k == 1:
        # F_1(z) = exp(-z^{-p});  z = (-target)^{-s}
        return (-target) ** (-s)

    spec = spec or DEFAULT_SPEC
    # seed from the exponent of the tail envelope: k^{p+1} v ~ -target
    v0 = max(-target, 1.0) / k ** (p + 1.0)
    v0 = max(v0, 1e-6)
    tab = _get_table(s, k, v0 * 3.0, spec)

    def f(lv):
        return float(tab.log_cdf(math.exp(-s * lv))) - target

    lo, hi = math.log(v0) - 1.5, math.log(v0) + 1.5
    flo, fhi = f(lo), f(hi)
    grow = 0
    # f decreases in log v (deeper tail, smaller CDF): need flo>0>fhi
    while flo < 0.0 and grow < 60:
        lo -= 1.5
        flo = f(lo)
        grow += 1
    while fhi > 0.0 and grow < 60:
        hi += 1.5
        if math.exp(hi) > tab.v_max:
            tab = _get_table(s, k, math.exp(hi) * 1.1, spec)
        fhi = f(hi)
        grow += 1
    if not (flo >= 0.0 >= fhi):
        raise InversionError(
            f"could not bracket quantile (k={k}, log m={log_m:.3g}, "
            f"u={u:.6g})")
    lv = brentq(f, lo, hi, xtol=1e-13, rtol=8.9e-16)
    return math.exp(-s * lv)


def min_quantile_many(d, k: int, log_m: float, us,
                      spec: QuadratureSpec | None = None) -> np.ndarray:
    """Vectorized min_quantile over an array of probabilities.

    Same contract per element as min_quantile, but inverts the tabulated
    log F_k with damped Newton in log-depth coordinates across the whole
    batch at once; stragglers that have not met 1e-12 accuracy after the
    sweep fall back to the scalar root-finder. Draw-by-draw loops over
    tens of thousands of quantiles are the bottleneck this removes.
    """
    s = _s_of(d)
    k = int(k)
    us = np.asarray(us, dtype=float)
    if np.any((us <= 0.0) | (us >= 1.0)):
        raise DomainError("all u must be in (0,1)")
    if log_m < 0.0:
        raise DomainError(f"log m must be >= 0, got {log_m}")
    p = 1.0 / s

    q = np.log1p(-us) * math.exp(-log_m)
    small = q > -1e-12
    with np.errstate(divide="ignore"):
        targets = np.where(
            small,
            np.log(-np.log1p(-us)) - log_m,
            np.log(-np.expm1(np.where(small, -1.0, q))))

    if k == 1:
        return np.power(-targets, -s)

    spec = spec or DEFAULT_SPEC
    v0 = np.maximum(-targets, 1.0) / k ** (p + 1.0)
    v0 = np.maximum(v0, 1e-6)
    tab = _get_table(s, k, float(np.max(v0)) * 8.0, spec)

    y = np.log(v0)
    w = np.exp(-s * y)
    for _ in range(40):
        lf, dlf = tab.log_cdf_and_dw(w)
        h = lf - targets
        dh = dlf * (-s) * w  # d(log F)/d(log v)
        step = np.clip(h / dh, -2.0, 2.0)
        y = y - step
        w = np.exp(-s * y)
        if float(np.max(np.abs(h))) < 1e-13:
            break
    lf, _ = tab.log_cdf_and_dw(w)
    bad = np.flatnonzero(np.abs(lf - targets) >
                         1e-11 * np.maximum(1.0, np.abs(targets)))
    for i in bad:
        w[i] = min_quantile(s, k, log_m, float(us[i]), spec)
    return w


def log_joint_cdf(d, k: int, j: int, z1: float, z2: float,
                  spec: QuadratureSpec | None = None) -> float:
    """log P(S + A <= z1, S + B <= z2): two k-term routes sharing j terms.

    S is the shared j-term block, A and B are independent (k-j)-term
    blocks. Computed as the one-dimensional integral of the shared-block
    density against the two private-block CDFs. The thresholds must be
    within a factor of two of each other; the tail normalization used
    here degrades outside that window, so it is rejected rather than
    silently extrapolated. j = k collapses to a single route and returns
    log F_k(min(z1, z2)).
    """
    s = _s_of(d)
    k, j = int(k), int(j)
    if not (1 <= j <= k):
        raise DomainError(f"shared count must be in [1, {k}], got {j}")
    if z1 <= 0.0 or z2 <= 0.0:
        raise DomainError("thresholds must be positive")
    ratio = z2 / z1
    if not (0.5 <= ratio <= 2.0):
        raise DomainError(
            f"threshold ratio {ratio:.4g} outside the supported [0.5, 2]")
    spec = spec or DEFAULT_SPEC
    if j == k:
        return float(log_cdf(s, k, min(z1, z2), spec))

    p = 1.0 / s
    zm = min(z1, z2)
    tab_fac = _get_table(s, k - j,
                         float(((zm * 0.15) ** (-p)) * 1.05), spec)
    tab_den = None if j == 1 else _get_table(
        s, j, float(((zm * 0.15) ** (-p)) * 1.05), spec)

    def log_den(t):
        if j == 1:
            with np.errstate(divide="ignore", over="ignore"):
                return (math.log(p) - (p + 1.0) * np.log(t)
                        - np.power(t, -p))
        lf, dl = tab_den.log_cdf_and_dw(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return lf + np.log(np.maximum(dl, 0.0))

    def log_integrand(t):
        return (log_den(t) + tab_fac.log_cdf(z1 - t)
                + tab_fac.log_cdf(z2 - t))

    # Laplace point of the equal-threshold exponent: shared block gets
    # the fraction j/(j + nu(k-j)) of the budget
    nu = 2.0 ** (1.0 / (p + 1.0))
    a_frac = j / (j + nu * (k - j))
    tstar = a_frac * zm
    chi2 = p * (p + 1.0) * (j ** (p + 1.0) * tstar ** (-p - 2.0)
                            + 2.0 * (k - j) ** (p + 1.0)
                            * (zm - tstar) ** (-p - 2.0))
    sig = 1.0 / math.sqrt(chi2)
    grid = np.linspace(-40.0, 40.0, 161)
    probes = [tstar + sig * grid,
              ((p + 1.0) / p) ** (-s) * np.exp(np.linspace(-3.0, 3.0, 41))]
    if z1 != z2:
        probes.append(j / (j + nu * (k - j)) * max(z1, z2) + sig * grid)
    return _log_integral(log_integrand, zm * (1.0 - 1e-12), s, spec,
                         probes)


def hop_split_probability(s_tied: float) -> tuple[float, float]:
    """At a tie parameter, the probabilities that the limiting hopcount
    lands on the lower and upper of the two tied route lengths.

    With j = near_tie(s): two independent competitors with survival
    exp(-a_l e^t), l in {j, j+1}, race after per-edge normalization; the
    lower length wins with probability

        p_floor = int_0^inf a_j (j-1) x^{j-2}
                  exp(-a_j x^{j-1} - a_{j+1} x^j) dx,

    and the complementary integral gives p_ceil. Both are computed
    independently; their sum reproduces 1 only to quadrature accuracy,
    which is part of the contract (checked to 1e-10 by the tests).
    """
    j = theory.near_tie(s_tied)
    if j is None:
        raise DomainError(
            f"s={s_tied!r} is not a tie parameter; construct it via "
            "theory.tie_point")
    a_lo = theory.tail_coefficient(s_tied, j)
    a_hi = theory.tail_coefficient(s_tied, j + 1)

    def floor_integrand(x):
        return (a_lo * (j - 1) * x ** (j - 2)
                * math.exp(-a_lo * x ** (j - 1) - a_hi * x ** j))

    def ceil_integrand(x):
        return (a_hi * j * x ** (j - 1)
                * math.exp(-a_lo * x ** (j - 1) - a_hi * x ** j))

    p_floor = quad(floor_integrand, 0.0, np.inf, epsabs=1e-13,
                   epsrel=1e-12, limit=200)[0]
    p_ceil = quad(ceil_integrand, 0.0, np.inf, epsabs=1e-13,
                  epsrel=1e-12, limit=200)[0]
    return p_floor, p_ceil
