"""Long-run variance estimation for U-statistics and GL-statistics.

The U-statistic estimator is the weighted autocovariance sum

    sigma2_hat = sum_{r=-(n-1)}^{n-1} kappa(|r|/b_n) * rho_hat(r),
    rho_hat(r) = (1/n) sum_{i=1}^{n-|r|} ghat_1(X_i) ghat_1(X_{i+|r|}),

with the denominator 1/n at every lag.  The GL version replaces ghat_1
by Ahat_1, the empirical first Hoeffding projection of the plug-in
influence kernel

    A(x_1..x_m) = -integral (1[h <= y] - H_n(y)) J(H_n(y)) dy
                + sum_i a_i (p_i - 1[h <= xi_hat_{p_i}]) / hhat(xi_hat_{p_i}).

Because H_n is a step function, the integral term is a finite sum over
sorted kernel values and is computed exactly (no quadrature).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, sqrt
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.stats import norm

from .errors import DegenerateDensityError, InsufficientDataError
from .gl import GLSpec, gl_statistic
from .kernels import KernelSpec, eval_kernel, eval_kernel_rows
from .ustat import (
    DEFAULT_ENUM_CAP,
    KernelValueSet,
    _g1_denominators,
    _rows_with_first,
    as_sample,
    g1_hat_all,
    kernel_values,
)


def weight_bartlett(t: float) -> float:
    """Bartlett weight kappa(t) = (1 - t) for 0 <= t <= 1, else 0."""
    if t < 0:
        raise ValueError(f"lag ratio must be >= 0, got {t}")
    return 1.0 - t if t <= 1.0 else 0.0


@dataclass(frozen=True)
class WeightFunction:
    """Lag weight kappa for the autocovariance sum."""

    kind: str
    eval_one: Callable[[float], float]

    @staticmethod
    def bartlett() -> "WeightFunction":
        return WeightFunction(kind="bartlett", eval_one=weight_bartlett)

    @staticmethod
    def custom(name: str, fn: Callable[[float], float]) -> "WeightFunction":
        return WeightFunction(kind=name, eval_one=fn)

    def __call__(self, t: float) -> float:
        return float(self.eval_one(t))


def default_bandwidth(n: int) -> int:
    """floor(n^(1/3)), >= 1; satisfies b_n -> inf, b_n/sqrt(n) -> 0."""
    if n < 2:
        raise InsufficientDataError(f"bandwidth needs n >= 2, got {n}")
    b = max(1, int(round(n ** (1.0 / 3.0))))
    while b ** 3 > n:
        b -= 1
    while (b + 1) ** 3 <= n:
        b += 1
    return max(1, b)


@dataclass(frozen=True)
class BandwidthPolicy:
    """Produces the bandwidth b_n: fixed(b), power_law(c, e) -> c * n^e,
    or auto -> floor(n^(1/3))."""

    kind: str = "auto"
    b: float = 0.0
    c: float = 1.0
    e: float = 1.0 / 3.0

    @staticmethod
    def fixed(b: float) -> "BandwidthPolicy":
        if b <= 0:
            raise ValueError(f"bandwidth must be > 0, got {b}")
        return BandwidthPolicy(kind="fixed", b=float(b))

    @staticmethod
    def power_law(c: float, e: float = 1.0 / 3.0) -> "BandwidthPolicy":
        if c <= 0 or not 0 < e < 0.5:
            raise ValueError("power law needs c > 0 and 0 < e < 1/2")
        return BandwidthPolicy(kind="power_law", c=c, e=e)

    @staticmethod
    def auto() -> "BandwidthPolicy":
        return BandwidthPolicy(kind="auto")

    def resolve(self, n: int) -> float:
        if self.kind == "fixed":
            return self.b
        if self.kind == "power_law":
            return self.c * n ** self.e
        if self.kind == "auto":
            return float(default_bandwidth(n))
        raise ValueError(f"unknown bandwidth policy {self.kind!r}")


@dataclass(frozen=True)
class LrvConfig:
    """Configuration for long-run variance estimation."""

    weight: WeightFunction = field(default_factory=WeightFunction.bartlett)
    bandwidth: BandwidthPolicy = field(default_factory=BandwidthPolicy.auto)
    density_halfwidth_c: float = 0.5
    normalization: str = "combinatorial"


def _weighted_autocov(g: np.ndarray, cfg: LrvConfig, b: float) -> float:
    """sum_r kappa(|r|/b) rho_hat(r) with rho_hat(r) = (1/n) sum g_i g_{i+r}.

    Summation order is lag-major with ascending index, so the result is
    independent of any internal parallelism.
    """
    n = g.size
    total = cfg.weight(0.0) * float(np.dot(g, g)) / n
    for r in range(1, n):
        w = cfg.weight(r / b)
        if w == 0.0:
            if cfg.weight.kind == "bartlett":
                break
            continue
        total += 2.0 * w * float(np.dot(g[:-r], g[r:])) / n
    return total


def lrv_ustat(sample, kernel: KernelSpec,
              cfg: Optional[LrvConfig] = None,
              cap: int = DEFAULT_ENUM_CAP) -> float:
    """Long-run variance estimate for a U-statistic.

    Returned raw: may be negative for weights without the Bartlett
    positive-semidefiniteness property.
    """
    cfg = cfg or LrvConfig()
    x = as_sample(sample)
    g1 = g1_hat_all(x, kernel, normalization=cfg.normalization, cap=cap)
    b = cfg.bandwidth.resolve(x.size)
    return _weighted_autocov(g1, cfg, b)


def density_at_uquantile(sample, kernel: KernelSpec, p: float,
                         cfg: Optional[LrvConfig] = None,
                         cap: int = DEFAULT_ENUM_CAP,
                         kvs: Optional[KernelValueSet] = None) -> float:
    """Finite-difference density of H_n at the empirical U-quantile:

        hhat(xi_p) = (H_n(xi_p + d) - H_n(xi_p - d)) / (2 d),
        d = c * IQR(kernel values) * n^(-1/5).
    """
    cfg = cfg or LrvConfig()
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    x = as_sample(sample)
    if kvs is None:
        kvs = kernel_values(x, kernel, cap=cap)
    xi = kvs.quantile(p)
    iqr = kvs.quantile(0.75) - kvs.quantile(0.25)
    delta = cfg.density_halfwidth_c * iqr * x.size ** (-0.2)
    if delta <= 0.0:
        raise DegenerateDensityError(
            "kernel-value interquartile range is zero; H_n is (locally) flat"
        )
    dens = (kvs.cdf(xi + delta) - kvs.cdf(xi - delta)) / (2.0 * delta)
    if dens <= 0.0 or not np.isfinite(dens):
        raise DegenerateDensityError(
            f"flat H_n around the {p}-quantile; widen the halfwidth "
            f"(got density {dens} with halfwidth {delta})"
        )
    return float(dens)


@dataclass(frozen=True)
class PluginContext:
    """Precomputed empirical surrogates for the influence kernel A:
    sorted kernel values (for H_n), plug-in quantiles xi_hat_{p_i},
    density estimates there, and the tabulated integral term."""

    kvs: KernelValueSet
    spec: GLSpec
    quantiles: Tuple[float, ...]
    densities: Tuple[float, ...]
    # suffix[r] = sum_{k >= r} (w_{k+1} - w_k) J(k/N), 1-based r
    _suffix: np.ndarray
    _k0: float
    _j_at_zero: float
    # sum of A over the sorted kernel values, cached for the Ahat_1
    # centering term (filled in by build_plugin)
    _a_sum_kernel_values: float = float("nan")
    # when J == c is constant the integral term collapses to
    # c * (v - mean(kernel values)); (c, mean) or None
    _linear_shortcut: Optional[Tuple[float, float]] = None

    def a_of_values(self, v: np.ndarray) -> np.ndarray:
        """Plug-in influence kernel A as a function of the kernel value."""
        v = np.asarray(v, dtype=float)
        out = np.zeros_like(v)
        if self._linear_shortcut is not None:
            c, mean_w = self._linear_shortcut
            out += c * (v - mean_w)
        elif self._suffix.size:
            w = self.kvs.sorted_values
            # r(v): first 1-based index k with w_k >= v.  Random-order
            # keys make searchsorted cache-hostile, so large batches are
            # ranked through a sort.
            if v.size > 65536:
                order = np.argsort(v, kind="stable")
                r = np.empty(v.size, dtype=np.intp)
                r[order] = np.searchsorted(w, v[order], side="left")
                r += 1
            else:
                r = np.searchsorted(w, v, side="left") + 1
            out -= self._suffix[np.minimum(r, self._suffix.size - 1)] - self._k0
            if self._j_at_zero != 0.0:
                # below the smallest kernel value H_n == 0, so the
                # integrand is 1[v <= y] * J(0) on [v, w_1)
                out -= self._j_at_zero * np.maximum(w[0] - v, 0.0)
        for (a, p), xi, dens in zip(self.spec.discrete, self.quantiles,
                                    self.densities):
            out += a * (p - (v <= xi)) / dens
        return out

    def a_of_value(self, v: float) -> float:
        return float(self.a_of_values(np.array([v]))[0])


def build_plugin(sample, spec: GLSpec, cfg: Optional[LrvConfig] = None,
                 cap: int = DEFAULT_ENUM_CAP,
                 kvs: Optional[KernelValueSet] = None) -> PluginContext:
    """Materialize every empirical surrogate A needs."""
    cfg = cfg or LrvConfig()
    x = as_sample(sample)
    if kvs is None:
        kvs = kernel_values(x, spec.kernel, cap=cap)
    w = kvs.sorted_values
    N = w.size
    shortcut = None
    cval = spec.weight.constant_value
    if cval is not None and not spec.weight.is_zero:
        shortcut = (cval, float(np.mean(w)))
        suffix = np.zeros(0)
        k0 = 0.0
    elif spec.weight.is_zero or N < 2:
        suffix = np.zeros(0)
        k0 = 0.0
    else:
        k = np.arange(1, N)
        c = np.diff(w) * spec.weight.eval_many(k / N)
        k0 = float(np.dot(k / N, c))
        # suffix[r] for r = 0..N: sum of c_k over k >= r (1-based k)
        suffix = np.zeros(N + 1)
        suffix[1:N] = np.cumsum(c[::-1])[::-1]
        suffix[0] = suffix[1]
    qs, ds = [], []
    for _, p in spec.discrete:
        qs.append(kvs.quantile(p))
        ds.append(density_at_uquantile(x, spec.kernel, p, cfg, cap=cap,
                                       kvs=kvs))
    plugin = PluginContext(kvs=kvs, spec=spec, quantiles=tuple(qs),
                           densities=tuple(ds), _suffix=suffix, _k0=k0,
                           _j_at_zero=float(spec.weight(0.0)),
                           _linear_shortcut=shortcut)
    a_sum = float(np.sum(plugin.a_of_values(w)))
    object.__setattr__(plugin, "_a_sum_kernel_values", a_sum)
    return plugin


def a_kernel_hat(sample, spec: GLSpec, args,
                 plugin: Optional[PluginContext] = None,
                 cfg: Optional[LrvConfig] = None,
                 cap: int = DEFAULT_ENUM_CAP) -> float:
    """Evaluate the plug-in influence kernel A at an m-vector."""
    if plugin is None:
        plugin = build_plugin(sample, spec, cfg, cap=cap)
    return plugin.a_of_value(eval_kernel(spec.kernel, args))


def a1_hat(sample, spec: GLSpec, x: float,
           plugin: Optional[PluginContext] = None,
           normalization: str = "combinatorial",
           cfg: Optional[LrvConfig] = None,
           cap: int = DEFAULT_ENUM_CAP) -> float:
    """Ahat_1(x): the empirical first Hoeffding projection of A, sharing
    the normalization modes of hoeffding_g1_hat."""
    xarr = as_sample(sample)
    if plugin is None:
        plugin = build_plugin(xarr, spec, cfg, cap=cap)
    n, m = xarr.size, spec.kernel.m
    d1, d2 = _g1_denominators(n, m, normalization)
    if m == 1:
        s1 = plugin.a_of_value(eval_kernel(spec.kernel, [x]))
    else:
        rows = _rows_with_first(xarr, x, m)
        s1 = float(np.sum(plugin.a_of_values(eval_kernel_rows(spec.kernel,
                                                              rows))))
    return s1 / d1 - plugin._a_sum_kernel_values / d2


def a1_hat_all(sample, spec: GLSpec,
               plugin: Optional[PluginContext] = None,
               normalization: str = "combinatorial",
               cfg: Optional[LrvConfig] = None,
               cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """Ahat_1 at every sample point; m = 1 and m = 2 vectorized, larger
    m by per-point combination enumeration."""
    x = as_sample(sample)
    if plugin is None:
        plugin = build_plugin(x, spec, cfg, cap=cap)
    n, m = x.size, spec.kernel.m
    d1, d2 = _g1_denominators(n, m, normalization)
    s2 = plugin._a_sum_kernel_values
    if m == 1:
        vals = plugin.a_of_values(eval_kernel_rows(spec.kernel, x[:, None]))
        return vals / d1 - s2 / d2
    if m == 2:
        grid = np.column_stack((np.repeat(x, n), np.tile(x, n)))
        amat = plugin.a_of_values(
            eval_kernel_rows(spec.kernel, grid)
        ).reshape(n, n)
        return amat.sum(axis=1) / d1 - s2 / d2
    out = np.empty(n)
    for i in range(n):
        rows = _rows_with_first(x, x[i], m)
        out[i] = (np.sum(plugin.a_of_values(
            eval_kernel_rows(spec.kernel, rows))) / d1 - s2 / d2)
    return out


@dataclass(frozen=True)
class GLVarianceReport:
    """Long-run variance estimate for a GL-statistic, with diagnostics.

    ``sigma2_gl`` is the clamped estimate max(raw, 0); the CLT-scaled
    variance of sqrt(n) (T(H_n) - T(H_F)) is ``m2_sigma2_gl``.
    """

    sigma2_gl: float
    sigma2_raw: float
    m2_sigma2_gl: float
    bandwidth_used: float
    density_estimates: Tuple[Tuple[float, float], ...]
    clamped: bool


def lrv_gl(sample, spec: GLSpec, cfg: Optional[LrvConfig] = None,
           cap: int = DEFAULT_ENUM_CAP,
           plugin: Optional[PluginContext] = None) -> GLVarianceReport:
    """Long-run variance of a GL-statistic via Ahat_1."""
    cfg = cfg or LrvConfig()
    x = as_sample(sample)
    if plugin is None:
        plugin = build_plugin(x, spec, cfg, cap=cap)
    a1 = a1_hat_all(x, spec, plugin=plugin, normalization=cfg.normalization,
                    cap=cap)
    b = cfg.bandwidth.resolve(x.size)
    raw = _weighted_autocov(a1, cfg, b)
    clamped = raw < 0.0
    s2 = max(raw, 0.0)
    m = spec.kernel.m
    dens = tuple((p, d) for (_, p), d in zip(spec.discrete, plugin.densities))
    return GLVarianceReport(
        sigma2_gl=s2,
        sigma2_raw=raw,
        m2_sigma2_gl=m * m * s2,
        bandwidth_used=b,
        density_estimates=dens,
        clamped=clamped,
    )


def gl_confidence_interval(sample, spec: GLSpec,
                           cfg: Optional[LrvConfig] = None,
                           level: float = 0.95,
                           cap: int = DEFAULT_ENUM_CAP) -> Tuple[float, float]:
    """CLT interval T(H_n) +/- z_{(1+level)/2} * m * sigma_hat_GL / sqrt(n)."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    cfg = cfg or LrvConfig()
    x = as_sample(sample)
    plugin = build_plugin(x, spec, cfg, cap=cap)
    t = gl_statistic(x, spec, cap=cap, kvs=plugin.kvs)
    report = lrv_gl(x, spec, cfg, cap=cap, plugin=plugin)
    z = float(norm.ppf(0.5 * (1.0 + level)))
    half = z * sqrt(report.m2_sigma2_gl / x.size)
    return (t - half, t + half)
