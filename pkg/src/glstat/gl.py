"""Generalized L-statistics: the functional T(H_n) and the named
scale-estimator catalog (Gini's mean difference, Q, C, LMS).

T(H_n) = sum_i [ integral of J over ((i-1)/N, i/N) ] * v_(i)
       + sum_i a_i * H_n^{-1}(p_i)

with v_(1) <= ... <= v_(N) the sorted kernel values, N = C(n, m).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, floor
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from .errors import InsufficientDataError
from .kernels import KernelSpec, builtin_kernel
from .ustat import (
    DEFAULT_ENUM_CAP,
    KernelValueSet,
    as_sample,
    kernel_values,
    u_statistic,
)

# ascending polynomial coefficients per piece: (lo, hi, (c0, c1, ...))
Piece = Tuple[float, float, Tuple[float, ...]]


@dataclass(frozen=True)
class WeightFunctionJ:
    """Piecewise-polynomial weight function J on [0, 1], zero elsewhere.

    Pieces are half-open [lo, hi) except the last, which is closed.
    All integrals are evaluated from the closed-form antiderivative.
    """

    kind: str
    pieces: Tuple[Piece, ...] = ()

    @staticmethod
    def zero() -> "WeightFunctionJ":
        return WeightFunctionJ(kind="zero")

    @staticmethod
    def constant(c: float = 1.0,
                 support: Tuple[float, float] = (0.0, 1.0)) -> "WeightFunctionJ":
        lo, hi = support
        return WeightFunctionJ(kind="constant", pieces=((lo, hi, (c,)),))

    @staticmethod
    def linear(slope: float, intercept: float,
               support: Tuple[float, float] = (0.0, 1.0)) -> "WeightFunctionJ":
        lo, hi = support
        return WeightFunctionJ(kind="linear",
                               pieces=((lo, hi, (intercept, slope)),))

    @staticmethod
    def piecewise(pieces: Sequence[Piece]) -> "WeightFunctionJ":
        return WeightFunctionJ(kind="piecewise_polynomial",
                               pieces=tuple(pieces))

    @staticmethod
    def gini_order_statistic(n: int) -> "WeightFunctionJ":
        """The n-dependent J pairing the identity kernel with Gini's
        order-statistic form: J(t) = (4n/(n-1)) t - 2n/(n-1)."""
        if n < 2:
            raise InsufficientDataError("Gini J requires n >= 2")
        return WeightFunctionJ.linear(4.0 * n / (n - 1), -2.0 * n / (n - 1))

    @property
    def is_zero(self) -> bool:
        return not self.pieces

    @property
    def constant_value(self) -> Optional[float]:
        """The constant c if J == c on all of [0, 1], else None."""
        if len(self.pieces) != 1:
            return None
        lo, hi, coeffs = self.pieces[0]
        if lo == 0.0 and hi == 1.0 and len(coeffs) == 1:
            return float(coeffs[0])
        return None

    def __call__(self, t: float) -> float:
        for lo, hi, coeffs in self.pieces:
            if lo <= t < hi or (t == hi and (lo, hi, coeffs) == self.pieces[-1]):
                return float(np.polyval(coeffs[::-1], t))
        return 0.0

    def eval_many(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for i, (lo, hi, coeffs) in enumerate(self.pieces):
            last = i == len(self.pieces) - 1
            mask = (t >= lo) & ((t < hi) | (last & (t == hi)))
            out[mask] = np.polyval(coeffs[::-1], t[mask])
        return out

    def integral_prefix(self, t: np.ndarray) -> np.ndarray:
        """Integral of J over [0, t] for each t, exactly."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for lo, hi, coeffs in self.pieces:
            anti = np.concatenate(([0.0], np.array(coeffs) /
                                   np.arange(1, len(coeffs) + 1)))
            upper = np.clip(t, lo, hi)
            out += np.polyval(anti[::-1], upper) - np.polyval(anti[::-1], lo)
        return out


def j_integral(J: WeightFunctionJ, lo: float, hi: float) -> float:
    """Exact integral of J over [lo, hi] in [0, 1]."""
    if not (0.0 <= lo <= hi <= 1.0):
        raise ValueError(f"integration bounds [{lo}, {hi}] outside [0, 1]")
    pre = J.integral_prefix(np.array([lo, hi]))
    return float(pre[1] - pre[0])


@dataclass(frozen=True)
class GLSpec:
    """Full GL parameterization: kernel h, weight J, discrete part
    (a_i, p_i) for i = 1..d, and the quantile convention used for the
    discrete part."""

    kernel: KernelSpec
    weight: WeightFunctionJ = field(default_factory=WeightFunctionJ.zero)
    discrete: Tuple[Tuple[float, float], ...] = ()
    quantile_convention: str = "ceil"

    def __post_init__(self):
        for a, p in self.discrete:
            if not 0.0 < p < 1.0:
                raise ValueError(f"discrete quantile level {p} not in (0, 1)")


def gl_statistic(sample, spec: GLSpec, cap: int = DEFAULT_ENUM_CAP,
                 kvs: Optional[KernelValueSet] = None) -> float:
    """Evaluate T(H_n) in its exact discretized form.

    ``kvs`` may be supplied to reuse already-materialized kernel values.
    """
    x = as_sample(sample)
    if kvs is None:
        kvs = kernel_values(x, spec.kernel, cap=cap)
    v = kvs.sorted_values
    N = v.size
    total = 0.0
    if not spec.weight.is_zero:
        grid = np.arange(N + 1) / N
        weights = np.diff(spec.weight.integral_prefix(grid))
        total += float(np.dot(weights, v))
    for a, p in spec.discrete:
        total += a * kvs.quantile(p, spec.quantile_convention)
    return total


# --- named estimator catalog ----------------------------------------------

def estimator_gini(sample, form: str = "order_statistic",
                   cap: int = DEFAULT_ENUM_CAP) -> float:
    """Gini's mean difference, via pairwise enumeration or the
    O(n log n) order-statistic identity."""
    x = as_sample(sample)
    if x.size < 2:
        raise InsufficientDataError("Gini's mean difference needs n >= 2")
    if form == "order_statistic":
        return u_statistic(x, builtin_kernel("gini_abs_diff"))
    if form == "pairwise":
        kvs = kernel_values(x, builtin_kernel("gini_abs_diff"), cap=cap)
        return float(np.mean(kvs.sorted_values))
    raise ValueError(f"unknown Gini form {form!r}")


def estimator_q(sample, m: int = 3, alpha: float = 0.5,
                cap: int = DEFAULT_ENUM_CAP) -> float:
    """Q_n^alpha: the k-th smallest min-pairwise kernel value with
    k = max(1, floor(alpha * C(n, m)))."""
    x = as_sample(sample)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    kern = builtin_kernel("min_pairwise", {"m": m})
    kvs = kernel_values(x, kern, cap=cap)
    return kvs.quantile(alpha, convention="floor_bracket")


def estimator_c(sample, alpha: float, c_alpha: float = 1.0) -> float:
    """C_n^alpha: c_alpha times the ([n/2] - [alpha n])-th order statistic
    of the gaps X_((i + [alpha n] + 1)) - X_((i)).

    Always computed from sorted-sample differences; the equivalent GL
    form with the range kernel of dimension [alpha n] + 2 is enumeration
    territory and only exercised in tests.
    """
    x = as_sample(sample)
    n = x.size
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha must be in (0, 0.5), got {alpha}")
    g = floor(alpha * n)
    if n < g + 2:
        raise InsufficientDataError(f"need n >= [alpha n] + 2 = {g + 2}")
    xs = np.sort(x)
    diffs = xs[g + 1:] - xs[: n - g - 1]
    k = floor(n / 2) - g
    if not 1 <= k <= diffs.size:
        raise InsufficientDataError(
            f"order-statistic index [n/2] - [alpha n] = {k} outside "
            f"1..{diffs.size}"
        )
    return float(c_alpha * np.sort(diffs)[k - 1])


def estimator_lms(sample) -> float:
    """Least-median-of-squares scale: 0.7413 * min_i (X_((i+[n/2])) - X_((i)))."""
    x = as_sample(sample)
    n = x.size
    half = floor(n / 2)
    if n < half + 1 or half < 1:
        raise InsufficientDataError("LMS needs n >= 2")
    xs = np.sort(x)
    return float(0.7413 * np.min(xs[half:] - xs[: n - half]))


def lms_constant() -> float:
    """1 / (2 * Phi^{-1}(0.75)), the Fisher-consistency constant ~0.7413."""
    return float(1.0 / (2.0 * norm.ppf(0.75)))


def gini_gl_spec() -> GLSpec:
    """GL form of Gini's mean difference: |x - y| kernel, J == 1, d = 0."""
    return GLSpec(kernel=builtin_kernel("gini_abs_diff"),
                  weight=WeightFunctionJ.constant(1.0))


def q_gl_spec(m: int = 3, alpha: float = 0.5) -> GLSpec:
    """GL form of Q_n^alpha: min-pairwise kernel, J == 0, d = 1, a_1 = 1,
    quantile index max(1, floor(alpha * C(n, m))) via the floor-bracket
    convention (exactly the printed [alpha C(n, m)] order statistic)."""
    return GLSpec(kernel=builtin_kernel("min_pairwise", {"m": m}),
                  discrete=((1.0, alpha),),
                  quantile_convention="floor_bracket")


def c_gl_spec(n: int, alpha: float, c_alpha: float = 1.0) -> GLSpec:
    """GL form of C_n^alpha: range kernel of dimension [alpha n] + 2,
    J == 0, d = 1, a_1 = c_alpha, p_1 = 1 / C(n, m).

    Agrees with estimator_c only when the displayed order-statistic
    index [n/2] - [alpha n] equals 1 (the minimum-gap case, e.g. LMS).
    """
    m = floor(alpha * n) + 2
    N = comb(n, m)
    return GLSpec(kernel=builtin_kernel("range", {"m": m}),
                  discrete=((c_alpha, 1.0 / N),),
                  quantile_convention="floor_bracket")
