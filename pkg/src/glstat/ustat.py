"""U-statistics, the empirical U-distribution, U-quantiles and the
empirical first Hoeffding projection.

All operations enumerate the C(n, m) index subsets exactly (subject to a
capacity cap); subsampled variants live in :mod:`glstat.mc` where seeds
are managed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, ceil
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import CapacityError, InsufficientDataError
from .kernels import KernelSpec, eval_kernel_rows

DEFAULT_ENUM_CAP = 10 ** 8


def as_sample(values) -> np.ndarray:
    """Validate and return a 1-d float array of finite observations."""
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        raise InsufficientDataError("empty sample")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample values must be finite")
    return x


def _require_n(x: np.ndarray, m: int) -> None:
    if x.size < m:
        raise InsufficientDataError(
            f"need at least m={m} observations, got n={x.size}"
        )


@dataclass(frozen=True)
class KernelValueSet:
    """All C(n, m) kernel evaluations of a sample, sorted ascending.

    This is the multiset behind the empirical U-distribution H_n and its
    generalized inverse.
    """

    sorted_values: np.ndarray
    n: int
    m: int

    @property
    def size(self) -> int:
        return self.sorted_values.size

    def cdf(self, t: float) -> float:
        """H_n(t): fraction of kernel values <= t (right-continuous)."""
        return float(
            np.searchsorted(self.sorted_values, t, side="right") / self.size
        )

    def quantile(self, p: float, convention: str = "ceil") -> float:
        """H_n^{-1}(p) as the k-th smallest kernel value.

        ``ceil``: k = ceil(p * N) (generalized inverse, 0 < p <= 1).
        ``floor_bracket``: k = max(1, floor(p * N)), matching the
        floor-bracket index used for the Q estimator.
        """
        N = self.size
        if convention == "ceil":
            if not 0.0 < p <= 1.0:
                raise ValueError(f"p must be in (0, 1], got {p}")
            k = min(max(ceil(p * N), 1), N)
        elif convention == "floor_bracket":
            if not 0.0 < p <= 1.0:
                raise ValueError(f"p must be in (0, 1], got {p}")
            k = min(max(int(np.floor(p * N)), 1), N)
        else:
            raise ValueError(f"unknown quantile convention {convention!r}")
        return float(self.sorted_values[k - 1])

    def save_csv(self, path) -> None:
        np.savetxt(path, self.sorted_values, fmt="%.17g", header="value",
                   comments="")

    def save_binary(self, path) -> None:
        self.sorted_values.astype("<f8").tofile(path)


def kernel_values(sample, kernel: KernelSpec,
                  cap: int = DEFAULT_ENUM_CAP) -> KernelValueSet:
    """Materialize all C(n, m) kernel evaluations, sorted.

    Raises CapacityError when the enumeration would exceed ``cap``; for
    large n use the subsampled mode of the Monte Carlo harness instead.
    """
    x = as_sample(sample)
    n, m = x.size, kernel.m
    _require_n(x, m)
    N = comb(n, m)
    if N > cap:
        raise CapacityError(
            f"C({n},{m}) = {N} kernel evaluations exceed the cap {cap}; "
            "use subsampling (glstat.mc) or a closed-form fast path"
        )
    if m == 1:
        vals = eval_kernel_rows(kernel, x[:, None])
    elif m == 2:
        iu, ju = np.triu_indices(n, k=1)
        vals = eval_kernel_rows(kernel, np.column_stack((x[iu], x[ju])))
    else:
        rows = np.fromiter(
            itertools.chain.from_iterable(itertools.combinations(x, m)),
            dtype=float, count=N * m,
        ).reshape(N, m)
        vals = eval_kernel_rows(kernel, rows)
    vals = np.sort(vals)
    return KernelValueSet(sorted_values=vals, n=n, m=m)


def u_statistic(sample, kernel: KernelSpec,
                cap: int = DEFAULT_ENUM_CAP) -> float:
    """Mean of the kernel over all C(n, m) index subsets.

    Gini's kernel takes the O(n log n) order-statistic route; the two
    agree to 1e-12 relative (tested).
    """
    x = as_sample(sample)
    _require_n(x, kernel.m)
    if kernel.name == "gini_abs_diff":
        return _gini_order_statistic(x)
    if kernel.m == 1:
        return float(np.mean(eval_kernel_rows(kernel, x[:, None])))
    return float(np.mean(kernel_values(x, kernel, cap=cap).sorted_values))


def _gini_order_statistic(x: np.ndarray) -> float:
    n = x.size
    if n < 2:
        raise InsufficientDataError("Gini's mean difference needs n >= 2")
    xs = np.sort(x)
    i = np.arange(1, n + 1)
    return float(2.0 / (n * (n - 1)) * np.sum((2 * i - n - 1) * xs))


def empirical_u_cdf(sample, kernel: KernelSpec, t: float,
                    cap: int = DEFAULT_ENUM_CAP) -> float:
    """H_n(t), the empirical U-distribution function."""
    return kernel_values(sample, kernel, cap=cap).cdf(t)


def u_quantile(sample, kernel: KernelSpec, p: float,
               convention: str = "ceil",
               cap: int = DEFAULT_ENUM_CAP) -> float:
    """H_n^{-1}(p); see KernelValueSet.quantile for the conventions."""
    return kernel_values(sample, kernel, cap=cap).quantile(p, convention)


def empirical_cdf(sample, x: float) -> float:
    """F_n(x) = (1/n) #{i : X_i <= x}."""
    s = as_sample(sample)
    return float(np.searchsorted(np.sort(s), x, side="right") / s.size)


# --- empirical first Hoeffding projection ---------------------------------

def _g1_denominators(n: int, m: int, normalization: str) -> Tuple[float, float]:
    if normalization == "combinatorial":
        return float(comb(n, m - 1)) if m > 1 else 1.0, float(comb(n, m))
    if normalization == "paper_literal":
        return float(n ** (m - 1)), float(n ** m)
    raise ValueError(f"unknown normalization {normalization!r}")


def hoeffding_g1_hat(sample, kernel: KernelSpec, x: float,
                     normalization: str = "combinatorial",
                     cap: int = DEFAULT_ENUM_CAP) -> float:
    """Empirical first Hoeffding kernel at ``x``.

    ghat_1(x) = (1/d1) sum over i_1<...<i_{m-1} of h(x, X_{i_1..i_{m-1}})
              - (1/d2) sum over i_1<...<i_m of h(X_{i_1..i_m})

    ``combinatorial`` divides by the true subset counts C(n, m-1) and
    C(n, m); ``paper_literal`` divides by n^{m-1} and n^m.  The inner
    sums run over the full sample and do not exclude any index whose
    value equals x.
    """
    xarr = as_sample(sample)
    n, m = xarr.size, kernel.m
    _require_n(xarr, m)
    d1, d2 = _g1_denominators(n, m, normalization)
    if m == 1:
        s1 = float(kernel.eval_one(np.array([x])))
    else:
        rows = _rows_with_first(xarr, x, m)
        s1 = float(np.sum(eval_kernel_rows(kernel, rows)))
    s2 = float(np.sum(kernel_values(xarr, kernel, cap=cap).sorted_values))
    return s1 / d1 - s2 / d2


def _rows_with_first(x: np.ndarray, first: float, m: int) -> np.ndarray:
    """All rows (first, X_{i_1}, ..., X_{i_{m-1}}) with i_1 < ... < i_{m-1}."""
    n = x.size
    k = m - 1
    count = comb(n, k)
    tail = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(x, k)),
        dtype=float, count=count * k,
    ).reshape(count, k)
    return np.column_stack((np.full(count, first), tail))


def g1_hat_all(sample, kernel: KernelSpec,
               normalization: str = "combinatorial",
               cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """ghat_1 evaluated at every sample point, vectorized.

    m = 1 and m = 2 run in O(n) / O(n^2); larger m falls back to full
    combination enumeration per point.
    """
    x = as_sample(sample)
    n, m = x.size, kernel.m
    _require_n(x, m)
    d1, d2 = _g1_denominators(n, m, normalization)
    if m == 1:
        vals = eval_kernel_rows(kernel, x[:, None])
        return vals / d1 - np.sum(vals) / d2
    if m == 2:
        grid = np.column_stack(
            (np.repeat(x, n), np.tile(x, n))
        )
        hmat = eval_kernel_rows(kernel, grid).reshape(n, n)
        s1 = hmat.sum(axis=1)
        s2 = np.sum(kernel_values(x, kernel, cap=cap).sorted_values)
        return s1 / d1 - s2 / d2
    s2 = np.sum(kernel_values(x, kernel, cap=cap).sorted_values)
    out = np.empty(n)
    for i in range(n):
        rows = _rows_with_first(x, x[i], m)
        out[i] = np.sum(eval_kernel_rows(kernel, rows)) / d1 - s2 / d2
    return out


# --- population Hoeffding decomposition (finite support, oracle) ----------

@dataclass(frozen=True)
class PopulationHoeffding:
    """Exact Hoeffding decomposition of a kernel under a finite-support
    product distribution; used as a test oracle.

    g_components[j-1] maps a sorted j-tuple of support values to g_j.
    """

    theta: float
    support: Tuple[float, ...]
    probabilities: Tuple[float, ...]
    m: int
    g_components: Tuple[Dict[Tuple[float, ...], float], ...]

    def g(self, j: int, args: Sequence[float]) -> float:
        if not 1 <= j <= self.m:
            raise ValueError(f"j must be in 1..{self.m}, got {j}")
        key = tuple(sorted(float(a) for a in args))
        if len(key) != j:
            raise ValueError(f"g_{j} takes {j} arguments, got {len(key)}")
        return self.g_components[j - 1][key]


def hoeffding_decompose_population(
    support_probs: Sequence[Tuple[float, float]],
    kernel: KernelSpec,
    cap: int = DEFAULT_ENUM_CAP,
) -> PopulationHoeffding:
    """Exhaustive Hoeffding decomposition over a finite discrete law.

    Computes theta = E h(Y_1..Y_m), the conditional means h~_j, and the
    degenerate components g_1..g_m by enumeration over the product
    distribution.
    """
    support = tuple(float(v) for v, _ in support_probs)
    probs = np.array([p for _, p in support_probs], dtype=float)
    if np.any(probs <= 0):
        raise ValueError("probabilities must be positive")
    if abs(probs.sum() - 1.0) > 1e-12:
        raise ValueError(f"probabilities sum to {probs.sum()}, not 1")
    if len(set(support)) != len(support):
        raise ValueError("support values must be distinct")
    m = kernel.m
    s = len(support)
    if s ** m > cap:
        raise CapacityError(f"{s}^{m} enumeration exceeds cap {cap}")

    def cond_mean(prefix: Tuple[float, ...]) -> float:
        """E h(prefix, Y_{k+1}, ..., Y_m)."""
        k = len(prefix)
        total = 0.0
        for tail in itertools.product(range(s), repeat=m - k):
            w = float(np.prod(probs[list(tail)])) if tail else 1.0
            args = np.array(prefix + tuple(support[t] for t in tail))
            total += w * float(kernel.eval_one(args))
        return total

    theta = cond_mean(())
    g_components: List[Dict[Tuple[float, ...], float]] = []
    for j in range(1, m + 1):
        gj: Dict[Tuple[float, ...], float] = {}
        for combo in itertools.combinations_with_replacement(support, j):
            key = tuple(sorted(combo))
            if key in gj:
                continue
            h_tilde = cond_mean(key) - theta
            lower = 0.0
            for k in range(1, j):
                for idx in itertools.combinations(range(j), k):
                    sub = tuple(sorted(key[i] for i in idx))
                    lower += g_components[k - 1][sub]
            gj[key] = h_tilde - lower
        g_components.append(gj)

    return PopulationHoeffding(
        theta=theta,
        support=support,
        probabilities=tuple(float(p) for p in probs),
        m=m,
        g_components=tuple(g_components),
    )
