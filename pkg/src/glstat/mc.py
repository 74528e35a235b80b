"""Monte Carlo harness: replicate a process, apply estimators across
sample sizes, standardize, summarize normality, and persist a report.

Every replication draws from an isolated Philox substream keyed by
(master seed, estimator label, sample size, replication index), so the
whole report is a pure function of its configuration and deleting one
(estimator, n) cell cannot change any other cell.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from math import comb, floor
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.stats import kurtosis, norm, skew

from .errors import CapacityError, DegenerateVarianceError, GlstatError
from .gl import (
    estimator_c,
    estimator_gini,
    estimator_lms,
    estimator_q,
    gini_gl_spec,
)
from .lrv import BandwidthPolicy, LrvConfig, WeightFunction, gl_confidence_interval
from .processes import (
    EgarchParams,
    InnovationModel,
    SimConfig,
    simulate_egarch,
    simulate_garch11,
    simulate_innovations,
)

DEFAULT_REPLICATIONS = 500
DEFAULT_Q_SUBSAMPLE = 2_000_000
# above this many subsets the exact Q estimator is refused inside the harness
Q_EXACT_LIMIT = 5_000_000


# --- configuration ---------------------------------------------------------

@dataclass(frozen=True)
class ProcessConfig:
    """Descriptor of the data-generating process for one experiment."""

    kind: str  # iid_gaussian | ar1 | garch11 | egarch
    rho: float = 0.0  # AR(1) coefficient (process or EGARCH innovations)
    burn_in: int = 500
    egarch: Optional[EgarchParams] = None
    garch: Optional[Tuple[float, float, float]] = None  # alpha0, alpha1, beta1
    innovation_kind: str = "iid_gaussian"

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "rho": self.rho, "burn_in": self.burn_in,
             "innovation_kind": self.innovation_kind}
        if self.egarch is not None:
            d["egarch"] = asdict(self.egarch)
        if self.garch is not None:
            d["garch"] = list(self.garch)
        return d

    @staticmethod
    def from_dict(d: dict) -> "ProcessConfig":
        eg = d.get("egarch")
        if eg is not None:
            eg = EgarchParams(alpha0=eg["alpha0"], alpha=tuple(eg["alpha"]),
                              beta=tuple(eg["beta"]), theta=eg["theta"],
                              lam=eg["lam"],
                              mean_abs_z=eg.get("mean_abs_z",
                                                EgarchParams(0, (0,), (0,),
                                                             0, 0).mean_abs_z))
        ga = d.get("garch")
        return ProcessConfig(
            kind=d["kind"], rho=d.get("rho", 0.0),
            burn_in=d.get("burn_in", 500), egarch=eg,
            garch=tuple(ga) if ga is not None else None,
            innovation_kind=d.get("innovation_kind", "iid_gaussian"),
        )


def egarch_scenario(number: int) -> ProcessConfig:
    """The two EGARCH(1,1) simulation scenarios: AR(1) innovations with
    rho = 0.8, theta = 0.9, lambda = 0.1, and (alpha1, beta1) = (0.2, 0.05)
    for scenario 1 or (0.8, 0.1) for scenario 2."""
    if number == 1:
        a1, b1 = 0.2, 0.05
    elif number == 2:
        a1, b1 = 0.8, 0.1
    else:
        raise ValueError(f"scenario must be 1 or 2, got {number}")
    params = EgarchParams(alpha0=0.0, alpha=(a1,), beta=(b1,),
                          theta=0.9, lam=0.1)
    return ProcessConfig(kind="egarch", rho=0.8, egarch=params,
                         innovation_kind="ar1")


@dataclass(frozen=True)
class EstimatorConfig:
    """Catalog estimator with its options.  ``subsample`` > 0 switches the
    Q estimator to a seeded incomplete-U-statistic mode with that many
    random index subsets per replication."""

    name: str  # gini | gini_os | q | c | lms
    m: int = 3
    alpha: float = 0.5
    c_alpha: float = 1.0
    subsample: int = 0

    @property
    def label(self) -> str:
        if self.name == "q" and self.subsample > 0:
            return "q_sub"
        return self.name

    def min_n(self) -> int:
        return {"gini": 2, "gini_os": 2, "q": self.m, "lms": 2,
                "c": floor(self.alpha * 2) + 2}.get(self.name, 2)

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(d: dict) -> "EstimatorConfig":
        return EstimatorConfig(**d)


def _lrv_to_dict(cfg: LrvConfig) -> dict:
    return {
        "weight": cfg.weight.kind,
        "bandwidth": {"kind": cfg.bandwidth.kind, "b": cfg.bandwidth.b,
                      "c": cfg.bandwidth.c, "e": cfg.bandwidth.e},
        "density_halfwidth_c": cfg.density_halfwidth_c,
        "normalization": cfg.normalization,
    }


def _lrv_from_dict(d: dict) -> LrvConfig:
    if d["weight"] != "bartlett":
        raise ValueError(
            f"only the bartlett weight is serializable, got {d['weight']!r}"
        )
    bw = d.get("bandwidth", {"kind": "auto"})
    return LrvConfig(
        weight=WeightFunction.bartlett(),
        bandwidth=BandwidthPolicy(kind=bw.get("kind", "auto"),
                                  b=bw.get("b", 0.0), c=bw.get("c", 1.0),
                                  e=bw.get("e", 1.0 / 3.0)),
        density_halfwidth_c=d.get("density_halfwidth_c", 0.5),
        normalization=d.get("normalization", "combinatorial"),
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """Full experiment description; serializes to JSON and round-trips
    to an identical resolved configuration."""

    process: ProcessConfig
    estimators: Tuple[EstimatorConfig, ...]
    sample_sizes: Tuple[int, ...]
    replications: int = DEFAULT_REPLICATIONS
    seed: int = 0
    lrv: Optional[LrvConfig] = None
    ci_level: float = 0.95
    output_dir: Optional[str] = None

    def __post_init__(self):
        if self.replications < 2:
            raise ValueError("need at least 2 replications")

    def to_dict(self) -> dict:
        d = {
            "process": self.process.to_dict(),
            "estimators": [e.to_dict() for e in self.estimators],
            "sample_sizes": list(self.sample_sizes),
            "replications": self.replications,
            "seed": self.seed,
            "ci_level": self.ci_level,
            "output_dir": self.output_dir,
        }
        if self.lrv is not None:
            d["lrv"] = _lrv_to_dict(self.lrv)
        return d

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        return ExperimentConfig(
            process=ProcessConfig.from_dict(d["process"]),
            estimators=tuple(EstimatorConfig.from_dict(e)
                             for e in d["estimators"]),
            sample_sizes=tuple(int(n) for n in d["sample_sizes"]),
            replications=int(d.get("replications", DEFAULT_REPLICATIONS)),
            seed=int(d.get("seed", 0)),
            lrv=_lrv_from_dict(d["lrv"]) if "lrv" in d else None,
            ci_level=float(d.get("ci_level", 0.95)),
            output_dir=d.get("output_dir"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "ExperimentConfig":
        return ExperimentConfig.from_dict(json.loads(text))


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return ExperimentConfig.from_json(fh.read())


# --- simulation and estimation --------------------------------------------

def _cell_rng(seed: int, label: str, n: int, rep: int) -> np.random.Generator:
    tag = int.from_bytes(hashlib.sha256(label.encode()).digest()[:8], "big")
    ss = np.random.SeedSequence(entropy=int(seed),
                                spawn_key=(tag, int(n), int(rep)))
    return np.random.Generator(np.random.Philox(ss))


def simulate_path(process: ProcessConfig, n: int,
                  rng: np.random.Generator) -> np.ndarray:
    if process.kind == "iid_gaussian":
        return rng.standard_normal(n)
    if process.kind == "ar1":
        model = InnovationModel(kind="ar1", rho=process.rho)
        return simulate_innovations(model, n, rng)
    sim = SimConfig(n=n, burn_in=process.burn_in, seed=0)
    if process.kind == "garch11":
        model = InnovationModel(kind=process.innovation_kind, rho=process.rho)
        z = simulate_innovations(model, n + process.burn_in, rng)
        a0, a1, b1 = process.garch
        return simulate_garch11(a0, a1, b1, z, sim)
    if process.kind == "egarch":
        params = process.egarch
        lag = max(len(params.alpha), len(params.beta))
        model = InnovationModel(kind=process.innovation_kind, rho=process.rho)
        z = simulate_innovations(model, n + process.burn_in + lag, rng)
        return simulate_egarch(params, z, sim)
    raise ValueError(f"unknown process kind {process.kind!r}")


def q_subsampled(sample, m: int, alpha: float, n_subsets: int,
                 rng: np.random.Generator) -> float:
    """Incomplete-U-statistic Q estimator over random m-subsets."""
    x = np.asarray(sample, dtype=float)
    n = x.size
    idx = rng.integers(0, n, size=(int(n_subsets), m))
    if m == 3:
        i, j, k = idx[:, 0], idx[:, 1], idx[:, 2]
        distinct = (i != j) & (i != k) & (j != k)
        a, b, c = x[i[distinct]], x[j[distinct]], x[k[distinct]]
        vals = np.minimum(np.abs(a - b),
                          np.minimum(np.abs(a - c), np.abs(b - c)))
    else:
        idx.sort(axis=1)
        distinct = np.all(np.diff(idx, axis=1) > 0, axis=1)
        rows = np.sort(x[idx[distinct]], axis=1)
        vals = np.min(np.diff(rows, axis=1), axis=1)
    if vals.size == 0:
        raise DegenerateVarianceError("no distinct index subsets drawn")
    k = max(1, floor(alpha * vals.size))
    return float(np.partition(vals, k - 1)[k - 1])


def apply_estimator(est: EstimatorConfig, sample,
                    rng: Optional[np.random.Generator] = None) -> float:
    if est.name in ("gini", "gini_os"):
        # the pairwise and order-statistic forms agree to 1e-12 (tested);
        # the harness always takes the O(n log n) route
        return estimator_gini(sample, form="order_statistic")
    if est.name == "q":
        n = np.asarray(sample).size
        if est.subsample > 0:
            if rng is None:
                raise ValueError("subsampled Q needs an RNG")
            return q_subsampled(sample, est.m, est.alpha, est.subsample, rng)
        if comb(n, est.m) > Q_EXACT_LIMIT:
            raise CapacityError(
                f"C({n},{est.m}) exceeds the exact-Q harness limit; set "
                "subsample > 0 for the incomplete-U-statistic mode"
            )
        return estimator_q(sample, m=est.m, alpha=est.alpha)
    if est.name == "c":
        return estimator_c(sample, alpha=est.alpha, c_alpha=est.c_alpha)
    if est.name == "lms":
        return estimator_lms(sample)
    raise ValueError(f"unknown estimator {est.name!r}")


# --- summaries -------------------------------------------------------------

@dataclass(frozen=True)
class NormalitySummary:
    mean: float
    sd: float
    skewness: float
    excess_kurtosis: float
    qq_correlation: float


def qq_points(values) -> np.ndarray:
    """Normal QQ pairs (Phi^{-1}((i - 0.5)/R), v_(i)) of the standardized
    values; returns an (R, 2) array."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        raise ValueError("need at least 2 values for QQ points")
    sd = v.std(ddof=1)
    if sd == 0.0:
        raise DegenerateVarianceError("zero variance across replications")
    z = np.sort((v - v.mean()) / sd)
    r = v.size
    theo = norm.ppf((np.arange(1, r + 1) - 0.5) / r)
    return np.column_stack((theo, z))


def normality_summary(values) -> NormalitySummary:
    v = np.asarray(values, dtype=float)
    if v.size < 4:
        raise ValueError("need at least 4 values for a normality summary")
    qq = qq_points(v)
    return NormalitySummary(
        mean=float(v.mean()),
        sd=float(v.std(ddof=1)),
        skewness=float(skew(v)),
        excess_kurtosis=float(kurtosis(v, fisher=True)),
        qq_correlation=float(np.corrcoef(qq[:, 0], qq[:, 1])[0, 1]),
    )


# --- experiment ------------------------------------------------------------

@dataclass
class CellResult:
    estimator: str
    n: int
    estimates: Optional[np.ndarray] = None
    standardized: Optional[np.ndarray] = None
    summary: Optional[NormalitySummary] = None
    qq: Optional[np.ndarray] = None
    coverage: Optional[float] = None
    subsampled: bool = False
    error: Optional[str] = None


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    cells: Dict[Tuple[str, int], CellResult] = field(default_factory=dict)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run every (estimator, n) cell; per-cell failures are recorded in
    the report and do not abort the run."""
    report = ExperimentReport(config=config)
    for est in config.estimators:
        for n in config.sample_sizes:
            cell = CellResult(estimator=est.label, n=n,
                              subsampled=est.name == "q" and est.subsample > 0)
            report.cells[(est.label, n)] = cell
            try:
                _run_cell(config, est, n, cell)
            except GlstatError as exc:
                cell.error = f"{type(exc).__name__}: {exc}"
    return report


def _run_cell(config: ExperimentConfig, est: EstimatorConfig, n: int,
              cell: CellResult) -> None:
    if n < est.min_n():
        raise CapacityError(f"n = {n} below estimator minimum {est.min_n()}")
    r = config.replications
    estimates = np.empty(r)
    want_ci = config.lrv is not None and est.name in ("gini", "gini_os")
    intervals: List[Tuple[float, float]] = []
    for rep in range(r):
        rng = _cell_rng(config.seed, est.label, n, rep)
        path = simulate_path(config.process, n, rng)
        estimates[rep] = apply_estimator(est, path, rng)
        if want_ci:
            intervals.append(gl_confidence_interval(
                path, gini_gl_spec(), config.lrv, level=config.ci_level))
    cell.estimates = estimates
    sd = estimates.std(ddof=1)
    if sd == 0.0:
        raise DegenerateVarianceError(
            "all replications produced the same estimate"
        )
    cell.standardized = (estimates - estimates.mean()) / sd
    cell.qq = qq_points(estimates)
    cell.summary = normality_summary(estimates)
    if want_ci:
        grand_mean = float(estimates.mean())
        hits = sum(1 for lo, hi in intervals if lo <= grand_mean <= hi)
        cell.coverage = hits / r


# --- persistence -----------------------------------------------------------

def _fmt(x: float) -> str:
    return float.__format__(float(x), ".17g")


def write_report(report: ExperimentReport, out_dir) -> Dict[str, str]:
    """Write per-cell CSVs, summary.csv, the resolved config, and a
    manifest of file names to sha256 content hashes."""
    os.makedirs(out_dir, exist_ok=True)
    files: List[str] = []

    def emit(name: str, text: str) -> None:
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        files.append(name)

    summary_rows = ["estimator,n,mean,sd,skewness,excess_kurtosis,"
                    "qq_correlation,coverage,subsampled,error"]
    for (label, n), cell in sorted(report.cells.items()):
        if cell.estimates is not None:
            lines = ["replication,estimate"]
            lines += [f"{i},{_fmt(v)}" for i, v in enumerate(cell.estimates)]
            emit(f"estimates_{label}_{n}.csv", "\n".join(lines) + "\n")
        if cell.qq is not None:
            lines = ["theoretical,empirical"]
            lines += [f"{_fmt(a)},{_fmt(b)}" for a, b in cell.qq]
            emit(f"qq_{label}_{n}.csv", "\n".join(lines) + "\n")
        s = cell.summary
        summary_rows.append(",".join([
            label, str(n),
            _fmt(s.mean) if s else "", _fmt(s.sd) if s else "",
            _fmt(s.skewness) if s else "", _fmt(s.excess_kurtosis) if s else "",
            _fmt(s.qq_correlation) if s else "",
            _fmt(cell.coverage) if cell.coverage is not None else "",
            str(cell.subsampled).lower(),
            cell.error or "",
        ]))
    emit("summary.csv", "\n".join(summary_rows) + "\n")
    emit("config.json", report.config.to_json() + "\n")

    manifest = {}
    for name in sorted(files):
        with open(os.path.join(out_dir, name), "rb") as fh:
            manifest[name] = hashlib.sha256(fh.read()).hexdigest()
    with open(os.path.join(out_dir, "manifest.json"), "w",
              encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
