"""Capacity planning under uncertain insertion demand.

The scenario: a run ends with ``base_size`` times a log-normal factor
elements, and the factor is only known by its distribution.  Three
sizing policies are compared: the realized demand itself (optimal, only
knowable after the fact), a static pre-allocation sized so that it
overflows with a chosen probability, and the capacity the sharded
doubling-bucket structure would allocate on demand, which is never more
than roughly twice the realized demand.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "DEFAULT_ELEMENT_SIZE",
    "CSV_COLUMNS",
    "MemoryModelParams",
    "MemoryReport",
    "normal_quantile",
    "static_requirement",
    "sharded_capacity_elements",
    "ggarray_capacity_for",
    "run_model",
    "write_report_csv",
]

DEFAULT_ELEMENT_SIZE = 4  # bytes per element in the reports

CSV_COLUMNS = ["sigma", "optimal_mean", "static_p99", "ggarray_mean", "static_ratio", "ggarray_ratio"]

# Rational approximation coefficients for the inverse standard-normal
# CDF (relative error < 1.15e-9 before refinement).
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def normal_quantile(p: float) -> float:
    """Inverse standard-normal CDF.

    Piecewise rational approximation tightened with one Halley step of
    the complementary error function; absolute error is far below the
    1e-8 the sizing computations need.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
             / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    elif p <= 1.0 - _P_LOW:
        q = p - 0.5
        r = q * q
        x = ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
             / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))
    else:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        x = -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
              / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    # one Halley step: e is the CDF error at x
    e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - p
    u = e * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


@dataclass(frozen=True)
class MemoryModelParams:
    """Inputs of the capacity-planning model."""

    mu: float = 0.0
    sigma: float = 1.0
    failure_prob: float = 0.01
    base_size: int = 1_000_000
    samples: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if not 0.0 < self.failure_prob < 1.0:
            raise ValueError(f"failure_prob must be in (0, 1), got {self.failure_prob}")
        if self.base_size < 1:
            raise ValueError(f"base_size must be >= 1, got {self.base_size}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")


@dataclass(frozen=True)
class MemoryReport:
    """One row of the model: sizing policies at a single sigma, in bytes."""

    sigma: float
    element_size: int
    optimal_bytes: float          # mean realized demand
    static_p_bytes: float         # quantile-sized static allocation
    ggarray_capacity_bytes: float  # mean capacity the sharded structure allocates
    ggarray_worst_bytes: float     # largest per-sample capacity seen
    static_ratio: float
    ggarray_ratio: float
    ggarray_worst_ratio: float     # max per-sample capacity/demand

    @property
    def optimal_elements(self) -> float:
        return self.optimal_bytes / self.element_size

    @property
    def static_p_elements(self) -> float:
        return self.static_p_bytes / self.element_size

    @property
    def ggarray_capacity_elements(self) -> float:
        return self.ggarray_capacity_bytes / self.element_size


def static_requirement(params: MemoryModelParams, element_size: int = DEFAULT_ELEMENT_SIZE) -> float:
    """Bytes a static array must pre-allocate to overflow with probability
    ``failure_prob``: base_size * exp(mu + sigma * z) * element_size with z
    the (1 - failure_prob) standard-normal quantile.
    """
    z = normal_quantile(1.0 - params.failure_prob)
    return params.base_size * math.exp(params.mu + params.sigma * z) * element_size


def _bit_length(t: np.ndarray) -> np.ndarray:
    # frexp is exact for integers below 2**53: t = mant * 2**exp with
    # mant in [0.5, 1), so exp equals the bit length of t.
    _, exp = np.frexp(t.astype(np.float64))
    return exp.astype(np.int64)


def _minimal_capacity(per_shard_demand: np.ndarray, first_bucket_size: int) -> np.ndarray:
    """Smallest fb*(2**k - 1) >= demand, elementwise; 0 for zero demand."""
    m = np.asarray(per_shard_demand, dtype=np.int64)
    t = -(-m // first_bucket_size)
    k = _bit_length(np.maximum(t, 1))
    caps = first_bucket_size * ((np.int64(1) << k) - 1)
    return np.where(m > 0, caps, 0)


def sharded_capacity_elements(demands, shards: int, first_bucket_size: int) -> np.ndarray:
    """Element capacity the sharded structure allocates per total demand.

    Demand is assumed to spread as evenly as possible over the shards
    (the balanced-insertion case): with demand = q*S + r, r shards hold
    q+1 elements and the rest hold q; each allocates its minimal bucket
    prefix.
    """
    d = np.asarray(demands, dtype=np.int64)
    if np.any(d < 0):
        raise ValueError("demand must be non-negative")
    q, r = np.divmod(d, shards)
    cap_hi = _minimal_capacity(q + 1, first_bucket_size)
    cap_lo = _minimal_capacity(q, first_bucket_size)
    return r * cap_hi + (shards - r) * cap_lo


def ggarray_capacity_for(
    demand: int,
    shards: int = 32,
    first_bucket_size: int = 32,
    element_size: int = DEFAULT_ELEMENT_SIZE,
) -> int:
    """Bytes the sharded structure allocates for ``demand`` elements."""
    elements = sharded_capacity_elements(np.asarray([demand]), shards, first_bucket_size)
    return int(elements[0]) * element_size


def _default_sigma_grid() -> list[float]:
    return [round(0.1 * i, 1) for i in range(21)]


def run_model(
    params: MemoryModelParams,
    shards: int = 32,
    first_bucket_size: int = 32,
    element_size: int = DEFAULT_ELEMENT_SIZE,
    sigma_grid: list[float] | None = None,
    out=None,
    header: bool = True,
) -> list[MemoryReport]:
    """Sweep sigma over [0, 2], Monte Carlo the demand at each point and
    report the three sizing curves.  Deterministic for a fixed seed; when
    ``out`` is given the rows are also written as CSV.
    """
    grid = _default_sigma_grid() if sigma_grid is None else list(sigma_grid)
    rng = np.random.default_rng(params.seed)
    reports = []
    for sigma in grid:
        p = replace(params, sigma=sigma)
        factors = rng.lognormal(mean=p.mu, sigma=sigma, size=p.samples)
        demands = np.rint(p.base_size * factors).astype(np.int64)
        np.maximum(demands, 1, out=demands)
        caps = sharded_capacity_elements(demands, shards, first_bucket_size)

        optimal_mean = float(demands.mean()) * element_size
        static_p = static_requirement(p, element_size)
        ggarray_mean = float(caps.mean()) * element_size
        ggarray_worst = float(caps.max()) * element_size
        reports.append(
            MemoryReport(
                sigma=sigma,
                element_size=element_size,
                optimal_bytes=optimal_mean,
                static_p_bytes=static_p,
                ggarray_capacity_bytes=ggarray_mean,
                ggarray_worst_bytes=ggarray_worst,
                static_ratio=static_p / optimal_mean,
                ggarray_ratio=ggarray_mean / optimal_mean,
                ggarray_worst_ratio=float((caps / demands).max()),
            )
        )
    if out is not None:
        write_report_csv(reports, out, header=header)
    return reports


def write_report_csv(reports: list[MemoryReport], out, header: bool = True) -> None:
    """Write report rows with the fixed model schema (UTF-8, LF endings)."""

    def emit(fh):
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            writer.writerow(CSV_COLUMNS)
        for r in reports:
            writer.writerow(
                [r.sigma, r.optimal_bytes, r.static_p_bytes, r.ggarray_capacity_bytes,
                 r.static_ratio, r.ggarray_ratio]
            )

    if hasattr(out, "write"):
        emit(out)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            emit(fh)
