"""Monte Carlo record sampling with counter-based seeding.

Every random number is a pure function of (seed, counter) through
:func:`mix64`, so a draw never depends on how many other draws were made
before it or on which worker made them.  Streams used by the different
samplers are separated by fixed 64-bit tags.

mix64(seed, index)
    z = seed + (index + 1) * 0x9E3779B97F4A7C15          (mod 2**64)
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9              (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB              (mod 2**64)
    return z ^ (z >> 31)

A 64-bit word z maps to the open unit interval as ((z >> 12) + 0.5) / 2**52;
the top 52 bits keep the largest value, 1 - 2**-53, strictly below one.
"""

from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numba
import numpy as np

from . import hazard
from .condmom import Window, identity
from .errors import BudgetExceededError, UsageError
from .hazard import HazardModel

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

ARRIVAL_TAG = 0x5245434F52440001
NAIVE_TAG = 0x5245434F52440002
BRIDGE_TAG = 0x5245434F52440003

NAIVE_MAX_RECORDS = 8
ARRIVAL_MAX_RECORDS = 30


def mix64(seed, index):
    """Counter-based 64-bit mixer; accepts Python ints or uint64 arrays."""
    if isinstance(seed, (int, np.integer)) and isinstance(index, (int, np.integer)):
        z = (int(seed) + (int(index) + 1) * GOLDEN) & MASK64
        z = ((z ^ (z >> 30)) * _M1) & MASK64
        z = ((z ^ (z >> 27)) * _M2) & MASK64
        return z ^ (z >> 31)
    seed = np.asarray(seed, dtype=np.uint64)
    index = np.asarray(index, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = seed + (index + np.uint64(1)) * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def to_unit(z):
    """Map 64-bit words to (0, 1), never hitting either end."""
    z = np.asarray(z, dtype=np.uint64)
    return ((z >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0**-52


def _seed64(seed: int) -> int:
    return int(seed) & MASK64


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    samples: int = 100_000
    max_iid_draws: int = 1_000_000

    def __post_init__(self):
        if self.samples < 1:
            raise UsageError("samples must be >= 1")
        if self.max_iid_draws < 1:
            raise UsageError("max_iid_draws must be >= 1")


@dataclass(frozen=True)
class RecordPath:
    values: tuple[float, ...]
    record_times: tuple[int, ...] | None = None

    def __post_init__(self):
        vals = self.values
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("record values must be strictly increasing")
        times = self.record_times
        if times is not None:
            if len(times) != len(vals) or (times and times[0] != 1):
                raise ValueError("record times must start at 1 and match the values")
            if any(b <= a for a, b in zip(times, times[1:])):
                raise ValueError("record times must be strictly increasing")


@dataclass(frozen=True)
class EstimatorResult:
    mean: float
    stderr: float
    samples: int

    @classmethod
    def from_draws(cls, draws: np.ndarray) -> EstimatorResult:
        draws = np.asarray(draws, dtype=float)
        n = draws.size
        mean = float(np.sum(draws) / n)
        if n < 2:
            return cls(mean, float("inf"), n)
        sd = float(np.sqrt(np.sum((draws - mean) ** 2) / (n - 1)))
        return cls(mean, sd / math.sqrt(n), n)


# -- Gamma-arrival sampler -------------------------------------------------


def _check_arrival(nmax):
    if not 1 <= nmax <= ARRIVAL_MAX_RECORDS:
        raise UsageError(f"nmax must be in [1, {ARRIVAL_MAX_RECORDS}], got {nmax}")


def arrival_hazards(nmax: int, path_keys: np.ndarray) -> np.ndarray:
    """Cumulative sums of unit exponentials, one row per path key."""
    keys = np.asarray(path_keys, dtype=np.uint64)[:, None]
    slots = np.arange(nmax, dtype=np.uint64)[None, :]
    expo = -np.log(to_unit(mix64(keys, slots)))
    return np.cumsum(expo, axis=1)


def sample_records(model: HazardModel, nmax: int, seed: int) -> RecordPath:
    """R_1..R_nmax with H(R_n) a sum of n unit exponentials."""
    _check_arrival(nmax)
    key = mix64(_seed64(seed) ^ ARRIVAL_TAG, 0)
    H = arrival_hazards(nmax, np.array([key], dtype=np.uint64))[0]
    return RecordPath(tuple(float(x) for x in hazard.inverse_hazard(model, H)))


def sample_record_paths(model: HazardModel, nmax: int, n_paths: int, seed: int) -> np.ndarray:
    """Array of shape (n_paths, nmax); row p is path p of the seeded family.

    Row 0 equals :func:`sample_records` with the same seed.
    """
    _check_arrival(nmax)
    base = _seed64(seed) ^ ARRIVAL_TAG
    keys = mix64(np.uint64(base), np.arange(n_paths, dtype=np.uint64))
    return hazard.inverse_hazard(model, arrival_hazards(nmax, keys))


# -- naive iid scan --------------------------------------------------------


@numba.njit(cache=True)
def _mix64_nb(seed, index):
    z = seed + (index + np.uint64(1)) * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


@numba.njit(cache=True)
def _scan_kernel(keys, nmax, budget, rec_s, rec_t, found, used):
    scale = 2.0**-52
    for p in range(keys.size):
        key = keys[p]
        running = np.inf
        nfound = 0
        t = 0
        while t < budget and nfound < nmax:
            z = _mix64_nb(key, np.uint64(t))
            s = (float(z >> np.uint64(12)) + 0.5) * scale
            t += 1
            if s < running:
                running = s
                rec_s[p, nfound] = s
                rec_t[p, nfound] = t
                nfound += 1
        found[p] = nfound
        used[p] = t


@functools.lru_cache(maxsize=8)
def _naive_scan(nmax: int, n_paths: int, seed: int, budget: int):
    """Survival-uniform records of iid scans, shared by every model.

    Draw t of path p is S = unit(mix64(key_p, t)); X = F^{-1}(1 - S) is a
    record exactly when S is a new minimum.  Returns (S_records, times,
    found, draws); ``found < nmax`` marks a path that hit the budget.
    """
    base = _seed64(seed) ^ NAIVE_TAG
    keys = mix64(np.uint64(base), np.arange(n_paths, dtype=np.uint64))
    rec_s = np.full((n_paths, nmax), np.nan)
    rec_t = np.zeros((n_paths, nmax), dtype=np.int64)
    found = np.zeros(n_paths, dtype=np.int64)
    used = np.zeros(n_paths, dtype=np.int64)
    _scan_kernel(keys, nmax, budget, rec_s, rec_t, found, used)
    for arr in (rec_s, rec_t, found, used):
        arr.setflags(write=False)
    return rec_s, rec_t, found, used


def _check_naive(nmax):
    if not 1 <= nmax <= NAIVE_MAX_RECORDS:
        raise UsageError(f"naive sampler supports nmax in [1, {NAIVE_MAX_RECORDS}], got {nmax}")


def sample_records_naive_paths(model: HazardModel, nmax: int, n_paths: int,
                               cfg: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Scan iid draws from F for successive maxima, ``n_paths`` times.

    Returns (values, record_times), both of shape (n_paths, nmax).  Each path
    has its own budget of ``cfg.max_iid_draws`` draws; if any path exhausts
    it, :class:`BudgetExceededError` is raised.
    """
    _check_naive(nmax)
    rec_s, rec_t, found, used = _naive_scan(nmax, n_paths, _seed64(cfg.seed), cfg.max_iid_draws)
    short = np.flatnonzero(found < nmax)
    if short.size:
        p = int(short[0])
        raise BudgetExceededError(
            f"{short.size} of {n_paths} paths exhausted {cfg.max_iid_draws} draws "
            f"before {nmax} records (first: path {p} with {int(found[p])})",
            records_found=int(found[p]), draws=int(used[p]),
        )
    values = hazard.inverse_hazard(model, -np.log(rec_s))
    return values, np.array(rec_t)


def sample_records_naive(model: HazardModel, nmax: int, cfg: SimConfig) -> RecordPath:
    """One path by literal scanning of iid draws; populates record times."""
    values, times = sample_records_naive_paths(model, nmax, 1, cfg)
    return RecordPath(tuple(float(x) for x in values[0]), tuple(int(t) for t in times[0]))


# -- exact conditional sampling ---------------------------------------------


def _bridge_fractions(i: int, j: int, keys: np.ndarray) -> np.ndarray:
    """Beta(i, j) draws as G_i / (G_i + G_j) with integer-shape Gamma sums.

    Slots 0..i-1 feed G_i and slots i..i+j-1 feed G_j.
    """
    keys = np.asarray(keys, dtype=np.uint64)[:, None]
    slots = np.arange(i + j, dtype=np.uint64)[None, :]
    expo = -np.log(to_unit(mix64(keys, slots)))
    gi = expo[:, :i].sum(axis=1)
    gj = expo[:, i:].sum(axis=1)
    return gi / (gi + gj)


def _bridge_values(model, w, keys):
    w.check(model)
    Hu = hazard.cumulative_hazard_closed(model, w.u)
    Hv = hazard.cumulative_hazard(model, w.v)
    B = _bridge_fractions(w.i, w.j, keys)
    x = hazard.inverse_hazard_closed(model, Hu + B * (Hv - Hu))
    # rounding in H^-1 must not push a draw onto the covariates
    return np.clip(x, np.nextafter(w.u, np.inf), np.nextafter(w.v, -np.inf))


def sample_conditional(model: HazardModel, w: Window, seed: int) -> float:
    """One exact draw of R_n given the window."""
    key = np.array([_seed64(seed) ^ BRIDGE_TAG], dtype=np.uint64)
    return float(_bridge_values(model, w, key)[0])


def draw_seeds(seed: int, n: int, start: int = 0) -> np.ndarray:
    """Per-draw seeds mix64(seed, start + d), d = 0..n-1."""
    return mix64(np.uint64(_seed64(seed)), np.arange(start, start + n, dtype=np.uint64))


def sample_conditional_batch(model: HazardModel, w: Window, seed: int, n: int,
                             start: int = 0) -> np.ndarray:
    """Draws d = start..start+n-1; equal to sample_conditional at draw_seeds."""
    keys = draw_seeds(seed, n, start) ^ np.uint64(BRIDGE_TAG)
    return _bridge_values(model, w, keys)


def mc_conditional_expectation(model: HazardModel, w: Window,
                               g: Callable[[np.ndarray], np.ndarray] = identity,
                               cfg: SimConfig = SimConfig(),
                               block: int = 1 << 18) -> EstimatorResult:
    """Sample mean of g over exact bridge draws, with its standard error."""
    if cfg.samples < 100:
        raise UsageError("Monte Carlo estimates need at least 100 samples")
    parts = []
    for start in range(0, cfg.samples, block):
        n = min(block, cfg.samples - start)
        x = sample_conditional_batch(model, w, cfg.seed, n, start)
        parts.append(np.broadcast_to(np.asarray(g(x), dtype=float), x.shape))
    return EstimatorResult.from_draws(np.concatenate(parts))


# -- CSV --------------------------------------------------------------------


def paths_to_csv(values: np.ndarray, record_times: np.ndarray | None = None) -> str:
    """Rows ``path_id,record_index,value[,record_time]``; record_index is 1-based."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["path_id", "record_index", "value"]
    if record_times is not None:
        header.append("record_time")
    writer.writerow(header)
    for p, row in enumerate(np.asarray(values)):
        for idx, value in enumerate(row):
            line = [p, idx + 1, f"{value:.17g}"]
            if record_times is not None:
                line.append(int(record_times[p][idx]))
            writer.writerow(line)
    return buf.getvalue()


def paths_from_csv(text: str) -> list[RecordPath]:
    reader = csv.DictReader(io.StringIO(text))
    grouped: dict[int, list] = {}
    for row in reader:
        grouped.setdefault(int(row["path_id"]), []).append(row)
    out = []
    for pid in sorted(grouped):
        rows = sorted(grouped[pid], key=lambda r: int(r["record_index"]))
        values = tuple(float(r["value"]) for r in rows)
        times = None
        if rows and rows[0].get("record_time") not in (None, ""):
            times = tuple(int(r["record_time"]) for r in rows)
        out.append(RecordPath(values, times))
    return out


def pooled(results: Sequence[EstimatorResult], coeffs: Sequence[float]) -> EstimatorResult:
    """Linear combination of independent estimators."""
    mean = float(sum(c * r.mean for c, r in zip(coeffs, results)))
    var = float(sum((c * r.stderr) ** 2 for c, r in zip(coeffs, results)))
    return EstimatorResult(mean, var**0.5, min(r.samples for r in results))
