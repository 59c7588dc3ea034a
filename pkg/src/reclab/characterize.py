"""Registry of regression identities for records, with residual scans.

Each identity is evaluated as two sides ``lhs`` and ``rhs`` in
division-free (cross-multiplied) form.  Both sides are linear in a handful
of conditional expectations, which are computed by quadrature or by Monte
Carlo.  A scan evaluates one identity over a grid of ordered points and
returns a :class:`ScanReport` with a CONFIRMED / VIOLATED verdict.
"""

from __future__ import annotations

import enum
import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import hazard, mfunc
from .condmom import Window, h_derivative_integrand, identity, record_expectation
from .errors import NumericalError, UsageError
from .hazard import HazardModel
from .simrec import SimConfig, mc_conditional_expectation, mix64

DEFAULT_TOL_QUAD = 1e-6
DEFAULT_TOL_MC = 4.0
DEFAULT_MC_SAMPLES = 100_000
CANCELLATION_FLOOR = 1e-6


class IdentityId(str, enum.Enum):
    ADJ_MEAN = "adj_mean"
    BAP05 = "bap05"
    YAB08 = "yab08"
    WEIGHTS = "weights"
    WEIGHTS2 = "weights2"
    NEC_YAB = "nec_yab"
    THM1 = "thm1"
    COR1 = "cor1"
    AN = "an"
    THM2 = "thm2"
    COR2 = "cor2"
    COR3 = "cor3"
    SUMSPEC = "sumspec"
    THM3 = "thm3"
    COR4 = "cor4"
    LEMMA1 = "lemma1"

    @property
    def arity(self) -> int:
        if self in (IdentityId.THM1, IdentityId.COR1):
            return 3
        if self in (IdentityId.THM2, IdentityId.THM3):
            return 4
        return 2

    @property
    def uses_h(self) -> bool:
        return self in (IdentityId.BAP05, IdentityId.YAB08, IdentityId.NEC_YAB, IdentityId.THM1)

    @classmethod
    def parse(cls, token: str) -> IdentityId:
        try:
            return cls(token.strip().lower())
        except ValueError:
            names = ", ".join(i.value for i in cls)
            raise UsageError(f"unknown identity {token!r}; choose one of {names}") from None


class Ordering(str, enum.Enum):
    """How a quadruple of grid values is assigned to (u, s, t, v)."""

    NESTED = "nested"        # u < s < t < v
    ENCLOSING = "enclosing"  # s < u < v < t


DEFAULT_ORDERING = {IdentityId.THM2: Ordering.NESTED, IdentityId.THM3: Ordering.ENCLOSING}


class Verdict(str, enum.Enum):
    CONFIRMED = "CONFIRMED"
    VIOLATED = "VIOLATED"


class Method(str, enum.Enum):
    QUAD = "quad"
    MC = "mc"


@dataclass(frozen=True)
class IdentityCase:
    """One identity, its integer parameters and an evaluation point.

    ``point`` is (u, v), (u, s, v) or (u, s, t, v) depending on arity.
    """

    id: IdentityId
    point: tuple[float, ...]
    k: int = 1
    r: int = 1
    m: int = 2
    n: int = 3
    p: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "id", IdentityId(self.id))
        object.__setattr__(self, "point", tuple(float(x) for x in self.point))
        validate_params(self.id, self.k, self.r, self.m, self.n, self.p)
        if len(self.point) != self.id.arity:
            raise UsageError(f"{self.id.value} needs {self.id.arity} coordinates, got {len(self.point)}")
        if not all(math.isfinite(x) for x in self.point):
            raise UsageError("point coordinates must be finite")
        pt = self.named_point
        if not pt["u"] < pt["v"]:
            raise UsageError("need u < v")
        if "s" in pt and "t" not in pt and not pt["u"] < pt["s"] < pt["v"]:
            raise UsageError("need u < s < v")
        if "t" in pt and not pt["s"] < pt["t"]:
            raise UsageError("need s < t")

    @property
    def h_degree(self) -> int:
        if self.p is not None:
            return self.p
        if self.id is IdentityId.YAB08:
            return self.k + 1
        return self.k + self.r

    @property
    def d(self) -> int:
        return self.n - self.m + self.k + self.r - 2

    @property
    def named_point(self) -> dict[str, float]:
        keys = {2: "uv", 3: "usv", 4: "ustv"}[len(self.point)]
        return dict(zip(keys, self.point))


def validate_params(ident: IdentityId, k: int, r: int, m: int, n: int, p: int | None) -> None:
    if k < 1 or r < 1:
        raise UsageError("k and r must be >= 1")
    if ident is IdentityId.THM1 and k < 2:
        raise UsageError("thm1 requires k >= 2 (the left factor k - 1 vanishes at k = 1)")
    if ident in (IdentityId.THM2, IdentityId.THM3, IdentityId.COR2):
        if m < k + 1:
            raise UsageError(f"{ident.value} requires 1 <= k <= m - 1")
    if ident in (IdentityId.THM2, IdentityId.THM3, IdentityId.COR3,
                 IdentityId.SUMSPEC, IdentityId.COR4):
        if m < 2 or n < m + 1:
            raise UsageError(f"{ident.value} requires 2 <= m <= n - 1")
    if ident is IdentityId.COR2 and n != m + 1:
        raise UsageError("cor2 fixes n = m + 1")
    if p is not None and not 1 <= p <= mfunc.MAX_DEGREE:
        raise UsageError(f"p must be in [1, {mfunc.MAX_DEGREE}]")


# -- linear forms over estimated expectations --------------------------------


@dataclass
class _Lin:
    """const + sum coef[e] * E_e over expectation ids e."""

    coef: dict[int, float] = field(default_factory=dict)
    const: float = 0.0

    def __add__(self, other):
        other = _lift(other)
        out = dict(self.coef)
        for key, c in other.coef.items():
            out[key] = out.get(key, 0.0) + c
        return _Lin(out, self.const + other.const)

    __radd__ = __add__

    def __neg__(self):
        return _Lin({k: -c for k, c in self.coef.items()}, -self.const)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, scalar):
        scalar = float(scalar)
        return _Lin({k: c * scalar for k, c in self.coef.items()}, self.const * scalar)

    __rmul__ = __mul__


def _lift(x) -> _Lin:
    return x if isinstance(x, _Lin) else _Lin({}, float(x))


class _Expectations:
    """Memoized conditional expectations for one residual evaluation."""

    def __init__(self, model, method, seed, samples):
        self.model = model
        self.method = Method(method)
        self.seed = seed
        self.samples = samples
        self._ids: dict[tuple, int] = {}
        self.means: list[float] = []
        self.stderrs: list[float] = []

    def __call__(self, i, j, a, b, g_key=("id",)) -> _Lin:
        if i == 0:
            return _Lin({}, self._g(g_key)(np.asarray(a)).item())
        if j == 0:
            return _Lin({}, self._g(g_key)(np.asarray(b)).item())
        key = (i, j, a, b, g_key)
        if key not in self._ids:
            g = self._g(g_key)
            if self.method is Method.QUAD:
                mean, se = record_expectation(self.model, i, j, a, b, g), 0.0
            else:
                sub_seed = mix64(self.seed, len(self.means))
                est = mc_conditional_expectation(
                    self.model, Window(i, j, a, b), g, SimConfig(seed=sub_seed, samples=self.samples)
                )
                mean, se = est.mean, est.stderr
            self._ids[key] = len(self.means)
            self.means.append(mean)
            self.stderrs.append(se)
        return _Lin({self._ids[key]: 1.0})

    @staticmethod
    def _g(g_key):
        if g_key[0] == "id":
            return identity
        _, p, order = g_key
        return h_derivative_integrand(mfunc.monomial_h(p), order)

    def value(self, lin: _Lin) -> float:
        return lin.const + sum(c * self.means[k] for k, c in lin.coef.items())

    def magnitude(self, lin: _Lin) -> float:
        return abs(lin.const) + sum(abs(c * self.means[k]) for k, c in lin.coef.items())

    def stderr(self, lin: _Lin) -> float:
        return math.sqrt(sum((c * self.stderrs[k]) ** 2 for k, c in lin.coef.items()))


def _spacing(E, m, n, k, r, a, b, aN=1.0, aM=-1.0) -> _Lin:
    """E[aN R_n + aM R_m | R_{m-k} = a, R_{n+r} = b]."""
    return aN * E(n - m + k, r, a, b) + aM * E(k, n - m + r, a, b)


def _evaluate_sides(case: IdentityCase, model: HazardModel, E: _Expectations):
    ident = case.id
    pt = case.named_point
    u, v = pt["u"], pt["v"]
    k, r, m, n = case.k, case.r, case.m, case.n

    if ident is IdentityId.LEMMA1:
        Hu, Hv = hazard.cumulative_hazard(model, u), hazard.cumulative_hazard(model, v)
        hu, hv = hazard.hazard_rate(model, u), hazard.hazard_rate(model, v)
        return _lift(Hv - Hu), _lift((v - u) * 2.0 * hu * hv / (hu + hv))
    if ident is IdentityId.ADJ_MEAN:
        return E(1, 1, u, v), _lift((u + v) / 2.0)
    if ident is IdentityId.WEIGHTS:
        return E(k, 1, u, v), _lift((u + k * v) / (k + 1))
    if ident is IdentityId.WEIGHTS2:
        return E(1, r, u, v), _lift((r * u + v) / (r + 1))

    if ident.uses_h:
        p = case.h_degree
        h = mfunc.monomial_h(p)
        M = mfunc.divided_difference(h)
        if ident is IdentityId.BAP05:
            return E(1, 1, u, v, ("h", p, 1)), _lift(mfunc.eval_M(M, u, v))
        if ident is IdentityId.YAB08:
            rhs = k * mfunc.eval_M(mfunc.mixed_partial(M, 0, k - 1), u, v)
            return E(k, 1, u, v, ("h", p, k)), _lift(rhs)
        if ident is IdentityId.NEC_YAB:
            rhs = mfunc.eval_M(mfunc.weighted_partial(h, k, r), u, v)
            return E(k, r, u, v, ("h", p, k + r - 1)), _lift(rhs)
        # THM1
        s = pt["s"]
        g = ("h", p, k + r - 1)
        Mp = mfunc.dd_of_derivative(h)
        left = (k - 1) * mfunc.eval_M(mfunc.mixed_partial(Mp, r - 1, k - 2), s, v)
        right = (k + r - 1) * mfunc.eval_M(mfunc.mixed_partial(M, r - 1, k - 1), u, v)
        return left * E(k, r, u, v, g), right * E(k - 1, r, s, v, g)

    if ident is IdentityId.COR1:
        s = pt["s"]
        lhs = (k + r) * (r * s + (k - 1) * v) * E(k, r, u, v)
        rhs = (k + r - 1) * (r * u + k * v) * E(k - 1, r, s, v)
        return lhs, rhs
    if ident is IdentityId.AN:
        return _spacing(E, 2, 3, 1, 1, u, v), _lift((v - u) / 3.0)
    if ident is IdentityId.COR2:
        return _spacing(E, m, m + 1, k, r, u, v), _lift((k + r - 1) / (k + r + 1) * (v - u))
    if ident is IdentityId.COR3:
        return _spacing(E, m, n, 1, 1, u, v), _lift((n - m) / (n - m + 2) * (v - u))
    if ident is IdentityId.SUMSPEC:
        first = E(1, n - m + 1, u, v) - u
        last = v - E(n - m + 1, 1, u, v)
        return first + last, _lift(2.0 * (v - u) / (n - m + 2))
    if ident is IdentityId.COR4:
        lhs = E(n - m + 1, 1, u, v) - (n - m) * E(1, n - m + 1, u, v)
        rhs = E(1, n - m + 1, u, v) - (n - m) * u
        return lhs, rhs

    s, t = pt["s"], pt["t"]
    d = case.d
    if ident is IdentityId.THM2:
        outer = _spacing(E, m, n, k, r, u, v)
        inner = _spacing(E, m, n, k - 1, r - 1, s, t)
        return (d + 2) * (t - s) * outer, d * (v - u) * inner
    if ident is IdentityId.THM3:
        aN, aM = float(k), -float(n - m + k)
        outer = _spacing(E, m, n, k, r, u, v, aN, aM)
        inner = _spacing(E, m, n, k - 1, r - 1, s, t, aN, aM)
        return ((d + 1) * s - t) * outer, d * u * inner
    raise AssertionError(ident)  # pragma: no cover


@dataclass(frozen=True)
class Residual:
    lhs: float
    rhs: float
    rel_residual: float
    residual: float = 0.0
    stderr: float = 0.0
    scale: float = 0.0

    @property
    def zscore(self) -> float:
        if self.stderr > 0:
            return abs(self.residual) / self.stderr
        return 0.0 if abs(self.residual) <= 1e-12 * max(1.0, self.scale) else math.inf


def relative_residual(lhs: float, rhs: float, scale: float = 0.0) -> float:
    """|lhs - rhs| / max(|lhs|, |rhs|, 1e-6 * scale, 1e-12).

    ``scale`` is the summed magnitude of the terms on both sides before
    cancellation; it keeps points where both sides vanish from turning
    rounding noise into a large relative error.
    """
    denom = max(abs(lhs), abs(rhs), CANCELLATION_FLOOR * scale, 1e-12)
    return abs(lhs - rhs) / denom


def residual(case: IdentityCase, model: HazardModel, method: str = "quad",
             seed: int = 0, samples: int = DEFAULT_MC_SAMPLES) -> Residual:
    """Both sides of ``case`` under ``model`` and their relative residual."""
    for x in case.point:
        if x < model.l_F:
            raise UsageError(f"point {case.point} leaves the support of {model.spec}")
    E = _Expectations(model, method, seed, samples)
    lhs_lin, rhs_lin = _evaluate_sides(case, model, E)
    lhs, rhs = E.value(lhs_lin), E.value(rhs_lin)
    scale = E.magnitude(lhs_lin) + E.magnitude(rhs_lin)
    return Residual(
        lhs=lhs,
        rhs=rhs,
        rel_residual=relative_residual(lhs, rhs, scale),
        residual=lhs - rhs,
        stderr=E.stderr(lhs_lin - rhs_lin),
        scale=scale,
    )


# -- grids and scans ---------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Base points spaced geometrically in their distance from l_F.

    ``lo``/``hi`` of None mean l_F + 0.25 and l_F + 8.
    """

    lo: float | None = None
    hi: float | None = None
    count: int = 6
    max_tuples: int = 15

    @classmethod
    def parse(cls, text: str) -> GridSpec:
        try:
            lo, hi, count = text.split(":")
            n = float(count)
            if n != int(n):
                raise ValueError
            return cls(float(lo), float(hi), int(n))
        except ValueError:
            raise UsageError(f"grid must look like lo:hi:count, got {text!r}") from None

    def base_points(self, model: HazardModel) -> list[float]:
        lf = model.l_F
        lo = lf + 0.25 if self.lo is None else self.lo
        hi = lf + 8.0 if self.hi is None else self.hi
        if self.count < 2:
            raise UsageError("grid needs at least two base points")
        if not lf < lo < hi:
            raise UsageError(f"grid needs l_F < lo < hi, got l_F={lf}, lo={lo}, hi={hi}")
        a, b = lo - lf, hi - lf
        pts = [lf + a * (b / a) ** (q / (self.count - 1)) for q in range(self.count)]
        # round to 15 digits so dyadic grids land exactly on 0.5, 1, 2, ...
        return [float(f"{x:.15g}") for x in pts]

    def describe(self, model: HazardModel) -> str:
        pts = self.base_points(model)
        return f"geometric:{pts[0]!r}:{pts[-1]!r}:{self.count}"

    def tuples(self, model: HazardModel, arity: int, seed: int = 0) -> list[tuple[float, ...]]:
        combos = list(itertools.combinations(self.base_points(model), arity))
        if len(combos) > self.max_tuples:
            rng = np.random.default_rng(seed)
            keep = np.sort(rng.choice(len(combos), self.max_tuples, replace=False))
            combos = [combos[q] for q in keep]
        return combos


def assign_point(ident: IdentityId, combo: tuple[float, ...], ordering: Ordering | None) -> tuple[float, ...]:
    """Map an increasing tuple of grid values onto the identity's coordinates."""
    if len(combo) == 4 and Ordering(ordering or Ordering.NESTED) is Ordering.ENCLOSING:
        s, u, v, t = combo
        return (u, s, t, v)
    return tuple(combo)


@dataclass(frozen=True)
class PointRecord:
    point: tuple[float, ...]
    lhs: float
    rhs: float
    residual: float
    rel_residual: float
    stderr: float = 0.0

    @property
    def named_point(self) -> dict[str, float]:
        keys = {2: "uv", 3: "usv", 4: "ustv"}[len(self.point)]
        return dict(zip(keys, self.point))


@dataclass(frozen=True)
class ScanReport:
    identity: IdentityId
    dist: str
    params: dict
    grid: str
    records: tuple[PointRecord, ...]
    max_rel_residual: float
    verdict: Verdict
    tol: float
    method: Method
    seed: int
    ordering: Ordering | None = None
    samples: int | None = None
    max_zscore: float | None = None
    runtime_ms: float = field(default=0.0, compare=False)

    @property
    def confirmed(self) -> bool:
        return self.verdict is Verdict.CONFIRMED


def _check_thm1_regularity(case_k, case_r, p, model, vs):
    """Condition (ii): (r-1)M_k(l_F, v) != 0 on the grid."""
    M = mfunc.divided_difference(mfunc.monomial_h(p))
    B = mfunc.mixed_partial(M, case_r - 1, case_k)
    for v in vs:
        if mfunc.eval_M(B, model.l_F, v) == 0.0:
            raise UsageError(
                f"h = x^{p}/{p}! violates (r-1)M_k(l_F, v) != 0 at v={v}; choose p >= k + r"
            )


def scan(identity_id: IdentityId | str, model: HazardModel, grid: GridSpec | None = None,
         tol: float | None = None, method: str = "quad", seed: int = 0, *,
         k: int = 1, r: int = 1, m: int = 2, n: int = 3, p: int | None = None,
         ordering: Ordering | str | None = None,
         samples: int = DEFAULT_MC_SAMPLES) -> ScanReport:
    """Evaluate one identity at every admissible grid tuple."""
    started = time.perf_counter()
    ident = IdentityId(identity_id)
    method = Method(method)
    grid = grid or GridSpec()
    validate_params(ident, k, r, m, n, p)
    if ident.arity == 4:
        ordering = Ordering(ordering) if ordering else DEFAULT_ORDERING[ident]
    else:
        ordering = None
    if tol is None:
        tol = DEFAULT_TOL_QUAD if method is Method.QUAD else DEFAULT_TOL_MC

    combos = grid.tuples(model, ident.arity, seed)
    if not combos:
        raise UsageError("grid produced no admissible points")
    points = [assign_point(ident, c, ordering) for c in combos]
    cases = [IdentityCase(ident, pt, k=k, r=r, m=m, n=n, p=p) for pt in points]
    if ident is IdentityId.THM1:
        _check_thm1_regularity(k, r, cases[0].h_degree, model, {c.named_point["v"] for c in cases})

    records = []
    for index, case in enumerate(cases):
        res = residual(case, model, method, seed=mix64(seed, index), samples=samples)
        if not all(math.isfinite(x) for x in (res.lhs, res.rhs, res.rel_residual)):
            raise NumericalError(f"non-finite residual at {case.point}", (res.lhs, res.rhs))
        records.append((case.point, res))
    records.sort(key=lambda item: item[0])

    point_records = tuple(
        PointRecord(pt, res.lhs, res.rhs, res.residual, res.rel_residual, res.stderr)
        for pt, res in records
    )
    max_rel = max(pr.rel_residual for pr in point_records)
    max_z = None
    if method is Method.QUAD:
        verdict = Verdict.CONFIRMED if max_rel <= tol else Verdict.VIOLATED
    else:
        max_z = max(res.zscore for _, res in records)
        verdict = Verdict.CONFIRMED if max_z <= tol else Verdict.VIOLATED

    params = {"k": k, "r": r, "m": m, "n": n}
    if ident.uses_h:
        params["p"] = cases[0].h_degree
    return ScanReport(
        identity=ident,
        dist=model.spec,
        params=params,
        grid=grid.describe(model),
        records=point_records,
        max_rel_residual=max_rel,
        verdict=verdict,
        tol=float(tol),
        method=method,
        seed=int(seed),
        ordering=ordering,
        samples=samples if method is Method.MC else None,
        max_zscore=max_z,
        runtime_ms=(time.perf_counter() - started) * 1e3,
    )


# -- classification ------------------------------------------------------------


class Classification(str, enum.Enum):
    EXPONENTIAL = "Exponential"
    WEIBULL_HALF = "WeibullHalf"
    NEITHER = "Neither"


COR3_CASES = ({"m": 2, "n": 3}, {"m": 2, "n": 4}, {"m": 2, "n": 5})
THM3_CASES = (
    {"k": 1, "r": 1, "m": 2, "n": 3},
    {"k": 1, "r": 1, "m": 2, "n": 4},
    {"k": 1, "r": 2, "m": 2, "n": 3},
    {"k": 2, "r": 1, "m": 3, "n": 4},
    {"k": 2, "r": 2, "m": 3, "n": 5},
)


@dataclass(frozen=True)
class ClassifyResult:
    label: Classification
    reports: tuple[ScanReport, ...]


def classify_detailed(model: HazardModel, tol: float = DEFAULT_TOL_QUAD,
                      grid: GridSpec | None = None) -> ClassifyResult:
    grid = grid or GridSpec()
    cor3 = [scan(IdentityId.COR3, model, grid, tol, **c) for c in COR3_CASES]
    lemma1 = [scan(IdentityId.LEMMA1, model, grid, tol)]
    thm3 = [scan(IdentityId.THM3, model, grid, tol, **c) for c in THM3_CASES]
    reports = tuple(cor3 + lemma1 + thm3)
    spacing_ok = all(rep.confirmed for rep in cor3 + lemma1)
    if spacing_ok and all(rep.confirmed for rep in thm3):
        label = Classification.EXPONENTIAL
    elif spacing_ok:
        label = Classification.WEIBULL_HALF
    else:
        label = Classification.NEITHER
    return ClassifyResult(label, reports)


def classify(model: HazardModel, tol: float = DEFAULT_TOL_QUAD) -> Classification:
    """Exponential, WeibullHalf or Neither, from the spacing and linear-combination scans."""
    return classify_detailed(model, tol).label


# -- printed constants ---------------------------------------------------------


class ErrataStatus(str, enum.Enum):
    MATCH = "MATCH"
    MISMATCH = "MISMATCH"
    NONCONSTANT = "NONCONSTANT"


@dataclass(frozen=True)
class ErrataRow:
    """A printed constant against the value computed over the grid.

    ``check`` is ``LHS`` for (d+2)/(v-u) E[R_n - R_m | R_{m-k}=u, R_{n+r}=v],
    ``RHS`` for d/(t-s) E[R_n - R_m | R_{m-k+1}=s, R_{n+r-1}=t] (both printed
    as 2(n-m)), and ``COR2`` for E[R_{m+1} - R_m | R_{m-k}=u, R_{m+r+1}=v]/(v-u)
    (printed as (k+r-1)/(k+r+1)).
    """

    check: str
    k: int
    r: int
    m: int
    n: int
    printed: float
    values: tuple[tuple[float, float, float], ...]
    status: ErrataStatus

    @property
    def computed_min(self) -> float:
        return min(val for _, _, val in self.values)

    @property
    def computed_max(self) -> float:
        return max(val for _, _, val in self.values)

    def value_at(self, a: float, b: float) -> float:
        for x, y, val in self.values:
            if x == a and y == b:
                return val
        raise KeyError((a, b))


@dataclass(frozen=True)
class ErrataReport:
    dist: str
    grid: str
    tol: float
    rows: tuple[ErrataRow, ...]

    def find(self, check: str, k: int, r: int, m: int, n: int) -> ErrataRow:
        for row in self.rows:
            if (row.check, row.k, row.r, row.m, row.n) == (check, k, r, m, n):
                return row
        raise KeyError((check, k, r, m, n))


def _errata_status(values, printed, tol):
    vals = np.array([val for _, _, val in values])
    ref = max(1.0, float(np.max(np.abs(vals))))
    if float(vals.max() - vals.min()) > tol * ref:
        return ErrataStatus.NONCONSTANT
    if float(np.max(np.abs(vals - printed))) <= tol * max(1.0, abs(printed)):
        return ErrataStatus.MATCH
    return ErrataStatus.MISMATCH


def errata_report(model: HazardModel, grid: GridSpec | None = None, tol: float = 1e-8,
                  max_k: int = 3, max_r: int = 3, max_gap: int = 3) -> ErrataReport:
    """Tabulate printed spacing constants against computed values."""
    if not (hazard.is_exponential(model) or hazard.is_weibull_half(model)):
        raise UsageError("errata report needs an exponential or Weibull(1/2) model")
    grid = grid or GridSpec()
    pairs = grid.tuples(model, 2)
    E = _Expectations(model, Method.QUAD, 0, 0)
    rows = []
    for k, r, gap in itertools.product(range(1, max_k + 1), range(1, max_r + 1), range(1, max_gap + 1)):
        m = k + 1
        n = m + gap
        d = n - m + k + r - 2
        lhs_vals = tuple(
            (a, b, (d + 2) / (b - a) * E.value(_spacing(E, m, n, k, r, a, b))) for a, b in pairs
        )
        rhs_vals = tuple(
            (a, b, d / (b - a) * E.value(_spacing(E, m, n, k - 1, r - 1, a, b))) for a, b in pairs
        )
        printed = 2.0 * (n - m)
        rows.append(ErrataRow("LHS", k, r, m, n, printed, lhs_vals, _errata_status(lhs_vals, printed, tol)))
        rows.append(ErrataRow("RHS", k, r, m, n, printed, rhs_vals, _errata_status(rhs_vals, printed, tol)))
        if gap == 1:
            cor2_vals = tuple(
                (a, b, E.value(_spacing(E, m, n, k, r, a, b)) / (b - a)) for a, b in pairs
            )
            printed2 = (k + r - 1) / (k + r + 1)
            rows.append(ErrataRow("COR2", k, r, m, n, printed2, cor2_vals,
                                  _errata_status(cor2_vals, printed2, tol)))
    return ErrataReport(model.spec, grid.describe(model), tol, tuple(rows))
