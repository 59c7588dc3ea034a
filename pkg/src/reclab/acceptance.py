"""Acceptance criteria, runnable from pytest and from ``reclab selftest``.

Each criterion returns a :class:`CriterionResult` whose ``detail`` string is
deterministic (no timings), so two runs with the same seed serialize to
identical bytes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, stats

from . import characterize as ch
from . import condmom, hazard, mfunc, simrec
from .condmom import Window
from .hazard import HazardModel

# pinned tolerances
NORMALIZATION_TOL = 1e-10
LEMMA2_TOL = 1e-8
LEMMA3_TOL = 1e-10
NEC_YAB_TOL = 1e-8
IDENTITY_TOL = 1e-8
MC_Z = 4.0
NEGATIVE_CONTROL_MIN = 1e-2
THM3_WEIBULL_HALF_MIN = 1e-3
KS_MIN_P = 1e-3
ERRATA_TOL = 1e-8

AN_MC_SAMPLES = 1_000_000
KS_SAMPLES = 100_000
KS_BUDGET = 10**11
BRIDGE_CASES = 20
BRIDGE_SAMPLES = 100_000


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number:2d} {self.title}: {self.detail}"


def _g(x: float) -> str:
    return f"{x:.3g}"


FAMILIES = (hazard.exponential(1.0), hazard.weibull(0.5, 1.0), hazard.linear_quadratic())
WINDOW_OFFSETS = ((0.25, 1.0), (0.5, 2.0), (1.0, 4.0), (2.0, 8.0), (0.25, 8.0))


def density_mass(model: HazardModel, w: Window) -> float:
    """Integral of the conditional density over (u, v) by adaptive quadrature in x."""
    value, _ = integrate.quad(
        lambda x: condmom.conditional_density(model, w, x),
        w.u, w.v, epsabs=1e-14, epsrel=1e-13, limit=200,
    )
    return value


def criterion_1(seed: int = 0) -> CriterionResult:
    worst = 0.0
    for model in FAMILIES:
        for i, j in itertools.product(range(1, 5), repeat=2):
            for a, b in WINDOW_OFFSETS:
                w = Window(i, j, model.l_F + a, model.l_F + b)
                worst = max(worst, abs(density_mass(model, w) - 1.0))
    return CriterionResult(1, "density normalization", worst <= NORMALIZATION_TOL,
                           f"max |mass - 1| = {_g(worst)} (tol {NORMALIZATION_TOL:g})")


def criterion_2(seed: int = 0) -> CriterionResult:
    worst = 0.0
    grid = ch.GridSpec()
    for c, lf in itertools.product((0.5, 1.0, 2.0), (0.0, 1.0)):
        model = hazard.exponential(c, lf)
        for (u, v), k, r in itertools.product(grid.tuples(model, 2), (1, 2, 3), (1, 2, 3)):
            got = condmom.conditional_expectation(model, Window(k, r, u, v))
            want = condmom.exponential_closed_form(k, r, u, v)
            worst = max(worst, abs(got - want) / abs(want))
    return CriterionResult(2, "exponential closed form (ru+kv)/(k+r)", worst <= LEMMA2_TOL,
                           f"max rel error = {_g(worst)} (tol {LEMMA2_TOL:g})")


def criterion_3(seed: int = 0) -> CriterionResult:
    worst = 0.0
    exact = True
    for a, b in ((0.0, 1.0), (1.0, 2.0), (0.5, 3.0)):
        for i in range(7):
            for j in range(7):
                closed = condmom.lemma3_integral(i, j, a, b, "closed")
                quad = condmom.lemma3_integral(i, j, a, b, "quad")
                if i < j:
                    worst = max(worst, abs(closed - quad) / abs(closed))
                if i == j:
                    exact &= closed == 0.0 and quad == 0.0
                exact &= closed == -condmom.lemma3_integral(j, i, a, b, "closed")
                exact &= quad == -condmom.lemma3_integral(j, i, a, b, "quad")
    ok = worst <= LEMMA3_TOL and exact
    return CriterionResult(3, "Beta-integral closed form", ok,
                           f"max rel error = {_g(worst)} (tol {LEMMA3_TOL:g}); "
                           f"antisymmetry and diagonal zeros exact: {exact}")


def criterion_4(seed: int = 0) -> CriterionResult:
    failures = 0
    checked = 0
    for p in range(1, 13):
        h = mfunc.monomial_h(p)
        for k, r in itertools.product(range(2, 9), range(1, 9)):
            checked += 2
            failures += not mfunc.m_prime_decomposition_residual(h, k, r).is_zero()
            failures += not mfunc.yab_lemma_residual(h, k, r).is_zero()
    return CriterionResult(4, "exact divided-difference identities", failures == 0,
                           f"{checked - failures}/{checked} residual polynomials exactly zero")


def criterion_5(seed: int = 0) -> CriterionResult:
    worst = 0.0
    for model in (hazard.exponential(1.0), hazard.exponential(2.0, 1.0)):
        for k, r in itertools.product(range(2, 5), range(1, 4)):
            for p in (k + r, k + r + 2):
                rep = ch.scan(ch.IdentityId.NEC_YAB, model, tol=NEC_YAB_TOL, k=k, r=r, p=p)
                worst = max(worst, rep.max_rel_residual)
    return CriterionResult(5, "exponential necessity for h^(k+r-1)", worst <= NEC_YAB_TOL,
                           f"max rel residual = {_g(worst)} (tol {NEC_YAB_TOL:g})")


AN_MC_POINTS = ((0.5, 2.0), (1.0, 4.0), (0.25, 8.0))


def criterion_6(seed: int = 0) -> CriterionResult:
    worst_rel = 0.0
    worst_z = 0.0
    for model in (hazard.exponential(1.0), hazard.weibull(0.5, 1.0)):
        rep = ch.scan(ch.IdentityId.AN, model, tol=IDENTITY_TOL)
        worst_rel = max(worst_rel, rep.max_rel_residual)
        for index, point in enumerate(AN_MC_POINTS):
            case = ch.IdentityCase(ch.IdentityId.AN, point)
            res = ch.residual(case, model, "mc", seed=simrec.mix64(seed, index), samples=AN_MC_SAMPLES)
            worst_z = max(worst_z, res.zscore)
    ok = worst_rel <= IDENTITY_TOL and worst_z <= MC_Z
    return CriterionResult(6, "spacing regression (v-u)/3", ok,
                           f"quad max rel = {_g(worst_rel)} (tol {IDENTITY_TOL:g}); "
                           f"MC max |z| = {worst_z:.3f} (N={AN_MC_SAMPLES}, limit {MC_Z:g})")


def criterion_7(seed: int = 0) -> CriterionResult:
    worst_ok = 0.0
    weakest_violation = math.inf
    for ident in (ch.IdentityId.COR3, ch.IdentityId.SUMSPEC):
        for gap in (1, 2, 3):
            for model in (hazard.exponential(1.0), hazard.weibull(0.5, 1.0)):
                rep = ch.scan(ident, model, tol=IDENTITY_TOL, m=2, n=2 + gap)
                worst_ok = max(worst_ok, rep.max_rel_residual)
            rep = ch.scan(ident, hazard.weibull(2.0, 1.0), tol=IDENTITY_TOL, m=2, n=2 + gap)
            weakest_violation = min(weakest_violation, rep.max_rel_residual)
    ok = worst_ok <= IDENTITY_TOL and weakest_violation >= NEGATIVE_CONTROL_MIN
    return CriterionResult(7, "adjacent spacing characterization", ok,
                           f"exp/Weibull-1/2 max rel = {_g(worst_ok)} (tol {IDENTITY_TOL:g}); "
                           f"Weibull(2) weakest violation = {_g(weakest_violation)} "
                           f"(needs >= {NEGATIVE_CONTROL_MIN:g})")


def criterion_8(seed: int = 0) -> CriterionResult:
    exp_worst = 0.0
    half_weakest = math.inf
    model = hazard.exponential(1.0)
    half = hazard.weibull(0.5, 1.0)
    for k, r, gap in itertools.product((1, 2, 3), (1, 2, 3), (1, 2, 3)):
        m = k + 1
        for ordering in ch.Ordering:
            kw = dict(k=k, r=r, m=m, n=m + gap, ordering=ordering)
            exp_worst = max(exp_worst, ch.scan(ch.IdentityId.THM3, model, tol=IDENTITY_TOL, **kw).max_rel_residual)
            rep = ch.scan(ch.IdentityId.THM3, half, tol=IDENTITY_TOL, **kw)
            half_weakest = min(half_weakest, rep.max_rel_residual)
    for gap in (1, 2, 3):
        rep = ch.scan(ch.IdentityId.COR4, model, tol=IDENTITY_TOL, m=2, n=2 + gap)
        exp_worst = max(exp_worst, rep.max_rel_residual)
    ok = exp_worst <= IDENTITY_TOL and half_weakest >= THM3_WEIBULL_HALF_MIN
    return CriterionResult(8, "linear-combination characterization", ok,
                           f"exponential max rel = {_g(exp_worst)} (tol {IDENTITY_TOL:g}); "
                           f"Weibull-1/2 weakest violation = {_g(half_weakest)} "
                           f"(needs >= {THM3_WEIBULL_HALF_MIN:g})")


def criterion_9(seed: int = 0) -> CriterionResult:
    expected = (
        (hazard.exponential(2.0), ch.Classification.EXPONENTIAL),
        (hazard.weibull(0.5, 1.0), ch.Classification.WEIBULL_HALF),
        (hazard.weibull(2.0, 1.0), ch.Classification.NEITHER),
    )
    got = [(model.spec, ch.classify(model).value, want.value) for model, want in expected]
    ok = all(g == w for _, g, w in got)
    return CriterionResult(9, "classifier", ok, "; ".join(f"{s} -> {g}" for s, g, _ in got))


def _bridge_cases(seed: int):
    rng = np.random.default_rng(seed)
    models = (hazard.exponential(1.0), hazard.exponential(2.0, 1.0), hazard.weibull(0.5, 1.0),
              hazard.weibull(2.0, 1.0), hazard.linear_quadratic())
    for _ in range(BRIDGE_CASES):
        model = models[int(rng.integers(len(models)))]
        i, j = (int(x) for x in rng.integers(1, 5, size=2))
        lo, hi = np.sort(rng.uniform(0.1, 6.0, size=2))
        if hi - lo < 0.2:
            hi = lo + 0.2
        yield model, Window(i, j, model.l_F + float(lo), model.l_F + float(hi))


def criterion_10(seed: int = 0) -> CriterionResult:
    cfg = simrec.SimConfig(seed=seed, samples=KS_SAMPLES, max_iid_draws=KS_BUDGET)
    min_p = 1.0
    for model in (hazard.exponential(1.0), hazard.weibull(0.5, 1.0)):
        naive, _ = simrec.sample_records_naive_paths(model, 5, KS_SAMPLES, cfg)
        arrival = simrec.sample_record_paths(model, 5, KS_SAMPLES, seed)
        for idx in (2, 4):
            min_p = min(min_p, stats.ks_2samp(naive[:, idx], arrival[:, idx]).pvalue)
    worst_z = 0.0
    for index, (model, w) in enumerate(_bridge_cases(seed)):
        est = simrec.mc_conditional_expectation(
            model, w, condmom.identity,
            simrec.SimConfig(seed=simrec.mix64(seed, index), samples=BRIDGE_SAMPLES),
        )
        exact = condmom.conditional_expectation(model, w)
        worst_z = max(worst_z, abs(est.mean - exact) / est.stderr)
    ok = min_p > KS_MIN_P and worst_z <= MC_Z
    return CriterionResult(10, "sampler equivalence", ok,
                           f"min KS p = {min_p:.4f} (needs > {KS_MIN_P:g}); "
                           f"bridge max |z| = {worst_z:.3f} over {BRIDGE_CASES} cases")


def criterion_11(seed: int = 0) -> CriterionResult:
    report = ch.errata_report(hazard.weibull(0.5, 1.0), tol=ERRATA_TOL)
    adjacent = report.find("LHS", 1, 1, 2, 3)
    const_err = max(abs(val - 1.0) for _, _, val in adjacent.values)
    skewed = report.find("LHS", 1, 2, 2, 3)
    val_err = abs(skewed.value_at(1.0, 4.0) - 14 / 15)
    ok = (
        const_err <= ERRATA_TOL
        and adjacent.status is ch.ErrataStatus.MISMATCH
        and adjacent.printed == 2.0
        and val_err <= ERRATA_TOL
        and skewed.status is ch.ErrataStatus.NONCONSTANT
    )
    return CriterionResult(11, "printed-constant regression", ok,
                           f"k=r=1 constant off by {_g(const_err)} [{adjacent.status.value} vs printed "
                           f"{adjacent.printed:g}]; k=1,r=2 at (1,4) off 14/15 by {_g(val_err)} "
                           f"[{skewed.status.value}]")


CRITERIA: tuple[Callable[[int], CriterionResult], ...] = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11,
)


def clear_caches() -> None:
    """Drop memoized sampler state so a rerun recomputes everything."""
    simrec._naive_scan.cache_clear()
    condmom._beta_weights.cache_clear()


def run_all(seed: int = 0) -> list[CriterionResult]:
    """Criteria 1-11."""
    return [criterion(seed) for criterion in CRITERIA]


def render(results: list[CriterionResult]) -> str:
    return "".join(res.line() + "\n" for res in results)


def criterion_12(first: str, second: str) -> CriterionResult:
    same = first == second
    return CriterionResult(12, "reproducibility", same,
                           "two selftest runs byte-identical" if same else "selftest runs differ")


def selftest(seed: int = 0) -> tuple[list[CriterionResult], str]:
    """Run criteria 1-11 twice from cold caches; criterion 12 compares the bytes."""
    clear_caches()
    first = run_all(seed)
    clear_caches()
    second = run_all(seed)
    results = first + [criterion_12(render(first), render(second))]
    return results, render(results)
