"""Conditional moments of a record bracketed by two other records.

Given R_{n-i} = u and R_{n+j} = v, the record R_n has density

    (i+j-1)! / ((i-1)! (j-1)!) * W(u,x)^(i-1) W(x,v)^(j-1) / W(u,v)^(i+j-1) * H'(x)

on (u, v), where W(x,y) = H(y) - H(x).  Equivalently
B = W(u,R_n) / W(u,v) is Beta(i, j) and independent of everything else, which
is how expectations are computed here: Gauss-Legendre in B on (0, 1).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import hazard
from .errors import DomainError, NumericalError, ParameterCapError, UsageError
from .hazard import HazardModel
from .mfunc import PolyRational

FACTORIAL_CAP = 170
MIN_NODES = 16
MAX_NODES = 1024

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Window:
    """R_n conditioned on R_{n-i} = u and R_{n+j} = v."""

    i: int
    j: int
    u: float
    v: float

    def __post_init__(self):
        if int(self.i) != self.i or int(self.j) != self.j or self.i < 1 or self.j < 1:
            raise UsageError(f"window gaps must be integers >= 1, got i={self.i}, j={self.j}")
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise DomainError("window endpoints must be finite")
        if not self.v - self.u >= 1e-9 * max(1.0, abs(self.u)):
            raise DomainError(f"window needs u < v with a visible gap, got u={self.u}, v={self.v}")
        if self.i + self.j - 1 > FACTORIAL_CAP:
            raise ParameterCapError(f"i + j - 1 = {self.i + self.j - 1} exceeds {FACTORIAL_CAP}")

    @classmethod
    def from_indices(cls, target: int, lower: int, upper: int, u: float, v: float) -> Window:
        """Window for R_target given R_lower = u and R_upper = v."""
        return cls(target - lower, upper - target, u, v)

    def check(self, model: HazardModel) -> None:
        if self.u < model.l_F:
            raise DomainError(f"window lower end {self.u} is below l_F = {model.l_F}")


def identity(x):
    return x


def poly_integrand(h: PolyRational) -> Integrand:
    """Vectorized float evaluation of an exact polynomial."""
    coeffs = [float(c) for c in h.coeffs]

    def g(x):
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    return g


def h_derivative_integrand(h: PolyRational, order: int) -> Integrand:
    """x -> h^(order)(x)."""
    return poly_integrand(h.derivative(order))


def log_beta_normalizer(i: int, j: int) -> float:
    """log of (i+j-1)! / ((i-1)! (j-1)!)."""
    if i + j - 1 > FACTORIAL_CAP:
        raise ParameterCapError(f"i + j - 1 = {i + j - 1} exceeds {FACTORIAL_CAP}")
    return math.lgamma(i + j) - math.lgamma(i) - math.lgamma(j)


def conditional_density(model: HazardModel, w: Window, x):
    """Density of R_n at x given the window; zero-free on the open interval."""
    w.check(model)
    xa = np.asarray(x, dtype=float)
    if np.any(~((xa > w.u) & (xa < w.v))):
        raise DomainError(f"x must lie strictly inside ({w.u}, {w.v})")
    Hu = hazard.cumulative_hazard_closed(model, w.u)
    Hv = hazard.cumulative_hazard(model, w.v)
    Hx = hazard.cumulative_hazard(model, xa)
    log_dens = (
        log_beta_normalizer(w.i, w.j)
        + (w.i - 1) * np.log(Hx - Hu)
        + (w.j - 1) * np.log(Hv - Hx)
        - (w.i + w.j - 1) * math.log(Hv - Hu)
    )
    out = np.exp(log_dens) * hazard.hazard_rate(model, xa)
    return float(out) if np.ndim(x) == 0 else out


@functools.lru_cache(maxsize=None)
def _unit_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    t, wts = np.polynomial.legendre.leggauss(n)
    nodes = 0.5 * (t + 1.0)
    nodes.setflags(write=False)
    wts = 0.5 * wts
    wts.setflags(write=False)
    return nodes, wts


@functools.lru_cache(maxsize=4096)
def _beta_weights(i: int, j: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, wts = _unit_nodes(n)
    logw = log_beta_normalizer(i, j) + (i - 1) * np.log(nodes) + (j - 1) * np.log1p(-nodes)
    out = wts * np.exp(logw)
    out.setflags(write=False)
    return nodes, out


def _beta_expectation(model, i, j, Hu, Wuv, g):
    previous = None
    n = MIN_NODES
    while n <= MAX_NODES:
        nodes, wts = _beta_weights(i, j, n)
        x = hazard.inverse_hazard_closed(model, Hu + nodes * Wuv)
        value = float(np.dot(wts, np.asarray(g(x), dtype=float)))
        if previous is not None and abs(value - previous) <= max(1e-12, 1e-10 * abs(value)):
            return value
        previous = value
        n *= 2
    raise NumericalError(
        f"quadrature did not converge at {MAX_NODES} nodes (i={i}, j={j})",
        estimates=(previous, value),
    )


def conditional_expectation(model: HazardModel, w: Window, g: Integrand = identity) -> float:
    """E[g(R_n) | R_{n-i} = u, R_{n+j} = v]."""
    w.check(model)
    Hu = hazard.cumulative_hazard_closed(model, w.u)
    Wuv = hazard.cumulative_hazard(model, w.v) - Hu
    return _beta_expectation(model, w.i, w.j, Hu, Wuv, g)


def record_expectation(model: HazardModel, i: int, j: int, u: float, v: float,
                       g: Integrand = identity) -> float:
    """Like :func:`conditional_expectation` but allows a zero gap.

    i = 0 means the target record is the lower covariate itself, so the
    expectation is g(u); j = 0 likewise gives g(v).
    """
    if i < 0 or j < 0 or (i == 0 and j == 0):
        raise UsageError(f"invalid gaps i={i}, j={j}")
    if i == 0:
        return float(g(np.asarray(float(u))))
    if j == 0:
        return float(g(np.asarray(float(v))))
    return conditional_expectation(model, Window(i, j, u, v), g)


def exponential_closed_form(k: int, r: int, u: float, v: float) -> float:
    """(r u + k v) / (k + r), evaluated exactly and rounded once."""
    if k < 1 or r < 1:
        raise UsageError("k and r must be >= 1")
    U, V = Fraction(u), Fraction(v)
    return float((r * U + k * V) / (k + r))


def _check_spacing_indices(m, n, k, r):
    if k < 1 or r < 1:
        raise UsageError("k and r must be >= 1")
    if n <= m:
        raise UsageError(f"need n > m, got m={m}, n={n}")


def spacing_windows(m: int, n: int, k: int, r: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """(i, j) gaps of R_n and R_m given R_{m-k} and R_{n+r}."""
    _check_spacing_indices(m, n, k, r)
    return (n - m + k, r), (k, n - m + r)


def spacing_expectation(model: HazardModel, m: int, n: int, k: int, r: int,
                        u: float, v: float) -> float:
    """E[R_n - R_m | R_{m-k} = u, R_{n+r} = v]."""
    return linear_combo_expectation(model, 1.0, -1.0, m, n, k, r, u, v)


def linear_combo_expectation(model: HazardModel, aN: float, aM: float, m: int, n: int,
                             k: int, r: int, u: float, v: float) -> float:
    """E[aN R_n + aM R_m | R_{m-k} = u, R_{n+r} = v]."""
    (iN, jN), (iM, jM) = spacing_windows(m, n, k, r)
    EN = conditional_expectation(model, Window(iN, jN, u, v))
    EM = conditional_expectation(model, Window(iM, jM, u, v))
    return aN * EN + aM * EM


def _lemma3_closed(i, j, a, b):
    if i == j:
        return 0.0
    sign = 1.0 if j > i else -1.0
    # (b^2 - a^2) = (b - a)(b + a); keep the sign of (b + a) explicit
    log_mag = (
        math.lgamma(i + 1) + math.lgamma(j + 1) + math.log(abs(j - i))
        - math.lgamma(i + j + 3)
        + (i + j + 2) * math.log(b - a)
    )
    apb = a + b
    if apb == 0:
        return 0.0
    return sign * math.copysign(math.exp(log_mag + math.log(abs(apb))), apb)


def _lemma3_quad(i, j, a, b):
    t, wts = np.polynomial.legendre.leggauss(64)
    half = 0.5 * (b - a)
    y = a + half * (t + 1.0)
    f = ((y - a) ** j * (b - y) ** i - (y - a) ** i * (b - y) ** j) * y * y
    return float(half * np.dot(wts, f))


def lemma3_integral(i: int, j: int, a: float, b: float, mode: str = "closed") -> float:
    """Integral over (a, b) of [(y-a)^j (b-y)^i - (y-a)^i (b-y)^j] y^2 dy.

    ``closed`` evaluates i! j! (j-i) / (i+j+2)! * (b-a)^(i+j+1) (b^2-a^2);
    ``quad`` integrates the left side with 64-point Gauss-Legendre, exact
    for the polynomial degrees allowed (i, j <= 60).
    """
    if not a < b:
        raise DomainError("need a < b")
    if not (0 <= i <= 60 and 0 <= j <= 60):
        raise UsageError("i and j must lie in [0, 60]")
    if mode == "closed":
        return _lemma3_closed(i, j, a, b)
    if mode == "quad":
        return _lemma3_quad(i, j, a, b)
    raise UsageError(f"mode must be 'closed' or 'quad', got {mode!r}")
