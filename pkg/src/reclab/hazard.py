"""Distributions represented through their cumulative hazard.

Every conditional law of records between two records depends on the
distribution only through ``H(x) = -log(1 - F(x))``, so models here expose
H, its derivative and its inverse rather than a density.

Three families ship:

* ``exp:c=<c>[,lf=<l>]``      H(x) = c (x - l),  x >= l
* ``weibull:alpha=<a>,c=<c>`` H(x) = c x**a,     x >= 0
* ``linquad``                 H(x) = x + x**2,   x >= 0  (negative control)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UsageError


class Family(str, enum.Enum):
    EXPONENTIAL = "Exponential"
    WEIBULL = "Weibull"
    LINEAR_QUADRATIC = "LinearQuadratic"


@dataclass(frozen=True)
class HazardModel:
    family: Family
    c: float = 1.0
    alpha: float = 1.0
    l_F: float = 0.0

    def __post_init__(self):
        for name in ("c", "alpha", "l_F"):
            if not math.isfinite(getattr(self, name)):
                raise UsageError(f"{name} must be finite")
        if self.c <= 0:
            raise UsageError(f"c must be positive, got {self.c}")
        if self.alpha <= 0:
            raise UsageError(f"alpha must be positive, got {self.alpha}")
        if self.family is not Family.EXPONENTIAL:
            if self.l_F != 0.0:
                raise UsageError(f"{self.family.value} has l_F = 0")
        if self.family is Family.EXPONENTIAL and self.alpha != 1.0:
            raise UsageError("exponential model has no shape parameter")
        if self.family is Family.LINEAR_QUADRATIC and (self.c != 1.0 or self.alpha != 1.0):
            raise UsageError("linquad takes no parameters")

    @property
    def spec(self) -> str:
        """Canonical dist-spec string; ``parse_model(m.spec) == m``."""
        if self.family is Family.EXPONENTIAL:
            return f"exp:c={self.c!r},lf={self.l_F!r}"
        if self.family is Family.WEIBULL:
            return f"weibull:alpha={self.alpha!r},c={self.c!r}"
        return "linquad"

    def __str__(self):
        return self.spec


def exponential(c: float = 1.0, l_F: float = 0.0) -> HazardModel:
    return HazardModel(Family.EXPONENTIAL, c=float(c), l_F=float(l_F))


def weibull(alpha: float, c: float = 1.0) -> HazardModel:
    return HazardModel(Family.WEIBULL, c=float(c), alpha=float(alpha))


def linear_quadratic() -> HazardModel:
    return HazardModel(Family.LINEAR_QUADRATIC)


_GRAMMAR = "exp:c=<f>[,lf=<f>] | weibull:alpha=<f>,c=<f> | linquad"


def _parse_float(key, text):
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"{key}={text!r} is not a number") from None
    if not math.isfinite(value):
        raise UsageError(f"{key} must be finite")
    return value


def parse_model(spec: str) -> HazardModel:
    """Parse a dist-spec string such as ``"exp:c=2,lf=1"``."""
    spec = spec.strip()
    head, _, tail = spec.partition(":")
    head = head.lower()
    params = {}
    if tail:
        for item in tail.split(","):
            key, eq, value = item.partition("=")
            key = key.strip().lower()
            if not eq or not key or key in params:
                raise UsageError(f"malformed dist spec {spec!r}; expected {_GRAMMAR}")
            params[key] = _parse_float(key, value.strip())

    if head == "exp":
        if "c" not in params or set(params) - {"c", "lf"}:
            raise UsageError(f"malformed dist spec {spec!r}; expected {_GRAMMAR}")
        return exponential(params["c"], params.get("lf", 0.0))
    if head == "weibull":
        if set(params) != {"alpha", "c"}:
            raise UsageError(f"malformed dist spec {spec!r}; expected {_GRAMMAR}")
        return weibull(params["alpha"], params["c"])
    if head == "linquad":
        if tail:
            raise UsageError("linquad takes no parameters")
        return linear_quadratic()
    raise UsageError(f"unknown family in {spec!r}; expected {_GRAMMAR}")


def _check_support(model, x, strict=True):
    x = np.asarray(x, dtype=float)
    bad = (x <= model.l_F) if strict else (x < model.l_F)
    if np.any(bad) or np.any(np.isnan(x)):
        op = ">" if strict else ">="
        raise DomainError(f"x must be {op} l_F = {model.l_F} for {model.spec}")
    return x


def _hazard(model, x):
    if model.family is Family.EXPONENTIAL:
        return model.c * (x - model.l_F)
    if model.family is Family.WEIBULL:
        return model.c * np.power(x, model.alpha)
    return x + x * x


def _scalar_or_array(value, like):
    return float(value) if np.ndim(like) == 0 else value


def cumulative_hazard(model: HazardModel, x):
    """H(x) on the open support x > l_F."""
    xa = _check_support(model, x)
    return _scalar_or_array(_hazard(model, xa), x)


def cumulative_hazard_closed(model: HazardModel, x):
    """H(x) on x >= l_F, with H(l_F) = 0.

    Conditioning frames may sit on the left endpoint (a lower record value
    equal to the guarantee time is a limit case the closed forms allow).
    """
    xa = _check_support(model, x, strict=False)
    return _scalar_or_array(_hazard(model, xa), x)


def hazard_rate(model: HazardModel, x):
    """H'(x), strictly positive on the open support."""
    xa = _check_support(model, x)
    if model.family is Family.EXPONENTIAL:
        out = np.full_like(xa, model.c)
    elif model.family is Family.WEIBULL:
        out = model.c * model.alpha * np.power(xa, model.alpha - 1.0)
    else:
        out = 1.0 + 2.0 * xa
    return _scalar_or_array(out, x)


def _inverse(model, y):
    if model.family is Family.EXPONENTIAL:
        return model.l_F + y / model.c
    if model.family is Family.WEIBULL:
        return np.power(y / model.c, 1.0 / model.alpha)
    # root of x**2 + x - y written to avoid cancellation for small y
    return 2.0 * y / (1.0 + np.sqrt(1.0 + 4.0 * y))


def inverse_hazard(model: HazardModel, y):
    """x with H(x) = y, for y > 0."""
    ya = np.asarray(y, dtype=float)
    if np.any(~(ya > 0)):
        raise DomainError("inverse_hazard requires y > 0")
    return _scalar_or_array(_inverse(model, ya), y)


def inverse_hazard_closed(model: HazardModel, y):
    """Inverse of H extended to y = 0 (maps to l_F)."""
    ya = np.asarray(y, dtype=float)
    if np.any(~(ya >= 0)):
        raise DomainError("inverse hazard requires y >= 0")
    return _scalar_or_array(_inverse(model, ya), y)


def cdf(model: HazardModel, x):
    """F(x) = 1 - exp(-H(x)), zero left of the support."""
    xa = np.asarray(x, dtype=float)
    clipped = np.maximum(xa, model.l_F)
    out = -np.expm1(-_hazard(model, clipped))
    return _scalar_or_array(out, x)


def is_weibull_half(model: HazardModel) -> bool:
    return model.family is Family.WEIBULL and model.alpha == 0.5


def is_exponential(model: HazardModel) -> bool:
    return model.family is Family.EXPONENTIAL or (
        model.family is Family.WEIBULL and model.alpha == 1.0
    )
