"""Exact divided-difference calculus for polynomial h.

For a polynomial h with rational coefficients,

    M(u, v) = (h(v) - h(u)) / (v - u)

is again a polynomial, and so are its mixed partials ``iMj`` (i derivatives
in u, j in v) and ``M'`` (the divided difference of h').  All coefficients
are :class:`fractions.Fraction`, so identities between these objects reduce
to checking that a polynomial is exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import UsageError

MAX_DEGREE = 64


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(value)


@dataclass(frozen=True)
class PolyRational:
    """Univariate polynomial; ``coeffs[p]`` multiplies x**p."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = [_as_fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if len(cs) - 1 > MAX_DEGREE:
            raise UsageError(f"degree {len(cs) - 1} exceeds cap {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def derivative(self, order: int = 1) -> PolyRational:
        cs = self.coeffs
        for _ in range(order):
            cs = tuple(p * c for p, c in enumerate(cs) if p > 0)
        return PolyRational(cs)

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (Fraction, int)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(acc, Fraction) else float(c))
        return acc

    def __sub__(self, other: PolyRational) -> PolyRational:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return PolyRational(tuple(x - y for x, y in zip(a, b)))

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*x^{p}" for p, c in enumerate(self.coeffs) if c)


class BivariatePolyRational:
    """Polynomial in (u, v); ``coeffs[(a, b)]`` multiplies u**a * v**b."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for key, value in (coeffs or {}).items():
            value = _as_fraction(value)
            if value != 0:
                clean[(int(key[0]), int(key[1]))] = value
        self._coeffs = clean

    @property
    def coeffs(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other):
        if not isinstance(other, BivariatePolyRational):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self):
        terms = sorted(self._coeffs.items())
        return f"BivariatePolyRational({dict(terms)!r})"

    def __add__(self, other):
        out = dict(self._coeffs)
        for key, value in other._coeffs.items():
            out[key] = out.get(key, Fraction(0)) + value
        return BivariatePolyRational(out)

    def __neg__(self):
        return BivariatePolyRational({k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BivariatePolyRational):
            out: dict[tuple[int, int], Fraction] = {}
            for (a1, b1), c1 in self._coeffs.items():
                for (a2, b2), c2 in other._coeffs.items():
                    key = (a1 + a2, b1 + b2)
                    out[key] = out.get(key, Fraction(0)) + c1 * c2
            return BivariatePolyRational(out)
        scalar = _as_fraction(other)
        return BivariatePolyRational({k: v * scalar for k, v in self._coeffs.items()})

    __rmul__ = __mul__

    def swap(self) -> BivariatePolyRational:
        """The polynomial with u and v exchanged."""
        return BivariatePolyRational({(b, a): c for (a, b), c in self._coeffs.items()})

    def __call__(self, u, v):
        return eval_M(self, u, v)


U = BivariatePolyRational({(1, 0): 1})
V = BivariatePolyRational({(0, 1): 1})


def monomial_h(p: int) -> PolyRational:
    """h(x) = x**p / p!."""
    if not 1 <= p <= MAX_DEGREE:
        raise UsageError(f"monomial degree must be in [1, {MAX_DEGREE}], got {p}")
    return PolyRational((0,) * p + (Fraction(1, math.factorial(p)),))


def divided_difference(h: PolyRational) -> BivariatePolyRational:
    """(h(v) - h(u)) / (v - u), using v**p - u**p = (v - u) * sum u**a v**(p-1-a)."""
    out = {}
    for p, c in enumerate(h.coeffs):
        for a in range(p):
            key = (a, p - 1 - a)
            out[key] = out.get(key, Fraction(0)) + c
    return BivariatePolyRational(out)


def mixed_partial(M: BivariatePolyRational, i: int, j: int) -> BivariatePolyRational:
    """d^(i+j) M / du^i dv^j."""
    if i < 0 or j < 0:
        raise UsageError("derivative orders must be nonnegative")
    out = {}
    for (a, b), c in M.coeffs.items():
        if a < i or b < j:
            continue
        factor = math.perm(a, i) * math.perm(b, j)
        out[(a - i, b - j)] = c * factor
    return BivariatePolyRational(out)


def dd_of_derivative(h: PolyRational) -> BivariatePolyRational:
    """M'(u, v) = (h'(v) - h'(u)) / (v - u)."""
    return divided_difference(h.derivative())


def eval_M(B: BivariatePolyRational, u, v, exact: bool = False):
    """Evaluate by Horner in v for each power of u, then Horner in u.

    With ``exact=True`` (or Fraction/int arguments) the result is an exact
    Fraction; otherwise a float.
    """
    coeffs = B.coeffs
    if not coeffs:
        return Fraction(0) if exact else 0.0
    if exact:
        u, v = _as_fraction(u), _as_fraction(v)
        conv = lambda c: c  # noqa: E731
        zero = Fraction(0)
    else:
        u, v = float(u), float(v)
        conv = float
        zero = 0.0
    deg_u = max(a for a, _ in coeffs)
    rows = []
    for a in range(deg_u + 1):
        row = [(b, c) for (aa, b), c in coeffs.items() if aa == a]
        if not row:
            rows.append(zero)
            continue
        deg_v = max(b for b, _ in row)
        dense = [zero] * (deg_v + 1)
        for b, c in row:
            dense[b] = conv(c)
        acc = zero
        for c in reversed(dense):
            acc = acc * v + c
        rows.append(acc)
    acc = zero
    for c in reversed(rows):
        acc = acc * u + c
    return acc


def parse_poly(text: str) -> PolyRational:
    """Parse ``poly:c0,c1,...`` (rationals ``a/b`` allowed) or ``mono:p``."""
    head, _, tail = text.strip().partition(":")
    if head == "mono":
        try:
            p = int(tail)
        except ValueError:
            raise UsageError(f"malformed monomial {text!r}") from None
        return monomial_h(p)
    if head == "poly":
        try:
            coeffs = [Fraction(item.strip()) for item in tail.split(",")]
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"malformed polynomial literal {text!r}") from None
        return PolyRational(tuple(coeffs))
    raise UsageError(f"expected poly:c0,c1,... or mono:p, got {text!r}")


def weighted_partial(h: PolyRational, k: int, r: int) -> BivariatePolyRational:
    """(k+r-1)! / ((k-1)! (r-1)!) * (r-1)M(k-1).

    For an exponential law this is E[h^(k+r-1)(R_n) | R_{n-k}=u, R_{n+r}=v].
    """
    if k < 1 or r < 1:
        raise UsageError("k and r must be >= 1")
    weight = Fraction(math.factorial(k + r - 1), math.factorial(k - 1) * math.factorial(r - 1))
    return mixed_partial(divided_difference(h), r - 1, k - 1) * weight


def yab_lemma_residual(h: PolyRational, k: int, r: int) -> BivariatePolyRational:
    """(k-1) rM(k-2) - r (r-1)M(k-1) - (u - v) rM(k-1); identically zero."""
    M = divided_difference(h)
    return (
        mixed_partial(M, r, k - 2) * (k - 1)
        - mixed_partial(M, r - 1, k - 1) * r
        - (U - V) * mixed_partial(M, r, k - 1)
    )


def m_prime_decomposition_residual(h: PolyRational, k: int, r: int) -> BivariatePolyRational:
    """(r-1)M'(k-2) - (r-1)M(k-1) - rM(k-2); identically zero."""
    M = divided_difference(h)
    Mp = dd_of_derivative(h)
    return mixed_partial(Mp, r - 1, k - 2) - mixed_partial(M, r - 1, k - 1) - mixed_partial(M, r, k - 2)
