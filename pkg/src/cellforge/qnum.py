"""Quantum integers at roots of unity and at generic real q."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath

from .config import TOLERANCES


@dataclass(frozen=True)
class QContext:
    """Deformation parameter: root of unity q = exp(i pi / n) or generic q = e^x."""

    n: int | None = None
    x: float | None = None
    precision: int = 53

    def __post_init__(self):
        if (self.n is None) == (self.x is None):
            raise ValueError("exactly one of n or x must be given")
        if self.n is not None and self.n < 4:
            raise ValueError(f"root-of-unity context needs n >= 4, got {self.n}")
        if self.x is not None and not self.x > 0:
            raise ValueError(f"generic context needs x > 0, got {self.x}")
        if self.precision < 53:
            raise ValueError("precision below double is not supported")

    @property
    def kind(self) -> str:
        return "root-of-unity" if self.n is not None else "generic"

    @classmethod
    def root_of_unity(cls, n: int, precision: int = 53) -> "QContext":
        return cls(n=n, precision=precision)

    @classmethod
    def generic(cls, x: float, precision: int = 53) -> "QContext":
        return cls(x=x, precision=precision)

    def __call__(self, m: int):
        return qint(self, m)


@lru_cache(maxsize=None)
def _qint_cached(n, x, precision, m):
    if precision == 53:
        if n is not None:
            return math.sin(m * math.pi / n) / math.sin(math.pi / n)
        return math.sinh(m * x) / math.sinh(x)
    with mpmath.workprec(precision):
        if n is not None:
            return mpmath.sin(m * mpmath.pi / n) / mpmath.sin(mpmath.pi / n)
        return mpmath.sinh(m * mpmath.mpf(x)) / mpmath.sinh(mpmath.mpf(x))


def qint(ctx: QContext, m: int):
    """[m]_q via the sine (or sinh) closed form.

    Returns a float at double precision and an mpmath mpf otherwise.
    """
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    if m == 0:
        return 0.0 if ctx.precision == 53 else mpmath.mpf(0)
    if m == 1:
        return 1.0 if ctx.precision == 53 else mpmath.mpf(1)
    return _qint_cached(ctx.n, ctx.x, ctx.precision, m)


def fusion_range(n: int, a: int, b: int) -> range:
    """Labels c with [a][b] = sum of [c] at q = exp(i pi / n).

    Truncated Clebsch-Gordan rule: c = |a-b|+1, |a-b|+3, ... up to
    min(a+b-1, 2n-a-b-1).
    """
    top = min(a + b - 1, 2 * n - a - b - 1)
    return range(abs(a - b) + 1, top + 1, 2)


@dataclass
class IdentityReport:
    n: int
    max_m: int
    violations: dict[str, float] = field(default_factory=dict)
    tol: float = TOLERANCES.identity

    @property
    def max_violation(self) -> float:
        return max(self.violations.values(), default=0.0)

    @property
    def ok(self) -> bool:
        return self.max_violation <= self.tol


def check_identities(ctx: QContext, max_m: int | None = None) -> IdentityReport:
    """Max violation of the standard quantum-integer identities."""
    if ctx.n is None:
        raise ValueError("identity checks need a root-of-unity context")
    n = ctx.n
    max_m = n - 2 if max_m is None else max_m
    if max_m > n - 2:
        raise ValueError(f"max_m must be <= n-2 = {n - 2}")
    q = lambda m: float(qint(ctx, m))
    v = {"reflection": 0.0, "difference": 0.0, "determinant": 0.0,
         "shifted_determinant": 0.0, "fusion": 0.0}
    for a in range(1, max_m + 1):
        v["reflection"] = max(v["reflection"], abs(q(a) - q(n - a)))
        if a >= 2:
            v["difference"] = max(v["difference"],
                                  abs(q(a) - q(a - 2) - q(2 * a - 2) / q(a - 1)))
            v["determinant"] = max(v["determinant"],
                                   abs(q(a) ** 2 - q(a - 1) * q(a + 1) - 1))
        for b in range(0, max_m + 1):
            if a + b + 1 <= n and a >= 1:
                lhs = q(a) * q(a + b) - q(a - 1) * q(a + b + 1)
                v["shifted_determinant"] = max(v["shifted_determinant"],
                                               abs(lhs - q(b + 1)))
            if b >= 1:
                rhs = sum(q(c) for c in fusion_range(n, a, b))
                v["fusion"] = max(v["fusion"], abs(q(a) * q(b) - rhs))
    return IdentityReport(n=n, max_m=max_m, violations=v)
