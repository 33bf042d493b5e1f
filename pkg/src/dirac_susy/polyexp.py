"""Exact algebra on radial functions of the form

    f(r) = r**power * exp(-rate * r) * sum_j coeffs[j] * r**j

The family is closed under d/dr, multiplication by integer powers of r and
under addition of members that share ``rate`` and whose powers differ by an
integer, which is all the ladder construction needs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DivergentNorm
from .numerics import CONFIG, gamma_integral

_POWER_MATCH = 1e-9


def _prune(coeffs: Sequence[float], rel: float) -> tuple[int, tuple[float, ...]]:
    """Drop negligible coefficients at both ends; return (low-order shift, kept)."""
    c = [float(x) for x in coeffs]
    if not c:
        return 0, ()
    cutoff = rel * max(abs(x) for x in c)
    lo = 0
    while lo < len(c) and (c[lo] == 0.0 or abs(c[lo]) < cutoff):
        lo += 1
    if lo == len(c):
        return 0, ()
    hi = len(c)
    while abs(c[hi - 1]) < cutoff or c[hi - 1] == 0.0:
        hi -= 1
    return lo, tuple(c[lo:hi])


@dataclass(frozen=True)
class PolyExpFunction:
    power: float
    rate: float
    coeffs: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        if not (self.rate > 0.0 and math.isfinite(self.rate)):
            raise ValueError(f"rate must be positive, got {self.rate}")
        if not math.isfinite(self.power):
            raise ValueError("power must be finite")
        object.__setattr__(self, "coeffs", tuple(float(x) for x in self.coeffs))

    @classmethod
    def zero(cls, power: float, rate: float) -> "PolyExpFunction":
        return cls(power, rate, ())

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_regular(self) -> bool:
        return self.is_zero or self.power > 0.0

    def max_coeff(self) -> float:
        return max((abs(x) for x in self.coeffs), default=0.0)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        poly = np.polynomial.polynomial.polyval(r, self.coeffs) if self.coeffs else np.zeros_like(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            base = np.where(r > 0.0, r ** self.power, 0.0 if self.power > 0 else np.nan)
        return base * np.exp(-self.rate * r) * poly

    def canonical(self, rel: float = CONFIG.prune_rel) -> "PolyExpFunction":
        shift, kept = _prune(self.coeffs, rel)
        if not kept:
            return PolyExpFunction.zero(self.power, self.rate)
        return PolyExpFunction(self.power + shift if shift else self.power, self.rate, kept)

    def scaled(self, alpha: float) -> "PolyExpFunction":
        return PolyExpFunction(self.power, self.rate, tuple(alpha * x for x in self.coeffs))

    def __mul__(self, alpha: float) -> "PolyExpFunction":
        return self.scaled(alpha)

    __rmul__ = __mul__

    def __neg__(self) -> "PolyExpFunction":
        return self.scaled(-1.0)

    def times_rpow(self, k: int) -> "PolyExpFunction":
        """Multiply by r**k for integer k."""
        return PolyExpFunction(self.power + k, self.rate, self.coeffs)

    def derivative(self) -> "PolyExpFunction":
        """d/dr, expressed with power lowered by one."""
        p, b, c = self.power, self.rate, self.coeffs
        out = [0.0] * (len(c) + 1)
        for j, cj in enumerate(c):
            out[j] += (p + j) * cj
            out[j + 1] -= b * cj
        return PolyExpFunction(p - 1.0, b, tuple(out) if c else ())

    def __add__(self, other: "PolyExpFunction") -> "PolyExpFunction":
        base, a, b = aligned(self, other)
        n = max(len(a), len(b))
        a = np.pad(a, (0, n - len(a)))
        b = np.pad(b, (0, n - len(b)))
        return PolyExpFunction(base, self.rate, tuple(a + b))

    def __sub__(self, other: "PolyExpFunction") -> "PolyExpFunction":
        return self + (-other)

    def describe(self) -> dict:
        return {"power": self.power, "rate": self.rate, "coeffs": list(self.coeffs)}


def aligned(f: PolyExpFunction, g: PolyExpFunction) -> tuple[float, np.ndarray, np.ndarray]:
    """Express f and g over a common base power; returns (base, cf, cg)."""
    if abs(f.rate - g.rate) > 1e-12 * max(f.rate, g.rate):
        raise ValueError(f"cannot combine rates {f.rate} and {g.rate}")
    if f.is_zero and g.is_zero:
        return min(f.power, g.power), np.zeros(0), np.zeros(0)
    if f.is_zero:
        return g.power, np.zeros(0), np.asarray(g.coeffs)
    if g.is_zero:
        return f.power, np.asarray(f.coeffs), np.zeros(0)
    k = round(g.power - f.power)
    if abs(g.power - f.power - k) > _POWER_MATCH * max(1.0, abs(f.power)):
        raise ValueError(f"powers {f.power} and {g.power} differ by a non-integer")
    cf, cg = np.asarray(f.coeffs), np.asarray(g.coeffs)
    if k >= 0:
        return f.power, cf, np.concatenate([np.zeros(k), cg])
    return g.power, np.concatenate([np.zeros(-k), cf]), cg


def coeff_residual(lhs: PolyExpFunction, rhs: PolyExpFunction, scale: float | None = None) -> float:
    """Largest coefficient of lhs - rhs relative to ``scale``, by default the
    largest coefficient of either side (0 when both vanish)."""
    _, a, b = aligned(lhs, rhs)
    n = max(len(a), len(b))
    if n == 0:
        return 0.0
    a = np.pad(a, (0, n - len(a)))
    b = np.pad(b, (0, n - len(b)))
    if scale is None:
        scale = max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(a - b)) / scale)


def overlap(f: PolyExpFunction, g: PolyExpFunction) -> float:
    """Closed-form integral of f*g over (0, inf)."""
    if f.is_zero or g.is_zero:
        return 0.0
    s0 = f.power + g.power
    if s0 <= -1.0:
        raise DivergentNorm(f"integrand ~ r^{s0} is not integrable at the origin")
    beta = f.rate + g.rate
    total = 0.0
    for j, cj in enumerate(f.coeffs):
        for k, ck in enumerate(g.coeffs):
            total += cj * ck * gamma_integral(s0 + j + k, beta)
    return total


def norm(f: PolyExpFunction) -> float:
    if f.is_zero:
        return 0.0
    if f.power <= -0.5:
        raise DivergentNorm(f"power {f.power} <= -1/2: norm diverges at the origin")
    return math.sqrt(overlap(f, f))


def normalize(f: PolyExpFunction) -> tuple[PolyExpFunction, float]:
    """Scale f to unit L2 norm on (0, inf); returns (scaled f, original norm)."""
    n = norm(f)
    if n == 0.0:
        raise DivergentNorm("cannot normalize the zero function")
    return f.scaled(1.0 / n), n
