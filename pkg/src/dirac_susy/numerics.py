"""Shared numeric kernels: Gamma integrals, bracketed root finding and
Sturm-sequence machinery for symmetric tridiagonal matrices."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .errors import DomainError, IndexOutOfSpectrum, NonConvergence, NoRootBracketed


@dataclass(frozen=True)
class NumericsConfig:
    """Every iteration budget and tolerance used by the package."""

    root_budget: int = 200
    bracket_eps: float = 1e-12  # relative to the mass
    root_xtol: float = 1e-15  # relative to the bracket scale
    root_rtol: float = 4 * np.finfo(float).eps
    prune_rel: float = 1e-13
    depth_limit: int = 64
    fd_points: int = 8000
    fd_extent_factor: float = 40.0
    fd_rmax_min: float = 50.0
    turning_point_fraction: float = 0.6
    defect_scan_points: int = 64


CONFIG = NumericsConfig()


def gamma_integral(s: float, beta: float) -> float:
    """Return the integral of r**s * exp(-beta*r) over (0, inf), i.e.
    Gamma(s+1) / beta**(s+1)."""
    if not (s > -1.0) or not (beta > 0.0) or not math.isfinite(s) or not math.isfinite(beta):
        raise DomainError(f"gamma_integral needs s > -1 and beta > 0, got s={s}, beta={beta}")
    try:
        value = math.gamma(s + 1.0) / beta ** (s + 1.0)
    except OverflowError:
        value = math.inf
    if math.isfinite(value) and value > 0.0:
        return value
    return math.exp(math.lgamma(s + 1.0) - (s + 1.0) * math.log(beta))


@dataclass(frozen=True)
class Bracket:
    """An interval over which a defect function is known to change sign."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    @classmethod
    def certify(cls, defect: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        if not lo < hi:
            raise NoRootBracketed(f"empty interval [{lo}, {hi}]")
        f_lo, f_hi = defect(lo), defect(hi)
        if f_lo * f_hi > 0.0 or math.isnan(f_lo) or math.isnan(f_hi):
            raise NoRootBracketed(f"no sign change on [{lo}, {hi}]: f={f_lo}, {f_hi}")
        return cls(lo, hi, f_lo, f_hi)


def find_root(
    defect: Callable[[float], float],
    bracket: Bracket,
    tol: float | None = None,
    budget: int = CONFIG.root_budget,
) -> float:
    """Brent's method (bisection safeguarded inverse quadratic
    interpolation) on a certified bracket. Deterministic."""
    if bracket.f_lo == 0.0:
        return bracket.lo
    if bracket.f_hi == 0.0:
        return bracket.hi
    if tol is None:
        scale = max(abs(bracket.lo), abs(bracket.hi), bracket.hi - bracket.lo)
        tol = CONFIG.root_xtol * scale
    root, info = brentq(
        defect,
        bracket.lo,
        bracket.hi,
        xtol=tol,
        rtol=CONFIG.root_rtol,
        maxiter=budget,
        full_output=True,
        disp=False,
    )
    if not info.converged:
        raise NonConvergence(f"root finder exhausted {budget} iterations ({info.flag})")
    return float(root)


def sturm_count(diag: Sequence[float], offdiag: Sequence[float], x: float) -> int:
    """Number of eigenvalues strictly below ``x``."""
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    if offdiag.size != max(diag.size - 1, 0):
        raise ValueError("offdiag must have len(diag) - 1 entries")
    scale = float(np.max(np.abs(diag))) + 2.0 * float(np.max(np.abs(offdiag), initial=0.0))
    pivmin = np.finfo(float).tiny * max(1.0, scale * scale)
    e2 = (offdiag * offdiag).tolist()
    count = 0
    q = 1.0
    for i, a in enumerate(diag.tolist()):
        q = a - x if i == 0 else (a - x) - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def kth_eigenvalue(diag: Sequence[float], offdiag: Sequence[float], k: int) -> float:
    """The k-th smallest eigenvalue (0-based) of a symmetric tridiagonal
    matrix, by LAPACK's Sturm-count bisection (``stebz``) at full precision."""
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    n = diag.size
    if not 0 <= k < n:
        raise IndexOutOfSpectrum(f"index {k} outside spectrum of size {n}")
    if n == 1:
        return float(diag[0])
    w = eigh_tridiagonal(
        diag,
        offdiag,
        eigvals_only=True,
        select="i",
        select_range=(k, k),
        lapack_driver="stebz",
        tol=0.0,
    )
    return float(w[0])
