"""Finite-difference cross-check of the radial spectrum.

Discretizes -u'' + [lam(lam-1)/r^2 - 2q/r] u = eps u on a uniform grid with
Dirichlet walls and closes the loop eps(E) = -(M^2 - E^2) by root finding.
Deliberately independent of the analytic level formulas in ``spectral``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridTooSmall, IndexOutOfSpectrum, NoRootBracketed, UnboundState
from .numerics import CONFIG, Bracket, find_root, kth_eigenvalue
from .spectral import Couplings, parse_branch


@dataclass(frozen=True)
class RadialGrid:
    r_max: float
    points: int = CONFIG.fd_points

    def __post_init__(self):
        if not self.r_max > 0.0:
            raise ValueError("r_max must be positive")
        if self.points < 100:
            raise ValueError("a radial grid needs at least 100 points")

    @property
    def h(self) -> float:
        return self.r_max / (self.points + 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(1, self.points + 1) * self.h

    def refined(self) -> "RadialGrid":
        """Same box with exactly half the spacing."""
        return RadialGrid(self.r_max, 2 * self.points + 1)


def default_grid(lam: float, q: float, n: int) -> RadialGrid:
    r_max = max(CONFIG.fd_extent_factor * (lam + n + 1) ** 2 / q, CONFIG.fd_rmax_min)
    return RadialGrid(r_max, CONFIG.fd_points)


@dataclass(frozen=True)
class DiscreteOperator:
    """Symmetric tridiagonal matrix whose low eigenvalues approximate those
    of -d2/dr2 + lam(lam-1)/r^2 - 2q/r.

    ``plain``: central differences on u at nodes r_i = i*h, i = 1..N.
    ``weighted``: finite volumes on w = u / r^lam, i.e. -(r^2lam w')' - 2q
    r^(2lam-1) w = eps r^2lam w, over nodes i = 0..N with exact cell
    integrals of the weights, symmetrized by the diagonal mass. It keeps
    second-order convergence for non-integer lam, where the plain stencil
    drops to order 2*lam - 1.
    """

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    scheme: str = "weighted"

    @classmethod
    def build(cls, lam: float, q: float, grid: RadialGrid, scheme: str = "weighted") -> "DiscreteOperator":
        h = grid.h
        if scheme == "plain":
            r = grid.nodes
            diag = 2.0 / h**2 + lam * (lam - 1.0) / r**2 - 2.0 * q / r
            off = np.full(grid.points - 1, -1.0 / h**2)
            return cls(diag, off, scheme)
        if scheme != "weighted":
            raise ValueError(f"unknown scheme {scheme!r}")
        s = 2.0 * lam
        r = np.arange(0, grid.points + 1) * h
        left = np.maximum(r - 0.5 * h, 0.0)
        right = r + 0.5 * h
        mass = (right ** (s + 1.0) - left ** (s + 1.0)) / (s + 1.0)
        coulomb = 2.0 * q * (right**s - left**s) / s
        p_right = right**s
        p_left = np.where(r > 0.0, left**s, 0.0)  # no flux through the origin
        diag = ((p_right + p_left) / h - coulomb) / mass
        off = -p_right[:-1] / (h * np.sqrt(mass[:-1] * mass[1:]))
        return cls(diag, off, scheme)

    def eigenvalue(self, k: int) -> float:
        return kth_eigenvalue(self.diagonal, self.off_diagonal, k)


def _raw_eigenvalue(lam: float, q: float, n: int, grid: RadialGrid, scheme: str = "weighted") -> float:
    if n >= grid.points:
        raise IndexOutOfSpectrum(f"state {n} does not exist on a {grid.points}-point grid")
    return DiscreteOperator.build(lam, q, grid, scheme).eigenvalue(n)


def _richardson(lam: float, q: float, n: int, grid: RadialGrid, scheme: str = "weighted") -> float:
    coarse = _raw_eigenvalue(lam, q, n, grid, scheme)
    fine = _raw_eigenvalue(lam, q, n, grid.refined(), scheme)
    return fine + (fine - coarse) / 3.0


def outer_turning_point(lam: float, q: float, eps: float) -> float:
    """Largest r with lam(lam-1)/r^2 - 2q/r = eps (eps < 0)."""
    if eps >= 0.0:
        return math.inf
    disc = q * q + eps * lam * (lam - 1.0)
    return (-q - math.sqrt(max(disc, 0.0))) / eps


def fd_eigenvalue(
    lam: float,
    q: float,
    n: int,
    grid: RadialGrid | None = None,
    richardson: bool = True,
    scheme: str = "weighted",
) -> float:
    """(n+1)-th smallest eigenvalue of the discretized effective operator,
    Richardson-extrapolated over spacings h and h/2 unless disabled."""
    if not lam > 0.0:
        raise ValueError("lambda must be positive")
    if not q > 0.0:
        raise UnboundState(f"q = {q} <= 0: the effective operator has no bound states")
    if grid is None:
        grid = default_grid(lam, q, n)
    if richardson:
        eps = _richardson(lam, q, n, grid, scheme)
    else:
        eps = _raw_eigenvalue(lam, q, n, grid, scheme)
    turning = outer_turning_point(lam, q, eps)
    if turning > CONFIG.turning_point_fraction * grid.r_max:
        raise GridTooSmall(
            f"state n={n} reaches r={turning:.4g} > {CONFIG.turning_point_fraction} * r_max "
            f"(r_max={grid.r_max:.4g}); increase --rmax"
        )
    return eps


def self_consistent_energy(
    couplings: Couplings,
    lam: float,
    n_r: int,
    branch=1,
    grid: RadialGrid | None = None,
    richardson: bool = True,
    scheme: str = "weighted",
) -> float:
    """Energy at which the discrete eigenvalue equals -(M^2 - E^2).

    The bracket comes from scanning the sign of the defect only.
    """
    sign = parse_branch(branch)
    M = couplings.mass
    if grid is None:
        # widest extent over the admissible q range, fixed for the whole solve
        q_ref = max(abs(couplings.q(M)), abs(couplings.q(-M)))
        if q_ref == 0.0:
            raise NoRootBracketed("no attraction for any energy: A1 = A2 = 0")
        grid = default_grid(lam, q_ref, n_r)
    refined = grid.refined()

    def defect(E):
        q = couplings.q(E)
        if richardson:
            coarse = _raw_eigenvalue(lam, q, n_r, grid, scheme)
            fine = _raw_eigenvalue(lam, q, n_r, refined, scheme)
            eps = fine + (fine - coarse) / 3.0
        else:
            eps = _raw_eigenvalue(lam, q, n_r, grid, scheme)
        return eps + M * M - E * E

    eps_edge = CONFIG.bracket_eps * M
    energies = np.linspace(-M + eps_edge, M - eps_edge, CONFIG.defect_scan_points)
    values = [defect(E) for E in energies]
    pairs = list(zip(energies[:-1], energies[1:], values[:-1], values[1:]))
    if sign < 0:
        candidates = [(a, b) for a, b, fa, fb in pairs if fa <= 0.0 < fb]
        chosen = candidates[0] if candidates else None
    else:
        candidates = [(a, b) for a, b, fa, fb in pairs if fa > 0.0 >= fb]
        chosen = candidates[-1] if candidates else None
    if chosen is None:
        raise NoRootBracketed(f"defect has no sign change on the {'+' if sign > 0 else '-'} side")
    E = find_root(defect, Bracket.certify(defect, *chosen), tol=1e-14 * M)
    q = couplings.q(E)
    if q > 0.0:
        eps = defect(E) - M * M + E * E
        turning = outer_turning_point(lam, q, eps)
        if turning > CONFIG.turning_point_fraction * grid.r_max:
            raise GridTooSmall(
                f"self-consistent state reaches r={turning:.4g}, beyond "
                f"{CONFIG.turning_point_fraction} * r_max={grid.r_max:.4g}; increase --rmax"
            )
    return E
