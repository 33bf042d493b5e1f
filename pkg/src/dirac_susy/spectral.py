"""Couplings, quantum numbers and the closed-form scalar quantities of the
Dirac problem with vector (-A1/r) and scalar (-A2/r) Coulomb potentials.

Energies are in natural units (hbar = c = 1). ``branch`` is +1 for the
upper (particle) root and -1 for the lower root of the level quadratic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateTransform, NoBoundState, NonBindingChannel
from .numerics import CONFIG, Bracket, find_root


def parse_branch(branch) -> int:
    if branch in (1, "+", "plus", "+1"):
        return 1
    if branch in (-1, "-", "minus", "-1"):
        return -1
    raise ValueError(f"unknown branch {branch!r}")


@dataclass(frozen=True)
class Couplings:
    a1: float
    a2: float
    mass: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.a1) and math.isfinite(self.a2)):
            raise ValueError("couplings must be finite")
        if not (self.mass > 0.0 and math.isfinite(self.mass)):
            raise ValueError(f"mass must be positive, got {self.mass}")

    def q(self, energy: float) -> float:
        """The combination E*A1 + M*A2 that sets the effective Coulomb strength."""
        return energy * self.a1 + self.mass * self.a2


@dataclass(frozen=True)
class Channel:
    kappa: int
    lam: float

    @classmethod
    def from_couplings(cls, kappa: int, couplings: Couplings) -> "Channel":
        return cls(kappa, effective_lambda(kappa, couplings))


@dataclass(frozen=True)
class KHat:
    k3: float
    kminus: float
    kplus: float
    c: float
    d: float
    ksq: float


@dataclass(frozen=True)
class EnergyLevel:
    n_r: int
    branch: int
    energy: float
    nhat: float
    gamma: float
    a_sq: float


def effective_lambda(kappa: int, couplings: Couplings) -> float:
    if kappa == 0 or int(kappa) != kappa:
        raise ValueError(f"kappa must be a nonzero integer, got {kappa}")
    lam_sq = kappa * kappa - couplings.a1**2 + couplings.a2**2
    if not lam_sq > 0.0:
        raise NonBindingChannel(
            f"kappa^2 - A1^2 + A2^2 = {lam_sq:.6g} <= 0 for kappa={kappa}, "
            f"A1={couplings.a1}, A2={couplings.a2}: no real effective lambda"
        )
    return math.sqrt(lam_sq)


def k_hat(E: float, couplings: Couplings, lam: float, kappa: int, c: float = 1.0, d: float = 1.0) -> KHat:
    """Entries of S^-1 (M rho_1 + i E rho_2) S in the diagonal basis."""
    if c * d == 0.0:
        raise DegenerateTransform("similarity parameters c and d must be nonzero")
    M, a1, a2 = couplings.mass, couplings.a1, couplings.a2
    s = abs(kappa) + lam
    kminus = (s * s * (M + E) - (a1 - a2) ** 2 * (M - E)) * d / (2.0 * c * lam * s)
    kplus = (s * s * (M - E) - (a1 + a2) ** 2 * (M + E)) * c / (2.0 * d * lam * s)
    return KHat(
        k3=couplings.q(E) / lam,
        kminus=kminus,
        kplus=kplus,
        c=c,
        d=d,
        ksq=M * M - E * E,
    )


def a_squared(E: float, couplings: Couplings, lam: float) -> float:
    M = couplings.mass
    return (couplings.q(E) ** 2 - (M * M - E * E) * lam * lam) / (M * M)


def ground_state_energy(couplings: Couplings, lam: float, branch=1) -> float:
    """E0 from the a^2 = 0 condition, in the form printed for the ground state."""
    sign = parse_branch(branch)
    a1, a2 = couplings.a1, couplings.a2
    den = lam * lam + a1 * a1
    disc = 1.0 - (a1 * a1 + a2 * a2) / den + (a1 * a2) ** 2 / den**2
    if disc < 0.0:
        raise NoBoundState(f"negative discriminant {disc:.3g} for lambda={lam}")
    return couplings.mass * (sign * math.sqrt(disc) - a1 * a2 / den)


def level_energy_closed(couplings: Couplings, nhat: float, branch=1) -> float:
    sign = parse_branch(branch)
    if not nhat > 0.0:
        raise ValueError(f"nhat must be positive, got {nhat}")
    a1, a2 = couplings.a1, couplings.a2
    den = nhat * nhat + a1 * a1
    disc = (a1 * a2) ** 2 / den**2 + (nhat * nhat - a2 * a2) / den
    if disc < 0.0:
        raise NoBoundState(f"negative discriminant {disc:.3g} for nhat={nhat}")
    return couplings.mass * (-a1 * a2 / den + sign * math.sqrt(disc))


def level_quadratic(E: float, couplings: Couplings, nhat: float) -> float:
    """E^2 nhat^2 + (E A1 + M A2)^2 - M^2 nhat^2; zero exactly at a level."""
    M = couplings.mass
    return (E * E - M * M) * nhat * nhat + couplings.q(E) ** 2


def quadratic_residual(E: float, couplings: Couplings, nhat: float) -> float:
    """Relative residual of the level quadratic, scaled by its largest term."""
    M, a1, a2 = couplings.mass, couplings.a1, couplings.a2
    terms = (E * E * (nhat * nhat + a1 * a1), 2.0 * E * M * a1 * a2, (M * a2) ** 2, (M * nhat) ** 2)
    res = terms[0] + terms[1] + terms[2] - terms[3]
    return abs(res) / max(abs(t) for t in terms)


def gamma_factor(E: float, couplings: Couplings) -> float:
    if E == 0.0:
        return math.inf
    return couplings.a1 + couplings.mass * couplings.a2 / E


def level_energy_implicit(couplings: Couplings, lam: float, n_r: int, branch=1) -> EnergyLevel:
    """Solve the self-referential level condition
    E = M / sqrt(1 + gamma(E)^2 / (lam + n_r)^2) as a bracketed root of the
    level quadratic; the closed form is never consulted."""
    sign = parse_branch(branch)
    if n_r < 0:
        raise ValueError("n_r must be nonnegative")
    M, a1, a2 = couplings.mass, couplings.a1, couplings.a2
    nhat = n_r + lam

    def g(E):
        return level_quadratic(E, couplings, nhat)

    # the quadratic opens upward; its vertex separates the two roots
    vertex = -M * a1 * a2 / (nhat * nhat + a1 * a1)
    if g(vertex) > 0.0:
        raise NoBoundState(f"no bound level for n_r={n_r}, lambda={lam}")
    eps = CONFIG.bracket_eps * M
    edge = M if sign > 0 else -M
    inner = edge - sign * eps
    if g(inner) * g(vertex) > 0.0:
        # root within eps of |E| = M (free limit); g(+-M) >= 0 always
        inner = edge
    lo, hi = (vertex, inner) if sign > 0 else (inner, vertex)
    E = find_root(g, Bracket.certify(g, lo, hi), tol=1e-15 * M)
    return EnergyLevel(
        n_r=n_r,
        branch=sign,
        energy=E,
        nhat=nhat,
        gamma=gamma_factor(E, couplings),
        a_sq=a_squared(E, couplings, lam),
    )


def spectrum(couplings: Couplings, kappa: int, n_r_max: int, branch=1) -> list[EnergyLevel]:
    lam = effective_lambda(kappa, couplings)
    return [level_energy_implicit(couplings, lam, n, branch) for n in range(n_r_max + 1)]
