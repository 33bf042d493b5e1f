"""Factorization operators, shape invariance and ladder construction of the
radial eigenfunctions in the diagonal (hatted) basis, plus the similarity
transform back to the physical upper/lower components.

Conventions: q = E*A1 + M*A2 and

    A+-(lam) = +-d/dr + lam/r - q/lam
    H_-(lam) = A+ A- = -d2/dr2 + V_-(r; lam)
    H_+(lam) = A- A+ = -d2/dr2 + V_+(r; lam)

Parameter translation T = exp(d/dlam) acts on lam-parametrised families of
functions, so a ladder operator maps a family (callable lam -> PolyExp) to a
new family.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DegenerateKPlus,
    DegenerateTransform,
    DepthLimit,
    IrregularResult,
    OriginSingularity,
    PoleAtOne,
    UnboundState,
)
from .numerics import CONFIG
from .polyexp import PolyExpFunction, aligned, coeff_residual, norm, overlap
from .spectral import Couplings, EnergyLevel, KHat, k_hat

Family = Callable[[float], PolyExpFunction]


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise OriginSingularity("partner potentials are singular at r <= 0")
    return r


def v_minus(r, lam: float, q: float):
    r = _check_r(r)
    return lam * (lam - 1.0) / r**2 - 2.0 * q / r + q * q / lam**2


def v_plus(r, lam: float, q: float):
    r = _check_r(r)
    return lam * (lam + 1.0) / r**2 - 2.0 * q / r + q * q / lam**2


@dataclass(frozen=True)
class PartnerPotential:
    variant: str  # "minus" or "plus"
    lam: float
    q: float

    @property
    def constant(self) -> float:
        return self.q**2 / self.lam**2

    def __call__(self, r):
        fn = v_minus if self.variant == "minus" else v_plus
        return fn(r, self.lam, self.q)


def remainder_R(lam: float, q: float) -> float:
    """Shape-invariance remainder at argument lam: q^2/(lam-1)^2 - q^2/lam^2,
    so that V_+(r; lam) = V_-(r; lam+1) + remainder_R(lam+1)."""
    if lam == 1.0:
        raise PoleAtOne("remainder_R(1) has a pole; arguments are lam+i with i >= 1")
    return q * q / (lam - 1.0) ** 2 - q * q / lam**2


def remainder_sum(lam: float, q: float, n: int) -> float:
    return sum(remainder_R(lam + i, q) for i in range(1, n + 1))


def _apply_A(sign: int, f: PolyExpFunction, lam: float, q: float, canonical: bool = True) -> PolyExpFunction:
    out = f.derivative().scaled(sign) + f.times_rpow(-1).scaled(lam) + f.scaled(-q / lam)
    return out.canonical() if canonical else out


def apply_A_plus(f: PolyExpFunction, lam: float, q: float, canonical: bool = True) -> PolyExpFunction:
    out = _apply_A(+1, f, lam, q, canonical)
    if canonical and not out.is_regular:
        raise IrregularResult(f"A+ output has power {out.power} <= 0")
    return out


def apply_A_minus(f: PolyExpFunction, lam: float, q: float, canonical: bool = True) -> PolyExpFunction:
    out = _apply_A(-1, f, lam, q, canonical)
    if canonical and not out.is_regular:
        raise IrregularResult(f"A- output has power {out.power} <= 0")
    return out


def _H_minus_terms(f: PolyExpFunction, lam: float, q: float) -> list[PolyExpFunction]:
    return [
        -f.derivative().derivative(),
        f.times_rpow(-2).scaled(lam * (lam - 1.0)),
        f.times_rpow(-1).scaled(-2.0 * q),
        f.scaled(q * q / lam**2),
    ]


def apply_H_minus(f: PolyExpFunction, lam: float, q: float) -> PolyExpFunction:
    """-f'' + V_-(r; lam) f, evaluated directly (not through A+ A-)."""
    terms = _H_minus_terms(f, lam, q)
    out = terms[0]
    for t in terms[1:]:
        out = out + t
    return out.canonical()


def ground_state_F(lam: float, q: float) -> PolyExpFunction:
    """Lower component annihilated by A-(lam): r^lam exp(-q r / lam)."""
    if not q > 0.0:
        raise UnboundState(f"q = E*A1 + M*A2 = {q} <= 0: ground state not normalizable")
    if not lam > 0.0:
        raise ValueError("lambda must be positive")
    return PolyExpFunction(lam, q / lam, (1.0,))


def ground_family(q: float) -> Family:
    return lambda lam: ground_state_F(lam, q)


def raise_family(family: Family, q: float) -> Family:
    """B+ = A+(lam) T(lam): (B+ g)(lam) = A+(lam) g(lam + 1)."""
    return lambda lam: _apply_A(+1, family(lam + 1.0), lam, q)


def lower_family(family: Family, q: float) -> Family:
    """B- = T^dagger(lam) A-(lam): (B- g)(lam) = A-(lam - 1) g(lam - 1)."""
    return lambda lam: _apply_A(-1, family(lam - 1.0), lam - 1.0, q)


def excited_state_F(n: int, lam: float, q: float) -> PolyExpFunction:
    """(B+)^n applied to the ground-state family, evaluated at lam.

    ``q`` must be built from the energy of the target level n.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > CONFIG.depth_limit:
        raise DepthLimit(f"n = {n} exceeds the ladder depth limit {CONFIG.depth_limit}")
    if not q > 0.0:
        raise UnboundState(f"q = E*A1 + M*A2 = {q} <= 0: state not normalizable")
    family = ground_family(q)
    for _ in range(n):
        family = raise_family(family, q)
    f = family(lam)
    # the recursion lands on power lam up to rounding in the lam+n-1-... chain
    if abs(f.power - lam) > 1e-9 * max(1.0, lam):
        raise IrregularResult(f"ladder chain produced power {f.power}, expected {lam}")
    return PolyExpFunction(lam, f.rate, f.coeffs)


def upper_component_hatted(F: PolyExpFunction, lam: float, q: float, khat: KHat) -> PolyExpFunction:
    """G-hat from A- F-hat = -kplus G-hat."""
    aF = apply_A_minus(F, lam, q)
    if aF.is_zero:
        return PolyExpFunction.zero(F.power, F.rate)
    if khat.kplus == 0.0:
        raise DegenerateKPlus("kplus = 0: upper component not determined by A- F = -kplus G")
    return aF.scaled(-1.0 / khat.kplus)


def intertwining_residuals(F: PolyExpFunction, G: PolyExpFunction, lam: float, q: float, khat: KHat) -> tuple[float, float]:
    """Coefficient residuals of A+ G = kminus F and A- F = -kplus G."""
    r1 = coeff_residual(_apply_A(+1, G, lam, q), F.scaled(khat.kminus))
    r2 = coeff_residual(_apply_A(-1, F, lam, q), G.scaled(-khat.kplus))
    return r1, r2


def eigen_residual(f: PolyExpFunction, lam: float, q: float, eigenvalue: float) -> float:
    """Coefficient residual of H_- f - eigenvalue f, relative to the largest
    coefficient of any single term of H_- f (the ground state has eigenvalue
    0, where both sides are pure cancellation)."""
    scale = max(t.max_coeff() for t in _H_minus_terms(f, lam, q))
    if scale == 0.0:
        return 0.0
    return coeff_residual(apply_H_minus(f, lam, q), f.scaled(eigenvalue), scale=scale)


def ladder_commutator_residual(f: PolyExpFunction, lam: float, q: float, remainder_bias: float = 0.0) -> float:
    """Max relative coefficient residual of [B-, B+] f - R(lam) f.

    ``f`` is the member at ``lam`` of the family being acted on; the shifts
    carried by T and T^dagger cancel inside the commutator, so the family is
    only ever evaluated at ``lam`` itself. ``remainder_bias`` perturbs R and
    exists for fault-injection tests.
    """

    def family(lam_):
        if abs(lam_ - lam) > 1e-12 * max(1.0, lam):
            raise AssertionError(f"family evaluated at {lam_}, expected {lam}")
        return f

    down_up = lower_family(raise_family(family, q), q)(lam)
    up_down = raise_family(lower_family(family, q), q)(lam)
    R = remainder_R(lam, q) + remainder_bias
    comm = down_up - up_down
    scale = max(down_up.max_coeff(), up_down.max_coeff(), abs(R) * f.max_coeff())
    _, a, b = _aligned_padded(comm, f.scaled(R))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(a - b)) / scale)


def _aligned_padded(f, g):
    base, a, b = aligned(f, g)
    n = max(len(a), len(b))
    return base, np.pad(a, (0, n - len(a))), np.pad(b, (0, n - len(b)))


# physical basis


def interaction_matrix(couplings: Couplings, kappa: int) -> np.ndarray:
    """Lambda = |kappa| rho_3 + A2 rho_1 - i A1 rho_2 (a real matrix)."""
    k = abs(kappa)
    a1, a2 = couplings.a1, couplings.a2
    return np.array([[k, a2 - a1], [a2 + a1, -k]], dtype=float)


def momentum_matrix(E: float, couplings: Couplings) -> np.ndarray:
    """k.rho = M rho_1 + i E rho_2."""
    M = couplings.mass
    return np.array([[0.0, M + E], [M - E, 0.0]])


def similarity_S(c: float, d: float, couplings: Couplings, lam: float, kappa: int) -> np.ndarray:
    s = lam + abs(kappa)
    a1, a2 = couplings.a1, couplings.a2
    if c * d == 0.0 or s <= 0.0:
        raise DegenerateTransform("similarity transform needs c, d != 0 and lam + |kappa| > 0")
    S = np.array([[c, d * (a1 - a2) / s], [c * (a1 + a2) / s, d]])
    det = c * d * (1.0 - (a1 * a1 - a2 * a2) / (s * s))
    if det == 0.0:
        raise DegenerateTransform("det S = 0")
    return S


@dataclass(frozen=True)
class SpinorRadialPair:
    lower: PolyExpFunction
    upper: PolyExpFunction
    basis: str = "hatted"  # or "physical"
    s_params: tuple[float, float] | None = None

    def scaled(self, alpha: float) -> "SpinorRadialPair":
        return SpinorRadialPair(self.lower.scaled(alpha), self.upper.scaled(alpha), self.basis, self.s_params)


def to_physical(pair: SpinorRadialPair, S: np.ndarray) -> SpinorRadialPair:
    """(G, F) = S (G-hat, F-hat)."""
    if pair.basis != "hatted":
        raise ValueError("to_physical expects a hatted pair")
    G_hat, F_hat = pair.upper, pair.lower
    G = (G_hat.scaled(S[0, 0]) + F_hat.scaled(S[0, 1])).canonical()
    F = (G_hat.scaled(S[1, 0]) + F_hat.scaled(S[1, 1])).canonical()
    return SpinorRadialPair(F, G, "physical", (float(S[0, 0]), float(S[1, 1])))


def hatted_pair(couplings: Couplings, kappa: int, lam: float, level: EnergyLevel, c: float = 1.0, d: float = 1.0) -> tuple[SpinorRadialPair, KHat]:
    q = couplings.q(level.energy)
    F = excited_state_F(level.n_r, lam, q)
    kh = k_hat(level.energy, couplings, lam, kappa, c, d)
    G = upper_component_hatted(F, lam, q, kh)
    return SpinorRadialPair(F, G, "hatted"), kh


def normalize_pair(pair: SpinorRadialPair, mode: str = "component") -> tuple[SpinorRadialPair, float]:
    """Scale a pair to unit norm of its lower component ("component") or of
    G^2 + F^2 ("joint"). Returns the scaled pair and the original norm."""
    if mode == "component":
        n = norm(pair.lower)
    elif mode == "joint":
        n = math.sqrt(overlap(pair.lower, pair.lower) + overlap(pair.upper, pair.upper))
    else:
        raise ValueError(f"unknown normalization mode {mode!r}")
    if n == 0.0:
        raise DegenerateTransform("cannot normalize a vanishing component")
    return pair.scaled(1.0 / n), n
