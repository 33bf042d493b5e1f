"""The nine acceptance criteria at their stated tolerances.

Each test logs its outcome to the ``acceptance`` fixture; a one-line
PASS/FAIL summary per criterion is printed at the end of the session.
"""
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from dirac_susy.ladder import (
    apply_A_minus,
    eigen_residual,
    excited_state_F,
    ground_state_F,
    hatted_pair,
    intertwining_residuals,
    ladder_commutator_residual,
    normalize_pair,
    remainder_R,
    remainder_sum,
    similarity_S,
    to_physical,
    v_minus,
    v_plus,
)
from dirac_susy.oracle import RadialGrid, default_grid, fd_eigenvalue, self_consistent_energy
from dirac_susy.spectral import (
    Couplings,
    a_squared,
    effective_lambda,
    level_energy_closed,
    level_energy_implicit,
)

ALPHA = 0.0072973525693
KAPPAS = (-3, -2, -1, 1, 2, 3)


def test_c1_closed_vs_implicit(acceptance):
    rng = np.random.default_rng(20240501)
    worst = 0.0
    for _ in range(500):
        a1, a2 = rng.uniform(0.0, 0.9, 2)
        kappa = int(rng.choice(KAPPAS))
        n_r = int(rng.integers(0, 6))
        c = Couplings(a1, a2)
        lam = effective_lambda(kappa, c)
        implicit = level_energy_implicit(c, lam, n_r).energy
        closed = level_energy_closed(c, lam + n_r)
        worst = max(worst, abs(implicit - closed) / abs(closed))
    ok = acceptance.record(1, worst < 1e-10, f"max rel diff {worst:.2e}")
    assert ok, worst


def test_c2_reductions(acceptance):
    worst = 0.0
    for kappa in KAPPAS:
        for n_r in range(4):
            for A in (ALPHA, 0.3, 0.7):
                coul = Couplings(A, 0.0)
                nh = effective_lambda(kappa, coul) + n_r
                got = level_energy_implicit(coul, nh - n_r, n_r).energy
                worst = max(worst, abs(got - nh / math.sqrt(nh * nh + A * A)))

                scal = Couplings(0.0, A)
                nh = effective_lambda(kappa, scal) + n_r
                for sign in (1, -1):
                    got = level_energy_implicit(scal, nh - n_r, n_r, sign).energy
                    worst = max(worst, abs(got - sign * math.sqrt(1 - A * A / (nh * nh))))

                eq = Couplings(A, A)
                nh = effective_lambda(kappa, eq) + n_r
                got = level_energy_implicit(eq, nh - n_r, n_r).energy
                worst = max(worst, abs(got - (nh * nh - A * A) / (nh * nh + A * A)))
    hyd = Couplings(ALPHA, 0.0)
    e_h = level_energy_implicit(hyd, effective_lambda(-1, hyd), 0).energy
    hyd_err = abs(e_h - math.sqrt(1 - ALPHA**2))
    ok = acceptance.record(2, worst < 1e-12 and hyd_err < 1e-12, f"max diff {worst:.2e}, hydrogen {hyd_err:.2e}")
    assert ok


def test_c3_shape_invariance(acceptance):
    rng = np.random.default_rng(7)
    r = rng.uniform(0.01, 100.0, 10_000)
    lam = rng.uniform(0.1, 6.0, 10_000)
    q = rng.uniform(-3.0, 3.0, 10_000)
    lhs = v_plus(r, lam, q)
    rhs = v_minus(r, lam + 1.0, q) + np.array([remainder_R(l + 1.0, qq) for l, qq in zip(lam, q)])
    scale = np.maximum.reduce([np.abs(lhs), lam * (lam + 1) / r**2, 2 * np.abs(q) / r, q * q / lam**2])
    worst = float(np.max(np.abs(lhs - rhs) / scale))
    ok = acceptance.record(3, worst < 1e-12, f"max rel {worst:.2e}")
    assert ok


@pytest.mark.parametrize("lam, q", [(1.0, 0.8), (0.8660254037844386, 0.5), (2.6, 1.3), (1.4, 0.05)])
def test_c4_ladder(acceptance, lam, q):
    worst = 0.0
    for n in range(6):
        F = excited_state_F(n, lam, q)
        worst = max(worst, eigen_residual(F, lam, q, q * q / lam**2 - q * q / (lam + n) ** 2))
    F0 = ground_state_F(lam, q)
    annihilated = apply_A_minus(F0, lam, q, canonical=False).max_coeff() / F0.max_coeff()
    F1 = excited_state_F(1, lam, q)
    node = -F1.coeffs[0] / F1.coeffs[1]
    structure = (
        F1.degree == 1
        and F1.power == lam
        and math.isclose(F1.rate, q / (lam + 1), rel_tol=1e-14)
        and math.isclose(node, lam * (lam + 1) / q, rel_tol=1e-13)
    )
    ok = acceptance.record(
        4,
        worst < 1e-10 and annihilated < 1e-14 and structure,
        f"lam={lam:.4g} q={q}: eigen {worst:.2e}, A-F0 {annihilated:.1e}, F1 ok={structure}",
    )
    assert ok


INTERTWINING_CASES = [(0.5, 0.5, -1), (0.3, 0.6, 2), (0.7, 0.2, -2), (0.0, 0.5, 1)]


@pytest.mark.parametrize("n", range(4))
def test_c5_intertwining(acceptance, n):
    worst = 0.0
    for a1, a2, kappa in INTERTWINING_CASES:
        c = Couplings(a1, a2)
        lam = effective_lambda(kappa, c)
        level = level_energy_implicit(c, lam, n)
        pair, kh = hatted_pair(c, kappa, lam, level)
        worst = max(worst, *intertwining_residuals(pair.lower, pair.upper, lam, c.q(level.energy), kh))
    ok = acceptance.record(5, worst < 1e-9, f"n={n}: residual {worst:.2e}")
    assert ok, f"intertwining residual {worst:.3e} at n={n}"


def test_c5_gauge_invariance(acceptance):
    c = Couplings(0.4, 0.6)
    kappa = 2
    lam = effective_lambda(kappa, c)
    rs = np.linspace(0.05, 30.0, 200)
    worst = 0.0
    for n in (1, 2, 3):
        level = level_energy_implicit(c, lam, n)
        ref = None
        for cc, dd in ((1.0, 1.0), (2.5, 1.0), (1.0, 0.3), (-1.7, 4.0)):
            pair, kh = hatted_pair(c, kappa, lam, level, cc, dd)
            phys, _ = normalize_pair(to_physical(pair, similarity_S(cc, dd, c, lam, kappa)), "joint")
            obs = np.concatenate([phys.upper(rs) ** 2 + phys.lower(rs) ** 2, [kh.kminus * kh.kplus, kh.k3]])
            if ref is None:
                ref = obs
            worst = max(worst, float(np.max(np.abs(obs - ref))))
    ok = acceptance.record(5, worst < 1e-10, f"(c,d) rescaling drift {worst:.2e}")
    assert ok


def test_c6_commutator(acceptance):
    worst = 0.0
    for lam in (1.5, 2.0, 2.7, 4.1):
        for q in (0.2, 0.9, 2.5):
            for n in range(5):
                worst = max(worst, ladder_commutator_residual(excited_state_F(n, lam, q), lam, q))
    ok = acceptance.record(6, worst < 1e-10, f"max residual {worst:.2e}")
    assert ok


@pytest.mark.parametrize("a1, a2, n_r", [(0.5, 0.5, 0), (0.5, 0.5, 1), (0.5, 0.0, 0), (0.0, 0.5, 0)])
def test_c7_self_consistent(acceptance, a1, a2, n_r):
    c = Couplings(a1, a2)
    lam = effective_lambda(-1, c)
    delta = abs(self_consistent_energy(c, lam, n_r) - level_energy_closed(c, lam + n_r))
    ok = acceptance.record(7, delta < 1e-5, f"({a1},{a2},n={n_r}) delta {delta:.2e}")
    assert ok


@pytest.mark.parametrize("lam, q, n", [(1.0, 0.8, 0), (1.0, 0.8, 1), (0.8660254037844386, 0.5, 0), (0.8944271909999159, 0.5, 0)])
def test_c7_fd_eigenvalue(acceptance, lam, q, n):
    exact = -q * q / (lam + n) ** 2
    rel = abs(fd_eigenvalue(lam, q, n) / exact - 1.0)
    grid = RadialGrid(default_grid(lam, q, n).r_max, 2000)
    e1 = abs(fd_eigenvalue(lam, q, n, grid, richardson=False) - exact)
    e2 = abs(fd_eigenvalue(lam, q, n, grid.refined(), richardson=False) - exact)
    ratio = e1 / e2
    ok = acceptance.record(7, rel < 1e-6 and 3.5 < ratio < 4.6, f"lam={lam:.4g} n={n}: rel {rel:.1e}, ratio {ratio:.2f}")
    assert ok


def test_c8_a_squared(acceptance):
    ground = remainder = 0.0
    for a1, a2, kappa in [(0.5, 0.5, -1), (0.2, 0.8, 2), (0.9, 0.1, -3), (0.0, 0.6, 1), (ALPHA, 0.0, -1)]:
        c = Couplings(a1, a2)
        lam = effective_lambda(kappa, c)
        ground = max(ground, abs(level_energy_implicit(c, lam, 0).a_sq))
        for n in range(1, 6):
            level = level_energy_implicit(c, lam, n)
            q = c.q(level.energy)
            lhs = a_squared(level.energy, c, lam) * c.mass**2 / lam**2
            rhs = remainder_sum(lam, q, n)
            remainder = max(remainder, abs(lhs / rhs - 1.0))
    ok = acceptance.record(8, ground < 1e-10 and remainder < 1e-10, f"a^2(E0) {ground:.1e}, sum rel {remainder:.1e}")
    assert ok


def _cli(*args):
    proc = subprocess.run([sys.executable, "-m", "dirac_susy", *args], capture_output=True, text=True, check=False)
    return proc.returncode, proc.stdout, proc.stderr


def test_c9_cli(acceptance):
    problems = []
    for args in (("spectrum", "--branch", "both"), ("wavefunction", "--nr", "2"), ("verify",), ("compare", "--nr-max", "0")):
        runs = [_cli(*args) for _ in range(2)]
        if runs[0][1] != runs[1][1] or not runs[0][1]:
            problems.append(f"{args[0]} not byte-identical")
    expected = {
        ("spectrum",): 0,
        ("verify", "--inject-fault"): 1,
        ("spectrum", "--a1", "1.5", "--a2", "0"): 2,
        ("wavefunction", "--d", "0"): 3,
    }
    for args, code in expected.items():
        rc, _, err = _cli(*args)
        if rc != code:
            problems.append(f"{' '.join(args)} exited {rc}, expected {code}")
        elif code >= 2 and json.loads(err.splitlines()[-1])["exit_code"] != code:
            problems.append(f"{' '.join(args)} error payload mismatch")
    ok = acceptance.record(9, not problems, "; ".join(problems) or "deterministic, exit codes 0/1/2/3")
    assert ok, problems
