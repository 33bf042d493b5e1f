"""Command-line interface.

    dirac-susy spectrum     closed-form level table
    dirac-susy wavefunction sampled radial components of one level
    dirac-susy verify       run the invariant checks, exit 1 on failure
    dirac-susy compare      closed form against the finite-difference oracle

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
1 invariant failure, 2 physics-domain error, 3 numeric degeneracy.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import ladder, spectral
from .errors import DiracSusyError
from .oracle import RadialGrid, default_grid, fd_eigenvalue, self_consistent_energy

FAULT_REMAINDER_BIAS = 1e-6


@dataclass(frozen=True)
class RunConfig:
    command: str
    a1: float = 0.5
    a2: float = 0.5
    mass: float = 1.0
    kappa: int = -1
    n_r_max: int = 3
    n_r: int = 0
    branch: str = "plus"
    format: str = "json"
    r_max: float | None = None
    points: int = 8000
    richardson: bool = True
    scheme: str = "weighted"
    samples: int = 201
    sample_r_min: float = 0.0
    sample_r_max: float | None = None
    normalization: str = "component"
    basis: str = "physical"
    c: float = 1.0
    d: float = 1.0
    inject_fault: bool = False

    @property
    def couplings(self) -> spectral.Couplings:
        return spectral.Couplings(self.a1, self.a2, self.mass)

    @property
    def branches(self) -> list[int]:
        return {"plus": [1], "minus": [-1], "both": [1, -1]}[self.branch]


def _clean(x):
    """JSON-safe floats: non-finite values become null."""
    if isinstance(x, float):
        return x if math.isfinite(x) else None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.floating):
        return _clean(float(x))
    return x


def _dump_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _dump_csv(header: list[str], rows: list[list], comments: list[str] = ()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _sign_label(sign: int) -> str:
    return "+" if sign > 0 else "-"


def _note_minus(cfg: RunConfig):
    if -1 in cfg.branches:
        print("note: output includes the lower (-) branch of the level quadratic", file=sys.stderr)


def _channel(cfg: RunConfig) -> dict:
    lam = spectral.effective_lambda(cfg.kappa, cfg.couplings)
    return {"kappa": cfg.kappa, "lambda": lam}


# spectrum

SPECTRUM_COLUMNS = ["n_r", "nhat", "branch", "energy", "energy_over_mass", "a_sq", "gamma"]


def cmd_spectrum(cfg: RunConfig) -> tuple[str, int]:
    channel = _channel(cfg)
    lam = channel["lambda"]
    rows = []
    for sign in cfg.branches:
        for n in range(cfg.n_r_max + 1):
            nhat = n + lam
            E = spectral.level_energy_closed(cfg.couplings, nhat, sign)
            rows.append(
                {
                    "n_r": n,
                    "nhat": nhat,
                    "branch": _sign_label(sign),
                    "energy": E,
                    "energy_over_mass": E / cfg.mass,
                    "a_sq": spectral.a_squared(E, cfg.couplings, lam),
                    "gamma": spectral.gamma_factor(E, cfg.couplings),
                }
            )
    _note_minus(cfg)
    if cfg.format == "csv":
        return _dump_csv(SPECTRUM_COLUMNS, [[r[k] for k in SPECTRUM_COLUMNS] for r in rows]), 0
    return _dump_json({"meta": asdict(cfg), "channel": channel, "levels": rows}), 0


# wavefunction


def build_level_pair(cfg: RunConfig, n_r: int, sign: int):
    """Normalized pair for one level in the configured basis."""
    couplings = cfg.couplings
    lam = spectral.effective_lambda(cfg.kappa, couplings)
    level = spectral.level_energy_implicit(couplings, lam, n_r, sign)
    pair, kh = ladder.hatted_pair(couplings, cfg.kappa, lam, level, cfg.c, cfg.d)
    if cfg.basis == "physical":
        S = ladder.similarity_S(cfg.c, cfg.d, couplings, lam, cfg.kappa)
        pair = ladder.to_physical(pair, S)
    pair, raw_norm = ladder.normalize_pair(pair, cfg.normalization)
    return lam, level, kh, pair, raw_norm


def cmd_wavefunction(cfg: RunConfig) -> tuple[str, int]:
    sign = cfg.branches[0]
    lam, level, kh, pair, raw_norm = build_level_pair(cfg, cfg.n_r, sign)
    q = cfg.couplings.q(level.energy)
    r_hi = cfg.sample_r_max
    if r_hi is None:
        r_hi = 10.0 * (lam + cfg.n_r + 1) ** 2 / q
    resolved = asdict(cfg) | {"sample_r_max": r_hi}
    r = np.linspace(cfg.sample_r_min, r_hi, cfg.samples) if cfg.samples > 0 else np.zeros(0)
    F, G = pair.lower(r), pair.upper(r)
    hat = "_hat" if cfg.basis == "hatted" else ""
    _note_minus(cfg)
    if cfg.format == "csv":
        comments = [
            f"level n_r={level.n_r} branch={_sign_label(sign)} energy={level.energy:.17g}",
            f"F{hat}: " + json.dumps(_clean(pair.lower.describe())),
            f"G{hat}: " + json.dumps(_clean(pair.upper.describe())),
        ]
        rows = [[float(a), float(b), float(c)] for a, b, c in zip(r, F, G)]
        return _dump_csv(["r", f"F{hat}", f"G{hat}"], rows, comments), 0
    out = {
        "meta": resolved,
        "channel": {"kappa": cfg.kappa, "lambda": lam},
        "level": {
            "n_r": level.n_r,
            "branch": _sign_label(sign),
            "energy": level.energy,
            "nhat": level.nhat,
            "q": q,
            "a_sq": level.a_sq,
        },
        "k_hat": {"k3": kh.k3, "kminus": kh.kminus, "kplus": kh.kplus},
        "functions": {
            "basis": cfg.basis,
            "normalization": cfg.normalization,
            "norm_before_scaling": raw_norm,
            "lower": pair.lower.describe(),
            "upper": pair.upper.describe(),
        },
        "columns": ["r", f"F{hat}", f"G{hat}"],
        "samples": [[float(a), float(b), float(c)] for a, b, c in zip(r, F, G)],
    }
    return _dump_json(out), 0


# verify

TOL = {
    "shape_invariance": 1e-12,
    "reductions": 1e-12,
    "branch_consistency": 1e-10,
    "quadratic_residual": 1e-11,
    "ground_state_identity": 1e-12,
    "annihilation": 1e-14,
    "eigen_equation": 1e-10,
    "factorization_eigenvalue": 1e-10,
    "intertwining": 1e-9,
    "commutator": 1e-10,
    "a_squared_ground": 1e-10,
    "a_squared_remainder": 1e-10,
}


def check_shape_invariance(samples: int = 10_000, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    r = rng.uniform(1e-3, 50.0, samples)
    lam = rng.uniform(0.3, 5.0, samples)
    q = rng.uniform(0.1, 3.0, samples)
    vp = ladder.v_plus(r, lam, q)
    vm = ladder.v_minus(r, lam + 1.0, q)
    rem = q * q / lam**2 - q * q / (lam + 1.0) ** 2
    return float(np.max(np.abs(vp - vm - rem) / np.maximum(1.0, np.abs(vp))))


def check_reductions(nhats=(0.5, 1.0, 1.7, 2.5, 4.0)) -> float:
    worst = 0.0
    alpha = 0.0072973525693
    for nhat in nhats:
        for A in (0.1, 0.5, 0.9, alpha):
            coulomb = spectral.level_energy_closed(spectral.Couplings(A, 0.0), nhat, 1)
            worst = max(worst, abs(coulomb - nhat / math.sqrt(nhat * nhat + A * A)))
            if A < nhat:
                for sign in (1, -1):
                    scalar = spectral.level_energy_closed(spectral.Couplings(0.0, A), nhat, sign)
                    worst = max(worst, abs(scalar - sign * math.sqrt(1.0 - A * A / (nhat * nhat))))
            mixed = spectral.level_energy_closed(spectral.Couplings(A, A), nhat, 1)
            worst = max(worst, abs(mixed - (nhat**2 - A * A) / (nhat**2 + A * A)))
    return worst


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    checks = []

    def record(name, residual, tol=None, status=None, detail=""):
        tol = TOL[name] if tol is None else tol
        if status is None:
            status = "PASS" if residual < tol else "FAIL"
        checks.append({"check": name, "status": status, "residual": residual, "tolerance": tol, "detail": detail})

    record("shape_invariance", check_shape_invariance(), detail="10^4 random (r, lam, q)")
    record("reductions", check_reductions(), detail="Coulomb, pure scalar, A1 = A2 limits")

    couplings = cfg.couplings
    try:
        lam = spectral.effective_lambda(cfg.kappa, couplings)
    except DiracSusyError as exc:
        for name in (
            "branch_consistency",
            "quadratic_residual",
            "ground_state_identity",
            "annihilation",
            "eigen_equation",
            "factorization_eigenvalue",
            "intertwining",
            "commutator",
            "a_squared_ground",
            "a_squared_remainder",
        ):
            record(name, None, status="SKIP", detail=f"{type(exc).__name__}: {exc}")
        return _verify_output(cfg, checks)

    levels = {}
    worst_branch = worst_quad = 0.0
    for sign in (1, -1):
        for n in range(cfg.n_r_max + 1):
            lvl = spectral.level_energy_implicit(couplings, lam, n, sign)
            closed = spectral.level_energy_closed(couplings, n + lam, sign)
            worst_branch = max(worst_branch, _rel(lvl.energy, closed))
            worst_quad = max(worst_quad, spectral.quadratic_residual(closed, couplings, n + lam))
            levels[sign, n] = lvl
    record("branch_consistency", worst_branch, detail="implicit root vs closed form, both branches")
    record("quadratic_residual", worst_quad)
    worst = max(
        _rel(spectral.ground_state_energy(couplings, lam, s), spectral.level_energy_closed(couplings, lam, s))
        for s in (1, -1)
    )
    record("ground_state_identity", worst)

    plus = [levels[1, n] for n in range(cfg.n_r_max + 1)]
    record("a_squared_ground", abs(plus[0].a_sq))
    worst = 0.0
    for lvl in plus[1:]:
        q = couplings.q(lvl.energy)
        worst = max(worst, _rel(lvl.a_sq * cfg.mass**2 / lam**2, ladder.remainder_sum(lam, q, lvl.n_r)))
    record("a_squared_remainder", worst)

    q0 = couplings.q(plus[0].energy)
    if q0 <= 0.0:
        for name in ("annihilation", "eigen_equation", "factorization_eigenvalue", "intertwining", "commutator"):
            record(name, None, status="SKIP", detail="q <= 0: no normalizable ladder states")
        return _verify_output(cfg, checks)

    F0 = ladder.ground_state_F(lam, q0)
    raw = ladder.apply_A_minus(F0, lam, q0, canonical=False)
    record("annihilation", raw.max_coeff() / F0.max_coeff())

    worst_eig = worst_fact = worst_int = worst_comm = 0.0
    for lvl in plus:
        n = lvl.n_r
        q = couplings.q(lvl.energy)
        F = ladder.excited_state_F(n, lam, q)
        eig = q * q / lam**2 - q * q / (lam + n) ** 2
        worst_eig = max(worst_eig, ladder.eigen_residual(F, lam, q, eig))
        fact = lvl.a_sq * cfg.mass**2 / lam**2
        worst_fact = max(worst_fact, _rel(eig, fact) if n else abs(eig - fact))
        kh = spectral.k_hat(lvl.energy, couplings, lam, cfg.kappa, cfg.c, cfg.d)
        G = ladder.upper_component_hatted(F, lam, q, kh)
        r_up, r_down = ladder.intertwining_residuals(F, G, lam, q, kh)
        # at n = 0 only A- F = -kplus G applies: kplus vanishes and G is zero
        worst_int = max(worst_int, r_down if n == 0 else max(r_up, r_down))
        # evaluated at lam + 1 so R(lam) stays clear of its pole at 1
        member = ladder.excited_state_F(n, lam + 1.0, q)
        bias = FAULT_REMAINDER_BIAS if cfg.inject_fault else 0.0
        worst_comm = max(worst_comm, ladder.ladder_commutator_residual(member, lam + 1.0, q, bias))
    record("eigen_equation", worst_eig, detail=f"n_r <= {cfg.n_r_max}")
    record("factorization_eigenvalue", worst_fact)
    record("intertwining", worst_int, detail="both relations for n_r >= 1; A- F = -kplus G at n_r = 0")
    record("commutator", worst_comm, detail="F-hat family at lam + 1" + (" [fault injected]" if cfg.inject_fault else ""))
    return _verify_output(cfg, checks)


def _verify_output(cfg: RunConfig, checks: list[dict]) -> tuple[str, int]:
    failed = any(c["status"] == "FAIL" for c in checks)
    code = 1 if failed else 0
    if cfg.format == "csv":
        cols = ["check", "status", "residual", "tolerance", "detail"]
        rows = [["" if c[k] is None else c[k] for k in cols] for c in checks]
        return _dump_csv(cols, rows), code
    return _dump_json({"meta": asdict(cfg), "checks": checks, "passed": not failed}), code


# compare

COMPARE_TOL = 1e-5
COMPARE_COLUMNS = ["n_r", "branch", "energy_closed", "energy_oracle", "abs_delta", "tolerance", "r_max", "points"]


def cmd_compare(cfg: RunConfig) -> tuple[str, int]:
    couplings = cfg.couplings
    channel = _channel(cfg)
    lam = channel["lambda"]
    rows = []
    for sign in cfg.branches:
        for n in range(cfg.n_r_max + 1):
            closed = spectral.level_energy_closed(couplings, n + lam, sign)
            if cfg.r_max is not None:
                grid = RadialGrid(cfg.r_max, cfg.points)
            else:
                q_ref = max(abs(couplings.q(cfg.mass)), abs(couplings.q(-cfg.mass)))
                grid = RadialGrid(default_grid(lam, q_ref, n).r_max, cfg.points)
            oracle = self_consistent_energy(couplings, lam, n, sign, grid, cfg.richardson, cfg.scheme)
            rows.append(
                {
                    "n_r": n,
                    "branch": _sign_label(sign),
                    "energy_closed": closed,
                    "energy_oracle": oracle,
                    "abs_delta": abs(closed - oracle),
                    "tolerance": COMPARE_TOL * cfg.mass,
                    "r_max": grid.r_max,
                    "points": grid.points,
                }
            )
    _note_minus(cfg)
    code = 1 if any(r["abs_delta"] >= r["tolerance"] for r in rows) else 0
    if cfg.format == "csv":
        return _dump_csv(COMPARE_COLUMNS, [[r[k] for k in COMPARE_COLUMNS] for r in rows]), code
    return _dump_json({"meta": asdict(cfg), "channel": channel, "levels": rows}), code


COMMANDS = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "verify": cmd_verify,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a1", type=float, default=0.5, help="vector Coulomb strength A1 (default 0.5)")
    common.add_argument("--a2", type=float, default=0.5, help="scalar Coulomb strength A2 (default 0.5)")
    common.add_argument("--mass", type=float, default=1.0, help="mass M (default 1)")
    common.add_argument("--kappa", type=int, default=-1, help="Dirac quantum number (default -1)")
    common.add_argument("--nr-max", dest="n_r_max", type=int, default=3, help="highest radial quantum number (default 3)")
    common.add_argument("--nr", dest="n_r", type=int, default=0, help="level for 'wavefunction' (default 0)")
    common.add_argument("--branch", choices=["plus", "minus", "both"], default="plus")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--rmax", dest="r_max", type=float, default=None, help="oracle box size (default: automatic)")
    common.add_argument("--points", type=int, default=8000, help="oracle grid points (default 8000)")
    common.add_argument("--no-richardson", dest="richardson", action="store_false", help="raw oracle eigenvalues")
    common.add_argument("--scheme", choices=["weighted", "plain"], default="weighted", help="oracle discretization")
    common.add_argument("--samples", type=int, default=201, help="wavefunction sample count (default 201)")
    common.add_argument("--sample-rmin", dest="sample_r_min", type=float, default=0.0)
    common.add_argument("--sample-rmax", dest="sample_r_max", type=float, default=None)
    common.add_argument("--normalization", choices=["component", "joint"], default="component")
    common.add_argument("--basis", choices=["hatted", "physical"], default="physical")
    common.add_argument("--c", type=float, default=1.0, help="similarity parameter c (default 1)")
    common.add_argument("--d", type=float, default=1.0, help="similarity parameter d (default 1)")
    common.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="dirac-susy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__name__.removeprefix("cmd_"))
    return parser


def _report_error(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": message, "exit_code": code}), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    try:
        text, code = COMMANDS[cfg.command](cfg)
    except DiracSusyError as exc:
        return _report_error(type(exc).__name__, str(exc), exc.exit_code)
    except ValueError as exc:
        return _report_error("InvalidInput", str(exc), 2)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
