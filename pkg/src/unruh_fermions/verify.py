"""The invariant and reproduction checks behind ``unruh-fermions verify``."""

from __future__ import annotations

import filecmp
import json
import math
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import oracle
from .fock import CANONICAL, Ordering
from .measures import hermitian_eigh, negativity
from .scenarios import (
    ANTIBOB_II,
    ANTIBOB_II_ANTIPARTICLE,
    ANTIBOB_II_PARTICLE,
    BOB_I,
    BOB_I_ANTIPARTICLE,
    BOB_I_PARTICLE,
    DISTINGUISHING,
    reduce_for,
    scenario_negativity,
)
from .states import (
    GAMMA_MAX,
    Family,
    SharedStateSpec,
    UnruhParams,
    antiparticle_from_operators,
    build_shared_state,
    particle_from_operators,
    unruh_antiparticle,
    unruh_particle,
    unruh_vacuum,
    vacuum_from_operators,
)
from .sweep import compute_records, preset, write_csv

Q_R_GRID = (0.25, 0.5, 0.73, 0.75, 0.85, 1.0)
ALPHAS = (math.pi / 4, math.pi / 18)
GAMMA_GRID = np.linspace(0.0, GAMMA_MAX, 181)
ZERO_TOL = 1e-9

# (family, fidelity) pairs checked at infinite acceleration.
CASES = (
    (Family.PHI_PLUS, None),
    (Family.PHI_MINUS, None),
    (Family.PHI_STAR, None),
    (Family.WERNER, 0.95),
    (Family.WERNER, 0.65),
)

# Detector configs with non-zero negativity somewhere on the gamma grid
# (alpha = pi/4), per family and q_R.
PATTERNS = (
    (Family.PHI_PLUS, 0.5, {BOB_I_PARTICLE, BOB_I_ANTIPARTICLE, ANTIBOB_II_PARTICLE}),
    (Family.PHI_MINUS, 1.0, {BOB_I_ANTIPARTICLE, ANTIBOB_II_PARTICLE}),
    (Family.PHI_MINUS, 0.75, {BOB_I_PARTICLE, BOB_I_ANTIPARTICLE, ANTIBOB_II_ANTIPARTICLE}),
)


@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "flagged"
    deviation: float
    detail: str = ""

    def line(self) -> str:
        return f"{self.status.upper():8s} {self.name:40s} dev={self.deviation:.3e}  {self.detail}"


def _neg(family, alpha, F, gamma, q_R, config, ordering):
    return scenario_negativity(family, alpha, F, UnruhParams(gamma, q_R), config, ordering).negativity


def _alphas(family):
    return (math.pi / 4,) if family is Family.WERNER else ALPHAS


def check_convergence(ordering: Ordering = CANONICAL) -> CheckResult:
    worst, where = 0.0, ""
    for family, F in CASES:
        for alpha in _alphas(family):
            for q_R in Q_R_GRID:
                n1 = _neg(family, alpha, F, GAMMA_MAX, q_R, BOB_I, ordering)
                n2 = _neg(family, alpha, F, GAMMA_MAX, q_R, ANTIBOB_II, ordering)
                if abs(n1 - n2) > worst:
                    worst, where = abs(n1 - n2), f"{family.value} F={F} alpha={alpha:.4f} qR={q_R}"
    return CheckResult("convergence at gamma=pi/4", "pass" if worst < ZERO_TOL else "fail", worst, where)


def check_qr_independence(ordering: Ordering = CANONICAL) -> CheckResult:
    worst, where = 0.0, ""
    for family, F in CASES:
        for alpha in _alphas(family):
            for config in (BOB_I, ANTIBOB_II):
                vals = [_neg(family, alpha, F, GAMMA_MAX, q, config, ordering) for q in Q_R_GRID]
                spread = max(vals) - min(vals)
                if spread > worst:
                    worst, where = spread, f"{family.value} F={F} alpha={alpha:.4f} {config}"
    return CheckResult("q_R independence at gamma=pi/4", "pass" if worst < ZERO_TOL else "fail", worst, where)


def check_zero_acceleration(ordering: Ordering = CANONICAL) -> CheckResult:
    worst = 0.0
    for alpha in np.linspace(0, math.pi / 2, 19):
        for family in (Family.PHI_PLUS, Family.PHI_MINUS):
            n = _neg(family, alpha, None, 0.0, 1.0, BOB_I, ordering)
            worst = max(worst, abs(n - 0.5 * abs(math.sin(2 * alpha))))
    for F in np.linspace(0, 1, 21):
        n = _neg(Family.WERNER, math.pi / 4, F, 0.0, 1.0, BOB_I, ordering)
        worst = max(worst, abs(n - max(0.0, (3 * F - 1) / 4)))
    return CheckResult("zero-acceleration limits", "pass" if worst < ZERO_TOL else "fail", worst)


def _grid_max(family, q_R, config, ordering, alpha=math.pi / 4, F=None):
    return max(_neg(family, alpha, F, float(g), q_R, config, ordering) for g in GAMMA_GRID)


def check_phi_star_separable(ordering: Ordering = CANONICAL) -> CheckResult:
    worst = 0.0
    for alpha in np.linspace(0, math.pi / 2, 7):
        for q_R in Q_R_GRID:
            for g in GAMMA_GRID:
                state = build_shared_state(SharedStateSpec(Family.PHI_STAR, alpha), UnruhParams(float(g), q_R))
                for config in DISTINGUISHING:
                    worst = max(worst, negativity(reduce_for(config, state, ordering)))
    return CheckResult("phi* separable (distinguishing)", "pass" if worst < ZERO_TOL else "fail", worst)


def check_patterns(ordering: Ordering = CANONICAL) -> list[CheckResult]:
    results = []
    for family, q_R, expected in PATTERNS:
        maxima = {c: _grid_max(family, q_R, c, ordering) for c in DISTINGUISHING}
        nonzero = {c for c, v in maxima.items() if v > ZERO_TOL}
        wrong = nonzero ^ expected
        detail = ", ".join(f"{c}={maxima[c]:.3g}" for c in DISTINGUISHING)
        dev = max((maxima[c] if c in nonzero else 0.0) for c in wrong) if wrong else 0.0
        results.append(CheckResult(
            f"pattern {family.value} qR={q_R}", "fail" if wrong else "pass", dev, detail
        ))
    return results


def check_monotonic(ordering: Ordering = CANONICAL) -> CheckResult:
    n1 = np.array([_neg(Family.PHI_PLUS, math.pi / 4, None, float(g), 1.0, BOB_I, ordering) for g in GAMMA_GRID])
    n2 = np.array([_neg(Family.PHI_PLUS, math.pi / 4, None, float(g), 1.0, ANTIBOB_II, ordering) for g in GAMMA_GRID])
    worst = max(float(np.max(np.diff(n1), initial=0.0)), float(np.max(-np.diff(n2), initial=0.0)))
    return CheckResult("phi+ monotonic in gamma (qR=1)", "pass" if worst <= 1e-12 else "fail", worst)


def check_operator_reproduction(ordering: Ordering = CANONICAL, n: int = 50, seed: int = 7) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    points = [UnruhParams(rng.uniform(0, GAMMA_MAX), rng.uniform(0, 1)) for _ in range(n)]
    out = []
    for name, closed, built in (
        ("vacuum", unruh_vacuum, vacuum_from_operators),
        ("particle", unruh_particle, lambda p, o: particle_from_operators(p, o, normalize=False)),
        ("antiparticle", unruh_antiparticle, lambda p, o: antiparticle_from_operators(p, o, normalize=False)),
    ):
        worst = 0.0
        for p in points:
            try:
                dev = float(np.max(np.abs(closed(p).amplitudes - built(p, ordering).amplitudes)))
            except ValueError:
                dev = math.inf
            worst = max(worst, dev)
        out.append(CheckResult(f"operator reproduction: {name}", "pass" if worst < 1e-12 else "fail", worst))
    return out


def check_oracle(ordering: Ordering = CANONICAL) -> tuple[list[CheckResult], list[oracle.TableAudit]]:
    audits = [oracle.audit(cf, ordering=ordering) for cf in oracle.TABLES]
    results = []
    for a in audits:
        why = []
        if not a.trace_ok:
            why.append(f"trace error {a.max_trace_error:.3g}")
        if a.duplicates:
            why.append("duplicated " + ", ".join(a.duplicates))
        if a.min_eigenvalue < -oracle.PSD_TOL:
            why.append(f"printed matrix has eigenvalue {a.min_eigenvalue:.3g}")
        if a.offending:
            why.append("differs at " + " ".join(a.offending))
        results.append(CheckResult(f"oracle {a.table}", a.status, a.max_deviation, "; ".join(why)))
    return results, audits


def check_eigensolver(n: int = 1000, seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        d = int(rng.integers(1, 33))
        x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        m = (x + x.conj().T) / 2
        w, v = hermitian_eigh(m)
        resid = float(np.max(np.linalg.norm(m @ v - v * w, axis=0)))
        worst = max(worst, resid, abs(w.sum() - np.trace(m).real))
    return CheckResult("Jacobi eigensolver residuals", "pass" if worst <= 1e-10 else "fail", worst, f"{n} matrices")


def check_determinism(ordering: Ordering = CANONICAL, name: str = "fig3") -> CheckResult:
    with tempfile.TemporaryDirectory() as tmp:
        paths = [Path(tmp) / f"run{i}.csv" for i in range(2)]
        for path in paths:
            write_csv(compute_records(preset(name, ordering=ordering)), path)
        same = filecmp.cmp(paths[0], paths[1], shallow=False)
    return CheckResult(f"determinism ({name} preset)", "pass" if same else "fail", 0.0 if same else 1.0)


def run_verify(
    ordering: Ordering = CANONICAL,
    report: str | Path | None = None,
    log: Callable[[str], None] | None = print,
) -> tuple[int, list[CheckResult]]:
    """Run every check; exit status is 0 iff no check has status ``fail``.

    With ``report`` set, writes the text report there, a JSON copy next to it
    (``.json``) and the oracle discrepancy files (``.oracle.txt``,
    ``.oracle.json``).
    """
    results: list[CheckResult] = []

    def add(res):
        for r in res if isinstance(res, list) else [res]:
            results.append(r)
            if log:
                log(r.line())

    add(check_operator_reproduction(ordering))
    add(check_convergence(ordering))
    add(check_qr_independence(ordering))
    add(check_zero_acceleration(ordering))
    add(check_phi_star_separable(ordering))
    add(check_patterns(ordering))
    add(check_monotonic(ordering))
    oracle_results, audits = check_oracle(ordering)
    add(oracle_results)
    add(check_eigensolver())
    add(check_determinism(ordering))

    failed = [r for r in results if r.status == "fail"]
    summary = (
        f"ordering={ordering.name}: {len(results) - len(failed)}/{len(results)} checks not failed, "
        f"{sum(r.status == 'flagged' for r in results)} flagged"
    )
    if log:
        log(summary)
    if report is not None:
        report = Path(report)
        report.write_text("\n".join(r.line() for r in results) + "\n" + summary + "\n", encoding="utf-8")
        report.with_suffix(".json").write_text(
            json.dumps([asdict(r) for r in results], indent=2) + "\n", encoding="utf-8"
        )
        oracle.write_reports(audits, report.with_suffix(".oracle.txt"), report.with_suffix(".oracle.json"))
    return (1 if failed else 0), results
