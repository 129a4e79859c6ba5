"""Closed-form reduced density matrices, kept as coefficient tables.

Each table is transcribed term by term, including apparent misprints; the
operator-level construction in :mod:`scenarios` is the ground truth and the
tables act as test vectors. Coefficients are Python expressions in
``a`` (alpha), ``g`` (gamma), ``qR``, ``qL`` and ``F``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .fock import CANONICAL, Ordering, Region
from .measures import DensityMatrix
from .scenarios import ANTIBOB_II, BOB_I, reduce_for
from .states import Family, SharedStateSpec, UnruhParams, build_shared_state

ENTRY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10

_NAMESPACE = {"sin": math.sin, "cos": math.cos, "__builtins__": {}}


@dataclass(frozen=True)
class Term:
    ket: str
    bra: str
    expr: str

    @property
    def label(self) -> str:
        return f"|{self.ket}><{self.bra}|"


def _sym(x: str, y: str, expr: str) -> list[Term]:
    return [Term(x, y, expr), Term(y, x, expr)]


def _diag(expr: str, *labels: str) -> list[Term]:
    return [Term(x, x, expr) for x in labels]


@dataclass(frozen=True)
class ClosedFormMatrix:
    family: Family
    region: Region
    terms: tuple[Term, ...]
    alice_labels: tuple[str, str] = ("0", "1")

    @property
    def name(self) -> str:
        return f"{self.family.value}/AB_{self.region.value}"

    def index(self, label: str) -> int:
        a = self.alice_labels.index(label[0])
        return 4 * a + int(label[1:], 2)

    def label(self, idx: int) -> str:
        a, rest = divmod(idx, 4)
        return f"{self.alice_labels[a]}{rest:02b}"

    def duplicate_labels(self) -> list[str]:
        seen: dict[tuple[str, str], int] = {}
        for t in self.terms:
            seen[(t.ket, t.bra)] = seen.get((t.ket, t.bra), 0) + 1
        return [f"|{k}><{b}|" for (k, b), n in seen.items() if n > 1]

    def missing_partners(self) -> list[str]:
        pairs = {(t.ket, t.bra) for t in self.terms}
        return [t.label for t in self.terms if (t.bra, t.ket) not in pairs]

    def coefficients(self, ket: str, bra: str) -> list[str]:
        return [t.expr for t in self.terms if t.ket == ket and t.bra == bra]


def assemble(cf: ClosedFormMatrix, alpha: float, gamma: float, q_R: float, F: float | None = None) -> DensityMatrix:
    """Dense 8x8 matrix from the table; not checked for unit trace."""
    env = dict(a=alpha, g=gamma, qR=q_R, qL=math.sqrt(max(0.0, 1 - q_R**2)), F=F)
    mat = np.zeros((8, 8), dtype=complex)
    for t in cf.terms:
        mat[cf.index(t.ket), cf.index(t.bra)] += eval(t.expr, _NAMESPACE, env)  # noqa: S307
    return DensityMatrix(mat, (2, 2, 2), check=False)


_half_cos = "(1 + (1 - 2*qL**2)*cos(2*g))"
_half_cos_R = "(1 + (1 - 2*qR**2)*cos(2*g))"

PHI_PLUS_I = ClosedFormMatrix(Family.PHI_PLUS, Region.I, tuple(
    _diag("cos(a)**2*cos(g)**4", "000")
    + _sym("000", "110", "qR/2*sin(2*a)*cos(g)**3")
    + _diag("qL**2*sin(a)**2*cos(g)**2", "100")
    + _diag(f"1/2*{_half_cos}*sin(a)**2", "110")
    + _sym("001", "100", "-qL/2*sin(2*a)*cos(g)**2*sin(g)")
    + _sym("100", "111", "-qR*qL/2*sin(a)**2*sin(2*g)")
    + _diag("1/4*cos(a)**2*sin(2*g)**2", "001", "010")
    + _sym("001", "111", "qR/2*sin(2*a)*cos(g)*sin(g)**2")
    + _diag("qR**2*sin(a)**2*sin(g)**2", "111")
    + _sym("011", "110", "qL/2*sin(2*a)*sin(g)**3")
    + _diag("cos(a)**2*sin(g)**4", "011")
))

PHI_PLUS_II = ClosedFormMatrix(Family.PHI_PLUS, Region.II, tuple(
    _diag("cos(a)**2*cos(g)**4", "000")
    + _sym("000", "110", "qL/2*sin(2*a)*cos(g)**3")
    + _diag("qR**2*sin(a)**2*cos(g)**2", "100")
    + _diag(f"1/2*{_half_cos}*sin(a)**2", "110")
    + _sym("001", "100", "qR/2*sin(2*a)*cos(g)**2*sin(g)")
    + _sym("100", "111", "-qR*qL/2*sin(a)**2*sin(2*g)")
    + _diag("1/4*cos(a)**2*sin(2*g)**2", "001", "010")
    + _sym("001", "111", "-qL/2*sin(2*a)*cos(g)*sin(g)**2")
    + _diag("qL**2*sin(a)**2*sin(g)**2", "111")
    + _sym("011", "110", "qR/2*sin(2*a)*sin(g)**3")
    + _diag("cos(a)**2*sin(g)**4", "011")
))

PHI_MINUS_I = ClosedFormMatrix(Family.PHI_MINUS, Region.I, tuple(
    _diag("cos(a)**2*cos(g)**4", "000")
    + _sym("000", "101", "qR/2*sin(2*a)*cos(g)**3")
    + _diag("qL**2*sin(a)**2*cos(g)**2", "101")
    + _diag(f"1/2*{_half_cos}*sin(a)**2", "101")
    + _sym("010", "100", "qL/2*sin(2*a)*cos(g)**2*sin(g)")
    + _sym("100", "111", "-qR*qL/2*sin(a)**2*sin(2*g)")
    + _diag("1/4*cos(a)**2*sin(2*g)**2", "001", "010")
    + _sym("010", "111", "-qR/2*sin(2*a)*cos(g)*sin(g)**2")
    + _diag("qR**2*sin(a)**2*sin(g)**2", "111")
    + _sym("011", "101", "qL/2*sin(2*a)*sin(g)**3")
    + _diag("cos(a)**2*sin(g)**4", "011")
))

PHI_MINUS_II = ClosedFormMatrix(Family.PHI_MINUS, Region.II, tuple(
    _diag("cos(a)**2*cos(g)**4", "000")
    + _sym("000", "101", "qL/2*sin(2*a)*cos(g)**3")
    + _diag("qR**2*sin(a)**2*cos(g)**2", "100")
    + _diag(f"1/2*{_half_cos_R}*sin(a)**2", "101")
    + _sym("010", "100", "-qL/2*sin(2*a)*cos(g)**2*sin(g)")
    + _sym("100", "111", "-qR*qL/2*sin(a)**2*sin(2*g)")
    + _diag("1/4*cos(a)**2*sin(2*g)**2", "001", "010")
    + _sym("010", "111", "qR/2*sin(2*a)*cos(g)*sin(g)**2")
    + _diag("qL**2*sin(a)**2*sin(g)**2", "111")
    + _sym("011", "101", "qL/2*sin(2*a)*sin(g)**3")
    + _diag("cos(a)**2*sin(g)**4", "011")
))


def _phi_star(region: Region, q: str, r: str) -> ClosedFormMatrix:
    # q is the weight printed on the vacuum-like corner, r on the doubly excited one.
    half = f"(1 + (1 - 2*{q}**2)*cos(2*g))"
    return ClosedFormMatrix(Family.PHI_STAR, region, tuple(
        _diag(f"{q}**2*cos(a)**2*cos(g)**2", "+00")
        + _diag(f"1/2*{half}*cos(a)**2", "+10")
        + [Term("+10", "-01", f"1/4*{half}*sin(2*a)")]
        + [Term("-01", "+10", f"1/4*{half}*sin(2*a)")]
        + _diag(f"1/2*{half}*sin(a)**2", "-01")
        + _diag(f"{q}**2*sin(a)**2*cos(g)**2", "-00")
        + _sym("+00", "+11", "-qR*qL/2*cos(a)**2*sin(2*g)")
        + _sym("-00", "-11", "-qR*qL/2*sin(a)**2*sin(2*g)")
        + _diag(f"{r}**2*cos(a)**2*sin(g)**2", "+11")
        + _diag(f"{r}**2*sin(a)**2*sin(g)**2", "-11")
    ), alice_labels=("+", "-"))


PHI_STAR_I = _phi_star(Region.I, "qL", "qR")
PHI_STAR_II = _phi_star(Region.II, "qR", "qL")

WERNER_I = ClosedFormMatrix(Family.WERNER, Region.I, tuple(
    _sym("000", "110", "1/2*F*qR*cos(g)**3")
    + _diag("1/8*cos(g)**2*(3 - 2*qR**2 + F*(1 - 2*qR**2) + (1 - F)*cos(2*g))", "100")
    + _diag("1/8*cos(g)**2*(3 - 2*qR**2 - F*(1 - 2*qR**2) + (1 + F)*cos(2*g))", "000")
    + _sym("001", "100", "-F*qL/2*cos(g)**2*sin(g)")
    + _sym("001", "111", "F*qR/2*cos(g)*sin(g)**2")
    + _sym("011", "110", "F*qL/2*sin(g)**3")
    + _diag("1/4*sin(g)**2*((1 + F)*qR**2 + (1 - F)*sin(g)**2)", "111")
    + _diag("1/4*sin(g)**2*((1 - F)*qR**2 + (1 + F)*sin(g)**2)", "011")
    + _sym("000", "011", "-1/8*(1 - F)*qL*qR*sin(2*g)")
    + _sym("100", "111", "-1/8*(1 + F)*qL*qR*sin(2*g)")
    + _diag("1/16*(1 - F)*sin(2*g)**2", "101")
    + _diag("1/16*(1 + F)*sin(2*g)**2", "001")
    + _diag("1/16*(2*(1 + F) - 2*(1 + F)*(1 - 2*qR**2)*cos(2*g) + (1 - F)*sin(2*g)**2)", "110")
    + _diag("1/16*(2*(1 - F) - 2*(1 - F)*(1 - 2*qR**2)*cos(2*g) + (1 + F)*sin(2*g)**2)", "010")
))

WERNER_II = ClosedFormMatrix(Family.WERNER, Region.II, tuple(
    _sym("000", "110", "1/2*F*qL*cos(g)**3")
    + _diag("1/8*sin(g)**2*(3 - 2*qR**2 + F*(1 - 2*qR**2) - (1 - F)*cos(2*g))", "111")
    + _diag("1/8*sin(g)**2*(3 - 2*qR**2 - F*(1 - 2*qR**2) - (1 + F)*cos(2*g))", "011")
    + _sym("001", "100", "F*qR/2*cos(g)**2*sin(g)")
    + _sym("001", "111", "-F*qL/2*cos(g)*sin(g)**2")
    + _sym("011", "110", "F*qR/2*sin(g)**3")
    + _diag("1/4*cos(g)**2*((1 + F)*qR**2 + (1 - F)*cos(g)**2)", "100")
    + _diag("1/4*cos(g)**2*((1 - F)*qR**2 + (1 + F)*cos(g)**2)", "000")
    + _sym("000", "011", "-1/8*(1 - F)*qL*qR*sin(2*g)")
    + _sym("100", "111", "-1/8*(1 + F)*qL*qR*sin(2*g)")
    + _diag("1/16*(1 - F)*sin(2*g)**2", "101")
    + _diag("1/16*(1 + F)*sin(2*g)**2", "001")
    + _diag("1/16*(2*(1 + F) + 2*(1 + F)*(1 - 2*qR**2)*cos(2*g) + (1 - F)*sin(2*g)**2)", "110")
    + _diag("1/16*(2*(1 - F) + 2*(1 - F)*(1 - 2*qR**2)*cos(2*g) + (1 + F)*sin(2*g)**2)", "010")
))

TABLES: tuple[ClosedFormMatrix, ...] = (
    PHI_PLUS_I, PHI_PLUS_II, PHI_MINUS_I, PHI_MINUS_II,
    PHI_STAR_I, PHI_STAR_II, WERNER_I, WERNER_II,
)


def table(family: Family, region: Region) -> ClosedFormMatrix:
    for cf in TABLES:
        if cf.family is family and cf.region is region:
            return cf
    raise KeyError((family, region))


def constructed(cf: ClosedFormMatrix, alpha, gamma, q_R, F=None, ordering: Ordering = CANONICAL) -> DensityMatrix:
    """The operator-level reduced state matching ``cf``'s family and region."""
    alpha = math.pi / 4 if cf.family is Family.WERNER else alpha
    state = build_shared_state(
        SharedStateSpec(cf.family, alpha, F if cf.family is Family.WERNER else None),
        UnruhParams(gamma, q_R),
    )
    return reduce_for(BOB_I if cf.region is Region.I else ANTIBOB_II, state, ordering)


@dataclass
class Discrepancy:
    table: str
    ket: str
    bra: str
    symbolic: str
    expected: float
    constructed: float
    params: dict


@dataclass
class DiffReport:
    table: str
    params: dict
    max_deviation: float
    entries: list[Discrepancy] = field(default_factory=list)


def diff_against_constructed(
    cf: ClosedFormMatrix, alpha, gamma, q_R, F=None, ordering: Ordering = CANONICAL, tol: float = ENTRY_TOL
) -> DiffReport:
    params = dict(alpha=alpha, gamma=gamma, q_R=q_R, F=F)
    expected = assemble(cf, alpha, gamma, q_R, F).matrix
    built = constructed(cf, alpha, gamma, q_R, F, ordering).matrix
    dev = np.abs(expected - built)
    report = DiffReport(cf.name, params, float(dev.max()))
    for i, j in zip(*np.nonzero(dev > tol)):
        ket, bra = cf.label(i), cf.label(j)
        report.entries.append(Discrepancy(
            table=cf.name,
            ket=ket,
            bra=bra,
            symbolic=" + ".join(cf.coefficients(ket, bra)) or "0",
            expected=float(expected[i, j].real),
            constructed=float(built[i, j].real),
            params=params,
        ))
    return report


def sample_points(n: int, seed: int = 0) -> list[tuple[float, float, float, float]]:
    """Random ``(alpha, gamma, q_R, F)`` points over the full parameter ranges."""
    rng = np.random.default_rng(seed)
    return [
        (rng.uniform(0, math.pi / 2), rng.uniform(0, math.pi / 4), rng.uniform(0, 1), rng.uniform(0, 1))
        for _ in range(n)
    ]


@dataclass
class TableAudit:
    """Outcome of checking one table over many parameter points.

    ``status`` is ``"pass"`` (matches everywhere), ``"flagged"`` (the table is
    internally defective: trace != 1, a repeated label, a term without its
    Hermitian partner, or a negative eigenvalue; and its mismatches stay on
    the suspect entries) or ``"fail"``.
    """

    table: str
    trace_ok: bool
    max_trace_error: float
    duplicates: list[str]
    missing_partners: list[str]
    min_eigenvalue: float
    max_deviation: float
    offending: list[str]
    localized: bool
    status: str
    examples: list[Discrepancy] = field(default_factory=list)


def audit(
    cf: ClosedFormMatrix,
    points: Iterable[tuple[float, float, float, float]] | None = None,
    ordering: Ordering = CANONICAL,
) -> TableAudit:
    points = list(points) if points is not None else sample_points(50)
    trace_err = 0.0
    min_eig = math.inf
    max_dev = 0.0
    offending: dict[str, Discrepancy] = {}
    for alpha, gamma, q_R, F in points:
        printed = assemble(cf, alpha, gamma, q_R, F)
        trace_err = max(trace_err, abs(printed.trace() - 1))
        min_eig = min(min_eig, float(np.linalg.eigvalsh(printed.matrix)[0]))
        rep = diff_against_constructed(cf, alpha, gamma, q_R, F, ordering)
        max_dev = max(max_dev, rep.max_deviation)
        for d in rep.entries:
            offending.setdefault(f"|{d.ket}><{d.bra}|", d)
    trace_ok = trace_err < TRACE_TOL
    dups = cf.duplicate_labels()
    partners = cf.missing_partners()
    psd_ok = min_eig >= -PSD_TOL
    # A trace or duplicate-label defect can only sit on the diagonal; a
    # positivity defect can sit anywhere, so only require most of the table to match.
    if not trace_ok or dups:
        localized = all(d.ket == d.bra for d in offending.values())
    else:
        localized = len(offending) <= len({(t.ket, t.bra) for t in cf.terms}) // 2
    flagged = (not trace_ok or bool(dups) or bool(partners) or not psd_ok) and localized
    if not offending:
        status = "pass"
    elif flagged:
        status = "flagged"
    else:
        status = "fail"
    return TableAudit(
        table=cf.name,
        trace_ok=trace_ok,
        max_trace_error=trace_err,
        duplicates=dups,
        missing_partners=partners,
        min_eigenvalue=min_eig,
        max_deviation=max_dev,
        offending=sorted(offending),
        localized=localized,
        status=status,
        examples=list(offending.values()),
    )


def write_reports(audits: list[TableAudit], text_path: str | Path, json_path: str | Path) -> None:
    """Human-readable summary plus one JSON record per offending entry."""
    lines = []
    records = []
    for a in audits:
        lines.append(
            f"{a.table:14s} {a.status:8s} max|dev|={a.max_deviation:.3e} "
            f"trace_err={a.max_trace_error:.3e} min_eig={a.min_eigenvalue:.3e}"
        )
        if a.duplicates:
            lines.append(f"    duplicated labels: {', '.join(a.duplicates)}")
        if a.missing_partners:
            lines.append(f"    terms without Hermitian partner: {', '.join(a.missing_partners)}")
        for d in a.examples:
            lines.append(
                f"    |{d.ket}><{d.bra}|  table: {d.symbolic}  "
                f"expected={d.expected:.12g} constructed={d.constructed:.12g}"
            )
            records.append(asdict(d) | {"status": a.status})
    Path(text_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    Path(json_path).write_text(json.dumps(records, indent=2, sort_keys=True) + "\n", encoding="utf-8")
