"""Parameter sweeps over the Unruh angle and CSV output of negativity curves."""

from __future__ import annotations

import configparser
import csv
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .fock import CANONICAL, Ordering
from .scenarios import DISTINGUISHING, NON_DISTINGUISHING, DetectorConfig, scenario_negativity
from .states import GAMMA_MAX, Family, UnruhParams

WORKERS_ENV = "UNRUH_WORKERS"
DEFAULT_GAMMA_STEPS = 181
CSV_COLUMNS = ("family", "config", "alpha", "qR", "F", "gamma", "negativity")


class SweepConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


_ANGLE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_value(text: str) -> float:
    """Parse ``0.73``, ``pi``, ``pi/4`` or ``3pi/8`` (also ``3*pi/8``)."""
    m = _ANGLE.match(text.lower())
    if m:
        coeff = m.group(1)
        num = float(coeff) if coeff not in ("", "+", "-") else (-1.0 if coeff == "-" else 1.0)
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"cannot parse number {text!r}") from None


def parse_list(text: str) -> list[float]:
    return [parse_value(tok) for tok in text.split(",") if tok.strip()]


@dataclass(frozen=True)
class SweepConfig:
    family: Family
    configs: tuple[DetectorConfig, ...]
    alphas: tuple[float, ...] = (math.pi / 4,)
    q_Rs: tuple[float, ...] = (1.0,)
    fidelities: tuple[float, ...] = ()
    gamma_start: float = 0.0
    gamma_stop: float = GAMMA_MAX
    gamma_steps: int = DEFAULT_GAMMA_STEPS
    out: Path | None = None
    ordering: Ordering = field(default=CANONICAL, compare=False)

    def validate(self) -> None:
        if not self.configs:
            raise SweepConfigError("configs", "at least one detector config is required")
        if not self.alphas:
            raise SweepConfigError("alpha", "grid is empty")
        if not self.q_Rs:
            raise SweepConfigError("qR", "grid is empty")
        for a in self.alphas:
            if not 0 <= a <= math.pi / 2 + 1e-12:
                raise SweepConfigError("alpha", f"{a} outside [0, pi/2]")
        for q in self.q_Rs:
            if not 0 <= q <= 1:
                raise SweepConfigError("qR", f"{q} outside [0, 1]")
        if self.family is Family.WERNER:
            if not self.fidelities:
                raise SweepConfigError("fidelity", "Werner sweeps need at least one F")
            for f in self.fidelities:
                if not 0 <= f <= 1:
                    raise SweepConfigError("fidelity", f"{f} outside [0, 1]")
        elif self.fidelities:
            raise SweepConfigError("fidelity", f"only used by the Werner family, not {self.family.value}")
        if self.gamma_steps < 1:
            raise SweepConfigError("gamma_steps", "must be at least 1")
        for name, g in (("gamma_start", self.gamma_start), ("gamma_stop", self.gamma_stop)):
            if not -1e-12 <= g <= GAMMA_MAX + 1e-12:
                raise SweepConfigError(name, f"{g} outside [0, pi/4]")

    def gammas(self) -> np.ndarray:
        return np.linspace(self.gamma_start, self.gamma_stop, self.gamma_steps)

    def curves(self) -> Iterator[tuple[DetectorConfig, float, float, float | None]]:
        """Curve keys in output order: config, alpha, q_R, F."""
        fids: Sequence[float | None] = self.fidelities or (None,)
        for cfg in self.configs:
            for alpha in self.alphas:
                for q_R in self.q_Rs:
                    for F in fids:
                        yield cfg, alpha, q_R, F


@dataclass(frozen=True)
class CurveRecord:
    family: Family
    config: DetectorConfig
    alpha: float
    q_R: float
    fidelity: float | None
    gamma: float
    negativity: float

    def row(self) -> list[str]:
        return [
            self.family.value,
            self.config.name,
            _fmt(self.alpha),
            _fmt(self.q_R),
            "" if self.fidelity is None else _fmt(self.fidelity),
            _fmt(self.gamma),
            _fmt(self.negativity),
        ]


def _fmt(x: float) -> str:
    # 12 significant digits, independent of locale; "+ 0.0" folds -0.0 into 0.0.
    return f"{float(x) + 0.0:.11e}"


_FIG_Q_PAIR = (1.0, 0.85, 0.73)
_FIG_Q_QUAD = (1.0, 0.75, 0.5, 0.25)
_FIG_ALPHAS = (math.pi / 4, math.pi / 18)

PRESETS: dict[str, SweepConfig] = {
    "fig2": SweepConfig(Family.PHI_PLUS, NON_DISTINGUISHING, _FIG_ALPHAS, _FIG_Q_PAIR),
    "fig3": SweepConfig(Family.PHI_PLUS, DISTINGUISHING, (math.pi / 4,), _FIG_Q_QUAD),
    "fig4": SweepConfig(Family.PHI_MINUS, NON_DISTINGUISHING, _FIG_ALPHAS, _FIG_Q_PAIR),
    "fig5": SweepConfig(Family.PHI_MINUS, DISTINGUISHING, (math.pi / 4,), _FIG_Q_QUAD),
    "fig6": SweepConfig(Family.PHI_STAR, NON_DISTINGUISHING, _FIG_ALPHAS, _FIG_Q_PAIR),
    "fig7": SweepConfig(Family.WERNER, NON_DISTINGUISHING, (math.pi / 4,), _FIG_Q_PAIR, (0.95, 0.65)),
    "fig8": SweepConfig(Family.WERNER, DISTINGUISHING, (math.pi / 4,), _FIG_Q_QUAD, (0.95,)),
}


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise SweepConfigError(WORKERS_ENV, f"not an integer: {raw!r}") from None


def compute_curve(cfg: SweepConfig, key) -> list[CurveRecord]:
    config, alpha, q_R, F = key
    out = []
    for g in cfg.gammas():
        res = scenario_negativity(cfg.family, alpha, F, UnruhParams(float(g), q_R), config, cfg.ordering)
        out.append(CurveRecord(cfg.family, config, alpha, q_R, F, float(g), res.negativity))
    return out


def compute_records(cfg: SweepConfig, workers: int | None = None) -> list[CurveRecord]:
    """All records in deterministic (config, alpha, q_R, F, gamma) order."""
    cfg.validate()
    keys = list(cfg.curves())
    workers = default_workers() if workers is None else workers
    if workers <= 1:
        curves = [compute_curve(cfg, k) for k in keys]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            curves = list(pool.map(lambda k: compute_curve(cfg, k), keys))
    return [rec for curve in curves for rec in curve]


def write_csv(records: Sequence[CurveRecord], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.row())


def run_sweep(cfg: SweepConfig, workers: int | None = None) -> Path:
    """Compute the sweep and write it to ``cfg.out``; returns the path."""
    if cfg.out is None:
        raise SweepConfigError("out", "an output path is required")
    records = compute_records(cfg, workers)
    write_csv(records, cfg.out)
    return Path(cfg.out)


def load_config_file(path: str | Path) -> SweepConfig:
    """Read a sweep from an INI file with a single ``[sweep]`` section.

    Keys: ``family`` (required), ``configs``, ``alpha``, ``qR``, ``fidelity``
    (comma-separated lists), ``gamma_start``, ``gamma_stop``, ``gamma_steps``,
    ``out``. Angles accept ``pi`` expressions such as ``pi/18``.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if not parser.read(path, encoding="utf-8"):
        raise SweepConfigError("file", f"cannot read {path}")
    if "sweep" not in parser:
        raise SweepConfigError("file", "missing [sweep] section")
    sec = parser["sweep"]
    known = {"family", "configs", "alpha", "qr", "fidelity", "gamma_start", "gamma_stop", "gamma_steps", "out"}
    unknown = set(sec) - known
    if unknown:
        raise SweepConfigError(sorted(unknown)[0], "unknown key")
    if "family" not in sec:
        raise SweepConfigError("family", "required")

    def field_(name, conv):
        try:
            return conv(sec[name])
        except ValueError as exc:
            raise SweepConfigError(name, str(exc)) from None

    family = field_("family", Family.parse)
    kwargs: dict = {}
    if "configs" in sec:
        kwargs["configs"] = field_(
            "configs", lambda s: tuple(DetectorConfig.parse(t) for t in s.split(",") if t.strip())
        )
    else:
        kwargs["configs"] = NON_DISTINGUISHING
    for key, attr in (("alpha", "alphas"), ("qr", "q_Rs"), ("fidelity", "fidelities")):
        if key in sec:
            kwargs[attr] = tuple(field_(key, parse_list))
    for key in ("gamma_start", "gamma_stop"):
        if key in sec:
            kwargs[key] = field_(key, parse_value)
    if "gamma_steps" in sec:
        kwargs["gamma_steps"] = field_("gamma_steps", int)
    if "out" in sec:
        kwargs["out"] = Path(sec["out"])
    cfg = SweepConfig(family, **kwargs)
    cfg.validate()
    return cfg


def preset(name: str, **overrides) -> SweepConfig:
    try:
        base = PRESETS[name]
    except KeyError:
        raise SweepConfigError("preset", f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return replace(base, **overrides)
