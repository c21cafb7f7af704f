"""Sweep the transformation function over an h* grid and judge its zeros.

A sign change of Gamma between neighbouring grid points brackets a root;
the number of brackets is a numerical existence/uniqueness probe for the
underlying boundary value problem.  Probes that diverge are recorded as
failed samples rather than aborting the sweep.
"""

import math
from dataclasses import dataclass

import numpy as np

from .ode import IntegrationError
from .solver import ItmConfig, _evaluate
from .transform import DegenerateFarFieldError

__all__ = [
    "ScanGrid", "ScanSample", "ScanReport", "ScanFailedError",
    "NO_ZERO", "UNIQUE_ZERO", "MULTIPLE_ZEROS", "INCONCLUSIVE",
    "scan", "export_scan",
]

NO_ZERO = "no_zero"
UNIQUE_ZERO = "unique_zero"
MULTIPLE_ZEROS = "multiple_zeros"
INCONCLUSIVE = "inconclusive"


class ScanFailedError(RuntimeError):
    """Every grid point failed to produce a Gamma value."""


@dataclass(frozen=True)
class ScanGrid:
    """Strictly increasing grid of positive h* values."""

    h_min: float
    h_max: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if not self.h_min > 0:
            raise ValueError(f"h_min must be positive, got {self.h_min}")
        if not self.h_max > self.h_min:
            raise ValueError("h_max must exceed h_min")
        if self.count < 2:
            raise ValueError("count must be at least 2")
        if self.spacing not in ("linear", "logarithmic"):
            raise ValueError(f"spacing must be 'linear' or 'logarithmic', got {self.spacing!r}")

    def points(self) -> np.ndarray:
        if self.spacing == "linear":
            return np.linspace(self.h_min, self.h_max, self.count)
        return np.geomspace(self.h_min, self.h_max, self.count)


@dataclass(frozen=True)
class ScanSample:
    """One probe; ``gamma`` and ``lam`` are NaN when ``failed``."""

    h_star: float
    gamma: float
    lam: float
    failed: bool


@dataclass
class ScanReport:
    samples: list[ScanSample]
    brackets: list[tuple[float, float]]
    verdict: str


def _brackets_of(valid: list[ScanSample]) -> list[tuple[float, float]]:
    out = []
    for a, b in zip(valid, valid[1:]):
        if a.gamma == 0.0:
            out.append((a.h_star, a.h_star))
        elif a.gamma * b.gamma < 0.0:
            out.append((a.h_star, b.h_star))
    if valid and valid[-1].gamma == 0.0:
        out.append((valid[-1].h_star, valid[-1].h_star))
    return out


def _verdict_of(samples, brackets) -> str:
    if not brackets:
        return NO_ZERO
    lo_edge = samples[0].h_star
    hi_edge = samples[-1].h_star
    for lo, hi in brackets:
        if lo == lo_edge or hi == hi_edge:
            return INCONCLUSIVE
        for s in samples:
            if s.failed and lo < s.h_star < hi:
                return INCONCLUSIVE
    return UNIQUE_ZERO if len(brackets) == 1 else MULTIPLE_ZEROS


def scan(grid: ScanGrid, sign: int, config: ItmConfig | None = None) -> ScanReport:
    """Evaluate Gamma at every grid point and classify the sign changes.

    The verdict is ``unique_zero`` for exactly one bracket with no failed
    probe inside it, ``no_zero`` / ``multiple_zeros`` by bracket count, and
    ``inconclusive`` when a bracket touches a grid edge or contains a failed
    probe.
    """
    config = ItmConfig() if config is None else config
    samples = []
    for h_star in grid.points():
        h = float(h_star)
        try:
            evaluation, _ = _evaluate(h, sign, config.eta_inf_star,
                                      config.step_control, False)
            samples.append(ScanSample(h, evaluation.gamma, evaluation.lam, False))
        except (IntegrationError, DegenerateFarFieldError):
            samples.append(ScanSample(h, math.nan, math.nan, True))
    valid = [s for s in samples if not s.failed]
    if not valid:
        raise ScanFailedError(
            f"every probe failed on [{grid.h_min:.6g}, {grid.h_max:.6g}] with sign {sign:+d}"
        )
    brackets = _brackets_of(valid)
    return ScanReport(samples=samples, brackets=brackets,
                      verdict=_verdict_of(samples, brackets))


def export_scan(report: ScanReport) -> str:
    """CSV text for a scan report: ``h_star,gamma,lambda,failed`` rows."""
    lines = ["h_star,gamma,lambda,failed"]
    for s in report.samples:
        flag = "true" if s.failed else "false"
        lines.append(f"{s.h_star:.12e},{s.gamma:.12e},{s.lam:.12e},{flag}")
    return "\n".join(lines) + "\n"
