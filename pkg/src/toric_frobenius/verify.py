"""Executable checks of the push-forward formula.

Each check returns a :class:`VerificationReport` of exact integer
comparisons. Checks whose preconditions fail raise a gate exception
(:class:`NotComplete`, :class:`TorsionPresent`); :func:`run_suite` turns those
into SKIPPED entries instead of failures.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .classgroup import ClassGroup, DivisorClass, compute_class_group
from .fan import Fan, is_complete
from .frobenius import (
    DEFAULT_BUDGET,
    ClassDistribution,
    Decomposition,
    class_distribution,
    decompose,
    shift,
)
from .sections import UNBOUNDED, NotComplete, Unbounded, h0

__all__ = [
    "CaseRecord",
    "VerificationReport",
    "SuiteConfig",
    "SuiteReport",
    "NotComplete",
    "TorsionPresent",
    "check_h0_identity",
    "check_projection_formula",
    "check_composition",
    "check_rank",
    "check_trivial_frobenius",
    "run_suite",
]


class TorsionPresent(ValueError):
    """The composition law is only checked when Cl X is torsion-free."""


@dataclass
class CaseRecord:
    inputs: dict
    lhs: object
    rhs: object
    passed: bool

    def to_json(self) -> dict:
        return {"inputs": self.inputs, "lhs": _jsonable(self.lhs),
                "rhs": _jsonable(self.rhs), "passed": self.passed}


@dataclass
class VerificationReport:
    check: str
    fan: str
    params: dict
    cases: list[CaseRecord] = field(default_factory=list)
    skipped: Optional[str] = None
    error: Optional[str] = None

    @property
    def failures(self) -> list[CaseRecord]:
        return [c for c in self.cases if not c.passed]

    @property
    def passed(self) -> bool:
        """True when nothing failed; a skipped check passes vacuously."""
        return self.error is None and not self.failures

    @property
    def status(self) -> str:
        if self.skipped is not None:
            return "SKIPPED"
        if self.error is not None:
            return "ERROR"
        return "PASS" if self.passed else "FAIL"

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "fan": self.fan,
            "params": self.params,
            "status": self.status,
            "skipped": self.skipped,
            "error": self.error,
            "n_cases": len(self.cases),
            "n_failures": len(self.failures),
            "cases": [c.to_json() for c in self.cases],
        }


@dataclass
class SuiteConfig:
    ells: Sequence[int] = (2, 3)
    box: int = 3
    projection_samples: int = 20
    composition_pairs: Sequence[tuple[int, int]] = ((2, 2), (2, 3), (3, 2))
    composition_box: int = 2
    assume_complete: bool = False
    algorithm: str = "conv"
    budget: int = DEFAULT_BUDGET
    seed: int = 0


@dataclass
class SuiteReport:
    fan: str
    reports: list[VerificationReport]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_json(self) -> dict:
        return {"fan": self.fan, "passed": self.passed,
                "reports": [r.to_json() for r in self.reports]}

    def table(self) -> str:
        rows = [("check", "params", "status", "cases", "failed")]
        for r in self.reports:
            params = " ".join(f"{k}={v}" for k, v in r.params.items())
            rows.append((r.check, params, r.status, str(len(r.cases)), str(len(r.failures))))
        widths = [max(len(row[i]) for row in rows) for i in range(5)]
        lines = ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in rows]
        for r in self.reports:
            if r.skipped:
                lines.append(f"  {r.check}: skipped ({r.skipped})")
            if r.error:
                lines.append(f"  {r.check}: error ({r.error})")
        lines.append(f"{self.fan}: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, DivisorClass):
        return x.to_json()
    if isinstance(x, dict):
        return [{"class": _jsonable(k), "multiplicity": v} for k, v in sorted(x.items())]
    if x is UNBOUNDED:
        return "unbounded"
    return x


class _H0Cache:
    def __init__(self, fan: Fan, cg: ClassGroup):
        self.fan, self.cg = fan, cg
        self.values: dict[DivisorClass, object] = {}

    def __call__(self, c: DivisorClass) -> int:
        if c not in self.values:
            self.values[c] = h0(self.fan, self.cg, c)
        value = self.values[c]
        if value is UNBOUNDED:
            raise Unbounded(f"h^0 of class {c} is infinite")
        return value


def check_h0_identity(fan: Fan, ell: int, classes: Iterable[DivisorClass], *,
                      cg: Optional[ClassGroup] = None,
                      dist: Optional[ClassDistribution] = None,
                      assume_complete: bool = False,
                      perturb: Optional[Callable[[Decomposition], Decomposition]] = None,
                      algorithm: str = "conv",
                      budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """``h0(D) == sum_E m(E, D) * h0(E)`` for each ``D`` in ``classes``.

    The sum runs over the support of ``decompose(D, ell)``. ``perturb`` is
    applied to every decomposition before the comparison, so tests can check
    that a corrupted multiplicity is caught.

    Raises:
        NotComplete: unless the fan is complete or ``assume_complete``.
        Unbounded: if some needed h^0 is infinite.
    """
    if not (assume_complete or is_complete(fan)):
        raise NotComplete(f"{fan.label} is not known to be complete")
    if cg is None:
        cg = compute_class_group(fan)
    if dist is None:
        dist = class_distribution(cg, ell, algorithm, budget)
    h = _H0Cache(fan, cg)
    report = VerificationReport("h0_identity", fan.label, {"ell": ell})
    for D in classes:
        dec = decompose(cg, D, ell, dist)
        if perturb is not None:
            dec = perturb(dec)
        lhs = h(D)
        rhs = sum(m * h(E) for E, m in dec.summands.items())
        report.cases.append(CaseRecord({"D": D.to_json()}, lhs, rhs, lhs == rhs))
    return report


def check_projection_formula(fan: Fan, ell: int,
                             pairs: Iterable[tuple[DivisorClass, DivisorClass]], *,
                             cg: Optional[ClassGroup] = None,
                             dist: Optional[ClassDistribution] = None,
                             algorithm: str = "conv",
                             budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """``decompose(D)`` shifted by ``-E0`` equals ``decompose(D - ell*E0)``."""
    if cg is None:
        cg = compute_class_group(fan)
    if dist is None:
        dist = class_distribution(cg, ell, algorithm, budget)
    report = VerificationReport("projection_formula", fan.label, {"ell": ell})
    for D, E0 in pairs:
        lhs = shift(cg, decompose(cg, D, ell, dist), cg.neg(E0))
        rhs = dict(decompose(cg, cg.sub(D, cg.scale(E0, ell)), ell, dist).summands)
        report.cases.append(CaseRecord(
            {"D": D.to_json(), "E0": E0.to_json()}, lhs, rhs, lhs == rhs))
    return report


def check_composition(fan: Fan, ell1: int, ell2: int, classes: Iterable[DivisorClass], *,
                      cg: Optional[ClassGroup] = None,
                      algorithm: str = "conv",
                      budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """``m_{ell1*ell2}(E', D) == sum_E m_{ell1}(E', E) * m_{ell2}(E, D)``.

    Raises:
        TorsionPresent: if Cl X has torsion.
    """
    if cg is None:
        cg = compute_class_group(fan)
    if cg.torsion_orders:
        raise TorsionPresent(f"Cl = {cg.describe()} has torsion")
    d1 = class_distribution(cg, ell1, algorithm, budget)
    d2 = class_distribution(cg, ell2, algorithm, budget)
    d12 = class_distribution(cg, ell1 * ell2, algorithm, budget)
    report = VerificationReport("composition", fan.label, {"ell1": ell1, "ell2": ell2})
    for D in classes:
        lhs = dict(decompose(cg, D, ell1 * ell2, d12).summands)
        rhs: dict[DivisorClass, int] = {}
        for E, m in decompose(cg, D, ell2, d2).summands.items():
            for E2, m2 in decompose(cg, E, ell1, d1).summands.items():
                rhs[E2] = rhs.get(E2, 0) + m * m2
        report.cases.append(CaseRecord({"D": D.to_json()}, lhs, rhs, lhs == rhs))
    return report


def check_rank(fan: Fan, ell: int, classes: Iterable[DivisorClass], *,
               cg: Optional[ClassGroup] = None,
               dist: Optional[ClassDistribution] = None,
               algorithm: str = "conv",
               budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """``sum_E m(E, D) == ell**dim`` for each ``D``."""
    if cg is None:
        cg = compute_class_group(fan)
    if dist is None:
        dist = class_distribution(cg, ell, algorithm, budget)
    report = VerificationReport("rank", fan.label, {"ell": ell})
    for D in classes:
        rank = decompose(cg, D, ell, dist).rank
        report.cases.append(CaseRecord({"D": D.to_json()}, rank, ell ** fan.dim,
                                       rank == ell ** fan.dim))
    return report


def check_trivial_frobenius(fan: Fan, classes: Iterable[DivisorClass], *,
                            cg: Optional[ClassGroup] = None) -> VerificationReport:
    """For ``ell = 1`` the push-forward of O(D) is O(D) itself."""
    if cg is None:
        cg = compute_class_group(fan)
    dist = class_distribution(cg, 1, "cube")
    report = VerificationReport("trivial_frobenius", fan.label, {"ell": 1})
    for D in classes:
        lhs = dict(decompose(cg, D, 1, dist).summands)
        report.cases.append(CaseRecord({"D": D.to_json()}, lhs, {D: 1}, lhs == {D: 1}))
    return report


def _guarded(check: str, fan: Fan, params: dict, run) -> VerificationReport:
    try:
        return run()
    except (NotComplete, TorsionPresent) as exc:
        return VerificationReport(check, fan.label, params,
                                  skipped=f"{type(exc).__name__}: {exc}")
    except Exception as exc:  # reported, never aborts the suite
        return VerificationReport(check, fan.label, params,
                                  error=f"{type(exc).__name__}: {exc}")


def run_suite(fan: Fan, config: Optional[SuiteConfig] = None) -> SuiteReport:
    """Run every applicable check over a grid of classes and ``ell`` values.

    The grid is every class with free coordinates in ``[-box, box]`` and
    every torsion value. Reports come back in a fixed order.
    """
    config = config or SuiteConfig()
    cg = compute_class_group(fan)
    grid = cg.classes_in_box(config.box)
    rng = random.Random(config.seed)
    opts = {"algorithm": config.algorithm, "budget": config.budget}
    reports = []
    for ell in config.ells:
        try:
            dist = class_distribution(cg, ell, config.algorithm, config.budget)
        except Exception as exc:
            reports.append(VerificationReport("distribution", fan.label, {"ell": ell},
                                              error=f"{type(exc).__name__}: {exc}"))
            continue
        params = {"ell": ell}
        reports.append(_guarded("h0_identity", fan, params, lambda: check_h0_identity(
            fan, ell, grid, cg=cg, dist=dist, assume_complete=config.assume_complete, **opts)))
        reports.append(_guarded("rank", fan, params, lambda: check_rank(
            fan, ell, grid, cg=cg, dist=dist, **opts)))
        pairs = [(rng.choice(grid), rng.choice(grid)) for _ in range(config.projection_samples)]
        reports.append(_guarded("projection_formula", fan, params, lambda: check_projection_formula(
            fan, ell, pairs, cg=cg, dist=dist, **opts)))
    reports.append(_guarded("trivial_frobenius", fan, {"ell": 1},
                            lambda: check_trivial_frobenius(fan, grid, cg=cg)))
    small = cg.classes_in_box(config.composition_box)
    for ell1, ell2 in config.composition_pairs:
        reports.append(_guarded("composition", fan, {"ell1": ell1, "ell2": ell2},
                                lambda: check_composition(fan, ell1, ell2, small, cg=cg, **opts)))
    return SuiteReport(fan.label, reports)
