"""Error norms on an evaluation lattice and (n, delta) convergence studies."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np

from ..assembly import SpectralSolution, solve_problem
from ..eigenbasis import ExtendedRectangle
from ..errors import ContractError, DomainError, SingularSystemError
from ..geometry import CSV_HEADER, BoundaryCurve, inside_mask

logger = logging.getLogger(__name__)

DEFAULT_NORM_RESOLUTION = 256
CSV_COLUMNS = ("problem", "n", "delta", "l2", "linf", "cond", "seconds")


@dataclass(frozen=True)
class EvaluationLattice:
    """``resolution x resolution`` points of the inner box, optionally cut to the curve's interior."""

    points: np.ndarray
    weight: float
    resolution: int
    region: str

    @classmethod
    def build(cls, rect: ExtendedRectangle, curve: BoundaryCurve | None = None, region: str = "omega",
              resolution: int = DEFAULT_NORM_RESOLUTION) -> EvaluationLattice:
        if region not in ("omega", "rect"):
            raise ContractError(f"region must be 'omega' or 'rect', got {region!r}")
        if resolution < 2:
            raise ContractError(f"norm resolution must be at least 2, got {resolution}")
        lo, hi = rect.inner_bounds
        axes = [np.linspace(lo[k], hi[k], resolution) for k in range(rect.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        if region == "omega" and curve is not None:
            pts = pts[inside_mask(curve, pts)]
        if len(pts) == 0:
            raise ContractError("evaluation region is empty")
        weight = float(np.prod(rect.lengths)) / resolution**rect.dim
        return cls(pts, weight, resolution, region)


def norms_from_errors(errors: np.ndarray, weight: float) -> tuple[float, float]:
    """``(sqrt(weight * sum e^2), max |e|)``."""
    e = np.asarray(errors, dtype=float)
    return float(np.sqrt(weight * np.sum(e**2))), float(np.max(np.abs(e)))


def error_norms(solution: SpectralSolution, exact: Callable[[np.ndarray], np.ndarray], region: str = "omega",
                resolution: int = DEFAULT_NORM_RESOLUTION) -> tuple[float, float]:
    """Discrete L2 and max-norm errors of ``solution`` against ``exact``.

    ``exact`` is any callable on (m, d) points, including another
    :class:`SpectralSolution` for self-convergence.
    """
    lattice = EvaluationLattice.build(solution.basis.rect, solution.curve, region, resolution)
    err = solution(lattice.points) - np.asarray(exact(lattice.points), dtype=float)
    return norms_from_errors(err, lattice.weight)


@dataclass
class ConvergenceRow:
    n: int
    delta: float
    l2: float = math.nan
    linf: float = math.nan
    cond: float = math.nan
    seconds: float = math.nan
    residual: float = math.nan
    note: str | None = None

    @property
    def failed(self) -> bool:
        return not (np.isfinite(self.l2) and np.isfinite(self.linf))


@dataclass
class ConvergenceReport:
    """Errors per (n, delta) cell.  ``reference`` is ``"exact"`` or ``"finest"`` (self-convergence)."""

    problem: str
    resolution: int
    rows: list[ConvergenceRow] = field(default_factory=list)
    reference: str = "exact"
    region: str = "omega"

    def validate(self) -> None:
        for row in self.rows:
            if not row.failed and (row.l2 < 0 or row.linf < 0):
                raise ContractError(f"negative error in row n={row.n}")
        for delta in self.deltas:
            ns = [r.n for r in self.rows if r.delta == delta]
            if any(b <= a for a, b in zip(ns, ns[1:])):
                raise ContractError(f"n values must increase for delta={delta}")

    @property
    def deltas(self) -> list[float]:
        return list(dict.fromkeys(r.delta for r in self.rows))

    @property
    def failures(self) -> list[ConvergenceRow]:
        return [r for r in self.rows if r.failed]

    def select(self, delta: float) -> list[ConvergenceRow]:
        return [r for r in self.rows if r.delta == delta]

    def errors(self, delta: float, norm: str = "l2") -> np.ndarray:
        return np.array([getattr(r, norm) for r in self.select(delta)])

    def to_csv(self, timing: bool = False) -> str:
        """CSV text; ``seconds`` is left blank unless ``timing`` so reruns are byte-identical."""
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow([self.problem, r.n, _fmt(r.delta), _fmt(r.l2), _fmt(r.linf), _fmt(r.cond),
                             _fmt(r.seconds) if timing else ""])
        for r in self.rows:
            if r.note:
                buf.write(f"# n={r.n} delta={_fmt(r.delta)}: {r.note}\n")
        return buf.getvalue()

    def to_dict(self, timing: bool = False) -> dict:
        rows = []
        for r in self.rows:
            d = asdict(r)
            if not timing:
                d.pop("seconds")
            rows.append({k: _json_float(v) for k, v in d.items()})
        return {"schema": CSV_HEADER.lstrip("# "), "problem": self.problem, "resolution": self.resolution,
                "reference": self.reference, "region": self.region, "rows": rows}

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True) + "\n"


def _fmt(value: float) -> str:
    return repr(float(value)) if np.isfinite(value) else "nan"


def _json_float(value):
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def _solve_cell(problem, n: int, delta: float, n_c, exterior, method) -> SpectralSolution:
    rect = problem.rect(delta)
    return solve_problem(problem.spec, rect, n, problem.curve, n_c=n_c, exterior=exterior, method=method)


def convergence_study(problem, n_list: Iterable[int], delta_list: Iterable[float],
                      resolution: int = DEFAULT_NORM_RESOLUTION, region: str = "omega",
                      n_c: int | None = None, exterior: str = "keep", method: str = "auto") -> ConvergenceReport:
    """Solve every (n, delta) cell and measure its error.

    ``problem`` is a catalog :class:`~stretched_eigenbasis.problems.Problem`.
    Without an exact solution each cell is compared with the finest ``n``
    at the same ``delta``; that reference row reports zero error.  Cells that
    fail keep NaN errors and the failure reason.
    """
    ns = sorted(set(int(n) for n in n_list))
    deltas = list(dict.fromkeys(float(d) for d in delta_list))
    if not ns or not deltas:
        raise ContractError("convergence study needs at least one n and one delta")
    reference = "exact" if problem.exact is not None else "finest"
    report = ConvergenceReport(problem.id, resolution, reference=reference, region=region)
    for delta in deltas:
        solutions: dict[int, SpectralSolution] = {}
        rows: dict[int, ConvergenceRow] = {}
        for n in ns:
            row = ConvergenceRow(n, delta)
            rows[n] = row
            try:
                sol = _solve_cell(problem, n, delta, n_c, exterior, method)
            except (SingularSystemError, ContractError, DomainError, np.linalg.LinAlgError) as exc:
                row.note = f"{type(exc).__name__}: {exc}"
                logger.warning("n=%d delta=%g failed: %s", n, delta, exc)
                continue
            row.cond, row.seconds, row.residual = sol.cond, sol.seconds, sol.residual
            solutions[n] = sol
            if reference == "exact":
                row.l2, row.linf = error_norms(sol, problem.exact, region, resolution)
        if reference == "finest":
            finest = max(solutions, default=None)
            for n, sol in solutions.items():
                rows[n].l2, rows[n].linf = error_norms(sol, solutions[finest], region, resolution)
                if n == finest:
                    rows[n].note = "reference solution"
        report.rows.extend(rows[n] for n in ns)
    report.validate()
    return report
