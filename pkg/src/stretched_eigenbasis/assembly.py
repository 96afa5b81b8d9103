"""Dense collocation systems for Poisson and convection-diffusion problems.

A PDE row at node ``x`` reads ``sum_j a_j [lambda_j w_j(x) / Re + k(x) . grad w_j(x)] = f(x)``
and a boundary row reads ``sum_j a_j w_j(x) = g(x)``.  On a plain rectangle
the lattice points on its edges carry the boundary rows; on an irregular
domain only relocated points do, and every other node (including those
outside the physical domain) carries a PDE row.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .eigenbasis import BasisSet, ExtendedRectangle
from .errors import ContractError, SingularSystemError
from .geometry import BoundaryCurve, CollocationGrid, Tag, fit_to_curve, uniform_grid

logger = logging.getLogger(__name__)

Field = Callable[[np.ndarray], np.ndarray]

RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class ProblemSpec:
    """``-(1/Re) Lap u + k . grad u = f`` with Dirichlet data ``g``.

    All fields take an (m, d) array of points.  ``velocity`` returns (m, d)
    and is ignored for Poisson problems.  When ``boundary`` is omitted the
    exact solution supplies the Dirichlet data.
    """

    kind: str
    forcing: Field
    boundary: Field | None = None
    velocity: Field | None = None
    reynolds: float = 1.0
    exact: Field | None = None

    def __post_init__(self):
        if self.kind not in ("poisson", "convection_diffusion"):
            raise ContractError(f"unknown problem kind {self.kind!r}")
        if self.kind == "convection_diffusion" and self.velocity is None:
            raise ContractError("convection-diffusion problems need a velocity field")
        if self.boundary is None and self.exact is None:
            raise ContractError("need boundary data or an exact solution")
        if self.reynolds <= 0:
            raise ContractError("Reynolds number must be positive")

    def dirichlet(self, points: np.ndarray) -> np.ndarray:
        g = self.boundary if self.boundary is not None else self.exact
        return np.broadcast_to(np.asarray(g(points), dtype=float), (len(points),)).copy()

    def source(self, points: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.forcing(points), dtype=float), (len(points),)).copy()

    def with_reynolds(self, reynolds: float) -> ProblemSpec:
        return ProblemSpec(self.kind, self.forcing, self.boundary, self.velocity, reynolds, self.exact)


@dataclass(frozen=True)
class LinearSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    is_boundary: np.ndarray
    points: np.ndarray
    basis: BasisSet

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


@dataclass
class SpectralSolution:
    coeffs: np.ndarray
    basis: BasisSet
    system: LinearSystem
    cond: float
    residual: float
    grid: CollocationGrid | None = None
    curve: BoundaryCurve | None = None
    seconds: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    def __call__(self, points) -> np.ndarray:
        return self.basis.expand(self.coeffs, points)

    def gradient(self, points) -> np.ndarray:
        return np.stack([self.basis.expand(self.coeffs, points, axis=k) for k in range(self.basis.dim)], axis=1)

    def row_residuals(self) -> np.ndarray:
        """Unscaled residual ``A a - b`` of the collocation equations."""
        return self.system.matrix @ self.coeffs - self.system.rhs


def boundary_rows(grid: CollocationGrid, curve_fitted: bool | None = None) -> np.ndarray:
    """Mask of nodes that carry Dirichlet rows."""
    if curve_fitted is None:
        curve_fitted = bool(np.any(grid.mask(Tag.RELOCATED)))
    if curve_fitted:
        return grid.mask(Tag.RELOCATED)
    return grid.mask(Tag.RECT_BOUNDARY)


def operator_rows(problem: ProblemSpec, basis: BasisSet, points: np.ndarray) -> np.ndarray:
    """Rows of the differential operator applied to every basis function."""
    rows = basis.values(points) * (basis.eigenvalues / problem.reynolds)
    if problem.kind == "convection_diffusion":
        k = np.asarray(problem.velocity(points), dtype=float).reshape(len(points), basis.dim)
        for axis in range(basis.dim):
            rows += k[:, axis:axis + 1] * basis.partials(points, axis)
    return rows


def assemble(problem: ProblemSpec, basis: BasisSet, grid: CollocationGrid,
             exterior: str = "keep") -> LinearSystem:
    """Build the collocation system.

    ``exterior="drop"`` removes PDE rows at nodes outside the physical domain,
    leaving an underdetermined system that :func:`solve` treats in the
    least-squares sense.
    """
    if basis.rect != grid.rect or basis.n != grid.n:
        raise ContractError("basis and grid must share the box and the resolution")
    if exterior not in ("keep", "drop"):
        raise ContractError(f"exterior policy must be 'keep' or 'drop', got {exterior!r}")
    fitted = bool(np.any(grid.mask(Tag.RELOCATED)))
    bnd = boundary_rows(grid, fitted)
    keep = np.ones(len(grid), dtype=bool)
    if exterior == "drop" and fitted:
        keep &= ~grid.mask(Tag.EXTERIOR)
    pts = grid.points[keep]
    bnd = bnd[keep]

    matrix = np.empty((len(pts), len(basis)))
    rhs = np.empty(len(pts))
    pde = ~bnd
    matrix[pde] = operator_rows(problem, basis, pts[pde])
    rhs[pde] = problem.source(pts[pde])
    matrix[bnd] = basis.values(pts[bnd])
    rhs[bnd] = problem.dirichlet(pts[bnd])
    return LinearSystem(matrix, rhs, bnd, pts, basis)


def row_residual(matrix, coeffs, rhs) -> float:
    """``max_i |(A a - b)_i| / ||b||_inf`` (absolute when ``b = 0``)."""
    r = float(np.max(np.abs(matrix @ coeffs - rhs)))
    scale = float(np.max(np.abs(rhs)))
    return r / scale if scale > 0 else r


def _lu_solve(As, bs):
    lu, piv, info = lapack.dgetrf(As)
    if info > 0:
        return None, np.inf
    rcond, _ = lapack.dgecon(lu, np.linalg.norm(As, 1), norm="1")
    cond = 1.0 / rcond if rcond > 0 else np.inf
    coeffs = sla.lu_solve((lu, piv), bs, check_finite=False)
    refined = coeffs + sla.lu_solve((lu, piv), bs - As @ coeffs, check_finite=False)
    # one refinement sweep, kept only when it helps
    if row_residual(As, refined, bs) <= row_residual(As, coeffs, bs):
        coeffs = refined
    return coeffs, cond


def _qr_solve(As, bs):
    coeffs, _, _, _ = sla.lstsq(As, bs, lapack_driver="gelsy", check_finite=False)
    sv = sla.svdvals(As, check_finite=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf
    return coeffs, cond


def solve(system: LinearSystem, method: str = "auto") -> SpectralSolution:
    """Solve the row-equilibrated collocation system.

    ``method="lu"`` uses LU with partial pivoting plus one refinement sweep;
    ``"qr"`` uses a rank-revealing QR (column pivoting), which copes better
    with numerically rank-deficient systems; ``"auto"`` tries LU and falls
    back to QR when LU misses the residual target.  Rectangular systems
    always go through QR (least squares).

    Raises :class:`SingularSystemError` when no method reaches
    ``max |A a - b| <= RESIDUAL_TOL * ||b||_inf``.
    """
    if method not in ("auto", "lu", "qr"):
        raise ContractError(f"unknown solve method {method!r}")
    A = system.matrix
    b = system.rhs
    scale = np.max(np.abs(A), axis=1)
    if np.any(scale == 0) or not np.all(np.isfinite(A)) or not np.all(np.isfinite(b)):
        raise SingularSystemError("collocation matrix has an empty or non-finite row")
    As = A / scale[:, None]
    bs = b / scale
    square = As.shape[0] == As.shape[1]
    order = ["lu", "qr"] if method == "auto" else [method]
    if not square:
        order = ["qr"]
    coeffs, cond, res, used = None, np.inf, np.inf, None
    for name in order:
        trial, trial_cond = (_lu_solve if name == "lu" else _qr_solve)(As, bs)
        if trial is None or not np.all(np.isfinite(trial)):
            cond = min(cond, trial_cond)
            continue
        trial_res = row_residual(A, trial, b)
        if trial_res < res:
            coeffs, cond, res, used = trial, trial_cond, trial_res, name
        if res <= RESIDUAL_TOL:
            break
        logger.debug("%s solve left residual %.2e", name, trial_res)
    if coeffs is None:
        raise SingularSystemError("collocation matrix is singular", cond)
    if square and res > RESIDUAL_TOL:
        raise SingularSystemError(f"collocation residual {res:.2e} exceeds {RESIDUAL_TOL:.0e}", cond)
    sol = SpectralSolution(coeffs, system.basis, system, float(cond), res)
    sol.diagnostics["method"] = used
    return sol


def solve_problem(problem: ProblemSpec, rect: ExtendedRectangle, n: int,
                  curve: BoundaryCurve | None = None, n_c: int | None = None,
                  exterior: str = "keep", method: str = "auto") -> SpectralSolution:
    """Grid, (fit to curve), assemble and solve in one call."""
    start = time.perf_counter()
    grid = uniform_grid(rect, n)
    if curve is not None:
        grid = fit_to_curve(grid, curve, n_c)
    basis = BasisSet(rect, n)
    system = assemble(problem, basis, grid, exterior)
    sol = solve(system, method)
    sol.grid = grid
    sol.curve = curve
    sol.seconds = time.perf_counter() - start
    sol.diagnostics.update(
        n=n,
        delta=list(rect.stretch),
        relocated=int(np.sum(grid.mask(Tag.RELOCATED))),
        max_displacement=float(np.max(grid.displacements)) if len(grid) else 0.0,
        cond=sol.cond,
        residual=sol.residual,
    )
    logger.debug("solved n=%d delta=%s cond=%.2e res=%.2e", n, rect.stretch, sol.cond, sol.residual)
    return sol
