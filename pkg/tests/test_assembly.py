from __future__ import annotations

import numpy as np
import pytest

from stretched_eigenbasis.assembly import (
    RESIDUAL_TOL,
    LinearSystem,
    ProblemSpec,
    assemble,
    row_residual,
    solve,
    solve_problem,
)
from stretched_eigenbasis.eigenbasis import BasisSet, ExtendedRectangle
from stretched_eigenbasis.errors import ContractError, SingularSystemError
from stretched_eigenbasis.geometry import Tag, fit_to_curve, uniform_grid
from stretched_eigenbasis.problems import get_problem


def const(v):
    return lambda p: np.full(len(np.atleast_2d(p)), float(v))


def identity_system(b):
    basis = BasisSet(ExtendedRectangle((1.0,), 0.5), len(b))
    return LinearSystem(np.eye(len(b)), np.asarray(b, float), np.zeros(len(b), bool), np.zeros((len(b), 1)), basis)


class TestAssemble:
    def test_1d_structure(self):
        rect = ExtendedRectangle((1.0,), 0.5)
        spec = ProblemSpec("poisson", const(1.0), boundary=const(0.0))
        sys = assemble(spec, BasisSet(rect, 4), uniform_grid(rect, 4))
        assert sys.shape == (4, 4)
        assert list(sys.is_boundary) == [True, False, False, True]

    def test_rect_rows(self):
        p = get_problem("rect_poisson_x2y3")
        rect = p.rect(2.0)
        grid = uniform_grid(rect, 6)
        sys = assemble(p.spec, BasisSet(rect, 6), grid)
        x, y = grid.points.T
        bnd = grid.mask(Tag.RECT_BOUNDARY)
        np.testing.assert_array_equal(sys.is_boundary, bnd)
        np.testing.assert_allclose(sys.rhs[bnd], x[bnd] ** 2 * y[bnd] ** 3)
        np.testing.assert_allclose(sys.rhs[~bnd], -(2 * y[~bnd] ** 3 + 6 * x[~bnd] ** 2 * y[~bnd]))

    def test_disk_boundary_rhs_zero(self):
        p = get_problem("disk_poisson")
        rect = p.rect(2.0)
        grid = fit_to_curve(uniform_grid(rect, 12), p.curve)
        sys = assemble(p.spec, BasisSet(rect, 12), grid)
        np.testing.assert_array_equal(sys.is_boundary, grid.mask(Tag.RELOCATED))
        assert np.all(sys.rhs[sys.is_boundary] == 0.0)
        assert np.all(sys.rhs[~sys.is_boundary] == 4.0)

    def test_mismatch(self):
        rect = ExtendedRectangle((1.0, 1.0), 0.5)
        spec = ProblemSpec("poisson", const(1.0), boundary=const(0.0))
        with pytest.raises(ContractError):
            assemble(spec, BasisSet(rect, 5), uniform_grid(rect, 6))
        with pytest.raises(ContractError):
            assemble(spec, BasisSet(rect.with_stretch(1.0), 6), uniform_grid(rect, 6))

    def test_drop_removes_exterior_rows(self):
        p = get_problem("disk_poisson")
        rect = p.rect(2.0)
        grid = fit_to_curve(uniform_grid(rect, 12), p.curve)
        sys = assemble(p.spec, BasisSet(rect, 12), grid, exterior="drop")
        assert sys.shape[0] == len(grid) - grid.mask(Tag.EXTERIOR).sum()

    def test_spec_validation(self):
        with pytest.raises(ContractError):
            ProblemSpec("heat", const(0.0), boundary=const(0.0))
        with pytest.raises(ContractError):
            ProblemSpec("convection_diffusion", const(0.0), boundary=const(0.0))
        with pytest.raises(ContractError):
            ProblemSpec("poisson", const(0.0))


class TestSolve:
    def test_identity(self):
        b = np.array([1.0, -2.0, 3.5, 0.25])
        np.testing.assert_array_equal(solve(identity_system(b)).coeffs, b)

    def test_singular(self):
        sys = identity_system([1.0, 1.0, 1.0])
        bad = LinearSystem(np.ones((3, 3)), sys.rhs, sys.is_boundary, sys.points, sys.basis)
        with pytest.raises(SingularSystemError) as info:
            solve(bad, method="lu")
        assert info.value.cond == np.inf or info.value.cond > 1e15

    @pytest.mark.parametrize("seed", range(5))
    def test_random_poisson_residual(self, seed):
        rng = np.random.default_rng(seed)
        c = rng.normal(size=4)

        def f(p):
            x, y = np.atleast_2d(p).T
            return c[0] + c[1] * x + c[2] * np.sin(y) + c[3] * x * y

        rect = ExtendedRectangle((1.0 + rng.uniform(), 1.0 + rng.uniform()), rng.uniform(0.5, 2.0))
        spec = ProblemSpec("poisson", f, boundary=lambda p: np.cos(np.atleast_2d(p)[:, 0]))
        sol = solve_problem(spec, rect, 6)
        r = sol.row_residuals()
        assert np.max(np.abs(r)) <= 1e-10 * max(1.0, np.max(np.abs(sol.system.rhs)))

    def test_zero_data(self):
        rect = ExtendedRectangle((1.0, 1.0), 1.0)
        spec = ProblemSpec("poisson", const(0.0), boundary=const(0.0))
        sol = solve_problem(spec, rect, 8)
        assert np.max(np.abs(sol.coeffs)) <= 1e-10

    @pytest.mark.parametrize("method", ["lu", "qr"])
    def test_methods_agree(self, method):
        p = get_problem("rect_poisson_x2y3")
        sol = solve_problem(p.spec, p.rect(2.0), 10, method=method)
        assert sol.diagnostics["method"] == method
        assert sol.residual <= RESIDUAL_TOL
        ref = solve_problem(p.spec, p.rect(2.0), 10, method="auto")
        pts = np.random.default_rng(0).uniform(0, 2, (50, 2))
        np.testing.assert_allclose(sol(pts), ref(pts), atol=1e-8)

    def test_row_residual_scale(self):
        a = np.eye(2)
        assert row_residual(a, np.array([1.0, 0.0]), np.array([2.0, 0.0])) == pytest.approx(0.5)
        assert row_residual(a, np.array([1e-3, 0.0]), np.zeros(2)) == pytest.approx(1e-3)


class TestPipeline:
    def test_rect_poly(self):
        p = get_problem("rect_poisson_x2y3")
        sol = solve_problem(p.spec, p.rect(2.0), 16)
        pts = np.random.default_rng(5).uniform(0, 2, (200, 2))
        assert np.max(np.abs(sol(pts) - p.exact(pts))) < 1e-4

    def test_disk_center(self):
        p = get_problem("disk_poisson")
        sol = solve_problem(p.spec, p.rect(2.0), 20, p.curve)
        assert sol(np.array([[np.pi, np.pi]]))[0] == pytest.approx(4.0, abs=1e-3)
        diag = sol.diagnostics
        assert diag["n"] == 20 and diag["relocated"] > 0
        assert diag["max_displacement"] <= 0.5 * sol.grid.spacing + 1e-12

    def test_gradient(self):
        p = get_problem("rect_poisson_x2y3")
        sol = solve_problem(p.spec, p.rect(2.0), 20)
        pts = np.array([[1.0, 1.0], [0.5, 1.5]])
        x, y = pts.T
        np.testing.assert_allclose(sol.gradient(pts), np.c_[2 * x * y**3, 3 * x**2 * y**2], atol=1e-5)
