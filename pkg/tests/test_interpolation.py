from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stretched_eigenbasis.analysis.interpolation import (
    CardinalSystem,
    ExtendedCardinals,
    NodeSet1D,
    bump,
    cardinal_matrix,
    cd_cardinal,
    cd_lebesgue_constant,
    cd_lebesgue_constant_extended,
    cd_lebesgue_sweep,
    cofactor_cardinal,
    decay_profile,
    interpolate,
    interpolation_bound_check,
    lagrange_1d,
    lebesgue_constant,
    lebesgue_function,
    psi_basis,
    psi_matrix,
    psi_phase,
    sine_coefficients,
    sine_series,
    theorem1_bound,
)
from stretched_eigenbasis.eigenbasis import BasisSet, ExtendedRectangle, eval_basis
from stretched_eigenbasis.errors import ContractError

node_sizes = st.integers(2, 12)
lengths = st.sampled_from([0.5, 1.0, 2.0])
deltas = st.sampled_from([0.25, 1.0, 2.0])


def sine_mode(m, nodes):
    period = nodes.period
    return lambda x: np.sqrt(2 / period) * np.sin(m * np.pi * (np.asarray(x) + nodes.delta) / period)


class TestNodeSet:
    def test_uniform(self):
        nodes = NodeSet1D.uniform(5, 1.0, 1.0)
        np.testing.assert_allclose(nodes.nodes, [1.0, 1.25, 1.5, 1.75, 2.0])
        assert nodes.period == 3.0 and nodes.spacing == 0.25

    def test_rejects_unsorted(self):
        with pytest.raises(ContractError):
            NodeSet1D(np.array([1.0, 0.5]), 1.0, 1.0)

    def test_rejects_outside(self):
        with pytest.raises(ContractError):
            NodeSet1D(np.array([0.5, 3.5]), 1.0, 1.0)

    @given(st.integers(3, 40), st.integers(0, 2**32 - 1))
    def test_perturbation_bounded(self, n, seed):
        nodes = NodeSet1D.uniform(n, 1.0, 1.0)
        moved = nodes.perturbed(np.random.default_rng(seed))
        assert moved.nodes[0] == nodes.nodes[0] and moved.nodes[-1] == nodes.nodes[-1]
        # sorting a set of points each within h/2 of its lattice slot keeps every slot within h/2
        assert np.max(np.abs(moved.nodes - nodes.nodes)) <= 0.5 * nodes.spacing + 1e-15


class TestLagrange:
    @given(node_sizes, lengths, deltas)
    def test_cardinal_property(self, n, length, delta):
        nodes = NodeSet1D.uniform(n, length, delta)
        m = cardinal_matrix(nodes, nodes.nodes)
        np.testing.assert_allclose(m, np.eye(n), atol=1e-10)

    def test_linear_system_oracle(self):
        nodes = NodeSet1D.uniform(3, 1.0, 1.0)
        z = 0.5 * (nodes.nodes[0] + nodes.nodes[1])
        period = nodes.period
        w = lambda m, x: np.sqrt(2 / period) * np.sin(m * np.pi * x / period)
        a = np.array([[w(m, zk) for m in (1, 2, 3)] for zk in nodes.nodes])
        for j in (1, 2, 3):
            c = np.linalg.solve(a, np.eye(3)[j - 1])
            assert lagrange_1d(nodes, j, z) == pytest.approx(sum(c[m - 1] * w(m, z) for m in (1, 2, 3)), abs=1e-13)

    @given(st.integers(2, 10), st.data())
    def test_reproduces_span(self, n, data):
        nodes = NodeSet1D.uniform(n, 1.0, 1.5)
        m = data.draw(st.integers(1, n))
        f = sine_mode(m, nodes)
        z = np.random.default_rng(n * 31 + m).uniform(0, nodes.period, 100)
        approx = cardinal_matrix(nodes, z) @ f(nodes.physical)
        np.testing.assert_allclose(approx, f(z - nodes.delta), atol=1e-8)

    def test_index_checks(self):
        nodes = NodeSet1D.uniform(3, 1.0, 1.0)
        with pytest.raises(ContractError):
            lagrange_1d(nodes, 0, 1.5)
        with pytest.raises(ContractError):
            lagrange_1d(nodes, 4, 1.5)
        with pytest.raises(ContractError):
            lagrange_1d(nodes, 1, 3.5)

    def test_duplicate_nodes(self):
        with pytest.raises(ContractError):
            NodeSet1D(np.array([1.0, 1.5, 1.5]), 1.0, 1.0)


class TestLebesgue:
    def test_one_at_nodes(self):
        nodes = NodeSet1D.uniform(7, 1.0, 1.0)
        np.testing.assert_array_equal(lebesgue_function(nodes, nodes.nodes), 1.0)

    def test_golden_midpoint(self):
        nodes = NodeSet1D.uniform(5, 1.0, 1.0)
        assert lebesgue_function(nodes, 1.625) == pytest.approx(1.4293933675787471, rel=1e-12)

    @given(node_sizes, lengths, deltas)
    def test_at_least_one(self, n, length, delta):
        nodes = NodeSet1D.uniform(n, length, delta)
        z = nodes.delta + np.linspace(0, length, 2001)
        assert np.min(lebesgue_function(nodes, z)) >= 1 - 1e-12

    def test_matches_cardinal_sum(self):
        nodes = NodeSet1D.uniform(9, 2.0, 0.5).perturbed(np.random.default_rng(0))
        z = np.linspace(0.5, 2.5, 333)
        np.testing.assert_allclose(lebesgue_function(nodes, z), np.abs(cardinal_matrix(nodes, z)).sum(axis=1),
                                   rtol=1e-10)

    def test_two_nodes_golden(self):
        assert lebesgue_constant(NodeSet1D.uniform(2, 1.0, 1.0)) == pytest.approx(2 / math.sqrt(3), rel=1e-9)

    def test_five_nodes_golden_and_bound(self):
        lam = lebesgue_constant(NodeSet1D.uniform(5, 1.0, 1.0))
        assert lam == pytest.approx(2.004274933050927, rel=1e-9)
        assert lam <= theorem1_bound(5, 1.0, 1.0)

    @pytest.mark.parametrize("n, length, delta", [(5, 1.0, 1.0), (12, 2.0, 1.0), (20, 1.0, 2.0)])
    def test_resolution_stable(self, n, length, delta):
        nodes = NodeSet1D.uniform(n, length, delta)
        a, b = lebesgue_constant(nodes, 10_000), lebesgue_constant(nodes, 100_000)
        assert abs(a - b) / b < 0.01

    def test_resolution_floor(self):
        with pytest.raises(ContractError):
            lebesgue_constant(NodeSet1D.uniform(4, 1.0, 1.0), 999)


class TestCotangentBound:
    def test_values(self):
        assert theorem1_bound(5, 1.0, 1.0) == pytest.approx(10 / math.sqrt(3))
        assert theorem1_bound(20, 2.0, 2.0) == pytest.approx(40 / math.tan(math.pi / 3))
        assert theorem1_bound(20, 2.0, 2.0) == pytest.approx(23.094, abs=1e-3)

    def test_limits(self):
        assert theorem1_bound(10, 0.0, 1.0) == math.inf
        assert theorem1_bound(10, 1e6, 1.0) < 1e-4

    def test_bad_input(self):
        with pytest.raises(ContractError):
            theorem1_bound(5, -1.0, 1.0)


class TestPsi:
    def test_phase(self):
        assert psi_phase(1, 1.0) == pytest.approx(math.asin(1 / math.sqrt(1 + math.pi**2)), rel=1e-14)
        assert psi_phase(1, 1.0) == pytest.approx(0.30820, abs=1e-4)
        assert psi_phase(3, 0.0) == 0.0

    @given(st.integers(1, 6), st.floats(-2.0, 3.0))
    def test_zero_k_is_sine(self, j, x):
        rect = ExtendedRectangle((1.0,), 2.0)
        assert psi_basis(j, x, 0.0, rect) == pytest.approx(eval_basis(BasisSet(rect, 6), j, x), abs=1e-15)

    @given(st.integers(1, 8), st.floats(-1e4, 1e4), st.floats(-2.0, 3.0))
    def test_bounded(self, j, k, x):
        rect = ExtendedRectangle((1.0,), 2.0)
        assert abs(psi_basis(j, x, k, rect)) <= math.sqrt(2 / 5) + 1e-15

    def test_variable_k(self):
        rect = ExtendedRectangle((1.0,), 1.0)
        x = np.linspace(0, 1, 5)
        out = psi_basis(2, x, lambda s: 1 + s, rect)
        ref = [psi_basis(2, xi, 1 + xi, rect) for xi in x]
        np.testing.assert_allclose(out, ref)


class TestCdCardinals:
    def test_cardinal_property(self):
        nodes = NodeSet1D.uniform(8, 1.0, 2.01)
        sys = CardinalSystem.build(nodes, 10.0)
        np.testing.assert_allclose(sys.evaluate(nodes.nodes), np.eye(8), atol=1e-8)

    @pytest.mark.parametrize("n", [3, 6, 9])
    def test_zero_k_matches_sine(self, n):
        nodes = NodeSet1D.uniform(n, 1.0, 2.01)
        x = np.random.default_rng(n).uniform(nodes.delta, nodes.delta + 1, 100)
        for j in range(1, n + 1):
            np.testing.assert_allclose(cd_cardinal(nodes, 0.0, j, x), lagrange_1d(nodes, j, x), atol=1e-8)

    @pytest.mark.parametrize("n", [12, 20, 30])
    def test_zero_k_matches_sine_extended(self, n):
        nodes = NodeSet1D.uniform(n, 1.0, 2.01)
        x = np.random.default_rng(n).uniform(nodes.delta, nodes.delta + 1, 100)
        cards = ExtendedCardinals.build(nodes, 0.0).evaluate(x)
        np.testing.assert_allclose(cards, cardinal_matrix(nodes, x), atol=1e-8)

    def test_cofactor_oracle(self):
        nodes = NodeSet1D.uniform(4, 1.0, 2.0)
        for j in range(1, 5):
            for x in (2.0, 2.3, 2.77, 3.0):
                assert cd_cardinal(nodes, 1.0, j, x) == pytest.approx(cofactor_cardinal(nodes, 1.0, j, x), abs=1e-10)

    def test_extended_matches_double_when_well_conditioned(self):
        nodes = NodeSet1D.uniform(8, 1.0, 2.01)
        a = cd_lebesgue_constant(nodes, 100.0)
        b = cd_lebesgue_constant_extended(nodes, 100.0)
        assert a == pytest.approx(b, rel=1e-9)

    def test_psi_matrix_layout(self):
        nodes = NodeSet1D.uniform(3, 1.0, 1.0)
        rect = ExtendedRectangle((1.0,), 1.0)
        m = psi_matrix(nodes, 5.0)
        assert m[1, 2] == pytest.approx(psi_basis(2, nodes.physical[2], 5.0, rect))

    def test_sweep_zero_k_reproduces_sine_constant(self):
        cells = cd_lebesgue_sweep([6, 9], [0.0], 1.0)
        for cell in cells:
            ref = lebesgue_constant(NodeSet1D.uniform(cell.n, 1.0, 1.0), 10_000)
            assert cell.lebesgue == pytest.approx(ref, rel=1e-9)

    def test_sweep_resolution_stable(self):
        coarse = cd_lebesgue_sweep([10, 18], [10.0], 2.01, resolution=10_000)
        fine = cd_lebesgue_sweep([10, 18], [10.0], 2.01, resolution=100_000)
        for a, b in zip(coarse, fine):
            assert abs(a.lebesgue - b.lebesgue) / b.lebesgue < 0.01

    def test_sweep_golden(self):
        cells = {c.n: c for c in cd_lebesgue_sweep([10, 20], [1.0], 2.01)}
        assert cells[10].method == "double" and cells[20].method == "extended"
        assert cells[10].lebesgue == pytest.approx(15.68748304401615, rel=1e-6)
        assert cells[20].lebesgue == pytest.approx(4290.052805101679, rel=1e-6)
        assert np.isfinite(cells[20].cofactor_bound) and cells[20].cofactor_bound >= cells[20].lebesgue


class TestBestApproximation:
    def test_coefficients_of_a_mode(self):
        nodes = NodeSet1D.uniform(4, 1.0, 0.5)
        b = sine_coefficients(sine_mode(3, nodes), 1.0, 0.5, 6)
        np.testing.assert_allclose(b, [0, 0, 1, 0, 0, 0], atol=1e-13)

    def test_series_round_trip(self):
        coeffs = np.array([0.3, -0.2, 0.1])
        f = lambda x: sine_series(coeffs, 2.0, 1.0, x)
        np.testing.assert_allclose(sine_coefficients(f, 2.0, 1.0, 3), coeffs, atol=1e-13)

    def test_bump_support(self):
        f = bump(0.2, 0.8)
        np.testing.assert_array_equal(f(np.array([0.1, 0.2, 0.8, 0.9])), 0.0)
        assert f(np.array([0.5]))[0] == pytest.approx(math.exp(-1))

    def test_decay_profile(self):
        coeffs = 1.0 / np.arange(1, 101) ** 3
        prof = decay_profile(coeffs, 2)
        assert prof.peak_mode == 1 and prof.ratio == pytest.approx(1 / 51)

    def test_interpolate_mode(self):
        nodes = NodeSet1D.uniform(6, 1.0, 1.0)
        f = sine_mode(4, nodes)
        x = np.linspace(0, 1, 50)
        np.testing.assert_allclose(interpolate(nodes, f, x), f(x), atol=1e-12)

    @pytest.mark.parametrize("n", [4, 8, 12])
    def test_interpolation_bound(self, n):
        nodes = NodeSet1D.uniform(n, 1.0, 1.0)
        check = interpolation_bound_check(nodes, lambda x: np.exp(np.sin(2 * np.asarray(x))))
        assert check.holds, check
