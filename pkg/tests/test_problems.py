from __future__ import annotations

import math

import numpy as np
import pytest

from stretched_eigenbasis.errors import ContractError
from stretched_eigenbasis.problems import CONFIG_KEYS, catalog, get_entry, get_problem, problem_from_config


def operator_residual(problem, pts, h=1e-3):
    """``f - L u_e`` with the operator applied by fourth-order finite differences."""
    u = problem.exact
    spec = problem.spec

    def d(axis, k):
        e = np.zeros(2)
        e[axis] = h
        if k == 1:
            return (-u(pts + 2 * e) + 8 * u(pts + e) - 8 * u(pts - e) + u(pts - 2 * e)) / (12 * h)
        return (-u(pts + 2 * e) + 16 * u(pts + e) - 30 * u(pts) + 16 * u(pts - e) - u(pts - 2 * e)) / (12 * h**2)

    lu = -(d(0, 2) + d(1, 2)) / spec.reynolds
    if spec.velocity is not None:
        k = spec.velocity(pts)
        lu = lu + k[:, 0] * d(0, 1) + k[:, 1] * d(1, 1)
    return spec.forcing(pts) - lu


def test_catalog_has_seven_families():
    ids = [e.id for e in catalog()]
    assert len(ids) == len(set(ids)) == 7
    assert {"disk_poisson", "fish_poisson", "ninja_poisson", "ellipse_cd", "star_cd",
            "rect_poisson_x2y3", "rect_cd_chiu"} == set(ids)


def test_unknown_id():
    with pytest.raises(KeyError):
        get_entry("nope")


def test_unknown_parameter():
    with pytest.raises(KeyError):
        get_problem("disk_poisson", re=3.0)


def test_disk_exact():
    p = get_problem("disk_poisson")
    assert p.exact(np.array([[math.pi, math.pi]]))[0] == pytest.approx(4.0)
    th = np.linspace(0, 2 * np.pi, 17)
    ring = np.c_[math.pi + 2 * np.cos(th), math.pi + 2 * np.sin(th)]
    np.testing.assert_allclose(p.exact(ring), 0.0, atol=1e-14)


def test_ellipse_circle_boundary_zero():
    p = get_problem("ellipse_cd", a=0.9, b=0.9)
    th = np.linspace(0, 2 * np.pi, 17)
    np.testing.assert_allclose(p.exact(0.9 * np.c_[np.cos(th), np.sin(th)]), 0.0, atol=1e-14)


def test_chiu_velocity_at_origin():
    p = get_problem("rect_cd_chiu")
    np.testing.assert_allclose(p.spec.velocity(np.array([[0.0, 0.0]])), [[-1.0, 1.0]])


def test_poly_forcing():
    p = get_problem("rect_poisson_x2y3")
    pts = np.random.default_rng(1).uniform(0, 2, size=(50, 2))
    x, y = pts.T
    np.testing.assert_allclose(p.spec.forcing(pts), -(2 * y**3 + 6 * x**2 * y), rtol=1e-13)


def test_disk_forcing_is_four():
    p = get_problem("disk_poisson")
    np.testing.assert_allclose(p.spec.forcing(np.random.default_rng(2).uniform(2, 4, (20, 2))), 4.0)


@pytest.mark.parametrize("entry", [e for e in catalog() if e.has_exact], ids=lambda e: e.id)
def test_operator_reproduces_forcing(entry):
    p = entry.build()
    lo = np.asarray(p.origin) + 0.05
    hi = np.asarray(p.origin) + np.asarray(p.lengths) - 0.05
    pts = np.random.default_rng(3).uniform(lo, hi, size=(1000, 2))
    scale = max(1.0, float(np.max(np.abs(p.spec.forcing(pts)))))
    assert np.max(np.abs(operator_residual(p, pts))) <= 1e-6 * scale


@pytest.mark.parametrize("re", [10.0, 1e5])
def test_chiu_reynolds(re):
    p = get_problem("rect_cd_chiu", re=re)
    assert p.spec.reynolds == re
    pts = np.random.default_rng(4).uniform(0.05, 0.95, size=(200, 2))
    assert np.max(np.abs(operator_residual(p, pts))) <= 1e-6


def test_curved_defaults():
    assert get_problem("fish_poisson").default_delta == 0.1
    assert get_problem("ninja_poisson").default_delta == 0.1
    assert get_problem("star_cd").default_delta == 2.0
    assert get_problem("fish_poisson").exact is None


def test_curves_fit_inside_boxes():
    for entry in catalog():
        p = entry.build()
        if p.curve is None:
            continue
        pts = p.curve.dense(4096)
        lo = np.asarray(p.origin)
        assert np.all(pts > lo) and np.all(pts < lo + np.asarray(p.lengths)), entry.id


class TestConfig:
    def test_matches_catalog_star(self):
        config = {
            "id": "my_star", "kind": "convection_diffusion", "f": "0", "kx": "-1", "ky": "-1",
            "u_e": "sin(x^2 + y^2)", "x_min": -1.2, "x_max": 1.2, "y_min": -1.2, "y_max": 1.2,
            "curve": "polar", "radius": "0.7 + 0.2 * sin(5 * theta)",
        }
        user = problem_from_config(config)
        ref = get_problem("star_cd")
        pts = ref.curve.dense(64)
        np.testing.assert_allclose(user.curve.dense(64), pts, atol=1e-15)
        np.testing.assert_allclose(user.exact(pts), ref.exact(pts), atol=1e-15)
        assert user.id == "my_star"

    def test_missing_key(self):
        with pytest.raises(ContractError):
            problem_from_config({"kind": "poisson", "f": "1"})

    def test_unknown_key(self):
        with pytest.raises(ContractError):
            problem_from_config({"kind": "poisson", "f": "1", "x_min": 0, "x_max": 1, "y_min": 0, "y_max": 1,
                                 "g": "0", "colour": "red"})

    def test_unknown_curve(self):
        with pytest.raises(ContractError):
            problem_from_config({"kind": "poisson", "f": "1", "g": "0", "x_min": 0, "x_max": 1, "y_min": 0,
                                 "y_max": 1, "curve": "heart"})

    def test_keys_documented(self):
        assert {"f", "g", "kx", "ky", "u_e", "curve"} <= CONFIG_KEYS
