"""Catalog of built-in benchmark problems.

Every entry fixes the PDE, the inner box and (for curved domains) the
boundary curve; the stretch margin ``delta`` stays free and is supplied when
the box is built.  Entries with a known exact solution derive their forcing
from it analytically, so the catalog is self-consistent by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .assembly import ProblemSpec
from .eigenbasis import ExtendedRectangle
from .errors import ContractError
from .expr import Expression
from .geometry import BoundaryCurve

Field = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ExactSolution:
    """Exact solution with analytic gradient and Laplacian."""

    value: Field
    gradient: Field
    laplacian: Field

    def __call__(self, points) -> np.ndarray:
        return self.value(np.atleast_2d(points))


def derived_forcing(exact: ExactSolution, velocity: Field | None = None, reynolds: float = 1.0) -> Field:
    """Forcing ``-(1/Re) Lap u + k . grad u`` that makes ``exact`` a solution."""

    def forcing(points):
        pts = np.atleast_2d(points)
        f = -exact.laplacian(pts) / reynolds
        if velocity is not None:
            f = f + np.sum(velocity(pts) * exact.gradient(pts), axis=1)
        return f

    return forcing


def _xy(points):
    pts = np.atleast_2d(points)
    return pts[:, 0], pts[:, 1]


def _const(value: float) -> Field:
    return lambda points: np.full(len(np.atleast_2d(points)), float(value))


# ----------------------------------------------------------------------------
# exact solutions


def _poly_x2y3() -> ExactSolution:
    return ExactSolution(
        value=lambda p: _xy(p)[0] ** 2 * _xy(p)[1] ** 3,
        gradient=lambda p: np.stack([2 * _xy(p)[0] * _xy(p)[1] ** 3, 3 * _xy(p)[0] ** 2 * _xy(p)[1] ** 2], axis=1),
        laplacian=lambda p: 2 * _xy(p)[1] ** 3 + 6 * _xy(p)[0] ** 2 * _xy(p)[1],
    )


def _paraboloid(center, radius) -> ExactSolution:
    cx, cy = center

    def value(p):
        x, y = _xy(p)
        return radius**2 - (x - cx) ** 2 - (y - cy) ** 2

    def gradient(p):
        x, y = _xy(p)
        return np.stack([-2 * (x - cx), -2 * (y - cy)], axis=1)

    return ExactSolution(value, gradient, lambda p: np.full(len(np.atleast_2d(p)), -4.0))


def _chiu_velocity(p):
    x, y = _xy(p)
    X, Y = 1 + x, 1 + y
    r2 = X**2 + Y**2
    return np.stack([-2 * Y / r2, 2 * X / r2], axis=1)


def _chiu_exact() -> ExactSolution:
    # phi equals the x-velocity, which is harmonic
    def value(p):
        return _chiu_velocity(p)[:, 0]

    def gradient(p):
        x, y = _xy(p)
        X, Y = 1 + x, 1 + y
        r4 = (X**2 + Y**2) ** 2
        return np.stack([4 * X * Y / r4, 2 * (Y**2 - X**2) / r4], axis=1)

    return ExactSolution(value, gradient, lambda p: np.zeros(len(np.atleast_2d(p))))


def chiu_source(p):
    """``S = -dp/dx`` for the pressure ``p = -2 / ((1+x)^2 + (1+y)^2)``."""
    x, y = _xy(p)
    X, Y = 1 + x, 1 + y
    return -4 * X / (X**2 + Y**2) ** 2


def _ellipse_exact(a: float, b: float) -> ExactSolution:
    half_pi = np.pi / 2

    def level(p):
        x, y = _xy(p)
        return x**2 / a**2 + y**2 / b**2 - 1

    def value(p):
        return np.sin(half_pi * level(p))

    def gradient(p):
        x, y = _xy(p)
        c = np.cos(half_pi * level(p)) * half_pi
        return np.stack([c * 2 * x / a**2, c * 2 * y / b**2], axis=1)

    def laplacian(p):
        x, y = _xy(p)
        s = half_pi * level(p)
        gx, gy = 2 * x / a**2, 2 * y / b**2
        grad2 = gx**2 + gy**2
        return -np.sin(s) * half_pi**2 * grad2 + np.cos(s) * half_pi * (2 / a**2 + 2 / b**2)

    return ExactSolution(value, gradient, laplacian)


def _radial_sine() -> ExactSolution:
    def value(p):
        x, y = _xy(p)
        return np.sin(x**2 + y**2)

    def gradient(p):
        x, y = _xy(p)
        c = np.cos(x**2 + y**2)
        return np.stack([2 * x * c, 2 * y * c], axis=1)

    def laplacian(p):
        x, y = _xy(p)
        rho = x**2 + y**2
        return 4 * np.cos(rho) - 4 * rho * np.sin(rho)

    return ExactSolution(value, gradient, laplacian)


# ----------------------------------------------------------------------------
# curves


def fish_level_set(x, y):
    return (2 * x**2 + y**2) ** 2 - 2 * np.sqrt(2) * x * (2 * x**2 - 3 * y**2) + 2 * (y**2 - x**2)


def fish_curve() -> BoundaryCurve:
    """Quartic fish: body and forked tail meeting at a crossing at the origin.

    On the line ``y = m x`` the quartic reduces to a quadratic in ``x`` whose
    discriminant is ``8 (2 - m^2)^3``.  Writing ``m = sqrt(2) sin(phi)`` turns
    both roots into the single periodic branch below; ``phi`` in
    ``(-pi/4, pi/4)`` sweeps the body and the rest sweeps the tail (in the
    opposite sense).
    """

    def func(t):
        phi = 2 * np.pi * t
        s, c = np.sin(phi), np.cos(phi)
        x = (np.sqrt(2) * (1 - 3 * s**2) + 2 * c**3) / (2 * (1 + s**2) ** 2)
        return np.stack([x, np.sqrt(2) * s * x], axis=1)

    return BoundaryCurve(func, "rational-trig", "fish", fish_level_set)


def ninja_radius(theta):
    c = np.abs(np.cos(3 * theta))
    s = np.sin(6 * theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.power(c, s)
    # 0 ** 0 limit at the cusps
    return np.where(c == 0, 1.0, r)


def ninja_curve() -> BoundaryCurve:
    return BoundaryCurve.polar(ninja_radius, name="ninja")


def star_radius(theta):
    return 0.7 + 0.2 * np.sin(5 * theta)


def star_curve() -> BoundaryCurve:
    return BoundaryCurve.polar(star_radius, name="star")


# ----------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class Problem:
    """A fully specified problem instance; only ``delta`` is left open."""

    id: str
    spec: ProblemSpec
    lengths: tuple[float, float]
    origin: tuple[float, float] = (0.0, 0.0)
    curve: BoundaryCurve | None = None
    exact: Callable[[np.ndarray], np.ndarray] | None = None
    params: dict = field(default_factory=dict)
    default_delta: float = 2.0

    def rect(self, delta) -> ExtendedRectangle:
        return ExtendedRectangle(self.lengths, delta, self.origin)


@dataclass(frozen=True)
class ProblemCatalogEntry:
    id: str
    summary: str
    builder: Callable[..., Problem] = field(repr=False)
    defaults: dict = field(default_factory=dict)
    has_exact: bool = True
    # margin used when the caller gives none; f = 1 on a curved domain has no
    # smooth extension past the curve, and a wide margin only amplifies that
    default_delta: float = 2.0

    def build(self, **params) -> Problem:
        unknown = set(params) - set(self.defaults)
        if unknown:
            raise KeyError(f"{self.id} has no parameter(s) {sorted(unknown)}")
        merged = {**self.defaults, **params}
        return replace(self.builder(**merged), default_delta=self.default_delta)


def _rect_poisson_x2y3() -> Problem:
    u = _poly_x2y3()
    spec = ProblemSpec("poisson", derived_forcing(u), exact=u.value)
    return Problem("rect_poisson_x2y3", spec, (2.0, 2.0), exact=u)


def _rect_cd_chiu(re: float) -> Problem:
    u = _chiu_exact()
    spec = ProblemSpec("convection_diffusion", chiu_source, velocity=_chiu_velocity, reynolds=re, exact=u.value)
    return Problem("rect_cd_chiu", spec, (1.0, 1.0), exact=u, params={"re": re})


def _disk_poisson() -> Problem:
    center = (np.pi, np.pi)
    u = _paraboloid(center, 2.0)
    spec = ProblemSpec("poisson", _const(4.0), boundary=_const(0.0), exact=u.value)
    curve = BoundaryCurve.circle(2.0, center, name="disk")
    return Problem("disk_poisson", spec, (2 * np.pi, 2 * np.pi), curve=curve, exact=u)


def _fish_poisson() -> Problem:
    spec = ProblemSpec("poisson", _const(1.0), boundary=_const(0.0))
    return Problem("fish_poisson", spec, (2.4, 2.4), origin=(-0.5, -1.2), curve=fish_curve())


def _ninja_poisson() -> Problem:
    spec = ProblemSpec("poisson", _const(1.0), boundary=_const(0.0))
    return Problem("ninja_poisson", spec, (4.4, 4.4), origin=(-2.2, -2.2), curve=ninja_curve())


def _lui_velocity(p):
    # -u_xx - u_yy - u_x - u_y  ->  k = (-1, -1)
    return np.full((len(np.atleast_2d(p)), 2), -1.0)


def _ellipse_cd(a: float, b: float) -> Problem:
    u = _ellipse_exact(a, b)
    spec = ProblemSpec("convection_diffusion", derived_forcing(u, _lui_velocity), boundary=_const(0.0),
                       velocity=_lui_velocity, exact=u.value)
    curve = BoundaryCurve.ellipse(a, b, name="ellipse")
    return Problem("ellipse_cd", spec, (2.4, 2.4), origin=(-1.2, -1.2), curve=curve, exact=u,
                   params={"a": a, "b": b})


def _star_cd() -> Problem:
    u = _radial_sine()
    spec = ProblemSpec("convection_diffusion", derived_forcing(u, _lui_velocity), boundary=u.value,
                       velocity=_lui_velocity, exact=u.value)
    return Problem("star_cd", spec, (2.4, 2.4), origin=(-1.2, -1.2), curve=star_curve(), exact=u)


_ENTRIES = (
    ProblemCatalogEntry("rect_poisson_x2y3", "Poisson, u = x^2 y^3 on (0,2)^2", _rect_poisson_x2y3),
    ProblemCatalogEntry("rect_cd_chiu", "convection-diffusion with harmonic flow on (0,1)^2, Reynolds number re",
                        _rect_cd_chiu, {"re": 10.0}),
    ProblemCatalogEntry("disk_poisson", "Poisson -Lap u = 4 on the disk of radius 2 about (pi, pi)", _disk_poisson),
    ProblemCatalogEntry("fish_poisson", "Poisson -Lap u = 1 inside the quartic fish curve", _fish_poisson,
                        has_exact=False, default_delta=0.1),
    ProblemCatalogEntry("ninja_poisson", "Poisson -Lap u = 1 inside r = |cos 3t|^sin 6t", _ninja_poisson,
                        has_exact=False, default_delta=0.1),
    ProblemCatalogEntry("ellipse_cd", "convection-diffusion in the ellipse x^2/a^2 + y^2/b^2 < 1", _ellipse_cd,
                        {"a": 0.9, "b": 0.6}),
    ProblemCatalogEntry("star_cd", "convection-diffusion in the star r = 0.7 + 0.2 sin 5t, u = sin(x^2 + y^2)",
                        _star_cd),
)


def catalog() -> list[ProblemCatalogEntry]:
    return list(_ENTRIES)


def get_entry(problem_id: str) -> ProblemCatalogEntry:
    for entry in _ENTRIES:
        if entry.id == problem_id:
            return entry
    raise KeyError(f"unknown problem {problem_id!r}; known: {[e.id for e in _ENTRIES]}")


def get_problem(problem_id: str, **params) -> Problem:
    return get_entry(problem_id).build(**params)


# ----------------------------------------------------------------------------
# user-defined problems

CONFIG_KEYS = {
    "id", "kind", "f", "g", "kx", "ky", "u_e", "re", "x_min", "x_max", "y_min", "y_max",
    "curve", "a", "b", "radius", "center_x", "center_y", "delta",
}


def problem_from_config(config: dict) -> Problem:
    """Build a problem from a flat JSON-style mapping of expression strings.

    Keys: ``id``, ``kind`` (``poisson`` or ``convection_diffusion``), ``f``,
    ``g``, ``kx``, ``ky``, ``u_e``, ``re``, the inner box ``x_min x_max y_min
    y_max``, and optionally ``curve`` (``circle``, ``ellipse`` or ``polar``)
    with ``a``, ``b`` (semi-axes; ``a`` is the circle radius), ``radius``
    (an expression in ``theta`` for polar curves) and ``center_x center_y``.
    ``delta`` sets the default stretch.
    """
    unknown = set(config) - CONFIG_KEYS
    if unknown:
        raise ContractError(f"unknown config keys {sorted(unknown)}")
    for key in ("kind", "f", "x_min", "x_max", "y_min", "y_max"):
        if key not in config:
            raise ContractError(f"config is missing {key!r}")
    kind = config["kind"]
    forcing = Expression(str(config["f"]))
    boundary = Expression(str(config["g"])) if "g" in config else None
    exact = Expression(str(config["u_e"])) if "u_e" in config else None
    velocity = None
    if kind == "convection_diffusion":
        kx = Expression(str(config.get("kx", "0")))
        ky = Expression(str(config.get("ky", "0")))

        def velocity(points, kx=kx, ky=ky):
            return np.stack([kx(points), ky(points)], axis=1)

    spec = ProblemSpec(kind, forcing, boundary, velocity, float(config.get("re", 1.0)), exact)
    origin = (float(config["x_min"]), float(config["y_min"]))
    lengths = (float(config["x_max"]) - origin[0], float(config["y_max"]) - origin[1])
    center = (float(config.get("center_x", 0.0)), float(config.get("center_y", 0.0)))
    shape = config.get("curve", "none")
    if shape == "none":
        curve = None
    elif shape == "circle":
        curve = BoundaryCurve.circle(float(config["a"]), center, name="circle")
    elif shape == "ellipse":
        curve = BoundaryCurve.ellipse(float(config["a"]), float(config["b"]), center, name="ellipse")
    elif shape == "polar":
        radius = Expression(str(config["radius"]))

        def radius_fn(theta, radius=radius):
            return radius.evaluate(theta=theta)

        curve = BoundaryCurve.polar(radius_fn, center, name="polar")
    else:
        raise ContractError(f"unknown curve type {shape!r}")
    problem_id = str(config.get("id", "user"))
    return Problem(problem_id, spec, lengths, origin, curve, exact, {},
                   float(config.get("delta", 2.0)))
