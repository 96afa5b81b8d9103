"""One-dimensional interpolation theory for the stretched sine basis.

Nodes live in shifted coordinates ``z = x + delta`` on ``[0, T]`` with
``T = L + 2 delta``; the physical interval is ``[delta, L + delta]``.  The
sine cardinal functions are written as a product over ``cos(pi z / T)``,
which makes them polynomial Lagrange interpolation in that variable times a
``sin`` factor.  For convection-diffusion rows the basis becomes the
phase-shifted family ``psi_j`` and cardinals are obtained by a linear solve.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import gmpy2
import numpy as np
import scipy.linalg as sla
from scipy.interpolate import BarycentricInterpolator
from scipy.linalg import lapack

from ..eigenbasis import ExtendedRectangle
from ..errors import ContractError, SingularSystemError

DEFAULT_RESOLUTION = 100_000
# above this condition estimate the double-precision cardinals are not trusted
EXTENDED_COND = 1e10


@dataclass(frozen=True)
class NodeSet1D:
    """Interpolation nodes ``z_j`` (shifted coordinates) on a stretched interval."""

    nodes: np.ndarray
    length: float
    delta: float

    def __post_init__(self):
        z = np.asarray(self.nodes, dtype=float).ravel()
        if len(z) < 1:
            raise ContractError("need at least one node")
        if self.length <= 0 or self.delta < 0:
            raise ContractError(f"need L > 0 and delta >= 0, got L={self.length}, delta={self.delta}")
        if np.any(np.diff(z) <= 0):
            raise ContractError("nodes must be strictly increasing")
        if z[0] < 0 or z[-1] > self.length + 2 * self.delta:
            raise ContractError("nodes must lie in [0, L + 2 delta]")
        z.setflags(write=False)
        object.__setattr__(self, "nodes", z)
        object.__setattr__(self, "length", float(self.length))
        object.__setattr__(self, "delta", float(self.delta))

    @classmethod
    def uniform(cls, n: int, length: float, delta: float) -> NodeSet1D:
        """``n`` equispaced nodes covering the physical interval, ends included."""
        if n < 2:
            raise ContractError(f"uniform node sets need n >= 2, got {n}")
        return cls(delta + np.linspace(0.0, length, n), length, delta)

    @classmethod
    def from_physical(cls, x, length: float, delta: float) -> NodeSet1D:
        return cls(np.asarray(x, dtype=float) + delta, length, delta)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def period(self) -> float:
        return self.length + 2 * self.delta

    @property
    def spacing(self) -> float:
        return self.length / (len(self) - 1) if len(self) > 1 else self.length

    @property
    def physical(self) -> np.ndarray:
        return self.nodes - self.delta

    def perturbed(self, rng: np.random.Generator, fraction: float = 0.5) -> NodeSet1D:
        """Move each interior node by a uniform offset of at most ``fraction * h``.

        End nodes stay put.  The result is re-sorted; offsets that would make
        two nodes coincide are redrawn.
        """
        h = self.spacing
        for _ in range(100):
            z = self.nodes.copy()
            z[1:-1] += rng.uniform(-fraction * h, fraction * h, size=len(z) - 2)
            z.sort()
            if np.all(np.diff(z) > 0):
                return NodeSet1D(z, self.length, self.delta)
        raise ContractError("could not draw a perturbation with distinct nodes")


def _unit_phase(nodes: NodeSet1D, z) -> np.ndarray:
    return np.pi * np.asarray(z, dtype=float) / nodes.period


def _check_index(nodes: NodeSet1D, j: int) -> int:
    if not 1 <= j <= len(nodes):
        raise ContractError(f"cardinal index must be in 1..{len(nodes)}, got {j}")
    return j - 1


def lagrange_1d(nodes: NodeSet1D, j: int, z):
    """Sine cardinal function ``l_j(z)`` (``j`` is 1-based) from the product formula.

    ``l_j(z) = sin(a z) prod_{k != j} (cos(a z) - cos(a z_k))
    / [sin(a z_j) prod_{k != j} (cos(a z_j) - cos(a z_k))]`` with ``a = pi / T``.
    The products are accumulated as ratios to stay in range for large ``N``,
    and each cosine difference is formed as a product of sines to avoid
    cancellation between neighbouring nodes.
    """
    i = _check_index(nodes, j)
    zz = np.asarray(z, dtype=float)
    period = nodes.period
    if np.any(zz < -1e-12 * period) or np.any(zz > period * (1 + 1e-12)):
        raise ContractError("evaluation point outside [0, L + 2 delta]")

    def cos_diff(u, v):
        return -2.0 * np.sin(_unit_phase(nodes, u + v) / 2) * np.sin(_unit_phase(nodes, u - v) / 2)

    others = np.delete(nodes.nodes, i)
    diff = cos_diff(nodes.nodes[i], others)
    if np.any(diff == 0):
        raise ContractError("coincident nodes make the cardinal function undefined")
    out = np.sin(_unit_phase(nodes, zz)) / np.sin(_unit_phase(nodes, nodes.nodes[i]))
    for zk, dk in zip(others, diff):
        out = out * (cos_diff(zz, zk) / dk)
    return float(out) if np.ndim(out) == 0 else out


def cardinal_matrix(nodes: NodeSet1D, z) -> np.ndarray:
    """All cardinal functions at once: ``M[p, j] = l_{j+1}(z_p)``."""
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    return np.stack([lagrange_1d(nodes, j, zz) for j in range(1, len(nodes) + 1)], axis=1)


def _barycentric_weights(c_nodes: np.ndarray) -> np.ndarray:
    diff = c_nodes[:, None] - c_nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(diff == 0):
        raise ContractError("coincident nodes make the cardinal functions undefined")
    return 1.0 / np.prod(diff, axis=1)


def lebesgue_function(nodes: NodeSet1D, z, chunk: int = 16384):
    """``sum_j |l_j(z)|``, evaluated in barycentric form (O(N) per point)."""
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    c_nodes = np.cos(_unit_phase(nodes, nodes.nodes))
    s_nodes = np.sin(_unit_phase(nodes, nodes.nodes))
    weights = np.abs(_barycentric_weights(c_nodes)) / np.abs(s_nodes)
    out = np.empty(len(zz))
    for a in range(0, len(zz), chunk):
        c = np.cos(_unit_phase(nodes, zz[a:a + chunk]))
        s = np.abs(np.sin(_unit_phase(nodes, zz[a:a + chunk])))
        d = c[:, None] - c_nodes[None, :]
        hit = d == 0
        d[hit] = 1.0
        node_poly = np.prod(np.abs(d), axis=1)
        val = s * node_poly * np.sum(weights / np.abs(d), axis=1)
        # at a node every other cardinal vanishes
        on_node = hit.any(axis=1)
        val[on_node] = 1.0
        out[a:a + chunk] = val
    return float(out[0]) if np.ndim(z) == 0 else out


def physical_samples(nodes: NodeSet1D, resolution: int) -> np.ndarray:
    return nodes.delta + np.linspace(0.0, nodes.length, resolution)


def lebesgue_constant(nodes: NodeSet1D, resolution: int = DEFAULT_RESOLUTION) -> float:
    """Maximum of the Lebesgue function over ``resolution`` points of the physical interval."""
    if resolution < 1000:
        raise ContractError(f"resolution must be at least 1000, got {resolution}")
    return float(np.max(lebesgue_function(nodes, physical_samples(nodes, resolution))))


def theorem1_bound(n: int, delta: float, length: float) -> float:
    """``2 N cot(delta pi / (L + 2 delta))``; infinite when ``delta = 0``."""
    if delta < 0 or length <= 0:
        raise ContractError("need delta >= 0 and L > 0")
    if delta == 0:
        return math.inf
    return 2 * n / math.tan(delta * math.pi / (length + 2 * delta))


# ----------------------------------------------------------------------------
# convection-diffusion cardinals

KField = Callable[[np.ndarray], np.ndarray]


def _as_field(k) -> KField:
    if callable(k):
        return lambda x: np.broadcast_to(np.asarray(k(x), dtype=float), np.shape(x))
    value = float(k)
    return lambda x: np.full(np.shape(x), value)


def psi_phase(j: int, kx) -> np.ndarray:
    """Phase ``theta_j = asin(1 / sqrt(1 + (j pi / k)^2))``, zero where ``k = 0``."""
    # asin(1 / sqrt(1 + c^2)) == atan(1 / |c|); this form has no overflow for tiny k
    return np.arctan(np.abs(np.asarray(kx, dtype=float)) / (j * np.pi))


def psi_basis(j: int, x, k, rect: ExtendedRectangle):
    """``sqrt(2 / T) sin(j pi (x + delta) / T + theta_j(x))`` for a 1D box.

    ``x`` is the physical coordinate (relative to ``rect.origin``) and ``k``
    is a constant or a callable of ``x``.
    """
    if rect.dim != 1:
        raise ContractError("psi_basis needs a 1D box")
    xx = np.asarray(x, dtype=float)
    period = float(rect.periods[0])
    z = rect.local(xx.reshape(-1, 1))[:, 0].reshape(xx.shape)
    out = np.sqrt(2 / period) * np.sin(j * np.pi * z / period + psi_phase(j, _as_field(k)(xx)))
    return float(out) if out.ndim == 0 else out


def _psi_rows(nodes: NodeSet1D, k, z: np.ndarray) -> np.ndarray:
    """``P[p, i] = psi_{i+1}`` at shifted points ``z``."""
    rect = ExtendedRectangle((nodes.length,), (nodes.delta,))
    x = z - nodes.delta
    return np.stack([psi_basis(i, x, k, rect) for i in range(1, len(nodes) + 1)], axis=1)


def psi_matrix(nodes: NodeSet1D, k) -> np.ndarray:
    """``Psi[i, j] = psi_i(x_j)`` (basis index first, node index second)."""
    return _psi_rows(nodes, k, nodes.nodes).T


@dataclass(frozen=True)
class CardinalSystem:
    """LU factors of ``Psi^T`` shared by every convection-diffusion cardinal."""

    nodes: NodeSet1D
    k: object
    lu: tuple = field(repr=False)
    cond: float

    @classmethod
    def build(cls, nodes: NodeSet1D, k) -> CardinalSystem:
        psi_t = psi_matrix(nodes, k).T
        lu, piv, info = lapack.dgetrf(psi_t)
        rcond = 0.0
        if info == 0:
            rcond, _ = lapack.dgecon(lu, np.linalg.norm(psi_t, 1), norm="1")
        cond = 1.0 / rcond if rcond > 0 else np.inf
        if info != 0 or rcond < np.finfo(float).eps:
            raise SingularSystemError("psi matrix is singular", cond)
        return cls(nodes, k, (lu, piv), float(cond))

    def coefficients(self) -> np.ndarray:
        """Column ``j`` solves ``Psi^T c = e_j``."""
        return sla.lu_solve(self.lu, np.eye(len(self.nodes)))

    def evaluate(self, z) -> np.ndarray:
        """``M[p, j] = l_{j+1}(z_p)`` for shifted points ``z``."""
        zz = np.atleast_1d(np.asarray(z, dtype=float))
        return _psi_rows(self.nodes, self.k, zz) @ self.coefficients()


def cd_cardinal(nodes: NodeSet1D, k, j: int, x, extended: bool = False):
    """Convection-diffusion cardinal ``l_j`` at shifted points ``x`` (``j`` 1-based).

    With ``extended`` the multiprecision route of :class:`ExtendedCardinals`
    is used, which stays accurate when the coefficient matrix is numerically
    singular (``x`` must then lie in the physical interval).
    """
    i = _check_index(nodes, j)
    system = ExtendedCardinals.build(nodes, k) if extended else CardinalSystem.build(nodes, k)
    out = system.evaluate(x)[:, i]
    return float(out[0]) if np.ndim(x) == 0 else out


def cofactor_cardinal(nodes: NodeSet1D, k, j: int, x: float) -> float:
    """Cardinal value by explicit cofactor expansion; a brute-force oracle for tiny ``N``."""
    i = _check_index(nodes, j)
    psi = psi_matrix(nodes, k)
    n = len(nodes)
    det = np.linalg.det(psi)
    if det == 0:
        raise SingularSystemError("psi matrix is singular")
    col = _psi_rows(nodes, k, np.array([x], dtype=float))[0]
    total = 0.0
    for r in range(n):
        minor = np.delete(np.delete(psi, r, axis=0), i, axis=1)
        total += (-1) ** (r + i) * col[r] * (np.linalg.det(minor) if n > 1 else 1.0)
    return float(total / det)


def cd_lebesgue_constant(nodes: NodeSet1D, k, resolution: int = 10_000) -> float:
    """Sampled Lebesgue constant of the convection-diffusion cardinals in double precision."""
    if resolution < 1000:
        raise ContractError(f"resolution must be at least 1000, got {resolution}")
    system = CardinalSystem.build(nodes, k)
    z = physical_samples(nodes, resolution)
    best = 0.0
    for a in range(0, len(z), 8192):
        best = max(best, float(np.max(np.sum(np.abs(system.evaluate(z[a:a + 8192])), axis=1))))
    return best


def _mp_psi_rows(nodes: NodeSet1D, k, z: np.ndarray) -> np.ndarray:
    """Object array of mpfr values ``psi_{j+1}(z_p)`` (uses the active gmpy2 context)."""
    n = len(nodes)
    pi = gmpy2.const_pi()
    period = gmpy2.mpfr(nodes.length) + 2 * gmpy2.mpfr(nodes.delta)
    amp = gmpy2.sqrt(2 / period)
    kx = np.asarray(_as_field(k)(z - nodes.delta), dtype=float)
    out = np.empty((len(z), n), dtype=object)
    for p, (zp, kp) in enumerate(zip(z, kx)):
        phi = pi * gmpy2.mpfr(zp) / period
        c, s = gmpy2.cos(phi), gmpy2.sin(phi)
        sj, cj = s, c
        kp = gmpy2.mpfr(kp)
        for j in range(n):
            if kp == 0:
                cth, sth = gmpy2.mpfr(1), gmpy2.mpfr(0)
            else:
                sth = 1 / gmpy2.sqrt(1 + ((j + 1) * pi / kp) ** 2)
                cth = gmpy2.sqrt(1 - sth * sth)
            out[p, j] = amp * (sj * cth + cj * sth)
            # angle addition gives sin/cos of (j + 2) phi
            sj, cj = sj * c + cj * s, cj * c - sj * s
    return out


def _mp_inverse(a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse with partial pivoting on an object array."""
    n = len(a)
    a = a.copy()
    inv = np.array([[gmpy2.mpfr(int(r == c)) for c in range(n)] for r in range(n)], dtype=object)
    for col in range(n):
        piv = col + int(np.argmax([abs(a[r, col]) for r in range(col, n)]))
        if a[piv, col] == 0:
            raise SingularSystemError("psi matrix is singular in extended precision")
        a[[col, piv]] = a[[piv, col]]
        inv[[col, piv]] = inv[[piv, col]]
        scale = a[col, col]
        a[col] = a[col] / scale
        inv[col] = inv[col] / scale
        for r in range(n):
            if r != col:
                f = a[r, col]
                a[r] = a[r] - f * a[col]
                inv[r] = inv[r] - f * inv[col]
    return inv


def chebyshev_points(nodes: NodeSet1D, m: int) -> np.ndarray:
    """Chebyshev points of the second kind on the physical interval (shifted coordinates)."""
    t = np.cos(np.pi * np.arange(m) / (m - 1))[::-1]
    return nodes.delta + 0.5 * nodes.length * (1 + t)


@dataclass(frozen=True)
class ExtendedCardinals:
    """Convection-diffusion cardinals built in multiprecision.

    The coefficient matrix becomes numerically singular long before the
    cardinal functions themselves become large.  The cardinals are therefore
    evaluated with ``bits`` of mantissa (default ``64 + 8 N``) at Chebyshev
    points of the physical interval, rounded to double, and interpolated from
    there; they are entire functions, so the Chebyshev interpolant is exact to
    rounding once it has a few points per oscillation.
    """

    nodes: NodeSet1D
    interpolant: BarycentricInterpolator = field(repr=False)
    inverse_abs_sum: float = float("nan")

    @classmethod
    def build(cls, nodes: NodeSet1D, k, bits: int | None = None, points: int | None = None) -> ExtendedCardinals:
        n = len(nodes)
        bits = bits or 64 + 8 * n
        m = points or max(64, 4 * n)
        cheb = chebyshev_points(nodes, m)
        with gmpy2.context(gmpy2.get_context(), precision=bits):
            coeffs = _mp_inverse(_mp_psi_rows(nodes, k, nodes.nodes))
            values = _mp_psi_rows(nodes, k, cheb).dot(coeffs)
            values = np.array([[float(v) for v in row] for row in values])
            abs_sum = float(sum(abs(v) for v in coeffs.ravel()))
        return cls(nodes, BarycentricInterpolator(cheb, values), abs_sum)

    def evaluate(self, z) -> np.ndarray:
        """``M[p, j] = l_{j+1}(z_p)`` for shifted points ``z`` in the physical interval."""
        return np.atleast_2d(self.interpolant(np.atleast_1d(np.asarray(z, dtype=float))))


def cd_lebesgue_constant_extended(nodes: NodeSet1D, k, resolution: int = 10_000, bits: int | None = None,
                                  cardinals: ExtendedCardinals | None = None) -> float:
    """Same quantity as :func:`cd_lebesgue_constant`, for ill-conditioned node sets."""
    if resolution < 1000:
        raise ContractError(f"resolution must be at least 1000, got {resolution}")
    cardinals = cardinals or ExtendedCardinals.build(nodes, k, bits)
    z = physical_samples(nodes, resolution)
    return float(np.max(np.sum(np.abs(cardinals.evaluate(z)), axis=1)))


def cofactor_sum_bound(nodes: NodeSet1D, k) -> float:
    """``sup|psi| * sum_{i,j} |det Psi_ji| / |det Psi|``, i.e. an entrywise-inverse bound."""
    inv = np.linalg.inv(psi_matrix(nodes, k))
    return float(np.sqrt(2 / nodes.period) * np.sum(np.abs(inv)))


@dataclass
class SweepCell:
    n: int
    k: float
    delta: float
    length: float
    lebesgue: float = float("nan")
    cofactor_bound: float = float("nan")
    cond: float = float("nan")
    method: str = "double"
    error: str | None = None


def cd_lebesgue_sweep(n_values, k_values, delta: float, length: float = 1.0,
                      resolution: int = 10_000, extended: bool = True) -> list[SweepCell]:
    """Lebesgue constants of the convection-diffusion cardinals on uniform nodes.

    Cells whose coefficient matrix is too ill-conditioned for double
    precision are redone in multiprecision when ``extended`` is set.  Failed cells keep NaN values and
    record the reason.
    """
    cells = []
    for k, n in itertools.product(k_values, n_values):
        cell = SweepCell(int(n), float(k), float(delta), float(length))
        try:
            nodes = NodeSet1D.uniform(int(n), length, delta)
            try:
                cell.cond = CardinalSystem.build(nodes, k).cond
                trusted = cell.cond <= EXTENDED_COND
            except SingularSystemError as exc:
                cell.cond = exc.cond
                trusted = False
                if not extended:
                    raise
            if trusted:
                cell.lebesgue = cd_lebesgue_constant(nodes, k, resolution)
                cell.cofactor_bound = cofactor_sum_bound(nodes, k)
            elif extended:
                cell.method = "extended"
                cardinals = ExtendedCardinals.build(nodes, k)
                cell.lebesgue = cd_lebesgue_constant_extended(nodes, k, resolution, cardinals=cardinals)
                cell.cofactor_bound = float(np.sqrt(2 / nodes.period) * cardinals.inverse_abs_sum)
            else:
                cell.lebesgue = cd_lebesgue_constant(nodes, k, resolution)
                cell.cofactor_bound = cofactor_sum_bound(nodes, k)
        except (ContractError, SingularSystemError, np.linalg.LinAlgError) as exc:
            cell.error = str(exc)
        cells.append(cell)
    return cells


# ----------------------------------------------------------------------------
# best approximation


def sine_coefficients(func: Callable[[np.ndarray], np.ndarray], length: float, delta: float, n_max: int,
                      support: tuple[float, float] | None = None, points: int = 16) -> np.ndarray:
    """``b_N = int f w_N dz`` for ``N = 1..n_max`` on the stretched interval.

    ``func`` takes physical ``x`` in ``[-delta, L + delta]``.  Composite
    Gauss-Legendre is used with one panel per half-wavelength of the highest
    mode and ``points`` nodes per panel.  ``support`` restricts the integral
    to where ``func`` is nonzero.
    """
    period = length + 2 * delta
    a, b = support if support is not None else (-delta, length + delta)
    panels = max(1, int(np.ceil((b - a) * n_max / period)))
    gx, gw = np.polynomial.legendre.leggauss(points)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    w = (half[:, None] * gw[None, :]).ravel()
    fx = np.asarray(func(x), dtype=float) * w
    modes = np.arange(1, n_max + 1)
    basis = np.sqrt(2 / period) * np.sin(np.pi * np.outer(modes, x + delta) / period)
    return basis @ fx


def sine_series(coeffs: np.ndarray, length: float, delta: float, x) -> np.ndarray:
    period = length + 2 * delta
    modes = np.arange(1, len(coeffs) + 1)
    xx = np.atleast_1d(np.asarray(x, dtype=float))
    return np.sqrt(2 / period) * np.sin(np.pi * np.outer(xx + delta, modes) / period) @ coeffs


def bump(a: float, b: float, steepness: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    """Smooth bump ``exp(-steepness / (1 - s^2))`` supported on ``(a, b)``.

    Sine coefficients of a C-infinity bump decay faster than any power, but
    only past a transient that grows with the bump's flatness; a larger
    ``steepness`` shortens it.
    """

    def func(x):
        s = (2 * np.asarray(x, dtype=float) - (a + b)) / (b - a)
        inside = np.abs(s) < 1
        out = np.zeros(np.shape(s))
        out[inside] = np.exp(-steepness / (1.0 - s[inside] ** 2))
        return out

    return func


@dataclass(frozen=True)
class DecayProfile:
    """Envelope of ``|b_N| N^p``: its peak and its maximum over the upper half of the modes."""

    power: int
    peak: float
    peak_mode: int
    tail: float

    @property
    def ratio(self) -> float:
        return self.tail / self.peak if self.peak > 0 else 0.0


def decay_profile(coeffs: np.ndarray, power: int) -> DecayProfile:
    modes = np.arange(1, len(coeffs) + 1)
    weighted = np.abs(coeffs) * modes.astype(float) ** power
    half = len(coeffs) // 2
    return DecayProfile(power, float(weighted.max()), int(np.argmax(weighted)) + 1, float(weighted[half:].max()))


def interpolate(nodes: NodeSet1D, func: Callable[[np.ndarray], np.ndarray], x) -> np.ndarray:
    """Sine interpolant ``sum_j f(x_j) l_j`` at physical points ``x``."""
    values = np.asarray(func(nodes.physical), dtype=float)
    return cardinal_matrix(nodes, np.asarray(x, dtype=float) + nodes.delta) @ values


@dataclass(frozen=True)
class InterpolationBoundCheck:
    interpolation_error: float
    best_error: float
    lebesgue: float

    @property
    def bound(self) -> float:
        return (1 + self.lebesgue) * self.best_error

    @property
    def holds(self) -> bool:
        return self.interpolation_error <= self.bound * (1 + 1e-9) + 1e-14


def interpolation_bound_check(nodes: NodeSet1D, func: Callable[[np.ndarray], np.ndarray],
                              resolution: int = 20_000) -> InterpolationBoundCheck:
    """Compare the interpolation error with ``(1 + Lambda) * ||f - S_N f||``.

    ``S_N f`` is the truncated sine series (N modes), which lies in the
    interpolation space, so the inequality must hold in the sup norm on the
    physical interval.
    """
    x = np.linspace(0.0, nodes.length, resolution)
    fx = np.asarray(func(x), dtype=float)
    coeffs = sine_coefficients(func, nodes.length, nodes.delta, len(nodes), points=24)
    best = float(np.max(np.abs(fx - sine_series(coeffs, nodes.length, nodes.delta, x))))
    # the inequality uses the best approximation's error at the nodes too
    best = max(best, float(np.max(np.abs(func(nodes.physical)
                                         - sine_series(coeffs, nodes.length, nodes.delta, nodes.physical)))))
    interp = float(np.max(np.abs(fx - interpolate(nodes, func, x))))
    return InterpolationBoundCheck(interp, best, lebesgue_constant(nodes, resolution))
