"""Dirichlet Laplacian eigenbasis on a stretched rectangle.

The basis functions are tensor-product sines that vanish on the boundary of
the enlarged box ``R = prod_k (-delta_k, L_k + delta_k)``.  They are evaluated
on (and restricted to) the inner box ``R0 = prod_k (0, L_k)``.

Coordinates may be translated by ``origin`` so that a problem posed on, say,
``(-1.2, 1.2)^2`` can be handled without rewriting its data; all formulas use
the local coordinate ``x - origin``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ContractError, DomainError

# slack for points sitting on the closed extended box
_BOX_TOL = 1e-12


def _as_tuple(values, dim: int, name: str) -> tuple[float, ...]:
    arr = np.broadcast_to(np.asarray(values, dtype=float), (dim,))
    return tuple(float(v) for v in arr)


@dataclass(frozen=True)
class ExtendedRectangle:
    """Inner box ``(0, L_k)`` (shifted by ``origin``) plus stretch margins."""

    lengths: tuple[float, ...]
    stretch: tuple[float, ...]
    origin: tuple[float, ...] | None = None

    def __post_init__(self):
        lengths = tuple(float(v) for v in np.atleast_1d(self.lengths))
        dim = len(lengths)
        if dim not in (1, 2):
            raise ContractError(f"only 1D and 2D boxes are supported, got dim={dim}")
        stretch = _as_tuple(self.stretch, dim, "stretch")
        origin = _as_tuple(0.0 if self.origin is None else self.origin, dim, "origin")
        if any(v <= 0 for v in lengths):
            raise ContractError(f"box lengths must be positive, got {lengths}")
        if any(v < 0 for v in stretch):
            raise ContractError(f"stretch must be nonnegative, got {stretch}")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "stretch", stretch)
        object.__setattr__(self, "origin", origin)

    @classmethod
    def square(cls, length: float, delta: float, dim: int = 2, origin=None) -> ExtendedRectangle:
        return cls((length,) * dim, (delta,) * dim, origin)

    @property
    def dim(self) -> int:
        return len(self.lengths)

    @property
    def periods(self) -> np.ndarray:
        """Side lengths ``L_k + 2 delta_k`` of the extended box."""
        return np.asarray(self.lengths) + 2 * np.asarray(self.stretch)

    @property
    def inner_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.asarray(self.origin)
        return lo, lo + np.asarray(self.lengths)

    @property
    def outer_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.inner_bounds
        d = np.asarray(self.stretch)
        return lo - d, hi + d

    def with_stretch(self, delta) -> ExtendedRectangle:
        return ExtendedRectangle(self.lengths, delta, self.origin)

    def local(self, points: np.ndarray) -> np.ndarray:
        """Shift points to the ``[0, L + 2 delta]`` frame used by the sines."""
        return points - np.asarray(self.origin) + np.asarray(self.stretch)

    def contains(self, points, tol: float = _BOX_TOL) -> np.ndarray:
        """Boolean mask of points inside the closed extended box."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        lo, hi = self.outer_bounds
        scale = tol * max(1.0, float(np.max(np.abs(np.r_[lo, hi]))))
        return np.all((pts >= lo - scale) & (pts <= hi + scale), axis=1)


def _mode_order(n: int, dim: int, periods: np.ndarray) -> np.ndarray:
    grids = np.meshgrid(*([np.arange(1, n + 1)] * dim), indexing="ij")
    idx = np.stack([g.ravel() for g in grids], axis=1)
    lam = np.sum(idx**2 * np.pi**2 / periods**2, axis=1)
    # np.lexsort sorts by the last key first
    keys = [idx[:, k] for k in reversed(range(dim))] + [lam]
    return idx[np.lexsort(keys)]


@dataclass(frozen=True)
class BasisSet:
    """The ``n**d`` lowest tensor modes, ordered by eigenvalue.

    Ties (common on square boxes) are broken lexicographically on the
    multi-index.  ``order[i]`` is the 1-based multi-index of column ``i``.
    """

    rect: ExtendedRectangle
    n: int
    order: np.ndarray = field(init=False, repr=False, compare=False)
    eigenvalues: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ContractError(f"need at least 2 modes per axis, got n={self.n}")
        periods = self.rect.periods
        order = _mode_order(self.n, self.rect.dim, periods)
        lam = np.sum(order**2 * np.pi**2 / periods**2, axis=1)
        order.setflags(write=False)
        lam.setflags(write=False)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "eigenvalues", lam)

    def __len__(self) -> int:
        return len(self.order)

    @property
    def dim(self) -> int:
        return self.rect.dim

    @property
    def normalization(self) -> float:
        return 2 ** (self.dim / 2) / np.sqrt(np.prod(self.rect.periods))

    def _prepare(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, self.dim)
        inside = self.rect.contains(pts)
        if not np.all(inside):
            bad = pts[~inside][0]
            raise DomainError(f"point {bad} lies outside the extended box {self.rect.outer_bounds}")
        return pts

    def _axis_tables(self, pts: np.ndarray):
        """Per-axis sine and cosine tables of shape (m, n) over mode numbers 1..n."""
        z = self.rect.local(pts)
        j = np.arange(1, self.n + 1)
        sines, cosines = [], []
        for k in range(self.dim):
            arg = np.pi * np.outer(z[:, k], j) / self.rect.periods[k]
            sines.append(np.sin(arg))
            cosines.append(np.cos(arg))
        return sines, cosines

    def values(self, points) -> np.ndarray:
        """Matrix ``W[p, i] = w_i(points[p])``."""
        pts = self._prepare(points)
        sines, _ = self._axis_tables(pts)
        out = np.full((len(pts), len(self)), self.normalization)
        for k in range(self.dim):
            out *= sines[k][:, self.order[:, k] - 1]
        return out

    def partials(self, points, axis: int) -> np.ndarray:
        """Matrix of ``d w_i / d x_axis`` at each point (``axis`` is 0-based)."""
        if not 0 <= axis < self.dim:
            raise ContractError(f"axis must be in [0, {self.dim}), got {axis}")
        pts = self._prepare(points)
        sines, cosines = self._axis_tables(pts)
        jx = self.order[:, axis]
        out = np.full((len(pts), len(self)), self.normalization)
        out *= cosines[axis][:, jx - 1] * (jx * np.pi / self.rect.periods[axis])
        for k in range(self.dim):
            if k != axis:
                out *= sines[k][:, self.order[:, k] - 1]
        return out

    def gradients(self, points) -> np.ndarray:
        """Array of shape (m, N, d) holding every basis gradient."""
        return np.stack([self.partials(points, k) for k in range(self.dim)], axis=-1)

    def laplacians(self, points) -> np.ndarray:
        """``Delta w_i = -lambda_i w_i`` evaluated exactly."""
        return -self.values(points) * self.eigenvalues

    def coefficient_grid(self, coeffs) -> np.ndarray:
        """Coefficients rearranged as a dense ``n x ... x n`` array indexed by mode numbers."""
        a = np.asarray(coeffs, dtype=float)
        if a.shape != (len(self),):
            raise ContractError(f"expected {len(self)} coefficients, got shape {a.shape}")
        grid = np.zeros((self.n,) * self.dim)
        grid[tuple((self.order - 1).T)] = a
        return grid

    def expand(self, coeffs, points, axis: int | None = None, chunk: int = 32768) -> np.ndarray:
        """``sum_i a_i w_i`` (or its ``axis`` derivative) at each point.

        Uses the tensor-product structure, so memory is O(m n) rather than
        O(m n^d).
        """
        grid = self.coefficient_grid(coeffs)
        if axis is not None and not 0 <= axis < self.dim:
            raise ContractError(f"axis must be in [0, {self.dim}), got {axis}")
        pts = self._prepare(points)
        j = np.arange(1, self.n + 1)
        out = np.empty(len(pts))
        for a in range(0, len(pts), chunk):
            sines, cosines = self._axis_tables(pts[a:a + chunk])
            tables = list(sines)
            if axis is not None:
                tables[axis] = cosines[axis] * (j * np.pi / self.rect.periods[axis])
            if self.dim == 1:
                vals = tables[0] @ grid
            else:
                vals = np.sum((tables[0] @ grid) * tables[1], axis=1)
            out[a:a + chunk] = self.normalization * vals
        return out


def _mode_position(basis: BasisSet, j) -> np.ndarray:
    idx = np.atleast_1d(np.asarray(j, dtype=int))
    if idx.shape != (basis.dim,):
        raise DomainError(f"multi-index {j!r} does not match dimension {basis.dim}")
    if np.any(idx < 1) or np.any(idx > basis.n):
        raise DomainError(f"multi-index {tuple(idx)} outside 1..{basis.n}")
    return idx


def eigenvalue(basis: BasisSet, j) -> float:
    """Eigenvalue ``sum_k (j_k pi / (L_k + 2 delta_k))**2`` of mode ``j``."""
    idx = _mode_position(basis, j)
    return float(np.sum(idx**2 * np.pi**2 / basis.rect.periods**2))


def _single_point(basis: BasisSet, x) -> np.ndarray:
    pts = np.atleast_1d(np.asarray(x, dtype=float)).reshape(1, basis.dim)
    return basis._prepare(pts)


def eval_basis(basis: BasisSet, j, x) -> float:
    idx = _mode_position(basis, j)
    z = basis.rect.local(_single_point(basis, x))[0]
    return float(basis.normalization * np.prod(np.sin(idx * np.pi * z / basis.rect.periods)))


def eval_basis_partial(basis: BasisSet, j, x, axis: int) -> float:
    idx = _mode_position(basis, j)
    if not 0 <= axis < basis.dim:
        raise ContractError(f"axis must be in [0, {basis.dim}), got {axis}")
    z = basis.rect.local(_single_point(basis, x))[0]
    arg = idx * np.pi * z / basis.rect.periods
    factors = np.sin(arg)
    factors[axis] = np.cos(arg[axis]) * idx[axis] * np.pi / basis.rect.periods[axis]
    return float(basis.normalization * np.prod(factors))


def eval_basis_laplacian(basis: BasisSet, j, x) -> float:
    return -eigenvalue(basis, j) * eval_basis(basis, j, x)


def eval_expansion(coeffs: Sequence[float], basis: BasisSet, x, mode: str = "value"):
    """Evaluate ``sum_i a_i w_i`` (or its gradient / Laplacian) at ``x``.

    ``x`` may be a single point or an (m, d) array; the result is shaped
    accordingly.  ``mode`` is one of ``"value"``, ``"gradient"``,
    ``"laplacian"``.
    """
    a = np.asarray(coeffs, dtype=float)
    if a.shape != (len(basis),):
        raise ContractError(f"expected {len(basis)} coefficients, got shape {a.shape}")
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 0 or (pts.ndim == 1 and pts.size == basis.dim)
    pts = pts.reshape(-1, basis.dim)
    if mode == "value":
        out = basis.expand(a, pts)
    elif mode == "gradient":
        out = np.stack([basis.expand(a, pts, axis=k) for k in range(basis.dim)], axis=1)
    elif mode == "laplacian":
        out = basis.expand(-basis.eigenvalues * a, pts)
    else:
        raise ContractError(f"unknown evaluation mode {mode!r}")
    if single:
        return out[0] if mode == "gradient" else float(out[0])
    return out
