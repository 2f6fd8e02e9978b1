"""Weighted madogram estimation of the Pickands dependence function.

The estimator averages, over blocks, the larger of the two powered
pseudo-observations:

    S_hat(t, c) = (1/b) * sum_i max(U_{i,1}^(1/(c(1-t))), U_{i,2}^(1/(c t)))

which is then inverted through A(t) = (1/c) * (1/(1 - S) - 1).  Small c
puts more weight on the joint upper tail (a peaks-over-threshold flavour),
large c behaves like the classical madogram.  The additive boundary
correction pins the curve to 1 at t = 0 and t = 1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .blocks import BlockPseudoObservations, BlockScheme, block_maxima, oracle_transform, rank_transform
from .dgp import BivariateSeries
from .errors import DomainError, ParameterError

__all__ = [
    "PickandsCurve",
    "DegenerateMadogramWarning",
    "default_grid",
    "madogram_estimate",
    "madogram_curve",
    "pickands_from_madogram",
    "estimate_pickands_curve",
    "boundary_correct",
]

_CLAMP = 1e-12


class DegenerateMadogramWarning(RuntimeWarning):
    """Raised as a warning when S >= 1 - 1e-12 had to be clamped before inversion.

    This happens for degenerate block sets (e.g. a single block, whose
    rank-based pseudo-observations are exactly (1, 1)).
    """


@dataclass(frozen=True, eq=False)
class PickandsCurve:
    """Values of an estimated or true Pickands dependence function on a t-grid."""

    grid: np.ndarray
    values: np.ndarray
    c: float
    scheme: BlockScheme | None = None
    corrected: bool = False
    stderr: np.ndarray | None = None

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.size < 1:
            raise ParameterError("grid must be a nonempty 1-D array")
        if values.shape != grid.shape:
            raise ParameterError("values must match the grid in length")
        if np.any(np.isnan(grid)) or grid[0] < 0.0 or grid[-1] > 1.0:
            raise ParameterError("grid values must lie in [0, 1]")
        if np.any(np.diff(grid) <= 0.0):
            raise ParameterError("grid must be strictly increasing")
        if not (self.c > 0.0):
            raise ParameterError(f"c must be positive, got {self.c}")
        if self.corrected:
            if grid[0] == 0.0 and values[0] != 1.0:
                raise ParameterError("corrected curve must equal 1 exactly at t=0")
            if grid[-1] == 1.0 and values[-1] != 1.0:
                raise ParameterError("corrected curve must equal 1 exactly at t=1")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if self.stderr is not None:
            stderr = np.asarray(self.stderr, dtype=float)
            if stderr.shape != grid.shape or np.any(np.isnan(stderr)) or np.any(stderr < 0.0):
                raise ParameterError("stderr must be a nonnegative array matching the grid")
            object.__setattr__(self, "stderr", stderr)

    def __len__(self) -> int:
        return self.grid.size


def default_grid(T: int = 51) -> np.ndarray:
    """Evenly spaced t-grid t_k = k/(T-1), k = 0..T-1."""
    T = int(T)
    if T < 2:
        raise ParameterError(f"grid size T must be >= 2, got {T}")
    return np.linspace(0.0, 1.0, T)


def _power_max_matrix(pairs: np.ndarray, grid: np.ndarray, c: float) -> np.ndarray:
    """Per-block madogram terms for every grid point, shape (b, T).

    At t in {0, 1} the degenerate power U^(1/(c*0)) is taken as its pointwise
    limit: 0 for U < 1 and 1 for U = 1.
    """
    out = np.empty((pairs.shape[0], grid.size))
    interior = (grid > 0.0) & (grid < 1.0)
    if interior.any():
        ti = grid[interior][None, :]
        u1 = pairs[:, 0][:, None]
        u2 = pairs[:, 1][:, None]
        out[:, interior] = np.maximum(
            u1 ** (1.0 / (c * (1.0 - ti))), u2 ** (1.0 / (c * ti))
        )
    zero = grid == 0.0
    if zero.any():
        col = np.maximum(pairs[:, 0] ** (1.0 / c), (pairs[:, 1] == 1.0).astype(float))
        out[:, zero] = col[:, None]
    one = grid == 1.0
    if one.any():
        col = np.maximum(pairs[:, 1] ** (1.0 / c), (pairs[:, 0] == 1.0).astype(float))
        out[:, one] = col[:, None]
    return out


def _check_c(c: float) -> float:
    c = float(c)
    if not (c > 0.0) or not np.isfinite(c):
        raise ParameterError(f"weight parameter c must be positive, got {c}")
    return c


def madogram_estimate(pseudo: BlockPseudoObservations, t: float, c: float) -> float:
    """Weighted madogram S_hat(t, c) of one pseudo-observation set at one t.

    The average runs over blocks in index order.  Result lies in [0, 1].
    """
    c = _check_c(c)
    t = float(t)
    if not (0.0 <= t <= 1.0):
        raise DomainError(f"t must lie in [0, 1], got {t}")
    pairs = pseudo.pairs
    if t == 0.0:
        v = np.maximum(pairs[:, 0] ** (1.0 / c), (pairs[:, 1] == 1.0).astype(float))
    elif t == 1.0:
        v = np.maximum(pairs[:, 1] ** (1.0 / c), (pairs[:, 0] == 1.0).astype(float))
    else:
        v = np.maximum(
            pairs[:, 0] ** (1.0 / (c * (1.0 - t))), pairs[:, 1] ** (1.0 / (c * t))
        )
    return float(np.mean(v))


def madogram_curve(pseudo: BlockPseudoObservations, grid: np.ndarray, c: float) -> np.ndarray:
    """Vectorized S_hat(t, c) over a whole t-grid; returns an array of length T."""
    c = _check_c(c)
    grid = np.asarray(grid, dtype=float)
    if np.any(np.isnan(grid)) or np.any((grid < 0.0) | (grid > 1.0)):
        raise DomainError("grid values must lie in [0, 1]")
    return _power_max_matrix(pseudo.pairs, grid, c).mean(axis=0)


def pickands_from_madogram(S, c: float):
    """Invert the madogram: A = (1/c) * (1/(1-S) - 1).

    Accepts a scalar or array S in [0, 1].  Values with S >= 1 - 1e-12 are
    clamped to 1 - 1e-12 before inversion and flagged with a
    :class:`DegenerateMadogramWarning` (a single block or an all-ties block
    set legitimately produces S = 1).
    """
    c = _check_c(c)
    s_arr = np.asarray(S, dtype=float)
    if np.any(np.isnan(s_arr)) or np.any(s_arr < 0.0) or np.any(s_arr > 1.0):
        raise DomainError("S must lie in [0, 1]")
    clamped = s_arr >= 1.0 - _CLAMP
    if clamped.any():
        warnings.warn(
            "madogram value at or above 1 - 1e-12 clamped before inversion "
            "(degenerate block set)",
            DegenerateMadogramWarning,
            stacklevel=2,
        )
        s_arr = np.where(clamped, 1.0 - _CLAMP, s_arr)
    out = (1.0 / c) * (1.0 / (1.0 - s_arr) - 1.0)
    return float(out) if np.ndim(S) == 0 else out


def estimate_pickands_curve(
    series: BivariateSeries,
    scheme: BlockScheme,
    c: float,
    grid: np.ndarray | None = None,
    margin_mode: str = "rank",
    margin_cdfs=None,
) -> PickandsCurve:
    """Full estimation pipeline: block maxima -> pseudo-observations -> madogram -> A.

    Returns the uncorrected curve; apply :func:`boundary_correct` for the
    boundary-pinned version.  ``margin_mode`` selects rank-based (default)
    or oracle-margin pseudo-observations; the latter requires
    ``margin_cdfs``, a pair of per-coordinate CDF callables.
    """
    if grid is None:
        grid = default_grid()
    blocks = block_maxima(series, scheme)
    if margin_mode == "rank":
        pseudo = rank_transform(blocks, scheme)
    elif margin_mode == "oracle":
        if margin_cdfs is None:
            raise ParameterError("margin_mode='oracle' requires margin_cdfs")
        pseudo = oracle_transform(blocks, margin_cdfs, scheme)
    else:
        raise ParameterError(f"unknown margin_mode {margin_mode!r}")
    s_values = madogram_curve(pseudo, grid, c)
    values = pickands_from_madogram(s_values, c)
    return PickandsCurve(grid=grid, values=values, c=c, scheme=scheme, corrected=False)


def boundary_correct(curve: PickandsCurve) -> PickandsCurve:
    """Additive boundary correction pinning the curve to 1 at both endpoints.

    A_check(t) = A_hat(t) - (1-t)(A_hat(0) - 1) - t(A_hat(1) - 1).  The
    endpoint values are set to exactly 1.0; applying the correction twice
    equals applying it once.  Any standard errors on the input are dropped
    (they refer to the uncorrected curve).
    """
    grid = curve.grid
    if grid[0] != 0.0 or grid[-1] != 1.0:
        raise ParameterError("boundary correction requires a grid containing t=0 and t=1")
    a0 = curve.values[0]
    a1 = curve.values[-1]
    values = curve.values - (1.0 - grid) * (a0 - 1.0) - grid * (a1 - 1.0)
    values[0] = 1.0
    values[-1] = 1.0
    return replace(curve, values=values, corrected=True, stderr=None)
