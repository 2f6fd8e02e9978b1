"""Block maxima extraction and pseudo-observations.

Disjoint blocks partition the series into floor(n/m) windows of length m
(trailing remainder discarded); sliding blocks use all n-m+1 windows.
Block maxima are mapped to the unit square either by the empirical CDF of
the block maxima themselves (rank-based, dividing by the block count b so
the largest block gets exactly 1) or by caller-supplied true margin CDFs
(oracle margins).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dgp import BivariateSeries
from .errors import DomainError, ParameterError

__all__ = [
    "BlockScheme",
    "BlockPseudoObservations",
    "block_maxima",
    "rank_transform",
    "oracle_transform",
    "empirical_copula",
]

SCHEME_KINDS = ("disjoint", "sliding")
MARGIN_MODES = ("rank", "oracle")


@dataclass(frozen=True)
class BlockScheme:
    """Blocking scheme: ``kind`` is "disjoint" or "sliding", ``m`` the block size."""

    kind: str
    m: int

    def __post_init__(self) -> None:
        if self.kind not in SCHEME_KINDS:
            raise ParameterError(f"scheme kind must be one of {SCHEME_KINDS}, got {self.kind!r}")
        if int(self.m) != self.m or self.m < 1:
            raise ParameterError(f"block size m must be a positive integer, got {self.m}")
        object.__setattr__(self, "m", int(self.m))

    def block_count(self, n: int) -> int:
        """Number of blocks a length-n series yields under this scheme."""
        if self.m > n:
            raise ParameterError(f"block size m={self.m} exceeds series length n={n}")
        return n // self.m if self.kind == "disjoint" else n - self.m + 1


@dataclass(frozen=True, eq=False)
class BlockPseudoObservations:
    """Per-block pairs in (0, 1]^2 with their provenance."""

    pairs: np.ndarray
    scheme: BlockScheme | None = None
    margin_mode: str = "rank"

    def __post_init__(self) -> None:
        pairs = np.asarray(self.pairs, dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ParameterError(f"pairs must have shape (b, 2), got {pairs.shape}")
        if pairs.shape[0] < 1:
            raise ParameterError("pseudo-observations must be nonempty")
        if np.any(np.isnan(pairs)) or np.any((pairs <= 0.0) | (pairs > 1.0)):
            raise ParameterError("pseudo-observations must lie in (0, 1]")
        if self.margin_mode not in MARGIN_MODES:
            raise ParameterError(
                f"margin_mode must be one of {MARGIN_MODES}, got {self.margin_mode!r}"
            )
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return self.pairs.shape[0]


def block_maxima(series: BivariateSeries, scheme: BlockScheme) -> np.ndarray:
    """Coordinatewise block maxima; returns an array of shape (block count, 2)."""
    obs = series.observations
    n = obs.shape[0]
    count = scheme.block_count(n)
    m = scheme.m
    if scheme.kind == "disjoint":
        return obs[: count * m].reshape(count, m, 2).max(axis=1)
    windows = np.lib.stride_tricks.sliding_window_view(obs, m, axis=0)
    return windows.max(axis=-1)


def rank_transform(
    blocks: np.ndarray, scheme: BlockScheme | None = None
) -> BlockPseudoObservations:
    """Empirical-CDF pseudo-observations of block maxima.

    Each coordinate is ranked against all b blocks (ties get the max rank,
    i.e. the ECDF evaluated at the observation) and divided by b, so values
    lie in {1/b, ..., 1}.
    """
    blocks = np.asarray(blocks, dtype=float)
    if blocks.ndim != 2 or blocks.shape[1] != 2 or blocks.shape[0] < 1:
        raise ParameterError(f"blocks must have shape (b, 2) with b >= 1, got {blocks.shape}")
    b = blocks.shape[0]
    u = np.empty_like(blocks)
    for j in range(2):
        col = blocks[:, j]
        u[:, j] = np.searchsorted(np.sort(col), col, side="right") / b
    return BlockPseudoObservations(u, scheme=scheme, margin_mode="rank")


def _probe_margin_cdf(f, values: np.ndarray, coordinate: int) -> np.ndarray:
    out = np.asarray(f(values), dtype=float)
    if out.shape != values.shape:
        raise ParameterError(f"margin CDF for coordinate {coordinate} must map arrays elementwise")
    if np.any(np.isnan(out)) or np.any((out < 0.0) | (out > 1.0)):
        raise ParameterError(f"margin CDF for coordinate {coordinate} must map into [0, 1]")
    order = np.argsort(values, kind="stable")
    sorted_out = out[order]
    if np.any(np.diff(sorted_out) < 0.0):
        raise ParameterError(f"margin CDF for coordinate {coordinate} is not nondecreasing")
    distinct = np.unique(values).size
    if distinct >= 2 and sorted_out[-1] <= sorted_out[0]:
        raise ParameterError(
            f"margin CDF for coordinate {coordinate} is constant over the observed block maxima"
        )
    return out


def oracle_transform(
    blocks: np.ndarray, margin_cdfs, scheme: BlockScheme | None = None
) -> BlockPseudoObservations:
    """Pseudo-observations through true (oracle) margin CDFs.

    ``margin_cdfs`` is a pair of callables, one per coordinate (for example
    from :func:`potmado.dgp.margin_cdfs`).  Each is probed on the observed
    block maxima and rejected if it is non-monotone, constant, or maps
    outside [0, 1].
    """
    blocks = np.asarray(blocks, dtype=float)
    if blocks.ndim != 2 or blocks.shape[1] != 2 or blocks.shape[0] < 1:
        raise ParameterError(f"blocks must have shape (b, 2) with b >= 1, got {blocks.shape}")
    try:
        f1, f2 = margin_cdfs
    except (TypeError, ValueError) as exc:
        raise ParameterError("margin_cdfs must be a pair of callables") from exc
    u1 = _probe_margin_cdf(f1, blocks[:, 0], 1)
    u2 = _probe_margin_cdf(f2, blocks[:, 1], 2)
    return BlockPseudoObservations(
        np.column_stack([u1, u2]), scheme=scheme, margin_mode="oracle"
    )


def empirical_copula(pseudo: BlockPseudoObservations, u: float, v: float) -> float:
    """Fraction of pseudo-observation pairs with U1 <= u and U2 <= v."""
    u = float(u)
    v = float(v)
    if not (0.0 <= u <= 1.0) or not (0.0 <= v <= 1.0):
        raise DomainError(f"(u, v) must lie in the unit square, got ({u}, {v})")
    pairs = pseudo.pairs
    return float(np.mean((pairs[:, 0] <= u) & (pairs[:, 1] <= v)))
