"""Moving-maximum data generating process.

The simulated series is strictly stationary and 1-dependent:

    X_{t,1} = max(W_{t,1}^(1/a), W_{t-1,1}^(1/(1-a)))
    X_{t,2} = max(W_{t,2}^(1/b), W_{t-1,2}^(1/(1-b)))

where (W_{t,1}, W_{t,2}) are iid pairs with uniform margins drawn from an
innovation copula.  Both coordinates are marginally uniform on (0, 1):
P(X <= x) = x^gamma * x^(1-gamma) = x.

Because every interior innovation enters a block through both exponents,
the disjoint-block maximum over m observations has the closed-form margin
CDF ``F_m(x) = x^(1 + (m-1) * max(gamma, 1-gamma))`` — the two block-edge
innovations contribute x^(1-gamma) and x^gamma, and each of the m-1
interior ones contributes x^max(gamma, 1-gamma) since the smaller of the
two exponents 1/gamma, 1/(1-gamma) dominates on (0, 1).  This is what
makes exact oracle-margin pseudo-observations possible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .copulas import CopulaSpec, sample
from .errors import DataError, DomainError, ParameterError

__all__ = [
    "MovingMaxParams",
    "BivariateSeries",
    "simulate_moving_max",
    "block_max_margin_cdf",
    "margin_cdfs",
]


@dataclass(frozen=True)
class MovingMaxParams:
    """Parameters of the moving-maximum process: edge weights and innovation copula."""

    a: float
    b: float
    innovation: CopulaSpec

    def __post_init__(self) -> None:
        if not (0.0 < self.a < 1.0):
            raise ParameterError(f"a must lie strictly in (0, 1), got {self.a}")
        if not (0.0 < self.b < 1.0):
            raise ParameterError(f"b must lie strictly in (0, 1), got {self.b}")
        if not isinstance(self.innovation, CopulaSpec):
            raise ParameterError(f"innovation must be a CopulaSpec, got {self.innovation!r}")


@dataclass(frozen=True, eq=False)
class BivariateSeries:
    """A finite bivariate sample, shape (n, 2)."""

    observations: np.ndarray

    def __post_init__(self) -> None:
        obs = np.asarray(self.observations, dtype=float)
        if obs.ndim != 2 or obs.shape[1] != 2:
            raise ParameterError(f"observations must have shape (n, 2), got {obs.shape}")
        if obs.shape[0] < 1:
            raise ParameterError("series must contain at least one observation")
        if not np.all(np.isfinite(obs)):
            row = int(np.argwhere(~np.isfinite(obs))[0, 0])
            raise DataError(f"non-finite observation at row {row + 1}")
        object.__setattr__(self, "observations", obs)

    @property
    def n(self) -> int:
        return self.observations.shape[0]

    def __len__(self) -> int:
        return self.observations.shape[0]


def simulate_moving_max(
    params: MovingMaxParams, n: int, rng: np.random.Generator
) -> BivariateSeries:
    """Simulate ``n`` observations of the moving-maximum process.

    Draws n+1 innovation pairs W_0, ..., W_n and combines consecutive pairs,
    so the output is a stationary 1-dependent sequence with uniform margins.
    The innovation sequence itself is not retained.
    """
    n = int(n)
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    w = sample(params.innovation, n + 1, rng)
    x1 = np.maximum(w[1:, 0] ** (1.0 / params.a), w[:-1, 0] ** (1.0 / (1.0 - params.a)))
    x2 = np.maximum(w[1:, 1] ** (1.0 / params.b), w[:-1, 1] ** (1.0 / (1.0 - params.b)))
    return BivariateSeries(np.column_stack([x1, x2]))


def block_max_margin_cdf(params: MovingMaxParams, coordinate: int, m: int, x):
    """Exact CDF of a disjoint-block maximum of size ``m`` for one coordinate.

    ``F_m(x) = x ** (1 + (m-1) * max(gamma, 1-gamma))`` with ``gamma = a``
    for coordinate 1 and ``gamma = b`` for coordinate 2.  Reduces to the
    uniform CDF at m=1.  Accepts scalar or array ``x`` in [0, 1].
    """
    if coordinate not in (1, 2):
        raise ParameterError(f"coordinate must be 1 or 2, got {coordinate}")
    m = int(m)
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(x_arr)) or np.any((x_arr < 0.0) | (x_arr > 1.0)):
        raise DomainError("x must lie in [0, 1]")
    gamma = params.a if coordinate == 1 else params.b
    exponent = 1.0 + (m - 1) * max(gamma, 1.0 - gamma)
    out = x_arr**exponent
    return float(out) if np.ndim(x) == 0 else out


def margin_cdfs(params: MovingMaxParams, m: int):
    """Pair of per-coordinate block-maximum margin CDFs, for oracle transforms."""

    def f1(x):
        return block_max_margin_cdf(params, 1, m, x)

    def f2(x):
        return block_max_margin_cdf(params, 2, m, x)

    return f1, f2
