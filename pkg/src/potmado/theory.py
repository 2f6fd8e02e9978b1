"""Closed-form and simulation oracles for the madogram pipeline.

Contents:

* extreme-value copula evaluation from a Pickands function,
* the population madogram S(t, c) by quadrature, with the closed form
  S = c A / (c A + 1) available as a cross-check,
* leading-order bias and variance of the Pickands estimator,
* a brute-force reference Pickands curve for the moving-maximum process,
  obtained from many independent size-big_m blocks with oracle margins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy import integrate, special

from .blocks import BlockScheme, block_maxima, oracle_transform
from .copulas import CopulaSpec, attractor_pickands
from .dgp import MovingMaxParams, margin_cdfs, simulate_moving_max
from .errors import DomainError, NumericalError, ParameterError
from .madogram import PickandsCurve, _power_max_matrix, default_grid, pickands_from_madogram
from .rngs import derive_rng

__all__ = [
    "LimitModel",
    "extreme_copula_cdf",
    "true_madogram",
    "closed_form_madogram",
    "asymptotic_variance",
    "asymptotic_bias",
    "reference_pickands_oracle",
]

_QUAD_TARGET = 1e-10


@dataclass(frozen=True)
class LimitModel:
    """An extreme-value limit: a Pickands function plus optional second-order data.

    ``pickands`` is either a callable A: [0,1] -> [max(t,1-t), 1] or a
    CopulaSpec with a known attractor.  ``S_value``, ``rho`` and ``a_m``
    parameterize the leading bias term when available (the second-order
    scale S(e^-(1-t), e^-t), the regular-variation index rho < 0, and the
    rate a(m)).
    """

    pickands: object
    S_value: float | None = None
    rho: float | None = None
    a_m: float | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.pickands, CopulaSpec) and not callable(self.pickands):
            raise ParameterError("pickands must be a callable or a CopulaSpec")
        for t_end in (0.0, 1.0):
            value = float(self._raw_pickands(t_end))
            if abs(value - 1.0) > 1e-9:
                raise ParameterError(
                    f"Pickands function must equal 1 at t={t_end:g}, got {value!r}"
                )
        if self.rho is not None and not (self.rho < 0.0):
            raise ParameterError(f"rho must be negative, got {self.rho}")
        if self.a_m is not None and not (self.a_m > 0.0):
            raise ParameterError(f"a_m must be positive, got {self.a_m}")
        if self.S_value is not None and not math.isfinite(self.S_value):
            raise ParameterError(f"S_value must be finite, got {self.S_value}")

    def _raw_pickands(self, t):
        if isinstance(self.pickands, CopulaSpec):
            return attractor_pickands(self.pickands, t)
        return self.pickands(t)

    def pickands_at(self, t):
        """Evaluate A(t) for scalar or array t in [0, 1]."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(np.isnan(t_arr)) or np.any((t_arr < 0.0) | (t_arr > 1.0)):
            raise DomainError("t must lie in [0, 1]")
        if isinstance(self.pickands, CopulaSpec):
            return attractor_pickands(self.pickands, t)
        if t_arr.ndim == 0:
            return float(self.pickands(float(t_arr)))
        return np.asarray([float(self.pickands(float(ti))) for ti in t_arr])


def extreme_copula_cdf(model: LimitModel, u: float, v: float) -> float:
    """Extreme-value copula C(u, v) = exp(log(uv) * A(log v / log(uv)))."""
    u = float(u)
    v = float(v)
    if math.isnan(u) or math.isnan(v) or not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
        raise DomainError(f"(u, v) must lie in the unit square, got ({u}, {v})")
    if u == 0.0 or v == 0.0:
        return 0.0
    if u == 1.0 and v == 1.0:
        return 1.0
    log_u = math.log(u)
    log_v = math.log(v)
    t = log_v / (log_u + log_v)
    return math.exp((log_u + log_v) * float(model.pickands_at(t)))


def closed_form_madogram(model: LimitModel, t: float, c: float) -> float:
    """Closed form S(t, c) = c A(t) / (c A(t) + 1)."""
    if not (c > 0.0):
        raise ParameterError(f"c must be positive, got {c}")
    a_t = float(model.pickands_at(t))
    return c * a_t / (c * a_t + 1.0)


def true_madogram(model: LimitModel, t: float, c: float) -> float:
    """Population madogram S(t, c) = 1 - integral of C(y^(c(1-t)), y^(ct)) over [0, 1].

    Evaluated by adaptive quadrature to an absolute accuracy of 1e-10; the
    integrand is smooth on (0, 1) and lies in [0, 1].  The closed form
    :func:`closed_form_madogram` agrees to the same accuracy and is kept as
    an independent cross-check.
    """
    if not (c > 0.0):
        raise ParameterError(f"c must be positive, got {c}")
    t = float(t)
    if not (0.0 <= t <= 1.0):
        raise DomainError(f"t must lie in [0, 1], got {t}")
    e1 = c * (1.0 - t)
    e2 = c * t

    def integrand(y: float) -> float:
        return extreme_copula_cdf(model, y**e1, y**e2)

    value, abserr = integrate.quad(
        integrand, 0.0, 1.0, epsabs=_QUAD_TARGET * 0.01, epsrel=1e-12, limit=200
    )
    if abserr > 1e-9:
        raise NumericalError(
            f"madogram quadrature did not converge (reported error {abserr:.3e})"
        )
    return 1.0 - float(value)


def asymptotic_variance(A_t: float, c: float, m: int, n: int) -> float:
    """Leading-order variance (m/n) * (cA+1)^2 A / (c (cA+2)) of the Pickands estimator."""
    A_t = float(A_t)
    if not (0.5 <= A_t <= 1.0):
        raise ParameterError(f"A_t must lie in [0.5, 1], got {A_t}")
    if not (c > 0.0):
        raise ParameterError(f"c must be positive, got {c}")
    m = int(m)
    n = int(n)
    if m < 1 or n < m:
        raise ParameterError(f"need 1 <= m <= n, got m={m}, n={n}")
    u = c * A_t
    return (m / n) * (u + 1.0) ** 2 * A_t / (c * (u + 2.0))


def asymptotic_bias(S_value: float, rho: float, a_m: float, A_t: float, c: float) -> float:
    """Leading-order bias a_m * S_value * e^A * Gamma(2 - rho) * ((cA+1)/c)^rho.

    All second-order quantities (S_value, rho, a_m) are caller-supplied;
    they are model-specific constants with no generic closed form.
    """
    if not (rho < 0.0):
        raise ParameterError(f"rho must be negative, got {rho}")
    if not (a_m > 0.0):
        raise ParameterError(f"a_m must be positive, got {a_m}")
    if not (c > 0.0):
        raise ParameterError(f"c must be positive, got {c}")
    A_t = float(A_t)
    return (
        a_m
        * float(S_value)
        * math.exp(A_t)
        * float(special.gamma(2.0 - rho))
        * ((c * A_t + 1.0) / c) ** rho
    )


# ---------------------------------------------------------------------------
# Brute-force reference curve for the moving-maximum process
# ---------------------------------------------------------------------------


def _reference_rep_v(params: MovingMaxParams, big_m: int, grid: np.ndarray, seed: int, rep: int) -> np.ndarray:
    """Madogram terms (c=1) of one independent size-big_m block, length T."""
    rng = derive_rng(seed, rep)
    series = simulate_moving_max(params, big_m, rng)
    block = block_maxima(series, BlockScheme("disjoint", big_m))
    pseudo = oracle_transform(block, margin_cdfs(params, big_m))
    return _power_max_matrix(pseudo.pairs, grid, 1.0)[0]


def _reference_chunk(args) -> tuple[int, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    params, big_m, grid, seed, start, stop = args
    T = grid.size
    s1 = np.zeros(T)
    s2 = np.zeros(T)
    s_v0 = np.zeros(T)
    s_v1 = np.zeros(T)
    for rep in range(start, stop):
        v = _reference_rep_v(params, big_m, grid, seed, rep)
        s1 += v
        s2 += v * v
        s_v0 += v * v[0]
        s_v1 += v * v[-1]
    return stop - start, s1, s2, s_v0, s_v1


_REFERENCE_CHUNK_SIZE = 512


def reference_pickands_oracle(
    params: MovingMaxParams,
    big_m: int,
    reps: int,
    grid: np.ndarray | None = None,
    seed: int = 0,
    workers: int = 1,
) -> PickandsCurve:
    """Brute-force reference Pickands curve of the block-maxima limit of the DGP.

    Simulates ``reps`` independent series of length ``big_m``, takes each
    whole series as one disjoint block, applies the exact oracle margin
    CDF, and inverts the c=1 madogram with boundary correction.  Each rep
    draws from its own stream derived from (seed, rep), so results do not
    depend on ``workers`` or scheduling.

    The returned curve carries a delta-method standard error per grid
    point, accounting for the covariance between the curve value and the
    two endpoint estimates used by the correction.
    """
    big_m = int(big_m)
    reps = int(reps)
    if big_m < 1000:
        raise ParameterError(f"big_m must be >= 1000 for a trustworthy reference, got {big_m}")
    if reps < 2:
        raise ParameterError(f"reps must be >= 2, got {reps}")
    if grid is None:
        grid = default_grid()
    grid = np.asarray(grid, dtype=float)
    if grid[0] != 0.0 or grid[-1] != 1.0:
        raise ParameterError("reference grid must contain t=0 and t=1")

    chunks = [
        (params, big_m, grid, int(seed), start, min(start + _REFERENCE_CHUNK_SIZE, reps))
        for start in range(0, reps, _REFERENCE_CHUNK_SIZE)
    ]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=int(workers)) as pool:
            results = list(pool.map(_reference_chunk, chunks))
    else:
        results = [_reference_chunk(chunk) for chunk in chunks]

    T = grid.size
    s1 = np.zeros(T)
    s2 = np.zeros(T)
    s_v0 = np.zeros(T)
    s_v1 = np.zeros(T)
    total = 0
    for count, c1, c2, c_v0, c_v1 in results:  # fixed chunk order
        total += count
        s1 += c1
        s2 += c2
        s_v0 += c_v0
        s_v1 += c_v1

    s_bar = s1 / total
    # Unbiased covariance entries of the per-rep madogram terms.
    var_v = (s2 - total * s_bar**2) / (total - 1)
    cov_v0 = (s_v0 - total * s_bar * s_bar[0]) / (total - 1)
    cov_v1 = (s_v1 - total * s_bar * s_bar[-1]) / (total - 1)

    a_hat = pickands_from_madogram(s_bar, 1.0)
    corrected = a_hat - (1.0 - grid) * (a_hat[0] - 1.0) - grid * (a_hat[-1] - 1.0)
    corrected[0] = 1.0
    corrected[-1] = 1.0

    # Delta method for g(S_t, S_0, S_1) = f(S_t) - (1-t)(f(S_0)-1) - t(f(S_1)-1)
    # with f(s) = 1/(1-s) - 1 (c = 1), f'(s) = (1-s)^-2.
    fp = (1.0 - s_bar) ** -2.0
    g_t = fp
    g_0 = -(1.0 - grid) * fp[0]
    g_1 = -grid * fp[-1]
    quad_form = (
        g_t**2 * var_v
        + g_0**2 * var_v[0]
        + g_1**2 * var_v[-1]
        + 2.0 * g_t * g_0 * cov_v0
        + 2.0 * g_t * g_1 * cov_v1
        + 2.0 * g_0 * g_1 * cov_v1[0]
    )
    stderr = np.sqrt(np.maximum(quad_form, 0.0) / total)
    stderr[0] = 0.0
    stderr[-1] = 0.0

    return PickandsCurve(
        grid=grid,
        values=corrected,
        c=1.0,
        scheme=BlockScheme("disjoint", big_m),
        corrected=True,
        stderr=stderr,
    )
