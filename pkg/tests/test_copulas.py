"""Copula CDFs, sampling, conditional inversion, and attractor Pickands functions."""

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from potmado import (
    Comonotone,
    Gaussian,
    Independence,
    Logistic,
    OuterPowerClayton,
    PAPER_BETA,
    StudentT,
    attractor_pickands,
    cdf,
    conditional_inverse,
    sample,
)
from potmado.copulas import _conditional_inverse_vec
from potmado.errors import DomainError, ParameterError

ALL_SPECS = [
    OuterPowerClayton(1.0, PAPER_BETA),
    StudentT(4.0, 0.494217),
    Gaussian(0.5),
    Independence(),
    Comonotone(),
    Logistic(PAPER_BETA),
]
CLOSED_FORM_SPECS = [s for s in ALL_SPECS if not isinstance(s, (StudentT, Gaussian))]


@pytest.mark.parametrize(
    "build",
    [
        lambda: OuterPowerClayton(0.0, 1.2),
        lambda: OuterPowerClayton(-1.0, 1.2),
        lambda: OuterPowerClayton(1.0, 0.99),
        lambda: StudentT(0.0, 0.5),
        lambda: StudentT(4.0, 1.0),
        lambda: StudentT(4.0, -1.0),
        lambda: Gaussian(1.0),
        lambda: Gaussian(-1.5),
        lambda: Logistic(0.5),
    ],
)
def test_spec_validation(build):
    with pytest.raises(ParameterError):
        build()


def test_cdf_exact_values():
    # outer-power Clayton at (1/2, 1/2) with theta=1: (u^-1 - 1) = 1, so the
    # inner sum is 2 and 2^(1/beta) = 1.75 by the choice of beta.
    assert cdf(OuterPowerClayton(1.0, PAPER_BETA), 0.5, 0.5) == pytest.approx(
        1.0 / 2.75, abs=1e-15
    )
    # logistic at (1/2, 1/2): exp(-(2 log(2)^beta)^(1/beta)) = 2^(-1.75)
    assert cdf(Logistic(PAPER_BETA), 0.5, 0.5) == pytest.approx(2.0 ** -1.75, abs=1e-15)
    assert cdf(Independence(), 0.3, 0.7) == pytest.approx(0.21, abs=1e-15)
    assert cdf(Comonotone(), 0.3, 0.7) == 0.3


@pytest.mark.parametrize("spec,rho", [(Gaussian(0.5), 0.5), (StudentT(4.0, 0.494217), 0.494217)])
def test_elliptical_diagonal_identity(spec, rho):
    # C(1/2, 1/2) = 1/4 + arcsin(rho) / (2 pi) for both elliptical families;
    # an independent closed form checking the quadrature-based CDF.
    expected = 0.25 + np.arcsin(rho) / (2.0 * np.pi)
    assert cdf(spec, 0.5, 0.5) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_cdf_boundaries_and_margins(spec):
    for p in (0.2, 0.5, 0.9):
        assert cdf(spec, p, 0.0) == 0.0
        assert cdf(spec, 0.0, p) == 0.0
        assert cdf(spec, p, 1.0) == pytest.approx(p, abs=1e-9)
        assert cdf(spec, 1.0, p) == pytest.approx(p, abs=1e-9)
    assert cdf(spec, 1.0, 1.0) == 1.0
    assert cdf(spec, 0.0, 0.0) == 0.0


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_cdf_frechet_bounds_and_rectangle_inequality(spec):
    # elliptical CDFs go through quadrature, so keep their grid coarse
    k = 6 if isinstance(spec, (Gaussian, StudentT)) else 21
    grid = np.linspace(0.0, 1.0, k)
    values = np.array([[cdf(spec, u, v) for v in grid] for u in grid])
    lower = np.maximum.outer(grid, grid * 0) * 0 + np.maximum(
        np.add.outer(grid, grid) - 1.0, 0.0
    )
    upper = np.minimum.outer(grid, grid)
    assert np.all(values >= lower - 1e-9)
    assert np.all(values <= upper + 1e-9)
    # 2-increasing: every rectangle carries nonnegative mass
    rect = values[1:, 1:] - values[:-1, 1:] - values[1:, :-1] + values[:-1, :-1]
    assert rect.min() >= -1e-9


def test_cdf_rejects_out_of_range():
    with pytest.raises(DomainError):
        cdf(Independence(), -0.1, 0.5)
    with pytest.raises(DomainError):
        cdf(Independence(), 0.5, 1.1)


def test_cdf_returns_python_float():
    for spec in ALL_SPECS:
        out = cdf(spec, 0.4, 0.6)
        assert isinstance(out, float)


@pytest.mark.parametrize("spec", [OuterPowerClayton(1.0, PAPER_BETA), Logistic(PAPER_BETA)])
@pytest.mark.parametrize("u", [0.05, 0.3, 0.7, 0.99])
@pytest.mark.parametrize("w", [0.01, 0.5, 0.95])
def test_conditional_inverse_matches_cdf_derivative(spec, u, w):
    # dC/du at (u, v*) recovered by a central difference must equal w
    v = conditional_inverse(spec, u, w)
    assert 0.0 < v < 1.0
    h = 1e-6 * min(u, 1.0 - u)
    deriv = (cdf(spec, u + h, v) - cdf(spec, u - h, v)) / (2.0 * h)
    assert deriv == pytest.approx(w, rel=5e-5, abs=5e-7)


def test_conditional_inverse_independence_is_identity():
    assert conditional_inverse(Independence(), 0.42, 0.87) == 0.87


def test_conditional_inverse_monotone_in_w():
    spec = OuterPowerClayton(1.0, PAPER_BETA)
    vs = [conditional_inverse(spec, 0.4, w) for w in (0.1, 0.3, 0.5, 0.7, 0.9)]
    assert np.all(np.diff(vs) > 0.0)


def test_conditional_inverse_validation():
    spec = Logistic(PAPER_BETA)
    for u, w in ((0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0)):
        with pytest.raises(ParameterError):
            conditional_inverse(spec, u, w)
    with pytest.raises(ParameterError):
        conditional_inverse(Gaussian(0.5), 0.5, 0.5)


def test_conditional_inverse_near_degenerate_u():
    # for u within a few ulp of 1 the conditional CDF is extremely steep near
    # v = 1; the bisection must still pin the root instead of failing
    spec = OuterPowerClayton(1.0, PAPER_BETA)
    u = np.array([0.9999999997934493, 1.0 - 1e-13])
    w = np.array([0.6401479192682279, 0.25])
    v = _conditional_inverse_vec(spec, u, w)
    assert np.all((v > 0.0) & (v < 1.0))
    assert np.all(np.diff(np.concatenate([v, [1.0]])) >= 0.0)


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_sample_shape_range_and_determinism(spec):
    draws = sample(spec, 512, np.random.default_rng(7))
    again = sample(spec, 512, np.random.default_rng(7))
    assert draws.shape == (512, 2)
    assert np.all((draws > 0.0) & (draws <= 1.0))
    assert np.array_equal(draws, again)


def test_sample_comonotone_is_diagonal():
    draws = sample(Comonotone(), 100, np.random.default_rng(1))
    assert np.array_equal(draws[:, 0], draws[:, 1])


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_sample_margins_uniform(spec):
    n = 30_000
    draws = sample(spec, n, np.random.default_rng(21))
    qs = np.linspace(0.1, 0.9, 9)
    for j in (0, 1):
        emp = np.searchsorted(np.sort(draws[:, j]), qs, side="right") / n
        assert np.abs(emp - qs).max() < 0.012


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_sample_reproduces_cdf(spec):
    n = 30_000
    draws = sample(spec, n, np.random.default_rng(33))
    for u in (0.25, 0.5, 0.75):
        for v in (0.25, 0.5, 0.75):
            emp = np.mean((draws[:, 0] <= u) & (draws[:, 1] <= v))
            assert emp == pytest.approx(cdf(spec, u, v), abs=0.012)


def test_attractor_pickands_endpoints_and_bounds():
    grid = np.linspace(0.0, 1.0, 41)
    for spec in ALL_SPECS:
        a = attractor_pickands(spec, grid)
        assert a[0] == 1.0 and a[-1] == 1.0
        assert np.all(a <= 1.0 + 1e-12)
        assert np.all(a >= np.maximum(grid, 1.0 - grid) - 1e-12)
        # convexity on the grid
        assert np.all(a[:-2] - 2.0 * a[1:-1] + a[2:] >= -1e-9)


def test_attractor_pickands_known_values():
    assert attractor_pickands(Logistic(PAPER_BETA), 0.5) == pytest.approx(0.875, abs=1e-12)
    assert attractor_pickands(Comonotone(), 0.25) == pytest.approx(0.75, abs=1e-15)
    grid = np.linspace(0.0, 1.0, 17)
    assert np.array_equal(attractor_pickands(Independence(), grid), np.ones(17))
    assert np.array_equal(attractor_pickands(Gaussian(0.5), grid), np.ones(17))
    # the outer-power Clayton attractor is the logistic with the same beta
    opc = attractor_pickands(OuterPowerClayton(1.0, PAPER_BETA), grid)
    logi = attractor_pickands(Logistic(PAPER_BETA), grid)
    assert np.allclose(opc, logi, atol=1e-15)


def test_paper_beta_matches_upper_tail_coefficients():
    # beta is calibrated so the logistic upper tail coefficient 2 - 2^(1/beta)
    # equals 0.25, and the t copula parameters were matched to it
    assert 2.0 - 2.0 ** (1.0 / PAPER_BETA) == pytest.approx(0.25, abs=1e-15)
    lambda_t = 2.0 - 2.0 * attractor_pickands(StudentT(4.0, 0.494217), 0.5)
    assert lambda_t == pytest.approx(0.250000004093613, abs=1e-12)


def test_student_t_pickands_matches_spectral_monte_carlo():
    # independent check of the t extreme-value formula: the limit satisfies
    # A(t) = E[max((1-t) W1, t W2)] with W_j = max(0, Z_j)^nu / E[max(0, Z)^nu]
    # for correlated standard normals (Z1, Z2)
    nu, rho = 4.0, 0.494217
    mu = 2.0 ** (nu / 2.0 - 1.0) * gamma_fn((nu + 1.0) / 2.0) / np.sqrt(np.pi)
    rng = np.random.default_rng(42)
    n = 1_000_000
    z1 = rng.standard_normal(n)
    z2 = rho * z1 + np.sqrt(1.0 - rho**2) * rng.standard_normal(n)
    w1 = np.maximum(z1, 0.0) ** nu / mu
    w2 = np.maximum(z2, 0.0) ** nu / mu
    spec = StudentT(nu, rho)
    for t in (0.1, 0.3, 0.5, 0.7, 0.9):
        v = np.maximum((1.0 - t) * w1, t * w2)
        se = v.std(ddof=1) / np.sqrt(n)
        assert abs(v.mean() - attractor_pickands(spec, t)) < 4.0 * se
