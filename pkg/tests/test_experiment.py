"""Monte Carlo experiment harness: determinism, metrics, and provenance."""

import warnings

import numpy as np
import pytest

from potmado import (
    DEFAULT_ESTIMATORS,
    ExperimentConfig,
    Gaussian,
    Independence,
    Logistic,
    MetricsRecord,
    PAPER_BETA,
    PickandsCurve,
    attractor_pickands,
    config_provenance,
    default_copulas,
    default_grid,
    run_experiment,
)
from potmado.errors import ParameterError, ReferenceMismatchError

SMALL = dict(n=300, m_values=(5, 15), N=12, T=11, master_seed=4)


def _config(**overrides):
    base = dict(SMALL, copulas=(("independence", Independence()),))
    base.update(overrides)
    return ExperimentConfig(**base)


def test_default_estimators_and_copulas():
    assert DEFAULT_ESTIMATORS == (
        ("disjoint", 1.0),
        ("sliding", 0.25),
        ("sliding", 0.5),
        ("sliding", 1.0),
        ("sliding", 2.0),
        ("sliding", 4.0),
    )
    tags = [tag for tag, _ in default_copulas()]
    assert tags == ["opclayton", "t4", "gaussian"]


def test_config_validation():
    with pytest.raises(ParameterError):
        _config(m_values=(5, 5))
    with pytest.raises(ParameterError):
        _config(m_values=(400,))  # m exceeds n
    with pytest.raises(ParameterError):
        _config(estimators=(("sliding", 1.0), ("sliding", 1.0)))
    with pytest.raises(ParameterError):
        _config(estimators=(("circular", 1.0),))
    with pytest.raises(ParameterError):
        _config(estimators=(("sliding", 0.0),))
    with pytest.raises(ParameterError):
        _config(copulas=(("a", Independence()), ("a", Gaussian(0.5))))
    with pytest.raises(ParameterError):
        _config(N=0)


def test_record_count_and_mse_identity():
    config = _config()
    records = run_experiment(config)
    assert len(records) == len(config.estimators) * len(config.m_values)
    for r in records:
        assert r.MSE_sum == r.B_sum + r.Var_sum  # exact, by construction
        assert r.B_sum >= 0.0 and r.Var_sum >= 0.0
        assert np.isfinite(r.MSE_sum)


def test_metrics_record_validation():
    with pytest.raises(ParameterError):
        MetricsRecord("x", "sliding", 1.0, 5, 0.1, 0.2, 0.35)  # sums must add up
    with pytest.raises(ParameterError):
        MetricsRecord("x", "sliding", 1.0, 5, -0.1, 0.2, 0.1)
    with pytest.raises(ParameterError):
        MetricsRecord("x", "circular", 1.0, 5, 0.1, 0.2, 0.3)


def test_worker_determinism():
    config = _config(N=60)
    assert run_experiment(config, workers=1) == run_experiment(config, workers=4)


def test_seed_changes_output():
    a = run_experiment(_config())
    b = run_experiment(_config(master_seed=5))
    assert a != b


def test_single_iteration_warns_and_zeroes_variance():
    with pytest.warns(RuntimeWarning):
        records = run_experiment(_config(N=1))
    assert all(r.Var_sum == 0.0 for r in records)


def test_block_convergence_bias_shrinks_with_block_size():
    # dependent innovations leave a visible copula-convergence bias at m=2
    # that larger blocks remove; independent innovations have none to start
    # with, so their bias only grows with the shrinking block count
    from potmado import OuterPowerClayton

    config = ExperimentConfig(
        n=1000,
        m_values=(2, 10),
        N=40,
        T=21,
        master_seed=4,
        copulas=(("opclayton", OuterPowerClayton(1.0, PAPER_BETA)),),
        estimators=(("disjoint", 1.0),),
    )
    records = {r.m: r for r in run_experiment(config)}
    assert records[10].B_sum < records[2].B_sum

    indep = {r.m: r for r in run_experiment(_config(n=2000, m_values=(2, 40), N=40, T=21))}
    assert indep[2].B_sum < indep[40].B_sum


def test_references_override_attractor():
    grid = default_grid(SMALL["T"])
    flat = PickandsCurve(grid, np.ones_like(grid), 1.0, corrected=True)
    by_default = run_experiment(_config())
    by_reference = run_experiment(_config(references={"independence": flat}))
    # the independence attractor is exactly A == 1, so both runs agree
    assert by_default == by_reference

    bent = PickandsCurve(grid, np.maximum(grid, 1.0 - grid), 1.0, corrected=True)
    shifted = run_experiment(_config(references={"independence": bent}))
    assert shifted != by_default


def test_reference_errors():
    grid_wrong = default_grid(7)
    curve = PickandsCurve(grid_wrong, np.ones(7), 1.0, corrected=True)
    with pytest.raises(ReferenceMismatchError):
        run_experiment(_config(references={"independence": curve}))
    good = PickandsCurve(default_grid(SMALL["T"]), np.ones(SMALL["T"]), 1.0, corrected=True)
    with pytest.raises(ParameterError):
        run_experiment(_config(references={"other": good}))


def test_config_provenance_contents():
    config = _config(copulas=(("logistic", Logistic(PAPER_BETA)),))
    prov = config_provenance(config)
    assert prov["n"] == "300"
    assert prov["m_values"] == "5,15"
    assert prov["N"] == "12"
    assert prov["master_seed"] == "4"
    assert "disjoint:1.0" in prov["estimators"]
    assert "logistic" in prov["copulas"]
    assert prov["reference"] == "attractor"
    # workers must never enter provenance: the output is worker-independent
    assert "workers" not in prov


def test_gaussian_convergence_bias_decays_slowly():
    # Gaussian innovations attract to independence (A == 1) but only
    # logarithmically fast, so the squared bias stays visible at m=5 and
    # shrinks — without vanishing — by m=25
    assert np.all(attractor_pickands(Gaussian(0.5), default_grid(21)) == 1.0)
    config = ExperimentConfig(
        n=1500,
        m_values=(5, 25),
        N=30,
        T=21,
        master_seed=8,
        copulas=(("gaussian", Gaussian(0.5)),),
        estimators=(("sliding", 1.0),),
    )
    records = {r.m: r for r in run_experiment(config)}
    assert records[25].B_sum < records[5].B_sum
    assert records[5].B_sum > 0.05
