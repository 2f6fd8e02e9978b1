"""potmado: Pickands dependence estimation via weighted madograms of block maxima."""

from .blocks import (
    BlockPseudoObservations,
    BlockScheme,
    block_maxima,
    empirical_copula,
    oracle_transform,
    rank_transform,
)
from .copulas import (
    Comonotone,
    CopulaSpec,
    Gaussian,
    Independence,
    Logistic,
    OuterPowerClayton,
    StudentT,
    attractor_pickands,
    cdf,
    conditional_inverse,
    sample,
)
from .dgp import (
    BivariateSeries,
    MovingMaxParams,
    block_max_margin_cdf,
    margin_cdfs,
    simulate_moving_max,
)
from .errors import (
    DataError,
    DomainError,
    NumericalError,
    ParameterError,
    PotmadoError,
    ReferenceMismatchError,
)
from .experiment import (
    DEFAULT_ESTIMATORS,
    PAPER_BETA,
    ExperimentConfig,
    MetricsRecord,
    config_provenance,
    default_copulas,
    emit_metrics,
    run_experiment,
)
from .madogram import (
    DegenerateMadogramWarning,
    PickandsCurve,
    boundary_correct,
    default_grid,
    estimate_pickands_curve,
    madogram_curve,
    madogram_estimate,
    pickands_from_madogram,
)
from .rngs import derive_rng
from .theory import (
    LimitModel,
    asymptotic_bias,
    asymptotic_variance,
    closed_form_madogram,
    extreme_copula_cdf,
    reference_pickands_oracle,
    true_madogram,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # copulas
    "CopulaSpec",
    "OuterPowerClayton",
    "StudentT",
    "Gaussian",
    "Independence",
    "Comonotone",
    "Logistic",
    "cdf",
    "sample",
    "conditional_inverse",
    "attractor_pickands",
    # dgp
    "MovingMaxParams",
    "BivariateSeries",
    "simulate_moving_max",
    "block_max_margin_cdf",
    "margin_cdfs",
    # blocks
    "BlockScheme",
    "BlockPseudoObservations",
    "block_maxima",
    "rank_transform",
    "oracle_transform",
    "empirical_copula",
    # madogram
    "PickandsCurve",
    "DegenerateMadogramWarning",
    "default_grid",
    "madogram_estimate",
    "madogram_curve",
    "pickands_from_madogram",
    "estimate_pickands_curve",
    "boundary_correct",
    # theory
    "LimitModel",
    "extreme_copula_cdf",
    "true_madogram",
    "closed_form_madogram",
    "asymptotic_variance",
    "asymptotic_bias",
    "reference_pickands_oracle",
    # experiment
    "PAPER_BETA",
    "DEFAULT_ESTIMATORS",
    "default_copulas",
    "ExperimentConfig",
    "MetricsRecord",
    "run_experiment",
    "emit_metrics",
    "config_provenance",
    # rng / errors
    "derive_rng",
    "PotmadoError",
    "DataError",
    "DomainError",
    "ParameterError",
    "NumericalError",
    "ReferenceMismatchError",
]
