"""
coinwalk: exact position laws and step correlations for coin-driven walks.

Three walk models share one set of coin and distribution types:

- classical random walk (``crw``): binomial law from an incoherent coin;
- quantum random walk with a fresh coin per step (``qrw``), 1D with a
  Hadamard or general SU(2) flip and 2D with the Grover coin;
- conventional single-coin Hadamard quantum walk (``qw``), including the
  sigma_z step covariance by direct evolution and by momentum integrals.

``coinwalk.oracle`` holds path enumeration and Monte Carlo validators and
``coinwalk.cli`` the command-line front end.
"""

from .crw import CrwParams, crw_distribution, crw_moments
from .oracle import (
    SampleReport,
    compare_distributions,
    enumerate_paths_1d,
    enumerate_paths_2d,
    sample_walk,
)
from .qrw import (
    FlippedCoin2,
    GroverProbabilities,
    Moments2D,
    feasibility_region_check,
    flip_coin2,
    grover_probabilities,
    qrw1d_distribution,
    qrw1d_moments,
    qrw2d_distribution,
    qrw2d_moments,
    quadrinomial_distribution,
)
from .qw import (
    COVARIANCE_LIMIT,
    CovarianceSeries,
    QWState,
    ReducedCoinMatrix,
    coin_reduced_direct,
    coin_reduced_integral,
    covariance_direct,
    covariance_integral,
    covariance_series,
    independent_flip_covariance,
    qw_distribution,
    qw_initial,
    qw_step,
)
from .walktypes import (
    CoinOperator,
    CoinState2,
    CoinState4,
    CoinValidationError,
    ConvergenceError,
    Distribution1D,
    Distribution2D,
    EffectiveCoherence,
    ValidationReport,
    effective_coherence,
    ensure_valid,
    grover4,
    hadamard2,
    su2,
    validate_coin2,
    validate_coin4,
)

__version__ = "0.1.0"

__all__ = [
    "COVARIANCE_LIMIT",
    "CoinOperator",
    "CoinState2",
    "CoinState4",
    "CoinValidationError",
    "ConvergenceError",
    "CovarianceSeries",
    "CrwParams",
    "Distribution1D",
    "Distribution2D",
    "EffectiveCoherence",
    "FlippedCoin2",
    "GroverProbabilities",
    "Moments2D",
    "QWState",
    "ReducedCoinMatrix",
    "SampleReport",
    "ValidationReport",
    "coin_reduced_direct",
    "coin_reduced_integral",
    "compare_distributions",
    "covariance_direct",
    "covariance_integral",
    "covariance_series",
    "crw_distribution",
    "crw_moments",
    "effective_coherence",
    "ensure_valid",
    "enumerate_paths_1d",
    "enumerate_paths_2d",
    "feasibility_region_check",
    "flip_coin2",
    "grover4",
    "grover_probabilities",
    "hadamard2",
    "independent_flip_covariance",
    "qrw1d_distribution",
    "qrw1d_moments",
    "qrw2d_distribution",
    "qrw2d_moments",
    "quadrinomial_distribution",
    "qw_distribution",
    "qw_initial",
    "qw_step",
    "sample_walk",
    "su2",
    "validate_coin2",
    "validate_coin4",
]
