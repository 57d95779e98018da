"""Compression-based entropy-rate estimation and tests for serial dependence."""

__version__ = "0.1.0"

from .compressor import (CalibrationTable, CodecConfig, CompressionEstimate, calibrate_overhead,
                         compress_size, estimate)
from .discretize import RealSeries, SymbolSeries, discretize, empirical_cdf, rank_plot_data
from .info import (MarkovModel, Pmf, RateQuote, cr_from_entropy_rate, entropy, joint_entropy_bound_check,
                   markov_entropy_rate)
from .shuffle import (DependenceTestResult, SerialDependenceCurve, ShuffleDistribution, ShufflePlan,
                      autocorrelation, block_shuffle, independence_test, select_lag,
                      serial_dependence_curve, shuffle_distribution)

__all__ = [
    "CalibrationTable", "CodecConfig", "CompressionEstimate", "calibrate_overhead", "compress_size",
    "estimate", "RealSeries", "SymbolSeries", "discretize", "empirical_cdf", "rank_plot_data",
    "MarkovModel", "Pmf", "RateQuote", "cr_from_entropy_rate", "entropy", "joint_entropy_bound_check",
    "markov_entropy_rate", "DependenceTestResult", "SerialDependenceCurve", "ShuffleDistribution",
    "ShufflePlan", "autocorrelation", "block_shuffle", "independence_test", "select_lag",
    "serial_dependence_curve", "shuffle_distribution",
]
