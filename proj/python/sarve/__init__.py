"""Socially-aware conference session recommender."""

from ._core import (
    ConfigError,
    DataError,
    Dataset,
    Error,
    LookupError,
    ParseError,
    UndefinedMeanError,
    __version__,
    degree,
    evaluate,
    f_measure,
    generate,
    pearson,
    recommend,
    sweep,
    tie_strength,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Dataset",
    "Error",
    "LookupError",
    "ParseError",
    "UndefinedMeanError",
    "__version__",
    "degree",
    "evaluate",
    "f_measure",
    "generate",
    "pearson",
    "recommend",
    "sweep",
    "tie_strength",
]
