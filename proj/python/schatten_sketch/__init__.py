"""Schatten norm sketching."""

from ._core import (
    ConfigurationError,
    DegenerateInputError,
    DomainError,
    Error,
    IndexOutOfRange,
    InputError,
    InvariantViolation,
    StreamSketch,
    band_counts,
    guarantee_window,
    hat_distortion,
    heavy_tail_split,
    measure_distortion,
    one_sided_estimate,
    schatten_norm,
    single_row_estimate,
    singular_values,
    sketch_matrix,
    tilde_distortion,
    two_sided_estimate,
)

__all__ = [
    "ConfigurationError",
    "DegenerateInputError",
    "DomainError",
    "Error",
    "IndexOutOfRange",
    "InputError",
    "InvariantViolation",
    "StreamSketch",
    "band_counts",
    "guarantee_window",
    "hat_distortion",
    "heavy_tail_split",
    "measure_distortion",
    "one_sided_estimate",
    "schatten_norm",
    "single_row_estimate",
    "singular_values",
    "sketch_matrix",
    "tilde_distortion",
    "two_sided_estimate",
]
