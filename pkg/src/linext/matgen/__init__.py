"""Transformation matrix construction, weight analysis and file I/O."""

from .bch import (
    PRIMITIVE_POLYS,
    GaloisField,
    bch_generator,
    cyclotomic_coset,
    cyclotomic_cosets,
    generator_polynomial,
    minimal_polynomial,
    poly_mod,
    poly_mul,
    poly_str,
)
from .generators import default_density, gen_fixed_column_weight, gen_sparse, gen_uniform
from .io import from_bytes, load_matrix, save_matrix, to_bytes
from .transform import Kind, TransformMatrix
from .weights import WeightDistribution, weight_distribution

__all__ = [
    "PRIMITIVE_POLYS",
    "GaloisField",
    "Kind",
    "TransformMatrix",
    "WeightDistribution",
    "bch_generator",
    "cyclotomic_coset",
    "cyclotomic_cosets",
    "default_density",
    "from_bytes",
    "gen_fixed_column_weight",
    "gen_sparse",
    "gen_uniform",
    "generator_polynomial",
    "load_matrix",
    "minimal_polynomial",
    "poly_mod",
    "poly_mul",
    "poly_str",
    "save_matrix",
    "to_bytes",
    "weight_distribution",
]
