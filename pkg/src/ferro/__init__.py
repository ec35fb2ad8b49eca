"""Circular Ferrero pairs, exceptional prime sets and the equation x^m + y^m - z^m = 1."""

from ferro.ff import DenseField, Elem, FieldError, FieldSpec, PolyField, build_dense_field, build_poly_field

__version__ = "0.1.0"

__all__ = [
    "DenseField",
    "Elem",
    "FieldError",
    "FieldSpec",
    "PolyField",
    "build_dense_field",
    "build_poly_field",
]
