"""Idempotent factorization certificates for singular 2x2 rows over real quadratic integers."""

from .certify import Certificate, verify
from .pipeline import PipelineOptions, factor_singular_row
from .quadring import QuadInt, RingSpec, make_ring, parse_elem

__all__ = ["Certificate", "PipelineOptions", "QuadInt", "RingSpec", "factor_singular_row", "make_ring",
           "parse_elem", "verify"]
__version__ = "0.1.0"
