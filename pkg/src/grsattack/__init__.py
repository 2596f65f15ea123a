"""GRS-based encryption schemes and key-recovery attacks via square codes."""

from .codes import LinearCode, dual, square, square_dim, square_dim_report
from .field import Field, FieldError, gf
from .grs import GrsSpec

__all__ = [
    "Field",
    "FieldError",
    "gf",
    "LinearCode",
    "dual",
    "square",
    "square_dim",
    "square_dim_report",
    "GrsSpec",
]

__version__ = "0.1.0"
