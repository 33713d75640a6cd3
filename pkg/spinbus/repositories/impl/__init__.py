"""Repository implementations of the interfaces in the parent package."""

from .csv_result_repository_impl import CsvResultRepositoryImpl
from .geometry_file_repository_impl import GeometryFileRepositoryImpl, load_geometry

__all__ = [
    "CsvResultRepositoryImpl",
    "GeometryFileRepositoryImpl",
    "load_geometry",
]
