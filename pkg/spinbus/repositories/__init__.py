"""Repositories package.

Interfaces live in this package, implementations in the impl/ subfolder.
"""

from .geometry_repository_interface import GeometryRepositoryInterface
from .result_repository_interface import (
    ResultRepositoryInterface,
    RunArtifactWriterInterface,
    SweepWriterInterface,
    TrajectoryWriterInterface,
)

__all__ = [
    "GeometryRepositoryInterface",
    "ResultRepositoryInterface",
    "RunArtifactWriterInterface",
    "SweepWriterInterface",
    "TrajectoryWriterInterface",
]
