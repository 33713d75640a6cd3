"""Geometry source interface."""

from __future__ import annotations

from abc import ABC, abstractmethod
from pathlib import Path

from spinbus.physics.assembly import GeometryEntry


class GeometryRepositoryInterface(ABC):
    """Load nuclear positions for molecule experiments."""

    @abstractmethod
    def load(self, path: Path) -> list[GeometryEntry]:
        """Parse ``path`` into geometry entries, in file order."""
        pass
