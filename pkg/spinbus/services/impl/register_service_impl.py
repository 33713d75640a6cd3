"""Register construction from run configs."""

from __future__ import annotations

import logging

from pydantic import ValidationError

from spinbus.core.errors import SchemaError
from spinbus.core.exception_handlers import schema_error_from_validation
from spinbus.physics.register import SpinRegister
from spinbus.repositories import GeometryRepositoryInterface
from spinbus.schemas.run_config import RunConfig
from spinbus.services import RegisterServiceInterface

logger = logging.getLogger(__name__)


class RegisterServiceImpl(RegisterServiceInterface):
    """Builds registers, reading geometry through the injected repository.

    Args:
        geometry_repository: Source of nuclear positions
    """

    def __init__(self, geometry_repository: GeometryRepositoryInterface):
        self._geometry = geometry_repository

    def build(self, config: RunConfig) -> SpinRegister:
        path = config.geometry_path()
        entries = self._geometry.load(path) if path is not None else None
        try:
            register = config.spin_register.to_register(entries)
        except ValidationError as exc:
            raise schema_error_from_validation(exc, "register") from exc
        except ValueError as exc:
            raise SchemaError(f"Invalid register: {exc}", extra={"field": "register"}) from exc
        logger.debug(
            f"Register: {register.n_nuclei} nuclei, Ω={register.rabi_frequency:.6g} rad/s, "
            f"T1ρ={register.t1_rho:.6g}s"
        )
        return register
