"""Dependency injection container.

Maps service and repository interfaces to their implementations so CLI
handlers depend on abstractions only, and tests can swap any piece (for
example an in-memory geometry source) without touching the handlers.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
import logging
from typing import Any, TypeVar, cast

logger = logging.getLogger(__name__)

T = TypeVar("T")


class Lifetime(str, Enum):
    cached = "cached"
    transient = "transient"


@dataclass
class Binding:
    """How one interface is built; ``instance`` holds the cached product."""

    build: Callable[[], Any] | None
    lifetime: Lifetime = Lifetime.cached
    instance: Any = None
    built: bool = False


class DIContainer:
    """Interface-to-implementation registry with cached and transient lifetimes.

    Builders run lazily on first resolution. Cached bindings keep their
    product, transient ones rebuild on every ``resolve``. A binding that
    needs itself while being built raises RuntimeError.
    """

    def __init__(self) -> None:
        self._bindings: dict[type, Binding] = {}
        self._building: set[type] = set()

    def _bind(self, interface: type, binding: Binding, kind: str) -> None:
        self._bindings[interface] = binding
        logger.debug(f"Bound {interface.__name__} ({kind})")

    def register_singleton(self, interface: type[T], implementation: type[T] | T) -> None:
        """Register a class (instantiated once, without arguments) or an instance."""
        if isinstance(implementation, type):
            self._bind(interface, Binding(build=implementation), "singleton")
        else:
            self.register_instance(interface, implementation)

    def register_transient(self, interface: type[T], build: Callable[[], T]) -> None:
        """Register a class or factory that is rebuilt on every resolution."""
        binding = Binding(build=build, lifetime=Lifetime.transient)
        self._bind(interface, binding, "transient")

    def register_factory(self, interface: type[T], factory: Callable[[], T]) -> None:
        """Register a factory; its product is cached like a singleton."""
        self._bind(interface, Binding(build=factory), "factory")

    def register_instance(self, interface: type[T], instance: T) -> None:
        self._bind(interface, Binding(build=None, instance=instance, built=True), "instance")

    def resolve(self, interface: type[T]) -> T:
        """Instance for ``interface``.

        Raises:
            ValueError: If nothing is registered for ``interface``
            RuntimeError: If building it requires itself
        """
        binding = self._bindings.get(interface)
        if binding is None:
            raise ValueError(f"Service {interface.__name__} is not registered")
        if binding.built:
            return cast(T, binding.instance)
        if interface in self._building:
            raise RuntimeError(f"Circular dependency detected for {interface.__name__}")
        assert binding.build is not None
        self._building.add(interface)
        try:
            product = binding.build()
        finally:
            self._building.discard(interface)
        if binding.lifetime is Lifetime.cached:
            binding.instance, binding.built = product, True
        return cast(T, product)

    def clear(self) -> None:
        """Drop every binding."""
        self._bindings.clear()
        self._building.clear()


_container: DIContainer | None = None


def get_container() -> DIContainer:
    """Process-wide container, created on first use."""
    global _container
    _container = _container or DIContainer()
    return _container


def configure_dependencies() -> DIContainer:
    """Wire repositories and experiment services into the global container.

    Earlier bindings are dropped first, so repeated runs in one process see
    fresh services and the current settings.

    Returns:
        DIContainer: Configured container
    """
    container = get_container()
    container.clear()

    from spinbus.config import get_settings
    from spinbus.repositories import GeometryRepositoryInterface, ResultRepositoryInterface
    from spinbus.repositories.impl import CsvResultRepositoryImpl, GeometryFileRepositoryImpl
    from spinbus.services import (
        EffectiveServiceInterface,
        FidelityServiceInterface,
        MoleculeServiceInterface,
        RegisterServiceInterface,
        SimulationServiceInterface,
        SweepServiceInterface,
    )
    from spinbus.services.impl import (
        EffectiveServiceImpl,
        FidelityServiceImpl,
        MoleculeServiceImpl,
        RegisterServiceImpl,
        SimulationServiceImpl,
        SweepServiceImpl,
    )

    container.register_singleton(GeometryRepositoryInterface, GeometryFileRepositoryImpl)
    container.register_transient(
        ResultRepositoryInterface, lambda: CsvResultRepositoryImpl(get_settings().csv_digits)
    )

    def registers() -> RegisterServiceInterface:
        return container.resolve(RegisterServiceInterface)

    container.register_factory(
        RegisterServiceInterface,
        lambda: RegisterServiceImpl(container.resolve(GeometryRepositoryInterface)),
    )
    container.register_factory(
        SimulationServiceInterface, lambda: SimulationServiceImpl(registers())
    )
    container.register_factory(EffectiveServiceInterface, lambda: EffectiveServiceImpl(registers()))
    container.register_factory(SweepServiceInterface, lambda: SweepServiceImpl(registers()))
    container.register_factory(FidelityServiceInterface, lambda: FidelityServiceImpl(registers()))
    container.register_factory(
        MoleculeServiceInterface,
        lambda: MoleculeServiceImpl(container.resolve(GeometryRepositoryInterface)),
    )

    logger.debug("Dependencies configured")
    return container


def inject(interface: type[T]) -> T:
    """Resolve ``interface`` from the global container."""
    return get_container().resolve(interface)
