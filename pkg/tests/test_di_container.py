import pytest

from spinbus.core.di_container import DIContainer, configure_dependencies, inject
from spinbus.repositories import GeometryRepositoryInterface, ResultRepositoryInterface
from spinbus.repositories.impl import CsvResultRepositoryImpl, GeometryFileRepositoryImpl
from spinbus.services import SimulationServiceInterface, SweepServiceInterface


class Clock:
    pass


class Other:
    pass


def test_singleton_class_is_built_once():
    container = DIContainer()
    container.register_singleton(Clock, Clock)
    assert container.resolve(Clock) is container.resolve(Clock)


def test_singleton_instance():
    container = DIContainer()
    clock = Clock()
    container.register_singleton(Clock, clock)
    assert container.resolve(Clock) is clock


def test_transient_is_rebuilt():
    container = DIContainer()
    container.register_transient(Clock, Clock)
    assert container.resolve(Clock) is not container.resolve(Clock)


def test_factory_product_is_cached():
    container = DIContainer()
    calls = []
    container.register_factory(Clock, lambda: calls.append(1) or Clock())
    container.resolve(Clock)
    container.resolve(Clock)
    assert calls == [1]


def test_unregistered_interface():
    with pytest.raises(ValueError):
        DIContainer().resolve(Clock)


def test_circular_dependency_is_detected():
    container = DIContainer()
    container.register_factory(Clock, lambda: container.resolve(Other))
    container.register_factory(Other, lambda: container.resolve(Clock))
    with pytest.raises(RuntimeError):
        container.resolve(Clock)


def test_clear_drops_registrations():
    container = DIContainer()
    container.register_instance(Clock, Clock())
    container.clear()
    with pytest.raises(ValueError):
        container.resolve(Clock)


def test_configured_container_wires_services(clean_container):
    configure_dependencies()
    assert isinstance(inject(GeometryRepositoryInterface), GeometryFileRepositoryImpl)
    assert isinstance(inject(ResultRepositoryInterface), CsvResultRepositoryImpl)
    assert inject(SimulationServiceInterface) is inject(SimulationServiceInterface)
    assert inject(SweepServiceInterface) is not None


def test_result_repository_is_rebuilt_per_resolution(clean_container):
    configure_dependencies()
    assert inject(ResultRepositoryInterface) is not inject(ResultRepositoryInterface)


def test_reconfiguring_replaces_earlier_bindings(clean_container):
    container = configure_dependencies()
    container.register_instance(Clock, Clock())
    first = inject(SimulationServiceInterface)
    configure_dependencies()
    with pytest.raises(ValueError):
        inject(Clock)
    assert inject(SimulationServiceInterface) is not first
