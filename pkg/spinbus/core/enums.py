"""Core enumerations for spinbus.

Model switches, sweep axes and error codes used across the engine and the CLI.
"""

from enum import Enum, IntEnum


class ErrorCode(str, Enum):
    """Standardized error codes carried by every AppError."""

    schema_error = "SCHEMA_ERROR"
    input_error = "INPUT_ERROR"
    geometry_error = "GEOMETRY_ERROR"
    parse_error = "PARSE_ERROR"
    schedule_error = "SCHEDULE_ERROR"
    channel_error = "CHANNEL_VALIDATION_ERROR"
    no_root = "NO_ROOT"
    physics_validity = "PHYSICS_VALIDITY"
    invariant_violation = "INVARIANT_VIOLATION"
    resource_error = "RESOURCE_ERROR"
    internal_error = "INTERNAL_ERROR"


class ExitCode(IntEnum):
    """Process exit codes of the CLI."""

    success = 0
    unexpected = 1
    schema = 2
    physics = 3
    resource = 4


class ShiftModel(str, Enum):
    """How the nuclear frequency shifts δ_i are obtained.

    ``printed`` evaluates the closed-form second-order expression;
    ``spectral`` diagonalizes each NV + nucleus Hamiltonian and weights the
    conditional splittings by the NV quasi-steady populations.
    """

    printed = "printed"
    spectral = "spectral"


class PolarizationModel(str, Enum):
    """Which NV polarization enters the effective coupling."""

    printed = "printed"
    exact = "exact"


class GateFrame(str, Enum):
    """Frame freedom absorbed before comparing a channel with the flip-flop target.

    ``local`` optimizes one Z phase per nucleus; ``diagonal`` also absorbs an
    I^z_1 I^z_2 phase.
    """

    none = "none"
    local = "local"
    diagonal = "diagonal"


class SweepParameter(str, Enum):
    rabi_frequency = "rabi_frequency"
    delta_detuning = "delta_detuning"
    field_theta = "field_theta"
    field_phi = "field_phi"
    t_re = "t_re"
    evolution_time = "evolution_time"


class Experiment(str, Enum):
    simulate = "simulate"
    effective = "effective"
    sweep = "sweep"
    fidelity = "fidelity"
    molecule = "molecule"


class SweepObservable(str, Enum):
    """Signal recorded at the end of each sweep point.

    ``sensor_down`` is P(sensor in |↓⟩) after the sensing protocol;
    ``pair_du`` is the population of |↓↑⟩ on (sensor, target) starting from
    that state.
    """

    sensor_down = "sensor_down"
    pair_du = "pair_du"
