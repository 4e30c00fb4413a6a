"""
Scenario definitions for the reproduction harness.

A Scenario pairs a theta-parameterised state family with a fixed list of
named unitaries, a theta grid and the bound identifiers to emit. The builtin
catalog pins the worked examples (qudit clock/shift, Bloch qubit, 4-dim pure
state, Gell-Mann qutrit, 5-dim four-operator case); a YAML scenario file may
override their grids and add new scenarios.
"""

import math
import os
import re
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from uur import quantum_model as qm
from uur.errors import ScenarioError, UncertaintyError
from uur.logger import get_logger
from utils.config import config

logger = get_logger(__name__)

BOUND_PATTERN = re.compile(
    r"^(?:(?P<chain>I|Imax)(?P<k>[2-9])"
    r"|(?P<single>LB2|LB3|detG)"
    r"|(?P<prod>prod3|prod3hat|prod4)_k(?P<pk>[2-9]))$"
)

# bound kind -> operator counts it accepts
OPERATOR_COUNTS = {
    "I": {2},
    "Imax": {2},
    "LB2": {2},
    "LB3": {3},
    "prod3": {3},
    "prod3hat": {3},
    "prod4": {4},
    "detG": {2, 3, 4},
}


# --- theta grid --------------------------------------------------------------

_PI_TOKEN = re.compile(r"^(?P<coef>[+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/(?P<div>\d+(?:\.\d*)?))?$")


def parse_angle(token):
    """'1.5', 'pi', '2pi', '-pi/2', '3*pi/4' -> radians."""
    text = token.strip().lower().replace(" ", "")
    match = _PI_TOKEN.match(text)
    if match:
        coef = match.group("coef")
        value = math.pi * (float(coef) if coef not in ("", "+", "-") else (-1.0 if coef == "-" else 1.0))
        return value / float(match.group("div")) if match.group("div") else value
    try:
        return float(text)
    except ValueError:
        raise ScenarioError("grid", f"cannot parse angle {token!r}") from None


@dataclass(frozen=True)
class ThetaGrid:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 2:
            raise ScenarioError("theta_grid", f"count must be an integer >= 2, got {self.count}")
        object.__setattr__(self, "count", int(self.count))

    def values(self):
        """Grid points, both endpoints included."""
        return np.linspace(self.start, self.stop, self.count)

    @classmethod
    def parse(cls, text):
        parts = str(text).split(":")
        if len(parts) != 3:
            raise ScenarioError("grid", f"expected start:stop:count, got {text!r}")
        try:
            count = int(parts[2])
        except ValueError:
            raise ScenarioError("grid", f"count {parts[2]!r} is not an integer") from None
        return cls(parse_angle(parts[0]), parse_angle(parts[1]), count)

    @classmethod
    def default(cls):
        return cls(*config.get_grid_defaults())


# --- bound identifiers -------------------------------------------------------


@dataclass(frozen=True)
class BoundRequest:
    bound_id: str
    kind: str
    k: Optional[int] = None


def parse_bound_id(bound_id):
    match = BOUND_PATTERN.match(str(bound_id))
    if not match:
        raise ScenarioError("bounds_requested", f"unknown bound identifier {bound_id!r}")
    if match.group("chain"):
        return BoundRequest(bound_id, match.group("chain"), int(match.group("k")))
    if match.group("prod"):
        return BoundRequest(bound_id, match.group("prod"), int(match.group("pk")))
    return BoundRequest(bound_id, match.group("single"))


# --- scenario / curve types ----------------------------------------------------


@dataclass(frozen=True)
class NamedOperator:
    name: str
    operator: qm.UnitaryOperator


@dataclass(frozen=True)
class Scenario:
    """
    Attributes:
        state_family: theta -> State
        operators: 2, 3 or 4 named unitaries, fixed over the grid
        bounds_requested: bound identifiers, emitted as curve columns in this order
    """

    name: str
    state_family: Callable
    operators: tuple
    theta_grid: ThetaGrid
    bounds_requested: tuple
    description: str = ""
    requests: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "operators", tuple(self.operators))
        object.__setattr__(self, "bounds_requested", tuple(self.bounds_requested))
        if not self.name:
            raise ScenarioError("name", "scenario name is empty")
        if not isinstance(self.theta_grid, ThetaGrid):
            raise ScenarioError("theta_grid", f"expected a ThetaGrid, got {type(self.theta_grid).__name__}")

        n_ops = len(self.operators)
        if n_ops not in (2, 3, 4):
            raise ScenarioError("operators", f"scenario needs 2, 3 or 4 operators, got {n_ops}")
        dims = {op.operator.dim for op in self.operators}
        if len(dims) != 1:
            raise ScenarioError("operators", f"operators act on different dimensions {sorted(dims)}")

        try:
            probe = self.state_family(self.theta_grid.start)
        except UncertaintyError as e:
            raise ScenarioError("state_family", str(e)) from e
        if probe.dim not in dims:
            raise ScenarioError("state_family", f"state dim {probe.dim} does not match operator dim {dims.pop()}")

        if len(set(self.bounds_requested)) != len(self.bounds_requested):
            raise ScenarioError("bounds_requested", "duplicate bound identifiers")
        requests = []
        for bound_id in self.bounds_requested:
            request = parse_bound_id(bound_id)
            if n_ops not in OPERATOR_COUNTS[request.kind]:
                raise ScenarioError("bounds_requested", f"{bound_id} is not defined for {n_ops} operators")
            if request.k is not None and request.k > probe.effective_dim:
                raise ScenarioError(
                    "bounds_requested", f"{bound_id} needs k <= N, but N={probe.effective_dim} for this state"
                )
            requests.append(request)
        object.__setattr__(self, "requests", tuple(requests))

    @property
    def operator_list(self):
        return [op.operator for op in self.operators]

    def with_grid(self, grid):
        return replace(self, theta_grid=grid)


@dataclass(frozen=True)
class CurvePoint:
    theta: float
    variance_product: float
    bounds: Dict[str, float]

    def as_row(self):
        return {"theta": self.theta, "variance_product": self.variance_product, **self.bounds}


# --- state families ------------------------------------------------------------


def example1_state(d):
    """cos(t)|0> - sin(t)|d-1>."""

    def family(theta):
        amps = np.zeros(d, dtype=np.complex128)
        amps[0] = math.cos(theta)
        amps[d - 1] = -math.sin(theta)
        return qm.PureState(amps)

    return family


def example2_state(theta):
    """Bloch qubit with r = (1/3, 2/3 cos t, 2/3 sin t)."""
    return qm.bloch_qubit([1.0 / 3.0, 2.0 / 3.0 * math.cos(theta), 2.0 / 3.0 * math.sin(theta)])


def example3_state(theta):
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    r3 = math.sqrt(3.0) / 2.0
    return qm.PureState([0.5 * c, r3 * s, 0.5 * s, r3 * c])


def example5_state(theta):
    """Gell-Mann qutrit with n = (cos t, 0, 0, 0, 0, sin t, 0, 0) / sqrt(3)."""
    n = np.zeros(8)
    n[0] = math.cos(theta) / math.sqrt(3.0)
    n[5] = math.sin(theta) / math.sqrt(3.0)
    return qm.gellmann_qutrit(n)


def example6_state(theta):
    amps = np.zeros(5, dtype=np.complex128)
    amps[0] = math.cos(theta)
    amps[1] = 0.5 * math.sin(theta)
    amps[4] = math.sqrt(3.0) / 2.0 * math.sin(theta)
    return qm.PureState(amps)


# theta-only families; example1 is parameterised by d
STATE_FAMILIES = {
    "example2": example2_state,
    "example3": example3_state,
    "example5": example5_state,
    "example6": example6_state,
}


def _named(**ops):
    return tuple(NamedOperator(name, op) for name, op in ops.items())


def _qubit_rotations():
    return _named(A=qm.pauli_exp("y", math.pi / 8), B=qm.pauli_exp("z", math.pi / 8), C=qm.pauli_exp("x", math.pi / 8))


def _example6_operators():
    shift5 = qm.shift(5)
    angles = 2.0 * math.pi / 5.0 * np.arange(-2, 3)
    return _named(
        A=qm.UnitaryOperator.diagonal(angles),
        B=qm.UnitaryOperator.diagonal(-angles),
        C=shift5,
        D=shift5.scaled(1j),
    )


def _chain_ids(prefix, ks):
    return tuple(f"{prefix}{k}" for k in ks)


def _builtin_definitions():
    """name -> (description, state family, operators, bound ids)."""
    defs = {}
    for d in (2, 3, 4, 5):
        defs[f"example1-d{d}"] = (
            f"clock/shift pair on cos(t)|0> - sin(t)|{d - 1}>, d={d}",
            example1_state(d),
            _named(A=qm.clock(d), B=qm.shift(d)),
            _chain_ids("I", range(2, d + 1)) + ("LB2",),
        )
    defs["example1-remark"] = (
        "qutrit clock/shift with permutation-strengthened I2, I3",
        example1_state(3),
        _named(A=qm.clock(3), B=qm.shift(3)),
        ("I2", "I3", "Imax2", "Imax3", "LB2"),
    )
    qubit = _qubit_rotations()
    defs["example2"] = (
        "Bloch qubit mixed state, Pauli rotations about y and z",
        example2_state,
        qubit[:2],
        _chain_ids("I", range(2, 5)) + _chain_ids("Imax", range(2, 5)) + ("LB2",),
    )
    triple_ids = _chain_ids("prod3_k", range(2, 5)) + _chain_ids("prod3hat_k", range(2, 5)) + ("LB3", "detG")
    defs["example3"] = (
        "4-dim pure state, clock, shift and a permutation-with-sign operator",
        example3_state,
        _named(
            A=qm.clock(4),
            B=qm.shift(4),
            C=qm.UnitaryOperator.from_matrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]]),
        ),
        triple_ids,
    )
    defs["example4"] = (
        "Bloch qubit mixed state, Pauli rotations about y, z and x",
        example2_state,
        qubit,
        triple_ids,
    )
    defs["example5"] = (
        "Gell-Mann qutrit mixed state, Z/Y/X rotations with angles pi/4, -pi/4, pi/3",
        example5_state,
        _named(A=qm.rotation3("Z", math.pi / 4), B=qm.rotation3("Y", -math.pi / 4), C=qm.rotation3("X", math.pi / 3)),
        _chain_ids("prod3_k", range(2, 10)) + ("LB3", "detG"),
    )
    defs["example6"] = (
        "5-dim pure state, conjugate clock phases, shift and i*shift",
        example6_state,
        _example6_operators(),
        _chain_ids("prod4_k", range(2, 6)) + ("detG",),
    )
    return defs


def builtin_scenarios(grid=None):
    grid = grid or ThetaGrid.default()
    return {
        name: Scenario(name, family, ops, grid, ids, description)
        for name, (description, family, ops, ids) in _builtin_definitions().items()
    }


# --- YAML scenario files -------------------------------------------------------

Number = Union[float, int, str]


def _complex(value, field_name):
    try:
        return complex(str(value).replace(" ", "")) if isinstance(value, str) else complex(value)
    except ValueError:
        raise ScenarioError(field_name, f"cannot parse complex number {value!r}") from None


class StateSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: Optional[Literal["example1", "example2", "example3", "example5", "example6"]] = None
    kind: Optional[Literal["pure", "density", "bloch", "gellmann"]] = None
    d: Optional[int] = None
    amplitudes: Optional[List[Number]] = None
    matrix: Optional[List[List[Number]]] = None
    vector: Optional[List[float]] = None

    @model_validator(mode="after")
    def one_source(self):
        if (self.family is None) == (self.kind is None):
            raise ValueError("exactly one of 'family' or 'kind' is required")
        if self.family == "example1" and (self.d is None or self.d < 2):
            raise ValueError("family example1 needs d >= 2")
        return self


class OperatorSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    kind: Literal["identity", "clock", "shift", "pauli_exp", "rotation3", "diagonal", "matrix"]
    dim: Optional[int] = None
    axis: Optional[str] = None
    angle: Optional[float] = None
    angles: Optional[List[float]] = None
    matrix: Optional[List[List[Number]]] = None
    phase: Number = 1


class ScenarioEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    description: str = ""
    state: StateSpec
    operators: List[OperatorSpec]
    grid: Optional[str] = None
    bounds: List[str]


class ScenarioSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    grid_overrides: Dict[str, str] = {}
    scenarios: List[ScenarioEntry] = []


def _build_state_family(spec, field_name):
    if spec.family == "example1":
        return example1_state(spec.d)
    if spec.family:
        return STATE_FAMILIES[spec.family]

    try:
        if spec.kind == "pure":
            state = qm.PureState([_complex(v, f"{field_name}.amplitudes") for v in spec.amplitudes or []])
        elif spec.kind == "density":
            rows = [[_complex(v, f"{field_name}.matrix") for v in row] for row in spec.matrix or []]
            state = qm.DensityMatrix(np.array(rows, dtype=np.complex128))
        elif spec.kind == "bloch":
            state = qm.bloch_qubit(spec.vector or [])
        else:
            state = qm.gellmann_qutrit(spec.vector or [])
    except ScenarioError:
        raise
    except UncertaintyError as e:
        raise ScenarioError(field_name, str(e)) from e
    return lambda theta: state


def _build_operator(spec, field_name):
    try:
        if spec.kind in ("identity", "clock", "shift"):
            if spec.dim is None:
                raise ScenarioError(f"{field_name}.dim", f"{spec.kind} needs 'dim'")
            builder = {"identity": qm.UnitaryOperator.identity, "clock": qm.clock, "shift": qm.shift}[spec.kind]
            op = builder(spec.dim)
        elif spec.kind in ("pauli_exp", "rotation3"):
            if spec.axis is None or spec.angle is None:
                raise ScenarioError(field_name, f"{spec.kind} needs 'axis' and 'angle'")
            op = (qm.pauli_exp if spec.kind == "pauli_exp" else qm.rotation3)(spec.axis, spec.angle)
        elif spec.kind == "diagonal":
            if not spec.angles:
                raise ScenarioError(f"{field_name}.angles", "diagonal needs 'angles'")
            op = qm.UnitaryOperator.diagonal(spec.angles)
        else:
            rows = [[_complex(v, f"{field_name}.matrix") for v in row] for row in spec.matrix or []]
            op = qm.UnitaryOperator.from_matrix(np.array(rows, dtype=np.complex128))
        phase = _complex(spec.phase, f"{field_name}.phase")
        if phase != 1:
            op = op.scaled(phase)
    except ScenarioError:
        raise
    except UncertaintyError as e:
        raise ScenarioError(field_name, str(e)) from e
    return NamedOperator(spec.name, op)


def _validation_field(error):
    first = error.errors()[0]
    return ".".join(str(part) for part in first["loc"]) or "scenario_file", first["msg"]


def load_scenario_file(path, known_names=()):
    """
    Parse a YAML scenario file.

    Returns:
        tuple: ({name: ThetaGrid} overrides, {name: Scenario} extra scenarios)
    """
    if not os.path.exists(path):
        raise ScenarioError("scenario_file", f"file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            raw = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ScenarioError("scenario_file", f"invalid YAML: {e}") from e

    try:
        spec = ScenarioSpec.model_validate(raw)
    except ValidationError as e:
        raise ScenarioError(*_validation_field(e)) from e

    extras = {}
    for i, entry in enumerate(spec.scenarios):
        prefix = f"scenarios.{i}"
        if entry.name in known_names or entry.name in extras:
            raise ScenarioError(f"{prefix}.name", f"scenario {entry.name!r} already exists")
        family = _build_state_family(entry.state, f"{prefix}.state")
        ops = [_build_operator(op, f"{prefix}.operators.{j}") for j, op in enumerate(entry.operators)]
        grid = ThetaGrid.parse(entry.grid) if entry.grid else ThetaGrid.default()
        try:
            extras[entry.name] = Scenario(entry.name, family, ops, grid, entry.bounds, entry.description)
        except ScenarioError as e:
            raise ScenarioError(f"{prefix}.{e.field}", e.message) from e

    overrides = {}
    for name, text in spec.grid_overrides.items():
        if name not in known_names and name not in extras:
            raise ScenarioError(f"grid_overrides.{name}", "no scenario with this name")
        try:
            overrides[name] = ThetaGrid.parse(text)
        except ScenarioError as e:
            raise ScenarioError(f"grid_overrides.{name}", e.message) from e

    logger.info(f"Loaded scenario file {path}: {len(extras)} scenarios, {len(overrides)} grid overrides")
    return overrides, extras


def catalog(scenario_file=None):
    """Builtin scenarios plus any from the scenario file, grid overrides applied."""
    scenarios = builtin_scenarios()
    scenario_file = scenario_file or config.SCENARIO_FILE
    if scenario_file:
        overrides, extras = load_scenario_file(scenario_file, known_names=set(scenarios))
        scenarios.update(extras)
        for name, grid in overrides.items():
            scenarios[name] = scenarios[name].with_grid(grid)
    return scenarios


def get_scenario(name, scenario_file=None):
    scenarios = catalog(scenario_file)
    if name not in scenarios:
        raise ScenarioError("name", f"unknown scenario {name!r}; available: {', '.join(sorted(scenarios))}")
    return scenarios[name]
