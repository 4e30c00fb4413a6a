import math
import os
import sys

import numpy as np
import pytest

# Fix imports
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, project_root)

from uur import quantum_model as qm  # noqa: E402
from uur import matrix_core, scenarios  # noqa: E402
from uur.errors import ScenarioError  # noqa: E402

BUILTIN_NAMES = [
    "example1-d2",
    "example1-d3",
    "example1-d4",
    "example1-d5",
    "example1-remark",
    "example2",
    "example3",
    "example4",
    "example5",
    "example6",
]


def small_grid():
    return scenarios.ThetaGrid(0.0, math.pi, 5)


def identity_scenario(bounds_requested=("I2", "LB2"), grid=None):
    eye = qm.UnitaryOperator.identity(3)
    return scenarios.Scenario(
        name="identity",
        state_family=scenarios.example1_state(3),
        operators=[scenarios.NamedOperator("A", eye), scenarios.NamedOperator("B", eye)],
        theta_grid=grid or small_grid(),
        bounds_requested=bounds_requested,
    )


@pytest.mark.parametrize(
    "token, expected",
    [
        ("0", 0.0),
        ("1.5", 1.5),
        ("pi", math.pi),
        ("2pi", 2 * math.pi),
        ("-pi/2", -math.pi / 2),
        ("3*pi/4", 0.75 * math.pi),
    ],
)
def test_parse_angle(token, expected):
    assert scenarios.parse_angle(token) == pytest.approx(expected)


def test_parse_grid():
    grid = scenarios.ThetaGrid.parse("0:2pi:721")

    values = grid.values()
    assert len(values) == 721
    assert values[0] == 0.0
    assert values[-1] == pytest.approx(2 * math.pi)
    assert values[1] == pytest.approx(math.pi / 360)


@pytest.mark.parametrize("text", ["0:pi", "0:pi:one", "a:pi:3", "0:pi:1"])
def test_parse_grid_errors(text):
    with pytest.raises(ScenarioError):
        scenarios.ThetaGrid.parse(text)


def test_default_grid_from_config():
    grid = scenarios.ThetaGrid.default()

    assert grid.start == 0.0
    assert grid.stop == pytest.approx(2 * math.pi)
    assert grid.count >= 2


@pytest.mark.parametrize(
    "bound_id, kind, k",
    [
        ("I2", "I", 2),
        ("Imax9", "Imax", 9),
        ("LB2", "LB2", None),
        ("detG", "detG", None),
        ("prod3hat_k4", "prod3hat", 4),
    ],
)
def test_parse_bound_id(bound_id, kind, k):
    request = scenarios.parse_bound_id(bound_id)

    assert (request.kind, request.k) == (kind, k)


@pytest.mark.parametrize("bound_id", ["I1", "I10", "prod3_k1", "LB4", "foo"])
def test_parse_bound_id_rejects(bound_id):
    with pytest.raises(ScenarioError) as exc:
        scenarios.parse_bound_id(bound_id)
    assert exc.value.field == "bounds_requested"


def test_builtin_catalog_names():
    catalog = scenarios.builtin_scenarios(small_grid())

    assert list(catalog) == BUILTIN_NAMES


def test_builtin_operator_counts():
    catalog = scenarios.builtin_scenarios(small_grid())

    assert len(catalog["example2"].operators) == 2
    assert len(catalog["example4"].operators) == 3
    assert len(catalog["example6"].operators) == 4
    assert catalog["example5"].bounds_requested[-3] == "prod3_k9"


def test_example6_operators():
    ops = {op.name: op.operator for op in scenarios.builtin_scenarios(small_grid())["example6"].operators}

    np.testing.assert_allclose(ops["A"].matrix, ops["B"].matrix.conj())
    np.testing.assert_allclose(ops["D"].matrix, 1j * ops["C"].matrix)
    assert ops["A"].matrix[2, 2] == pytest.approx(1.0)


def test_example_states_are_valid_across_grid():
    for theta in np.linspace(0, 2 * math.pi, 13):
        assert scenarios.example1_state(4)(theta).dim == 4
        assert scenarios.example2_state(theta).effective_dim == 4
        assert scenarios.example3_state(theta).dim == 4
        assert scenarios.example5_state(theta).effective_dim == 9
        assert scenarios.example6_state(theta).dim == 5


def test_example5_state_has_fixed_spectrum():
    for theta in np.linspace(0, 2 * math.pi, 13):
        rho = scenarios.example5_state(theta)

        result = matrix_core.hermitian_eig(rho.matrix)

        np.testing.assert_allclose(result.eigenvalues, [2 / 3, 1 / 3, 0.0], atol=1e-10)


def test_example5_root_middle_entry():
    for theta in np.linspace(0, 2 * math.pi, 13):
        root = matrix_core.psd_sqrt(scenarios.example5_state(theta).matrix)

        assert root[1, 1] == pytest.approx(1 / math.sqrt(6), abs=1e-10)


def test_example2_state_has_fixed_spectrum():
    expected = [(3 + math.sqrt(5)) / 6, (3 - math.sqrt(5)) / 6]
    for theta in np.linspace(0, 2 * math.pi, 13):
        result = matrix_core.hermitian_eig(scenarios.example2_state(theta).matrix)

        np.testing.assert_allclose(result.eigenvalues, expected, atol=1e-10)


def test_scenario_rejects_wrong_operator_count():
    eye = qm.UnitaryOperator.identity(3)

    with pytest.raises(ScenarioError) as exc:
        scenarios.Scenario(
            "one", scenarios.example1_state(3), [scenarios.NamedOperator("A", eye)], small_grid(), ["detG"]
        )
    assert exc.value.field == "operators"


def test_scenario_rejects_k_beyond_n():
    """Pure qutrit has N = 3, so I4 is out of range."""
    with pytest.raises(ScenarioError) as exc:
        identity_scenario(bounds_requested=("I4",))
    assert exc.value.field == "bounds_requested"


def test_scenario_rejects_bound_for_wrong_operator_count():
    with pytest.raises(ScenarioError) as exc:
        identity_scenario(bounds_requested=("LB3",))
    assert exc.value.field == "bounds_requested"


def test_scenario_rejects_dimension_mismatch():
    with pytest.raises(ScenarioError) as exc:
        scenarios.Scenario(
            "mismatch",
            scenarios.example1_state(2),
            [scenarios.NamedOperator("A", qm.clock(3)), scenarios.NamedOperator("B", qm.shift(3))],
            small_grid(),
            ["I2"],
        )
    assert exc.value.field == "state_family"


def test_with_grid_keeps_requests():
    scenario = identity_scenario().with_grid(scenarios.ThetaGrid(0, 1, 3))

    assert scenario.theta_grid.count == 3
    assert [r.bound_id for r in scenario.requests] == ["I2", "LB2"]


def test_get_scenario_unknown_name():
    with pytest.raises(ScenarioError) as exc:
        scenarios.get_scenario("example7")
    assert exc.value.field == "name"


def write_yaml(tmp_path, text):
    path = tmp_path / "scenarios.yaml"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_scenario_file_overrides_and_extras(tmp_path):
    path = write_yaml(
        tmp_path,
        """
grid_overrides:
  example2: "0:pi:11"
scenarios:
  - name: qutrit-pair
    description: clock and i*shift on a fixed state
    state: {kind: pure, amplitudes: [0.6, "0.8j", 0]}
    operators:
      - {name: A, kind: clock, dim: 3}
      - {name: B, kind: shift, dim: 3, phase: "1j"}
    grid: "0:1:4"
    bounds: [I2, I3, LB2, detG]
  - name: bloch-rotations
    state: {kind: bloch, vector: [0.1, 0.2, 0.3]}
    operators:
      - {name: A, kind: pauli_exp, axis: x, angle: 0.3}
      - {name: B, kind: diagonal, angles: [0, 1.2]}
      - {name: C, kind: matrix, matrix: [[0, 1], [1, 0]]}
    bounds: [prod3_k4, LB3]
""",
    )

    catalog = scenarios.catalog(path)

    assert catalog["example2"].theta_grid.count == 11
    extra = catalog["qutrit-pair"]
    assert extra.theta_grid.count == 4
    np.testing.assert_allclose(extra.operators[1].operator.matrix, 1j * qm.shift(3).matrix)
    assert catalog["bloch-rotations"].theta_grid.count == scenarios.ThetaGrid.default().count


def test_scenario_file_names_failing_field(tmp_path):
    path = write_yaml(
        tmp_path,
        """
scenarios:
  - name: broken
    state: {family: example2}
    operators:
      - {name: A, kind: tensor}
      - {name: B, kind: clock, dim: 2}
    bounds: [I2]
""",
    )

    with pytest.raises(ScenarioError) as exc:
        scenarios.catalog(path)
    assert exc.value.field.startswith("scenarios.0.operators.0.kind")


def test_scenario_file_bad_bound(tmp_path):
    path = write_yaml(
        tmp_path,
        """
scenarios:
  - name: too-deep
    state: {family: example1, d: 3}
    operators:
      - {name: A, kind: clock, dim: 3}
      - {name: B, kind: shift, dim: 3}
    bounds: [I5]
""",
    )

    with pytest.raises(ScenarioError) as exc:
        scenarios.catalog(path)
    assert exc.value.field == "scenarios.0.bounds_requested"


def test_scenario_file_unknown_override(tmp_path):
    path = write_yaml(tmp_path, "grid_overrides:\n  example9: '0:pi:3'\n")

    with pytest.raises(ScenarioError) as exc:
        scenarios.catalog(path)
    assert exc.value.field == "grid_overrides.example9"


def test_scenario_file_not_unitary(tmp_path):
    path = write_yaml(
        tmp_path,
        """
scenarios:
  - name: bad-matrix
    state: {family: example2}
    operators:
      - {name: A, kind: matrix, matrix: [[1, 1], [0, 1]]}
      - {name: B, kind: clock, dim: 2}
    bounds: [I2]
""",
    )

    with pytest.raises(ScenarioError) as exc:
        scenarios.catalog(path)
    assert exc.value.field == "scenarios.0.operators.0"


def test_scenario_file_missing():
    with pytest.raises(ScenarioError) as exc:
        scenarios.load_scenario_file("/nonexistent/scenarios.yaml")
    assert exc.value.field == "scenario_file"
