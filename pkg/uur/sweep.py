"""
Theta sweeps: evaluate a scenario's bounds at every grid point and write the
curve table as CSV or JSON.
"""

import math
import os
from datetime import datetime

import pandas as pd

from uur import bounds
from uur import quantum_model as qm
from uur.logger import get_logger
from uur.scenarios import CurvePoint
from utils.config import config

logger = get_logger(__name__)

SOUNDNESS_SLACK = 1e-9
CSV_FLOAT_FORMAT = "%.15g"
JSON_DOUBLE_PRECISION = 15


class _PointEvaluator:
    """Bound values at one theta, sharing deviation vectors and permutation maxima."""

    def __init__(self, scenario, state, seed, restarts):
        self.ops = scenario.operator_list
        self.state = state
        self.seed = seed
        self.restarts = restarts
        self.vectors = bounds.deviation_vectors(self.ops, state)
        self._hat = {}

    def pair(self, i, j):
        return bounds.AmplitudePair(self.vectors[i], self.vectors[j])

    def hat(self, i, j, k):
        key = (i, j, k)
        if key not in self._hat:
            self._hat[key] = bounds.max_permuted_i_k(self.pair(i, j), k, seed=self.seed, restarts=self.restarts)[0]
        return self._hat[key]

    def evaluate(self, request):
        kind, k = request.kind, request.k
        if kind == "I":
            return bounds.i_k(self.pair(0, 1), k)
        if kind == "Imax":
            return self.hat(0, 1, k)
        if kind == "LB2":
            return bounds.lb2(*self.ops, self.state)
        if kind == "LB3":
            return bounds.lb3(*self.ops, self.state)
        if kind == "detG":
            return bounds.gram(self.ops, self.state).determinant
        if kind == "prod3":
            return bounds.product3_from_vectors(*self.vectors, k)
        if kind == "prod3hat":
            return math.sqrt(max(self.hat(0, 1, k) * self.hat(0, 2, k) * self.hat(1, 2, k), 0.0))
        if kind == "prod4":
            return bounds.product4_from_vectors(self.vectors, k)
        raise ValueError(f"unhandled bound kind {kind!r}")


def evaluate_point(scenario, theta, seed=None, restarts=None):
    seed = config.get_seed() if seed is None else seed
    restarts = config.get_restarts() if restarts is None else restarts

    state = scenario.state_family(float(theta))
    variance_product = math.prod(qm.variance(u, state) for u in scenario.operator_list)
    evaluator = _PointEvaluator(scenario, state, seed, restarts)
    values = {request.bound_id: float(evaluator.evaluate(request)) for request in scenario.requests}

    for bound_id, value in values.items():
        if value > variance_product + SOUNDNESS_SLACK:
            logger.warning(
                f"{scenario.name}: {bound_id}={value:.15g} exceeds variance product "
                f"{variance_product:.15g} at theta={theta:.15g}"
            )
    return CurvePoint(theta=float(theta), variance_product=float(variance_product), bounds=values)


def run_scenario(scenario, seed=None, restarts=None):
    """
    Evaluate a scenario on every point of its theta grid, in grid order.

    Returns:
        list[CurvePoint]: one point per grid value, endpoints included
    """
    grid = scenario.theta_grid
    logger.info(f"RUNNING SCENARIO: {scenario.name}")
    logger.info(
        f"Grid: {grid.start:.6g}..{grid.stop:.6g} ({grid.count} points) | "
        f"Operators: {', '.join(op.name for op in scenario.operators)} | "
        f"Bounds: {', '.join(scenario.bounds_requested)}"
    )
    start_time = datetime.now()

    try:
        points = [evaluate_point(scenario, theta, seed, restarts) for theta in grid.values()]
    except Exception as e:
        logger.error(f"Scenario {scenario.name} failed: {str(e)}", exc_info=True)
        raise

    duration = str(datetime.now() - start_time).split(".")[0]
    logger.info(f"SCENARIO COMPLETED: {scenario.name} | {len(points)} points | Duration: {duration}")
    return points


def curve_frame(points, bound_ids=None):
    """Curve table with columns theta, variance_product, then the bound ids in request order."""
    if bound_ids is None:
        bound_ids = list(points[0].bounds) if points else []
    columns = ["theta", "variance_product", *bound_ids]
    return pd.DataFrame([p.as_row() for p in points], columns=columns)


def write_curves(points, path, fmt="csv", bound_ids=None):
    """
    Write curve points to `path` ('-' for stdout) as CSV or JSON records.

    Returns:
        pd.DataFrame: the table that was written
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown output format {fmt!r}")

    df = curve_frame(points, bound_ids)
    if fmt == "csv":
        text = df.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    else:
        text = df.to_json(orient="records", double_precision=JSON_DOUBLE_PRECISION) + "\n"

    if path == "-":
        print(text, end="")
        return df

    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(f"Saved {fmt.upper()} curves: {path} ({len(df)} rows)")
    return df


def default_output_path(scenario_name, fmt="csv"):
    return os.path.join(config.OUTPUT_DIR, f"{scenario_name}.{fmt}")
