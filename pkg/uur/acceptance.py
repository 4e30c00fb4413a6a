"""
Acceptance suite: randomized identity checks against the oracle plus the
example reproductions, each reported with its worst measured deviation.

Every criterion compares a worst-case deviation against a tolerance; ordering
claims measure how far the ordering is violated (0 when it holds).
"""

import math
import os
import zlib
from dataclasses import dataclass, field
from datetime import datetime
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter

from uur import bounds, matrix_core, oracle
from uur import quantum_model as qm
from uur.logger import get_logger
from uur.scenarios import ThetaGrid, builtin_scenarios, example2_state, example5_state, example6_state
from uur.sweep import curve_frame, run_scenario
from utils.config import config

logger = get_logger(__name__)


class CriterionResult(BaseModel):
    model_config = ConfigDict(populate_by_name=True, ser_json_inf_nan="constants")

    criterion: str
    tolerance: float
    worst_deviation: float
    passed: bool = Field(alias="pass")


REPORT_ADAPTER = TypeAdapter(List[CriterionResult])


def report_schema():
    """JSON schema of the acceptance report (an array of criterion results)."""
    return REPORT_ADAPTER.json_schema(by_alias=True)


def _result(name, tolerance, deviations):
    values = np.asarray(list(deviations), dtype=np.float64)
    if values.size == 0:
        worst = 0.0
    elif not np.all(np.isfinite(values)):
        worst = math.inf
    else:
        worst = float(values.max())
    return CriterionResult(criterion=name, tolerance=tolerance, worst_deviation=worst, passed=worst <= tolerance)


def _shortfall(lower, upper):
    """Elementwise violation of lower <= upper, 0 where it holds."""
    return np.maximum(np.asarray(lower) - np.asarray(upper), 0.0)


# --- closed forms --------------------------------------------------------------


def example2_purified_closed_form(theta):
    """vec(sqrt(rho)) of the Bloch qubit with r = (1/3, 2/3 cos t, 2/3 sin t), written out by hand."""
    r5 = math.sqrt(5.0)
    lo, hi = math.sqrt(3.0 - r5), math.sqrt(3.0 + r5)
    s, c = math.sin(theta), math.cos(theta)
    den = 2.0 * math.sqrt(30.0)
    return np.array(
        [
            (lo * (r5 - 2 * s) + hi * (r5 + 2 * s)) / den,
            -1j * (lo - hi) * (-1j + 2 * c) / den,
            1j * (lo - hi) * (1j + 2 * c) / den,
            (hi * (r5 - 2 * s) + lo * (r5 + 2 * s)) / den,
        ],
        dtype=np.complex128,
    )


def example5_purified_closed_form(theta):
    """vec(sqrt(rho)) of the Gell-Mann qutrit (1/3)[[1, c, 0], [c, 1, s], [0, s, 1]]."""
    r3, r6 = math.sqrt(3.0), math.sqrt(6.0)
    s, c = math.sin(theta), math.cos(theta)
    corner = (-2.0 + math.sqrt(2.0)) * math.sin(2 * theta) / (4.0 * r3)
    return np.array(
        [c**2 / r6 + s**2 / r3, c / r6, corner, c / r6, 1 / r6, s / r6, corner, s / r6, c**2 / r3 + s**2 / r6],
        dtype=np.complex128,
    )


# --- context -------------------------------------------------------------------


@dataclass
class AcceptanceContext:
    seed: oracle.Seed
    grid: ThetaGrid
    restarts: int
    _curves: dict = field(default_factory=dict, repr=False)

    def curves(self, name):
        """Curve table of a builtin scenario on the context grid, computed once."""
        if name not in self._curves:
            scenario = builtin_scenarios(self.grid)[name]
            points = run_scenario(scenario, seed=self.seed.value, restarts=self.restarts)
            self._curves[name] = curve_frame(points, scenario.bounds_requested)
        return self._curves[name]

    def suite(self, tag, count):
        """Child seeds for one randomized criterion; tags keep suites independent."""
        return self.seed.child(zlib.crc32(tag.encode("utf-8"))).stream(count)


# --- criteria --------------------------------------------------------------------


def variance_identities(ctx):
    identity_dev, path_dev = [], []
    for i, seed in enumerate(ctx.suite("variance", 1000)):
        dim, mixed = 2 + i % 4, (i // 4) % 2 == 1
        state, a, b = oracle.random_instance(seed, dim, mixed)
        purified = qm.purify(state) if mixed else None
        for u in (a, b):
            var = qm.variance(u, state)
            identity_dev.append(abs(var - (1.0 - abs(qm.expectation(u, state)) ** 2)))
            identity_dev.append(abs(var - oracle.variance_reference(u, state)))
            if mixed:
                path_dev.append(abs(qm.purified_variance(u, state, purified) - var))
    return [
        _result("variance identity: dA^2 = 1 - |<A>|^2", 1e-10, identity_dev),
        _result("variance paths: vectorized vs trace", 1e-12, path_dev),
    ]


def chain_soundness(ctx):
    monotone, endpoint, gram_gap = [], [], []
    for i, seed in enumerate(ctx.suite("chain", 500)):
        dim, mixed = 2 + i % 4, (i // 4) % 2 == 1
        state, a, b = oracle.random_instance(seed, dim, mixed)
        ch = bounds.chain(bounds.amplitude_pair(a, b, state))
        monotone.append(float(np.max(np.diff(ch.values), initial=0.0)))
        endpoint.append(abs(ch[1] - qm.variance(a, state) * qm.variance(b, state)))
        gram_gap.append(max(bounds.lb2(a, b, state) - ch[ch.values.size], 0.0))
    return [
        _result("chain: I_1 >= I_2 >= ... >= I_N", 1e-10, monotone),
        _result("chain: I_1 = dA^2 dB^2", 1e-10, endpoint),
        _result("chain: I_N >= LB2", 1e-10, gram_gap),
    ]


def example1_reproduction(ctx):
    d2, d3, d4, d5 = (ctx.curves(f"example1-d{d}") for d in (2, 3, 4, 5))
    return [
        _result("example1 d=2: dA^2 dB^2 = I2", 1e-9, np.abs(d2["variance_product"] - d2["I2"])),
        _result("example1 d=3: I3 = LB2", 1e-9, np.abs(d3["I3"] - d3["LB2"])),
        _result("example1 d=3: I2 >= I3", 1e-10, _shortfall(d3["I3"], d3["I2"])),
        _result(
            "example1 d=4: I2 = I3, I4 = LB2",
            1e-9,
            np.concatenate([np.abs(d4["I2"] - d4["I3"]), np.abs(d4["I4"] - d4["LB2"])]),
        ),
        _result(
            "example1 d=5: I2 = I3 = I4, I5 = LB2",
            1e-9,
            np.concatenate(
                [np.abs(d5["I2"] - d5["I3"]), np.abs(d5["I3"] - d5["I4"]), np.abs(d5["I5"] - d5["LB2"])]
            ),
        ),
    ]


def permutation_remark(ctx):
    df = ctx.curves("example1-remark")
    return [
        _result("qutrit remark: max I2 over S3 x S3 = dA^2 dB^2", 1e-9, np.abs(df["Imax2"] - df["variance_product"])),
        _result("qutrit remark: max I3 >= I3", 1e-10, _shortfall(df["I3"], df["Imax3"])),
    ]


def example2_purification(ctx):
    deviations = []
    for theta in ctx.grid.values():
        purified = qm.purify(example2_state(theta)).amplitudes
        deviations.append(float(np.max(np.abs(purified - example2_purified_closed_form(theta)))))
    return [_result("example2: vec(sqrt(rho)) matches closed form", 1e-10, deviations)]


def example5_purification(ctx):
    deviations = []
    for theta in ctx.grid.values():
        purified = qm.purify(example5_state(theta)).amplitudes
        deviations.append(float(np.max(np.abs(purified - example5_purified_closed_form(theta)))))
    return [_result("example5: vec(sqrt(rho)) matches closed form", 1e-10, deviations)]


def example2_ordering(ctx):
    df = ctx.curves("example2")
    chain = ["variance_product", "I2", "I3", "I4", "LB2"]
    violations = np.concatenate([_shortfall(df[low], df[high]) for high, low in zip(chain, chain[1:])])
    return [_result("example2: dA^2 dB^2 >= I2 >= I3 >= I4 >= LB2", 1e-10, violations)]


def gram_identity(ctx):
    identity, positivity, saturation = [], [], []
    for i, seed in enumerate(ctx.suite("gram", 200)):
        dim, mixed = 2 + i % 3, (i // 3) % 2 == 1
        state, a, b, c = oracle.random_instance(seed, dim, mixed, n_ops=3)
        report = bounds.gram([a, b, c], state)
        product = qm.variance(a, state) * qm.variance(b, state) * qm.variance(c, state)
        identity.append(abs(report.determinant - (product - report.lb3)))
        positivity.append(max(-report.determinant, 0.0))
        if not mixed and dim <= 3:
            saturation.append(abs(report.determinant))
    return [
        _result("gram: det G = dA^2 dB^2 dC^2 - LB3", 1e-9, identity),
        _result("gram: det G >= 0", 1e-9, positivity),
        _result("gram: det G = 0 for pure states, dim <= 3", 1e-9, saturation),
    ]


def triple_soundness(ctx):
    violations = []
    for name in ("example3", "example4", "example5"):
        df = ctx.curves(name)
        ids = [c for c in df.columns if c.startswith("prod3")]
        for bound_id in ids:
            violations.append(_shortfall(df[bound_id], df["variance_product"]))
    df5 = ctx.curves("example5")
    tighter = [_shortfall(df5["LB3"], df5[f"prod3_k{k}"]) for k in range(2, 7)]
    return [
        _result("examples 3-5: sqrt(I_k J_k K_k) <= dA^2 dB^2 dC^2", 1e-9, np.concatenate(violations)),
        _result("example5: sqrt(I_k J_k K_k) >= LB3 for k = 2..6", 1e-9, np.concatenate(tighter)),
    ]


def example6_saturation(ctx):
    df = ctx.curves("example6")
    saturation = np.concatenate([np.abs(df["variance_product"] - df[f"prod4_k{k}"]) for k in range(2, 6)])
    scenario = builtin_scenarios(ctx.grid)["example6"]
    zeros = [
        abs(bounds.gram(scenario.operator_list, example6_state(theta)).determinant)
        for theta in (0.0, math.pi, 2.0 * math.pi)
    ]
    return [
        _result("example6: dA^2 dB^2 dC^2 dD^2 = I_k J_k, k = 2..5", 1e-9, saturation),
        _result("example6: det G >= 0", 1e-9, np.maximum(-df["detG"], 0.0)),
        _result("example6: det G = 0 at theta = 0, pi, 2pi", 1e-9, zeros),
    ]


def permutation_search(ctx):
    bracket, agreement = [], []
    for i, seed in enumerate(ctx.suite("permutation", 100)):
        n = 2 + i % 4
        k = 2 + (i // 4) % (n - 1)
        pair = bounds.AmplitudePair.from_moduli(*oracle.random_moduli(seed, n))
        plain = bounds.i_k(pair, k)
        exhaustive, perm = bounds.max_permuted_i_k(pair, k, strategy="exhaustive")
        heuristic, _ = bounds.max_permuted_i_k(pair, k, strategy="heuristic", seed=seed.value, restarts=ctx.restarts)
        bracket.append(max(plain - heuristic, heuristic - exhaustive, 0.0))

        reference, reference_perm = oracle.exhaustive_perm_max(pair.x, pair.y, k)
        agreement.append(abs(exhaustive - reference) if perm == reference_perm else math.inf)
    return [
        _result("permutations: I_k <= heuristic <= exhaustive", 1e-12, bracket),
        _result("permutations: engine exhaustive = oracle exhaustive", 1e-12, agreement),
    ]


def oracle_agreement(ctx):
    i_k_dev, det_dev = [], []
    for i, seed in enumerate(ctx.suite("oracle", 500)):
        n = 1 + i % 9
        x, y = oracle.random_moduli(seed, n)
        pair = bounds.AmplitudePair.from_moduli(x, y)
        for k in range(1, n + 1):
            i_k_dev.append(abs(bounds.i_k(pair, k) - oracle.i_k_reference(x, y, k)))
    for seed in ctx.suite("determinant", 100):
        rng = seed.rng()
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        reference = oracle.laplace_det(m)
        det_dev.append(abs(matrix_core.det(m) - reference) / max(1.0, abs(reference)))
    return [
        _result("oracle: I_k closed form = triple-loop sum", 1e-12, i_k_dev),
        _result("oracle: LU determinant = cofactor expansion", 1e-10, det_dev),
    ]


CRITERIA = [
    variance_identities,
    chain_soundness,
    example1_reproduction,
    permutation_remark,
    example2_purification,
    example2_ordering,
    example5_purification,
    gram_identity,
    triple_soundness,
    example6_saturation,
    permutation_search,
    oracle_agreement,
]


def write_report(results, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "wb") as f:
        f.write(REPORT_ADAPTER.dump_json(results, by_alias=True, indent=2))
    logger.info(f"Saved acceptance report: {path}")


def check_acceptance(seed=None, grid=None, restarts=None, report_path=None, criteria=None):
    """
    Run the acceptance criteria.

    Returns:
        tuple: (exit code, list[CriterionResult]); exit code 0 iff every criterion passes
    """
    ctx = AcceptanceContext(
        seed=oracle.Seed(config.get_seed() if seed is None else seed),
        grid=grid or ThetaGrid.default(),
        restarts=config.get_restarts() if restarts is None else restarts,
    )
    logger.info("STARTING ACCEPTANCE SUITE")
    logger.info(f"Seed: {ctx.seed.value} | Grid points: {ctx.grid.count} | Heuristic restarts: {ctx.restarts}")
    start_time = datetime.now()

    results = []
    for check in criteria or CRITERIA:
        try:
            batch = check(ctx)
        except Exception as e:
            logger.error(f"Criterion {check.__name__} raised: {str(e)}", exc_info=True)
            batch = [CriterionResult(criterion=check.__name__, tolerance=0.0, worst_deviation=math.inf, passed=False)]
        for result in batch:
            status = "PASS" if result.passed else "FAIL"
            log = logger.info if result.passed else logger.error
            log(
                f"{status} | {result.criterion} | "
                f"worst {result.worst_deviation:.3e} (tolerance {result.tolerance:.0e})"
            )
        results.extend(batch)

    failed = [r for r in results if not r.passed]
    duration = str(datetime.now() - start_time).split(".")[0]
    logger.info(f"ACCEPTANCE SUMMARY: {len(results) - len(failed)}/{len(results)} passed | Duration: {duration}")

    if report_path:
        write_report(results, report_path)
    return (1 if failed else 0), results
