"""Randomized and grid-based invariant suites behind ``horizon-eur verify``.

Each suite is a pair (generator, check). The generator draws self-contained
case inputs from a seeded RNG; the check decides a single case from those
inputs alone, so a failing case can be serialized to JSON and replayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .bounds import (
    conditional_measurement_entropy,
    evaluate,
    full_report,
    lhs_uncertainty,
    r0_grid,
)
from .entropy import conditional_entropy, mutual_information, von_neumann_entropy
from .errors import HorizonEURError
from .horizon import (
    HorizonParams,
    dilation_angle,
    example_state,
    mode_isometry,
    transform_memory,
    transform_memory_at_angle,
)
from .linalg import (
    DensityMatrix,
    apply_isometry,
    hermitian_spectrum,
    partial_trace,
    random_density_matrix,
    random_isometry,
    random_unitary,
    tensor_product,
)
from .measurement import (
    ProjectiveBasis,
    eigenbasis,
    holevo_quantity,
    measurement_entropy,
    observable,
    overlap_table,
)

Inputs = dict
Check = Callable[[Inputs, float], bool]

GRID_OMEGAS = (10.0, 30.0)
GRID_R0 = (1.001, 1.05)
GRID_STEPS = 20


@dataclass
class Suite:
    name: str
    generate: Callable[[np.random.Generator, int], Iterator[Inputs]]
    check: Check
    # informational suites report violations without failing the run
    informational: bool = False


@dataclass
class SuiteResult:
    name: str
    passed: int
    total: int
    informational: bool = False
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.informational or self.passed == self.total


@dataclass
class VerifyOutcome:
    seed: int
    trials: int
    tolerance: float
    results: list[SuiteResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)


# -- serialization ----------------------------------------------------------

def encode(value):
    if isinstance(value, np.ndarray):
        return {"__complex_array__": True, "shape": list(value.shape),
                "re": np.real(value).ravel().tolist(), "im": np.imag(value).ravel().tolist()}
    if isinstance(value, dict):
        return {k: encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def decode(value):
    if isinstance(value, dict):
        if value.get("__complex_array__"):
            arr = np.array(value["re"]) + 1j * np.array(value["im"])
            return arr.reshape(value["shape"])
        return {k: decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [decode(v) for v in value]
    return value


# -- helpers ----------------------------------------------------------------

def _dm(inputs: Inputs, key: str, dims_key: str = "dims") -> DensityMatrix:
    return DensityMatrix(inputs[key], inputs[dims_key])


def _random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (g + g.conj().T)


def _random_rho(dims, rng: np.random.Generator) -> np.ndarray:
    n = int(np.prod(dims))
    return random_density_matrix(dims, rng, rank=int(rng.integers(1, n + 1))).matrix


def _no_pair_rho(rng: np.random.Generator) -> np.ndarray:
    """Random two-mode state whose second factor has no weight on the pair level."""
    g = rng.standard_normal((4, 3, 8)) + 1j * rng.standard_normal((4, 3, 8))
    full = np.zeros((4, 4, 8), dtype=complex)
    full[:, :3, :] = g
    g = full.reshape(16, 8)
    m = g @ g.conj().T
    return m / np.trace(m).real


def _xy() -> tuple[ProjectiveBasis, ProjectiveBasis]:
    return eigenbasis(observable("x")), eigenbasis(observable("y"))


def _bases(inputs: Inputs) -> tuple[ProjectiveBasis, ProjectiveBasis]:
    if "u1" in inputs:
        return ProjectiveBasis(inputs["u1"], "random"), ProjectiveBasis(inputs["u2"], "random")
    return _xy()


def _grid_cases(states=("bell", "w")) -> Iterator[Inputs]:
    for label in states:
        for om in GRID_OMEGAS:
            for r0 in r0_grid(*GRID_R0, GRID_STEPS):
                yield {"state": label, "omega": om, "r0": float(r0)}


# -- matrix kernel ----------------------------------------------------------

def _gen_spectrum(rng, trials):
    for i in range(trials):
        yield {"matrix": _random_hermitian(4 if i % 2 == 0 else 16, rng)}


def _check_spectrum(inp, tol):
    spec = hermitian_spectrum(inp["matrix"])
    v = spec.eigenvectors
    return (np.max(np.abs(spec.reconstruct() - inp["matrix"])) <= 1e-10
            and np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))) <= 1e-10)


def _gen_product_trace(rng, trials):
    for _ in range(trials):
        yield {"a": _random_rho([4], rng), "b": _random_rho([4], rng)}


def _check_product_trace(inp, tol):
    a = DensityMatrix(inp["a"], [4])
    b = DensityMatrix(inp["b"], [4])
    return np.max(np.abs(partial_trace(tensor_product(a, b), [0]).matrix - a.matrix)) <= 1e-12


def _gen_isometry_trace(rng, trials):
    for _ in range(trials):
        yield {"rho": _random_rho([4, 4], rng), "dims": [4, 4],
               "v": random_isometry(4, 16, rng), "target": int(rng.integers(0, 2))}


def _check_isometry_trace(inp, tol):
    out = apply_isometry(_dm(inp, "rho"), inp["v"], inp["target"])
    return abs(out.trace - 1.0) <= 1e-12


def _gen_associativity(rng, trials):
    for _ in range(trials):
        yield {"a": _random_rho([2], rng), "b": _random_rho([3], rng), "c": _random_rho([4], rng)}


def _check_associativity(inp, tol):
    a, b, c = (DensityMatrix(inp[k], [inp[k].shape[0]]) for k in "abc")
    left = tensor_product(tensor_product(a, b), c).matrix
    right = tensor_product(a, tensor_product(b, c)).matrix
    return np.max(np.abs(left - right)) <= 1e-14


# -- entropy ----------------------------------------------------------------

def _gen_unitary_invariance(rng, trials):
    for _ in range(trials):
        yield {"rho": _random_rho([16], rng), "dims": [16], "u": random_unitary(16, rng)}


def _check_unitary_invariance(inp, tol):
    rho = _dm(inp, "rho")
    u = inp["u"]
    rotated = DensityMatrix.from_unnormalized(u @ rho.matrix @ u.conj().T, [16])
    return abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) < tol


def _gen_bipartite(rng, trials):
    for _ in range(trials):
        yield {"rho": _random_rho([4, 4], rng), "dims": [4, 4]}


def _check_subadditivity(inp, tol):
    rho = _dm(inp, "rho")
    h_a = von_neumann_entropy(partial_trace(rho, [0]))
    h_b = von_neumann_entropy(partial_trace(rho, [1]))
    return von_neumann_entropy(rho) <= h_a + h_b + tol


def _check_mi_nonnegative(inp, tol):
    return mutual_information(_dm(inp, "rho")) >= -tol


def _gen_product_pair(rng, trials):
    for _ in range(trials):
        yield {"a": _random_rho([4], rng), "b": _random_rho([4], rng)}


def _check_conditional_product(inp, tol):
    a = DensityMatrix(inp["a"], [4])
    b = DensityMatrix(inp["b"], [4])
    return abs(conditional_entropy(tensor_product(a, b), 1) - von_neumann_entropy(a)) < tol


# -- measurement ------------------------------------------------------------

def _gen_bipartite_with_bases(rng, trials):
    for _ in range(trials):
        yield {"rho": _random_rho([4, 4], rng), "dims": [4, 4],
               "u1": random_unitary(4, rng), "u2": random_unitary(4, rng)}


def _check_information_identity(inp, tol):
    rho = _dm(inp, "rho")
    b1, b2 = _xy()
    rho_a = partial_trace(rho, [0])
    decrease = (measurement_entropy(rho_a, b1) + measurement_entropy(rho_a, b2)
                - lhs_uncertainty(rho, b1, b2))
    return abs(decrease - holevo_quantity(rho, b1) - holevo_quantity(rho, b2)) <= tol


def _check_holevo_le_mi(inp, tol):
    rho = _dm(inp, "rho")
    mi = mutual_information(rho)
    return all(holevo_quantity(rho, b) <= mi + tol for b in _xy())


def _check_route_equality(inp, tol):
    rho = _dm(inp, "rho")
    rho_a = partial_trace(rho, [0])
    return all(abs(conditional_measurement_entropy(rho, b)
                   - (measurement_entropy(rho_a, b) - holevo_quantity(rho, b))) <= tol
               for b in _xy())


def _check_holevo_range(inp, tol):
    rho = _dm(inp, "rho")
    h_b = von_neumann_entropy(partial_trace(rho, [1]))
    return all(-tol <= holevo_quantity(rho, b) <= h_b + tol for b in _xy())


def _gen_observable_pairs(rng, trials):
    for first, second in [("x", "y"), ("x", "z"), ("y", "z")]:
        yield {"first": first, "second": second}


def _check_doubly_stochastic(inp, tol):
    table = overlap_table(eigenbasis(observable(inp["first"])), eigenbasis(observable(inp["second"])))
    c = table.c
    return (np.max(np.abs(c.sum(axis=0) - 1)) <= 1e-10 and np.max(np.abs(c.sum(axis=1) - 1)) <= 1e-10
            and c.min() >= 0 and c.max() <= 1 + 1e-12)


# -- horizon ----------------------------------------------------------------

def _gen_dilation_grid(rng, trials):
    for r0 in (1.001, 1.01, 1.05):
        yield {"vary": "omega", "r0": r0}
    for om in (1.0, 10.0, 30.0):
        yield {"vary": "r0", "omega": om}


def _check_dilation_monotone(inp, tol):
    if inp["vary"] == "omega":
        qs = [dilation_angle(HorizonParams(float(om), inp["r0"])) for om in np.linspace(0.5, 60, 40)]
    else:
        # R0 ascending, so q must fall strictly
        qs = [dilation_angle(HorizonParams(inp["omega"], float(r0))) for r0 in np.linspace(1.0, 1.05, 40)]
    return all(b < a for a, b in zip(qs, qs[1:]))


def _gen_angles(rng, trials):
    for q in np.linspace(0.0, math.pi / 4, 50):
        yield {"q": float(q)}


def _check_isometry_columns(inp, tol):
    v = mode_isometry(inp["q"]).matrix[:, :3]
    return np.max(np.abs(v.conj().T @ v - np.eye(3))) <= 1e-12


def _gen_locality(rng, trials):
    for _ in range(trials):
        yield {"rho": _no_pair_rho(rng), "dims": [4, 4], "q": float(rng.uniform(0, math.pi / 4))}


def _check_locality(inp, tol):
    rho = _dm(inp, "rho")
    out = transform_memory_at_angle(rho, 1, inp["q"])
    return np.max(np.abs(partial_trace(out, [0]).matrix - partial_trace(rho, [0]).matrix)) <= 1e-10


def _check_zero_angle(inp, tol):
    rho = _dm(inp, "rho")
    return np.max(np.abs(transform_memory_at_angle(rho, 1, 0.0).matrix - rho.matrix)) <= 1e-12


def _gen_omegas(rng, trials):
    for om in GRID_OMEGAS:
        yield {"omega": om}


def _check_bell_mi_monotone(inp, tol):
    rho = example_state("bell")
    mis = [mutual_information(transform_memory(rho, 1, HorizonParams(inp["omega"], float(r0))))
           for r0 in r0_grid(1.0, 1.05, GRID_STEPS)]
    return all(b >= a - tol for a, b in zip(mis, mis[1:]))


# -- bounds -----------------------------------------------------------------

def _gen_state_omega(rng, trials):
    for label in ("bell", "w"):
        for om in GRID_OMEGAS:
            yield {"state": label, "omega": om}


def _check_delta2_constancy(inp, tol):
    d2 = [evaluate(inp["state"], HorizonParams(inp["omega"], float(r0)), tol=tol).delta2
          for r0 in r0_grid(*GRID_R0, GRID_STEPS)]
    return max(d2) - min(d2) < tol


def _gen_grid(rng, trials):
    yield from _grid_cases()


def _check_u2_tighter(inp, tol):
    rep = evaluate(inp["state"], HorizonParams(inp["omega"], inp["r0"]), tol=tol)
    return rep.u2 >= rep.u1 - tol


def _check_u2_tighter_random(inp, tol):
    rho = _dm(inp, "rho")
    b1, b2 = _bases(inp)
    rep = full_report("random", rho, b1, b2, tol=tol)
    return rep.u2 >= rep.u1 - tol


def _check_validity(inp, tol):
    rho = _dm(inp, "rho")
    b1, b2 = _bases(inp)
    rep = full_report("random", rho, b1, b2, tol=tol)
    return rep.lhs >= rep.u1 - tol and rep.lhs >= rep.u2 - tol


def _check_validity_grid(inp, tol):
    rep = evaluate(inp["state"], HorizonParams(inp["omega"], inp["r0"]), tol=tol)
    return rep.lhs >= rep.u1 - tol and rep.lhs >= rep.u2 - tol


def _check_identity_grid(inp, tol):
    rep = evaluate(inp["state"], HorizonParams(inp["omega"], inp["r0"]), tol=tol)
    decrease = rep.h_m1 + rep.h_m2 - rep.lhs
    return abs(decrease - rep.holevo_m1 - rep.holevo_m2) <= tol


def _check_bell_lhs_monotone(inp, tol):
    lhs = [evaluate("bell", HorizonParams(inp["omega"], float(r0)), tol=tol).lhs
           for r0 in r0_grid(1.0, 1.05, GRID_STEPS)]
    return all(b <= a + tol for a, b in zip(lhs, lhs[1:]))


SUITES: list[Suite] = [
    Suite("spectrum_reconstruction", _gen_spectrum, _check_spectrum),
    Suite("partial_trace_of_product", _gen_product_trace, _check_product_trace),
    Suite("isometry_preserves_trace", _gen_isometry_trace, _check_isometry_trace),
    Suite("tensor_associativity", _gen_associativity, _check_associativity),
    Suite("entropy_unitary_invariance", _gen_unitary_invariance, _check_unitary_invariance),
    Suite("subadditivity", _gen_bipartite, _check_subadditivity),
    Suite("mutual_information_nonnegative", _gen_bipartite, _check_mi_nonnegative),
    Suite("conditional_entropy_of_product", _gen_product_pair, _check_conditional_product),
    Suite("information_identity", _gen_bipartite, _check_information_identity),
    Suite("holevo_below_mutual_information", _gen_bipartite, _check_holevo_le_mi),
    Suite("conditional_entropy_routes", _gen_bipartite, _check_route_equality),
    Suite("holevo_range", _gen_bipartite, _check_holevo_range),
    Suite("overlap_doubly_stochastic", _gen_observable_pairs, _check_doubly_stochastic),
    Suite("dilation_angle_monotone", _gen_dilation_grid, _check_dilation_monotone),
    Suite("isometry_columns", _gen_angles, _check_isometry_columns),
    Suite("memory_map_locality", _gen_locality, _check_locality),
    Suite("zero_angle_identity", _gen_locality, _check_zero_angle),
    Suite("bell_mutual_information_degrades", _gen_omegas, _check_bell_mi_monotone),
    Suite("delta2_constancy", _gen_state_omega, _check_delta2_constancy),
    Suite("u2_tighter_on_examples", _gen_grid, _check_u2_tighter),
    Suite("u2_tighter_random", _gen_bipartite_with_bases, _check_u2_tighter_random, informational=True),
    Suite("bound_validity_random", _gen_bipartite_with_bases, _check_validity),
    Suite("bound_validity_grid", _gen_grid, _check_validity_grid),
    Suite("information_identity_grid", _gen_grid, _check_identity_grid),
    Suite("bell_uncertainty_grows_toward_horizon", _gen_omegas, _check_bell_lhs_monotone),
]

SUITES_BY_NAME = {s.name: s for s in SUITES}


def fault_case() -> Inputs:
    """A two-mode 'state' with an eigenvalue of -1e-6, well beyond the clamping window."""
    m = np.diag([0.5 + 1e-6, 0.5, -1e-6] + [0.0] * 13).astype(complex)
    return {"rho": m, "dims": [4, 4]}


def run_case(suite: Suite, inputs: Inputs, tol: float) -> tuple[bool, str | None]:
    try:
        return bool(suite.check(inputs, tol)), None
    except HorizonEURError as exc:
        return False, f"{type(exc).__name__}: {exc}"


def run_suites(seed: int, trials: int, tol: float = 1e-9, inject_fault: bool = False) -> VerifyOutcome:
    outcome = VerifyOutcome(seed, trials, tol)
    for index, suite in enumerate(SUITES):
        rng = np.random.default_rng([seed, index])
        cases = list(suite.generate(rng, trials))
        if inject_fault and suite.name == "bound_validity_random":
            cases.append(fault_case())
        result = SuiteResult(suite.name, 0, len(cases), suite.informational)
        for i, inputs in enumerate(cases):
            ok, error = run_case(suite, inputs, tol)
            if ok:
                result.passed += 1
            elif result.counterexample is None and not suite.informational:
                result.counterexample = {
                    "suite": suite.name, "seed": seed, "case": i, "tolerance": tol,
                    "error": error, "inputs": encode(inputs),
                }
        outcome.results.append(result)
    return outcome


def replay(counterexample: dict, tol: float | None = None) -> tuple[bool, str | None]:
    suite = SUITES_BY_NAME[counterexample["suite"]]
    tol = counterexample.get("tolerance", 1e-9) if tol is None else tol
    return run_case(suite, decode(counterexample["inputs"]), tol)


def format_outcome(outcome: VerifyOutcome) -> str:
    width = max(len(r.name) for r in outcome.results)
    lines = [f"verify seed={outcome.seed} trials={outcome.trials} tolerance={outcome.tolerance:g}"]
    for r in outcome.results:
        if r.informational:
            status = "INFO" if r.passed == r.total else f"INFO ({r.total - r.passed} violations reported)"
        else:
            status = "PASS" if r.passed == r.total else "FAIL"
        lines.append(f"{r.name:<{width}}  {r.passed:>4}/{r.total:<4} {status}")
    failed = sum(1 for r in outcome.results if not r.ok)
    lines.append(f"summary: {len(outcome.results)} suites, {failed} failed")
    return "\n".join(lines) + "\n"


__all__ = [
    "SUITES", "Suite", "SuiteResult", "VerifyOutcome", "decode", "encode",
    "fault_case", "format_outcome", "replay", "run_suites",
]
