"""Built-in property suite for the ``verify`` command.

Runs every structural identity the library rests on, over seeded fixtures,
and reports one pass/fail row per property with the worst observed residual
and the tolerance it was held to.  The suite is deterministic for a given
seed and designed to finish in seconds; the pytest acceptance suite runs the
same properties at full strength.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fixtures
from .classify import classify_flow, thermal_product
from .optimize import (
    check_coherence_bound,
    maximize_transfer_exact,
    monte_carlo_max,
    optimal_diagonal_unitary,
)
from .qubits import (
    SecParams2Q,
    TwoQubitParams,
    delta_coh_2q,
    delta_diag_2q,
    max_transfer_2q,
    max_transfer_vs_concurrence,
    two_qubit_spectrum,
)
from .states import decompose, partial_trace
from .transfer import (
    batch_transfers,
    transfer_coherent,
    transfer_diagonal,
    transfer_direct,
)
from .unitaries import (
    is_potentially_coherent,
    sample_haar,
    sample_haar_blocks,
    to_full_matrix,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, residual: float, tol: float, note: str = "") -> CheckResult:
    detail = f"max residual {residual:.3e} vs tolerance {tol:g}"
    if note:
        detail += f" ({note})"
    return CheckResult(name, bool(residual <= tol), detail)


def check_transfer_split(seed: int) -> CheckResult:
    """total = diagonal + coherent, and the two sides exchange opposite energies."""
    worst = 0.0
    for index, (state, spec) in enumerate(fixtures.random_pairs(seed, per_class=30)):
        u = sample_haar(spec, seed + index)
        decomp = decompose(state, spec)
        for target in ("A", "B"):
            total = transfer_direct(state, u, target)
            diagonal, _ = transfer_diagonal(decomp, u, target)
            coherent, _ = transfer_coherent(decomp, u, target)
            worst = max(worst, abs(total - diagonal - coherent))
        worst = max(
            worst,
            abs(transfer_direct(state, u, "A") + transfer_direct(state, u, "B")),
        )
    return _result("transfer split (diagonal + coherent, A vs B antisymmetry)", worst, 1e-12)


def check_dephasing_identity(seed: int) -> CheckResult:
    """Evolving one diagonal block and tracing out B dephases the one-sided evolution."""
    worst = 0.0
    rng = np.random.default_rng(seed)
    for dims in ((2, 2), (3, 2), (3, 3)):
        spec = fixtures.ladder_spectrum(*dims)
        state = fixtures.random_state(dims, rng, coherent=False)
        decomp = decompose(state, spec)
        u = sample_haar(spec, seed + dims[0] * 10 + dims[1])
        full = to_full_matrix(u, spec)
        for block in spec.blocks:
            probs = decomp.diag_blocks[block.energy].probs
            flat = spec.flat_indices(block.energy)
            embedded = np.zeros((spec.total_dim, spec.total_dim), dtype=complex)
            embedded[flat, flat] = probs
            evolved_a = partial_trace(full @ embedded @ full.conj().T, dims, "A")
            mat = u.blocks[block.energy]
            one_sided = mat @ np.diag(probs.astype(complex)) @ mat.conj().T
            expected = np.zeros((dims[0], dims[0]), dtype=complex)
            levels = [a for a, _ in block.members]
            expected[levels, levels] = np.diag(one_sided)
            worst = max(worst, float(np.abs(evolved_a - expected).max()))
    return _result("per-block dephasing identity", worst, 1e-12)


def check_coherence_locality(seed: int) -> CheckResult:
    """Cross-energy coherences never matter; same-energy ones carry it all."""
    worst = 0.0
    for index, (state, spec) in enumerate(fixtures.random_pairs(seed + 1, per_class=15)):
        u = sample_haar(spec, seed + 1000 + index)
        stripped = fixtures.zero_cross_coherences(state, spec)
        dephased = fixtures.zero_same_coherences(state, spec)
        for target in ("A", "B"):
            worst = max(
                worst,
                abs(
                    transfer_direct(state, u, target)
                    - transfer_direct(stripped, u, target)
                ),
            )
            decomp = decompose(dephased, spec)
            coherent, _ = transfer_coherent(decomp, u, target)
            worst = max(worst, abs(coherent))
    return _result("useful-coherence locality", worst, 1e-13)


def check_permutation_gate(seed: int) -> CheckResult:
    """Unitaries failing the coherence-capability test give zero coherent transfer."""
    worst = 0.0
    rng = np.random.default_rng(seed + 2)
    for dims in ((2, 2), (3, 3)):
        spec = fixtures.ladder_spectrum(*dims)
        for _ in range(10):
            state = fixtures.random_state(dims, rng)
            decomp = decompose(state, spec)
            u = optimal_diagonal_unitary(decomp, spec, "A")
            if is_potentially_coherent(u):
                return CheckResult(
                    "incoherent-unitary gate", False, "permutation flagged as coherence-capable"
                )
            coherent, _ = transfer_coherent(decomp, u, "A")
            worst = max(worst, abs(coherent))
    return _result("incoherent-unitary gate", worst, 1e-12)


def check_diagonal_optimum(seed: int) -> CheckResult:
    """The population-optimal unitary dominates sampled diagonal transfers."""
    worst = 0.0
    rng = np.random.default_rng(seed + 3)
    for dims in ((2, 2), (3, 2)):
        spec = fixtures.ladder_spectrum(*dims)
        batch = sample_haar_blocks(spec, seed + 5, 400)
        for _ in range(5):
            state = fixtures.random_state(dims, rng)
            decomp = decompose(state, spec)
            u = optimal_diagonal_unitary(decomp, spec, "A")
            best, _ = transfer_diagonal(decomp, u, "A")
            sampled = batch_transfers(decomp, batch, "A").diagonal.max()
            worst = max(worst, float(sampled - best))
    return _result("diagonal-optimum dominance", max(worst, 0.0), 1e-12)


def check_bound(seed: int) -> CheckResult:
    """Optimal transfer with coherence is at least the dephased optimum."""
    worst = 0.0
    rng = np.random.default_rng(seed + 4)
    for dims in ((2, 2), (3, 3)):
        spec = fixtures.ladder_spectrum(*dims)
        for _ in range(10):
            state = fixtures.random_state(dims, rng)
            lhs, rhs, _ = check_coherence_bound(state, spec, "A")
            worst = max(worst, rhs - lhs)
    fixture = fixtures.max_coherence_params().to_state()
    spec = two_qubit_spectrum()
    lhs, rhs, _ = check_coherence_bound(fixture, spec, "A")
    gap_ok = lhs - rhs > 1e-6
    result = _result("coherence bound", max(worst, 0.0), 1e-12)
    if not gap_ok:
        return CheckResult(result.name, False, result.detail + "; strict gap missing")
    return CheckResult(result.name, result.passed, result.detail + "; strict gap present")


def check_one_way_flow(seed: int) -> CheckResult:
    """Members of the one-way class never lose energy on the certified side."""
    worst = 0.0
    for state, spec in fixtures.one_way_members(seed=seed + 6, count=12):
        label = classify_flow(state, spec, "A")
        if label.direction != "A_from_B":
            return CheckResult(
                "one-way-flow soundness", False, "constructed member failed to classify"
            )
        decomp = decompose(state, spec)
        batch = sample_haar_blocks(spec, seed + 7, 400)
        worst = max(worst, -float(batch_transfers(decomp, batch, "A").total.min()))
    return _result("one-way-flow soundness", max(worst, 0.0), 1e-12)


def check_two_qubit_forms(seed: int) -> CheckResult:
    """Closed forms match dense evolution and the block optimizer."""
    worst = 0.0
    rng = np.random.default_rng(seed + 8)
    spec = two_qubit_spectrum()
    for _ in range(40):
        raw = rng.dirichlet(np.ones(4))
        amax = np.sqrt(raw[1] * raw[2])
        alpha = rng.uniform(-1, 1) * amax + 1j * rng.uniform(-1, 1) * amax
        if abs(alpha) > amax:
            alpha *= amax / abs(alpha)
        params = TwoQubitParams(raw[0], raw[1], raw[2], raw[3], alpha)
        r = rng.uniform(0, 1)
        phi = rng.uniform(0, 2 * np.pi)
        thetas = tuple(rng.uniform(0, 2 * np.pi, size=4))
        u = SecParams2Q(r=r, phi=phi, thetas=thetas).to_sec_unitary(spec)
        state = params.to_state()
        predicted = delta_diag_2q(params, r) + delta_coh_2q(params, r, phi)
        worst = max(worst, abs(predicted - transfer_direct(state, u, "A")))
        optimum = max_transfer_2q(params, "A", optimize_alpha=False)
        exact = maximize_transfer_exact(state, spec, "A").value
        worst = max(worst, abs(exact - optimum.value))
    for tenths in range(11):
        concurrence = tenths / 10
        p01 = 0.25 * (1.0 + concurrence)
        line = TwoQubitParams(0.5 - p01, p01, p01, 0.5 - p01, p01)
        worst = max(
            worst,
            abs(max_transfer_2q(line, "A").value - max_transfer_vs_concurrence(concurrence)),
        )
    return _result("two-qubit closed forms", worst, 1e-10)


def check_monte_carlo_dominance(seed: int) -> CheckResult:
    """Sampling never beats the exact optimizer (up to float noise)."""
    worst = 0.0
    rng = np.random.default_rng(seed + 9)
    for dims in ((2, 2), (3, 2)):
        spec = fixtures.ladder_spectrum(*dims)
        state = fixtures.random_state(dims, rng)
        exact = maximize_transfer_exact(state, spec, "A").value
        sampled = monte_carlo_max(state, spec, "A", n_samples=2000, seed=seed + 10).value
        worst = max(worst, sampled - exact)
    return _result("sampling dominance", max(worst, 0.0), 1e-10)


def check_haar_moment(seed: int) -> CheckResult:
    """Mean squared first amplitude of sampled blocks matches the uniform value."""
    spec = fixtures.ladder_spectrum(2, 2)
    batch = sample_haar_blocks(spec, seed + 11, 20000)
    stack = batch[spec.blocks[1].energy]
    mean = float((np.abs(stack[:, 0, 0]) ** 2).mean())
    # Var(|c00|^2) = (d-1)/(d^2 (d+1)) for Haar; three sigma of the mean
    sigma = np.sqrt((1.0 / 12.0) / stack.shape[0])
    return _result("Haar block first moment", abs(mean - 0.5), 3.0 * sigma)


def check_thermal_direction(seed: int) -> CheckResult:
    """Colder-A thermal products classify as one-way toward A."""
    for dims in ((2, 2), (3, 3)):
        spec = fixtures.ladder_spectrum(*dims)
        state = thermal_product(spec.h_a, spec.h_b, 2.0, 1.0)
        if classify_flow(state, spec, "A").direction != "A_from_B":
            return CheckResult("thermal-product direction", False, "classification failed")
        hot_cold = classify_flow(state, spec, "B")
        if hot_cold.direction != "none":
            return CheckResult(
                "thermal-product direction", False, "hotter side wrongly certified"
            )
    return CheckResult("thermal-product direction", True, "colder side certified, hotter not")


ALL_CHECKS = (
    check_transfer_split,
    check_dephasing_identity,
    check_coherence_locality,
    check_permutation_gate,
    check_diagonal_optimum,
    check_bound,
    check_one_way_flow,
    check_two_qubit_forms,
    check_monte_carlo_dominance,
    check_haar_moment,
    check_thermal_direction,
)


def run_all(seed: int = 20240801) -> list[CheckResult]:
    return [check(seed) for check in ALL_CHECKS]


def format_table(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name.ljust(width)}  {status}  {r.detail}")
    return "\n".join(lines)
