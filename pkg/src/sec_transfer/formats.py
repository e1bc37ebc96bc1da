"""JSON and CSV wire formats.

Schemas
-------
Hamiltonian        ``{"energies": [[num, den], ...], "labels": [...]}``
                   (labels optional).
State              ``{"dims": [dA, dB], "re": [[...]], "im": [[...]]}``.
Block unitary      ``{"blocks": {"<E as p/q>": {"re": [[...]], "im": [[...]]}}}``.
Transfer report    ``{"target", "total", "diagonal", "coherent", "eta",
                   "per_block_diagonal", "unit"}`` with eta keyed by local
                   level and the per-block map keyed by the rational energy.
Optimization       ``{"value", "method", "samples", "unitary"}`` with the
                   unitary inline or referenced by path.
Flow class         ``{"direction", "failing_blocks", "has_useful_coherence",
                   "witness"}``.
Problem file       ``{"h_a": <Hamiltonian>, "h_b": <Hamiltonian>,
                   "state": <State>}`` (state optional for constructor runs).

Floats are serialized with Python's shortest round-trip representation, so
every emitted value parses back to the exact double and identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .qubits import PlaneScan, TwoQubitParams
from .spectra import Hamiltonian, JointSpectrum, build_joint_spectrum
from .states import BipartiteState, StateDecomposition
from .transfer import TransferReport
from .optimize import OptimizationResult
from .classify import FlowClassification
from .unitaries import SecUnitary


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise ValidationError(f"{context} is missing required key {key!r}")
    return mapping[key]


def fraction_to_json(value: Fraction) -> list[int]:
    return [value.numerator, value.denominator]


def fraction_key(value: Fraction) -> str:
    return str(value)


def hamiltonian_to_json(h: Hamiltonian) -> dict:
    payload = {"energies": [fraction_to_json(e) for e in h.energies]}
    if h.labels is not None:
        payload["labels"] = list(h.labels)
    return payload


def hamiltonian_from_json(data: dict) -> Hamiltonian:
    energies = _require(data, "energies", "Hamiltonian JSON")
    parsed = []
    for entry in energies:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ValidationError(
                f"Hamiltonian energies must be [num, den] pairs, got {entry!r}"
            )
        parsed.append(Fraction(int(entry[0]), int(entry[1])))
    labels = data.get("labels")
    return Hamiltonian(tuple(parsed), tuple(labels) if labels is not None else None)


def _matrix_to_json(matrix: np.ndarray) -> dict:
    return {
        "re": np.real(matrix).tolist(),
        "im": np.imag(matrix).tolist(),
    }


def _matrix_from_json(data: dict, context: str) -> np.ndarray:
    re = np.array(_require(data, "re", context), dtype=float)
    im = np.array(_require(data, "im", context), dtype=float)
    if re.shape != im.shape:
        raise ValidationError(f"{context}: re/im shapes differ ({re.shape} vs {im.shape})")
    return re + 1j * im


def state_to_json(state: BipartiteState) -> dict:
    return {"dims": list(state.dims), **_matrix_to_json(state.matrix)}


def state_from_json(data: dict, tolerances: dict | None = None) -> BipartiteState:
    dims = _require(data, "dims", "state JSON")
    matrix = _matrix_from_json(data, "state JSON")
    kwargs = {}
    if tolerances:
        kwargs = {
            "herm_tol": tolerances.get("herm", 1e-12),
            "trace_tol": tolerances.get("trace", 1e-12),
            "psd_tol": tolerances.get("psd", 1e-10),
        }
    return BipartiteState(matrix, (int(dims[0]), int(dims[1])), **kwargs)


def sec_unitary_to_json(u: SecUnitary) -> dict:
    return {
        "blocks": {
            fraction_key(energy): _matrix_to_json(mat)
            for energy, mat in u.blocks.items()
        }
    }


def sec_unitary_from_json(data: dict, spectrum: JointSpectrum) -> SecUnitary:
    blocks_json = _require(data, "blocks", "unitary JSON")
    blocks = {
        Fraction(key): _matrix_from_json(value, f"unitary block {key}")
        for key, value in blocks_json.items()
    }
    return SecUnitary(blocks, spectrum)


def transfer_report_to_json(report: TransferReport) -> dict:
    return {
        "target": report.target,
        "total": report.total,
        "diagonal": report.diagonal,
        "coherent": report.coherent,
        "eta": {str(level): value for level, value in sorted(report.eta.items())},
        "per_block_diagonal": {
            fraction_key(energy): value
            for energy, value in sorted(report.per_block_diagonal.items())
        },
        "unit": report.unit,
    }


def optimization_result_to_json(
    result: OptimizationResult, unitary_path: str | None = None
) -> dict:
    payload = {
        "value": result.value,
        "method": result.method,
        "samples": result.samples,
    }
    if unitary_path is not None:
        payload["unitary"] = {"path": unitary_path}
    else:
        payload["unitary"] = sec_unitary_to_json(result.unitary)
    return payload


def flow_classification_to_json(result: FlowClassification) -> dict:
    return {
        "direction": result.direction,
        "failing_blocks": [fraction_key(e) for e in result.failing_blocks],
        "has_useful_coherence": result.has_useful_coherence,
        "witness": None if result.witness is None else sec_unitary_to_json(result.witness),
    }


def two_qubit_params_to_json(params: TwoQubitParams) -> dict:
    return {
        "p00": params.p00,
        "p01": params.p01,
        "p10": params.p10,
        "p11": params.p11,
        "alpha_re": params.alpha.real,
        "alpha_im": params.alpha.imag,
    }


def two_qubit_params_from_json(data: dict) -> TwoQubitParams:
    return TwoQubitParams(
        p00=float(_require(data, "p00", "two-qubit params JSON")),
        p01=float(_require(data, "p01", "two-qubit params JSON")),
        p10=float(_require(data, "p10", "two-qubit params JSON")),
        p11=float(_require(data, "p11", "two-qubit params JSON")),
        alpha=complex(float(data.get("alpha_re", 0.0)), float(data.get("alpha_im", 0.0))),
    )


def load_problem(
    path, tolerances: dict | None = None
) -> tuple[Hamiltonian, Hamiltonian, JointSpectrum, BipartiteState | None]:
    """Read a problem file: both Hamiltonians plus an optional state."""
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    h_a = hamiltonian_from_json(_require(data, "h_a", "problem file"))
    h_b = hamiltonian_from_json(_require(data, "h_b", "problem file"))
    spec = build_joint_spectrum(h_a, h_b)
    state = None
    if data.get("state") is not None:
        state = state_from_json(data["state"], tolerances)
        if state.dims != spec.dims:
            raise ValidationError(
                f"problem file state dims {state.dims} do not match "
                f"Hamiltonian dims {spec.dims}"
            )
    return h_a, h_b, spec, state


def dump_json(payload: dict, path) -> None:
    """Write a report deterministically: sorted keys, indent 2, newline at end."""
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


DECOMP_CSV_HEADER = ["E", "p_E", "probs", "chi_same_energy_max", "chi_cross_energy_max"]


def decomposition_summary_rows(decomp: StateDecomposition) -> list[list[str]]:
    """One CSV row per block: probability, populations, coherence magnitudes."""
    rows = []
    cross_max: dict[Fraction, float] = {}
    for (e1, e2), alpha in decomp.coh_blocks.items():
        if e1 != e2:
            peak = float(np.abs(alpha).max())
            cross_max[e1] = max(cross_max.get(e1, 0.0), peak)
            cross_max[e2] = max(cross_max.get(e2, 0.0), peak)
    useful = decomp.useful_coherence_blocks()
    for energy in sorted(decomp.diag_blocks):
        block = decomp.diag_blocks[energy]
        same = useful.get(energy)
        rows.append(
            [
                fraction_key(energy),
                repr(block.p_E),
                ";".join(repr(float(p)) for p in block.probs),
                repr(float(np.abs(same).max()) if same is not None else 0.0),
                repr(cross_max.get(energy, 0.0)),
            ]
        )
    return rows


def write_decomposition_csv(decomp: StateDecomposition, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(DECOMP_CSV_HEADER)
        writer.writerows(decomposition_summary_rows(decomp))


SCAN_CSV_HEADER = ["c_x", "c_y", "c_z", "max_transfer", "concurrence", "separable"]


def write_plane_scan_csv(scan: PlaneScan, path) -> None:
    """Emit the scan with the fixed, documented column set (header mandatory)."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(SCAN_CSV_HEADER)
        for i in range(len(scan)):
            writer.writerow(
                [
                    repr(float(scan.c_x[i])),
                    repr(float(scan.c_y[i])),
                    repr(float(scan.c_z[i])),
                    repr(float(scan.max_transfer[i])),
                    repr(float(scan.concurrence[i])),
                    "true" if scan.separable[i] else "false",
                ]
            )
