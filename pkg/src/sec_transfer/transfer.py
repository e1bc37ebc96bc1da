"""Total, diagonal, and coherent average energy transfer.

The transfer of average energy to one side under an energy-conserving
unitary splits exactly into a diagonal part, sourced by the joint-energy
populations alone, and a coherent part, sourced exclusively by the
same-energy coherence blocks.  Both parts are computable block by block:

* diagonal: each block's one-sided populations evolve through the block
  unitary's transition probabilities, and the per-block energy change is
  weighted by the block probability;
* coherent: the block unitary rotates the same-energy coherence block into
  populations; summing the resulting diagonal against the local levels gives
  per-level coefficients ``eta`` whose energy-weighted sum is the coherent
  transfer.  Cross-energy coherences drop out identically.

``transfer_direct`` (dense evolution) is the single source of truth here;
the block-wise paths are validated against it in the test suite rather than
trusted independently.  All transfers are in units of the energy quantum
(set to 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BlockMismatch, NumericalInvariantError
from .spectra import JointSpectrum, check_system
from .states import BipartiteState, StateDecomposition, decompose, local_energy
from .unitaries import SecUnitary, evolve

SPLIT_TOL = 1e-12
ENERGY_UNIT = "hbar*omega"


@dataclass
class TransferReport:
    """Full account of one (state, unitary, target) transfer computation."""

    target: str
    total: float
    diagonal: float
    coherent: float
    eta: dict[int, float]
    per_block_diagonal: dict[Fraction, float]
    unit: str = ENERGY_UNIT


def transfer_direct(state: BipartiteState, u: SecUnitary, target: str) -> float:
    """Energy gained by the target side under dense evolution.

    This is the reference implementation every block-wise path is checked
    against.
    """
    check_system(target)
    spec = u.spectrum
    after = evolve(state, u)
    return local_energy(after, spec, target) - local_energy(state, spec, target)


def _check_same_spectrum(decomp: StateDecomposition, u: SecUnitary) -> JointSpectrum:
    if u.spectrum != decomp.spectrum:
        raise BlockMismatch("unitary and decomposition use different joint spectra")
    return decomp.spectrum


def transfer_diagonal(
    decomp: StateDecomposition, u: SecUnitary, target: str
) -> tuple[float, dict[Fraction, float]]:
    """Population-sourced part of the transfer, with its per-block breakdown.

    Blocks with zero probability contribute exactly zero (their normalized
    one-sided state is undefined, but the unnormalized populations are not).
    """
    check_system(target)
    spec = _check_same_spectrum(decomp, u)
    per_block: dict[Fraction, float] = {}
    total = 0.0
    for block in spec.blocks:
        probs = decomp.diag_blocks[block.energy].probs
        energies = spec.local_energies_float(block.energy, target)
        weights = np.abs(u.blocks[block.energy]) ** 2
        contribution = float(energies @ (weights @ probs - probs))
        per_block[block.energy] = contribution
        total += contribution
    return total, per_block


def transfer_coherent(
    decomp: StateDecomposition, u: SecUnitary, target: str
) -> tuple[float, dict[int, float]]:
    """Coherence-sourced part of the transfer, with the per-level map ``eta``.

    Depends only on the same-energy coherence blocks.  ``eta[k]`` collects,
    over every block that contains local level ``k`` of the target system,
    the population pushed onto that level by rotating the block's coherences;
    the transfer is ``sum_k eta[k] * energy[k]``.
    """
    check_system(target)
    spec = _check_same_spectrum(decomp, u)
    h_target = spec.h_a if target == "A" else spec.h_b
    eta = {k: 0.0 for k in range(h_target.dim)}
    for energy, alpha in decomp.coh_blocks.items():
        if energy[0] != energy[1]:
            continue
        block = spec.block(energy[0])
        mat = u.blocks[block.energy]
        gained = np.einsum("ki,ij,kj->k", mat, alpha, mat.conj()).real
        for member_index, (a, b) in enumerate(block.members):
            level = a if target == "A" else b
            eta[level] += float(gained[member_index])
    energies = h_target.energies_float()
    value = float(sum(eta[k] * energies[k] for k in eta))
    return value, eta


def analyze(
    state: BipartiteState,
    u: SecUnitary,
    target: str,
    split_tol: float = SPLIT_TOL,
) -> TransferReport:
    """Bundle direct, diagonal, and coherent transfers into one report.

    Raises :class:`NumericalInvariantError` if the three quantities fail to
    satisfy ``total = diagonal + coherent`` within ``split_tol``; that bound
    holding is exactly what makes the block-wise paths trustworthy.
    """
    spec = u.spectrum
    decomp = decompose(state, spec)
    total = transfer_direct(state, u, target)
    diagonal, per_block = transfer_diagonal(decomp, u, target)
    coherent, eta = transfer_coherent(decomp, u, target)
    residual = abs(total - diagonal - coherent)
    if residual > split_tol:
        raise NumericalInvariantError(
            f"transfer split violated: |total - diagonal - coherent| = "
            f"{residual:.3e} exceeds {split_tol:g}"
        )
    return TransferReport(
        target=target,
        total=total,
        diagonal=diagonal,
        coherent=coherent,
        eta=eta,
        per_block_diagonal=per_block,
    )


@dataclass
class BatchTransfers:
    """Vectorized transfer components for a stack of sampled unitaries."""

    total: np.ndarray
    diagonal: np.ndarray
    coherent: np.ndarray


def batch_transfers(
    decomp: StateDecomposition,
    block_samples: dict[Fraction, np.ndarray],
    target: str,
) -> BatchTransfers:
    """Evaluate diagonal/coherent/total transfers for a whole sample stack.

    ``block_samples`` maps each block energy to an ``(n, d, d)`` stack as
    produced by :func:`sec_transfer.unitaries.sample_haar_blocks`.  This is
    the fast path behind the Monte-Carlo oracles; it matches the scalar
    routines sample by sample (they are cross-checked in the tests).
    """
    check_system(target)
    spec = decomp.spectrum
    counts = {stack.shape[0] for stack in block_samples.values()}
    if len(counts) != 1:
        raise BlockMismatch("all block sample stacks must have the same length")
    n = counts.pop()
    diagonal = np.zeros(n)
    coherent = np.zeros(n)
    useful = decomp.useful_coherence_blocks()
    for block in spec.blocks:
        stack = block_samples[block.energy]
        if stack.shape[1:] != (block.dim, block.dim):
            raise BlockMismatch(
                f"sample stack for E={block.energy} has shape {stack.shape[1:]}, "
                f"expected {(block.dim, block.dim)}"
            )
        probs = decomp.diag_blocks[block.energy].probs
        energies = spec.local_energies_float(block.energy, target)
        weights = np.abs(stack) ** 2
        diagonal += np.einsum("nki,i,k->n", weights, probs, energies) - float(
            energies @ probs
        )
        alpha = useful.get(block.energy)
        if alpha is not None:
            gained = np.einsum("nki,ij,nkj->nk", stack, alpha, stack.conj()).real
            coherent += gained @ energies
    return BatchTransfers(total=diagonal + coherent, diagonal=diagonal, coherent=coherent)
