"""End-to-end bidirectional teleportation pipeline.

Two parties each teleport one qubit to the other across a shared 4-qubit
resource (two Bell pairs handed out by a third party): Alice holds her
input a and channel qubits (1, 3), Bob holds (2, 4) and his input b. Alice
Bell-measures the pair (a, 1), which lands her state on qubit 2; Bob
measures (4, b), landing his state on qubit 3. Each party then applies a
weak measurement followed by the Pauli fixed by the outcome the partner
announces.

Four noise scenarios are modeled: damping on the two recovery qubits or on
all four channel qubits, each either protected (no-decay post-selection at
distribution plus weak-measurement correction) or left bare with the full
damping channel applied and no correction.

Branch enumeration is exhaustive and deterministic; all 16 Bell outcome
combinations are computed exactly, never sampled.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from .channels import (
    DEGENERATE_TOL,
    AdcParams,
    DegenerateBranchError,
    KrausSet,
    WeakMeasurementParams,
    WeakVariant,
    adc_kraus,
    eam_postselect,
    apply_channel,
    weak_measurement_op,
)
from .linalg import CNOT, HADAMARD, I2, SX, SZ, DensityMatrix, Ket, embed_op, kron

__all__ = [
    "QubitInput",
    "Scenario",
    "BranchOutcome",
    "ProtocolResult",
    "prepare_channel",
    "distribute",
    "compose_total",
    "bell_projectors",
    "correction_ops",
    "apply_correction",
    "enumerate_branches",
    "run_protocol",
]


@dataclass(frozen=True)
class QubitInput:
    """Single-qubit input parameterized as (population of |0>, phase).

    The ket is [sqrt(pop0), sqrt(1-pop0) e^{i phase}], so normalization
    holds by construction for any pop0 in [0, 1].
    """

    pop0: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.pop0 <= 1.0:
            raise ValueError(f"pop0={self.pop0!r} outside [0, 1]")

    def ket(self) -> Ket:
        a0 = math.sqrt(self.pop0)
        a1 = math.sqrt(1.0 - self.pop0) * cmath.exp(1j * self.phase)
        return Ket(np.array([a0, a1], dtype=complex))

    def density(self) -> DensityMatrix:
        return self.ket().density()


class Scenario(Enum):
    """Noise placement and protection variant.

    Values double as the CLI spellings.
    """

    RECOVERY_ADC = "recovery-adc"
    ALL_ADC = "all-adc"
    UNPROTECTED_RECOVERY = "unprotected-recovery"
    UNPROTECTED_ALL = "unprotected-all"

    @property
    def protected(self) -> bool:
        return self in (Scenario.RECOVERY_ADC, Scenario.ALL_ADC)

    @property
    def weak_variant(self) -> WeakVariant:
        if self in (Scenario.RECOVERY_ADC, Scenario.UNPROTECTED_RECOVERY):
            return WeakVariant.SQRT_DIAG
        return WeakVariant.LINEAR_DIAG

    @property
    def noisy_qubits(self) -> tuple[int, ...]:
        """Channel qubit indices (0-based within the 4-qubit resource)."""
        if self in (Scenario.RECOVERY_ADC, Scenario.UNPROTECTED_RECOVERY):
            return (1, 2)
        return (0, 1, 2, 3)


@dataclass
class BranchOutcome:
    """One of the 16 joint Bell-measurement branches.

    `recovered` is the projected, traced, unnormalized 2-qubit state on
    qubits (2, 3); its trace is joint_prob. `corrected` is the normalized
    output after the weak measurement and Pauli pair, or None when the
    branch weight was annihilated (degenerate=True). success_weight is the
    trace of the uncorrected-normalization product M rho M^dag.
    """

    alice_index: int
    bob_index: int
    joint_prob: float
    recovered: DensityMatrix
    corrected: Optional[DensityMatrix]
    success_weight: float
    branch_fidelity: Optional[float]
    degenerate: bool = False


@dataclass
class ProtocolResult:
    """Full protocol output at one parameter point.

    total_fidelity weights branch fidelities by the Bell outcome
    probabilities; postselected_fidelity is the diagnostic alternative
    weighted by success_weight / total_success instead. Both are NaN when
    every branch is degenerate.
    """

    scenario: Scenario
    p: float
    q_w: float
    eam_success: float
    branches: tuple
    total_success: float
    total_fidelity: float
    postselected_fidelity: float


# Bell kets in the fixed order (|00>+|11>, |00>-|11>, |01>+|10>, |01>-|10>)/sqrt(2).
_BELL_KETS = np.array(
    [
        [1.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, -1.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 1.0, -1.0, 0.0],
    ],
    dtype=complex,
) / math.sqrt(2.0)

# Outcome index (1-based) -> correction unitary.
_CORR_UNITARIES = (I2, SZ, SX, SX @ SZ)


def _branch_contractions() -> np.ndarray:
    """Stack of the 16 rank-4 projection maps <bell_i|_(a,1) (x) I4 (x) <bell_j|_(4,b).

    Row block 4k..4k+3 (k = 4(i-1)+(j-1)) maps the 6-qubit register to the
    kept (2, 3) pair for branch (i, j).
    """
    eye4 = np.eye(4, dtype=complex)
    blocks = []
    for bi in _BELL_KETS:
        for bj in _BELL_KETS:
            blocks.append(np.kron(bi.conj().reshape(1, 4), np.kron(eye4, bj.conj().reshape(1, 4))))
    return np.vstack(blocks)


_PROJ_STACK = _branch_contractions()


def prepare_channel() -> DensityMatrix:
    """4-qubit resource state: two Bell pairs on (1,2) and (3,4).

    Built the circuit way (H on the first qubit of each pair, then a CNOT
    onto the second) rather than from the amplitude pattern, so tests can
    validate one construction against the other.
    """
    ket = np.zeros(16, dtype=complex)
    ket[0] = 1.0
    for gate, targets in ((HADAMARD, [0]), (CNOT, [0, 1]), (HADAMARD, [2]), (CNOT, [2, 3])):
        ket = embed_op(gate, targets, 4) @ ket
    return Ket(ket).density()


@lru_cache(maxsize=1024)
def _lifted_kraus(noisy: tuple, p: float, no_decay_only: bool) -> tuple:
    """4-qubit lifts of the damping Kraus operators on the given qubits.

    Cached because sweeps and quadratures revisit the same p many times;
    callers only ever multiply with the returned matrices.
    """
    k0, k1 = adc_kraus(AdcParams(p)).operators
    combos = ((0,) * len(noisy),) if no_decay_only else tuple(np.ndindex(*(2,) * len(noisy)))
    ops = []
    for combo in combos:
        lift = np.eye(16, dtype=complex)
        for q, which in zip(noisy, combo):
            lift = embed_op(k1 if which else k0, [q], 4) @ lift
        ops.append(lift)
    return tuple(ops)


def distribute(channel: DensityMatrix, scenario: Scenario, p: float) -> tuple[DensityMatrix, float]:
    """Send the resource through the damping noise of the given scenario.

    Protected scenarios post-select the no-decay branch and return the
    renormalized state together with the post-selection probability.
    Unprotected scenarios apply the complete Kraus sum over all decay
    combinations (4 terms for recovery-qubit noise, 16 for all-qubit) and
    report success 1.
    """
    if channel.dim != 16:
        raise ValueError("distribute expects the 4-qubit resource state")
    noisy = scenario.noisy_qubits
    if scenario.protected:
        (lift,) = _lifted_kraus(noisy, p, True)
        return eam_postselect(channel, lift)
    ops = _lifted_kraus(noisy, p, False)
    out = apply_channel(channel, KrausSet(16, ops))
    return out, 1.0


def compose_total(alice_in: QubitInput, channel: DensityMatrix, bob_in: QubitInput) -> DensityMatrix:
    """Assemble the 6-qubit state in order (a, 1, 2, 3, 4, b)."""
    if channel.dim != 16:
        raise ValueError("compose_total expects a 4-qubit channel state")
    total = kron(alice_in.density().mat, kron(channel.mat, bob_in.density().mat))
    return DensityMatrix(total, channel.normalized)


def bell_projectors() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four rank-1 Bell projectors, summing to the 2-qubit identity."""
    return tuple(np.outer(v, v.conj()) for v in _BELL_KETS)


def correction_ops(
    i: int, j: int, q_w: float, variant: WeakVariant
) -> tuple[np.ndarray, np.ndarray]:
    """Correction pair for outcome labels (i, j), each 1..4.

    M = U . m_w: the weak measurement acts first, then the Pauli
    (index 1 -> I, 2 -> Z, 3 -> X, 4 -> XZ). M_A targets qubit 3 and
    carries index i; M_B targets qubit 2 and carries index j.
    """
    if not (1 <= i <= 4 and 1 <= j <= 4):
        raise ValueError(f"outcome indices must be in 1..4, got ({i}, {j})")
    mw = weak_measurement_op(WeakMeasurementParams(q_w, variant))
    return _CORR_UNITARIES[i - 1] @ mw, _CORR_UNITARIES[j - 1] @ mw


def apply_correction(
    recovered: DensityMatrix, M_A: np.ndarray, M_B: np.ndarray
) -> tuple[DensityMatrix, float]:
    """Apply the local correction pair to an unnormalized (2, 3) pair state.

    M_B acts on the first kept qubit (qubit 2), M_A on the second (qubit
    3). Returns the normalized output and the branch success weight
    tr(M rho M^dag), which absorbs the probability prefactor because
    `recovered` is unnormalized. Raises DegenerateBranchError when the
    weight is numerically zero.
    """
    if recovered.trace() <= DEGENERATE_TOL:
        raise DegenerateBranchError("recovered state has numerically zero weight")
    M = kron(M_B, M_A)
    out = M @ recovered.mat @ M.conj().T
    weight = float(np.trace(out).real)
    if weight < DEGENERATE_TOL:
        raise DegenerateBranchError(f"correction annihilated the branch (weight {weight:g})")
    return DensityMatrix(out / weight), weight


def enumerate_branches(
    total: DensityMatrix,
    scenario: Scenario,
    p: float,
    q_w: float,
    alice_in: Optional[QubitInput] = None,
    bob_in: Optional[QubitInput] = None,
) -> tuple:
    """All 16 Bell outcome branches of the 6-qubit state.

    Branch (i, j) projects qubits (a, 1) onto Bell state i and (4, b) onto
    Bell state j, traces the measured qubits out, and corrects the kept
    (2, 3) pair. Alice's outcome i fixes the Pauli on qubit 2 and Bob's
    outcome j the one on qubit 3 (each party hears the partner's result
    over the classical channel), so the correction pair is looked up with
    the labels swapped.

    When the input states are provided, branch fidelities against their
    product are filled in; otherwise they are left None.
    """
    if total.dim != 64:
        raise ValueError("enumerate_branches expects the 6-qubit composed state")
    if not scenario.protected and q_w != 0.0:
        raise ValueError("unprotected scenarios require q_w = 0")
    reference = None
    if alice_in is not None and bob_in is not None:
        reference = kron(alice_in.density().mat, bob_in.density().mat)
    # One matmul gives every branch: block (k, k) of S rho S^dag is the
    # projected (2, 3) state for branch k = 4(i-1)+(j-1).
    blocks = _PROJ_STACK @ total.mat @ _PROJ_STACK.conj().T
    outcomes = []
    for i in range(1, 5):
        for j in range(1, 5):
            k = 4 * (i - 1) + (j - 1)
            rec = np.ascontiguousarray(blocks[4 * k : 4 * k + 4, 4 * k : 4 * k + 4])
            recovered = DensityMatrix(rec, normalized=False)
            joint_prob = recovered.trace()
            M_A, M_B = correction_ops(j, i, q_w, scenario.weak_variant)
            try:
                corrected, weight = apply_correction(recovered, M_A, M_B)
                degenerate = False
            except DegenerateBranchError:
                corrected, weight, degenerate = None, 0.0, True
            fid = None
            if reference is not None and corrected is not None:
                fid = float(np.trace(reference @ corrected.mat).real)
            outcomes.append(
                BranchOutcome(
                    alice_index=i,
                    bob_index=j,
                    joint_prob=joint_prob,
                    recovered=recovered,
                    corrected=corrected,
                    success_weight=weight,
                    branch_fidelity=fid,
                    degenerate=degenerate,
                )
            )
    return tuple(outcomes)


def run_protocol(
    scenario: Scenario,
    p: float,
    q_w: float,
    alice_in: QubitInput,
    bob_in: QubitInput,
) -> ProtocolResult:
    """Distribute, compose, measure and correct at one parameter point."""
    if not scenario.protected and q_w != 0.0:
        raise ValueError("unprotected scenarios require q_w = 0")
    dist, eam_success = distribute(prepare_channel(), scenario, p)
    total = compose_total(alice_in, dist, bob_in)
    branches = enumerate_branches(total, scenario, p, q_w, alice_in, bob_in)
    total_success = float(sum(b.success_weight for b in branches))
    live = [b for b in branches if not b.degenerate]
    if live:
        total_fidelity = float(sum(b.joint_prob * b.branch_fidelity for b in live))
    else:
        total_fidelity = float("nan")
    if live and total_success > DEGENERATE_TOL:
        postselected = float(
            sum(b.success_weight * b.branch_fidelity for b in live) / total_success
        )
    else:
        postselected = float("nan")
    return ProtocolResult(
        scenario=scenario,
        p=p,
        q_w=q_w,
        eam_success=eam_success,
        branches=branches,
        total_success=total_success,
        total_fidelity=total_fidelity,
        postselected_fidelity=postselected,
    )
