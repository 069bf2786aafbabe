"""Amplitude damping channel primitives.

Kraus operators for single-qubit amplitude damping, channel application by
Kraus sum, post-selection on the no-decay branch (measuring the channel
environment and keeping the outcome tied to the invertible operator), and
the two diagonal weak-measurement operator families used to undo the
damping bias.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import DensityMatrix

__all__ = [
    "DegenerateBranchError",
    "DEGENERATE_TOL",
    "AdcParams",
    "KrausSet",
    "WeakVariant",
    "WeakMeasurementParams",
    "adc_kraus",
    "apply_channel",
    "eam_postselect",
    "weak_measurement_op",
]

# Post-selection weights at or below this are treated as annihilated.
DEGENERATE_TOL = 1e-14


class DegenerateBranchError(ValueError):
    """A measurement branch was annihilated (weight below DEGENERATE_TOL)."""


@dataclass(frozen=True)
class AdcParams:
    """Decay probability p of the damping channel, p in [0, 1]."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"decay probability p={self.p!r} outside [0, 1]")


@dataclass(frozen=True)
class KrausSet:
    """Ordered Kraus operators of one channel."""

    dim: int
    operators: tuple

    def assert_complete(self, tol: float = 1e-12) -> None:
        """Check sum_k K_k^dag K_k = I within tol."""
        acc = np.zeros((self.dim, self.dim), dtype=complex)
        for k in self.operators:
            acc += k.conj().T @ k
        err = float(np.max(np.abs(acc - np.eye(self.dim))))
        if err > tol:
            raise ValueError(f"Kraus completeness violated by {err:g}")


class WeakVariant(Enum):
    """Which diagonal weak-measurement family to use.

    SQRT_DIAG pairs with damping on the two recovery qubits, LINEAR_DIAG
    with damping on all four channel qubits.
    """

    SQRT_DIAG = "sqrt"
    LINEAR_DIAG = "linear"


@dataclass(frozen=True)
class WeakMeasurementParams:
    """Strength q_w in [0, 1] plus the operator family."""

    q_w: float
    variant: WeakVariant

    def __post_init__(self) -> None:
        if not 0.0 <= self.q_w <= 1.0:
            raise ValueError(f"weak measurement strength q_w={self.q_w!r} outside [0, 1]")


def adc_kraus(params: AdcParams) -> KrausSet:
    """Single-qubit amplitude damping Kraus pair.

    k0 = diag(1, sqrt(1-p)) keeps the populations, k1 moves |1> to |0>
    with probability p. Completeness k0^dag k0 + k1^dag k1 = I holds
    exactly in exact arithmetic.
    """
    p = params.p
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - p)]], dtype=complex)
    k1 = np.array([[0.0, math.sqrt(p)], [0.0, 0.0]], dtype=complex)
    return KrausSet(2, (k0, k1))


def apply_channel(rho: DensityMatrix, kraus: KrausSet) -> DensityMatrix:
    """Apply the full Kraus sum rho -> sum_k K rho K^dag."""
    if rho.dim != kraus.dim:
        raise ValueError(f"state dim {rho.dim} does not match channel dim {kraus.dim}")
    out = np.zeros_like(rho.mat)
    for k in kraus.operators:
        out += k @ rho.mat @ k.conj().T
    return DensityMatrix(out, rho.normalized)


def eam_postselect(rho: DensityMatrix, k0_lifted: np.ndarray) -> tuple[DensityMatrix, float]:
    """Keep only the no-decay branch of the environment measurement.

    Returns the renormalized state K0 rho K0^dag / tr and the success
    probability tr(K0 rho K0^dag). The discarded decay branch carries the
    remaining 1 - success probability; it is never reconstructed as a
    state, only accounted for.
    """
    if k0_lifted.shape != (rho.dim, rho.dim):
        raise ValueError(
            f"lifted operator shape {k0_lifted.shape} does not match state dim {rho.dim}"
        )
    kept = k0_lifted @ rho.mat @ k0_lifted.conj().T
    prob = float(np.trace(kept).real)
    if prob < DEGENERATE_TOL:
        raise DegenerateBranchError(f"post-selection weight {prob:g} is numerically zero")
    return DensityMatrix(kept / prob), prob


def weak_measurement_op(params: WeakMeasurementParams) -> np.ndarray:
    """Retained weak-measurement operator for the given family.

    SQRT_DIAG gives diag(sqrt(1-q_w), 1), LINEAR_DIAG gives diag(1-q_w, 1).
    Only the retained outcome is returned; the complementary operator shows
    up solely as the discarded probability in branch bookkeeping.
    """
    q = params.q_w
    if params.variant is WeakVariant.SQRT_DIAG:
        top = math.sqrt(1.0 - q)
    else:
        top = 1.0 - q
    return np.array([[top, 0.0], [0.0, 1.0]], dtype=complex)
