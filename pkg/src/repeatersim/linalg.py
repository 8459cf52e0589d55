"""Dense complex linear algebra for small qubit registers.

States are one-dimensional ``complex128`` arrays with the leftmost qubit as
the leftmost tensor factor; the computational basis is ``|e> = (1, 0)`` and
``|g> = (0, 1)``.  Everything in this module is a pure function over its
inputs and safe to call concurrently.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian, ZeroProbabilityBranch

# Squared norm below this marks an impossible measurement branch.
ZERO_BRANCH_THRESHOLD = 1e-14

_HERMITIAN_TOL = 1e-10
_MAX_EXP_DIM = 64


@dataclass(frozen=True)
class OutcomeLabel:
    """Which pair of atoms was measured and what the result was.

    ``measured_pair`` uses the chain numbering of the atoms (for example
    ``(2, 3)`` for the left inner pair, ``(4, 5)`` for the swap pair) and
    ``result`` is the recorded label: a product-basis string such as ``"ge"``
    or a Bell-state name such as ``"phi_plus"``.
    """

    measured_pair: tuple[int, int]
    result: str


@dataclass(frozen=True)
class HeraldedState:
    """A normalized post-measurement state together with its branch weight."""

    state: np.ndarray
    probability: float
    outcome: OutcomeLabel | None = None


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with the left argument as the leftmost factor."""
    return np.kron(np.asarray(a), np.asarray(b))


def basis_index(label: str) -> int:
    """Index of the product-basis state named by a string of e's and g's."""
    index = 0
    for ch in label:
        if ch == "e":
            index = 2 * index
        elif ch == "g":
            index = 2 * index + 1
        else:
            raise ValueError(f"basis label may contain only 'e' and 'g', got {label!r}")
    return index


def basis_state(label: str) -> np.ndarray:
    """Unit vector for the product-basis state named by ``label``."""
    state = np.zeros(2 ** len(label), dtype=complex)
    state[basis_index(label)] = 1.0
    return state


def _qubit_count(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise DimensionMismatch(f"state dimension {dim} is not a power of two")
    return n


def apply_to_qubits(matrix: np.ndarray, state: np.ndarray, positions: tuple[int, ...]) -> np.ndarray:
    """Apply an operator to the given qubit positions of a register state.

    ``positions`` must be strictly increasing, 0-based, and the operator must
    act on exactly ``len(positions)`` qubits.
    """
    state = np.asarray(state, dtype=complex)
    matrix = np.asarray(matrix, dtype=complex)
    n = _qubit_count(state.size)
    k = len(positions)
    if matrix.shape != (2**k, 2**k):
        raise DimensionMismatch(f"operator shape {matrix.shape} does not act on {k} qubits")
    if list(positions) != sorted(set(positions)) or positions[-1] >= n:
        raise DimensionMismatch(f"positions {positions} invalid for {n} qubits")
    tensor = np.moveaxis(state.reshape((2,) * n), positions, range(k))
    flat = tensor.reshape(2**k, -1)
    out = matrix @ flat
    return np.moveaxis(out.reshape((2,) * n), range(k), positions).reshape(-1)


def project(
    state: np.ndarray,
    subsystem_indices: tuple[int, ...],
    target: np.ndarray,
    outcome: OutcomeLabel | None = None,
) -> HeraldedState:
    """Project qubits of ``state`` onto ``target`` and keep the remainder.

    Parameters
    ----------
    state : ndarray
        Register state of ``n`` qubits.
    subsystem_indices : tuple of int
        Strictly increasing 0-based positions of the measured qubits.
    target : ndarray
        Normalized state of the measured qubits (dimension ``2**k``).
    outcome : OutcomeLabel, optional
        Label recorded on the returned branch.

    Returns
    -------
    HeraldedState
        The renormalized residual state on the unmeasured qubits and the
        branch probability ``|<target|state>|^2``.

    Raises
    ------
    ZeroProbabilityBranch
        If the branch probability falls below ``ZERO_BRANCH_THRESHOLD``.
    """
    state = np.asarray(state, dtype=complex)
    target = np.asarray(target, dtype=complex)
    n = _qubit_count(state.size)
    k = len(subsystem_indices)
    if target.size != 2**k:
        raise DimensionMismatch(
            f"target dimension {target.size} does not match {k} measured qubits"
        )
    if list(subsystem_indices) != sorted(set(subsystem_indices)) or subsystem_indices[-1] >= n:
        raise DimensionMismatch(f"subsystem indices {subsystem_indices} invalid for {n} qubits")
    tensor = np.moveaxis(state.reshape((2,) * n), subsystem_indices, range(k))
    residual = np.tensordot(
        target.conj().reshape((2,) * k), tensor, axes=(tuple(range(k)), tuple(range(k)))
    ).reshape(-1)
    probability = float(np.vdot(residual, residual).real)
    if probability < ZERO_BRANCH_THRESHOLD:
        raise ZeroProbabilityBranch(
            f"branch probability {probability:.3e} below {ZERO_BRANCH_THRESHOLD:.0e}"
        )
    return HeraldedState(residual / np.sqrt(probability), probability, outcome)


def concurrence_pure(state: np.ndarray) -> float:
    """Concurrence of a normalized pure two-qubit state.

    For amplitudes ``(a, b, c, d)`` on ``|ee>, |eg>, |ge>, |gg>`` this is
    ``2 |a d - b c|``.
    """
    state = np.asarray(state, dtype=complex)
    if state.shape != (4,):
        raise DimensionMismatch(f"two-qubit state expected, got shape {state.shape}")
    a, b, c, d = state
    return min(1.0, 2.0 * abs(a * d - b * c))


def matrix_exponential_small(h: np.ndarray, t: float) -> np.ndarray:
    """Propagator ``exp(-i h t)`` of a small Hermitian matrix.

    Uses an eigendecomposition, so the result is unitary to machine
    precision.  Intended for the dense Hamiltonians used here (dimension at
    most 64).
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"square matrix expected, got shape {h.shape}")
    if h.shape[0] > _MAX_EXP_DIM:
        raise DimensionMismatch(f"dimension {h.shape[0]} exceeds limit {_MAX_EXP_DIM}")
    deviation = float(np.max(np.abs(h - h.conj().T)))
    if deviation > _HERMITIAN_TOL:
        raise NotHermitian(f"max |h - h^dagger| = {deviation:.3e}")
    evals, evecs = np.linalg.eigh((h + h.conj().T) / 2.0)
    phases = np.exp(-1j * evals * t)
    return (evecs * phases) @ evecs.conj().T
