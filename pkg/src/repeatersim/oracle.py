"""Exact-Hamiltonian oracle for the dispersive stages.

Builds the untruncated-physics Hamiltonians of two atoms coupled to one or
two cavity modes in a finite Fock space, propagates exactly, and compares
the cavity-vacuum block of the propagator against the closed-form effective
dynamics.  Starting from the vacuum, the conserved excitation charges keep
every reachable photon number at or below two, so the default cutoff of two
is exact rather than approximate.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dynamics import effective_unitary, qed_pair_unitary
from .errors import CutoffInsufficient, DimensionMismatch
from .linalg import matrix_exponential_small
from .params import SingleModeParams, TwoModeParams

DEFAULT_CUTOFF = 2

# Amplitude on a truncation-boundary state above which the cutoff is deemed
# insufficient.  Cannot trigger at the default cutoff; guards refactors.
_BOUNDARY_TOL = 1e-12

_SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
_SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
_IDENTITY2 = np.eye(2, dtype=complex)

KINDS = ("two_mode", "single_mode")


def _annihilator(cutoff: int) -> np.ndarray:
    a = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for n in range(1, cutoff + 1):
        a[n - 1, n] = np.sqrt(n)
    return a


@dataclass(frozen=True)
class FullSystemBasis:
    """Product basis atom (x) atom (x) mode(s) with finite Fock cutoffs."""

    mode_cutoffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.mode_cutoffs) not in (1, 2) or any(c < 1 for c in self.mode_cutoffs):
            raise DimensionMismatch(f"unsupported mode cutoffs {self.mode_cutoffs}")

    @property
    def atom_count(self) -> int:
        return 2

    @property
    def dimension(self) -> int:
        dim = 4
        for cutoff in self.mode_cutoffs:
            dim *= cutoff + 1
        return dim

    def index(self, atoms: tuple[int, int], photons: tuple[int, ...]) -> int:
        """Flat index of ``|atoms> (x) |photons>`` (atom 0 means excited)."""
        idx = atoms[0] * 2 + atoms[1]
        for cutoff, n in zip(self.mode_cutoffs, photons):
            idx = idx * (cutoff + 1) + n
        return idx

    def vacuum_indices(self) -> np.ndarray:
        """Indices of the four atomic states with every mode empty."""
        zeros = (0,) * len(self.mode_cutoffs)
        return np.array([self.index((a, b), zeros) for a in (0, 1) for b in (0, 1)])

    def boundary_risk_indices(self) -> np.ndarray:
        """States from which one more photon emission would overflow a cutoff.

        These are the states with at least one excited atom and some mode
        already at its cutoff; excitation conservation keeps them strictly
        unpopulated when starting from the vacuum at the default cutoff.
        """
        risky = []
        ranges = [range(c + 1) for c in self.mode_cutoffs]
        for a in (0, 1):
            for b in (0, 1):
                if a == 1 and b == 1:
                    continue  # both atoms ground: nothing left to emit
                for photons in np.ndindex(*[len(r) for r in ranges]):
                    if any(n == c for n, c in zip(photons, self.mode_cutoffs)):
                        risky.append(self.index((a, b), tuple(photons)))
        return np.array(sorted(set(risky)))


@dataclass(frozen=True)
class OracleParams:
    """Laboratory frequencies of one dispersive stage.

    The oracle is deliberately phrased in bare frequencies rather than the
    detunings of the effective descriptions; the conversion happens in
    ``effective_two_mode`` / ``effective_single_mode``.
    """

    kind: str
    omega: float
    omega_prime: float | None
    atom_omegas: tuple[float, float]
    couplings: tuple[float, float]

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "two_mode" and self.omega_prime is None:
            raise ValueError("two_mode oracle needs both mode frequencies")
        if self.kind == "single_mode":
            if self.omega_prime is not None:
                raise ValueError("single_mode oracle takes exactly one mode frequency")
            if self.atom_omegas[0] != self.atom_omegas[1]:
                raise ValueError("single_mode stage assumes equal atomic frequencies")
            if self.couplings[0] != self.couplings[1]:
                raise ValueError("single_mode stage assumes equal couplings")
        # zero coupling is the decoupled limit, useful for oracle checks
        if any(g < 0 for g in self.couplings):
            raise ValueError("couplings must be nonnegative")

    @classmethod
    def two_mode(
        cls,
        omega: float,
        omega_prime: float,
        atom_omegas: tuple[float, float],
        couplings: tuple[float, float],
    ) -> "OracleParams":
        return cls("two_mode", omega, omega_prime, tuple(atom_omegas), tuple(couplings))

    @classmethod
    def single_mode(cls, omega: float, atom_omega: float, coupling: float) -> "OracleParams":
        return cls("single_mode", omega, None, (atom_omega, atom_omega), (coupling, coupling))

    def detunings(self) -> tuple[float, float]:
        """Per-atom detunings of the relevant transition."""
        if self.kind == "two_mode":
            total = self.omega + self.omega_prime
            return (self.atom_omegas[0] - total, self.atom_omegas[1] - total)
        return (self.atom_omegas[0] - self.omega, self.atom_omegas[1] - self.omega)

    def effective_two_mode(self) -> TwoModeParams:
        if self.kind != "two_mode":
            raise ValueError("not a two_mode parameter set")
        d2, d3 = self.detunings()
        return TwoModeParams(self.couplings[0], self.couplings[1], d2, d3)

    def effective_single_mode(self) -> SingleModeParams:
        if self.kind != "single_mode":
            raise ValueError("not a single_mode parameter set")
        return SingleModeParams(self.couplings[0], self.detunings()[0])


def _embed(ops: list[np.ndarray]) -> np.ndarray:
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def _mode_identities(cutoffs: tuple[int, ...]) -> list[np.ndarray]:
    return [np.eye(c + 1, dtype=complex) for c in cutoffs]


def _h0_terms(p: OracleParams, basis: FullSystemBasis) -> np.ndarray:
    cutoffs = basis.mode_cutoffs
    ident_modes = _mode_identities(cutoffs)
    mode_freqs = [p.omega] if p.kind == "single_mode" else [p.omega, p.omega_prime]
    h0 = np.zeros((basis.dimension, basis.dimension), dtype=complex)
    for i, freq in enumerate(p.atom_omegas):
        ops = [_IDENTITY2, _IDENTITY2] + list(ident_modes)
        ops[i] = _SIGMA_Z
        h0 += 0.5 * freq * _embed(ops)
    for m, freq in enumerate(mode_freqs):
        number = np.diag(np.arange(cutoffs[m] + 1)).astype(complex)
        ops = [_IDENTITY2, _IDENTITY2] + list(ident_modes)
        ops[2 + m] = number
        h0 += freq * _embed(ops)
    return h0


def _coupling_terms(p: OracleParams, basis: FullSystemBasis) -> np.ndarray:
    cutoffs = basis.mode_cutoffs
    ident_modes = _mode_identities(cutoffs)
    lowering = [_annihilator(c) for c in cutoffs]
    h1 = np.zeros((basis.dimension, basis.dimension), dtype=complex)
    for i, g in enumerate(p.couplings):
        ops = [_IDENTITY2, _IDENTITY2] + list(ident_modes)
        ops[i] = _SIGMA_PLUS
        for m in range(len(cutoffs)):
            ops[2 + m] = lowering[m]
        term = g * _embed(ops)
        h1 += term + term.conj().T
    return h1


def build_full_hamiltonian(p: OracleParams, cutoffs: tuple[int, ...] | None = None) -> np.ndarray:
    """Full Hamiltonian of the stage in the truncated product basis.

    Parameters
    ----------
    p : OracleParams
        Stage frequencies and couplings.
    cutoffs : tuple of int, optional
        Fock cutoffs per mode; defaults to 2 for each mode, which is exact
        for vacuum-seeded dynamics.

    Returns
    -------
    ndarray
        Hermitian matrix of dimension ``basis.dimension`` (36 for the
        two-mode stage, 12 for the single-mode stage at default cutoffs).
    """
    basis = default_basis(p, cutoffs)
    return _h0_terms(p, basis) + _coupling_terms(p, basis)


def default_basis(p: OracleParams, cutoffs: tuple[int, ...] | None = None) -> FullSystemBasis:
    """The basis matching ``p`` at the given (or default) cutoffs."""
    if cutoffs is None:
        cutoffs = (DEFAULT_CUTOFF,) if p.kind == "single_mode" else (DEFAULT_CUTOFF, DEFAULT_CUTOFF)
    return FullSystemBasis(tuple(cutoffs))


@lru_cache(maxsize=32)
def _diagonalized(p: OracleParams, cutoffs: tuple[int, ...]):
    basis = FullSystemBasis(cutoffs)
    h = build_full_hamiltonian(p, cutoffs)
    h0_diag = np.diag(_h0_terms(p, basis)).real.copy()
    evals, evecs = np.linalg.eigh(h)
    return basis, h0_diag, evals, evecs


def _full_propagator(evals: np.ndarray, evecs: np.ndarray, t: float) -> np.ndarray:
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


@dataclass(frozen=True)
class ReducedState:
    """Vacuum-sector atomic amplitudes of an exactly evolved state."""

    amplitudes: np.ndarray
    leakage: float


def oracle_reduced_propagation(
    p: OracleParams,
    t: float,
    initial_atoms: np.ndarray,
    cutoffs: tuple[int, ...] | None = None,
) -> ReducedState:
    """Evolve ``initial_atoms (x) |vacuum>`` exactly and reduce to the vacuum sector.

    Returns the (unnormalized) atomic amplitudes found with every mode still
    empty, in the laboratory frame, together with the leaked population
    ``1 - |amplitudes|^2``.

    Raises
    ------
    CutoffInsufficient
        If any truncation-boundary state acquires amplitude above 1e-12,
        which cannot happen at the default cutoff.
    """
    initial_atoms = np.asarray(initial_atoms, dtype=complex)
    if initial_atoms.shape != (4,):
        raise DimensionMismatch(f"two-atom state expected, got shape {initial_atoms.shape}")
    basis_cutoffs = default_basis(p, cutoffs).mode_cutoffs
    basis, _, evals, evecs = _diagonalized(p, basis_cutoffs)
    vac = basis.vacuum_indices()
    full = np.zeros(basis.dimension, dtype=complex)
    full[vac] = initial_atoms
    evolved = _full_propagator(evals, evecs, t) @ full
    boundary = float(np.max(np.abs(evolved[basis.boundary_risk_indices()])))
    if boundary > _BOUNDARY_TOL:
        raise CutoffInsufficient(
            f"boundary amplitude {boundary:.3e} at cutoffs {basis.mode_cutoffs}"
        )
    amplitudes = evolved[vac]
    leakage = float(1.0 - np.vdot(amplitudes, amplitudes).real)
    return ReducedState(amplitudes=amplitudes, leakage=leakage)


def reduced_propagator(
    p: OracleParams,
    t: float,
    cutoffs: tuple[int, ...] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Interaction-picture vacuum-block propagator and per-column leakage.

    The 4x4 block is ``exp(+i H0 t) exp(-i H t)`` restricted to the
    vacuum sector, which is the frame the effective propagators live in.
    Column ``j`` of the leakage array is the population that left the
    vacuum sector when starting from atomic basis state ``j``.
    """
    basis_cutoffs = default_basis(p, cutoffs).mode_cutoffs
    basis, h0_diag, evals, evecs = _diagonalized(p, basis_cutoffs)
    vac = basis.vacuum_indices()
    full = _full_propagator(evals, evecs, t)
    rotated = np.exp(1j * h0_diag[vac] * t)[:, None] * full[np.ix_(vac, vac)]
    leakage = 1.0 - np.sum(np.abs(rotated) ** 2, axis=0)
    return rotated, leakage


def _aligned_deviation(reduced: np.ndarray, effective: np.ndarray) -> float:
    # Remove the global phase at the largest-magnitude effective element.
    k = int(np.argmax(np.abs(effective)))
    ref = reduced.flat[k] * np.conj(effective.flat[k])
    phase = ref / abs(ref) if abs(ref) > 0 else 1.0
    return float(np.max(np.abs(reduced / phase - effective)))


def dispersive_deviation(
    p: OracleParams,
    times: np.ndarray,
    cutoffs: tuple[int, ...] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Deviation of the exact vacuum-block propagator from the effective one.

    For each time, compares the interaction-picture reduced propagator with
    ``effective_unitary`` (two-mode stage) or ``qed_pair_unitary``
    (single-mode stage), after removing a global phase at the
    largest-magnitude element.  Returns per-time max-norm deviations and the
    worst per-column vacuum leakage.
    """
    times = np.asarray(times, dtype=float)
    if all(g == 0 for g in p.couplings):
        # decoupled limit: the effective propagator degenerates to identity
        def eff(t: float) -> np.ndarray:
            return np.eye(4, dtype=complex)

    elif p.kind == "two_mode":
        eff_params = p.effective_two_mode()

        def eff(t: float) -> np.ndarray:
            return effective_unitary(eff_params, t)

    else:
        eff_params = p.effective_single_mode()

        def eff(t: float) -> np.ndarray:
            return qed_pair_unitary(eff_params, t)

    deviations = np.empty(times.size)
    leakages = np.empty(times.size)
    for i, t in enumerate(times):
        reduced, leak = reduced_propagator(p, float(t), cutoffs)
        deviations[i] = _aligned_deviation(reduced, eff(float(t)))
        leakages[i] = float(np.max(leak))
    return deviations, leakages


def hamiltonian_propagator(p: OracleParams, t: float, cutoffs: tuple[int, ...] | None = None) -> np.ndarray:
    """Full-space propagator ``exp(-i H t)`` of the stage Hamiltonian."""
    return matrix_exponential_small(build_full_hamiltonian(p, cutoffs), t)
