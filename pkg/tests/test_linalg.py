import math

import numpy as np
import pytest

from repeatersim.errors import DimensionMismatch, NotHermitian, ZeroProbabilityBranch
from repeatersim.linalg import (
    apply_to_qubits,
    basis_index,
    basis_state,
    concurrence_pure,
    kron,
    matrix_exponential_small,
    project,
)

rng = np.random.default_rng(1001)

I2 = np.eye(2, dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def random_state(dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_hermitian(dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2.0


def test_basis_state_round_trip():
    for label in ("ee", "eg", "ge", "gg"):
        v = basis_state(label)
        assert v.shape == (4,)
        assert v[basis_index(label)] == 1.0
        assert np.sum(np.abs(v)) == 1.0


def test_basis_ordering():
    # |e> is the first basis vector, leftmost atom is the leftmost factor
    assert basis_index("ee") == 0
    assert basis_index("eg") == 1
    assert basis_index("ge") == 2
    assert basis_index("gg") == 3


def test_kron_identity():
    assert np.array_equal(kron(I2, I2), np.eye(4))


def test_kron_raising_on_first_qubit():
    out = kron(SIGMA_PLUS, I2) @ basis_state("ge")
    assert np.allclose(out, basis_state("ee"))


def test_kron_mixed_product_property():
    for _ in range(20):
        a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        lhs = kron(a, b) @ kron(c, d)
        rhs = kron(a @ c, b @ d)
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_apply_to_qubits_matches_full_matrix():
    u = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0]
    psi = random_state(16)
    got = apply_to_qubits(u, psi, (1, 2))
    full = kron(kron(I2, u), I2)
    assert np.max(np.abs(got - full @ psi)) < 1e-12


def test_apply_to_qubits_preserves_norm():
    u = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0]
    for _ in range(20):
        psi = random_state(16)
        assert abs(np.linalg.norm(apply_to_qubits(u, psi, (0, 3))) - 1.0) < 1e-12


def test_project_symmetric_branch():
    psi = (basis_state("eg") + basis_state("ge")) / math.sqrt(2.0)
    res = project(psi, (0,), np.array([1.0, 0.0], dtype=complex))
    assert abs(res.probability - 0.5) < 1e-12
    assert np.allclose(res.state, [0.0, 1.0])


def test_project_orthogonal_raises():
    psi = kron(basis_state("ee"), np.array([1.0, 0.0], dtype=complex))
    with pytest.raises(ZeroProbabilityBranch):
        project(psi, (0, 1), basis_state("gg"))


def test_project_bad_indices():
    psi = random_state(8)
    with pytest.raises(DimensionMismatch):
        project(psi, (0, 3), basis_state("ee"))
    with pytest.raises(DimensionMismatch):
        project(psi, (0,), basis_state("ee"))


def test_project_exhaustive_outcomes_sum_to_one():
    # complete orthonormal outcome set on any subsystem carries all the weight
    for _ in range(25):
        psi = random_state(16)
        total = 0.0
        for label in ("ee", "eg", "ge", "gg"):
            try:
                total += project(psi, (1, 2), basis_state(label)).probability
            except ZeroProbabilityBranch:
                pass
        assert abs(total - 1.0) < 1e-10


def test_project_residual_is_normalized():
    for _ in range(25):
        psi = random_state(16)
        res = project(psi, (0, 2), basis_state("eg"))
        assert abs(np.linalg.norm(res.state) - 1.0) < 1e-12
        assert 0.0 <= res.probability <= 1.0


def test_concurrence_bell_state():
    bell = (basis_state("ee") + basis_state("gg")) / math.sqrt(2.0)
    assert abs(concurrence_pure(bell) - 1.0) < 1e-12


def test_concurrence_product_state():
    assert concurrence_pure(basis_state("eg")) == 0.0


def test_concurrence_two_amplitude_form():
    # a|eg> + b|ge> normalized has concurrence 2|ab|/(|a|^2+|b|^2)
    for _ in range(50):
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        n = math.hypot(abs(a), abs(b))
        state = np.array([0.0, a, b, 0.0]) / n
        want = 2.0 * abs(a) * abs(b) / (abs(a) ** 2 + abs(b) ** 2)
        assert abs(concurrence_pure(state) - want) < 1e-12


def test_concurrence_bounds_fuzz():
    for _ in range(200):
        c = concurrence_pure(random_state(4))
        assert 0.0 <= c <= 1.0


def test_concurrence_phase_invariance():
    for _ in range(50):
        psi = random_state(4)
        theta = rng.uniform(0.0, 2.0 * np.pi)
        assert abs(concurrence_pure(np.exp(1j * theta) * psi) - concurrence_pure(psi)) < 1e-12


def test_concurrence_needs_two_qubits():
    with pytest.raises(DimensionMismatch):
        concurrence_pure(random_state(8))


def test_expm_zero_time_is_identity():
    h = random_hermitian(6)
    assert np.max(np.abs(matrix_exponential_small(h, 0.0) - np.eye(6))) < 1e-12


def test_expm_pauli_rotation():
    t = 0.7318
    u = matrix_exponential_small(SIGMA_X, t)
    want = math.cos(t) * I2 - 1j * math.sin(t) * SIGMA_X
    assert np.max(np.abs(u - want)) < 1e-12


def test_expm_semigroup():
    for _ in range(10):
        h = random_hermitian(8)
        t, s = rng.uniform(0.0, 2.0, size=2)
        lhs = matrix_exponential_small(h, t) @ matrix_exponential_small(h, s)
        rhs = matrix_exponential_small(h, t + s)
        assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_expm_unitary():
    for dim in (2, 5, 12, 36):
        u = matrix_exponential_small(random_hermitian(dim), 1.3)
        assert np.max(np.abs(u @ u.conj().T - np.eye(dim))) < 1e-10


def test_expm_rejects_non_hermitian():
    m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(NotHermitian):
        matrix_exponential_small(m, 1.0)


def test_expm_rejects_large_dimension():
    with pytest.raises(DimensionMismatch):
        matrix_exponential_small(np.eye(65, dtype=complex), 1.0)
