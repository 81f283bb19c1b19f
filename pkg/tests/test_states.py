"""Tests for labeled states, partial traces, and entropy functionals."""

import math

import numpy as np
import pytest

from helpers import TWO_QUBITS, bell_pair, density_from_vec, random_density
from spinstar import (
    DensityMatrix,
    DimsSpec,
    PureState,
    SpinStarParams,
    build_initial_state,
    conditional_mutual_information,
    mutual_information,
    partial_trace,
    von_neumann_entropy,
)
from spinstar.model import branch_vectors


def test_dims_spec_accessors():
    dims = DimsSpec(("A", 2), ("B", 2), ("E", 4))
    assert dims.labels == ("A", "B", "E")
    assert dims.dims == (2, 2, 4)
    assert dims.total_dim == 16
    assert dims.dim_of("E") == 4
    assert dims.position("B") == 1
    assert len(dims) == 3


def test_dims_spec_equality_and_hash():
    a = DimsSpec(("A", 2), ("B", 3))
    b = DimsSpec(("A", 2), ("B", 3))
    c = DimsSpec(("B", 3), ("A", 2))
    assert a == b and hash(a) == hash(b)
    assert a != c


def test_dims_spec_rejects_duplicates_and_bad_dims():
    with pytest.raises(ValueError, match="duplicate"):
        DimsSpec(("A", 2), ("A", 3))
    with pytest.raises(ValueError):
        DimsSpec(("A", 0))
    with pytest.raises(ValueError):
        DimsSpec()
    with pytest.raises(ValueError, match="unknown"):
        DimsSpec(("A", 2)).position("Z")


def test_density_matrix_accepts_bell_projector():
    rho = density_from_vec(bell_pair(), TWO_QUBITS)
    assert rho.dim == 4
    assert abs(np.trace(rho.mat) - 1.0) <= 1e-15


def test_density_matrix_is_readonly():
    rho = density_from_vec(bell_pair(), TWO_QUBITS)
    with pytest.raises(ValueError):
        rho.mat[0, 0] = 1.0


def test_density_matrix_rejects_bad_inputs():
    dims = DimsSpec(("A", 2))
    with pytest.raises(ValueError, match="Hermitian"):
        DensityMatrix(np.array([[0.5, 1.0], [0.0, 0.5]]), dims)
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix(np.diag([0.9, 0.9]), dims)
    with pytest.raises(ValueError, match="semidefinite"):
        DensityMatrix(np.diag([1.5, -0.5]), dims)
    with pytest.raises(ValueError, match="square"):
        DensityMatrix(np.ones((2, 3)), dims)
    with pytest.raises(ValueError, match="dimension"):
        DensityMatrix(np.eye(4) / 4.0, dims)
    with pytest.raises(ValueError, match="finite"):
        DensityMatrix(np.diag([np.nan, 1.0]), dims)


def test_pure_state_validation():
    dims = DimsSpec(("A", 2), ("B", 2))
    psi = PureState(bell_pair(), dims)
    assert psi.vec.size == 4
    with pytest.raises(ValueError, match="norm"):
        PureState(np.array([1.0, 1.0, 0.0, 0.0]), dims)
    with pytest.raises(ValueError, match="length"):
        PureState(np.array([1.0, 0.0]), dims)


def test_to_density_matches_outer_product():
    psi = PureState(bell_pair(), TWO_QUBITS)
    rho = psi.to_density()
    assert np.allclose(rho.mat, np.outer(psi.vec, psi.vec.conj()), atol=1e-15)
    assert rho.dims == psi.dims


def test_partial_trace_bell_gives_maximally_mixed():
    rho = density_from_vec(bell_pair(), TWO_QUBITS)
    reduced = partial_trace(rho, ("A",))
    assert np.allclose(reduced.mat, np.eye(2) / 2.0, atol=1e-15)


def test_partial_trace_of_flagged_mixture_deletes_blocks():
    """Orthonormal bath flags force the reduced pair state into a branch mixture."""
    params = SpinStarParams(p=0.3, alpha=0.5, beta=1.1)
    rho = build_initial_state(params)
    reduced = partial_trace(rho, ("A", "B"))
    psi1, psi2 = branch_vectors(params.alpha, params.beta)
    expected = 0.3 * np.outer(psi1, psi1.conj()) + 0.7 * np.outer(psi2, psi2.conj())
    assert np.max(np.abs(reduced.mat - expected)) <= 1e-15
    assert abs(np.trace(reduced.mat) - 1.0) <= 1e-12


def test_partial_trace_product_state():
    rng = np.random.default_rng(0)
    rho_a = random_density(rng, DimsSpec(("A", 2)))
    rho_b = random_density(rng, DimsSpec(("B", 3)))
    joint = DensityMatrix(np.kron(rho_a.mat, rho_b.mat), DimsSpec(("A", 2), ("B", 3)))
    reduced = partial_trace(joint, ("B",))
    assert np.max(np.abs(reduced.mat - rho_b.mat)) <= 1e-12


def test_partial_trace_keeps_input_order():
    rng = np.random.default_rng(1)
    rho = random_density(rng, DimsSpec(("A", 2), ("B", 2), ("E", 3)))
    kept = partial_trace(rho, ("E", "A"))
    assert kept.dims.labels == ("A", "E")


def test_partial_trace_composition():
    # tracing one factor at a time agrees with tracing both at once
    rng = np.random.default_rng(2)
    rho = random_density(rng, DimsSpec(("A", 2), ("B", 2), ("E", 4)))
    two_step = partial_trace(partial_trace(rho, ("A", "B")), ("A",))
    one_step = partial_trace(rho, ("A",))
    assert np.max(np.abs(two_step.mat - one_step.mat)) <= 1e-12


def test_partial_trace_rejects_unknown_label():
    rho = density_from_vec(bell_pair(), TWO_QUBITS)
    with pytest.raises(ValueError, match="unknown"):
        partial_trace(rho, ("Z",))
    with pytest.raises(ValueError):
        partial_trace(rho, ())


def test_entropy_pure_state_is_zero():
    rho = density_from_vec(bell_pair(), TWO_QUBITS)
    assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)


def test_entropy_maximally_mixed_qubit():
    rho = DensityMatrix(np.eye(2) / 2.0, DimsSpec(("A", 2)))
    assert von_neumann_entropy(rho, base=2) == pytest.approx(1.0, abs=1e-14)


def test_entropy_classical_coin():
    rho = DensityMatrix(np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex), DimsSpec(("E", 4)))
    assert von_neumann_entropy(rho, base=2) == pytest.approx(1.0, abs=1e-14)


def test_entropy_base_handling():
    rho = DensityMatrix(np.eye(2) / 2.0, DimsSpec(("A", 2)))
    assert von_neumann_entropy(rho, base=math.e) == pytest.approx(math.log(2.0), abs=1e-14)
    assert von_neumann_entropy(rho, base=10) == pytest.approx(math.log10(2.0), abs=1e-14)
    with pytest.raises(ValueError, match="base"):
        von_neumann_entropy(rho, base=3)


def test_mutual_information_product_state():
    rng = np.random.default_rng(3)
    rho_a = random_density(rng, DimsSpec(("A", 2)))
    rho_b = random_density(rng, DimsSpec(("B", 2)))
    joint = DensityMatrix(np.kron(rho_a.mat, rho_b.mat), TWO_QUBITS)
    mi = mutual_information(joint, (("A",), ("B",)), base=2)
    assert mi == pytest.approx(0.0, abs=1e-10)


def test_mutual_information_bell_state():
    rho = density_from_vec(bell_pair(), TWO_QUBITS)
    assert mutual_information(rho, (("A",), ("B",)), base=2) == pytest.approx(2.0, abs=1e-12)


def test_mutual_information_equal_bell_mixture():
    """The default initial pair state is an even mix of two orthogonal Bell
    states, so S(A) = S(B) = S(AB) = 1 bit and the mutual information is 1."""
    rho = build_initial_state(SpinStarParams())
    pair = partial_trace(rho, ("A", "B"))
    assert mutual_information(pair, (("A",), ("B",)), base=2) == pytest.approx(1.0, abs=1e-12)


def test_mutual_information_rejects_bad_cuts():
    rho = density_from_vec(bell_pair(), TWO_QUBITS)
    with pytest.raises(ValueError, match="overlap"):
        mutual_information(rho, (("A", "B"), ("B",)))
    env = np.zeros((3, 3), dtype=complex)
    env[0, 0] = 1.0
    joint = DensityMatrix(np.kron(rho.mat, env), DimsSpec(("A", 2), ("B", 2), ("E", 3)))
    with pytest.raises(ValueError, match="partition"):
        mutual_information(joint, (("A",), ("B",)))


def test_cmi_decoupled_environment():
    rng = np.random.default_rng(4)
    pair = random_density(rng, TWO_QUBITS)
    env = random_density(rng, DimsSpec(("E", 3)))
    joint = DensityMatrix(np.kron(pair.mat, env.mat), DimsSpec(("A", 2), ("B", 2), ("E", 3)))
    assert conditional_mutual_information(joint) <= 1e-9


def test_cmi_flagged_mixture_is_one_bit():
    # equal-weight branches with orthogonal flags leave one bit of A:E
    # correlation that conditioning on B cannot remove
    rho = build_initial_state(SpinStarParams())
    assert conditional_mutual_information(rho, base=2) == pytest.approx(1.0, abs=1e-9)


def test_cmi_requires_three_factors():
    rho = density_from_vec(bell_pair(), TWO_QUBITS)
    with pytest.raises(ValueError, match="three"):
        conditional_mutual_information(rho)


def test_entropy_unitary_invariance():
    from spinstar.linalg import haar_unitary

    rng = np.random.default_rng(5)
    for _ in range(20):
        rho = random_density(rng, DimsSpec(("X", 4)))
        u = haar_unitary(4, rng)
        rotated = DensityMatrix(u @ rho.mat @ u.conj().T, rho.dims)
        assert abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) <= 1e-10
