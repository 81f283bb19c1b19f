"""Shared construction helpers for the test suite."""

import numpy as np

from spinstar import DensityMatrix, DimsSpec


def random_density(rng, dims, rank=None):
    """Random full-rank (or fixed-rank) density matrix on the given DimsSpec."""
    if not isinstance(dims, DimsSpec):
        dims = DimsSpec(*dims)
    d = dims.total_dim
    r = d if rank is None else rank
    g = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, dims)


def bell_pair(kind="psi+"):
    """One of the four Bell vectors on qubit labels A, B."""
    vecs = {
        "phi+": np.array([1, 0, 0, 1], dtype=complex),
        "phi-": np.array([1, 0, 0, -1], dtype=complex),
        "psi+": np.array([0, 1, 1, 0], dtype=complex),
        "psi-": np.array([0, 1, -1, 0], dtype=complex),
    }
    return vecs[kind] / np.sqrt(2.0)


def density_from_vec(vec, dims):
    vec = np.asarray(vec, dtype=complex)
    if not isinstance(dims, DimsSpec):
        dims = DimsSpec(*dims)
    return DensityMatrix(np.outer(vec, vec.conj()), dims)


TWO_QUBITS = DimsSpec(("A", 2), ("B", 2))
