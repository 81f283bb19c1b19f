"""Dense complex linear algebra primitives shared by the state and channel layers.

Everything operates on plain ``numpy.ndarray`` values with complex entries.
Inputs are treated as immutable and results are always fresh arrays.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "HERM_TOL",
    "identity",
    "dagger",
    "tensor",
    "max_abs",
    "is_hermitian",
    "herm_eig",
    "expm_hermitian",
    "psd_sqrt",
    "haar_unitary",
]

#: default tolerance for Hermiticity checks
HERM_TOL = 1e-10


def _readonly(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m


# Pauli matrices in the basis (|0>, |1>) with |0> the lower level.
SIGMA_X = _readonly(np.array([[0, 1], [1, 0]], dtype=complex))
SIGMA_Y = _readonly(np.array([[0, -1j], [1j, 0]], dtype=complex))
SIGMA_Z = _readonly(np.array([[1, 0], [0, -1]], dtype=complex))
# Raising |0> -> |1> and lowering |1> -> |0| ladder operators.
SIGMA_PLUS = _readonly(np.array([[0, 0], [1, 0]], dtype=complex))
SIGMA_MINUS = _readonly(np.array([[0, 1], [0, 0]], dtype=complex))


def identity(dim: int) -> np.ndarray:
    """Complex identity matrix of the given dimension."""
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    return np.eye(dim, dtype=complex)


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def tensor(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, first factor slowest."""
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def max_abs(m: np.ndarray) -> float:
    """Largest entry magnitude (max-entry norm)."""
    return float(np.max(np.abs(m)))


def is_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return max_abs(m - dagger(m)) <= tol


def _check_square(m: np.ndarray, what: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{what} has non-finite entries")
    return m


def herm_eig(m: np.ndarray, tol: float = HERM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Spectral decomposition of a Hermitian matrix.

    Returns ``(vals, vecs)`` with eigenvalues ascending and eigenvectors as
    the columns of a unitary matrix, so ``vecs @ diag(vals) @ vecs.conj().T``
    reconstructs the input. Non-square or non-Hermitian input is rejected.
    """
    m = _check_square(m, "herm_eig input")
    dev = max_abs(m - dagger(m))
    if dev > tol:
        raise ValueError(
            f"herm_eig input is not Hermitian: max |m - m^dagger| = {dev:.3e} exceeds tol {tol:.1e}"
        )
    # symmetrize so roundoff in the input cannot leak into complex eigenvalues
    sym = (m + dagger(m)) / 2.0
    vals, vecs = np.linalg.eigh(sym)
    return vals, vecs


def expm_hermitian(h: np.ndarray, t: float, tol: float = HERM_TOL) -> np.ndarray:
    """Unitary evolution operator exp(-i*h*t) for a Hermitian generator h."""
    vals, vecs = herm_eig(h, tol)
    phases = np.exp(-1j * vals * t)
    return (vecs * phases) @ dagger(vecs)


def psd_sqrt(m: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in [-tol, 0) are clamped to zero; anything more negative is
    rejected as non-PSD.
    """
    vals, vecs = herm_eig(m)
    low = float(vals[0])
    if low < -tol:
        raise ValueError(
            f"matrix is not positive semidefinite: min eigenvalue {low:.3e} below -{tol:.1e}"
        )
    roots = np.sqrt(np.clip(vals, 0.0, None))
    return (vecs * roots) @ dagger(vecs)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed random unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
