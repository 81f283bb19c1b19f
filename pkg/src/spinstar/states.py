"""Quantum states over labeled tensor factorizations, and entropy functionals.

`DimsSpec` names the tensor factors of a Hilbert space.  `DensityMatrix` and
`PureState` validate the usual state invariants once at construction so that
downstream code can assume them.  Partial traces keep factors in their
original order; there is no implicit reordering.
"""

from __future__ import annotations

import math
import string
from collections.abc import Iterable

import numpy as np

from .linalg import dagger, max_abs

__all__ = [
    "DimsSpec",
    "DensityMatrix",
    "PureState",
    "partial_trace",
    "von_neumann_entropy",
    "mutual_information",
    "conditional_mutual_information",
]

#: eigenvalues of a state in [ENTROPY_EIG_FLOOR, 0) are treated as exact zeros
ENTROPY_EIG_FLOOR = -1e-9


class DimsSpec:
    """Ordered (label, dimension) factors of a tensor-product space."""

    __slots__ = ("_factors",)

    def __init__(self, *factors: tuple[str, int]):
        if not factors:
            raise ValueError("at least one tensor factor is required")
        normalized = []
        for lab, dim in factors:
            lab = str(lab)
            dim = int(dim)
            if dim < 1:
                raise ValueError(f"factor {lab!r} has non-positive dimension {dim}")
            normalized.append((lab, dim))
        labels = [lab for lab, _ in normalized]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate factor labels in {labels}")
        self._factors = tuple(normalized)

    @property
    def factors(self) -> tuple[tuple[str, int], ...]:
        return self._factors

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self._factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self._factors)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def dim_of(self, label: str) -> int:
        return self._factors[self.position(label)][1]

    def position(self, label: str) -> int:
        for i, (lab, _) in enumerate(self._factors):
            if lab == label:
                return i
        raise ValueError(f"unknown factor label {label!r}; have {list(self.labels)}")

    def __len__(self) -> int:
        return len(self._factors)

    def __iter__(self):
        return iter(self._factors)

    def __eq__(self, other) -> bool:
        return isinstance(other, DimsSpec) and self._factors == other._factors

    def __hash__(self) -> int:
        return hash(self._factors)

    def __repr__(self) -> str:
        inner = ", ".join(f"{lab}:{dim}" for lab, dim in self._factors)
        return f"DimsSpec({inner})"


class DensityMatrix:
    """Validated density operator over a labeled factorization.

    Construction rejects matrices that are not Hermitian, not unit trace, or
    not positive semidefinite within the given tolerances.
    """

    __slots__ = ("mat", "dims")

    def __init__(
        self,
        mat: np.ndarray,
        dims: DimsSpec,
        *,
        herm_tol: float = 1e-10,
        trace_tol: float = 1e-10,
        eig_floor: float = 1e-9,
    ):
        if not isinstance(dims, DimsSpec):
            dims = DimsSpec(*dims)
        arr = np.array(mat, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {arr.shape}")
        if arr.shape[0] != dims.total_dim:
            raise ValueError(
                f"matrix dimension {arr.shape[0]} does not match factors {dims!r}"
                f" with total dimension {dims.total_dim}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("density matrix has non-finite entries")
        dev = max_abs(arr - dagger(arr))
        if dev > herm_tol:
            raise ValueError(
                f"density matrix is not Hermitian: max deviation {dev:.3e} exceeds {herm_tol:.1e}"
            )
        tr = complex(np.trace(arr))
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"density matrix trace {tr:.12g} is not 1 within {trace_tol:.1e}")
        low = float(np.linalg.eigvalsh((arr + dagger(arr)) / 2.0)[0])
        if low < -eig_floor:
            raise ValueError(
                f"density matrix is not positive semidefinite: min eigenvalue {low:.3e}"
            )
        arr.setflags(write=False)
        self.mat = arr
        self.dims = dims

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, dims={self.dims!r})"


class PureState:
    """Validated unit vector over a labeled factorization."""

    __slots__ = ("vec", "dims")

    def __init__(self, vec: np.ndarray, dims: DimsSpec, *, norm_tol: float = 1e-12):
        if not isinstance(dims, DimsSpec):
            dims = DimsSpec(*dims)
        arr = np.array(vec, dtype=complex).reshape(-1)
        if arr.size != dims.total_dim:
            raise ValueError(
                f"vector length {arr.size} does not match factors {dims!r}"
                f" with total dimension {dims.total_dim}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("state vector has non-finite entries")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > norm_tol:
            raise ValueError(f"state vector norm {norm:.12g} is not 1 within {norm_tol:.1e}")
        arr.setflags(write=False)
        self.vec = arr
        self.dims = dims

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.vec, self.vec.conj()), self.dims)

    def __repr__(self) -> str:
        return f"PureState(dim={self.vec.size}, dims={self.dims!r})"


def _label_group(dims: DimsSpec, labels: Iterable[str]) -> tuple[str, ...]:
    group = tuple(labels)
    if not group:
        raise ValueError("label group must be non-empty")
    if len(set(group)) != len(group):
        raise ValueError(f"repeated labels in group {group}")
    for lab in group:
        dims.position(lab)  # raises on unknown label
    return group


def partial_trace(rho: DensityMatrix, keep: Iterable[str]) -> DensityMatrix:
    """Trace out every factor not listed in `keep`.

    Kept factors preserve their original order regardless of the order given.
    """
    keep_set = set(_label_group(rho.dims, keep))
    kept = [(lab, dim) for lab, dim in rho.dims if lab in keep_set]
    n = len(rho.dims)
    tensor_form = rho.mat.reshape(rho.dims.dims + rho.dims.dims)
    letters = iter(string.ascii_lowercase)
    bra = [next(letters) for _ in range(n)]
    ket = [bra[i] if rho.dims.labels[i] not in keep_set else next(letters) for i in range(n)]
    out = [bra[i] for i in range(n) if rho.dims.labels[i] in keep_set]
    out += [ket[i] for i in range(n) if rho.dims.labels[i] in keep_set]
    reduced = np.einsum("".join(bra + ket) + "->" + "".join(out), tensor_form)
    d = math.prod(dim for _, dim in kept)
    return DensityMatrix(reduced.reshape(d, d), DimsSpec(*kept))


def _check_base(base: float) -> float:
    if base not in (2, 10, math.e):
        raise ValueError(f"log base must be 2, e, or 10, got {base!r}")
    return float(base)


def _entropy_of_matrix(mat: np.ndarray, base: float) -> float:
    vals = np.linalg.eigvalsh((mat + dagger(mat)) / 2.0)
    low = float(vals[0])
    if low < ENTROPY_EIG_FLOOR:
        raise ValueError(f"state eigenvalue {low:.3e} below floor {ENTROPY_EIG_FLOOR:.1e}")
    probs = np.clip(vals, 0.0, None)
    probs = probs[probs > 0.0]
    return float(-(probs @ np.log(probs)) / math.log(base))


def von_neumann_entropy(rho: DensityMatrix, base: float = 2) -> float:
    """Spectral entropy -sum(p log p) of a density matrix, 0 log 0 = 0."""
    return _entropy_of_matrix(rho.mat, _check_base(base))


def mutual_information(
    rho: DensityMatrix,
    cut: tuple[Iterable[str], Iterable[str]],
    base: float = 2,
) -> float:
    """S(X) + S(Y) - S(XY) for a bipartition (X, Y) of all factors."""
    base = _check_base(base)
    x_group = _label_group(rho.dims, cut[0])
    y_group = _label_group(rho.dims, cut[1])
    if set(x_group) & set(y_group):
        raise ValueError(f"cut groups overlap: {x_group} vs {y_group}")
    if set(x_group) | set(y_group) != set(rho.dims.labels):
        raise ValueError(f"cut {cut!r} does not partition factors {list(rho.dims.labels)}")
    value = (
        von_neumann_entropy(partial_trace(rho, x_group), base)
        + von_neumann_entropy(partial_trace(rho, y_group), base)
        - von_neumann_entropy(rho, base)
    )
    if value < -1e-9:
        raise ArithmeticError(f"mutual information {value:.3e} below -1e-9; numeric corruption")
    return value


def conditional_mutual_information(rho: DensityMatrix, base: float = 2) -> float:
    """I(X:Z|Y) = S(XY) + S(YZ) - S(Y) - S(XYZ) for a three-factor state.

    The middle factor in the stored order is the conditioning system.  Strong
    subadditivity makes the result non-negative up to rounding.
    """
    base = _check_base(base)
    if len(rho.dims) != 3:
        raise ValueError(f"need exactly three factors, got {list(rho.dims.labels)}")
    first, mid, last = rho.dims.labels
    value = (
        von_neumann_entropy(partial_trace(rho, (first, mid)), base)
        + von_neumann_entropy(partial_trace(rho, (mid, last)), base)
        - von_neumann_entropy(partial_trace(rho, (mid,)), base)
        - von_neumann_entropy(rho, base)
    )
    if value < -1e-8:
        raise ArithmeticError(
            f"conditional mutual information {value:.3e} violates strong subadditivity"
        )
    return value
