"""Entanglement monotones and witnesses.

Pure-state concurrence works across any bipartition.  Mixed two-qubit states
use the spin-flip construction, evaluated at the amplitude level so that the
coefficients of rank-deficient states stay accurate to rounding rather than
its square root.  The partial transpose witness certifies entanglement
through a negative eigenvalue.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np

from .linalg import SIGMA_Y, dagger, herm_eig, max_abs, tensor
from .states import DensityMatrix, PureState

if TYPE_CHECKING:
    from .model import SpinStarParams

__all__ = [
    "EnsembleMember",
    "concurrence_pure",
    "spin_flip_coefficients",
    "concurrence_2q",
    "ppt_min_eigenvalue",
    "ensemble_concurrence",
    "concurrence_a_be",
    "inaccessible_concurrence",
    "hidden_entanglement",
]

#: ensemble weights must sum to one within this tolerance
WEIGHT_TOL = 1e-12

#: density-matrix eigenvalues at or below this are treated as unpopulated
RANK_TOL = 1e-12

Cut = tuple[Iterable[str], Iterable[str]]
State = Union[PureState, DensityMatrix]


@dataclass(frozen=True)
class EnsembleMember:
    """One branch of a state ensemble: a probability and the branch state."""

    weight: float
    state: State


def _cut_groups(dims, cut: Cut) -> tuple[tuple[str, ...], tuple[str, ...]]:
    x_group = tuple(cut[0])
    y_group = tuple(cut[1])
    if not x_group or not y_group:
        raise ValueError("both sides of the cut must be non-empty")
    seen = x_group + y_group
    if len(set(seen)) != len(seen):
        raise ValueError(f"cut groups overlap or repeat labels: {cut!r}")
    if set(seen) != set(dims.labels):
        raise ValueError(f"cut {cut!r} does not partition factors {list(dims.labels)}")
    return x_group, y_group


def concurrence_pure(psi: PureState, cut: Cut) -> float:
    """Concurrence sqrt(2 (1 - Tr r^2)) of a pure state across a bipartition.

    r is the reduced state of the first cut group.  Product states give 0 and
    maximally entangled states give sqrt(2 (1 - 1/d)) for the smaller side d.
    """
    x_group, _ = _cut_groups(psi.dims, cut)
    positions = [psi.dims.position(lab) for lab in x_group]
    rest = [i for i in range(len(psi.dims)) if i not in positions]
    tensor_form = psi.vec.reshape(psi.dims.dims)
    m = np.transpose(tensor_form, positions + rest)
    d_x = math.prod(psi.dims.dims[i] for i in positions)
    m = m.reshape(d_x, -1)
    reduced = m @ dagger(m)
    purity = float(np.real(np.trace(reduced @ reduced)))
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity)))


def spin_flip_coefficients(rho: DensityMatrix) -> np.ndarray:
    """Descending spin-flip coefficients of a two-qubit density matrix.

    Writes rho = W W^dagger through its spectral decomposition and returns the
    singular values of the complex symmetric matrix W^T (Y x Y) W, zero padded
    to length four.  Their squares are the eigenvalues of rho Y rho* Y, but
    taking singular values at the amplitude level keeps coefficients that are
    exactly zero at the rounding scale instead of its square root, and the
    concurrence subtracts three of them so that accuracy is load bearing.
    Eigenvalues of rho at or below RANK_TOL carry no usable amplitude and are
    dropped.
    """
    yy = tensor(SIGMA_Y, SIGMA_Y).real
    vals, vecs = herm_eig(rho.mat)
    keep = vals > RANK_TOL
    w = vecs[:, keep] * np.sqrt(vals[keep])
    tau = w.T @ yy @ w
    lams = np.zeros(4)
    if tau.size:
        sv = np.linalg.svd(tau, compute_uv=False)
        lams[: sv.size] = sv
    return lams


def concurrence_2q(rho: DensityMatrix, cut: tuple[str, str] | None = None) -> float:
    """Concurrence of a two-qubit density matrix.

    The state must consist of exactly two dimension-2 factors; anything else
    must be traced out first.  The optional cut names the two qubit labels and
    is checked against the state's factors.
    """
    if len(rho.dims) != 2 or rho.dims.dims != (2, 2):
        raise ValueError(f"need exactly two qubit factors, got {rho.dims!r}")
    if cut is not None and set(cut) != set(rho.dims.labels):
        raise ValueError(f"cut {cut!r} does not name the factors {list(rho.dims.labels)}")
    lams = spin_flip_coefficients(rho)
    return max(0.0, float(lams[0] - lams[1] - lams[2] - lams[3]))


def ppt_min_eigenvalue(rho: DensityMatrix, cut: Cut) -> float:
    """Smallest eigenvalue after partially transposing the second cut group.

    A value below -1e-9 witnesses entanglement across the cut; separable
    states stay positive semidefinite up to rounding.
    """
    _, y_group = _cut_groups(rho.dims, cut)
    n = len(rho.dims)
    tensor_form = rho.mat.reshape(rho.dims.dims + rho.dims.dims)
    axes = list(range(2 * n))
    for lab in y_group:
        i = rho.dims.position(lab)
        axes[i], axes[n + i] = axes[n + i], axes[i]
    pt = np.transpose(tensor_form, axes).reshape(rho.dim, rho.dim)
    vals = np.linalg.eigvalsh((pt + dagger(pt)) / 2.0)
    return float(vals[0])


def _member_concurrence(state: State, cut: Cut) -> float:
    if isinstance(state, PureState):
        return concurrence_pure(state, cut)
    if isinstance(state, DensityMatrix):
        x_group, y_group = _cut_groups(state.dims, cut)
        if len(x_group) != 1 or len(y_group) != 1:
            raise ValueError("mixed ensemble members support only single-qubit cut groups")
        return concurrence_2q(state, (x_group[0], y_group[0]))
    raise ValueError(f"unsupported ensemble member state {type(state).__name__}")


def _check_weights(members: Sequence[EnsembleMember]) -> None:
    if not members:
        raise ValueError("ensemble must have at least one member")
    for m in members:
        if not 0.0 <= m.weight <= 1.0:
            raise ValueError(f"ensemble weight {m.weight!r} outside [0, 1]")
    total = math.fsum(m.weight for m in members)
    if abs(total - 1.0) > WEIGHT_TOL:
        raise ValueError(f"ensemble weights sum to {total:.12g}, not 1")


def ensemble_concurrence(members: Sequence[EnsembleMember], cut: Cut) -> float:
    """Probability-weighted average concurrence of an ensemble across a cut."""
    _check_weights(members)
    return math.fsum(m.weight * _member_concurrence(m.state, cut) for m in members)


def concurrence_a_be(params: "SpinStarParams") -> float:
    """Concurrence between the isolated qubit and everything it is cut from.

    For the flagged pair mixture this cut inherits the branch structure, so
    the value is the weighted branch concurrence p |sin 2a| + (1-p) |sin 2b|
    and stays constant under any evolution local to the other side.
    """
    return params.p * abs(math.sin(2.0 * params.alpha)) + (1.0 - params.p) * abs(
        math.sin(2.0 * params.beta)
    )


def inaccessible_concurrence(c_whole: float, c_sys: float) -> float:
    """Entanglement bound in the environment cut: max(0, c_whole - c_sys).

    c_whole must dominate c_sys up to 1e-9; a larger deficit signals an
    upstream computation bug and is rejected.
    """
    if c_whole < c_sys - 1e-9:
        raise ValueError(
            f"whole-cut concurrence {c_whole:.12g} below system concurrence {c_sys:.12g}"
        )
    return max(0.0, c_whole - c_sys)


def hidden_entanglement(
    members: Sequence[EnsembleMember],
    rho_mix: DensityMatrix,
    cut: tuple[str, str] | None = None,
) -> float:
    """Ensemble-averaged concurrence minus the concurrence of the mixture.

    The weighted mixture of the members must reproduce rho_mix within 1e-9 in
    the max-entry norm.  Convexity of the concurrence keeps the result
    non-negative up to rounding.
    """
    _check_weights(members)
    if len(rho_mix.dims) != 2 or rho_mix.dims.dims != (2, 2):
        raise ValueError(f"mixture must be a two-qubit state, got {rho_mix.dims!r}")
    if cut is None:
        cut_pair = rho_mix.dims.labels
    else:
        cut_pair = (cut[0], cut[1])
    mixture = np.zeros_like(rho_mix.mat)
    for m in members:
        mat = m.state.to_density().mat if isinstance(m.state, PureState) else m.state.mat
        mixture = mixture + m.weight * mat
    dev = max_abs(mixture - rho_mix.mat)
    if dev > 1e-9:
        raise ValueError(f"ensemble mixture deviates from rho_mix by {dev:.3e}")
    group_cut = ((cut_pair[0],), (cut_pair[1],))
    value = ensemble_concurrence(members, group_cut) - concurrence_2q(rho_mix, cut_pair)
    if value < -1e-9:
        raise ArithmeticError(f"hidden entanglement {value:.3e} below -1e-9; convexity violated")
    return value
