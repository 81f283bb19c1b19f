"""Reduced-dynamics channels for the flagged pair mixture.

The initial states of interest are classical mixtures of orthogonal pair
states tagged by orthogonal bath flags.  Such states carry no discord across
the system-bath split, so the reduced pair dynamics admit an exact operator
sum: sandwiching the propagator between bath flag vectors and the matching
branch projectors yields Kraus operators whose action reproduces the traced
unitary evolution for every member of the family.

Random-unitary channels cover the complementary dephasing scenarios: a
classical dial picks one local unitary per branch, entanglement can revive
but never exceeds its initial value, and the ensemble-averaged concurrence
stays frozen.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from .entanglement import EnsembleMember, concurrence_2q, hidden_entanglement
from .linalg import dagger, identity, max_abs
from .model import SpinStarParams, branch_vectors, flagged_mixture, sector_unitary
from .states import DensityMatrix, DimsSpec

__all__ = [
    "ZeroDiscordFamily",
    "zero_discord_family",
    "KrausChannel",
    "extract_kraus",
    "apply_channel",
    "completeness_residual",
    "choi_matrix",
    "discord_zero_check",
    "RandomUnitaryChannel",
    "apply_random_unitary",
    "ruc_dilation",
    "ruc_trajectory",
    "RucSample",
    "random_phase_channel",
]

#: Kraus completeness must hold within this tolerance
COMPLETENESS_TOL = 1e-9

ORTHONORMALITY_TOL = 1e-12


def _orthonormal(vectors: Sequence[np.ndarray], what: str) -> None:
    stack = np.array(vectors)
    gram = stack @ dagger(stack)
    if max_abs(gram - identity(len(vectors))) > ORTHONORMALITY_TOL:
        raise ValueError(f"{what} are not orthonormal within {ORTHONORMALITY_TOL:.1e}")


class ZeroDiscordFamily:
    """Orthogonal pair states tagged by orthogonal bath flags, with weights.

    Any mixture sum_i p_i |psi_i><psi_i| x |mu_i><mu_i| drawn from the family
    is block diagonal in the flag basis and therefore discord-free across the
    pair-bath split, whatever the probabilities.
    """

    __slots__ = ("probabilities", "system_states", "env_flags")

    def __init__(
        self,
        probabilities: Sequence[float],
        system_states: Sequence[np.ndarray],
        env_flags: Sequence[np.ndarray],
    ):
        if not (len(probabilities) == len(system_states) == len(env_flags)):
            raise ValueError("probabilities, states, and flags must have equal length")
        probs = tuple(float(p) for p in probabilities)
        if any(p < 0.0 for p in probs):
            raise ValueError(f"probabilities must be non-negative, got {probs}")
        total = math.fsum(probs)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total:.12g}, not 1")
        states = tuple(np.array(s, dtype=complex).reshape(-1) for s in system_states)
        flags = tuple(np.array(f, dtype=complex).reshape(-1) for f in env_flags)
        if any(s.size != states[0].size for s in states):
            raise ValueError("system states must share one dimension")
        if any(f.size != flags[0].size for f in flags):
            raise ValueError("environment flags must share one dimension")
        _orthonormal(states, "system states")
        _orthonormal(flags, "environment flags")
        for arr in states + flags:
            arr.setflags(write=False)
        self.probabilities = probs
        self.system_states = states
        self.env_flags = flags

    def __len__(self) -> int:
        return len(self.probabilities)

    @property
    def flag_dim(self) -> int:
        return self.env_flags[0].size

    def mixture(self, levels: int | None = None) -> DensityMatrix:
        """The family's mixed state on (A, B, E), flags zero-padded to `levels`."""
        levels = self.flag_dim if levels is None else int(levels)
        if levels < self.flag_dim:
            raise ValueError(f"cannot truncate flags from {self.flag_dim} to {levels} levels")
        flags = []
        for f in self.env_flags:
            padded = np.zeros(levels, dtype=complex)
            padded[: f.size] = f
            flags.append(padded)
        mat = flagged_mixture(zip(self.probabilities, self.system_states, flags))
        return DensityMatrix(mat, DimsSpec(("A", 2), ("B", 2), ("E", levels)))


def zero_discord_family(
    params: SpinStarParams, probabilities: Sequence[float] | None = None
) -> ZeroDiscordFamily:
    """The four-member family generated by the model's branch structure.

    Members one and two are the flagged branches themselves; members three
    and four complete the pair basis with their orthogonal partners, tagged
    by the next two bath levels.  Default weights (p, 1-p, 0, 0) reproduce
    the model's initial state exactly.
    """
    sin_a, cos_a = math.sin(params.alpha), math.cos(params.alpha)
    sin_b, cos_b = math.sin(params.beta), math.cos(params.beta)
    psi1, psi2 = branch_vectors(params.alpha, params.beta)
    psi3 = np.array([0.0, -cos_a, sin_a, 0.0], dtype=complex)
    psi4 = np.array([-cos_b, 0.0, 0.0, sin_b], dtype=complex)
    flags = identity(4)
    if probabilities is None:
        probabilities = (params.p, 1.0 - params.p, 0.0, 0.0)
    return ZeroDiscordFamily(
        probabilities,
        (psi1, psi2, psi3, psi4),
        (flags[1], flags[0], flags[2], flags[3]),
    )


class KrausChannel:
    """Operator-sum map with a verified completeness relation."""

    __slots__ = ("operators",)

    def __init__(self, operators: Sequence[np.ndarray], *, tol: float = COMPLETENESS_TOL):
        ops = tuple(np.array(k, dtype=complex) for k in operators)
        if not ops:
            raise ValueError("at least one Kraus operator is required")
        dim = ops[0].shape[0]
        for k in ops:
            if k.ndim != 2 or k.shape != (dim, dim):
                raise ValueError(f"Kraus operators must all be {dim}x{dim}, got {k.shape}")
        residual = max_abs(
            sum(dagger(k) @ k for k in ops) - identity(dim)
        )
        if residual > tol:
            raise ValueError(
                f"Kraus completeness residual {residual:.3e} exceeds {tol:.1e}"
            )
        for k in ops:
            k.setflags(write=False)
        self.operators = ops

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def __len__(self) -> int:
        return len(self.operators)


def extract_kraus(family: ZeroDiscordFamily, params: SpinStarParams, t: float) -> KrausChannel:
    """Kraus operators of the reduced pair dynamics at time t.

    Each operator is (I_A x <k| U |mu_i>) projected onto branch i, with k
    running over one bath level beyond the flag truncation because the
    propagator can raise the bath by a single excitation.  Completeness of
    the result certifies that the truncation spans every reachable state.
    """
    if family.system_states[0].size != 4:
        raise ValueError("Kraus extraction expects two-qubit system states")
    levels = family.flag_dim + 1
    u = sector_unitary(params, t, levels=levels)
    blocks = u.reshape(2, levels, 2, levels)
    operators = []
    for psi, flag in zip(family.system_states, family.env_flags):
        padded = np.zeros(levels, dtype=complex)
        padded[: flag.size] = flag
        projector = np.outer(psi, psi.conj())
        for k in range(levels):
            b_map = np.tensordot(blocks[:, k, :, :], padded, axes=([2], [0]))
            operators.append(np.kron(identity(2), b_map) @ projector)
    try:
        return KrausChannel(operators)
    except ValueError as exc:
        raise ValueError(f"bath truncation too small for an exact operator sum: {exc}") from exc


def apply_channel(channel: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply an operator-sum map to a state of matching dimension."""
    if rho.dim != channel.dim:
        raise ValueError(f"state dimension {rho.dim} does not match channel {channel.dim}")
    out = np.zeros_like(rho.mat)
    for k in channel.operators:
        out = out + k @ rho.mat @ dagger(k)
    return DensityMatrix(out, rho.dims, trace_tol=1e-9, eig_floor=1e-8)


def completeness_residual(channel: KrausChannel) -> float:
    """Max-entry deviation of sum_k K^dagger K from the identity."""
    total = sum(dagger(k) @ k for k in channel.operators)
    return max_abs(total - identity(channel.dim))


def choi_matrix(channel: KrausChannel) -> np.ndarray:
    """Choi matrix sum_k vec(K) vec(K)^dagger with column-stacking vec.

    Positive semidefiniteness of this matrix is equivalent to complete
    positivity of the map.
    """
    dim = channel.dim
    choi = np.zeros((dim * dim, dim * dim), dtype=complex)
    for k in channel.operators:
        v = k.T.reshape(-1)
        choi += np.outer(v, v.conj())
    return choi


def discord_zero_check(rho: DensityMatrix, flags: Sequence[np.ndarray]) -> float:
    """Max-entry distance between rho and its dephasing in a bath flag basis.

    The last factor is the bath; flags must form a complete orthonormal basis
    for it.  A result of zero certifies vanishing system-bath discord with
    respect to that basis.
    """
    if len(rho.dims) < 2:
        raise ValueError("need at least a system factor and a bath factor")
    env_dim = rho.dims.dims[-1]
    flag_vecs = tuple(np.asarray(f, dtype=complex).reshape(-1) for f in flags)
    if len(flag_vecs) != env_dim or any(f.size != env_dim for f in flag_vecs):
        raise ValueError(f"need {env_dim} flag vectors of dimension {env_dim}")
    _orthonormal(flag_vecs, "bath flags")
    sys_dim = rho.dim // env_dim
    dephased = np.zeros_like(rho.mat)
    for f in flag_vecs:
        pinned = np.kron(identity(sys_dim), np.outer(f, f.conj()))
        dephased += pinned @ rho.mat @ pinned
    return max_abs(rho.mat - dephased)


class RandomUnitaryChannel:
    """Probabilistic mixture of single-qubit unitaries on the coupled qubit."""

    __slots__ = ("probabilities", "unitaries")

    def __init__(self, branches: Sequence[tuple[float, np.ndarray]]):
        if not branches:
            raise ValueError("at least one unitary branch is required")
        probs = tuple(float(p) for p, _ in branches)
        if any(p < 0.0 for p in probs):
            raise ValueError(f"branch probabilities must be non-negative, got {probs}")
        total = math.fsum(probs)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"branch probabilities sum to {total:.12g}, not 1")
        unitaries = tuple(np.array(u, dtype=complex) for _, u in branches)
        for u in unitaries:
            if u.shape != (2, 2):
                raise ValueError(f"branch unitaries must be 2x2, got {u.shape}")
            if max_abs(dagger(u) @ u - identity(2)) > 1e-10:
                raise ValueError("branch matrix is not unitary within 1e-10")
            u.setflags(write=False)
        self.probabilities = probs
        self.unitaries = unitaries

    def __len__(self) -> int:
        return len(self.probabilities)


def apply_random_unitary(channel: RandomUnitaryChannel, rho: DensityMatrix) -> DensityMatrix:
    """Mix the branch unitaries over the second factor of a two-qubit state."""
    if len(rho.dims) != 2 or rho.dims.dims != (2, 2):
        raise ValueError(f"need a two-qubit state, got {rho.dims!r}")
    out = np.zeros_like(rho.mat)
    for p, u in zip(channel.probabilities, channel.unitaries):
        full = np.kron(identity(2), u)
        out = out + p * (full @ rho.mat @ dagger(full))
    return DensityMatrix(out, rho.dims)


def ruc_dilation(
    channel: RandomUnitaryChannel | Callable[[float], RandomUnitaryChannel],
    t: float = 0.0,
) -> tuple[DensityMatrix, np.ndarray]:
    """Environment dial and joint unitary realizing a random-unitary channel.

    The environment starts in the diagonal mixture of dial positions and the
    joint unitary applies branch j's unitary when the dial reads j, so
    tracing the dial after joint evolution reproduces the channel while the
    dial's own state never changes.  A callable channel is evaluated at t.
    """
    if callable(channel) and not isinstance(channel, RandomUnitaryChannel):
        channel = channel(t)
    m = len(channel)
    env = DensityMatrix(np.diag(np.array(channel.probabilities, dtype=complex)), DimsSpec(("E", m)))
    joint = np.zeros((4 * m, 4 * m), dtype=complex)
    for j, u in enumerate(channel.unitaries):
        dial = np.zeros((m, m), dtype=complex)
        dial[j, j] = 1.0
        joint += np.kron(np.kron(identity(2), u), dial)
    return env, joint


@dataclass(frozen=True)
class RucSample:
    """Snapshot of a random-unitary trajectory at one time."""

    t: float
    mixture: DensityMatrix
    branches: tuple[tuple[float, DensityMatrix], ...]
    mixture_concurrence: float
    ensemble_concurrence: float
    hidden: float


def ruc_trajectory(
    builder: Callable[[float], RandomUnitaryChannel],
    rho0: DensityMatrix,
    t_grid: Sequence[float],
) -> tuple[RucSample, ...]:
    """Branch-resolved evolution of a two-qubit state under a unitary dial.

    At every grid time the ensemble-averaged concurrence must match the
    initial concurrence within 1e-9, because each branch evolves by a local
    unitary; drift beyond that indicates numerical corruption and raises.
    """
    if len(rho0.dims) != 2 or rho0.dims.dims != (2, 2):
        raise ValueError(f"need a two-qubit initial state, got {rho0.dims!r}")
    c0 = concurrence_2q(rho0)
    samples = []
    for t in t_grid:
        channel = builder(t)
        members = []
        mixture = np.zeros_like(rho0.mat)
        for p, u in zip(channel.probabilities, channel.unitaries):
            full = np.kron(identity(2), u)
            branch = DensityMatrix(full @ rho0.mat @ dagger(full), rho0.dims)
            members.append(EnsembleMember(p, branch))
            mixture = mixture + p * branch.mat
        mixed = DensityMatrix(mixture, rho0.dims)
        c_ens = math.fsum(m.weight * concurrence_2q(m.state) for m in members)
        if abs(c_ens - c0) > 1e-9:
            raise ArithmeticError(
                f"ensemble concurrence drifted to {c_ens:.12g} from {c0:.12g} at t={t!r}"
            )
        c_mix = concurrence_2q(mixed)
        hidden = hidden_entanglement(members, mixed)
        samples.append(
            RucSample(
                t=float(t),
                mixture=mixed,
                branches=tuple((m.weight, m.state) for m in members),
                mixture_concurrence=c_mix,
                ensemble_concurrence=c_ens,
                hidden=hidden,
            )
        )
    return tuple(samples)


def random_phase_channel(omega: float = 1.0) -> Callable[[float], RandomUnitaryChannel]:
    """Equal-weight pair of opposite phase rotations at angular rate omega.

    The two branches are exp(-i omega t Z / 2) and its inverse, a minimal
    dephasing dial: the mixture's concurrence follows |cos(omega t)| on a
    maximally entangled input while each branch stays maximally entangled.
    """

    def build(t: float) -> RandomUnitaryChannel:
        half = 0.5 * omega * t
        forward = np.diag([np.exp(-1j * half), np.exp(1j * half)])
        backward = np.diag([np.exp(1j * half), np.exp(-1j * half)])
        return RandomUnitaryChannel([(0.5, forward), (0.5, backward)])

    return build
