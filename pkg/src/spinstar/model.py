"""Spin-star bath model: a qubit pair with one qubit coupled to N bath spins.

Qubit A is isolated.  Qubit B exchanges excitations with every bath spin at
equal strength g through a flip-flop coupling, so the joint dynamics preserve
excitation number and stay inside the ladder of symmetric bath states.  Within
that ladder the propagator splits into independent 2x2 rotations: the pair
(|1_B, n>, |0_B, n+1>) rotates at frequency Omega_n = g sqrt((n+1)(N-n)),
while |0_B, 0> is stationary.  The collective frequency Omega = g sqrt(N)
sets the time unit; trajectories are reported against Omega*t.

`LARGE_N` requests the infinite-bath limit where Omega is held fixed and
Omega_n -> Omega sqrt(n+1).

The mixed initial state interpolates between two flagged branches:

    p   * |psi_1><psi_1| x |1><1|    psi_1 = cos(a)|1_A 0_B> + sin(a)|0_A 1_B>
    1-p * |psi_2><psi_2| x |0><0|    psi_2 = cos(b)|1_A 1_B> + sin(b)|0_A 0_B>

where |n> are symmetric bath levels.  For this family the reduced pair state
stays in X form and its concurrence has a closed form, evaluated by
`concurrence_closed_form` and cross-checked against full-Hilbert-space
evolution by `BruteForceEvolver`.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .linalg import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    dagger,
    herm_eig,
    identity,
    max_abs,
    tensor,
)
from .states import DensityMatrix, DimsSpec, PureState

__all__ = [
    "LARGE_N",
    "SpinStarParams",
    "ClosedFormCoeffs",
    "branch_vectors",
    "flagged_mixture",
    "build_initial_state",
    "build_w_state",
    "closed_form_coeffs",
    "closed_form_terms",
    "concurrence_closed_form",
    "sector_unitary",
    "evolve_sector",
    "build_full_hamiltonian",
    "dicke_vector",
    "BruteForceEvolver",
    "brute_force_reduced_state",
]

#: sentinel bath size requesting the infinite-bath frequency ladder
LARGE_N = math.inf

#: number of symmetric bath levels carried by the effective environment
ENV_LEVELS = 4

#: dimensions supported by the dense full-space oracle
MAX_BATH_SPINS = 12

#: default dims for states on (isolated qubit, coupled qubit, effective bath)
PAIR_ENV_DIMS = DimsSpec(("A", 2), ("B", 2), ("E", ENV_LEVELS))

#: largest tolerated population outside the truncated bath ladder
TRUNCATION_TOL = 1e-12


@dataclass(frozen=True)
class SpinStarParams:
    """Model parameters: bath size, coupling, and initial-state angles.

    env_spins is an integer >= 2 or LARGE_N.  The mixing probability p weights
    the first branch; alpha and beta set the branch entanglement angles.
    """

    env_spins: float = LARGE_N
    coupling: float = 1.0
    p: float = 0.5
    alpha: float = math.pi / 4
    beta: float = math.pi / 4

    def __post_init__(self):
        n = self.env_spins
        if n != LARGE_N:
            if not (isinstance(n, (int, np.integer)) and n >= 2):
                raise ValueError(f"env_spins must be an integer >= 2 or LARGE_N, got {n!r}")
        if not self.coupling > 0.0:
            raise ValueError(f"coupling must be positive, got {self.coupling!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"mixing probability p must lie in [0, 1], got {self.p!r}")
        for name, angle in (("alpha", self.alpha), ("beta", self.beta)):
            if not 0.0 <= angle <= 2.0 * math.pi:
                raise ValueError(f"{name} must lie in [0, 2*pi], got {angle!r}")

    @property
    def is_large_n(self) -> bool:
        return self.env_spins == LARGE_N

    @property
    def omega(self) -> float:
        """Collective frequency g sqrt(N); equals g in the infinite-bath limit."""
        if self.is_large_n:
            return self.coupling
        return self.coupling * math.sqrt(self.env_spins)

    @property
    def omega1(self) -> float:
        """One-excitation frequency g sqrt(2N - 2); sqrt(2) Omega for LARGE_N."""
        return self.mode_frequency(1)

    def mode_frequency(self, n: int) -> float:
        """Rotation frequency of the (|1_B, n>, |0_B, n+1>) pair.

        Bath levels beyond a finite ladder would need more than N excitations;
        their frequency is clamped to zero so they stay inert.
        """
        if n < 0:
            raise ValueError(f"level index must be non-negative, got {n}")
        if self.is_large_n:
            return self.coupling * math.sqrt(n + 1.0)
        return self.coupling * math.sqrt((n + 1.0) * max(self.env_spins - n, 0.0))


@dataclass(frozen=True)
class ClosedFormCoeffs:
    """Constant coefficients of the closed-form pair concurrence.

    a, b weight the second branch's ground and excited pair populations,
    d, f the first branch's, and c, e the respective coherences.  The four
    populations sum to one.
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float
    omega: float
    omega1: float

    def __post_init__(self):
        for name in ("a", "b", "d", "f"):
            if getattr(self, name) < -1e-12:
                raise ValueError(f"population coefficient {name} is negative")
        total = self.a + self.b + self.d + self.f
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"population coefficients sum to {total:.12g}, not 1")


def branch_vectors(alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """The two orthogonal pair vectors selected by the branch flags.

    Basis order is (|0_A 0_B>, |0_A 1_B>, |1_A 0_B>, |1_A 1_B>).
    """
    psi1 = np.array([0.0, math.sin(alpha), math.cos(alpha), 0.0], dtype=complex)
    psi2 = np.array([math.sin(beta), 0.0, 0.0, math.cos(beta)], dtype=complex)
    return psi1, psi2


def flagged_mixture(
    members: Iterable[tuple[float, np.ndarray, np.ndarray]],
) -> np.ndarray:
    """Density matrix sum_i w_i |psi_i><psi_i| x |mu_i><mu_i| as a raw array."""
    acc = None
    for weight, psi, flag in members:
        psi = np.asarray(psi, dtype=complex)
        flag = np.asarray(flag, dtype=complex)
        term = weight * np.kron(np.outer(psi, psi.conj()), np.outer(flag, flag.conj()))
        acc = term if acc is None else acc + term
    if acc is None:
        raise ValueError("at least one flagged member is required")
    return acc


def build_initial_state(params: SpinStarParams) -> DensityMatrix:
    """Flagged two-branch mixture on (A, B, E) with the effective bath ladder."""
    psi1, psi2 = branch_vectors(params.alpha, params.beta)
    flag1 = np.zeros(ENV_LEVELS, dtype=complex)
    flag1[1] = 1.0
    flag0 = np.zeros(ENV_LEVELS, dtype=complex)
    flag0[0] = 1.0
    mat = flagged_mixture([(params.p, psi1, flag1), (1.0 - params.p, psi2, flag0)])
    return DensityMatrix(mat, PAIR_ENV_DIMS)


def build_w_state(x: float, y: float, z: float) -> PureState:
    """Single-excitation state x |0_A 0_B, 1> + y |0_A 1_B, 0> + z |1_A 0_B, 0>.

    The excitation is shared coherently between qubit A, qubit B, and the
    bath, so no flag basis can decohere it without disturbing the system.
    """
    amps = (x, y, z)
    if any(a == 0.0 for a in amps):
        raise ValueError("all three amplitudes must be non-zero")
    norm_sq = math.fsum(a * a for a in amps)
    if abs(norm_sq - 1.0) > 1e-12:
        raise ValueError(f"amplitudes have squared norm {norm_sq:.12g}, not 1")
    vec = np.zeros(2 * 2 * ENV_LEVELS, dtype=complex)
    vec[0 * 2 * ENV_LEVELS + 0 * ENV_LEVELS + 1] = x  # |0_A 0_B, 1>
    vec[0 * 2 * ENV_LEVELS + 1 * ENV_LEVELS + 0] = y  # |0_A 1_B, 0>
    vec[1 * 2 * ENV_LEVELS + 0 * ENV_LEVELS + 0] = z  # |1_A 0_B, 0>
    return PureState(vec, PAIR_ENV_DIMS)


def closed_form_coeffs(params: SpinStarParams) -> ClosedFormCoeffs:
    """Constant coefficients of the reduced pair state for the flagged mixture."""
    p = params.p
    sin_a, cos_a = math.sin(params.alpha), math.cos(params.alpha)
    sin_b, cos_b = math.sin(params.beta), math.cos(params.beta)
    return ClosedFormCoeffs(
        a=(1.0 - p) * sin_b**2,
        b=(1.0 - p) * cos_b**2,
        c=0.5 * (1.0 - p) * math.sin(2.0 * params.beta),
        d=p * sin_a**2,
        e=0.5 * p * math.sin(2.0 * params.alpha),
        f=p * cos_a**2,
        omega=params.omega,
        omega1=params.omega1,
    )


def closed_form_terms(coeffs: ClosedFormCoeffs, t: float) -> tuple[float, float]:
    """The two competing terms whose positive part sets the pair concurrence."""
    if t < 0.0:
        raise ValueError(f"time must be non-negative, got {t!r}")
    cos_w = math.cos(coeffs.omega * t)
    sin_w = math.sin(coeffs.omega * t)
    cos_w1 = math.cos(coeffs.omega1 * t)
    sin_w1 = math.sin(coeffs.omega1 * t)
    term1 = abs(coeffs.e * cos_w1 * cos_w) - math.sqrt(
        (coeffs.b * cos_w**2 + coeffs.f * sin_w**2) * (coeffs.a + coeffs.d * sin_w1**2)
    )
    term2 = abs(coeffs.c * cos_w) - math.sqrt(
        (coeffs.b * sin_w**2 + coeffs.f * cos_w**2) * (coeffs.d * cos_w1**2)
    )
    return term1, term2


def concurrence_closed_form(coeffs: ClosedFormCoeffs, t: float) -> float:
    """Concurrence of the reduced pair state at time t, in closed form."""
    term1, term2 = closed_form_terms(coeffs, t)
    return 2.0 * max(0.0, term1, term2)


def sector_unitary(params: SpinStarParams, t: float, levels: int = ENV_LEVELS) -> np.ndarray:
    """Propagator on (qubit B) x (bath ladder with the given level count).

    Each pair (|1_B, n>, |0_B, n+1>) rotates through angle Omega_n * t with
    the usual -i sin off-diagonal phase; |0_B, 0> is stationary.  The top
    rung |1_B, levels-1> has no partner inside the truncation and is left
    inert, which is exact whenever that state is unpopulated.
    """
    if levels < 2:
        raise ValueError(f"need at least two bath levels, got {levels}")
    dim = 2 * levels
    u = identity(dim)
    for n in range(levels - 1):
        theta = params.mode_frequency(n) * t
        hi = 1 * levels + n  # |1_B, n>
        lo = 0 * levels + (n + 1)  # |0_B, n+1>
        c, s = math.cos(theta), math.sin(theta)
        u[hi, hi] = c
        u[lo, lo] = c
        u[hi, lo] = -1j * s
        u[lo, hi] = -1j * s
    return u


def evolve_sector(state: DensityMatrix, t: float, params: SpinStarParams) -> DensityMatrix:
    """Evolve a state on (A, B, bath ladder) for time t, qubit A untouched.

    The state must have no population on the inert top rung |1_B, top>,
    otherwise amplitude would leak past the truncation and the sector
    propagator would be wrong; such states are rejected.
    """
    if len(state.dims) != 3 or state.dims.dims[:2] != (2, 2):
        raise ValueError(f"need factors (qubit, qubit, bath ladder), got {state.dims!r}")
    levels = state.dims.dims[2]
    top = [(a * 2 + 1) * levels + (levels - 1) for a in (0, 1)]
    population = float(sum(state.mat[i, i].real for i in top))
    if population > TRUNCATION_TOL:
        raise ValueError(
            f"population {population:.3e} on the top bath rung lies outside the truncation"
        )
    u_full = np.kron(identity(2), sector_unitary(params, t, levels))
    return DensityMatrix(u_full @ state.mat @ dagger(u_full), state.dims)


def build_full_hamiltonian(n_spins: int, g: float) -> np.ndarray:
    """Flip-flop coupling between qubit B and each of n_spins bath spins.

    Returns the dense generator on (B, bath) with B the leading factor:
    g * (raise_B x sum_i lower_i + lower_B x sum_i raise_i).
    """
    if not (isinstance(n_spins, (int, np.integer)) and 1 <= n_spins <= MAX_BATH_SPINS):
        raise ValueError(f"n_spins must be an integer in [1, {MAX_BATH_SPINS}], got {n_spins!r}")
    collective_raise = np.zeros((2**n_spins, 2**n_spins), dtype=complex)
    for i in range(n_spins):
        collective_raise += tensor(identity(2**i), SIGMA_PLUS, identity(2 ** (n_spins - 1 - i)))
    return g * (
        np.kron(SIGMA_PLUS, dagger(collective_raise)) + np.kron(SIGMA_MINUS, collective_raise)
    )


def dicke_vector(n_spins: int, n_excitations: int) -> np.ndarray:
    """Symmetric bath state: a uniform superposition at fixed excitation count."""
    if not 0 <= n_excitations <= n_spins:
        raise ValueError(
            f"excitation count {n_excitations} outside [0, {n_spins}] for {n_spins} spins"
        )
    vec = np.zeros(2**n_spins, dtype=complex)
    amp = 1.0 / math.sqrt(math.comb(n_spins, n_excitations))
    for positions in combinations(range(n_spins), n_excitations):
        index = sum(2 ** (n_spins - 1 - pos) for pos in positions)
        vec[index] = amp
    return vec


class BruteForceEvolver:
    """Full-Hilbert-space evolution of the flagged pair mixture.

    Embeds each branch into (A, B, all bath spins), diagonalizes the exact
    flip-flop generator once, and reduces to the pair at requested times.
    Kept dense, so the bath is capped at MAX_BATH_SPINS spins.
    """

    def __init__(self, params: SpinStarParams):
        if params.is_large_n:
            raise ValueError("the full-space oracle requires a finite bath size")
        n = int(params.env_spins)
        if n > MAX_BATH_SPINS:
            raise ValueError(f"bath size {n} exceeds the dense-oracle cap {MAX_BATH_SPINS}")
        self.params = params
        self._n = n
        hamiltonian = build_full_hamiltonian(n, params.coupling)
        self._vals, self._vecs = herm_eig(hamiltonian)
        psi1, psi2 = branch_vectors(params.alpha, params.beta)
        branches = [
            (params.p, np.kron(psi1, dicke_vector(n, 1))),
            (1.0 - params.p, np.kron(psi2, dicke_vector(n, 0))),
        ]
        # rows indexed by qubit A, columns by the (B, bath) eigenbasis
        self._branches = [
            (w, v.reshape(2, -1) @ self._vecs.conj()) for w, v in branches
        ]

    def reduced_state(self, t: float) -> DensityMatrix:
        """Reduced pair state at time t, all bath spins traced out."""
        if t < 0.0:
            raise ValueError(f"time must be non-negative, got {t!r}")
        phases = np.exp(-1j * self._vals * t)
        rho = np.zeros((4, 4), dtype=complex)
        for weight, coeffs in self._branches:
            evolved = (coeffs * phases) @ self._vecs.T
            m = evolved.reshape(4, 2**self._n)
            rho += weight * (m @ dagger(m))
        return DensityMatrix(rho, DimsSpec(("A", 2), ("B", 2)))


def brute_force_reduced_state(params: SpinStarParams, t: float) -> DensityMatrix:
    """One-shot full-space evolution; see BruteForceEvolver for grids."""
    return BruteForceEvolver(params).reduced_state(t)
