"""Closed-form 8x8 operators on the logical register.

Everything here acts in the logical order |000⟩..|111⟩ fixed by
``hilbert.computational_embedding``. The conditional phase gate comes in
three flavors:

* the textbook reflection diag(-1, 1, ..., 1),
* the gate a lossless cavity actually realizes, whose |001⟩ entry falls
  short of 1 because the atoms-1+3 Rabi cycle (frequency sqrt(65) in units
  of the weakest coupling) does not close after one gate time, and
* the decaying-cavity gate, whose first four diagonal entries are damped by
  the photon population each logical state cycles through the mode.

Every other marked state's phase gate is the |000⟩ gate conjugated by bit
flips, and the inversion-about-average operator is the same gate sandwiched
between Hadamard layers, so one physical gate drives the whole search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import CavityParams, gate_time
from .errors import ConfigError
from .hilbert import PureState

_UNITARY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class LogicalOperator:
    """Dense 8x8 complex matrix on the logical register."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (8, 8):
            raise ConfigError(f"logical operators are 8x8, got shape {m.shape}")
        if not np.all(np.isfinite(m.view(float))):
            raise ConfigError("logical operator has non-finite entries")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def unitary(self) -> bool:
        gram = self.matrix.conj().T @ self.matrix
        return bool(np.abs(gram - np.eye(8)).max() <= _UNITARY_TOLERANCE)

    def diagonal(self) -> np.ndarray:
        return np.diag(self.matrix).copy()

    def __matmul__(self, other: "LogicalOperator") -> "LogicalOperator":
        return LogicalOperator(self.matrix @ other.matrix)

    def apply(self, state: PureState) -> PureState:
        if state.dimension != 8:
            raise ConfigError("logical operators act on 8-dimensional states")
        return PureState(self.matrix @ state.amplitudes, state.basis)


@dataclass(frozen=True)
class GateDiagonal:
    """Damping factors (mu, gamma, beta, alpha) of the decaying phase gate.

    The realized gate is diag(-mu, gamma, beta, alpha, 1, 1, 1, 1): mu on
    |000⟩, gamma on |001⟩, beta on |010⟩, alpha on |011⟩; the four states
    with qubit 1 in logical 1 never excite the mode and stay exact.
    """

    mu: float
    gamma: float
    beta: float
    alpha: float

    def __post_init__(self) -> None:
        for name, value in (
            ("mu", self.mu),
            ("gamma", self.gamma),
            ("beta", self.beta),
            ("alpha", self.alpha),
        ):
            if not 0.0 < value <= 1.0:
                raise ConfigError(f"gate diagonal factor {name}={value} outside (0, 1]")

    def operator(self) -> LogicalOperator:
        return LogicalOperator(
            np.diag([-self.mu, self.gamma, self.beta, self.alpha, 1.0, 1.0, 1.0, 1.0])
        )


def hadamard3() -> LogicalOperator:
    """Tensor cube of the single-qubit Hadamard; unitary and involutive."""
    h1 = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    return LogicalOperator(np.kron(np.kron(h1, h1), h1))


def pauli_x(qubit: int) -> LogicalOperator:
    """Bit flip on one logical qubit (1-based); a self-inverse permutation."""
    if qubit not in (1, 2, 3):
        raise ConfigError(f"qubit index must be 1..3, got {qubit}")
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    eye = np.eye(2)
    factors = [eye, eye, eye]
    factors[qubit - 1] = x
    return LogicalOperator(np.kron(np.kron(factors[0], factors[1]), factors[2]))


def _require_designed(params: CavityParams) -> None:
    if not params.has_designed_ratios():
        raise ConfigError(
            f"couplings {params.omega} are not in the designed ratio 1:sqrt(35):8"
        )


def _pair13_phase(params: CavityParams) -> float:
    # Phase advanced by the atoms-1+3 block over one gate time at kappa=0:
    # sqrt(w1^2 + w3^2) * pi / w1, i.e. sqrt(65)*pi at the designed ratios.
    w1, _, w3 = params.omega
    return math.sqrt(w1 * w1 + w3 * w3) / w1 * math.pi


def residual_gate_entry(params: CavityParams) -> float:
    """Lossless-gate diagonal entry on |001⟩: the atoms-1+3 return amplitude
    (w3^2 + w1^2*cos(sqrt(65)*pi)) / (w1^2 + w3^2), about 0.9997."""
    _require_designed(params)
    w1, _, w3 = params.omega
    weight = w1 * w1 / (w1 * w1 + w3 * w3)
    return weight * math.cos(_pair13_phase(params)) + (1.0 - weight)


def ideal_i000(params: CavityParams, exact: bool = False) -> LogicalOperator:
    """Conditional phase flip on |000⟩ without cavity decay.

    With ``exact`` the textbook reflection diag(-1, 1, ..., 1) used in
    algorithm identities; otherwise the gate a lossless cavity realizes,
    with the slightly short |001⟩ entry.
    """
    _require_designed(params)
    diag = np.ones(8)
    diag[0] = -1.0
    if not exact:
        diag[1] = residual_gate_entry(params)
    return LogicalOperator(np.diag(diag))


def decayed_i000(params: CavityParams) -> tuple[LogicalOperator, GateDiagonal]:
    """Phase gate realized under cavity decay, evaluated at the gate time.

    Each damping factor is the fraction of one gate time the logical state
    keeps a photon in the mode, weighted by that state's share of coupling
    to atom 1:

        mu    = exp(-kappa*t/4)                                (|000⟩)
        gamma = 1 - w1^2/(w1^2+w3^2) * (1 - mu*cos(sqrt(65)*pi))  (|001⟩)
        beta  = 1 - w1^2/(w1^2+w2^2) * (1 - mu)                (|010⟩)
        alpha = 1 - w1^2/(w1^2+w2^2+w3^2) * (1 - mu)           (|011⟩)

    Sub-leading oscillatory corrections of order kappa/w1 vanish at the
    gate time for the |000⟩ block and are dropped for the others; the
    dynamical oracle ``dynamics.extract_gate`` agrees to about 1e-3 at
    kappa = w1/10.
    """
    _require_designed(params)
    w1, w2, w3 = params.omega
    t = gate_time(params)
    damp = math.exp(-params.kappa * t / 4.0)
    w1sq = w1 * w1
    diag = GateDiagonal(
        mu=damp,
        gamma=1.0 - w1sq / (w1sq + w3 * w3) * (1.0 - damp * math.cos(_pair13_phase(params))),
        beta=1.0 - w1sq / (w1sq + w2 * w2) * (1.0 - damp),
        alpha=1.0 - w1sq / (w1sq + w2 * w2 + w3 * w3) * (1.0 - damp),
    )
    return diag.operator(), diag


def _tau_bits(tau) -> tuple[int, int, int]:
    bits = getattr(tau, "bits", tau)
    if isinstance(bits, str):
        if len(bits) != 3 or any(c not in "01" for c in bits):
            raise ConfigError(f"marked state must be three bits, got {bits!r}")
        value = int(bits, 2)
    elif isinstance(bits, int):
        value = bits
    else:
        raise ConfigError(f"cannot interpret marked state {tau!r}")
    if not 0 <= value <= 7:
        raise ConfigError(f"marked state index {value} outside 0..7")
    return ((value >> 2) & 1, (value >> 1) & 1, value & 1)


def marked_gate(tau, base: LogicalOperator) -> LogicalOperator:
    """Phase gate for an arbitrary marked state: conjugate the |000⟩ gate by
    a bit flip on every qubit where ``tau`` has a 1.

    With the exact base this equals the reflection I - 2|tau⟩⟨tau|; with a
    damped base the diagonal factors follow the permuted slots, so the
    marked state itself carries the -mu entry.
    """
    gate = base
    for qubit, bit in enumerate(_tau_bits(tau), start=1):
        if bit:
            flip = pauli_x(qubit)
            gate = flip @ gate @ flip
    return gate


def diffusion() -> LogicalOperator:
    """Inversion about the average: entries 2/8 - delta_ij. Equals
    -H3 * diag(-1, 1, ..., 1) * H3 with H3 the Hadamard layer."""
    return LogicalOperator(np.full((8, 8), 0.25) - np.eye(8))
