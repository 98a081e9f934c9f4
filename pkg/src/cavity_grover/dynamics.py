"""Resonant atom-cavity dynamics, with and without photon loss.

The interaction Hamiltonian exchanges one excitation between each atom's
``G`` ↔ ``E`` transition and the cavity mode,

    H = sum_j omega_j * (a† S_j^- + a S_j^+),

so states only mix within blocks of equal excitation number. Weak cavity
decay at rate ``kappa`` is treated on the no-jump quantum-trajectory branch
by the non-Hermitian effective Hamiltonian H_eff = H - i*(kappa/2)*a†a; the
norm the state loses is the probability that a photon leaked.

Simultaneous resonant evolution for one gate time realizes a three-qubit
conditional phase flip when the couplings are designed in the ratio
1 : sqrt(35) : 8 — each logical state then completes an integer number of
Rabi cycles except |000⟩, which picks up a sign. ``extract_gate`` recovers
the realized logical operator directly from the simulated dynamics and is
the validation oracle for the closed-form gate matrices in ``gates``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np
from scipy.linalg import expm

if TYPE_CHECKING:
    from .gates import LogicalOperator

from .errors import ConfigError, CutoffError, NumericalError
from .hilbert import (
    AtomLevel,
    BasisState,
    ProductBasis,
    PureState,
    basis_state,
    build_basis,
    computational_embedding,
)

# Coupling ratios that make every logical Rabi cycle close after one gate
# time: block frequencies sqrt(36) = 6 (atoms 1+2) and sqrt(100) = 10 (all
# three) are integers; only sqrt(65) (atoms 1+3) is not.
DESIGNED_RATIOS = (1.0, math.sqrt(35.0), 8.0)

# Amplitude allowed on truncation-sensitive Fock states before a run aborts.
TOP_LAYER_TOLERANCE = 1e-10


@dataclass(frozen=True)
class CavityParams:
    """Couplings of the three atoms to the mode, decay rate, and truncation.

    All rates are angular frequencies in rad/s. ``kappa`` must stay below
    4*omega[0] so that the decay-shifted exchange frequency of the weakest-
    coupled atom remains real (underdamped regime).
    """

    omega: tuple[float, float, float]
    kappa: float = 0.0
    photon_cutoff: int = 1

    def __post_init__(self) -> None:
        if len(self.omega) != 3 or any(w <= 0 for w in self.omega):
            raise ConfigError(f"couplings must be three positive rates, got {self.omega}")
        if self.kappa < 0:
            raise ConfigError(f"decay rate must be >= 0, got {self.kappa}")
        if self.kappa >= 4.0 * self.omega[0]:
            raise ConfigError(
                f"kappa={self.kappa} >= 4*omega1={4 * self.omega[0]}: "
                "atom-1 exchange would be overdamped"
            )
        if self.photon_cutoff < 1:
            raise ConfigError(f"photon_cutoff must be >= 1, got {self.photon_cutoff}")

    @classmethod
    def designed(
        cls, omega1c: float, kappa: float = 0.0, photon_cutoff: int = 1
    ) -> "CavityParams":
        """Parameters with the couplings locked to 1 : sqrt(35) : 8."""
        r1, r2, r3 = DESIGNED_RATIOS
        return cls(
            omega=(omega1c * r1, omega1c * r2, omega1c * r3),
            kappa=kappa,
            photon_cutoff=photon_cutoff,
        )

    def has_designed_ratios(self, rel_tol: float = 1e-9) -> bool:
        w1, w2, w3 = self.omega
        return (
            math.isclose(w2 / w1, DESIGNED_RATIOS[1], rel_tol=rel_tol)
            and math.isclose(w3 / w1, DESIGNED_RATIOS[2], rel_tol=rel_tol)
        )


class EvolutionMethod(Enum):
    MATRIX_EXPONENTIAL = "matrix_exponential"
    FIXED_STEP_INTEGRATOR = "fixed_step_integrator"


@dataclass(frozen=True)
class EvolutionSettings:
    """How to propagate: dense matrix exponential (reference) or a fixed-step
    4th-order Runge-Kutta integrator (independent cross-check)."""

    method: EvolutionMethod = EvolutionMethod.MATRIX_EXPONENTIAL
    step_count: int = 4096

    def __post_init__(self) -> None:
        if (
            self.method is EvolutionMethod.FIXED_STEP_INTEGRATOR
            and self.step_count < 100
        ):
            raise ConfigError(
                f"fixed-step integration needs step_count >= 100, got {self.step_count}"
            )


DEFAULT_SETTINGS = EvolutionSettings()


def decay_shifted_frequency(omega: float, kappa: float) -> float:
    """Exchange frequency sqrt(omega^2 - kappa^2/16) of a two-state block
    whose excited partner decays at ``kappa``."""
    arg = omega * omega - kappa * kappa / 16.0
    if arg <= 0.0:
        raise ConfigError(
            f"kappa={kappa} overdamps a block with frequency omega={omega}"
        )
    return math.sqrt(arg)


def gate_time(params: CavityParams) -> float:
    """Interaction time for one conditional phase gate: a half period of the
    atom-1 exchange, pi / sqrt(omega1^2 - kappa^2/16), in seconds."""
    return math.pi / decay_shifted_frequency(params.omega[0], params.kappa)


def exchange_hamiltonian(
    omega: tuple[float, float, float], basis: ProductBasis
) -> np.ndarray:
    """Resonant exchange matrix for an arbitrary coupling triple, in rad/s.

    Couples (..E.., n) ↔ (..G.., n+1) with strength omega_j * sqrt(n+1) for
    each atom j; atoms in level ``I`` are untouched. Zero entries switch an
    atom's interaction off (an atom that has left the mode). Hermitian, no
    diagonal terms, conserves excitation number.
    """
    dim = basis.dimension
    h = np.zeros((dim, dim), dtype=complex)
    for i, state in enumerate(basis.states):
        levels = list(state.atom_levels())
        for j in range(3):
            if levels[j] is AtomLevel.E and state.n + 1 <= basis.photon_cutoff:
                lowered = levels.copy()
                lowered[j] = AtomLevel.G
                k = basis.position(BasisState(*lowered, state.n + 1))
                amp = omega[j] * math.sqrt(state.n + 1)
                h[k, i] += amp
                h[i, k] += amp
    return h


def build_hamiltonian(params: CavityParams, basis: ProductBasis) -> np.ndarray:
    """Dense matrix of the resonant exchange Hamiltonian for ``params``."""
    return exchange_hamiltonian(params.omega, basis)


def build_effective_hamiltonian(params: CavityParams, basis: ProductBasis) -> np.ndarray:
    """Non-Hermitian no-jump generator H - i*(kappa/2)*a†a, in rad/s.

    The anti-Hermitian part is diagonal: -i*(kappa/2)*n on each Fock layer.
    Equal to ``build_hamiltonian`` when kappa = 0.
    """
    h = build_hamiltonian(params, basis)
    for i, state in enumerate(basis.states):
        if state.n:
            h[i, i] += -0.5j * params.kappa * state.n
    return h


def _truncation_sensitive(basis: ProductBasis) -> list[int]:
    # Top-layer states with an atom in E couple to the (absent) next Fock
    # layer; amplitude there means the truncation is biting.
    return [
        i
        for i, s in enumerate(basis.states)
        if s.n == basis.photon_cutoff
        and any(l is AtomLevel.E for l in s.atom_levels())
    ]


def _check_result(amps: np.ndarray, basis: ProductBasis | None) -> None:
    if not np.all(np.isfinite(amps.view(float))):
        raise NumericalError("evolution produced non-finite amplitudes")
    if basis is not None:
        sensitive = _truncation_sensitive(basis)
        if sensitive:
            worst = float(np.abs(amps[sensitive]).max())
            if worst > TOP_LAYER_TOLERANCE:
                raise CutoffError(
                    f"amplitude {worst:.3e} on truncation-sensitive Fock states; "
                    f"raise photon_cutoff above {basis.photon_cutoff}"
                )


def evolve(
    h: np.ndarray,
    t: float,
    psi0: PureState,
    settings: EvolutionSettings = DEFAULT_SETTINGS,
) -> PureState:
    """Propagate psi0 by exp(-i*H*t).

    For a non-Hermitian H this is the unnormalized no-jump branch. The
    fixed-step method integrates dpsi/dt = -i*H*psi with classic RK4 over
    ``settings.step_count`` uniform steps.
    """
    if t < 0:
        raise ConfigError(f"evolution time must be >= 0, got {t}")
    if h.shape != (psi0.dimension, psi0.dimension):
        raise ConfigError(
            f"operator shape {h.shape} does not match state dimension {psi0.dimension}"
        )
    if settings.method is EvolutionMethod.MATRIX_EXPONENTIAL:
        amps = expm(-1j * h * t) @ psi0.amplitudes
    else:
        amps = _rk4(h, t, psi0.amplitudes, settings.step_count)
    _check_result(amps, psi0.basis)
    return PureState(amps, psi0.basis)


def _rk4(h: np.ndarray, t: float, amps: np.ndarray, steps: int) -> np.ndarray:
    gen = -1j * h
    dt = t / steps
    y = amps.astype(complex)
    for _ in range(steps):
        k1 = gen @ y
        k2 = gen @ (y + 0.5 * dt * k1)
        k3 = gen @ (y + 0.5 * dt * k2)
        k4 = gen @ (y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


@dataclass(frozen=True)
class GateExtract:
    """Realized logical gate recovered from simulation.

    ``restricted`` is the 8x8 operator on the logical subspace (columns in
    logical order |000⟩..|111⟩); ``leakage`` is the squared amplitude each
    column left outside that subspace. Column norm plus leakage is 1 for
    lossless evolution and below 1 under decay.
    """

    restricted: "LogicalOperator"
    leakage: np.ndarray

    def __post_init__(self) -> None:
        leak = np.asarray(self.leakage, dtype=float).copy()
        leak.flags.writeable = False
        object.__setattr__(self, "leakage", leak)
        cols = np.sum(np.abs(self.restricted.matrix) ** 2, axis=0)
        if np.any(cols + leak > 1.0 + 1e-9):
            raise NumericalError("column norm plus leakage exceeds 1")


def extract_gate(
    params: CavityParams,
    t: float,
    settings: EvolutionSettings = DEFAULT_SETTINGS,
) -> GateExtract:
    """Simulate the gate: evolve each logical basis state under the no-jump
    Hamiltonian for time ``t`` and project back onto the logical subspace."""
    from .gates import LogicalOperator  # here to avoid a module cycle

    if t <= 0:
        raise ConfigError(f"gate extraction needs t > 0, got {t}")
    basis = build_basis(params.photon_cutoff)
    h_eff = build_effective_hamiltonian(params, basis)
    embedding = computational_embedding(basis)

    matrix = np.zeros((8, 8), dtype=complex)
    leakage = np.zeros(8)
    for col, pos in enumerate(embedding):
        final = evolve(h_eff, t, basis_state(basis, pos), settings)
        projected = final.amplitudes[list(embedding)]
        matrix[:, col] = projected
        leakage[col] = final.squared_norm() - float(
            np.sum(np.abs(projected) ** 2)
        )
    return GateExtract(restricted=LogicalOperator(matrix), leakage=leakage)


def coupling_at_position(z: float, omega0: float, lambda0: float) -> float:
    """Coupling omega0 * cos(2*pi*z/lambda0) seen by an atom crossing the
    standing-wave mode at transverse offset ``z`` (meters)."""
    if lambda0 <= 0:
        raise ConfigError(f"mode wavelength must be > 0, got {lambda0}")
    return omega0 * math.cos(2.0 * math.pi * z / lambda0)


def positions_for_ratio(omega0: float, lambda0: float) -> tuple[float, float, float]:
    """Crossing offsets (z1, z2, z3) that realize couplings in the designed
    ratio 1 : sqrt(35) : 8.

    Atom 3 crosses the antinode (z3 = 0, full coupling omega0); atoms 1 and
    2 sit on the first cosine lobe where the mode has dropped to 1/8 and
    sqrt(35)/8 of its peak.
    """
    if lambda0 <= 0:
        raise ConfigError(f"mode wavelength must be > 0, got {lambda0}")
    scale = lambda0 / (2.0 * math.pi)
    z1 = scale * math.acos(1.0 / 8.0)
    z2 = scale * math.acos(math.sqrt(35.0) / 8.0)
    return (z1, z2, 0.0)
