"""Iterated amplitude amplification on the logical register.

One search iteration applies the marked-state phase flip, then conjugates
the |000⟩ phase gate by Hadamard layers to invert all amplitudes about
their average. With the textbook gate the marked-state probability after k
iterations is the closed-form sin^2((2k+1) * asin(1/sqrt(8))), peaking near
k = 2 and again at k = 6.

Under cavity decay the register follows the unnormalized no-jump branch:
``p_find`` is then the joint probability that no photon ever leaked AND the
readout lands on the marked state, ``survival`` is the total no-jump
probability, and ``fidelity`` compares the surviving (renormalized) state
against the trajectory an exact gate would have produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dynamics import CavityParams
from .errors import ConfigError
from .gates import GateDiagonal, LogicalOperator, decayed_i000, hadamard3, ideal_i000, marked_gate
from .hilbert import PureState


@dataclass(frozen=True)
class MarkedState:
    """Three-bit label of the state the search is asked to find."""

    bits: str

    def __post_init__(self) -> None:
        if len(self.bits) != 3 or any(c not in "01" for c in self.bits):
            raise ConfigError(f"marked state must be three bits, got {self.bits!r}")

    @property
    def index(self) -> int:
        return int(self.bits, 2)

    def __str__(self) -> str:
        return self.bits


class GateVariant(Enum):
    """Which |000⟩ phase gate drives the iteration."""

    EXACT = "exact"          # textbook diag(-1, 1, ..., 1)
    LOSSLESS = "lossless"    # realized by a lossless cavity (short |001⟩ entry)
    DECAYED = "decayed"      # realized under cavity decay (damped diagonal)


@dataclass(frozen=True)
class SearchRecord:
    """Per-iteration search outcome on the no-jump branch."""

    iteration: int
    p_find: float
    survival: float
    fidelity: float

    def __post_init__(self) -> None:
        values = (self.p_find, self.survival, self.fidelity)
        if not all(math.isfinite(v) for v in values):
            raise ConfigError(f"search record has non-finite fields: {values}")
        if self.p_find > self.survival + 1e-12:
            raise ConfigError(
                f"p_find={self.p_find} exceeds survival={self.survival}"
            )


def initial_state() -> PureState:
    """Uniform superposition over all eight logical states, amplitude
    1/(2*sqrt(2)) each; equals the Hadamard layer applied to |000⟩."""
    return PureState(np.full(8, 1.0 / (2.0 * math.sqrt(2.0)), dtype=complex))


def grover_step(state: PureState, tau, i000: LogicalOperator) -> PureState:
    """One search iteration: the marked-state flip first, then the Hadamard /
    phase-gate / Hadamard sandwich. Output is unnormalized when ``i000`` is
    the decayed gate."""
    h3 = hadamard3()
    flip = marked_gate(tau, i000)
    return h3.apply(i000.apply(h3.apply(flip.apply(state))))


def _base_gate(variant: GateVariant, params: CavityParams) -> LogicalOperator:
    if variant is GateVariant.EXACT:
        return ideal_i000(params, exact=True)
    if variant is GateVariant.LOSSLESS:
        return ideal_i000(params, exact=False)
    return decayed_i000(params)[0]


def run_search(
    tau, k_max: int, variant: GateVariant, params: CavityParams
) -> list[SearchRecord]:
    """Iterate the search ``k_max`` times and record probability, survival,
    and fidelity against the exact-gate trajectory after each iteration."""
    if k_max < 1:
        raise ConfigError(f"k_max must be >= 1, got {k_max}")
    marked = tau if isinstance(tau, MarkedState) else MarkedState(str(tau))
    gate = _base_gate(variant, params)
    reference = _base_gate(GateVariant.EXACT, params)

    state = initial_state()
    ideal = initial_state()
    records = []
    for k in range(1, k_max + 1):
        state = grover_step(state, marked, gate)
        ideal = grover_step(ideal, marked, reference)
        survival = state.squared_norm()
        p_find = float(abs(state.amplitudes[marked.index]) ** 2)
        fidelity = float(abs(ideal.overlap(state)) ** 2 / survival)
        records.append(
            SearchRecord(iteration=k, p_find=p_find, survival=survival, fidelity=fidelity)
        )
    return records


def phase_gate_success(state, diag: GateDiagonal) -> float:
    """Success probability of one phase gate on a register state.

    ``state`` carries the eight coefficients in the convention where the
    physical amplitudes are coefficient/(2*sqrt(2)), so the squared
    coefficients must sum to 8. Each of the first four slots survives the
    gate with its damping factor squared; the rest pass untouched:

        ( |c3|^2*alpha^2 + |c2|^2*beta^2 + |c1|^2*gamma^2 + |c0|^2*mu^2
          + |c4|^2 + |c5|^2 + |c6|^2 + |c7|^2 ) / 8
    """
    coeffs = state.amplitudes if isinstance(state, PureState) else np.asarray(state, dtype=complex)
    if coeffs.shape != (8,):
        raise ConfigError(f"expected 8 coefficients, got shape {coeffs.shape}")
    total = float(np.sum(np.abs(coeffs) ** 2))
    if abs(total - 8.0) > 1e-9:
        raise ConfigError(
            f"squared coefficients must sum to 8 (got {total}); "
            "amplitudes carry a 1/(2*sqrt(2)) prefactor in this convention"
        )
    weights = np.array(
        [diag.mu, diag.gamma, diag.beta, diag.alpha, 1.0, 1.0, 1.0, 1.0]
    )
    return float(np.sum(np.abs(coeffs) ** 2 * weights**2) / 8.0)


def closed_form_probability(k: int) -> float:
    """Marked-state probability after k iterations with the textbook gate:
    sin^2((2k+1) * asin(1/sqrt(8)))."""
    if k < 0:
        raise ConfigError(f"iteration count must be >= 0, got {k}")
    theta = math.asin(1.0 / math.sqrt(8.0))
    return math.sin((2 * k + 1) * theta) ** 2
