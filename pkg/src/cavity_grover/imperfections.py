"""Closed-form error budgets for two experimental imperfections.

Timing mismatch: atom 1 is slightly slow and keeps interacting for an extra
``delta_t`` after atoms 2 and 3 have left the mode. During the overrun each
damped diagonal entry of the phase gate is multiplied by the atom-1 return
amplitude, and the |001⟩ entry also picks up a cross term from the partly
open atoms-1+3 Rabi cycle. A full-dynamics oracle cross-checks the closed
form.

Coupling offsets: some of the four cavities in a two-iteration search run
with couplings off their design values by a relative offset ``eta``. The
closed form raises each per-gate damping factor to the number of imperfect
gates, with the coupling ratios recomputed from the offset couplings. A
uniform offset rescales all couplings together and leaves the ratios, and
hence this infidelity, unchanged; only ratio-breaking models (the default
perturbs atom 1 alone) produce any ``eta`` dependence.

Both infidelities are 1 minus a uniform-input fidelity: the gate is applied
to the uniform superposition and the result is compared, after
renormalization, with what the exact gate sequence would have produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    DEFAULT_SETTINGS,
    CavityParams,
    EvolutionSettings,
    build_effective_hamiltonian,
    decay_shifted_frequency,
    evolve,
    exchange_hamiltonian,
    gate_time,
)
from .errors import ConfigError
from .gates import _pair13_phase, decayed_i000
from .hilbert import PureState, build_basis, computational_embedding

OFFSET_MODELS = ("atom1", "uniform", "per_atom")


@dataclass(frozen=True)
class TimingScenario:
    """Atom 1 exits ``delta_t`` seconds after atoms 2 and 3 (who leave on
    time, after one gate time)."""

    delta_t: float
    params: CavityParams

    def __post_init__(self) -> None:
        if self.delta_t < 0:
            raise ConfigError(f"delta_t must be >= 0, got {self.delta_t}")
        if self.delta_t > gate_time(self.params):
            raise ConfigError(
                f"delta_t={self.delta_t} exceeds one gate time; "
                "the overrun model only covers small delays"
            )


@dataclass(frozen=True)
class OffsetScenario:
    """``chi`` of the four phase-gate cavities run with offset couplings.

    ``model`` picks how the offset maps onto the triple: ``atom1`` scales
    only the first coupling by (1 + eta), ``uniform`` scales all three,
    ``per_atom`` applies individual factors (1 + eta_j) from
    ``per_atom_eta``. The imperfect cavities are assumed identical.
    """

    eta: float
    chi: int
    params: CavityParams
    model: str = "atom1"
    per_atom_eta: tuple[float, float, float] | None = None

    def __post_init__(self) -> None:
        if self.chi not in (1, 2, 3, 4):
            raise ConfigError(f"chi counts imperfect cavities, must be 1..4, got {self.chi}")
        if abs(self.eta) >= 1.0:
            raise ConfigError(f"|eta| must be < 1, got {self.eta}")
        if self.model not in OFFSET_MODELS:
            raise ConfigError(f"offset model must be one of {OFFSET_MODELS}, got {self.model!r}")
        if self.model == "per_atom":
            if self.per_atom_eta is None or len(self.per_atom_eta) != 3:
                raise ConfigError("per_atom model needs per_atom_eta=(eta1, eta2, eta3)")
            if any(abs(e) >= 1.0 for e in self.per_atom_eta):
                raise ConfigError(f"per-atom offsets must satisfy |eta| < 1, got {self.per_atom_eta}")


def _uniform_register() -> np.ndarray:
    return np.full(8, 1.0 / (2.0 * math.sqrt(2.0)), dtype=complex)


def _infidelity_vs(reference: np.ndarray, output: np.ndarray) -> float:
    """1 - |<reference|output>|^2 / <output|output> for an unnormalized
    output state and a normalized reference."""
    overlap = abs(np.vdot(reference, output)) ** 2
    return float(1.0 - overlap / np.vdot(output, output).real)


def timing_infidelity(scenario: TimingScenario) -> float:
    """Closed-form gate infidelity caused by atom 1 overstaying by delta_t.

    The overrun multiplies each damped diagonal entry by the atom-1 return
    amplitude

        xi = exp(-kappa*dt/4) * [cos(a1*dt) + kappa/(4*a1) * sin(a1*dt)],

    with a1 = sqrt(w1^2 - kappa^2/16), and shifts the |001⟩ entry by the
    atoms-1+3 cross amplitude

        w1^2/(a1*a13) * exp(-kappa*dt/4) * sin(a1*dt) * sin(sqrt(65)*pi),

    with a13 = sqrt(w1^2 + w3^2 - kappa^2/16). The result is the uniform-
    input infidelity of the shifted diagonal.
    """
    params = scenario.params
    dt = scenario.delta_t
    w1, _, w3 = params.omega
    kappa = params.kappa
    a1 = decay_shifted_frequency(w1, kappa)
    a13 = decay_shifted_frequency(math.hypot(w1, w3), kappa)
    _, diag = decayed_i000(params)

    envelope = math.exp(-kappa * dt / 4.0)
    xi = envelope * (math.cos(a1 * dt) + kappa / (4.0 * a1) * math.sin(a1 * dt))
    cross = (
        w1 * w1 / (a1 * a13)
        * envelope
        * math.sin(a1 * dt)
        * math.sin(_pair13_phase(params))
    )

    entries = np.array(
        [
            -xi * diag.mu,
            xi * diag.gamma - cross,
            xi * diag.beta,
            xi * diag.alpha,
            1.0,
            1.0,
            1.0,
            1.0,
        ]
    )
    u = _uniform_register()
    reference = u.copy()
    reference[0] = -reference[0]
    return _infidelity_vs(reference, entries * u)


def timing_oracle(
    scenario: TimingScenario, settings: EvolutionSettings = DEFAULT_SETTINGS
) -> float:
    """Full-dynamics counterpart of ``timing_infidelity``.

    Evolves each logical basis state under the complete no-jump Hamiltonian
    for one gate time, then under the atom-1-only coupling (atoms 2 and 3
    gone, decay still on) for delta_t, projects onto the logical subspace,
    and evaluates the same uniform-input infidelity.
    """
    params = scenario.params
    basis = build_basis(params.photon_cutoff)
    h_full = build_effective_hamiltonian(params, basis)
    h_atom1 = exchange_hamiltonian((params.omega[0], 0.0, 0.0), basis)
    for i, state in enumerate(basis.states):
        if state.n:
            h_atom1[i, i] += -0.5j * params.kappa * state.n

    embedding = computational_embedding(basis)
    t0 = gate_time(params)
    gate = np.zeros((8, 8), dtype=complex)
    for col, pos in enumerate(embedding):
        amps = np.zeros(basis.dimension, dtype=complex)
        amps[pos] = 1.0
        mid = evolve(h_full, t0, PureState(amps, basis), settings)
        final = evolve(h_atom1, scenario.delta_t, mid, settings)
        gate[:, col] = final.amplitudes[list(embedding)]

    u = _uniform_register()
    reference = u.copy()
    reference[0] = -reference[0]
    return _infidelity_vs(reference, gate @ u)


def offset_couplings(scenario: OffsetScenario) -> tuple[float, float, float]:
    """Coupling triple inside an imperfect cavity under the chosen model."""
    w1, w2, w3 = scenario.params.omega
    if scenario.model == "atom1":
        return ((1.0 + scenario.eta) * w1, w2, w3)
    if scenario.model == "uniform":
        s = 1.0 + scenario.eta
        return (s * w1, s * w2, s * w3)
    e1, e2, e3 = scenario.per_atom_eta
    return ((1.0 + e1) * w1, (1.0 + e2) * w2, (1.0 + e3) * w3)


def coupling_offset_infidelity(scenario: OffsetScenario) -> float:
    """Closed-form infidelity of a two-iteration search (four phase gates)
    when ``chi`` of the four cavities carry offset couplings.

    Each four-gate composite damping factor multiplies ``chi`` imperfect-
    cavity factors (ratios recomputed from the offset couplings, decay and
    gate time kept at their design values) with ``4 - chi`` design factors.
    The |000⟩ factor does not depend on the coupling ratios at all, so it is
    offset-independent; under a uniform offset the ratios cancel and the
    whole infidelity is exactly independent of eta.
    """
    params = scenario.params
    t0 = gate_time(params)
    damp = math.exp(-params.kappa * t0 / 4.0)
    _, base = decayed_i000(params)

    p1, p2, p3 = offset_couplings(scenario)
    p1sq = p1 * p1
    phase = _pair13_phase(params)
    primed_mu = damp
    primed_gamma = 1.0 - p1sq / (p1sq + p3 * p3) * (1.0 - damp * math.cos(phase))
    primed_beta = 1.0 - p1sq / (p1sq + p2 * p2) * (1.0 - damp)
    primed_alpha = 1.0 - p1sq / (p1sq + p2 * p2 + p3 * p3) * (1.0 - damp)

    chi = scenario.chi
    rest = 4 - chi
    entries = np.array(
        [
            primed_mu**chi * base.mu**rest,
            primed_gamma**chi * base.gamma**rest,
            primed_beta**chi * base.beta**rest,
            primed_alpha**chi * base.alpha**rest,
            1.0,
            1.0,
            1.0,
            1.0,
        ]
    )
    # After an even number of phase gates the |000⟩ sign flips cancel, so
    # the exact four-gate reference is the uniform state itself.
    u = _uniform_register()
    return _infidelity_vs(u, entries * u)
