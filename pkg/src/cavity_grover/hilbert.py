"""State space for three multilevel atoms sharing one quantized cavity mode.

Atom 1 uses two levels (upper ``E``, lower ``G``). Atoms 2 and 3 carry an
additional level ``I`` below ``E`` that never couples to the cavity; it only
stores logical information. The product basis is the tensor product of the
atomic levels with a truncated Fock ladder for the photon number, ordered
lexicographically so that operator matrices and CSV output are bit-stable
across runs.

Logical qubits are encoded per atom: qubit 1 is 0 ↔ ``E``, 1 ↔ ``G``;
qubits 2 and 3 are 0 ↔ ``I``, 1 ↔ ``G``. The eight logical basis states all
live in the photon vacuum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import ConfigError


class AtomLevel(Enum):
    """Internal atomic level. ``I`` sits below ``E`` and is dark to the
    cavity coupling; ``G`` ↔ ``E`` is the cavity-coupled transition."""

    I = "i"
    G = "g"
    E = "e"


# Level orderings used for basis enumeration, per atom slot.
_ATOM1_LEVELS = (AtomLevel.E, AtomLevel.G)
_ATOM23_LEVELS = (AtomLevel.I, AtomLevel.G, AtomLevel.E)


class BasisState(NamedTuple):
    """One product state: three atomic levels and a photon number."""

    l1: AtomLevel
    l2: AtomLevel
    l3: AtomLevel
    n: int

    def atom_levels(self) -> tuple[AtomLevel, AtomLevel, AtomLevel]:
        return (self.l1, self.l2, self.l3)


@dataclass(frozen=True)
class QubitEncoding:
    """Fixed logical-bit → atomic-level map. Atom 1 encodes 0 in the upper
    level; atoms 2 and 3 encode 0 in the uninvolved level ``I``."""

    def level(self, atom: int, bit: int) -> AtomLevel:
        if atom not in (1, 2, 3):
            raise ConfigError(f"atom index must be 1..3, got {atom}")
        if bit not in (0, 1):
            raise ConfigError(f"logical bit must be 0 or 1, got {bit}")
        if bit == 1:
            return AtomLevel.G
        return AtomLevel.E if atom == 1 else AtomLevel.I


LOGICAL_ENCODING = QubitEncoding()


@dataclass(frozen=True)
class ProductBasis:
    """Ordered enumeration of all (l1, l2, l3, n) product states.

    Ordering is lexicographic with level order E < G for atom 1 and
    I < G < E for atoms 2 and 3, then increasing photon number. Total
    dimension is 18 * (photon_cutoff + 1).
    """

    photon_cutoff: int
    states: tuple[BasisState, ...]
    _index: dict[BasisState, int] = field(repr=False, compare=False)

    @property
    def dimension(self) -> int:
        return len(self.states)

    def position(self, state: BasisState) -> int:
        return self._index[state]


def build_basis(photon_cutoff: int) -> ProductBasis:
    """Enumerate the full product basis up to ``photon_cutoff`` photons.

    A cutoff of at least 1 is required: the resonant exchange moves one
    excitation into the mode, so a vacuum-only ladder cannot represent it.
    """
    if photon_cutoff < 1:
        raise ConfigError(
            f"photon_cutoff must be >= 1 (resonant exchange needs a photon slot), "
            f"got {photon_cutoff}"
        )
    states = tuple(
        BasisState(l1, l2, l3, n)
        for l1 in _ATOM1_LEVELS
        for l2 in _ATOM23_LEVELS
        for l3 in _ATOM23_LEVELS
        for n in range(photon_cutoff + 1)
    )
    index = {s: i for i, s in enumerate(states)}
    return ProductBasis(photon_cutoff=photon_cutoff, states=states, _index=index)


def state_index(
    basis: ProductBasis, l1: AtomLevel, l2: AtomLevel, l3: AtomLevel, n: int
) -> int:
    """Position of the product state (l1, l2, l3, n) in the enumeration.

    Bijective inverse of ``basis.states``; rejects levels or photon numbers
    outside the basis.
    """
    if l1 not in _ATOM1_LEVELS:
        raise ConfigError(f"atom 1 has no level {l1.name}; allowed: E, G")
    if l2 not in _ATOM23_LEVELS or l3 not in _ATOM23_LEVELS:
        raise ConfigError("atoms 2 and 3 must be one of I, G, E")
    if not 0 <= n <= basis.photon_cutoff:
        raise ConfigError(
            f"photon number {n} outside 0..{basis.photon_cutoff}"
        )
    return basis.position(BasisState(l1, l2, l3, n))


def computational_embedding(basis: ProductBasis) -> tuple[int, ...]:
    """Indices of the eight logical basis states |000⟩..|111⟩.

    All eight are photon-vacuum states; the order follows the binary value
    of the logical bits under the fixed encoding, i.e. position 0 is
    (E, I, I, 0) and position 7 is (G, G, G, 0).
    """
    out = []
    for value in range(8):
        bits = ((value >> 2) & 1, (value >> 1) & 1, value & 1)
        levels = tuple(
            LOGICAL_ENCODING.level(atom, bit) for atom, bit in enumerate(bits, start=1)
        )
        out.append(basis.position(BasisState(*levels, 0)))
    return tuple(out)


def excitation_number(basis: ProductBasis, position: int) -> int:
    """Photon number plus the count of atoms in the upper level.

    The resonant coupling conserves this quantity, which is what makes the
    photon truncation exact for logical inputs.
    """
    state = basis.states[position]
    return state.n + sum(1 for l in state.atom_levels() if l is AtomLevel.E)


@dataclass(frozen=True)
class PureState:
    """Complex amplitude vector over a basis.

    ``basis`` is the full product basis, or None for a bare 8-dimensional
    logical register. Amplitudes are stored read-only; under decay the
    vector is the unnormalized no-jump branch, so its squared norm is the
    probability that no photon has leaked.
    """

    amplitudes: np.ndarray
    basis: ProductBasis | None = None

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise ConfigError("amplitudes must be a 1-d vector")
        if self.basis is not None and len(amps) != self.basis.dimension:
            raise ConfigError(
                f"amplitude length {len(amps)} != basis dimension "
                f"{self.basis.dimension}"
            )
        if self.basis is None and len(amps) != 8:
            raise ConfigError(
                f"logical states are 8-dimensional, got length {len(amps)}"
            )
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return len(self.amplitudes)

    def squared_norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def overlap(self, other: "PureState") -> complex:
        """Inner product ⟨self|other⟩."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def basis_state(basis: ProductBasis, position: int) -> PureState:
    """Unit vector on one enumerated product state."""
    amps = np.zeros(basis.dimension, dtype=complex)
    amps[position] = 1.0
    return PureState(amps, basis)
