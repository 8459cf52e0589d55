"""Parameter records for the two dispersive cavity stages.

All quantities are expressed in units of a reference coupling, so times fed
to the propagators are dimensionless products (coupling times time).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

# Detuning-to-coupling ratio above which the dispersive elimination behind
# the effective propagators is considered trustworthy.  Advisory only.
DISPERSIVE_RATIO = 10.0


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class TwoModeParams:
    """Couplings and detunings of one inner atom pair in a two-mode cavity.

    The two atoms exchange excitation through two-photon transitions that
    are far detuned from both cavity modes.  ``g2``/``g3`` are the atom-field
    couplings and ``delta2``/``delta3`` the two-photon detunings of the two
    atoms.

    Attributes
    ----------
    g2, g3 : float
        Atom-field couplings, strictly positive.
    delta2, delta3 : float
        Two-photon detunings, nonzero.
    """

    g2: float
    g3: float
    delta2: float
    delta3: float

    def __post_init__(self) -> None:
        for name in ("g2", "g3", "delta2", "delta3"):
            _require_finite(name, getattr(self, name))
        if self.g2 <= 0 or self.g3 <= 0:
            raise ValueError("couplings g2 and g3 must be strictly positive")
        if self.delta2 == 0 or self.delta3 == 0:
            raise ValueError("detunings delta2 and delta3 must be nonzero")

    @property
    def shift2(self) -> float:
        """Dispersive level shift of the first atom, g2^2 / delta2."""
        return self.g2 * self.g2 / self.delta2

    @property
    def shift3(self) -> float:
        """Dispersive level shift of the second atom, g3^2 / delta3."""
        return self.g3 * self.g3 / self.delta3

    @property
    def pair_coupling(self) -> float:
        """Cavity-mediated exchange coupling between the two atoms."""
        inverse_mean = 0.5 * (1.0 / self.delta2 + 1.0 / self.delta3)
        return self.g2 * self.g3 * inverse_mean

    @property
    def exchange_detuning(self) -> float:
        """Detuning between the two single-excitation levels, shifts included."""
        return (self.delta2 - self.delta3) + (self.shift2 - self.shift3)

    @property
    def exchange_rabi(self) -> float:
        """Generalized Rabi frequency of the excitation-exchange oscillation."""
        return math.hypot(self.exchange_detuning, 2.0 * self.pair_coupling)

    @property
    def is_dispersive(self) -> bool:
        """Whether both detuning-to-coupling ratios clear the advisory bar."""
        return (
            abs(self.delta2) / self.g2 >= DISPERSIVE_RATIO
            and abs(self.delta3) / self.g3 >= DISPERSIVE_RATIO
        )


@dataclass(frozen=True)
class SingleModeParams:
    """Coupling and detuning of the swap pair in a single-mode cavity.

    Both atoms couple to one far-detuned mode with the same strength ``g``
    and detuning ``delta``; the resulting pair dynamics depends only on the
    dispersive shift ``g^2 / delta``.
    """

    g: float
    delta: float

    def __post_init__(self) -> None:
        _require_finite("g", self.g)
        _require_finite("delta", self.delta)
        if self.g <= 0:
            raise ValueError("coupling g must be strictly positive")
        if self.delta == 0:
            raise ValueError("detuning delta must be nonzero")

    @property
    def shift(self) -> float:
        """Dispersive shift g^2 / delta driving the pair dynamics."""
        return self.g * self.g / self.delta

    @property
    def is_dispersive(self) -> bool:
        """Whether the detuning-to-coupling ratio clears the advisory bar."""
        return abs(self.delta) / self.g >= DISPERSIVE_RATIO
