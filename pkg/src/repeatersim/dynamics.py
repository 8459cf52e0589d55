"""Closed-form propagators for the two dispersive stages.

``effective_unitary`` is the two-atom propagator of the cavity-eliminated
exchange dynamics of an inner pair; ``qed_pair_unitary`` is the pair
propagator of the single-mode dispersive stage used for the final swap.
Both act in the basis ``{|ee>, |eg>, |ge>, |gg>}`` and are exactly unitary
for every parameter value.
"""
from __future__ import annotations

import math

import numpy as np

from .params import SingleModeParams, TwoModeParams


def effective_unitary(p: TwoModeParams, t: float) -> np.ndarray:
    """Propagator of the inner-pair exchange dynamics at dimensionless time t.

    The doubly excited state only picks up the sum of the two dispersive
    shifts, the single-excitation block performs a detuned Rabi exchange at
    the generalized frequency ``p.exchange_rabi``, and the ground state is
    left untouched.

    Parameters
    ----------
    p : TwoModeParams
        Stage parameters.
    t : float
        Interaction time, ``t >= 0``.

    Returns
    -------
    ndarray
        4x4 unitary, basis ``{|ee>, |eg>, |ge>, |gg>}``.
    """
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    l2, l3 = p.shift2, p.shift3
    gp = p.pair_coupling
    dd = p.exchange_detuning
    f = p.exchange_rabi

    half = 0.5 * f * t
    c = math.cos(half)
    # sin(f t / 2) / f, with the f -> 0 limit taken explicitly.
    sf = math.sin(half) / f if f > 0 else 0.5 * t
    e2 = np.exp(-1j * (l2 - 0.5 * dd) * t)
    e3 = np.exp(-1j * (l3 + 0.5 * dd) * t)

    u = np.zeros((4, 4), dtype=complex)
    u[0, 0] = np.exp(-1j * (l2 + l3) * t)
    u[1, 1] = e2 * (c - 1j * dd * sf)
    u[1, 2] = e2 * (-2j * gp * sf)
    u[2, 1] = e3 * (-2j * gp * sf)
    u[2, 2] = e3 * (c + 1j * dd * sf)
    u[3, 3] = 1.0
    return u


def qed_pair_unitary(p: SingleModeParams, duration: float) -> np.ndarray:
    """Pair propagator of the single-mode dispersive stage.

    With ``E = exp(-2i * p.shift * duration)`` the doubly excited state
    acquires the phase ``E``, the ground state is untouched, and the
    single-excitation block mixes ``|eg>`` and ``|ge>`` with amplitudes
    ``(E + 1)/2`` on the diagonal and ``(E - 1)/2`` off it.

    Parameters
    ----------
    p : SingleModeParams
        Stage parameters.
    duration : float
        Interaction time, ``duration >= 0``.

    Returns
    -------
    ndarray
        4x4 unitary, basis ``{|ee>, |eg>, |ge>, |gg>}``.
    """
    if duration < 0:
        raise ValueError(f"duration must be nonnegative, got {duration}")
    e = np.exp(-2j * p.shift * duration)
    u = np.zeros((4, 4), dtype=complex)
    u[0, 0] = e
    u[1, 1] = (e + 1.0) / 2.0
    u[1, 2] = (e - 1.0) / 2.0
    u[2, 1] = (e - 1.0) / 2.0
    u[2, 2] = (e + 1.0) / 2.0
    u[3, 3] = 1.0
    return u
