"""Pure-numpy closed-form grid kernels (fallback backend).

Twin of the compiled extension in ``_kernels_cy``; the two must stay
semantically identical.  These functions evaluate the closed-form engine
over whole time grids and are the hot path of a scan.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

# Combined branch weight |p|^2 + |q|^2 below which the concurrence formula
# is 0/0; such rows report concurrence 0.
DEGENERATE_WEIGHT = 1e-28


def pair_unitary_elements(g2, g3, delta2, delta3, t):
    # Returns (u11, u22, u23, u32, u33) of the inner-pair propagator per time.
    t = np.ascontiguousarray(t, dtype=float)
    l2 = g2 * g2 / delta2
    l3 = g3 * g3 / delta3
    gp = g2 * g3 * 0.5 * (1.0 / delta2 + 1.0 / delta3)
    dd = (delta2 - delta3) + (l2 - l3)
    f = np.hypot(dd, 2.0 * gp)

    half = 0.5 * f * t
    c = np.cos(half)
    sf = np.sin(half) / f if f > 0 else 0.5 * t
    e2 = np.exp(-1j * (l2 - 0.5 * dd) * t)
    e3 = np.exp(-1j * (l3 + 0.5 * dd) * t)

    u11 = np.exp(-1j * (l2 + l3) * t)
    u22 = e2 * (c - 1j * dd * sf)
    u23 = e2 * (-2j * gp * sf)
    u32 = e3 * (-2j * gp * sf)
    u33 = e3 * (c + 1j * dd * sf)
    return u11, u22, u23, u32, u33


def _conc_prob(p, q, norm_left, norm_right, weight_scale):
    w = np.abs(p) ** 2 + np.abs(q) ** 2
    prob = w / (weight_scale * norm_left * norm_right)
    conc = np.zeros_like(w)
    ok = w > DEGENERATE_WEIGHT
    np.divide(2.0 * np.abs(p) * np.abs(q), w, out=conc, where=ok)
    return conc, prob


def bsm_closed_form(cl, dl, cr, dr, bell_code):
    # bell_code 0 -> phi_plus target (|ee>+|gg>)/sqrt2, 1 -> psi_plus.
    nl = np.abs(cl) ** 2 + np.abs(dl) ** 2
    nr = np.abs(cr) ** 2 + np.abs(dr) ** 2
    if bell_code == 0:
        p = cl * dr
        q = dl * cr
    else:
        p = cl * cr
        q = dl * dr
    return _conc_prob(p, q, nl, nr, 2.0)


def qed_closed_form(cl, dl, cr, dr, shift, t, tau, outcome_code):
    # outcome_code 0 -> swap pair measured in |eg>, 1 -> |ge>.
    nl = np.abs(cl) ** 2 + np.abs(dl) ** 2
    nr = np.abs(cr) ** 2 + np.abs(dr) ** 2
    e = np.exp(-2j * shift * (np.asarray(tau, dtype=float) - np.asarray(t, dtype=float)))
    if outcome_code == 0:
        p = cl * cr * (e - 1.0)
        q = dl * dr * (e + 1.0)
    else:
        p = cl * cr * (e + 1.0)
        q = dl * dr * (e - 1.0)
    return _conc_prob(p, q, nl, nr, 4.0)
