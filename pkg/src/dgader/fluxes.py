"""Numerical face fluxes ``F*(W_plus, W_minus; n)``.

``W_minus`` is the interior trace and ``W_plus`` the exterior one; ``n`` is
the outward normal sign (+1 or -1 in 1D). The returned value is the flux
crossing the face in direction ``n``.
"""

import numpy as np

from .errors import InadmissibleStateError
from .laws import Advection

FLUX_NAMES = ("rusanov", "upwind")


def rusanov(law, W_plus, W_minus, n=1.0, jump_factor=0.5):
    """Local Lax-Friedrichs flux.

    ``jump_factor`` multiplies ``lambda * (W_plus - W_minus)`` with
    ``lambda = max(alpha(W_plus), alpha(W_minus))``. 0.5 is the classical
    form (exact upwind for linear advection); 1.0 doubles the dissipation.
    """
    W_plus = np.asarray(W_plus, dtype=float)
    W_minus = np.asarray(W_minus, dtype=float)
    for side, W in (("exterior", W_plus), ("interior", W_minus)):
        ok = law.admissible(W)
        if not np.all(ok):
            bad = np.argwhere(~np.atleast_1d(ok))[0]
            raise InadmissibleStateError(
                f"inadmissible {side} trace in Rusanov flux",
                state=np.atleast_2d(W)[tuple(bad)])
    lam = np.maximum(law.alpha(W_plus), law.alpha(W_minus))
    central = 0.5 * (law.flux(W_plus) + law.flux(W_minus)) * n
    return central - jump_factor * lam[..., None] * (W_plus - W_minus)


def upwind_advection(a, W_plus, W_minus, n=1.0):
    """Exact Riemann flux for ``u_t + a u_x = 0``."""
    W_plus = np.asarray(W_plus, dtype=float)
    W_minus = np.asarray(W_minus, dtype=float)
    upstream = np.where(np.asarray(a * n) > 0, W_minus, W_plus)
    return a * upstream * n


def make_face_flux(name, law, jump_factor=0.5):
    """Return ``flux(W_plus, W_minus, n)`` bound to ``law``."""
    if name == "rusanov":
        def face_flux(W_plus, W_minus, n=1.0):
            return rusanov(law, W_plus, W_minus, n, jump_factor)
    elif name == "upwind":
        if not isinstance(law, Advection):
            raise ValueError("upwind flux is only defined for linear advection")

        def face_flux(W_plus, W_minus, n=1.0):
            return upwind_advection(law.a, W_plus, W_minus, n)
    else:
        raise ValueError(f"unknown flux {name!r}")
    face_flux.name = name
    return face_flux
