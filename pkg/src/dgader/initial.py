"""Initial-condition library and the exact solutions used by convergence studies."""

import numpy as np

from .errors import ConfigError
from .laws import Advection, Burgers, Euler

IC_NAMES = ("sine", "gaussian", "sod", "double_rarefaction")

# primitive (rho, u, p) left | right states
RIEMANN_STATES = {
    "sod": ((1.0, 0.0, 1.0), (0.125, 0.0, 0.1)),
    "double_rarefaction": ((1.0, -2.0, 0.4), (1.0, 2.0, 0.4)),
}


def _scalar_profile(name, params):
    offset = params.get("offset", 0.0)
    amplitude = params.get("amplitude", 1.0)
    if name == "sine":
        freq = params.get("frequency", 1.0)
        return lambda x: offset + amplitude * np.sin(2.0 * np.pi * freq * x)
    if name == "gaussian":
        center = params.get("center", 0.5)
        width = params.get("width", 0.1)
        return lambda x: offset + amplitude * np.exp(-(((x - center) / width) ** 2))
    raise ConfigError(f"unknown scalar initial condition {name!r}")


def initial_condition(name, law, params=None, domain=(0.0, 1.0)):
    """Return ``u0(x) -> array (..., m)`` for the given law."""
    params = dict(params or {})
    if name not in IC_NAMES:
        raise ConfigError(f"unknown initial condition {name!r}; expected one of {IC_NAMES}")
    if name in RIEMANN_STATES:
        if not isinstance(law, Euler):
            raise ConfigError(f"initial condition {name!r} needs the euler law")
        left, right = RIEMANN_STATES[name]
        x0 = params.get("x0", 0.5 * (domain[0] + domain[1]))
        WL = law.conserved(*left)
        WR = law.conserved(*right)

        def riemann(x):
            x = np.asarray(x, dtype=float)
            return np.where((x < x0)[..., None], WL, WR)
        return riemann

    profile = _scalar_profile(name, params)
    if isinstance(law, Euler):
        # density wave carried by a uniform flow
        u = params.get("velocity", 1.0)
        p = params.get("pressure", 1.0)

        def density_wave(x):
            rho = profile(np.asarray(x, dtype=float))
            return law.conserved(rho, u, p)
        return density_wave
    return lambda x: profile(np.asarray(x, dtype=float))[..., None]


def _wrap(x, domain):
    lo, hi = domain
    return lo + np.mod(np.asarray(x, dtype=float) - lo, hi - lo)


def exact_solution(name, law, params=None, domain=(0.0, 1.0), periodic=True):
    """Return ``exact(x, t) -> (..., m)`` or ``None`` when no closed form is available.

    Advection and Euler density waves translate; Burgers is solved along
    characteristics ``u = u0(x - u t)`` (valid before shock formation).
    """
    params = dict(params or {})
    if name in RIEMANN_STATES:
        return None
    u0 = initial_condition(name, law, params, domain)
    shift = _wrap if periodic else (lambda x, d: x)

    if isinstance(law, Advection):
        return lambda x, t: u0(shift(np.asarray(x) - law.a * t, domain))
    if isinstance(law, Euler):
        u = params.get("velocity", 1.0)
        return lambda x, t: u0(shift(np.asarray(x) - u * t, domain))
    if isinstance(law, Burgers):
        profile = _scalar_profile(name, params)

        def burgers(x, t):
            x = np.asarray(x, dtype=float)
            if t == 0:
                return profile(x)[..., None]
            # foot of the characteristic: xi + t u0(xi) = x, monotone before the shock
            probe = np.linspace(domain[0], domain[1], 2001)
            vals = profile(probe)
            lo = x - t * vals.max() - 1e-12
            hi = x - t * vals.min() + 1e-12
            for _ in range(100):
                mid = 0.5 * (lo + hi)
                g = mid + t * profile(shift(mid, domain)) - x
                lo = np.where(g < 0, mid, lo)
                hi = np.where(g < 0, hi, mid)
            return profile(shift(0.5 * (lo + hi), domain))[..., None]
        return burgers
    return None
