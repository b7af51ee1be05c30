"""Conservation laws dW/dt + dF(W)/dx = 0 with admissible sets.

States are arrays whose last axis holds the ``m`` conserved components;
every method is vectorized over the leading axes.
"""

import numpy as np

from .errors import InadmissibleStateError

DEFAULT_EPS = 1e-13
_BISECTION_STEPS = 60


class ConservationLaw:
    """Flux, wave-speed bound and admissible set of a 1D conservation law.

    Subclasses implement ``flux`` and ``alpha``; the admissible set defaults
    to all of R^m.
    """

    m = 1
    label = "law"
    component_names = ("u",)

    def flux(self, W):
        raise NotImplementedError

    def alpha(self, W):
        raise NotImplementedError

    def admissible(self, W):
        W = np.asarray(W, dtype=float)
        return np.all(np.isfinite(W), axis=-1)

    def admissible_interior(self, W, eps=DEFAULT_EPS):
        return self.admissible(W)

    def blend_to_frontier(self, W_point, W_mean, eps=DEFAULT_EPS):
        """Largest theta in [0, 1] keeping ``theta*W_point + (1-theta)*W_mean`` admissible."""
        W_point = np.asarray(W_point, dtype=float)
        W_mean = np.asarray(W_mean, dtype=float)
        if not self.admissible_interior(W_mean, eps):
            raise InadmissibleStateError(
                "cell mean is not admissible; cannot blend", state=W_mean)
        if self.admissible_interior(W_point, eps):
            return 1.0
        theta = self._frontier_theta(W_point, W_mean, eps)
        # round-off in the blend can land a hair outside the set
        for k in range(10):
            if self.admissible_interior(theta * W_point + (1.0 - theta) * W_mean, eps):
                return theta
            theta *= 1.0 - 2.0 ** (2 * k - 50)
        return 0.0

    def _frontier_theta(self, W_point, W_mean, eps):
        return 1.0

    def derived_fields(self, W):
        """Extra named columns for snapshot output."""
        return {}


class _ScalarLaw(ConservationLaw):
    """Scalar law with an optional lower bound ``u > lower_bound``."""

    def __init__(self, lower_bound=None):
        self.lower_bound = lower_bound

    def admissible(self, W):
        ok = super().admissible(W)
        if self.lower_bound is None:
            return ok
        return ok & (np.asarray(W)[..., 0] > self.lower_bound)

    def admissible_interior(self, W, eps=DEFAULT_EPS):
        ok = super().admissible(W)
        if self.lower_bound is None:
            return ok
        return ok & (np.asarray(W)[..., 0] >= self.lower_bound + eps)

    def _frontier_theta(self, W_point, W_mean, eps):
        floor = self.lower_bound + eps
        u, ubar = W_point[..., 0], W_mean[..., 0]
        return float(np.clip((ubar - floor) / (ubar - u), 0.0, 1.0))


class Advection(_ScalarLaw):
    label = "advection"

    def __init__(self, a=1.0, lower_bound=None):
        super().__init__(lower_bound)
        if not np.isfinite(a):
            raise ValueError("advection speed must be finite")
        self.a = float(a)

    def flux(self, W):
        return self.a * np.asarray(W, dtype=float)

    def alpha(self, W):
        return np.full(np.shape(W)[:-1], abs(self.a))


class Burgers(_ScalarLaw):
    label = "burgers"

    def flux(self, W):
        W = np.asarray(W, dtype=float)
        return 0.5 * W * W

    def alpha(self, W):
        return np.abs(np.asarray(W, dtype=float)[..., 0])


class Euler(ConservationLaw):
    """Ideal-gas compressible Euler, W = (rho, rho u, E)."""

    m = 3
    label = "euler"
    component_names = ("density", "momentum", "energy")

    def __init__(self, gamma=1.4):
        if not gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {gamma}")
        self.gamma = float(gamma)

    def pressure(self, W):
        W = np.asarray(W, dtype=float)
        rho, mom, E = W[..., 0], W[..., 1], W[..., 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.gamma - 1.0) * (E - 0.5 * mom * mom / rho)

    def velocity(self, W):
        W = np.asarray(W, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return W[..., 1] / W[..., 0]

    def conserved(self, rho, u, p):
        """Primitive (rho, u, p) to conserved variables."""
        rho, u, p = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (rho, u, p)))
        E = p / (self.gamma - 1.0) + 0.5 * rho * u * u
        return np.stack([rho, rho * u, E], axis=-1)

    def flux(self, W):
        W = np.asarray(W, dtype=float)
        rho, mom, E = W[..., 0], W[..., 1], W[..., 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            u = mom / rho
            p = (self.gamma - 1.0) * (E - 0.5 * mom * u)
        return np.stack([mom, mom * u + p, u * (E + p)], axis=-1)

    def alpha(self, W):
        W = np.asarray(W, dtype=float)
        bad = ~self.admissible(W)
        if np.any(bad):
            where = np.argwhere(bad)[0]
            raise InadmissibleStateError(
                "wave speed requested for an inadmissible Euler state",
                state=W[tuple(where)])
        rho = W[..., 0]
        u = W[..., 1] / rho
        p = self.pressure(W)
        return np.abs(u) + np.sqrt(self.gamma * p / rho)

    def admissible(self, W):
        W = np.asarray(W, dtype=float)
        finite = np.all(np.isfinite(W), axis=-1)
        with np.errstate(invalid="ignore"):
            return finite & (W[..., 0] > 0.0) & (self.pressure(W) > 0.0)

    def admissible_interior(self, W, eps=DEFAULT_EPS):
        W = np.asarray(W, dtype=float)
        finite = np.all(np.isfinite(W), axis=-1)
        with np.errstate(invalid="ignore"):
            return finite & (W[..., 0] >= eps) & (self.pressure(W) >= eps)

    def density_theta(self, W_point, W_mean, eps):
        rho, rbar = W_point[..., 0], W_mean[..., 0]
        if rho >= eps:
            return 1.0
        return float(np.clip((rbar - eps) / (rbar - rho), 0.0, 1.0))

    def pressure_theta(self, W_point, W_mean, eps):
        """Largest t with p(t*W_point + (1-t)*W_mean) >= eps, by bisection.

        Pressure is concave along the segment, so the admissible ``t`` form
        an interval containing 0.
        """
        if self.pressure(W_point) >= eps and W_point[0] > 0.0:
            return 1.0
        lo, hi = 0.0, 1.0
        for _ in range(_BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            W = mid * W_point + (1.0 - mid) * W_mean
            if W[0] > 0.0 and self.pressure(W) >= eps:
                lo = mid
            else:
                hi = mid
        return lo

    def _frontier_theta(self, W_point, W_mean, eps):
        t_rho = self.density_theta(W_point, W_mean, eps)
        W1 = t_rho * W_point + (1.0 - t_rho) * W_mean
        return t_rho * self.pressure_theta(W1, W_mean, eps)

    def derived_fields(self, W):
        return {"velocity": self.velocity(W), "pressure": self.pressure(W)}


def advection_law(a=1.0, lower_bound=None):
    return Advection(a, lower_bound)


def burgers_law(lower_bound=None):
    return Burgers(lower_bound)


def euler_law(gamma=1.4):
    return Euler(gamma)


def blend_to_frontier(law, W_point, W_mean, eps=DEFAULT_EPS):
    return law.blend_to_frontier(W_point, W_mean, eps)


def make_law(name, **params):
    if name == "advection":
        return Advection(params.get("a", 1.0), params.get("lower_bound"))
    if name == "burgers":
        return Burgers(params.get("lower_bound"))
    if name == "euler":
        return Euler(params.get("gamma", 1.4))
    raise ValueError(f"unknown law {name!r}")
