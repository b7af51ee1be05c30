"""Explicit Runge-Kutta integration, SSP schemes and CFL step control."""

from dataclasses import dataclass, field

import numpy as np

from .dg import DGSolution, lobatto_values
from .errors import InadmissibleStateError
from .quadrature import gauss_lobatto_rule, lobatto_points_for_degree


@dataclass(frozen=True)
class ButcherTableau:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    label: str = ""
    order: int = 1

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        b = np.asarray(self.b, dtype=float)
        c = np.asarray(self.c, dtype=float)
        s = b.size
        if a.shape != (s, s) or c.shape != (s,):
            raise ValueError(f"inconsistent tableau shapes a{a.shape} b{b.shape} c{c.shape}")
        if np.any(np.triu(a) != 0.0):
            raise ValueError("explicit tableau needs a strictly lower-triangular a")
        if not np.allclose(a.sum(axis=1), c, rtol=0.0, atol=1e-14):
            raise ValueError("inconsistent tableau: c_i != sum_j a_ij")
        if abs(b.sum() - 1.0) > 1e-14:
            raise ValueError("tableau weights must sum to one")
        for name, v in (("a", a), ("b", b), ("c", c)):
            v.setflags(write=False)
            object.__setattr__(self, name, v)

    @property
    def s(self):
        return self.b.size


EULER = ButcherTableau([[0.0]], [1.0], [0.0], "ee", 1)
HEUN = ButcherTableau([[0.0, 0.0], [1.0, 0.0]], [0.5, 0.5], [0.0, 1.0], "ssp2", 2)
SSP3 = ButcherTableau(
    [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.25, 0.25, 0.0]],
    [1 / 6, 1 / 6, 2 / 3], [0.0, 1.0, 0.5], "ssp3", 3)
RK4 = ButcherTableau(
    [[0, 0, 0, 0], [0.5, 0, 0, 0], [0, 0.5, 0, 0], [0, 0, 1, 0]],
    [1 / 6, 1 / 3, 1 / 3, 1 / 6], [0.0, 0.5, 0.5, 1.0], "rk4", 4)

TABLEAUS = {t.label: t for t in (EULER, HEUN, SSP3, RK4)}


@dataclass(frozen=True)
class SSPScheme:
    """Shu-Osher form: stage i = sum_j alpha_ij * EE(y_j, beta_ij/alpha_ij * dt).

    Row ``i`` of ``alpha``/``beta`` builds stage ``i + 1`` from stages
    ``0..i``; the last stage is the new solution.
    """

    alpha: tuple
    beta: tuple
    label: str = ""
    order: int = 1
    stage_times: tuple = field(default=())

    def __post_init__(self):
        for i, (al, be) in enumerate(zip(self.alpha, self.beta)):
            if len(al) != i + 1 or len(be) != i + 1:
                raise ValueError(f"stage {i + 1} must combine {i + 1} previous stages")
            if min(al) < 0 or min(be) < 0:
                raise ValueError("SSP weights must be nonnegative")
            if abs(sum(al) - 1.0) > 1e-14:
                raise ValueError("SSP stage weights must sum to one")

    @property
    def cfl_max(self):
        """SSP coefficient min_ij alpha_ij / beta_ij over Euler substeps."""
        ratios = [a / b for al, be in zip(self.alpha, self.beta)
                  for a, b in zip(al, be) if b > 0]
        return min(ratios)


SSP_EE = SSPScheme(((1.0,),), ((1.0,),), "ee", 1, (0.0,))
SSP_HEUN = SSPScheme(((1.0,), (0.5, 0.5)), ((1.0,), (0.0, 0.5)), "ssp2", 2, (0.0, 1.0))
SSP_3 = SSPScheme(
    ((1.0,), (0.75, 0.25), (1 / 3, 0.0, 2 / 3)),
    ((1.0,), (0.0, 0.25), (0.0, 0.0, 2 / 3)),
    "ssp3", 3, (0.0, 1.0, 0.5))

SSP_SCHEMES = {s.label: s for s in (SSP_EE, SSP_HEUN, SSP_3)}


def _unwrap(state):
    if isinstance(state, DGSolution):
        return state.coeffs, state.t
    return np.asarray(state, dtype=float), 0.0


def _wrap(state, y, dt):
    if isinstance(state, DGSolution):
        return state.with_coeffs(y, state.t + dt)
    return y


def rk_step(rhs, state, dt, tab, stage_hook=None, t=None):
    """One explicit RK step ``y_{n+1} = y_n + dt sum_i b_i k_i``.

    ``rhs(t, y)`` returns dy/dt. ``stage_hook``, if given, is applied to
    every stage input before ``rhs`` is evaluated.
    """
    y, t0 = _unwrap(state)
    t0 = t0 if t is None else t
    k = []
    for i in range(tab.s):
        yi = y
        for j in range(i):
            if tab.a[i, j] != 0.0:
                yi = yi + dt * tab.a[i, j] * k[j]
        if stage_hook is not None and i > 0:
            yi = stage_hook(yi)
        try:
            k.append(rhs(t0 + tab.c[i] * dt, yi))
        except InadmissibleStateError as err:
            err.stage = i
            raise
    out = y
    for bi, ki in zip(tab.b, k):
        if bi != 0.0:
            out = out + dt * bi * ki
    return _wrap(state, out, dt)


def ssp_step(rhs, state, dt, scheme, post_stage_hook=None, t=None):
    """One SSP step built from convex combinations of explicit Euler updates.

    ``post_stage_hook`` (typically the limiter) runs on every stage result,
    so each Euler substep starts from a limited state.
    """
    y, t0 = _unwrap(state)
    t0 = t0 if t is None else t
    stages = [y]
    slopes = {}
    for i, (al, be) in enumerate(zip(scheme.alpha, scheme.beta)):
        new = None
        for j, (a, b) in enumerate(zip(al, be)):
            if a == 0.0 and b == 0.0:
                continue
            if b != 0.0 and j not in slopes:
                try:
                    slopes[j] = rhs(t0 + scheme.stage_times[j] * dt, stages[j])
                except InadmissibleStateError as err:
                    err.stage = j
                    raise
            if b == 0.0:
                term = a * stages[j]
            elif a == 0.0:
                term = b * dt * slopes[j]
            else:
                term = a * (stages[j] + (b / a) * dt * slopes[j])
            new = term if new is None else new + term
        if post_stage_hook is not None:
            new = post_stage_hook(new)
        stages.append(new)
    return _wrap(state, stages[-1], dt)


def cfl_geometry_factor(p, limiter_active):
    """``nu`` scale: smallest normalized Lobatto weight with the limiter, 1/(2p+1) without."""
    if limiter_active:
        return float(gauss_lobatto_rule(lobatto_points_for_degree(p)).normalized_weights[0])
    return 1.0 / (2 * p + 1)


# Linear-advection stability limits of one-step ADER-DG (p_t = p, upwind
# flux), from a von Neumann scan for p <= 3 and published values above.
_ADER_NU_MAX = (1.0, 1 / 3, 0.170, 0.103, 0.069, 0.045)


def ader_geometry_factor(p):
    """Courant number bound of ADER-DG of spatial degree ``p``."""
    if p < len(_ADER_NU_MAX):
        return _ADER_NU_MAX[p]
    return 0.5 / (2 * p + 1)


def compute_dt(sol, cfl_user, limiter_active, dt_max=np.inf, t_end=None, c_geom=None):
    """Stable step ``cfl * c_geom * min_k dx_k / alpha_k``, clipped to ``t_end``.

    ``alpha_k`` is the largest wave speed over the element's Gauss-Lobatto
    values. ``c_geom`` defaults to :func:`cfl_geometry_factor`; one-step
    schemes pass their own bound.
    """
    if not 0.0 < cfl_user <= 1.0:
        raise ValueError(f"cfl must lie in (0, 1], got {cfl_user}")
    p = sol.basis.degree
    vals = lobatto_values(sol.basis, sol.coeffs)
    alpha = sol.law.alpha(vals).max(axis=1)              # per element
    if c_geom is None:
        c_geom = cfl_geometry_factor(p, limiter_active)
    with np.errstate(divide="ignore"):
        ratio = np.where(alpha > 0, sol.mesh.widths / alpha, np.inf)
    dt = min(cfl_user * c_geom * ratio.min(), dt_max)
    if not np.isfinite(dt):
        raise ValueError("no wave speed and no dt_max: time step is unbounded")
    if t_end is not None:
        remaining = t_end - sol.t
        if dt >= remaining or np.isclose(dt, remaining, rtol=1e-12, atol=0.0):
            dt = remaining
    return dt
