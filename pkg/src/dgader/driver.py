"""Simulation driver and convergence-study harness."""

import logging
import os
from dataclasses import dataclass, field

import numpy as np

from . import io
from .ader import AderCKScheme, AderPredictorScheme
from .basis import build_basis
from .dg import DGOperator, DGSolution, SemidiscreteConfig, project_function, total_integral
from .errors import DGError, InadmissibleStateError
from .fluxes import make_face_flux
from .initial import exact_solution, initial_condition
from .laws import make_law
from .limiter import Limiter
from .mesh import build_uniform_mesh
from .quadrature import gauss_legendre_rule
from .timestepping import (
    RK4, SSP_SCHEMES, ader_geometry_factor, cfl_geometry_factor, compute_dt, rk_step,
    ssp_step)

log = logging.getLogger(__name__)


class SolverError(DGError):
    """A time step failed even after the allowed retries."""

    def __init__(self, message, step, t, cause):
        super().__init__(f"{message} at step {step}, t={t:.6g}: {cause}")
        self.step = step
        self.t = t
        self.cause = cause


@dataclass
class Diagnostics:
    steps: int = 0
    retries: int = 0
    cells_limited: int = 0
    min_theta: float = 1.0
    limiter_calls: int = 0
    initial_integral: np.ndarray = None
    final_integral: np.ndarray = None
    initial_magnitude: np.ndarray = None
    picard_iterations: list = field(default_factory=list)
    picard_residuals: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)

    @property
    def conservation_drift(self):
        """Change of the domain integral per component, relative to
        ``max(|integral W_0|, integral |W_0|)``, or absolute where both vanish.
        Boundary fluxes count as drift on transmissive meshes."""
        ref = np.abs(self.initial_integral)
        if self.initial_magnitude is not None:
            ref = np.maximum(ref, self.initial_magnitude)
        ref = np.where(ref > 0, ref, 1.0)
        return np.abs(self.final_integral - self.initial_integral) / ref


class Problem:
    """Everything built from a :class:`RunConfig`: mesh, basis, law, operator, stepper."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.mesh = build_uniform_mesh(cfg.x_min, cfg.x_max, cfg.N, cfg.boundary)
        self.basis = build_basis(cfg.basis, cfg.degree)
        self.law = make_law(cfg.law, **cfg.law_params())
        self.face_flux = make_face_flux(cfg.flux, self.law, cfg.rusanov_jump_factor)
        self.op = DGOperator(self.mesh, self.basis, self.law, self.face_flux,
                             SemidiscreteConfig(cfg.flux_mode))
        self.limiter = (Limiter(self.law, self.basis, cfg.limiter_eps)
                        if cfg.limiter else None)
        self.ader = None
        if cfg.integrator == "ader_predictor":
            self.ader = AderPredictorScheme(self.op, cfg.time_degree,
                                            cfg.picard_tol, cfg.picard_max_iter)
        elif cfg.integrator == "ader_ck":
            self.ader = AderCKScheme(self.op, cfg.time_degree)
        if self.limiter is not None and self.ader is not None:
            log.warning("limiter with ADER runs as a post-step hook only; "
                        "no convex-state guarantee is implied")
        elif self.limiter is not None and cfg.integrator == "rk4":
            log.warning("rk4 is not strong-stability preserving; the limiter "
                        "runs at every stage but no convex-state guarantee is implied")

    @property
    def c_geom(self):
        """Courant-number scale for the step size; ``None`` means the RK default."""
        if self.ader is None:
            return None
        c = ader_geometry_factor(self.cfg.degree)
        if self.limiter is not None:
            c = min(c, cfl_geometry_factor(self.cfg.degree, True))
        return c

    @property
    def time_order(self):
        if self.ader is not None:
            return self.ader.order
        return {"ee": 1, "ssp2": 2, "ssp3": 3, "rk4": 4}[self.cfg.integrator]

    def initial_solution(self):
        u0 = initial_condition(self.cfg.ic, self.law, self.cfg.ic_params,
                               (self.cfg.x_min, self.cfg.x_max))
        coeffs = project_function(self.mesh, self.basis, u0, self.law.m)
        if self.limiter is not None:
            coeffs = self.limiter(coeffs)
        return DGSolution(self.mesh, self.basis, self.law, coeffs, 0.0)

    def step(self, coeffs, dt):
        """Advance coefficients by ``dt`` with the configured integrator."""
        cfg = self.cfg
        if self.ader is not None:
            out = self.ader.step(coeffs, dt)
            return self.limiter(out) if self.limiter is not None else out
        rhs = self.op
        if cfg.integrator == "rk4":
            out = rk_step(rhs, coeffs, dt, RK4, stage_hook=self.limiter)
            return self.limiter(out) if self.limiter is not None else out
        return ssp_step(rhs, coeffs, dt, SSP_SCHEMES[cfg.integrator],
                        post_stage_hook=self.limiter)


def run_simulation(cfg, output_dir=None, observer=None, dt_scale=None, problem=None):
    """Integrate ``cfg`` to ``t_end`` and return ``(solution, diagnostics)``.

    ``observer(sol, dt)`` is called after every accepted step.
    ``dt_scale(mesh)`` may shrink the CFL step (used to balance time and
    space orders in convergence studies). ``problem`` lets callers pass a
    prebuilt (for example instrumented) :class:`Problem` for ``cfg``.
    """
    prob = problem if problem is not None else Problem(cfg)
    sol = prob.initial_solution()
    diag = Diagnostics(initial_integral=total_integral(sol),
                       initial_magnitude=sol.mesh.widths @ np.abs(sol.means()))
    output_dir = output_dir or cfg.output_dir
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
        if cfg.snapshot_every:
            _snapshot(output_dir, cfg.prefix, "000000", sol, diag)

    t_end = cfg.t_end
    limiter_active = prob.limiter is not None
    factor = dt_scale(prob.mesh) if dt_scale is not None else 1.0
    while sol.t < t_end:
        dt = compute_dt(sol, cfg.cfl, limiter_active, cfg.dt_max,
                        c_geom=prob.c_geom) * factor
        if sol.t + dt >= t_end or np.isclose(sol.t + dt, t_end, rtol=1e-12, atol=0.0):
            dt = t_end - sol.t
        for attempt in range(cfg.max_retries + 1):
            n_reports = len(prob.limiter.reports) if prob.limiter else 0
            try:
                new = prob.step(sol.coeffs, dt)
                break
            except InadmissibleStateError as err:
                if prob.limiter:
                    del prob.limiter.reports[n_reports:]
                if attempt == cfg.max_retries:
                    raise SolverError("inadmissible state", diag.steps + 1, sol.t, err) from err
                log.info("step %d: %s; retrying with dt/2", diag.steps + 1, err)
                diag.retries += 1
                dt *= 0.5
        last = dt == t_end - sol.t
        sol = sol.with_coeffs(new, t_end if last else sol.t + dt)
        diag.steps += 1
        if isinstance(prob.ader, AderPredictorScheme) and prob.ader.last_prediction:
            diag.picard_iterations.append(prob.ader.last_prediction.iterations)
            diag.picard_residuals.append(prob.ader.last_prediction.residuals[-1])
        if observer is not None:
            observer(sol, dt)
        if output_dir and cfg.snapshot_every and diag.steps % cfg.snapshot_every == 0:
            _snapshot(output_dir, cfg.prefix, f"{diag.steps:06d}", sol, diag)

    if prob.limiter is not None:
        reps = prob.limiter.reports
        diag.limiter_calls = len(reps)
        diag.cells_limited = sum(r.cells_limited for r in reps)
        diag.min_theta = min((r.min_theta for r in reps), default=1.0)
    diag.final_integral = total_integral(sol)
    if output_dir:
        _snapshot(output_dir, cfg.prefix, "final", sol, diag)
        io.write_coefficients(os.path.join(output_dir, f"{cfg.prefix}_final_coeffs.csv"), sol)
    log.info("finished: %d steps, t=%.6g", diag.steps, sol.t)
    return sol, diag


def _snapshot(output_dir, prefix, tag, sol, diag):
    path = os.path.join(output_dir, f"{prefix}_{tag}.csv")
    io.write_snapshot(path, sol)
    diag.snapshots.append(path)


def solution_errors(sol, exact, t=None, component=0, quad_points=None):
    """L1, L2 and Linf errors of one component against ``exact(x, t)``."""
    t = sol.t if t is None else t
    rule = gauss_legendre_rule(quad_points or sol.basis.degree + 3)
    mesh = sol.mesh
    x = mesh.faces[:-1, None] + 0.5 * mesh.widths[:, None] * (rule.nodes[None, :] + 1.0)
    num = sol.values_at(rule.nodes)[..., component]
    ref = np.asarray(exact(x, t))[..., component]
    err = np.abs(num - ref)
    jac = 0.5 * mesh.widths[:, None]
    L1 = float(np.sum(jac * rule.weights * err))
    L2 = float(np.sqrt(np.sum(jac * rule.weights * err**2)))
    return L1, L2, float(err.max())


@dataclass
class ErrorRow:
    N: int
    L1: float
    L2: float
    Linf: float
    order_L1: float = None
    order_L2: float = None
    order_Linf: float = None


@dataclass
class ErrorTable:
    rows: list
    reference: str

    def orders(self, norm="L2"):
        return [getattr(r, f"order_{norm}") for r in self.rows[1:]]


def _order(coarse, fine):
    if coarse <= 0 or fine <= 0:
        return None
    return float(np.log2(coarse / fine))


def _balanced_dt_scale(dx0, exponent):
    """Step multiplier ``(dx / dx0)^exponent``, so that dt^order shrinks like dx^(p+1)."""
    return lambda mesh: (mesh.widths.min() / dx0) ** exponent


def convergence_study(cfg, meshes, exact=None):
    """Run ``cfg`` on each mesh size and tabulate errors and observed orders."""
    meshes = [int(n) for n in meshes]
    if len(meshes) < 1 or any(b != 2 * a for a, b in zip(meshes, meshes[1:])):
        raise ValueError(f"mesh list must double at every entry, got {meshes}")
    law = make_law(cfg.law, **cfg.law_params())
    reference = cfg.ic
    if exact is None:
        exact = exact_solution(cfg.ic, law, cfg.ic_params, (cfg.x_min, cfg.x_max),
                               periodic=cfg.boundary == "periodic")
        if exact is None:
            raise ValueError(f"no exact solution available for {cfg.ic!r}")
    else:
        reference = getattr(exact, "__name__", "custom")

    dt_scale = None
    if cfg.balance_time_order:
        order = Problem(cfg.replace(N=meshes[0])).time_order
        exponent = (cfg.degree + 1) / order - 1.0
        if exponent > 0:
            dt_scale = _balanced_dt_scale((cfg.x_max - cfg.x_min) / meshes[0], exponent)

    rows = []
    for N in meshes:
        sol, _ = run_simulation(cfg.replace(N=N, output_dir=None), dt_scale=dt_scale)
        L1, L2, Linf = solution_errors(sol, exact, cfg.t_end, cfg.error_component)
        row = ErrorRow(N, L1, L2, Linf)
        if rows:
            prev = rows[-1]
            row.order_L1 = _order(prev.L1, L1)
            row.order_L2 = _order(prev.L2, L2)
            row.order_Linf = _order(prev.Linf, Linf)
        rows.append(row)
        log.info("N=%d L1=%.3e L2=%.3e Linf=%.3e", N, L1, L2, Linf)
    return ErrorTable(rows, reference)
