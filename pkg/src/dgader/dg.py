"""Semi-discrete DG operator, cell means and initial projection.

Coefficient arrays have shape ``(N, P, m)``: element, basis function,
conserved component.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import InadmissibleStateError
from .quadrature import (
    QuadratureRule, gauss_legendre_rule, gauss_lobatto_rule, lobatto_points_for_degree)

FLUX_MODES = ("quadrature", "projected")


@dataclass(frozen=True, eq=False)
class DGSolution:
    mesh: object
    basis: object
    law: object
    coeffs: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        expected = (self.mesh.N, self.basis.size, self.law.m)
        if c.shape != expected:
            raise ValueError(f"coefficient shape {c.shape} != {expected}")
        object.__setattr__(self, "coeffs", c)

    def with_coeffs(self, coeffs, t=None):
        return replace(self, coeffs=coeffs, t=self.t if t is None else t)

    def means(self):
        return cell_means(self.basis, self.coeffs)

    def values_at(self, xi):
        """Point values at reference points ``xi``; shape ``(N, len(xi), m)``."""
        V = self.basis.values(np.asarray(xi, dtype=float))
        return np.einsum("pq,npm->nqm", V, self.coeffs)

    def evaluate(self, x):
        """Solution at physical points ``x``; shape ``(len(x), m)``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        k = self.mesh.locate(x)
        xi = 2.0 * (x - self.mesh.faces[k]) / self.mesh.widths[k] - 1.0
        xi = np.clip(xi, -1.0, 1.0)
        V = self.basis.values(xi)  # (P, len(x))
        return np.einsum("pi,ipm->im", V, self.coeffs[k])


def cell_means(basis, coeffs):
    """Means of every element, exact: ``(1/2) int W(xi) dxi``."""
    return np.einsum("p,npm->nm", basis.mean_weights, coeffs)


def cell_mean(sol, k):
    return sol.basis.mean_weights @ sol.coeffs[k]


def total_integral(sol):
    return sol.mesh.widths @ sol.means()


@dataclass(frozen=True)
class SemidiscreteConfig:
    """How the volume flux integral is evaluated.

    ``quadrature`` integrates F(W_h) with ``volume_rule``; ``projected``
    replaces F(W_h) by its expansion in the basis (nodal: flux of the nodal
    values; modal: L2 projection with ``volume_rule``).
    """

    flux_mode: str = "quadrature"
    volume_rule: QuadratureRule = None

    def resolve(self, basis):
        if self.flux_mode not in FLUX_MODES:
            raise ValueError(f"unknown flux mode {self.flux_mode!r}")
        rule = self.volume_rule or gauss_legendre_rule(basis.degree + 2)
        return replace(self, volume_rule=rule)


class DGOperator:
    """Precomputed right-hand side ``dW/dt = L(W)`` for one mesh/basis/law/flux."""

    def __init__(self, mesh, basis, law, face_flux, cfg=None):
        self.mesh = mesh
        self.basis = basis
        self.law = law
        self.face_flux = face_flux
        self.cfg = (cfg or SemidiscreteConfig()).resolve(basis)
        rule = self.cfg.volume_rule
        self.V_vol = basis.values(rule.nodes)             # (P, Qv)
        D_vol = basis.derivatives(rule.nodes)
        self.vol_matrix = D_vol * rule.weights            # (P, Qv)
        self.scale = 2.0 / mesh.widths                    # inverse Jacobian
        self.left_idx, self.right_idx = mesh.neighbor_indices()
        if basis.kind == "modal_legendre":
            self.proj_matrix = basis.mass_inv @ (self.V_vol * rule.weights)

    def traces(self, coeffs):
        """Left and right states at each of the N + 1 faces."""
        c = coeffs
        at_right_end = np.einsum("p,npm->nm", self.basis.right_trace, c)
        at_left_end = np.einsum("p,npm->nm", self.basis.left_trace, c)
        if self.mesh.boundary_kind == "periodic":
            W_left = np.concatenate((at_right_end[-1:], at_right_end))
            W_right = np.concatenate((at_left_end, at_left_end[:1]))
        else:
            W_left = np.concatenate((at_left_end[:1], at_right_end))
            W_right = np.concatenate((at_left_end, at_right_end[-1:]))
        return W_left, W_right

    def face_fluxes(self, coeffs):
        """Flux through every face in the +x direction; shape ``(N + 1, m)``."""
        W_left, W_right = self.traces(coeffs)
        for name, W, elem_offset in (("left", W_left, -1), ("right", W_right, 0)):
            ok = self.law.admissible(W)
            if not np.all(ok):
                face = int(np.argwhere(~ok)[0, 0])
                elem = (face + elem_offset) % self.mesh.N
                if self.mesh.boundary_kind == "transmissive":
                    elem = min(max(face + elem_offset, 0), self.mesh.N - 1)
                raise InadmissibleStateError(
                    f"inadmissible trace on the {name} side of a face",
                    element=elem, face=face, state=W[face])
        return self.face_flux(W_right, W_left, 1.0)

    def volume_values(self, coeffs, W_ref):
        """States at the volume nodes, expanded about ``W_ref`` per element.

        ``W_h = W_ref + sum_p (c_p - W_ref e_p) psi_p`` with ``e`` the
        coefficients of the constant 1; constant states come out bitwise.
        """
        dev = coeffs - self.basis.unit[None, :, None] * W_ref[:, None, :]
        return W_ref[:, None, :] + np.einsum("pq,npm->nqm", self.V_vol, dev)

    def volume_term(self, coeffs, W_ref):
        """``int (F(W_h) - F(W_ref)) psi_i' dxi`` per element."""
        F_ref = self.law.flux(W_ref)[:, None, :]
        if self.cfg.flux_mode == "projected" and self.basis.kind != "modal_legendre":
            F = self.law.flux(coeffs) - F_ref              # flux of nodal values
            return np.einsum("jp,njm->npm", self.basis.stiffness, F)
        F = self.law.flux(self.volume_values(coeffs, W_ref)) - F_ref
        if self.cfg.flux_mode == "projected":
            Fc = np.einsum("pq,nqm->npm", self.proj_matrix, F)
            return np.einsum("jp,njm->npm", self.basis.stiffness, Fc)
        return np.einsum("pq,nqm->npm", self.vol_matrix, F)

    def rhs(self, coeffs, fluxes=None):
        W_left, W_right = self.traces(coeffs)
        if fluxes is None:
            fluxes = self.face_fluxes(coeffs)
        # int F_ref psi_i' = F_ref (psi_i(1) - psi_i(-1)) exactly, so a
        # per-element constant can be removed from both terms; with the
        # element's own left trace this makes constant states cancel exactly
        W_ref = W_right[:-1]
        F_ref = self.law.flux(W_ref)[:, None, :]
        surf = (self.basis.right_trace[None, :, None] * (fluxes[1:, None, :] - F_ref)
                - self.basis.left_trace[None, :, None] * (fluxes[:-1, None, :] - F_ref))
        resid = self.volume_term(coeffs, W_ref) - surf
        return self.scale[:, None, None] * np.einsum(
            "ij,njm->nim", self.basis.mass_inv, resid)

    def __call__(self, t, coeffs):
        return self.rhs(coeffs)


def semidiscrete_rhs(sol, cfg, flux):
    return DGOperator(sol.mesh, sol.basis, sol.law, flux, cfg).rhs(sol.coeffs)


def project_function(mesh, basis, fn, m, quad_points=None):
    """L2 projection of ``fn(x) -> (..., m)`` onto the DG space, element by element."""
    rule = gauss_legendre_rule(quad_points or basis.degree + 3)
    x = mesh.faces[:-1, None] + 0.5 * mesh.widths[:, None] * (rule.nodes[None, :] + 1.0)
    vals = np.asarray(fn(x), dtype=float).reshape(mesh.N, rule.Q, m)
    V = basis.values(rule.nodes)
    proj = basis.mass_inv @ (V * rule.weights)            # (P, Q)
    return np.einsum("pq,nqm->npm", proj, vals)


def lobatto_values(basis, coeffs, rule=None):
    """Point values at Gauss-Lobatto points; shape ``(N, Q, m)``."""
    if rule is None:
        rule = gauss_lobatto_rule(lobatto_points_for_degree(basis.degree))
    V = basis.values(rule.nodes)
    return np.einsum("pq,npm->nqm", V, coeffs)
