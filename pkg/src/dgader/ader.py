"""One-step ADER-DG: local space-time predictor and corrector.

The predictor solves, element by element and without neighbour data, the
space-time weak form that is integrated by parts in time only::

    -int Q d_t(phi) + [Q(t^{n+1}) phi(t^{n+1}) - W^n phi(t^n)] + int d_x F(Q) phi = 0

with ``phi = psi_s(t) psi_q(x)``. The earlier time face takes the known
datum W^n (upwinding in time), so the system reads::

    [(-K_t^T + 1_{n+1}) (x) M_x] Q = (r (x) M_x) W^n - [M_t (x) K_x] F(Q)

and is solved by Picard iteration. The corrector then integrates the DG
right-hand side along the predicted solution at Gauss points in time.

For linear advection the Cauchy-Kowalewski route replaces the predictor by
the exact time Taylor series ``d_t^k W = (-a)^k d_x^k W``.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np
from numpy.polynomial import Polynomial

from .basis import _lagrange_derivatives, _lagrange_values
from .errors import PicardConvergenceError
from .laws import Advection, ConservationLaw
from .quadrature import gauss_legendre_rule


class SpaceTimeBasis:
    """Time basis on the reference slab [0, 1] paired with a space basis.

    The time basis is nodal Lagrange at the ``p_t + 1`` Gauss-Legendre
    points, so the time quadrature nodes coincide with the basis nodes.
    Time matrices are for a unit slab; ``time_mass(dt)`` rescales.
    """

    def __init__(self, space_basis, p_t):
        if int(p_t) != p_t or p_t < 0:
            raise ValueError(f"time degree must be a nonnegative integer, got {p_t}")
        self.space = space_basis
        self.p_t = int(p_t)
        self.N_t = self.p_t + 1
        self.N_x = space_basis.size

        rule = gauss_legendre_rule(self.N_t)
        self.time_nodes = 0.5 * (rule.nodes + 1.0)
        self.time_weights = 0.5 * rule.weights
        tau = self.time_nodes
        vals = _lagrange_values(tau, tau)                 # (N_t, N_t), identity
        ders = _lagrange_derivatives(tau, tau)            # ders[j, q] = psi_j'(tau_q)
        self.M_t = (vals * self.time_weights) @ vals.T
        self.K_t = (vals * self.time_weights) @ ders.T
        self.start = self.time_values(0.0)
        self.end = self.time_values(1.0)
        self.one_start = np.outer(self.start, self.start)
        self.one_end = np.outer(self.end, self.end)
        self.M_x = space_basis.mass
        self.K_x = space_basis.stiffness

        lhs = -self.K_t.T + self.one_end
        self.lhs = lhs
        self.picard_matrix = np.linalg.solve(lhs, self.M_t)

    def time_values(self, tau):
        """``psi_s(tau)``; shape ``(N_t,)`` for scalar ``tau``, else ``(N_t, len(tau))``."""
        scalar = np.ndim(tau) == 0
        out = _lagrange_values(self.time_nodes, np.atleast_1d(np.asarray(tau, dtype=float)))
        return out[:, 0] if scalar else out

    def time_mass(self, dt):
        return dt * self.M_t

    def system_matrix(self):
        """Full Kronecker left-hand side on the reference slab, time-layer-major."""
        return np.kron(self.lhs, self.M_x)


def build_spacetime_basis(space_basis, p_t):
    return SpaceTimeBasis(space_basis, p_t)


@dataclass
class SpaceTimePredictor:
    """Predictor coefficients plus Picard diagnostics.

    ``coeffs`` is ``(N, N_t, N_x, m)`` for a mesh, or one ``(N_t, N_x, m)``
    block for a single element.
    """

    coeffs: np.ndarray
    iterations: int
    residuals: list

    def layer_major(self, k=0):
        """Flat unknowns of element ``k``: all space dofs of time layer 1, then 2, ..."""
        block = self.coeffs if self.coeffs.ndim == 3 else self.coeffs[k]
        return block.reshape(-1, block.shape[-1])


class Predictor:
    """Vectorized Picard solver for all elements of a mesh at once."""

    def __init__(self, stb, law, tol=1e-12, max_iter=30, quad_points=None):
        self.stb = stb
        self.law = law
        self.tol = tol
        self.max_iter = max_iter
        basis = stb.space
        rule = gauss_legendre_rule(quad_points or basis.degree + 2)
        self.V = basis.values(rule.nodes)                 # (P, Qx)
        self.vol = basis.derivatives(rule.nodes) * rule.weights
        self.basis = basis

    def flux_derivative(self, Q):
        """``M_x^{-1} int d_xi F(Q) psi dxi`` per element and time node.

        Computed as boundary terms minus the volume integral against psi'
        (exact when the quadrature is), expanded about the left-end state.
        """
        b = self.basis
        Q_left = np.einsum("p,...pm->...m", b.left_trace, Q)
        Q_right = np.einsum("p,...pm->...m", b.right_trace, Q)
        F_ref = self.law.flux(Q_left)
        dev = Q - b.unit[:, None] * Q_left[..., None, :]
        Wq = Q_left[..., None, :] + np.einsum("pq,...pm->...qm", self.V, dev)
        Fq = self.law.flux(Wq) - F_ref[..., None, :]
        bdry = b.right_trace[:, None] * (self.law.flux(Q_right) - F_ref)[..., None, :]
        resid = bdry - np.einsum("pq,...qm->...pm", self.vol, Fq)
        return np.einsum("ij,...jm->...im", b.mass_inv, resid)

    def solve(self, W, dt, widths):
        W = np.asarray(W, dtype=float)
        N_t = self.stb.N_t
        nu = (2.0 * dt / np.asarray(widths, dtype=float))[:, None, None, None]
        base = np.repeat(W[:, None], N_t, axis=1)          # constant-in-time extension
        Q = base
        scale = max(1.0, float(np.max(np.abs(W)))) if W.size else 1.0
        residuals = []
        for it in range(1, self.max_iter + 1):
            G = self.flux_derivative(Q)
            Q_new = base - nu * np.einsum("st,ntpm->nspm", self.stb.picard_matrix, G)
            change = float(np.max(np.abs(Q_new - Q)))
            residuals.append(change)
            Q = Q_new
            if change <= self.tol * scale:
                return SpaceTimePredictor(Q, it, residuals)
        raise PicardConvergenceError(
            f"Picard iteration did not reach {self.tol:g} in {self.max_iter} iterations",
            residuals)


def predict_element(stb, law, W_k, dt, dx, tol=1e-12, max_iter=30):
    W_k = np.asarray(W_k, dtype=float)
    if W_k.ndim == 1:
        W_k = W_k[:, None]
    pred = Predictor(stb, law, tol, max_iter).solve(W_k[None], dt, [dx])
    return SpaceTimePredictor(pred.coeffs[0], pred.iterations, pred.residuals)


class AderPredictorScheme:
    """ADER-DG step with the local space-time predictor."""

    order_offset = 1

    def __init__(self, operator, p_t=None, tol=1e-12, max_iter=30):
        self.op = operator
        p_t = operator.basis.degree if p_t is None else p_t
        self.stb = SpaceTimeBasis(operator.basis, p_t)
        self.predictor = Predictor(self.stb, operator.law, tol, max_iter)
        self.last_prediction = None

    @property
    def order(self):
        return min(self.op.basis.degree, self.stb.p_t) + 1

    def predict(self, coeffs, dt):
        pred = self.predictor.solve(coeffs, dt, self.op.mesh.widths)
        self.last_prediction = pred
        return pred

    def step(self, coeffs, dt):
        Q = self.predict(coeffs, dt).coeffs
        return ader_corrector_update(self.op, coeffs, Q, self.stb.time_weights, dt)

    def face_flux_integrals(self, coeffs, dt):
        """``int_0^dt F*(t) dt`` at every face, shape ``(N + 1, m)``."""
        Q = self.predict(coeffs, dt).coeffs
        return dt * sum(w * self.op.face_fluxes(Q[:, s])
                        for s, w in enumerate(self.stb.time_weights))


def ader_corrector_update(op, W, Q, time_weights, dt):
    """``W + dt sum_s w_s L(Q(t_s))``: the space-time volume and face integrals."""
    acc = None
    for s, w in enumerate(time_weights):
        term = w * op.rhs(Q[:, s])
        acc = term if acc is None else acc + term
    return W + dt * acc


def ader_corrector_step(sol, stb, flux, dt, predictor=None):
    from .dg import DGOperator
    op = DGOperator(sol.mesh, sol.basis, sol.law, flux)
    pred = predictor or Predictor(stb, sol.law)
    Q = pred.solve(sol.coeffs, dt, sol.mesh.widths).coeffs
    new = ader_corrector_update(op, sol.coeffs, Q, stb.time_weights, dt)
    return sol.with_coeffs(new, sol.t + dt)


class AderCKScheme:
    """ADER-DG step with Cauchy-Kowalewski time evolution (linear advection only)."""

    def __init__(self, operator, p_t=None):
        if not isinstance(operator.law, Advection):
            raise ValueError("Cauchy-Kowalewski ADER is implemented for linear advection only")
        self.op = operator
        p = operator.basis.degree
        self.n_terms = p if p_t is None else p_t
        rule = gauss_legendre_rule(max(self.n_terms, p) + 1)
        self.time_nodes = 0.5 * (rule.nodes + 1.0)
        self.time_weights = 0.5 * rule.weights

    @property
    def order(self):
        return min(self.op.basis.degree, self.n_terms) + 1

    def evolve(self, coeffs, dt):
        """Cell polynomials at each Gauss time node, ``(N, N_t, P, m)``."""
        a = self.op.law.a
        D = self.op.basis.derivative_matrix
        scale = (2.0 / self.op.mesh.widths)[:, None, None]
        derivs = [coeffs]
        for _ in range(self.n_terms):
            derivs.append(scale * np.einsum("ij,njm->nim", D, derivs[-1]))
        out = []
        for tau in self.time_nodes:
            t = tau * dt
            acc = coeffs.copy()
            for k in range(1, self.n_terms + 1):
                acc = acc + ((-a * t) ** k / factorial(k)) * derivs[k]
            out.append(acc)
        return np.stack(out, axis=1)

    def step(self, coeffs, dt):
        Q = self.evolve(coeffs, dt)
        return ader_corrector_update(self.op, coeffs, Q, self.time_weights, dt)

    def face_flux_integrals(self, coeffs, dt):
        """``int_0^dt F*(t) dt`` at every face, shape ``(N + 1, m)``."""
        Q = self.evolve(coeffs, dt)
        return dt * sum(w * self.op.face_fluxes(Q[:, s])
                        for s, w in enumerate(self.time_weights))


def element_polynomial(basis, coeffs_k, x_left, x_right):
    """Element polynomial as a ``numpy.polynomial.Polynomial`` in physical x."""
    xi = np.cos(np.pi * (np.arange(basis.size) + 0.5) / basis.size)
    vals = np.tensordot(basis.values(xi), np.asarray(coeffs_k, dtype=float), axes=([0], [0]))
    vals = np.asarray(vals).reshape(basis.size, -1)[:, 0]
    vander = np.vander(xi, basis.size, increasing=True)
    mono = np.linalg.solve(vander, vals)
    return Polynomial(mono, domain=[x_left, x_right], window=[-1.0, 1.0])


def ck_ader_advection_flux(a, left_poly, right_poly, x_face, dt, order):
    """Exact ``int_0^dt a W*(t) dt`` at a face for ``u_t + a u_x = 0``.

    ``a`` is the speed or an advection law object.
    ``W*`` is the upwind trace evolved by its time Taylor series with
    ``d_t^k W = (-a)^k d_x^k W``, truncated after ``order`` terms.
    """
    if isinstance(a, ConservationLaw):
        if not isinstance(a, Advection):
            raise ValueError(f"Cauchy-Kowalewski flux needs linear advection, got {a.label}")
        a = a.a
    if not np.isscalar(a):
        raise ValueError("Cauchy-Kowalewski flux needs a scalar linear advection speed")
    if a == 0.0:
        return 0.0
    poly = left_poly if a > 0 else right_poly
    total = 0.0
    for k in range(order + 1):
        dk = poly.deriv(k)(x_face) if k else poly(x_face)
        total += (-a) ** k * dk * dt ** (k + 1) / factorial(k + 1)
    return a * total
