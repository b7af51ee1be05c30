"""Reference-element polynomial bases on [-1, 1] and their element matrices.

Three kinds share the same polynomial space P_p:

* ``modal_legendre``: monic Legendre polynomials 1, x, x^2 - 1/3, ...
  (orthogonal, so the mass matrix is diagonal);
* ``nodal_lagrange_gl``: Lagrange cardinal functions at the p + 1
  Gauss-Lobatto points;
* ``nodal_lagrange_uniform``: Lagrange cardinal functions at equispaced
  points. Ill-conditioned for p >= 8.
"""

from math import factorial

import numpy as np

from .quadrature import gauss_legendre_rule, gauss_lobatto_rule, legendre_table

BASIS_KINDS = ("modal_legendre", "nodal_lagrange_gl", "nodal_lagrange_uniform")


def _monic_scale(n):
    # leading coefficient of P_n is (2n)! / (2^n (n!)^2)
    return (2**n * factorial(n) ** 2) / factorial(2 * n)


def _lagrange_values(nodes, x):
    """Product-form cardinal functions; shape ``(P,) + x.shape``."""
    P = nodes.size
    out = np.ones((P,) + x.shape)
    for j in range(P):
        for m in range(P):
            if m != j:
                out[j] *= (x - nodes[m]) / (nodes[j] - nodes[m])
    return out


def _lagrange_derivatives(nodes, x):
    P = nodes.size
    out = np.zeros((P,) + x.shape)
    for j in range(P):
        denom = np.prod([nodes[j] - nodes[m] for m in range(P) if m != j])
        for m in range(P):
            if m == j:
                continue
            term = np.ones_like(x)
            for l in range(P):
                if l != j and l != m:
                    term = term * (x - nodes[l])
            out[j] += term
        out[j] /= denom
    return out


class Basis:
    """A degree-``p`` basis of P_p on the reference element.

    Attributes
    ----------
    mass : ndarray (P, P)
        ``M_ij = int psi_i psi_j``.
    stiffness : ndarray (P, P)
        ``K_ij = int psi_i psi_j'``.
    left_trace, right_trace : ndarray (P,)
        Basis values at xi = -1 and xi = +1.
    """

    def __init__(self, kind, p):
        if kind not in BASIS_KINDS:
            raise ValueError(f"unsupported basis kind {kind!r}")
        if int(p) != p or p < 0:
            raise ValueError(f"degree must be a nonnegative integer, got {p}")
        self.kind = kind
        self.degree = int(p)
        self.size = self.degree + 1

        if kind == "nodal_lagrange_gl":
            self.nodes = gauss_lobatto_rule(self.size).nodes if p > 0 else np.array([0.0])
        elif kind == "nodal_lagrange_uniform":
            self.nodes = np.linspace(-1.0, 1.0, self.size) if p > 0 else np.array([0.0])
        else:
            self.nodes = None

        rule = gauss_legendre_rule(self.size)
        V = self.values(rule.nodes)
        D = self.derivatives(rule.nodes)
        self.mass = (V * rule.weights) @ V.T
        self.stiffness = (V * rule.weights) @ D.T
        self.mass_inv = np.linalg.inv(self.mass)
        if kind == "modal_legendre":
            self.mass = np.diag(np.diag(self.mass))
            self.mass_inv = np.diag(1.0 / np.diag(self.mass))
        self.left_trace = self.values(np.array([-1.0]))[:, 0]
        self.right_trace = self.values(np.array([1.0]))[:, 0]
        # int psi_j over the reference element, halved: cell-mean weights
        self.mean_weights = 0.5 * (V @ rule.weights)
        self.derivative_matrix = self.mass_inv @ self.stiffness
        # coefficients of the constant function 1
        if kind == "modal_legendre":
            self.unit = np.eye(self.size)[0]
            self.mean_weights = self.unit.copy()
        else:
            self.unit = np.ones(self.size)

    def __repr__(self):
        return f"Basis({self.kind!r}, p={self.degree})"

    def values(self, xi):
        """``psi_j(xi)`` for every j; shape ``(P,) + xi.shape``."""
        xi = np.asarray(xi, dtype=float)
        if self.kind == "modal_legendre":
            P, _ = legendre_table(self.degree, xi)
            scale = np.array([_monic_scale(n) for n in range(self.size)])
            return P * scale.reshape((-1,) + (1,) * xi.ndim)
        return _lagrange_values(self.nodes, xi)

    def derivatives(self, xi):
        xi = np.asarray(xi, dtype=float)
        if self.kind == "modal_legendre":
            _, dP = legendre_table(self.degree, xi)
            scale = np.array([_monic_scale(n) for n in range(self.size)])
            return dP * scale.reshape((-1,) + (1,) * xi.ndim)
        return _lagrange_derivatives(self.nodes, xi)

    def eval(self, j, xi):
        return self.values(np.atleast_1d(xi))[j].reshape(np.shape(xi))

    def deriv(self, j, xi):
        return self.derivatives(np.atleast_1d(xi))[j].reshape(np.shape(xi))

    def project(self, fn, quad_points=None):
        """L2 projection of a scalar function of ``xi`` onto this basis."""
        rule = gauss_legendre_rule(quad_points or self.degree + 3)
        V = self.values(rule.nodes)
        return self.mass_inv @ (V @ (rule.weights * fn(rule.nodes)))


def build_basis(kind, p):
    return Basis(kind, p)


def transfer_matrix(src, dst):
    """Matrix T with ``dst_coeffs = T @ src_coeffs`` for equal-degree bases."""
    if src.degree != dst.degree:
        raise ValueError("change of basis needs equal degrees")
    rule = gauss_legendre_rule(src.size)
    Vs = src.values(rule.nodes)
    Vd = dst.values(rule.nodes)
    return dst.mass_inv @ ((Vd * rule.weights) @ Vs.T)


def evaluate_solution(basis, coeffs, xi):
    """Point value ``sum_l a_l psi_l(xi)``.

    ``coeffs`` has shape ``(P,)`` or ``(P, m)``.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[0] != basis.size:
        raise ValueError(
            f"expected {basis.size} coefficients, got {coeffs.shape[0]}")
    if np.any(np.abs(np.asarray(xi)) > 1.0):
        raise ValueError("reference coordinate outside [-1, 1]")
    phi = basis.values(np.asarray(xi, dtype=float))
    return np.tensordot(phi, coeffs, axes=([0], [0]))
