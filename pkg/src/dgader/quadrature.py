"""Gauss-Legendre and Gauss-Lobatto rules on the reference element [-1, 1].

Nodes are found by Newton iteration on the defining Legendre conditions.
"""

from dataclasses import dataclass

import numpy as np

_NEWTON_TOL = 1e-15
_NEWTON_MAXITER = 100


def legendre_table(n, x):
    """Values and derivatives of P_0..P_n at ``x``.

    Returns two arrays of shape ``(n + 1,) + x.shape``.
    """
    x = np.asarray(x, dtype=float)
    P = np.zeros((n + 1,) + x.shape)
    dP = np.zeros_like(P)
    P[0] = 1.0
    if n >= 1:
        P[1] = x
        dP[1] = 1.0
    for k in range(2, n + 1):
        P[k] = ((2 * k - 1) * x * P[k - 1] - (k - 1) * P[k - 2]) / k
        dP[k] = dP[k - 2] + (2 * k - 1) * P[k - 1]
    return P, dP


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    kind: str
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def Q(self):
        return self.nodes.size

    @property
    def exactness(self):
        """Highest polynomial degree integrated exactly."""
        if self.kind == "gauss_lobatto":
            return 2 * self.Q - 3
        return 2 * self.Q - 1

    @property
    def normalized_weights(self):
        """Weights divided by the reference measure 2, so they sum to one."""
        return 0.5 * self.weights

    def integrate(self, values, axis=0):
        return np.tensordot(self.weights, values, axes=([0], [axis]))


def _symmetrize(x):
    x = np.sort(x)
    return 0.5 * (x - x[::-1])


def gauss_legendre_rule(Q):
    if int(Q) != Q or Q < 1:
        raise ValueError(f"Gauss-Legendre rule needs Q >= 1, got {Q}")
    Q = int(Q)
    i = np.arange(Q)
    x = -np.cos(np.pi * (i + 0.75) / (Q + 0.5))
    for _ in range(_NEWTON_MAXITER):
        P, dP = legendre_table(Q, x)
        dx = P[Q] / dP[Q]
        x = x - dx
        if np.max(np.abs(dx)) <= _NEWTON_TOL:
            break
    x = _symmetrize(x)
    _, dP = legendre_table(Q, x)
    w = 2.0 / ((1.0 - x**2) * dP[Q] ** 2)
    w = 0.5 * (w + w[::-1])
    return QuadratureRule("gauss_legendre", x, w)


def gauss_lobatto_rule(Q):
    if int(Q) != Q or Q < 2:
        raise ValueError(f"Gauss-Lobatto rule needs Q >= 2, got {Q}")
    Q = int(Q)
    n = Q - 1
    # interior nodes are the roots of P_n'; Newton on P_n' using P_n'' from
    # the Legendre ODE (1 - x^2) P'' = 2x P' - n(n+1) P
    x = -np.cos(np.pi * np.arange(Q) / n)
    inner = x[1:-1]
    for _ in range(_NEWTON_MAXITER):
        if inner.size == 0:
            break
        P, dP = legendre_table(n, inner)
        d2P = (2 * inner * dP[n] - n * (n + 1) * P[n]) / (1.0 - inner**2)
        dx = dP[n] / d2P
        inner = inner - dx
        if np.max(np.abs(dx)) <= _NEWTON_TOL:
            break
    x = np.concatenate(([-1.0], inner, [1.0]))
    x = _symmetrize(x)
    x[0], x[-1] = -1.0, 1.0
    P, _ = legendre_table(n, x)
    w = 2.0 / (n * (n + 1) * P[n] ** 2)
    w = 0.5 * (w + w[::-1])
    return QuadratureRule("gauss_lobatto", x, w)


def lobatto_points_for_degree(p):
    """Smallest Gauss-Lobatto count whose rule is exact for degree ``p``."""
    return max(2, -(-(p + 3) // 2))
