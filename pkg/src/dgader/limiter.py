"""Zhang-Shu convex-state-preserving limiter.

Each cell polynomial is blended toward its mean,
``W~ = theta W + (1 - theta) mean``, with the largest ``theta`` that puts
every Gauss-Lobatto point value back inside the admissible set. The mean
is untouched, so conservation is exact.
"""

from dataclasses import dataclass

import numpy as np

from .dg import cell_means
from .errors import InadmissibleStateError
from .laws import DEFAULT_EPS, Euler
from .quadrature import gauss_lobatto_rule, lobatto_points_for_degree

_ULP_MARGIN = 64 * np.finfo(float).eps


@dataclass
class LimiterReport:
    cells_limited: int
    min_theta: float
    thetas: np.ndarray

    def merge(self, other):
        return LimiterReport(self.cells_limited + other.cells_limited,
                             min(self.min_theta, other.min_theta),
                             np.minimum(self.thetas, other.thetas))


def _rule_for(basis, rule):
    if rule is None:
        return gauss_lobatto_rule(lobatto_points_for_degree(basis.degree))
    if rule.kind != "gauss_lobatto" or 2 * rule.Q - 3 < basis.degree:
        raise ValueError("limiter needs a Gauss-Lobatto rule exact for the basis degree")
    return rule


def _blend(basis, c, mean, theta):
    return theta * c + (1.0 - theta) * np.outer(basis.unit, mean)


def _theta_for_points(law, values, mean, eps):
    return min(law.blend_to_frontier(v, mean, eps) for v in values)


def limit_cell(sol, k, rule=None, eps=DEFAULT_EPS):
    """Limit element ``k``; returns ``(new_coeffs, theta)``."""
    law, basis = sol.law, sol.basis
    rule = _rule_for(basis, rule)
    V = basis.values(rule.nodes).T                       # (Q, P)
    c = sol.coeffs[k]
    mean = basis.mean_weights @ c
    if not law.admissible_interior(mean, eps):
        raise InadmissibleStateError(
            "cell mean left the admissible set; the step violated its CFL bound",
            element=k, state=mean)
    values = V @ c
    if np.all(law.admissible_interior(values, eps)):
        return c.copy(), 1.0

    if isinstance(law, Euler):
        # density first (closed form), then pressure on the density-limited
        # polynomial (bisection)
        t1 = min(law.density_theta(v, mean, eps) for v in values)
        c1 = _blend(basis, c, mean, t1) if t1 < 1.0 else c
        t2 = min(law.pressure_theta(v, mean, eps) for v in V @ c1)
        theta = t1 * t2
        new = _blend(basis, c1, mean, t2) if t2 < 1.0 else c1
    else:
        theta = _theta_for_points(law, values, mean, eps)
        new = _blend(basis, c, mean, theta)

    # blending in coefficient space rounds, and callers may evaluate the
    # points in another order: pull back until they clear eps by a few ulps
    safe = eps + _ULP_MARGIN * max(1.0, float(np.max(np.abs(mean))))
    for j in range(12):
        if np.all(law.admissible_interior(V @ new, safe)):
            break
        theta *= 1.0 - 2.0 ** (2 * j - 50)
        new = _blend(basis, c, mean, theta)
    else:
        theta, new = 0.0, _blend(basis, c, mean, 0.0)
    return new, theta


def limit_coeffs(law, basis, coeffs, eps=DEFAULT_EPS, rule=None):
    """Vectorized front end: only cells with a bad Lobatto value are touched."""
    rule = _rule_for(basis, rule)
    V = basis.values(rule.nodes)
    vals = np.einsum("pq,npm->nqm", V, coeffs)
    bad = ~np.all(law.admissible_interior(vals, eps), axis=1)
    means = cell_means(basis, coeffs)
    mean_ok = law.admissible_interior(means, eps)
    if not np.all(mean_ok):
        k = int(np.argwhere(~mean_ok)[0, 0])
        raise InadmissibleStateError(
            "cell mean left the admissible set; the step violated its CFL bound",
            element=k, state=means[k])
    thetas = np.ones(coeffs.shape[0])
    if not np.any(bad):
        return coeffs, LimiterReport(0, 1.0, thetas)
    out = coeffs.copy()
    tmp = _CellView(law, basis, coeffs)
    for k in np.flatnonzero(bad):
        out[k], thetas[k] = limit_cell(tmp, k, rule, eps)
    limited = int(np.count_nonzero(thetas < 1.0))
    return out, LimiterReport(limited, float(thetas.min()), thetas)


@dataclass
class _CellView:
    law: object
    basis: object
    coeffs: np.ndarray


def limit_solution(sol, eps=DEFAULT_EPS, rule=None):
    coeffs, report = limit_coeffs(sol.law, sol.basis, sol.coeffs, eps, rule)
    return sol.with_coeffs(coeffs), report


class Limiter:
    """Stage hook for the integrators; accumulates reports between resets."""

    def __init__(self, law, basis, eps=DEFAULT_EPS, check_means=None):
        self.law = law
        self.basis = basis
        self.eps = eps
        self.rule = _rule_for(basis, None)
        self.reports = []
        self.check_means = check_means

    def __call__(self, coeffs):
        out, report = limit_coeffs(self.law, self.basis, coeffs, self.eps, self.rule)
        if self.check_means is not None:
            self.check_means(coeffs, out)
        self.reports.append(report)
        return out
