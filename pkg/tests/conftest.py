import numpy as np
import pytest

from dgader.basis import BASIS_KINDS, build_basis
from dgader.dg import DGOperator, DGSolution, project_function
from dgader.fluxes import make_face_flux
from dgader.laws import advection_law, burgers_law, euler_law
from dgader.mesh import build_uniform_mesh


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(params=BASIS_KINDS)
def basis_kind(request):
    return request.param


def make_operator(law, N=10, p=2, kind="modal_legendre", flux="rusanov",
                  boundary="periodic", domain=(0.0, 1.0), cfg=None):
    mesh = build_uniform_mesh(domain[0], domain[1], N, boundary)
    basis = build_basis(kind, p)
    return DGOperator(mesh, basis, law, make_face_flux(flux, law), cfg)


def make_solution(op, fn, t=0.0):
    coeffs = project_function(op.mesh, op.basis, fn, op.law.m)
    return DGSolution(op.mesh, op.basis, op.law, coeffs, t)


LAWS = {
    "advection": lambda: advection_law(1.0),
    "advection_neg": lambda: advection_law(-2.5),
    "burgers": burgers_law,
    "euler": lambda: euler_law(1.4),
}


def constant_state(name):
    """A representative admissible constant for each entry of LAWS."""
    if name == "euler":
        return euler_law().conserved(1.3, -0.7, 2.1)
    return np.array([0.37])
