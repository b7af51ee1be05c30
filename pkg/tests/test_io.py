import numpy as np

from dgader import io
from dgader.driver import ErrorRow, ErrorTable
from dgader.laws import euler_law

from conftest import make_operator, make_solution


def test_coefficient_round_trip_is_exact(tmp_path):
    law = euler_law()
    op = make_operator(law, N=6, p=3, kind="nodal_lagrange_gl")
    sol = make_solution(op, lambda x: law.conserved(1 + 0.3 * np.sin(7 * x), np.cos(x) / 3, 1.0),
                        t=0.123456789012345678)
    path = tmp_path / "c.csv"
    io.write_coefficients(path, sol)
    coeffs, t = io.read_coefficients(path)
    np.testing.assert_array_equal(coeffs, sol.coeffs)
    assert t == sol.t


def test_snapshot_layout(tmp_path):
    law = euler_law()
    op = make_operator(law, N=4, p=2)
    sol = make_solution(op, lambda x: law.conserved(1 + x, 0.5, 2.0))
    path = tmp_path / "s.csv"
    io.write_snapshot(path, sol)
    data = io.read_snapshot(path)
    assert list(data) == ["x", "density", "momentum", "energy", "velocity", "pressure"]
    assert data["x"].size == 4 * 3
    np.testing.assert_allclose(data["x"][:3], [1 / 24, 3 / 24, 5 / 24])
    np.testing.assert_allclose(data["density"], 1 + data["x"], atol=1e-14)
    np.testing.assert_allclose(data["pressure"], 2.0, atol=1e-13)
    np.testing.assert_allclose(data["velocity"], 0.5, atol=1e-14)


def test_sample_points():
    np.testing.assert_allclose(io.sample_points(0), [0.0])
    np.testing.assert_allclose(io.sample_points(1), [-0.5, 0.5])
    np.testing.assert_allclose(io.sample_points(3), [-0.75, -0.25, 0.25, 0.75])


def test_error_table_format(tmp_path):
    table = ErrorTable([ErrorRow(20, 1e-2, 2e-2, 3e-2),
                        ErrorRow(40, 2.5e-3, 5e-3, 7.5e-3, 2.0, 2.0, 2.0)], "sine")
    path = tmp_path / "e.csv"
    io.write_error_table(path, table)
    lines = path.read_text().splitlines()
    assert lines[0] == "N,L1,L2,Linf,order_L1,order_L2,order_Linf"
    assert lines[1] == "20,0.01,0.02,0.03,,,"
    rows = io.read_error_table(path)
    assert rows[1]["order_L2"] == 2.0 and rows[0]["order_L1"] is None
    assert rows[1]["N"] == 40
