"""CSV snapshot, coefficient-dump and error-table files."""

import csv

import numpy as np


def sample_points(p):
    """``p + 1`` uniformly spaced cell-interior reference points."""
    return -1.0 + (2.0 * np.arange(p + 1) + 1.0) / (p + 1)


def write_snapshot(path, sol):
    """One row per plot point: x, conserved components, derived fields."""
    xi = sample_points(sol.basis.degree)
    vals = sol.values_at(xi).reshape(-1, sol.law.m)
    x = np.concatenate([sol.mesh.to_physical(k, xi) for k in range(sol.mesh.N)])
    derived = sol.law.derived_fields(vals)
    names = list(sol.law.component_names) + list(derived)
    cols = [vals[:, j] for j in range(sol.law.m)] + list(derived.values())
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x"] + names)
        for i in range(x.size):
            w.writerow([repr(float(x[i]))] + [repr(float(c[i])) for c in cols])


def read_snapshot(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], np.array(rows[1:], dtype=float)
    return {name: data[:, j] for j, name in enumerate(header)}


def write_coefficients(path, sol):
    """Full-precision coefficient dump (``repr`` floats round-trip exactly)."""
    N, P, m = sol.coeffs.shape
    with open(path, "w", newline="") as fh:
        fh.write(f"# t={sol.t!r} N={N} P={P} m={m} basis={sol.basis.kind}\n")
        w = csv.writer(fh)
        w.writerow(["element", "dof"] + list(sol.law.component_names))
        for k in range(N):
            for j in range(P):
                w.writerow([k, j] + [repr(float(v)) for v in sol.coeffs[k, j]])


def read_coefficients(path):
    """Return ``(coeffs, t)`` from a coefficient dump."""
    with open(path, newline="") as fh:
        meta = fh.readline().lstrip("# ").split()
        info = dict(item.split("=", 1) for item in meta)
        rows = list(csv.reader(fh))[1:]
    N, P, m = int(info["N"]), int(info["P"]), int(info["m"])
    coeffs = np.empty((N, P, m))
    for row in rows:
        coeffs[int(row[0]), int(row[1])] = [float(v) for v in row[2:]]
    return coeffs, float(info["t"])


ERROR_HEADER = ["N", "L1", "L2", "Linf", "order_L1", "order_L2", "order_Linf"]


def write_error_table(path, table):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(ERROR_HEADER)
        for r in table.rows:
            w.writerow([r.N] + [repr(v) if v is not None else "" for v in
                                (r.L1, r.L2, r.Linf, r.order_L1, r.order_L2, r.order_Linf)])


def read_error_table(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [{k: (float(v) if v else None) for k, v in row.items()} for row in rows]
