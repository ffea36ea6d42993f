"""Interior displacement fields, phase snapshots and CSV export."""

import csv
from dataclasses import dataclass

import numpy as np

from .assembly import dof_map
from .geometry import map_point
from .gll import shape_functions
from .material import OutOfRange
from .radial import recover_interior


@dataclass
class SubdomainField:
    """Displacements ``u[i, dof]`` on the radial grid of one subdomain."""

    subdomain: object
    grid: object
    u: np.ndarray

    @property
    def xi(self):
        return self.grid.points


@dataclass
class FieldSolution:
    fields: dict
    omega: float

    def __len__(self):
        return len(self.fields)

    def __getitem__(self, key):
        return self.fields[key]


def recover_all(mesh, condensations, u_global, select=None):
    """Back-substitute the interior field of the selected subdomains.

    ``select`` is an iterable of subdomain indices (default: all). The last
    radial row of each field is the gathered global trace.
    """
    index = {nid: k for k, nid in enumerate(mesh.node_ids)}
    chosen = range(len(mesh.subdomains)) if select is None else select
    fields = {}
    omega = None
    for k in chosen:
        s, c = mesh.subdomains[k], condensations[k]
        trace = u_global[dof_map(s).global_dofs(index)]
        fields[k] = SubdomainField(s, c.grid, recover_interior(c, trace))
        omega = getattr(c, "omega", omega)
    return FieldSolution(fields, omega)


def sample(solution, subdomain, xi, eta, element):
    """Displacement (u_x, u_y) at local coordinates of one subdomain.

    Linear between radial grid points, Lagrange along the element.
    ``subdomain`` and ``element`` are indices.
    """
    field = solution[subdomain]
    grid = field.grid
    lo, hi = sorted((grid.xi_start, grid.xi_end))
    slack = 1e-12 * hi
    if not lo - slack <= xi <= hi + slack or not -1.0 <= eta <= 1.0:
        raise OutOfRange(f"(xi, eta) = ({xi}, {eta}) outside the subdomain")
    t = (xi - grid.xi_start) / grid.h
    i = int(np.clip(np.floor(t), 0, grid.n_steps - 1))
    w = t - i
    if abs(w) < 1e-12:
        row = field.u[i]
    elif abs(w - 1.0) < 1e-12:
        row = field.u[i + 1]
    else:
        row = (1.0 - w) * field.u[i] + w * field.u[i + 1]
    dm = dof_map(field.subdomain)
    dofs = dm.element_dofs[element]
    el = field.subdomain.elements[element]
    N, _ = shape_functions(el.basis, eta)
    vals = row[dofs]
    return np.array([N @ vals[0::2], N @ vals[1::2]])


def phase_snapshot(values, phi):
    """Real displacement at phase angle ``phi`` (degrees) of a harmonic field."""
    if not 0.0 <= phi < 360.0:
        raise ValueError("phase angle must lie in [0, 360)")
    a = np.deg2rad(phi)
    values = np.asarray(values)
    return values.real * np.cos(a) - values.imag * np.sin(a)


def field_points(field, refine=0):
    """Cartesian samples of one subdomain field.

    Sweeps every radial grid point and every element's GLL nodes, plus
    ``refine`` extra equally spaced eta values between neighbouring nodes.
    Returns ``(xy, u)`` with shapes ``(P, 2)`` and ``(P, 2)``.
    """
    s = field.subdomain
    dm = dof_map(s)
    xy, vals = [], []
    for e, el in enumerate(s.elements):
        nodes = el.basis.nodes
        etas = [nodes[0]]
        for a, b in zip(nodes[:-1], nodes[1:]):
            etas.extend(np.linspace(a, b, refine + 2)[1:])
        dofs = dm.element_dofs[e]
        for eta in etas:
            N, _ = shape_functions(el.basis, eta)
            ux = field.u[:, dofs[0::2]] @ N
            uy = field.u[:, dofs[1::2]] @ N
            for xi, a, b in zip(field.xi, ux, uy):
                xy.append(map_point(s.center, el, xi, eta))
                vals.append((a, b))
    return np.array(xy), np.array(vals)


FIELD_HEADER = ["x", "y", "re_ux", "im_ux", "re_uy", "im_uy"]
SURFACE_HEADER = ["x", "re_v", "im_v"]


def write_field_csv(path, xy, u):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(FIELD_HEADER)
        for (x, y), (ux, uy) in zip(xy, u):
            w.writerow([repr(float(v)) for v in (x, y, ux.real, ux.imag, uy.real, uy.imag)])


def write_snapshot_csv(path, xy, u, phi):
    """Real field at phase ``phi``: columns x, y, ux, uy."""
    snap = phase_snapshot(u, phi)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "ux", "uy"])
        for (x, y), (ux, uy) in zip(xy, snap):
            w.writerow([repr(float(v)) for v in (x, y, ux, uy)])


def write_surface_csv(path, x, v):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(SURFACE_HEADER)
        for xi, vi in zip(x, v):
            w.writerow([repr(float(xi)), repr(float(vi.real)), repr(float(vi.imag))])


def read_csv(path):
    """Read one of the exported CSV files into (header, float array)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)
