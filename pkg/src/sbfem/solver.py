"""Global dynamic stiffness assembly, strip loading and the direct solve."""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve
from scipy.optimize import brentq

from .assembly import assemble_coefficients, dof_map
from .geometry import boundary_point
from .gll import shape_functions
from .radial import build_rows, condense


class InconsistentFrequency(ValueError):
    pass


class UnmatchedInterfaceNodes(ValueError):
    pass


class LoadOutsideMesh(ValueError):
    pass


class SingularGlobalMatrix(np.linalg.LinAlgError):
    pass


@dataclass
class LoadCase:
    """Uniform vertical pressure ``p0`` on the surface strip ``|x| <= b``."""

    p0: float
    b: float
    omega: float = 0.0
    elements: list = None

    def __post_init__(self):
        if not np.isfinite(self.p0):
            raise ValueError("p0 must be finite")
        if self.b <= 0:
            raise ValueError("strip half-width must be positive")


@dataclass
class GlobalSystem:
    """``S u = f`` over the global boundary dofs.

    ``dofs`` lists the global dof numbers kept in the system (all of them
    until constraints are applied); ``node_ids[k]`` owns dofs ``2k, 2k+1``.
    """

    S: np.ndarray
    f: np.ndarray
    node_ids: tuple
    dof_maps: list
    omega: float = None
    dofs: np.ndarray = None

    def __post_init__(self):
        if self.dofs is None:
            self.dofs = np.arange(2 * len(self.node_ids))

    @property
    def ndofs(self):
        return 2 * len(self.node_ids)


def condense_subdomain(s, omega, C=None, store=True):
    """Coefficient matrices -> radial rows -> condensed dynamic stiffness."""
    if C is None:
        C = assemble_coefficients(s)
    rows = build_rows(C, s.radial, omega, s.damping, s.damping_form)
    out = condense(rows, s.sign, s.radial, store=store)
    out.omega = omega
    return out


def assemble_global(condensations, mesh, f=None):
    """Scatter-add subdomain dynamic stiffness matrices.

    ``condensations[k]`` belongs to ``mesh.subdomains[k]``; the sign for
    unbounded subdomains is already inside each ``S``.
    """
    if len(condensations) != len(mesh.subdomains):
        raise ValueError("one condensation per subdomain is required")
    omegas = {getattr(c, "omega", None) for c in condensations}
    if len(omegas) > 1:
        raise InconsistentFrequency(f"condensations at different frequencies: {sorted(map(str, omegas))}")
    node_ids = mesh.node_ids
    index = {nid: k for k, nid in enumerate(node_ids)}
    N = 2 * len(node_ids)
    S = np.zeros((N, N), dtype=complex)
    maps = []
    for s, c in zip(mesh.subdomains, condensations):
        dm = dof_map(s)
        if c.S.shape != (dm.ndofs, dm.ndofs):
            raise UnmatchedInterfaceNodes(f"subdomain {s.name!r}: S does not match its dof map")
        missing = [nid for nid in dm.node_ids if nid not in index]
        if missing:
            raise UnmatchedInterfaceNodes(f"nodes {missing} are not in the mesh")
        idx = dm.global_dofs(index)
        S[np.ix_(idx, idx)] += c.S
        maps.append(idx)
    _check_interfaces(mesh, index)
    if f is None:
        f = np.zeros(N, dtype=complex)
    return GlobalSystem(S, np.asarray(f, dtype=complex), node_ids, maps, omegas.pop())


def _check_interfaces(mesh, index):
    """Coincident nodes must carry the same id, otherwise subdomains do not connect."""
    pts = mesh.coords()
    if len(pts) < 2:
        return
    scale = max(np.ptp(pts, axis=0).max(), 1e-300)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    p = pts[order]
    gaps = np.linalg.norm(np.diff(p, axis=0), axis=1)
    if np.any(gaps < 1e-10 * scale):
        raise UnmatchedInterfaceNodes("coincident nodes with different ids")


def surface_elements(mesh, tol=1e-9):
    """Distinct elements lying on the free surface ``y = 0``."""
    scale = max(1.0, np.abs(mesh.coords()).max())
    return [el for el in mesh.elements() if np.all(np.abs(el.coords[:, 1]) < tol * scale)]


def _strip_intervals(el, b, samples=65):
    """Sub-intervals of eta on which |x_p(eta)| <= b."""
    def g(eta):
        return abs(boundary_point(el, eta)[0][0]) - b

    etas = np.linspace(-1.0, 1.0, samples)
    vals = [g(e) for e in etas]
    cuts = [-1.0]
    for e0, e1, g0, g1 in zip(etas[:-1], etas[1:], vals[:-1], vals[1:]):
        if g0 == 0.0:
            # the strip edge sits on a sample point
            cuts.append(e0)
        elif g0 * g1 < 0:
            cuts.append(brentq(g, e0, e1, xtol=1e-15))
    cuts.append(1.0)
    cuts = sorted(set(cuts))
    return [(a, c) for a, c in zip(cuts[:-1], cuts[1:]) if c > a and g(0.5 * (a + c)) <= 0]


def strip_load_vector(mesh, load, node_ids=None):
    """Consistent nodal forces of the pressure ``p0`` (acting downward) on ``|x| <= b``.

    Partly covered elements are integrated over the covered sub-interval only.
    """
    node_ids = mesh.node_ids if node_ids is None else node_ids
    index = {nid: k for k, nid in enumerate(node_ids)}
    f = np.zeros(2 * len(node_ids), dtype=complex)
    elements = load.elements if load.elements is not None else surface_elements(mesh)
    if not elements:
        raise LoadOutsideMesh("no elements on the surface y = 0")
    xs = np.concatenate([el.coords[:, 0] for el in elements])
    lo_x, hi_x = xs.min(), xs.max()
    tol = 1e-9 * max(1.0, np.abs(xs).max())
    if load.b > hi_x + tol or (lo_x < -tol and -load.b < lo_x - tol):
        raise LoadOutsideMesh(f"strip |x| <= {load.b} extends beyond the surface [{lo_x}, {hi_x}]")
    for el in elements:
        gp, gw = np.polynomial.legendre.leggauss(el.degree + 3)
        dofs = np.array([2 * index[nid] + 1 for nid in el.node_ids])
        for a, c in _strip_intervals(el, load.b):
            for eta, w in zip(0.5 * (c - a) * gp + 0.5 * (c + a), 0.5 * (c - a) * gw):
                N, dN = shape_functions(el.basis, eta)
                f[dofs] -= load.p0 * N * np.hypot(*(dN @ el.coords)) * w
    return f


def apply_symmetry_constraints(system, coords, tol=1e-9):
    """Fix u_x = 0 on nodes of the plane x = 0 by dropping those dofs.

    ``coords`` are the node coordinates in ``system.node_ids`` order. The
    returned system keeps ``S`` and ``f`` restricted to the free dofs.
    """
    if system.dofs.size != system.ndofs:
        raise ValueError("constraints already applied")
    coords = np.asarray(coords, dtype=float)
    scale = max(1.0, np.abs(coords).max())
    on_plane = np.abs(coords[:, 0]) < tol * scale
    keep = np.ones(system.ndofs, dtype=bool)
    keep[2 * np.flatnonzero(on_plane)] = False
    dofs = np.flatnonzero(keep)
    return GlobalSystem(system.S[np.ix_(dofs, dofs)], system.f[dofs], system.node_ids,
                        system.dof_maps, system.omega, dofs)


def solve(system, rhs=None):
    """Direct complex LU solve of ``S u = f``.

    ``rhs`` overrides ``system.f`` and may be full length or reduced. The
    returned displacement always has full length, zero on constrained dofs.
    """
    f = system.f if rhs is None else np.asarray(rhs, dtype=complex)
    if f.shape[0] == system.ndofs and system.dofs.size != system.ndofs:
        f = f[system.dofs]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(system.S, check_finite=False)
    diag = np.abs(np.diag(lu))
    if diag.min() <= 1e-14 * diag.max():
        raise SingularGlobalMatrix("global dynamic stiffness is singular; undamped resonance or missing constraint")
    u = np.zeros(system.ndofs, dtype=complex)
    u[system.dofs] = lu_solve((lu, piv), f, check_finite=False)
    if not np.all(np.isfinite(u)):
        raise SingularGlobalMatrix("non-finite solution")
    return u
