"""Subdomain coefficient matrices E0, E1, E2 and M0."""

from dataclasses import dataclass, field

import numpy as np

from .geometry import BoundaryElement, centroid, strain_blocks
from .material import DampingProfile, Material, elasticity_matrix
from .radial import RadialGrid

BOUNDED = "bounded"
UNBOUNDED = "unbounded"


class SingularE0(np.linalg.LinAlgError):
    pass


class DuplicateNode(ValueError):
    pass


class DanglingNode(ValueError):
    pass


@dataclass
class Subdomain:
    """A star-convex region scaled from ``center`` onto a chain of elements.

    For ``kind == "unbounded"`` the region extends outward from the
    elements; its radial grid runs from the truncation point down to 1.
    ``damping`` defaults to a constant profile at the material damping ratio.
    """

    kind: str
    center: np.ndarray
    elements: list
    material: Material
    radial: RadialGrid
    damping: DampingProfile = None
    name: str = ""
    damping_form: str = "scaled"

    def __post_init__(self):
        if self.kind not in (BOUNDED, UNBOUNDED):
            raise ValueError(f"unknown subdomain kind {self.kind!r}")
        if self.center is None:
            self.center = centroid(self.elements)
        self.center = np.asarray(self.center, dtype=float)
        if self.damping is None:
            self.damping = DampingProfile.constant(self.material.damping_ratio)
        if self.kind == BOUNDED and self.damping.kind != "constant":
            raise ValueError("bounded subdomains take a constant damping profile")
        if self.kind == BOUNDED and not 0.0 < self.radial.xi_start < 1.0:
            raise ValueError("bounded subdomains need 0 < xi_start < 1")
        if self.kind == UNBOUNDED and not self.radial.xi_start > 1.0:
            raise ValueError("unbounded subdomains need xi_start > 1")

    @property
    def sign(self):
        return 1.0 if self.kind == BOUNDED else -1.0

    @property
    def node_ids(self):
        return dof_map(self).node_ids


@dataclass(frozen=True)
class DofMap:
    """Local dof ``2k + c`` of a subdomain belongs to node ``node_ids[k]``, component ``c``."""

    node_ids: tuple
    element_dofs: list = field(compare=False)

    @property
    def ndofs(self):
        return 2 * len(self.node_ids)

    def local_index(self, node_id, component):
        return 2 * self.node_ids.index(node_id) + component

    def scatter(self, local, global_index):
        """Scatter a local (m x m) matrix into a global one given node -> global-dof lookup."""
        idx = self.global_dofs(global_index)
        out = np.zeros((len(global_index) * 2,) * 2, dtype=local.dtype)
        out[np.ix_(idx, idx)] = local
        return out

    def global_dofs(self, global_index):
        """Global dof numbers for the local dofs; ``global_index`` maps node id -> node position."""
        idx = np.empty(self.ndofs, dtype=int)
        for k, nid in enumerate(self.node_ids):
            g = global_index[nid]
            idx[2 * k] = 2 * g
            idx[2 * k + 1] = 2 * g + 1
        return idx


def dof_map(s):
    """Deterministic local numbering: ascending node id, x before y."""
    coords = {}
    for e_idx, el in enumerate(s.elements):
        if len(set(el.node_ids)) != len(el.node_ids):
            raise DuplicateNode(f"element {e_idx} repeats a node id")
        for nid, xy in zip(el.node_ids, el.coords):
            if nid in coords and not np.allclose(coords[nid], xy, rtol=0, atol=1e-9 * (1 + np.abs(xy).max())):
                raise DuplicateNode(f"node {nid} appears with two different coordinates")
            coords[nid] = xy
    # coincident nodes with different ids would split the boundary
    ids = sorted(coords)
    pts = np.array([coords[i] for i in ids])
    if len(ids) > 1:
        d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
        scale = max(np.ptp(pts, axis=0).max(), 1e-300)
        d[np.diag_indices_from(d)] = np.inf
        if np.any(d < 1e-10 * scale):
            raise DuplicateNode("distinct node ids share one position")
    _check_chain(s.elements)
    node_ids = tuple(ids)
    pos = {nid: k for k, nid in enumerate(node_ids)}
    element_dofs = []
    for el in s.elements:
        dofs = np.empty(2 * len(el.node_ids), dtype=int)
        for a, nid in enumerate(el.node_ids):
            dofs[2 * a] = 2 * pos[nid]
            dofs[2 * a + 1] = 2 * pos[nid] + 1
        element_dofs.append(dofs)
    return DofMap(node_ids, element_dofs)


def _check_chain(elements):
    """End nodes must link all elements into one chain or loop (order-free)."""
    if not elements:
        raise DanglingNode("subdomain has no elements")
    uses = {}
    for el in elements:
        for nid in (el.node_ids[0], el.node_ids[-1]):
            uses[nid] = uses.get(nid, 0) + 1
    if any(count > 2 for count in uses.values()):
        raise DanglingNode("an end node is shared by more than two elements")
    parent = {nid: nid for nid in uses}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for el in elements:
        parent[find(el.node_ids[0])] = find(el.node_ids[-1])
    if len({find(nid) for nid in uses}) != 1:
        raise DanglingNode("elements do not form a connected chain")


@dataclass
class CoefficientMatrices:
    E0: np.ndarray
    E1: np.ndarray
    E2: np.ndarray
    M0: np.ndarray

    @property
    def size(self):
        return self.E0.shape[0]


def element_coefficients(center, element, D, rho, npts=None):
    """Coefficient matrices of one element by (p+2)-point Gauss-Legendre quadrature."""
    if npts is None:
        npts = element.degree + 2
    k = 2 * (element.degree + 1)
    E0 = np.zeros((k, k))
    E1 = np.zeros((k, k))
    E2 = np.zeros((k, k))
    M0 = np.zeros((k, k))
    for eta, w in zip(*np.polynomial.legendre.leggauss(npts)):
        B1, B2, N, detJ = strain_blocks(center, element, eta)
        wj = w * detJ
        DB1 = D @ B1
        E0 += wj * B1.T @ DB1
        E1 += wj * B2.T @ DB1
        E2 += wj * B2.T @ (D @ B2)
        M0 += wj * rho * N.T @ N
    return E0, E1, E2, M0


def assemble_coefficients(s, npts=None, cond_limit=1e14):
    """Assemble E0, E1, E2 and M0 over all elements of a subdomain."""
    dm = dof_map(s)
    m = dm.ndofs
    D = elasticity_matrix(s.material)
    out = [np.zeros((m, m)) for _ in range(4)]
    for el, dofs in zip(s.elements, dm.element_dofs):
        parts = element_coefficients(s.center, el, D, s.material.density, npts)
        ix = np.ix_(dofs, dofs)
        for acc, part in zip(out, parts):
            acc[ix] += part
    E0, E1, E2, M0 = out
    # symmetric by construction; remove quadrature round-off
    E0 = 0.5 * (E0 + E0.T)
    E2 = 0.5 * (E2 + E2.T)
    M0 = 0.5 * (M0 + M0.T)
    cond = np.linalg.cond(E0)
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularE0(f"cond(E0) = {cond:.3e} exceeds {cond_limit:.0e}; check the geometry")
    return CoefficientMatrices(E0, E1, E2, M0)
