"""Mesh container and the parametric half-space mesh."""

from dataclasses import dataclass, field

import numpy as np

from .assembly import BOUNDED, UNBOUNDED, Subdomain
from .geometry import BoundaryElement
from .gll import gll_rule
from .material import DampingProfile, Material
from .radial import DEFAULT_XI_BOUNDED, DEFAULT_XI_UNBOUNDED, RadialGrid

ROCK = Material(10e9, 0.2, 2500.0, 0.05)


@dataclass
class Mesh:
    subdomains: list
    nodes: dict = field(default_factory=dict)

    def __post_init__(self):
        for s in self.subdomains:
            for el in s.elements:
                for nid, xy in zip(el.node_ids, el.coords):
                    self.nodes.setdefault(nid, np.asarray(xy, dtype=float))

    @property
    def node_ids(self):
        """Sorted ids of every node that carries global dofs."""
        return tuple(sorted(self.nodes))

    def coords(self, node_ids=None):
        ids = self.node_ids if node_ids is None else node_ids
        return np.array([self.nodes[i] for i in ids])

    def elements(self):
        """Distinct elements (an interface element appears once)."""
        seen = {}
        for s in self.subdomains:
            for el in s.elements:
                seen.setdefault(frozenset(el.node_ids), el)
        return list(seen.values())


class _NodeFactory:
    def __init__(self, tol):
        self.tol = tol
        self.ids = {}

    def get(self, xy):
        key = (round(xy[0] / self.tol), round(xy[1] / self.tol))
        if key not in self.ids:
            self.ids[key] = len(self.ids)
        return self.ids[key]


def _segment_elements(start, end, n_segments, degree, nodes):
    """Straight elements with GLL-placed nodes from ``start`` to ``end``."""
    start, end = np.asarray(start, float), np.asarray(end, float)
    eta = gll_rule(degree).nodes
    out = []
    for k in range(n_segments):
        a = start + (end - start) * k / n_segments
        b = start + (end - start) * (k + 1) / n_segments
        coords = a + np.outer((eta + 1) / 2, b - a)
        ids = tuple(nodes.get(xy) for xy in coords)
        out.append(BoundaryElement(ids, coords))
    return out


def halfspace_mesh(
    size=200.0,
    degree=9,
    segments=4,
    n_bounded=100,
    n_unbounded=100,
    material=ROCK,
    xi_bounded=DEFAULT_XI_BOUNDED,
    truncation=DEFAULT_XI_UNBOUNDED,
    zeta_truncation=1.0,
    full=False,
    damping_form="scaled",
):
    """Square near field under the free surface plus unbounded far field.

    The near field ``[0, size] x [-size, 0]`` is one bounded subdomain with
    its scaling center at the centroid and each edge split into ``segments``
    elements. Every bottom and right element also bounds an unbounded
    subdomain scaled from the origin, so the far-field subdomains tile the
    quarter plane around the near field and their side rays run along the
    surface and the symmetry axis. Damping in the far field grows linearly
    from the material value at the interface to ``zeta_truncation``.

    ``damping_form`` selects how the graded damping enters the radial
    equation, see :func:`sbfem.radial.build_rows`.

    With ``full=True`` the mirror image about ``x = 0`` is added, giving the
    model without the symmetry plane.
    """
    L = float(size)
    nodes = _NodeFactory(tol=1e-9 * L)
    corners = [(0.0, -L), (L, -L), (L, 0.0), (0.0, 0.0)]
    edges = [
        _segment_elements(corners[k], corners[(k + 1) % 4], segments, degree, nodes)
        for k in range(4)
    ]
    loop = [el for edge in edges for el in edge]
    far = edges[0] + edges[1]
    damping = DampingProfile.linear(zeta_truncation, material.damping_ratio)

    def build(loop, far, center, mirror):
        tag = "L" if mirror else ""
        subs = [
            Subdomain(BOUNDED, center, loop, material, RadialGrid.bounded(n_bounded, xi_bounded),
                      name=f"near{tag}")
        ]
        for k, el in enumerate(far):
            subs.append(
                Subdomain(UNBOUNDED, (0.0, 0.0), [el], material,
                          RadialGrid.unbounded(n_unbounded, truncation), damping, name=f"far{tag}{k}",
                          damping_form=damping_form)
            )
        return subs

    subs = build(loop, far, (L / 2, -L / 2), False)
    if full:
        def mirror(el):
            coords = el.coords[::-1] * np.array([-1.0, 1.0])
            return BoundaryElement(tuple(nodes.get(xy) for xy in coords), coords)

        loop_m = [mirror(el) for el in reversed(loop)]
        far_m = [mirror(el) for el in reversed(far)]
        subs += build(loop_m, far_m, (-L / 2, -L / 2), True)
    return Mesh(subs)


def surface_nodes(mesh, tol=1e-9):
    """Node ids on ``y = 0``, ordered by x."""
    scale = max(1.0, np.abs(mesh.coords()).max())
    ids = [nid for nid, xy in mesh.nodes.items() if abs(xy[1]) < tol * scale]
    return sorted(ids, key=lambda nid: mesh.nodes[nid][0])
