import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sbfem.assembly import BOUNDED, UNBOUNDED, Subdomain  # noqa: E402
from sbfem.geometry import BoundaryElement  # noqa: E402
from sbfem.gll import gll_rule  # noqa: E402
from sbfem.material import DampingProfile, Material  # noqa: E402
from sbfem.radial import RadialGrid  # noqa: E402


def straight_element(ids, a, b):
    """Element from ``a`` to ``b`` with nodes at the GLL positions."""
    t = (gll_rule(len(ids) - 1).nodes + 1.0) / 2.0
    a, b = np.asarray(a, float), np.asarray(b, float)
    return BoundaryElement(tuple(ids), a + t[:, None] * (b - a))


def chain(vertices, degree, closed, first_id=0):
    """Straight elements through ``vertices``; ids are consecutive integers."""
    elements = []
    nid = first_id
    count = len(vertices) if closed else len(vertices) - 1
    n_nodes = count * degree + (0 if closed else 1)
    for k in range(count):
        ids = [first_id + (nid - first_id + j) % n_nodes for j in range(degree + 1)]
        elements.append(straight_element(ids, vertices[k], vertices[(k + 1) % len(vertices)]))
        nid += degree
    return elements


def random_subdomain(rng, kind=None, n_max=30, omega_max=500.0):
    """A small random subdomain with its frequency: ``(subdomain, omega)``.

    Bounded subdomains are random star-shaped polygons around the origin,
    unbounded ones open chains inside a sector of less than 180 degrees.
    At most 10 boundary nodes, so ``m <= 20``.
    """
    kind = kind or (BOUNDED if rng.random() < 0.5 else UNBOUNDED)
    degree = int(rng.integers(1, 4))
    mat = Material(
        young_modulus=rng.uniform(1e9, 5e10),
        poisson_ratio=rng.uniform(0.0, 0.45),
        density=rng.uniform(1500.0, 3000.0),
        damping_ratio=rng.uniform(0.0, 1.0),
    )
    n = int(rng.integers(2, n_max + 1))
    if kind == BOUNDED:
        k = int(rng.integers(3, 10 // degree + 1))
        jitter = rng.uniform(-0.15, 0.15, k) * 2 * np.pi / k
        ang = rng.uniform(0, 2 * np.pi) + np.linspace(0, 2 * np.pi, k, endpoint=False) + jitter
        r = rng.uniform(0.6, 1.4, k) * 10.0
        verts = np.c_[r * np.cos(ang), r * np.sin(ang)]
        elements = chain(verts, degree, closed=True)
        grid = RadialGrid(rng.uniform(0.01, 0.5), 1.0, n)
        damping = DampingProfile.constant(mat.damping_ratio)
        form = "scaled"
    else:
        k = int(rng.integers(1, 9 // degree + 1))
        span = rng.uniform(0.3, 2.5)
        ang = rng.uniform(0, 2 * np.pi) + np.linspace(0, span, k + 1)
        r = rng.uniform(0.6, 1.4, k + 1) * 10.0
        verts = np.c_[r * np.cos(ang), r * np.sin(ang)]
        elements = chain(verts, degree, closed=False)
        grid = RadialGrid(rng.uniform(1.2, 3.0), 1.0, n)
        damping = DampingProfile.linear(rng.uniform(0.0, 1.0), mat.damping_ratio)
        form = "divergence" if rng.random() < 0.5 else "scaled"
    s = Subdomain(kind, np.zeros(2), elements, mat, grid, damping, damping_form=form)
    return s, float(rng.uniform(0.0, omega_max))


def square_subdomain(L=2.0, degree=2, segments=1, material=None, n_steps=20, xi_start=1e-6):
    """Bounded square ``[0, L]^2`` scaled from its center."""
    verts = []
    corners = [(0, 0), (L, 0), (L, L), (0, L)]
    for k in range(4):
        a, b = np.array(corners[k], float), np.array(corners[(k + 1) % 4], float)
        for s in range(segments):
            verts.append(a + (b - a) * s / segments)
    elements = chain(verts, degree, closed=True)
    material = material or Material(10e9, 0.2, 2500.0, 0.0)
    return Subdomain(BOUNDED, (L / 2, L / 2), elements, material, RadialGrid(xi_start, 1.0, n_steps))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def rock():
    return Material(10e9, 0.2, 2500.0, 0.05)
