"""Scaled boundary transformation of geometry on isoparametric boundary elements."""

from dataclasses import dataclass

import numpy as np

from .gll import gll_rule, shape_functions


class NonPositiveJacobian(ValueError):
    """Element is inverted with respect to its scaling center."""


@dataclass(frozen=True)
class BoundaryElement:
    """A line element whose nodes sit at GLL positions along the boundary.

    ``coords`` holds the ``degree + 1`` node coordinates in element order.
    Nodes must be ordered counterclockwise around the scaling center.
    """

    node_ids: tuple
    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "node_ids", tuple(self.node_ids))
        if coords.shape != (len(self.node_ids), 2):
            raise ValueError("coords must be (len(node_ids), 2)")
        if len(self.node_ids) < 2:
            raise ValueError("an element needs at least two nodes")

    @property
    def degree(self):
        return len(self.node_ids) - 1

    @property
    def basis(self):
        return gll_rule(self.degree)

    def length(self, npts=16):
        """Arc length by Gauss quadrature."""
        eta, w = np.polynomial.legendre.leggauss(npts)
        basis = self.basis
        total = 0.0
        for e, wi in zip(eta, w):
            _, dN = shape_functions(basis, e)
            total += wi * np.hypot(*(dN @ self.coords))
        return total


@dataclass(frozen=True)
class JacobianData:
    j11: float
    j12: float
    j21: float
    j22: float
    detJ: float


def boundary_point(element, eta):
    """Return (x_p, y_p) and its eta-derivative on the element."""
    N, dN = shape_functions(element.basis, eta)
    return N @ element.coords, dN @ element.coords


def map_point(center, element, xi, eta):
    """Map local (xi, eta) to global (x, y)."""
    c = np.asarray(center, dtype=float)
    p, _ = boundary_point(element, eta)
    return c + xi * (p - c)


def jacobian(center, element, eta):
    xc, yc = center
    (xp, yp), (dxp, dyp) = boundary_point(element, eta)
    det = (xp - xc) * dyp - (yp - yc) * dxp
    if det <= 0.0:
        raise NonPositiveJacobian(
            f"|J| = {det:.3e} at eta={eta:+.3f} on element {element.node_ids}; "
            "nodes must run counterclockwise around the scaling center"
        )
    return JacobianData(dyp / det, -(yp - yc) / det, -dxp / det, (xp - xc) / det, det)


def _voigt(a, b):
    return np.array([[a, 0.0], [0.0, b], [b, a]])


def strain_blocks(center, element, eta):
    """Strain-displacement blocks B1 and B2 at ``eta``.

    Dofs are interleaved (u_x, u_y) per node. Returns ``(B1, B2, N, detJ)``.
    """
    jd = jacobian(center, element, eta)
    N, dN = shape_functions(element.basis, eta)
    b1 = _voigt(jd.j11, jd.j21)
    b2 = _voigt(jd.j12, jd.j22)
    k = N.size
    Nmat = np.zeros((2, 2 * k))
    dNmat = np.zeros((2, 2 * k))
    Nmat[0, 0::2] = N
    Nmat[1, 1::2] = N
    dNmat[0, 0::2] = dN
    dNmat[1, 1::2] = dN
    return b1 @ Nmat, b2 @ dNmat, Nmat, jd.detJ


def star_convex(center, elements, samples=32):
    """Screen for star-convexity: the polar angle must increase monotonically.

    Works for open chains and closed loops. Returns True when the screen passes.
    """
    c = np.asarray(center, dtype=float)
    angles = []
    for el in elements:
        for eta in np.linspace(-1.0, 1.0, samples):
            p, _ = boundary_point(el, eta)
            angles.append(np.arctan2(p[1] - c[1], p[0] - c[0]))
    steps = np.diff(np.unwrap(angles))
    total = np.sum(steps)
    return bool(np.all(steps >= -1e-12) and total <= 2 * np.pi + 1e-9)


def centroid(elements):
    """Area centroid of a closed boundary loop (shoelace over sampled points)."""
    pts = []
    for el in elements:
        for eta in np.linspace(-1.0, 1.0, 33)[:-1]:
            pts.append(boundary_point(el, eta)[0])
    pts = np.array(pts)
    x, y = pts[:, 0], pts[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = cross.sum() / 2
    if abs(area) < 1e-300:
        return pts.mean(axis=0)
    return np.array([((x + xn) * cross).sum(), ((y + yn) * cross).sum()]) / (6 * area)
