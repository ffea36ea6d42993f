"""Legendre polynomials, Gauss-Lobatto-Legendre rules and Lagrange shape functions.

All quantities live on the reference interval [-1, +1].
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_DEGREE = 64


class ConvergenceError(RuntimeError):
    """Newton iteration for the GLL nodes did not converge."""


def legendre(n, eta):
    """Evaluate the Legendre polynomial P_n and its derivative.

    Uses the three-term recurrence. Works elementwise on arrays.

    Parameters
    ----------
    n : int
        Polynomial degree, n >= 0.
    eta : float or array_like
        Evaluation point(s) in [-1, 1].

    Returns
    -------
    value, derivative : float or ndarray
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(eta, dtype=float)
    p_prev = np.ones_like(x)
    dp_prev = np.zeros_like(x)
    if n == 0:
        return _unwrap(p_prev), _unwrap(dp_prev)
    p = x.copy()
    dp = np.ones_like(x)
    for k in range(1, n):
        p_next = ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
        # P'_{k+1} = P'_{k-1} + (2k+1) P_k
        dp_next = dp_prev + (2 * k + 1) * p
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
    return _unwrap(p), _unwrap(dp)


def _unwrap(a):
    return float(a) if a.ndim == 0 else a


@dataclass(frozen=True)
class ReferenceBasis:
    """GLL nodes and weights of a degree-``degree`` Lagrange basis."""

    degree: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self):
        return self.degree + 1

    def shape_functions(self, eta):
        return shape_functions(self, eta)


@lru_cache(maxsize=None)
def gll_rule(n, tol=1e-15, maxiter=100):
    """Gauss-Lobatto-Legendre rule with ``n + 1`` points.

    Interior nodes are the roots of P'_n, found by Newton iteration seeded
    with the Chebyshev-Gauss-Lobatto points.
    """
    if not 1 <= n <= MAX_DEGREE:
        raise ValueError(f"degree must lie in [1, {MAX_DEGREE}], got {n}")
    x = -np.cos(np.pi * np.arange(n + 1) / n)
    interior = x[1:-1].copy()
    for _ in range(maxiter):
        if interior.size == 0:
            break
        p, dp = legendre(n, interior)
        # Legendre ODE gives P''_n = (2x P'_n - n(n+1) P_n) / (1 - x^2)
        d2p = (2 * interior * dp - n * (n + 1) * p) / (1 - interior**2)
        step = dp / d2p
        interior = interior - step
        if np.max(np.abs(step)) < tol:
            break
    else:
        raise ConvergenceError(f"GLL nodes of degree {n} did not converge")
    nodes = np.concatenate(([-1.0], interior, [1.0]))
    # enforce exact symmetry
    nodes = 0.5 * (nodes - nodes[::-1])
    p, _ = legendre(n, nodes)
    weights = 2.0 / (n * (n + 1) * p**2)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return ReferenceBasis(n, nodes, weights)


def shape_functions(basis, eta):
    """Lagrange shape functions on the GLL nodes and their derivatives.

    Returns ``(N, dN)``, each of length ``degree + 1``. ``dN`` is the exact
    product-rule derivative.
    """
    nodes = basis.nodes
    k = nodes.size
    eye = np.eye(k, dtype=bool)
    gaps = nodes[:, None] - nodes[None, :]
    denom = np.where(eye, 1.0, gaps).prod(axis=1)
    diff = np.broadcast_to(eta - nodes, (k, k))
    # products over l != i (N) and over l != i, j (dN), no division by
    # eta - x_l so the values stay exact at the nodes
    N = np.where(eye, 1.0, diff).prod(axis=1) / denom
    skip = eye[:, None, :] | eye[None, :, :]
    terms = np.where(skip, 1.0, np.broadcast_to(eta - nodes, (k, k, k))).prod(axis=2)
    dN = np.where(eye, 0.0, terms).sum(axis=1) / denom
    return N, dN


def gauss_legendre(npts):
    """Gauss-Legendre points and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(npts)
