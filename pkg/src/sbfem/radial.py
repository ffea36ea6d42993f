"""Radial finite-difference condensation of the scaled boundary equation.

Each radial line is discretised with second-order central differences. Two
ghost rows carry the zero-force condition at ``xi_start`` and the loaded
boundary at ``xi_end``. The block-tridiagonal system is reduced by a block
Thomas sweep to the dynamic stiffness at ``xi_end``; the sweep's
by-products give the interior field by back substitution. The large block
system is never formed.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lapack, lu_factor, lu_solve

from .material import DampingProfile, complex_modulus_factor, damping_at

RCOND_LIMIT = 1e-15
DEFAULT_XI_BOUNDED = 1e-6
DEFAULT_XI_UNBOUNDED = 2.0


class SingularPivot(np.linalg.LinAlgError):
    def __init__(self, index, rcond):
        self.index = index
        self.rcond = rcond
        super().__init__(f"pivot block at grid index {index} is singular (rcond ~ {rcond:.2e})")


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid ``xi_i = xi_start + i*h``, ``i = 0..n_steps``.

    ``xi_start`` is the zero-force end, ``xi_end`` the loaded boundary.
    ``h`` is negative for unbounded subdomains.
    """

    xi_start: float
    xi_end: float = 1.0
    n_steps: int = 100

    def __post_init__(self):
        if self.n_steps < 2:
            raise ValueError("n_steps must be at least 2")
        if self.xi_start == self.xi_end:
            raise ValueError("xi_start and xi_end must differ")
        if min(self.xi_start, self.xi_end) <= 0:
            raise ValueError("all grid points must be positive")

    @classmethod
    def bounded(cls, n_steps=100, xi_start=DEFAULT_XI_BOUNDED):
        return cls(xi_start, 1.0, n_steps)

    @classmethod
    def unbounded(cls, n_steps=100, truncation=DEFAULT_XI_UNBOUNDED):
        return cls(truncation, 1.0, n_steps)

    @property
    def h(self):
        return (self.xi_end - self.xi_start) / self.n_steps

    @property
    def points(self):
        return self.xi_start + self.h * np.arange(self.n_steps + 1)


@dataclass
class BlockRow:
    """Blocks multiplying u_{i-1}, u_i and u_{i+1}."""

    theta: np.ndarray
    phi: np.ndarray
    psi: np.ndarray


class RadialRows:
    """Lazy sequence of the ``n_steps + 3`` block rows of one subdomain.

    ``rows[0]`` is the zero-force ghost row at ``xi_start``, ``rows[1 + i]``
    the interior row at ``xi_i`` (``i = 0..n``) and ``rows[-1]`` the loaded
    ghost row at ``xi_end``. Blocks are formed on access, so a sweep never
    holds more than a few of them.
    """

    def __init__(self, C, grid, omega, damping, form):
        self.grid = grid
        self.omega = omega
        self.xi = grid.points
        zeta = np.atleast_1d(damping_at(damping, self.xi, grid.xi_start, grid.xi_end))
        self.factor = complex_modulus_factor(zeta)
        self.slope = 0j
        if form == "divergence" and damping.kind == "linear":
            self.slope = 2.0j * (damping.zeta_end - damping.zeta_start) / (grid.xi_end - grid.xi_start)
        self.E0 = C.E0.astype(complex)
        self.A = (C.E0 + C.E1.T - C.E1).astype(complex)
        self.E1T = C.E1.T.astype(complex)
        self.E2 = C.E2.astype(complex)
        self.M0 = C.M0.astype(complex)

    def __len__(self):
        return self.grid.n_steps + 3

    def __getitem__(self, k):
        size = len(self)
        if k < 0:
            k += size
        if not 0 <= k < size:
            raise IndexError(k)
        if k == 0:
            return self._ghost(0)
        if k == size - 1:
            return self._ghost(-1)
        return self._interior(k - 1)

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    def _ghost(self, i):
        c, x, h = self.factor[i], self.xi[i], self.grid.h
        return BlockRow(-c * x / (2 * h) * self.E0, c * self.E1T, c * x / (2 * h) * self.E0)

    def _interior(self, i):
        c, x, h, dc = self.factor[i], self.xi[i], self.grid.h, self.slope
        second = c * (x * x / (h * h)) * self.E0
        first = (x / (2 * h)) * (c * self.A + dc * x * self.E0)
        return BlockRow(
            second - first,
            -2.0 * second - c * self.E2 + x * dc * self.E1T + (x * self.omega) ** 2 * self.M0,
            second + first,
        )


def build_rows(C, grid, omega, damping=None, form="scaled"):
    """Central-difference block rows, ghost rows included (``n_steps + 3`` rows).

    The elastic matrices are scaled by ``c_i = 1 + 2i*zeta(xi_i)`` row by
    row. ``form="divergence"`` also keeps the term ``xi c'(xi) q(xi)`` that a
    radially varying modulus adds to the equilibrium equation (``q`` being
    the internal force); it vanishes for constant damping. See
    :class:`RadialRows` for the row layout.
    """
    if omega < 0:
        raise ValueError("omega must be non-negative")
    if form not in ("scaled", "divergence"):
        raise ValueError(f"unknown form {form!r}")
    if damping is None:
        damping = DampingProfile.constant(0.0)
    return RadialRows(C, grid, omega, damping, form)


def _factor(a, index, rcond_limit=RCOND_LIMIT):
    with warnings.catch_warnings():
        # an exactly singular block is reported through SingularPivot below
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a, check_finite=False)
    anorm = np.linalg.norm(a, 1)
    if anorm == 0.0:
        raise SingularPivot(index, 0.0)
    gecon = lapack.zgecon if np.iscomplexobj(lu) else lapack.dgecon
    rcond, _ = gecon(lu, anorm, norm="1")
    if not np.isfinite(rcond) or rcond < rcond_limit:
        raise SingularPivot(index, rcond)
    return lu, piv


def _right_solve(factored, b):
    """Return ``b @ inv(A)`` from the LU factors of ``A``."""
    return lu_solve(factored, b.T, trans=1, check_finite=False).T


@dataclass
class RadialCondensation:
    """Dynamic stiffness at ``xi_end`` and the back-substitution operators.

    ``recovery_ops[i]`` maps ``u_{i+1}`` to ``u_i`` for ``i = 0..n-1``.
    ``S`` already carries the subdomain sign.
    """

    S: np.ndarray
    recovery_ops: np.ndarray
    grid: RadialGrid
    sign: float
    rows: list = None

    def recover(self, u_end):
        return recover_interior(self, u_end)


def condense(rows, sign=1.0, grid=None, store=True, rcond_limit=RCOND_LIMIT):
    """Eliminate the interior radial unknowns of one subdomain.

    Parameters
    ----------
    rows : sequence of BlockRow
        Output of :func:`build_rows` (or any list in the same layout).
    sign : float
        +1 for bounded, -1 for unbounded subdomains.
    store : bool
        Keep the back-substitution operators. With ``store=False`` the rows
        are kept instead and the sweep is re-run on recovery.

    Raises
    ------
    SingularPivot
        A pivot block is numerically singular, typically an interior
        resonance or a too coarse grid.
    """
    n = len(rows) - 3
    if n < 2:
        raise ValueError("need at least two radial steps")
    first, last = rows[0], rows[-1]
    row0, row_n = rows[1], rows[n + 1]

    # Gauss-Jordan step on the zero-force ghost row
    chi0 = _right_solve(_factor(first.theta, -1, rcond_limit), row0.theta)
    phi_prev = row0.phi - chi0 @ first.phi
    psi_prev = row0.psi - chi0 @ first.psi

    # same on the loaded ghost row, using the original row n
    chi_last = _right_solve(_factor(row_n.theta, n, rcond_limit), last.theta)
    phi_last = last.phi - chi_last @ row_n.phi
    psi_last = last.psi - chi_last @ row_n.psi

    m = phi_prev.shape[0]
    ops = np.empty((n, m, m), dtype=complex) if store else None
    for i in range(1, n + 1):
        # u_{i-1} = R_{i-1} u_i, so theta_i u_{i-1} folds into phi_i
        R = -lu_solve(_factor(phi_prev, i - 1, rcond_limit), psi_prev, check_finite=False)
        if store:
            ops[i - 1] = R
        row = rows[i + 1]
        phi_prev = row.phi + row.theta @ R
        psi_prev = row.psi

    # decoupled 2x2 block system in (u_n, u_{n+1})
    ghost = lu_solve(_factor(psi_prev, n, rcond_limit), phi_prev, check_finite=False)
    S = sign * (phi_last - psi_last @ ghost)
    return RadialCondensation(S, ops, grid, sign, None if store else rows)


def recover_interior(c, u_end):
    """Back substitution ``u_i = R_i u_{i+1}`` from the boundary values.

    Returns an ``(n + 1, m)`` complex array, row ``i`` at ``xi_i``. The sweep
    assumes zero right-hand sides on all rows but the loaded ghost row; an
    interior load would need its own forward-swept term here.
    """
    if c.recovery_ops is None:
        c = condense(c.rows, c.sign, c.grid, store=True)
    ops = c.recovery_ops
    n = ops.shape[0]
    u = np.empty((n + 1, ops.shape[1]), dtype=complex)
    u[n] = u_end
    for i in range(n - 1, -1, -1):
        u[i] = ops[i] @ u[i + 1]
    return u


def forward_sweep_rhs(rows, rhs):
    """Apply the elimination steps of :func:`condense` to a block right-hand side.

    ``rhs`` holds one block per row, ordered like ``rows``. Returns the
    transformed blocks; with a load only on the last ghost row every other
    block stays zero.
    """
    n = len(rows) - 3
    first, last = rows[0], rows[-1]
    interior = [rows[k] for k in range(1, n + 2)]
    out = [np.array(r, dtype=complex) for r in rhs]
    chi0 = interior[0].theta @ np.linalg.inv(first.theta)
    out[1] = out[1] - chi0 @ out[0]
    chi_last = last.theta @ np.linalg.inv(interior[n].theta)
    out[-1] = out[-1] - chi_last @ out[n + 1]
    phi_prev = interior[0].phi - chi0 @ first.phi
    psi_prev = interior[0].psi - chi0 @ first.psi
    for i in range(1, n + 1):
        chi = interior[i].theta @ np.linalg.inv(phi_prev)
        out[i + 1] = out[i + 1] - chi @ out[i]
        phi_prev = interior[i].phi - chi @ psi_prev
        psi_prev = interior[i].psi
    return out
