# %% [markdown]
# Boundary discretization
# =======================
#
# Every subdomain is described by its boundary alone. Each boundary element
# carries a Lagrange basis on Gauss-Lobatto-Legendre (GLL) nodes, and the
# interior is reached by scaling the boundary towards a scaling center.

# %%
import numpy as np

from sbfem.geometry import BoundaryElement, boundary_point, jacobian, map_point
from sbfem.gll import gll_rule, shape_functions

# %% [markdown]
# The GLL rule with 10 points (degree 9) is what the half-space runs use.
# Nodes include both end points, and the weights integrate polynomials up
# to degree 2n - 1 exactly.

# %%
basis = gll_rule(9)
print("nodes  ", np.round(basis.nodes, 4))
print("weights", np.round(basis.weights, 4), "sum", basis.weights.sum())
print("int x^16 dx:", basis.weights @ basis.nodes**16, "exact", 2 / 17)

# %% [markdown]
# The shape functions are a partition of unity and interpolate nodally.

# %%
for eta in (-0.73, 0.0, 0.41):
    N, dN = shape_functions(basis, eta)
    print(f"eta={eta:+.2f}  sum N = {N.sum():.15f}  sum dN = {dN.sum():+.1e}")
N, _ = shape_functions(basis, basis.nodes[3])
print("at node 3:", np.round(N, 12))

# %% [markdown]
# A curved quadratic element (a quarter circle arc approximated by three
# nodes), scaled from the origin. ``xi = 1`` is the boundary and ``xi = 0``
# the scaling center.

# %%
arc = np.array([[1.0, 0.0], [np.sqrt(0.5), np.sqrt(0.5)], [0.0, 1.0]])
el = BoundaryElement((1, 2, 3), arc)
center = np.zeros(2)
print("element length ~", el.length(), "(quarter circle", np.pi / 2, ")")
for xi in (1.0, 0.5, 0.1):
    print("xi =", xi, "eta = 0 ->", map_point(center, el, xi, 0.0))

# %% [markdown]
# The Jacobian determinant is positive when the boundary runs
# counter-clockwise around the center, which is the orientation every
# subdomain must use.

# %%
for eta in np.linspace(-1, 1, 5):
    p, dp = boundary_point(el, eta)
    print(f"eta={eta:+.2f}  point={np.round(p, 3)}  |J|={jacobian(center, el, eta).detJ:.4f}")
