# %% [markdown]
# Condensing one subdomain
# ========================
#
# The radial direction is discretized with central differences. The
# resulting block-tridiagonal system is eliminated row by row, which leaves
# the dynamic stiffness ``S`` relating boundary displacements to boundary
# forces. A backward sweep recovers the interior.

# %%
import numpy as np

from sbfem import BOUNDED, Subdomain, assemble_coefficients, build_rows, condense, recover_interior
from sbfem.geometry import BoundaryElement
from sbfem.material import DampingProfile, Material
from sbfem.radial import RadialGrid

# %% [markdown]
# A 2 m square with one quadratic element per side, counter-clockwise.

# %%
corners = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
elements = []
for k in range(4):
    a, b = corners[k], corners[(k + 1) % 4]
    ids = (2 * k, 2 * k + 1, (2 * k + 2) % 8)
    elements.append(BoundaryElement(ids, np.array([a, (a + b) / 2, b])))

rock = Material(10e9, 0.2, 2500.0, 0.05)
s = Subdomain(BOUNDED, None, elements, rock, RadialGrid.bounded(40))
C = assemble_coefficients(s)
print("boundary dofs:", C.size, " scaling center:", s.center)

# %% [markdown]
# Static limit: without mass and damping a rigid translation costs no
# force, so ``S r`` vanishes up to the radial discretization error.

# %%
static = condense(build_rows(C, s.radial, 0.0, DampingProfile.constant(0.0)), s.sign).S
for comp, name in ((0, "x"), (1, "y")):
    r = np.zeros(C.size)
    r[comp::2] = 1.0
    print(f"rigid {name}: |S r| / (|S| |r|) = {np.linalg.norm(static @ r) / (np.linalg.norm(static) * np.linalg.norm(r)):.2e}")

# %% [markdown]
# At 200 rad/s the stiffness becomes complex. Halving the radial step
# reduces the change in ``S`` by about four for this low-order element.

# %%
omega = 200.0
prev, diffs = None, []
for n in (20, 40, 80, 160):
    sn = Subdomain(BOUNDED, None, elements, rock, RadialGrid.bounded(n))
    S = condense(build_rows(assemble_coefficients(sn), sn.radial, omega, sn.damping), sn.sign).S
    if prev is not None:
        diffs.append(np.linalg.norm(S - prev))
    prev = S
print("successive differences:", ["%.3e" % d for d in diffs])
print("ratios:", ["%.2f" % (a / b) for a, b in zip(diffs[:-1], diffs[1:])])

# %% [markdown]
# Shake the whole boundary vertically with unit amplitude and look at how
# the motion changes towards the scaling center. A static field would be
# uniform; at 200 rad/s inertia makes the interior overshoot slightly.

# %%
c = condense(build_rows(C, s.radial, omega, s.damping), s.sign, s.radial)
u_end = np.zeros(C.size, dtype=complex)
u_end[1::2] = 1.0
u = recover_interior(c, u_end)
for i in (0, 10, 20, 30, 40):
    print(f"xi = {c.grid.points[i]:.3f}  u_y = {u[i, 1::2].mean():.4f}")
