# %% [markdown]
# Discretization studies
# ======================
#
# Error against the analytic surface curve as the radial grid or the
# element order is refined. Resolution is reported per pressure
# wavelength. Radial steps are counted along the longest radial line of the
# mesh and GLL points along the longest element.

# %%
from sbfem.cli import bundled_config, convergence_study
from sbfem.config import load_config

cfg = load_config(bundled_config())

# %% [markdown]
# Radial refinement at 15 Hz. The error falls quickly and then levels off:
# beyond about 90 steps per wavelength the remaining error is set by the
# truncated far field, not by the radial grid.

# %%
for f, n, per, sse in convergence_study(cfg, "radial_steps", [25, 50, 100, 200], [15.0]):
    print(f"{f:g} Hz  n = {n:4d}  {per:6.1f} steps/lambda_p  SSE = {sse:.4e}")

# %% [markdown]
# Element order at 15 Hz with 100 radial steps. The best result sits near
# 17 points per wavelength. Higher orders add circumferential modes that
# the fixed radial grid no longer resolves, so the error grows again.

# %%
for f, p, per, sse in convergence_study(cfg, "gll_points", [4, 6, 8, 12], [15.0]):
    print(f"{f:g} Hz  {p:2d} points  {per:5.1f} points/lambda_p  SSE = {sse:.4e}")
