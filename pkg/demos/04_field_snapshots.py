# %% [markdown]
# Interior displacement field
# ===========================
#
# After the global solve, each subdomain's interior follows from its
# boundary trace by a backward sweep. The harmonic field can then be viewed
# at any phase angle of the excitation cycle.

# %%
import tempfile
from pathlib import Path

import numpy as np

from sbfem.cli import bundled_config, solve_frequency
from sbfem.config import load_config
from sbfem.recovery import field_points, phase_snapshot, read_csv, recover_all, write_snapshot_csv

cfg = load_config(bundled_config())
result, mesh, cons, u = solve_frequency(cfg, 15.0)

# %% [markdown]
# ``recover_all`` needs the recovery operators kept by the condensation, so
# the near field is condensed again with storage switched on.

# %%
from sbfem.solver import condense_subdomain

omega = 2 * np.pi * 15.0
cons = [condense_subdomain(s, omega) for s in mesh.subdomains]
solution = recover_all(mesh, cons, u, select=[0])
xy, vals = field_points(solution[0])
print("near-field samples:", xy.shape[0])
print("largest |u_y|:", np.abs(vals[:, 1]).max())

# %% [markdown]
# Real displacement at four phases. Snapshots half a cycle apart have
# opposite sign.

# %%
for phi in (0, 90, 180, 270):
    snap = phase_snapshot(vals, phi)
    print(f"phase {phi:3d}: max u_y = {snap[:, 1].max():+.4f}  min u_y = {snap[:, 1].min():+.4f}")
print("u(0) + u(180) ->", np.abs(phase_snapshot(vals, 0) + phase_snapshot(vals, 180)).max())

# %%
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "near_field_phase90.csv"
    write_snapshot_csv(path, xy, vals, 90)
    header, data = read_csv(path)
    print(header, data.shape)
