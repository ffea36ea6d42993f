import numpy as np
import pytest

from oracles import dense_condensation, dense_radial_system
from sbfem.assembly import assemble_coefficients, dof_map
from sbfem.material import OutOfRange
from sbfem.mesh import halfspace_mesh
from sbfem.recovery import (
    FieldSolution,
    SubdomainField,
    FIELD_HEADER,
    field_points,
    phase_snapshot,
    read_csv,
    recover_all,
    sample,
    write_field_csv,
    write_snapshot_csv,
    write_surface_csv,
)
from sbfem.solver import LoadCase, apply_symmetry_constraints, assemble_global, condense_subdomain, solve, strip_load_vector

OMEGA = 2 * np.pi * 25.0


def solved(n=20, degree=3, xi_bounded=1e-3):
    mesh = halfspace_mesh(degree=degree, n_bounded=n, n_unbounded=n, xi_bounded=xi_bounded)
    cons = [condense_subdomain(s, OMEGA) for s in mesh.subdomains]
    g = assemble_global(cons, mesh)
    g.f = strip_load_vector(mesh, LoadCase(1e9, 50.0, OMEGA))
    u = solve(apply_symmetry_constraints(g, mesh.coords()))
    return mesh, cons, u


@pytest.fixture(scope="module")
def problem():
    return solved()


class TestRecoverAll:
    def test_empty_selection(self, problem):
        mesh, cons, u = problem
        assert len(recover_all(mesh, cons, u, select=[])) == 0

    def test_trace(self, problem):
        mesh, cons, u = problem
        sol = recover_all(mesh, cons, u)
        index = {nid: k for k, nid in enumerate(mesh.node_ids)}
        for k, f in sol.fields.items():
            assert np.array_equal(f.u[-1], u[dof_map(mesh.subdomains[k]).global_dofs(index)])
        assert sol.omega == OMEGA

    def test_interface_continuity(self, problem):
        mesh, cons, u = problem
        sol = recover_all(mesh, cons, u)
        near, far = sol[0], sol[1]
        shared = set(dof_map(near.subdomain).node_ids) & set(dof_map(far.subdomain).node_ids)
        assert shared
        for nid in shared:
            a = dof_map(near.subdomain).local_index(nid, 1)
            b = dof_map(far.subdomain).local_index(nid, 1)
            assert near.u[-1, a] == far.u[-1, b]

    def test_dense_field(self):
        mesh, cons, u = solved(n=12, degree=2)
        sol = recover_all(mesh, cons, u)
        index = {nid: k for k, nid in enumerate(mesh.node_ids)}
        for k in (0, 3):
            s = mesh.subdomains[k]
            C = assemble_coefficients(s)
            g = s.radial
            from sbfem.material import damping_at

            zeta = np.atleast_1d(damping_at(s.damping, g.points, g.xi_start, g.xi_end))
            K = dense_radial_system(C.E0, C.E1, C.E2, C.M0, g.points, OMEGA, 1 + 2j * zeta)
            _, G = dense_condensation(K, C.size, g.n_steps, s.sign)
            trace = u[dof_map(s).global_dofs(index)]
            ref = (G @ trace).reshape(g.n_steps, C.size)
            got = sol[k].u[:-1]
            assert np.linalg.norm(got - ref) / np.linalg.norm(ref) < 1e-9


class TestSample:
    def test_grid_point_node(self, problem):
        mesh, cons, u = problem
        sol = recover_all(mesh, cons, u, select=[0])
        f = sol[0]
        dm = dof_map(f.subdomain)
        el = f.subdomain.elements[2]
        for i in (0, 7, f.grid.n_steps):
            for a, nid in enumerate(el.node_ids):
                got = sample(sol, 0, f.xi[i], el.basis.nodes[a], 2)
                k = dm.local_index(nid, 0)
                assert got[0] == f.u[i, k] and got[1] == f.u[i, k + 1]

    def test_boundary_matches_global(self, problem):
        mesh, cons, u = problem
        sol = recover_all(mesh, cons, u, select=[4])
        el = mesh.subdomains[4].elements[0]
        index = {nid: k for k, nid in enumerate(mesh.node_ids)}
        for a, nid in enumerate(el.node_ids):
            got = sample(sol, 4, 1.0, el.basis.nodes[a], 0)
            assert np.array_equal(got, u[[2 * index[nid], 2 * index[nid] + 1]])

    def test_linear_between_points(self, problem):
        mesh, cons, u = problem
        sol = recover_all(mesh, cons, u, select=[0])
        f = sol[0]
        mid = 0.5 * (f.xi[3] + f.xi[4])
        eta = 0.37
        lo, hi = sample(sol, 0, f.xi[3], eta, 1), sample(sol, 0, f.xi[4], eta, 1)
        assert np.allclose(sample(sol, 0, mid, eta, 1), 0.5 * (lo + hi), rtol=1e-13)

    def test_uniform_field(self, problem):
        # values equal at every node of a radial row: eta-constant, xi-linear
        mesh, _, _ = problem
        s = mesh.subdomains[0]
        grid = s.radial
        m = dof_map(s).ndofs
        rows = np.outer(np.arange(grid.n_steps + 1), np.tile([1.0 + 1j, -2.0], m // 2))
        sol = FieldSolution({0: SubdomainField(s, grid, rows)}, OMEGA)
        xi = 0.5 * (grid.points[10] + grid.points[11])
        for e in (0, 5):
            for eta in (-1.0, -0.2, 0.6, 1.0):
                assert np.allclose(sample(sol, 0, xi, eta, e), 10.5 * np.array([1 + 1j, -2.0]), rtol=1e-12)

    def test_out_of_range(self, problem):
        mesh, cons, u = problem
        sol = recover_all(mesh, cons, u, select=[0, 1])
        with pytest.raises(OutOfRange):
            sample(sol, 0, 1.2, 0.0, 0)
        with pytest.raises(OutOfRange):
            sample(sol, 1, 0.9, 0.0, 0)
        with pytest.raises(OutOfRange):
            sample(sol, 0, 0.5, 1.5, 0)

    def test_midcell_second_order(self):
        # sample a coarse field between grid points and compare with a grid
        # that has a point there; the gap shrinks by about 4 per halving
        errs = []
        probe_xi, eta = 0.53125, 0.2
        ref_mesh, ref_cons, ref_u = solved(n=256, degree=2)
        ref = sample(recover_all(ref_mesh, ref_cons, ref_u, select=[0]), 0, probe_xi, eta, 5)
        for n in (16, 32, 64):
            mesh, cons, u = solved(n=n, degree=2)
            errs.append(np.linalg.norm(sample(recover_all(mesh, cons, u, select=[0]), 0, probe_xi, eta, 5) - ref))
        assert errs[0] / errs[1] > 2.5 and errs[1] / errs[2] > 2.5, errs


class TestPhase:
    def test_zero_and_ninety(self):
        v = np.array([1 + 2j, -3 - 0.5j])
        assert np.array_equal(phase_snapshot(v, 0.0), v.real)
        assert np.allclose(phase_snapshot(v, 90.0), -v.imag)

    def test_antiperiodic(self, rng):
        v = rng.normal(size=50) + 1j * rng.normal(size=50)
        for phi in (0.0, 33.0, 90.0, 151.5):
            assert np.allclose(phase_snapshot(v, phi) + phase_snapshot(v, phi + 180.0), 0.0, atol=1e-14)

    def test_range(self):
        with pytest.raises(ValueError):
            phase_snapshot(np.ones(2), 360.0)


class TestExport:
    def test_field_points_shape(self, problem):
        mesh, cons, u = problem
        sol = recover_all(mesh, cons, u, select=[0])
        xy, vals = field_points(sol[0])
        s = mesh.subdomains[0]
        assert xy.shape == vals.shape == (len(s.elements) * 4 * 21, 2)
        xy2, _ = field_points(sol[0], refine=2)
        assert len(xy2) == len(s.elements) * (1 + 3 * 3) * 21
        assert np.all(xy[:, 1] <= 1e-9) and np.all(xy[:, 0] >= -1e-9)

    def test_csv_roundtrip(self, tmp_path, rng):
        xy = rng.normal(size=(5, 2))
        u = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))
        write_field_csv(tmp_path / "f.csv", xy, u)
        header, data = read_csv(tmp_path / "f.csv")
        assert header == FIELD_HEADER
        assert np.array_equal(data[:, :2], xy)
        assert np.array_equal(data[:, 4], u[:, 1].real)
        write_snapshot_csv(tmp_path / "s.csv", xy, u, 90.0)
        header, data = read_csv(tmp_path / "s.csv")
        assert header == ["x", "y", "ux", "uy"]
        assert np.allclose(data[:, 2], -u[:, 0].imag)
        write_surface_csv(tmp_path / "v.csv", xy[:, 0], u[:, 1])
        header, data = read_csv(tmp_path / "v.csv")
        assert header == ["x", "re_v", "im_v"]
        assert np.array_equal(data[:, 2], u[:, 1].imag)
