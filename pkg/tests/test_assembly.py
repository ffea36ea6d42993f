import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import chain, random_subdomain, square_subdomain, straight_element
from sbfem.assembly import (
    BOUNDED,
    UNBOUNDED,
    DanglingNode,
    DuplicateNode,
    SingularE0,
    Subdomain,
    assemble_coefficients,
    dof_map,
    element_coefficients,
)
from sbfem.material import DampingProfile, Material, elasticity_matrix
from sbfem.radial import RadialGrid

UNIT = Material(1.0, 0.0, 1.0)


def rel_asym(A):
    return np.linalg.norm(A - A.T) / np.linalg.norm(A)


class TestElementCoefficients:
    def test_hand_quadrature(self):
        # right edge of the unit square seen from its center: |J| = 1/4,
        # b1 = [[2, 0], [0, 0], [0, 2]], so E0 = |J| diag(4, 2) (x) int N_a N_b
        el = straight_element((0, 1), (1.0, 0.0), (1.0, 1.0))
        E0, E1, E2, M0 = element_coefficients((0.5, 0.5), el, elasticity_matrix(UNIT), 1.0, npts=2)
        mass = np.array([[2 / 3, 1 / 3], [1 / 3, 2 / 3]])
        expect = np.kron(mass, np.diag([1.0, 0.5]))
        assert np.allclose(E0, expect, rtol=1e-14, atol=1e-15)
        assert np.allclose(M0, 0.25 * np.kron(mass, np.eye(2)), rtol=1e-14)
        assert np.linalg.eigvalsh(E0).min() > 0

    def test_raw_symmetry(self, rng):
        for _ in range(20):
            s, _ = random_subdomain(rng)
            D = elasticity_matrix(s.material)
            for el in s.elements:
                E0, _, E2, M0 = element_coefficients(s.center, el, D, s.material.density)
                for A in (E0, E2, M0):
                    assert rel_asym(A) < 1e-14

    def test_quadrature_converged(self, rng):
        for _ in range(10):
            s, _ = random_subdomain(rng)
            a = assemble_coefficients(s)
            b = assemble_coefficients(s, npts=max(el.degree for el in s.elements) + 6)
            for x, y in ((a.E0, b.E0), (a.E1, b.E1), (a.E2, b.E2), (a.M0, b.M0)):
                assert np.max(np.abs(x - y)) <= 1e-10 * np.max(np.abs(y))


class TestAssembleCoefficients:
    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_properties(self, seed):
        s, _ = random_subdomain(np.random.default_rng(seed))
        C = assemble_coefficients(s)
        for A in (C.E0, C.E2, C.M0):
            assert rel_asym(A) < 1e-14
        assert np.linalg.eigvalsh(C.E0).min() > 0
        assert np.linalg.eigvalsh(C.M0).min() > 0
        assert np.linalg.eigvalsh(C.E2).min() > -1e-12 * np.linalg.norm(C.E2)
        m = C.size
        for r in (np.tile([1.0, 0.0], m // 2), np.tile([0.0, 1.0], m // 2)):
            assert np.linalg.norm(C.E2 @ r) / (np.linalg.norm(C.E2) * np.linalg.norm(r)) < 1e-12

    def test_density_scaling(self):
        s = square_subdomain(degree=3)
        heavy = Subdomain(BOUNDED, s.center, s.elements, Material(10e9, 0.2, 5000.0), s.radial)
        a, b = assemble_coefficients(s), assemble_coefficients(heavy)
        assert np.array_equal(2 * a.M0, b.M0)
        assert np.array_equal(a.E0, b.E0)

    def test_size(self):
        s = square_subdomain(degree=3, segments=2)
        assert assemble_coefficients(s).size == 2 * 8 * 3

    def test_singular_guard(self):
        with pytest.raises(SingularE0):
            assemble_coefficients(square_subdomain(), cond_limit=1.0)


class TestDofMap:
    def test_two_element_chain(self):
        els = chain([(2, -1), (2, 1), (0, 2)], 1, closed=False)
        s = Subdomain(UNBOUNDED, (0, 0), els, UNIT, RadialGrid(2.0, 1.0, 4))
        assert dof_map(s).ndofs == 6

    def test_order_and_interleaving(self):
        els = chain([(2, -1), (2, 1)], 2, closed=False, first_id=10)
        s = Subdomain(UNBOUNDED, (0, 0), els, UNIT, RadialGrid(2.0, 1.0, 4))
        dm = dof_map(s)
        assert dm.node_ids == (10, 11, 12)
        assert dm.local_index(11, 1) == 3

    def test_permutation_invariant(self):
        s = square_subdomain(degree=2, segments=2)
        p = Subdomain(BOUNDED, s.center, s.elements[::-1][3:] + s.elements[::-1][:3], s.material, s.radial)
        a, b = dof_map(s), dof_map(p)
        assert a.node_ids == b.node_ids
        assert np.allclose(assemble_coefficients(s).E0, assemble_coefficients(p).E0, rtol=1e-14, atol=0)

    def test_scatter_gather(self, rng):
        s = square_subdomain(degree=2)
        dm = dof_map(s)
        index = {nid: 3 + k for k, nid in enumerate(dm.node_ids)}
        index.update({-1: 0, -2: 1, -3: 2})
        local = rng.normal(size=(dm.ndofs, dm.ndofs))
        big = dm.scatter(local, index)
        idx = dm.global_dofs(index)
        assert np.array_equal(big[np.ix_(idx, idx)], local)
        assert np.count_nonzero(big) == np.count_nonzero(local)

    def test_repeated_id(self):
        el = straight_element((1, 1), (0, 0), (1, 0))
        s = Subdomain(UNBOUNDED, (0.5, -1), [el], UNIT, RadialGrid(2.0, 1.0, 4))
        with pytest.raises(DuplicateNode):
            dof_map(s)

    def test_id_with_two_positions(self):
        a = straight_element((1, 2), (2, -1), (2, 1))
        b = straight_element((2, 3), (2, 1.5), (0, 2))
        s = Subdomain(UNBOUNDED, (0, 0), [a, b], UNIT, RadialGrid(2.0, 1.0, 4))
        with pytest.raises(DuplicateNode):
            dof_map(s)

    def test_coincident_ids(self):
        a = straight_element((1, 2), (2, -1), (2, 1))
        b = straight_element((3, 4), (2, 1), (0, 2))
        s = Subdomain(UNBOUNDED, (0, 0), [a, b], UNIT, RadialGrid(2.0, 1.0, 4))
        with pytest.raises(DuplicateNode):
            dof_map(s)

    def test_disconnected(self):
        a = straight_element((1, 2), (2, -1), (2, 0))
        b = straight_element((3, 4), (2, 1), (0, 2))
        s = Subdomain(UNBOUNDED, (0, 0), [a, b], UNIT, RadialGrid(2.0, 1.0, 4))
        with pytest.raises(DanglingNode):
            dof_map(s)


class TestSubdomain:
    def test_centroid_default(self):
        s = square_subdomain(L=4.0)
        t = Subdomain(BOUNDED, None, s.elements, s.material, s.radial)
        assert np.allclose(t.center, (2.0, 2.0))

    def test_damping_default(self, rock):
        s = square_subdomain(material=rock)
        assert s.damping == DampingProfile.constant(0.05)

    def test_sign(self):
        assert square_subdomain().sign == 1.0

    def test_bounded_grid_checked(self):
        s = square_subdomain()
        with pytest.raises(ValueError):
            Subdomain(BOUNDED, s.center, s.elements, s.material, RadialGrid(2.0, 1.0, 4))

    def test_bounded_needs_constant_damping(self):
        s = square_subdomain()
        with pytest.raises(ValueError):
            Subdomain(BOUNDED, s.center, s.elements, s.material, s.radial, DampingProfile.linear(1.0, 0.0))

    def test_unbounded_grid_checked(self):
        els = chain([(2, -1), (2, 1)], 1, closed=False)
        with pytest.raises(ValueError):
            Subdomain(UNBOUNDED, (0, 0), els, UNIT, RadialGrid(0.5, 1.0, 4))

    def test_unknown_kind(self):
        s = square_subdomain()
        with pytest.raises(ValueError):
            Subdomain("infinite", s.center, s.elements, s.material, s.radial)
