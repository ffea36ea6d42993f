import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import Polynomial

from sbfem.gll import MAX_DEGREE, gauss_legendre, gll_rule, legendre, shape_functions


def rodrigues(n):
    """P_n from Rodrigues' formula, as a numpy Polynomial."""
    base = Polynomial([-1.0, 0.0, 1.0]) ** n
    return base.deriv(n) / (2.0**n * math.factorial(n)) if n else Polynomial([1.0])


class TestLegendre:
    def test_constant(self):
        assert legendre(0, 0.3) == (1.0, 0.0)

    def test_endpoint(self):
        assert legendre(2, 1.0) == pytest.approx((1.0, 3.0), abs=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 5, 9, 14])
    def test_matches_rodrigues(self, n):
        P = rodrigues(n)
        for eta in (-0.93, -0.2, 0.0, 0.7, 1.0):
            v, d = legendre(n, eta)
            assert v == pytest.approx(P(eta), abs=1e-12)
            assert d == pytest.approx(P.deriv()(eta), abs=1e-10 * max(1.0, abs(P.deriv()(eta))))

    def test_array_input(self):
        eta = np.linspace(-1, 1, 7)
        v, d = legendre(4, eta)
        assert v.shape == d.shape == (7,)

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            legendre(-1, 0.0)


class TestGllRule:
    def test_two_point(self):
        b = gll_rule(1)
        assert np.array_equal(b.nodes, [-1.0, 1.0])
        assert np.allclose(b.weights, [1.0, 1.0])

    def test_three_point(self):
        b = gll_rule(2)
        assert np.allclose(b.nodes, [-1.0, 0.0, 1.0], atol=1e-15)
        assert np.allclose(b.weights, [1 / 3, 4 / 3, 1 / 3], rtol=1e-14)

    def test_four_point_interior(self):
        b = gll_rule(3)
        assert np.allclose(b.nodes[1:3], [-1 / np.sqrt(5), 1 / np.sqrt(5)], rtol=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3, 6, 9, 20, 40, MAX_DEGREE])
    def test_invariants(self, n):
        b = gll_rule(n)
        x, w = b.nodes, b.weights
        assert x.size == n + 1
        assert x[0] == -1.0 and x[-1] == 1.0
        assert np.all(np.diff(x) > 0)
        assert np.array_equal(x, -x[::-1])
        assert np.all(w > 0)
        assert abs(w.sum() - 2.0) < 1e-13
        if n > 1:
            _, d = legendre(n, x[1:-1])
            assert np.max(np.abs(d)) < 1e-10 * n * n

    @pytest.mark.parametrize("n", range(1, 11))
    def test_exactness(self, n):
        b = gll_rule(n)
        for k in range(2 * n):
            exact = (1 - (-1) ** (k + 1)) / (k + 1)
            got = np.dot(b.weights, b.nodes**k)
            assert abs(got - exact) <= 1e-12 * max(1.0, abs(exact))

    def test_cached_and_read_only(self):
        b = gll_rule(7)
        assert gll_rule(7) is b
        with pytest.raises(ValueError):
            b.nodes[0] = 0.0

    @pytest.mark.parametrize("n", [0, MAX_DEGREE + 1])
    def test_degree_bounds(self, n):
        with pytest.raises(ValueError):
            gll_rule(n)


class TestShapeFunctions:
    def test_linear_midpoint(self):
        N, dN = shape_functions(gll_rule(1), 0.0)
        assert np.allclose(N, [0.5, 0.5])
        assert np.allclose(dN, [-0.5, 0.5])

    @pytest.mark.parametrize("n", [1, 3, 6, 10])
    def test_kronecker(self, n):
        b = gll_rule(n)
        for k, eta in enumerate(b.nodes):
            N, _ = shape_functions(b, eta)
            assert np.allclose(N, np.eye(n + 1)[k], atol=1e-14)

    def test_partition_at_043(self):
        N, dN = shape_functions(gll_rule(6), 0.43)
        assert abs(N.sum() - 1.0) < 1e-12
        assert abs(dN.sum()) < 1e-10

    def test_partition_of_unity_random(self, rng):
        for n in range(1, 11):
            b = gll_rule(n)
            for eta in rng.uniform(-1, 1, 100):
                N, dN = shape_functions(b, eta)
                assert abs(N.sum() - 1.0) < 1e-12
                assert abs(dN.sum()) < 1e-10

    @settings(max_examples=200, deadline=None)
    @given(n=st.integers(1, 10), eta=st.floats(-1.0, 1.0))
    def test_partition_property(self, n, eta):
        N, dN = shape_functions(gll_rule(n), eta)
        assert abs(N.sum() - 1.0) < 1e-12
        assert abs(dN.sum()) < 1e-10

    @pytest.mark.parametrize("n", [2, 5, 9])
    def test_derivative_matches_difference(self, n):
        b = gll_rule(n)
        h = 1e-6
        for eta in (-0.77, 0.1, 0.5):
            _, dN = shape_functions(b, eta)
            fd = (shape_functions(b, eta + h)[0] - shape_functions(b, eta - h)[0]) / (2 * h)
            assert np.allclose(dN, fd, atol=1e-7 * n * n)

    def test_derivative_exact_at_node(self):
        # derivative of a polynomial interpolant reproduces x^n' exactly
        b = gll_rule(5)
        vals = b.nodes**5
        _, dN = shape_functions(b, b.nodes[2])
        assert dN @ vals == pytest.approx(5 * b.nodes[2] ** 4, rel=1e-12)


def test_gauss_legendre_exact():
    x, w = gauss_legendre(4)
    assert np.dot(w, x**6) == pytest.approx(2 / 7, rel=1e-14)
