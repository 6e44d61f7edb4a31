import numpy as np
import pytest

from mmspectra import (
    MmSpace, apply_operator, build_auxiliary, dirichlet_form, edge_events, from_graph, laplacian,
    rho_laplacian,
)
from mmspectra import datasets as ds
from mmspectra.laplacian import edge_sum_laplacian
from mmspectra.mmspace import InputError


class TestBuildAuxiliary:
    def test_two_point_weights(self):
        g = build_auxiliary(ds.two_point(3 / 4), 1.5)
        assert g.W[0, 1] == pytest.approx(3 / 16)
        np.testing.assert_allclose(g.deg, [3 / 16, 3 / 16])

    def test_strict_inequality(self):
        g = build_auxiliary(ds.two_point(3 / 4), 1.0)
        assert not g.W.any()

    def test_simplex(self):
        W = build_auxiliary(ds.simplex(3), 2).W
        np.testing.assert_allclose(W, (np.ones((3, 3)) - np.eye(3)) / 9)

    def test_rho_must_be_positive(self):
        with pytest.raises(InputError):
            build_auxiliary(ds.simplex(3), 0)


class TestLaplacian:
    def test_empty(self):
        assert not laplacian(build_auxiliary(ds.simplex(4), 0.5)).L.any()

    @pytest.mark.parametrize("a,m", [(0.75, 1.0), (0.2, 3.0)])
    def test_two_point(self, a, m):
        L = rho_laplacian(ds.two_point(a, m), 2.0)
        np.testing.assert_allclose(L, a * (m - a) * np.array([[1, -1], [-1, 1]]))

    def test_simplex(self):
        L = rho_laplacian(ds.simplex(3), 2.0)
        np.testing.assert_allclose(L, (3 * np.eye(3) - np.ones((3, 3))) / 9, atol=1e-15)

    def test_row_sums_zero(self, rng):
        s = ds.random_space(9, rng)
        for rho in (0.2, 0.5, 2.0):
            assert np.abs(rho_laplacian(s, rho).sum(axis=1)).max() < 1e-12


class TestEdgeEvents:
    def test_line_example(self):
        x, _ = ds.same_dod_pair_line()
        ev = edge_events(x)
        assert (ev[0].i, ev[0].j, ev[0].d) == (0, 1, 1)
        assert (ev[1].i, ev[1].j, ev[1].d) == (3, 4, 2)
        assert len(ev) == 15
        assert ev[0].w == pytest.approx(1 / 36)

    def test_single_point(self):
        assert edge_events(MmSpace([[0]], [1])) == []

    def test_disconnected(self):
        assert edge_events(from_graph([], 3)) == []

    def test_ties_lexicographic(self):
        ev = edge_events(ds.simplex(4))
        assert [(e.i, e.j) for e in ev] == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

    def test_edge_sum_decomposition(self, rng):
        s = ds.random_space(8, rng)
        ev = edge_events(s)
        for rho in np.linspace(0.05, 1.5, 9):
            np.testing.assert_allclose(edge_sum_laplacian(8, ev, rho), rho_laplacian(s, rho), atol=1e-12)


class TestApplyOperator:
    def test_constants_harmonic(self, rng):
        s = ds.random_space(7, rng)
        np.testing.assert_allclose(apply_operator(s, 0.6, np.full(7, 3.0)), 0, atol=1e-14)

    def test_two_point(self):
        out = apply_operator(ds.two_point(0.5), 2.0, [1.0, 0.0])
        np.testing.assert_allclose(out, [1 / 8, -1 / 8])

    def test_small_rho(self, rng):
        s = ds.random_space(5, rng)
        dmin = s.dist[np.triu_indices(5, 1)].min()
        assert not apply_operator(s, dmin / 2, rng.normal(size=5)).any()

    def test_matches_definition_loop(self, rng):
        s = ds.random_space(6, rng)
        u = rng.normal(size=6)
        rho = 0.5
        expect = []
        for j in range(6):
            ball = [l for l in range(6) if s.dist[j, l] < rho]
            mball = sum(s.mass[l] for l in ball)
            expect.append(sum((u[j] - u[l]) * s.mass[l] for l in ball) / (rho**2 * mball))
        np.testing.assert_allclose(apply_operator(s, rho, u), expect)


def test_quadratic_form_equals_dirichlet(rng):
    for _ in range(20):
        s = ds.random_space(6, rng)
        u = rng.normal(size=6)
        rho = rng.uniform(0.1, 1.2)
        L = rho_laplacian(s, rho)
        assert u @ L @ u == pytest.approx(dirichlet_form(s, rho, u), abs=1e-14)
