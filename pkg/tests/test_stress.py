import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings

from conftest import graphs
from ggrkit.graph import Graph, complete_bipartite_graph, complete_graph, cycle_graph, find_cliques
from ggrkit.linalg import RationalMatrix
from ggrkit.matroid import MatroidOracle
from ggrkit.rigidity import Framework, RandomRegime, rigidity_matrix, sample_framework
from ggrkit.stress import (
    GenericityError,
    NotACircuitError,
    StressMatrix,
    StressValidationError,
    affine_dependence,
    assemble_stress_matrix,
    circuit_stress,
    clique_proportionality,
    direct_stress_space,
    dyadic_scan,
    find_removable_edges,
    is_equilibrium,
    is_generically_globally_rigid,
    is_minimally_ggr,
    max_rank_stress,
    rank_preserving_perturbation,
    simplex_stress,
    stress_space,
    stress_vector_of,
)

SQUARE = Framework(2, ((0, 0), (1, 0), (0, 1), (1, 1)))
LINE4 = Framework(1, ((0,), (1,), (3,), (6,)))


def span_rank(vectors):
    return RationalMatrix(vectors).rank() if vectors else 0


class TestStressSpace:
    def test_square_with_diagonals(self):
        # sides +1, diagonals -1 (hand computation)
        assert stress_space(complete_graph(4), SQUARE) == [tuple(map(Fraction, (1, 1, -1, -1, 1, 1)))]

    def test_c4_on_the_line(self):
        # edges (0,1),(0,3),(1,2),(2,3); balance at each vertex gives (6,-1,3,2)
        assert stress_space(cycle_graph(4), LINE4) == [tuple(map(Fraction, (6, -1, 3, 2)))]

    def test_dimensions(self):
        fw = sample_framework(6, 2)
        assert len(stress_space(complete_graph(4), sample_framework(4, 2))) == 1
        assert stress_space(Graph(6, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5))), sample_framework(6, 1)) == []
        assert stress_space(complete_bipartite_graph(3, 3), fw) == []

    @settings(max_examples=60, deadline=None)
    @given(graphs(min_n=1, max_n=6, p=0.6))
    def test_same_space_as_left_kernel(self, g):
        for d in (1, 2, 3):
            fw = sample_framework(g, d)
            fast = [list(v) for v in stress_space(g, fw)]
            ref = direct_stress_space(g, fw)
            assert len(fast) == len(ref) == g.m - rigidity_matrix(g, fw).rank()
            if fast:
                assert span_rank(fast) == span_rank(ref) == span_rank(fast + ref)
            for w in fast:
                assert is_equilibrium(g, fw, w)


class TestStressMatrix:
    def test_assembly(self):
        g = complete_graph(4)
        w = stress_space(g, SQUARE)[0]
        s = assemble_stress_matrix(g, SQUARE, w)
        assert s.rank() == 1
        assert s.is_valid(g, SQUARE)
        assert stress_vector_of(g, s) == w
        assert assemble_stress_matrix(g, SQUARE, [0] * 6).matrix.is_zero()

    def test_rejects_non_equilibrium(self):
        with pytest.raises(StressValidationError, match="equilibrium"):
            assemble_stress_matrix(complete_graph(4), SQUARE, [1, 0, 0, 0, 0, 0])

    def test_violation_names(self):
        g = Graph(3, ((0, 1),))
        fw = sample_framework(3, 1)
        bad = StressMatrix(RationalMatrix([[0, 1, 2], [0, 0, 0], [0, 0, 0]]))
        assert set(bad.violations(g, fw)) == {"symmetry", "support", "row-sums", "equilibrium"}

    def test_support_matches_circuit(self):
        g = complete_graph(5)
        fw = sample_framework(5, 2)
        c = [g.edge_index(u, v) for u, v in combinations(range(4), 2)]
        s = circuit_stress(g, fw, c)
        assert s.support() == set(combinations(range(4), 2))


class TestMaxRankStress:
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_complete_graphs(self, d):
        for n in range(d + 2, 8):
            fw = sample_framework(n, d)
            s, r = max_rank_stress(complete_graph(n), fw)
            assert r == n - d - 1 == s.rank()
            assert s.is_valid(complete_graph(n), fw)

    def test_isostatic(self):
        g = complete_bipartite_graph(3, 3)
        s, r = max_rank_stress(g, sample_framework(6, 2))
        assert r == 0 and s.matrix.is_zero()

    def test_needs_enough_vertices(self):
        with pytest.raises(ValueError):
            max_rank_stress(complete_graph(3), sample_framework(3, 2))

    @settings(max_examples=40, deadline=None)
    @given(graphs(min_n=4, max_n=7, p=0.7))
    def test_rank_bound(self, g):
        for d in (1, 2):
            if g.n < d + 2:
                continue
            s, r = max_rank_stress(g, sample_framework(g, d))
            assert r <= g.n - d - 1


class TestGlobalRigidity:
    def test_examples(self):
        for d in (1, 2, 3):
            assert is_generically_globally_rigid(complete_graph(d + 2), d).decision
        assert not is_generically_globally_rigid(cycle_graph(4), 2).decision
        assert is_generically_globally_rigid(cycle_graph(4), 1).decision
        v = is_generically_globally_rigid(complete_bipartite_graph(3, 3), 2)
        assert not v.decision and v.achieved_rank == 0 and v.target_rank == 3

    def test_small_n(self):
        assert is_generically_globally_rigid(complete_graph(3), 2).decision
        assert not is_generically_globally_rigid(Graph(3, ((0, 1), (1, 2))), 2).decision
        assert is_generically_globally_rigid(Graph(1, ()), 1).decision

    def test_complete_up_to_seven(self):
        for d in (1, 2, 3):
            for n in range(d + 2, 8):
                assert is_generically_globally_rigid(complete_graph(n), d).decision

    def test_agrees_with_exact_stress_rank(self):
        # the modular path must reproduce the exact rank decision
        rng = random.Random(11)
        for _ in range(60):
            n = rng.randint(4, 7)
            d = rng.choice([1, 2, 3])
            if n < d + 2:
                continue
            g = Graph(n, tuple(e for e in combinations(range(n), 2) if rng.random() < 0.75))
            v = is_generically_globally_rigid(g, d)
            _, r = max_rank_stress(g, sample_framework(g, d))
            assert v.decision == (r == n - d - 1)

    def test_dimension_checked(self):
        with pytest.raises(ValueError):
            is_generically_globally_rigid(complete_graph(3), 0)


class TestMinimality:
    def test_complete_small(self):
        for d in (1, 2):
            assert is_minimally_ggr(complete_graph(d + 2), d).decision

    def test_k5_plane(self):
        v = is_minimally_ggr(complete_graph(5), 2)
        assert not v.decision and v.witness_edges == ((0, 1),)
        assert is_generically_globally_rigid(complete_graph(5).remove_edge((0, 1)), 2).decision

    def test_c4_line(self):
        assert is_minimally_ggr(cycle_graph(4), 1).decision

    def test_all_witnesses(self):
        every = find_removable_edges(complete_graph(5), 2, first_only=False)
        assert every == list(complete_graph(5).edges)


class TestSimplexStress:
    def test_parallelogram(self):
        assert affine_dependence([(0, 0), (1, 0), (0, 1), (1, 1)]) == [1, -1, -1, 1]
        sx = simplex_stress(SQUARE, (0, 1, 2, 3))
        assert sx.a == (1, -1, -1, 1)
        assert sx.stress.matrix == RationalMatrix([[a * b for b in sx.a] for a in sx.a])

    def test_collinear(self):
        fw = Framework(2, ((0, 0), (1, 1), (2, 2), (3, 3)))
        with pytest.raises(GenericityError):
            simplex_stress(fw, (0, 1, 2, 3))

    def test_zero_coefficient(self):
        # point 3 is the midpoint of 0 and 1, point 2 plays no part
        fw = Framework(2, ((0, 0), (2, 0), (0, 1), (1, 0)))
        with pytest.raises(GenericityError):
            simplex_stress(fw, (0, 1, 2, 3))

    def test_bad_vertex_sets(self):
        fw = sample_framework(5, 2)
        with pytest.raises(ValueError):
            simplex_stress(fw, (0, 1, 2))
        with pytest.raises(ValueError):
            simplex_stress(fw, (3, 2, 1, 0))

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_identities(self, d):
        for trial in range(5):
            fw = sample_framework(d + 3, d, RandomRegime(), trial)
            x = tuple(range(1, d + 3))
            sx = simplex_stress(fw, x)
            a = sx.a
            assert a[0] == 0 and a[x[0]] == 1
            assert sum(a) == 0
            for axis in range(d):
                assert sum(a[v] * fw.coords[v][axis] for v in x) == 0
            clique = Graph(fw.n, tuple(combinations(x, 2)))
            assert sx.stress.is_valid(clique, fw) and sx.stress.rank() == 1


class TestProportionality:
    def test_simplex_itself(self):
        g = complete_graph(5)
        fw = sample_framework(5, 2)
        x = (0, 1, 2, 3)
        prop = clique_proportionality(g, fw, x, simplex_stress(fw, x).stress)
        assert prop.lam == 1 and prop.disagreeing == []

    def test_zero(self):
        fw = sample_framework(4, 2)
        zero = StressMatrix(RationalMatrix.zeros(4, 4))
        assert clique_proportionality(complete_graph(4), fw, (0, 1, 2, 3), zero).lam == 0

    def test_k5_full_rank(self):
        g = complete_graph(5)
        fw = sample_framework(5, 2)
        s0, r = max_rank_stress(g, fw)
        assert r == 2
        prop = clique_proportionality(g, fw, (0, 1, 2, 3), s0)
        # K5 is not edge-minimal, so a generic stress is not proportional on a 4-clique
        assert prop.lam is None and prop.disagreeing
        assert len(prop.ratios) == 6

    def test_not_a_clique(self):
        with pytest.raises(ValueError):
            clique_proportionality(cycle_graph(4), sample_framework(4, 2), (0, 1, 2, 3),
                                   StressMatrix(RationalMatrix.zeros(4, 4)))


class TestPerturbation:
    def setup_method(self):
        self.g = complete_graph(5)
        self.fw = sample_framework(5, 2)
        self.s0, self.r = max_rank_stress(self.g, self.fw)

    def test_scan_order(self):
        scan = dyadic_scan()
        assert scan[:2] == [Fraction(1, 1024), Fraction(-1, 1024)] and scan[-1] == Fraction(-1, 2)
        assert len(scan) == 20

    def test_zero_stress(self):
        zero = StressMatrix(RationalMatrix.zeros(5, 5))
        p = rank_preserving_perturbation(zero, self.s0, self.r)
        assert p.t == Fraction(1, 1024) and p.certificate != 0 and p.rejected == []

    def test_same_stress(self):
        p = rank_preserving_perturbation(self.s0, self.s0, self.r)
        assert p.t == Fraction(1, 1024)

    def test_simplex_stress(self):
        A = simplex_stress(self.fw, (0, 1, 2, 3)).stress
        p = rank_preserving_perturbation(A, self.s0, self.r)
        assert abs(p.t) <= Fraction(1, 1024) or p.rejected
        assert (A + self.s0.scale(p.t)).rank() == 2

    def test_cancelling_value_is_skipped(self):
        # s + t*s0 = (t - 1/1024) * s0 vanishes exactly at t = 1/1024
        s = self.s0.scale(Fraction(-1, 1024))
        p = rank_preserving_perturbation(s, self.s0, self.r)
        assert p.rejected == [Fraction(1, 1024)] and p.t == Fraction(-1, 1024)

    def test_wrong_rank(self):
        with pytest.raises(ValueError):
            rank_preserving_perturbation(self.s0, self.s0, 3)


class TestCircuitStress:
    def test_k4(self):
        g = complete_graph(4)
        fw = sample_framework(4, 2)
        s = circuit_stress(g, fw, range(6))
        assert all(s[u, v] != 0 for u, v in g.edges)
        assert s.rank() == 1

    def test_c4_line(self):
        s = circuit_stress(cycle_graph(4), LINE4, range(4))
        assert stress_vector_of(cycle_graph(4), s) == (6, -1, 3, 2)

    def test_not_a_circuit(self):
        with pytest.raises(NotACircuitError):
            circuit_stress(complete_graph(4), sample_framework(4, 2), range(5))

    def test_seeded_circuits(self):
        rng = random.Random(8)
        done = 0
        while done < 10:
            n = rng.randint(4, 7)
            d = rng.choice([1, 2])
            g = Graph(n, tuple(e for e in combinations(range(n), 2) if rng.random() < 0.7))
            if g.m < 2:
                continue
            o = MatroidOracle(g, d)
            e, f = rng.sample(range(g.m), 2)
            c = o.circuit_through_pair(e, f)
            if c is None:
                continue
            s = circuit_stress(g, o.framework, c)
            assert s.support() == {g.edges[i] for i in c}
            done += 1


def test_cliques_feed_simplex():
    g = complete_graph(6)
    fw = sample_framework(6, 3)
    for x in find_cliques(g, 5):
        assert simplex_stress(fw, x).stress.is_valid(g, fw)
