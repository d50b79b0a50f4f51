import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matchfactor import (
    DenseMatrix,
    ExtremeKind,
    LemmaMode,
    ToleranceConfig,
    Variant,
    classify_extreme,
    convex_combination,
    lambda_k,
    lemma_predicates,
    matching_factor,
    permutation_matrix,
    random_bistochastic,
    random_star_positive,
    scale,
    star_lambda_k,
    star_matching_factor,
    theorem_bounds,
    uniform_matrix,
)
from matchfactor.errors import InvalidInputError, NotBistochasticError, NotStarPositiveError, ZeroFactorError
from matchfactor.factor import bound_slack

from .oracles import direct_lambdas, direct_product, direct_star_lambdas, exact, log_fraction


class TestLambdaK:
    def test_worked_example(self, example33, example33_exact):
        expected = direct_lambdas(example33_exact)
        assert expected == [F(5, 27), F(25, 81), F(5, 27)]
        for k in range(3):
            assert lambda_k(example33, k) == pytest.approx(float(expected[k]), rel=1e-15)

    @pytest.mark.parametrize("perm", list(itertools.permutations(range(4))))
    def test_permutation_is_one(self, perm):
        p = permutation_matrix(perm)
        assert all(lambda_k(p, k) == 1.0 for k in range(4))

    def test_uniform(self):
        u = uniform_matrix(3)
        for k in range(3):
            assert lambda_k(u, k) == pytest.approx(1 / 9, rel=1e-15)

    def test_index_range(self, example33):
        with pytest.raises(IndexError):
            lambda_k(example33, 3)


class TestMatchingFactor:
    def test_worked_example(self, example33, example33_exact):
        lam = direct_lambdas(example33_exact)
        m = direct_product(lam)
        assert m == F(625, 59049)
        prof = matching_factor(example33)
        assert prof.variant is Variant.PLAIN
        np.testing.assert_allclose(prof.lambdas, [float(x) for x in lam], rtol=1e-15)
        assert prof.m_linear == pytest.approx(float(m), rel=1e-14)
        assert prof.log_m == pytest.approx(log_fraction(m), abs=1e-14)
        assert prof.log_m == pytest.approx(-4.548371, abs=1e-6)

    def test_log_m_is_sum_of_logs(self):
        prof = matching_factor(random_bistochastic(7, 3))
        acc = 0.0
        for x in prof.log_lambdas:
            acc += x
        assert prof.log_m == acc
        assert prof.log_lambdas == tuple(math.log(x) for x in prof.lambdas)

    @pytest.mark.parametrize("n", [1, 2, 5, 9])
    def test_permutation_exact(self, n):
        prof = matching_factor(permutation_matrix(list(range(n))[::-1]))
        assert prof.m_linear == 1.0 and prof.log_m == 0.0

    def test_uniform_n2(self):
        prof = matching_factor(uniform_matrix(2))
        assert prof.m_linear == 1 / 16
        assert prof.log_m == pytest.approx(-4 * math.log(2), abs=1e-15)

    def test_zero_row(self):
        with pytest.raises(ZeroFactorError) as exc:
            matching_factor(DenseMatrix([[1, 0], [0, 0]]))
        assert exc.value.index == 1

    def test_underflow_is_benign(self):
        prof = matching_factor(uniform_matrix(100))
        assert prof.m_linear == 0.0 and prof.underflows
        assert prof.log_m == pytest.approx(-200 * math.log(100), abs=1e-9)

    def test_bounds_fields(self):
        prof = matching_factor(uniform_matrix(5))
        assert (prof.log_lower_bound, prof.log_upper_bound) == theorem_bounds(5)


class TestStar:
    def test_documented_star_positive(self):
        rows = [[F(1, 2), F(0)], [F(1, 2), F(1, 2)]]
        lam = direct_star_lambdas(rows)
        assert lam == [F(1, 2), F(1, 2)]
        a = DenseMatrix([[0.5, 0], [0.5, 0.5]])
        assert star_lambda_k(a, 0) == 0.5
        prof = star_matching_factor(a)
        assert prof.variant is Variant.STAR
        assert prof.lambdas == (0.5, 0.5)
        assert prof.m_linear == pytest.approx(0.25, rel=1e-15)

    def test_documented_star_permutation(self):
        a = DenseMatrix([[0.5, 0], [0, 1 / 32]])
        assert [star_lambda_k(a, k) for k in range(2)] == [1.0, 1.0]
        assert star_matching_factor(a).log_m == 0.0

    def test_documented_star_uniform(self):
        a = DenseMatrix([[1 / 6, 1 / 6], [1 / 6, 1 / 6]])
        for k in range(2):
            assert star_lambda_k(a, k) == pytest.approx(0.25, rel=1e-15)
        assert star_matching_factor(a).m_linear == pytest.approx(1 / 16, rel=1e-14)

    def test_documented_star_examples_exact(self):
        rows = exact([[F(1, 3), 0, 0], [F(1, 3), F(7, 8), 0], [F(1, 2), 0, F(1, 3)]])
        lam = direct_star_lambdas(rows)
        prof = star_matching_factor(DenseMatrix([[float(x) for x in r] for r in rows]))
        np.testing.assert_allclose(prof.lambdas, [float(x) for x in lam], rtol=1e-14)

    def test_reduces_to_plain_on_exact_bistochastic(self, example33):
        assert abs(star_matching_factor(example33).log_m - matching_factor(example33).log_m) <= 1e-12

    @pytest.mark.parametrize("seed", range(20))
    def test_reduction_on_sinkhorn_output(self, seed):
        n = 2 + seed % 9
        b = random_bistochastic(n, seed)
        assert abs(star_matching_factor(b).log_m - matching_factor(b).log_m) <= 1e-10 * n

    def test_not_star_positive(self):
        with pytest.raises(NotStarPositiveError):
            star_matching_factor(DenseMatrix([[1, 0], [0, 0]]))
        with pytest.raises(NotStarPositiveError):
            star_lambda_k(DenseMatrix([[1, 0], [0, 0]]), 1)

    @given(st.integers(2, 8), st.integers(0, 2**32), st.sampled_from([1e-6, 3.0, 1e6]))
    def test_scale_invariance(self, n, seed, c):
        a = random_star_positive(n, seed)
        assert abs(star_matching_factor(scale(a, c)).log_m - star_matching_factor(a).log_m) <= 1e-9

    @given(st.integers(2, 8), st.integers(0, 2**32))
    def test_star_bounds(self, n, seed):
        prof = star_matching_factor(random_star_positive(n, seed))
        lo, hi = theorem_bounds(n)
        assert lo - 1e-9 <= prof.log_m <= hi + 1e-12
        assert all(1 / n**2 - 1e-12 <= x <= 1 + 1e-12 for x in prof.lambdas)


class TestTheoremBounds:
    def test_values(self):
        assert theorem_bounds(1) == (0.0, 0.0)
        assert math.copysign(1, theorem_bounds(1)[0]) == 1.0
        assert theorem_bounds(2)[0] == pytest.approx(-2.772589, abs=1e-6)
        assert theorem_bounds(100)[0] == pytest.approx(-921.034, abs=1e-3)
        assert math.exp(theorem_bounds(100)[0]) == 0.0

    @pytest.mark.parametrize("n", [0, -3, 2.5, True])
    def test_bad_order(self, n):
        with pytest.raises(InvalidInputError):
            theorem_bounds(n)


class TestBoundProperty:
    @pytest.mark.parametrize("seed", range(40))
    def test_sinkhorn_matrices(self, seed):
        n = [2, 3, 4, 6, 8, 12, 16, 32][seed % 8]
        prof = matching_factor(random_bistochastic(n, seed))
        lo, hi = theorem_bounds(n)
        d = bound_slack(n)
        assert lo - d <= prof.log_m <= hi + d
        assert all(1 / n**2 - 1e-7 <= x <= 1 + 1e-7 for x in prof.lambdas)
        # interior points are strictly inside
        assert lo < prof.log_m < hi

    def test_slack_budget_is_loose_at_validation_edge(self):
        # rows/columns off by up to 1e-9: the log_m shift stays far inside n * 1e-6
        n = 16
        u = np.full((n, n), 1.0 / n)
        u[0, 0] += 1e-9
        m = DenseMatrix(u)
        exact = -2 * n * math.log(n)
        assert abs(matching_factor(m).log_m - exact) < bound_slack(n) / 100


class TestLemma:
    def test_worked_examples(self):
        assert lemma_predicates([0, 1, 0, 0], LemmaMode.UNIT) == lemma_predicates([0, 1, 0, 0])
        v = lemma_predicates([0, 1, 0, 0], LemmaMode.UNIT)
        assert v.structural and v.analytic
        v = lemma_predicates([0.5, 0.5], LemmaMode.UNIT)
        assert not v.structural and not v.analytic
        v = lemma_predicates([0, 5, 0], LemmaMode.POSITIVE)
        assert v.structural and v.analytic

    def test_unit_mode_rejects_non_unit_single(self):
        v = lemma_predicates([0, 5, 0], LemmaMode.UNIT)
        assert not v.structural and not v.analytic

    def test_all_zero(self):
        for mode in LemmaMode:
            v = lemma_predicates([0, 0, 0], mode)
            assert not v.structural and not v.analytic

    def test_negative(self):
        with pytest.raises(InvalidInputError):
            lemma_predicates([1, -1])

    @pytest.mark.parametrize(
        "mode, grid",
        [(LemmaMode.UNIT, [0, 0.25, 0.5, 0.75, 1.0]), (LemmaMode.POSITIVE, [0, 0.5, 1, 2])],
    )
    def test_exhaustive_equivalence(self, mode, grid):
        for vec in itertools.product(grid, repeat=4):
            v = lemma_predicates(vec, mode)
            assert v.structural == v.analytic, vec

    @given(st.lists(st.just(0.0) | st.floats(1e-2, 1e2), min_size=1, max_size=8))
    def test_positive_mode_scale_free(self, vec):
        # zero or far above zero_tol, with a dynamic range (1e4) the relative
        # equality test can resolve; wider ranges hide the cross term in rounding
        a = lemma_predicates(vec, LemmaMode.POSITIVE)
        b = lemma_predicates([x * 1000 for x in vec], LemmaMode.POSITIVE)
        assert a == b
        assert a.structural == a.analytic


class TestClassifyExtreme:
    def test_permutation_recovered(self):
        ex = classify_extreme(permutation_matrix([1, 2, 0]))
        assert ex.kind is ExtremeKind.PERMUTATION and ex.permutation == (1, 2, 0)

    def test_uniform(self):
        assert classify_extreme(uniform_matrix(4)).kind is ExtremeKind.UNIFORM

    def test_interior(self, example33):
        ex = classify_extreme(example33)
        assert ex.kind is ExtremeKind.INTERIOR and ex.permutation is None
        assert -6 * math.log(3) < ex.log_m < 0

    def test_degenerate(self):
        ex = classify_extreme(DenseMatrix([[1.0]]))
        assert ex.kind is ExtremeKind.DEGENERATE and ex.log_m == 0.0

    def test_not_bistochastic(self):
        with pytest.raises(NotBistochasticError):
            classify_extreme(DenseMatrix([[0.5, 0], [0.5, 0.5]]))

    def test_band_false_positive_becomes_interior(self):
        # inside a generous log band but not structurally a vertex
        b = convex_combination([(1 - 1e-4, [0, 1]), (1e-4, [1, 0])])
        tol = ToleranceConfig(class_log_tol=1e-2)
        assert matching_factor(b).log_m > -1e-2
        assert classify_extreme(b, tol).kind is ExtremeKind.INTERIOR

    @pytest.mark.parametrize("n", range(2, 6))
    def test_exhaustive_small(self, n):
        for perm in itertools.permutations(range(n)):
            ex = classify_extreme(permutation_matrix(perm))
            assert ex.kind is ExtremeKind.PERMUTATION and ex.permutation == perm

    @pytest.mark.parametrize("seed", range(30))
    def test_sampled_larger(self, seed):
        from matchfactor import random_permutation

        n = 6 + seed % 3
        p = random_permutation(n, seed)
        ex = classify_extreme(permutation_matrix(p))
        assert ex.permutation == p.map

    @given(st.integers(2, 6), st.integers(0, 2**32))
    def test_conjugation_invariance(self, n, seed):
        from matchfactor import random_permutation

        b = random_bistochastic(n, seed).values
        s = list(random_permutation(n, seed + 1).map)
        conj = b[np.ix_(s, s)]
        p0, p1 = matching_factor(DenseMatrix(b)), matching_factor(DenseMatrix(conj))
        np.testing.assert_allclose(sorted(p1.lambdas), sorted(p0.lambdas), rtol=1e-12)
        assert abs(p1.log_m - p0.log_m) <= 1e-12
