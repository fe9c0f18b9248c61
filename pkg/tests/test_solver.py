"""Solver tests: propagation strength, enumeration order, optimization,
and randomized equivalence against exhaustive search."""

import random

import pytest

from sheetcsp.ops import ArithOp, IntervalDom, ListDom, RelOp
from sheetcsp.solver import (
    BudgetExceeded,
    Diseq,
    Element,
    LinearRel,
    Model,
    ModelError,
    Mul,
    optimize,
    post_all_different,
    post_fold_aggregate,
    propagate,
    solve_iter,
)

from oracles import brute_force_model, queens_solution_count


class TestModelBasics:
    def test_new_var_domains(self):
        m = Model()
        a = m.new_var(IntervalDom(0, 9))
        b = m.new_var(ListDom((2, 5, 7)))
        c = m.new_var(IntervalDom(4, 4))
        assert m.domains[a].size() == 10
        assert m.domains[b].values() == [2, 5, 7]
        assert m.domains[c].is_fixed

    def test_post_validates_vars(self):
        m = Model()
        a = m.new_var(IntervalDom(0, 1))
        with pytest.raises(ModelError):
            m.post(Diseq(a, 7))  # plain int is not a Var

    def test_overflow_rejected_at_post(self):
        m = Model()
        a = m.new_var(IntervalDom(0, 2 ** 40))
        b = m.new_var(IntervalDom(0, 2 ** 40))
        with pytest.raises(ModelError, match="2\\^62"):
            m.post(Mul(a, a, b))
        with pytest.raises(ModelError, match="2\\^62"):
            m.post(LinearRel(((2 ** 30, a), (2 ** 30, b)), RelOp.LE, 0))


class TestPropagate:
    def test_interval_reduction_through_inequality(self):
        # A1, B2 in 1..10 with A1+4 < B2 reduce to 1..5 and 6..10
        m = Model()
        a = m.new_var(IntervalDom(1, 10))
        b = m.new_var(IntervalDom(1, 10))
        m.post(LinearRel(((1, a), (-1, b)), RelOp.LT, -4))
        doms = propagate(m)
        assert doms[a].values() == [1, 2, 3, 4, 5]
        assert doms[b].values() == [6, 7, 8, 9, 10]

    def test_unsatisfiable_bound_fails(self):
        m = Model()
        x = m.new_var(IntervalDom(0, 9))
        m.post(LinearRel(((1, x),), RelOp.GE, 12))
        assert propagate(m) is None

    def test_mul_bounds(self):
        # products of 2..3 and 4..5 span exactly 8..15
        products = sorted({x * y for x in (2, 3) for y in (4, 5)})
        assert products[0] == 8 and products[-1] == 15
        m = Model()
        x = m.new_var(IntervalDom(2, 3))
        y = m.new_var(IntervalDom(4, 5))
        z = m.new_var(IntervalDom(0, 100))
        m.post(Mul(x, y, z))
        doms = propagate(m)
        assert (doms[z].lo, doms[z].hi) == (8, 15)

    def test_mul_division_with_negatives(self):
        m = Model()
        x = m.new_var(IntervalDom(-10, 10))
        y = m.new_var(IntervalDom(2, 2))
        z = m.new_var(IntervalDom(-6, 6))
        m.post(Mul(x, y, z))
        doms = propagate(m)
        assert (doms[x].lo, doms[x].hi) == (-3, 3)

    def test_diseq_fires_on_fixed_side(self):
        m = Model()
        a = m.new_var(IntervalDom(3, 3))
        b = m.new_var(ListDom((2, 3, 4)))
        m.post(Diseq(a, b))
        doms = propagate(m)
        assert doms[b].values() == [2, 4]

    def test_element_ground_list_is_domain_consistent(self):
        m = Model()
        n = m.new_var(IntervalDom(0, 9))
        v = m.new_var(IntervalDom(0, 9))
        m.post(Element(n, (4, 7, 4, 9), v))
        doms = propagate(m)
        assert doms[n].values() == [1, 2, 3, 4]
        assert doms[v].values() == [4, 7, 9]

    def test_element_value_restricts_index(self):
        m = Model()
        n = m.new_var(IntervalDom(1, 4))
        v = m.new_var(ListDom((7,)))
        m.post(Element(n, (4, 7, 4, 9), v))
        doms = propagate(m)
        assert doms[n].values() == [2]

    def test_monotone_never_enlarges(self):
        r = random.Random(31)
        for _ in range(50):
            m = _random_model(r)
            before = [set(d.values()) for d in m.domains]
            doms = propagate(m)
            if doms is None:
                continue
            for pre, post in zip(before, doms):
                assert set(post.values()) <= pre


class TestSolveIter:
    def test_two_var_diseq_order(self):
        m = Model()
        x = m.new_var(IntervalDom(1, 2))
        y = m.new_var(IntervalDom(1, 2))
        m.post(Diseq(x, y))
        assert list(solve_iter(m)) == [(1, 2), (2, 1)]

    def test_sum_pairs_against_brute_force(self):
        brute = [(x, y) for x in range(10) for y in range(10) if x + y == 1]
        assert brute == [(0, 1), (1, 0)]
        m = Model()
        x = m.new_var(IntervalDom(0, 9))
        y = m.new_var(IntervalDom(0, 9))
        m.post(LinearRel(((1, x), (1, y)), RelOp.EQ, 1))
        assert list(solve_iter(m)) == brute

    def test_unsat_is_empty_stream(self):
        m = Model()
        x = m.new_var(IntervalDom(1, 1))
        y = m.new_var(IntervalDom(1, 1))
        m.post(Diseq(x, y))
        assert list(solve_iter(m)) == []

    def test_lexicographic_order(self):
        m = Model()
        for _ in range(3):
            m.new_var(IntervalDom(0, 2))
        sols = list(solve_iter(m))
        assert sols == sorted(sols)
        assert len(sols) == 27

    def test_label_order_respected(self):
        m = Model()
        x = m.new_var(IntervalDom(0, 1))
        y = m.new_var(IntervalDom(0, 1))
        m.label_order = [y, x]
        sols = list(solve_iter(m))
        # enumeration is lexicographic in (y, x)
        assert sols == [(0, 0), (1, 0), (0, 1), (1, 1)]

    def test_budget_exceeded(self):
        m = Model()
        for _ in range(8):
            m.new_var(IntervalDom(0, 5))
        with pytest.raises(BudgetExceeded):
            list(solve_iter(m, budget=100))

    def test_determinism(self):
        r = random.Random(5)
        for _ in range(20):
            m = _random_model(r)
            assert list(solve_iter(m)) == list(solve_iter(m.copy()))


class TestQueensCounts:
    def test_small_boards_match_permutation_oracle(self):
        for n in (4, 5, 6):
            expected = queens_solution_count(n)
            m = Model()
            grid = [[m.new_var(IntervalDom(0, 1)) for _ in range(n)] for _ in range(n)]
            for i in range(n):
                m.post(LinearRel(tuple((1, v) for v in grid[i]), RelOp.EQ, 1))
                m.post(LinearRel(tuple((1, grid[r][i]) for r in range(n)), RelOp.EQ, 1))
            for key in range(-(n - 1), n):
                cells = [grid[r][c] for r in range(n) for c in range(n) if r - c == key]
                if len(cells) > 1:
                    m.post(LinearRel(tuple((1, v) for v in cells), RelOp.LE, 1))
            for key in range(0, 2 * n - 1):
                cells = [grid[r][c] for r in range(n) for c in range(n) if r + c == key]
                if len(cells) > 1:
                    m.post(LinearRel(tuple((1, v) for v in cells), RelOp.LE, 1))
            assert sum(1 for _ in solve_iter(m)) == expected


class TestPostHelpers:
    def test_all_different_pairwise(self):
        m = Model()
        a, b, c = (m.new_var(IntervalDom(0, 2)) for _ in range(3))
        post_all_different(m, [a, b, c])
        assert m.constraints == [Diseq(a, b), Diseq(a, c), Diseq(b, c)]

    def test_all_different_single_var_noop(self):
        m = Model()
        a = m.new_var(IntervalDom(0, 2))
        post_all_different(m, [a])
        assert m.constraints == []

    def test_all_different_pigeonhole(self):
        m = Model()
        a = m.new_var(IntervalDom(1, 1))
        b = m.new_var(IntervalDom(1, 1))
        post_all_different(m, [a, b])
        assert propagate(m) is None

    def test_fold_add_single_linear(self):
        m = Model()
        a, b, c = (m.new_var(IntervalDom(0, 2)) for _ in range(3))
        post_fold_aggregate(m, ArithOp.ADD, [a, b, c], RelOp.EQ, 1)
        assert m.constraints == [LinearRel(((1, a), (1, b), (1, c)), RelOp.EQ, 1)]

    def test_fold_add_single_member(self):
        m = Model()
        a = m.new_var(IntervalDom(0, 9))
        post_fold_aggregate(m, ArithOp.ADD, [a], RelOp.GT, 2)
        assert m.constraints == [LinearRel(((1, a),), RelOp.GT, 2)]
        assert propagate(m)[a].values() == [3, 4, 5, 6, 7, 8, 9]

    def test_fold_mul_chain(self):
        # x in 1..2, y in 1..3, x*y = 6 has the unique solution (2, 3)
        brute = [(x, y) for x in (1, 2) for y in (1, 2, 3) if x * y == 6]
        assert brute == [(2, 3)]
        m = Model()
        x = m.new_var(IntervalDom(1, 2))
        y = m.new_var(IntervalDom(1, 3))
        z = m.new_var(IntervalDom(6, 6))
        post_fold_aggregate(m, ArithOp.MUL, [x, y], RelOp.EQ, z)
        m.label_order = [x, y, z]
        sols = [(s[x], s[y]) for s in solve_iter(m)]
        assert sols == brute

    def test_fold_rejects_sub(self):
        m = Model()
        a = m.new_var(IntervalDom(0, 2))
        with pytest.raises(ModelError):
            post_fold_aggregate(m, ArithOp.SUB, [a], RelOp.EQ, 0)


class TestOptimize:
    def test_knapsack_profit_maximization(self):
        best_profit = max(
            (15 * w + 10 * p + 7 * c
             for w in range(10) for p in range(10) for c in range(10)
             if 4 * w + 3 * p + 2 * c <= 9 and 15 * w + 10 * p + 7 * c >= 30),
        )
        assert best_profit == 32
        m = Model()
        w = m.new_var(IntervalDom(0, 9))
        p = m.new_var(IntervalDom(0, 9))
        c = m.new_var(IntervalDom(0, 9))
        profit = m.new_var(IntervalDom(0, 288))
        m.post(LinearRel(((4, w), (3, p), (2, c)), RelOp.LE, 9))
        m.post(LinearRel(((15, w), (10, p), (7, c)), RelOp.GE, 30))
        m.post(LinearRel(((15, w), (10, p), (7, c), (-1, profit)), RelOp.EQ, 0))
        m.set_objective("max", profit)
        best = optimize(m)
        assert best[profit] == 32
        assert (best[w], best[p], best[c]) == (1, 1, 1)

    def test_single_var_min(self):
        m = Model()
        x = m.new_var(IntervalDom(3, 7))
        m.set_objective("min", x)
        assert optimize(m)[x] == 3

    def test_singleton_objective(self):
        m = Model()
        x = m.new_var(IntervalDom(0, 3))
        obj = m.new_var(IntervalDom(5, 5))
        m.set_objective("max", obj)
        best = optimize(m)
        assert best[obj] == 5
        assert best[x] == 0  # first feasible under the search order

    def test_unsat_returns_none(self):
        m = Model()
        x = m.new_var(IntervalDom(0, 3))
        m.post(LinearRel(((1, x),), RelOp.GE, 10))
        m.set_objective("min", x)
        assert optimize(m) is None

    def test_requires_objective(self):
        with pytest.raises(ModelError):
            optimize(Model())

    def test_matches_brute_force_on_random_models(self):
        r = random.Random(17)
        checked = 0
        for _ in range(60):
            m = _random_model(r)
            obj = m.new_var(IntervalDom(-10, 10))
            vs = [v for v in m.label_order if v != obj]
            m.post(LinearRel(((1, vs[0]), (-1, vs[1]), (-1, obj)), RelOp.EQ, 0))
            m._label_order = None
            m.set_objective(r.choice(["min", "max"]), obj)
            brute = brute_force_model(m)
            direction, _ = m.objective
            best = optimize(m)
            if not brute:
                assert best is None
                continue
            checked += 1
            fn = min if direction == "min" else max
            assert best[obj] == fn(s[obj] for s in brute)
            assert tuple(best) in brute
        assert checked >= 20


def _random_model(r: random.Random) -> Model:
    """Small random model over LinearRel / Diseq / Mul / Element."""
    m = Model()
    n = r.randint(2, 5)
    vs = []
    for _ in range(n):
        lo = r.randint(-4, 2)
        hi = lo + r.randint(0, 5)
        if r.random() < 0.25:
            vals = sorted(r.sample(range(lo, hi + 2), min(r.randint(1, 4), hi + 2 - lo)))
            vs.append(m.new_var(ListDom(tuple(vals))))
        else:
            vs.append(m.new_var(IntervalDom(lo, hi)))
    for _ in range(r.randint(1, 4)):
        kind = r.randrange(4)
        if kind == 0:
            terms = tuple(
                (r.choice([-3, -2, -1, 1, 2, 3]), v)
                for v in r.sample(vs, r.randint(1, min(3, n))))
            m.post(LinearRel(terms, r.choice(list(RelOp)), r.randint(-6, 6)))
        elif kind == 1 and n >= 2:
            a, b = r.sample(vs, 2)
            m.post(Diseq(a, b))
        elif kind == 2 and n >= 3:
            x, y, z = r.sample(vs, 3)
            m.post(Mul(x, y, z))
        else:
            items = tuple(
                r.choice(vs) if r.random() < 0.5 else r.randint(-3, 3)
                for _ in range(r.randint(1, 4)))
            m.post(Element(r.choice(vs), items, r.choice(vs)))
    return m


class TestRandomizedEquivalence:
    def test_solution_sets_match_exhaustive_enumeration(self):
        r = random.Random(4242)
        for _ in range(150):
            m = _random_model(r)
            got = set(solve_iter(m))
            want = brute_force_model(m)
            assert got == want

    def test_propagation_prunes_no_supported_value(self):
        r = random.Random(777)
        for _ in range(150):
            m = _random_model(r)
            solutions = brute_force_model(m)
            doms = propagate(m)
            if doms is None:
                assert not solutions
                continue
            for sol in solutions:
                for v, value in enumerate(sol):
                    assert doms[v].contains(value)
