import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import matching_pennies, single_function, vertex_game_value
from l0simons.errors import DomainError, HypothesisFailed, ResourceError
from l0simons.fileio import generate
from l0simons.instance import (
    FAILS,
    BaseFunction,
    Instance,
    Selection,
    distinct_functions,
    enumerate_E,
    evaluate,
)
from l0simons.l0 import Event, EventuallyPeriodicSeq, ProbSpace, Rv, concatenate, ess_sup
from l0simons.oracle import brute_lhs
from l0simons.verifier import (
    choose_lambda,
    compute_lhs,
    compute_M,
    compute_rhs,
    construct_g_sequence,
    gamma_n,
    rate_equation_gap,
    trace_proof,
    verify,
)

seeds = st.integers(0, 10_000)


def with_selections(inst, sels):
    return Instance(inst.space, inst.base_points, inst.functions, inst.epsilon, tuple(sels))


def scaled(inst, c):
    def sc(f):
        return BaseFunction({b: v * c for b, v in f.table.items()})

    seq = EventuallyPeriodicSeq.of(
        [sc(f) for f in inst.functions.preamble], [sc(f) for f in inst.functions.cycle]
    )
    return Instance(inst.space, inst.base_points, seq, inst.epsilon * c, inst.selections)


class TestSides:
    def test_constant_function_lhs(self):
        inst = single_function(3)
        f = inst.functions.cycle[0]
        expected = ess_sup([f.table[b] for b in inst.base_points])
        assert compute_lhs(inst) == expected
        assert compute_rhs(inst)[0] == expected

    def test_matching_pennies(self):
        inst = matching_pennies()
        assert compute_lhs(inst).values == (F(1),)
        assert compute_rhs(inst)[0].values == (F(1, 2),)
        assert compute_M(inst).values == (F(1),)

    def test_constant_M(self):
        sp = ProbSpace.uniform(["w1", "w2"])
        c = Rv.of(sp, [F(1, 2), -1])
        inst = Instance(
            sp, ("a", "b"), EventuallyPeriodicSeq.of([], [BaseFunction({"a": c, "b": c})]), Rv.const(sp, 2)
        )
        assert compute_M(inst) == c

    @given(seeds)
    @settings(max_examples=100)
    def test_lhs_matches_enumeration(self, seed):
        rng = random.Random(seed)
        inst = generate(seed, (rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 2), rng.randint(1, 3)))
        assert compute_lhs(inst) == brute_lhs(inst)
        sub = rng.sample(enumerate_E(inst), k=min(3, len(enumerate_E(inst))))
        assert compute_lhs(with_selections(inst, sub)) == brute_lhs(with_selections(inst, sub))

    def test_preamble_enlarges_hull(self):
        base = generate(7, (2, 3, 0, 2))
        low = BaseFunction(
            {
                b: Rv(base.space, tuple(min(f.table[b].values[i] for f in base.functions.cycle) - F(1, 8)
                                         for i in range(2)))
                for b in base.base_points
            }
        )
        inst = Instance(base.space, base.base_points, EventuallyPeriodicSeq.of([low], base.functions.cycle), base.epsilon * 2)
        rhs, _ = compute_rhs(inst)
        low_sup = ess_sup([low.table[b] for b in inst.base_points])
        assert all(a <= b for a, b in zip(rhs.values, low_sup.values))
        for i in range(2):
            fns = distinct_functions(inst.functions)
            m = [[f.table[b].values[i] for b in inst.base_points] for f in fns.tables.values()]
            assert rhs.values[i] == vertex_game_value(m)

    @given(seeds)
    @settings(max_examples=50)
    def test_M_bounds(self, seed):
        inst = generate(seed, (3, 3, 1, 3))
        M, m = compute_M(inst), compute_rhs(inst)[0]
        assert all(a >= b for a, b in zip(M.values, m.values))
        assert all(a <= e for a, e in zip(M.values, inst.epsilon.values))


class TestLambda:
    def test_equal_m_M(self):
        sp = ProbSpace.uniform(["w1", "w2"])
        m = Rv.of(sp, [1, -2])
        assert choose_lambda(m, m, Rv.of(sp, [F(1, 7), 5])) == Rv.const(sp, F(1, 3))

    def test_worked_value(self):
        sp = ProbSpace.uniform(["w"])
        m, M, d = Rv.of(sp, [1]), Rv.of(sp, [2]), Rv.of(sp, [F(1, 2)])
        lam = choose_lambda(m, M, d)
        assert lam.values == (F(1, 5),)
        # m - δ(1+λ) - Mλ = 1 - 3/5 - 2/5 = 0 and (m - 2δ)(1 - λ) = 0
        assert (m - d * (lam + 1) - M * lam).values == (F(0),)
        assert ((m - d * 2) * (1 - lam)).values == (F(0),)

    def test_delta_positive(self):
        sp = ProbSpace.uniform(["w"])
        with pytest.raises(DomainError):
            choose_lambda(Rv.of(sp, [0]), Rv.of(sp, [1]), Rv.of(sp, [0]))

    @given(
        st.fractions(min_value=-3, max_value=3, max_denominator=9),
        st.fractions(min_value=0, max_value=6, max_denominator=9),
        st.fractions(min_value=F(1, 50), max_value=4, max_denominator=50),
    )
    def test_certificate(self, m, gap, d):
        sp = ProbSpace.uniform(["w"])
        mm, MM, dd = Rv.of(sp, [m]), Rv.of(sp, [m + gap]), Rv.of(sp, [d])
        lam = choose_lambda(mm, MM, dd)
        assert 0 < lam.values[0] <= F(1, 3)
        assert rate_equation_gap(mm, MM, dd, lam).values == (F(0),)


class TestGamma:
    def test_first_step(self):
        inst = generate(3, (2, 3, 0, 2))
        h = inst.functions.cycle[1].table
        lam = Rv.const(inst.space, F(1, 3))
        assert gamma_n(1, [], h, inst, lam) == ess_sup([h[b] for b in inst.base_points])

    def test_constants(self):
        sp = ProbSpace.uniform(["w1", "w2"])
        a, b = Rv.of(sp, [1, 2]), Rv.of(sp, [4, -6])
        inst = Instance(sp, ("x", "y"), EventuallyPeriodicSeq.of([], [BaseFunction({"x": a, "y": a})]), Rv.const(sp, 9))
        lam = Rv.const(sp, F(1, 2))
        out = gamma_n(2, [{"x": a, "y": a}], {"x": b, "y": b}, inst, lam)
        assert out == a + b / 2

    def test_prefix_length(self):
        inst = matching_pennies()
        with pytest.raises(DomainError):
            gamma_n(3, [], inst.functions.cycle[0].table, inst, Rv.const(inst.space, F(1, 2)))

    @given(seeds)
    @settings(max_examples=30)
    def test_enumeration_oracle(self, seed):
        rng = random.Random(seed)
        inst = generate(seed, (3, 2, 0, 3))
        sels = rng.sample(enumerate_E(inst), k=4)
        for candidate in (inst, with_selections(inst, sels)):
            lam = Rv(inst.space, tuple(F(rng.randint(1, 9), 10) for _ in range(3)))
            g1, g2, h = (f.table for f in inst.functions.cycle)
            got = gamma_n(3, [g1, g2], h, candidate, lam)
            family = enumerate_E(inst) if candidate.selections is None else sels
            vals = []
            for z in family:
                v = [
                    evaluate(BaseFunction(g1), z).values[i]
                    + lam.values[i] * evaluate(BaseFunction(g2), z).values[i]
                    + lam.values[i] ** 2 * evaluate(BaseFunction(h), z).values[i]
                    for i in range(3)
                ]
                vals.append(v)
            assert list(got.values) == [max(col) for col in zip(*vals)]


class TestDirectedness:
    @given(seeds, st.booleans())
    @settings(max_examples=60)
    def test_glued_minimum(self, seed, explicit):
        rng = random.Random(seed)
        inst = generate(seed, (3, 3, 0, 4))
        if explicit:
            inst = with_selections(inst, rng.sample(enumerate_E(inst), k=5))
        lam = Rv(inst.space, tuple(F(rng.randint(1, 9), 10) for _ in range(3)))
        prefix = [inst.functions.cycle[0].table]
        g, g2 = inst.functions.cycle[1].table, inst.functions.cycle[2].table
        ga, gb = gamma_n(2, prefix, g, inst, lam), gamma_n(2, prefix, g2, inst, lam)
        event = Event.where(inst.space, [x <= y for x, y in zip(ga.values, gb.values)])
        parts = [event, event.complement()]
        glued = {b: concatenate(parts, [g[b], g2[b]]) for b in inst.base_points}
        expected = Rv(inst.space, tuple(min(x, y) for x, y in zip(ga.values, gb.values)))
        assert gamma_n(2, prefix, glued, inst, lam) == expected


class TestGSequence:
    def test_constant_function(self):
        inst = single_function(4, (2, 3, 0, 1))
        f = inst.functions.cycle[0]
        lam = Rv.const(inst.space, F(1, 4))
        sup_f = ess_sup([f.table[b] for b in inst.base_points])
        built = construct_g_sequence(inst, Rv.const(inst.space, F(1, 10)), lam, 4)
        total = Rv.const(inst.space, 0)
        for n, (w, gamma, gamma_inf, g) in enumerate(built, start=1):
            assert g == dict(f.table)
            total = total + sup_f * lam ** (n - 1)
            assert gamma == gamma_inf == total

    def test_matching_pennies_first_step(self):
        inst = matching_pennies()
        lam = Rv.const(inst.space, F(1, 8))
        (w, gamma, gamma_inf, g), = construct_g_sequence(inst, Rv.const(inst.space, F(1, 10)), lam, 1)
        assert w.weights == ((F(1, 2), F(1, 2)),)
        assert gamma.values == (F(1, 2),) == gamma_inf.values

    def test_preamble_ids_leave(self):
        inst = generate(8, (2, 2, 2, 2))
        lam = Rv.const(inst.space, F(1, 5))
        built = construct_g_sequence(inst, Rv.const(inst.space, F(1, 10)), lam, 4)
        fns = distinct_functions(inst.functions)
        assert [list(b[0].ids) for b in built] == [fns.ids_from(n) for n in range(1, 5)]


class TestTrace:
    def test_matching_pennies(self):
        inst = matching_pennies()
        t = trace_proof(inst, Rv.const(inst.space, F(1, 10)), 40)
        assert t.m.values == (F(1, 2),)
        assert t.M.values == (F(1),)
        assert t.lam.values == (F(1, 8),)
        assert t.limsup_at_z0.values == (F(1),)
        assert t.passed
        assert t.rate_gap.values == (F(0),)

    def test_constant_function(self):
        inst = single_function(11, (2, 3, 0, 1))
        t = trace_proof(inst, Rv.const(inst.space, F(1, 10)))
        f = inst.functions.cycle[0]
        sup_f = ess_sup([f.table[b] for b in inst.base_points])
        assert t.passed and t.m == sup_f
        assert evaluate(f, t.z0) == sup_f
        assert t.limsup_at_z0 == sup_f

    def test_telescoping_from_records(self):
        inst = generate(21, (3, 3, 1, 3))
        t = trace_proof(inst)
        k = t.m - t.delta * (t.lam + 1)
        prev = Rv.const(inst.space, 0)
        for r in t.records:
            lhs = (r.sup_s - prev) / t.lam ** (r.n - 1)
            assert all(a >= b for a, b in zip(lhs.values, k.values))
            assert lhs - k == r.telescope_slack
            prev = r.sup_s

    def test_too_few_steps(self):
        inst = matching_pennies()
        with pytest.raises(ResourceError) as info:
            trace_proof(inst, Rv.const(inst.space, F(1, 10)), 1)
        need = info.value.required
        assert need > 1
        trace_proof(inst, Rv.const(inst.space, F(1, 10)), need)

    def test_refuses_failed_hypothesis(self):
        inst = matching_pennies(selections=(Selection(("a",)),))
        with pytest.raises(HypothesisFailed) as info:
            trace_proof(inst)
        assert info.value.witness is not None

    def test_explicit_full_list(self):
        inst = generate(5, (2, 2, 1, 2))
        t = trace_proof(with_selections(inst, enumerate_E(inst)))
        assert t.passed
        assert t.z0 in enumerate_E(inst)

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_all_slacks_nonnegative(self, seed):
        rng = random.Random(seed)
        inst = generate(seed, (rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 2), rng.randint(1, 3)))
        t = trace_proof(inst)
        assert t.passed
        for r in t.records:
            assert all(v == 0 for v in r.optimality_gap)


class TestVerify:
    def test_singleton_equality(self):
        res = verify(single_function(2))
        assert res.holds and all(v == 0 for v in res.slack)

    def test_matching_pennies(self):
        res = verify(matching_pennies())
        assert (res.lhs.values, res.rhs.values, res.holds) == ((F(1),), (F(1, 2),), True)

    def test_inapplicable(self):
        res = verify(matching_pennies(selections=(Selection(("a",)),)))
        assert res.hypothesis.status == FAILS and not res.applicable
        assert res.lhs.values == (F(1),)

    @given(seeds)
    @settings(max_examples=50)
    def test_monotone_in_S(self, seed):
        rng = random.Random(seed)
        inst = generate(seed, (2, 3, 1, 2))
        pool = enumerate_E(inst)
        small = rng.sample(pool, 2)
        big = small + rng.sample(pool, 3)
        a, b = compute_lhs(with_selections(inst, small)), compute_lhs(with_selections(inst, big))
        assert all(x <= y for x, y in zip(a.values, b.values))

    @given(seeds, st.fractions(min_value=F(1, 5), max_value=5, max_denominator=5))
    @settings(max_examples=50)
    def test_scale_equivariance(self, seed, c):
        inst = generate(seed, (2, 3, 1, 2))
        r1, r2 = verify(inst), verify(scaled(inst, c))
        assert r2.lhs == r1.lhs * c and r2.rhs == r1.rhs * c
        assert compute_M(scaled(inst, c)) == compute_M(inst) * c
        assert r1.holds == r2.holds
