"""Enumeration, counts table, series identities, folding, audits."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sawbridge.counting import (
    CountsTable,
    binom_ratio_check,
    build_counts_table,
    connective_estimates,
    count_saw,
    enumerate_isab,
    enumerate_sab,
    enumerate_saw,
    generating_bridge_audit,
    hw_unfold,
    kesten_partial_sums,
    mu_hat_from_table,
    mvmp_audit,
    saw_count_series,
    series_identity_check,
)
from sawbridge.errors import BudgetExceeded, ConsistencyError, WalkError
from sawbridge.verify import naive_count_saw
from sawbridge.walks import (
    Walk,
    as_bridge,
    is_bridge,
    is_self_avoiding,
    parse,
    serialize,
    unit,
)


@pytest.fixture(scope="module")
def table8():
    return build_counts_table(8)


class TestCountSaw:
    def test_first_steps(self):
        assert count_saw(1, 2) == 4
        assert count_saw(2, 2) == 12

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_closed_forms_small_n(self, d):
        assert count_saw(1, d) == 2 * d
        assert count_saw(2, d) == 2 * d * (2 * d - 1)

    def test_against_generate_and_filter_oracle(self):
        # the full n <= 10 comparison lives in the acceptance suite
        for n in range(8):
            assert count_saw(n, 2) == naive_count_saw(n, 2)
        for n in range(5):
            assert count_saw(n, 3) == naive_count_saw(n, 3)

    def test_n4_is_100(self):
        assert count_saw(4, 2) == 100

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            count_saw(99, 2)
        with pytest.raises(WalkError):
            count_saw(-1, 2)

    def test_parallel_matches_sequential(self):
        assert saw_count_series(7, 2, workers=2) == saw_count_series(7, 2)


class TestEnumeration:
    def test_sab_length_one(self):
        assert [serialize(b) for b in enumerate_sab(1, 2)] == ["+2"]

    def test_sab_length_two(self):
        got = {serialize(b) for b in enumerate_sab(2, 2)}
        assert got == {"+2,+2", "+2,+1", "+2,-1"}

    def test_isab_length_two(self):
        got = {serialize(b) for b in enumerate_isab(2, 2)}
        assert got == {"+2,+1", "+2,-1"}

    def test_b3_and_i3(self):
        b3 = list(enumerate_sab(3, 2))
        i3 = list(enumerate_isab(3, 2))
        assert len(b3) == 7 and len(i3) == 2
        # convolution cross-check: b_3 = i_1 b_2 + i_2 b_1 + i_3 = 3 + 2 + 2
        assert len(b3) == 1 * 3 + 2 * 1 + len(i3)

    def test_lexicographic_and_deterministic(self):
        rank = {"+1": 0, "-1": 1, "+2": 2, "-2": 3}
        key = lambda s: [rank[t] for t in s.split(",")]  # noqa: E731
        first = [serialize(w) for w in enumerate_saw(3, 2)]
        second = [serialize(w) for w in enumerate_saw(3, 2)]
        assert first == second == sorted(first, key=key)
        assert first[0] == "+1,+1,+1"

    def test_every_sab_output_is_a_bridge(self):
        for b in enumerate_sab(5, 2):
            assert is_bridge(b) and is_self_avoiding(b)

    def test_isab_rejects_length_zero(self):
        with pytest.raises(WalkError):
            list(enumerate_isab(0, 2))


class TestCountsTable:
    def test_spec_rows(self, table8):
        assert table8.c[:4] == (1, 4, 12, 36)
        assert table8.b[:4] == (1, 1, 3, 7)
        assert table8.i[:4] == (None, 1, 2, 2)

    def test_bridges_bounded_by_walks(self, table8):
        assert all(b <= c for b, c in zip(table8.b, table8.c))

    def test_convolution_rows(self, table8):
        for n in range(1, table8.max_n + 1):
            conv = sum(table8.i[k] * table8.b[n - k] for k in range(1, n + 1))
            assert conv == table8.b[n]

    def test_validate_rejects_corruption(self, table8):
        bad = CountsTable(
            d=2,
            max_n=3,
            c=table8.c[:4],
            b=(1, 1, 3, 8),
            i=table8.i[:4],
        )
        with pytest.raises(ConsistencyError):
            bad.validate()

    def test_csv_shape(self, table8):
        lines = table8.to_csv().strip().splitlines()
        assert lines[0] == "n,c,b,i"
        assert lines[1] == "0,1,1,"
        assert lines[2] == "1,4,1,1"

    def test_json_renders_decimal_strings(self, table8):
        rows = table8.to_json_dict()["rows"]
        assert rows[3] == {"n": 3, "c": "36", "b": "7", "i": "2"}
        assert rows[0]["i"] is None


class TestSeriesAndKesten:
    def test_series_identity(self, table8):
        assert series_identity_check(table8, 0)
        assert series_identity_check(table8, 3)
        assert series_identity_check(table8, 8)

    def test_series_identity_negative_control(self, table8):
        corrupted = CountsTable(
            d=2, max_n=3, c=table8.c[:4], b=(1, 1, 3, 8), i=table8.i[:4]
        )
        assert not series_identity_check(corrupted, 3)

    def test_degree_beyond_table(self, table8):
        with pytest.raises(WalkError):
            series_identity_check(table8, 99)

    def test_single_term_partial_sum(self, table8):
        audit = kesten_partial_sums(table8, 4.0)
        assert audit.partial_sums[0] == pytest.approx(0.25, abs=1e-15)

    def test_partial_sums_increasing_and_below_one(self, table8):
        audit = kesten_partial_sums(table8, mu_hat_from_table(table8))
        sums = audit.partial_sums
        assert all(a < b for a, b in zip(sums, sums[1:]))
        assert all(s < 1 for s in sums)

    def test_mu_hat_must_exceed_one(self, table8):
        with pytest.raises(WalkError):
            kesten_partial_sums(table8, 1.0)

    def test_audit_csv(self, table8):
        lines = kesten_partial_sums(table8, 4.0).to_csv().splitlines()
        assert lines[0] == "L,S_L" and lines[1].startswith("1,0.25")

    def test_generating_bridge_audit(self, table8):
        assert generating_bridge_audit(table8, 8)
        # degree D audits c_n for n <= D - 1, so corrupt c_2 and use D = 3
        inflated = CountsTable(
            d=2, max_n=3, c=(1, 4, 999, 36), b=table8.b[:4], i=table8.i[:4]
        )
        assert not generating_bridge_audit(inflated, 3)


class TestConnective:
    def test_first_upper_bound(self, table8):
        ests = connective_estimates(table8)
        assert ests[0].n == 1 and ests[0].upper_bound == pytest.approx(4.0)

    def test_doubling_inequality(self, table8):
        # c_{2n} <= c_n^2 gives c_{2n}^{1/2n} <= c_n^{1/n} exactly in ints
        for n in range(1, table8.max_n // 2 + 1):
            assert table8.c[2 * n] <= table8.c[n] ** 2

    def test_ratio_column(self, table8):
        ests = connective_estimates(table8)
        assert ests[0].ratio == pytest.approx(3.0)  # c_2 / c_1 = 12 / 4
        assert ests[-1].ratio is None


class TestHwUnfold:
    def test_bridge_fixed_point(self):
        b = parse("+2,+1,+2")
        assert hw_unfold(b) == as_bridge(b)

    def test_flat_walk_pinned(self):
        assert serialize(hw_unfold(parse("+1,+1"))) == "+2,+2"

    def test_south_reflects_north(self):
        assert serialize(hw_unfold(parse("-2"))) == "+2"

    def test_exhaustive_small(self):
        for n in range(1, 7):
            for w in enumerate_saw(n, 2):
                b = hw_unfold(w)
                assert b.length == n
                assert is_bridge(b)
                assert hw_unfold(b) == b

    @given(st.lists(st.tuples(st.integers(1, 2), st.sampled_from((1, -1))), max_size=10))
    @settings(max_examples=200)
    def test_properties_on_random_walks(self, tokens):
        w = Walk.from_steps((unit(a, s, 2) for a, s in tokens), 2)
        if not is_self_avoiding(w):
            return
        b = hw_unfold(w)
        assert b.length == w.length
        assert hw_unfold(b) == b


class TestMvmp:
    def test_identity_map(self):
        audit = mvmp_audit({k: frozenset([k]) for k in range(5)})
        assert audit.lhs == 5 and audit.rhs == 5 and audit.holds

    def test_constant_map_saturates(self):
        audit = mvmp_audit({a: frozenset(["b"]) for a in range(3)})
        assert audit.lhs == 3 and audit.rhs == Fraction(3) and audit.holds

    def test_empty_image_rejected(self):
        with pytest.raises(WalkError):
            mvmp_audit({"a": frozenset()})

    def test_codomain_must_cover_images(self):
        with pytest.raises(WalkError):
            mvmp_audit({"a": frozenset([1, 2])}, codomain_size=1)

    def test_explicit_codomain(self):
        audit = mvmp_audit({"a": frozenset([1])}, codomain_size=10)
        assert audit.rhs == 10 and audit.holds


class TestBinomRatio:
    def test_m_zero(self):
        assert binom_ratio_check(5, 3, 0)

    def test_all_equal(self):
        assert binom_ratio_check(4, 4, 4)  # ratio 1 >= 0^m

    def test_precondition(self):
        with pytest.raises(WalkError):
            binom_ratio_check(2, 3, 1)

    @given(st.integers(0, 60), st.integers(0, 60), st.integers(0, 60))
    @settings(max_examples=300)
    def test_random_triples(self, a, b, c):
        n1, n2, m = sorted((a, b, c), reverse=True)
        assert binom_ratio_check(n1, n2, m)

    def test_exactness_on_a_tight_case(self):
        n1, n2, m = 10, 10, 3
        lhs = Fraction(math.comb(n1, m), math.comb(n2, m))
        rhs = Fraction(n1 - m, n2) ** m
        assert lhs >= rhs and binom_ratio_check(n1, n2, m)
