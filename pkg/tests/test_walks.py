"""Lattice substrate: types, predicates, transforms, text format."""

import pytest
from hypothesis import given, strategies as st

import sawbridge.walks as wk
from sawbridge.errors import (
    DimensionMismatch,
    NotBridge,
    NotSelfAvoiding,
    ParseError,
    WalkError,
)
from sawbridge.walks import (
    Bridge,
    SelfAvoidingWalk,
    Walk,
    as_bridge,
    as_saw,
    concat,
    is_bridge,
    is_self_avoiding,
    origin,
    parse,
    reflect_across_y_level,
    rotate_quarter_cw,
    serialize,
    translate_to_origin,
    unit,
    walk_from_json_dict,
    walk_to_json_dict,
    width,
    y_extent,
)


def steps_strategy(d=2, max_len=12):
    token = st.tuples(st.integers(1, d), st.sampled_from((1, -1)))
    return st.lists(token, max_size=max_len)


def walk_from(tokens, d=2):
    return Walk.from_steps((unit(a, s, d) for a, s in tokens), d)


class TestWalkValidity:
    def test_single_point_is_a_walk(self):
        w = Walk(((0, 0),))
        assert w.length == 0 and w.d == 2

    def test_non_unit_step_rejected(self):
        with pytest.raises(WalkError):
            Walk(((0, 0), (1, 1)))
        with pytest.raises(WalkError):
            Walk(((0, 0), (2, 0)))

    def test_dimension_one_rejected(self):
        with pytest.raises(WalkError):
            Walk(((0,), (1,)))

    def test_mixed_dimension_rejected(self):
        with pytest.raises(DimensionMismatch):
            Walk(((0, 0), (0, 0, 1)))

    def test_segment_bounds(self):
        w = parse("+2,+1,+2")
        assert w.segment(1, 2).points == ((0, 1), (1, 1))
        with pytest.raises(WalkError):
            w.segment(2, 1)


class TestSelfAvoidance:
    def test_single_point(self):
        assert is_self_avoiding(Walk(((0, 0),)))

    def test_closed_loop_revisits_start(self):
        assert not is_self_avoiding(parse("+2,+1,-2,-1"))

    def test_nen_is_self_avoiding(self):
        w = parse("+2,+1,+2")
        assert w.points == ((0, 0), (0, 1), (1, 1), (1, 2))
        assert is_self_avoiding(w)

    def test_grid_and_set_paths_agree(self):
        walks = [parse("+2,+1,-2,-1"), parse("+2,+1,+2"), parse("+1,+1,+2,-1,-1")]
        for w in walks:
            dense = wk._points_distinct(w.points, cell_budget=1 << 22)
            sparse = wk._points_distinct(w.points, cell_budget=1)
            assert dense == sparse == is_self_avoiding(w)

    def test_constructor_enforces(self):
        with pytest.raises(NotSelfAvoiding):
            as_saw(parse("+2,-2"))


class TestBridgePredicate:
    def test_monotone_north(self):
        assert is_bridge(parse("+2,+2"))

    def test_east_first_fails_unique_min(self):
        assert not is_bridge(parse("+1,+2"))

    def test_north_then_east_allows_tied_max(self):
        assert is_bridge(parse("+2,+1"))

    def test_length_zero_qualifies(self):
        assert is_bridge(Walk(((0, 0),)))
        as_bridge(Walk(((0, 0),)))

    def test_constructor_enforces(self):
        with pytest.raises(NotBridge):
            as_bridge(parse("+1,+2"))

    def test_bridge_is_self_avoiding_by_hierarchy(self):
        b = as_bridge(parse("+2,+1"))
        assert isinstance(b, SelfAvoidingWalk) and isinstance(b, Bridge)


class TestConcat:
    def test_identity_element(self):
        n = parse("+2")
        empty = Walk(((0, 0),))
        assert concat(n, empty) == n
        assert concat(empty, n) == n

    def test_inverse_step_not_self_avoiding(self):
        out = concat(parse("+2"), parse("-2"))
        assert serialize(out) == "+2,-2"
        assert not is_self_avoiding(out)

    def test_ne_then_nw(self):
        out = concat(parse("+2,+1"), parse("+2,-1"))
        assert serialize(out) == "+2,+1,+2,-1"
        assert out.points == ((0, 0), (0, 1), (1, 1), (1, 2), (0, 2))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            concat(parse("+2"), parse("+2", d=3))

    @given(steps_strategy(max_len=6), steps_strategy(max_len=6), steps_strategy(max_len=6))
    def test_associative(self, ta, tb, tc):
        a, b, c = walk_from(ta), walk_from(tb), walk_from(tc)
        assert concat(concat(a, b), c) == concat(a, concat(b, c))


class TestTransforms:
    def test_reflect_north_to_south(self):
        assert serialize(reflect_across_y_level(parse("+2"), (0, 0))) == "-2"

    def test_reflect_fixes_points_on_the_level(self):
        w = Walk(((3, 2), (3, 3)))
        out = reflect_across_y_level(w, (99, 2))
        assert out.points[0] == (3, 2)

    def test_reflect_nn_across_start(self):
        out = reflect_across_y_level(parse("+2,+2"), (0, 0))
        assert serialize(out) == "-2,-2"

    @given(steps_strategy(), st.integers(-5, 5))
    def test_reflect_is_an_involution(self, tokens, level):
        w = walk_from(tokens)
        v = (0, level)
        assert reflect_across_y_level(reflect_across_y_level(w, v), v) == w

    def test_rotate_north_to_east(self):
        assert serialize(rotate_quarter_cw(parse("+2"), (0, 0))) == "+1"

    def test_rotate_fixes_pivot(self):
        w = parse("+2,+2")
        out = rotate_quarter_cw(w, (0, 0))
        assert out.points[0] == (0, 0)
        assert serialize(out) == "+1,+1"

    @given(steps_strategy())
    def test_rotate_four_times_is_identity(self, tokens):
        w = walk_from(tokens)
        out = w
        for _ in range(4):
            out = rotate_quarter_cw(out, (2, -1))
        assert out == w

    @given(steps_strategy())
    def test_rotation_swaps_width_and_y_extent(self, tokens):
        w = walk_from(tokens)
        assert width(rotate_quarter_cw(w, (0, 0))) == y_extent(w)

    def test_width_examples(self):
        assert width(parse("+2,+2,+2")) == 0
        assert width(parse("+2,+1,+2")) == 1
        assert width(parse("+2,+1,+1,+2")) == 2

    def test_translate_to_origin(self):
        w = Walk(((2, 3), (2, 4)))
        assert translate_to_origin(w).points == ((0, 0), (0, 1))


class TestTextFormat:
    def test_examples(self):
        assert serialize(parse("+2,+1,+2")) == "+2,+1,+2"
        assert parse("") == Walk(((0, 0),))
        assert serialize(Walk(((0, 0),))) == ""

    def test_axis_out_of_range(self):
        with pytest.raises(ParseError):
            parse("+1,+1,+3")

    @pytest.mark.parametrize("bad", ["+0", "0", "2", "++2", "+-1", "+2,,+1", "+2, mu", "-"])
    def test_malformed_tokens(self, bad):
        with pytest.raises(ParseError):
            parse(bad)

    def test_three_dimensional_tokens(self):
        w = parse("+3,-3,+2", d=3)
        assert w.points[1] == (0, 0, 1)

    @given(steps_strategy(d=3, max_len=10))
    def test_round_trip(self, tokens):
        w = walk_from(tokens, d=3)
        assert parse(serialize(w), d=3) == w

    def test_json_embedding(self):
        w = parse("+2,+1,+2")
        obj = walk_to_json_dict(w)
        assert obj == {"d": 2, "steps": "+2,+1,+2"}
        assert walk_from_json_dict(obj) == w
        with pytest.raises(ParseError):
            walk_from_json_dict({"steps": "+1"})
