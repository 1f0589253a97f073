"""Tests for the piecewise-affine energy function semiring."""

import random
from fractions import Fraction

import pytest

from energyomega import energyfn, laws
from energyomega.energyfn import (
    CONST_BOTTOM,
    compose,
    equal,
    identity,
    join,
    local_finiteness_witness,
    shift,
    star,
    validate,
)
from energyomega.errors import (
    MalformedPieces,
    NegativeValue,
    NonMonotone,
    ParseError,
    SlopeTooSmall,
)
from energyomega.extlat import BOTTOM, TOP, ext_join, finite

from conftest import F, fn_pieces


# ----------------------------------------------------------------------
# validate


def test_validate_identity():
    assert validate(0, False, [(0, 0, 1)]) == identity()


def test_validate_rejects_small_slope():
    with pytest.raises(SlopeTooSmall):
        validate(0, False, [(0, 0, Fraction(1, 2))])


def test_validate_offset_decrement():
    f = validate(1, False, [(1, 0, 1)])
    assert f == shift(-1)


def test_validate_rejects_downward_jump():
    with pytest.raises(NonMonotone):
        validate(0, False, [(0, 5, 1), (2, 3, 1)])


def test_validate_rejects_negative_values():
    with pytest.raises(NegativeValue):
        validate(0, False, [(0, -1, 1)])


def test_validate_rejects_unordered_pieces():
    with pytest.raises(MalformedPieces):
        validate(0, False, [(0, 0, 1), (0, 1, 1)])


def test_validate_rejects_inclusive_bottom_with_pieces():
    # only the bottom/top step admits an inclusive bottom boundary
    with pytest.raises(MalformedPieces):
        validate(1, True, [(1, 6, 2)])


def test_validate_step_function():
    f = validate(2, True, [], 2, False)
    assert f.eval(F(2)) == BOTTOM
    assert f.eval(F("9/4")) == TOP


# ----------------------------------------------------------------------
# eval


def test_eval_affine(plus_two):
    assert plus_two.eval(finite(0)) == finite(2)


def test_eval_below_bottom(decrement):
    assert decrement.eval(F("1/2")) == BOTTOM


def test_eval_const_bottom_at_top():
    assert CONST_BOTTOM.eval(TOP) == BOTTOM


def test_eval_top_endpoint(decrement):
    assert decrement.eval(TOP) == TOP
    assert decrement.eval(BOTTOM) == BOTTOM


# ----------------------------------------------------------------------
# compose / join / star / equal


def test_compose_shifts(plus_two, decrement):
    assert compose(plus_two, decrement) == shift(1)


def test_compose_identity_unit():
    g = fn_pieces(1, [(1, 2, 2)])
    assert compose(identity(), g) == g
    assert compose(g, identity()) == g


def test_compose_const_bottom_left(decrement):
    assert compose(CONST_BOTTOM, decrement) == CONST_BOTTOM


def test_join_idempotent(decrement):
    assert join(decrement, decrement) == decrement


def test_join_identity_dominates_decrement(decrement):
    assert join(identity(), decrement) == identity()


def test_join_piecewise_switch():
    g = fn_pieces(2, [(2, 5, 1)])  # bottom below 2, then x + 3
    j = join(shift(1), g)
    assert j == fn_pieces(0, [(0, 1, 1), (2, 5, 1)])


def test_star_decrement_is_identity(decrement):
    assert star(decrement) == identity()


def test_star_pump(plus_two):
    s = star(plus_two)
    assert s.eval(finite(0)) == TOP
    assert s.eval(finite(100)) == TOP
    assert s.eval(BOTTOM) == BOTTOM


def test_star_const_bottom():
    assert star(CONST_BOTTOM) == identity()


def test_star_boundary_point():
    # f(x) = 2x - 2 below-bottom-2: f(2) = 2 so star keeps 2, tops above
    f = fn_pieces(2, [(2, 2, 2)])
    s = star(f)
    assert s.eval(finite(2)) == finite(2)
    assert s.eval(F("9/4")) == TOP


def test_equal_after_merge():
    two_pieces = validate(0, False, [(0, 1, 1), (3, 4, 1)])
    assert equal(two_pieces, shift(1))
    assert not equal(shift(1), shift(2))


# ----------------------------------------------------------------------
# local finiteness witness


def test_witness_stabilizes(decrement):
    rep = local_finiteness_witness(decrement, finite(5), 64)
    assert rep.kind == "stabilized"
    assert rep.value == finite(5)


def test_witness_diverges():
    rep = local_finiteness_witness(shift(1), finite(0), 64)
    assert rep.kind == "diverges"


def test_witness_identity_fixpoint():
    rep = local_finiteness_witness(identity(), finite(3), 64)
    assert rep.kind == "stabilized"
    assert rep.value == finite(3)


def test_witness_rejects_bad_budget():
    with pytest.raises(ValueError):
        local_finiteness_witness(identity(), finite(0), 0)


# ----------------------------------------------------------------------
# randomized properties


def _corpus(seed, k):
    rng = random.Random(seed)
    return [laws.random_energy_function(rng) for _ in range(k)], rng


def test_defining_inequality():
    fns, rng = _corpus(10, 150)
    for f in fns:
        for _ in range(10):
            x = Fraction(rng.randint(0, 24), rng.randint(1, 4))
            y = x + Fraction(rng.randint(1, 8), rng.randint(1, 4))
            fx, fy = f.eval(finite(x)), f.eval(finite(y))
            if fx.is_finite and fy.is_finite:
                assert fy.value >= fx.value + (y - x)
            else:
                assert fy >= fx


def test_gain_monotone():
    fns, rng = _corpus(11, 100)
    for f in fns:
        gains = []
        for q in sorted(Fraction(rng.randint(0, 30), 2) for _ in range(6)):
            v = f.eval(finite(q))
            if v.is_finite:
                gains.append(v.value - q)
        assert gains == sorted(gains)


def test_semiring_laws():
    fns, _ = _corpus(12, 30)
    for i in range(0, 27, 3):
        f, g, h = fns[i], fns[i + 1], fns[i + 2]
        assert equal(join(f, g), join(g, f))
        assert equal(join(join(f, g), h), join(f, join(g, h)))
        assert equal(join(f, f), f)
        assert equal(join(f, CONST_BOTTOM), f)
        assert equal(compose(compose(f, g), h), compose(f, compose(g, h)))
        assert equal(compose(f, identity()), f)
        assert equal(compose(identity(), f), f)
        assert equal(compose(f, CONST_BOTTOM), CONST_BOTTOM)
        assert equal(compose(CONST_BOTTOM, f), CONST_BOTTOM)
        assert equal(compose(join(f, g), h), join(compose(f, h), compose(g, h)))
        assert equal(compose(f, join(g, h)), join(compose(f, g), compose(f, h)))


def test_star_unfolding():
    fns, _ = _corpus(13, 60)
    for f in fns:
        assert equal(star(f), join(identity(), compose(f, star(f))))


def test_star_matches_witness():
    fns, rng = _corpus(14, 120)
    for f in fns:
        s = star(f)
        for _ in range(6):
            x = finite(Fraction(rng.randint(0, 20), rng.randint(1, 4)))
            rep = local_finiteness_witness(f, x, 64)
            want = TOP if rep.kind == "diverges" else rep.value
            assert s.eval(x) == want


def test_top_continuity():
    fns, rng = _corpus(15, 60)
    for f in fns:
        if f.is_const_bottom:
            continue
        bound = Fraction(rng.randint(1, 50))
        x = Fraction(0)
        for n in range(200):
            if f.eval(finite(x + n)) >= finite(bound):
                break
        else:
            pytest.fail(f"no iterate of {f} above {bound}")


def test_compose_join_pointwise():
    fns, rng = _corpus(16, 80)
    pts = [BOTTOM, TOP] + [
        finite(Fraction(rng.randint(0, 20), rng.randint(1, 4))) for _ in range(8)
    ]
    for i in range(0, len(fns) - 1, 2):
        f, g = fns[i], fns[i + 1]
        c, j = compose(f, g), join(f, g)
        for x in pts:
            assert c.eval(x) == g.eval(f.eval(x))
            assert j.eval(x) == ext_join(f.eval(x), g.eval(x))


# ----------------------------------------------------------------------
# JSON


def test_json_round_trip():
    fns, _ = _corpus(17, 60)
    for f in fns:
        assert energyfn.from_json(energyfn.to_json(f)) == f


def test_json_const_bottom_encoding():
    assert energyfn.to_json(CONST_BOTTOM) == {"bottom": {"boundary": "inf"}}
    assert energyfn.from_json({"bottom": {"boundary": "inf"}}) == CONST_BOTTOM


def test_json_rejects_degenerate():
    with pytest.raises(ParseError):
        energyfn.from_json({"bottom": {"boundary": "inf"}, "pieces": [{"start": "0"}]})
    with pytest.raises(ParseError):
        energyfn.from_json({"pieces": []})
    with pytest.raises(MalformedPieces):
        energyfn.from_json(
            {"bottom": {"boundary": "0", "bottom_at_boundary": False}, "pieces": []}
        )
