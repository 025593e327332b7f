import pytest

from ismcheck.errors import UsageError
from ismcheck.prng import (
    GOLDEN_GAMMA,
    MASK64,
    RngState,
    mix64,
    rng_new,
    rng_next,
    rng_range,
    rng_split,
)

from conftest import within_sigmas

# First two outputs of the reference SplitMix64 generator seeded with 0
SPLITMIX_0 = 0xE220A8397B1DCDAF
SPLITMIX_1 = 0x6E789E6AA1B965F4


def test_mix64_fixes_zero():
    assert mix64(0) == 0


def test_mix64_matches_splitmix_reference():
    assert mix64(GOLDEN_GAMMA) == SPLITMIX_0
    assert mix64(2 * GOLDEN_GAMMA) == SPLITMIX_1


def test_rng_new_golden_values():
    assert rng_new(0) == RngState(0, SPLITMIX_0)
    assert rng_new(GOLDEN_GAMMA) == RngState(SPLITMIX_0, SPLITMIX_1 | 1)


def test_rng_new_reduces_seed_to_64_bits():
    assert rng_new(-1) == rng_new(MASK64)
    assert rng_new(1 << 64) == rng_new(0)


def test_rng_next_is_an_lcg_step():
    r, _ = rng_next(RngState(0, SPLITMIX_0))
    assert r.state == SPLITMIX_0
    assert r.stream == SPLITMIX_0


def test_rng_next_is_pure():
    r = rng_new(42)
    assert rng_next(r) == rng_next(r)
    assert r == rng_new(42)


@pytest.mark.parametrize("state, stream", [(0, 2), (-1, 1), (1 << 64, 1), (0, 1 << 64 | 1)])
def test_rng_state_rejects_invalid_words(state, stream):
    with pytest.raises(UsageError):
        RngState(state, stream)


def test_split_branches_differ_and_keep_odd_streams():
    parent = rng_new(7)
    left, right = rng_split(parent)
    assert left != right
    assert left.stream == parent.stream
    assert right.stream != parent.stream
    assert right.stream % 2 == 1


def test_split_is_deterministic():
    assert rng_split(rng_new(99)) == rng_split(rng_new(99))


def test_split_children_produce_different_outputs():
    left, right = rng_split(rng_new(2024))
    left_words = [rng_next(left)[1]]
    right_words = [rng_next(right)[1]]
    for _ in range(10):
        left, w = rng_next(left)
        left_words.append(w)
        right, w = rng_next(right)
        right_words.append(w)
    assert left_words != right_words


def test_rng_range_rejects_empty_range():
    with pytest.raises(UsageError):
        rng_range(rng_new(1), 5, 4)


def test_rng_range_single_value_consumes_nothing():
    r = rng_new(1)
    assert rng_range(r, 3, 3) == (r, 3)


@pytest.mark.parametrize("lo, hi", [(0, 1), (-100, 100), (0, 255), (0, MASK64), (-(1 << 80), 1 << 80)])
def test_rng_range_stays_in_bounds(lo, hi):
    r = rng_new(5)
    for _ in range(500):
        r, x = rng_range(r, lo, hi)
        assert lo <= x <= hi


def test_rng_range_coin_is_fair():
    r = rng_new(11)
    heads = 0
    draws = 10_000
    for _ in range(draws):
        r, x = rng_range(r, 0, 1)
        heads += x
    assert within_sigmas(heads, draws, 0.5, 4)


def test_rng_range_covers_small_ranges():
    r = rng_new(3)
    seen = set()
    for _ in range(1000):
        r, x = rng_range(r, 0, 9)
        seen.add(x)
    assert seen == set(range(10))


def _outputs(r, count):
    words = []
    for _ in range(count):
        r, w = rng_next(r)
        words.append(w)
    return words


def test_rng_new_seed_one_golden():
    assert rng_new(1) == RngState(0x5692161D100B05E5, 0x910A2DEC89025CC1)


def test_two_lcg_steps_golden():
    r0 = rng_new(1)
    r1, w1 = rng_next(r0)
    r2, w2 = rng_next(r1)
    assert (r1.state, w1) == (0xB7A28775BE37960A, 0x9B4CC1C019464F2D)
    assert (r2.state, w2) == (0x891C74FF01840693, 0xC13458F0291E28F4)
    assert r1 != r2


def test_rng_range_golden():
    r0 = rng_new(1)
    assert rng_range(r0, 0, 9) == (rng_next(r0)[0], 5)


def test_no_fixed_point_over_a_million_steps():
    r = rng_new(7)
    for _ in range(1_000_000):
        nxt, _ = rng_next(r)
        assert nxt.state != r.state
        r = nxt


def test_split_branch_outputs_differ_bitwise():
    left, right = rng_split(rng_new(42))
    ones = sum(bin(a ^ b).count("1") for a, b in zip(_outputs(left, 1000), _outputs(right, 1000)))
    assert within_sigmas(ones, 64 * 1000, 0.5, 3)


def test_split_branches_differ_for_many_seeds():
    seeds = _outputs(rng_new(2024), 500)
    for seed in seeds:
        left, right = rng_split(rng_new(seed))
        assert _outputs(left, 64) != _outputs(right, 64)


def test_consuming_one_branch_leaves_the_other_alone():
    left, right = rng_split(rng_new(42))
    before = _outputs(right, 64)
    _outputs(left, 1000)
    rng_split(left)
    assert _outputs(right, 64) == before
