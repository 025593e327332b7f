from collections import Counter

import pytest

from ismcheck.errors import LengthMismatch, UsageError
from ismcheck.gen import (
    COARB_BOOL,
    COARB_INT,
    SizedVector,
    arbitrary_bits8,
    arbitrary_bool,
    arbitrary_int,
    arbitrary_nat,
    arbitrary_unit,
    coarb_bool,
    coarb_function,
    coarb_int,
    coarb_pair,
    gen_bind,
    gen_choose,
    gen_elements,
    gen_frequency,
    gen_function,
    gen_map,
    gen_oneof,
    gen_pure,
    gen_sample,
    gen_sized_list,
    gen_vector,
    resize,
    sized,
    variant,
)
from ismcheck.prng import rng_new, rng_split

from conftest import within_sigmas

SIZE = 30


@pytest.fixture
def rngs():
    r = rng_new(20240527)
    out = []
    for _ in range(50):
        r, head = rng_split(r)
        out.append(head)
    return out


def test_pure_ignores_rng_and_size(rngs):
    g = gen_pure("x")
    assert {g.run(size, r) for size in (0, 5, 100) for r in rngs} == {"x"}


def test_left_identity_pointwise(rngs):
    def f(x):
        return sized(lambda n: gen_pure((x, n)))

    for r in rngs:
        assert gen_bind(gen_pure(3), f).run(SIZE, r) == f(3).run(SIZE, r)


def test_right_identity_pointwise_for_rng_independent(rngs):
    g = sized(lambda n: gen_pure(n * 2))
    for r in rngs:
        assert gen_bind(g, gen_pure).run(SIZE, r) == g.run(SIZE, r)


def test_associativity_pointwise_for_rng_independent(rngs):
    g = sized(lambda n: gen_pure(n))

    def f(x):
        return gen_pure(x + 1)

    def h(y):
        return sized(lambda n: gen_pure(y * n))

    for r in rngs:
        left = gen_bind(gen_bind(g, f), h).run(SIZE, r)
        right = gen_bind(g, lambda x: gen_bind(f(x), h)).run(SIZE, r)
        assert left == right


def test_right_identity_in_distribution():
    draws = 10_000
    plain = Counter(gen_sample(gen_choose(0, 4), rng_new(1), draws))
    bound = Counter(gen_sample(gen_bind(gen_choose(0, 4), gen_pure), rng_new(2), draws))
    for value in range(5):
        assert within_sigmas(plain[value], draws, 0.2, 4)
        assert within_sigmas(bound[value], draws, 0.2, 4)


def test_map_does_not_consume_randomness(rngs):
    g = gen_choose(0, 1000)
    for r in rngs:
        assert gen_map(g, lambda x: x + 1).run(SIZE, r) == g.run(SIZE, r) + 1


def test_choose_rejects_empty_range():
    with pytest.raises(UsageError):
        gen_choose(2, 1)


def test_choose_degenerate_range(rngs):
    assert {gen_choose(7, 7).run(SIZE, r) for r in rngs} == {7}


def test_choose_is_deterministic():
    r = rng_new(5)
    assert gen_choose(-10**6, 10**6).run(SIZE, r) == gen_choose(-10**6, 10**6).run(SIZE, r)


def test_oneof_and_frequency_reject_bad_input():
    with pytest.raises(UsageError):
        gen_oneof([])
    with pytest.raises(UsageError):
        gen_frequency([])
    with pytest.raises(UsageError):
        gen_frequency([(0, gen_pure(1))])
    with pytest.raises(UsageError):
        gen_frequency([(-1, gen_pure(1)), (2, gen_pure(2))])


def test_oneof_only_picks_listed_generators():
    values = gen_sample(gen_oneof([gen_pure("a"), gen_pure("b")]), rng_new(8), 1000)
    assert set(values) == {"a", "b"}


def test_oneof_is_balanced():
    draws = 10_000
    counts = Counter(gen_sample(gen_oneof([gen_pure("a"), gen_pure("b")]), rng_new(8), draws))
    assert within_sigmas(counts["b"], draws, 0.5, 3)


def test_elements_covers_all():
    assert set(gen_sample(gen_elements([1, 2, 3]), rng_new(4), 500)) == {1, 2, 3}


def test_frequency_matches_weights():
    draws = 10_000
    g = gen_frequency([(1, gen_pure("a")), (4, gen_pure("b")), (1, gen_pure("c"))])
    counts = Counter(gen_sample(g, rng_new(20240527), draws))
    assert within_sigmas(counts["a"], draws, 1 / 6, 3)
    assert within_sigmas(counts["b"], draws, 4 / 6, 3)
    assert within_sigmas(counts["c"], draws, 1 / 6, 3)


def test_vector_has_exact_length(rngs):
    for n in (0, 1, 5, 17):
        assert len(gen_vector(n, gen_choose(0, 9)).run(SIZE, rngs[n])) == n


def test_vector_rejects_negative_length():
    with pytest.raises(UsageError):
        gen_vector(-1, gen_pure(0))


def test_vector_elements_are_not_all_equal():
    xs = gen_vector(20, gen_choose(0, 10**9)).run(SIZE, rng_new(77))
    assert len(set(xs)) > 1


def test_sized_vector_rejects_length_mismatch():
    with pytest.raises(LengthMismatch) as exc:
        SizedVector(0, [3])
    assert str(exc.value) == "Mismatch between: 1 and 0."


def test_sized_vector_infer_and_unpack():
    v = SizedVector.infer([4, 5, 6])
    assert v.n == 3
    n, xs = v
    assert (n, xs) == (3, [4, 5, 6])


def test_sized_list_lengths_agree(rngs):
    g = gen_sized_list(gen_choose(0, 8), arbitrary_bool())
    for r in rngs:
        v = g.run(SIZE, r)
        assert len(v.items) == v.n


def test_sized_and_resize():
    g = sized(lambda n: gen_pure(n))
    assert g.run(12, rng_new(0)) == 12
    assert resize(3, g).run(12, rng_new(0)) == 3
    with pytest.raises(UsageError):
        resize(-1, g)


def test_arbitrary_ranges():
    r = rng_new(6)
    assert set(gen_sample(arbitrary_unit(), r, 10)) == {()}
    assert set(gen_sample(arbitrary_bool(), r, 200)) == {False, True}
    assert all(-100 <= x <= 100 for x in gen_sample(arbitrary_int(), r, 500))
    assert all(0 <= x <= 100 for x in gen_sample(arbitrary_nat(), r, 500))
    assert all(0 <= x <= 255 for x in gen_sample(arbitrary_bits8(), r, 500))
    assert all(-3 <= x <= 3 for x in gen_sample(arbitrary_int(-3, 3), r, 100))


def test_variant_rejects_negative():
    with pytest.raises(UsageError):
        variant(-1, gen_pure(0))


def test_variant_separates_values():
    g = gen_choose(0, 1 << 62)
    r = rng_new(123)
    outputs = [variant(v, g).run(SIZE, r) for v in range(64)]
    assert len(set(outputs)) == 64


def test_coarb_int_separates_signs():
    g = gen_choose(0, 1 << 62)
    r = rng_new(321)
    outputs = [coarb_int(x, g).run(SIZE, r) for x in range(-32, 32)]
    assert len(set(outputs)) == 64
    assert coarb_bool(True, g).run(SIZE, r) != coarb_bool(False, g).run(SIZE, r)


def test_generated_function_is_a_function():
    fn = gen_function(COARB_INT, gen_choose(0, 1 << 40)).run(SIZE, rng_new(9))
    assert [fn(x) for x in range(-20, 20)] == [fn(x) for x in range(-20, 20)]
    assert len({fn(x) for x in range(-20, 20)}) > 1


def test_generated_int_function_is_not_constant():
    fn = gen_function(COARB_INT, gen_choose(0, 1 << 32)).run(SIZE, rng_new(42))
    assert len({fn(x) for x in range(64)}) > 1


def test_generated_functions_differ_across_rngs():
    g = gen_function(COARB_BOOL, gen_choose(0, 1 << 40))
    f1, f2 = gen_sample(g, rng_new(10), 2)
    assert (f1(True), f1(False)) != (f2(True), f2(False))


def test_coarb_pair_and_function():
    pair_fn = gen_function(coarb_pair(COARB_INT, COARB_BOOL), gen_choose(0, 1 << 40)).run(SIZE, rng_new(11))
    assert pair_fn((1, True)) == pair_fn((1, True))
    assert len({pair_fn((x, b)) for x in range(5) for b in (False, True)}) > 1

    inner = gen_function(COARB_INT, arbitrary_int())
    outer = gen_function(coarb_function(arbitrary_int(), COARB_INT), gen_choose(0, 1 << 40))
    higher = outer.run(SIZE, rng_new(12))
    fns = gen_sample(inner, rng_new(13), 5)
    assert [higher(f) for f in fns] == [higher(f) for f in fns]
