"""
Deterministic generators

A Generator wraps a pure function of (size, rng). Bind splits the RNG so
that the head generator and its continuation draw from different branches,
which makes every generated value reproducible from its (size, rng) pair.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Generic, Sequence, TypeVar

from ismcheck.config import get_settings
from ismcheck.errors import LengthMismatch, UsageError
from ismcheck.prng import RngState, rng_range, rng_split

T = TypeVar("T")
A = TypeVar("A")
B = TypeVar("B")


@dataclass(frozen=True)
class Generator(Generic[T]):
    """Deterministic function from (size, rng) to a value"""

    fn: Callable[[int, RngState], T]

    def run(self, size: int, rng: RngState) -> T:
        return self.fn(size, rng)

    def bind(self, k: Callable[[T], "Generator[B]"]) -> "Generator[B]":
        return gen_bind(self, k)

    def map(self, f: Callable[[T], B]) -> "Generator[B]":
        return gen_map(self, f)


def gen_pure(x: T) -> Generator[T]:
    return Generator(lambda size, rng: x)


def gen_bind(g: Generator[A], k: Callable[[A], Generator[B]]) -> Generator[B]:
    """run(n, r0) = k(g.run(n, r1)).run(n, r2) where (r1, r2) = split(r0)"""

    def run(size: int, r0: RngState) -> B:
        r1, r2 = rng_split(r0)
        return k(g.run(size, r1)).run(size, r2)

    return Generator(run)


def gen_map(g: Generator[A], f: Callable[[A], B]) -> Generator[B]:
    # No split: mapping never consumes randomness
    return Generator(lambda size, rng: f(g.run(size, rng)))


def sized(f: Callable[[int], Generator[T]]) -> Generator[T]:
    return Generator(lambda size, rng: f(size).run(size, rng))


def resize(n: int, g: Generator[T]) -> Generator[T]:
    if n < 0:
        raise UsageError(f"size must be non-negative, got {n}")
    return Generator(lambda size, rng: g.run(n, rng))


def gen_choose(lo: int, hi: int) -> Generator[int]:
    if lo > hi:
        raise UsageError(f"choose: lo ({lo}) > hi ({hi})")
    return Generator(lambda size, rng: rng_range(rng, lo, hi)[1])


def gen_oneof(gs: Sequence[Generator[T]]) -> Generator[T]:
    """Pick one generator uniformly and run it on a split RNG"""
    gs = tuple(gs)
    if not gs:
        raise UsageError("oneof: empty list of generators")
    return gen_bind(gen_choose(0, len(gs) - 1), lambda i: gs[i])


def gen_elements(xs: Sequence[T]) -> Generator[T]:
    return gen_oneof([gen_pure(x) for x in xs])


def gen_frequency(ws: Sequence[tuple[int, Generator[T]]]) -> Generator[T]:
    """Pick generator i with probability weight_i / sum(weights)"""
    ws = tuple(ws)
    if not ws:
        raise UsageError("frequency: empty list of generators")
    for weight, _ in ws:
        if not isinstance(weight, int) or weight < 1:
            raise UsageError(f"frequency: weights must be positive integers, got {weight!r}")
    total = sum(weight for weight, _ in ws)

    def pick(n: int) -> Generator[T]:
        for weight, g in ws:
            if n <= weight:
                return g
            n -= weight
        raise AssertionError("unreachable: n exceeds total weight")

    return gen_bind(gen_choose(1, total), pick)


def gen_vector(n: int, g: Generator[T]) -> Generator[list[T]]:
    """Exactly n elements, each drawn from its own split of the RNG"""
    if n < 0:
        raise UsageError(f"vector length must be non-negative, got {n}")

    def run(size: int, rng: RngState) -> list[T]:
        items = []
        for _ in range(n):
            head, rng = rng_split(rng)
            items.append(g.run(size, head))
        return items

    return Generator(run)


@dataclass(frozen=True)
class SizedVector(Generic[T]):
    """A length paired with a list of exactly that length"""

    n: int
    items: tuple[T, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if self.n < 0 or len(self.items) != self.n:
            raise LengthMismatch(self.n, len(self.items))

    @classmethod
    def infer(cls, items: Sequence[T]) -> "SizedVector[T]":
        return cls(len(items), tuple(items))

    def __iter__(self):
        return iter((self.n, list(self.items)))


def gen_sized_list(g_len: Generator[int], g_elem: Generator[T]) -> Generator[SizedVector[T]]:
    return gen_bind(g_len, lambda n: gen_map(gen_vector(n, g_elem), lambda xs: SizedVector(n, xs)))


def gen_sample(g: Generator[T], rng: RngState, count: int, size: int | None = None) -> list[T]:
    """Draw count values, each from its own split of rng"""
    size = get_settings().size if size is None else size
    return gen_vector(count, g).run(size, rng)


# Arbitrary instances

def arbitrary_unit() -> Generator[tuple]:
    return gen_pure(())


def arbitrary_bool() -> Generator[bool]:
    return gen_elements([False, True])


def arbitrary_int(lo: int | None = None, hi: int | None = None) -> Generator[int]:
    settings = get_settings()
    return gen_choose(settings.int_min if lo is None else lo, settings.int_max if hi is None else hi)


def arbitrary_nat(hi: int | None = None) -> Generator[int]:
    return gen_choose(0, get_settings().nat_max if hi is None else hi)


def arbitrary_bits8() -> Generator[int]:
    return gen_choose(0, 255)


# Coarbitrary and generated functions

def variant(v: int, g: Generator[B]) -> Generator[B]:
    """Re-key g by a non-negative integer

    Each binary digit (least significant first) is preceded by a right
    split marking "more digits", and the path ends with a left split.
    The encoding is prefix-free, so distinct values take distinct paths.
    """
    if v < 0:
        raise UsageError(f"variant expects a non-negative integer, got {v}")

    def run(size: int, rng: RngState) -> B:
        n = v
        while n:
            _, rng = rng_split(rng)
            left, right = rng_split(rng)
            rng = right if n & 1 else left
            n >>= 1
        rng, _ = rng_split(rng)
        return g.run(size, rng)

    return Generator(run)


def _zigzag(x: int) -> int:
    return 2 * x if x >= 0 else -2 * x - 1


def coarb_int(x: int, g: Generator[B]) -> Generator[B]:
    return variant(_zigzag(x), g)


def coarb_bool(x: bool, g: Generator[B]) -> Generator[B]:
    return variant(1 if x else 0, g)


def coarb_unit(x: tuple, g: Generator[B]) -> Generator[B]:
    return variant(0, g)


@dataclass(frozen=True)
class Coarbitrary(Generic[A]):
    """A way of perturbing any generator by a value of type A"""

    perturb: Callable[[A, Generator[Any]], Generator[Any]]


COARB_INT: Coarbitrary[int] = Coarbitrary(coarb_int)
COARB_BOOL: Coarbitrary[bool] = Coarbitrary(coarb_bool)
COARB_UNIT: Coarbitrary[tuple] = Coarbitrary(coarb_unit)


def coarb_pair(ca: Coarbitrary[A], cb: Coarbitrary[B]) -> Coarbitrary[tuple[A, B]]:
    return Coarbitrary(lambda pair, g: ca.perturb(pair[0], cb.perturb(pair[1], g)))


@dataclass(frozen=True)
class GeneratedFn(Generic[A, B]):
    """A total function produced by gen_function, with what it was built from"""

    apply: Callable[[A], B] = field(repr=False)
    size: int
    rng: RngState
    codomain: Generator[B] = field(repr=False)

    def __call__(self, x: A) -> B:
        return self.apply(x)


def gen_function(ca: Coarbitrary[A], g: Generator[B]) -> Generator[GeneratedFn[A, B]]:
    """Generate a function by perturbing g with each input (promote)"""

    def run(size: int, rng: RngState) -> GeneratedFn[A, B]:
        return GeneratedFn(lambda x: ca.perturb(x, g).run(size, rng), size, rng, g)

    return Generator(run)


def coarb_function(arb_domain: Generator[A], cb: Coarbitrary[B]) -> Coarbitrary[GeneratedFn[A, B]]:
    """Perturb by a function: draw a domain value, apply, perturb by the result"""
    return Coarbitrary(lambda fn, g: gen_bind(arb_domain, lambda a: cb.perturb(fn(a), g)))
