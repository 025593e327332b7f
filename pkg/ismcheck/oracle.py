"""
Exact visit probabilities

A model that declares its option weights induces a finite Markov chain
up to any depth. Dynamic programming over that chain gives the exact
probability that a random trace visits a target state, which is what the
empirical QuickCheck outcomes are judged against.
"""

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional

from ismcheck.errors import OracleError, UsageError
from ismcheck.gen import gen_sample
from ismcheck.ism import IsmModel, StateVal, gen_trace, trace_states
from ismcheck.prng import rng_new

logger = logging.getLogger(__name__)

Target = Callable[[StateVal], bool]


@dataclass(frozen=True)
class MarkovView:
    """Transition kernel of a model, truncated at `depth` steps from init

    Only states reached in fewer than `depth` steps have a row.
    """

    init: StateVal
    depth: int
    states: frozenset
    transitions: dict

    def row(self, state: StateVal) -> list[tuple[Fraction, StateVal]]:
        try:
            return self.transitions[state]
        except KeyError:
            raise OracleError(f"state {state} is outside the view (depth {self.depth} from {self.init})") from None


def _merge(row) -> list[tuple[Fraction, StateVal]]:
    merged: dict = {}
    for p, s in row:
        merged[s] = merged.get(s, Fraction(0)) + Fraction(p)
    return [(p, s) for s, p in merged.items()]


def markov_view(model: IsmModel, init: StateVal, depth: int) -> MarkovView:
    if depth < 0:
        raise UsageError(f"depth must be non-negative, got {depth}")

    transitions: dict = {}
    seen = {init}
    frontier = deque([(init, 0)])
    while frontier:
        state, distance = frontier.popleft()
        if distance >= depth:
            continue
        try:
            declared = model.transition_weights(state)
        except NotImplementedError as e:
            raise OracleError(str(e)) from e
        row = _merge(declared)
        if not row:
            raise OracleError(f"{model.name}: no transitions declared for {state}")
        total = sum(p for p, _ in row)
        if total != 1:
            raise OracleError(f"{model.name}: weights out of {state} sum to {total}")
        transitions[state] = row
        for _, nxt in row:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append((nxt, distance + 1))

    logger.debug("Markov view of %s from %s: %d states, %d rows", model.name, init, len(seen), len(transitions))
    return MarkovView(init, depth, frozenset(seen), transitions)


def _check_depth(mv: MarkovView, init: StateVal, depth: int):
    if depth < 0:
        raise UsageError(f"depth must be non-negative, got {depth}")
    if depth > mv.depth:
        raise OracleError(f"depth {depth} exceeds the view's depth {mv.depth}")


def visit_probability(mv: MarkovView, init: StateVal, target: Target, depth: int) -> Fraction:
    """Chance that a depth-step trajectory from init visits a target state

    Only step result states count; init itself is never a visit.
    """
    _check_depth(mv, init, depth)
    unvisited = {init: Fraction(1)}
    visited = Fraction(0)
    for _ in range(depth):
        nxt: dict = {}
        for state, mass in unvisited.items():
            for p, succ in mv.row(state):
                if target(succ):
                    visited += mass * p
                else:
                    nxt[succ] = nxt.get(succ, Fraction(0)) + mass * p
        unvisited = nxt
    return visited


def enumerate_paths(mv: MarkovView, init: StateVal, depth: int) -> Iterator[tuple[Fraction, list[StateVal]]]:
    """Every weighted path of exactly `depth` steps, with its result states"""
    _check_depth(mv, init, depth)

    def walk(state, remaining, prob, path):
        if remaining == 0:
            yield prob, path
            return
        for p, succ in mv.row(state):
            yield from walk(succ, remaining - 1, prob * p, path + [succ])

    yield from walk(init, depth, Fraction(1), [])


def brute_force_visit_probability(mv: MarkovView, init: StateVal, target: Target, depth: int) -> Fraction:
    return sum(
        (prob for prob, path in enumerate_paths(mv, init, depth) if any(target(s) for s in path)),
        Fraction(0),
    )


def sample_visit_frequency(
    model: IsmModel,
    init: StateVal,
    target: Target,
    depth: int,
    samples: int,
    seed: int,
) -> Fraction:
    """Fraction of generated traces that visit a target state"""
    if samples < 1:
        raise UsageError(f"need at least one sample, got {samples}")
    traces = gen_sample(gen_trace(model, init, depth), rng_new(seed), samples)
    hits = sum(1 for t in traces if any(target(s) for s in trace_states(t)))
    return Fraction(hits, samples)


def falsification_chance(p_fail, tests: int) -> Fraction:
    """Chance that `tests` independent tests find at least one failure"""
    if tests < 0:
        raise UsageError(f"test count must be non-negative, got {tests}")
    p_fail = Fraction(p_fail)
    if not 0 <= p_fail <= 1:
        raise UsageError(f"probability out of range: {p_fail}")
    return 1 - (1 - p_fail) ** tests


def suggest_bound(
    model: IsmModel,
    init: StateVal,
    target: Target,
    threshold,
    max_depth: int = 64,
) -> Optional[int]:
    """Smallest depth whose visit probability reaches `threshold`

    Doubles the depth until the threshold is met, then bisects between the
    last two candidates. Returns None if even max_depth falls short.
    """
    threshold = Fraction(threshold)
    if not 0 < threshold <= 1:
        raise UsageError(f"threshold must be in (0, 1], got {threshold}")
    if max_depth < 1:
        raise UsageError(f"max_depth must be positive, got {max_depth}")

    mv = markov_view(model, init, max_depth)

    def reaches(d: int) -> bool:
        return visit_probability(mv, init, target, d) >= threshold

    lo, hi = 0, 1
    while not reaches(hi):
        if hi == max_depth:
            logger.info("No depth up to %d reaches %s", max_depth, threshold)
            return None
        lo, hi = hi, min(hi * 2, max_depth)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if reaches(mid):
            hi = mid
        else:
            lo = mid
    return hi
