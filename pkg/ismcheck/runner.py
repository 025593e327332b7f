"""
QuickCheck-style property runner

Test i draws its input from the i-th right branch of the seed's split
chain, so any reported counterexample can be regenerated from
(seed, test index) alone.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Generic, Optional, TypeVar

from pydantic import BaseModel, ConfigDict, Field

from ismcheck.config import DEFAULT_SEED, get_settings
from ismcheck.gen import Generator
from ismcheck.prng import MASK64, RngState, rng_new, rng_split

logger = logging.getLogger(__name__)

T = TypeVar("T")


class QcConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_tests: int = Field(default=100, ge=1)
    max_discards: int = Field(default=1000, ge=0)
    size: int = Field(default=30, ge=0)
    seed: int = Field(default=DEFAULT_SEED, ge=0, le=MASK64)

    @classmethod
    def from_settings(cls, **overrides) -> "QcConfig":
        settings = get_settings()
        values = {
            "max_tests": settings.max_tests,
            "max_discards": settings.max_discards,
            "size": settings.size,
            "seed": settings.seed & MASK64,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        values["seed"] &= MASK64
        return cls(**values)


@dataclass(frozen=True)
class Property(Generic[T]):
    """A predicate over generated inputs

    The predicate returns True or False, or None to discard the input.
    """

    input_gen: Generator[T]
    predicate: Callable[[T], Optional[bool]]
    render: Callable[[T], str] = field(default=repr)

    def when(self, condition: Callable[[T], bool]) -> "Property[T]":
        """Discard inputs that fail `condition`"""
        inner = self.predicate
        return Property(self.input_gen, lambda x: inner(x) if condition(x) else None, self.render)


def for_all(g: Generator[T], p: Callable[[T], bool], render: Callable[[T], str] = repr) -> Property[T]:
    return Property(g, lambda x: bool(p(x)), render)


class Verdict(str, Enum):
    PASSED = "passed"
    FALSIFIED = "falsified"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class QcResult:
    verdict: Verdict
    tests_run: int
    log: str
    discarded: int = 0
    seed: int = DEFAULT_SEED
    test_index: Optional[int] = None
    counterexample: Any = None


def test_rng(seed: int, index: int) -> RngState:
    """The RNG test number `index` (counting discards) draws from"""
    cursor = rng_new(seed)
    for _ in range(index + 1):
        cursor, rng = rng_split(cursor)
    return rng


def replay(cfg: QcConfig, prop: Property[T], index: int) -> T:
    """Regenerate the input of test `index`"""
    return prop.input_gen.run(cfg.size, test_rng(cfg.seed, index))


def quick_check(cfg: QcConfig, prop: Property[T]) -> QcResult:
    cursor = rng_new(cfg.seed)
    passed = 0
    discarded = 0
    index = 0
    while passed < cfg.max_tests:
        cursor, rng = rng_split(cursor)
        value = prop.input_gen.run(cfg.size, rng)
        try:
            outcome = prop.predicate(value)
        except Exception as e:
            log = f"Falsifiable, after {passed + 1} tests:\n{prop.render(value)}\nException: {type(e).__name__}: {e}"
            logger.info("Property raised on test %d: %s", index, e)
            return QcResult(Verdict.FALSIFIED, passed + 1, log, discarded, cfg.seed, index, value)

        if outcome is None:
            discarded += 1
            if discarded > cfg.max_discards:
                log = f"Gave up! Passed only {passed} tests; {discarded} discarded."
                logger.warning(log)
                return QcResult(Verdict.EXHAUSTED, passed, log, discarded, cfg.seed)
        elif not outcome:
            log = f"Falsifiable, after {passed + 1} tests:\n{prop.render(value)}"
            logger.info("Falsified on test %d (seed %d)", index, cfg.seed)
            return QcResult(Verdict.FALSIFIED, passed + 1, log, discarded, cfg.seed, index, value)
        else:
            passed += 1
            logger.debug("Test %d passed", index)
        index += 1

    return QcResult(Verdict.PASSED, passed, f"OK, passed {passed} tests", discarded, cfg.seed)


def check_bool(allow_exhaust: bool, r: QcResult) -> bool:
    if r.verdict is Verdict.EXHAUSTED:
        return allow_exhaust
    return r.verdict is Verdict.PASSED
