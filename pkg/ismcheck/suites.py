"""
Registered property suites and the services the CLI and HTTP API share
"""

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional

from ismcheck.config import get_settings
from ismcheck.errors import UsageError
from ismcheck.ism import IsmModel, StateVal, Trace, gen_trace, render_trace
from ismcheck.models import arq, atm
from ismcheck.oracle import (
    falsification_chance,
    markov_view,
    sample_visit_frequency,
    suggest_bound,
    visit_probability,
)
from ismcheck.reports import OracleReport, RunReport
from ismcheck.runner import Property, QcConfig, QcResult, Verdict, for_all, quick_check, replay

logger = logging.getLogger(__name__)

ALL = "all"


@dataclass(frozen=True)
class PropertySpec:
    name: str
    model: IsmModel
    init: StateVal
    bound: int
    predicate: Callable[[Trace], bool]
    # The property holds iff some result state satisfies target
    target: Optional[Callable[[StateVal], bool]] = None
    max_tests: int = 100
    description: str = ""
    # The predicate only makes sense at `bound` steps
    fixed_bound: bool = False

    def bound_for(self, depth: Optional[int]) -> int:
        if depth is None:
            return self.bound
        if depth < 0:
            raise UsageError(f"depth must be non-negative, got {depth}")
        if self.fixed_bound and depth != self.bound:
            raise UsageError(f"{self.name} is only defined for traces of {self.bound} step(s); got depth {depth}")
        return depth

    def prop(self, depth: Optional[int] = None) -> Property[Trace]:
        model = self.model
        return for_all(
            gen_trace(model, self.init, self.bound_for(depth)),
            self.predicate,
            render=lambda t: render_trace(model, t),
        )


@dataclass(frozen=True)
class SuiteSpec:
    name: str
    properties: tuple[PropertySpec, ...]
    oracle_variants: tuple[tuple[str, IsmModel], ...]

    def __post_init__(self):
        names = [p.name for p in self.properties]
        if len(names) != len(set(names)):
            raise ValueError(f"suite {self.name} has duplicate property names")

    def property(self, name: str) -> PropertySpec:
        for spec in self.properties:
            if spec.name == name:
                return spec
        known = ", ".join(p.name for p in self.properties)
        raise UsageError(f"unknown property '{name}' in suite {self.name} (known: {known})")

    def select(self, name: Optional[str]) -> List[PropertySpec]:
        if name is None or name == ALL:
            return list(self.properties)
        return [self.property(name)]


def _atm_suite(model: atm.AtmModel) -> SuiteSpec:
    return SuiteSpec(
        name=model.name,
        properties=(
            PropertySpec(
                "ready-insert",
                model,
                atm.Ready(),
                1,
                atm.prop_ready_insert,
                target=lambda s: isinstance(s, atm.CardInserted),
                description="one step from Ready inserts the card",
                fixed_bound=True,
            ),
            PropertySpec(
                "eventually-ready",
                model,
                atm.Ready(),
                10,
                atm.prop_eventually_ready,
                target=lambda s: s == atm.Ready(),
                description="ten steps from Ready pass through Ready again",
            ),
        ),
        oracle_variants=(("exact", model),),
    )


SUITES = {
    "atm-buggy": _atm_suite(atm.ATM_BUGGY),
    "atm-fixed": _atm_suite(atm.ATM_FIXED),
    "arq": SuiteSpec(
        name="arq",
        properties=(
            PropertySpec(
                "send-three-ok",
                arq.ARQ,
                arq.Ready(0),
                20,
                arq.prop_send_three_ok,
                target=lambda s: s == arq.Ready(3),
                description="twenty steps from Ready 0 deliver three packets",
            ),
        ),
        oracle_variants=(("range", arq.ARQ), ("unbounded", arq.ARQ_UNBOUNDED)),
    ),
}


def get_suite(name: str) -> SuiteSpec:
    try:
        return SUITES[name]
    except KeyError:
        known = ", ".join(SUITES)
        raise UsageError(f"unknown suite '{name}' (known: {known})") from None


@dataclass(frozen=True)
class PropertyRun:
    spec: PropertySpec
    bound: int
    result: QcResult
    report: RunReport


def run_property(
    suite: SuiteSpec,
    spec: PropertySpec,
    seed: Optional[int] = None,
    tests: Optional[int] = None,
    depth: Optional[int] = None,
) -> PropertyRun:
    bound = spec.bound_for(depth)
    if tests is not None and tests < 1:
        raise UsageError(f"tests must be positive, got {tests}")
    cfg = QcConfig.from_settings(seed=seed, max_tests=spec.max_tests if tests is None else tests)

    started = time.perf_counter()
    result = quick_check(cfg, spec.prop(bound))
    elapsed_ms = (time.perf_counter() - started) * 1000

    counterexample = None
    if result.verdict is Verdict.FALSIFIED:
        counterexample = render_trace(spec.model, result.counterexample)
    report = RunReport(
        suite=suite.name,
        property=spec.name,
        seed=cfg.seed,
        tests=result.tests_run,
        verdict=result.verdict.value,
        counterexample=counterexample,
        elapsed_ms=round(elapsed_ms, 3),
        test_index=result.test_index,
    )
    logger.info("%s/%s: %s after %d tests", suite.name, spec.name, result.verdict.value, result.tests_run)
    return PropertyRun(spec, bound, result, report)


def run_suite(
    suite_name: str,
    prop: Optional[str] = ALL,
    seed: Optional[int] = None,
    tests: Optional[int] = None,
    depth: Optional[int] = None,
) -> List[PropertyRun]:
    suite = get_suite(suite_name)
    return [run_property(suite, spec, seed, tests, depth) for spec in suite.select(prop)]


def _approx(p: Fraction) -> float:
    return round(float(p), 6)


def oracle_reports(
    suite_name: str,
    prop: Optional[str] = ALL,
    depth: Optional[int] = None,
    tests: int = 100,
) -> List[OracleReport]:
    suite = get_suite(suite_name)
    reports = []
    for spec in suite.select(prop):
        if spec.target is None:
            raise UsageError(f"{suite.name}/{spec.name} has no visit form for the oracle")
        d = spec.bound_for(depth)
        for variant, model in suite.oracle_variants:
            mv = markov_view(model, spec.init, d)
            visit = visit_probability(mv, spec.init, spec.target, d)
            fail = 1 - visit
            reports.append(OracleReport(
                suite=suite.name,
                property=spec.name,
                variant=variant,
                depth=d,
                tests=tests,
                visit_probability=str(visit),
                visit_approx=_approx(visit),
                counterexample_probability=str(fail),
                counterexample_approx=_approx(fail),
                falsification_chance=_approx(falsification_chance(fail, tests)),
            ))
            logger.info("Oracle %s/%s [%s] depth %d: visit %s", suite.name, spec.name, variant, d, visit)
    return reports


@dataclass(frozen=True)
class OracleAgreement:
    """Sampled visit frequency next to the exact oracle value"""

    suite: str
    property: str
    variant: str
    samples: int
    expected: Fraction
    observed: Fraction

    @property
    def sigmas(self) -> float:
        """Distance between observed and expected in binomial standard deviations"""
        p = self.expected
        sd = (float(p * (1 - p)) / self.samples) ** 0.5
        gap = abs(float(self.observed - p))
        if sd == 0:
            return 0.0 if gap == 0 else float("inf")
        return gap / sd


def sample_against_oracle(
    suite_name: str,
    prop: str,
    variant: Optional[str] = None,
    samples: int = 10_000,
    seed: Optional[int] = None,
) -> OracleAgreement:
    """Sample traces of the property's model and compare their visit rate with the oracle"""
    suite = get_suite(suite_name)
    spec = suite.property(prop)
    if spec.target is None:
        raise UsageError(f"{suite.name}/{spec.name} has no visit form for the oracle")
    variants = dict(suite.oracle_variants)
    name = variant or suite.oracle_variants[0][0]
    if name not in variants:
        raise UsageError(f"unknown oracle variant '{name}' (known: {', '.join(variants)})")

    mv = markov_view(variants[name], spec.init, spec.bound)
    expected = visit_probability(mv, spec.init, spec.target, spec.bound)
    seed = get_settings().seed if seed is None else seed
    observed = sample_visit_frequency(spec.model, spec.init, spec.target, spec.bound, samples, seed)
    agreement = OracleAgreement(suite.name, spec.name, name, samples, expected, observed)
    logger.info(
        "%s/%s [%s]: sampled %s vs exact %s (%.2f sigma)",
        suite.name, spec.name, name, observed, expected, agreement.sigmas,
    )
    return agreement


def replay_property(
    suite_name: str,
    prop: str,
    seed: int,
    index: int,
    depth: Optional[int] = None,
) -> tuple[Trace, bool]:
    """Regenerate the trace of test `index` and re-check the property on it"""
    if index < 0:
        raise UsageError(f"test index must be non-negative, got {index}")
    spec = get_suite(suite_name).property(prop)
    cfg = QcConfig.from_settings(seed=seed)
    trace = replay(cfg, spec.prop(depth), index)
    return trace, bool(spec.predicate(trace))


def suggest_property_bound(
    suite_name: str,
    prop: str,
    threshold: float,
    max_depth: int = 64,
    variant: Optional[str] = None,
) -> Optional[int]:
    suite = get_suite(suite_name)
    spec = suite.property(prop)
    if spec.target is None:
        raise UsageError(f"{suite.name}/{spec.name} has no visit form for the oracle")
    variants = dict(suite.oracle_variants)
    name = variant or suite.oracle_variants[0][0]
    if name not in variants:
        raise UsageError(f"unknown oracle variant '{name}' (known: {', '.join(variants)})")
    return suggest_bound(variants[name], spec.init, spec.target, Fraction(threshold).limit_denominator(10**9), max_depth)
