"""
Indexed state machine core

Models describe their operations with Operation descriptors that carry the
next-state function, so generated traces and interpreted programs use
exactly the transitions the model declares. This module holds the trace
data model, the trace generator, the program interpreter and the trace
renderer.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, fields, is_dataclass
from fractions import Fraction
from typing import Any, Callable, Mapping, Optional, Sequence, Union

from ismcheck.config import get_settings
from ismcheck.errors import (
    FuelExhausted,
    GenerationError,
    ProgramDefinitionError,
    ProgramHoleReached,
    TraceInvariantError,
    TransitionMismatch,
)
from ismcheck.gen import Generator
from ismcheck.prng import RngState, rng_new, rng_split

logger = logging.getLogger(__name__)

StateVal = Any


@dataclass(frozen=True)
class Hole:
    """A named placeholder in a state pattern; matches any value"""

    name: str
    is_hole = True

    def __str__(self) -> str:
        return f"?{self.name}"


class _AnyState:
    is_hole = True

    def __str__(self) -> str:
        return "?st"

    def __repr__(self) -> str:
        return "ANY_STATE"


ANY_STATE = _AnyState()


def state_matches(pattern: Any, state: StateVal) -> bool:
    """Structural match where holes accept anything"""
    if getattr(pattern, "is_hole", False):
        return True
    if is_dataclass(pattern) and not isinstance(pattern, type):
        if type(pattern) is not type(state):
            return False
        return all(state_matches(getattr(pattern, f.name), getattr(state, f.name)) for f in fields(pattern))
    return pattern == state


def is_concrete(state: Any) -> bool:
    if getattr(state, "is_hole", False):
        return False
    if is_dataclass(state) and not isinstance(state, type):
        return all(is_concrete(getattr(state, f.name)) for f in fields(state))
    return True


@dataclass(frozen=True)
class Operation:
    """An operation descriptor

    `command` is the model's payload (what gets rendered), `source` the
    state the operation may start from (concrete, a pattern with holes, or
    ANY_STATE), and `transition` maps (from_state, result) to the next state.
    `results` lists the finite result domain, or is None when it is open.
    """

    kind: str
    command: Any
    source: Any
    transition: Callable[[StateVal, Any], StateVal] = field(repr=False, compare=False)
    results: Optional[tuple] = None

    def accepts(self, state: StateVal) -> bool:
        return state_matches(self.source, state)

    def __str__(self) -> str:
        return str(self.command)


@dataclass(frozen=True)
class OpRes:
    """An executed operation together with the result it produced"""

    op: Operation
    result: Any
    from_state: StateVal

    def __post_init__(self):
        if not self.op.accepts(self.from_state):
            raise TransitionMismatch(self.op.source, self.from_state, op=self.op)

    def next_state_fn(self, result: Any) -> StateVal:
        return self.op.transition(self.from_state, result)

    def __str__(self) -> str:
        return f"<{self.op.kind} '{self.op.command} ~ {_render_result(self.result)}'>"


def _render_result(result: Any) -> str:
    return "()" if result == () else str(result)


@dataclass(frozen=True)
class TraceStep:
    op_res: OpRes
    result_state: StateVal

    def __post_init__(self):
        expected = self.op_res.next_state_fn(self.op_res.result)
        if expected != self.result_state:
            raise TraceInvariantError(
                f"step {self.op_res} claims {self.result_state}, but its next-state function gives {expected}"
            )

    def __str__(self) -> str:
        return f"({self.op_res}, {self.result_state})"


@dataclass(frozen=True)
class Trace:
    init_state: StateVal
    bound: int
    steps: tuple[TraceStep, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if len(self.steps) != self.bound:
            raise TraceInvariantError(f"trace has {len(self.steps)} steps but bound {self.bound}")
        current = self.init_state
        for i, step in enumerate(self.steps):
            if step.op_res.from_state != current:
                raise TraceInvariantError(
                    f"step {i} starts from {step.op_res.from_state}, but the trace is at {current}"
                )
            current = step.result_state

    @property
    def final_state(self) -> StateVal:
        return self.steps[-1].result_state if self.steps else self.init_state


class IsmModel(ABC):
    """A stateful model: per-state option generators plus rendering hooks"""

    name: str = "model"
    kind: str = "Op"

    @abstractmethod
    def options(self, state: StateVal) -> Optional[Generator[OpRes]]:
        """Generator of valid operations out of `state`, or None if there are none"""

    def transition_weights(self, state: StateVal) -> Sequence[tuple[Fraction, StateVal]]:
        """Exact successor distribution of the option generator, for the oracle"""
        raise NotImplementedError(f"{self.name} does not declare option weights")

    def render_state(self, state: StateVal) -> str:
        return str(state)

    def render_op_res(self, op_res: OpRes) -> str:
        return str(op_res)


def gen_trace(model: IsmModel, init: StateVal, bound: int) -> Generator[Trace]:
    """Generate a bound-step trace from init by following model.options

    Equivalent to the recursive definition
        trace 0 st = pure []
        trace k st = do op <- options st; rest <- trace (k-1) (next op); pure (op :: rest)
    unrolled into a loop so deep bounds do not recurse.
    """
    if bound < 0:
        raise ProgramDefinitionError(f"trace bound must be non-negative, got {bound}")

    def run(size: int, rng: RngState) -> Trace:
        state = init
        steps = []
        for _ in range(bound):
            head, rng = rng_split(rng)
            options = model.options(state)
            if options is None:
                raise GenerationError(f"{model.name}: no options from state {model.render_state(state)}")
            op_res = options.run(size, head)
            if op_res.from_state != state:
                raise GenerationError(
                    f"{model.name}: options({state}) produced an operation from {op_res.from_state}"
                )
            step = TraceStep(op_res, op_res.next_state_fn(op_res.result))
            steps.append(step)
            state = step.result_state
        return Trace(init, bound, tuple(steps))

    return Generator(run)


def trace_states(t: Trace) -> list[StateVal]:
    return [step.result_state for step in t.steps]


def render_trace(model: IsmModel, t: Trace) -> str:
    lines = [f"Starting @ {model.render_state(t.init_state)}:"]
    if not t.steps:
        lines.append("[]")
        return "\n".join(lines)
    for i, step in enumerate(t.steps):
        prefix = "[ " if i == 0 else ", "
        lines.append(f"{prefix}({model.render_op_res(step.op_res)}, {model.render_state(step.result_state)})")
    lines.append("]")
    return "\n".join(lines)


# Programs

@dataclass(frozen=True)
class Return:
    value: Any = ()


@dataclass(frozen=True)
class Pending:
    """A branch left unwritten; reaching it is an error"""

    name: str


@dataclass(frozen=True)
class Emit:
    """Run an operation, then continue with the handler for its result

    `handlers` is either a mapping from each possible result to the next
    step, or a callable taking the result. Mapping values may be zero-arg
    callables so recursive programs are built lazily.
    """

    op: Operation
    handlers: Union[Mapping[Any, Any], Callable[[Any], "Step"]]

    def __post_init__(self):
        if isinstance(self.handlers, Mapping) and self.op.results is not None:
            missing = [r for r in self.op.results if r not in self.handlers]
            if missing:
                names = ", ".join(str(r) for r in missing)
                raise ProgramDefinitionError(f"'{self.op}' does not handle result(s): {names}")

    def continue_with(self, result: Any) -> "Step":
        if isinstance(self.handlers, Mapping):
            if result not in self.handlers:
                raise ProgramDefinitionError(f"'{self.op}' has no handler for result {result}")
            return _force(self.handlers[result])
        return self.handlers(result)


@dataclass(frozen=True)
class Call:
    """Run a sub-program, then continue with `then(value)` (or return its value)"""

    program: "Program"
    then: Optional[Callable[[Any], "Step"]] = None


Step = Union[Emit, Return, Pending, Call]


def _force(step: Any) -> "Step":
    if isinstance(step, (Emit, Return, Pending, Call)):
        return step
    if callable(step):
        return step()
    raise ProgramDefinitionError(f"not a program step: {step!r}")


def do(op: Operation, then: Any = None) -> Emit:
    """Run an operation whose result is ignored, then continue"""
    then = Return() if then is None else then
    return Emit(op, lambda _result: _force(then))


@dataclass(frozen=True)
class Program:
    """A script declared to run from start_state to final_state(value)"""

    start_state: Any
    final_state: Callable[[Any], Any] = field(repr=False)
    body: Any = field(repr=False)
    name: str = "prog"

    def entry(self) -> Step:
        return _force(self.body)

    def then(self, nxt: "Program") -> "Program":
        return Program(
            self.start_state,
            nxt.final_state,
            Call(self, lambda _value: Call(nxt)),
            name=f"{self.name}; {nxt.name}",
        )


def const(state: Any) -> Callable[[Any], Any]:
    return lambda _value: state


def sequence(*programs: Program) -> Program:
    if not programs:
        raise ProgramDefinitionError("sequence needs at least one program")
    composed = programs[0]
    for nxt in programs[1:]:
        composed = composed.then(nxt)
    return composed


Env = Callable[[Operation, StateVal], Any]


class ScriptedEnv:
    """Answers operations from a fixed list of results

    Operations whose only result is () are answered without consuming the
    script.
    """

    def __init__(self, results: Sequence[Any], cycle: bool = False):
        self.results = list(results)
        self.cycle = cycle
        self.position = 0

    def __call__(self, op: Operation, state: StateVal) -> Any:
        if op.results == ((),):
            return ()
        if self.position >= len(self.results):
            if not self.cycle or not self.results:
                raise ProgramDefinitionError(f"script ran out of results at '{op}' in {state}")
            self.position = 0
        result = self.results[self.position]
        self.position += 1
        return result


class ModelEnv:
    """Answers operations by sampling the model's own option distribution

    Samples are restricted to options built from the same command
    constructor as the emitted operation.
    Operations whose only result is () are answered without sampling.
    """

    def __init__(self, model: IsmModel, seed: int, size: Optional[int] = None, attempts: int = 1000):
        self.model = model
        self.rng = rng_new(seed)
        self.size = get_settings().size if size is None else size
        self.attempts = attempts

    def __call__(self, op: Operation, state: StateVal) -> Any:
        if op.results == ((),):
            return ()
        options = self.model.options(state)
        if options is None:
            raise GenerationError(f"{self.model.name}: no options from state {state}")
        for _ in range(self.attempts):
            self.rng, sample = rng_split(self.rng)
            candidate = options.run(self.size, sample)
            if type(candidate.op.command) is type(op.command):
                return candidate.result
        raise GenerationError(f"{self.model.name}: options from {state} never produce '{op}'")


@dataclass(frozen=True)
class ProgramRun:
    final_state: StateVal
    value: Any
    trace: Trace


def _partial_trace(init: StateVal, steps: list[TraceStep]) -> Trace:
    return Trace(init, len(steps), tuple(steps))


def run_program(model: IsmModel, prog: Program, env: Env, fuel: Optional[int] = None) -> ProgramRun:
    """Interpret a program, checking every transition against the model

    Each operation must accept the current state and each (sub-)program
    must end in the state it declared, otherwise TransitionMismatch is
    raised. Every Emit and Call consumes one unit of fuel; running out
    raises FuelExhausted.
    """
    fuel = get_settings().fuel if fuel is None else fuel
    if not is_concrete(prog.start_state):
        raise ProgramDefinitionError(f"program start state {prog.start_state} is not concrete")

    init = state = prog.start_state
    steps: list[TraceStep] = []
    frames: list[tuple[Program, Optional[Callable[[Any], Step]]]] = []
    current = prog
    step = prog.entry()
    used = 0

    while True:
        if isinstance(step, Return):
            expected = current.final_state(step.value)
            if not state_matches(expected, state):
                raise TransitionMismatch(expected, state, trace=_partial_trace(init, steps))
            if not frames:
                logger.debug("%s returned %r in %s after %d steps", prog.name, step.value, state, len(steps))
                return ProgramRun(state, step.value, _partial_trace(init, steps))
            current, then = frames.pop()
            step = then(step.value) if then is not None else Return(step.value)
            continue

        if isinstance(step, Pending):
            raise ProgramHoleReached(step.name, state)

        used += 1
        if used > fuel:
            logger.warning("%s exhausted its fuel (%d) in %s", prog.name, fuel, state)
            raise FuelExhausted(fuel, trace=_partial_trace(init, steps))

        if isinstance(step, Call):
            sub = step.program
            if not state_matches(sub.start_state, state):
                raise TransitionMismatch(sub.start_state, state, op=sub.name, trace=_partial_trace(init, steps))
            frames.append((current, step.then))
            current = sub
            step = sub.entry()
            continue

        if isinstance(step, Emit):
            op = step.op
            if not op.accepts(state):
                raise TransitionMismatch(op.source, state, op=op, trace=_partial_trace(init, steps))
            result = env(op, state)
            if op.results is not None and result not in op.results:
                raise ProgramDefinitionError(f"environment answered {result!r}, not a result of '{op}'")
            op_res = OpRes(op, result, state)
            trace_step = TraceStep(op_res, op_res.next_state_fn(result))
            steps.append(trace_step)
            state = trace_step.result_state
            step = step.continue_with(result)
            continue

        raise ProgramDefinitionError(f"not a program step: {step!r}")
