"""
ATM model

Two variants share the same states and commands. The buggy one lets a
card holder retry their PIN forever; the fixed one counts retries in the
CardInserted state and returns the card after the third wrong PIN.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Optional, Union

from ismcheck.gen import Generator, arbitrary_nat, gen_frequency, gen_map, gen_oneof, gen_pure
from ismcheck.ism import (
    ANY_STATE,
    Emit,
    Hole,
    IsmModel,
    Operation,
    OpRes,
    Pending,
    Program,
    Call,
    const,
    do,
    trace_states,
)

ARB_PIN = 0
INITIAL_RETRIES = 2

# Weights of Correct, Incorrect and Eject out of CardInserted
CARD_WEIGHTS = (1, 4, 1)


@dataclass(frozen=True)
class Ready:
    def __str__(self) -> str:
        return "Ready"


@dataclass(frozen=True)
class Session:
    def __str__(self) -> str:
        return "Session"


@dataclass(frozen=True)
class CardInserted:
    """Card in the machine; `retries` is None in the buggy model"""

    retries: Any = None

    def __str__(self) -> str:
        if self.retries is None:
            return "CardInserted"
        return f"CardInserted {self.retries}"


AtmState = Union[Ready, CardInserted, Session]


class PinOk(Enum):
    CORRECT = "Correct"
    INCORRECT = "Incorrect"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Insert:
    def __str__(self) -> str:
        return "Insert"


@dataclass(frozen=True)
class CheckPIN:
    pin: int

    def __str__(self) -> str:
        return f"CheckPIN {self.pin}"


@dataclass(frozen=True)
class Dispense:
    amount: int

    def __str__(self) -> str:
        return f"Dispense {self.amount}"


@dataclass(frozen=True)
class Eject:
    def __str__(self) -> str:
        return "Eject"


def chk_pin_fn_buggy(r: PinOk) -> AtmState:
    return Session() if r is PinOk.CORRECT else CardInserted()


def chk_pin_fn_fixed(retries: int, r: PinOk) -> AtmState:
    if r is PinOk.CORRECT:
        return Session()
    if retries == 0:
        return Ready()
    return CardInserted(retries - 1)


UNIT = ((),)
PIN_RESULTS = (PinOk.CORRECT, PinOk.INCORRECT)


class AtmModel(IsmModel):
    kind = "ATMOp"

    def __init__(self, fixed: bool = False):
        self.fixed = fixed
        self.name = "atm-fixed" if fixed else "atm-buggy"

    def __repr__(self) -> str:
        return f"AtmModel(fixed={self.fixed})"

    def card_inserted(self) -> CardInserted:
        """The state Insert leads to"""
        return CardInserted(INITIAL_RETRIES) if self.fixed else CardInserted()

    # Operations

    def insert(self) -> Operation:
        entered = self.card_inserted()
        return Operation(self.kind, Insert(), Ready(), lambda st, r: entered, UNIT)

    def check_pin(self, pin: int) -> Operation:
        if self.fixed:
            return Operation(
                self.kind,
                CheckPIN(pin),
                CardInserted(Hole("tries")),
                lambda st, r: chk_pin_fn_fixed(st.retries, r),
                PIN_RESULTS,
            )
        return Operation(self.kind, CheckPIN(pin), CardInserted(), lambda st, r: chk_pin_fn_buggy(r), PIN_RESULTS)

    def dispense(self, amount: int) -> Operation:
        return Operation(self.kind, Dispense(amount), Session(), lambda st, r: Session(), UNIT)

    def eject(self) -> Operation:
        return Operation(self.kind, Eject(), ANY_STATE, lambda st, r: Ready(), UNIT)

    # Generation

    def options(self, state: AtmState) -> Optional[Generator[OpRes]]:
        # Eject from Ready is allowed by the model but never generated
        if isinstance(state, Ready):
            return gen_pure(OpRes(self.insert(), (), state))
        if isinstance(state, CardInserted):
            check = self.check_pin(ARB_PIN)
            correct, incorrect, eject = CARD_WEIGHTS
            return gen_frequency([
                (correct, gen_pure(OpRes(check, PinOk.CORRECT, state))),
                (incorrect, gen_pure(OpRes(check, PinOk.INCORRECT, state))),
                (eject, gen_pure(OpRes(self.eject(), (), state))),
            ])
        if isinstance(state, Session):
            return gen_oneof([
                gen_map(arbitrary_nat(), lambda amount: OpRes(self.dispense(amount), (), state)),
                gen_pure(OpRes(self.eject(), (), state)),
            ])
        return None

    def transition_weights(self, state: AtmState) -> list[tuple[Fraction, AtmState]]:
        if isinstance(state, Ready):
            return [(Fraction(1), self.insert().transition(state, ()))]
        if isinstance(state, CardInserted):
            total = sum(CARD_WEIGHTS)
            check = self.check_pin(ARB_PIN)
            correct, incorrect, eject = CARD_WEIGHTS
            return [
                (Fraction(correct, total), check.transition(state, PinOk.CORRECT)),
                (Fraction(incorrect, total), check.transition(state, PinOk.INCORRECT)),
                (Fraction(eject, total), Ready()),
            ]
        if isinstance(state, Session):
            return [(Fraction(1, 2), Session()), (Fraction(1, 2), Ready())]
        return []


ATM_BUGGY = AtmModel(fixed=False)
ATM_FIXED = AtmModel(fixed=True)


# Properties

def prop_ready_insert(t) -> bool:
    """A single step from Ready ends with the card inserted"""
    if t.bound != 1 or len(t.steps) != 1:
        return False
    return isinstance(t.steps[0].result_state, CardInserted)


def prop_eventually_ready(t) -> bool:
    return Ready() in trace_states(t)


# Programs

def test_prog(model: AtmModel = ATM_BUGGY) -> Program:
    """Insert, check the PIN, and on success take 42 and leave"""
    body = do(
        model.insert(),
        Emit(model.check_pin(1234), {
            PinOk.CORRECT: lambda: do(model.dispense(42), do(model.eject())),
            PinOk.INCORRECT: Pending("handle_incorrect"),
        }),
    )
    return Program(Ready(), const(Ready()), body, name="testProg")


def bad_prog(model: AtmModel = ATM_BUGGY) -> Program:
    """Dispenses before the PIN was checked"""
    body = do(model.insert(), do(model.dispense(42)))
    return Program(Ready(), const(Ready()), body, name="badProg")


def loop_prog(model: AtmModel = ATM_BUGGY, pin: int = 4321) -> Program:
    """Insert, then guess the same PIN until something gives"""
    loop_start = CardInserted(Hole("tries")) if model.fixed else CardInserted()

    def loop() -> Program:
        return Program(
            loop_start,
            const(Ready()),
            lambda: Emit(model.check_pin(pin), {
                PinOk.INCORRECT: lambda: Call(loop()),
                PinOk.CORRECT: Pending("omitted"),
            }),
            name="loop",
        )

    return Program(Ready(), const(Ready()), do(model.insert(), lambda: Call(loop())), name="loopProg")


NO_LOOP_PINS = (1234, 1243, 1432, 4231)


def no_loop_prog(model: AtmModel = ATM_FIXED) -> Program:
    """Four wrong PINs in a row

    Only valid in the buggy model: the fixed model returns the card after
    the third, so the fourth CheckPIN runs from Ready.
    """

    def attempt(i: int):
        if i == len(NO_LOOP_PINS):
            return Pending("noLoop_rhs")
        return Emit(model.check_pin(NO_LOOP_PINS[i]), {
            PinOk.INCORRECT: lambda: attempt(i + 1),
            PinOk.CORRECT: Pending(f"noLoop_rhs_{i + 1}"),
        })

    return Program(Ready(), const(Ready()), do(model.insert(), lambda: attempt(0)), name="noLoop")
