"""
Stop-and-wait ARQ model

A sender transmits a numbered packet, waits for the network to deliver an
acknowledgement, and either proceeds to the next sequence number (ack
matches) or retries (wrong ack or timeout). The network is unreliable:
replies time out 20% of the time and carry an arbitrary ack number 5% of
the time.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ismcheck.config import get_settings
from ismcheck.errors import GuardViolation, UsageError
from ismcheck.gen import Generator, gen_choose, gen_frequency, gen_map, gen_pure
from ismcheck.ism import Call, Emit, Hole, IsmModel, Operation, OpRes, Program, Return, const, do, sequence, trace_states

PAYLOAD = 255

# Weights of Timeout, an arbitrary ack, and the expected ack out of Waiting
WAIT_WEIGHTS = (4, 1, 15)

KIND = "ARQOp"


@dataclass(frozen=True)
class Ready:
    sn: int

    def __str__(self) -> str:
        return f"Ready {self.sn}"


@dataclass(frozen=True)
class Waiting:
    sn: int

    def __str__(self) -> str:
        return f"Waiting {self.sn}"


@dataclass(frozen=True)
class Acked:
    sn: int
    ack: int

    def __str__(self) -> str:
        return f"Acked {self.sn} {self.ack}"


ArqState = Union[Ready, Waiting, Acked]


@dataclass(frozen=True)
class Pkt:
    pl: int
    sn: int

    def __post_init__(self):
        if not 0 <= self.pl <= 255:
            raise UsageError(f"payload must fit in 8 bits, got {self.pl}")
        if self.sn < 0:
            raise UsageError(f"sequence number must be non-negative, got {self.sn}")

    def __str__(self) -> str:
        return f"MkPkt {self.pl} {self.sn}"


@dataclass(frozen=True)
class Ack:
    n: int

    def __str__(self) -> str:
        return f"Ack {self.n}"


class _Timeout:
    def __str__(self) -> str:
        return "Timeout"

    def __repr__(self) -> str:
        return "TIMEOUT"


TIMEOUT = _Timeout()

WaitRes = Union[Ack, _Timeout]


@dataclass(frozen=True)
class Send:
    pkt: Pkt

    def __str__(self) -> str:
        return f"Send ({self.pkt})"


@dataclass(frozen=True)
class Wait:
    def __str__(self) -> str:
        return "Wait"


@dataclass(frozen=True)
class Proceed:
    def __str__(self) -> str:
        return "Proceed"


@dataclass(frozen=True)
class Retry:
    def __str__(self) -> str:
        return "Retry"


def next_fn(n: int, r: WaitRes) -> ArqState:
    if isinstance(r, Ack):
        return Acked(n, r.n)
    return Ready(n)


# Operations

def send(pkt: Pkt) -> Operation:
    return Operation(KIND, Send(pkt), Ready(pkt.sn), lambda st, r: Waiting(pkt.sn), ((),))


def wait() -> Operation:
    return Operation(KIND, Wait(), Waiting(Hole("n")), lambda st, r: next_fn(st.sn, r))


def proceed(acked: Acked) -> Operation:
    """Only constructible when the ack matches the sequence number"""
    if acked.ack != acked.sn:
        raise GuardViolation(f"Proceed needs ack == sn, got {acked}")
    return Operation(KIND, Proceed(), acked, lambda st, r: Ready(st.sn + 1), ((),))


def retry(acked: Acked) -> Operation:
    """Only constructible when the ack does not match"""
    if acked.ack == acked.sn:
        raise GuardViolation(f"Retry needs ack != sn, got {acked}")
    return Operation(KIND, Retry(), acked, lambda st, r: Ready(st.sn), ((),))


def decide(acked: Acked) -> Operation:
    return proceed(acked) if acked.ack == acked.sn else retry(acked)


class ArqModel(IsmModel):
    """ARQ over an unreliable network

    `ack_range` bounds the arbitrary ack numbers the network invents.
    `unbounded_acks` only changes the declared weights: the oracle then
    treats an arbitrary ack as never matching, as if drawn from an
    infinite domain.
    """

    kind = KIND

    def __init__(self, ack_range: Optional[tuple[int, int]] = None, unbounded_acks: bool = False):
        if ack_range is None:
            ack_range = (0, get_settings().nat_max)
        lo, hi = ack_range
        if lo < 0 or lo > hi:
            raise UsageError(f"invalid ack range {ack_range}")
        self.ack_range = (lo, hi)
        self.unbounded_acks = unbounded_acks
        self.name = "arq-unbounded" if unbounded_acks else "arq"

    def __repr__(self) -> str:
        return f"ArqModel(ack_range={self.ack_range}, unbounded_acks={self.unbounded_acks})"

    def options(self, state: ArqState) -> Optional[Generator[OpRes]]:
        if isinstance(state, Ready):
            return gen_pure(OpRes(send(Pkt(PAYLOAD, state.sn)), (), state))
        if isinstance(state, Waiting):
            op = wait()
            timeout, arbitrary, expected = WAIT_WEIGHTS
            return gen_frequency([
                (timeout, gen_pure(OpRes(op, TIMEOUT, state))),
                (arbitrary, gen_map(gen_choose(*self.ack_range), lambda a: OpRes(op, Ack(a), state))),
                (expected, gen_pure(OpRes(op, Ack(state.sn), state))),
            ])
        if isinstance(state, Acked):
            return gen_pure(OpRes(decide(state), (), state))
        return None

    def matching_ack_chance(self, k: int) -> Fraction:
        """Probability that an arbitrary ack equals k"""
        lo, hi = self.ack_range
        if self.unbounded_acks or not lo <= k <= hi:
            return Fraction(0)
        return Fraction(1, hi - lo + 1)

    def transition_weights(self, state: ArqState) -> list[tuple[Fraction, ArqState]]:
        if isinstance(state, Ready):
            return [(Fraction(1), Waiting(state.sn))]
        if isinstance(state, Waiting):
            k = state.sn
            total = sum(WAIT_WEIGHTS)
            timeout, arbitrary, expected = WAIT_WEIGHTS
            hit = self.matching_ack_chance(k)
            # Every non-matching ack leads to a Retry, so one stands for all
            rows = [
                (Fraction(timeout, total), next_fn(k, TIMEOUT)),
                (Fraction(expected, total) + Fraction(arbitrary, total) * hit, next_fn(k, Ack(k))),
                (Fraction(arbitrary, total) * (1 - hit), next_fn(k, Ack(k + 1))),
            ]
            return [(p, s) for p, s in rows if p > 0]
        if isinstance(state, Acked):
            return [(Fraction(1), decide(state).transition(state, ()))]
        return []


ARQ = ArqModel()
ARQ_UNBOUNDED = ArqModel(unbounded_acks=True)


def prop_send_three_ok(t) -> bool:
    return Ready(3) in trace_states(t)


# Programs

def send_n(n: int) -> Program:
    """Deliver packet n, resending until it is acknowledged

    Runs forever if the network never acknowledges; the interpreter's fuel
    bounds it.
    """

    def on_reply(result: WaitRes):
        if isinstance(result, Ack):
            acked = Acked(n, result.n)
            if result.n == n:
                return do(proceed(acked), Return())
            return do(retry(acked), lambda: Call(send_n(n)))
        return Call(send_n(n))

    def body():
        return do(send(Pkt(PAYLOAD, n)), Emit(wait(), on_reply))

    return Program(Ready(n), const(Ready(n + 1)), body, name=f"sendN {n}")


def send_sequence(start: int, count: int) -> Program:
    if count < 1:
        raise UsageError(f"send_sequence needs at least one packet, got {count}")
    return sequence(*(send_n(start + i) for i in range(count)))


def bad_send_prog() -> Program:
    """sendN 1 run from Ready 0"""
    return Program(Ready(0), const(Ready(2)), Call(send_n(1)), name="bad")
