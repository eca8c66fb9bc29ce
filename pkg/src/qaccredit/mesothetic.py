"""Two-party (verifier/prover) session engine for the interactive variant.

Alice (verifier) privately prepares trap choices and one-time pads, then the
qubit register shuttles between the parties: Bob (prover) prepares the
qubits, applies every cZ round, and measures; Alice applies only the padded
single-qubit rounds. Bob never learns the target's slot, the pads, or the
trap choices — his strategy interface receives only (circuit index, stage).

Alice checks each trap's post-processed output as it arrives and aborts the
session at the first failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional

import numpy as np

from . import pauli, qotp, simulator, traps
from .circuit import Circuit, validate
from .noise import DeviationEvent, NoiseModel
from .oracles import LemmaReport
from .pauli import PauliString
from .protocol import epsilon_theorem1, epsilon_theorem2

ALICE = "alice"
BOB = "bob"


class OwnershipError(RuntimeError):
    """A party tried to act on the register without holding it."""


class ProtocolViolation(RuntimeError):
    """Message arrived out of order; distinct from a rejection."""


class QubitRegister:
    """n simulated qubits; only the current owner may operate on them."""

    def __init__(self, n: int, owner: str):
        self.n = n
        self.owner = owner
        self._state = np.full(2 ** n, 2 ** (-n / 2), dtype=complex)

    def _check(self, party: str):
        if party != self.owner:
            raise OwnershipError(f"{party} does not hold the register")

    def transfer(self, from_party: str, to_party: str):
        self._check(from_party)
        self.owner = to_party

    def apply_single(self, party: str, u: np.ndarray, qubit: int):
        self._check(party)
        self._state = simulator._apply_single(self._state, u, qubit, self.n)

    def apply_cz(self, party: str, i: int, j: int):
        self._check(party)
        self._state = simulator._apply_cz(self._state, i, j, self.n)

    def apply_pauli(self, party: str, p: PauliString):
        self._check(party)
        self._state = simulator._apply_pauli(self._state, p, self.n)

    def measure_x(self, party: str, rng: np.random.Generator) -> np.ndarray:
        self._check(party)
        state = self._state
        for q in range(self.n):
            state = simulator._apply_single(state, simulator._HAD, q, self.n)
        probs = np.abs(state) ** 2
        probs /= probs.sum()
        outcome = int(rng.choice(len(probs), p=probs))
        return simulator.index_to_bits(outcome, self.n)


@dataclass(frozen=True)
class Message:
    kind: str  # qubits_to_alice | qubits_to_bob | measurement_results | abort
    register: Optional[QubitRegister] = None
    bits: Optional[np.ndarray] = None


class Transport:
    """In-process FIFO, lossless, typed; swappable for a networked one."""

    def __init__(self):
        self._queue: List[Message] = []
        self.sent = 0

    def send(self, message: Message):
        self._queue.append(message)
        self.sent += 1

    def receive(self, expected_kind: str) -> Message:
        if not self._queue:
            raise ProtocolViolation("no message pending")
        msg = self._queue.pop(0)
        if msg.kind != expected_kind:
            raise ProtocolViolation(
                f"expected {expected_kind}, got {msg.kind}")
        return msg


@dataclass
class BobStrategy:
    """Prover behavior. Stage s of circuit k marks where Bob holds the
    register: s=0 right after preparation, s=j right before applying band
    j's cZ round (1 <= j <= m-1), s=m right before measurement.

    The deviation policy maps (k, stage) to Pauli insertions; honest Bob has
    an empty policy. The interface deliberately exposes nothing else: no
    slot index, pads, or trap choices exist on this object.
    """

    honest: bool = True
    deviations: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.honest and self.deviations:
            raise ValueError("honest strategy must have no deviations")

    def deviations_for(self, k: int, stage: int) -> list:
        return self.deviations.get((k, stage), [])


@dataclass
class SessionReport:
    flag: str  # "acc" | "rej"
    target_output: Optional[np.ndarray]
    transcript_length: int
    aborted: bool
    v0: int


def _as_pauli(dev, n: int) -> PauliString:
    if isinstance(dev, DeviationEvent):
        return dev.as_pauli(n)
    return dev


def run_session(target: Circuit, v: int, bob: BobStrategy,
                rng: np.random.Generator,
                abort_on_trap_failure: bool = True,
                alice_noise: Optional[NoiseModel] = None) -> SessionReport:
    """One interactive session over all v+1 circuits.

    Alice's preliminary work (trap sampling, padding, slot choice) happens
    before any message is exchanged. ``alice_noise`` optionally injects
    bounded gate noise into Alice's own single-qubit rounds.
    """
    report = validate(target)
    if not report.ok:
        raise ValueError("invalid target circuit: "
                         + "; ".join(report.violations))
    n, m = target.n, target.m
    v0 = int(rng.integers(0, v + 1))
    prepared = []
    for k in range(v + 1):
        base = target if k == v0 else traps.generate_trap(
            target, traps.sample_choice(target, rng))
        prepared.append(qotp.dress(base, qotp.sample_pads(n, m, rng)))

    channel = Transport()
    target_output = None
    aborted = False
    flag = "acc"
    for k in range(v + 1):
        dressed = prepared[k]
        register = QubitRegister(n, owner=BOB)
        for dev in bob.deviations_for(k, 0):
            register.apply_pauli(BOB, _as_pauli(dev, n))
        register.transfer(BOB, ALICE)
        channel.send(Message("qubits_to_alice", register=register))
        for j, band in enumerate(dressed.circuit.bands):
            msg = channel.receive("qubits_to_alice")
            reg = msg.register
            for i, gate in enumerate(band.singles):
                reg.apply_single(ALICE, gate.to_matrix(), i)
            if alice_noise is not None and alice_noise.has_gate_part:
                dev = alice_noise.sample_gate_deviation(k, j, rng)
                if dev is not None:
                    reg.apply_pauli(ALICE, _as_pauli(dev, n))
            reg.transfer(ALICE, BOB)
            channel.send(Message("qubits_to_bob", register=reg))
            msg = channel.receive("qubits_to_bob")
            reg = msg.register
            if j < m - 1:
                for dev in bob.deviations_for(k, j + 1):
                    reg.apply_pauli(BOB, _as_pauli(dev, n))
                for pair in band.sorted_pairs():
                    reg.apply_cz(BOB, *pair)
                reg.transfer(BOB, ALICE)
                channel.send(Message("qubits_to_alice", register=reg))
            else:
                for dev in bob.deviations_for(k, m):
                    reg.apply_pauli(BOB, _as_pauli(dev, n))
                bits = reg.measure_x(BOB, rng)
                channel.send(Message("measurement_results", bits=bits))
        msg = channel.receive("measurement_results")
        out = qotp.postprocess(msg.bits, dressed.key)
        if k == v0:
            target_output = out
        elif out.any():
            flag = "rej"
            if abort_on_trap_failure:
                channel.send(Message("abort"))
                aborted = True
                break
    return SessionReport(flag=flag, target_output=target_output,
                         transcript_length=channel.sent,
                         aborted=aborted, v0=v0)


def _corrupts_target(target: Circuit, bob: BobStrategy, k: int) -> bool:
    """Would Bob's slot-k insertions flip the target's output distribution?"""
    if not target.all_clifford:
        raise ValueError("corruption proxy needs a Clifford target")
    n, m = target.n, target.m
    errs = []
    for loc in range(m + 1):
        p = PauliString(n)
        for dev in bob.deviations_for(k, loc):
            p = pauli.multiply(_as_pauli(dev, n), p)
        errs.append(p)
    frame = simulator.propagate_frame(target, errs)
    return pauli.z_mask(frame) != 0


def soundness_estimate(target: Circuit, v: int, bob: BobStrategy,
                       sessions: int, rng: np.random.Generator,
                       alice_noise: Optional[NoiseModel] = None,
                       g: Optional[float] = None) -> LemmaReport:
    """Monte Carlo frequency of {accept AND target corrupted}.

    Bound: kappa/(v+1), or g*kappa/(v+1) + 1 - g when Alice-side gate noise
    with survival factor g is configured.
    """
    if v < 3:
        raise ValueError("v >= 3 required")
    corrupt_by_slot = [_corrupts_target(target, bob, k) for k in range(v + 1)]
    bad = 0
    for _ in range(sessions):
        rep = run_session(target, v, bob, rng, alice_noise=alice_noise)
        if rep.flag == "acc" and corrupt_by_slot[rep.v0]:
            bad += 1
    freq = bad / sessions
    if alice_noise is not None and g is not None:
        bound = float(epsilon_theorem2(v, Fraction(g)))
    else:
        bound = float(epsilon_theorem1(v))
    sigma = float(np.sqrt(max(bound * (1 - bound), 0.25 / sessions) / sessions))
    return LemmaReport(
        instance=f"mesothetic v={v} sessions={sessions}",
        probability=freq, bound=bound, passed=freq <= bound + 3 * sigma,
        samples=sessions, sampled=True,
        detail={"three_sigma": 3 * sigma})
