"""Trap circuits: random H/S dressings of the target's cZ topology.

For each non-final band, every cZ pair gets either (S on lo, H on hi) or
(H on lo, S on hi) — the orientation turning that cZ into a cX — and every
unpaired qubit gets H or S. The next band prepends the inverses, so the whole
trap telescopes to the identity on ``|+>^n`` and noiselessly outputs all
zeros. A global bit t optionally sandwiches the circuit in Hadamard rounds,
swapping which error species the trap is sensitive to.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import cliffords
from .circuit import Band, Circuit, Gate, compose_singles

DEFAULT_ENUMERATION_CAP = 2 ** 24

_H = Gate(clifford=cliffords.C_H)
_S = Gate(clifford=cliffords.C_S)
_I = Gate(clifford=cliffords.C_I)


@dataclass(frozen=True)
class TrapChoice:
    """Random bits defining one trap circuit on a fixed topology.

    ``pair_bits[j]`` has one bit per sorted cZ pair of band j (0: S on the
    lower qubit, H on the higher; 1: swapped) and ``single_bits[j]`` one bit
    per unpaired qubit in ascending order (0: H, 1: S), for j in [0, m-1).
    ``t`` is the global Hadamard-sandwich bit.
    """

    pair_bits: tuple  # tuple over bands of tuple of bits
    single_bits: tuple
    t: int

    def to_json(self) -> str:
        return json.dumps({
            "pair_bits": [list(b) for b in self.pair_bits],
            "single_bits": [list(b) for b in self.single_bits],
            "t": self.t,
        })

    @classmethod
    def from_json(cls, text: str) -> "TrapChoice":
        doc = json.loads(text)
        return cls(
            pair_bits=tuple(tuple(b) for b in doc["pair_bits"]),
            single_bits=tuple(tuple(b) for b in doc["single_bits"]),
            t=int(doc["t"]),
        )


def _band_layout(target: Circuit, j: int):
    """Sorted cZ pairs and ascending unpaired qubits of band j."""
    pairs = target.bands[j].sorted_pairs()
    in_pair = {q for p in pairs for q in p}
    unpaired = [q for q in range(target.n) if q not in in_pair]
    return pairs, unpaired


def _check_choice(target: Circuit, choice: TrapChoice):
    if target.m < 2:
        raise ValueError("trap generation needs at least 2 bands")
    if len(choice.pair_bits) != target.m - 1 \
            or len(choice.single_bits) != target.m - 1:
        raise ValueError("choice band count does not match topology")
    for j in range(target.m - 1):
        pairs, unpaired = _band_layout(target, j)
        if len(choice.pair_bits[j]) != len(pairs):
            raise ValueError(f"band {j}: pair bit count mismatch")
        if len(choice.single_bits[j]) != len(unpaired):
            raise ValueError(f"band {j}: unpaired bit count mismatch")
    if choice.t not in (0, 1):
        raise ValueError("t must be a bit")


def _band_gates(target: Circuit, choice: TrapChoice, j: int):
    """The fresh H/S assignment V_j of band j (before undo/sandwich)."""
    pairs, unpaired = _band_layout(target, j)
    gates = [_I] * target.n
    for bit, (lo, hi) in zip(choice.pair_bits[j], pairs):
        if bit == 0:
            gates[lo], gates[hi] = _S, _H
        else:
            gates[lo], gates[hi] = _H, _S
    for bit, q in zip(choice.single_bits[j], unpaired):
        gates[q] = _S if bit else _H
    return gates


def generate_trap(target: Circuit, choice: TrapChoice) -> Circuit:
    """Build the trap circuit for one random choice.

    Band j applies V_j after undoing V_{j-1}; band m applies only the undo.
    With t=1 an extra Hadamard round is composed before band 1's assignment
    and after band m's undo, each pair (i, j) recompiled into one Clifford.
    """
    _check_choice(target, choice)
    n, m = target.n, target.m
    sandwich = _H if choice.t else _I
    assignments = [_band_gates(target, choice, j) for j in range(m - 1)]
    bands = []
    for j in range(m):
        singles = []
        for i in range(n):
            g = _I
            if j == 0:
                g = compose_singles(sandwich, assignments[0][i])
            else:
                undo = Gate(clifford=cliffords.DAGGER[
                    assignments[j - 1][i].clifford])
                if j < m - 1:
                    g = compose_singles(undo, assignments[j][i])
                else:
                    g = compose_singles(undo, sandwich)
            singles.append(g)
        bands.append(Band(singles=tuple(singles),
                          cz_pairs=target.bands[j].cz_pairs))
    return Circuit(n=n, m=m, bands=tuple(bands))


def sample_choice(target: Circuit, rng: np.random.Generator) -> TrapChoice:
    """Uniform over the Routine-2 choice space; deterministic given rng."""
    pair_bits, single_bits = [], []
    for j in range(target.m - 1):
        pairs, unpaired = _band_layout(target, j)
        pair_bits.append(tuple(int(b) for b in
                               rng.integers(0, 2, size=len(pairs))))
        single_bits.append(tuple(int(b) for b in
                                 rng.integers(0, 2, size=len(unpaired))))
    return TrapChoice(pair_bits=tuple(pair_bits),
                      single_bits=tuple(single_bits),
                      t=int(rng.integers(0, 2)))


def choice_space_size(target: Circuit) -> int:
    total = 2  # the global t bit
    for j in range(target.m - 1):
        pairs, unpaired = _band_layout(target, j)
        total <<= len(pairs) + len(unpaired)
    return total


def enumerate_choices(target: Circuit,
                      cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[TrapChoice]:
    """Yield every TrapChoice once, in deterministic order.

    Order is band-major with pair bits before unpaired bits and the t bit
    varying fastest, so downstream exhaustive averages are reproducible.
    """
    total = choice_space_size(target)
    if total > cap:
        raise ValueError(
            f"choice space of size {total} too large to enumerate (cap {cap})")
    layouts = [_band_layout(target, j) for j in range(target.m - 1)]
    widths = [len(pairs) + len(unpaired) for pairs, unpaired in layouts]

    def build(code: int) -> TrapChoice:
        t = code & 1
        code >>= 1
        pair_bits, single_bits = [], []
        # highest band consumes the lowest remaining bits; reverse at the end
        for (pairs, unpaired), w in zip(reversed(layouts), reversed(widths)):
            bits = [(code >> k) & 1 for k in range(w)]
            code >>= w
            pair_bits.append(tuple(bits[: len(pairs)]))
            single_bits.append(tuple(bits[len(pairs):]))
        return TrapChoice(pair_bits=tuple(reversed(pair_bits)),
                          single_bits=tuple(reversed(single_bits)), t=t)

    for code in range(total):
        yield build(code)
