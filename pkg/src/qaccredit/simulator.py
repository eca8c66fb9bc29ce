"""Circuit simulation backends.

* Pauli-frame propagation: exact and sampling-free for all-Clifford circuits
  under Pauli noise — errors are commuted to the end of the circuit and read
  off as an X-measurement flip mask.
* Dense statevector / density-matrix simulation for small generic circuits,
  including arbitrary Kraus channels at the standard noise locations.

Noise locations for a circuit with m bands: location 0 right after state
preparation, location j in [1, m-1] after band j's single-qubit round and
before its cZ round, location m right before measurement.

Measurement convention: X-basis outcome 0 corresponds to ``|+>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import pauli
from .circuit import Circuit
from .noise import DeviationEvent
from .pauli import PauliString

TRACE_ATOL = 1e-10


@dataclass(frozen=True)
class SimLimits:
    max_statevector_qubits: int = 16
    max_density_qubits: int = 6

    def __post_init__(self):
        if self.max_statevector_qubits < 1 or self.max_density_qubits < 1:
            raise ValueError("limits must be >= 1")


DEFAULT_LIMITS = SimLimits()


class SimLimitError(RuntimeError):
    """Requested simulation exceeds the configured size limits."""


class NonCliffordError(ValueError):
    """Frame backend asked to handle a non-Clifford gate."""


# ---------------------------------------------------------------------------
# Pauli-frame backend
# ---------------------------------------------------------------------------


def propagate_frame(circuit: Circuit, errors: Sequence) -> PauliString:
    """Commute a per-location Pauli error slice to the end of the circuit.

    ``errors`` holds m+1 PauliStrings indexed by location. Returns the single
    end-of-circuit Pauli; exact, no sampling.
    """
    if not circuit.all_clifford:
        raise NonCliffordError("frame backend requires an all-Clifford circuit")
    if len(errors) != circuit.m + 1:
        raise ValueError(f"expected {circuit.m + 1} error locations")
    q = errors[0]
    for j, band in enumerate(circuit.bands):
        for i, gate in enumerate(band.singles):
            q = pauli.conj_single(q, gate.clifford, i)
        if j < circuit.m - 1:
            q = pauli.multiply(errors[j + 1], q)
        for pair in band.sorted_pairs():
            q = pauli.conj_cz(q, pair)
    return pauli.multiply(errors[circuit.m], q)


def trap_output(circuit: Circuit, errors: Sequence) -> np.ndarray:
    """X-measurement flip pattern relative to the noiseless all-zero output."""
    mask = pauli.z_mask(propagate_frame(circuit, errors))
    return np.array([(mask >> q) & 1 for q in range(circuit.n)],
                    dtype=np.uint8)


# ---------------------------------------------------------------------------
# Dense backends
# ---------------------------------------------------------------------------


def _apply_single(state: np.ndarray, u: np.ndarray, q: int, n: int) -> np.ndarray:
    """Apply a 2x2 unitary to qubit q (qubit 0 = least significant bit)."""
    psi = state.reshape(2 ** (n - 1 - q), 2, 2 ** q)
    return np.einsum("ab,ibj->iaj", u, psi).reshape(-1)


def _apply_cz(state: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    idx = np.arange(2 ** n)
    mask = ((idx >> i) & 1) & ((idx >> j) & 1)
    out = state.copy()
    out[mask == 1] *= -1
    return out


def _apply_pauli(state: np.ndarray, p: PauliString, n: int) -> np.ndarray:
    idx = np.arange(2 ** n)
    flipped = idx ^ p.x_bits
    # X^x Z^z on |b>: Z phases first on b, then X flips b
    zpar = np.zeros(2 ** n, dtype=np.int64)
    for q in range(n):
        if (p.z_bits >> q) & 1:
            zpar ^= (idx >> q) & 1
    out = np.zeros_like(state)
    out[flipped] = state * ((-1.0) ** zpar)
    return out * (1j ** p.sign)


_HAD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


def _plus_state(n: int) -> np.ndarray:
    return np.full(2 ** n, 2 ** (-n / 2), dtype=complex)


def _evolve_state(circuit: Circuit,
                  errors: Optional[Sequence],
                  deviations: Optional[dict]) -> np.ndarray:
    """|+>^n through the circuit with Pauli errors and gate deviations.

    ``deviations`` maps band index j to a list of insertions (DeviationEvent,
    PauliString, or 2^n-dim unitary) applied after band j's single-qubit round
    and before the location-j error.
    """
    n, m = circuit.n, circuit.m
    state = _plus_state(n)
    if errors is not None:
        state = _apply_pauli(state, errors[0], n)
    for j, band in enumerate(circuit.bands):
        for i, gate in enumerate(band.singles):
            state = _apply_single(state, gate.to_matrix(), i, n)
        for dev in (deviations or {}).get(j, []):
            if isinstance(dev, DeviationEvent):
                dev = dev.as_pauli(n)
            if isinstance(dev, PauliString):
                state = _apply_pauli(state, dev, n)
            else:
                state = np.asarray(dev, dtype=complex) @ state
        if errors is not None and 0 < j + 1 <= m:
            loc = j + 1 if j < m - 1 else m
            if j < m - 1:
                state = _apply_pauli(state, errors[loc], n)
        for pair in band.sorted_pairs():
            state = _apply_cz(state, *pair, n)
    if errors is not None:
        state = _apply_pauli(state, errors[m], n)
    # rotate to the X basis so computational outcomes are the measurement bits
    for q in range(n):
        state = _apply_single(state, _HAD, q, n)
    return state


def statevector_distribution(circuit: Circuit,
                             errors: Optional[Sequence] = None,
                             deviations: Optional[dict] = None,
                             limits: SimLimits = DEFAULT_LIMITS) -> np.ndarray:
    """Exact X-measurement outcome distribution (index bit q = qubit q)."""
    if circuit.n > limits.max_statevector_qubits:
        raise SimLimitError(
            f"{circuit.n} qubits exceeds statevector limit "
            f"{limits.max_statevector_qubits}")
    state = _evolve_state(circuit, errors, deviations)
    probs = np.abs(state) ** 2
    return probs / probs.sum()


def run_statevector(circuit: Circuit,
                    errors: Optional[Sequence] = None,
                    gate_deviations: Optional[dict] = None,
                    rng: Optional[np.random.Generator] = None,
                    limits: SimLimits = DEFAULT_LIMITS) -> np.ndarray:
    """One X-measurement sample as an n-bit array."""
    probs = statevector_distribution(circuit, errors, gate_deviations, limits)
    rng = rng if rng is not None else np.random.default_rng()
    outcome = int(rng.choice(len(probs), p=probs))
    return np.array([(outcome >> q) & 1 for q in range(circuit.n)],
                    dtype=np.uint8)


def _apply_channel(rho: np.ndarray, kraus: Sequence) -> np.ndarray:
    dim = rho.shape[0]
    total = np.zeros((dim, dim), dtype=complex)
    check = np.zeros((dim, dim), dtype=complex)
    for k in kraus:
        k = np.asarray(k, dtype=complex)
        total += k @ rho @ k.conj().T
        check += k.conj().T @ k
    if not np.allclose(check, np.eye(dim), atol=TRACE_ATOL, rtol=0):
        raise ValueError("channel is not trace-preserving within 1e-10")
    return total


def _single_to_full(u: np.ndarray, q: int, n: int) -> np.ndarray:
    ops = [np.eye(2, dtype=complex)] * n
    ops[q] = np.asarray(u, dtype=complex)
    full = np.array([[1.0]], dtype=complex)
    for op in reversed(ops):  # qubit 0 least significant -> rightmost factor
        full = np.kron(full, op)
    return full


def run_density(circuit: Circuit,
                channels: Optional[dict] = None,
                limits: SimLimits = DEFAULT_LIMITS) -> np.ndarray:
    """Exact output distribution under Kraus channels at noise locations.

    ``channels`` maps location index (0..m) to a list of 2^n x 2^n Kraus
    operators. Returns the length-2^n X-measurement probability vector.
    """
    n, m = circuit.n, circuit.m
    if n > limits.max_density_qubits:
        raise SimLimitError(
            f"{n} qubits exceeds density limit {limits.max_density_qubits}")
    channels = channels or {}
    plus = _plus_state(n)
    rho = np.outer(plus, plus.conj())
    if 0 in channels:
        rho = _apply_channel(rho, channels[0])
    for j, band in enumerate(circuit.bands):
        u_band = np.eye(2 ** n, dtype=complex)
        for i, gate in enumerate(band.singles):
            u_band = _single_to_full(gate.to_matrix(), i, n) @ u_band
        rho = u_band @ rho @ u_band.conj().T
        loc = j + 1
        if 0 < loc < m and loc in channels:
            rho = _apply_channel(rho, channels[loc])
        if band.cz_pairs:
            idx = np.arange(2 ** n)
            sign = np.ones(2 ** n)
            for i, k in band.sorted_pairs():
                sign *= 1.0 - 2.0 * (((idx >> i) & 1) & ((idx >> k) & 1))
            rho = rho * np.outer(sign, sign)
    if m in channels:
        rho = _apply_channel(rho, channels[m])
    had = _single_to_full(_HAD, 0, n)
    for q in range(1, n):
        had = _single_to_full(_HAD, q, n) @ had
    rho = had @ rho @ had.conj().T
    probs = np.real(np.diag(rho))
    if abs(probs.sum() - 1.0) > TRACE_ATOL:
        raise ValueError("output distribution does not sum to 1 within 1e-10")
    if probs.min() < -1e-12:
        raise ValueError("negative probability beyond tolerance")
    return np.clip(probs, 0.0, None) / probs.sum()


def bits_to_index(bits: np.ndarray) -> int:
    return int(sum(int(b) << q for q, b in enumerate(bits)))


def index_to_bits(index: int, n: int) -> np.ndarray:
    return np.array([(index >> q) & 1 for q in range(n)], dtype=np.uint8)
