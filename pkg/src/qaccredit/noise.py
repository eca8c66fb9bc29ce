"""Noise models: classically correlated Pauli collections and bounded
single-qubit-gate deviations.

A PauliErrorCollection assigns one Pauli per noise location per circuit:
location 0 sits right after state preparation, location j in [1, m-1] right
before the band-j cZ round, and location m right before measurement. The
end locations are restricted to {I, Z}-only strings (X-type noise there is
absorbed by preparation/measurement in the X basis).

Gate noise is a per-(circuit, band) rate r: with probability 1-r nothing
happens, otherwise a sampled deviation fires. Models never see which circuit
is the target or any pad/trap bits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import pauli
from .pauli import PauliString

PROB_ATOL = 1e-12


@dataclass(frozen=True)
class PauliErrorCollection:
    """Per circuit k: a tuple of m+1 PauliStrings, one per location."""

    circuits: tuple  # tuple over k of tuple of PauliString

    def __post_init__(self):
        object.__setattr__(
            self, "circuits", tuple(tuple(locs) for locs in self.circuits))
        for k, locs in enumerate(self.circuits):
            if len(locs) < 2:
                raise ValueError(f"circuit {k}: needs locations 0..m with m>=1")
            for loc in (0, len(locs) - 1):
                if locs[loc].x_bits:
                    raise ValueError(
                        f"circuit {k} location {loc}: must be Z-only")

    @property
    def num_circuits(self) -> int:
        return len(self.circuits)

    @property
    def m(self) -> int:
        return len(self.circuits[0]) - 1

    def slice_for(self, k: int) -> tuple:
        return self.circuits[k]

    def is_identity_on(self, k: int) -> bool:
        return all(p.x_bits == 0 and p.z_bits == 0 for p in self.circuits[k])

    def touched_circuits(self) -> list:
        return [k for k in range(self.num_circuits)
                if not self.is_identity_on(k)]

    def to_json(self) -> str:
        return json.dumps([[pauli.to_text(p) for p in locs]
                           for locs in self.circuits])

    @classmethod
    def from_json(cls, text: str) -> "PauliErrorCollection":
        doc = json.loads(text)
        return cls(tuple(tuple(pauli.from_text(s) for s in locs)
                         for locs in doc))


def identity_collection(num_circuits: int, n: int, m: int) -> PauliErrorCollection:
    ident = PauliString(n)
    return PauliErrorCollection(
        tuple(tuple(ident for _ in range(m + 1)) for _ in range(num_circuits)))


@dataclass(frozen=True)
class DeviationEvent:
    """A single-qubit Pauli deviation fired by gate noise."""

    qubit: int
    x: int
    z: int

    def as_pauli(self, n: int) -> PauliString:
        return PauliString(n, self.x << self.qubit, self.z << self.qubit)


# ---------------------------------------------------------------------------
# Model variants
# ---------------------------------------------------------------------------


class NoiseModel:
    """Base: a Pauli part (collections) and/or a gate part (deviations)."""

    has_pauli_part = False
    has_gate_part = False

    def sample_collection(self, v: int, n: int, m: int,
                          rng: np.random.Generator) -> PauliErrorCollection:
        raise ValueError("this noise model has no Pauli-collection part")

    def sample_gate_deviation(self, k: int, j: int,
                              rng: np.random.Generator) -> Optional[DeviationEvent]:
        raise ValueError("this noise model has no gate-noise part")

    def gate_rate(self, k: int, j: int) -> float:
        return 0.0

    def g_factor(self, v: int, m: int) -> float:
        """Product over all (v+1)*m single-qubit rounds of (1 - r_max)."""
        g = 1.0
        for k in range(v + 1):
            for j in range(m):
                g *= 1.0 - self.gate_rate(k, j)
        return g


class NoiselessModel(NoiseModel):
    has_pauli_part = True

    def sample_collection(self, v, n, m, rng):
        return identity_collection(v + 1, n, m)


def noiseless() -> NoiseModel:
    return NoiselessModel()


class ExplicitCollectionDistribution(NoiseModel):
    """Arbitrary classical correlation: a finite list of (collection, prob)."""

    has_pauli_part = True

    def __init__(self, entries: Sequence):
        self.entries = [(c, float(p)) for c, p in entries]
        if not self.entries:
            raise ValueError("distribution needs at least one entry")
        probs = np.array([p for _, p in self.entries])
        if (probs < 0).any():
            raise ValueError("probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > PROB_ATOL:
            raise ValueError("probabilities must sum to 1 within 1e-12")
        self._probs = probs

    def sample_collection(self, v, n, m, rng):
        idx = rng.choice(len(self.entries), p=self._probs)
        coll = self.entries[idx][0]
        if coll.num_circuits != v + 1 or coll.m != m:
            raise ValueError("collection shape does not match (v, m)")
        return coll


class IndependentLocationChannels(NoiseModel):
    """Per-location single-qubit Pauli rates, i.i.d. across circuits/qubits.

    ``rates[(k, loc)]`` (or the default rate) maps each of the letters X/Y/Z
    to a firing probability per qubit; X/Y rates are forced to 0 at the end
    locations so the Z-only constraint holds by construction.
    """

    has_pauli_part = True

    def __init__(self, default_rates=None, rates=None):
        self.default_rates = dict(default_rates or {})
        self.rates = {k: dict(v) for k, v in (rates or {}).items()}

    def _rates_at(self, k, loc, m):
        r = self.rates.get((k, loc), self.default_rates)
        r = {p: float(r.get(p, 0.0)) for p in "XYZ"}
        if loc == 0 or loc == m:
            r["X"] = r["Y"] = 0.0
        return r

    def sample_collection(self, v, n, m, rng):
        circuits = []
        for k in range(v + 1):
            locs = []
            for loc in range(m + 1):
                r = self._rates_at(k, loc, m)
                x = z = 0
                for q in range(n):
                    u = rng.random()
                    if u < r["X"]:
                        x |= 1 << q
                    elif u < r["X"] + r["Y"]:
                        x |= 1 << q
                        z |= 1 << q
                    elif u < r["X"] + r["Y"] + r["Z"]:
                        z |= 1 << q
                locs.append(PauliString(n, x, z))
            circuits.append(tuple(locs))
        return PauliErrorCollection(tuple(circuits))


def _default_deviation_sampler(n: int, rng: np.random.Generator) -> DeviationEvent:
    """Uniform non-identity Pauli on a uniform random qubit."""
    q = int(rng.integers(0, n))
    x, z = [(1, 0), (1, 1), (0, 1)][int(rng.integers(0, 3))]
    return DeviationEvent(qubit=q, x=x, z=z)


class BoundedGateNoise(NoiseModel):
    """Diamond-norm-bounded single-qubit-gate deviations.

    ``rate`` may be a float (same r everywhere) or a map (k, j) -> r. Each
    single-qubit round fires a deviation with probability r; the deviation
    sampler is pluggable and defaults to a random non-identity Pauli.
    """

    has_gate_part = True

    def __init__(self, rate, n: int,
                 sampler: Optional[Callable] = None):
        self._rate = rate
        self.n = n
        self.sampler = sampler or _default_deviation_sampler
        for r in ([rate] if not isinstance(rate, dict) else rate.values()):
            if not 0.0 <= float(r) < 1.0:
                raise ValueError("rates must lie in [0, 1)")

    def gate_rate(self, k, j):
        if isinstance(self._rate, dict):
            return float(self._rate.get((k, j), 0.0))
        return float(self._rate)

    def sample_gate_deviation(self, k, j, rng):
        r = self.gate_rate(k, j)
        if rng.random() >= r:
            return None
        return self.sampler(self.n, rng)


class CompositeModel(NoiseModel):
    """Pauli part + gate part combined."""

    def __init__(self, pauli_part: Optional[NoiseModel] = None,
                 gate_part: Optional[NoiseModel] = None):
        self.pauli_part = pauli_part
        self.gate_part = gate_part
        self.has_pauli_part = pauli_part is not None
        self.has_gate_part = gate_part is not None

    def sample_collection(self, v, n, m, rng):
        if self.pauli_part is None:
            return super().sample_collection(v, n, m, rng)
        return self.pauli_part.sample_collection(v, n, m, rng)

    def sample_gate_deviation(self, k, j, rng):
        if self.gate_part is None:
            return super().sample_gate_deviation(k, j, rng)
        return self.gate_part.sample_gate_deviation(k, j, rng)

    def gate_rate(self, k, j):
        return self.gate_part.gate_rate(k, j) if self.gate_part else 0.0


def sample_collection(model: NoiseModel, v, n, m, rng) -> PauliErrorCollection:
    coll = model.sample_collection(v, n, m, rng)
    if coll.num_circuits != v + 1:
        raise ValueError("collection covers the wrong number of circuits")
    return coll


def sample_gate_deviation(model: NoiseModel, k, j, rng):
    return model.sample_gate_deviation(k, j, rng)


def g_factor(model: NoiseModel, v: int, m: int) -> float:
    return model.g_factor(v, m)


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------


def model_from_json(text: str) -> NoiseModel:
    """Parse the noise-model document.

    Schema: {"variant": "noiseless"} |
    {"variant": "explicit", "entries": [{"prob": p, "collection": [[pauli...]...]}]} |
    {"variant": "independent", "default_rates": {"X":..,"Y":..,"Z":..},
     "rates": [{"k":..,"loc":..,"X":..}]} |
    {"variant": "bounded_gate", "rate": r, "n": n} |
    {"variant": "composite", "pauli": {...}, "gate": {...}}
    """
    return _model_from_obj(json.loads(text))


def _model_from_obj(doc) -> NoiseModel:
    if not isinstance(doc, dict) or "variant" not in doc:
        raise ValueError("noise model document needs a 'variant' key")
    variant = doc["variant"]
    if variant == "noiseless":
        return noiseless()
    if variant == "explicit":
        entries = []
        for e in doc["entries"]:
            coll = PauliErrorCollection(
                tuple(tuple(pauli.from_text(s) for s in locs)
                      for locs in e["collection"]))
            entries.append((coll, e["prob"]))
        return ExplicitCollectionDistribution(entries)
    if variant == "independent":
        rates = {(r["k"], r["loc"]): {p: r.get(p, 0.0) for p in "XYZ"}
                 for r in doc.get("rates", [])}
        return IndependentLocationChannels(
            default_rates=doc.get("default_rates"), rates=rates)
    if variant == "bounded_gate":
        return BoundedGateNoise(rate=doc["rate"], n=doc["n"])
    if variant == "composite":
        return CompositeModel(
            pauli_part=_model_from_obj(doc["pauli"]) if doc.get("pauli") else None,
            gate_part=_model_from_obj(doc["gate"]) if doc.get("gate") else None)
    raise ValueError(f"unknown noise-model variant {variant!r}")
