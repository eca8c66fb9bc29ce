"""qaccredit: simulation and verification of trap-based accreditation
of noisy quantum circuit outputs.

Submodules:

* :mod:`qaccredit.circuit` — band-structured circuit IR and JSON round-trip
* :mod:`qaccredit.pauli` / :mod:`qaccredit.cliffords` — exact Pauli algebra
* :mod:`qaccredit.qotp` — quantum one-time-pad compilation
* :mod:`qaccredit.traps` — trap-circuit generation
* :mod:`qaccredit.noise` — Pauli-collection and bounded-gate noise models
* :mod:`qaccredit.simulator` — Pauli-frame and dense backends
* :mod:`qaccredit.protocol` — the accreditation runner and bounds
* :mod:`qaccredit.oracles` — brute-force lemma verifiers
* :mod:`qaccredit.mesothetic` — interactive verifier/prover sessions
* :mod:`qaccredit.families` — example circuit families
"""

from .circuit import Band, Circuit, Gate, parse, serialize, validate
from .noise import NoiseModel, PauliErrorCollection, noiseless
from .pauli import PauliString
from .protocol import (AccreditationReport, ProtocolConfig, RunOutcome,
                       accredit, delta_bound, epsilon_theorem1,
                       epsilon_theorem2, figure8_curve, single_run)
from .qotp import PadRecord, dress, postprocess, sample_pads
from .simulator import SimLimits, propagate_frame, run_density, \
    run_statevector, trap_output
from .traps import TrapChoice, enumerate_choices, generate_trap, sample_choice

__version__ = "0.1.0"

__all__ = [
    "Band", "Circuit", "Gate", "parse", "serialize", "validate",
    "NoiseModel", "PauliErrorCollection", "noiseless",
    "PauliString",
    "AccreditationReport", "ProtocolConfig", "RunOutcome", "accredit",
    "delta_bound", "epsilon_theorem1", "epsilon_theorem2", "figure8_curve",
    "single_run",
    "PadRecord", "dress", "postprocess", "sample_pads",
    "SimLimits", "propagate_frame", "run_density", "run_statevector",
    "trap_output",
    "TrapChoice", "enumerate_choices", "generate_trap", "sample_choice",
    "__version__",
]
