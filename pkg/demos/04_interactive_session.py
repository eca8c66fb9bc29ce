"""Two-party interactive accreditation with an adversarial prover.

Alice (verifier) owns the classical secrets: trap positions, one-time-pad
bits, and trap dressings. Bob (prover) prepares qubits, applies the
entangling rounds, and measures. An honest Bob always passes; a Bob who
injects Pauli deviations is caught by the traps at the rate the protocol
guarantees.

Run:  python3 demos/04_interactive_session.py
"""

import numpy as np

from qaccredit import families
from qaccredit.mesothetic import BobStrategy, run_session, soundness_estimate
from qaccredit.pauli import PauliString

target = families.ghz_circuit(2)
rng = np.random.default_rng(7)

honest = BobStrategy(honest=True)
flags = [run_session(target, 3, honest, rng).flag for _ in range(200)]
print(f"honest prover: {flags.count('acc')}/200 sessions accepted")

# Bob secretly applies Y on qubit 0 between bands, in every circuit
devs = {(k, 1): [PauliString(2, 1, 1)] for k in range(4)}
cheat = BobStrategy(honest=False, deviations=devs)
report = soundness_estimate(target, 3, cheat, sessions=20000,
                            rng=np.random.default_rng(8))
print(f"deviating prover: freq(accept AND corrupted target) = "
      f"{float(report.probability):.4f}  (guarantee: <= "
      f"{float(report.bound):.4f})")
