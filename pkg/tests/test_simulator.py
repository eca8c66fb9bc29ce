import numpy as np
import pytest

from qaccredit import families, pauli, simulator, traps
from qaccredit.circuit import Band, Circuit, clifford_gate, identity_circuit
from qaccredit.noise import identity_collection
from qaccredit.pauli import PauliString
from qaccredit.simulator import (NonCliffordError, SimLimitError, SimLimits,
                                 propagate_frame, run_density,
                                 run_statevector, statevector_distribution,
                                 trap_output)
from qaccredit.traps import TrapChoice, generate_trap


def _ident_errors(n, m):
    return identity_collection(1, n, m).slice_for(0)


def test_frame_identity_errors():
    circ = families.random_clifford_circuit(3, 3, np.random.default_rng(0))
    q = propagate_frame(circ, _ident_errors(3, 3))
    assert q.x_bits == 0 and q.z_bits == 0


def test_frame_terminal_error_passes_through():
    circ = families.random_clifford_circuit(2, 2, np.random.default_rng(1))
    errs = list(_ident_errors(2, 2))
    errs[2] = PauliString(2, 0, 0b01)  # Z on qubit 0 right before measurement
    q = propagate_frame(circ, errs)
    assert pauli.z_mask(q) == 0b01 and q.x_bits == 0


def test_frame_detection_depends_on_cx_orientation():
    # a middle-location Z on qubit 0 is caught by one cX orientation only
    topo = identity_circuit(2, 2, cz_layout=[{(0, 1)}, set()])
    errs = list(_ident_errors(2, 2))
    errs[1] = PauliString(2, 0, 0b01)
    masks = []
    for bit in (0, 1):
        trap = generate_trap(
            topo, TrapChoice(pair_bits=((bit,),), single_bits=((),), t=0))
        masks.append(pauli.z_mask(propagate_frame(trap, errs)))
    assert sorted(m != 0 for m in masks) == [False, True]


def test_frame_rejects_non_clifford():
    circ = families.random_generic_circuit(2, 2, np.random.default_rng(2))
    with pytest.raises(NonCliffordError):
        propagate_frame(circ, _ident_errors(2, 2))


def test_trap_output_flips():
    topo = identity_circuit(2, 2, cz_layout=[{(0, 1)}, set()])
    trap = generate_trap(
        topo, TrapChoice(pair_bits=((0,),), single_bits=((),), t=0))
    assert not trap_output(trap, _ident_errors(2, 2)).any()
    errs = list(_ident_errors(2, 2))
    errs[2] = PauliString(2, 0, 0b10)
    assert np.array_equal(trap_output(trap, errs), [0, 1])


def test_statevector_identity_circuit():
    circ = identity_circuit(3, 2)
    rng = np.random.default_rng(3)
    for _ in range(20):
        assert not run_statevector(circ, rng=rng).any()


def test_statevector_hadamard_split():
    circ = Circuit(n=1, m=1, bands=(Band(singles=(clifford_gate("H"),)),))
    dist = statevector_distribution(circ)
    assert np.allclose(dist, [0.5, 0.5])
    rng = np.random.default_rng(4)
    ones = sum(int(run_statevector(circ, rng=rng)[0]) for _ in range(10 ** 4))
    sigma = np.sqrt(0.25 / 10 ** 4)
    assert abs(ones / 10 ** 4 - 0.5) < 3 * sigma


def test_statevector_matches_frame_on_traps():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n, m = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        topo = families.random_clifford_circuit(n, m, rng)
        trap = generate_trap(topo, traps.sample_choice(topo, rng))
        errs = []
        for loc in range(m + 1):
            z_only = loc in (0, m)
            x = 0 if z_only else int(rng.integers(0, 2 ** n))
            errs.append(PauliString(n, x, int(rng.integers(0, 2 ** n))))
        expected = trap_output(trap, errs)
        sampled = run_statevector(trap, errors=errs, rng=rng)
        assert np.array_equal(sampled, expected)


def test_statevector_frame_exhaustive_small():
    # all single-location errors on all 2-qubit, <=3-band trap dressings
    rng = np.random.default_rng(6)
    topo = identity_circuit(2, 3, cz_layout=[{(0, 1)}, {(0, 1)}, set()])
    for choice in traps.enumerate_choices(topo):
        trap = generate_trap(topo, choice)
        for loc in range(4):
            z_only = loc in (0, 3)
            for x in ([0] if z_only else range(4)):
                for z in range(4):
                    errs = list(_ident_errors(2, 3))
                    errs[loc] = PauliString(2, x, z)
                    expected = trap_output(trap, errs)
                    got = run_statevector(trap, errors=errs, rng=rng)
                    assert np.array_equal(got, expected)


def test_statevector_limits():
    circ = identity_circuit(3, 1)
    with pytest.raises(SimLimitError):
        statevector_distribution(circ, limits=SimLimits(2, 2))
    with pytest.raises(ValueError):
        SimLimits(0, 1)


def test_density_identity_point_mass():
    dist = run_density(identity_circuit(2, 2))
    assert np.allclose(dist, [1, 0, 0, 0], atol=1e-12)


def test_density_depolarizing_uniform():
    circ = identity_circuit(1, 1)
    paulis = [np.eye(2), np.array([[0, 1], [1, 0]]),
              np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    kraus = [0.5 * p.astype(complex) for p in paulis]
    dist = run_density(circ, channels={1: kraus})
    assert np.allclose(dist, [0.5, 0.5], atol=1e-12)


def test_density_rejects_non_trace_preserving():
    circ = identity_circuit(1, 1)
    with pytest.raises(ValueError, match="trace-preserving"):
        run_density(circ, channels={1: [0.5 * np.eye(2, dtype=complex)]})


def test_density_matches_statevector_sampling():
    rng = np.random.default_rng(7)
    circ = families.random_generic_circuit(2, 2, rng)
    dist = run_density(circ)
    reps = 10 ** 4
    counts = np.zeros(4)
    for _ in range(reps):
        counts[simulator.bits_to_index(run_statevector(circ, rng=rng))] += 1
    for k in range(4):
        sigma = np.sqrt(max(dist[k] * (1 - dist[k]), 1e-4) / reps)
        assert abs(counts[k] / reps - dist[k]) < 3 * sigma


def test_density_normalization_random_channels():
    rng = np.random.default_rng(8)
    for _ in range(10):
        circ = families.random_generic_circuit(2, 2, rng)
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        q, r = np.linalg.qr(z)
        q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
        dist = run_density(circ, channels={1: [q]})
        assert abs(dist.sum() - 1.0) < 1e-10


def test_run_statevector_deterministic_given_seed():
    circ = families.random_generic_circuit(3, 3, np.random.default_rng(9))
    a = run_statevector(circ, rng=np.random.default_rng(123))
    b = run_statevector(circ, rng=np.random.default_rng(123))
    assert np.array_equal(a, b)
