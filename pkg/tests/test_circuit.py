"""Circuit simulation, shot estimation, noise, and transpilation checks."""

import math

import numpy as np
import pytest

from oracles import pauli_label_matrix
from qve.circuit import (Circuit, CircuitError, EstimatorResult, Gate,
                         NoiseModel, ParamExpr, TranspileError, circuit_stats,
                         circuit_unitary, derive_rng, estimate,
                         group_commuting_terms, inverse_circuit, run_circuit,
                         transpile)
from qve.pauli import PauliSum, expectation_exact


def random_circuit(rng, n, depth):
    c = Circuit(n)
    for _ in range(depth):
        kind = rng.choice(["X", "H", "SqrtX", "RX", "RY", "RZ", "CX", "CZ", "SWAP"])
        if kind in ("CX", "CZ", "SWAP"):
            a, b = rng.choice(n, size=2, replace=False)
            c.add(Gate(kind, (int(a), int(b))))
        elif kind in ("RX", "RY", "RZ"):
            c.add(Gate(kind, (int(rng.integers(n)),), float(rng.uniform(0, 2 * np.pi))))
        else:
            c.add(Gate(kind, (int(rng.integers(n)),)))
    return c


# single-qubit reference matrices
def u_rz(t):
    return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])


def u_ry(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def u_rx(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def embed(u1, q, n):
    """Kronecker embedding with qubit 0 least significant."""
    mat = np.eye(1, dtype=complex)
    for i in range(n):
        mat = np.kron(u1 if i == q else np.eye(2), mat)
    return mat


def test_single_qubit_gate_matrices():
    # [DERIVED] every 1-qubit gate vs its reference matrix via kron embedding
    t = 0.7321
    refs = {
        ("X", None): pauli_label_matrix("X"),
        ("H", None): np.array([[1, 1], [1, -1]]) / math.sqrt(2),
        ("SqrtX", None): 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]),
        ("RX", t): u_rx(t), ("RY", t): u_ry(t), ("RZ", t): u_rz(t),
    }
    for (kind, angle), ref in refs.items():
        for q in range(3):
            c = Circuit(3)
            c.add(Gate(kind, (q,), angle))
            np.testing.assert_allclose(circuit_unitary(c), embed(ref, q, 3), atol=1e-12)


def test_two_qubit_gate_matrices():
    # [DERIVED] CX/CZ/SWAP truth tables on basis states
    c = Circuit(2)
    c.x(0).cx(0, 1)
    state = run_circuit(c)
    assert np.argmax(np.abs(state)) == 3  # |11>
    c = Circuit(2)
    c.x(1).cx(1, 0)
    assert np.argmax(np.abs(run_circuit(c))) == 3
    c = Circuit(2)
    c.x(0).swap(0, 1)
    assert np.argmax(np.abs(run_circuit(c))) == 2  # |10>
    cz = Circuit(2)
    cz.h(0).x(1).cz(0, 1)
    state = run_circuit(cz)
    # CZ flips the sign of |11> only
    assert state[2] == pytest.approx(1 / math.sqrt(2))
    assert state[3] == pytest.approx(-1 / math.sqrt(2))


def test_bell_state():
    # [DERIVED]
    c = Circuit(2)
    c.h(0).cx(0, 1)
    state = run_circuit(c)
    np.testing.assert_allclose(state, np.array([1, 0, 0, 1]) / math.sqrt(2), atol=1e-12)


def test_param_expr():
    # [TRIVIAL] affine parameter references
    p = ParamExpr("a", 2.0, 0.5)
    assert p.resolve({"a": 1.5}) == pytest.approx(3.5)
    assert (-p).resolve({"a": 1.5}) == pytest.approx(-3.5)
    assert p.shifted(1.0).resolve({"a": 1.5}) == pytest.approx(4.5)
    with pytest.raises(CircuitError):
        p.resolve({})


def test_parameter_names_first_reference_order():
    # [TRIVIAL]
    c = Circuit(2)
    c.rz(ParamExpr("b"), 0).ry(ParamExpr("a"), 1).rz(ParamExpr("b"), 1)
    assert c.parameter_names == ["b", "a"]


def test_gate_validation():
    # [TRIVIAL]
    with pytest.raises(CircuitError):
        Gate("CX", (1, 1))
    with pytest.raises(CircuitError):
        Gate("RZ", (0,))  # missing angle
    with pytest.raises(CircuitError):
        Gate("H", (0,), 1.0)  # spurious angle
    with pytest.raises(CircuitError):
        Circuit(2).add(Gate("H", (2,)))


def test_inverse_circuit():
    # [DERIVED] U U^{-1} = identity for random circuits (including SqrtX)
    rng = np.random.default_rng(4)
    for _ in range(5):
        c = random_circuit(rng, 3, 12)
        full = c.copy().extend(inverse_circuit(c).gates)
        np.testing.assert_allclose(circuit_unitary(full), np.eye(8), atol=1e-10)


def test_estimate_exact_mode():
    # [TRIVIAL] shots=0 equals the dense expectation
    c = Circuit(2)
    c.h(0).cx(0, 1)
    h = PauliSum.from_labels([("ZZ", 1.0), ("XX", 0.5), ("II", 0.25)])
    r = estimate(c, {}, h, 0, 0)
    assert r.mean == pytest.approx(expectation_exact(h, run_circuit(c)), abs=1e-12)
    assert r.std_error == 0.0
    with pytest.raises(CircuitError):
        estimate(c, {}, h, 0, 0, noise=NoiseModel(p1=0.01))


def test_estimate_deterministic_and_trivial_noise_identical():
    # [DERIVED] fixed seed reproduces bit-identically; an all-zero noise model
    # takes the same code path as no noise at all
    c = Circuit(2)
    c.h(0).cx(0, 1).ry(0.3, 1)
    h = PauliSum.from_labels([("ZZ", 1.0), ("XI", -0.4), ("YY", 0.2)])
    r1 = estimate(c, {}, h, 512, 7)
    r2 = estimate(c, {}, h, 512, 7)
    r3 = estimate(c, {}, h, 512, 7, noise=NoiseModel())
    assert r1 == r2 == r3


def test_estimate_statistics():
    # [DERIVED] shot mean converges to the exact value (5 sigma) and the
    # reported standard error shrinks like 1/sqrt(shots)
    c = Circuit(2)
    c.ry(0.8, 0).cx(0, 1)
    h = PauliSum.from_labels([("ZZ", 1.0), ("XX", 0.5)])
    exact = expectation_exact(h, run_circuit(c))
    r = estimate(c, {}, h, 40000, 3)
    assert abs(r.mean - exact) < 5 * r.std_error + 1e-12
    r_small = estimate(c, {}, h, 400, 3)
    assert r.std_error < r_small.std_error
    assert r.std_error == pytest.approx(r_small.std_error / 10, rel=0.5)


def test_grouping_is_qubit_wise_commuting():
    # [DERIVED] greedy groups: pairwise qubit-wise commuting, identity dropped,
    # every non-identity term placed exactly once
    h = PauliSum.from_labels([("II", 1.0), ("ZI", 0.1), ("IZ", 0.2), ("ZZ", 0.3),
                              ("XI", 0.4), ("XX", 0.5), ("YY", 0.6)])
    groups = group_commuting_terms(h)
    placed = [t.label() for g in groups for t in g]
    assert sorted(placed) == sorted(["ZI", "IZ", "ZZ", "XI", "XX", "YY"])
    for g in groups:
        for i, a in enumerate(g):
            for b in g[i + 1:]:
                for q in range(2):
                    pa = ((a.x >> q) & 1, (a.z >> q) & 1)
                    pb = ((b.x >> q) & 1, (b.z >> q) & 1)
                    assert pa == (0, 0) or pb == (0, 0) or pa == pb


def test_readout_error_bias():
    # [DERIVED] measuring Z on |0> with symmetric readout flip p gives
    # mean 1 - 2p (exactly in expectation; 5 sigma statistically)
    c = Circuit(1)
    c.rz(0.0, 0)  # identity-equivalent gate so the circuit is non-empty
    h = PauliSum.from_labels([("Z", 1.0)])
    p = 0.05
    r = estimate(c, {}, h, 60000, 11, noise=NoiseModel(readout01=p, readout10=p))
    se = math.sqrt((1 - (1 - 2 * p) ** 2) / 60000)
    assert abs(r.mean - (1 - 2 * p)) < 5 * se


def test_depolarizing_bias():
    # [DERIVED] one X gate with 1-qubit depolarizing p: E[Z] = -(1 - 4p/3)
    c = Circuit(1)
    c.x(0)
    h = PauliSum.from_labels([("Z", 1.0)])
    p = 0.12
    r = estimate(c, {}, h, 60000, 5, noise=NoiseModel(p1=p))
    want = -(1 - 4 * p / 3)
    assert abs(r.mean - want) < 5 * math.sqrt((1 - want**2) / 60000)


def test_noise_model_validation():
    # [TRIVIAL]
    with pytest.raises(CircuitError):
        NoiseModel(p1=-0.1)
    with pytest.raises(CircuitError):
        NoiseModel(readout01=1.5)
    assert NoiseModel().is_trivial
    assert not NoiseModel(p2=0.01).is_trivial


def test_transpile_preserves_unitary():
    # [DERIVED] lowering + routing is unitarily equivalent up to global phase
    rng = np.random.default_rng(9)
    line = [(0, 1), (1, 2), (2, 3)]
    for _ in range(4):
        c = random_circuit(rng, 4, 10)
        out, depth, n2q = transpile(c, line)
        u0 = circuit_unitary(c)
        u1 = circuit_unitary(out)
        phase = u1[0, 0] / u0[0, 0] if abs(u0[0, 0]) > 1e-9 else \
            (u1.flatten()[np.argmax(np.abs(u0))] / u0.flatten()[np.argmax(np.abs(u0))])
        np.testing.assert_allclose(u1, phase * u0, atol=1e-9)
        assert {g.kind for g in out.gates} <= {"SqrtX", "RZ", "CZ"}
        assert depth >= 1 and n2q >= 0


def test_transpile_cx_costs_one_cz():
    # [DERIVED] adjacent CX lowers to exactly one CZ
    c = Circuit(2)
    c.cx(0, 1)
    out, _, n_cz = transpile(c, [(0, 1)])
    assert n_cz == 1


def test_transpile_routes_distant_cx():
    # [DERIVED] CX between line ends routes via SWAPs there and back:
    # 2 SWAPs (3 CZ each) + 1 CZ = 7 on a 3-qubit line
    c = Circuit(3)
    c.cx(0, 2)
    out, _, n_cz = transpile(c, [(0, 1), (1, 2)])
    assert n_cz == 7
    u0 = circuit_unitary(c)
    u1 = circuit_unitary(out)
    phase = u1[0, 0] / u0[0, 0]
    np.testing.assert_allclose(u1, phase * u0, atol=1e-9)


def test_transpile_rejects_bad_coupling():
    # [TRIVIAL]
    c = Circuit(3)
    c.cx(0, 2)
    with pytest.raises(TranspileError):
        transpile(c, [(0, 1)])  # qubit 2 disconnected
    with pytest.raises(TranspileError):
        transpile(c, [(0, 5)])


def test_circuit_stats_depth():
    # [TRIVIAL] parallel gates share a level; two-qubit gates join levels
    c = Circuit(3)
    c.h(0).h(1).cx(0, 1).rz(0.1, 2)
    s = circuit_stats(c)
    assert s.depth == 2
    assert s.gate_counts == {"H": 2, "CX": 1, "RZ": 1}


def test_derive_rng_streams_independent():
    # [TRIVIAL] distinct counters give distinct deterministic streams
    a = derive_rng(42, 0).random(4)
    b = derive_rng(42, 1).random(4)
    a2 = derive_rng(42, 0).random(4)
    np.testing.assert_array_equal(a, a2)
    assert not np.allclose(a, b)


def test_estimator_result_fields():
    # [TRIVIAL]
    r = EstimatorResult(1.0, 0.1, 100, 7)
    assert (r.mean, r.std_error, r.shots, r.seed) == (1.0, 0.1, 100, 7)
