"""Ansatz construction: excitations, Pauli exponentials, HF preparation,
UCCSD and hardware-efficient circuits."""

import math

import numpy as np
import pytest
from scipy.linalg import expm

import oracles
from qve.ansatz import (AnsatzError, build_hea, build_uccsd, excitations,
                        hf_state_circuit, pauli_evolution)
from qve.circuit import Circuit, ParamExpr, circuit_stats, circuit_unitary, \
    run_circuit, transpile
from qve.fermion import hartree_fock_occupation
from qve.mapping import MAPPERS, encode_parity_state
from qve.pauli import PauliSum, PauliTerm, expectation_exact
from qve.pipeline import problem_to_pauli


def test_excitation_counts_h2():
    # [DERIVED] (1,1,2): 2 spin-conserving singles + 1 double = 3 parameters
    exc = excitations(1, 1, 2)
    assert exc.singles == ((0, 1), (2, 3))
    assert exc.doubles == ((0, 2, 1, 3),)
    assert exc.n_parameters == 3


def test_excitation_counts_beh2_active_space():
    # [PAPER] (1,1,3): 4 singles + 4 doubles = 8 parameters
    exc = excitations(1, 1, 3)
    assert len(exc.singles) == 4
    assert len(exc.doubles) == 4
    assert exc.n_parameters == 8
    # every excitation conserves per-spin electron numbers
    spin = lambda m: m // 3
    for i, a in exc.singles:
        assert spin(i) == spin(a)
    for i, j, k, l in exc.doubles:
        assert sorted((spin(i), spin(j))) == sorted((spin(k), spin(l)))


def test_pauli_evolution_matches_matrix_exponential():
    # [DERIVED] synthesized circuit equals expm(theta * c * P) exactly,
    # including phase, for anti-Hermitian generators c = i*lambda
    rng = np.random.default_rng(2)
    for lbl in ("XY", "ZZ", "YIX", "XYZ"):
        lam = float(rng.normal())
        term = PauliTerm.from_label(lbl, 1j * lam)
        theta = float(rng.uniform(-2, 2))
        gates = pauli_evolution(term, ParamExpr("t"))
        c = Circuit(len(lbl))
        c.extend(gates)
        got = circuit_unitary(c, {"t": theta})
        want = expm(theta * 1j * lam * oracles.pauli_label_matrix(lbl))
        np.testing.assert_allclose(got, want, atol=1e-10)


def test_pauli_evolution_rejects_bad_generators():
    # [TRIVIAL] real coefficients and identity terms are not anti-Hermitian
    with pytest.raises(AnsatzError):
        pauli_evolution(PauliTerm.from_label("XY", 1.0), ParamExpr("t"))
    with pytest.raises(AnsatzError):
        pauli_evolution(PauliTerm.from_label("II", 1j), ParamExpr("t"))


@pytest.mark.parametrize("mapper", ["jw", "parity", "bk"])
def test_hf_state_energy(beh2_problem, mapper):
    # [DERIVED] encoded HF basis state gives the same energy in every mapping
    occ = hartree_fock_occupation(1, 1, 3)
    h = problem_to_pauli(beh2_problem, mapper, False)
    c = hf_state_circuit(occ, mapper, False)
    e = expectation_exact(h, run_circuit(c))
    assert e == pytest.approx(-15.56033, abs=5e-6)  # [PAPER] HF reference energy


def test_hf_state_energy_tapered(beh2_problem, beh2_tapered):
    # [PAPER] tapered parity HF expectation hits the same HF energy
    occ = hartree_fock_occupation(1, 1, 3)
    c = hf_state_circuit(occ, "parity", True)
    assert c.n_qubits == 4
    e = expectation_exact(beh2_tapered, run_circuit(c))
    assert e == pytest.approx(-15.56033, abs=5e-6)


def test_hf_state_bit_patterns():
    # [DERIVED] prepared basis states match the encodings
    occ = hartree_fock_occupation(1, 1, 3)
    jw = run_circuit(hf_state_circuit(occ, "jw", False))
    assert np.argmax(np.abs(jw)) == occ.index()
    par = run_circuit(hf_state_circuit(occ, "parity", False))
    bits = encode_parity_state(occ.occupations)
    assert np.argmax(np.abs(par)) == sum(b << q for q, b in enumerate(bits))


def test_uccsd_theta_zero_is_hf(beh2_problem, beh2_tapered):
    # [DERIVED] at theta = 0 the UCCSD circuit reduces to the HF state
    c = build_uccsd(1, 1, 3, "parity", True)
    zeros = {name: 0.0 for name in c.parameter_names}
    psi = run_circuit(c, zeros)
    e = expectation_exact(beh2_tapered, psi)
    assert e == pytest.approx(-15.56033, abs=5e-6)


def test_uccsd_parameter_count(beh2_problem):
    # [PAPER] BeH2 active space: 8 UCCSD parameters on 4 qubits
    c = build_uccsd(1, 1, 3, "parity", True)
    assert c.n_qubits == 4
    assert len(c.parameter_names) == 8
    assert c.parameter_names == [f"theta{i}" for i in range(8)]


def test_uccsd_conserves_particle_number():
    # [DERIVED] JW-mapped total-number operator is invariant under UCCSD
    from qve.fermion import CREATE, ANNIHILATE, FermionOperator
    n_spatial = 2
    num = FermionOperator(2 * n_spatial)
    from qve.fermion import LadderTerm
    for m in range(2 * n_spatial):
        num.add_term(LadderTerm(((m, CREATE), (m, ANNIHILATE)), 1.0))
    n_op = MAPPERS["jw"](num)
    c = build_uccsd(1, 1, n_spatial, "jw", False)
    rng = np.random.default_rng(0)
    theta = {name: float(rng.uniform(-1, 1)) for name in c.parameter_names}
    psi = run_circuit(c, theta)
    assert expectation_exact(n_op, psi) == pytest.approx(2.0, abs=1e-10)


def test_uccsd_taper_requires_parity():
    # [TRIVIAL]
    with pytest.raises(AnsatzError):
        build_uccsd(1, 1, 2, "bk", True)
    with pytest.raises(AnsatzError):
        build_uccsd(1, 1, 2, "jw", True)


def test_hea_structure():
    # [PAPER] 4 qubits, reps 1: 16 parameters, logical depth 7, 3 CX
    c = build_hea(4, 1)
    stats = circuit_stats(c)
    assert stats.n_parameters == 16
    assert stats.depth == 7
    assert stats.gate_counts["CX"] == 3
    assert stats.gate_counts["RY"] == 8 and stats.gate_counts["RZ"] == 8


def test_hea_transpiled_two_qubit_count():
    # [PAPER] transpiling the (4,1) ansatz onto a 4-qubit line keeps exactly
    # 3 two-qubit gates (now CZ)
    c = build_hea(4, 1)
    _, _, n_cz = transpile(c, [(0, 1), (1, 2), (2, 3)])
    assert n_cz == 3


def test_hea_reps_scaling():
    # [TRIVIAL] parameters: 2 n (reps+1); entangler count: (n-1) reps
    for n, reps in ((4, 0), (4, 3), (6, 2)):
        c = build_hea(n, reps)
        stats = circuit_stats(c)
        assert stats.n_parameters == 2 * n * (reps + 1)
        assert stats.gate_counts.get("CX", 0) == (n - 1) * reps
    with pytest.raises(AnsatzError):
        build_hea(4, -1)


def test_h2_uccsd_reaches_fci(h2_problem):
    # [DERIVED] 3-parameter UCCSD on 4 qubits minimizes to the FCI energy
    # (exact expectations, 1e-6)
    from scipy.optimize import minimize
    _, _, _, problem = h2_problem
    h = problem_to_pauli(problem, "jw", False)
    c = build_uccsd(1, 1, 2, "jw", False)
    names = c.parameter_names

    def energy(theta):
        return expectation_exact(h, run_circuit(c, dict(zip(names, theta))))

    res = minimize(energy, np.zeros(3), method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000})
    assert res.fun == pytest.approx(-1.1372838351103938, abs=1e-6)
