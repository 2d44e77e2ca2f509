"""Fermion-to-qubit mapping checks: matrix-level equivalence oracles plus the
published BeH2 mapping statistics."""

import numpy as np
import pytest

import oracles
from qve.fermion import (ANNIHILATE, CREATE, FermionOperator,
                        hartree_fock_occupation, to_matrix)
from qve.mapping import (MAPPERS, MappingError, _FenwickTree,
                         encode_parity_state, mapping_stats, taper_two_qubits)
from qve.pauli import PauliSum, exact_ground_energy
from qve.pipeline import problem_to_pauli


def mapped_matrix(mapper, op):
    return oracles.pauli_sum_matrix(MAPPERS[mapper](op))


@pytest.mark.parametrize("mapper", ["jw", "parity", "bk"])
def test_single_mode_number_operator(mapper):
    # [DERIVED] n_0 = a+_0 a_0 on one mode must map to (I - Z)/2 in every encoding
    num = FermionOperator.from_term(1, ((0, CREATE), (0, ANNIHILATE)))
    np.testing.assert_allclose(mapped_matrix(mapper, num),
                               np.diag([0.0, 1.0]), atol=1e-12)


@pytest.mark.parametrize("mapper", ["jw", "parity", "bk"])
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_ladder_anticommutation_preserved(mapper, n):
    # [DERIVED] mapped ladder operators satisfy {A_p, A_q^+} = delta_pq (1e-10)
    mats = {(p, c): mapped_matrix(mapper, FermionOperator.ladder(n, p, c))
            for p in range(n) for c in (True, False)}
    eye = np.eye(1 << n)
    for p in range(n):
        for q in range(n):
            a, bd = mats[(p, False)], mats[(q, True)]
            np.testing.assert_allclose(a @ bd + bd @ a, (p == q) * eye, atol=1e-10)
            b = mats[(q, False)]
            np.testing.assert_allclose(a @ b + b @ a, 0.0, atol=1e-10)


@pytest.mark.parametrize("mapper", ["jw", "parity", "bk"])
def test_random_operator_spectrum_preserved(mapper):
    # [DERIVED] mapped spectrum equals the Fock-space spectrum (1e-10)
    rng = np.random.default_rng(17)
    op = oracles.random_number_conserving(2, rng)
    ref = np.linalg.eigvalsh(oracles.fermion_matrix(op))
    got = np.linalg.eigvalsh(mapped_matrix(mapper, op))
    np.testing.assert_allclose(got, ref, atol=1e-10)


def test_jw_number_operator_and_hopping():
    # [DERIVED] JW: n_p = (I - Z_p)/2 and the hopping term keeps the Z string
    n = 3
    num = FermionOperator.from_term(n, ((1, CREATE), (1, ANNIHILATE)))
    h = MAPPERS["jw"](num)
    assert h.coefficient("III") == pytest.approx(0.5)
    assert h.coefficient("IZI") == pytest.approx(-0.5)
    hop = FermionOperator.from_term(n, ((0, CREATE), (2, ANNIHILATE)))
    hop = hop + hop.dagger()
    h = MAPPERS["jw"](hop)
    assert h.coefficient("XZX") == pytest.approx(0.5)
    assert h.coefficient("YZY") == pytest.approx(0.5)


def test_parity_number_operator_uses_neighbor_z():
    # [DERIVED] parity encoding: n_p = (I - Z_{p-1} Z_p)/2 for p > 0
    n = 3
    num = FermionOperator.from_term(n, ((1, CREATE), (1, ANNIHILATE)))
    h = MAPPERS["parity"](num)
    assert h.coefficient("III") == pytest.approx(0.5)
    assert h.coefficient("ZZI") == pytest.approx(-0.5)


def _stored_bits(tree, occ):
    def subtree(j):
        acc = occ[j]
        for ch in tree.flip_set(j):
            acc ^= subtree(ch)
        return acc
    return [subtree(j) for j in range(len(occ))]


@pytest.mark.parametrize("n", [1, 2, 3, 5, 6, 8])
def test_fenwick_sets_against_brute_force(n):
    # [DERIVED] update/parity/flip sets verified by simulating the stored bits
    rng = np.random.default_rng(n)
    tree = _FenwickTree(n)
    for _ in range(20):
        occ = list(rng.integers(0, 2, size=n))
        stored = _stored_bits(tree, occ)
        for j in range(n):
            # parity_set reconstructs the prefix parity of modes 0..j-1
            prefix = sum(occ[:j]) % 2
            assert prefix == sum(stored[k] for k in tree.parity_set(j)) % 2
            # flipping occupation j toggles exactly {j} plus its update set
            occ2 = list(occ)
            occ2[j] ^= 1
            changed = {k for k, (a, b) in enumerate(zip(stored, _stored_bits(tree, occ2)))
                       if a != b}
            assert changed == tree.update_set(j) | {j}


def test_encode_parity_state():
    # [TRIVIAL] inclusive cumulative parities
    assert encode_parity_state((1, 0, 0, 1, 0, 0)) == (1, 1, 1, 0, 0, 0)
    assert encode_parity_state((0, 1, 1, 0)) == (0, 1, 0, 0)


def test_taper_requires_conserving_operator():
    # [TRIVIAL] an X on a parity qubit flags a non-conserving operator
    h = PauliSum.from_labels([("IXII", 1.0)])  # X on the alpha-parity qubit
    with pytest.raises(MappingError):
        taper_two_qubits(h, 1, 1)
    with pytest.raises(MappingError):
        taper_two_qubits(PauliSum.from_labels([("IIIY", 1.0)]), 1, 1)
    with pytest.raises(MappingError):  # odd qubit count
        taper_two_qubits(PauliSum.from_labels([("ZZZ", 1.0)]), 1, 1)


def test_taper_preserves_sector_ground_energy(beh2_problem):
    # [DERIVED] tapering replaces the two parity qubits by eigenvalues, so the
    # correct-sector ground energy is unchanged
    full = problem_to_pauli(beh2_problem, "parity", False)
    tapered = problem_to_pauli(beh2_problem, "parity", True)
    e_full = exact_sector_minimum(full, beh2_problem)
    e_tapered, _ = exact_ground_energy(tapered)
    assert e_tapered == pytest.approx(e_full, abs=1e-10)


def exact_sector_minimum(h, problem):
    """Minimum eigenvalue restricted to the physical electron-number sector."""
    n = 2 * problem.n_spatial
    mat = oracles.pauli_sum_matrix(h)
    keep = []
    for idx in range(1 << n):
        bits = [(idx >> q) & 1 for q in range(n)]
        # invert the inclusive parity encoding back to occupations
        occ = [bits[0]] + [bits[q] ^ bits[q - 1] for q in range(1, n)]
        if (sum(occ[:problem.n_spatial]) == problem.n_alpha
                and sum(occ[problem.n_spatial:]) == problem.n_beta):
            keep.append(idx)
    sub = mat[np.ix_(keep, keep)]
    return float(np.linalg.eigvalsh(sub)[0])


def test_mapping_stats_small_example():
    # [TRIVIAL] identity counts toward the average weight
    h = PauliSum.from_labels([("II", 1.0), ("XZ", 0.5), ("IZ", 0.25)])
    s = mapping_stats(h)
    assert (s.n_qubits, s.n_pauli_terms) == (2, 3)
    assert s.avg_weight == pytest.approx(1.0)


TABLE_ROWS = [
    ("jw", False, 6, 34, 2.71),
    ("parity", False, 6, 34, 3.12),
    ("parity", True, 4, 28, 2.57),
    ("bk", False, 6, 34, 3.24),
]


@pytest.mark.parametrize("mapper,taper,qubits,terms,avg", TABLE_ROWS)
def test_beh2_mapping_statistics(beh2_problem, mapper, taper, qubits, terms, avg):
    # [PAPER] published mapping statistics for the BeH2 3-orbital fixture;
    # counts exact, average weight to 0.01
    s = mapping_stats(problem_to_pauli(beh2_problem, mapper, taper))
    assert s.n_qubits == qubits
    assert s.n_pauli_terms == terms
    assert s.avg_weight == pytest.approx(avg, abs=0.01)


def test_beh2_exact_energy(beh2_tapered):
    # [PAPER] exact diagonalization of the tapered fixture
    e, _ = exact_ground_energy(beh2_tapered)
    assert e == pytest.approx(-15.56089, abs=5e-6)


@pytest.mark.parametrize("mapper", ["jw", "parity", "bk"])
def test_beh2_spectra_agree_across_mappings(beh2_problem, mapper):
    # [DERIVED] all encodings share the full spectrum
    from qve.fermion import build_hamiltonian
    from qve.scf import spin_orbital_expand
    h_so, g_so = spin_orbital_expand(beh2_problem)
    op = build_hamiltonian(h_so, g_so, beh2_problem.e_offset)
    ref = np.linalg.eigvalsh(to_matrix(op))
    got = np.linalg.eigvalsh(problem_to_pauli(beh2_problem, mapper, False).to_matrix())
    np.testing.assert_allclose(got, ref, atol=1e-8)
