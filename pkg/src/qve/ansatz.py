"""Ansatz construction: UCCSD (one Trotter step), hardware-efficient circuit,
Hartree-Fock state preparation, and Pauli-exponential synthesis."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Circuit, Gate, ParamExpr
from .fermion import ANNIHILATE, CREATE, FermionOperator, FockState, LadderTerm, \
    hartree_fock_occupation
from .mapping import MAPPERS, _FenwickTree, encode_parity_state, taper_two_qubits
from .pauli import PauliTerm

GENERATOR_REAL_TOL = 1e-12


class AnsatzError(ValueError):
    pass


@dataclass(frozen=True)
class ExcitationList:
    """Spin-conserving excitations out of the HF determinant (blocked indices)."""

    singles: tuple[tuple[int, int], ...]
    doubles: tuple[tuple[int, int, int, int], ...]

    @property
    def n_parameters(self) -> int:
        return len(self.singles) + len(self.doubles)


def excitations(n_alpha: int, n_beta: int, n_spatial: int) -> ExcitationList:
    """All spin-conserving singles and doubles, lexicographically ordered."""
    occ = hartree_fock_occupation(n_alpha, n_beta, n_spatial).occupations
    occupied = [m for m, b in enumerate(occ) if b]
    virtual = [m for m, b in enumerate(occ) if not b]
    spin = [m // n_spatial for m in range(2 * n_spatial)]
    singles = tuple((i, a) for i in occupied for a in virtual if spin[i] == spin[a])
    doubles = []
    for ii, i in enumerate(occupied):
        for j in occupied[ii + 1:]:
            for ka, k in enumerate(virtual):
                for l in virtual[ka + 1:]:
                    if sorted((spin[i], spin[j])) == sorted((spin[k], spin[l])):
                        doubles.append((i, j, k, l))
    return ExcitationList(singles, tuple(doubles))


def pauli_evolution(term: PauliTerm, param: ParamExpr | None = None,
                    param_name: str | None = None) -> list[Gate]:
    """Gates implementing exp(theta * c * P) for an anti-Hermitian term c = i*lambda.

    Basis-change each support qubit to Z, run a CX parity ladder to the last
    support qubit, rotate RZ(-2*lambda*theta) there, and unwind.
    """
    c = term.label_coefficient
    if abs(c.real) > GENERATOR_REAL_TOL:
        raise AnsatzError(f"generator coefficient {c} is not purely imaginary")
    lam = c.imag
    if param is None:
        param = ParamExpr(param_name)
    support = [q for q in range(term.n_qubits)
               if (term.x >> q) & 1 or (term.z >> q) & 1]
    if not support:
        raise AnsatzError("cannot synthesize evolution of an identity term")
    enter: list[Gate] = []
    leave: list[Gate] = []
    for q in support:
        xb, zb = (term.x >> q) & 1, (term.z >> q) & 1
        if xb and not zb:  # X
            enter.append(Gate("H", (q,)))
            leave.append(Gate("H", (q,)))
        elif xb and zb:  # Y
            enter += [Gate("RZ", (q,), -math.pi / 2), Gate("H", (q,))]
            leave += [Gate("RZ", (q,), math.pi / 2), Gate("H", (q,))]
    ladder = [Gate("CX", (support[i], support[i + 1])) for i in range(len(support) - 1)]
    angle = ParamExpr(param.name, -2.0 * lam * param.scale, -2.0 * lam * param.offset)
    rot = Gate("RZ", (support[-1],), angle)
    return enter + ladder + [rot] + list(reversed(ladder)) + list(reversed(leave))


def _encode_occupation(occ: tuple[int, ...], mapper: str, taper: bool) -> tuple[int, ...]:
    if taper and mapper != "parity":
        raise AnsatzError("two-qubit tapering is only defined for the parity mapping")
    if mapper == "jw":
        return occ
    if mapper == "parity":
        bits = encode_parity_state(occ)
        if taper:
            n = len(occ) // 2
            return tuple(b for q, b in enumerate(bits) if q not in (n - 1, 2 * n - 1))
        return bits
    if mapper == "bk":
        tree = _FenwickTree(len(occ))

        def subtree(j):
            acc = occ[j]
            for ch in tree.flip_set(j):
                acc ^= subtree(ch)
            return acc

        return tuple(subtree(j) for j in range(len(occ)))
    raise AnsatzError(f"unknown mapper {mapper!r}")


def hf_state_circuit(occupation: FockState, mapper: str, taper: bool = False) -> Circuit:
    """X gates preparing the mapped Hartree-Fock basis state."""
    bits = _encode_occupation(occupation.occupations, mapper, taper)
    c = Circuit(len(bits))
    for q, b in enumerate(bits):
        if b:
            c.x(q)
    return c


def build_uccsd(n_alpha: int, n_beta: int, n_spatial: int,
                mapper: str = "parity", taper: bool = False) -> Circuit:
    """HF preparation followed by one Trotter step of the UCCSD generator.

    The generator of each excitation is mapped with the same mapper/tapering
    as the Hamiltonian; parameters are theta0, theta1, ... in excitation order
    (singles then doubles, lexicographic).
    """
    if mapper not in MAPPERS:
        raise AnsatzError(f"unknown mapper {mapper!r}")
    if taper and mapper != "parity":
        raise AnsatzError("two-qubit tapering is only defined for the parity mapping")
    n_modes = 2 * n_spatial
    exc = excitations(n_alpha, n_beta, n_spatial)
    occ = hartree_fock_occupation(n_alpha, n_beta, n_spatial)
    circuit = hf_state_circuit(occ, mapper, taper)
    for idx, e in enumerate(list(exc.singles) + list(exc.doubles)):
        if len(e) == 2:
            i, a = e
            factors = ((a, CREATE), (i, ANNIHILATE))
        else:
            i, j, k, l = e
            factors = ((k, CREATE), (l, CREATE), (j, ANNIHILATE), (i, ANNIHILATE))
        t = FermionOperator.from_term(n_modes, factors)
        gen = t - t.dagger()
        mapped = MAPPERS[mapper](gen)
        if taper:
            mapped = taper_two_qubits(mapped, n_alpha, n_beta)
        param = ParamExpr(f"theta{idx}")
        for term in mapped.terms():
            circuit.extend(pauli_evolution(term, param))
    return circuit


def build_hea(n_qubits: int, reps: int, entanglement: str = "linear") -> Circuit:
    """RY+RZ rotation layers interleaved with linear CX chains."""
    if reps < 0:
        raise AnsatzError("reps must be >= 0")
    if entanglement != "linear":
        raise AnsatzError(f"unsupported entanglement pattern {entanglement!r}")
    c = Circuit(n_qubits)
    p = 0
    for layer in range(reps + 1):
        for q in range(n_qubits):
            c.ry(ParamExpr(f"theta{p}"), q)
            p += 1
        for q in range(n_qubits):
            c.rz(ParamExpr(f"theta{p}"), q)
            p += 1
        if layer < reps:
            for q in range(n_qubits - 1):
                c.cx(q, q + 1)
    return c
