"""Sparse n-qubit Pauli-sum arithmetic and exact diagonalization.

Terms are stored in symplectic form: a pair of bitmasks (x, z) denotes the
operator word ``prod_q X^x_q Z^z_q``. A ``Y`` on qubit q corresponds to
x_q = z_q = 1 with a factor of i folded into the stored coefficient
(Y = i X Z), so label round-trips like ``"XYZI"`` are exact and term
multiplication reduces to mask XORs plus integer phase bookkeeping.

Qubit 0 is the least significant bit of all basis-state indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

COEFF_TOL = 1e-12

_LABEL_TO_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_XZ_TO_LABEL = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


class PauliError(ValueError):
    pass


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliTerm:
    """One Pauli word with a complex coefficient, in (x, z) mask form."""

    n_qubits: int
    x: int
    z: int
    coefficient: complex

    @classmethod
    def from_label(cls, label: str, coefficient: complex = 1.0) -> "PauliTerm":
        """Build a term from a string like "XYZI"; index 0 is qubit 0."""
        x = z = 0
        n_y = 0
        for q, ch in enumerate(label):
            try:
                xb, zb = _LABEL_TO_XZ[ch]
            except KeyError:
                raise PauliError(f"invalid Pauli letter {ch!r}") from None
            x |= xb << q
            z |= zb << q
            n_y += xb & zb
        return cls(len(label), x, z, complex(coefficient) * (1j**n_y))

    @property
    def label_coefficient(self) -> complex:
        """Coefficient with the folded Y-phases removed (the XYZ-string basis)."""
        return self.coefficient * (-1j) ** _popcount(self.x & self.z)

    def label(self) -> str:
        return "".join(
            _XZ_TO_LABEL[((self.x >> q) & 1, (self.z >> q) & 1)]
            for q in range(self.n_qubits)
        )

    @property
    def weight(self) -> int:
        """Number of non-identity single-qubit factors."""
        return _popcount(self.x | self.z)


def multiply_terms(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Product of two Pauli words; phase tracked exactly."""
    if a.n_qubits != b.n_qubits:
        raise PauliError("qubit-count mismatch")
    sign = -1.0 if _popcount(a.z & b.x) % 2 else 1.0
    return PauliTerm(a.n_qubits, a.x ^ b.x, a.z ^ b.z, a.coefficient * b.coefficient * sign)


class PauliSum:
    """Weighted sum of Pauli words over a fixed qubit count."""

    __slots__ = ("n_qubits", "_terms")

    def __init__(self, n_qubits: int, terms: dict[tuple[int, int], complex] | None = None):
        self.n_qubits = n_qubits
        self._terms: dict[tuple[int, int], complex] = dict(terms or {})

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls(n_qubits)

    @classmethod
    def identity(cls, n_qubits: int, coefficient: complex = 1.0) -> "PauliSum":
        return cls(n_qubits, {(0, 0): complex(coefficient)})

    @classmethod
    def from_terms(cls, terms: list[PauliTerm]) -> "PauliSum":
        if not terms:
            raise PauliError("empty term list; use PauliSum.zero")
        s = cls(terms[0].n_qubits)
        for t in terms:
            s.add_term(t)
        return s

    @classmethod
    def from_labels(cls, pairs: list[tuple[str, complex]]) -> "PauliSum":
        return cls.from_terms([PauliTerm.from_label(lbl, c) for lbl, c in pairs])

    # -- basic algebra --------------------------------------------------

    def add_term(self, term: PauliTerm) -> None:
        if term.n_qubits != self.n_qubits:
            raise PauliError("qubit-count mismatch")
        key = (term.x, term.z)
        c = self._terms.get(key, 0.0) + term.coefficient
        if abs(c) < COEFF_TOL:
            self._terms.pop(key, None)
        else:
            self._terms[key] = c

    def terms(self) -> list[PauliTerm]:
        return [
            PauliTerm(self.n_qubits, x, z, c)
            for (x, z), c in sorted(self._terms.items())
        ]

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if other.n_qubits != self.n_qubits:
            raise PauliError("qubit-count mismatch")
        out = PauliSum(self.n_qubits, self._terms)
        for t in other.terms():
            out.add_term(t)
        return out

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (other * -1.0)

    def __mul__(self, scalar: complex) -> "PauliSum":
        out = PauliSum(self.n_qubits)
        for (x, z), c in self._terms.items():
            cc = c * scalar
            if abs(cc) >= COEFF_TOL:
                out._terms[(x, z)] = cc
        return out

    __rmul__ = __mul__

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        if other.n_qubits != self.n_qubits:
            raise PauliError("qubit-count mismatch")
        out = PauliSum(self.n_qubits)
        for ta in self.terms():
            for tb in other.terms():
                out.add_term(multiply_terms(ta, tb))
        return out

    def dagger(self) -> "PauliSum":
        out = PauliSum(self.n_qubits)
        for (x, z), c in self._terms.items():
            # (X^x Z^z)^dagger = (-1)^{x.z} X^x Z^z
            sign = -1.0 if _popcount(x & z) % 2 else 1.0
            out._terms[(x, z)] = np.conj(c) * sign
        return out

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        for (x, z), c in self._terms.items():
            lbl_c = c * (-1j) ** _popcount(x & z)
            if abs(lbl_c.imag) > tol:
                return False
        return True

    def coefficient(self, label: str) -> complex:
        t = PauliTerm.from_label(label)
        return self._terms.get((t.x, t.z), 0.0) * (-1j) ** _popcount(t.x & t.z)

    # -- dense realization ----------------------------------------------

    def to_matrix(self, cap: int = 14) -> np.ndarray:
        """Dense 2^n x 2^n matrix of the sum."""
        if self.n_qubits > cap:
            raise ResourceWarning(
                f"{self.n_qubits} qubits exceeds dense-matrix cap {cap}"
            )
        dim = 1 << self.n_qubits
        basis = np.arange(dim)
        mat = np.zeros((dim, dim), dtype=complex)
        for (x, z), c in self._terms.items():
            # X^x Z^z |b> = (-1)^{popcount(b & z)} |b ^ x>
            signs = 1.0 - 2.0 * (np.bitwise_count(basis & z) & 1).astype(float)
            mat[basis ^ x, basis] += c * signs
        return mat


def to_matrix(h: PauliSum, cap: int = 14) -> np.ndarray:
    return h.to_matrix(cap=cap)


def exact_ground_energy(h: PauliSum, cap: int = 14) -> tuple[float, np.ndarray]:
    """Minimum eigenvalue and a unit ground vector of a Hermitian sum."""
    if not h.is_hermitian():
        raise PauliError("ground-energy request for a non-Hermitian sum")
    mat = h.to_matrix(cap=cap)
    evals, evecs = np.linalg.eigh(mat)
    return float(evals[0]), evecs[:, 0]


def expectation_exact(h: PauliSum, state: np.ndarray) -> float:
    """<state|h|state> for a normalized state vector."""
    state = np.asarray(state, dtype=complex)
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-10:
        raise PauliError(f"state is not normalized (norm {norm})")
    dim = 1 << h.n_qubits
    if state.shape != (dim,):
        raise PauliError("state dimension mismatch")
    basis = np.arange(dim)
    val = 0.0 + 0.0j
    for (x, z), c in h._terms.items():
        signs = 1.0 - 2.0 * (np.bitwise_count(basis & z) & 1).astype(float)
        val += c * np.vdot(state[basis ^ x], signs * state[basis])
    if h.is_hermitian() and abs(val.imag) > 1e-10:
        raise PauliError("expectation of a Hermitian sum came out complex")
    return float(val.real)
