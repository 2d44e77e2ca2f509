"""Parameterized circuits, statevector execution, shot estimation, transpilation.

Qubit 0 is the least significant bit of basis-state indices, matching the
Pauli and Fock modules. Noise is Monte-Carlo Pauli trajectories: the state is
kept per shot, a random Pauli error may follow each gate, and readout errors
flip measured bits.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .pauli import PauliSum, PauliTerm, expectation_exact


class CircuitError(ValueError):
    pass


class TranspileError(CircuitError):
    pass


@dataclass(frozen=True)
class ParamExpr:
    """Affine reference scale * theta + offset to a named parameter."""

    name: str
    scale: float = 1.0
    offset: float = 0.0

    def resolve(self, bindings: dict[str, float]) -> float:
        if self.name not in bindings:
            raise CircuitError(f"unbound parameter {self.name!r}")
        return self.scale * bindings[self.name] + self.offset

    def __neg__(self) -> "ParamExpr":
        return ParamExpr(self.name, -self.scale, -self.offset)

    def shifted(self, delta: float) -> "ParamExpr":
        return ParamExpr(self.name, self.scale, self.offset + delta)


# kind -> (arity, takes_angle)
GATE_KINDS = {
    "X": (1, False), "H": (1, False), "SqrtX": (1, False),
    "RX": (1, True), "RY": (1, True), "RZ": (1, True),
    "CX": (2, False), "CZ": (2, False), "SWAP": (2, False),
}

_SQRTX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
_HADAMARD = np.array([[1, 1], [1, -1]]) / math.sqrt(2.0)


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | ParamExpr | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        arity, takes_angle = GATE_KINDS[self.kind]
        if len(self.qubits) != arity:
            raise CircuitError(f"{self.kind} expects {arity} qubit(s), got {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise CircuitError(f"{self.kind} qubits must be distinct")
        if takes_angle != (self.angle is not None):
            raise CircuitError(f"{self.kind} angle mismatch")


class Circuit:
    """Ordered gate list over a fixed qubit count with named parameters."""

    def __init__(self, n_qubits: int):
        if n_qubits < 1:
            raise CircuitError("need at least one qubit")
        self.n_qubits = n_qubits
        self.gates: list[Gate] = []
        self.parameter_names: list[str] = []

    def add(self, gate: Gate) -> "Circuit":
        for q in gate.qubits:
            if not 0 <= q < self.n_qubits:
                raise CircuitError(f"qubit {q} out of range for {self.n_qubits} qubits")
        if isinstance(gate.angle, ParamExpr) and gate.angle.name not in self.parameter_names:
            self.parameter_names.append(gate.angle.name)
        self.gates.append(gate)
        return self

    def extend(self, gates) -> "Circuit":
        for g in gates:
            self.add(g)
        return self

    # convenience builders
    def x(self, q): return self.add(Gate("X", (q,)))
    def h(self, q): return self.add(Gate("H", (q,)))
    def sx(self, q): return self.add(Gate("SqrtX", (q,)))
    def rx(self, a, q): return self.add(Gate("RX", (q,), a))
    def ry(self, a, q): return self.add(Gate("RY", (q,), a))
    def rz(self, a, q): return self.add(Gate("RZ", (q,), a))
    def cx(self, c, t): return self.add(Gate("CX", (c, t)))
    def cz(self, a, b): return self.add(Gate("CZ", (a, b)))
    def swap(self, a, b): return self.add(Gate("SWAP", (a, b)))

    def copy(self) -> "Circuit":
        out = Circuit(self.n_qubits)
        out.gates = list(self.gates)
        out.parameter_names = list(self.parameter_names)
        return out


def derive_rng(master_seed: int, *counters: int) -> np.random.Generator:
    """Project-wide PRNG derivation: one PCG64 stream per (seed, path)."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *map(int, counters)]))


def _angle_value(gate: Gate, bindings) -> float:
    a = gate.angle
    if isinstance(a, ParamExpr):
        return a.resolve(bindings or {})
    return float(a)


@lru_cache(maxsize=512)
def _flip_perm(n: int, mask: int) -> np.ndarray:
    return np.arange(1 << n) ^ mask


@lru_cache(maxsize=512)
def _cx_perm(n: int, control: int, target: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return idx ^ (((idx >> control) & 1) << target)


@lru_cache(maxsize=512)
def _swap_perm(n: int, a: int, b: int) -> np.ndarray:
    idx = np.arange(1 << n)
    ba = (idx >> a) & 1
    bb = (idx >> b) & 1
    diff = ba ^ bb
    return idx ^ (diff << a) ^ (diff << b)


@lru_cache(maxsize=512)
def _bit(n: int, q: int) -> np.ndarray:
    return (np.arange(1 << n) >> q) & 1


def _apply_1q_matrix(states: np.ndarray, u: np.ndarray, q: int, n: int) -> np.ndarray:
    shape = states.shape
    view = states.reshape(-1, 1 << (n - q - 1), 2, 1 << q)
    out = np.einsum("ab,shbl->shal", u, view)
    return out.reshape(shape)


def _apply_gate(states: np.ndarray, gate: Gate, bindings, n: int) -> np.ndarray:
    kind = gate.kind
    if kind == "X":
        return states[..., _flip_perm(n, 1 << gate.qubits[0])]
    if kind == "CX":
        return states[..., _cx_perm(n, *gate.qubits)]
    if kind == "SWAP":
        return states[..., _swap_perm(n, *gate.qubits)]
    if kind == "CZ":
        a, b = gate.qubits
        sign = 1.0 - 2.0 * (_bit(n, a) & _bit(n, b))
        return states * sign
    if kind == "RZ":
        t = _angle_value(gate, bindings)
        phase = np.where(_bit(n, gate.qubits[0]), np.exp(0.5j * t), np.exp(-0.5j * t))
        return states * phase
    if kind == "H":
        return _apply_1q_matrix(states, _HADAMARD, gate.qubits[0], n)
    if kind == "SqrtX":
        return _apply_1q_matrix(states, _SQRTX, gate.qubits[0], n)
    t = _angle_value(gate, bindings)
    c, s = math.cos(t / 2), math.sin(t / 2)
    if kind == "RY":
        u = np.array([[c, -s], [s, c]], dtype=complex)
    else:  # RX
        u = np.array([[c, -1j * s], [-1j * s, c]])
    return _apply_1q_matrix(states, u, gate.qubits[0], n)


def run_circuit(c: Circuit, bindings=None, initial_state=None) -> np.ndarray:
    """Statevector after applying the gate list to |0...0> (or initial_state)."""
    dim = 1 << c.n_qubits
    if initial_state is None:
        state = np.zeros(dim, dtype=complex)
        state[0] = 1.0
    else:
        state = np.asarray(initial_state, dtype=complex).copy()
        if state.shape != (dim,):
            raise CircuitError("initial state dimension mismatch")
    for g in c.gates:
        state = _apply_gate(state, g, bindings, c.n_qubits)
    return state


def circuit_unitary(c: Circuit, bindings=None) -> np.ndarray:
    """Dense unitary of the circuit (small-circuit verification helper)."""
    dim = 1 << c.n_qubits
    cols = np.eye(dim, dtype=complex)
    for g in c.gates:
        cols = _apply_gate(cols.T, g, bindings, c.n_qubits).T
    return cols


# -- noise -----------------------------------------------------------------


@dataclass(frozen=True)
class NoiseModel:
    """Uniform depolarizing + readout error model.

    p1/p2: error probability after each 1-/2-qubit gate (uniform random
    non-identity Pauli on the gate's qubits). readout01 = P(read 1 | is 0),
    readout10 = P(read 0 | is 1), identical on every qubit.
    """

    p1: float = 0.0
    p2: float = 0.0
    readout01: float = 0.0
    readout10: float = 0.0

    def __post_init__(self):
        for name in ("p1", "p2", "readout01", "readout10"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise CircuitError(f"noise probability {name}={v} outside [0, 1]")

    @property
    def is_trivial(self) -> bool:
        return self.p1 == self.p2 == self.readout01 == self.readout10 == 0.0


_PAULI_1Q = [(1, 0), (1, 1), (0, 1)]  # X, Y (phase ignored), Z


def _apply_pauli_rows(states: np.ndarray, rows: np.ndarray, qubits, codes: np.ndarray,
                      n: int) -> None:
    """In-place Pauli errors on selected trajectory rows; codes index non-identity
    Pauli words over the gate's qubits (base 4, 0 = identity excluded)."""
    for code in np.unique(codes):
        sel = rows[codes == code]
        xmask = zmask = 0
        cc = int(code)
        for q in qubits:
            local = cc & 3
            cc >>= 2
            if local:
                xb, zb = _PAULI_1Q[local - 1]
                xmask |= xb << q
                zmask |= zb << q
        sub = states[sel]
        if zmask:
            sub = sub * (1.0 - 2.0 * (np.bitwise_count(np.arange(1 << n) & zmask) & 1))
        if xmask:
            sub = sub[:, _flip_perm(n, xmask)]
        states[sel] = sub


def _run_trajectories(c: Circuit, bindings, shots: int, noise: NoiseModel,
                      rng: np.random.Generator) -> np.ndarray:
    """(shots, 2^n) batch of per-shot states under Pauli-trajectory noise."""
    n = c.n_qubits
    states = np.zeros((shots, 1 << n), dtype=complex)
    states[:, 0] = 1.0
    for g in c.gates:
        states = _apply_gate(states, g, bindings, n)
        p = noise.p1 if len(g.qubits) == 1 else noise.p2
        if p == 0.0:
            continue
        hit = np.flatnonzero(rng.random(shots) < p)
        if hit.size:
            n_paulis = 4 ** len(g.qubits) - 1
            codes = rng.integers(1, n_paulis + 1, size=hit.size)
            _apply_pauli_rows(states, hit, g.qubits, codes, n)
    return states


# -- estimation ------------------------------------------------------------


@dataclass(frozen=True)
class EstimatorResult:
    mean: float
    std_error: float
    shots: int
    seed: int


def _qubit_wise_commute(a: PauliTerm, b: PauliTerm) -> bool:
    overlap = (a.x | a.z) & (b.x | b.z)
    return ((a.x ^ b.x) | (a.z ^ b.z)) & overlap == 0


def group_commuting_terms(h: PauliSum) -> list[list[PauliTerm]]:
    """Greedy first-fit grouping under qubit-wise commutation (identity dropped)."""
    groups: list[list[PauliTerm]] = []
    for t in h.terms():
        if t.weight == 0:
            continue
        for g in groups:
            if all(_qubit_wise_commute(t, u) for u in g):
                g.append(t)
                break
        else:
            groups.append([t])
    return groups


def _basis_change_gates(group: list[PauliTerm], n: int) -> list[Gate]:
    """Rotate the shared measurement basis of a qubit-wise-commuting group to Z."""
    gates: list[Gate] = []
    for q in range(n):
        xb = zb = 0
        for t in group:
            if (t.x >> q) & 1 or (t.z >> q) & 1:
                xb, zb = (t.x >> q) & 1, (t.z >> q) & 1
                break
        if xb and not zb:  # X
            gates.append(Gate("H", (q,)))
        elif xb and zb:  # Y: S-dagger then H
            gates.append(Gate("RZ", (q,), -math.pi / 2))
            gates.append(Gate("H", (q,)))
    return gates


def _sample_outcomes(states: np.ndarray, rng: np.random.Generator, shots: int) -> np.ndarray:
    """One basis-state outcome per shot; states is (dim,) or (shots, dim)."""
    draws = rng.random(shots)
    if states.ndim == 1:
        probs = np.abs(states) ** 2
        cum = np.cumsum(probs)
        cum /= cum[-1]
        return np.searchsorted(cum, draws, side="right").clip(max=states.shape[-1] - 1)
    probs = np.abs(states) ** 2
    cum = np.cumsum(probs, axis=1)
    cum /= cum[:, -1:]
    return (cum < draws[:, None]).sum(axis=1).clip(max=states.shape[-1] - 1)


def _apply_readout(outcomes: np.ndarray, n: int, noise: NoiseModel,
                   rng: np.random.Generator) -> np.ndarray:
    if noise.readout01 == 0.0 and noise.readout10 == 0.0:
        return outcomes
    out = outcomes.copy()
    for q in range(n):
        u = rng.random(out.shape[0])
        bit = (out >> q) & 1
        flip = np.where(bit == 0, u < noise.readout01, u < noise.readout10)
        out ^= flip.astype(out.dtype) << q
    return out


def estimate(c: Circuit, bindings, h: PauliSum, shots: int, seed: int,
             noise: NoiseModel | None = None) -> EstimatorResult:
    """Shot-based (or exact, shots=0) expectation of h on the circuit output.

    Every qubit-wise-commuting group receives the full `shots` budget; group
    estimates are summed and their variances propagated independently. Group
    g uses the PRNG stream derived from (seed, g), so results do not depend
    on evaluation order.
    """
    if h.n_qubits != c.n_qubits:
        raise CircuitError("Hamiltonian/circuit qubit-count mismatch")
    if shots < 0:
        raise CircuitError("shots must be >= 0")
    if shots == 0:
        if noise is not None and not noise.is_trivial:
            raise CircuitError("exact mode (shots=0) cannot include noise")
        psi = run_circuit(c, bindings)
        return EstimatorResult(expectation_exact(h, psi), 0.0, 0, seed)

    n = c.n_qubits
    mean = float(h.coefficient("I" * n).real)
    variance = 0.0
    groups = group_commuting_terms(h)
    noisy = noise is not None and not (noise.p1 == noise.p2 == 0.0)
    base_state = None if noisy else run_circuit(c, bindings)
    for gi, group in enumerate(groups):
        rng = derive_rng(seed, gi)
        meas = _basis_change_gates(group, n)
        if noisy:
            full = c.copy().extend(meas)
            states = _run_trajectories(full, bindings, shots, noise, rng)
        else:
            states = base_state
            for g in meas:
                states = _apply_gate(states, g, bindings, n)
        outcomes = _sample_outcomes(states, rng, shots)
        if noise is not None:
            outcomes = _apply_readout(outcomes, n, noise, rng)
        energies = np.zeros(shots)
        for t in group:
            zmask = t.x | t.z
            signs = 1.0 - 2.0 * (np.bitwise_count(outcomes & zmask) & 1)
            energies += t.label_coefficient.real * signs
        mean += float(energies.mean())
        if shots > 1:
            variance += float(energies.var(ddof=1)) / shots
    return EstimatorResult(mean, math.sqrt(variance), shots, seed)


# -- transpilation ---------------------------------------------------------


def _h_basis(q: int) -> list[Gate]:
    return [Gate("RZ", (q,), math.pi / 2), Gate("SqrtX", (q,)), Gate("RZ", (q,), math.pi / 2)]


def _shift(angle, delta: float):
    if isinstance(angle, ParamExpr):
        return angle.shifted(delta)
    return float(angle) + delta


def _lower_gate(g: Gate) -> list[Gate]:
    """Rewrite one gate into the {SqrtX, RZ, CZ} basis (up to global phase)."""
    q = g.qubits[0]
    if g.kind in ("RZ", "SqrtX", "CZ"):
        return [g]
    if g.kind == "X":
        return [Gate("SqrtX", (q,)), Gate("SqrtX", (q,))]
    if g.kind == "H":
        return _h_basis(q)
    if g.kind == "RY":
        return [Gate("SqrtX", (q,)), Gate("RZ", (q,), _shift(g.angle, math.pi)),
                Gate("SqrtX", (q,)), Gate("RZ", (q,), math.pi)]
    if g.kind == "RX":
        return [Gate("RZ", (q,), math.pi / 2), Gate("SqrtX", (q,)),
                Gate("RZ", (q,), _shift(g.angle, math.pi)),
                Gate("SqrtX", (q,)), Gate("RZ", (q,), math.pi / 2)]
    if g.kind == "CX":
        c, t = g.qubits
        return _h_basis(t) + [Gate("CZ", (c, t))] + _h_basis(t)
    if g.kind == "SWAP":
        a, b = g.qubits
        out = []
        for cx in (Gate("CX", (a, b)), Gate("CX", (b, a)), Gate("CX", (a, b))):
            out.extend(_lower_gate(cx))
        return out
    raise TranspileError(f"no lowering rule for {g.kind}")


def _shortest_path(adj: dict[int, list[int]], a: int, b: int) -> list[int]:
    """BFS shortest path with lowest-index tie-breaking."""
    prev = {a: None}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        if u == b:
            break
        for v in adj[u]:
            if v not in prev:
                prev[v] = u
                queue.append(v)
    if b not in prev:
        raise TranspileError(f"no path between qubits {a} and {b}")
    path = [b]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def transpile(c: Circuit, coupling: list[tuple[int, int]]):
    """Lower to the {SqrtX, RZ, CZ} basis on the given coupling graph.

    Non-adjacent two-qubit gates are routed by SWAPping one operand along the
    BFS shortest path and back, so the qubit layout is unchanged. Returns
    (circuit, depth, two-qubit gate count).
    """
    adj: dict[int, list[int]] = {q: [] for q in range(c.n_qubits)}
    for a, b in coupling:
        if not (0 <= a < c.n_qubits and 0 <= b < c.n_qubits) or a == b:
            raise TranspileError(f"bad coupling pair ({a}, {b})")
        if b not in adj[a]:
            adj[a].append(b)
            adj[b].append(a)
    for q in adj:
        adj[q].sort()
    seen = {0}
    queue = deque([0])
    while queue:
        for v in adj[queue.popleft()]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    if len(seen) != c.n_qubits:
        raise TranspileError("coupling graph is disconnected")

    routed: list[Gate] = []
    for g in c.gates:
        if len(g.qubits) == 1 or g.qubits[1] in adj[g.qubits[0]]:
            routed.append(g)
            continue
        path = _shortest_path(adj, g.qubits[0], g.qubits[1])
        swaps = [Gate("SWAP", (path[i], path[i + 1])) for i in range(len(path) - 2)]
        routed.extend(swaps)
        routed.append(Gate(g.kind, (path[-2], g.qubits[1]), g.angle))
        routed.extend(reversed(swaps))

    out = Circuit(c.n_qubits)
    for g in routed:
        out.extend(_lower_gate(g))
    stats = circuit_stats(out)
    return out, stats.depth, stats.gate_counts.get("CZ", 0)


@dataclass(frozen=True)
class CircuitStats:
    depth: int
    gate_counts: dict[str, int] = field(hash=False)
    n_parameters: int = 0


def circuit_stats(c: Circuit) -> CircuitStats:
    """DAG depth (every gate weight 1), per-kind counts, parameter count."""
    level = [0] * c.n_qubits
    counts: dict[str, int] = {}
    for g in c.gates:
        d = 1 + max(level[q] for q in g.qubits)
        for q in g.qubits:
            level[q] = d
        counts[g.kind] = counts.get(g.kind, 0) + 1
    return CircuitStats(max(level, default=0), counts, len(c.parameter_names))


def inverse_circuit(c: Circuit) -> Circuit:
    """Exact gate-by-gate inverse (SqrtX inverted as SqrtX followed by X)."""
    out = Circuit(c.n_qubits)
    for g in reversed(c.gates):
        if g.kind in ("X", "H", "CX", "CZ", "SWAP"):
            out.add(g)
        elif g.kind in ("RX", "RY", "RZ"):
            a = -g.angle if isinstance(g.angle, ParamExpr) else -float(g.angle)
            out.add(Gate(g.kind, g.qubits, a))
        else:  # SqrtX
            out.add(Gate("SqrtX", g.qubits))
            out.add(Gate("X", g.qubits))
    return out
