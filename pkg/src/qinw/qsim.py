"""Dense density-matrix simulation of coin-fed quantum branching programs.

States are exact 2^s x 2^s complex matrices.  Qubit 1 is the most
significant bit of the basis-state index; "first qubit" conventions
(output, measurement, reset) all refer to qubit 1, and every channel is
generalized to an arbitrary qubit q.

Gate vocabulary (the `kind` strings double as the JSON wire names):

    H    Hadamard on one qubit
    TOF  Toffoli |i,j,k> -> |i,j,k xor i*j| on three distinct qubits
    RFL  reflection about |1> on one qubit, diag(-1, 1); the global
         sign is irrelevant under conjugation
    M    dephasing measurement channel: zero the off-diagonal blocks
    R    reset channel: measure, then move all population to |0>

A quantum program is a plain operator sequence (may contain M).  A
branching program reads one classical coin per step and applies one of
two measurement-free operator lists; coin k of the string is bit k of
the coin int.  Averaging over coin distributions accumulates
integer-weighted sums in ascending coin order and divides once, so
results are exact and order-independent.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import inw as _inw

MAX_QUBITS = 12
MAX_ENUM_COINS = 24
MAX_ENUM_SEED_BITS = 24

# The Hadamard is applied as the integer butterfly [[1,1],[1,-1]] on both
# sides followed by one exact *0.5, so states reachable from basis states
# keep exactly representable dyadic entries (1/sqrt(2) never appears).
_H2_RAW = np.array([[1, 1], [1, -1]], dtype=np.complex128)
_RFL2 = np.array([[-1, 0], [0, 1]], dtype=np.complex128)
_TOF8 = np.eye(8, dtype=np.complex128)
_TOF8[[6, 7]] = _TOF8[[7, 6]]

_ARITY = {"H": 1, "TOF": 3, "RFL": 1, "M": 1, "R": 1}
_UNITARY = {"TOF": _TOF8, "RFL": _RFL2}


@dataclass(frozen=True)
class GateOp:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in _ARITY:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if len(self.qubits) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {_ARITY[self.kind]} qubit(s)")
        if any(q < 1 for q in self.qubits):
            raise ValueError("qubit indices start at 1")
        if self.kind == "TOF" and len(set(self.qubits)) != 3:
            raise ValueError("Toffoli qubits must be pairwise distinct")


def hadamard(q: int) -> GateOp:
    return GateOp("H", (q,))


def toffoli(q1: int, q2: int, q3: int) -> GateOp:
    return GateOp("TOF", (q1, q2, q3))


def reflect1(q: int) -> GateOp:
    return GateOp("RFL", (q,))


def measure(q: int) -> GateOp:
    return GateOp("M", (q,))


def reset(q: int) -> GateOp:
    return GateOp("R", (q,))


def bitflip_ops(q: int) -> tuple[GateOp, ...]:
    """A bit flip on qubit q from the available basis: H . RFL . H = -X."""
    return (hadamard(q), reflect1(q), hadamard(q))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Immutable state: 2^s x 2^s complex matrix, Hermitian, PSD, trace 1."""

    s: int
    mat: np.ndarray

    def __post_init__(self) -> None:
        dim = 1 << self.s
        if self.mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {self.mat.shape} does not match s={self.s}")
        self.mat.setflags(write=False)

    def validate(self, atol: float = 1e-10) -> None:
        """Check the state invariants; raises ValueError on violation."""
        m = self.mat
        if np.max(np.abs(m - m.conj().T)) > atol:
            raise ValueError("state is not Hermitian")
        if abs(np.trace(m).real - 1.0) > atol or abs(np.trace(m).imag) > atol:
            raise ValueError("state trace is not 1")
        if np.min(np.linalg.eigvalsh((m + m.conj().T) / 2.0)) < -atol:
            raise ValueError("state has a negative eigenvalue")


def _wrap(s: int, mat: np.ndarray) -> DensityMatrix:
    return DensityMatrix(s, np.ascontiguousarray(mat, dtype=np.complex128))


def dm_new(s: int) -> DensityMatrix:
    """The all-zeros pure state |0^s><0^s|."""
    if not 1 <= s <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}]")
    mat = np.zeros((1 << s, 1 << s), dtype=np.complex128)
    mat[0, 0] = 1.0
    return DensityMatrix(s, mat)


def _apply_unitary(mat: np.ndarray, u: np.ndarray, qubits: tuple[int, ...], s: int) -> np.ndarray:
    """Conjugate by a k-qubit unitary embedded on the named qubits."""
    k = len(qubits)
    ut = u.reshape((2,) * (2 * k))
    t = mat.reshape((2,) * (2 * s))
    row_axes = [q - 1 for q in qubits]
    t = np.tensordot(ut, t, axes=(list(range(k, 2 * k)), row_axes))
    t = np.moveaxis(t, list(range(k)), row_axes)
    col_axes = [s + q - 1 for q in qubits]
    t = np.tensordot(np.conj(ut), t, axes=(list(range(k, 2 * k)), col_axes))
    t = np.moveaxis(t, list(range(k)), col_axes)
    return t.reshape(1 << s, 1 << s)


def apply_gate(rho: DensityMatrix, op: GateOp) -> DensityMatrix:
    s = rho.s
    if any(q > s for q in op.qubits):
        raise ValueError(f"{op.kind} on qubit(s) {op.qubits} out of range for s={s}")
    if op.kind == "H":
        return _wrap(s, _apply_unitary(rho.mat, _H2_RAW, op.qubits, s) * 0.5)
    if op.kind in _UNITARY:
        return _wrap(s, _apply_unitary(rho.mat, _UNITARY[op.kind], op.qubits, s))
    q = op.qubits[0]
    bit = (np.arange(1 << s) >> (s - q)) & 1
    if op.kind == "M":
        out = rho.mat.copy()
        out[bit[:, None] != bit[None, :]] = 0.0
        return _wrap(s, out)
    # R: keep the diagonal blocks and fold the |1> block onto |0>
    i0 = np.where(bit == 0)[0]
    i1 = i0 + (1 << (s - q))
    out = np.zeros_like(rho.mat)
    out[np.ix_(i0, i0)] = rho.mat[np.ix_(i0, i0)] + rho.mat[np.ix_(i1, i1)]
    return _wrap(s, out)


def trace_norm(mat: np.ndarray) -> float:
    """Sum of absolute eigenvalues of the Hermitian-symmetrized matrix."""
    sym = (mat + mat.conj().T) / 2.0
    return float(np.sum(np.abs(np.linalg.eigvalsh(sym))))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Half the trace norm of the difference."""
    if rho.s != sigma.s:
        raise ValueError(f"dimension mismatch: {rho.s} vs {sigma.s} qubits")
    return trace_norm(rho.mat - sigma.mat) / 2.0


def output_distribution(rho: DensityMatrix) -> tuple[float, float]:
    """Outcome probabilities of measuring qubit 1 of the state."""
    bit = (np.arange(1 << rho.s) >> (rho.s - 1)) & 1
    diag = np.real(np.diag(rho.mat))
    p1 = float(np.sum(diag[bit == 1]))
    p0 = float(np.sum(diag[bit == 0]))
    return (p0, p1)


def partial_trace_last(rho: DensityMatrix, k: int) -> DensityMatrix:
    """Trace out the last k qubits (the least significant index bits)."""
    if not 0 <= k < rho.s:
        raise ValueError(f"cannot trace out {k} of {rho.s} qubits")
    if k == 0:
        return rho
    keep = 1 << (rho.s - k)
    t = rho.mat.reshape(keep, 1 << k, keep, 1 << k)
    return _wrap(rho.s - k, np.einsum("ajbj->ab", t))


def random_density(s: int, rng: np.random.Generator) -> DensityMatrix:
    """A Haar-ish random mixed state: normalized G G^dagger."""
    dim = 1 << s
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    mat = g @ g.conj().T
    return _wrap(s, mat / np.trace(mat).real)


@dataclass(frozen=True)
class QuantumProgram:
    """An operator sequence over {H, TOF, RFL, M, R}."""

    s: int
    ops: tuple[GateOp, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(self.ops))
        if not 1 <= self.s <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}]")
        for op in self.ops:
            if any(q > self.s for q in op.qubits):
                raise ValueError(f"{op.kind} on {op.qubits} out of range for s={self.s}")


@dataclass(frozen=True)
class BranchingProgram:
    """Coin-indexed steps (ops_if_0, ops_if_1); measurements excluded."""

    s: int
    steps: tuple[tuple[tuple[GateOp, ...], tuple[GateOp, ...]], ...]

    def __post_init__(self) -> None:
        norm = tuple((tuple(c0), tuple(c1)) for c0, c1 in self.steps)
        object.__setattr__(self, "steps", norm)
        if not 1 <= self.s <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}]")
        for c0, c1 in self.steps:
            for op in c0 + c1:
                if op.kind == "M":
                    raise ValueError("measurements are not allowed inside branching-program steps")
                if any(q > self.s for q in op.qubits):
                    raise ValueError(f"{op.kind} on {op.qubits} out of range for s={self.s}")


@dataclass(frozen=True)
class PrgSource:
    """Coin source that expands generator seeds: all of them when
    `seeds` is None (seed_bits <= 24 required), else the given list."""

    params: _inw.InwParams
    seeds: tuple[int, ...] | None = None


def qp_run(qp: QuantumProgram, rho0: DensityMatrix) -> DensityMatrix:
    """Apply the operator sequence, measurements included."""
    rho = rho0
    for op in qp.ops:
        rho = apply_gate(rho, op)
    return rho


def bp_run(bp: BranchingProgram, rho0: DensityMatrix, r: int) -> DensityMatrix:
    """Run on one coin string; coin for step k is bit k of r."""
    if not 0 <= r < 1 << len(bp.steps):
        raise ValueError(f"coin string {r:#x} out of range for {len(bp.steps)} steps")
    rho = rho0
    for k, (c0, c1) in enumerate(bp.steps):
        for op in c1 if (r >> k) & 1 else c0:
            rho = apply_gate(rho, op)
    return rho


def _coin_weights(bp: BranchingProgram, source) -> dict[int, int]:
    n = len(bp.steps)
    if isinstance(source, str):
        if source != "uniform":
            raise ValueError(f"unknown source {source!r}")
        if n > MAX_ENUM_COINS:
            raise ValueError(f"uniform enumeration supports at most {MAX_ENUM_COINS} coins")
        return {r: 1 for r in range(1 << n)}
    if isinstance(source, PrgSource):
        params = source.params
        if params.T < n:
            raise ValueError(f"generator produces {params.T} coins but the program reads {n}")
        if source.seeds is None:
            if params.seed_bits > MAX_ENUM_SEED_BITS:
                raise ValueError(
                    f"exhaustive seed enumeration supports at most {MAX_ENUM_SEED_BITS} seed bits"
                )
            seeds = range(1 << params.seed_bits)
        else:
            seeds = source.seeds
        mask = (1 << n) - 1
        weights: Counter[int] = Counter()
        for seed in seeds:
            weights[_inw.inw_expand(params, seed) & mask] += 1
        return dict(weights)
    if isinstance(source, Mapping):
        return {int(r): int(w) for r, w in source.items()}
    if isinstance(source, Sequence):
        return dict(Counter(int(r) for r in source))
    raise ValueError(f"unsupported coin source {source!r}")


def bp_run_avg(bp: BranchingProgram, rho0: DensityMatrix, source) -> DensityMatrix:
    """Exact convex average of bp_run over a coin source.

    Source may be "uniform", an explicit string list (with multiplicity),
    a {string: weight} mapping, or a PrgSource.  The weighted sum is
    accumulated in ascending string order and normalized once.
    """
    weights = _coin_weights(bp, source)
    if not weights:
        raise ValueError("empty coin source")
    acc = np.zeros_like(rho0.mat)
    total = 0
    for r in sorted(weights):
        w = weights[r]
        acc += w * bp_run(bp, rho0, r).mat
        total += w
    return _wrap(bp.s, acc / total)


def compile_measurements(qp: QuantumProgram, mode: str = "semantic") -> BranchingProgram:
    """Turn every measurement into a coin step; one coin per program op.

    semantic:   M(q) becomes (c0: identity, c1: RFL(q)); averaging the two
                branches over a fair coin is exactly the measurement
                channel.
    gate-level: the coin-conditioned reflection is realized as
                H(q), TOF(coin, one, q), H(q) with a persistent |1>
                ancilla; the program gains two ancilla qubits, the coin
                ancilla is flipped only on the c1 branch and reset after
                use.  Both branches run the same circuit so the coin
                conditioning lives entirely in the branch structure.

    Ops other than M become steps with identical branches (their coin is
    read and ignored).
    """
    if mode not in ("semantic", "gate-level"):
        raise ValueError(f"unknown compile mode {mode!r}")
    if mode == "semantic":
        steps = []
        for op in qp.ops:
            if op.kind == "M":
                steps.append(((), (reflect1(op.qubits[0]),)))
            else:
                steps.append(((op,), (op,)))
        return BranchingProgram(qp.s, tuple(steps))

    s_ext = qp.s + 2
    if s_ext > MAX_QUBITS:
        raise ValueError(f"gate-level compilation needs {s_ext} qubits, budget is {MAX_QUBITS}")
    one, coin = qp.s + 1, qp.s + 2
    prologue = (reset(one),) + bitflip_ops(one)
    steps = []
    for op in qp.ops:
        if op.kind == "M":
            q = op.qubits[0]
            body = (hadamard(q), toffoli(coin, one, q), hadamard(q), reset(coin))
            steps.append((body, bitflip_ops(coin) + body))
        else:
            steps.append(((op,), (op,)))
    if steps:
        c0, c1 = steps[0]
        steps[0] = (prologue + c0, prologue + c1)
    return BranchingProgram(s_ext, tuple(steps))


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def op_to_dict(op: GateOp) -> dict:
    return {"g": op.kind, "q": list(op.qubits)}


def op_from_dict(d: dict) -> GateOp:
    return GateOp(d["g"], tuple(d["q"]))


def program_to_dict(qp: QuantumProgram) -> dict:
    return {"qubits": qp.s, "ops": [op_to_dict(op) for op in qp.ops]}


def program_from_dict(d: dict) -> QuantumProgram:
    return QuantumProgram(d["qubits"], tuple(op_from_dict(o) for o in d["ops"]))


def bp_to_dict(bp: BranchingProgram) -> dict:
    return {
        "qubits": bp.s,
        "steps": [
            {"c0": [op_to_dict(o) for o in c0], "c1": [op_to_dict(o) for o in c1]}
            for c0, c1 in bp.steps
        ],
    }


def bp_from_dict(d: dict) -> BranchingProgram:
    steps = tuple(
        (tuple(op_from_dict(o) for o in st["c0"]), tuple(op_from_dict(o) for o in st["c1"]))
        for st in d["steps"]
    )
    return BranchingProgram(d["qubits"], steps)
