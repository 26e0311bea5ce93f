"""Exact branching density-matrix simulation with noise and shot sampling.

State during execution is a map from classical bitstring to an unnormalized
density-matrix branch.  Unitaries act branchwise; a measurement splits every
branch with the |0><0| / |1><1| projectors and records the outcome in its
classical key; conditioned ops apply only to branches whose key matches.
Classical keys read left to right: character i is classical bit i.

The parametric noise model applies a depolarizing channel on exactly the
qubits a gate touched, and readout errors as a classical flip of the
recorded bit (the state always collapses per the true outcome).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

import numpy as np

from .circuits import Circuit, GateOp, op_unitary
from .linalg import embed, partial_trace
from .seeding import make_rng

_PROJ = (
    np.array([[1, 0], [0, 0]], dtype=complex),
    np.array([[0, 0], [0, 1]], dtype=complex),
)

PRUNE_TOL = 1e-14


class MalformedCircuitError(ValueError):
    """Circuit semantics error, e.g. a condition on a never-measured bit."""


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing-plus-readout parametric noise.

    p_depol_1q / p_depol_2q: depolarizing probability applied after each
    one-/two-qubit gate on the gate's qubits.  readout_flip_0to1 /
    readout_flip_1to0: probability that a measured 0 (resp. 1) is recorded
    as its opposite.
    """

    p_depol_1q: float = 0.0
    p_depol_2q: float = 0.0
    readout_flip_0to1: float = 0.0
    readout_flip_1to0: float = 0.0

    def __post_init__(self):
        for name, v in asdict(self).items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"noise probability {name}={v!r} outside [0, 1]")

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseModel":
        unknown = set(d) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ValueError(f"unknown noise keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_file(cls, path) -> "NoiseModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class BranchState:
    """Map from classical bitstring to unnormalized density-matrix branch."""

    n_qubits: int
    n_clbits: int
    branches: dict[str, np.ndarray] = field(default_factory=dict)
    measured_bits: set[int] = field(default_factory=set)

    def total_trace(self) -> float:
        return float(sum(np.trace(b).real for b in self.branches.values()))


def _initial_state(circuit: Circuit) -> BranchState:
    dim = 2**circuit.n_qubits
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    return BranchState(circuit.n_qubits, circuit.n_clbits, {"0" * circuit.n_clbits: rho})


def _depolarize(rho: np.ndarray, qubits, n_qubits: int, p: float) -> np.ndarray:
    """(1-p) rho + p (maximally mixed on `qubits`) x (marginal on the rest)."""
    if p == 0.0:
        return rho
    tr = np.trace(rho)
    keep = [q for q in range(n_qubits) if q not in qubits]
    if keep:
        marginal = partial_trace(rho, keep, n_qubits)
    else:
        marginal = np.array([[tr]], dtype=complex)
    # maximally mixed on the touched qubits x marginal on the rest, permuted
    # back into qubit order
    full = np.kron(marginal, np.eye(2 ** len(qubits), dtype=complex) / 2 ** len(qubits))
    order = keep + sorted(qubits)
    perm = np.argsort(order)
    axes = list(perm) + [x + n_qubits for x in perm]
    full = full.reshape([2] * (2 * n_qubits)).transpose(axes).reshape(rho.shape)
    return (1 - p) * rho + p * full


def _set_bit(key: str, bit: int, value: int) -> str:
    return key[:bit] + str(value) + key[bit + 1 :]


def _accumulate(branches: dict, key: str, rho: np.ndarray):
    if key in branches:
        branches[key] = branches[key] + rho
    else:
        branches[key] = rho


def _apply_op(state: BranchState, op: GateOp, noise: NoiseModel | None):
    if op.kind == "barrier":
        return
    if op.condition is not None and op.condition[0] not in state.measured_bits:
        raise MalformedCircuitError(
            f"condition on classical bit {op.condition[0]} before any measurement wrote it"
        )

    def active(key: str) -> bool:
        return op.condition is None or key[op.condition[0]] == str(op.condition[1])

    if op.kind == "measure":
        q, bit = op.qubits[0], op.clbit
        f01 = noise.readout_flip_0to1 if noise else 0.0
        f10 = noise.readout_flip_1to0 if noise else 0.0
        new: dict[str, np.ndarray] = {}
        for key, rho in state.branches.items():
            if not active(key):
                _accumulate(new, key, rho)
                continue
            for outcome in (0, 1):
                proj = embed({q: _PROJ[outcome]}, state.n_qubits)
                piece = proj @ rho @ proj
                if np.trace(piece).real < PRUNE_TOL:
                    continue
                flip = f01 if outcome == 0 else f10
                if flip > 0.0:
                    _accumulate(new, _set_bit(key, bit, 1 - outcome), flip * piece)
                if flip < 1.0:
                    _accumulate(new, _set_bit(key, bit, outcome), (1 - flip) * piece)
        state.branches = new
        state.measured_bits.add(bit)
        return

    u = op_unitary(op, state.n_qubits)
    p_depol = 0.0
    if noise is not None:
        p_depol = noise.p_depol_2q if len(op.qubits) == 2 else noise.p_depol_1q
    for key in list(state.branches):
        if not active(key):
            continue
        rho = u @ state.branches[key] @ u.conj().T
        if p_depol > 0.0:
            rho = _depolarize(rho, set(op.qubits), state.n_qubits, p_depol)
        state.branches[key] = rho


def _prune(state: BranchState):
    state.branches = {
        k: b for k, b in state.branches.items() if np.trace(b).real >= PRUNE_TOL
    }


def evolve(circuit: Circuit, noise: NoiseModel | None = None) -> BranchState:
    """Run a circuit from |0...0>, returning the final branch map."""
    state = _initial_state(circuit)
    for op in circuit.ops:
        _apply_op(state, op, noise)
        _prune(state)
    return state


def reduced_density(state: BranchState) -> np.ndarray:
    """Sum of all branches, normalized to unit trace."""
    dim = 2**state.n_qubits
    rho = np.zeros((dim, dim), dtype=complex)
    for b in state.branches.values():
        rho += b
    tr = np.trace(rho).real
    if tr <= 0:
        raise ValueError("empty branch state")
    return rho / tr


def principal_density(state: BranchState, qubits) -> np.ndarray:
    """Normalized state of the given qubits (branch sum + partial trace)."""
    rho = reduced_density(state)
    qubits = tuple(qubits)
    if len(qubits) == state.n_qubits:
        return rho
    return partial_trace(rho, qubits, state.n_qubits)


def _outcome_distribution(
    state: BranchState, qubits, noise: NoiseModel | None
) -> dict[str, float]:
    """Exact probabilities of (tomography bits + circuit clbits) keys after
    measuring `qubits` in the computational basis."""
    work = BranchState(
        state.n_qubits,
        state.n_clbits + len(qubits),
        {k + "0" * len(qubits): b.copy() for k, b in state.branches.items()},
        set(state.measured_bits),
    )
    for i, q in enumerate(qubits):
        _apply_op(work, GateOp("measure", (q,), clbit=state.n_clbits + i), noise)
        _prune(work)
    dist: dict[str, float] = {}
    for key, rho in work.branches.items():
        # documented key order: tomography bits first, circuit clbits after
        out_key = key[state.n_clbits :] + key[: state.n_clbits]
        dist[out_key] = dist.get(out_key, 0.0) + float(np.trace(rho).real)
    return dist


def exact_distribution(
    circuit: Circuit,
    basis_rotations: Circuit,
    noise: NoiseModel | None = None,
    qubits=None,
    _prepared: BranchState | None = None,
) -> dict[str, float]:
    """Exact outcome probabilities of the shots->infinity measurement.

    Appends `basis_rotations` (mapped onto `qubits`, default the circuit's
    principal pair) and terminal measurements of those qubits.  Keys are
    tomography bits (in `qubits` order) followed by the circuit's own
    classical bits.  `_prepared` lets callers reuse an evolved preparation.
    """
    if basis_rotations.has_measurements():
        raise ValueError("basis_rotations must be measurement-free")
    qubits = tuple(qubits) if qubits is not None else circuit.principal
    state = _prepared if _prepared is not None else evolve(circuit, noise)
    state = BranchState(
        state.n_qubits,
        state.n_clbits,
        {k: b.copy() for k, b in state.branches.items()},
        set(state.measured_bits),
    )
    for op in basis_rotations.ops:
        mapped = GateOp(
            op.kind, tuple(qubits[q] for q in op.qubits), op.clbit, op.angle, op.condition
        )
        _apply_op(state, mapped, noise)
    return _outcome_distribution(state, qubits, noise)


def sample_counts(
    circuit: Circuit,
    basis_rotations: Circuit,
    shots: int,
    seed: int,
    noise: NoiseModel | None = None,
    qubits=None,
    _prepared: BranchState | None = None,
) -> dict[str, int]:
    """Histogram of measurement outcomes over `shots` seeded repetitions.

    Samples the distribution of :func:`exact_distribution` with a generator
    seeded by `seed`; fixed seed means identical counts across runs.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    dist = exact_distribution(circuit, basis_rotations, noise, qubits, _prepared)
    keys = sorted(dist)
    probs = np.array([dist[k] for k in keys])
    probs = np.maximum(probs, 0.0)
    probs /= probs.sum()
    draws = make_rng(seed).multinomial(shots, probs)
    return {k: int(c) for k, c in zip(keys, draws) if c > 0}
