"""Gate-level circuit IR and the Bell-diagonal state preparation circuits.

The IR supports mid-circuit measurement into classical bits and classically
conditioned gates, which is all the preparation templates need:

* ``build_four_qubit``         -- encoder G, two entangling CNOTs to an
  ancilla pair, Bell basis change B on the ancillas (output pair = ancillas).
* ``build_two_qubit``          -- encoder G, unread measurements of both
  qubits, then B (output pair = the same two qubits).
* ``build_four_qubit_ancilla`` -- encoder G, CNOTs to the ancillas, B on the
  principal pair; tracing out the ancillas realizes the unread measurements.
* ``build_werner_circuit``     -- one-shot random bit drives a classically
  conditioned branch: mixed |++> + unread measurements, or X + B.

Both probability encoders place amplitudes sqrt(p_jk) >= 0 on |jk>, so each
has an exact inverse solver (``solve_compact_params`` analytically,
``solve_canonical_params`` by the cascaded-cosine rule with 0/0 -> 1).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .linalg import IDENTITY_2, PAULI_X, embed
from .states import check_probabilities

GATE_KINDS = {"ry", "rz", "h", "x", "cx", "cry", "measure", "barrier"}
TWO_QUBIT_KINDS = {"cx", "cry"}

_PROJ0 = np.array([[1, 0], [0, 0]], dtype=complex)
_PROJ1 = np.array([[0, 0], [0, 1]], dtype=complex)
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class BadEncoderError(ValueError):
    """Encoder subcircuit violates a template precondition."""


class CompactParams(NamedTuple):
    """Angles (radians) of the RY/CNOT/RY+RY probability encoder."""

    alpha: float
    beta: float
    gamma: float


class CanonicalParams(NamedTuple):
    """Hypersphere angles (radians) of the RY/CRY/CRY probability encoder."""

    psi: float
    theta: float
    phi: float


@dataclass(frozen=True)
class GateOp:
    kind: str
    qubits: tuple[int, ...] = ()
    clbit: int | None = None
    angle: float | None = None
    condition: tuple[int, int] | None = None  # (classical bit, required value)


@dataclass
class Circuit:
    """Ordered gate list over n_qubits and n_clbits.

    ``principal`` names the qubits carrying the prepared two-qubit state
    (used by tomography and the sweep driver).  Treat instances as frozen
    once shared; the append helpers are for construction only.
    """

    n_qubits: int
    n_clbits: int = 0
    ops: list[GateOp] = field(default_factory=list)
    principal: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.principal:
            self.principal = tuple(range(self.n_qubits))

    def _check_qubits(self, qubits):
        for q in qubits:
            if not 0 <= q < self.n_qubits:
                raise ValueError(f"qubit {q} out of range for {self.n_qubits}-qubit circuit")

    def _append(self, kind, qubits=(), clbit=None, angle=None, condition=None):
        self._check_qubits(qubits)
        if clbit is not None and not 0 <= clbit < self.n_clbits:
            raise ValueError(f"classical bit {clbit} out of range")
        if condition is not None:
            bit, val = condition
            if not 0 <= bit < self.n_clbits or val not in (0, 1):
                raise ValueError(f"bad condition {condition!r}")
            condition = (bit, val)
        self.ops.append(GateOp(kind, tuple(qubits), clbit, angle, condition))
        return self

    def ry(self, angle, qubit, condition=None):
        return self._append("ry", (qubit,), angle=float(angle), condition=condition)

    def rz(self, angle, qubit, condition=None):
        return self._append("rz", (qubit,), angle=float(angle), condition=condition)

    def h(self, qubit, condition=None):
        return self._append("h", (qubit,), condition=condition)

    def x(self, qubit, condition=None):
        return self._append("x", (qubit,), condition=condition)

    def cx(self, control, target, condition=None):
        return self._append("cx", (control, target), condition=condition)

    def cry(self, angle, control, target, condition=None):
        return self._append("cry", (control, target), angle=float(angle), condition=condition)

    def measure(self, qubit, clbit, condition=None):
        return self._append("measure", (qubit,), clbit=clbit, condition=condition)

    def barrier(self):
        return self._append("barrier")

    def has_measurements(self) -> bool:
        return any(op.kind == "measure" for op in self.ops)

    def extend(self, other: "Circuit", qubit_map=None, clbit_map=None) -> "Circuit":
        """Append another circuit, remapping its qubits/clbits."""
        qmap = list(range(other.n_qubits)) if qubit_map is None else list(qubit_map)
        cmap = list(range(other.n_clbits)) if clbit_map is None else list(clbit_map)
        for op in other.ops:
            cond = None if op.condition is None else (cmap[op.condition[0]], op.condition[1])
            self._append(
                op.kind,
                tuple(qmap[q] for q in op.qubits),
                clbit=None if op.clbit is None else cmap[op.clbit],
                angle=op.angle,
                condition=cond,
            )
        return self

    def copy(self) -> "Circuit":
        return Circuit(self.n_qubits, self.n_clbits, list(self.ops), self.principal)

    def to_json_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "n_clbits": self.n_clbits,
            "principal": list(self.principal),
            "ops": [
                {
                    "kind": op.kind,
                    "qubits": list(op.qubits),
                    "clbit": op.clbit,
                    "angle": op.angle,
                    "condition": None if op.condition is None else list(op.condition),
                }
                for op in self.ops
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, d: dict) -> "Circuit":
        c = cls(d["n_qubits"], d["n_clbits"], principal=tuple(d.get("principal") or ()))
        for op in d["ops"]:
            cond = op.get("condition")
            c._append(
                op["kind"],
                tuple(op["qubits"]),
                clbit=op.get("clbit"),
                angle=op.get("angle"),
                condition=None if cond is None else tuple(cond),
            )
        return c

    @classmethod
    def loads(cls, s: str) -> "Circuit":
        return cls.from_json_dict(json.loads(s))


def gate_matrix_1q(kind: str, angle: float | None) -> np.ndarray:
    if kind == "ry":
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "rz":
        return np.array(
            [[np.exp(-1j * angle / 2), 0], [0, np.exp(1j * angle / 2)]], dtype=complex
        )
    if kind == "h":
        return _HADAMARD
    if kind == "x":
        return PAULI_X
    raise ValueError(f"not a one-qubit gate kind: {kind}")


def op_unitary(op: GateOp, n_qubits: int) -> np.ndarray:
    """Full 2^n x 2^n unitary of a (non-measurement) gate op."""
    if op.kind in ("measure", "barrier"):
        raise ValueError(f"{op.kind} has no unitary")
    if op.kind == "cx":
        c, t = op.qubits
        return embed({c: _PROJ0}, n_qubits) + embed({c: _PROJ1, t: PAULI_X}, n_qubits)
    if op.kind == "cry":
        c, t = op.qubits
        ry = gate_matrix_1q("ry", op.angle)
        return embed({c: _PROJ0}, n_qubits) + embed({c: _PROJ1, t: ry}, n_qubits)
    return embed({op.qubits[0]: gate_matrix_1q(op.kind, op.angle)}, n_qubits)


def statevector(circuit: Circuit, initial=None) -> np.ndarray:
    """Amplitudes after a measurement-free, unconditioned circuit on |0...0>."""
    if initial is None:
        v = np.zeros(2**circuit.n_qubits, dtype=complex)
        v[0] = 1.0
    else:
        v = np.asarray(initial, dtype=complex).copy()
    for op in circuit.ops:
        if op.kind == "barrier":
            continue
        if op.kind == "measure" or op.condition is not None:
            raise ValueError("statevector requires a measurement-free, unconditioned circuit")
        v = op_unitary(op, circuit.n_qubits) @ v
    return v


def cnot_equivalents(circuit: Circuit) -> int:
    """Two-qubit gate cost: CNOT counts 1, CRY counts 2 (its standard
    decomposition uses two CNOTs)."""
    cost = 0
    for op in circuit.ops:
        if op.kind == "cx":
            cost += 1
        elif op.kind == "cry":
            cost += 2
    return cost


# ---------------------------------------------------------------------------
# Probability encoders and their inverse solvers
# ---------------------------------------------------------------------------

def build_g_compact(params: CompactParams) -> Circuit:
    """RY(alpha) on a; CNOT a->b; RY(beta) on a; RY(gamma) on b."""
    alpha, beta, gamma = params
    c = Circuit(2)
    c.ry(alpha, 0)
    c.cx(0, 1)
    c.ry(beta, 0)
    c.ry(gamma, 1)
    return c


def build_g_canonical(params: CanonicalParams) -> Circuit:
    """RY(2 psi) on b; CRY(2 theta) b->a; CRY(-2 phi) a->b."""
    psi, theta, phi = params
    c = Circuit(2)
    c.ry(2 * psi, 1)
    c.cry(2 * theta, 1, 0)
    c.cry(-2 * phi, 0, 1)
    return c


def compact_amplitudes(params: CompactParams) -> np.ndarray:
    """Closed-form output amplitudes (a00, a01, a10, a11) of the compact encoder."""
    ca, sa = math.cos(params.alpha / 2), math.sin(params.alpha / 2)
    cb, sb = math.cos(params.beta / 2), math.sin(params.beta / 2)
    cg, sg = math.cos(params.gamma / 2), math.sin(params.gamma / 2)
    return np.array(
        [
            ca * cb * cg + sa * sb * sg,
            ca * cb * sg - sa * sb * cg,
            ca * sb * cg - sa * cb * sg,
            ca * sb * sg + sa * cb * cg,
        ]
    )


def canonical_amplitudes(params: CanonicalParams) -> np.ndarray:
    """Closed-form output amplitudes of the canonical encoder (Gray-code chain)."""
    psi, theta, phi = params
    return np.array(
        [
            math.cos(psi),
            math.sin(psi) * math.cos(theta),
            math.sin(psi) * math.sin(theta) * math.sin(phi),
            math.sin(psi) * math.sin(theta) * math.cos(phi),
        ]
    )


def solve_compact_params(p) -> CompactParams:
    """Invert the compact encoder: angles whose output amplitudes are sqrt(p).

    alpha = arcsin(2(a00 a11 - a01 a10)) with alpha in [-pi/2, pi/2]; beta and
    gamma follow from a rank-one factorization of the remaining linear system.
    At the singular branch cos(alpha) = 0 the output depends only on
    beta -+ gamma, so gamma = 0 there.
    """
    a = np.sqrt(check_probabilities(p))
    alpha = math.asin(min(1.0, max(-1.0, 2 * (a[0] * a[3] - a[1] * a[2]))))
    ca, sa = math.cos(alpha / 2), math.sin(alpha / 2)
    cos_alpha = math.cos(alpha)
    if abs(cos_alpha) < 1e-9:
        # singular branch: only p = (1/2, 0, 0, 1/2)-type points land here
        cb, sb = math.sqrt(2) * a[0], math.sqrt(2) * a[2]
        return CompactParams(alpha, 2 * math.atan2(sb, cb), 0.0)
    m = np.array(
        [
            [ca * a[0] - sa * a[3], ca * a[1] + sa * a[2]],
            [sa * a[1] + ca * a[2], -sa * a[0] + ca * a[3]],
        ]
    ) / cos_alpha
    proj = m @ m.T
    b = proj @ np.array([1.0, 1.0])
    if np.linalg.norm(b) < 1e-12:
        b = proj @ np.array([1.0, -1.0])
    b /= np.linalg.norm(b)
    # sign fixing: cos(beta/2) >= 0, or sin(beta/2) >= 0 when it vanishes
    if b[0] < -1e-12 or (abs(b[0]) <= 1e-12 and b[1] < 0):
        b = -b
    c = m.T @ b
    return CompactParams(alpha, 2 * math.atan2(b[1], b[0]), 2 * math.atan2(c[1], c[0]))


def solve_canonical_params(p) -> CanonicalParams:
    """Invert the canonical encoder by the cascaded-cosine rule.

    cos^2(psi) = p00, cos^2(theta) = p01/(1-cos^2 psi),
    cos^2(phi) = p11/((1-cos^2 psi)(1-cos^2 theta)); any 0/0 quotient is 1
    and every quotient is clamped to [0, 1] before the arccos.
    """
    p = check_probabilities(p)

    def quotient(num, den):
        if den <= 0.0:
            return 1.0
        return min(1.0, max(0.0, num / den))

    c2_psi = min(1.0, p[0])
    c2_theta = quotient(p[1], 1.0 - c2_psi)
    c2_phi = quotient(p[3], (1.0 - c2_psi) * (1.0 - c2_theta))
    return CanonicalParams(
        math.acos(math.sqrt(c2_psi)),
        math.acos(math.sqrt(c2_theta)),
        math.acos(math.sqrt(c2_phi)),
    )


# ---------------------------------------------------------------------------
# Preparation templates
# ---------------------------------------------------------------------------

def bell_basis_change() -> Circuit:
    """Two-qubit basis change B with B|jk> = |beta_jk>: H on the first
    qubit, then CNOT first->second."""
    c = Circuit(2)
    c.h(0)
    c.cx(0, 1)
    return c


def _check_encoder(g: Circuit):
    if g.n_qubits != 2:
        raise BadEncoderError("encoder must be a 2-qubit circuit")
    if g.has_measurements():
        raise BadEncoderError("encoder must be measurement-free")


def build_four_qubit(g: Circuit) -> Circuit:
    """Encoder on (a,b), CNOTs a->c and b->d, B on (c,d); output pair (c,d)."""
    _check_encoder(g)
    c = Circuit(4, principal=(2, 3))
    c.extend(g, qubit_map=(0, 1))
    c.barrier()
    c.cx(0, 2)
    c.cx(1, 3)
    c.barrier()
    c.extend(bell_basis_change(), qubit_map=(2, 3))
    return c


def build_two_qubit(g: Circuit) -> Circuit:
    """Encoder, unread measurements of both qubits, then B on the same pair."""
    _check_encoder(g)
    c = Circuit(2, 2, principal=(0, 1))
    c.extend(g)
    c.barrier()
    c.measure(0, 0)
    c.measure(1, 1)
    c.barrier()
    c.extend(bell_basis_change())
    return c


def build_four_qubit_ancilla(g: Circuit) -> Circuit:
    """Encoder, CNOTs to the ancilla pair (environment), B on the principal
    pair; output pair (a,b), ancillas to be traced out."""
    _check_encoder(g)
    c = Circuit(4, principal=(0, 1))
    c.extend(g, qubit_map=(0, 1))
    c.barrier()
    c.cx(0, 2)
    c.cx(1, 3)
    c.barrier()
    c.extend(bell_basis_change(), qubit_map=(0, 1))
    return c


def build_werner_circuit(w: float) -> Circuit:
    """Specialized Werner-state circuit with classically controlled branches.

    A single RY + measurement draws c = 1 with probability w.  On c = 1 the
    circuit prepares |beta11> = B (X_b |1 0>); on c = 0 it prepares |++> and
    performs unread measurements of both qubits (maximally mixed state).
    """
    from .linalg import DomainError

    if not 0.0 <= w <= 1.0:
        raise DomainError(f"Werner parameter {w!r} outside [0, 1]")
    theta = 2 * math.asin(math.sqrt(w))
    c = Circuit(2, 3, principal=(0, 1))
    c.ry(theta, 0)
    c.measure(0, 0)
    c.barrier()
    c.x(1, condition=(0, 1))
    c.h(0, condition=(0, 1))
    c.cx(0, 1, condition=(0, 1))
    c.h(0, condition=(0, 0))
    c.h(1, condition=(0, 0))
    c.measure(0, 1, condition=(0, 0))
    c.measure(1, 2, condition=(0, 0))
    return c


TEMPLATES = {
    "four-qubit": build_four_qubit,
    "two-qubit": build_two_qubit,
    "four-qubit-ancilla": build_four_qubit_ancilla,
}

ENCODERS = {
    "compact": lambda p: build_g_compact(solve_compact_params(p)),
    "canonical": lambda p: build_g_canonical(solve_canonical_params(p)),
}


def build_preparation(p, template: str, encoder: str) -> Circuit:
    """Full preparation circuit for Bell probabilities p."""
    if template not in TEMPLATES:
        raise ValueError(f"unknown template {template!r}")
    if encoder not in ENCODERS:
        raise ValueError(f"unknown encoder {encoder!r}")
    return TEMPLATES[template](ENCODERS[encoder](p))
