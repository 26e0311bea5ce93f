"""Two-qubit state tomography from counts with classical-register handling.

The nine Pauli measurement settings (XX ... ZZ) each produce a counts table
keyed by tomography bits followed by the prepared circuit's own classical
bits; those extra bits carry unread-measurement outcomes and must be summed
out before reconstruction.  Reconstruction is linear inversion of the Pauli
expansion followed by an eigenvalue-truncation projection onto physical
states.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit
from .linalg import hermitian_eig, state_from_pauli
from .seeding import derive_seed
from .simulator import BranchState, NoiseModel, evolve, exact_distribution, sample_counts

AXES = ("X", "Y", "Z")
SETTINGS: tuple[tuple[str, str], ...] = tuple(itertools.product(AXES, repeat=2))


class MissingSettingError(ValueError):
    """A measurement setting required for reconstruction is absent."""


@dataclass
class CountsTable:
    """Outcome histogram for one measurement setting.

    Keys have length n_tomo_bits + n_circuit_bits: tomography bits first
    (one per measured qubit, in measurement order), circuit classical bits
    after.  Counts are integers for sampled data; the analytic infinite-shot
    path stores probabilities (total 1.0) in the same structure.
    """

    setting: tuple[str, str]
    counts: dict[str, float]
    n_tomo_bits: int = 2
    n_circuit_bits: int = 0

    def __post_init__(self):
        self.setting = tuple(self.setting)
        width = self.n_tomo_bits + self.n_circuit_bits
        for key in self.counts:
            if len(key) != width or set(key) - {"0", "1"}:
                raise ValueError(f"malformed counts key {key!r} (expected {width} bits)")

    @property
    def total(self) -> float:
        return sum(self.counts.values())

    def to_json_dict(self) -> dict:
        return {
            "setting": list(self.setting),
            "n_tomo_bits": self.n_tomo_bits,
            "n_circuit_bits": self.n_circuit_bits,
            "shots": self.total,
            "counts": dict(sorted(self.counts.items())),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, d: dict) -> "CountsTable":
        return cls(
            tuple(d["setting"]),
            dict(d["counts"]),
            d.get("n_tomo_bits", 2),
            d.get("n_circuit_bits", 0),
        )

    @classmethod
    def loads(cls, s: str) -> "CountsTable":
        return cls.from_json_dict(json.loads(s))


def aggregate_counts(table: CountsTable) -> CountsTable:
    """Sum out the circuit classical bits, keeping only tomography bits."""
    if table.n_circuit_bits == 0:
        return CountsTable(table.setting, dict(table.counts), table.n_tomo_bits, 0)
    agg: dict[str, float] = {}
    for key, n in table.counts.items():
        short = key[: table.n_tomo_bits]
        agg[short] = agg.get(short, 0) + n
    return CountsTable(table.setting, agg, table.n_tomo_bits, 0)


def basis_rotation_circuit(setting) -> Circuit:
    """Pre-rotation mapping each chosen Pauli eigenbasis to computational.

    X -> H; Y -> RZ(-pi/2) then H (an S-dagger/H pair up to global phase);
    Z -> identity.
    """
    c = Circuit(2)
    for qubit, axis in enumerate(setting):
        if axis == "X":
            c.h(qubit)
        elif axis == "Y":
            c.rz(-math.pi / 2, qubit)
            c.h(qubit)
        elif axis != "Z":
            raise ValueError(f"unknown measurement axis {axis!r}")
    return c


def _expectations(table: CountsTable):
    """(E[A x B], E[A x I], E[I x B]) from one aggregated two-bit table."""
    total = table.total
    if total <= 0:
        raise ValueError("empty counts table")
    e_ab = e_a = e_b = 0.0
    for key, n in table.counts.items():
        b0, b1 = int(key[0]), int(key[1])
        f = n / total
        e_ab += (-1) ** (b0 + b1) * f
        e_a += (-1) ** b0 * f
        e_b += (-1) ** b1 * f
    return e_ab, e_a, e_b


def linear_inversion(tables) -> np.ndarray:
    """Assemble the Pauli expansion from the nine settings' expectation values.

    Correlations come from the matching setting's two-bit parity; each
    single-qubit expectation is averaged over the three settings sharing
    that axis.  The result is Hermitian with unit trace but may fail
    positivity on finite-shot data.
    """
    by_setting: dict[tuple[str, str], CountsTable] = {}
    for t in tables:
        by_setting[tuple(t.setting)] = aggregate_counts(t)
    missing = [s for s in SETTINGS if s not in by_setting]
    if missing:
        raise MissingSettingError(f"missing measurement settings: {missing}")

    t_mat = np.zeros((3, 3))
    r = np.zeros(3)
    s = np.zeros(3)
    for (ax_a, ax_b), table in by_setting.items():
        if (ax_a, ax_b) not in SETTINGS:
            continue
        e_ab, e_a, e_b = _expectations(table)
        i, j = AXES.index(ax_a), AXES.index(ax_b)
        t_mat[i, j] = e_ab
        r[i] += e_a / 3.0
        s[j] += e_b / 3.0
    return state_from_pauli(r, s, t_mat)


def project_to_physical(m) -> np.ndarray:
    """Nearest physical state by eigenvalue truncation.

    Eigendecompose; walk the spectrum in ascending order clamping negative
    values to zero while spreading the accumulated deficit uniformly over
    the eigenvalues not yet visited; renormalize the trace to 1.
    """
    w, v = hermitian_eig(m)  # descending; raises NotHermitianError
    w = w[::-1].copy()
    v = v[:, ::-1]
    deficit = 0.0
    d = len(w)
    for i in range(d):
        if w[i] + deficit / (d - i) < 0:
            deficit += w[i]
            w[i] = 0.0
        else:
            w[i:] += deficit / (d - i)
            break
    total = w.sum()
    if total <= 0:
        raise ValueError("projection collapsed to the zero matrix")
    w /= total
    return (v * w) @ v.conj().T


def measure_setting(
    circuit: Circuit,
    setting,
    shots: int | None,
    seed: int,
    noise: NoiseModel | None = None,
    qubits=None,
    _prepared: BranchState | None = None,
) -> CountsTable:
    """Counts table for one setting; shots=None takes the analytic path."""
    rotations = basis_rotation_circuit(setting)
    if shots is None:
        counts = exact_distribution(circuit, rotations, noise, qubits, _prepared)
    else:
        counts = sample_counts(circuit, rotations, shots, seed, noise, qubits, _prepared)
    return CountsTable(tuple(setting), dict(counts), 2, circuit.n_clbits)


def reconstruct(
    circuit: Circuit,
    shots: int | None,
    seed: int,
    noise: NoiseModel | None = None,
    qubits=None,
) -> np.ndarray:
    """Full tomography of the circuit's principal pair.

    Runs all nine settings (setting k uses derive_seed(seed, k)), aggregates
    away the circuit's classical bits, inverts and projects.  shots=None
    feeds exact outcome probabilities instead of sampled counts.
    """
    prepared = evolve(circuit, noise)
    tables = [
        measure_setting(circuit, s, shots, derive_seed(seed, k), noise, qubits, prepared)
        for k, s in enumerate(SETTINGS)
    ]
    return project_to_physical(linear_inversion(tables))
