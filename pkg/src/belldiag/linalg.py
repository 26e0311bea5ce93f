"""Dense complex linear algebra for few-qubit density matrices.

Everything in this module is a pure function on small (dimension <= 16)
numpy arrays.  The repo-wide basis convention is |q0 q1 ... q_{n-1}> with
qubit 0 as the leftmost / most significant factor, so the basis index of a
computational state is sum_i q_i * 2^(n-1-i).
"""

from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-9
PSD_EIG_TOL = 1e-9

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


class NotHermitianError(ValueError):
    """Input matrix is not Hermitian within tolerance."""


class BadSubsystemError(ValueError):
    """Invalid subsystem selection for a partial trace / transpose."""


class DomainError(ValueError):
    """Scalar argument outside its mathematical domain."""


def kron(a, b):
    """Kronecker product of two matrices (dimensions multiply)."""
    return np.kron(np.asarray(a), np.asarray(b))


def embed(ops: dict, n_qubits: int) -> np.ndarray:
    """Tensor single-qubit operators into an n-qubit operator.

    ``ops`` maps qubit index -> 2x2 array; unmentioned qubits get the
    identity.  Qubit 0 is the leftmost tensor factor.
    """
    out = np.array([[1.0 + 0j]])
    for q in range(n_qubits):
        out = np.kron(out, ops.get(q, IDENTITY_2))
    return out


def is_hermitian(m, tol: float = HERMITICITY_TOL) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T)) <= tol


def n_qubits_of(m) -> int:
    """Number of qubits for a 2^n x 2^n matrix."""
    d = np.asarray(m).shape[0]
    n = int(round(np.log2(d)))
    if 2**n != d:
        raise BadSubsystemError(f"dimension {d} is not a power of two")
    return n


def check_density_matrix(rho, tol: float = 1e-9) -> np.ndarray:
    """Validate Hermiticity, unit trace and (numerical) positivity.

    Returns the input as a complex ndarray.  Eigenvalues in [-tol, 0) are
    accepted as numerical noise.
    """
    rho = np.asarray(rho, dtype=complex)
    if not is_hermitian(rho, 1e-10):
        raise NotHermitianError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-10:
        raise ValueError(f"trace {np.trace(rho).real!r} != 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix has a significantly negative eigenvalue")
    return rho


def hermitian_eig(m):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues sorted in
    descending order and eigenvectors as the corresponding orthonormal
    columns, so that m = V diag(w) V^dagger.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise NotHermitianError("matrix is not Hermitian within 1e-9")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    order = np.argsort(w)[::-1]
    return w[order].real, v[:, order]


def partial_trace(rho, keep, n_qubits: int | None = None) -> np.ndarray:
    """Trace out all qubits not in ``keep``.

    ``keep`` is a nonempty strict subset of qubit indices; the kept qubits
    retain their relative order.
    """
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits if n_qubits is not None else n_qubits_of(rho)
    keep = sorted(set(keep))
    if not keep or len(keep) >= n or any(q < 0 or q >= n for q in keep):
        raise BadSubsystemError(f"keep={keep} is not a strict subset of 0..{n - 1}")
    traced = [q for q in range(n) if q not in keep]
    r = rho.reshape([2] * (2 * n))
    for q in sorted(traced, reverse=True):
        r = np.trace(r, axis1=q, axis2=q + r.ndim // 2)
    d = 2 ** len(keep)
    return r.reshape(d, d)


def partial_transpose(rho, subsystem: int) -> np.ndarray:
    """Transpose one factor of a two-qubit operator (0 = first, 1 = second)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise BadSubsystemError("partial_transpose expects a 4x4 two-qubit matrix")
    if subsystem not in (0, 1):
        raise BadSubsystemError("subsystem must be 0 or 1")
    r = rho.reshape(2, 2, 2, 2)
    if subsystem == 0:
        r = r.transpose(2, 1, 0, 3)
    else:
        r = r.transpose(0, 3, 2, 1)
    return r.reshape(4, 4)


def _clamped_psd_eig(m, tol: float = PSD_EIG_TOL):
    w, v = hermitian_eig(m)
    if w.min() < -tol:
        raise ValueError(f"matrix is not PSD: min eigenvalue {w.min():.3e}")
    return np.maximum(w, 0.0), v


def matrix_sqrt_psd(m) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in [-1e-9, 0) are clamped to zero; anything more negative
    is an error rather than silently hidden.
    """
    w, v = _clamped_psd_eig(m)
    return (v * np.sqrt(w)) @ v.conj().T


def von_neumann_entropy_bits(rho) -> float:
    """Von Neumann entropy -Tr(rho log2 rho) in bits, with 0 log 0 = 0."""
    w, _ = _clamped_psd_eig(rho)
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def binary_entropy(x: float) -> float:
    """Binary entropy h2(x) = -x log2 x - (1-x) log2(1-x), in bits."""
    if not -1e-12 <= x <= 1 + 1e-12:
        raise DomainError(f"binary_entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x in (0.0, 1.0):
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


def trace_distance(a, b) -> float:
    """Trace distance (1/2) ||a - b||_1 between Hermitian matrices."""
    d = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    if not is_hermitian(d, 1e-8):
        raise NotHermitianError("trace_distance expects Hermitian inputs")
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh((d + d.conj().T) / 2))))


def pauli_expectations(rho):
    """Bloch decomposition (r, s, T) of a two-qubit state.

    r_i = Tr[rho (sigma_i x I)], s_j = Tr[rho (I x sigma_j)],
    T_ij = Tr[rho (sigma_i x sigma_j)].
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise BadSubsystemError("pauli_expectations expects a two-qubit state")
    r = np.array([np.trace(rho @ np.kron(s, IDENTITY_2)).real for s in PAULIS])
    s = np.array([np.trace(rho @ np.kron(IDENTITY_2, p)).real for p in PAULIS])
    t = np.array(
        [[np.trace(rho @ np.kron(a, b)).real for b in PAULIS] for a in PAULIS]
    )
    return r, s, t


def state_from_pauli(r, s, t) -> np.ndarray:
    """Assemble a two-qubit operator from its Bloch components.

    Inverse of :func:`pauli_expectations`; Hermitian and trace-1 by
    construction (not necessarily PSD).
    """
    rho = np.eye(4, dtype=complex)
    for i in range(3):
        rho += r[i] * np.kron(PAULIS[i], IDENTITY_2)
        rho += s[i] * np.kron(IDENTITY_2, PAULIS[i])
        for j in range(3):
            rho += t[i][j] * np.kron(PAULIS[i], PAULIS[j])
    return rho / 4.0
