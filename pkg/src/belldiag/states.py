"""Bell-diagonal and Werner state parameterizations and geometry.

A Bell-diagonal state (BDS) is a mixture of the four Bell states.  Two
coordinate systems are used interchangeably: the mixing probabilities
``p = (p00, p01, p10, p11)`` and the correlation vector ``t = (t1, t2, t3)``
(the diagonal of the Pauli correlation matrix).  Valid ``t`` vectors fill a
tetrahedron whose corners are the four Bell states; the separable subset is
the octahedron |t1| + |t2| + |t3| <= 1.
"""

from __future__ import annotations

import numpy as np

from .linalg import DomainError, kron

TETRAHEDRON_TOL = 1e-9

# Bell state corners in t-space: beta_jk -> (t1, t2, t3)
BELL_CORNERS = {
    (0, 0): (1.0, -1.0, 1.0),
    (0, 1): (1.0, 1.0, -1.0),
    (1, 0): (-1.0, 1.0, 1.0),
    (1, 1): (-1.0, -1.0, -1.0),
}


class OutsideTetrahedronError(ValueError):
    """t-vector does not correspond to a positive semidefinite BDS."""


def bell_state(j: int, k: int) -> np.ndarray:
    """Amplitude vector of the Bell state indexed by bits (j, k).

    (0,0) -> (|00>+|11>)/sqrt2, (1,0) -> (|00>-|11>)/sqrt2,
    (0,1) -> (|01>+|10>)/sqrt2, (1,1) -> (|01>-|10>)/sqrt2.
    """
    if j not in (0, 1) or k not in (0, 1):
        raise DomainError("bell_state indices must be bits")
    v = np.zeros(4, dtype=complex)
    sign = 1.0 if j == 0 else -1.0
    if k == 0:
        v[0b00], v[0b11] = 1.0, sign
    else:
        v[0b01], v[0b10] = 1.0, sign
    return v / np.sqrt(2)


def check_probabilities(p) -> np.ndarray:
    """Validate and clamp a 4-vector of Bell mixing probabilities."""
    p = np.asarray(p, dtype=float)
    if p.shape != (4,):
        raise ValueError("expected four probabilities (p00, p01, p10, p11)")
    if p.min() < -1e-12 or p.max() > 1 + 1e-12:
        raise DomainError(f"probabilities {p} outside [0, 1]")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    return np.clip(p, 0.0, 1.0)


def probs_to_t(p) -> np.ndarray:
    """Map Bell probabilities (p00, p01, p10, p11) to (t1, t2, t3)."""
    p00, p01, p10, p11 = check_probabilities(p)
    return np.array(
        [
            p00 + p01 - p10 - p11,
            -p00 + p01 + p10 - p11,
            p00 - p01 + p10 - p11,
        ]
    )


def t_probabilities(t) -> np.ndarray:
    """The four Bell weights of a t-vector, without tetrahedron validation."""
    t1, t2, t3 = np.asarray(t, dtype=float)
    return np.array(
        [
            (1 + t1 - t2 + t3) / 4,
            (1 + t1 + t2 - t3) / 4,
            (1 - t1 + t2 + t3) / 4,
            (1 - t1 - t2 - t3) / 4,
        ]
    )


def in_tetrahedron(t, tol: float = TETRAHEDRON_TOL) -> bool:
    return bool(t_probabilities(t).min() >= -tol)


def t_to_probs(t) -> np.ndarray:
    """Map (t1, t2, t3) to Bell probabilities; inverse of :func:`probs_to_t`."""
    p = t_probabilities(t)
    if p.min() < -TETRAHEDRON_TOL:
        raise OutsideTetrahedronError(f"t={np.asarray(t)} lies outside the tetrahedron")
    return np.clip(p, 0.0, 1.0)


def bds_density(p) -> np.ndarray:
    """Density matrix sum_jk p_jk |beta_jk><beta_jk|."""
    p = check_probabilities(p)
    rho = np.zeros((4, 4), dtype=complex)
    for w, (j, k) in zip(p, ((0, 0), (0, 1), (1, 0), (1, 1))):
        b = bell_state(j, k)
        rho += w * np.outer(b, b.conj())
    return rho


def werner_density(w: float) -> np.ndarray:
    """Werner state (1-w)/4 I(x)I + w |beta11><beta11|, w in [0, 1]."""
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"Werner parameter {w!r} outside [0, 1]")
    b = bell_state(1, 1)
    return (1 - w) / 4 * kron(np.eye(2), np.eye(2)) + w * np.outer(b, b.conj())


def is_separable_bds(t) -> bool:
    """Separability of the BDS at t: |t1| + |t2| + |t3| <= 1 (octahedron)."""
    t = np.asarray(t, dtype=float)
    if not in_tetrahedron(t):
        raise OutsideTetrahedronError(f"t={t} lies outside the tetrahedron")
    return bool(np.sum(np.abs(t)) <= 1.0 + 1e-12)


def tetrahedron_grid(n_side: int = 11) -> np.ndarray:
    """Uniform lattice of Bell probability vectors covering the tetrahedron.

    All compositions (i, j, k, l) of ``n_side`` into four nonnegative parts,
    scaled by 1/n_side, in lexicographic order.  The default n_side=11 gives
    364 points (including the four Bell corners), the closest lattice size
    to the ~340-state sweeps this toolkit ships.
    """
    if n_side < 1:
        raise DomainError("n_side must be >= 1")
    pts = []
    for i in range(n_side + 1):
        for j in range(n_side + 1 - i):
            for k in range(n_side + 1 - i - j):
                pts.append((i, j, k, n_side - i - j - k))
    return np.array(pts, dtype=float) / n_side


def werner_line(n_points: int = 100) -> np.ndarray:
    """n_points Werner parameters uniformly spaced on [0, 1], inclusive."""
    if n_points < 2:
        raise DomainError("n_points must be >= 2")
    return np.linspace(0.0, 1.0, n_points)
