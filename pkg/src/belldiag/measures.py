"""Correlation and entanglement measures for two-qubit states.

Entropic quantities are reported in bits throughout.  Measurement-based
quantities (classical correlation, discord, relative-entropy discord) always
measure the second qubit; ``swap_qubits`` exposes the left-handed variants.

Closed forms specific to Bell-diagonal states (mutual information from the
mixing weights, classical correlation 1 - h2((1+t)/2) with t the largest
|t_i|) are paired with derivative-free optimizers over projective
measurement bases, which serve as their independent cross-checks and as the
only route for general states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DomainError,
    IDENTITY_2,
    PAULI_Y,
    PAULIS,
    binary_entropy,
    hermitian_eig,
    kron,
    matrix_sqrt_psd,
    partial_trace,
    partial_transpose,
    pauli_expectations,
    von_neumann_entropy_bits,
)
from .seeding import make_rng
from .states import (
    OutsideTetrahedronError,
    in_tetrahedron,
    probs_to_t,
    t_probabilities,
    werner_density,
)

CHSH_DENOM = 2 * math.sqrt(2) - 2
STEERING_DENOM = math.sqrt(3) - 1
BDS_DETECT_TOL = 1e-6


class BadBasisError(ValueError):
    """Measurement basis is not orthonormal."""


def swap_qubits(rho) -> np.ndarray:
    """Exchange the two qubits of a 4x4 operator."""
    return np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)


# ---------------------------------------------------------------------------
# Entanglement
# ---------------------------------------------------------------------------

def concurrence(rho) -> float:
    """Wootters concurrence max(0, mu1 - mu2 - mu3 - mu4).

    mu_i are the descending square roots of the eigenvalues of rho*rho~,
    rho~ = (sigma_y x sigma_y) rho^* (sigma_y x sigma_y) with conjugation in
    the computational basis.
    """
    rho = np.asarray(rho, dtype=complex)
    yy = kron(PAULI_Y, PAULI_Y)
    mu = np.sqrt(np.maximum(np.linalg.eigvals(rho @ yy @ rho.conj() @ yy).real, 0.0))
    mu = np.sort(mu)[::-1]
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def entanglement_of_formation(rho) -> float:
    """Wootters formula h2((1 + sqrt(1 - C^2))/2), in bits."""
    c = concurrence(rho)
    return binary_entropy(0.5 * (1 + math.sqrt(max(0.0, 1 - c * c))))


def chsh_quantities(rho) -> tuple[float, float]:
    """(M, L): M is the sum of the two largest eigenvalues of T^T T and
    L = max(0, (2 sqrt(M) - 2) / (2 sqrt(2) - 2)) the normalized maximal
    CHSH violation (Horodecki criterion)."""
    _, _, t = pauli_expectations(rho)
    tau = np.sort(np.linalg.eigvalsh(t.T @ t))
    m = float(tau[-1] + tau[-2])
    return m, max(0.0, (2 * math.sqrt(max(m, 0.0)) - 2) / CHSH_DENOM)


def chsh_l_bds(t) -> float:
    """BDS form of the CHSH measure: max(0, (sqrt(|t|^2 - t_min^2) - 1) /
    (sqrt(2) - 1)) with t_min the smallest |t_i|."""
    t = np.abs(np.asarray(t, dtype=float))
    val = math.sqrt(max(0.0, float(np.sum(t * t) - np.min(t) ** 2)))
    return max(0.0, (val - 1) / (math.sqrt(2) - 1))


def chsh_bruteforce(rho, grid_density: int = 24) -> float:
    """Direct maximization of the CHSH operator expectation.

    E(a, b) = a^T T b, so for fixed measurement directions b, b' of the
    second party the optimum over a, a' is ||T(b+b')|| + ||T(b-b')||; b and
    b' run over a spherical grid with golden-section coordinate refinement.
    Returns the estimated maximum (2 sqrt(M) for the exact optimum).
    """
    _, _, t = pauli_expectations(rho)
    thetas = np.linspace(0.0, math.pi, grid_density)
    phis = np.linspace(0.0, 2 * math.pi, 2 * grid_density, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    dirs = np.stack(
        [np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], axis=-1
    ).reshape(-1, 3)
    tb = dirs @ t.T  # row i = T b_i
    best_val, best_pair = -1.0, (0, 0)
    chunk = 128
    for lo in range(0, len(tb), chunk):
        seg = tb[lo : lo + chunk]
        plus = np.linalg.norm(seg[:, None, :] + tb[None, :, :], axis=-1)
        minus = np.linalg.norm(seg[:, None, :] - tb[None, :, :], axis=-1)
        vals = plus + minus
        idx = np.unravel_index(np.argmax(vals), vals.shape)
        if vals[idx] > best_val:
            best_val = float(vals[idx])
            best_pair = (lo + idx[0], idx[1])
    angles = [
        thetas[best_pair[0] // len(phis)],
        phis[best_pair[0] % len(phis)],
        thetas[best_pair[1] // len(phis)],
        phis[best_pair[1] % len(phis)],
    ]

    def value(ang):
        th1, ph1, th2, ph2 = ang
        b1 = np.array(
            [math.sin(th1) * math.cos(ph1), math.sin(th1) * math.sin(ph1), math.cos(th1)]
        )
        b2 = np.array(
            [math.sin(th2) * math.cos(ph2), math.sin(th2) * math.sin(ph2), math.cos(th2)]
        )
        return float(np.linalg.norm(t @ (b1 + b2)) + np.linalg.norm(t @ (b1 - b2)))

    span = [thetas[1] - thetas[0], phis[1] - phis[0]] * 2
    angles, best_val = _refine_coordinates(value, angles, span, iters=40, maximize=True)
    return best_val


def steering3(t) -> float:
    """Three-measurement steering max(0, (||t|| - 1) / (sqrt(3) - 1))."""
    t = np.asarray(t, dtype=float)
    if not in_tetrahedron(t):
        raise OutsideTetrahedronError(f"t={t} lies outside the tetrahedron")
    return max(0.0, (float(np.linalg.norm(t)) - 1) / STEERING_DENOM)


# ---------------------------------------------------------------------------
# Entropic measures
# ---------------------------------------------------------------------------

def _xlog2(x: float) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def mutual_information(rho) -> float:
    """S(rho_A) + S(rho_B) - S(rho_AB), in bits."""
    rho = np.asarray(rho, dtype=complex)
    sa = von_neumann_entropy_bits(partial_trace(rho, [0]))
    sb = von_neumann_entropy_bits(partial_trace(rho, [1]))
    return max(0.0, sa + sb - von_neumann_entropy_bits(rho))


def mutual_information_bds(t) -> float:
    """BDS closed form (1/4) sum_x x log2 x over the four 1 +- t_i combinations."""
    t1, t2, t3 = np.asarray(t, dtype=float)
    return 0.25 * (
        _xlog2(1 - t1 - t2 - t3)
        + _xlog2(1 - t1 + t2 + t3)
        + _xlog2(1 + t1 - t2 + t3)
        + _xlog2(1 + t1 + t2 - t3)
    )


def classical_correlation_bds(t) -> float:
    """BDS closed form 1 - h2((1+t)/2), t = max(|t1|, |t2|, |t3|)."""
    t = np.asarray(t, dtype=float)
    if not in_tetrahedron(t):
        raise OutsideTetrahedronError(f"t={t} lies outside the tetrahedron")
    tmax = min(1.0, float(np.max(np.abs(t))))
    return 1.0 - binary_entropy((1 + tmax) / 2)


def _bloch_projectors(thetas, phis):
    """Stacked projectors (1/2)(I + n.sigma) for directions n(theta, phi)."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    nx = np.sin(thetas) * np.cos(phis)
    ny = np.sin(thetas) * np.sin(phis)
    nz = np.cos(thetas)
    proj = np.empty((len(thetas), 2, 2), dtype=complex)
    proj[:, 0, 0] = (1 + nz) / 2
    proj[:, 1, 1] = (1 - nz) / 2
    proj[:, 0, 1] = (nx - 1j * ny) / 2
    proj[:, 1, 0] = (nx + 1j * ny) / 2
    return proj


def _entropy_bits_stack(stack) -> np.ndarray:
    """Von Neumann entropies (bits) of a (..., d, d) stack of PSD matrices."""
    w = np.maximum(np.linalg.eigvalsh(stack), 0.0)
    logs = np.zeros_like(w)
    np.log2(w, out=logs, where=w > 0)
    return -np.sum(w * logs, axis=-1)


def _dephased_stack(rho, projs):
    """chi' = sum_k (I x Pi_k) rho (I x Pi_k) for each projector in the stack."""
    g = len(projs)
    a_plus = np.zeros((g, 4, 4), dtype=complex)
    a_plus[:, :2, :2] = projs
    a_plus[:, 2:, 2:] = projs
    a_minus = np.eye(4, dtype=complex)[None, :, :] - a_plus
    return a_plus @ rho @ a_plus + a_minus @ rho @ a_minus


def _measurement_grid(n_theta: int = 32, n_phi: int = 64):
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    return tt.ravel(), pp.ravel(), thetas[1] - thetas[0], phis[1] - phis[0]


def _golden_section(f, lo, hi, iters, maximize):
    """Golden-section search; returns (x, f(x)) at the bracket's optimum."""
    inv = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if (fc > fd) == maximize:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def _refine_coordinates(f, point, spans, iters, maximize, rounds: int = 3):
    """Per-coordinate golden-section refinement around a grid optimum."""
    point = list(point)
    best = f(point)
    for r in range(rounds):
        shrink = 1.0 / (2**r)
        for i, span in enumerate(spans):

            def along(x, i=i):
                trial = list(point)
                trial[i] = x
                return f(trial)

            x, val = _golden_section(
                along, point[i] - span * shrink, point[i] + span * shrink, iters, maximize
            )
            if (val > best) == maximize or val == best:
                point[i], best = x, val
    return point, best


def _classical_correlation_values(rho, thetas, phis) -> np.ndarray:
    """Post-measurement mutual information for each basis direction:
    S(rho_A) + S(dephased rho_B) - S(dephased rho_AB), in bits."""
    rho = np.asarray(rho, dtype=complex)
    sa = von_neumann_entropy_bits(partial_trace(rho, [0]))
    _, s_vec, _ = pauli_expectations(rho)
    projs = _bloch_projectors(thetas, phis)
    n_dot_s = (
        np.sin(thetas) * np.cos(phis) * s_vec[0]
        + np.sin(thetas) * np.sin(phis) * s_vec[1]
        + np.cos(thetas) * s_vec[2]
    )
    sb_deph = np.array(
        [binary_entropy(min(1.0, max(0.0, (1 + v) / 2))) for v in np.atleast_1d(n_dot_s)]
    )
    s_chi = _entropy_bits_stack(_dephased_stack(rho, projs))
    return sa + sb_deph - s_chi


def classical_correlation_bruteforce(rho, refine_iters: int = 40) -> float:
    """Maximal post-measurement mutual information over projective
    measurements of the second qubit (Bloch-angle grid + refinement)."""
    tt, pp, dth, dph = _measurement_grid()
    vals = _classical_correlation_values(rho, tt, pp)
    best = int(np.argmax(vals))

    def value(ang):
        return float(_classical_correlation_values(rho, [ang[0]], [ang[1]])[0])

    _, best_val = _refine_coordinates(
        value, [tt[best], pp[best]], [dth, dph], refine_iters, maximize=True
    )
    return max(0.0, best_val)


def dephase(rho, basis) -> np.ndarray:
    """Project out the second qubit's coherences in the given orthonormal
    basis: sum_k (I x |k><k|) rho (I x |k><k|)."""
    rho = np.asarray(rho, dtype=complex)
    basis = np.asarray(basis, dtype=complex)
    if basis.shape != (2, 2) or np.max(np.abs(basis.conj().T @ basis - IDENTITY_2)) > 1e-10:
        raise BadBasisError("basis columns must be orthonormal kets")
    out = np.zeros_like(rho)
    for k in range(2):
        ket = basis[:, k]
        pk = kron(IDENTITY_2, np.outer(ket, ket.conj()))
        out += pk @ rho @ pk
    return out


def rel_entropy_discord_asym(rho, refine_iters: int = 40) -> float:
    """Asymmetric relative entropy of discord, in bits.

    For a fixed second-qubit basis the closest dephased state is the
    dephasing of rho itself, so this is min over bases of
    S(dephased rho) - S(rho); minimized on the Bloch-angle grid with
    golden-section refinement.
    """
    rho = np.asarray(rho, dtype=complex)
    s_rho = von_neumann_entropy_bits(rho)
    tt, pp, dth, dph = _measurement_grid()
    vals = _entropy_bits_stack(_dephased_stack(rho, _bloch_projectors(tt, pp)))
    best = int(np.argmin(vals))

    def value(ang):
        projs = _bloch_projectors([ang[0]], [ang[1]])
        return float(_entropy_bits_stack(_dephased_stack(rho, projs))[0])

    _, best_val = _refine_coordinates(
        value, [tt[best], pp[best]], [dth, dph], refine_iters, maximize=False
    )
    return max(0.0, best_val - s_rho)


def as_bell_diagonal(rho, tol: float = BDS_DETECT_TOL):
    """The t-vector of rho if it is numerically Bell-diagonal, else None.

    Requires both marginals within `tol` of I/2 and an (off-)diagonal
    correlation matrix; the returned t is clamped into the tetrahedron.
    """
    r, s, t_mat = pauli_expectations(rho)
    off = t_mat - np.diag(np.diag(t_mat))
    if max(np.max(np.abs(r)), np.max(np.abs(s)), np.max(np.abs(off))) > tol:
        return None
    p = np.maximum(t_probabilities(np.diag(t_mat)), 0.0)
    total = p.sum()
    if total <= 0:
        return None
    return probs_to_t(p / total)


def discord(rho) -> float:
    """Quantum discord: mutual information minus maximal classical
    correlation.  Bell-diagonal inputs take the closed forms; anything else
    goes through the measurement optimizer."""
    t = as_bell_diagonal(rho)
    if t is not None:
        value = mutual_information_bds(t) - classical_correlation_bds(t)
    else:
        value = mutual_information(rho) - classical_correlation_bruteforce(rho)
    return max(0.0, value)


def discord_werner(w: float) -> float:
    """Werner-line discord closed form, in bits."""
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"Werner parameter {w!r} outside [0, 1]")
    return max(
        0.0,
        0.25 * _xlog2(1 - w) - 0.5 * _xlog2(1 + w) + 0.25 * _xlog2(1 + 3 * w),
    )


# ---------------------------------------------------------------------------
# Fidelity
# ---------------------------------------------------------------------------

def fidelity(exact, measured) -> float:
    """Uhlmann fidelity [Tr sqrt(sqrt(exact) measured sqrt(exact))]^2."""
    exact = np.asarray(exact, dtype=complex)
    measured = np.asarray(measured, dtype=complex)
    if exact.shape != measured.shape:
        raise ValueError(f"dimension mismatch {exact.shape} vs {measured.shape}")
    sq = matrix_sqrt_psd(exact)
    inner = sq @ measured @ sq
    w = np.maximum(np.linalg.eigvalsh((inner + inner.conj().T) / 2), 0.0)
    return float(np.sum(np.sqrt(w)) ** 2)


def fidelity_worst_werner(w: float) -> float:
    """Fidelity of the Werner state with the maximally mixed state:
    (1/4)(3/2 sqrt(1-w) + 1/2 sqrt(1+3w))^2."""
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"Werner parameter {w!r} outside [0, 1]")
    return 0.25 * (1.5 * math.sqrt(1 - w) + 0.5 * math.sqrt(1 + 3 * w)) ** 2


# ---------------------------------------------------------------------------
# Aggregate report
# ---------------------------------------------------------------------------

@dataclass
class MeasureReport:
    """All correlation quantities of one two-qubit state (entropic fields
    in bits).  `method` records whether the Bell-diagonal closed forms or
    the measurement optimizers produced the entropic correlations."""

    eof: float
    concurrence: float
    chsh_M: float
    chsh_L: float
    steering3: float
    mutual_info: float
    classical_corr: float
    discord: float
    ppt_min_eig: float
    fidelity_vs_target: float | None
    method: str

    FIELD_ORDER = (
        "eof",
        "concurrence",
        "chsh_M",
        "chsh_L",
        "steering3",
        "mutual_info",
        "classical_corr",
        "discord",
        "ppt_min_eig",
    )

    def to_dict(self) -> dict:
        d = {name: getattr(self, name) for name in self.FIELD_ORDER}
        d["fidelity_vs_target"] = self.fidelity_vs_target
        d["method"] = self.method
        return d


def report(rho, target=None, refine_iters: int = 40) -> MeasureReport:
    """Evaluate every measure on one state.

    Numerically Bell-diagonal states use the closed-form correlations;
    general states use the measurement optimizer.  `target`, if given, adds
    the fidelity against it.
    """
    rho = np.asarray(rho, dtype=complex)
    m, l = chsh_quantities(rho)
    t = as_bell_diagonal(rho)
    if t is not None:
        mi = mutual_information_bds(t)
        cc = classical_correlation_bds(t)
        s3 = steering3(t)
        method = "bds-closed-form"
    else:
        mi = mutual_information(rho)
        cc = classical_correlation_bruteforce(rho, refine_iters)
        _, _, t_mat = pauli_expectations(rho)
        s3 = max(0.0, (float(np.linalg.norm(t_mat, "fro")) - 1) / STEERING_DENOM)
        method = "general-optimizer"
    ppt_w, _ = hermitian_eig(partial_transpose(rho, 1))
    return MeasureReport(
        eof=entanglement_of_formation(rho),
        concurrence=concurrence(rho),
        chsh_M=m,
        chsh_L=l,
        steering3=s3,
        mutual_info=max(0.0, mi),
        classical_corr=max(0.0, cc),
        discord=max(0.0, mi - cc),
        ppt_min_eig=float(ppt_w[-1]),
        fidelity_vs_target=None if target is None else fidelity(target, rho),
        method=method,
    )


# ---------------------------------------------------------------------------
# Random states for property checks
# ---------------------------------------------------------------------------

def random_two_qubit_state(seed_or_rng) -> np.ndarray:
    """Generic mixed state: partial trace of a random pure three-qubit state
    (normalized complex Gaussian amplitudes)."""
    rng = make_rng(seed_or_rng) if isinstance(seed_or_rng, (int, np.integer)) else seed_or_rng
    vec = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    vec /= np.linalg.norm(vec)
    return partial_trace(np.outer(vec, vec.conj()), [0, 1], 3)


def werner_measures(w: float) -> dict:
    """Closed-form Werner-line values of every measure (for benchmarks)."""
    t = np.array([-w, -w, -w])
    rho = werner_density(w)
    m, l = chsh_quantities(rho)
    return {
        "eof": entanglement_of_formation(rho),
        "concurrence": max(0.0, (3 * w - 1) / 2),
        "chsh_M": m,
        "chsh_L": l,
        "steering3": steering3(t),
        "mutual_info": mutual_information_bds(t),
        "classical_corr": classical_correlation_bds(t),
        "discord": discord_werner(w),
    }
