"""Covariant two-clone outputs, the no-signalling constraint and the feasibility bound.

The two-clone output of a universal great-circle cloner is parametrized by the
pair of reduction factors (eta1, eta2) and a real 3x3 correlation tensor.
Requiring that antipodal input ensembles produce identical average outputs
forces t_xx = t_zz and t_xz = -t_zx, leaving seven free tensor entries.
Positivity of the north-pole output then bounds eta1^2 + eta2^2; a numerical
search over the free entries recovers the attainable boundary, the unit
circle in the (eta1, eta2) plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .cloner import clone, coefficients, reduced_clones
from .linalg import kron
from .pauli import (
    PAULI_LEFT,
    PAULI_PAIRS,
    PAULI_RIGHT,
    pauli_decompose,
    rotate_bloch,
    rotation_unitary,
)

GREAT_CIRCLE_ATOL = 1e-12
CONSTRAINT_ATOL = 1e-12
DEFAULT_PSD_TOL = 1e-9
DEFAULT_BUDGET = 5000
DEFAULT_RESTARTS = 20
DEFAULT_RADIUS_TOL = 1e-3

# Order of the free correlation-tensor entries once the no-signalling
# constraints t_zz = t_xx and t_zx = -t_xz are imposed.
FREE_PARAMETERS = ("t_xx", "t_xz", "t_yy", "t_xy", "t_yx", "t_yz", "t_zy")

UP = np.array([0.0, 0.0, 1.0])
DOWN = np.array([0.0, 0.0, -1.0])
RIGHT = np.array([1.0, 0.0, 0.0])
LEFT = np.array([-1.0, 0.0, 0.0])


def constrain_tensor(free) -> np.ndarray:
    """Correlation tensor built from the seven free entries (see FREE_PARAMETERS).

    The returned 3x3 tensor satisfies the no-signalling equalities exactly:
    t_zz = t_xx and t_zx = -t_xz.
    """
    free = np.asarray(free, dtype=float)
    if free.shape != (7,):
        raise ValueError(f"expected the {len(FREE_PARAMETERS)} free entries {FREE_PARAMETERS}, got shape {free.shape}")
    if np.any(np.abs(free) > 1 + 1e-12):
        raise ValueError("free correlation entries must lie in [-1, 1]")
    t_xx, t_xz, t_yy, t_xy, t_yx, t_yz, t_zy = free
    return np.array([
        [t_xx, t_xy, t_xz],
        [t_yx, t_yy, t_yz],
        [-t_xz, t_zy, t_xx],
    ])


def free_parameters(t: np.ndarray) -> np.ndarray:
    """Project a tensor onto the seven free entries (averaging the constrained pairs)."""
    t = np.asarray(t, dtype=float)
    return np.array([
        (t[0, 0] + t[2, 2]) / 2,
        (t[0, 2] - t[2, 0]) / 2,
        t[1, 1],
        t[0, 1],
        t[1, 0],
        t[1, 2],
        t[2, 1],
    ])


def _validate_etas(etas) -> tuple[float, float]:
    eta1, eta2 = float(etas[0]), float(etas[1])
    if not (0.0 <= eta1 <= 1.0 and 0.0 <= eta2 <= 1.0):
        raise ValueError(f"reduction factors must lie in [0, 1], got ({eta1}, {eta2})")
    return eta1, eta2


def build_joint_output(m, etas, t: np.ndarray) -> np.ndarray:
    """Two-qubit output with marginals eta1*m and eta2*m and correlation tensor ``t``.

    The input Bloch vector must be a unit vector on the x-z great circle.
    Hermiticity and unit trace are guaranteed; positivity is not.
    """
    m = np.asarray(m, dtype=float)
    if abs(m[1]) > GREAT_CIRCLE_ATOL:
        raise ValueError(f"off great circle: m_y = {m[1]:.3e}")
    if abs(np.linalg.norm(m) - 1.0) > 1e-9:
        raise ValueError(f"input Bloch vector must be a unit vector, got |m| = {np.linalg.norm(m):.12f}")
    eta1, eta2 = _validate_etas(etas)
    t = np.asarray(t, dtype=float)
    if t.shape != (3, 3):
        raise ValueError(f"correlation tensor must be 3x3, got shape {t.shape}")

    rho = np.eye(4, dtype=complex)
    rho += eta1 * np.tensordot(m, PAULI_LEFT, axes=1)
    rho += eta2 * np.tensordot(m, PAULI_RIGHT, axes=1)
    rho += np.tensordot(t, PAULI_PAIRS, axes=([0, 1], [0, 1]))
    return rho / 4


def rotate_correlations(t: np.ndarray, beta: float) -> np.ndarray:
    """Correlation tensor after rotating the input Bloch vector about y by ``beta``.

    The nine closed-form relations below make the output of build_joint_output
    covariant under simultaneous rotation of both clones (see
    covariance_residual, which verifies them against the unitary route).
    """
    t = np.asarray(t, dtype=float)
    c, s = np.cos(beta), np.sin(beta)
    t_xx, t_xy, t_xz = t[0]
    t_yx, t_yy, t_yz = t[1]
    t_zx, t_zy, t_zz = t[2]
    return np.array([
        [c * c * t_xx + s * s * t_zz + s * c * (t_xz + t_zx),
         c * t_xy + s * t_zy,
         s * c * (t_zz - t_xx) + c * c * t_xz - s * s * t_zx],
        [c * t_yx + s * t_yz,
         t_yy,
         -s * t_yx + c * t_yz],
        [s * c * (t_zz - t_xx) - s * s * t_xz + c * c * t_zx,
         -s * t_xy + c * t_zy,
         -s * c * (t_xz + t_zx) + c * c * t_zz + s * s * t_xx],
    ])


def covariance_residual(m, etas, t: np.ndarray, beta: float) -> float:
    """Entrywise gap between the rotated-parameter output and the unitarily rotated output."""
    direct = build_joint_output(rotate_bloch(m, beta), etas, rotate_correlations(t, beta))
    u2 = kron(rotation_unitary(beta), rotation_unitary(beta))
    conjugated = u2 @ build_joint_output(m, etas, t) @ u2.conj().T
    return float(np.max(np.abs(direct - conjugated)))


def no_signalling_residual(etas, t: np.ndarray) -> float:
    """Max-norm of [rho(up) + rho(down)] - [rho(right) + rho(left)].

    Vanishes exactly when t_xx = t_zz and t_xz = -t_zx; otherwise reports the
    magnitude by which the two antipodal ensembles could be told apart.
    """
    lhs = build_joint_output(UP, etas, t) + build_joint_output(DOWN, etas, rotate_correlations(t, np.pi))
    rhs = (build_joint_output(RIGHT, etas, rotate_correlations(t, np.pi / 2))
           + build_joint_output(LEFT, etas, rotate_correlations(t, 3 * np.pi / 2)))
    return float(np.max(np.abs(lhs - rhs)))


def _up_matrix(eta1: float, eta2: float, free: np.ndarray) -> np.ndarray:
    """North-pole output assembled entrywise from the seven free tensor entries."""
    t_xx, t_xz, t_yy, t_xy, t_yx, t_yz, t_zy = free
    return 0.25 * np.array([
        [1 + eta1 + eta2 + t_xx,
         -(t_xz + 1j * t_zy),
         t_xz - 1j * t_yz,
         (t_xx - t_yy) - 1j * (t_xy + t_yx)],
        [-t_xz + 1j * t_zy,
         1 + eta1 - eta2 - t_xx,
         (t_xx + t_yy) + 1j * (t_xy - t_yx),
         -t_xz + 1j * t_yz],
        [t_xz + 1j * t_yz,
         (t_xx + t_yy) - 1j * (t_xy - t_yx),
         1 - eta1 + eta2 - t_xx,
         t_xz + 1j * t_zy],
        [(t_xx - t_yy) + 1j * (t_xy + t_yx),
         -(t_xz + 1j * t_yz),
         t_xz - 1j * t_zy,
         1 - eta1 - eta2 + t_xx],
    ])


def positivity_matrix_up(etas, t: np.ndarray) -> np.ndarray:
    """The explicit 4x4 north-pole output for a constrained tensor.

    Assembled entry by entry; identical (to machine precision) to
    ``build_joint_output(UP, etas, t)``, which serves as the cross-check.
    """
    eta1, eta2 = _validate_etas(etas)
    t = np.asarray(t, dtype=float)
    if abs(t[0, 0] - t[2, 2]) > CONSTRAINT_ATOL or abs(t[0, 2] + t[2, 0]) > CONSTRAINT_ATOL:
        raise ValueError("correlation tensor violates the no-signalling constraints t_xx = t_zz, t_xz = -t_zx")
    return _up_matrix(eta1, eta2, free_parameters(t))


def bound_rhs(t: np.ndarray) -> float:
    """Upper bound on eta1^2 + eta2^2 implied by positivity: 1 - t_yy^2 - t_xy^2 - t_yx^2 - t_yz^2 - t_zy^2."""
    t = np.asarray(t, dtype=float)
    return float(1.0 - t[1, 1] ** 2 - t[0, 1] ** 2 - t[1, 0] ** 2 - t[1, 2] ** 2 - t[2, 1] ** 2)


def machine_witness_tensor(etas) -> np.ndarray:
    """Exact positivity witness for any point of the closed unit disk.

    Radially project (eta1, eta2) onto the unit circle, take the correlation
    tensor of the cloning machine's north-pole output there, and shrink it
    back by the radius.  The result describes the convex blend of that
    machine output with the maximally mixed state, hence is always realizable
    by a positive semidefinite output.
    """
    eta1, eta2 = _validate_etas(etas)
    radius = float(np.hypot(eta1, eta2))
    if radius == 0.0:
        return np.zeros((3, 3))
    if radius > 1.0 + 1e-9:
        raise ValueError(f"no mixture witness outside the unit disk: radius {radius:.6f}")
    state = clone(0.0, coefficients((eta1 / radius, eta2 / radius)))
    machine_t = pauli_decompose(reduced_clones(state)[2]).t
    return constrain_tensor(np.clip(free_parameters(min(radius, 1.0) * machine_t), -1.0, 1.0))


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of a positivity search at fixed reduction factors."""

    feasible: bool
    best_min_eigenvalue: float
    witness: np.ndarray
    evaluations: int


def feasibility(etas, budget: int = DEFAULT_BUDGET, psd_tol: float = DEFAULT_PSD_TOL,
                restarts: int = DEFAULT_RESTARTS, rng=None) -> FeasibilityReport:
    """Search the seven free tensor entries for a positive semidefinite output.

    Maximizes the minimum eigenvalue of the north-pole output with a
    multi-start simplex search: one start at the zero tensor, one at the
    machine-derived witness (inside the unit disk, where it certifies
    feasibility outright) and the rest drawn uniformly from [-1, 1]^7.
    ``budget`` caps the number of eigenvalue evaluations across all starts.
    The verdict is one-sided by construction: a reported feasible point comes
    with an explicit witness, and an infeasible verdict means no evaluated
    tensor reached -psd_tol.
    """
    eta1, eta2 = _validate_etas(etas)
    rng = np.random.default_rng(rng)

    if eta1 == 0.0 and eta2 == 0.0:
        witness = np.zeros((3, 3))
        lam = float(np.linalg.eigvalsh(_up_matrix(0.0, 0.0, np.zeros(7)))[0])
        return FeasibilityReport(feasible=True, best_min_eigenvalue=lam, witness=witness, evaluations=1)

    evaluations = 0
    best_value = -np.inf
    best_free = np.zeros(7)

    def min_eigenvalue(free: np.ndarray) -> float:
        nonlocal evaluations, best_value, best_free
        free = np.clip(free, -1.0, 1.0)
        evaluations += 1
        lam = float(np.linalg.eigvalsh(_up_matrix(eta1, eta2, free))[0])
        if lam > best_value:
            best_value = lam
            best_free = free.copy()
        return lam

    starts = [np.zeros(7)]
    if eta1**2 + eta2**2 <= 1.0 + 1e-12:
        starts.append(free_parameters(machine_witness_tensor(etas)))
    while len(starts) < restarts:
        starts.append(rng.uniform(-1.0, 1.0, size=7))

    for index, start in enumerate(starts):
        if index >= 2 and evaluations >= budget:
            break  # the zero and witness starts always run; they carry the verdict
        min_eigenvalue(start)
        if best_value >= -psd_tol:
            break

    if best_value < -psd_tol:
        per_restart = max(8, (budget - evaluations) // max(1, restarts))
        for start in starts:
            remaining = budget - evaluations
            if remaining <= 0:
                break
            minimize(
                lambda free: -min_eigenvalue(free),
                start,
                method="Nelder-Mead",
                bounds=[(-1.0, 1.0)] * 7,
                options={"maxfev": min(per_restart, remaining), "xatol": 1e-5, "fatol": 1e-12},
            )
            if best_value >= -psd_tol:
                break

    return FeasibilityReport(
        feasible=best_value >= -psd_tol,
        best_min_eigenvalue=best_value,
        witness=constrain_tensor(best_free),
        evaluations=evaluations,
    )


def max_radius(phi: float, radius_tol: float = DEFAULT_RADIUS_TOL, budget: int = DEFAULT_BUDGET,
               psd_tol: float = DEFAULT_PSD_TOL, rng=None, max_iterations: int = 20) -> float:
    """Largest feasible radius along the ray (r cos(phi), r sin(phi)) of the unit square.

    Bisects between a certified feasible radius and an infeasible one; the
    attainable boundary is the unit circle, so the result is 1 within
    ``radius_tol`` for every direction.
    """
    if not (0.0 <= phi <= np.pi / 2):
        raise ValueError(f"direction must lie in [0, pi/2], got {phi}")
    rng = np.random.default_rng(rng)
    cos_phi, sin_phi = float(np.cos(phi)), float(np.sin(phi))

    caps = [np.sqrt(2.0)]
    if cos_phi > 1e-12:
        caps.append(1.0 / cos_phi)
    if sin_phi > 1e-12:
        caps.append(1.0 / sin_phi)
    cap = min(caps)

    def is_feasible(radius: float) -> bool:
        etas = (min(radius * cos_phi, 1.0), min(radius * sin_phi, 1.0))
        return feasibility(etas, budget=budget, psd_tol=psd_tol, rng=rng).feasible

    if is_feasible(cap):
        return cap
    lo, hi = 0.0, cap
    for _ in range(max_iterations):
        if hi - lo <= radius_tol:
            break
        mid = 0.5 * (lo + hi)
        if is_feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo
