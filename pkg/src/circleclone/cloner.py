"""The asymmetric 1-to-2 cloning transformation for x-z great-circle qubits.

The transformation is a 2 -> 8 isometry on (original, blank, machine) with the
basis convention index = 4*o + 2*b + 1*M (original most significant).  On the
curve eta1^2 + eta2^2 = 1 both reduced clones are isotropic shrunk copies of
the input with reduction factors eta1 and eta2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import hermitian_eigenvalues, kron, partial_trace
from .pauli import (
    density_to_bloch,
    great_circle_bloch,
    great_circle_ket,
    pauli_decompose,
    rotation_unitary,
)

ON_CIRCLE_ATOL = 1e-8

# Bloch component below which a per-axis shrink ratio is read off a cardinal
# input (theta = 0 for z, theta = pi/2 for x) instead of the requested theta.
_AXIS_COMPONENT_FLOOR = 0.1


@dataclass(frozen=True)
class CloneCoefficients:
    """Amplitudes (a, b, c, d) of the cloning isometry for reduction factors (eta1, eta2)."""

    a: float
    b: float
    c: float
    d: float
    eta1: float
    eta2: float


def coefficients(etas) -> CloneCoefficients:
    """Closed-form isometry amplitudes for reduction factors ``etas = (eta1, eta2)``.

    They satisfy a^2 + b^2 + c^2 + d^2 = 1, a*d = b*c and a >= b, c >= d >= 0.
    """
    eta1, eta2 = float(etas[0]), float(etas[1])
    if not (0.0 <= eta1 <= 1.0 and 0.0 <= eta2 <= 1.0):
        raise ValueError(f"reduction factors must lie in [0, 1], got ({eta1}, {eta2})")
    a = 0.5 * math.sqrt((1 + eta1) * (1 + eta2))
    b = 0.5 * math.sqrt((1 + eta1) * (1 - eta2))
    c = 0.5 * math.sqrt((1 - eta1) * (1 + eta2))
    d = 0.5 * math.sqrt((1 - eta1) * (1 - eta2))
    return CloneCoefficients(a=a, b=b, c=c, d=d, eta1=eta1, eta2=eta2)


def _basis_images(coeffs: CloneCoefficients) -> np.ndarray:
    """The 8x2 isometry matrix: columns are the images of |0> and |1>."""
    a, b, c, d = coeffs.a, coeffs.b, coeffs.c, coeffs.d
    v = np.zeros((8, 2), dtype=complex)
    # |0>_o -> (a|00> + d|11>)|0>_M + (b|01> + c|10>)|1>_M
    v[0b000, 0] = a
    v[0b110, 0] = d
    v[0b011, 0] = b
    v[0b101, 0] = c
    # |1>_o -> (a|11> + d|00>)|1>_M + (b|10> + c|01>)|0>_M
    v[0b111, 1] = a
    v[0b001, 1] = d
    v[0b100, 1] = b
    v[0b010, 1] = c
    return v


def clone(theta: float, coeffs: CloneCoefficients) -> np.ndarray:
    """Normalized 8-component output state for the circle input at angle ``theta``."""
    ket = great_circle_ket(theta)
    return _basis_images(coeffs) @ ket


def isometry_check(coeffs: CloneCoefficients) -> float:
    """Max deviation of the Gram matrix of the two basis images from the 2x2 identity."""
    v = _basis_images(coeffs)
    gram = v.conj().T @ v
    return float(np.max(np.abs(gram - np.eye(2))))


def reduced_clones(state: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(rho_o, rho_b, rho_ob) reduced from the rank-1 projector of an 8-dim output state."""
    state = np.asarray(state, dtype=complex).reshape(8)
    rho = np.outer(state, state.conj())
    dims = [2, 2, 2]
    return (
        partial_trace(rho, 0, dims),
        partial_trace(rho, 1, dims),
        partial_trace(rho, (0, 1), dims),
    )


def partial_transpose_second(rho: np.ndarray) -> np.ndarray:
    """Partial transpose of a two-qubit matrix on its second subsystem."""
    rho = np.asarray(rho, dtype=complex)
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def _isotropy_residual(rho: np.ndarray, ket: np.ndarray) -> tuple[float, float]:
    """Best-fit shrink s = 2<psi|rho|psi> - 1 and the max-norm residual of the isotropic form."""
    fidelity = float(np.real(ket.conj() @ rho @ ket))
    s = 2 * fidelity - 1
    projector = np.outer(ket, ket.conj())
    residual = float(np.max(np.abs(rho - s * projector - (1 - s) * np.eye(2) / 2)))
    return s, residual


def _axis_shrink(axis: int, bloch: np.ndarray, m: np.ndarray, probe_bloch: np.ndarray) -> float:
    """Per-axis Bloch shrink ratio, read off a cardinal probe when |m_axis| is small."""
    if abs(m[axis]) > _AXIS_COMPONENT_FLOOR:
        return float(bloch[axis] / m[axis])
    return float(probe_bloch[axis])


@dataclass(frozen=True)
class CloneReport:
    """Diagnostics of one cloning run: shrinks, fidelities, correlations and separability."""

    theta: float
    eta1: float
    eta2: float
    on_circle: bool
    shrink_o_z: float
    shrink_o_x: float
    shrink_b_z: float
    shrink_b_x: float
    fidelity_o: float
    fidelity_b: float
    isotropy_residual_o: float
    isotropy_residual_b: float
    correlation: np.ndarray
    ppt_min_eigenvalue: float


def clone_report(theta: float, etas) -> CloneReport:
    """Run the machine at one input and extract every reported diagnostic.

    Per-axis shrinks are Bloch component ratios, falling back to the cardinal
    inputs (theta = 0 for z, pi/2 for x) when the requested input has no
    component along an axis.  The isotropy residual of each clone holds the
    shrink fitted at the requested angle fixed and measures the worst
    deviation from the shrunk-copy-plus-noise form across the requested and
    both cardinal inputs, so anisotropy is visible from any single run.
    ``ppt_min_eigenvalue`` is the minimum eigenvalue of the joint output's
    partial transpose (non-negative exactly when the output is separable).
    """
    coeffs = coefficients(etas)
    state = clone(theta, coeffs)
    rho_o, rho_b, rho_ob = reduced_clones(state)
    ket = great_circle_ket(theta)
    m = great_circle_bloch(theta)

    probes = {}
    for probe_theta in (0.0, np.pi / 2):
        probe_state = clone(probe_theta, coeffs)
        probe_rho = np.outer(probe_state, probe_state.conj())
        probes[probe_theta] = (
            partial_trace(probe_rho, 0, [2, 2, 2]),
            partial_trace(probe_rho, 1, [2, 2, 2]),
        )

    bloch_o = density_to_bloch(rho_o)
    bloch_b = density_to_bloch(rho_b)
    bloch_pole = (density_to_bloch(probes[0.0][0]), density_to_bloch(probes[0.0][1]))
    bloch_equator = (density_to_bloch(probes[np.pi / 2][0]), density_to_bloch(probes[np.pi / 2][1]))

    residuals = []
    fidelities = []
    for subsystem, rho in ((0, rho_o), (1, rho_b)):
        s, residual = _isotropy_residual(rho, ket)
        for probe_theta, reduced in probes.items():
            probe_ket = great_circle_ket(probe_theta)
            projector = np.outer(probe_ket, probe_ket.conj())
            gap = reduced[subsystem] - s * projector - (1 - s) * np.eye(2) / 2
            residual = max(residual, float(np.max(np.abs(gap))))
        residuals.append(residual)
        fidelities.append((1 + s) / 2)

    ppt_min = float(hermitian_eigenvalues(partial_transpose_second(rho_ob))[0])
    on_circle = abs(coeffs.eta1**2 + coeffs.eta2**2 - 1.0) <= ON_CIRCLE_ATOL

    return CloneReport(
        theta=float(theta),
        eta1=coeffs.eta1,
        eta2=coeffs.eta2,
        on_circle=on_circle,
        shrink_o_z=_axis_shrink(2, bloch_o, m, bloch_pole[0]),
        shrink_o_x=_axis_shrink(0, bloch_o, m, bloch_equator[0]),
        shrink_b_z=_axis_shrink(2, bloch_b, m, bloch_pole[1]),
        shrink_b_x=_axis_shrink(0, bloch_b, m, bloch_equator[1]),
        fidelity_o=fidelities[0],
        fidelity_b=fidelities[1],
        isotropy_residual_o=residuals[0],
        isotropy_residual_b=residuals[1],
        correlation=pauli_decompose(rho_ob).t,
        ppt_min_eigenvalue=ppt_min,
    )


def isotropy_scan(etas, samples: int) -> float:
    """Worst isotropy residual of either clone over ``samples`` angles uniform in [0, 2*pi)."""
    if samples < 2:
        raise ValueError(f"samples must be at least 2, got {samples}")
    coeffs = coefficients(etas)
    images = _basis_images(coeffs)
    worst = 0.0
    for theta in np.linspace(0.0, 2 * np.pi, samples, endpoint=False):
        ket = great_circle_ket(theta)
        state = images @ ket
        rho = np.outer(state, state.conj())
        for subsystem in (0, 1):
            reduced = partial_trace(rho, subsystem, [2, 2, 2])
            worst = max(worst, _isotropy_residual(reduced, ket)[1])
    return worst


def covariance_check_machine(etas, theta: float, beta: float) -> float:
    """Max-norm deviation of rho_ob(theta + beta) from the y-rotated rho_ob(theta).

    Only defined on the optimal curve, where the machine output transforms
    covariantly under simultaneous rotation of both clones.
    """
    eta1, eta2 = float(etas[0]), float(etas[1])
    if abs(eta1**2 + eta2**2 - 1.0) > ON_CIRCLE_ATOL:
        raise ValueError(f"({eta1}, {eta2}) is not on the curve eta1^2 + eta2^2 = 1")
    coeffs = coefficients(etas)
    rho_rotated = reduced_clones(clone(theta + beta, coeffs))[2]
    u2 = kron(rotation_unitary(beta), rotation_unitary(beta))
    rho_conjugated = u2 @ reduced_clones(clone(theta, coeffs))[2] @ u2.conj().T
    return float(np.max(np.abs(rho_rotated - rho_conjugated)))
