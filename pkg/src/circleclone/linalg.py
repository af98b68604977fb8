"""Dense complex linear algebra for small multi-qubit systems (dimension <= 8)."""

from __future__ import annotations

from typing import Sequence

import numpy as np

HERMITIAN_ATOL = 1e-10
PSD_TOL = 1e-9


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def hermiticity_defect(m: np.ndarray) -> float:
    """max_jk |M[j,k] - conj(M[k,j])|."""
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m - m.conj().T)))


def _require_hermitian(m: np.ndarray, atol: float) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"not Hermitian: expected a square matrix, got shape {m.shape}")
    defect = hermiticity_defect(m)
    if defect > atol:
        raise ValueError(f"not Hermitian: defect {defect:.3e} exceeds tolerance {atol:.1e}")
    return m


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; the left factor owns the most significant index block."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho: np.ndarray, keep: int | Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Reduced matrix of ``rho`` on the kept subsystems.

    ``rho`` acts on the tensor product of subsystems with dimensions ``dims``
    (first subsystem most significant, matching C-order kets); ``keep`` names
    one subsystem index or a sequence of them.  The entries of all remaining
    subsystems are summed out.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if rho.ndim != 2 or rho.shape != (total, total):
        raise ValueError(f"bad factorization: dims {dims} do not tile a matrix of shape {rho.shape}")
    if isinstance(keep, (int, np.integer)):
        keep = [int(keep)]
    keep = sorted(int(k) for k in keep)
    n = len(dims)
    if len(set(keep)) != len(keep) or any(k < 0 or k >= n for k in keep):
        raise ValueError(f"bad factorization: keep={keep} is not a subset of the {n} subsystems")

    tensor = rho.reshape(dims + dims)
    row = [chr(ord("a") + i) for i in range(n)]
    col = [chr(ord("a") + n + i) if i in keep else row[i] for i in range(n)]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    reduced = np.einsum("".join(row + col) + "->" + "".join(out), tensor)
    kept_dim = int(np.prod([dims[k] for k in keep]))
    return reduced.reshape(kept_dim, kept_dim)


def hermitian_eigenvalues(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, ascending.

    The input is symmetrized as (M + M^dagger)/2 before solving; inputs whose
    hermiticity defect exceeds ``atol`` are rejected.
    """
    m = _require_hermitian(m, atol)
    return np.linalg.eigvalsh((m + m.conj().T) / 2)


def is_psd(m: np.ndarray, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Whether ``m`` is positive semidefinite within ``tol``, plus its minimum eigenvalue."""
    lam_min = float(hermitian_eigenvalues(m)[0])
    return lam_min >= -tol, lam_min
