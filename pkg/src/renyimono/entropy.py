"""Rényi-α and von Neumann entropies (base 2) from the eigenvalue spectrum."""

from __future__ import annotations

import numpy as np

from .qcore import QuantumState, StateError, eig_hermitian, require_valid

_EPS_PER_DIM = 16 * np.finfo(float).eps


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha <= 0:
        raise ValueError(f"alpha must be a positive real, got {alpha}")
    if alpha == 1.0:
        raise ValueError("alpha = 1 is the von Neumann limit; use von_neumann_entropy")
    return alpha


def _spectrum(rho) -> np.ndarray:
    if isinstance(rho, QuantumState):
        require_valid(rho)
        if rho.is_pure:
            return np.array([1.0])
        rho = rho.data
    w = eig_hermitian(rho).eigenvalues
    if w[-1] < 0:
        raise StateError(f"negative eigenvalue {w[-1]:.3g} outside the clip band")
    # eigenvalues at rounding level are zeros; for alpha < 1 they would
    # otherwise add a spurious w**alpha
    return np.where(w > _EPS_PER_DIM * len(w), w, 0.0)


def renyi_from_spectrum(eigenvalues, alpha: float) -> float:
    """S_α of a probability vector; zero entries contribute nothing."""
    alpha = check_alpha(alpha)
    w = np.asarray(eigenvalues, dtype=float)
    w = w[w > 0]
    s = np.log2(np.sum(w**alpha)) / (1.0 - alpha)
    return max(float(s), 0.0)


def renyi_entropy(rho, alpha: float) -> float:
    """Rényi-α entropy ``log2(tr ρ^α) / (1 - α)`` of a state or density matrix."""
    alpha = check_alpha(alpha)
    return renyi_from_spectrum(_spectrum(rho), alpha)


def von_neumann_from_spectrum(eigenvalues) -> float:
    w = np.asarray(eigenvalues, dtype=float)
    w = w[w > 0]
    return max(float(-np.sum(w * np.log2(w))), 0.0)


def von_neumann_entropy(rho) -> float:
    return von_neumann_from_spectrum(_spectrum(rho))
