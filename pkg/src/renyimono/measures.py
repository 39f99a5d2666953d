"""Rényi-α entanglement (RαE), its assisted dual (RαEoA) and two-qubit tools."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .entropy import check_alpha, renyi_entropy, renyi_from_spectrum
from .qcore import (
    QuantumState,
    StateError,
    eig_hermitian,
    partial_trace,
    permute,
    require_valid,
)
from .roof import Decomposition, RoofOptions, roof_search

_SY = np.array([[0, -1j], [1j, 0]])
_SYSY = np.kron(_SY, _SY)
PURE_TOL = 1e-9


@dataclass(frozen=True)
class PartitionSpec:
    """Focus subsystem A against the ordered partners B_0 ... B_{N-1}.

    ``mode`` is ``"one-vs-rest"`` or ``"pair"`` (a single partner).
    """

    focus: int
    partners: tuple[int, ...]
    mode: str = "one-vs-rest"

    def __post_init__(self):
        partners = tuple(int(p) for p in self.partners)
        object.__setattr__(self, "partners", partners)
        if not partners:
            raise ValueError("partition needs at least one partner")
        if self.focus in partners:
            raise ValueError(f"focus {self.focus} also listed as a partner")
        if len(set(partners)) != len(partners):
            raise ValueError(f"duplicate partners in {partners}")
        if self.mode not in ("one-vs-rest", "pair"):
            raise ValueError(f"unknown partition mode {self.mode!r}")
        if self.mode == "pair" and len(partners) != 1:
            raise ValueError("pair mode takes exactly one partner")

    @classmethod
    def rest(cls, focus: int, n: int) -> PartitionSpec:
        return cls(focus, tuple(i for i in range(n) if i != focus))

    @classmethod
    def pair(cls, focus: int, partner: int) -> PartitionSpec:
        return cls(focus, (partner,), "pair")

    def check(self, state: QuantumState) -> None:
        if not 0 <= self.focus < state.layout.n:
            raise StateError(f"focus index {self.focus} out of range")
        state.layout.check_indices(self.partners)


@dataclass
class RoofResult:
    """Value of a (possibly) convex-roof measure.

    ``method`` is ``"pure"``, ``"analytic"`` or ``"roof"``; ``bound`` tells the
    direction of the error: ``"exact"`` for the first two, ``"upper"`` for a
    minimising search and ``"lower"`` for a maximising one. ``reduced`` is the
    state the decomposition refers to: focus and partners only, focus first.
    """

    value: float
    decomposition: Decomposition | None
    method: str
    bound: str = "exact"
    converged: bool = True
    restarts: int = 0
    ensemble_value: float | None = None
    notes: list[str] = field(default_factory=list)
    reduced: QuantumState | None = None

    def provenance(self) -> dict:
        if self.method == "roof":
            return {
                "method": "roof",
                "bound": self.bound,
                "restarts": self.restarts,
                "converged": self.converged,
            }
        return {"method": self.method, "bound": "exact"}


def _two_qubit_matrix(rho) -> np.ndarray:
    if isinstance(rho, QuantumState):
        if tuple(rho.dims) != (2, 2):
            raise StateError(f"two-qubit state required, got dims {rho.dims}")
        require_valid(rho)
        return rho.matrix()
    m = np.asarray(rho, dtype=np.complex128)
    if m.shape != (4, 4):
        raise StateError(f"two-qubit density matrix required, got shape {m.shape}")
    return m


def _flip_roots(m: np.ndarray) -> np.ndarray:
    """Descending Wootters λ's: square roots of the spectrum of ρ (σy⊗σy) ρ* (σy⊗σy).

    With ρ = V V† they are the singular values of Vᵀ (σy⊗σy) V, which avoids
    square roots of rounding-level eigenvalues.
    """
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    V = v * np.sqrt(np.clip(w, 0.0, None))
    return np.linalg.svd(V.T @ _SYSY @ V, compute_uv=False)


def concurrence(rho) -> float:
    lam = _flip_roots(_two_qubit_matrix(rho))
    return float(min(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]), 1.0))


def concurrence_of_assistance(rho) -> float:
    lam = _flip_roots(_two_qubit_matrix(rho))
    return float(min(lam.sum(), 1.0))


def renyi_from_concurrence(c: float, alpha: float) -> float:
    """Two-qubit RαE as a function of concurrence, valid for α ≥ 2.

    f_α(C) = log2[((1-√(1-C²))/2)^α + ((1+√(1-C²))/2)^α] / (1-α)
    """
    alpha = check_alpha(alpha)
    if alpha < 2:
        raise ValueError(f"the concurrence map is only used for alpha >= 2, got {alpha}")
    c = float(c)
    if not -1e-12 <= c <= 1 + 1e-12:
        raise ValueError(f"concurrence must lie in [0, 1], got {c}")
    c = min(max(c, 0.0), 1.0)
    s = np.sqrt(1.0 - c * c)
    return renyi_from_spectrum([(1 - s) / 2, (1 + s) / 2], alpha)


def renyi_entanglement_pure(psi: QuantumState, part: PartitionSpec, alpha: float) -> float:
    """S_α of the focus marginal of a pure state."""
    if not psi.is_pure:
        raise StateError("renyi_entanglement_pure needs a pure state vector")
    part.check(psi)
    check_alpha(alpha)
    if len(part.partners) != psi.layout.n - 1:
        raise StateError("pure-state RαE needs the partners to cover every other subsystem")
    return renyi_entropy(partial_trace(psi, [part.focus]), alpha)


def _reduce(rho: QuantumState, part: PartitionSpec) -> QuantumState:
    """Restrict to focus + partners with the focus moved to subsystem 0."""
    part.check(rho)
    keep = sorted((part.focus,) + part.partners)
    if len(keep) < rho.layout.n:
        red = partial_trace(rho, keep)
    else:
        require_valid(rho)
        red = rho
    pos = keep.index(part.focus)
    order = [pos] + [i for i in range(len(keep)) if i != pos]
    if order != list(range(len(keep))):
        red = permute(red, order)
    return red


def _pure_vector(state: QuantumState) -> QuantumState | None:
    """Return a state vector if ``state`` is (numerically) rank one."""
    if state.is_pure:
        return state
    spec = eig_hermitian(state.data, vectors=True)
    if spec.eigenvalues[0] >= 1.0 - PURE_TOL:
        return QuantumState(state.layout, spec.eigenvectors[:, 0], "pure")
    return None


def _roof(rho, part, alpha, opts, maximize, decomposition, analytic=True):
    alpha = check_alpha(alpha)
    opts = opts or RoofOptions()
    if isinstance(rho, QuantumState):
        require_valid(rho)
    red = _reduce(rho, part)
    dA = red.dims[0]
    psi = _pure_vector(red)
    if psi is not None:
        val = renyi_entropy(partial_trace(psi, [0]), alpha)
        return RoofResult(val, Decomposition.trivial(psi), "pure", ensemble_value=val, reduced=red)
    m = red.data
    if analytic and not maximize and red.dims == (2, 2) and alpha >= 2:
        val = renyi_from_concurrence(concurrence(m), alpha)
        res = RoofResult(val, None, "analytic", reduced=red)
        if decomposition:
            search = roof_search(m, red.dims, dA, alpha, opts, maximize=False)
            res.decomposition = search.decomposition
            res.ensemble_value = search.value
            res.restarts = search.restarts
            res.converged = search.converged
        return res
    search = roof_search(m, red.dims, dA, alpha, opts, maximize=maximize)
    res = RoofResult(
        search.value,
        search.decomposition,
        "roof",
        bound="lower" if maximize else "upper",
        converged=search.converged,
        restarts=search.restarts,
        ensemble_value=search.value,
        reduced=red,
    )
    if not search.converged:
        res.notes.append("no restart converged within max_iters")
    return res


def renyi_entanglement(
    rho: QuantumState,
    part: PartitionSpec,
    alpha: float,
    opts: RoofOptions | None = None,
    decomposition: bool = True,
    analytic: bool = True,
) -> RoofResult:
    """RαE of ``rho`` across focus | partners (convex-roof minimum).

    Rank-one inputs use the pure-state formula; two-qubit inputs with α ≥ 2
    use the concurrence map. Otherwise the value comes from the roof search
    and is an upper bound on the true minimum. ``decomposition=False`` skips
    the search on the analytic path when only the value is needed;
    ``analytic=False`` forces the roof search for two-qubit inputs.
    """
    return _roof(rho, part, alpha, opts, False, decomposition, analytic)


def renyi_assistance(
    rho: QuantumState,
    part: PartitionSpec,
    alpha: float,
    opts: RoofOptions | None = None,
) -> RoofResult:
    """RαEoA (convex-roof maximum); search values are lower bounds."""
    return _roof(rho, part, alpha, opts, True, True)
