"""Dense states over tensor-product Hilbert spaces.

States are stored as plain numpy arrays together with the list of subsystem
dimensions. Basis ordering is the usual Kronecker (row-major) ordering, with
subsystem 0 as the most significant index.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MAX_TOTAL_DIM = 4096

NORM_TOL = 1e-9
HERMITIAN_TOL = 1e-9
TRACE_TOL = 1e-9
CLIP_TOL = 1e-9


class StateError(ValueError):
    """Raised when a state fails validation or an operation gets bad input."""


@dataclass(frozen=True)
class SystemLayout:
    dims: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise StateError("layout needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise StateError(f"every subsystem dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != len(dims):
                raise StateError("labels and dims differ in length")
            object.__setattr__(self, "labels", labels)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    def check_indices(self, indices: Iterable[int]) -> None:
        for i in indices:
            if not 0 <= i < self.n:
                raise StateError(f"subsystem index {i} out of range for {self.n} subsystems")

    def concat(self, other: SystemLayout) -> SystemLayout:
        labels = None
        if self.labels is not None and other.labels is not None:
            labels = self.labels + other.labels
        return SystemLayout(self.dims + other.dims, labels)

    def select(self, indices: Sequence[int]) -> SystemLayout:
        labels = None if self.labels is None else tuple(self.labels[i] for i in indices)
        return SystemLayout(tuple(self.dims[i] for i in indices), labels)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A pure amplitude vector or a density matrix on a :class:`SystemLayout`.

    Construction only checks shapes. Use :func:`validate` for the physical
    invariants (normalisation, hermiticity, positivity).
    """

    layout: SystemLayout
    data: np.ndarray
    kind: str = "pure"

    def __post_init__(self):
        if not isinstance(self.layout, SystemLayout):
            object.__setattr__(self, "layout", SystemLayout(tuple(self.layout)))
        if self.kind not in ("pure", "density"):
            raise StateError(f"unknown state kind {self.kind!r}")
        D = self.layout.total_dim
        if D > MAX_TOTAL_DIM:
            raise StateError(f"total dimension {D} exceeds the cap {MAX_TOTAL_DIM}")
        data = np.asarray(self.data, dtype=np.complex128)
        expected = (D,) if self.kind == "pure" else (D, D)
        if data.shape != expected:
            raise StateError(
                f"{self.kind} state on dims {self.layout.dims} needs shape {expected}, got {data.shape}"
            )
        object.__setattr__(self, "data", data)

    @classmethod
    def pure(cls, vector, dims: Sequence[int]) -> QuantumState:
        return cls(SystemLayout(tuple(dims)), np.asarray(vector, dtype=np.complex128), "pure")

    @classmethod
    def density(cls, matrix, dims: Sequence[int]) -> QuantumState:
        return cls(SystemLayout(tuple(dims)), np.asarray(matrix, dtype=np.complex128), "density")

    @property
    def dims(self) -> tuple[int, ...]:
        return self.layout.dims

    @property
    def is_pure(self) -> bool:
        return self.kind == "pure"

    def matrix(self) -> np.ndarray:
        """Density matrix of the state (computed for pure states)."""
        if self.kind == "density":
            return self.data
        return np.outer(self.data, self.data.conj())

    def __repr__(self):
        return f"QuantumState(kind={self.kind!r}, dims={self.dims})"


@dataclass
class ValidationResult:
    ok: bool
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    clip_eligible: bool = False

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None


def validate(state: QuantumState) -> ValidationResult:
    """Check normalisation (pure) or hermiticity, trace and positivity (density)."""
    res = ValidationResult(ok=True)
    if state.kind == "pure":
        dev = abs(np.linalg.norm(state.data) - 1.0)
        if dev > NORM_TOL:
            res.violations.append(f"norm deviation {dev:.3g}")
    else:
        rho = state.data
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        if herm > HERMITIAN_TOL:
            res.violations.append(f"hermiticity deviation {herm:.3g}")
        tr = np.trace(rho)
        dev = abs(tr - 1.0)
        if dev > TRACE_TOL:
            res.violations.append(f"trace deviation {dev:.3g}")
        if herm <= HERMITIAN_TOL:
            w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
            lo = float(w[0])
            if lo < -CLIP_TOL:
                res.violations.append(f"negative eigenvalue {lo:.3g}")
            elif lo < 0:
                res.clip_eligible = True
                res.notes.append(f"eigenvalue {lo:.3g} within clip band")
    res.ok = not res.violations
    return res


def require_valid(state: QuantumState) -> None:
    res = validate(state)
    if not res.ok:
        raise StateError("invalid state: " + "; ".join(res.violations))


def to_density(state: QuantumState) -> QuantumState:
    require_valid(state)
    if state.kind == "density":
        return state
    return QuantumState(state.layout, state.matrix(), "density")


def tensor(a: QuantumState, b: QuantumState, max_dim: int = MAX_TOTAL_DIM) -> QuantumState:
    """Kronecker product; mixed kinds are promoted to density matrices."""
    require_valid(a)
    require_valid(b)
    D = a.layout.total_dim * b.layout.total_dim
    if D > max_dim:
        raise StateError(f"tensor product dimension {D} exceeds the cap {max_dim}")
    layout = a.layout.concat(b.layout)
    if a.kind == b.kind == "pure":
        return QuantumState(layout, np.kron(a.data, b.data), "pure")
    return QuantumState(layout, np.kron(a.matrix(), b.matrix()), "density")


def partial_trace(state: QuantumState, keep: Iterable[int]) -> QuantumState:
    """Reduced density matrix on ``keep``, in the original relative order."""
    keep = sorted(set(int(i) for i in keep))
    if not keep:
        raise StateError("partial trace needs a nonempty keep set")
    state.layout.check_indices(keep)
    require_valid(state)
    dims = state.dims
    n = len(dims)
    rest = [i for i in range(n) if i not in keep]
    dk = math.prod(dims[i] for i in keep)
    layout = state.layout.select(keep)
    if state.kind == "pure":
        psi = state.data.reshape(dims).transpose(keep + rest).reshape(dk, -1)
        rho = psi @ psi.conj().T
    else:
        t = state.data.reshape(dims + dims)
        perm = keep + rest + [n + i for i in keep] + [n + i for i in rest]
        dr = math.prod(dims[i] for i in rest)
        t = t.transpose(perm).reshape(dk, dr, dk, dr)
        rho = np.einsum("ajbj->ab", t)
    return QuantumState(layout, rho, "density")


def permute(state: QuantumState, order: Sequence[int]) -> QuantumState:
    """Reorder subsystems so that new subsystem ``i`` is old subsystem ``order[i]``."""
    order = list(order)
    if sorted(order) != list(range(state.layout.n)):
        raise StateError(f"{order} is not a permutation of the subsystems")
    dims = state.dims
    layout = state.layout.select(order)
    D = state.layout.total_dim
    if state.kind == "pure":
        return QuantumState(layout, state.data.reshape(dims).transpose(order).reshape(D), "pure")
    n = len(dims)
    t = state.data.reshape(dims + dims).transpose(order + [n + i for i in order])
    return QuantumState(layout, t.reshape(D, D), "density")


def eig_hermitian(matrix, vectors: bool = False) -> Spectrum:
    """Descending spectrum of a Hermitian matrix.

    Eigenvalues in the clip band ``[-1e-9, 0)`` are set to zero; if the input
    has unit trace the clipped spectrum is renormalised to unit sum.
    """
    if isinstance(matrix, QuantumState):
        matrix = matrix.matrix()
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StateError(f"expected a square matrix, got shape {m.shape}")
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if dev > HERMITIAN_TOL:
        raise StateError(f"matrix is not Hermitian (deviation {dev:.3g})")
    m = 0.5 * (m + m.conj().T)
    if vectors:
        w, v = np.linalg.eigh(m)
        w, v = w[::-1], v[:, ::-1]
    else:
        w, v = np.linalg.eigvalsh(m)[::-1], None
    w = w.copy()
    band = (w < 0) & (w >= -CLIP_TOL)
    if band.any():
        w[band] = 0.0
        if abs(np.trace(m).real - 1.0) <= TRACE_TOL:
            w /= w.sum()
    return Spectrum(w, v)


# -- state files ------------------------------------------------------------

def state_to_json(state: QuantumState) -> dict:
    flat = state.data.reshape(-1)
    return {
        "dims": list(state.dims),
        "kind": state.kind,
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def state_from_json(obj: dict) -> QuantumState:
    """Parse the JSON state schema; raises :class:`StateError` on any mismatch."""
    try:
        dims = [int(d) for d in obj["dims"]]
        kind = obj["kind"]
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise StateError(f"malformed state file: {exc}") from None
    if kind not in ("pure", "density"):
        raise StateError(f"malformed state file: unknown kind {kind!r}")
    D = math.prod(dims)
    expected = D if kind == "pure" else D * D
    if len(data) != expected:
        raise StateError(f"malformed state file: {kind} data needs {expected} entries, got {len(data)}")
    try:
        arr = np.array([complex(float(re), float(im)) for re, im in data], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise StateError(f"malformed state file: {exc}") from None
    if kind == "density":
        arr = arr.reshape(D, D)
    state = QuantumState(SystemLayout(tuple(dims)), arr, kind)
    require_valid(state)
    return state


def save_state(state: QuantumState, path) -> None:
    Path(path).write_text(json.dumps(state_to_json(state)) + "\n", encoding="utf-8")


def load_state(path) -> QuantumState:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise StateError(f"malformed state file {path}: {exc}") from None
    return state_from_json(obj)
