"""Named states, seeded random states and the ``--state`` flag grammar.

Kets written 1-indexed in the literature (|1⟩, |2⟩, |3⟩) are shifted down by
one here, so the W state is (|100⟩ + |010⟩ + |001⟩)/√3 and the qutrit
counterexample is the totally antisymmetric state Σ ε_abc |abc⟩ / √6 over
|0⟩, |1⟩, |2⟩.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .qcore import (
    QuantumState,
    StateError,
    load_state,
    partial_trace,
    save_state,
    tensor,
)

KINDS = ("ghz", "w", "antisym3", "random_pure", "random_mixed", "file")

__all__ = [
    "StateSpec",
    "make",
    "ghz",
    "w_state",
    "antisym3",
    "random_pure",
    "random_mixed",
    "embed_ancilla",
    "parse_state_flag",
    "load",
    "save",
]


@dataclass(frozen=True)
class StateSpec:
    kind: str
    n: int | None = None
    dims: tuple[int, ...] | None = None
    rank: int | None = None
    seed: int | None = None
    path: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise StateError(f"unknown state kind {self.kind!r}")
        if self.dims is not None:
            object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if self.kind in ("ghz", "w"):
            if self.n is None or self.n < 2:
                raise StateError(f"{self.kind} needs n >= 2 subsystems")
        elif self.kind in ("random_pure", "random_mixed"):
            if not self.dims:
                raise StateError(f"{self.kind} needs dims")
            if self.seed is None:
                raise StateError(f"{self.kind} needs a seed")
            if self.kind == "random_mixed" and (self.rank is None or self.rank < 1):
                raise StateError("random_mixed needs rank >= 1")
        elif self.kind == "file" and not self.path:
            raise StateError("file state needs a path")

    def with_seed(self, seed: int) -> StateSpec:
        return StateSpec(self.kind, self.n, self.dims, self.rank, seed, self.path)

    @property
    def is_random(self) -> bool:
        return self.kind in ("random_pure", "random_mixed")


def ghz(n: int) -> QuantumState:
    psi = np.zeros(2**n, dtype=np.complex128)
    psi[0] = psi[-1] = 1 / math.sqrt(2)
    return QuantumState.pure(psi, [2] * n)


def w_state(n: int) -> QuantumState:
    psi = np.zeros(2**n, dtype=np.complex128)
    for i in range(n):
        psi[1 << (n - 1 - i)] = 1 / math.sqrt(n)
    return QuantumState.pure(psi, [2] * n)


def antisym3() -> QuantumState:
    psi = np.zeros(27, dtype=np.complex128)
    for perm in itertools.permutations(range(3)):
        inversions = sum(perm[i] > perm[j] for i in range(3) for j in range(i + 1, 3))
        a, b, c = perm
        psi[9 * a + 3 * b + c] = (-1) ** inversions / math.sqrt(6)
    return QuantumState.pure(psi, [3, 3, 3])


def random_pure(dims, seed: int) -> QuantumState:
    """Haar-random state: a normalised standard complex Gaussian vector."""
    D = math.prod(dims)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(D) + 1j * rng.standard_normal(D)
    return QuantumState.pure(z / np.linalg.norm(z), dims)


def random_mixed(dims, rank: int, seed: int) -> QuantumState:
    """Marginal of a Haar-random pure state on system ⊗ C^rank."""
    dims = list(dims)
    if rank == 1:
        return QuantumState.density(random_pure(dims, seed).matrix(), dims)
    big = random_pure(dims + [rank], seed)
    return partial_trace(big, range(len(dims)))


def make(spec: StateSpec) -> QuantumState:
    if spec.kind == "ghz":
        return ghz(spec.n)
    if spec.kind == "w":
        return w_state(spec.n)
    if spec.kind == "antisym3":
        return antisym3()
    if spec.kind == "random_pure":
        return random_pure(spec.dims, spec.seed)
    if spec.kind == "random_mixed":
        return random_mixed(spec.dims, spec.rank, spec.seed)
    return load_state(spec.path)


def embed_ancilla(rho: QuantumState, sigma: QuantumState | None) -> QuantumState:
    """Γ = ρ ⊗ σ; with ``sigma=None`` (a trivial factor) ``rho`` comes back as is."""
    if sigma is None:
        return rho
    return tensor(rho, sigma)


def load(path) -> QuantumState:
    return load_state(path)


def save(state: QuantumState, path) -> None:
    save_state(state, path)


def _parse_params(text: str) -> dict:
    """Parse ``dims=2,2,2,seed=7`` style key lists (bare items extend the last key)."""
    out: dict[str, list[str]] = {}
    key = None
    for tok in filter(None, text.split(",")):
        if "=" in tok:
            key, val = tok.split("=", 1)
            out[key.strip()] = [val.strip()] if val.strip() else []
        elif key is None:
            raise StateError(f"cannot parse state parameters {text!r}")
        else:
            out[key].append(tok.strip())
    return out


def parse_state_flag(text: str, default_seed: int | None = None) -> StateSpec:
    """Parse the ``--state`` grammar.

    ``ghz:N``, ``w:N``, ``antisym3``, ``random-pure:dims=2,2,2,seed=7``,
    ``random-mixed:dims=2,2,rank=2,seed=3``, ``file:PATH``. Random kinds
    without an explicit seed take ``default_seed``.
    """
    head, _, rest = text.partition(":")
    head = head.strip().lower().replace("-", "_")
    try:
        if head in ("ghz", "w"):
            return StateSpec(head, n=int(rest))
        if head == "antisym3":
            return StateSpec("antisym3")
        if head == "file":
            return StateSpec("file", path=rest)
        if head in ("random_pure", "random_mixed"):
            p = _parse_params(rest)
            unknown = set(p) - {"dims", "seed", "rank"}
            if unknown:
                raise StateError(f"unknown state parameters {sorted(unknown)}")
            dims = tuple(int(d) for d in p.get("dims", []))
            seed = int(p["seed"][0]) if "seed" in p else default_seed
            rank = int(p["rank"][0]) if "rank" in p else (None if head == "random_pure" else 2)
            return StateSpec(head, dims=dims, rank=rank, seed=seed)
    except (ValueError, IndexError) as exc:
        raise StateError(f"cannot parse state flag {text!r}: {exc}") from None
    raise StateError(f"unknown state kind in {text!r}")
