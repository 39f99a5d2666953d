import json

import numpy as np
import pytest

from renyimono.qcore import (
    QuantumState,
    StateError,
    SystemLayout,
    eig_hermitian,
    load_state,
    partial_trace,
    permute,
    save_state,
    state_from_json,
    state_to_json,
    tensor,
    to_density,
    validate,
)
from renyimono.states import antisym3, random_mixed, random_pure, w_state

from conftest import random_density

BELL = QuantumState.pure(np.array([1, 0, 0, 1]) / np.sqrt(2), [2, 2])


def test_layout_invariants():
    assert SystemLayout((2, 3, 2)).total_dim == 12
    with pytest.raises(StateError):
        SystemLayout((2, 1))
    with pytest.raises(StateError):
        SystemLayout((2, 2), labels=("a",))


def test_validate_bell_passes():
    assert validate(BELL).ok


def test_validate_reports_trace_deviation():
    res = validate(QuantumState.density(np.diag([0.25, 0.25]), [2]))
    assert not res.ok
    assert any("trace deviation 0.5" in v for v in res.violations)


def test_validate_clip_band_note():
    rho = np.diag([0.6, 0.4 + 1e-12, -1e-12])
    res = validate(QuantumState.density(rho, [3]))
    assert res.ok
    assert res.clip_eligible and res.notes


def test_validate_rejects_large_negative_and_non_hermitian():
    assert not validate(QuantumState.density(np.diag([1.1, -0.1]), [2])).ok
    m = np.array([[0.5, 0.1], [0.3, 0.5]])
    assert not validate(QuantumState.density(m, [2])).ok


def test_shape_mismatch_is_rejected():
    with pytest.raises(StateError):
        QuantumState.pure(np.ones(3), [2, 2])


def test_to_density():
    zero = QuantumState.pure([1, 0], [2])
    np.testing.assert_allclose(to_density(zero).data, np.diag([1, 0]))
    plus = QuantumState.pure(np.array([1, 1]) / np.sqrt(2), [2])
    np.testing.assert_allclose(to_density(plus).data, np.full((2, 2), 0.5))
    rho = QuantumState.density(np.eye(2) / 2, [2])
    assert to_density(rho) is rho


def test_tensor_basis_and_mixed():
    zero = QuantumState.pure([1, 0], [2])
    one = QuantumState.pure([0, 1], [2])
    ket = tensor(zero, one)
    assert ket.dims == (2, 2) and ket.is_pure
    np.testing.assert_allclose(ket.data, [0, 1, 0, 0])
    half = QuantumState.density(np.eye(2) / 2, [2])
    np.testing.assert_allclose(tensor(half, half).data, np.eye(4) / 4)
    # mixed kinds promote to density
    assert tensor(zero, half).kind == "density"


def test_tensor_dimension_cap():
    a = random_pure([2] * 6, 1)
    with pytest.raises(StateError):
        tensor(a, a, max_dim=1024)


def test_partial_trace_examples():
    np.testing.assert_allclose(partial_trace(BELL, [0]).data, np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(partial_trace(w_state(3), [0]).data, np.diag([2 / 3, 1 / 3]), atol=1e-15)
    rho = random_mixed([2], 2, 3)
    sigma = random_mixed([3], 3, 4)
    np.testing.assert_allclose(partial_trace(tensor(rho, sigma), [0]).data, rho.data, atol=1e-10)


def test_w_marginal_matches_direct_expansion():
    # oracle: accumulate |amplitude|^2 by the first qubit's value, off-diagonals by pairing
    psi = w_state(3).data
    acc = np.zeros((2, 2), dtype=complex)
    for a in range(2):
        for b in range(2):
            for rest in range(4):
                acc[a, b] += psi[4 * a + rest] * np.conj(psi[4 * b + rest])
    np.testing.assert_allclose(acc, np.diag([2 / 3, 1 / 3]), atol=1e-15)


def test_partial_trace_errors():
    with pytest.raises(StateError):
        partial_trace(BELL, [])
    with pytest.raises(StateError):
        partial_trace(BELL, [2])


def test_partial_trace_keeps_relative_order(rng):
    a, b, c = (random_mixed([d], d, s) for d, s in ((2, 1), (3, 2), (2, 3)))
    abc = tensor(tensor(a, b), c)
    ac = partial_trace(abc, [2, 0])
    assert ac.dims == (2, 2)
    np.testing.assert_allclose(ac.data, np.kron(a.data, c.data), atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_partial_trace_properties(seed):
    rng = np.random.default_rng(seed)
    dims = [2, 3, 2]
    rho = QuantumState.density(random_density(rng, 12, 3), dims)
    for keep in ([0], [1], [2], [0, 2], [1, 2], [0, 1, 2]):
        assert abs(np.trace(partial_trace(rho, keep).data) - 1) < 1e-10
    # pure and density routes agree
    psi = random_pure(dims, seed)
    np.testing.assert_allclose(
        partial_trace(psi, [0, 2]).data, partial_trace(to_density(psi), [0, 2]).data, atol=1e-12
    )


def test_tensor_associative(rng):
    a, b, c = (QuantumState.density(random_density(rng, d), [d]) for d in (2, 3, 2))
    left = tensor(tensor(a, b), c).data
    right = tensor(a, tensor(b, c)).data
    assert np.max(np.abs(left - right)) < 1e-12


def test_permute_roundtrip():
    psi = random_pure([2, 3, 2], 5)
    p = permute(psi, [2, 0, 1])
    assert p.dims == (2, 2, 3)
    back = permute(p, [1, 2, 0])
    np.testing.assert_allclose(back.data, psi.data)
    rho = to_density(psi)
    np.testing.assert_allclose(permute(rho, [2, 0, 1]).data, to_density(p).data, atol=1e-14)


def test_eig_hermitian_examples():
    np.testing.assert_allclose(eig_hermitian(np.eye(3) / 3).eigenvalues, [1 / 3] * 3)
    psi = random_pure([4], 2).data
    np.testing.assert_allclose(eig_hermitian(np.outer(psi, psi.conj())).eigenvalues, [1, 0, 0, 0], atol=1e-12)
    w = eig_hermitian(np.diag([0.7, 0.3 + 1e-12, -1e-12])).eigenvalues
    assert w[-1] == 0.0
    assert abs(w.sum() - 1) < 1e-15
    np.testing.assert_allclose(w, [0.7, 0.3, 0.0], atol=1e-11)


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(StateError):
        eig_hermitian(np.array([[1.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("seed", range(10))
def test_spectrum_of_densities(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 9))
    w = eig_hermitian(random_density(rng, d, int(rng.integers(1, d + 1)))).eigenvalues
    assert np.all(np.diff(w) <= 1e-15)
    assert np.all((w >= 0) & (w <= 1 + 1e-12))
    assert abs(w.sum() - 1) < 1e-8


def test_json_roundtrip_exact(tmp_path):
    for state in (antisym3(), random_mixed([2, 3], 2, 9), random_pure([2, 2], 1)):
        path = tmp_path / "s.json"
        save_state(state, path)
        back = load_state(path)
        assert back.kind == state.kind and back.dims == state.dims
        assert np.array_equal(back.data, state.data)


def test_json_schema_errors():
    good = state_to_json(BELL)
    bad = dict(good, kind="density")
    with pytest.raises(StateError, match="entries"):
        state_from_json(bad)
    rho = QuantumState.density(np.diag([0.45, 0.45]), [2])
    with pytest.raises(StateError, match="trace"):
        state_from_json(json.loads(json.dumps(state_to_json(rho))))
    with pytest.raises(StateError, match="malformed"):
        state_from_json({"dims": [2]})
